#pragma once

// seeded random networks and MUL-trees for the cross-check suites

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "stablenet/core.hpp"
#include "stablenet/foldup.hpp"
#include "stablenet/unfold.hpp"
#include "stablenet/xsets.hpp"

namespace stablenet {

namespace detail {

// uniform_int_distribution varies across standard libraries; keep draws
// reproducible with a plain reduction
inline int rand_below(std::mt19937_64& rng, int n) {
  return static_cast<int>(rng() % static_cast<std::uint64_t>(n));
}

inline arc_id random_arc(const digraph& g, std::mt19937_64& rng) {
  std::vector<arc_id> as = g.arcs();
  return as[rand_below(rng, static_cast<int>(as.size()))];
}

}  // namespace detail

struct network_params {
  int taxa = 5;
  int reticulations = 2;
};

// random binary phylogenetic network: a random binary tree on the taxa, then
// each reticulation subdivides two arcs and joins them tail to head
inline xnetwork gen_network(const network_params& p, std::mt19937_64& rng) {
  if (p.taxa < 3) throw std::invalid_argument("need at least three taxa");
  lnet n;
  vertex_id root = n.g.add_vertex();
  n.g.root = root;
  for (int k = 1; k <= 2; ++k) {
    vertex_id leaf = n.g.add_vertex();
    n.g.add_arc(root, leaf);
    n.label[leaf] = std::to_string(k);
  }
  for (int k = 3; k <= p.taxa; ++k) {
    vertex_id w = n.g.subdivide_arc(detail::random_arc(n.g, rng));
    vertex_id leaf = n.g.add_vertex();
    n.g.add_arc(w, leaf);
    n.label[leaf] = std::to_string(k);
  }
  for (int r = 0; r < p.reticulations; ++r) {
    bool placed = false;
    for (int attempt = 0; attempt < 200 && !placed; ++attempt) {
      arc_id a = detail::random_arc(n.g, rng);
      arc_id b = detail::random_arc(n.g, rng);
      if (a == b) continue;
      // a path from the head of b back to the tail of a would close a cycle
      if (is_below(n.g, n.g.arc(a).tail, n.g.arc(b).head)) continue;
      vertex_id s = n.g.subdivide_arc(a);
      vertex_id t = n.g.subdivide_arc(b);
      n.g.add_arc(s, t);
      placed = true;
    }
    if (!placed) throw std::runtime_error("could not place a reticulation");
  }
  return n;
}

// fold the unfolding: when the result is a phylogenetic network it is stable;
// resample until that happens and the X-set count stays tractable
inline xnetwork gen_stable_network(const network_params& p, std::mt19937_64& rng,
                                   long long max_xsets = 5000,
                                   long long path_cap = default_path_cap) {
  for (int attempt = 0; attempt < 500; ++attempt) {
    xnetwork n = gen_network(p, rng);
    unfold_result u = unfold(n, path_cap);
    if (count_xsets(u.m) > static_cast<std::size_t>(max_xsets)) continue;
    fold_result f = fold_up(u.m);
    if (!validate_phylo_network(f.net).ok()) continue;
    return f.net;
  }
  throw std::runtime_error("could not stabilise a network for these parameters");
}

// random binary MUL-tree: a random binary shape whose first draws cover every
// taxon once, with extra leaves labelled uniformly
inline mul_tree gen_multree(int taxa, int extra_leaves, std::mt19937_64& rng) {
  if (taxa < 2) throw std::invalid_argument("need at least two taxa");
  int total = taxa + extra_leaves;
  lnet m;
  vertex_id root = m.g.add_vertex();
  m.g.root = root;
  std::vector<vertex_id> leaves;
  for (int k = 0; k < 2; ++k) {
    vertex_id leaf = m.g.add_vertex();
    m.g.add_arc(root, leaf);
    leaves.push_back(leaf);
  }
  while (static_cast<int>(leaves.size()) < total) {
    vertex_id w = m.g.subdivide_arc(detail::random_arc(m.g, rng));
    vertex_id leaf = m.g.add_vertex();
    m.g.add_arc(w, leaf);
    leaves.push_back(leaf);
  }
  std::vector<std::string> names;
  for (int k = 1; k <= taxa; ++k) names.push_back(std::to_string(k));
  for (int i = taxa - 1; i > 0; --i)
    std::swap(names[i], names[detail::rand_below(rng, i + 1)]);
  for (int i = 0; i < total; ++i)
    m.label[leaves[i]] =
        i < taxa ? names[i] : std::to_string(1 + detail::rand_below(rng, taxa));
  return m;
}

inline phylo_tree gen_tree(int taxa, std::mt19937_64& rng) {
  return gen_multree(taxa, 0, rng);
}

}  // namespace stablenet
