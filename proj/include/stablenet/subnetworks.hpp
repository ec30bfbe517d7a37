#pragma once

// leaf removal and everything built on it: induced subnetworks, trinets,
// triplets, sub-MUL-trees and MUL-triplets

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "stablenet/canonical.hpp"
#include "stablenet/core.hpp"
#include "stablenet/unfold.hpp"
#include "stablenet/xsets.hpp"

namespace stablenet {

namespace detail {

// after deleting leaves: drop unlabelled dead ends (hybrids per the rule,
// tree vertices for the same reason), suppress pass-through tree vertices,
// and collapse an out-degree-one root onto its child
inline void normalize_leaf_removal(lnet& n) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (vertex_id v : n.g.vertices()) {
      if (!n.g.vertex_alive(v) || n.label.count(v)) continue;
      if (v == n.g.root) {
        if (n.g.outdeg(v) == 1) {
          vertex_id c = n.g.children(v)[0];
          n.g.remove_vertex(v);
          n.g.root = c;
          changed = true;
        }
      } else if (n.g.outdeg(v) == 0) {
        n.g.remove_vertex(v);
        changed = true;
      } else if (n.g.indeg(v) == 1 && n.g.outdeg(v) == 1) {
        n.g.suppress_vertex(v);
        changed = true;
      }
    }
  }
}

}  // namespace detail

// delete every leaf carrying the taxon, then renormalize; works for networks
// (one leaf) and MUL-trees (all of mu(x)) alike
inline lnet remove_taxon(const lnet& n, const std::string& x) {
  std::vector<std::string> before = n.taxa();
  if (std::find(before.begin(), before.end(), x) == before.end())
    throw std::out_of_range("unknown taxon " + x);
  if (before.size() < 2)
    throw std::invalid_argument("removing the last taxon leaves no leaves");
  lnet out = n;
  std::vector<vertex_id> doomed;
  for (const auto& [v, label] : out.label)
    if (label == x) doomed.push_back(v);
  for (vertex_id v : doomed) {
    out.g.remove_vertex(v);
    out.label.erase(v);
  }
  detail::normalize_leaf_removal(out);
  return out;
}

namespace detail {

inline void check_taxon_subset(const lnet& n, const std::vector<std::string>& y) {
  std::vector<std::string> xs = n.taxa();
  for (const std::string& x : y)
    if (std::find(xs.begin(), xs.end(), x) == xs.end())
      throw std::invalid_argument("taxon " + x + " is not in the network");
}

}  // namespace detail

inline xnetwork induced_subnetwork(const xnetwork& n, std::vector<std::string> y) {
  if (y.size() < 3) throw std::invalid_argument("induced subnetworks keep three or more taxa");
  detail::check_taxon_subset(n, y);
  std::sort(y.begin(), y.end());
  xnetwork out = n;
  for (const std::string& x : n.taxa())
    if (!std::binary_search(y.begin(), y.end(), x)) out = remove_taxon(out, x);
  return out;
}

inline mul_tree restrict_multree(const mul_tree& m, std::vector<std::string> y) {
  if (y.empty()) throw std::invalid_argument("restriction needs at least one taxon");
  detail::check_taxon_subset(m, y);
  std::sort(y.begin(), y.end());
  mul_tree out = m;
  for (const std::string& x : m.taxa())
    if (!std::binary_search(y.begin(), y.end(), x)) out = remove_taxon(out, x);
  return out;
}

inline std::map<std::vector<std::string>, xnetwork> trinets(const xnetwork& n) {
  std::vector<std::string> xs = n.taxa();
  if (xs.size() < 3) throw std::invalid_argument("trinets need three or more taxa");
  std::map<std::vector<std::string>, xnetwork> out;
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i + 1; j < xs.size(); ++j)
      for (std::size_t k = j + 1; k < xs.size(); ++k) {
        std::vector<std::string> y{xs[i], xs[j], xs[k]};
        out[y] = induced_subnetwork(n, y);
      }
  return out;
}

inline bool displays_trinet(const xnetwork& n, const xnetwork& tau) {
  if (tau.taxa().size() != 3) throw std::invalid_argument("a trinet has exactly three taxa");
  std::vector<std::string> xs = n.taxa();
  for (const std::string& x : tau.taxa())
    if (std::find(xs.begin(), xs.end(), x) == xs.end()) return false;
  return xnetwork_isomorphic(induced_subnetwork(n, tau.taxa()), tau);
}

// triplet ab|c as a fresh three-leaf tree
inline phylo_tree triplet_tree(const std::string& a, const std::string& b,
                               const std::string& c) {
  phylo_tree t;
  vertex_id root = t.g.add_vertex(), pair = t.g.add_vertex();
  vertex_id la = t.g.add_vertex(), lb = t.g.add_vertex(), lc = t.g.add_vertex();
  t.g.root = root;
  t.g.add_arc(root, pair);
  t.g.add_arc(root, lc);
  t.g.add_arc(pair, la);
  t.g.add_arc(pair, lb);
  t.label = {{la, a}, {lb, b}, {lc, c}};
  return t;
}

inline std::string triplet_code(const std::string& a, const std::string& b,
                                const std::string& c) {
  return std::min(a, b) + "," + std::max(a, b) + "|" + c;
}

// triplets displayed by a network (or tree): an embedded subdivision of ab|c
inline std::set<std::string> triplets(const xnetwork& n,
                                      std::size_t budget = default_search_budget) {
  std::vector<std::string> xs = n.taxa();
  std::set<std::string> out;
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i + 1; j < xs.size(); ++j)
      for (std::size_t k = j + 1; k < xs.size(); ++k) {
        const std::string &a = xs[i], &b = xs[j], &c = xs[k];
        if (displays(n, triplet_tree(a, b, c), budget)) out.insert(triplet_code(a, b, c));
        if (displays(n, triplet_tree(a, c, b), budget)) out.insert(triplet_code(a, c, b));
        if (displays(n, triplet_tree(b, c, a), budget)) out.insert(triplet_code(b, c, a));
      }
  return out;
}

namespace detail {

// subtree spanned by three leaves, suppressed; the shape a deletion-derived
// three-leaf MUL-tree must take
inline mul_tree spanned_triple(const mul_tree& m, vertex_id a, vertex_id b, vertex_id c) {
  vertex_id r = lca(m.g, {a, b, c});
  std::set<vertex_id> vs{r};
  std::set<arc_id> as;
  for (vertex_id leaf : {a, b, c}) {
    vertex_id v = leaf;
    while (v != r) {
      if (!vs.insert(v).second) break;
      arc_id up = m.g.in_arcs(v)[0];
      as.insert(up);
      v = m.g.arc(up).tail;
    }
  }
  mul_tree t = induced_subgraph(m, vs, as, r);
  for (vertex_id v : t.g.vertices())
    if (!t.label.count(v) && t.g.indeg(v) == 1 && t.g.outdeg(v) == 1)
      t.g.suppress_vertex(v);
  return t;
}

}  // namespace detail

// one canonical code per displayed MUL-triplet
inline std::set<std::string> mul_triplets(const mul_tree& m) {
  std::vector<vertex_id> leaves;
  for (const auto& [v, label] : m.label) {
    (void)label;
    leaves.push_back(v);
  }
  std::set<std::string> out;
  for (std::size_t i = 0; i < leaves.size(); ++i)
    for (std::size_t j = i + 1; j < leaves.size(); ++j)
      for (std::size_t k = j + 1; k < leaves.size(); ++k)
        out.insert(canon_code_string(
            detail::spanned_triple(m, leaves[i], leaves[j], leaves[k])));
  return out;
}

inline bool displays_mul_triplet(const mul_tree& m, const mul_tree& tau) {
  if (tau.label.size() != 3) throw std::invalid_argument("a MUL-triplet has three leaves");
  return mul_triplets(m).count(canon_code_string(tau)) > 0;
}

// unfolding commutes with leaf removal
inline bool usupp_check(const xnetwork& n, const std::vector<std::string>& y,
                        std::size_t path_cap = default_path_cap) {
  return multree_isomorphic(unfold(induced_subnetwork(n, y), path_cap).m,
                            restrict_multree(unfold(n, path_cap).m, y));
}

}  // namespace stablenet
