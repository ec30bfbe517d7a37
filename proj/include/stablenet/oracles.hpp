#pragma once

// brute-force ground truth, independent of the folding machinery: displayed
// trees and base trees by switching enumeration, visibility by deletion

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "stablenet/canonical.hpp"
#include "stablenet/core.hpp"

namespace stablenet {

namespace detail {

// delete unlabelled dead ends, suppress pass-through vertices and collapse
// an out-degree-one root until none remain; ids are stable, so the caller
// can still recognise surviving source vertices
inline void restrict_to_taxa(lnet& n) {
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

// one kept in-arc per hybrid; calls visit(excluded arcs) for every choice
template <typename Visit>
void for_each_switching(const lnet& n, long long budget, Visit visit) {
  std::vector<vertex_id> hybrids;
  for (vertex_id v : n.g.vertices())
    if (n.g.is_hybrid(v)) hybrids.push_back(v);
  long long total = 1;
  for (vertex_id h : hybrids) {
    total *= n.g.indeg(h);
    if (total > budget) throw budget_exceeded("switching enumeration");
  }
  std::vector<int> pick(hybrids.size(), 0);
  for (;;) {
    std::vector<arc_id> excluded;
    for (std::size_t i = 0; i < hybrids.size(); ++i) {
      const std::vector<arc_id>& in = n.g.in_arcs(hybrids[i]);
      for (std::size_t k = 0; k < in.size(); ++k)
        if (static_cast<int>(k) != pick[i]) excluded.push_back(in[k]);
    }
    visit(excluded);
    std::size_t i = 0;
    while (i < hybrids.size() && pick[i] + 1 == n.g.indeg(hybrids[i])) pick[i++] = 0;
    if (i == hybrids.size()) break;
    ++pick[i];
  }
}

// subgraph reachable from the root once the excluded arcs are gone,
// restricted to the labelled leaves
inline lnet switching_tree(const lnet& n, const std::vector<arc_id>& excluded) {
  lnet s = n;
  for (arc_id a : excluded) s.g.remove_arc(a);
  std::set<vertex_id> seen{s.g.root};
  std::vector<vertex_id> queue{s.g.root};
  while (!queue.empty()) {
    vertex_id v = queue.back();
    queue.pop_back();
    for (vertex_id c : s.g.children(v))
      if (seen.insert(c).second) queue.push_back(c);
  }
  for (vertex_id v : s.g.vertices())
    if (!seen.count(v)) {
      s.g.remove_vertex(v);
      s.label.erase(v);
    }
  restrict_to_taxa(s);
  return s;
}

}  // namespace detail

// every tree obtained by keeping one in-arc per hybrid and restricting to
// the taxa, one representative per isomorphism class
inline std::vector<phylo_tree> oracle_displayed_trees(
    const xnetwork& n, long long budget = default_search_budget) {
  std::map<std::string, phylo_tree> found;
  detail::for_each_switching(n, budget, [&](const std::vector<arc_id>& excluded) {
    lnet t = detail::switching_tree(n, excluded);
    found.emplace(canon_code_string(t), t);
  });
  std::vector<phylo_tree> out;
  for (auto& [code, t] : found) {
    (void)code;
    out.push_back(std::move(t));
  }
  return out;
}

inline bool oracle_displays(const xnetwork& n, const phylo_tree& t,
                            long long budget = default_search_budget) {
  bool hit = false;
  detail::for_each_switching(n, budget, [&](const std::vector<arc_id>& excluded) {
    if (!hit && multree_isomorphic(detail::switching_tree(n, excluded), t)) hit = true;
  });
  return hit;
}

// displayed with the image of the root of t equal to the root of n: the
// switching tree must still branch at the original root
inline bool oracle_strongly_displays(const xnetwork& n, const phylo_tree& t,
                                     long long budget = default_search_budget) {
  bool hit = false;
  detail::for_each_switching(n, budget, [&](const std::vector<arc_id>& excluded) {
    if (hit) return;
    lnet s = detail::switching_tree(n, excluded);
    if (s.g.root == n.g.root && multree_isomorphic(s, t)) hit = true;
  });
  return hit;
}

namespace detail {

// a switching spans when removing its excluded arcs keeps every vertex
// reachable and each excluded arc leaves a suppressible tree vertex behind
inline bool spanning_switching(const lnet& n, const std::vector<arc_id>& excluded) {
  std::map<vertex_id, int> tail_count;
  for (arc_id a : excluded) {
    vertex_id u = n.g.arc(a).tail;
    if (u == n.g.root || n.g.is_hybrid(u)) return false;
    if (++tail_count[u] > 1) return false;
  }
  std::set<arc_id> cut(excluded.begin(), excluded.end());
  std::set<vertex_id> seen{n.g.root};
  std::vector<vertex_id> queue{n.g.root};
  while (!queue.empty()) {
    vertex_id v = queue.back();
    queue.pop_back();
    for (arc_id a : n.g.out_arcs(v))
      if (!cut.count(a) && seen.insert(n.g.arc(a).head).second)
        queue.push_back(n.g.arc(a).head);
  }
  return static_cast<int>(seen.size()) == n.g.num_vertices();
}

}  // namespace detail

// trees carried by a spanning subdivision, one per isomorphism class
inline std::vector<phylo_tree> oracle_base_trees(
    const xnetwork& n, long long budget = default_search_budget) {
  std::map<std::string, phylo_tree> found;
  detail::for_each_switching(n, budget, [&](const std::vector<arc_id>& excluded) {
    if (!detail::spanning_switching(n, excluded)) return;
    lnet t = detail::switching_tree(n, excluded);
    found.emplace(canon_code_string(t), t);
  });
  std::vector<phylo_tree> out;
  for (auto& [code, t] : found) {
    (void)code;
    out.push_back(std::move(t));
  }
  return out;
}

inline bool oracle_is_base_tree(const xnetwork& n, const phylo_tree& t,
                                long long budget = default_search_budget) {
  bool hit = false;
  detail::for_each_switching(n, budget, [&](const std::vector<arc_id>& excluded) {
    if (hit || !detail::spanning_switching(n, excluded)) return;
    if (multree_isomorphic(detail::switching_tree(n, excluded), t)) hit = true;
  });
  return hit;
}

inline bool oracle_is_tree_based(const xnetwork& n,
                                 long long budget = default_search_budget) {
  bool hit = false;
  detail::for_each_switching(n, budget, [&](const std::vector<arc_id>& excluded) {
    if (!hit && detail::spanning_switching(n, excluded)) hit = true;
  });
  return hit;
}

// v is visible when some taxon becomes unreachable without it
inline bool oracle_is_visible(const xnetwork& n, vertex_id v) {
  if (v == n.g.root) return true;
  digraph g = n.g;
  g.remove_vertex(v);
  std::set<vertex_id> seen{g.root};
  std::vector<vertex_id> queue{g.root};
  while (!queue.empty()) {
    vertex_id w = queue.back();
    queue.pop_back();
    for (vertex_id c : g.children(w))
      if (seen.insert(c).second) queue.push_back(c);
  }
  for (const auto& [x, leaves] : n.mu()) {
    (void)x;
    bool reachable = false;
    for (vertex_id leaf : leaves)
      if (leaf != v && seen.count(leaf)) reachable = true;
    if (!reachable) return true;
  }
  return false;
}

inline bool oracle_is_reticulation_visible(const xnetwork& n) {
  for (vertex_id v : n.g.vertices())
    if (n.g.is_hybrid(v) && !oracle_is_visible(n, v)) return false;
  return true;
}

// definition scan: every non-leaf vertex has a child that is a tree vertex
inline bool oracle_is_tree_child(const xnetwork& n) {
  for (vertex_id v : n.g.vertices()) {
    if (n.g.is_leaf(v)) continue;
    bool ok = false;
    for (vertex_id c : n.g.children(v))
      if (n.g.is_tree_vertex(c)) ok = true;
    if (!ok) return false;
  }
  return true;
}

}  // namespace stablenet
