#pragma once

// Folding a MUL-tree up into a network. Each round finds the hanging trees
// (pendant subtrees sitting below a single in-arc), groups them by
// isomorphism, keeps the classes with at least two members, and merges one
// maximal such class: the member roots are replaced by a single hybrid
// vertex that inherits every in-arc and keeps one copy of the subtree.
// Rounds repeat until no duplicated hanging tree is left.

#include <stablenet/canonical.hpp>
#include <stablenet/core.hpp>
#include <stablenet/unfold.hpp>

#include <map>
#include <random>
#include <string>
#include <vector>

namespace stablenet {

struct fold_step {
  std::string code;  // canonical form of the merged hanging tree
  std::vector<std::pair<vertex_id, vertex_id>> member_arcs;  // (parent, root) pairs
  vertex_id merged = no_vertex;                              // the new hybrid vertex
  vertex_id kept = no_vertex;                                // member whose subtree survives
};

struct fold_options {
  // when set, each round picks a random maximal class and a random kept
  // member; the result must not change up to isomorphism
  std::mt19937_64* rng = nullptr;
};

struct fold_result {
  lnet net;  // vertex ids of the input survive; merged subtrees leave holes
  std::vector<fold_step> trace;
};

namespace detail {

// roots of hanging trees: v has one in-arc and everything strictly below v
// has one in-arc whose tail also lies below v
inline std::vector<vertex_id> hanging_roots(const digraph& g) {
  std::vector<vertex_id> roots;
  for (vertex_id v : g.vertices()) {
    if (g.indeg(v) != 1) continue;
    std::vector<vertex_id> region = g.descendants(v);
    std::vector<char> inside(g.vertex_capacity(), 0);
    for (vertex_id w : region) inside[w] = 1;
    bool ok = true;
    for (vertex_id w : region) {
      if (w == v) continue;
      if (g.indeg(w) != 1 || !inside[g.parent(w)]) {
        ok = false;
        break;
      }
    }
    if (ok) roots.push_back(v);
  }
  return roots;
}

}  // namespace detail

inline fold_result fold_up(const mul_tree& m, const fold_options& opt = {}) {
  fold_result res;
  res.net = m;
  lnet& g = res.net;

  for (;;) {
    code_interner interner;
    std::vector<int> code = subtree_codes(g, interner);
    std::vector<vertex_id> roots = detail::hanging_roots(g.g);

    // duplicated hanging trees, grouped by isomorphism
    std::map<int, std::vector<vertex_id>> by_code;
    for (vertex_id v : roots) by_code[code[v]].push_back(v);
    std::vector<std::pair<int, std::vector<vertex_id>>> inextendible;
    for (auto& [c, members] : by_code)
      if (members.size() >= 2) inextendible.push_back({c, members});
    if (inextendible.empty()) break;

    // a class is maximal when no other duplicated hanging tree contains a
    // copy of it strictly below its root; containment is isomorphism
    // invariant, so one representative per other class suffices
    std::vector<std::size_t> maximal;
    for (std::size_t i = 0; i < inextendible.size(); ++i) {
      int c = inextendible[i].first;
      bool contained = false;
      for (std::size_t j = 0; j < inextendible.size() && !contained; ++j) {
        if (j == i) continue;
        vertex_id rep = inextendible[j].second.front();
        for (vertex_id w : g.g.descendants(rep))
          if (w != rep && code[w] == c) {
            contained = true;
            break;
          }
      }
      if (!contained) maximal.push_back(i);
    }

    // deterministic pick: lexicographically smallest canonical form
    std::size_t pick;
    if (opt.rng) {
      pick = maximal[std::uniform_int_distribution<std::size_t>(0, maximal.size() - 1)(*opt.rng)];
    } else {
      pick = maximal.front();
      std::string best = canon_code_string(g, inextendible[pick].second.front());
      for (std::size_t idx = 1; idx < maximal.size(); ++idx) {
        std::string s = canon_code_string(g, inextendible[maximal[idx]].second.front());
        if (s < best) {
          best = std::move(s);
          pick = maximal[idx];
        }
      }
    }

    std::vector<vertex_id> members = inextendible[pick].second;  // ascending ids
    std::size_t keep_idx = 0;
    if (opt.rng)
      keep_idx =
          std::uniform_int_distribution<std::size_t>(0, members.size() - 1)(*opt.rng);

    fold_step step;
    step.code = canon_code_string(g, members[keep_idx]);
    step.kept = members[keep_idx];
    for (vertex_id r : members) step.member_arcs.push_back({g.g.parent(r), r});

    vertex_id s = g.g.add_vertex();
    step.merged = s;
    for (const auto& [p, r] : step.member_arcs) {
      g.g.remove_arc(g.g.in_arcs(r)[0]);
      g.g.add_arc(p, s);
    }
    g.g.add_arc(s, step.kept);
    for (vertex_id r : members) {
      if (r == step.kept) continue;
      for (vertex_id w : g.g.descendants(r)) {
        g.label.erase(w);
        g.g.remove_vertex(w);
      }
    }
    res.trace.push_back(std::move(step));
  }
  return res;
}

// a MUL-tree is sound when no two of its vertices with a common parent
// carry isomorphic subtrees; equivalently, its fold-up has no parallel arcs
inline bool is_sound(const mul_tree& m) {
  code_interner interner;
  std::vector<int> code = subtree_codes(m, interner);
  for (vertex_id v : m.g.vertices()) {
    std::vector<int> kid_codes;
    for (arc_id a : m.g.out_arcs(v)) kid_codes.push_back(code[m.g.arc(a).head]);
    std::sort(kid_codes.begin(), kid_codes.end());
    for (std::size_t i = 1; i < kid_codes.size(); ++i)
      if (kid_codes[i] == kid_codes[i - 1]) return false;
  }
  return true;
}

// a network is stable when folding its un-folding gives it back
inline bool is_stable(const xnetwork& n, std::size_t path_cap = default_path_cap) {
  unfold_result u = unfold(n, path_cap);
  fold_result f = fold_up(u.m);
  return xnetwork_isomorphic(n, f.net);
}

}  // namespace stablenet
