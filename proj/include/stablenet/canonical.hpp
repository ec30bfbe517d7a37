#pragma once

// Canonical codes for rooted leaf-labelled trees, the similarity partition
// they induce, and isomorphism tests. Codes are interned integers so that
// comparing two subtrees is O(1) after a linear pass; the string form is
// only materialized on demand.

#include <stablenet/core.hpp>

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace stablenet {

// Dense integer codes for rooted trees: two vertices receive the same code
// exactly when their subtrees are isomorphic as leaf-labelled trees. One
// interner can be shared across graphs to make codes comparable between them.
class code_interner {
public:
  int label_code(const std::string& x) {
    auto [it, fresh] = labels_.try_emplace(x, static_cast<int>(labels_.size()));
    (void)fresh;
    return it->second;
  }

  // children must already be sorted; leaves pass an empty vector
  int node_code(int label, std::vector<int> children) {
    key k{label, std::move(children)};
    auto [it, fresh] = nodes_.try_emplace(std::move(k), static_cast<int>(nodes_.size()));
    (void)fresh;
    return it->second;
  }

private:
  using key = std::pair<int, std::vector<int>>;
  std::map<std::string, int> labels_;
  std::map<key, int> nodes_;
};

// code of every alive vertex, indexed by vertex id (dead ids hold -1);
// on a DAG the code describes the tree the vertex unfolds to
inline std::vector<int> subtree_codes(const lnet& n, code_interner& interner) {
  std::vector<int> code(n.g.vertex_capacity(), -1);
  std::vector<vertex_id> order = n.g.topo_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    vertex_id v = *it;
    int label = -1;
    auto lit = n.label.find(v);
    if (lit != n.label.end()) label = interner.label_code(lit->second);
    std::vector<int> kids;
    kids.reserve(n.g.out_arcs(v).size());
    for (arc_id a : n.g.out_arcs(v)) kids.push_back(code[n.g.arc(a).head]);
    std::sort(kids.begin(), kids.end());
    code[v] = interner.node_code(label, std::move(kids));
  }
  return code;
}

inline int canon_code(const lnet& n, code_interner& interner) {
  if (n.g.root == no_vertex) throw std::logic_error("canon_code: graph has no root");
  return subtree_codes(n, interner)[n.g.root];
}

// human-readable canonical form, independent of vertex numbering:
// leaves print their label, interior vertices print sorted children;
// rooted at an arbitrary vertex when one is given
inline std::string canon_code_string(const lnet& n, vertex_id at = no_vertex) {
  std::map<vertex_id, std::string> memo;
  std::vector<vertex_id> order = n.g.topo_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    vertex_id v = *it;
    if (n.g.is_leaf(v)) {
      auto lit = n.label.find(v);
      memo[v] = lit == n.label.end() ? "()" : lit->second;
      continue;
    }
    std::vector<std::string> kids;
    for (arc_id a : n.g.out_arcs(v)) kids.push_back(memo[n.g.arc(a).head]);
    std::sort(kids.begin(), kids.end());
    std::string s = "(";
    for (std::size_t i = 0; i < kids.size(); ++i) {
      if (i) s += ",";
      s += kids[i];
    }
    s += ")";
    memo[v] = std::move(s);
  }
  return memo[at == no_vertex ? n.g.root : at];
}

// trees compare equal exactly when some isomorphism matches their roots and
// preserves leaf labels
inline bool multree_isomorphic(const lnet& a, const lnet& b) {
  code_interner shared;
  return canon_code(a, shared) == canon_code(b, shared);
}

// ------------------------------------------------------ similarity classes

// partition of the vertices by subtree isomorphism: u ~ v iff the subtrees
// rooted there are isomorphic (so two leaves share a class iff they share a
// label); classes are ordered by smallest member, members ascend
struct equiv_partition {
  std::vector<std::vector<vertex_id>> classes;
  std::vector<int> class_of;  // capacity-sized, -1 on dead ids

  int num_classes() const { return static_cast<int>(classes.size()); }
  int class_size(vertex_id v) const {
    return static_cast<int>(classes[class_of[v]].size());
  }
  bool same_class(vertex_id u, vertex_id v) const { return class_of[u] == class_of[v]; }
};

inline equiv_partition similarity_classes(const lnet& m, code_interner& interner) {
  std::vector<int> code = subtree_codes(m, interner);
  equiv_partition p;
  p.class_of.assign(m.g.vertex_capacity(), -1);
  std::map<int, int> by_code;  // code -> class index, in first-seen order
  for (vertex_id v : m.g.vertices()) {
    auto [it, fresh] = by_code.try_emplace(code[v], p.num_classes());
    if (fresh) p.classes.emplace_back();
    p.class_of[v] = it->second;
    p.classes[it->second].push_back(v);
  }
  return p;
}

inline equiv_partition similarity_classes(const lnet& m) {
  code_interner interner;
  return similarity_classes(m, interner);
}

// ------------------------------------------------------ network isomorphism

namespace detail {

// stable colors under iterated neighborhood refinement, shared across both
// graphs so equal colors mean locally indistinguishable
inline std::pair<std::vector<int>, std::vector<int>> refine_colors(const lnet& a,
                                                                   const lnet& b) {
  auto initial = [](const lnet& n, std::map<std::string, int>& palette) {
    std::vector<int> color(n.g.vertex_capacity(), -1);
    for (vertex_id v : n.g.vertices()) {
      std::string k = (v == n.g.root ? "r" : "-");
      k += "/" + std::to_string(n.g.indeg(v)) + "/" + std::to_string(n.g.outdeg(v));
      auto lit = n.label.find(v);
      if (lit != n.label.end()) k += "/" + lit->second;
      auto [it, fresh] = palette.try_emplace(k, static_cast<int>(palette.size()));
      (void)fresh;
      color[v] = it->second;
    }
    return color;
  };
  std::map<std::string, int> palette;
  std::vector<int> ca = initial(a, palette), cb = initial(b, palette);

  using refine_key = std::pair<int, std::pair<std::vector<int>, std::vector<int>>>;
  for (int round = 0; round < a.g.num_vertices() + 1; ++round) {
    std::map<refine_key, int> next_palette;
    auto step = [&](const lnet& n, const std::vector<int>& cur) {
      std::vector<std::pair<vertex_id, refine_key>> keys;
      for (vertex_id v : n.g.vertices()) {
        std::vector<int> outs, ins;
        for (arc_id e : n.g.out_arcs(v)) outs.push_back(cur[n.g.arc(e).head]);
        for (arc_id e : n.g.in_arcs(v)) ins.push_back(cur[n.g.arc(e).tail]);
        std::sort(outs.begin(), outs.end());
        std::sort(ins.begin(), ins.end());
        keys.push_back({v, {cur[v], {std::move(outs), std::move(ins)}}});
      }
      return keys;
    };
    auto ka = step(a, ca), kb = step(b, cb);
    for (const auto& pr : ka) next_palette.try_emplace(pr.second, -1);
    for (const auto& pr : kb) next_palette.try_emplace(pr.second, -1);
    int fresh = 0;
    for (auto& [k, id] : next_palette) id = fresh++;
    std::vector<int> na = ca, nb = cb;
    for (const auto& [v, k] : ka) na[v] = next_palette.at(k);
    for (const auto& [v, k] : kb) nb[v] = next_palette.at(k);
    bool stable = na == ca && nb == cb;
    // palettes differ each round, so compare partition sizes instead
    std::set<int> before, after;
    for (vertex_id v : a.g.vertices()) before.insert(ca[v]), after.insert(na[v]);
    for (vertex_id v : b.g.vertices()) before.insert(cb[v]), after.insert(nb[v]);
    bool same_count = before.size() == after.size();
    ca = std::move(na);
    cb = std::move(nb);
    if (stable || same_count) break;
  }
  return {ca, cb};
}

inline int arc_multiplicity(const digraph& g, vertex_id t, vertex_id h) {
  int k = 0;
  for (arc_id a : g.out_arcs(t))
    if (g.arc(a).head == h) ++k;
  return k;
}

inline bool extend_match(const lnet& a, const lnet& b, const std::vector<vertex_id>& order,
                         std::size_t i, const std::vector<int>& ca, const std::vector<int>& cb,
                         std::vector<vertex_id>& image, std::vector<char>& used) {
  if (i == order.size()) return true;
  vertex_id v = order[i];
  for (vertex_id u : b.g.vertices()) {
    if (used[u] || cb[u] != ca[v]) continue;
    bool ok = true;
    for (arc_id e : a.g.out_arcs(v)) {
      vertex_id w = a.g.arc(e).head;
      if (image[w] != no_vertex &&
          arc_multiplicity(a.g, v, w) != arc_multiplicity(b.g, u, image[w]))
        ok = false;
    }
    for (arc_id e : a.g.in_arcs(v)) {
      vertex_id w = a.g.arc(e).tail;
      if (image[w] != no_vertex &&
          arc_multiplicity(a.g, w, v) != arc_multiplicity(b.g, image[w], u))
        ok = false;
    }
    if (!ok) continue;
    image[v] = u;
    used[u] = 1;
    if (extend_match(a, b, order, i + 1, ca, cb, image, used)) return true;
    image[v] = no_vertex;
    used[u] = 0;
  }
  return false;
}

}  // namespace detail

// isomorphism of rooted leaf-labelled pseudoDAGs: a bijection of vertices
// mapping root to root, preserving labels and arc multiplicities
inline bool xnetwork_isomorphic(const lnet& a, const lnet& b) {
  if (a.g.num_vertices() != b.g.num_vertices() || a.g.num_arcs() != b.g.num_arcs())
    return false;
  if (a.g.root == no_vertex || b.g.root == no_vertex)
    throw std::logic_error("xnetwork_isomorphic: unrooted graph");

  auto [ca, cb] = detail::refine_colors(a, b);
  std::map<int, int> count_a, count_b;
  for (vertex_id v : a.g.vertices()) ++count_a[ca[v]];
  for (vertex_id v : b.g.vertices()) ++count_b[cb[v]];
  if (count_a != count_b) return false;

  // BFS from the root over the underlying undirected graph keeps every new
  // vertex adjacent to a matched one, which makes the pruning bite
  std::vector<vertex_id> order;
  {
    std::vector<char> seen(a.g.vertex_capacity(), 0);
    std::vector<vertex_id> queue{a.g.root};
    seen[a.g.root] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      vertex_id v = queue[head];
      order.push_back(v);
      auto push = [&](vertex_id w) {
        if (!seen[w]) {
          seen[w] = 1;
          queue.push_back(w);
        }
      };
      for (arc_id e : a.g.out_arcs(v)) push(a.g.arc(e).head);
      for (arc_id e : a.g.in_arcs(v)) push(a.g.arc(e).tail);
    }
  }
  if (static_cast<int>(order.size()) != a.g.num_vertices()) return false;

  std::vector<vertex_id> image(a.g.vertex_capacity(), no_vertex);
  std::vector<char> used(b.g.vertex_capacity(), 0);
  if (!detail::extend_match(a, b, order, 0, ca, cb, image, used)) return false;

  // full independent verification of the witness bijection
  if (image[a.g.root] != b.g.root) return false;
  for (vertex_id v : a.g.vertices()) {
    auto la = a.label.find(v);
    auto lb = b.label.find(image[v]);
    bool has_a = la != a.label.end(), has_b = lb != b.label.end();
    if (has_a != has_b || (has_a && la->second != lb->second)) return false;
  }
  std::map<std::pair<vertex_id, vertex_id>, int> arcs_a, arcs_b;
  for (arc_id e : a.g.arcs()) ++arcs_a[{image[a.g.arc(e).tail], image[a.g.arc(e).head]}];
  for (arc_id e : b.g.arcs()) ++arcs_b[{b.g.arc(e).tail, b.g.arc(e).head}];
  return arcs_a == arcs_b;
}

}  // namespace stablenet
