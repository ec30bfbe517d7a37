#pragma once

// Un-folding a network into its MUL-tree of root paths. The tree on all
// root paths is materialized first; paths ending at hybrid vertices are then
// suppressed, leaving one vertex per path that ends at a tree vertex. The
// result keeps the path behind every vertex, so the correspondence between
// paths and vertices stays queryable in both directions.

#include <stablenet/canonical.hpp>
#include <stablenet/core.hpp>

#include <map>
#include <string>
#include <vector>

namespace stablenet {

struct unfold_result {
  mul_tree m;  // suppressed ids stay as holes so path metadata lines up

  // per path-vertex metadata, indexed by m vertex id (including holes)
  std::vector<vertex_id> end_vertex;   // final vertex of the path, in the network
  std::vector<vertex_id> parent_path;  // vertex of the path minus its last arc
  std::vector<arc_id> last_arc;        // network arc appended last, no_arc at the root

  // reconstruct the root path behind a vertex as its arc sequence
  std::vector<arc_id> path_arcs(vertex_id v) const {
    std::vector<arc_id> out;
    for (vertex_id p = v; last_arc[p] != no_arc; p = parent_path[p]) out.push_back(last_arc[p]);
    std::reverse(out.begin(), out.end());
    return out;
  }

  // the vertex a root path maps to; throws if no such path was enumerated
  vertex_id psi(const std::vector<arc_id>& path) const {
    vertex_id cur = m.g.root;
    for (arc_id a : path) {
      auto it = step.find({cur, a});
      if (it == step.end()) throw std::out_of_range("psi: not a root path of the network");
      cur = it->second;
    }
    return cur;
  }

  // leaves of the un-folding that end at the network leaf labelled x
  std::vector<vertex_id> phi(const std::string& x) const {
    std::vector<vertex_id> out;
    for (const auto& [v, lab] : m.label)
      if (lab == x) out.push_back(v);
    return out;
  }

  std::map<std::pair<vertex_id, arc_id>, vertex_id> step;  // (path, extension) -> longer path
};

// breadth-first over root paths, children in ascending arc id, so vertex
// numbering is deterministic: shorter paths first, lexicographic within a
// length
inline unfold_result unfold(const xnetwork& n, std::size_t path_cap = default_path_cap) {
  if (n.g.root == no_vertex) throw std::logic_error("unfold: network has no root");
  unfold_result u;
  std::vector<vertex_id> queue;

  vertex_id trivial = u.m.g.add_vertex();
  u.end_vertex.push_back(n.g.root);
  u.parent_path.push_back(no_vertex);
  u.last_arc.push_back(no_arc);
  u.m.g.root = trivial;
  queue.push_back(trivial);

  for (std::size_t head = 0; head < queue.size(); ++head) {
    vertex_id pv = queue[head];
    vertex_id end = u.end_vertex[pv];
    std::vector<arc_id> outs = n.g.out_arcs(end);
    std::sort(outs.begin(), outs.end());
    for (arc_id a : outs) {
      if (queue.size() >= path_cap)
        throw budget_exceeded("root path budget of " + std::to_string(path_cap) + " exceeded");
      vertex_id ext = u.m.g.add_vertex();
      u.m.g.add_arc(pv, ext);
      u.end_vertex.push_back(n.g.arc(a).head);
      u.parent_path.push_back(pv);
      u.last_arc.push_back(a);
      u.step[{pv, a}] = ext;
      queue.push_back(ext);
    }
  }

  for (vertex_id v : u.m.g.vertices()) {
    vertex_id end = u.end_vertex[v];
    if (n.g.is_leaf(end)) {
      auto it = n.label.find(end);
      if (it != n.label.end()) u.m.label[v] = it->second;
    }
  }

  // paths ending at hybrid vertices are exactly the suppressible ones
  for (vertex_id v : u.m.g.vertices())
    if (u.m.g.indeg(v) == 1 && u.m.g.outdeg(v) == 1) u.m.g.suppress_vertex(v);

  return u;
}

// ------------------------------------------------------------------ kappa

// the map sending a tree vertex of the network to the similarity class of
// the path vertices ending there; a bijection exactly on stable networks
struct kappa_result {
  bool well_defined = true;  // every tree vertex meets a single class
  bool injective = true;
  bool surjective = true;
  std::map<vertex_id, int> class_of_vertex;  // tree vertex -> class index
  std::vector<vertex_id> vertex_of_class;    // class index -> tree vertex
  std::string detail;

  bool bijective() const { return well_defined && injective && surjective; }
};

inline kappa_result kappa(const xnetwork& n, const unfold_result& u, const equiv_partition& p) {
  kappa_result k;
  std::map<vertex_id, std::set<int>> met;  // network tree vertex -> classes
  for (vertex_id v : u.m.g.vertices()) met[u.end_vertex[v]].insert(p.class_of[v]);

  for (vertex_id v : n.g.vertices()) {
    if (!n.g.is_tree_vertex(v)) continue;
    auto it = met.find(v);
    if (it == met.end() || it->second.empty()) {
      k.well_defined = false;
      if (k.detail.empty()) k.detail = "no root path ends at vertex " + std::to_string(v);
      continue;
    }
    if (it->second.size() > 1) {
      k.well_defined = false;
      if (k.detail.empty())
        k.detail = "vertex " + std::to_string(v) + " ends paths in " +
                   std::to_string(it->second.size()) + " distinct classes";
      continue;
    }
    k.class_of_vertex[v] = *it->second.begin();
  }

  k.vertex_of_class.assign(p.num_classes(), no_vertex);
  for (const auto& [v, c] : k.class_of_vertex) {
    if (k.vertex_of_class[c] != no_vertex) {
      k.injective = false;
      if (k.detail.empty())
        k.detail = "vertices " + std::to_string(k.vertex_of_class[c]) + " and " +
                   std::to_string(v) + " share a class";
    } else {
      k.vertex_of_class[c] = v;
    }
  }
  if (k.well_defined && k.injective)
    for (int c = 0; c < p.num_classes(); ++c)
      if (k.vertex_of_class[c] == no_vertex) {
        k.surjective = false;
        if (k.detail.empty()) k.detail = "class " + std::to_string(c) + " is not hit";
      }
  return k;
}

inline kappa_result kappa(const xnetwork& n, std::size_t path_cap = default_path_cap) {
  unfold_result u = unfold(n, path_cap);
  equiv_partition p = similarity_classes(u.m);
  return kappa(n, u, p);
}

}  // namespace stablenet
