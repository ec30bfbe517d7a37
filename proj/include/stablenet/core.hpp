#pragma once

// Core graph model: rooted connected pseudoDAGs with stable vertex/arc
// handles, leaf-labelled variants (X-networks, phylogenetic networks and
// trees, MUL-trees), structural validation, and the subdivision/suppression
// primitives everything else is built from.

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace stablenet {

using vertex_id = int;
using arc_id = int;
inline constexpr vertex_id no_vertex = -1;
inline constexpr arc_id no_arc = -1;

// thrown when an enumeration outgrows its configured budget
class budget_exceeded : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t default_path_cap = 1000000;
inline constexpr std::size_t default_search_budget = 1000000;

struct arc_info {
  vertex_id tail = no_vertex;
  vertex_id head = no_vertex;
  bool alive = false;
};

// Rooted directed pseudo-graph (parallel arcs allowed). Handles are dense
// integers; deleted ids are never reused within one graph value, so cached
// ids stay meaningful until the value is compacted or destroyed.
class digraph {
public:
  vertex_id root = no_vertex;

  vertex_id add_vertex() {
    verts_.push_back({});
    verts_.back().alive = true;
    ++n_alive_;
    return static_cast<vertex_id>(verts_.size()) - 1;
  }

  arc_id add_arc(vertex_id t, vertex_id h) {
    check_vertex(t);
    check_vertex(h);
    arcs_.push_back({t, h, true});
    arc_id a = static_cast<arc_id>(arcs_.size()) - 1;
    verts_[t].out.push_back(a);
    verts_[h].in.push_back(a);
    ++m_alive_;
    return a;
  }

  void remove_arc(arc_id a) {
    check_arc(a);
    arc_info& ai = arcs_[a];
    detach(verts_[ai.tail].out, a);
    detach(verts_[ai.head].in, a);
    ai.alive = false;
    --m_alive_;
  }

  void remove_vertex(vertex_id v) {
    check_vertex(v);
    // copy: remove_arc edits the adjacency vectors we are draining
    std::vector<arc_id> incident = verts_[v].in;
    incident.insert(incident.end(), verts_[v].out.begin(), verts_[v].out.end());
    for (arc_id a : incident) remove_arc(a);
    verts_[v].alive = false;
    --n_alive_;
    if (root == v) root = no_vertex;
  }

  bool vertex_alive(vertex_id v) const {
    return v >= 0 && v < static_cast<vertex_id>(verts_.size()) && verts_[v].alive;
  }
  bool arc_alive(arc_id a) const {
    return a >= 0 && a < static_cast<arc_id>(arcs_.size()) && arcs_[a].alive;
  }

  int num_vertices() const { return n_alive_; }
  int num_arcs() const { return m_alive_; }

  std::vector<vertex_id> vertices() const {
    std::vector<vertex_id> out;
    out.reserve(n_alive_);
    for (vertex_id v = 0; v < static_cast<vertex_id>(verts_.size()); ++v)
      if (verts_[v].alive) out.push_back(v);
    return out;
  }

  std::vector<arc_id> arcs() const {
    std::vector<arc_id> out;
    out.reserve(m_alive_);
    for (arc_id a = 0; a < static_cast<arc_id>(arcs_.size()); ++a)
      if (arcs_[a].alive) out.push_back(a);
    return out;
  }

  const arc_info& arc(arc_id a) const {
    check_arc(a);
    return arcs_[a];
  }

  const std::vector<arc_id>& in_arcs(vertex_id v) const {
    check_vertex(v);
    return verts_[v].in;
  }
  const std::vector<arc_id>& out_arcs(vertex_id v) const {
    check_vertex(v);
    return verts_[v].out;
  }

  int indeg(vertex_id v) const { return static_cast<int>(in_arcs(v).size()); }
  int outdeg(vertex_id v) const { return static_cast<int>(out_arcs(v).size()); }

  bool is_leaf(vertex_id v) const { return outdeg(v) == 0; }
  // tree vertex: indegree at most one (includes the root and all leaves)
  bool is_tree_vertex(vertex_id v) const { return indeg(v) <= 1; }
  bool is_hybrid(vertex_id v) const { return indeg(v) >= 2; }

  vertex_id parent(vertex_id v) const {
    if (indeg(v) != 1) throw std::logic_error("parent: indegree != 1");
    return arcs_[in_arcs(v)[0]].tail;
  }

  std::vector<vertex_id> children(vertex_id v) const {
    std::vector<vertex_id> out;
    for (arc_id a : out_arcs(v)) out.push_back(arcs_[a].head);
    return out;
  }

  std::vector<vertex_id> parents(vertex_id v) const {
    std::vector<vertex_id> out;
    for (arc_id a : in_arcs(v)) out.push_back(arcs_[a].tail);
    return out;
  }

  // replace arc a by tail(a) -> w -> head(a); returns the subdivision vertex w
  vertex_id subdivide_arc(arc_id a) {
    check_arc(a);
    vertex_id t = arcs_[a].tail, h = arcs_[a].head;
    remove_arc(a);
    vertex_id w = add_vertex();
    add_arc(t, w);
    add_arc(w, h);
    return w;
  }

  // remove an indegree-one/outdegree-one vertex, bridging parent to child;
  // may create a parallel arc, which a pseudoDAG permits
  void suppress_vertex(vertex_id v) {
    if (indeg(v) != 1 || outdeg(v) != 1)
      throw std::logic_error("suppress_vertex: vertex is not indegree one and outdegree one");
    vertex_id p = arcs_[in_arcs(v)[0]].tail;
    vertex_id c = arcs_[out_arcs(v)[0]].head;
    remove_vertex(v);
    add_arc(p, c);
  }

  // all vertices below v, v included, in DFS preorder (deterministic)
  std::vector<vertex_id> descendants(vertex_id v) const {
    std::vector<vertex_id> order;
    std::vector<char> seen(verts_.size(), 0);
    std::vector<vertex_id> stack{v};
    while (!stack.empty()) {
      vertex_id u = stack.back();
      stack.pop_back();
      if (seen[u]) continue;
      seen[u] = 1;
      order.push_back(u);
      const auto& outs = verts_[u].out;
      for (auto it = outs.rbegin(); it != outs.rend(); ++it) {
        vertex_id h = arcs_[*it].head;
        if (!seen[h]) stack.push_back(h);
      }
    }
    return order;
  }

  // is w below v, i.e. does a directed path v -> w exist (w below itself)
  bool is_below(vertex_id w, vertex_id v) const {
    if (w == v) return true;
    std::vector<char> seen(verts_.size(), 0);
    std::vector<vertex_id> stack{v};
    seen[v] = 1;
    while (!stack.empty()) {
      vertex_id u = stack.back();
      stack.pop_back();
      for (arc_id a : verts_[u].out) {
        vertex_id h = arcs_[a].head;
        if (h == w) return true;
        if (!seen[h]) {
          seen[h] = 1;
          stack.push_back(h);
        }
      }
    }
    return false;
  }

  bool is_acyclic() const {
    // Kahn over alive vertices
    std::vector<int> deg(verts_.size(), 0);
    std::vector<vertex_id> q;
    int seen = 0;
    for (vertex_id v : vertices()) {
      deg[v] = indeg(v);
      if (deg[v] == 0) q.push_back(v);
    }
    while (!q.empty()) {
      vertex_id v = q.back();
      q.pop_back();
      ++seen;
      for (arc_id a : verts_[v].out)
        if (--deg[arcs_[a].head] == 0) q.push_back(arcs_[a].head);
    }
    return seen == n_alive_;
  }

  bool is_connected() const {
    if (n_alive_ == 0) return true;
    std::vector<char> seen(verts_.size(), 0);
    std::vector<vertex_id> stack{vertices().front()};
    seen[stack[0]] = 1;
    int count = 0;
    while (!stack.empty()) {
      vertex_id v = stack.back();
      stack.pop_back();
      ++count;
      auto push = [&](vertex_id u) {
        if (!seen[u]) {
          seen[u] = 1;
          stack.push_back(u);
        }
      };
      for (arc_id a : verts_[v].out) push(arcs_[a].head);
      for (arc_id a : verts_[v].in) push(arcs_[a].tail);
    }
    return count == n_alive_;
  }

  // deterministic topological order (ascending vertex id among ready vertices)
  std::vector<vertex_id> topo_order() const {
    std::vector<int> deg(verts_.size(), 0);
    std::set<vertex_id> ready;
    for (vertex_id v : vertices()) {
      deg[v] = indeg(v);
      if (deg[v] == 0) ready.insert(v);
    }
    std::vector<vertex_id> order;
    order.reserve(n_alive_);
    while (!ready.empty()) {
      vertex_id v = *ready.begin();
      ready.erase(ready.begin());
      order.push_back(v);
      for (arc_id a : verts_[v].out)
        if (--deg[arcs_[a].head] == 0) ready.insert(arcs_[a].head);
    }
    if (static_cast<int>(order.size()) != n_alive_)
      throw std::logic_error("topo_order: graph has a directed cycle");
    return order;
  }

  std::size_t vertex_capacity() const { return verts_.size(); }

private:
  struct vert {
    std::vector<arc_id> in, out;
    bool alive = false;
  };
  std::vector<vert> verts_;
  std::vector<arc_info> arcs_;
  int n_alive_ = 0;
  int m_alive_ = 0;

  static void detach(std::vector<arc_id>& list, arc_id a) {
    auto it = std::find(list.begin(), list.end(), a);
    if (it != list.end()) list.erase(it);
  }
  void check_vertex(vertex_id v) const {
    if (!vertex_alive(v)) throw std::out_of_range("unknown or deleted vertex id");
  }
  void check_arc(arc_id a) const {
    if (!arc_alive(a)) throw std::out_of_range("unknown or deleted arc id");
  }
};

// A rooted pseudoDAG together with a leaf labelling. One substrate serves
// every role in the calculus: an X-network labels each leaf by a distinct
// taxon, a MUL-tree allows repeats, and the intermediate pseudoDAGs that
// arise mid-fold carry their labels along unchanged.
struct lnet {
  digraph g;
  std::map<vertex_id, std::string> label;  // leaf -> taxon

  // sorted distinct taxa
  std::vector<std::string> taxa() const {
    std::set<std::string> s;
    for (const auto& [v, x] : label) {
      (void)v;
      s.insert(x);
    }
    return {s.begin(), s.end()};
  }

  // taxon -> its labelled leaves, ascending by vertex id
  std::map<std::string, std::vector<vertex_id>> mu() const {
    std::map<std::string, std::vector<vertex_id>> out;
    for (const auto& [v, x] : label) out[x].push_back(v);
    return out;
  }

  // the unique leaf of a taxon; throws unless exactly one exists
  vertex_id leaf_of(const std::string& x) const {
    vertex_id found = no_vertex;
    for (const auto& [v, lab] : label)
      if (lab == x) {
        if (found != no_vertex) throw std::logic_error("leaf_of: taxon labels several leaves");
        found = v;
      }
    if (found == no_vertex) throw std::out_of_range("leaf_of: unknown taxon " + x);
    return found;
  }
};

using xnetwork = lnet;    // leaf labels form a bijection with the taxa
using mul_tree = lnet;    // tree-shaped, repeated labels allowed
using phylo_tree = lnet;  // X-network without hybrid vertices

// ---------------------------------------------------------------- validation

struct violation {
  std::string rule;
  vertex_id v = no_vertex;
  arc_id a = no_arc;
  std::string detail;
};

struct validation_report {
  std::vector<violation> violations;
  bool ok() const { return violations.empty(); }
  std::string str() const {
    std::ostringstream os;
    for (const auto& w : violations) {
      os << w.rule;
      if (w.v != no_vertex) os << " [vertex " << w.v << "]";
      if (w.a != no_arc) os << " [arc " << w.a << "]";
      if (!w.detail.empty()) os << ": " << w.detail;
      os << "\n";
    }
    return os.str();
  }
};

namespace detail {

inline void check_rooted_pseudodag(const lnet& n, validation_report& r) {
  const digraph& g = n.g;
  if (g.num_vertices() == 0) {
    r.violations.push_back({"empty graph", no_vertex, no_arc, ""});
    return;
  }
  int roots = 0;
  vertex_id the_root = no_vertex;
  for (vertex_id v : g.vertices())
    if (g.indeg(v) == 0) {
      ++roots;
      the_root = v;
    }
  if (roots != 1)
    r.violations.push_back({"root count != 1", no_vertex, no_arc,
                            "found " + std::to_string(roots) + " indegree-0 vertices"});
  else if (g.root != the_root)
    r.violations.push_back({"root field mismatch", g.root, no_arc,
                            "indegree-0 vertex is " + std::to_string(the_root)});
  if (!g.is_acyclic()) r.violations.push_back({"directed cycle", no_vertex, no_arc, ""});
  if (!g.is_connected()) r.violations.push_back({"not connected", no_vertex, no_arc, ""});
}

inline void check_leaf_labelling(const lnet& n, validation_report& r, bool repeats_allowed) {
  std::set<std::string> seen;
  for (vertex_id v : n.g.vertices()) {
    bool leaf = n.g.is_leaf(v);
    bool labelled = n.label.count(v) > 0;
    if (leaf && !labelled)
      r.violations.push_back({"unlabelled leaf", v, no_arc, ""});
    if (!leaf && labelled)
      r.violations.push_back({"label on interior vertex", v, no_arc, n.label.at(v)});
    if (leaf && labelled && !repeats_allowed && !seen.insert(n.label.at(v)).second)
      r.violations.push_back({"taxon labels several leaves", v, no_arc, n.label.at(v)});
  }
}

}  // namespace detail

// X-network axioms: root of indegree zero, non-leaf tree vertices of
// outdegree two, hybrid vertices of outdegree one, leaves of degree one,
// leaves labelled bijectively. Parallel arcs are permitted.
inline validation_report validate_xnetwork(const lnet& n) {
  validation_report r;
  detail::check_rooted_pseudodag(n, r);
  detail::check_leaf_labelling(n, r, /*repeats_allowed=*/false);
  for (vertex_id v : n.g.vertices()) {
    int in = n.g.indeg(v), out = n.g.outdeg(v);
    if (n.g.is_leaf(v)) {
      if (in != 1)
        r.violations.push_back({"leaf degree != 1", v, no_arc, "indegree " + std::to_string(in)});
    } else if (in <= 1) {
      if (out != 2)
        r.violations.push_back(
            {"non-leaf tree vertex outdegree != 2", v, no_arc, "outdegree " + std::to_string(out)});
    } else {
      if (out != 1)
        r.violations.push_back(
            {"hybrid outdegree != 1", v, no_arc, "outdegree " + std::to_string(out)});
    }
  }
  return r;
}

inline bool has_parallel_arcs(const digraph& g) {
  std::set<std::pair<vertex_id, vertex_id>> seen;
  for (arc_id a : g.arcs())
    if (!seen.insert({g.arc(a).tail, g.arc(a).head}).second) return true;
  return false;
}

// phylogenetic network: an X-network without parallel arcs
inline validation_report validate_phylo_network(const lnet& n) {
  validation_report r = validate_xnetwork(n);
  for (arc_id a : n.g.arcs()) {
    const arc_info& ai = n.g.arc(a);
    for (arc_id b : n.g.out_arcs(ai.tail))
      if (b < a && n.g.arc(b).head == ai.head) {
        r.violations.push_back({"parallel arcs", ai.tail, a, ""});
        break;
      }
  }
  return r;
}

// phylogenetic tree: a phylogenetic network without hybrid vertices
inline validation_report validate_phylo_tree(const lnet& n) {
  validation_report r = validate_phylo_network(n);
  for (vertex_id v : n.g.vertices())
    if (n.g.is_hybrid(v)) r.violations.push_back({"hybrid vertex in tree", v, no_arc, ""});
  return r;
}

// every hybrid vertex has indegree exactly two
inline bool is_binary(const lnet& n) {
  for (vertex_id v : n.g.vertices())
    if (n.g.is_hybrid(v) && n.g.indeg(v) != 2) return false;
  return true;
}

// MUL-tree: rooted tree, root of indegree zero, no vertex with indegree and
// outdegree one, every leaf labelled by exactly one taxon (repeats allowed)
inline validation_report validate_multree(const lnet& n) {
  validation_report r;
  detail::check_rooted_pseudodag(n, r);
  detail::check_leaf_labelling(n, r, /*repeats_allowed=*/true);
  for (vertex_id v : n.g.vertices()) {
    if (n.g.is_hybrid(v))
      r.violations.push_back({"vertex with indegree >= 2 in tree", v, no_arc, ""});
    if (n.g.indeg(v) == 1 && n.g.outdeg(v) == 1)
      r.violations.push_back({"vertex with indegree and outdegree one", v, no_arc, ""});
  }
  return r;
}

// ---------------------------------------------------------- tree primitives

inline bool is_below(const digraph& g, vertex_id descendant, vertex_id ancestor) {
  return g.is_below(descendant, ancestor);
}

// last common ancestor in a tree of a set of vertices (size >= 1)
inline vertex_id lca(const digraph& g, const std::vector<vertex_id>& ys) {
  if (ys.empty()) throw std::invalid_argument("lca of an empty set");
  auto root_path = [&](vertex_id v) {
    std::vector<vertex_id> path{v};
    while (g.indeg(path.back()) == 1) path.push_back(g.parent(path.back()));
    std::reverse(path.begin(), path.end());
    return path;  // root first
  };
  std::vector<vertex_id> common = root_path(ys[0]);
  for (std::size_t i = 1; i < ys.size(); ++i) {
    std::vector<vertex_id> p = root_path(ys[i]);
    std::size_t k = 0;
    while (k < common.size() && k < p.size() && common[k] == p[k]) ++k;
    common.resize(k);
    if (common.empty()) throw std::logic_error("lca: vertices share no ancestor");
  }
  return common.back();
}

// shortest directed path between two vertices as an arc sequence; throws
// when none exists (from == to gives the empty path)
inline std::vector<arc_id> shortest_directed_path(const digraph& g, vertex_id from,
                                                  vertex_id to) {
  std::vector<arc_id> via(g.vertex_capacity(), no_arc);
  std::vector<char> seen(g.vertex_capacity(), 0);
  std::vector<vertex_id> queue{from};
  seen[from] = 1;
  for (std::size_t head = 0; head < queue.size() && !seen[to]; ++head) {
    vertex_id v = queue[head];
    for (arc_id a : g.out_arcs(v)) {
      vertex_id h = g.arc(a).head;
      if (seen[h]) continue;
      seen[h] = 1;
      via[h] = a;
      queue.push_back(h);
    }
  }
  if (!seen[to]) throw std::logic_error("shortest_directed_path: unreachable target");
  std::vector<arc_id> path;
  for (vertex_id v = to; v != from; v = g.arc(via[v]).tail) path.push_back(via[v]);
  std::reverse(path.begin(), path.end());
  return path;
}

// ------------------------------------------------------------- value copies

// dense renumbering; old_to_new (if given) is sized to the old capacity with
// no_vertex marking deleted ids
inline lnet compact(const lnet& n, std::vector<vertex_id>* old_to_new = nullptr) {
  lnet out;
  std::vector<vertex_id> remap(n.g.vertex_capacity(), no_vertex);
  for (vertex_id v : n.g.vertices()) remap[v] = out.g.add_vertex();
  for (arc_id a : n.g.arcs()) out.g.add_arc(remap[n.g.arc(a).tail], remap[n.g.arc(a).head]);
  if (n.g.root != no_vertex && n.g.vertex_alive(n.g.root)) out.g.root = remap[n.g.root];
  for (const auto& [v, x] : n.label)
    if (remap[v] != no_vertex) out.label[remap[v]] = x;
  if (old_to_new) *old_to_new = std::move(remap);
  return out;
}

// fresh graph on a chosen set of vertices and arcs, labels carried over
inline lnet induced_subgraph(const lnet& n, const std::set<vertex_id>& vertices,
                             const std::set<arc_id>& arcs, vertex_id root) {
  lnet out;
  std::map<vertex_id, vertex_id> remap;
  for (vertex_id v : vertices) {
    remap[v] = out.g.add_vertex();
    auto it = n.label.find(v);
    if (it != n.label.end()) out.label[remap[v]] = it->second;
  }
  for (arc_id a : arcs) {
    const arc_info& ai = n.g.arc(a);
    if (!remap.count(ai.tail) || !remap.count(ai.head))
      throw std::logic_error("induced_subgraph: arc endpoint outside the vertex set");
    out.g.add_arc(remap.at(ai.tail), remap.at(ai.head));
  }
  auto rit = remap.find(root);
  if (rit == remap.end()) throw std::logic_error("induced_subgraph: root outside the vertex set");
  out.g.root = rit->second;
  return out;
}

// value-style subdivision: returns the new graph and the subdivision vertex
inline std::pair<lnet, vertex_id> subdivide(const lnet& n, arc_id a) {
  lnet out = n;
  vertex_id w = out.g.subdivide_arc(a);
  return {out, w};
}

// value-style suppression of an indegree-one/outdegree-one vertex
inline lnet suppress(const lnet& n, vertex_id v) {
  lnet out = n;
  out.g.suppress_vertex(v);
  return out;
}

}  // namespace stablenet
