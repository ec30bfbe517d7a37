#pragma once

// X-sets of a MUL-tree and the structure they induce: the spanned subtree
// with its suppressed phylogenetic tree, the maps from an endorsed tree into
// the MUL-tree and its similarity classes, the restricted vertex set V(M)^C,
// and a backtracking search for display witnesses in a network.

#include <stablenet/canonical.hpp>
#include <stablenet/core.hpp>

#include <map>
#include <set>
#include <string>
#include <vector>

namespace stablenet {

// one leaf per taxon: x -> the chosen element of mu(x)
using xset = std::map<std::string, vertex_id>;

// number of X-sets, saturating instead of overflowing
inline std::size_t count_xsets(const mul_tree& m) {
  std::size_t total = 1;
  for (const auto& [x, leaves] : m.mu()) {
    (void)x;
    if (leaves.empty()) return 0;
    if (total > static_cast<std::size_t>(-1) / leaves.size())
      return static_cast<std::size_t>(-1);
    total *= leaves.size();
  }
  return total;
}

// all X-sets in lexicographic order: taxa sorted by name, the choice for the
// last taxon varying fastest, leaves of one taxon in ascending id order
inline std::vector<xset> all_xsets(const mul_tree& m, std::size_t cap = 1000000) {
  std::size_t total = count_xsets(m);
  if (total > cap)
    throw budget_exceeded("X-set budget of " + std::to_string(cap) + " exceeded (" +
                          std::to_string(total) + " X-sets)");
  std::map<std::string, std::vector<vertex_id>> mu = m.mu();
  std::vector<const std::string*> taxa;
  for (const auto& [x, leaves] : mu) {
    (void)leaves;
    taxa.push_back(&x);
  }
  std::vector<std::size_t> pick(taxa.size(), 0);
  std::vector<xset> out;
  out.reserve(total);
  for (;;) {
    xset c;
    for (std::size_t i = 0; i < taxa.size(); ++i) c[*taxa[i]] = mu[*taxa[i]][pick[i]];
    out.push_back(std::move(c));
    std::size_t i = taxa.size();
    while (i > 0) {
      --i;
      if (++pick[i] < mu[*taxa[i]].size()) break;
      pick[i] = 0;
      if (i == 0) return out;
    }
    if (taxa.empty()) return out;
  }
}

// ------------------------------------------------------------ spanned tree

// the subtree of M spanned by an X-set: all vertices on paths from the last
// common ancestor of C down to C, plus its suppressed phylogenetic tree
struct spanned_tree {
  vertex_id root = no_vertex;  // lca of C in M
  std::set<vertex_id> vertices;
  std::set<arc_id> arcs;
  phylo_tree suppressed;                 // fresh graph
  std::map<vertex_id, vertex_id> to_m;   // suppressed vertex -> M vertex
};

inline spanned_tree span_xset(const mul_tree& m, const xset& c) {
  spanned_tree s;
  std::vector<vertex_id> leaves;
  for (const auto& [x, leaf] : c) {
    (void)x;
    leaves.push_back(leaf);
  }
  s.root = lca(m.g, leaves);
  s.vertices.insert(s.root);
  for (vertex_id leaf : leaves) {
    vertex_id v = leaf;
    s.vertices.insert(v);
    while (v != s.root) {
      arc_id a = m.g.in_arcs(v)[0];
      if (!s.arcs.insert(a).second) break;  // the rest of the walk is known
      v = m.g.arc(a).tail;
      s.vertices.insert(v);
    }
  }
  std::map<vertex_id, vertex_id> fresh;
  for (vertex_id v : s.vertices) fresh[v] = s.suppressed.g.add_vertex();
  for (arc_id a : s.arcs)
    s.suppressed.g.add_arc(fresh[m.g.arc(a).tail], fresh[m.g.arc(a).head]);
  s.suppressed.g.root = fresh[s.root];
  for (const auto& [x, leaf] : c) {
    (void)x;
    s.suppressed.label[fresh[leaf]] = m.label.at(leaf);
  }
  for (const auto& [mv, sv] : fresh) s.to_m[sv] = mv;
  for (vertex_id v : s.suppressed.g.vertices())
    if (s.suppressed.g.indeg(v) == 1 && s.suppressed.g.outdeg(v) == 1) {
      s.suppressed.g.suppress_vertex(v);
      s.to_m.erase(v);
    }
  return s;
}

// taxon set below each vertex of a tree with distinct leaf labels, as a map
// from sorted cluster to vertex
inline std::map<std::vector<std::string>, vertex_id> clusters(const phylo_tree& t) {
  std::map<vertex_id, std::vector<std::string>> below;
  std::vector<vertex_id> order = t.g.topo_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    vertex_id v = *it;
    std::vector<std::string>& mine = below[v];
    if (t.g.is_leaf(v)) {
      mine.push_back(t.label.at(v));
    } else {
      for (arc_id a : t.g.out_arcs(v)) {
        const auto& kid = below[t.g.arc(a).head];
        mine.insert(mine.end(), kid.begin(), kid.end());
      }
      std::sort(mine.begin(), mine.end());
    }
  }
  std::map<std::vector<std::string>, vertex_id> out;
  for (auto& [v, cl] : below) out[std::move(cl)] = v;
  return out;
}

// C endorses T when the suppressed spanned tree is T up to isomorphism
inline bool endorses(const spanned_tree& s, const phylo_tree& t) {
  return multree_isomorphic(s.suppressed, t);
}

inline bool endorses(const mul_tree& m, const xset& c, const phylo_tree& t) {
  return endorses(span_xset(m, c), t);
}

// the unique label-preserving isomorphism from an endorsed tree into M:
// T vertex -> M vertex; empty map when C does not endorse T
inline std::map<vertex_id, vertex_id> xi_plus(const spanned_tree& s, const phylo_tree& t) {
  std::map<std::vector<std::string>, vertex_id> ct = clusters(t);
  std::map<std::vector<std::string>, vertex_id> cs = clusters(s.suppressed);
  if (ct.size() != cs.size()) return {};
  std::map<vertex_id, vertex_id> out;
  for (const auto& [cl, tv] : ct) {
    auto it = cs.find(cl);
    if (it == cs.end()) return {};
    out[tv] = s.to_m.at(it->second);
  }
  return out;
}

// ------------------------------------------------- maps into the classes

// classes hit by the spanned tree; the map's domain is every spanned vertex,
// subdivision points included, not only the vertices that survive suppression
inline std::set<int> xibar_image(const spanned_tree& s, const equiv_partition& p) {
  std::set<int> img;
  for (vertex_id mv : s.vertices) img.insert(p.class_of[mv]);
  return img;
}

inline bool xibar_injective(const spanned_tree& s, const equiv_partition& p) {
  return xibar_image(s, p).size() == s.vertices.size();
}

inline bool xibar_bijective(const spanned_tree& s, const equiv_partition& p) {
  return xibar_injective(s, p) &&
         static_cast<int>(xibar_image(s, p).size()) == p.num_classes();
}

// V(M)^C: the root of the spanned tree together with every vertex that has
// no vertex similar to that root weakly below it
inline std::set<vertex_id> vmc(const mul_tree& m, vertex_id r_c, const equiv_partition& p) {
  std::vector<char> has_rc(m.g.vertex_capacity(), 0);
  std::vector<vertex_id> order = m.g.topo_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    vertex_id v = *it;
    char flag = p.same_class(v, r_c) ? 1 : 0;
    for (arc_id a : m.g.out_arcs(v)) flag |= has_rc[m.g.arc(a).head];
    has_rc[v] = flag;
  }
  std::set<vertex_id> out;
  for (vertex_id v : m.g.vertices())
    if (!has_rc[v]) out.insert(v);
  out.insert(r_c);
  return out;
}

inline std::set<int> vmc_classes(const mul_tree& m, vertex_id r_c, const equiv_partition& p) {
  std::set<int> out;
  for (vertex_id v : vmc(m, r_c, p)) out.insert(p.class_of[v]);
  return out;
}

// ------------------------------------------------------- display witnesses

// an embedding of a tree into a network: vertices of T map to distinct
// vertices of N and every arc of T maps to a directed path, the paths
// pairwise disjoint away from their endpoints
struct display_witness {
  std::map<vertex_id, vertex_id> phi;              // T vertex -> N vertex
  std::map<arc_id, std::vector<arc_id>> arc_path;  // T arc -> N arcs, in order

  std::set<arc_id> arc_set() const {
    std::set<arc_id> out;
    for (const auto& [ta, path] : arc_path) {
      (void)ta;
      out.insert(path.begin(), path.end());
    }
    return out;
  }
};

struct display_search {
  bool displayed = false;
  std::vector<display_witness> witnesses;  // one per distinct arc set
  std::size_t expansions = 0;
};

namespace detail {

struct display_searcher {
  const xnetwork& n;
  const phylo_tree& t;
  bool enumerate_all;
  std::size_t budget;

  display_search out;
  std::vector<std::vector<char>> reach;  // reach[v][w]: directed path v -> w
  std::map<vertex_id, std::vector<int>> dist_memo;
  std::vector<vertex_id> phi;
  std::vector<char> used;
  std::vector<arc_id> tarc_order;  // arcs of t, tails embedded before processing
  std::map<std::string, vertex_id> n_leaf;
  std::map<arc_id, std::vector<arc_id>> cur_path;
  std::set<std::set<arc_id>> seen;
  bool stop = false;

  display_searcher(const xnetwork& net, const phylo_tree& tree, bool all, std::size_t b)
      : n(net), t(tree), enumerate_all(all), budget(b) {}

  void spend() {
    if (++out.expansions > budget)
      throw budget_exceeded("display search budget of " + std::to_string(budget) +
                            " exceeded");
  }

  const std::vector<int>& dist_to(vertex_id target) {
    auto it = dist_memo.find(target);
    if (it != dist_memo.end()) return it->second;
    std::vector<int> d(n.g.vertex_capacity(), -1);
    std::vector<vertex_id> queue{target};
    d[target] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      vertex_id v = queue[head];
      for (arc_id a : n.g.in_arcs(v)) {
        vertex_id u = n.g.arc(a).tail;
        if (d[u] < 0) {
          d[u] = d[v] + 1;
          queue.push_back(u);
        }
      }
    }
    return dist_memo.emplace(target, std::move(d)).first->second;
  }

  void record() {
    std::set<arc_id> arcs;
    for (const auto& [ta, path] : cur_path) {
      (void)ta;
      arcs.insert(path.begin(), path.end());
    }
    out.displayed = true;
    if (!enumerate_all) {
      stop = true;
      if (!out.witnesses.empty()) return;
    }
    if (!seen.insert(arcs).second) return;
    display_witness w;
    for (vertex_id v : t.g.vertices()) w.phi[v] = phi[v];
    w.arc_path = cur_path;
    out.witnesses.push_back(std::move(w));
  }

  void embed_arc(std::size_t idx) {
    if (stop) return;
    if (idx == tarc_order.size()) {
      record();
      return;
    }
    arc_id ta = tarc_order[idx];
    vertex_id a = t.g.arc(ta).tail;
    vertex_id b = t.g.arc(ta).head;
    vertex_id sa = phi[a];
    std::vector<arc_id> path;
    if (t.g.is_leaf(b)) {
      auto it = n_leaf.find(t.label.at(b));
      if (it == n_leaf.end()) return;
      if (!used[it->second]) path_dfs(sa, it->second, b, idx, path);
    } else {
      for (vertex_id cb : n.g.vertices()) {
        if (stop) return;
        if (used[cb] || n.g.is_leaf(cb) || !n.g.is_tree_vertex(cb)) continue;
        if (cb == sa || !reach[sa][cb]) continue;
        path_dfs(sa, cb, b, idx, path);
      }
    }
  }

  // all simple directed paths sa -> target through unused vertices, shorter
  // continuations first; on arrival the target becomes phi[b]
  void path_dfs(vertex_id cur, vertex_id target, vertex_id b, std::size_t idx,
                std::vector<arc_id>& path) {
    if (stop) return;
    const std::vector<int>& dist = dist_to(target);
    std::vector<std::pair<int, arc_id>> cand;
    for (arc_id a : n.g.out_arcs(cur)) {
      vertex_id h = n.g.arc(a).head;
      if (h == target)
        cand.push_back({0, a});
      else if (!used[h] && dist[h] > 0)
        cand.push_back({dist[h], a});
    }
    std::sort(cand.begin(), cand.end());
    for (const auto& [d, a] : cand) {
      (void)d;
      if (stop) return;
      spend();
      vertex_id h = n.g.arc(a).head;
      path.push_back(a);
      if (h == target) {
        used[target] = 1;
        phi[b] = target;
        cur_path[tarc_order[idx]] = path;
        embed_arc(idx + 1);
        cur_path.erase(tarc_order[idx]);
        phi[b] = no_vertex;
        used[target] = 0;
      } else {
        used[h] = 1;
        path_dfs(h, target, b, idx, path);
        used[h] = 0;
      }
      path.pop_back();
    }
  }

  void run() {
    if (t.g.root == no_vertex || n.g.root == no_vertex)
      throw std::logic_error("display search needs rooted graphs");
    reach.assign(n.g.vertex_capacity(), {});
    for (vertex_id v : n.g.vertices()) {
      std::vector<char> r(n.g.vertex_capacity(), 0);
      for (vertex_id w : n.g.descendants(v)) r[w] = 1;
      reach[v] = std::move(r);
    }
    for (vertex_id v : n.g.vertices())
      if (n.g.is_leaf(v)) n_leaf[n.label.at(v)] = v;
    phi.assign(t.g.vertex_capacity(), no_vertex);
    used.assign(n.g.vertex_capacity(), 0);

    // arcs of t in breadth-first order from the root, ascending arc ids
    std::vector<vertex_id> queue{t.g.root};
    for (std::size_t head = 0; head < queue.size(); ++head) {
      vertex_id v = queue[head];
      std::vector<arc_id> outs = t.g.out_arcs(v);
      std::sort(outs.begin(), outs.end());
      for (arc_id a : outs) {
        tarc_order.push_back(a);
        queue.push_back(t.g.arc(a).head);
      }
    }

    if (t.g.is_leaf(t.g.root)) {
      // single-vertex tree: displayed iff the taxon appears
      auto it = n_leaf.find(t.label.at(t.g.root));
      if (it != n_leaf.end()) {
        phi[t.g.root] = it->second;
        record();
      }
      return;
    }

    for (vertex_id v0 : n.g.vertices()) {
      if (stop) return;
      if (n.g.is_leaf(v0) || !n.g.is_tree_vertex(v0)) continue;
      spend();
      phi[t.g.root] = v0;
      used[v0] = 1;
      embed_arc(0);
      used[v0] = 0;
      phi[t.g.root] = no_vertex;
    }
  }
};

}  // namespace detail

inline display_search find_displays(const xnetwork& n, const phylo_tree& t,
                                    bool enumerate_all = false,
                                    std::size_t budget = default_search_budget) {
  detail::display_searcher s(n, t, enumerate_all, budget);
  s.run();
  return std::move(s.out);
}

inline bool displays(const xnetwork& n, const phylo_tree& t,
                     std::size_t budget = default_search_budget) {
  return find_displays(n, t, false, budget).displayed;
}

// independent structural validation of a witness, for tests and reports
inline bool verify_witness(const xnetwork& n, const phylo_tree& t, const display_witness& w,
                           std::string* why = nullptr) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  std::set<vertex_id> embedded;
  for (vertex_id v : t.g.vertices()) {
    auto it = w.phi.find(v);
    if (it == w.phi.end() || it->second == no_vertex) return fail("vertex not embedded");
    if (!embedded.insert(it->second).second) return fail("embedding not injective");
    if (t.g.is_leaf(v)) {
      auto lt = t.label.find(v);
      auto ln = n.label.find(it->second);
      if (lt == t.label.end() || ln == n.label.end() || lt->second != ln->second)
        return fail("leaf labels disagree");
    }
  }
  std::map<vertex_id, int> interior_uses;
  for (arc_id ta : t.g.arcs()) {
    auto it = w.arc_path.find(ta);
    if (it == w.arc_path.end() || it->second.empty()) return fail("arc without a path");
    vertex_id cur = w.phi.at(t.g.arc(ta).tail);
    for (arc_id a : it->second) {
      if (n.g.arc(a).tail != cur) return fail("path does not chain");
      cur = n.g.arc(a).head;
      if (cur != w.phi.at(t.g.arc(ta).head)) ++interior_uses[cur];
    }
    if (cur != w.phi.at(t.g.arc(ta).head)) return fail("path ends at the wrong vertex");
  }
  for (const auto& [v, uses] : interior_uses) {
    if (uses > 1) return fail("paths share an interior vertex");
    if (embedded.count(v)) return fail("path passes through an embedded vertex");
  }
  return true;
}

}  // namespace stablenet
