#pragma once

// deciders for displays, base trees, tree-child and reticulation-visibility;
// the class-map routes need a stable network, the structural routes do not

#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "stablenet/canonical.hpp"
#include "stablenet/core.hpp"
#include "stablenet/unfold.hpp"
#include "stablenet/xsets.hpp"

namespace stablenet {

struct not_stable_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// the input is outside the class a decider's theorem covers (the brute-force
// route still applies)
struct theorem_inapplicable : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct property_verdict {
  bool holds = false;
  std::string detail;
  std::optional<xset> witness;
  std::optional<xset> counterexample_xset;
  vertex_id counterexample_vertex = no_vertex;
  arc_id counterexample_arc = no_arc;

  explicit operator bool() const { return holds; }
};

inline property_verdict is_compressed(const xnetwork& n) {
  for (arc_id a : n.g.arcs()) {
    const arc_info& ai = n.g.arc(a);
    if (n.g.is_hybrid(ai.tail) && n.g.is_hybrid(ai.head)) {
      property_verdict v;
      v.detail = "arc " + std::to_string(ai.tail) + "->" + std::to_string(ai.head) +
                 " joins two hybrid vertices";
      v.counterexample_arc = a;
      return v;
    }
  }
  return {true, "no arc joins two hybrid vertices", {}, {}, no_vertex, no_arc};
}

// everything the class-map deciders keep asking for, computed once
struct stable_context {
  xnetwork n;
  unfold_result u;
  equiv_partition p;
  kappa_result k;
  std::vector<xset> xsets;
};

inline stable_context make_stable_context(const xnetwork& n, bool allow_xnetwork = false,
                                          std::size_t path_cap = default_path_cap,
                                          std::size_t xset_cap = 1000000) {
  validation_report r = allow_xnetwork ? validate_xnetwork(n) : validate_phylo_network(n);
  if (!r.ok()) throw std::invalid_argument("invalid network: " + r.str());
  stable_context ctx{n, unfold(n, path_cap), {}, {}, {}};
  ctx.p = similarity_classes(ctx.u.m);
  ctx.k = kappa(n, ctx.u, ctx.p);
  if (!ctx.k.bijective())
    throw not_stable_error("network is not stable: " + ctx.k.detail);
  ctx.xsets = all_xsets(ctx.u.m, xset_cap);
  return ctx;
}

namespace detail {

inline void check_same_taxa(const lnet& n, const lnet& t) {
  if (n.taxa() != t.taxa())
    throw std::invalid_argument("network and tree are on different taxa");
}

// Theorem thtb needs a branching root even on X-networks
inline void check_root_not_doubled(const xnetwork& n) {
  const std::vector<arc_id>& out = n.g.out_arcs(n.g.root);
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t j = i + 1; j < out.size(); ++j)
      if (n.g.arc(out[i]).head == n.g.arc(out[j]).head)
        throw theorem_inapplicable("root is the tail of two parallel arcs");
}

inline std::string describe_xset(const xset& c) {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (const auto& [x, leaf] : c) {
    if (!first) os << ", ";
    first = false;
    os << x << ":" << leaf;
  }
  os << "}";
  return os.str();
}

}  // namespace detail

// Theorem thfm: displayed iff some endorsing X-set has an injective class map
inline property_verdict displays_stable(const stable_context& ctx, const phylo_tree& t) {
  detail::check_same_taxa(ctx.n, t);
  for (const xset& c : ctx.xsets) {
    spanned_tree s = span_xset(ctx.u.m, c);
    if (!endorses(s, t)) continue;
    if (xibar_injective(s, ctx.p)) {
      property_verdict v;
      v.holds = true;
      v.detail = "endorsing X-set " + detail::describe_xset(c) + " has an injective class map";
      v.witness = c;
      return v;
    }
  }
  return {false, "no endorsing X-set has an injective class map", {}, {}, no_vertex, no_arc};
}

// Theorem thtb: base tree iff some endorsing X-set maps onto every class
inline property_verdict is_base_tree_stable(const stable_context& ctx, const phylo_tree& t) {
  detail::check_same_taxa(ctx.n, t);
  detail::check_root_not_doubled(ctx.n);
  for (const xset& c : ctx.xsets) {
    spanned_tree s = span_xset(ctx.u.m, c);
    if (!endorses(s, t)) continue;
    if (xibar_bijective(s, ctx.p)) {
      property_verdict v;
      v.holds = true;
      v.detail = "endorsing X-set " + detail::describe_xset(c) + " has a bijective class map";
      v.witness = c;
      return v;
    }
  }
  return {false, "no endorsing X-set has a bijective class map", {}, {}, no_vertex, no_arc};
}

inline property_verdict is_tree_based_stable(const stable_context& ctx) {
  detail::check_root_not_doubled(ctx.n);
  for (const xset& c : ctx.xsets) {
    spanned_tree s = span_xset(ctx.u.m, c);
    if (xibar_bijective(s, ctx.p)) {
      property_verdict v;
      v.holds = true;
      v.detail = "X-set " + detail::describe_xset(c) + " has a bijective class map";
      v.witness = c;
      return v;
    }
  }
  return {false, "no X-set has a bijective class map", {}, {}, no_vertex, no_arc};
}

// w lies on every root-to-x path exactly when deleting w strands the leaf
inline bool vertex_stable_ancestor(const xnetwork& n, vertex_id w, const std::string& x) {
  if (n.g.is_leaf(w)) throw std::invalid_argument("vertex-stable ancestors are interior");
  vertex_id target = n.leaf_of(x);
  if (w == n.g.root) return true;
  digraph g = n.g;
  g.remove_vertex(w);
  return !is_below(g, target, g.root);
}

// Proposition prstan: for a stable network, an interior tree vertex is a
// vertex-stable ancestor of some leaf iff every X-set either shows its class
// in the spanned image or roots below it
inline bool prstan_check(const stable_context& ctx, vertex_id v) {
  if (ctx.n.g.is_leaf(v) || ctx.n.g.is_hybrid(v))
    throw std::invalid_argument("expected an interior tree vertex");
  int vclass = ctx.k.class_of_vertex.at(v);
  for (const xset& c : ctx.xsets) {
    spanned_tree s = span_xset(ctx.u.m, c);
    if (xibar_image(s, ctx.p).count(vclass)) continue;
    vertex_id anchor = ctx.k.vertex_of_class[ctx.p.class_of[s.root]];
    if (is_below(ctx.n.g, anchor, v)) continue;
    return false;
  }
  return true;
}

enum class tc_route {
  child_scan,              // definition: every interior vertex has a tree child
  visibility,              // every interior vertex is a vertex-stable ancestor
  visibility_compressed,   // compressed and every interior tree vertex is one
  xset_images,             // Theorem thtc(i); stable networks only
};

inline property_verdict is_tree_child(const xnetwork& n,
                                      tc_route route = tc_route::child_scan,
                                      const stable_context* ctx = nullptr) {
  property_verdict v;
  switch (route) {
    case tc_route::child_scan: {
      for (vertex_id w : n.g.vertices()) {
        if (n.g.is_leaf(w)) continue;
        bool ok = false;
        for (vertex_id c : n.g.children(w))
          if (n.g.is_tree_vertex(c)) ok = true;
        if (!ok) {
          v.detail = "every child of vertex " + std::to_string(w) + " is hybrid";
          v.counterexample_vertex = w;
          return v;
        }
      }
      v.holds = true;
      v.detail = "every interior vertex has a tree child";
      return v;
    }
    case tc_route::visibility:
    case tc_route::visibility_compressed: {
      if (route == tc_route::visibility_compressed) {
        property_verdict comp = is_compressed(n);
        if (!comp.holds) return comp;
      }
      for (vertex_id w : n.g.vertices()) {
        if (n.g.is_leaf(w)) continue;
        if (route == tc_route::visibility_compressed && n.g.is_hybrid(w)) continue;
        bool seen = false;
        for (const std::string& x : n.taxa())
          if (vertex_stable_ancestor(n, w, x)) seen = true;
        if (!seen) {
          v.detail = "vertex " + std::to_string(w) + " is stable for no leaf";
          v.counterexample_vertex = w;
          return v;
        }
      }
      v.holds = true;
      v.detail = "every interior vertex is a vertex-stable ancestor";
      return v;
    }
    case tc_route::xset_images: {
      if (ctx == nullptr) throw std::invalid_argument("the class-map route needs a context");
      for (const xset& c : ctx->xsets) {
        spanned_tree s = span_xset(ctx->u.m, c);
        if (xibar_image(s, ctx->p) != vmc_classes(ctx->u.m, s.root, ctx->p)) {
          v.detail = "X-set " + detail::describe_xset(c) +
                     " spans fewer classes than the root-free region";
          v.counterexample_xset = c;
          return v;
        }
      }
      v.holds = true;
      v.detail = "every X-set spans exactly the root-free region's classes";
      return v;
    }
  }
  throw std::logic_error("unreachable");
}

enum class rv_route {
  visibility,    // definition: every hybrid vertex is a vertex-stable ancestor
  xset_classes,  // Theorem thtc(ii); stable networks only
};

inline property_verdict is_reticulation_visible(const xnetwork& n,
                                                rv_route route = rv_route::visibility,
                                                const stable_context* ctx = nullptr) {
  property_verdict v;
  switch (route) {
    case rv_route::visibility: {
      for (vertex_id w : n.g.vertices()) {
        if (!n.g.is_hybrid(w)) continue;
        bool seen = false;
        for (const std::string& x : n.taxa())
          if (vertex_stable_ancestor(n, w, x)) seen = true;
        if (!seen) {
          v.detail = "hybrid vertex " + std::to_string(w) + " is stable for no leaf";
          v.counterexample_vertex = w;
          return v;
        }
      }
      v.holds = true;
      v.detail = "every hybrid vertex is a vertex-stable ancestor";
      return v;
    }
    case rv_route::xset_classes: {
      if (ctx == nullptr) throw std::invalid_argument("the class-map route needs a context");
      const mul_tree& m = ctx->u.m;
      for (const xset& c : ctx->xsets) {
        spanned_tree s = span_xset(m, c);
        std::set<int> img = xibar_image(s, ctx->p);
        for (vertex_id w : m.g.vertices()) {
          if (w == m.g.root) continue;
          vertex_id parent = m.g.parent(w);
          if (ctx->p.class_size(parent) >= ctx->p.class_size(w)) continue;
          if (!img.count(ctx->p.class_of[w])) {
            v.detail = "class of duplicated vertex " + std::to_string(w) +
                       " missed by X-set " + detail::describe_xset(c);
            v.counterexample_xset = c;
            v.counterexample_vertex = w;
            return v;
          }
        }
      }
      v.holds = true;
      v.detail = "every duplicated class is covered by every X-set";
      return v;
    }
  }
  throw std::logic_error("unreachable");
}

// displayed with the root of the tree placed at the root of the network
inline bool strongly_displays_stable(const stable_context& ctx, const phylo_tree& t) {
  detail::check_same_taxa(ctx.n, t);
  for (const xset& c : ctx.xsets) {
    spanned_tree s = span_xset(ctx.u.m, c);
    if (s.root != ctx.u.m.g.root) continue;
    if (endorses(s, t) && xibar_injective(s, ctx.p)) return true;
  }
  return false;
}

// Corollary strongly-display: on a stable tree-child network, every strongly
// displayed tree is a base tree
inline property_verdict corollary_strong_display(const stable_context& ctx) {
  if (!is_tree_child(ctx.n).holds)
    throw std::invalid_argument("the corollary requires a tree-child network");
  property_verdict v;
  for (const xset& c : ctx.xsets) {
    spanned_tree s = span_xset(ctx.u.m, c);
    if (s.root != ctx.u.m.g.root || !xibar_injective(s, ctx.p)) continue;
    if (!is_base_tree_stable(ctx, s.suppressed).holds) {
      v.detail = "strongly displayed tree from X-set " + detail::describe_xset(c) +
                 " is not a base tree";
      v.counterexample_xset = c;
      return v;
    }
  }
  v.holds = true;
  v.detail = "every strongly displayed tree is a base tree";
  return v;
}

}  // namespace stablenet
