#pragma once

// Serialization: extended Newick for networks (hybrid vertices appear once
// per in-arc under a #Hk tag, exactly one occurrence carrying the subtree),
// plain Newick with repeated labels for MUL-trees, and DOT export. Printing
// is deterministic: children are ordered by a structural rank computed
// bottom-up, so the output never depends on internal vertex numbering.

#include <stablenet/core.hpp>

#include <cctype>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace stablenet {

class parse_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace detail {

struct newick_parser {
  const std::string& s;
  std::size_t i = 0;
  lnet net;
  std::map<int, vertex_id> tag_vertex;
  std::set<int> expanded;

  explicit newick_parser(const std::string& text) : s(text) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw parse_error(msg + " at position " + std::to_string(i));
  }

  void skip_ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }

  char peek() {
    skip_ws();
    return i < s.size() ? s[i] : '\0';
  }

  static bool name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-';
  }

  std::string read_name() {
    skip_ws();
    std::size_t b = i;
    while (i < s.size() && name_char(s[i])) ++i;
    return s.substr(b, i - b);
  }

  int read_tag() {
    ++i;  // '#'
    if (i >= s.size() || s[i] != 'H') fail("expected H after #");
    ++i;
    int t = 0, digits = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      t = t * 10 + (s[i] - '0');
      ++i;
      if (++digits > 8) fail("hybrid tag number too long");
    }
    if (digits == 0) fail("expected digits after #H");
    return t;
  }

  vertex_id parse_subtree() {
    std::vector<vertex_id> kids;
    bool has_children = peek() == '(';
    if (has_children) {
      ++i;
      kids.push_back(parse_subtree());
      while (peek() == ',') {
        ++i;
        kids.push_back(parse_subtree());
      }
      if (peek() != ')') fail("expected , or )");
      ++i;
    }
    std::string name = read_name();
    skip_ws();
    bool has_tag = i < s.size() && s[i] == '#';
    if (has_tag) {
      int t = read_tag();
      auto [it, fresh] = tag_vertex.try_emplace(t, no_vertex);
      if (fresh) it->second = net.g.add_vertex();
      vertex_id v = it->second;
      if (has_children) {
        if (!expanded.insert(t).second)
          fail("hybrid tag #H" + std::to_string(t) + " given a subtree twice");
        for (vertex_id k : kids) net.g.add_arc(v, k);
      }
      return v;
    }
    vertex_id v = net.g.add_vertex();
    if (has_children) {
      for (vertex_id k : kids) net.g.add_arc(v, k);
      // an untagged interior name carries no meaning here; drop it
    } else {
      if (name.empty()) fail("expected a leaf label");
      net.label[v] = name;
    }
    return v;
  }

  lnet parse() {
    vertex_id r = parse_subtree();
    if (peek() != ';') fail("expected ;");
    ++i;
    skip_ws();
    if (i != s.size()) fail("trailing characters after ;");
    for (const auto& [t, v] : tag_vertex) {
      (void)v;
      if (!expanded.count(t)) fail("hybrid tag #H" + std::to_string(t) + " has no subtree");
    }
    net.g.root = r;
    return std::move(net);
  }
};

// numbering-invariant structural ranks: vertices are grouped by height and
// distinct (label, hybrid flag, child ranks) keys are ranked in sorted order
inline std::vector<int> print_ranks(const lnet& n) {
  std::vector<int> height(n.g.vertex_capacity(), 0);
  std::vector<vertex_id> order = n.g.topo_order();
  int max_h = 0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    vertex_id v = *it;
    int h = 0;
    for (arc_id a : n.g.out_arcs(v)) h = std::max(h, height[n.g.arc(a).head] + 1);
    height[v] = h;
    max_h = std::max(max_h, h);
  }
  std::vector<std::vector<vertex_id>> by_height(max_h + 1);
  for (vertex_id v : n.g.vertices()) by_height[height[v]].push_back(v);

  using key = std::tuple<std::string, int, std::vector<int>>;
  std::vector<int> rank(n.g.vertex_capacity(), -1);
  int base = 0;
  for (int h = 0; h <= max_h; ++h) {
    std::map<key, std::vector<vertex_id>> groups;
    for (vertex_id v : by_height[h]) {
      std::string label;
      auto lit = n.label.find(v);
      if (lit != n.label.end()) label = lit->second;
      std::vector<int> kids;
      for (arc_id a : n.g.out_arcs(v)) kids.push_back(rank[n.g.arc(a).head]);
      std::sort(kids.begin(), kids.end());
      groups[{label, n.g.is_hybrid(v) ? 1 : 0, std::move(kids)}].push_back(v);
    }
    for (const auto& [k, vs] : groups) {
      (void)k;
      for (vertex_id v : vs) rank[v] = base;
      ++base;
    }
  }
  return rank;
}

}  // namespace detail

// extended Newick (plain Newick is the hybrid-free special case); repeated
// leaf labels are accepted, so the same entry point reads MUL-trees
inline lnet parse_newick(const std::string& text) {
  detail::newick_parser p(text);
  return p.parse();
}

// deterministic Newick form; hybrid vertices get #Hk tags numbered by first
// occurrence in print order, which is also the occurrence that carries the
// subtree
inline std::string print_newick(const lnet& n) {
  if (n.g.root == no_vertex) throw std::logic_error("print_newick: graph has no root");
  std::vector<int> rank = detail::print_ranks(n);

  struct frame {
    vertex_id v;
    bool expand;
    std::vector<vertex_id> kids;  // heads in print order
    std::size_t next = 0;
  };
  std::map<vertex_id, int> tag;
  int next_tag = 1;
  std::string out;
  std::vector<frame> stack;

  auto enter = [&](vertex_id v) {
    frame f;
    f.v = v;
    f.expand = true;
    if (n.g.is_hybrid(v)) {
      auto [it, fresh] = tag.try_emplace(v, next_tag);
      if (fresh)
        ++next_tag;
      else
        f.expand = false;
      (void)it;
    }
    if (f.expand && !n.g.is_leaf(v)) {
      std::vector<std::tuple<int, vertex_id, arc_id>> occ;
      for (arc_id a : n.g.out_arcs(v)) occ.push_back({rank[n.g.arc(a).head], n.g.arc(a).head, a});
      std::sort(occ.begin(), occ.end());
      for (const auto& [r, head, a] : occ) {
        (void)r;
        (void)a;
        f.kids.push_back(head);
      }
    }
    stack.push_back(std::move(f));
  };

  auto close = [&](const frame& f) {
    if (f.expand && n.g.is_leaf(f.v)) {
      auto lit = n.label.find(f.v);
      if (lit == n.label.end()) throw std::logic_error("print_newick: unlabelled leaf");
      out += lit->second;
    }
    if (n.g.is_hybrid(f.v)) out += "#H" + std::to_string(tag.at(f.v));
  };

  enter(n.g.root);
  while (!stack.empty()) {
    frame& f = stack.back();
    bool interior = f.expand && !n.g.is_leaf(f.v);
    if (!interior) {
      close(f);
      stack.pop_back();
      continue;
    }
    if (f.next == 0) out += "(";
    if (f.next < f.kids.size()) {
      if (f.next > 0) out += ",";
      vertex_id k = f.kids[f.next];
      ++f.next;
      enter(k);  // may invalidate f
      continue;
    }
    out += ")";
    frame done = stack.back();
    stack.pop_back();
    close(done);
  }
  return out + ";";
}

// ------------------------------------------------------------------- DOT

struct dot_options {
  std::set<arc_id> highlight_arcs;  // drawn bold and colored, rest dimmed
  std::string graph_name = "stablenet";
};

inline std::string to_dot(const lnet& n, const dot_options& opt = {}) {
  std::ostringstream os;
  os << "digraph " << opt.graph_name << " {\n";
  os << "  rankdir=TB;\n  node [fontname=\"Helvetica\"];\n";
  for (vertex_id v : n.g.vertices()) {
    os << "  v" << v << " [";
    if (n.g.is_leaf(v)) {
      auto lit = n.label.find(v);
      os << "shape=none, label=\"" << (lit == n.label.end() ? "?" : lit->second) << "\"";
    } else if (n.g.is_hybrid(v)) {
      os << "shape=diamond, style=filled, fillcolor=lightskyblue, label=\"\", "
            "width=0.28, height=0.28";
    } else {
      os << "shape=circle, style=filled, fillcolor=black, label=\"\", width=0.12";
      if (v == n.g.root) os << ", peripheries=2";
    }
    os << "];\n";
  }
  bool overlay = !opt.highlight_arcs.empty();
  for (arc_id a : n.g.arcs()) {
    os << "  v" << n.g.arc(a).tail << " -> v" << n.g.arc(a).head;
    if (overlay) {
      if (opt.highlight_arcs.count(a))
        os << " [color=crimson, penwidth=2.2]";
      else
        os << " [color=gray60]";
    }
    os << ";\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace stablenet
