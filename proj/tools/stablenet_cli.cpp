// command line front end: serializers, theorem-based deciders, and the
// brute-force switching oracles behind one binary
//
// exit codes: 0 property holds / operation succeeded, 1 property fails,
// 2 input error, 3 budget exceeded, 4 decider and oracle disagree (--both)

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "stablenet/foldup.hpp"
#include "stablenet/io.hpp"
#include "stablenet/oracles.hpp"
#include "stablenet/properties.hpp"
#include "stablenet/subnetworks.hpp"
#include "stablenet/unfold.hpp"
#include "stablenet/xsets.hpp"

using nlohmann::json;
using namespace stablenet;

namespace {

constexpr int exit_holds = 0;
constexpr int exit_fails = 1;
constexpr int exit_input = 2;
constexpr int exit_budget = 3;
constexpr int exit_disagree = 4;

struct options {
  std::string format = "enewick";  // enewick | json | dot
  std::size_t path_cap = default_path_cap;
  std::size_t xset_cap = 1000000;
  bool oracle = false;
  bool both = false;
  unsigned long long seed = 0;
  bool seeded = false;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

lnet load_any(const std::string& path) { return parse_newick(slurp(path)); }

xnetwork load_network(const std::string& path) {
  lnet n = load_any(path);
  validation_report r = validate_xnetwork(n);
  if (!r.ok()) throw std::invalid_argument(path + " is not a valid network:\n" + r.str());
  return n;
}

mul_tree load_multree(const std::string& path) {
  lnet n = load_any(path);
  validation_report r = validate_multree(n);
  if (!r.ok()) throw std::invalid_argument(path + " is not a valid MUL-tree:\n" + r.str());
  return n;
}

phylo_tree load_tree(const std::string& path) {
  lnet n = load_any(path);
  validation_report r = validate_phylo_tree(n);
  if (!r.ok())
    throw std::invalid_argument(path + " is not a valid phylogenetic tree:\n" + r.str());
  return n;
}

int num_hybrids(const lnet& n) {
  int count = 0;
  for (vertex_id v : n.g.vertices())
    if (n.g.indeg(v) >= 2) ++count;
  return count;
}

json network_json(const lnet& n) {
  return json{{"newick", print_newick(n)},
              {"taxa", n.taxa()},
              {"num_vertices", n.g.num_vertices()},
              {"num_arcs", n.g.num_arcs()},
              {"num_hybrids", num_hybrids(n)}};
}

void emit_structure(const lnet& n, const options& opt, const json& extra = {}) {
  if (opt.format == "dot") {
    std::cout << to_dot(n);
  } else if (opt.format == "json") {
    json j = network_json(n);
    if (extra.is_object())
      for (const auto& [k, v] : extra.items()) j[k] = v;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << print_newick(n) << "\n";
  }
}

json xset_json(const xset& c) {
  json j = json::object();
  for (const auto& [taxon, leaf] : c) j[taxon] = leaf;
  return j;
}

// uniform verdict output; exit code carries the answer
int emit_verdict(const std::string& property, bool holds, const options& opt,
                 const json& extra = {}) {
  if (opt.format == "json") {
    json j{{"property", property}, {"holds", holds}};
    if (extra.is_object())
      for (const auto& [k, v] : extra.items()) j[k] = v;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << property << ": " << (holds ? "yes" : "no") << "\n";
    if (extra.contains("route")) std::cout << "route: " << extra["route"].get<std::string>() << "\n";
    if (extra.contains("note")) std::cout << "note: " << extra["note"].get<std::string>() << "\n";
    if (extra.contains("detail")) std::cout << "detail: " << extra["detail"].get<std::string>() << "\n";
  }
  return holds ? exit_holds : exit_fails;
}

// run a theorem-based decider where its hypotheses hold, otherwise (or on
// request) the independent switching oracle; --both cross-checks the two
int decide(const std::string& property, const options& opt,
           const std::function<std::optional<std::pair<bool, json>>()>& decider,
           const std::function<bool()>& oracle) {
  if (opt.oracle) return emit_verdict(property, oracle(), opt, {{"route", "switching-oracle"}});
  std::optional<std::pair<bool, json>> d = decider();
  if (opt.both) {
    bool o = oracle();
    if (d && d->first != o) {
      std::cerr << "disagreement on " << property << ": decider says "
                << (d->first ? "yes" : "no") << ", oracle says " << (o ? "yes" : "no")
                << "\n";
      return exit_disagree;
    }
    json extra = d ? d->second : json{{"note", "decider inapplicable; oracle only"}};
    extra["route"] = d ? "endorsed-xset+switching-oracle" : "switching-oracle";
    return emit_verdict(property, o, opt, extra);
  }
  if (d) return emit_verdict(property, d->first, opt, d->second);
  return emit_verdict(property, oracle(), opt,
                      {{"route", "switching-oracle"},
                       {"note", "decider inapplicable on this input; fell back to the "
                                "switching oracle"}});
}

// decider wrapper that treats instability and uncovered input classes as
// "inapplicable" and lets real input errors escape
std::optional<std::pair<bool, json>> try_stable_decider(
    const std::function<std::pair<bool, json>()>& body) {
  try {
    return body();
  } catch (const not_stable_error&) {
    return std::nullopt;
  } catch (const theorem_inapplicable&) {
    return std::nullopt;
  }
}

double ms_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stable phylogenetic networks: un-fold, fold-up, and theorem-based deciders"};
  app.require_subcommand(1);
  options opt;
  if (const char* cap = std::getenv("STABLENET_PATH_CAP")) opt.path_cap = std::stoull(cap);

  std::string file_a, file_b, taxa_csv;
  std::string as_class = "any", kind = "auto";
  int rc = exit_holds;

  auto add_common = [&](CLI::App* sub, bool with_oracle) {
    sub->add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"enewick", "json", "dot"}));
    sub->add_option("--path-cap", opt.path_cap,
                    "largest number of root paths an un-fold may produce");
    sub->add_option("--limit-xsets", opt.xset_cap, "largest X-set family to enumerate");
    if (with_oracle) {
      sub->add_flag("--oracle", opt.oracle, "use the brute-force switching oracle only");
      sub->add_flag("--both", opt.both, "run decider and oracle; disagreement exits 4");
    }
  };

  // ------------------------------------------------------------ validate
  CLI::App* validate = app.add_subcommand("validate", "check which structure classes a file satisfies");
  validate->add_option("file", file_a)->required();
  validate->add_option("--as", as_class, "class that must hold for exit 0")
      ->check(CLI::IsMember({"any", "xnetwork", "phylo-network", "phylo-tree", "multree"}));
  add_common(validate, false);
  validate->callback([&] {
    lnet n = load_any(file_a);
    std::map<std::string, validation_report> reports{
        {"xnetwork", validate_xnetwork(n)},
        {"phylo-network", validate_phylo_network(n)},
        {"phylo-tree", validate_phylo_tree(n)},
        {"multree", validate_multree(n)}};
    bool pass = as_class == "any"
                    ? reports.at("xnetwork").ok() || reports.at("multree").ok()
                    : reports.at(as_class).ok();
    if (opt.format == "json") {
      json j{{"property", "validate"}, {"holds", pass}, {"as", as_class}};
      for (const auto& [name, r] : reports)
        j["classes"][name] = r.ok() ? json{{"ok", true}}
                                    : json{{"ok", false}, {"violations", r.str()}};
      std::cout << j.dump(2) << "\n";
    } else {
      for (const auto& [name, r] : reports) {
        std::cout << name << ": " << (r.ok() ? "ok" : "invalid") << "\n";
        if (!r.ok()) {
          std::istringstream lines(r.str());
          for (std::string line; std::getline(lines, line);)
            std::cout << "  " << line << "\n";
        }
      }
    }
    rc = pass ? exit_holds : exit_fails;
  });

  // ------------------------------------------------------------ unfold / foldup
  CLI::App* cmd_unfold = app.add_subcommand("unfold", "un-fold a network into its MUL-tree");
  cmd_unfold->add_option("file", file_a)->required();
  add_common(cmd_unfold, false);
  cmd_unfold->callback([&] {
    xnetwork n = load_network(file_a);
    unfold_result u = unfold(n, opt.path_cap);
    json extra;
    extra["leaf_multiplicities"] = json::object();
    for (const auto& [x, leaves] : u.m.mu())
      extra["leaf_multiplicities"][x] = leaves.size();
    emit_structure(u.m, opt, extra);
  });

  CLI::App* cmd_foldup = app.add_subcommand("foldup", "fold a MUL-tree up into a network");
  cmd_foldup->add_option("file", file_a)->required();
  cmd_foldup->add_option("--seed", opt.seed, "randomize merge order (result is order-independent)");
  add_common(cmd_foldup, false);
  cmd_foldup->callback([&] {
    mul_tree m = load_multree(file_a);
    fold_options fo;
    std::mt19937_64 rng(opt.seed);
    if (cmd_foldup->count("--seed") > 0) fo.rng = &rng;
    fold_result f = fold_up(m, fo);
    emit_structure(f.net, opt, json{{"rounds", f.trace.size()}});
  });

  // ------------------------------------------------------------ plain predicates
  CLI::App* cmd_stable = app.add_subcommand("is-stable", "does folding the un-fold give the network back");
  cmd_stable->add_option("file", file_a)->required();
  add_common(cmd_stable, false);
  cmd_stable->callback([&] {
    xnetwork n = load_network(file_a);
    rc = emit_verdict("stable", is_stable(n, opt.path_cap), opt);
  });

  CLI::App* cmd_sound = app.add_subcommand("is-sound", "does the MUL-tree fold up without parallel arcs");
  cmd_sound->add_option("file", file_a)->required();
  add_common(cmd_sound, false);
  cmd_sound->callback([&] {
    mul_tree m = load_multree(file_a);
    rc = emit_verdict("sound", is_sound(m), opt);
  });

  // ------------------------------------------------------------ display deciders
  CLI::App* cmd_displays = app.add_subcommand("displays", "does the network display the tree");
  cmd_displays->add_option("network", file_a)->required();
  cmd_displays->add_option("tree", file_b)->required();
  add_common(cmd_displays, true);
  cmd_displays->callback([&] {
    xnetwork n = load_network(file_a);
    phylo_tree t = load_tree(file_b);
    if (n.taxa() != t.taxa())
      throw std::invalid_argument("network and tree must share one taxon set");
    rc = decide(
        "displays", opt,
        [&] {
          return try_stable_decider([&]() -> std::pair<bool, json> {
            stable_context ctx = make_stable_context(n, true, opt.path_cap, opt.xset_cap);
            property_verdict v = displays_stable(ctx, t);
            json extra{{"route", "endorsed-xset"}, {"detail", v.detail}};
            if (v.witness) extra["witness"] = xset_json(*v.witness);
            return {v.holds, extra};
          });
        },
        [&] { return oracle_displays(n, t); });
  });

  CLI::App* cmd_base = app.add_subcommand("is-base-tree", "is the tree a base tree of the network");
  cmd_base->add_option("network", file_a)->required();
  cmd_base->add_option("tree", file_b)->required();
  add_common(cmd_base, true);
  cmd_base->callback([&] {
    xnetwork n = load_network(file_a);
    phylo_tree t = load_tree(file_b);
    if (n.taxa() != t.taxa())
      throw std::invalid_argument("network and tree must share one taxon set");
    rc = decide(
        "base-tree", opt,
        [&] {
          return try_stable_decider([&]() -> std::pair<bool, json> {
            stable_context ctx = make_stable_context(n, true, opt.path_cap, opt.xset_cap);
            property_verdict v = is_base_tree_stable(ctx, t);
            json extra{{"route", "endorsed-xset"}, {"detail", v.detail}};
            if (v.witness) extra["witness"] = xset_json(*v.witness);
            return {v.holds, extra};
          });
        },
        [&] { return oracle_is_base_tree(n, t); });
  });

  CLI::App* cmd_tb = app.add_subcommand("is-tree-based", "does some displayed tree span the network");
  cmd_tb->add_option("network", file_a)->required();
  add_common(cmd_tb, true);
  cmd_tb->callback([&] {
    xnetwork n = load_network(file_a);
    rc = decide(
        "tree-based", opt,
        [&] {
          return try_stable_decider([&]() -> std::pair<bool, json> {
            stable_context ctx = make_stable_context(n, true, opt.path_cap, opt.xset_cap);
            property_verdict v = is_tree_based_stable(ctx);
            json extra{{"route", "bijective-xset"}, {"detail", v.detail}};
            if (v.witness) extra["witness"] = xset_json(*v.witness);
            return {v.holds, extra};
          });
        },
        [&] { return oracle_is_tree_based(n); });
  });

  CLI::App* cmd_tc = app.add_subcommand("is-tree-child", "does every interior vertex have a tree-vertex child");
  cmd_tc->add_option("network", file_a)->required();
  add_common(cmd_tc, true);
  cmd_tc->callback([&] {
    xnetwork n = load_network(file_a);
    rc = decide(
        "tree-child", opt,
        [&]() -> std::optional<std::pair<bool, json>> {
          property_verdict v = is_tree_child(n, tc_route::child_scan);
          json extra{{"route", "child-scan"}, {"detail", v.detail}};
          if (v.counterexample_vertex != no_vertex)
            extra["counterexample_vertex"] = v.counterexample_vertex;
          return {{v.holds, extra}};
        },
        [&] { return oracle_is_tree_child(n); });
  });

  CLI::App* cmd_rv = app.add_subcommand("is-reticulation-visible",
                                        "is every hybrid vertex visible from some taxon");
  cmd_rv->add_option("network", file_a)->required();
  add_common(cmd_rv, true);
  cmd_rv->callback([&] {
    xnetwork n = load_network(file_a);
    rc = decide(
        "reticulation-visible", opt,
        [&]() -> std::optional<std::pair<bool, json>> {
          property_verdict v = is_reticulation_visible(n, rv_route::visibility);
          json extra{{"route", "visibility"}, {"detail", v.detail}};
          if (v.counterexample_vertex != no_vertex)
            extra["counterexample_vertex"] = v.counterexample_vertex;
          return {{v.holds, extra}};
        },
        [&] { return oracle_is_reticulation_visible(n); });
  });

  // ------------------------------------------------------------ subnetworks
  CLI::App* cmd_trinets = app.add_subcommand("trinets", "every induced three-taxon subnetwork");
  cmd_trinets->add_option("file", file_a)->required();
  add_common(cmd_trinets, false);
  cmd_trinets->callback([&] {
    xnetwork n = load_network(file_a);
    if (opt.format == "dot")
      throw std::invalid_argument("dot output covers a single structure; use enewick or json");
    auto all = trinets(n);
    if (opt.format == "json") {
      json j = json::array();
      for (const auto& [y, sub] : all) j.push_back({{"taxa", y}, {"newick", print_newick(sub)}});
      std::cout << j.dump(2) << "\n";
    } else {
      for (const auto& [y, sub] : all) {
        std::cout << y[0] << "," << y[1] << "," << y[2] << "\t" << print_newick(sub) << "\n";
      }
    }
  });

  CLI::App* cmd_triplets = app.add_subcommand("triplets", "every displayed rooted triplet");
  cmd_triplets->add_option("file", file_a)->required();
  add_common(cmd_triplets, false);
  cmd_triplets->callback([&] {
    xnetwork n = load_network(file_a);
    if (opt.format == "dot")
      throw std::invalid_argument("dot output covers a single structure; use enewick or json");
    std::set<std::string> codes = triplets(n);
    if (opt.format == "json") {
      std::cout << json(codes).dump(2) << "\n";
    } else {
      for (const std::string& code : codes) std::cout << code << "\n";
    }
  });

  CLI::App* cmd_mul = app.add_subcommand("mul-triplets", "every displayed MUL-triplet of a MUL-tree");
  cmd_mul->add_option("file", file_a)->required();
  add_common(cmd_mul, false);
  cmd_mul->callback([&] {
    mul_tree m = load_multree(file_a);
    if (opt.format == "dot")
      throw std::invalid_argument("dot output covers a single structure; use enewick or json");
    std::vector<vertex_id> leaves;
    for (const auto& [v, label] : m.label) {
      (void)label;
      leaves.push_back(v);
    }
    std::map<std::string, std::string> reps;  // canonical code -> newick
    for (std::size_t i = 0; i < leaves.size(); ++i)
      for (std::size_t j = i + 1; j < leaves.size(); ++j)
        for (std::size_t k = j + 1; k < leaves.size(); ++k) {
          mul_tree tau = stablenet::detail::spanned_triple(m, leaves[i], leaves[j], leaves[k]);
          reps.emplace(canon_code_string(tau), print_newick(tau));
        }
    if (opt.format == "json") {
      json j = json::array();
      for (const auto& [code, newick] : reps) {
        (void)code;
        j.push_back(newick);
      }
      std::cout << j.dump(2) << "\n";
    } else {
      for (const auto& [code, newick] : reps) {
        (void)code;
        std::cout << newick << "\n";
      }
    }
  });

  CLI::App* cmd_restrict = app.add_subcommand("restrict", "restrict a network or MUL-tree to given taxa");
  cmd_restrict->add_option("file", file_a)->required();
  cmd_restrict->add_option("--taxa", taxa_csv, "comma-separated taxa to keep")->required();
  add_common(cmd_restrict, false);
  cmd_restrict->callback([&] {
    std::vector<std::string> y;
    std::istringstream parts(taxa_csv);
    for (std::string part; std::getline(parts, part, ',');)
      if (!part.empty()) y.push_back(part);
    lnet n = load_any(file_a);
    if (validate_xnetwork(n).ok()) {
      emit_structure(induced_subnetwork(n, y), opt);
    } else if (validate_multree(n).ok()) {
      emit_structure(restrict_multree(n, y), opt);
    } else {
      throw std::invalid_argument(file_a + " is neither a valid network nor a valid MUL-tree");
    }
  });

  // ------------------------------------------------------------ compare
  CLI::App* cmd_compare = app.add_subcommand("compare", "isomorphism of two structures");
  cmd_compare->add_option("first", file_a)->required();
  cmd_compare->add_option("second", file_b)->required();
  cmd_compare->add_option("--kind", kind, "how to compare")
      ->check(CLI::IsMember({"auto", "network", "multree"}));
  add_common(cmd_compare, false);
  cmd_compare->callback([&] {
    lnet a = load_any(file_a), b = load_any(file_b);
    std::string resolved = kind;
    if (resolved == "auto")
      resolved = validate_xnetwork(a).ok() && validate_xnetwork(b).ok() ? "network" : "multree";
    bool iso;
    if (resolved == "network") {
      if (!validate_xnetwork(a).ok() || !validate_xnetwork(b).ok())
        throw std::invalid_argument("both inputs must be valid networks for --kind network");
      iso = xnetwork_isomorphic(a, b);
    } else {
      if (!validate_multree(a).ok() || !validate_multree(b).ok())
        throw std::invalid_argument("both inputs must be valid MUL-trees for --kind multree");
      iso = multree_isomorphic(a, b);
    }
    rc = emit_verdict("isomorphic", iso, opt, {{"kind", resolved}});
  });

  // ------------------------------------------------------------ report
  CLI::App* cmd_report = app.add_subcommand("report", "full machine-readable analysis of a network");
  cmd_report->add_option("file", file_a)->required();
  add_common(cmd_report, false);
  cmd_report->callback([&] {
    auto started = std::chrono::steady_clock::now();
    lnet raw = load_any(file_a);
    json j{{"schema_version", 1}};
    j["input"] = {{"path", file_a},
                  {"taxa", raw.taxa()},
                  {"num_vertices", raw.g.num_vertices()},
                  {"num_arcs", raw.g.num_arcs()},
                  {"num_hybrids", num_hybrids(raw)}};
    j["validation"] = {{"xnetwork", validate_xnetwork(raw).ok()},
                       {"phylo_network", validate_phylo_network(raw).ok()},
                       {"phylo_tree", validate_phylo_tree(raw).ok()},
                       {"multree", validate_multree(raw).ok()}};
    if (!validate_xnetwork(raw).ok())
      throw std::invalid_argument(file_a + " is not a valid network:\n" +
                                  validate_xnetwork(raw).str());
    j["timings_ms"]["parse"] = ms_since(started);

    auto unfold_started = std::chrono::steady_clock::now();
    unfold_result u = unfold(raw, opt.path_cap);
    j["unfold"] = {{"num_leaves", u.m.label.size()},
                   {"num_xsets", count_xsets(u.m)},
                   {"path_cap", opt.path_cap}};
    j["timings_ms"]["unfold"] = ms_since(unfold_started);

    auto props_started = std::chrono::steady_clock::now();
    std::optional<stable_context> ctx;
    try {
      ctx = make_stable_context(raw, true, opt.path_cap, opt.xset_cap);
      j["properties"]["stable"] = {{"holds", true}};
    } catch (const not_stable_error& e) {
      j["properties"]["stable"] = {{"holds", false}, {"detail", e.what()}};
    }

    property_verdict comp = is_compressed(raw);
    j["properties"]["compressed"] = {{"holds", comp.holds}, {"detail", comp.detail}};
    j["properties"]["sound_unfold"] = {{"holds", is_sound(u.m)}};

    property_verdict tc = is_tree_child(raw, tc_route::child_scan);
    json tc_j{{"holds", tc.holds}, {"route", "child-scan"}, {"detail", tc.detail}};
    if (tc.counterexample_vertex != no_vertex)
      tc_j["counterexample_vertex"] = tc.counterexample_vertex;
    if (ctx) {
      tc_j["route"] = "child-scan+xset-images";
      tc_j["routes_agree"] =
          is_tree_child(raw, tc_route::xset_images, &*ctx).holds == tc.holds;
    }
    j["properties"]["tree_child"] = tc_j;

    property_verdict rv = is_reticulation_visible(raw, rv_route::visibility);
    json rv_j{{"holds", rv.holds}, {"route", "visibility"}, {"detail", rv.detail}};
    if (rv.counterexample_vertex != no_vertex)
      rv_j["counterexample_vertex"] = rv.counterexample_vertex;
    if (ctx) {
      rv_j["route"] = "visibility+xset-classes";
      rv_j["routes_agree"] =
          is_reticulation_visible(raw, rv_route::xset_classes, &*ctx).holds == rv.holds;
    }
    j["properties"]["reticulation_visible"] = rv_j;

    json tb_j;
    bool tb_holds = false;
    if (ctx) {
      try {
        property_verdict tb = is_tree_based_stable(*ctx);
        tb_holds = tb.holds;
        tb_j = {{"holds", tb.holds}, {"route", "bijective-xset"}, {"detail", tb.detail}};
        if (tb.witness) tb_j["witness"] = xset_json(*tb.witness);
      } catch (const theorem_inapplicable& e) {
        tb_holds = oracle_is_tree_based(raw);
        tb_j = {{"holds", tb_holds}, {"route", "switching-oracle"}, {"note", e.what()}};
      }
    } else {
      tb_holds = oracle_is_tree_based(raw);
      tb_j = {{"holds", tb_holds},
              {"route", "switching-oracle"},
              {"note", "network is not stable; theorem route unavailable"}};
    }
    j["properties"]["tree_based"] = tb_j;
    j["timings_ms"]["properties"] = ms_since(props_started);
    j["timings_ms"]["total"] = ms_since(started);

    std::cout << j.dump(2) << "\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : exit_input;
  } catch (const budget_exceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return exit_budget;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return exit_input;
  } catch (const std::out_of_range& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return exit_input;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_input;
  }
  return rc;
}
