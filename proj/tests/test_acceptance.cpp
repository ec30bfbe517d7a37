#include <catch2/catch_amalgamated.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "fixtures.hpp"
#include "stablenet/canonical.hpp"
#include "stablenet/foldup.hpp"
#include "stablenet/generators.hpp"
#include "stablenet/io.hpp"
#include "stablenet/oracles.hpp"
#include "stablenet/properties.hpp"
#include "stablenet/subnetworks.hpp"
#include "stablenet/unfold.hpp"
#include "stablenet/xsets.hpp"

using namespace stablenet;

namespace {

// each acceptance criterion prints exactly one verdict line; the assertions
// after the print keep the binary's exit code honest
struct criterion {
  std::string name;
  std::vector<std::string> failures;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  explicit criterion(std::string n) : name(std::move(n)) {}

  void check(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }

  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }

  void finish(const std::string& stats = "") {
    std::string line = "[acceptance] " + name + ": ";
    if (failures.empty()) {
      line += "PASS";
    } else {
      line += "FAIL (" + std::to_string(failures.size()) + " violations; first: " +
              failures.front() + ")";
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), " [%.1f s", seconds());
    line += buf;
    if (!stats.empty()) line += ", " + stats;
    line += "]";
    std::printf("%s\n", line.c_str());
    std::fflush(stdout);
    for (const std::string& f : failures) UNSCOPED_INFO(f);
    REQUIRE(failures.empty());
  }
};

lnet tree(const std::string& text) { return parse_newick(text); }

std::vector<std::vector<std::string>> three_subsets(const std::vector<std::string>& xs) {
  std::vector<std::vector<std::string>> out;
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i + 1; j < xs.size(); ++j)
      for (std::size_t k = j + 1; k < xs.size(); ++k) out.push_back({xs[i], xs[j], xs[k]});
  return out;
}

int cli(const std::string& args) {
  std::string cmd = std::string(STABLENET_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("criterion 1: figure-fixture suite") {
  criterion c{"C1 figure-fixture suite (exact isomorphism)"};

  // the unstable twin-hybrid network, its un-folding, and its stabilisation
  lnet twin = load_fixture("unstable_twin_hybrids.enwk");
  lnet cherry2 = load_fixture("double_cherry.nwk");
  lnet folded = load_fixture("stable_cherry_hybrid.enwk");
  c.check(multree_isomorphic(unfold(twin).m, cherry2), "unfold(twin) != double cherry");
  c.check(xnetwork_isomorphic(fold_up(cherry2).net, folded), "fold(double cherry) != folded");
  c.check(!is_stable(twin), "twin network reported stable");
  c.check(is_stable(folded), "folded network reported unstable");

  // the stable network whose topmost hybrid is invisible
  lnet fig = load_fixture("invisible_hybrid.enwk");
  c.check(is_stable(fig), "invisible-hybrid network reported unstable");
  stable_context ctx = make_stable_context(fig);
  c.check(ctx.p.num_classes() == 10, "quotient class count != 10");
  int leaf_classes = 0, interior_pairs = 0, interior_bigger = 0;
  for (const auto& cls : ctx.p.classes) {
    if (ctx.u.m.g.is_leaf(cls[0]))
      ++leaf_classes;
    else if (cls.size() == 2)
      ++interior_pairs;
    else if (cls.size() > 2)
      ++interior_bigger;
  }
  c.check(leaf_classes == 4, "leaf class count != 4");
  c.check(interior_pairs == 1 && interior_bigger == 0,
          "interior class sizes are not one pair and singletons");

  lnet dashed = tree("((1,2),(3,4));");
  lnet dotted = tree("((1,3),(2,4));");
  c.check(displays_stable(ctx, dashed).holds, "dashed tree not displayed");
  c.check(is_base_tree_stable(ctx, dashed).holds, "dashed tree not a base tree");
  c.check(oracle_displays(fig, dashed), "display oracle rejects the dashed tree");
  c.check(oracle_is_base_tree(fig, dashed), "base-tree oracle rejects the dashed tree");
  bool dotted_endorsed = false;
  for (const xset& ch : ctx.xsets)
    if (endorses(ctx.u.m, ch, dotted)) dotted_endorsed = true;
  c.check(dotted_endorsed, "dotted tree not endorsed");
  c.check(!displays_stable(ctx, dotted).holds, "dotted tree reported displayed");
  c.check(!oracle_displays(fig, dotted), "display oracle accepts the dotted tree");
  c.check(!is_tree_child(fig).holds, "invisible-hybrid network reported tree-child");
  c.check(!is_reticulation_visible(fig).holds,
          "invisible-hybrid network reported reticulation-visible");
  lnet pinned = load_fixture("invisible_hybrid_pinned.enwk");
  c.check(is_stable(pinned), "pinned network reported unstable");
  c.check(is_reticulation_visible(pinned).holds,
          "pinned network not reticulation-visible");

  // X-sets and triplets of the twin pair
  c.check(all_xsets(unfold(twin).m).size() == 4, "twin un-folding X-set count != 4");
  lnet t123 = tree("((1,2),3);");
  lnet t231 = tree("((2,3),1);");
  display_search two_ways = find_displays(folded, t123, true);
  c.check(two_ways.displayed && two_ways.witnesses.size() >= 2,
          "cherry triplet not displayed in two ways");
  c.check(oracle_is_base_tree(twin, t231), "23|1 not a base tree of the twin network");
  stable_context folded_ctx = make_stable_context(folded);
  c.check(!is_base_tree_stable(folded_ctx, t231).holds,
          "23|1 reported as base tree of the folded network");

  // the non-encoding MUL-tree pair
  lnet nea = load_fixture("nonencoding_a.nwk");
  lnet neb = load_fixture("nonencoding_b.nwk");
  c.check(!multree_isomorphic(nea, neb), "non-encoding pair is isomorphic");
  for (const auto& y : three_subsets(nea.taxa()))
    c.check(multree_isomorphic(restrict_multree(nea, y), restrict_multree(neb, y)),
            "restriction differs on a 3-subset");
  std::set<std::string> mta = mul_triplets(nea);
  c.check(mta.size() == 21, "shared MUL-triplet set size != 21");
  c.check(mta == mul_triplets(neb), "MUL-triplet sets differ");
  lnet fa = fold_up(nea).net, fb = fold_up(neb).net;
  c.check(!xnetwork_isomorphic(fa, fb), "folded non-encoding pair is isomorphic");
  c.check(triplets(fa) == triplets(fb), "folded triplet sets differ");

  // folding does not commute with taxon removal
  lnet noncom = load_fixture("noncommuting_fold.nwk");
  std::vector<std::string> y124 = {"1", "2", "4"};
  c.check(!xnetwork_isomorphic(induced_subnetwork(fold_up(noncom).net, y124),
                               fold_up(restrict_multree(noncom, y124)).net),
          "fold commuted with removal on the non-commuting fixture");

  c.check(c.seconds() < 5.0, "figure suite exceeded 5 seconds");
  c.finish();
}

TEST_CASE("criterion 2: theorem-equivalence campaign") {
  criterion c{"C2 theorem-equivalence campaign"};
  const int instances = 500;
  const double budget_s = 600.0;
  int done = 0;
  long endorsed_trees = 0;

  for (int i = 0; i < instances; ++i) {
    std::string tag = "instance " + std::to_string(i);
    std::mt19937_64 rng(90000 + i);
    network_params params{4 + i % 7, (i / 7) % 5};
    lnet n = gen_stable_network(params, rng, 400);
    stable_context ctx = make_stable_context(n);

    // every endorsed tree, deduplicated by canonical code
    std::map<std::string, lnet> endorsed;
    for (const xset& ch : ctx.xsets) {
      spanned_tree s = span_xset(ctx.u.m, ch);
      endorsed.emplace(canon_code_string(s.suppressed), s.suppressed);
    }
    endorsed_trees += static_cast<long>(endorsed.size());
    for (const auto& [code, t] : endorsed) {
      (void)code;
      c.check(displays_stable(ctx, t).holds == oracle_displays(n, t),
              tag + ": displays decider disagrees with the oracle");
      c.check(is_base_tree_stable(ctx, t).holds == oracle_is_base_tree(n, t),
              tag + ": base-tree decider disagrees with the oracle");
    }
    c.check(is_tree_based_stable(ctx).holds == oracle_is_tree_based(n),
            tag + ": tree-based decider disagrees with the oracle");

    bool tc_scan = is_tree_child(n, tc_route::child_scan).holds;
    bool tc_vis = is_tree_child(n, tc_route::visibility).holds;
    bool tc_visc = is_tree_child(n, tc_route::visibility_compressed).holds;
    bool tc_xset = is_tree_child(n, tc_route::xset_images, &ctx).holds;
    c.check(tc_scan == tc_vis && tc_vis == tc_visc && tc_visc == tc_xset,
            tag + ": tree-child routes disagree");
    c.check(tc_scan == oracle_is_tree_child(n),
            tag + ": tree-child disagrees with the oracle");

    bool rv_vis = is_reticulation_visible(n, rv_route::visibility).holds;
    bool rv_xset = is_reticulation_visible(n, rv_route::xset_classes, &ctx).holds;
    c.check(rv_vis == rv_xset, tag + ": reticulation-visible routes disagree");
    c.check(rv_vis == oracle_is_reticulation_visible(n),
            tag + ": reticulation-visible disagrees with the oracle");

    for (vertex_id v : n.g.vertices())
      if (n.g.is_tree_vertex(v) && !n.g.is_leaf(v))
        c.check(prstan_check(ctx, v) == oracle_is_visible(n, v),
                tag + ": ancestor criterion disagrees with the visibility oracle");

    ++done;
    if (c.seconds() > budget_s) break;
  }
  c.check(done >= instances, "campaign did not finish inside the time budget");

  c.finish(std::to_string(done) + " stable networks, " + std::to_string(endorsed_trees) +
           " endorsed trees");
}

TEST_CASE("criterion 3: structural invariants") {
  criterion c{"C3 structural invariants"};
  int multrees = 0, networks = 0, tree_child_hits = 0;

  // random MUL-trees: fold-up order-independence, un-fold of the fold-up
  for (int i = 0; i < 700; ++i) {
    std::string tag = "MUL-tree " + std::to_string(i);
    std::mt19937_64 rng(50000 + i);
    lnet m = gen_multree(3 + i % 5, i % 4, rng);
    fold_result base = fold_up(m);
    for (int order = 1; order <= 2; ++order) {
      std::mt19937_64 shuffle(7919 * order + i);
      fold_options fo;
      fo.rng = &shuffle;
      c.check(xnetwork_isomorphic(fold_up(m, fo).net, base.net),
              tag + ": fold result depends on the merge order");
    }
    if (is_sound(m))
      c.check(multree_isomorphic(unfold(base.net).m, m),
              tag + ": un-fold of the fold-up is not the input");
    ++multrees;
  }

  // random stable networks: quotient and subnetwork invariants
  for (int i = 0; i < 500; ++i) {
    std::string tag = "network " + std::to_string(i);
    std::mt19937_64 rng(60000 + i);
    network_params params{4 + i % 4, i % 4};
    lnet n = gen_stable_network(params, rng, 150);
    stable_context ctx = make_stable_context(n);

    c.check(is_compressed(n).holds, tag + ": stable network not compressed");

    bool tc = is_tree_child(n).holds;
    if (tc) {
      c.check(is_reticulation_visible(n).holds,
              tag + ": tree-child network not reticulation-visible");
      c.check(corollary_strong_display(ctx).holds,
              tag + ": a strongly displayed tree is not a base tree");
      ++tree_child_hits;
    }

    // image of every X-set's class map stays inside the root-free zone
    for (const xset& ch : ctx.xsets) {
      spanned_tree s = span_xset(ctx.u.m, ch);
      std::set<int> image = xibar_image(s, ctx.p);
      std::set<int> zone = vmc_classes(ctx.u.m, s.root, ctx.p);
      bool inside = true;
      for (int cls : image)
        if (!zone.count(cls)) inside = false;
      c.check(inside, tag + ": class-map image leaves the root-free zone");
    }

    // similarity in the un-folding is exactly "same end vertex"
    std::vector<vertex_id> uv = ctx.u.m.g.vertices();
    for (std::size_t a = 0; a < uv.size(); ++a)
      for (std::size_t b = a + 1; b < uv.size(); ++b)
        c.check(ctx.p.same_class(uv[a], uv[b]) ==
                    (ctx.u.end_vertex[uv[a]] == ctx.u.end_vertex[uv[b]]),
                tag + ": similarity does not match path end vertices");

    // un-folding commutes with restriction to every 3-subset
    for (const auto& y : three_subsets(n.taxa()))
      c.check(usupp_check(n, y), tag + ": un-fold does not commute with restriction");
    ++networks;
  }

  c.check(tree_child_hits > 0, "no tree-child instance was generated");
  c.finish(std::to_string(multrees) + " MUL-trees, " + std::to_string(networks) +
           " stable networks, " + std::to_string(tree_child_hits) + " tree-child");
}

TEST_CASE("criterion 4: serialization round-trips and the command-line contract") {
  criterion c{"C4 round-trips and exit codes"};

  const char* network_fixtures[] = {"unstable_twin_hybrids.enwk", "stable_cherry_hybrid.enwk",
                                    "invisible_hybrid.enwk", "invisible_hybrid_pinned.enwk"};
  const char* multree_fixtures[] = {"double_cherry.nwk", "interior_duplicate_pair.nwk",
                                    "noncommuting_fold.nwk", "nonencoding_a.nwk",
                                    "nonencoding_b.nwk"};
  for (const char* name : network_fixtures) {
    lnet n = load_fixture(name);
    c.check(xnetwork_isomorphic(parse_newick(print_newick(n)), n),
            std::string(name) + ": round-trip changed the network");
  }
  for (const char* name : multree_fixtures) {
    lnet m = load_fixture(name);
    c.check(multree_isomorphic(parse_newick(print_newick(m)), m),
            std::string(name) + ": round-trip changed the MUL-tree");
  }

  for (int i = 0; i < 300; ++i) {
    std::mt19937_64 rng(30000 + i);
    lnet m = gen_multree(2 + i % 6, i % 5, rng);
    c.check(multree_isomorphic(parse_newick(print_newick(m)), m),
            "random MUL-tree " + std::to_string(i) + ": round-trip changed it");
  }
  for (int i = 0; i < 200; ++i) {
    std::mt19937_64 rng(40000 + i);
    lnet n = gen_network({3 + i % 8, i % 5}, rng);
    c.check(xnetwork_isomorphic(parse_newick(print_newick(n)), n),
            "random network " + std::to_string(i) + ": round-trip changed it");
  }

  // exit-code contract, straight against the installed binary
  std::string folded = fixture_path("stable_cherry_hybrid.enwk");
  std::string twin = fixture_path("unstable_twin_hybrids.enwk");
  std::string fig = fixture_path("invisible_hybrid.enwk");
  std::string t123 = "/tmp/stablenet_acceptance_t123.nwk";
  std::ofstream(t123) << "((1,2),3);\n";
  c.check(cli("is-stable " + folded) == 0, "is-stable on a stable network != 0");
  c.check(cli("is-stable " + twin) == 1, "is-stable on an unstable network != 1");
  c.check(cli("is-tree-child " + fig) == 1, "is-tree-child counterexample != 1");
  c.check(cli("validate /tmp/no_such_file_here") == 2, "missing file != 2");
  c.check(cli("unfold --path-cap 1 " + twin) == 3, "exhausted path cap != 3");
  c.check(cli("displays --both " + folded + " " + t123) == 0,
          "decider and oracle fail to agree on the shipped corpus");
  c.check(cli("is-base-tree --both " + folded + " " + t123) == 0,
          "base-tree routes fail to agree on the shipped corpus");

  c.finish();
}
