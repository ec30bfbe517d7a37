#include <catch2/catch_amalgamated.hpp>

#include <stablenet/canonical.hpp>
#include <stablenet/core.hpp>
#include <stablenet/io.hpp>
#include <stablenet/unfold.hpp>

#include "fixtures.hpp"

using namespace stablenet;

TEST_CASE("unfolding the twin hybrid network duplicates the cherry") {
  lnet n = load_fixture("unstable_twin_hybrids.enwk");
  REQUIRE(validate_phylo_network(n).ok());
  unfold_result u = unfold(n);
  REQUIRE(validate_multree(u.m).ok());
  CHECK(u.m.g.num_vertices() == 9);
  CHECK(multree_isomorphic(u.m, load_fixture("double_cherry.nwk")));
}

TEST_CASE("unfolding the folded network gives the same MUL-tree") {
  lnet n = load_fixture("stable_cherry_hybrid.enwk");
  REQUIRE(validate_phylo_network(n).ok());
  unfold_result u = unfold(n);
  CHECK(multree_isomorphic(u.m, load_fixture("double_cherry.nwk")));

  SECTION("path counts per taxon") {
    CHECK(u.phi("1").size() == 2);
    CHECK(u.phi("2").size() == 2);
    CHECK(u.phi("3").size() == 1);
  }

  SECTION("the un-folding is binary") {
    for (vertex_id v : u.m.g.vertices()) {
      int d = u.m.g.outdeg(v);
      CHECK((d == 0 || d == 2));
    }
  }
}

TEST_CASE("path metadata is consistent both ways") {
  lnet n = load_fixture("invisible_hybrid.enwk");
  REQUIRE(validate_phylo_network(n).ok());
  unfold_result u = unfold(n);

  for (vertex_id v : u.m.g.vertices()) {
    std::vector<arc_id> path = u.path_arcs(v);
    CHECK(u.psi(path) == v);
    // the path really is a root path of the network
    vertex_id cur = n.g.root;
    for (arc_id a : path) {
      REQUIRE(n.g.arc(a).tail == cur);
      cur = n.g.arc(a).head;
    }
    CHECK(cur == u.end_vertex[v]);
    // alive vertices end at tree vertices
    CHECK(n.g.is_tree_vertex(cur));
  }
  CHECK_THROWS_AS(u.psi({no_arc}), std::out_of_range);
}

TEST_CASE("unfolding the invisible hybrid network") {
  lnet n = load_fixture("invisible_hybrid.enwk");
  unfold_result u = unfold(n);
  REQUIRE(validate_multree(u.m).ok());
  CHECK(u.m.g.num_vertices() == 15);
  CHECK(multree_isomorphic(u.m, load_fixture("interior_duplicate_pair.nwk")));

  equiv_partition p = similarity_classes(u.m);
  CHECK(p.num_classes() == 10);
  int leaf_classes = 0;
  for (const auto& cls : p.classes)
    if (u.m.g.is_leaf(cls[0])) ++leaf_classes;
  CHECK(leaf_classes == 4);

  // exactly one duplicated interior class, of size two
  int dup_interior = 0;
  for (const auto& cls : p.classes)
    if (!u.m.g.is_leaf(cls[0]) && cls.size() == 2) ++dup_interior;
  CHECK(dup_interior == 1);
}

TEST_CASE("kappa is bijective exactly on the stable fixtures") {
  SECTION("stable network with one hybrid") {
    lnet n = load_fixture("stable_cherry_hybrid.enwk");
    kappa_result k = kappa(n);
    CHECK(k.bijective());
    CHECK(k.class_of_vertex.size() == 6);  // rho, u, the cherry vertex, three leaves
  }
  SECTION("stable network with an invisible hybrid") {
    lnet n = load_fixture("invisible_hybrid.enwk");
    kappa_result k = kappa(n);
    CHECK(k.bijective());
    CHECK(k.class_of_vertex.size() == 10);
  }
  SECTION("unstable network fails injectivity") {
    lnet n = load_fixture("unstable_twin_hybrids.enwk");
    kappa_result k = kappa(n);
    CHECK(k.well_defined);
    CHECK_FALSE(k.injective);
    CHECK_FALSE(k.bijective());
    CHECK(k.detail.find("share a class") != std::string::npos);
  }
}

TEST_CASE("path budget is enforced") {
  lnet n = load_fixture("invisible_hybrid.enwk");
  CHECK_THROWS_AS(unfold(n, 10), budget_exceeded);
  CHECK_NOTHROW(unfold(n, 100));
}

TEST_CASE("unfolding a tree changes nothing") {
  lnet t = parse_newick("((1,2),(3,4));");
  unfold_result u = unfold(t);
  CHECK(multree_isomorphic(u.m, t));
  CHECK(xnetwork_isomorphic(compact(u.m), t));
}
