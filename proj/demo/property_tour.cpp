// Tour the theorem-based deciders on a stable network whose topmost hybrid
// is invisible: displayed trees with witnesses, base trees, tree-child and
// reticulation-visible verdicts, and the displayed triplets.

#include <stablenet/io.hpp>
#include <stablenet/properties.hpp>
#include <stablenet/subnetworks.hpp>

#include <iostream>

using namespace stablenet;

namespace {

void verdict_line(const char* name, const property_verdict& v) {
  std::cout << name << ": " << (v.holds ? "yes" : "no");
  if (!v.detail.empty()) std::cout << "  (" << v.detail << ")";
  std::cout << "\n";
}

}  // namespace

int main() {
  lnet n = parse_newick("(((1,(2)#H2),((#H2,(3)#H3))#H1),(#H1,(#H3,4)));");
  std::cout << "network: " << print_newick(n) << "\n\n";

  // the class-map context: un-folding, similarity classes, X-sets
  stable_context ctx = make_stable_context(n);
  std::cout << "stable with " << ctx.p.num_classes() << " similarity classes and "
            << ctx.xsets.size() << " X-sets\n\n";

  // one tree is displayed and even a base tree; swapping two leaves breaks it
  lnet dashed = parse_newick("((1,2),(3,4));");
  lnet dotted = parse_newick("((1,3),(2,4));");
  verdict_line("displays ((1,2),(3,4))", displays_stable(ctx, dashed));
  verdict_line("base tree ((1,2),(3,4))", is_base_tree_stable(ctx, dashed));
  verdict_line("displays ((1,3),(2,4))", displays_stable(ctx, dotted));
  verdict_line("tree-based", is_tree_based_stable(ctx));

  // the topmost hybrid has only hybrid children, so the network is neither
  // tree-child nor reticulation-visible
  verdict_line("tree-child", is_tree_child(n));
  verdict_line("reticulation-visible", is_reticulation_visible(n));

  std::cout << "\ndisplayed triplets:";
  for (const std::string& code : triplets(n)) std::cout << " " << code;
  std::cout << "\n";

  std::cout << "trinet on {1,2,4}: "
            << print_newick(induced_subnetwork(n, {"1", "2", "4"})) << "\n";
  return 0;
}
