// Walk the un-fold / fold-up round trip on two small networks: a stable one,
// which the trip reproduces exactly, and an unstable one, which it simplifies.

#include <stablenet/foldup.hpp>
#include <stablenet/io.hpp>
#include <stablenet/unfold.hpp>

#include <iostream>
#include <string>

using namespace stablenet;

namespace {

void walk(const std::string& text) {
  lnet n = parse_newick(text);
  std::cout << "network:     " << print_newick(n) << "\n";

  unfold_result u = unfold(n);
  std::cout << "un-folding:  " << print_newick(u.m) << "\n";
  std::cout << "leaf copies:";
  for (const auto& [taxon, leaves] : u.m.mu())
    std::cout << " " << taxon << "x" << leaves.size();
  std::cout << "\n";

  fold_result f = fold_up(u.m);
  std::cout << "fold-up:     " << print_newick(f.net) << "\n";
  std::cout << "round trip:  "
            << (xnetwork_isomorphic(f.net, n) ? "reproduces the network (stable)"
                                              : "differs (not stable)")
            << "\n\n";
}

}  // namespace

int main() {
  // one hybrid above a cherry; folding its un-folding gives it back
  walk("(((1,2))#H1,(#H1,3));");
  // two sibling hybrids fed by the same parents; the round trip merges them
  walk("(((1)#H1,(2)#H2),((#H1,#H2),3));");
  return 0;
}
