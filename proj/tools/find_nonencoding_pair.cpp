// exhaustive search for a pair of binary MUL-trees on {1,2,3,4} that display
// the same MUL-triplet set (21 codes), have isomorphic restrictions to every
// 3-subset, and fold up to distinct sound networks with equal triplet sets;
// prints the lexicographically smallest such pair, relabelled so that the
// first tree displays the MUL-triplet ((1,2),1)

#include <algorithm>
#include <array>
#include <cstdlib>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "stablenet/canonical.hpp"
#include "stablenet/core.hpp"
#include "stablenet/foldup.hpp"
#include "stablenet/io.hpp"
#include "stablenet/subnetworks.hpp"

using namespace stablenet;

namespace {

const std::vector<std::string> kTaxa{"1", "2", "3", "4"};

using counts = std::array<int, 4>;

// all distinct rooted binary MUL-tree shapes over a leaf-label multiset,
// as canonical newick strings (children sorted, so string equality is
// isomorphism)
std::map<counts, std::vector<std::string>> memo;

const std::vector<std::string>& shapes(const counts& c) {
  auto it = memo.find(c);
  if (it != memo.end()) return it->second;
  int total = c[0] + c[1] + c[2] + c[3];
  std::set<std::string> out;
  if (total == 1) {
    for (int i = 0; i < 4; ++i)
      if (c[i] == 1) out.insert(kTaxa[i]);
  } else {
    counts a{};
    for (a[0] = 0; a[0] <= c[0]; ++a[0])
      for (a[1] = 0; a[1] <= c[1]; ++a[1])
        for (a[2] = 0; a[2] <= c[2]; ++a[2])
          for (a[3] = 0; a[3] <= c[3]; ++a[3]) {
            int ta = a[0] + a[1] + a[2] + a[3];
            if (ta == 0 || ta == total) continue;
            counts b{c[0] - a[0], c[1] - a[1], c[2] - a[2], c[3] - a[3]};
            for (const std::string& sa : shapes(a))
              for (const std::string& sb : shapes(b))
                out.insert("(" + std::min(sa, sb) + "," + std::max(sa, sb) + ")");
          }
  }
  return memo.emplace(c, std::vector<std::string>(out.begin(), out.end()))
      .first->second;
}

std::string joined(const std::set<std::string>& s) {
  std::string out;
  for (const std::string& x : s) out += x + ";";
  return out;
}

// invariants every member of a candidate bucket must share
std::string bucket_key(const mul_tree& m) {
  std::set<std::string> mt = mul_triplets(m);
  if (mt.size() != 21) return {};
  std::string key = joined(mt) + "|";
  for (std::size_t i = 0; i < 4; ++i) {
    std::vector<std::string> y;
    for (std::size_t j = 0; j < 4; ++j)
      if (j != i) y.push_back(kTaxa[j]);
    key += canon_code_string(restrict_multree(m, y)) + "|";
  }
  return key;
}

// first (x, y) such that the tree displays ((x,y),x), if any
std::pair<std::string, std::string> cherry_outgroup_repeat(const mul_tree& m) {
  for (const std::string& x : kTaxa)
    for (const std::string& y : kTaxa) {
      if (x == y) continue;
      mul_tree tau = parse_newick("((" + x + "," + y + ")," + x + ");");
      if (displays_mul_triplet(m, tau)) return {x, y};
    }
  return {};
}

lnet relabelled(const lnet& n, const std::map<std::string, std::string>& sigma) {
  lnet out = n;
  for (auto& [v, x] : out.label) {
    (void)v;
    x = sigma.at(x);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  int leaves = argc > 1 ? std::atoi(argv[1]) : 7;

  // group every shape by its shared invariants
  std::map<std::string, std::vector<std::string>> buckets;
  long long examined = 0;
  for (int c1 = 1; c1 <= leaves - 3; ++c1)
    for (int c2 = 1; c1 + c2 <= leaves - 2; ++c2)
      for (int c3 = 1; c1 + c2 + c3 <= leaves - 1; ++c3) {
        counts c{c1, c2, c3, leaves - c1 - c2 - c3};
        for (const std::string& s : shapes(c)) {
          ++examined;
          std::string key = bucket_key(parse_newick(s + ";"));
          if (!key.empty()) buckets[key].push_back(s);
        }
      }
  std::cout << "examined " << examined << " MUL-trees on " << leaves
            << " leaves\n";

  std::vector<std::pair<std::string, std::string>> hits;
  for (auto& [key, members] : buckets) {
    (void)key;
    if (members.size() < 2) continue;
    std::sort(members.begin(), members.end());
    for (std::size_t i = 0; i < members.size(); ++i)
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        mul_tree m1 = parse_newick(members[i] + ";");
        mul_tree m2 = parse_newick(members[j] + ";");
        xnetwork f1 = fold_up(m1).net, f2 = fold_up(m2).net;
        if (!validate_phylo_network(f1).ok() || !validate_phylo_network(f2).ok())
          continue;
        if (xnetwork_isomorphic(f1, f2)) continue;
        if (triplets(f1) != triplets(f2)) continue;
        if (cherry_outgroup_repeat(m1).first.empty() &&
            cherry_outgroup_repeat(m2).first.empty())
          continue;
        hits.emplace_back(members[i], members[j]);
      }
  }
  std::cout << hits.size() << " qualifying pairs\n";
  if (hits.empty()) return 1;

  std::sort(hits.begin(), hits.end());
  auto [sa, sb] = hits.front();
  mul_tree a = parse_newick(sa + ";"), b = parse_newick(sb + ";");

  // orient and relabel so that tree a displays ((1,2),1)
  if (cherry_outgroup_repeat(a).first.empty()) std::swap(a, b);
  auto [x, y] = cherry_outgroup_repeat(a);
  std::map<std::string, std::string> sigma{{x, "1"}, {y, "2"}};
  std::string next = "3";
  for (const std::string& t : kTaxa)
    if (!sigma.count(t)) sigma[t] = std::exchange(next, "4");
  a = relabelled(a, sigma);
  b = relabelled(b, sigma);

  std::cout << "a: " << print_newick(a) << "\n";
  std::cout << "b: " << print_newick(b) << "\n";
  std::cout << "fold a: " << print_newick(fold_up(a).net) << "\n";
  std::cout << "fold b: " << print_newick(fold_up(b).net) << "\n";
  std::cout << "shared MUL-triplets: " << mul_triplets(a).size() << "\n";
  return 0;
}
