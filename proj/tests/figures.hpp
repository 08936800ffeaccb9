#pragma once
// Hand-built graphs of the worked examples.

#include <string>
#include <vector>

#include "msoga/graph.hpp"

namespace figs {

using namespace msoga;

inline const std::string A = "alpha", B = "beta", G = "gamma";
inline std::string bar(const std::string& s) { return s + "'"; }

// Two copies of ed-gr(gamma^3) with intermediate gamma-edges u_i -> v_i.
inline Graph fig3() {
  std::vector<std::pair<int, Label>> ns;
  std::vector<Edge> es;
  for (int i = 1; i <= 8; ++i) ns.emplace_back(i, "*");
  for (int i = 1; i <= 3; ++i) {
    es.push_back({i, "gamma", i + 1});
    es.push_back({i + 4, "gamma", i + 5});
  }
  for (int i = 1; i <= 4; ++i) {
    es.push_back({i, "gamma", i + 4});
    for (int j = 5; j <= 8; ++j) es.push_back({i, "nu", j});
  }
  return new_graph(ns, es);
}

// Pair graph of a stack step: `before` and `after` as node-labeled chains,
// d-edges between positions listed in `d` (0-based, before -> after).
inline Graph stack_pair(const Word& before, const Word& after, const std::vector<std::pair<int, int>>& d) {
  std::vector<std::pair<int, Label>> ns;
  std::vector<Edge> es;
  int n1 = int(before.size());
  for (int i = 0; i < n1; ++i) ns.emplace_back(i + 1, before[i]);
  for (int j = 0; j < int(after.size()); ++j) ns.emplace_back(n1 + j + 1, after[j]);
  for (int i = 0; i + 1 < n1; ++i) es.push_back({i + 1, "*", i + 2});
  for (int j = 0; j + 1 < int(after.size()); ++j) es.push_back({n1 + j + 1, "*", n1 + j + 2});
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < int(after.size()); ++j) es.push_back({i + 1, "nu", n1 + j + 1});
  for (auto [i, j] : d) es.push_back({i + 1, "d", n1 + j + 1});
  return new_graph(ns, es);
}

// push(alpha) from gamma beta' to gamma beta alpha'.
inline Graph fig5() { return stack_pair({G, bar(B)}, {G, B, bar(A)}, {{0, 0}, {1, 1}}); }
// pop(alpha) from gamma beta alpha' to gamma beta'.
inline Graph fig6() { return stack_pair({G, B, bar(A)}, {G, bar(B)}, {{0, 0}, {1, 1}}); }
// moveup(beta) from gamma beta' alpha to gamma beta alpha'.
inline Graph fig7() { return stack_pair({G, bar(B), A}, {G, B, bar(A)}, {{0, 0}, {1, 1}, {2, 2}}); }

// The string-like graph with trace 0110e01 and its eight stack components.
inline Graph fig8() {
  std::vector<Word> comps = {{bar(G)},       {G, bar(A)},    {G, A, bar(B)}, {G, bar(A), B},
                             {bar(G), A, B}, {G, bar(A), B}, {G, A, bar(B)}, {G, bar(A)}};
  Word trace = {"0", "1", "1", "0", "e", "0", "1"};
  std::vector<std::pair<int, Label>> ns;
  std::vector<Edge> es;
  std::vector<int> start;
  int next = 1;
  for (const auto& c : comps) {
    start.push_back(next);
    for (std::size_t i = 0; i < c.size(); ++i) {
      ns.emplace_back(next + int(i), c[i]);
      if (i + 1 < c.size()) es.push_back({next + int(i), "*", next + int(i) + 1});
    }
    next += int(c.size());
  }
  for (std::size_t k = 0; k + 1 < comps.size(); ++k) {
    for (std::size_t i = 0; i < comps[k].size(); ++i)
      for (std::size_t j = 0; j < comps[k + 1].size(); ++j)
        es.push_back({start[k] + int(i), trace[k], start[k + 1] + int(j)});
    std::size_t m = std::min(comps[k].size(), comps[k + 1].size());
    for (std::size_t i = 0; i < m; ++i) es.push_back({start[k] + int(i), "d", start[k + 1] + int(i)});
  }
  return new_graph(ns, es);
}

}  // namespace figs
