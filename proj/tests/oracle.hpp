#pragma once
// Independent brute-force reference implementations used by the tests.

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "msoga/formula.hpp"
#include "msoga/graph.hpp"
#include "msoga/nfa.hpp"

namespace oracle {

using namespace msoga;

// Direct recursive evaluation of a desugared formula.
inline bool naive_eval(const Graph& g, std::map<std::string, int> fo, std::map<std::string, std::set<int>> so,
                       const Formula& a) {
  switch (a->op) {
    case Op::True: return true;
    case Op::False: return false;
    case Op::Lab: return g.label(fo.at(a->v1)) == a->sym;
    case Op::Edge: return g.has_edge(fo.at(a->v1), a->sym, fo.at(a->v2));
    case Op::In: return so.at(a->v2).count(fo.at(a->v1)) > 0;
    case Op::Not: return !naive_eval(g, fo, so, a->kids[0]);
    case Op::Or: return naive_eval(g, fo, so, a->kids[0]) || naive_eval(g, fo, so, a->kids[1]);
    case Op::Ex1:
      for (int v : g.nodes()) {
        fo[a->v1] = v;
        if (naive_eval(g, fo, so, a->kids[0])) return true;
      }
      return false;
    case Op::Ex2: {
      const auto& ns = g.nodes();
      for (unsigned mask = 0; mask < (1u << ns.size()); ++mask) {
        std::set<int> s;
        for (std::size_t i = 0; i < ns.size(); ++i)
          if (mask >> i & 1) s.insert(ns[i]);
        so[a->v1] = s;
        if (naive_eval(g, fo, so, a->kids[0])) return true;
      }
      return false;
    }
    default:
      throw std::logic_error("naive_eval: formula is not desugared");
  }
}

inline bool naive_models(const Graph& g, const Formula& a) { return naive_eval(g, {}, {}, desugar(a)); }

// All-permutations isomorphism.
inline bool naive_iso(const Graph& a, const Graph& b) {
  if (a.size() != b.size() || a.edges().size() != b.edges().size()) return false;
  std::vector<int> perm = b.nodes();
  std::sort(perm.begin(), perm.end());
  do {
    std::map<int, int> m;
    for (std::size_t i = 0; i < perm.size(); ++i) m[a.nodes()[i]] = perm[i];
    bool ok = true;
    for (int v : a.nodes())
      if (a.label(v) != b.label(m[v])) ok = false;
    for (const auto& e : a.edges())
      if (ok && !b.has_edge(m[e.src], e.label, m[e.dst])) ok = false;
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

inline Graph random_graph(std::mt19937& rng, int max_nodes, const std::vector<Label>& node_labels,
                          const std::vector<Label>& edge_labels, double density = 0.3) {
  int n = std::uniform_int_distribution<int>(1, max_nodes)(rng);
  std::vector<std::pair<int, Label>> ns;
  for (int i = 1; i <= n; ++i)
    ns.emplace_back(i, node_labels[std::uniform_int_distribution<std::size_t>(0, node_labels.size() - 1)(rng)]);
  std::vector<Edge> es;
  std::bernoulli_distribution coin(density);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      if (i != j)
        for (const auto& l : edge_labels)
          if (coin(rng)) es.push_back({i, l, j});
  return new_graph(ns, es);
}

// Random closed formula; variables x0.., X0.. are bound on the way down.
inline Formula random_formula(std::mt19937& rng, int depth, const std::vector<Label>& node_labels,
                              const std::vector<Label>& edge_labels, std::vector<std::string> fo = {},
                              std::vector<std::string> so = {}, bool allow_so = true) {
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  auto atom = [&]() -> Formula {
    if (fo.empty()) return pick(2) ? f::tt() : f::ff();
    std::string x = fo[pick(int(fo.size()))], y = fo[pick(int(fo.size()))];
    int k = pick(so.empty() ? 3 : 4);
    if (k == 0 && !node_labels.empty()) return f::lab(node_labels[pick(int(node_labels.size()))], x);
    if (k == 3) return f::in(x, so[pick(int(so.size()))]);
    if (k == 2) return f::eq(x, y);
    return f::edge(edge_labels[pick(int(edge_labels.size()))], x, y);
  };
  if (depth == 0) return atom();
  int k = pick(allow_so ? 7 : 6);
  auto sub = [&](std::vector<std::string> fo2, std::vector<std::string> so2) {
    return random_formula(rng, depth - 1, node_labels, edge_labels, fo2, so2, allow_so);
  };
  switch (k) {
    case 0: return f::neg(sub(fo, so));
    case 1: return f::lor(sub(fo, so), sub(fo, so));
    case 2: return f::land(sub(fo, so), sub(fo, so));
    case 3: case 4: {
      std::string x = "x" + std::to_string(fo.size());
      auto fo2 = fo;
      fo2.push_back(x);
      return k == 3 ? f::ex1(x, sub(fo2, so)) : f::all1(x, sub(fo2, so));
    }
    case 5: return fo.empty() ? sub(fo, so) : atom();
    default: {
      std::string X = "X" + std::to_string(so.size());
      auto so2 = so;
      so2.push_back(X);
      return pick(2) ? f::ex2(X, sub(fo, so2)) : f::all2(X, sub(fo, so2));
    }
  }
}

// Structural check that g is a string graph over edge labels `gamma` (other
// edge labels ignored).
inline bool is_string_graph(const Graph& g, const LabelSet& gamma) {
  std::vector<Edge> es;
  for (const auto& e : g.edges())
    if (gamma.count(e.label)) es.push_back(e);
  if (es.size() + 1 != g.size()) return false;
  std::map<int, int> succ, pred;
  std::set<std::pair<int, int>> pairs;
  for (const auto& e : es) {
    if (!pairs.insert({e.src, e.dst}).second) return false;
    if (succ.count(e.src) || pred.count(e.dst)) return false;
    succ[e.src] = e.dst;
    pred[e.dst] = e.src;
  }
  int start = -1;
  for (int v : g.nodes())
    if (!pred.count(v)) start = v;
  if (start < 0) return false;
  std::size_t seen = 1;
  for (int v = start; succ.count(v); v = succ[v]) ++seen;
  return seen == g.size();
}

// Depth-first search for an accepting path.
inline bool run_search(const NFA& n, const Word& w) {
  std::function<bool(int, std::size_t)> go = [&](int q, std::size_t i) {
    if (i == w.size()) return n.final.count(q) > 0;
    for (const auto& [p, a, r] : n.trans)
      if (p == q && a == w[i] && go(r, i + 1)) return true;
    return false;
  };
  for (int q : n.initial)
    if (go(q, 0)) return true;
  return false;
}

inline NFA random_nfa(std::mt19937& rng, int max_states, const std::vector<Symbol>& alphabet) {
  NFA n;
  n.alphabet = {alphabet.begin(), alphabet.end()};
  int k = std::uniform_int_distribution<int>(1, max_states)(rng);
  std::bernoulli_distribution half(0.5), sparse(0.3);
  for (int i = 0; i < k; ++i) n.add_state("s" + std::to_string(i), i == 0 || sparse(rng), half(rng));
  for (int p = 0; p < k; ++p)
    for (const auto& a : alphabet)
      for (int q = 0; q < k; ++q)
        if (sparse(rng)) n.trans.insert({p, a, q});
  return n;
}

}  // namespace oracle
