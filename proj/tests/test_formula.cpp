#include <random>

#include "doctest.h"
#include "figures.hpp"
#include "msoga/eval.hpp"
#include "oracle.hpp"

using namespace msoga;

namespace {

std::vector<Graph> all_graphs(int n, const std::vector<Label>& edge_labels) {
  std::vector<std::pair<int, int>> slots;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      if (i != j) slots.emplace_back(i, j);
  std::size_t bits = slots.size() * edge_labels.size();
  std::vector<std::pair<int, Label>> ns;
  for (int i = 1; i <= n; ++i) ns.emplace_back(i, "*");
  std::vector<Graph> out;
  for (std::uint64_t m = 0; m < (std::uint64_t(1) << bits); ++m) {
    std::vector<Edge> es;
    for (std::size_t b = 0; b < bits; ++b)
      if (m >> b & 1) {
        auto [i, j] = slots[b / edge_labels.size()];
        es.push_back({i, edge_labels[b % edge_labels.size()], j});
      }
    out.push_back(new_graph(ns, es));
  }
  return out;
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::Parse;
}

}  // namespace

TEST_SUITE("mso-logic") {

TEST_CASE("string formula examples") {
  LabelSet gam{"gamma"};
  CHECK(models(ed_gr({"gamma", "gamma"}), f::string(gam)));
  Graph fork = new_graph({{1, "*"}, {2, "*"}, {3, "*"}}, {{1, "gamma", 2}, {1, "gamma", 3}});
  CHECK_FALSE(models(fork, f::string(gam)));
  CHECK_FALSE(models(fork, f::ff()));
  CHECK_FALSE(models(ed_gr({}), f::ff()));
  CHECK(free_vars(f::string(gam)).empty());
  CHECK(is_closed(f::string(gam)));
}

TEST_CASE("free variables") {
  CHECK(free_vars(f::lab("s", "x")) == std::set<Var>{{"x", VarKind::First}});
  CHECK(free_vars(f::ex1("x", f::edge("g", "x", "y"))) == std::set<Var>{{"y", VarKind::First}});
  CHECK(free_vars(f::ex2("X", f::in("x", "X"))) == std::set<Var>{{"x", VarKind::First}});
  CHECK(kind_of([] { check_kinds(f::land(f::in("x", "X"), f::eq("X", "y"))); }) == ErrorKind::IllKinded);
}

TEST_CASE("evaluation errors") {
  Graph g = ed_gr({"a"});
  CHECK(kind_of([&] { eval(g, {}, f::lab("*", "x")); }) == ErrorKind::UnboundVariable);
  // 21 nodes; refuting the set quantifier takes more than 50 branches
  Word w(20, "a");
  EvalOptions small;
  small.so_budget = 50;
  auto hard = f::ex2("X", f::land(f::ex1("z", f::in("z", "X")),
                                  f::all1("x", f::implies(f::in("x", "X"),
                                                          f::ex1("y", f::land(f::in("y", "X"), f::edge("a", "x", "y")))))));
  CHECK(kind_of([&] { eval(ed_gr(w), {}, hard, small); }) == ErrorKind::SizeLimit);
}

TEST_CASE("relativization examples") {
  auto a = f::lab("alpha", "x");
  CHECK(alpha_equal(relativize(a, "Y"), a));
  auto r = relativize(f::ex1("x", a), "Y");
  CHECK(alpha_equal(desugar(r), desugar(f::ex1("x", f::land(f::in("x", "Y"), a)))));
  CHECK(free_vars(r) == std::set<Var>{{"Y", VarKind::Second}});
  CHECK(kind_of([] { relativize(f::ex2("Y", f::tt()), "Y"); }) == ErrorKind::VariableClash);
  CHECK(kind_of([] { relativize(f::in("x", "Y"), "Y"); }) == ErrorKind::VariableClash);
}

TEST_CASE("relativization agrees with induced subgraphs") {
  std::mt19937 rng(5);
  int checked = 0;
  for (int t = 0; checked < 20 && t < 1000; ++t) {
    Graph g = oracle::random_graph(rng, 5, {"s", "t"}, {"a", "b"}, 0.3);
    NodeSet keep;
    for (int v : g.nodes())
      if (rng() % 2) keep.insert(v);
    if (keep.empty()) continue;
    auto phi = oracle::random_formula(rng, 4, {"s", "t"}, {"a", "b"});
    Valuation rho;
    rho.so["Y"] = keep;
    bool direct = oracle::naive_models(induced_subgraph(g, keep), phi);
    CHECK(direct == eval(g, rho, relativize(phi, "Y")));
    CHECK(direct == oracle::naive_eval(g, {}, {{"Y", keep}}, desugar(relativize(phi, "Y"))));
    ++checked;
  }
  CHECK(checked == 20);
}

TEST_CASE("macro builders") {
  Graph g = ed_gr({"gamma", "gamma"});
  Valuation rho;
  rho.fo = {{"x", 1}, {"y", 3}};
  CHECK(eval(g, rho, build_macro("path", {{"gamma"}}, {"x", "y"})));
  rho.fo = {{"x", 3}, {"y", 1}};
  CHECK_FALSE(eval(g, rho, build_macro("path", {{"gamma"}}, {"x", "y"})));

  Graph g8 = figs::fig8();
  auto comps = delta_components(g8, {"0", "1", "e"});
  auto it = comps[2].begin();
  rho.fo = {{"x", *it}, {"y", *std::next(it)}};
  CHECK(eval(g8, rho, build_macro("eq", {{"0", "1", "e"}}, {"x", "y"})));
  rho.fo = {{"x", *it}, {"y", *comps[3].begin()}};
  CHECK_FALSE(eval(g8, rho, build_macro("eq", {{"0", "1", "e"}}, {"x", "y"})));

  Graph one = new_graph({{1, "*"}, {2, "*"}}, {{1, "a", 2}});
  rho.fo = {{"x", 1}, {"y", 2}};
  CHECK(eval(one, rho, build_macro("exclusive", {{"a"}}, {"x", "y"})));
  CHECK(kind_of([] { build_macro("nonsense", {}, {}); }) == ErrorKind::UnknownMacro);
  CHECK(models(g, build_macro("string", {{"gamma"}}, {})));
}

TEST_CASE("path macro against transitive closure") {
  std::mt19937 rng(9);
  for (int t = 0; t < 200; ++t) {
    Graph g = oracle::random_graph(rng, 6, {"*"}, {"a", "b"}, 0.2);
    // closure by Floyd-Warshall over a-edges
    std::map<int, std::set<int>> reach;
    for (int v : g.nodes()) reach[v].insert(v);
    for (const auto& e : g.edges())
      if (e.label == "a") reach[e.src].insert(e.dst);
    for (int k : g.nodes())
      for (int i : g.nodes())
        if (reach[i].count(k))
          for (int j : reach[k]) reach[i].insert(j);
    for (int x : g.nodes())
      for (int y : g.nodes()) {
        Valuation rho;
        rho.fo = {{"x", x}, {"y", y}};
        CHECK(eval(g, rho, f::path({"a"}, "x", "y")) == (reach[x].count(y) > 0));
      }
  }
}

TEST_CASE("evaluator agrees with the brute-force evaluator") {
  std::mt19937 rng(1);
  for (int t = 0; t < 1500; ++t) {
    Graph g = oracle::random_graph(rng, 4, {"s", "t"}, {"a", "b"}, 0.3);
    auto phi = oracle::random_formula(rng, 1 + t % 5, {"s", "t"}, {"a", "b"});
    bool expect = oracle::naive_models(g, phi);
    CHECK(models(g, phi) == expect);
    CHECK(models(g, f::neg(phi)) == !expect);
    // superfluous valuation
    Valuation extra;
    extra.fo["unused"] = g.nodes()[0];
    extra.so["Unused"] = {};
    CHECK(eval(g, extra, phi) == expect);
  }
}

TEST_CASE("connectives") {
  std::mt19937 rng(2);
  for (int t = 0; t < 300; ++t) {
    Graph g = oracle::random_graph(rng, 4, {"s"}, {"a"}, 0.4);
    auto p = oracle::random_formula(rng, 3, {"s"}, {"a"});
    auto q = oracle::random_formula(rng, 3, {"s"}, {"a"});
    CHECK(models(g, f::lor(p, q)) == (models(g, p) || models(g, q)));
    CHECK(models(g, f::land(p, q)) == (models(g, p) && models(g, q)));
    CHECK(models(g, f::iff(p, q)) == (models(g, p) == models(g, q)));
  }
}

TEST_CASE("macros agree with their expansions") {
  std::mt19937 rng(4);
  LabelSet ab{"a", "b"}, a{"a"};
  for (int t = 0; t < 400; ++t) {
    Graph g = oracle::random_graph(rng, 4, {"*"}, {"a", "b"}, t % 3 == 0 ? 0.15 : 0.35);
    std::vector<Formula> fs = {
        f::string(a),
        f::string(ab),
        f::string_eq(ab),
        f::ex1({"x", "y"}, f::path(ab, "x", "y")),
        f::all1({"x", "y"}, f::implies(f::eqnb(a, "x", "y"), f::path(ab, "y", "x"))),
        f::ex2("Y", f::land(f::ex1("z", f::in("z", "Y")), relativize(f::string(a), "Y"))),
        f::all2("Y", relativize(f::all1({"x", "y"}, f::path(a, "x", "y")), "Y")),
        f::ex2("Y", relativize(f::string_eq(a), "Y")),
        build_macro("closed", {a}, {"X"}),
        f::ex1("x", build_macro("first", {a}, {"x"})),
        f::ex1("x", build_macro("last", {ab}, {"x"})),
        f::ex2("X", build_macro("first-set", {a}, {"X"})),
        f::all1("x", f::ex2("X", build_macro("ec", {a}, {"x", "X"}))),
        f::ex1({"x", "y"}, build_macro("exclusive", {a}, {"x", "y"})),
    };
    for (std::size_t i = 0; i < fs.size(); ++i) {
      auto phi = fs[i];
      if (!is_closed(phi)) phi = f::ex2("X", phi);
      INFO("macro case " << i);
      CHECK(models(g, phi) == oracle::naive_models(g, phi));
    }
  }
}

TEST_CASE("string formula against the structural checker") {
  LabelSet gam{"a", "b"};
  auto phi = f::string(gam);
  std::size_t yes = 0, total = 0;
  for (int n = 1; n <= 3; ++n)
    for (const auto& g : all_graphs(n, {"a", "b"})) {
      bool s = oracle::is_string_graph(g, gam);
      CHECK(models(g, phi) == s);
      yes += s;
      ++total;
    }
  // 4 nodes: one label exhaustively, two labels by sampling
  for (const auto& g : all_graphs(4, {"a"})) CHECK(models(g, phi) == oracle::is_string_graph(g, gam));
  std::mt19937 rng(8);
  for (int t = 0; t < 20000; ++t) {
    Graph g = oracle::random_graph(rng, 4, {"*"}, {"a", "b"}, t % 2 ? 0.1 : 0.2);
    CHECK(models(g, phi) == oracle::is_string_graph(g, gam));
  }
  // every string of length <= 4
  for (int len = 0; len <= 4; ++len)
    for (int m = 0; m < (1 << len); ++m) {
      Word w;
      for (int i = 0; i < len; ++i) w.push_back(m >> i & 1 ? "b" : "a");
      CHECK(models(ed_gr(w), phi));
    }
  CHECK(yes > 0);
  CHECK(total > 4000);
}

TEST_CASE("completion search agrees with enumeration") {
  std::mt19937 rng(6);
  for (int t = 0; t < 300; ++t) {
    Graph g = oracle::random_graph(rng, 4, {"s", "t"}, {"a"}, 0.3);
    std::vector<Edge> unknown;
    for (int u : g.nodes())
      for (int v : g.nodes())
        if (u != v && !g.has_edge(u, "b", v) && unknown.size() < 6 && rng() % 2) unknown.push_back({u, "b", v});
    auto phi = oracle::random_formula(rng, 3 + t % 2, {"s", "t"}, {"a", "b"});
    bool expect = false;
    for (unsigned m = 0; m < (1u << unknown.size()) && !expect; ++m) {
      std::vector<Edge> add;
      for (std::size_t i = 0; i < unknown.size(); ++i)
        if (m >> i & 1) add.push_back(unknown[i]);
      expect = oracle::naive_models(add_edges(g, add), phi);
    }
    Graph w = g;
    bool got = exists_completion(g, unknown, phi, 1 << 20, &w);
    CHECK(got == expect);
    if (got) CHECK(oracle::naive_models(w, phi));
  }
}

TEST_CASE("kleene evaluation is monotone") {
  std::mt19937 rng(12);
  for (int t = 0; t < 300; ++t) {
    Graph g = oracle::random_graph(rng, 4, {"s"}, {"a"}, 0.3);
    std::vector<Edge> unknown;
    for (int u : g.nodes())
      for (int v : g.nodes())
        if (u != v && rng() % 3 == 0) unknown.push_back({u, "b", v});
    auto phi = oracle::random_formula(rng, 3, {"s"}, {"a", "b"});
    Model m(g, unknown);
    auto r = Checker(m, phi).run();
    if (r.v == K3::U) continue;
    // a definite answer must hold for every completion
    for (unsigned mask = 0; mask < (1u << unknown.size()) && mask < 64; ++mask) {
      std::vector<Edge> add;
      for (std::size_t i = 0; i < unknown.size(); ++i)
        if (mask >> i & 1) add.push_back(unknown[i]);
      CHECK(oracle::naive_models(add_edges(g, add), phi) == (r.v == K3::T));
    }
  }
}

TEST_CASE("structural identity up to renaming") {
  auto a = f::ex1("x", f::lab("s", "x"));
  auto b = f::ex1("z", f::lab("s", "z"));
  CHECK(alpha_equal(a, b));
  CHECK_FALSE(alpha_equal(a, f::ex1("x", f::lab("t", "x"))));
  CHECK(alpha_equal(rename_free(f::lab("s", "x"), "x", "y"), f::lab("s", "y")));
  CHECK(fresh_name("x", {"x", "x1"}) == "x2");
}

}  // TEST_SUITE
