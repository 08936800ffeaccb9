#include <random>

#include "doctest.h"
#include "figures.hpp"
#include "json.hpp"
#include "msoga/io.hpp"
#include "msoga/pushdown.hpp"
#include "msoga/stack.hpp"
#include "oracle.hpp"

using namespace msoga;
using namespace msoga::io;

TEST_SUITE_BEGIN("io");

namespace {

const std::string kData = MSOGA_DATA_DIR;

template <class F>
ParseError parse_error(F&& fn) {
  try {
    fn();
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("expected a parse error");
  return ParseError(0, 0, "");
}

bool same_storage(const MsoStorage& a, const MsoStorage& b) {
  if (a.name != b.name || a.sigma != b.sigma || a.gamma != b.gamma || a.delta != b.delta ||
      a.intermediate != b.intermediate || a.exclusive_bound != b.exclusive_bound || !(a.g_in == b.g_in) ||
      !formula_equal(a.phi_c, b.phi_c) || a.instructions.size() != b.instructions.size())
    return false;
  for (std::size_t i = 0; i < a.instructions.size(); ++i)
    if (a.instructions[i].name != b.instructions[i].name || !formula_equal(a.instructions[i].phi, b.instructions[i].phi))
      return false;
  return true;
}

}  // namespace

TEST_CASE("graph files") {
  std::string text = read_file(kData + "/fig4.graph");
  Graph g = parse_graph(text);
  Graph want = nd_gr({figs::G, figs::bar(figs::A), figs::B, figs::B});
  CHECK(g == want);
  std::string canon = write_graph(g);
  CHECK(canon ==
        "node 1 label=gamma\nnode 2 label=alpha'\nnode 3 label=beta\nnode 4 label=beta\n"
        "edge 1 -> 2 label=*\nedge 2 -> 3 label=*\nedge 3 -> 4 label=*\n");
  CHECK(write_graph(parse_graph(canon)) == canon);

  std::mt19937 rng(3);
  for (int i = 0; i < 50; ++i) {
    Graph r = oracle::random_graph(rng, 5, {"*", "a b", "x\"y"}, {"e", "(", "#"});
    std::string t = write_graph(r);
    CHECK(parse_graph(t) == r);
    CHECK(write_graph(parse_graph(t)) == t);
  }

  auto e = parse_error([] { parse_graph(""); });
  CHECK(e.line() == 1);
  CHECK(e.column() == 1);
  e = parse_error([] { parse_graph("# nothing\n\n"); });
  CHECK(e.line() == 1);
  e = parse_error([] { parse_graph("node 1 label=a\n  edge 1 -> 2 label=b\n"); });
  CHECK(e.line() == 2);
  CHECK(e.column() == 3);
  e = parse_error([] { parse_graph("node x label=a\n"); });
  CHECK(e.column() == 6);
  e = parse_error([] { parse_graph("node 1 label=a\nnode 1 label=b\n"); });
  CHECK(e.line() == 2);
  e = parse_error([] { parse_graph("node 1 label=\"a\n"); });
  CHECK(e.column() == 14);
  CHECK_THROWS_AS(parse_graph("node 1 label=a\nedge 1 -> 1 label=b\n"), ParseError);
  CHECK_THROWS_AS(parse_graph("node 1 label=a\nnode 2 label=a\nedge 1 -> 2 label=b\nedge 1 -> 2 label=b\n"),
                  ParseError);
  CHECK_THROWS_AS(parse_graph("node 1 colour=a\n"), ParseError);
  CHECK_THROWS_AS(parse_graph("vertex 1 label=a\n"), ParseError);
}

TEST_CASE("formula files") {
  Formula a = parse_formula("(exists1 x y (and (lab a x) (edge * x y) (not (in y X))))  # trailing comment");
  CHECK(formula_equal(a, f::ex1("x", f::ex1("y", f::land({f::lab("a", "x"), f::edge("*", "x", "y"),
                                                          f::neg(f::in("y", "X"))})))));
  CHECK(write_formula(a) == "(exists1 x (exists1 y (and (lab a x) (edge * x y) (not (in y X)))))\n");
  CHECK(formula_equal(parse_formula("(string {* d})"), f::string({"*", "d"})));
  CHECK(formula_equal(parse_formula("(path {a b} x y)"), f::path({"a", "b"}, "x", "y")));
  CHECK(formula_equal(parse_formula("(eq {a} x y)"), f::eqnb({"a"}, "x", "y")));
  CHECK(formula_equal(parse_formula("(eq x y)"), f::eq("x", "y")));
  CHECK(formula_equal(parse_formula("(edge {a b} x y)"), f::edge_any({"a", "b"}, "x", "y")));
  CHECK(formula_equal(parse_formula("(union X Y Z)"), union_of("X", "Y", "Z")));
  CHECK(formula_equal(parse_formula("(next \"push(alpha)\" x y)"), f::next("push(alpha)", "x", "y")));
  CHECK(formula_equal(parse_formula("(member-eq x X)"), f::member_eq("x", "X")));
  CHECK(formula_equal(parse_formula("(within Y (path {a} x y))"), relativize(f::path({"a"}, "x", "y"), "Y")));
  CHECK(formula_equal(parse_formula("(or)"), f::ff()));
  CHECK(formula_equal(parse_formula("true"), f::tt()));
  CHECK(write_formula(f::next("push(alpha,theta)", "x", "y")) == "(next \"push(alpha,theta)\" x y)\n");

  std::mt19937 rng(8);
  for (int i = 0; i < 200; ++i) {
    Formula r = oracle::random_formula(rng, 4, {"s", "t"}, {"a", "b"}, {"x", "x'"}, {"Y"});
    std::string t = write_formula(r);
    CHECK(formula_equal(parse_formula(t), r));
    CHECK(write_formula(parse_formula(t)) == t);
  }
  // every formula of the built-in storage types survives a round trip
  for (const auto& s : {triv_mso(), stack_mso(), pushdown_mso(stack_mso()), pushdown_mso(pushdown_mso(triv_mso()), 2)}) {
    CHECK(formula_equal(parse_formula(write_formula(s.phi_c)), s.phi_c));
    for (const auto& ins : s.instructions) CHECK(formula_equal(parse_formula(write_formula(ins.phi)), ins.phi));
  }

  auto e = parse_error([] { parse_formula(""); });
  CHECK(e.line() == 1);
  e = parse_error([] { parse_formula("(or\n  (lab a x)\n  (edge a x))"); });
  CHECK(e.line() == 3);
  CHECK(e.column() == 3);
  e = parse_error([] { parse_formula("(and (lab a x)"); });
  CHECK(e.column() == 1);
  e = parse_error([] { parse_formula("(lab a x))"); });
  CHECK(e.column() == 10);
  e = parse_error([] { parse_formula("(frob {a} x)"); });
  CHECK(e.column() == 1);
  CHECK_THROWS_AS(parse_formula("(lab a x) (lab a y)"), ParseError);
  CHECK_THROWS_AS(parse_formula("x"), ParseError);
  CHECK_THROWS_AS(parse_formula("{a b}"), ParseError);
  CHECK_THROWS_AS(parse_formula("(path {(a)} x y)"), ParseError);
  CHECK_THROWS_AS(parse_formula("(exists1 x)"), ParseError);
}

TEST_CASE("automaton files") {
  SAutomaton m = wwrw_automaton();
  std::string t = write_automaton(m);
  SAutomaton back = parse_automaton(t);
  CHECK(write_automaton(back) == t);
  CHECK(back.states == m.states);
  CHECK(back.initial == m.initial);
  CHECK(back.final == m.final);
  CHECK(back.input == m.input);
  CHECK(back.storage == m.storage);
  auto sorted = m.trans;
  std::sort(sorted.begin(), sorted.end());
  CHECK(back.trans == sorted);
  CHECK(t.find("trans q2 e moveup(gamma) q3\n") != std::string::npos);

  SAutomaton small = parse_automaton("state p initial\ntrans p a theta q\nstate q final\n");
  CHECK(small.input == LabelSet{"a"});
  CHECK(small.trans.size() == 1);
  auto e = parse_error([] { parse_automaton("input a\nstate p\ntrans p b theta p\n"); });
  CHECK(e.line() == 3);
  CHECK(e.column() == 9);
  e = parse_error([] { parse_automaton("state p\ntrans p a theta r\n"); });
  CHECK(e.column() == 17);
  CHECK_THROWS_AS(parse_automaton(""), ParseError);
  CHECK_THROWS_AS(parse_automaton("state p wobbly\n"), ParseError);
  CHECK_THROWS_AS(parse_automaton("state p\nstate p\n"), ParseError);

  std::mt19937 rng(5);
  for (int i = 0; i < 50; ++i) {
    NFA n = oracle::random_nfa(rng, 4, {"a", "b/1", "e"});
    std::string s = write_nfa(n);
    NFA b = parse_nfa(s);
    CHECK(write_nfa(b) == s);
    CHECK(b.alphabet == n.alphabet);
    CHECK(b.states == n.states);
    CHECK(b.initial == n.initial);
    CHECK(b.final == n.final);
    CHECK(b.trans == n.trans);
  }
  CHECK_THROWS_AS(parse_nfa("state p\ntrans p a theta p\n"), ParseError);
}

TEST_CASE("storage files") {
  StorageFile f = parse_storage(read_file(kData + "/stack.storage"));
  CHECK(f.storage.instructions.size() == 12);
  CHECK(f.native == "Stack");
  CHECK(same_storage(f.storage, stack_mso()));
  CHECK(write_storage(f) == read_file(kData + "/stack.storage"));

  for (const auto& s : {triv_mso(), pushdown_mso(stack_mso()), iterate_pushdown(2).second}) {
    std::string t = write_storage(s);
    StorageFile b = parse_storage(t);
    CHECK(same_storage(b.storage, s));
    CHECK(b.native.empty());
    CHECK(write_storage(b) == t);
  }

  auto e = parse_error([] { parse_storage(""); });
  CHECK(e.line() == 1);
  e = parse_error([] { parse_storage("storage S\nsigma *\ngamma *\ng_in\nnode 1 label=*\nphi_c\ntrue\nend\n"); });
  CHECK(e.line() == 6);
  e = parse_error([] { parse_storage("storage S\nsigma *\ngamma *\ng_in\nnode 1 label=*\nend\nphi_c\n(lab * x\nend\n"); });
  CHECK(e.line() == 8);
  CHECK_THROWS_AS(parse_storage("storage S\nsigma *\ngamma *\nphi_c\ntrue\nend\n"), ParseError);
  CHECK_THROWS_AS(parse_storage("storage S\nsigma *\ngamma *\ng_in\nnode 1 label=*\nend\nphi_c\ntrue\nend\n"
                                "instruction t\ntrue\nend\ninstruction t\ntrue\nend\n"),
                  ParseError);
}

TEST_CASE("transducer files") {
  std::mt19937 rng(2);
  std::vector<MsoTransducer> ts = {copy_transducer({"*", "s"}, {"a"}), collapse_transducer({"a", "b"})};
  MsoTransducer r;
  r.sigma = {"s"};
  r.gamma = {"a"};
  r.params = {"Y", "Z"};
  r.dups = {"d1", "d2"};
  r.x2 = "y";
  r.chi = oracle::random_formula(rng, 3, {"s"}, {"a"}, {}, {"Y"});
  r.psi[{"s", "d2"}] = oracle::random_formula(rng, 3, {"s"}, {"a"}, {"x"}, {"Y"});
  r.phi[{"a", "d1", "d2"}] = oracle::random_formula(rng, 3, {"s"}, {"a"}, {"x", "y"}, {"Z"});
  ts.push_back(r);
  for (const auto& t : ts) {
    std::string s = write_transducer(t);
    MsoTransducer b = parse_transducer(s);
    CHECK(write_transducer(b) == s);
    CHECK(b.sigma == t.sigma);
    CHECK(b.gamma == t.gamma);
    CHECK(b.params == t.params);
    CHECK(b.dups == t.dups);
    CHECK(b.x == t.x);
    CHECK(b.x2 == t.x2);
    CHECK(formula_equal(b.chi, t.chi));
    REQUIRE(b.psi.size() == t.psi.size());
    for (const auto& [k, a] : t.psi) CHECK(formula_equal(b.psi.at(k), a));
    REQUIRE(b.phi.size() == t.phi.size());
    for (const auto& [k, a] : t.phi) CHECK(formula_equal(b.phi.at(k), a));
  }
  CHECK_THROWS_AS(parse_transducer("sigma s\n"), ParseError);
  auto e = parse_error([] { parse_transducer("chi\ntrue\nend\npsi s\ntrue\nend\n"); });
  CHECK(e.line() == 4);
}

TEST_CASE("json and dot") {
  Graph g = figs::fig5();
  auto j = nlohmann::json::parse(graph_json(g));
  CHECK(j["nodes"].size() == g.size());
  CHECK(j["edges"].size() == g.edges().size());
  CHECK(j["nodes"][0]["id"] == g.nodes()[0]);

  auto fj = nlohmann::json::parse(formula_json(f::path({"a"}, "x", "y")));
  CHECK(fj[0] == "path");
  CHECK(fj[1]["labels"][0] == "a");
  auto sj = nlohmann::json::parse(storage_json({stack_mso(), "Stack"}));
  CHECK(sj["instructions"].size() == 12);
  CHECK(sj["native"] == "Stack");
  CHECK(nlohmann::json::parse(automaton_json(wwrw_automaton()))["states"].size() == 4);

  // a chain has nothing to collapse
  std::string plain = graph_dot(nd_gr({"a", "b", "c"}));
  CHECK(plain.find("cluster") == std::string::npos);
  CHECK(plain.find("\"n1\" -> \"n2\" [label=\"*\"];") != std::string::npos);

  // pushdown configuration: each Omega biclique becomes one edge
  auto p = pushdown_native(stack_native());
  Graph pg = p->render("(gamma gamma')(alpha gamma alpha')(beta gamma alpha beta')");
  std::string dot = graph_dot(pg);
  CHECK(dot.find("compound=true") != std::string::npos);
  std::size_t bold = 0;
  for (std::size_t at = 0; (at = dot.find("style=bold", at)) != std::string::npos; ++at) ++bold;
  std::size_t omega = 0;
  for (const auto& e : pg.edges()) omega += (e.label == "alpha" || e.label == "beta" || e.label == "gamma");
  CHECK(bold >= 1);
  CHECK(bold < omega);
  CHECK(graph_dot(pg) == dot);

  std::string ad = automaton_dot(wwrw_automaton());
  CHECK(ad.find("doublecircle") != std::string::npos);
  CHECK(ad.find("\"q2\" -> \"q3\" [label=\"e / moveup(gamma)\"];") != std::string::npos);
}

TEST_SUITE_END();
