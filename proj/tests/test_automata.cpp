#include <functional>
#include <random>

#include "doctest.h"
#include "figures.hpp"
#include "msoga/sautomaton.hpp"
#include "msoga/stack.hpp"
#include "oracle.hpp"

using namespace msoga;
using oracle::random_nfa;
using oracle::run_search;

namespace {

// { u u^R u : u nonempty }
bool is_wwrw(const Word& w) {
  if (w.empty() || w.size() % 3) return false;
  std::size_t k = w.size() / 3;
  for (std::size_t i = 0; i < k; ++i)
    if (w[i] != w[2 * k - 1 - i] || w[i] != w[2 * k + i]) return false;
  return true;
}

const std::vector<std::string> kFig8Behaviour = {"push(alpha)",    "push(beta)",  "movedown(beta)", "movedown(alpha)",
                                                 "moveup(gamma)", "moveup(alpha)", "pop(beta)"};
const Word kFig8Trace = {"0", "1", "1", "0", "e", "0", "1"};

Run fig8_run(const SAutomaton& m) {
  Run r;
  r.start = m.state("q1");
  int q = r.start;
  Config c = "gamma'";
  r.configs.push_back(c);
  auto s = stack_native();
  for (std::size_t i = 0; i < kFig8Trace.size(); ++i) {
    for (std::size_t t = 0; t < m.trans.size(); ++t) {
      const auto& tr = m.trans[t];
      if (tr.from == q && tr.alpha == kFig8Trace[i] && tr.theta == kFig8Behaviour[i]) {
        auto next = s->step(c, tr.theta);
        if (next.empty()) continue;
        r.steps.push_back(t);
        c = next[0];
        r.configs.push_back(c);
        q = tr.to;
        break;
      }
    }
  }
  return r;
}

SAutomaton triv_for(const Word& w) { return triv_automaton(nfa_word({"a", "b"}, w)); }

}  // namespace

TEST_SUITE("automata") {

TEST_CASE("nfa acceptance") {
  NFA one;
  one.alphabet = {"a"};
  one.add_state("q", true, true);
  CHECK(nfa_accepts(one, {}));
  CHECK_FALSE(nfa_accepts(one, {"a"}));
  CHECK_THROWS_AS(nfa_accepts(one, {"b"}), Error);
  CHECK(tup({"a", "push(alpha)"}) == "a/push(alpha)");
  CHECK(untup("0/push(alpha)") == std::vector<std::string>{"0", "push(alpha)"});

  std::mt19937 rng(5);
  std::vector<Symbol> ab = {"a", "b"};
  auto words = all_words(ab, 5);
  CHECK(words.size() == 63);
  for (int t = 0; t < 40; ++t) {
    NFA n = random_nfa(rng, 4, ab), m = random_nfa(rng, 3, ab);
    NFA cc = nfa_complement(nfa_complement(n)), c = nfa_complement(n);
    NFA u = nfa_union(n, m), i = nfa_intersect(n, m), tr = trim(n), d = determinize(n);
    for (const auto& w : words) {
      bool x = run_search(n, w), y = run_search(m, w);
      CHECK(nfa_accepts(n, w) == x);
      CHECK(nfa_accepts(cc, w) == x);
      CHECK(nfa_accepts(c, w) == !x);
      CHECK(nfa_accepts(u, w) == (x || y));
      CHECK(nfa_accepts(i, w) == (x && y));
      CHECK(nfa_accepts(tr, w) == x);
      CHECK(nfa_accepts(d, w) == x);
    }
    CHECK(nfa_empty(n) == std::none_of(words.begin(), words.end(), [&](const Word& w) { return run_search(n, w); }));
  }
}

TEST_CASE("nfa algebra") {
  std::mt19937 rng(9);
  std::vector<Symbol> ab = {"a", "b"};
  NFA n = random_nfa(rng, 4, ab);
  NFA u = nfa_union(n, nfa_empty_language(n.alphabet));
  for (const auto& w : all_words(ab, 5)) CHECK(nfa_accepts(u, w) == nfa_accepts(n, w));

  // project {(a,0),(a,1)}: (a,1)* becomes a*
  NFA p;
  p.alphabet = {"a/0", "a/1"};
  int q = p.add_state("q", true, true);
  p.add(q, "a/1", q);
  NFA pr = nfa_project(p, 1);
  CHECK(pr.alphabet == std::set<Symbol>{"a"});
  for (const auto& w : all_words({"a"}, 4)) CHECK(nfa_accepts(pr, w));
  CHECK_THROWS_AS(nfa_project(n, 0), Error);
  CHECK_THROWS_AS(nfa_union(n, p), Error);

  NFA r = nfa_rename(n, {{"a", "c"}});
  for (const auto& w : all_words(ab, 4)) {
    Word v = w;
    for (auto& s : v)
      if (s == "a") s = "c";
    CHECK(nfa_accepts(r, v) == nfa_accepts(n, w));
  }
  CHECK(nfa_accepts(nfa_combine(NfaOp::Complement, {n}), {"a"}) != nfa_accepts(n, {"a"}));
  CHECK_THROWS_AS(nfa_combine(NfaOp::Union, {n}), Error);

  NFA big = nfa_universal({"a", "b"});
  CHECK(nfa_accepts(big, {"a", "b", "b"}));
  CHECK_THROWS_AS(nfa_word({"a"}, {"b"}), Error);

  // (a|b)* a (a|b)^k needs 2^(k+1) deterministic states
  NFA blow;
  blow.alphabet = {"a", "b"};
  int k = 8;
  for (int i = 0; i <= k + 1; ++i) blow.add_state("s" + std::to_string(i), i == 0, i == k + 1);
  blow.add(0, "a", 0);
  blow.add(0, "b", 0);
  blow.add(0, "a", 1);
  for (int i = 1; i <= k; ++i) {
    blow.add(i, "a", i + 1);
    blow.add(i, "b", i + 1);
  }
  CHECK(determinize(blow).size() == 512);
  CHECK_THROWS_AS(determinize(blow, 100), Error);
}

TEST_CASE("word automata") {
  SAutomaton t;
  t.input = {"a"};
  int q = t.add_state("q", true, true);
  t.add(q, "a", "theta", q);
  NFA tn = to_word_nfa(t);
  CHECK(tn.trans.size() == 1);
  CHECK(std::get<1>(*tn.trans.begin()) == "a/theta");

  SAutomaton m = wwrw_automaton();
  NFA n = to_word_nfa(m, stack::instruction_names());
  CHECK(n.size() == 4);
  CHECK(n.trans.size() == m.trans.size());
  CHECK(n.alphabet.size() == 3 * 12);
  SAutomaton back = from_word_nfa(n, m.input, m.storage);
  SAutomaton sorted = m;
  std::sort(sorted.trans.begin(), sorted.trans.end());
  CHECK(back == sorted);

  Word run_word;
  for (std::size_t i = 0; i < kFig8Trace.size(); ++i) run_word.push_back(tup({kFig8Trace[i], kFig8Behaviour[i]}));
  CHECK(nfa_accepts(n, run_word));
  std::reverse(run_word.begin(), run_word.end());
  CHECK_FALSE(nfa_accepts(n, run_word));
  CHECK(run_search(n, run_word) == false);

  SAutomaton bad = m;
  bad.trans.push_back({0, "2", "push(alpha)", 0});
  CHECK_THROWS_AS(validate(bad), Error);
}

TEST_CASE("string acceptance") {
  auto s = stack_native();
  SAutomaton m = wwrw_automaton();
  CHECK(s_accepts_string(m, *s, chars("011001")));
  CHECK(s_accepts_string(m, *s, chars("000000")));
  CHECK(s_accepts_string(m, *s, chars("000")));
  CHECK_FALSE(s_accepts_string(m, *s, chars("0110")));
  CHECK_FALSE(s_accepts_string(m, *s, {}));
  int accepted = 0;
  auto words = all_words({"0", "1"}, 6);
  CHECK(words.size() == 127);
  for (const auto& w : words) {
    bool a = s_accepts_string(m, *s, w);
    CHECK(a == is_wwrw(w));
    accepted += a;
  }
  CHECK(accepted == 2 + 4);
  CHECK_THROWS_AS(s_accepts_string(m, *s, {"2"}), Error);
  CHECK_THROWS_AS(s_accepts_string(m, *triv_native(), {"0"}), Error);

  auto run = s_find_run(m, *s, chars("011001"));
  REQUIRE(run.has_value());
  CHECK_NOTHROW(check_run(m, *s, *run));
  CHECK(run_input(m, *run) == chars("011001"));

  // TRIV automaton for a*
  auto t = triv_native();
  SAutomaton astar;
  int q = astar.add_state("q", true, true);
  astar.add(q, "a", "theta", q);
  CHECK(s_accepts_string(astar, *t, chars("aaa")));
  // an e-loop over TRIV is cut by duplicate detection
  astar.add(q, kEps, "theta", q);
  CHECK(s_accepts_string(astar, *t, chars("aa")));

  // unbounded e-pushes exhaust the step budget rather than reject
  SAutomaton grow;
  int g0 = grow.add_state("g0", true), g1 = grow.add_state("g1", false, true);
  grow.add(g0, kEps, "push(alpha)", g0);
  grow.add(g0, "0", "pop(beta)", g1);
  CHECK_THROWS_AS(s_accepts_string(grow, *s, {"0"}), Error);
  AcceptOptions small;
  small.max_ids = 10;
  small.steps = 1000;
  CHECK_THROWS_AS(s_accepts_string(grow, *s, {"0"}, small), Error);
  try {
    s_accepts_string(grow, *s, {"0"});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BudgetExhausted);
  }
}

TEST_CASE("graph acceptance") {
  auto st = stack_mso();
  SAutomaton m = wwrw_automaton();
  auto r = s_accepts_graph(m, st, figs::fig8());
  CHECK(r.accepted);
  REQUIRE(r.behaviour.has_value());
  CHECK(*r.behaviour == kFig8Behaviour);

  SAutomaton nofinal = m;
  nofinal.final.clear();
  auto r2 = s_accepts_graph(nofinal, st, figs::fig8());
  CHECK_FALSE(r2.accepted);
  CHECK(r2.behaviour == r.behaviour);

  // the control decision is the word automaton's
  NFA word_nfa = to_word_nfa(m, st.instruction_names());
  Word run_word;
  for (std::size_t i = 0; i < kFig8Trace.size(); ++i) run_word.push_back(tup({kFig8Trace[i], kFig8Behaviour[i]}));
  for (int mask = 0; mask < 16; ++mask) {
    SAutomaton v = m;
    v.final.clear();
    for (int q = 0; q < 4; ++q)
      if (mask >> q & 1) v.final.insert(q);
    word_nfa.final = v.final;
    CHECK(s_accepts_graph(v, st, figs::fig8()).accepted == nfa_accepts(word_nfa, run_word));
  }

  SAutomaton trivial;
  trivial.input = {"0", "1"};
  trivial.add_state("q", true, true);
  auto r3 = s_accepts_graph(trivial, st, st.g_in);
  CHECK(r3.accepted);
  CHECK(r3.behaviour == std::vector<std::string>{});

  // a pair whose second component is not a successor
  Graph g = figs::fig8();
  auto v = as_string_like(g, st.g_in, {"0", "1"});
  Graph broken = remove_edges(g, {{*v.components[2].begin(), "d", *v.components[3].begin()}});
  auto r4 = s_accepts_graph(m, st, broken);
  CHECK_FALSE(r4.accepted);
  CHECK_FALSE(r4.behaviour.has_value());
  CHECK_THROWS_AS(s_accepts_graph(m, st, add_edges(g, {{*v.components[0].begin(), "*", *v.components[2].begin()}})),
                  Error);
}

TEST_CASE("string-like formula") {
  auto st = stack_mso();
  auto phi = stringlike_formula(st, {"0", "1"});
  Graph g8 = figs::fig8();
  CHECK(models(g8, phi));
  CHECK(models(st.g_in, phi));
  auto v = as_string_like(g8, st.g_in, {"0", "1"});
  int a = *v.components[3].begin(), b = *v.components[4].begin();
  CHECK_FALSE(models(remove_edges(g8, {{a, "0", b}}), phi));

  // agreement with the structural check on mutations of the figure
  std::mt19937 rng(17);
  std::vector<Label> labels = {"*", "d", "0", "1", "e"};
  const auto& ns = g8.nodes();
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  for (int t = 0; t < 60; ++t) {
    Graph h = g8;
    if (t % 2) {
      const auto& e = h.edges()[pick(h.edges().size())];
      h = remove_edges(h, {e});
    } else {
      int x = ns[pick(ns.size())], y = ns[pick(ns.size())];
      if (x == y) continue;
      h = add_edges(h, {{x, labels[pick(labels.size())], y}});
    }
    CHECK(models(h, phi) == try_string_like(h, st.g_in, {"0", "1"}).has_value());
  }

  // small TRIV graphs, exhaustive over a one-letter alphabet
  auto tm = triv_mso();
  auto tphi = stringlike_formula(tm, {"a"});
  int agree = 0, positive = 0;
  for (int n = 1; n <= 3; ++n) {
    std::vector<std::pair<int, Label>> nodes;
    for (int i = 1; i <= n; ++i) nodes.push_back({i, kStar});
    std::vector<Edge> slots;
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j)
        if (i != j)
          for (const auto& l : {"a", "e"}) slots.push_back({i, l, j});
    for (unsigned mask = 0; mask < (1u << slots.size()); ++mask) {
      std::vector<Edge> es;
      for (std::size_t i = 0; i < slots.size(); ++i)
        if (mask >> i & 1) es.push_back(slots[i]);
      Graph h = new_graph(nodes, es);
      bool want = try_string_like(h, tm.g_in, {"a"}).has_value();
      CHECK(models(h, tphi) == want);
      agree += 1;
      positive += want;
    }
  }
  CHECK(agree == 1 + 16 + 4096);
  // first component one node, then chains of single nodes or a fork {1} -> {2,3}
  CHECK(positive == 1 + 4 + 24 + 6);
}

TEST_CASE("witness graphs") {
  auto s = stack_native();
  auto st = stack_mso();
  SAutomaton m = wwrw_automaton();
  Run r = fig8_run(m);
  REQUIRE(r.steps.size() == 7);
  Graph g = build_witness_graph(m, *s, r);
  CHECK(iso_equal(g, figs::fig8(), 24));

  SAutomaton trivial;
  trivial.add_state("q", true, true);
  CHECK(iso_equal(build_witness_graph(trivial, *s, Run{0, {}, {"gamma'"}}), st.g_in));
  CHECK_THROWS_AS(build_witness_graph(trivial, *s, Run{0, {}, {"gamma alpha'"}}), Error);
  Run wrong = r;
  wrong.configs[3] = "gamma alpha beta'";
  CHECK_THROWS_AS(build_witness_graph(m, *s, wrong), Error);

  // every bounded accepting run yields an accepted witness with its own behaviour
  auto runs = accepting_runs(m, *s, 7);
  CHECK(runs.size() >= 6);
  std::set<Word> inputs;
  for (const auto& run : runs) {
    Graph w = build_witness_graph(m, *s, run);
    auto res = s_accepts_graph(m, st, w);
    CHECK(res.accepted);
    std::vector<std::string> thetas;
    for (auto t : run.steps) thetas.push_back(m.trans[t].theta);
    CHECK(res.behaviour == thetas);
    auto v = as_string_like(w, st.g_in, m.input);
    CHECK(erase_e(v.trace) == run_input(m, run));
    inputs.insert(run_input(m, run));
  }
  // the projected traces of the witnesses are exactly the accepted inputs
  for (const auto& w : all_words({"0", "1"}, 6)) CHECK(inputs.count(w) == (is_wwrw(w) ? 1u : 0u));
  for (const auto& w : all_words({"0", "1"}, 6)) {
    auto run = s_find_run(m, *s, w);
    CHECK(run.has_value() == is_wwrw(w));
    if (run) CHECK(s_accepts_graph(m, st, build_witness_graph(m, *s, *run)).accepted);
  }
}

TEST_CASE("reset combinations") {
  auto sn = enrich_native(triv_native(), Enrichment::Reset);
  SAutomaton ma = triv_for({"a"}), mb = triv_for({"b"}), me = triv_for({});
  SAutomaton ab = reset_concat(ma, mb, kResetName);
  SAutomaton astar = reset_star(ma, kResetName);
  SAutomaton ae = reset_combine(Combine::Concat, ma, &me, kResetName);
  for (const auto& w : all_words({"a", "b"}, 4)) {
    CHECK(s_accepts_string(ab, *sn, w) == (w == Word{"a", "b"}));
    CHECK(s_accepts_string(astar, *sn, w) == std::all_of(w.begin(), w.end(), [](auto& x) { return x == "a"; }));
    CHECK(s_accepts_string(ae, *sn, w) == s_accepts_string(ma, *sn, w));
  }
  SAutomaton other = mb;
  other.storage = "Stack";
  CHECK_THROWS_AS(reset_concat(ma, other, kResetName), Error);
  CHECK_THROWS_AS(reset_combine(Combine::Concat, ma, nullptr, kResetName), Error);
  // without the reset, the glue transitions cannot fire
  CHECK_THROWS_AS(s_accepts_string(ab, *triv_native(), {"a", "b"}), Error);
}

}  // TEST_SUITE
