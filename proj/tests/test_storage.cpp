#include <random>

#include "doctest.h"
#include "figures.hpp"
#include "msoga/stack.hpp"
#include "msoga/storage.hpp"
#include "oracle.hpp"

using namespace msoga;

namespace {

using Beh = std::vector<std::string>;

Graph two_nodes(std::vector<Edge> extra = {}) {
  extra.push_back({1, kNu, 2});
  return new_graph({{1, kStar}, {2, kStar}}, extra);
}

}  // namespace

TEST_SUITE("storage") {

TEST_CASE("TRIV in both forms") {
  auto t = triv_native();
  CHECK(t->step(t->initial(), "theta") == std::vector<Config>{t->initial()});
  Graph r = t->render(t->initial());
  CHECK(r.size() == 1);
  CHECK(r.edges().empty());
  auto m = triv_mso();
  CHECK(models(m.g_in, m.phi_c));
  CHECK(models(two_nodes(), m.instruction("theta").phi));
  CHECK_FALSE(models(new_graph({{1, kStar}, {2, kStar}, {3, kStar}}, {{1, kNu, 2}, {1, kNu, 3}}),
                     m.instruction("theta").phi));
  CHECK_FALSE(models(new_graph({{1, kStar}, {2, kStar}}, {}), m.instruction("theta").phi));
  CHECK(models(t->witness_pair(t->initial(), "theta", t->initial()), m.instruction("theta").phi));
  CHECK_THROWS_AS(m.instruction("nope"), Error);
}

TEST_CASE("behaviours") {
  auto t = triv_native();
  auto b3 = behaviours(*t, 3);
  CHECK(b3 == std::set<Beh>{Beh{}, {"theta"}, {"theta", "theta"}, {"theta", "theta", "theta"}});
  CHECK(behaviours(*t, 0) == std::set<Beh>{Beh{}});
  auto s = stack_native();
  auto b2 = behaviours(*s, 2);
  CHECK(b2.count({"push(alpha)", "pop(alpha)"}));
  for (const auto& b : b2)
    if (!b.empty()) CHECK(b[0] != "pop(alpha)");
  CHECK_FALSE(b2.count({"pop(alpha)"}));
  // monotone in n, always contains the empty behaviour
  for (int n = 0; n < 3; ++n) {
    auto a = behaviours(*s, n), c = behaviours(*s, n + 1);
    CHECK(a.count(Beh{}));
    for (const auto& x : a) CHECK(c.count(x));
  }
  // forward search agrees with replaying each string
  for (const auto& w : all_words(s->instructions(), 2)) CHECK(b2.count(w) == (is_behaviour(*s, w) ? 1u : 0u));
  Budget tiny;
  tiny.configs = 5;
  CHECK_THROWS_AS(behaviours(*s, 3, tiny), Error);
}

TEST_CASE("pair membership") {
  auto st = stack_mso();
  CHECK(mso_member(st, "pop(alpha)", nd_gr({"gamma", "beta", "alpha'"}), nd_gr({"gamma", "beta'"})));
  CHECK(mso_member(triv_mso(), "theta", ed_gr({}), ed_gr({})));
  CHECK_FALSE(mso_member(st, "push(alpha)", nd_gr({"gamma'"}), nd_gr({"gamma'"})));
  Graph w = ed_gr({});
  CHECK(mso_member(st, "moveup(beta)", nd_gr({"gamma", "beta'", "alpha"}), nd_gr({"gamma", "beta", "alpha'"}),
                   {}, &w));
  CHECK(models(w, st.instruction("moveup(beta)").phi));
  CHECK(iso_equal(w, figs::fig7()));
  Budget tiny;
  tiny.search = 3;
  CHECK_THROWS_AS(mso_member(st, "moveup(beta)", nd_gr({"gamma", "beta'", "alpha"}),
                             nd_gr({"gamma", "beta", "alpha'"}), tiny),
                  Error);
}

TEST_CASE("successors") {
  auto tm = triv_mso();
  auto ts = mso_successors(tm, tm.g_in, 1);
  REQUIRE(ts.size() == 1);
  CHECK(ts[0].theta == "theta");
  CHECK(iso_equal(ts[0].g, tm.g_in));

  auto st = stack_mso();
  auto ss = mso_successors(st, nd_gr({"gamma'"}), 2);
  CHECK(ss.size() == 3);
  std::set<std::string> names;
  for (const auto& s : ss) {
    names.insert(s.theta);
    auto expect = stack_native()->step("gamma'", s.theta);
    REQUIRE(expect.size() == 1);
    CHECK(iso_equal(s.g, stack_native()->render(expect[0])));
  }
  CHECK(names == std::set<std::string>{"push(alpha)", "push(beta)", "push(gamma)"});
  CHECK(mso_successors(st, nd_gr({"gamma'"}), 0).empty());
}

TEST_CASE("configuration enumeration") {
  auto st = stack_mso();
  auto cs = configurations(st, 3);
  CHECK(cs.size() == stack::all_configs(3).size());
  for (const auto& w : stack::all_configs(3)) {
    int found = 0;
    for (const auto& g : cs) found += iso_equal(g, nd_gr(w));
    CHECK(found == 1);
  }
  CHECK(configurations(triv_mso(), 3).size() == 1);
}

TEST_CASE("graph descriptions") {
  std::mt19937 rng(21);
  for (int t = 0; t < 150; ++t) {
    Graph a = oracle::random_graph(rng, 3, {"s", "t"}, {"a", "b"}, 0.3);
    Graph b = oracle::random_graph(rng, 3, {"s", "t"}, {"a", "b"}, 0.3);
    auto phi = describe_graph(a, {"a", "b"});
    CHECK(models(a, phi));
    CHECK(models(b, phi) == oracle::naive_iso(a, b));
  }
}

TEST_CASE("reset enrichment") {
  auto tm = enrich(triv_mso(), Enrichment::Reset);
  CHECK(tm.gamma.count(kResetLabel));
  const auto& reset = tm.instruction(kResetName).phi;
  Graph with = two_nodes({{1, kResetLabel, 2}});
  CHECK(models(with, reset));
  CHECK_FALSE(models(two_nodes(), reset));
  CHECK_FALSE(models(with, tm.instruction("theta").phi));
  CHECK(models(two_nodes(), tm.instruction("theta").phi));
  CHECK(models(tm.g_in, tm.phi_c));

  auto tn = enrich_native(triv_native(), Enrichment::Reset);
  CHECK(models(tn->witness_pair("c", kResetName, "c"), reset));
  // reset behaviour law
  std::vector<std::string> base = {"theta", kResetName};
  auto all = all_words(base, 3);
  auto plain = all_words({"theta"}, 3);
  for (const auto& a : plain)
    for (const auto& b : plain) {
      if (a.size() + b.size() + 1 > 3) continue;
      Beh w = a;
      w.push_back(kResetName);
      w.insert(w.end(), b.begin(), b.end());
      CHECK(is_behaviour(*tn, w) == (is_behaviour(*tn, a) && is_behaviour(*tn, b)));
    }
  CHECK(all.size() == 15);

  // stack with reset: any stack goes back to the initial one
  auto sm = enrich(stack_mso(), Enrichment::Reset);
  for (const auto& w : stack::all_configs(2)) {
    CHECK(mso_member(sm, kResetName, nd_gr(w), sm.g_in));
    if (w.size() == 2) CHECK_FALSE(mso_member(sm, kResetName, nd_gr(w), nd_gr(w)));
  }
  auto sn = enrich_native(stack_native(), Enrichment::Reset);
  CHECK(sn->step("gamma alpha'", kResetName) == std::vector<Config>{"gamma'"});
  CHECK(models(sn->witness_pair("gamma alpha'", kResetName, "gamma'"), sm.instruction(kResetName).phi));
  CHECK_THROWS_AS(enrich(sm, Enrichment::Reset), Error);
}

TEST_CASE("identity enrichment") {
  auto sm = enrich(stack_mso(), Enrichment::Identity);
  auto sn = enrich_native(stack_native(), Enrichment::Identity);
  for (const auto& w : stack::all_configs(3)) CHECK(mso_member(sm, kIdName, nd_gr(w), nd_gr(w)));
  for (const auto& w : stack::all_configs(2)) {
    auto c = stack::format(w);
    CHECK(models(sn->witness_pair(c, kIdName, c), sm.instruction(kIdName).phi));
    for (const auto& v : stack::all_configs(2))
      if (v != w) CHECK_FALSE(mso_member(sm, kIdName, nd_gr(w), nd_gr(v)));
  }
  auto tm = enrich(triv_mso(), Enrichment::Identity);
  CHECK(mso_member(tm, kIdName, tm.g_in, tm.g_in));
}

TEST_CASE("exclusiveness") {
  auto tm = triv_mso();
  CHECK(check_exclusive(tm, 2).ok);
  CHECK(tm.exclusive_bound == 2);
  MsoStorage dup = triv_mso();
  dup.instructions = {{"a", f::tt()}, {"b", f::tt()}};
  auto r = check_exclusive(dup, 2);
  CHECK_FALSE(r.ok);
  REQUIRE(r.witness.has_value());
  CHECK(try_pair_view(*r.witness).has_value());
  CHECK(dup.exclusive_bound == 0);
  auto st = stack_mso();
  CHECK(check_exclusive(st, 4).ok);
  auto tr = enrich(triv_mso(), Enrichment::Reset);
  CHECK(check_exclusive(tr, 4).ok);
  auto sr = enrich(stack_mso(), Enrichment::Reset);
  CHECK(check_exclusive(sr, 4).ok);
}

}  // TEST_SUITE
