#include "msoga/sautomaton.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <tuple>

namespace msoga {

int SAutomaton::add_state(const std::string& name, bool is_initial, bool is_final) {
  int q = int(states.size());
  states.push_back(name);
  if (is_initial) initial.insert(q);
  if (is_final) final.insert(q);
  return q;
}

void SAutomaton::add(int from, const Label& alpha, const std::string& theta, int to) {
  if (alpha != kEps) input.insert(alpha);
  trans.push_back({from, alpha, theta, to});
}

int SAutomaton::state(const std::string& name) const {
  for (std::size_t i = 0; i < states.size(); ++i)
    if (states[i] == name) return int(i);
  return -1;
}

std::set<std::string> SAutomaton::thetas() const {
  std::set<std::string> r;
  for (const auto& t : trans) r.insert(t.theta);
  return r;
}

void validate(const SAutomaton& m) {
  if (m.input.count(kEps)) throw Error(ErrorKind::ReservedSymbol, "e cannot be an input symbol");
  int n = int(m.states.size());
  auto ok = [n](int q) { return q >= 0 && q < n; };
  for (int q : m.initial)
    if (!ok(q)) throw Error(ErrorKind::UnknownNode, "initial state out of range");
  for (int q : m.final)
    if (!ok(q)) throw Error(ErrorKind::UnknownNode, "final state out of range");
  for (const auto& t : m.trans) {
    if (!ok(t.from) || !ok(t.to)) throw Error(ErrorKind::UnknownNode, "transition state out of range");
    if (t.alpha != kEps && !m.input.count(t.alpha))
      throw Error(ErrorKind::UnknownSymbol, "transition symbol '" + t.alpha + "' not in the input alphabet");
  }
}

Word erase_e(const Word& w) {
  Word r;
  for (const auto& a : w)
    if (a != kEps) r.push_back(a);
  return r;
}

NFA to_word_nfa(const SAutomaton& m, const std::vector<std::string>& thetas) {
  validate(m);
  std::set<std::string> th(thetas.begin(), thetas.end());
  for (const auto& t : m.trans) th.insert(t.theta);
  NFA n;
  n.states = m.states;
  n.initial = m.initial;
  n.final = m.final;
  LabelSet ae = m.input;
  ae.insert(kEps);
  for (const auto& a : ae)
    for (const auto& t : th) n.alphabet.insert(tup({a, t}));
  for (const auto& t : m.trans) n.trans.insert({t.from, tup({t.alpha, t.theta}), t.to});
  return n;
}

SAutomaton from_word_nfa(const NFA& n, const LabelSet& input, const std::string& storage) {
  SAutomaton m;
  m.input = input;
  m.states = n.states;
  m.initial = n.initial;
  m.final = n.final;
  m.storage = storage;
  for (const auto& [p, a, q] : n.trans) {
    auto parts = untup(a);
    if (parts.size() != 2) throw Error(ErrorKind::AlphabetMismatch, "'" + a + "' is not an (alpha, theta) pair");
    m.trans.push_back({p, parts[0], parts[1], q});
  }
  std::sort(m.trans.begin(), m.trans.end());
  validate(m);
  return m;
}

SAutomaton triv_automaton(const NFA& n, const std::string& theta) {
  SAutomaton m;
  m.states = n.states;
  m.initial = n.initial;
  m.final = n.final;
  for (const auto& a : n.alphabet)
    if (a != kEps) m.input.insert(a);
  for (const auto& [p, a, q] : n.trans) m.trans.push_back({p, a, theta, q});
  m.storage = "Triv";
  validate(m);
  return m;
}

SAutomaton wwrw_automaton() {
  SAutomaton m;
  m.storage = "Stack";
  m.input = {"0", "1"};
  int q1 = m.add_state("q1", true), q2 = m.add_state("q2"), q3 = m.add_state("q3"), q4 = m.add_state("q4", false, true);
  for (auto [a, w] : {std::pair<std::string, std::string>{"0", "alpha"}, {"1", "beta"}}) {
    m.add(q1, a, "push(" + w + ")", q1);
    m.add(q1, a, "movedown(" + w + ")", q2);
    m.add(q2, a, "movedown(" + w + ")", q2);
    m.add(q3, a, "moveup(" + w + ")", q3);
    m.add(q3, a, "pop(" + w + ")", q4);
  }
  m.add(q2, kEps, "moveup(gamma)", q3);
  return m;
}

namespace {

void check_instructions(const SAutomaton& m, const NativeStorage& s) {
  for (const auto& t : m.trans)
    if (!s.has_instruction(t.theta))
      throw Error(ErrorKind::UnknownInstruction, s.name() + " has no instruction '" + t.theta + "'");
}

struct Id {
  int q;
  std::size_t pos;
  Config c;
  long parent;
  std::size_t via;
};

}  // namespace

std::optional<Run> s_find_run(const SAutomaton& m, const NativeStorage& s, const Word& w, const AcceptOptions& opt) {
  validate(m);
  check_instructions(m, s);
  for (const auto& a : w)
    if (!m.input.count(a)) throw Error(ErrorKind::UnknownSymbol, "input symbol '" + a + "' not in the alphabet");
  std::uint64_t limit = opt.steps ? *opt.steps : 4 * w.size() * m.states.size() + opt.extra_steps;

  std::vector<Id> ids;
  std::set<std::tuple<int, std::size_t, Config>> seen;
  std::vector<std::size_t> frontier;
  auto reach = [&](int q, std::size_t pos, const Config& c, long parent, std::size_t via) -> bool {
    if (!seen.insert({q, pos, c}).second) return false;
    if (seen.size() > opt.max_ids)
      throw Error(ErrorKind::BudgetExhausted, "more than " + std::to_string(opt.max_ids) + " instantaneous descriptions");
    ids.push_back({q, pos, c, parent, via});
    frontier.push_back(ids.size() - 1);
    return pos == w.size() && m.final.count(q);
  };
  auto unwind = [&](std::size_t i) {
    Run r;
    for (long j = long(i); j >= 0; j = ids[j].parent) {
      r.configs.push_back(ids[j].c);
      if (ids[j].parent >= 0) r.steps.push_back(ids[j].via);
      r.start = ids[j].q;
    }
    std::reverse(r.configs.begin(), r.configs.end());
    std::reverse(r.steps.begin(), r.steps.end());
    return r;
  };

  Config c0 = s.initial();
  for (int q : m.initial)
    if (reach(q, 0, c0, -1, 0)) return unwind(ids.size() - 1);
  for (std::uint64_t depth = 0; !frontier.empty(); ++depth) {
    if (depth >= limit)
      throw Error(ErrorKind::BudgetExhausted, "no decision within " + std::to_string(limit) + " steps");
    std::vector<std::size_t> cur;
    cur.swap(frontier);
    for (std::size_t i : cur) {
      for (std::size_t t = 0; t < m.trans.size(); ++t) {
        const auto& tr = m.trans[t];
        if (tr.from != ids[i].q) continue;
        std::size_t pos = ids[i].pos;
        if (tr.alpha != kEps) {
          if (pos >= w.size() || w[pos] != tr.alpha) continue;
          ++pos;
        }
        Config c = ids[i].c;  // ids may reallocate below
        for (const auto& n : s.step(c, tr.theta))
          if (reach(tr.to, pos, n, long(i), t)) return unwind(ids.size() - 1);
      }
    }
  }
  return std::nullopt;
}

bool s_accepts_string(const SAutomaton& m, const NativeStorage& s, const Word& w, const AcceptOptions& opt) {
  return s_find_run(m, s, w, opt).has_value();
}

std::vector<Run> accepting_runs(const SAutomaton& m, const NativeStorage& s, int max_len, std::size_t max_runs) {
  validate(m);
  check_instructions(m, s);
  std::vector<Run> out;
  Run cur;
  std::function<void(int)> go = [&](int q) {
    if (m.final.count(q)) {
      if (out.size() >= max_runs) throw Error(ErrorKind::BudgetExhausted, "too many accepting runs");
      out.push_back(cur);
    }
    if (int(cur.steps.size()) >= max_len) return;
    for (std::size_t t = 0; t < m.trans.size(); ++t) {
      if (m.trans[t].from != q) continue;
      Config c = cur.configs.back();
      for (const auto& n : s.step(c, m.trans[t].theta)) {
        cur.steps.push_back(t);
        cur.configs.push_back(n);
        go(m.trans[t].to);
        cur.steps.pop_back();
        cur.configs.pop_back();
      }
    }
  };
  for (int q : m.initial) {
    cur = Run{q, {}, {s.initial()}};
    go(q);
  }
  return out;
}

Word run_input(const SAutomaton& m, const Run& r) {
  Word w;
  for (auto t : r.steps)
    if (m.trans.at(t).alpha != kEps) w.push_back(m.trans[t].alpha);
  return w;
}

void check_run(const SAutomaton& m, const NativeStorage& s, const Run& r) {
  auto bad = [](const std::string& why) { throw Error(ErrorKind::InvalidRun, why); };
  if (r.configs.size() != r.steps.size() + 1) bad("need one more configuration than steps");
  if (!m.initial.count(r.start)) bad("run does not start in an initial state");
  if (r.configs[0] != s.initial()) bad("run does not start in the initial configuration");
  int q = r.start;
  for (std::size_t i = 0; i < r.steps.size(); ++i) {
    if (r.steps[i] >= m.trans.size()) bad("no transition " + std::to_string(r.steps[i]));
    const auto& t = m.trans[r.steps[i]];
    if (t.from != q) bad("step " + std::to_string(i) + " does not continue from state " + m.states[q]);
    auto next = s.step(r.configs[i], t.theta);
    if (std::find(next.begin(), next.end(), r.configs[i + 1]) == next.end())
      bad("step " + std::to_string(i) + ": '" + r.configs[i + 1] + "' is not a " + t.theta + "-successor");
    q = t.to;
  }
  if (!m.final.count(q)) bad("run does not end in a final state");
}

std::optional<std::vector<std::string>> graph_behaviour(const MsoStorage& s, const StringLikeView& v) {
  LabelSet ae(v.trace.begin(), v.trace.end());
  std::vector<std::string> out;
  for (std::size_t i = 0; i + 1 < v.components.size(); ++i) {
    NodeSet both = v.components[i];
    both.insert(v.components[i + 1].begin(), v.components[i + 1].end());
    Graph h = relabel_edges(induced_subgraph(v.underlying, both), ae, kNu);
    std::vector<std::string> hits;
    for (const auto& ins : s.instructions)
      if (models(h, ins.phi)) hits.push_back(ins.name);
    if (hits.size() > 1)
      throw Error(ErrorKind::NotExclusive, "pair " + std::to_string(i + 1) + " satisfies both " + hits[0] + " and " + hits[1]);
    if (hits.empty()) return std::nullopt;
    out.push_back(hits[0]);
  }
  return out;
}

GraphAcceptance s_accepts_graph(const SAutomaton& m, const MsoStorage& s, const Graph& g) {
  validate(m);
  for (const auto& t : m.trans) s.instruction(t.theta);
  auto v = as_string_like(g, s.g_in, m.input);
  GraphAcceptance r;
  r.behaviour = graph_behaviour(s, v);
  if (!r.behaviour) return r;
  Word w;
  for (std::size_t i = 0; i < v.trace.size(); ++i) w.push_back(tup({v.trace[i], (*r.behaviour)[i]}));
  r.accepted = nfa_accepts(to_word_nfa(m, s.instruction_names()), w);
  return r;
}

Formula stringlike_formula(const MsoStorage& s, const LabelSet& A) {
  LabelSet ae = A;
  ae.insert(kEps);
  LabelSet gamma = s.gamma;
  gamma.insert(s.delta.begin(), s.delta.end());
  std::vector<Formula> cs = {f::string_eq(ae)};
  // all edges between two consecutive components carry the same symbol
  for (const auto& a : ae) {
    cs.push_back(f::all1({"x", "y", "z"}, f::implies(f::land(f::edge(a, "x", "y"), f::edge_any(ae, "x", "z")),
                                                     f::edge(a, "x", "z"))));
    cs.push_back(f::all1({"x", "y", "z"}, f::implies(f::land(f::edge(a, "x", "y"), f::edge_any(ae, "z", "y")),
                                                     f::edge(a, "z", "y"))));
  }
  if (!gamma.empty())
    cs.push_back(f::all1({"x", "y"}, f::implies(f::edge_any(gamma, "x", "y"),
                                                f::lor(f::eqnb(ae, "x", "y"), f::edge_any(ae, "x", "y")))));
  cs.push_back(f::all2("X", f::implies(first_set(ae, "X"), relativize(describe_graph(s.g_in, gamma), "X"))));
  return f::land(cs);
}

Graph build_witness_graph(const SAutomaton& m, const NativeStorage& s, const Run& r) {
  check_run(m, s, r);
  std::vector<Graph> parts;
  std::vector<int> base;
  int next_base = 0;
  std::vector<std::pair<int, Label>> nodes;
  std::vector<Edge> edges;
  for (const auto& c : r.configs) {
    parts.push_back(s.render(c));
    base.push_back(next_base);
    for (int v : parts.back().nodes()) nodes.push_back({v + next_base, parts.back().label(v)});
    for (const auto& e : parts.back().edges()) edges.push_back({e.src + next_base, e.label, e.dst + next_base});
    next_base += parts.back().max_id();
  }
  for (std::size_t i = 0; i < r.steps.size(); ++i) {
    const auto& t = m.trans[r.steps[i]];
    const Graph &g1 = parts[i], &g2 = parts[i + 1];
    Graph h = s.witness_pair(r.configs[i], t.theta, r.configs[i + 1]);
    int off = assemble_pair(g1, g2).second;
    NodeSet first(g1.nodes().begin(), g1.nodes().end());
    auto pv = as_pair_view(h);
    if (pv.first != first || !(pv.first_graph() == g1))
      throw Error(ErrorKind::InvalidRun, "witness pair does not extend the rendered configurations");
    auto place = [&](int u) { return first.count(u) ? u + base[i] : u - off + base[i + 1]; };
    for (const auto& e : h.edges())
      if (e.label != kNu && first.count(e.src) != first.count(e.dst))
        edges.push_back({place(e.src), e.label, place(e.dst)});
    for (int x : g1.nodes())
      for (int y : g2.nodes()) edges.push_back({x + base[i], t.alpha, y + base[i + 1]});
  }
  return new_graph(nodes, edges);
}

SAutomaton reset_combine(Combine op, const SAutomaton& m1, const SAutomaton* m2, const std::string& chi) {
  if (op == Combine::Concat) {
    if (!m2) throw Error(ErrorKind::StorageMismatch, "concatenation needs two automata");
    return reset_concat(m1, *m2, chi);
  }
  return reset_star(m1, chi);
}

SAutomaton reset_concat(const SAutomaton& m1, const SAutomaton& m2, const std::string& chi) {
  validate(m1);
  validate(m2);
  if (!m1.storage.empty() && !m2.storage.empty() && m1.storage != m2.storage)
    throw Error(ErrorKind::StorageMismatch, "automata run on " + m1.storage + " and " + m2.storage);
  SAutomaton r;
  r.storage = m1.storage.empty() ? m2.storage : m1.storage;
  r.input = m1.input;
  r.input.insert(m2.input.begin(), m2.input.end());
  for (std::size_t q = 0; q < m1.states.size(); ++q) r.add_state("1." + m1.states[q], m1.initial.count(int(q)));
  int off = int(m1.states.size());
  for (std::size_t q = 0; q < m2.states.size(); ++q) r.add_state("2." + m2.states[q], false, m2.final.count(int(q)));
  r.trans = m1.trans;
  for (auto t : m2.trans) r.trans.push_back({t.from + off, t.alpha, t.theta, t.to + off});
  for (int p : m1.final)
    for (int q : m2.initial) r.trans.push_back({p, kEps, chi, q + off});
  return r;
}

SAutomaton reset_star(const SAutomaton& m, const std::string& chi) {
  validate(m);
  SAutomaton r;
  r.storage = m.storage;
  r.input = m.input;
  for (std::size_t q = 0; q < m.states.size(); ++q)
    r.add_state(m.states[q], m.initial.count(int(q)), m.final.count(int(q)));
  r.trans = m.trans;
  for (int p : m.final)
    for (int q : m.initial) r.trans.push_back({p, kEps, chi, q});
  std::string name = "start";
  while (r.state(name) >= 0) name += "'";
  r.add_state(name, true, true);
  return r;
}

}  // namespace msoga
