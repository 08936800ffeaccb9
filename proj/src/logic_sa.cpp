#include "msoga/logic_sa.hpp"

#include "msoga/bet.hpp"

namespace msoga {

LabelSet ae_of(const LabelSet& A) {
  LabelSet ae = A;
  ae.insert(kEps);
  return ae;
}

void validate_sa(const Formula& phi, const MsoStorage& s, const LabelSet& A) {
  LabelSet ae = ae_of(A);
  map_atoms(phi, [&](const Formula& a) -> Formula {
    switch (a->op) {
      case Op::Next: s.instruction(a->sym); break;
      case Op::Edge:
        if (!ae.count(a->sym)) throw Error(ErrorKind::UnknownSymbol, "edge label '" + a->sym + "' is not in Ae");
        break;
      case Op::Lab: case Op::Eq: case Op::In: case Op::Macro:
        throw Error(ErrorKind::UnknownSymbol, "atom not available in the two-level logic");
      default: break;
    }
    return nullptr;
  });
  check_kinds(phi);
}

bool eval_sa(const MsoStorage& s, const LabelSet& A, const StringLikeView& g, const Valuation& rho,
             const Formula& phi, const EvalOptions& opt) {
  validate_sa(phi, s, A);
  std::map<int, int> comp;
  for (std::size_t i = 0; i < g.components.size(); ++i)
    for (int v : g.components[i]) comp[v] = int(i);
  LabelSet ae = ae_of(A);
  std::map<std::pair<int, std::string>, bool> memo;
  SaHooks hooks;
  hooks.ae = ae;
  hooks.next = [&](const std::string& theta, int x, int y) {
    int i = comp.at(x);
    if (comp.at(y) != i + 1) return false;
    auto [it, fresh] = memo.try_emplace({i, theta}, false);
    if (fresh) {
      NodeSet both = g.components[std::size_t(i)];
      both.insert(g.components[std::size_t(i) + 1].begin(), g.components[std::size_t(i) + 1].end());
      it->second = models(relabel_edges(induced_subgraph(g.underlying, both), ae, kNu), s.instruction(theta).phi);
    }
    return it->second;
  };
  Model m(g.underlying);
  Checker c(m, phi, rho, opt, &hooks);
  return c.run().v == K3::T;
}

bool eval_sa(const MsoStorage& s, const LabelSet& A, const Graph& g, const Formula& phi) {
  return eval_sa(s, A, as_string_like(g, s.g_in, A), {}, phi);
}

Formula beh_formula(const MsoStorage& s, const LabelSet& A) {
  std::vector<Formula> cs, ds;
  for (const auto& theta : s.instruction_names()) ds.push_back(f::next(theta, "x", "y"));
  for (const auto& a : ae_of(A)) cs.push_back(f::implies(f::edge(a, "x", "y"), f::lor(ds)));
  return f::all1({"x", "y"}, f::land(cs));
}

namespace {

// edge_nu becomes edge_Ae
Formula tilde(const Formula& theta, const LabelSet& ae) {
  return map_atoms(theta, [&](const Formula& a) -> Formula {
    if (a->op == Op::Edge && a->sym == kNu) return f::edge_any(ae, a->v1, a->v2);
    if (a->op == Op::Macro && a->labels.count(kNu)) return tilde(desugar(a), ae);
    return nullptr;
  });
}

}  // namespace

Formula embed(const Formula& phi, const MsoStorage& s, const LabelSet& A) {
  LabelSet ae = ae_of(A);
  return map_atoms(phi, [&](const Formula& a) -> Formula {
    using namespace f;
    if (a->op == Op::MemberEq) {
      std::string y = fresh_name("y", {a->v1, a->v2});
      return ex1(y, land(in(y, a->v2), eqnb(ae, a->v1, y)));
    }
    if (a->op == Op::Next) {
      Formula t = tilde(s.instruction(a->sym).phi, ae);
      auto avoid = all_var_names(t);
      avoid.insert({a->v1, a->v2});
      std::string X = fresh_name("X", avoid);
      avoid.insert(X);
      std::string Y = fresh_name("Y", avoid);
      avoid.insert(Y);
      std::string Z = fresh_name("Z", avoid);
      // curried: each set is pinned down by its own premise
      Formula body = all2(Z, implies(union_of(X, Y, Z), relativize(t, Z)));
      body = all2(X, implies(ec(ae, a->v1, X), all2(Y, implies(ec(ae, a->v2, Y), body))));
      return land(edge_any(ae, a->v1, a->v2), body);
    }
    return nullptr;
  });
}

Formula lift(const Formula& phi) {
  return map_atoms(phi, [&](const Formula& a) -> Formula {
    using namespace f;
    switch (a->op) {
      case Op::Lab: return a->sym == kStar ? tt() : ff();
      case Op::Edge: {
        auto parts = untup(a->sym);
        if (parts.size() != 2) throw Error(ErrorKind::UnknownSymbol, "'" + a->sym + "' is not an (alpha, theta) pair");
        return land(edge(parts[0], a->v1, a->v2), next(parts[1], a->v1, a->v2));
      }
      case Op::In: return member_eq(a->v1, a->v2);
      case Op::Eq: {
        std::string X = fresh_name("X", {a->v1, a->v2});
        return all2(X, implies(member_eq(a->v1, X), member_eq(a->v2, X)));
      }
      case Op::Macro: return lift(desugar(a));
      case Op::Next: case Op::MemberEq:
        throw Error(ErrorKind::UnknownSymbol, "two-level atom in a string formula");
      default: return nullptr;
    }
  });
}

Formula lower(const Formula& phi, const MsoStorage& s, const LabelSet& A) {
  validate_sa(phi, s, A);
  LabelSet ae = ae_of(A);
  auto thetas = s.instruction_names();
  return map_atoms(phi, [&](const Formula& a) -> Formula {
    using namespace f;
    std::vector<Formula> ds;
    switch (a->op) {
      case Op::Edge:
        for (const auto& t : thetas) ds.push_back(edge(tup({a->sym, t}), a->v1, a->v2));
        return lor(ds);
      case Op::Next:
        for (const auto& al : ae) ds.push_back(edge(tup({al, a->sym}), a->v1, a->v2));
        return lor(ds);
      case Op::MemberEq: return in(a->v1, a->v2);
      default: return nullptr;
    }
  });
}

Formula automaton_to_saformula(const SAutomaton& m, const MsoStorage& s) {
  return lift(nfa_to_mso(to_word_nfa(m, s.instruction_names())));
}

SAutomaton saformula_to_automaton(const Formula& phi, const MsoStorage& s, const LabelSet& A, std::uint64_t budget) {
  std::set<Symbol> sigma;
  for (const auto& a : ae_of(A))
    for (const auto& t : s.instruction_names()) sigma.insert(tup({a, t}));
  return from_word_nfa(mso_to_nfa(lower(phi, s, A), sigma, budget), A, s.name);
}

}  // namespace msoga
