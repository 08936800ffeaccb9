#include "msoga/transducer.hpp"

#include "msoga/storage.hpp"

namespace msoga {

Formula MsoTransducer::node_formula(const Label& s, const std::string& d) const {
  auto it = psi.find({s, d});
  return it == psi.end() ? f::ff() : it->second;
}

Formula MsoTransducer::edge_formula(const Label& g, const std::string& d, const std::string& d2) const {
  auto it = phi.find({g, d, d2});
  return it == phi.end() ? f::ff() : it->second;
}

void validate(const MsoTransducer& t) {
  if (t.dups.empty()) throw Error(ErrorKind::IllKinded, "a transducer needs at least one duplicate name");
  if (t.x == t.x2) throw Error(ErrorKind::VariableClash, "node variables x and x' must differ");
  std::set<Var> par;
  for (const auto& p : t.params) par.insert({p, VarKind::Second});
  auto within = [&](const Formula& a, std::set<Var> allowed, const std::string& what) {
    check_kinds(a);
    for (const auto& v : free_vars(a))
      if (!allowed.count(v)) throw Error(ErrorKind::UnboundVariable, what + " is free in '" + v.name + "'");
  };
  within(t.chi, par, "the domain formula");
  auto px = par;
  px.insert({t.x, VarKind::First});
  for (const auto& [k, a] : t.psi) within(a, px, "a node formula");
  px.insert({t.x2, VarKind::First});
  for (const auto& [k, a] : t.phi) within(a, px, "an edge formula");
}

Transduced apply_with_origins(const MsoTransducer& t, const Graph& g, const Valuation& rho) {
  validate(t);
  for (const auto& p : t.params)
    if (!rho.so.count(p)) throw Error(ErrorKind::UnboundVariable, "parameter '" + p + "' has no value");
  if (!eval(g, rho, t.chi)) throw Error(ErrorKind::NotInDomain, "the domain formula fails");
  int m = g.max_id();
  std::map<int, std::pair<std::string, int>> origin;
  std::vector<std::pair<int, Label>> nodes;
  for (std::size_t i = 0; i < t.dups.size(); ++i)
    for (int u : g.nodes()) {
      Valuation r1 = rho;
      r1.fo[t.x] = u;
      std::vector<Label> hits;
      for (const auto& s : t.sigma)
        if (eval(g, r1, t.node_formula(s, t.dups[i]))) hits.push_back(s);
      if (hits.size() != 1) continue;
      int id = int(i) * m + u;
      nodes.push_back({id, hits[0]});
      origin[id] = {t.dups[i], u};
    }
  if (nodes.empty()) throw Error(ErrorKind::EmptyOutput, "the transducer produces no node");
  std::vector<Edge> edges;
  for (const auto& [a, oa] : origin)
    for (const auto& [b, ob] : origin) {
      if (a == b) continue;
      Valuation r2 = rho;
      r2.fo[t.x] = oa.second;
      r2.fo[t.x2] = ob.second;
      for (const auto& l : t.gamma)
        if (eval(g, r2, t.edge_formula(l, oa.first, ob.first))) edges.push_back({a, l, b});
    }
  return {new_graph(nodes, edges), origin};
}

Graph apply(const MsoTransducer& t, const Graph& g, const Valuation& rho) { return apply_with_origins(t, g, rho).out; }

Graph origin_pair(const MsoTransducer& t, const Graph& g, const Valuation& rho) {
  auto tr = apply_with_origins(t, g, rho);
  auto [h, off] = assemble_pair(g, tr.out);
  std::vector<Edge> d;
  for (const auto& [v, o] : tr.origin) d.push_back({o.second, o.first, v + off});
  return add_edges(h, d);
}

Formula expressibility_formula(const MsoTransducer& t) {
  validate(t);
  LabelSet D(t.dups.begin(), t.dups.end());
  for (const auto& d : D)
    if (t.gamma.count(d) || d == kNu) throw Error(ErrorKind::AlphabetClash, "duplicate name '" + d + "' is an edge label");
  using namespace f;

  std::set<std::string> avoid(t.params.begin(), t.params.end());
  avoid.insert({t.x, t.x2});
  auto note = [&](const Formula& a) {
    auto n = all_var_names(a);
    avoid.insert(n.begin(), n.end());
  };
  note(t.chi);
  for (const auto& [k, a] : t.psi) note(a);
  for (const auto& [k, a] : t.phi) note(a);
  for (const char* n : {"x", "y", "z", "w", "u", "v"}) avoid.insert(n);  // used by the pair helpers
  auto fresh = [&](const std::string& b) {
    std::string v = fresh_name(b, avoid);
    avoid.insert(v);
    return v;
  };
  std::string X1 = fresh("X1"), X2 = fresh("X2"), v = fresh("v"), w = fresh("w"), o = fresh("o");
  const std::string &x = t.x, &x2 = t.x2;

  auto psi1 = [&](const Label& s, const std::string& d) { return relativize(t.node_formula(s, d), X1); };
  auto exactly_one = [&](const std::string& d) {
    std::vector<Formula> ds;
    for (const auto& s : t.sigma) {
      std::vector<Formula> cs{psi1(s, d)};
      for (const auto& s2 : t.sigma)
        if (s2 != s) cs.push_back(neg(psi1(s2, d)));
      ds.push_back(land(cs));
    }
    return lor(ds);
  };

  std::vector<Formula> body;
  for (const auto& p : t.params) body.push_back(subset(p, X1));
  body.push_back(pairf::no_edges(D, X1, X1));
  body.push_back(pairf::no_edges(D, X2, X2));
  body.push_back(pairf::no_edges(D, X2, X1));
  body.push_back(pairf::no_edges(t.gamma, X1, X2));
  body.push_back(pairf::no_edges(t.gamma, X2, X1));
  body.push_back(relativize(t.chi, X1));

  // every node of X2 has exactly one origin edge
  std::vector<Formula> some, clash;
  for (const auto& d : D) {
    some.push_back(ex1(x, land(in(x, X1), edge(d, x, v))));
    for (const auto& d2 : D)
      clash.push_back(implies(land(edge(d, x, v), edge(d2, o, v)), d == d2 ? eq(x, o) : ff()));
  }
  body.push_back(all1(v, implies(in(v, X2), land(lor(some), all1({x, o}, land(clash))))));
  // at most one d-duplicate per origin, and one exactly when psi picks a label
  std::vector<Formula> per;
  for (const auto& d : D) {
    per.push_back(all1({v, w}, implies(land(edge(d, x, v), edge(d, x, w)), eq(v, w))));
    per.push_back(iff(ex1(v, edge(d, x, v)), exactly_one(d)));
  }
  body.push_back(all1(x, implies(in(x, X1), land(per))));
  // edges and labels of the duplicates
  std::vector<Formula> links, labels;
  for (const auto& d : D) {
    for (const auto& d2 : D) {
      std::vector<Formula> each;
      for (const auto& g : t.gamma) each.push_back(iff(edge(g, v, w), relativize(t.edge_formula(g, d, d2), X1)));
      links.push_back(implies(land({edge(d, x, v), edge(d2, x2, w), neg(eq(v, w))}), land(each)));
    }
    std::vector<Formula> each;
    for (const auto& s : t.sigma) each.push_back(iff(lab(s, v), psi1(s, d)));
    labels.push_back(implies(edge(d, x, v), land(each)));
  }
  body.push_back(all1({x, v, x2, w}, land(links)));
  body.push_back(all1({x, v}, land(labels)));

  Formula r = pairf::frame(X1, X2, land(body));
  for (auto it = t.params.rbegin(); it != t.params.rend(); ++it) r = ex2(*it, r);
  return r;
}

Formula invert_relation(const Formula& phi) { return reverse_edges(phi, {kNu}); }

MsoTransducer copy_transducer(const LabelSet& sigma, const LabelSet& gamma) {
  MsoTransducer t;
  t.sigma = sigma;
  t.gamma = gamma;
  t.chi = f::tt();
  t.dups = {"d"};
  for (const auto& s : sigma) t.psi[{s, "d"}] = f::lab(s, t.x);
  for (const auto& g : gamma) t.phi[{g, "d", "d"}] = f::edge(g, t.x, t.x2);
  return t;
}

MsoTransducer collapse_transducer(const LabelSet& gamma) {
  MsoTransducer t;
  t.sigma = {kStar};
  t.gamma = gamma;
  t.chi = f::tt();
  t.dups = {"d"};
  t.psi[{kStar, "d"}] = first_node(gamma, t.x);
  return t;
}

}  // namespace msoga
