#include "msoga/formula.hpp"

#include <map>

namespace msoga {

namespace {

Formula mk(Node n) { return std::make_shared<const Node>(std::move(n)); }

Node base(Op op) {
  Node n;
  n.op = op;
  return n;
}

}  // namespace

namespace f {

Formula tt() { return mk(base(Op::True)); }
Formula ff() { return mk(base(Op::False)); }

Formula lab(const Label& s, const std::string& x) {
  Node n = base(Op::Lab);
  n.sym = s;
  n.v1 = x;
  return mk(std::move(n));
}

Formula lab_any(const LabelSet& s, const std::string& x) {
  std::vector<Formula> xs;
  for (const auto& l : s) xs.push_back(lab(l, x));
  return lor(std::move(xs));
}

Formula edge(const Label& s, const std::string& x, const std::string& y) {
  Node n = base(Op::Edge);
  n.sym = s;
  n.v1 = x;
  n.v2 = y;
  return mk(std::move(n));
}

Formula edge_any(const LabelSet& s, const std::string& x, const std::string& y) {
  std::vector<Formula> xs;
  for (const auto& l : s) xs.push_back(edge(l, x, y));
  return lor(std::move(xs));
}

Formula in(const std::string& x, const std::string& X) {
  Node n = base(Op::In);
  n.v1 = x;
  n.v2 = X;
  return mk(std::move(n));
}

Formula eq(const std::string& x, const std::string& y) {
  Node n = base(Op::Eq);
  n.v1 = x;
  n.v2 = y;
  return mk(std::move(n));
}

Formula neg(Formula a) {
  Node n = base(Op::Not);
  n.kids = {std::move(a)};
  return mk(std::move(n));
}

static Formula bin(Op op, Formula a, Formula b) {
  Node n = base(op);
  n.kids = {std::move(a), std::move(b)};
  return mk(std::move(n));
}

Formula lor(Formula a, Formula b) { return bin(Op::Or, std::move(a), std::move(b)); }
Formula land(Formula a, Formula b) { return bin(Op::And, std::move(a), std::move(b)); }
Formula implies(Formula a, Formula b) { return bin(Op::Implies, std::move(a), std::move(b)); }
Formula iff(Formula a, Formula b) { return bin(Op::Iff, std::move(a), std::move(b)); }

Formula lor(std::vector<Formula> xs) {
  if (xs.empty()) return ff();
  Formula r = xs.back();
  for (std::size_t i = xs.size() - 1; i-- > 0;) r = lor(xs[i], r);
  return r;
}

Formula land(std::vector<Formula> xs) {
  if (xs.empty()) return tt();
  Formula r = xs.back();
  for (std::size_t i = xs.size() - 1; i-- > 0;) r = land(xs[i], r);
  return r;
}

static Formula quant(Op op, const std::string& v, Formula a) {
  Node n = base(op);
  n.v1 = v;
  n.kids = {std::move(a)};
  return mk(std::move(n));
}

Formula ex1(const std::string& x, Formula a) { return quant(Op::Ex1, x, std::move(a)); }
Formula ex2(const std::string& X, Formula a) { return quant(Op::Ex2, X, std::move(a)); }
Formula all1(const std::string& x, Formula a) { return quant(Op::All1, x, std::move(a)); }
Formula all2(const std::string& X, Formula a) { return quant(Op::All2, X, std::move(a)); }

Formula ex1(std::initializer_list<std::string> xs, Formula a) {
  std::vector<std::string> v(xs);
  for (std::size_t i = v.size(); i-- > 0;) a = ex1(v[i], a);
  return a;
}

Formula all1(std::initializer_list<std::string> xs, Formula a) {
  std::vector<std::string> v(xs);
  for (std::size_t i = v.size(); i-- > 0;) a = all1(v[i], a);
  return a;
}

Formula subset(const std::string& X, const std::string& Y) {
  std::string z = fresh_name("z", {X, Y});
  return all1(z, implies(in(z, X), in(z, Y)));
}

static Formula macro(MacroKind k, const LabelSet& l, std::string x = "", std::string y = "") {
  Node n = base(Op::Macro);
  n.macro = k;
  n.labels = l;
  n.v1 = std::move(x);
  n.v2 = std::move(y);
  return mk(std::move(n));
}

Formula path(const LabelSet& l, const std::string& x, const std::string& y) { return macro(MacroKind::Path, l, x, y); }
Formula string(const LabelSet& l) { return macro(MacroKind::String, l); }
Formula string_eq(const LabelSet& l) {
  Node n = base(Op::Macro);
  n.macro = MacroKind::String;
  n.labels = l;
  n.eq_mode = true;
  return mk(std::move(n));
}
Formula eqnb(const LabelSet& l, const std::string& x, const std::string& y) { return macro(MacroKind::EqNb, l, x, y); }

Formula next(const std::string& theta, const std::string& x, const std::string& y) {
  Node n = base(Op::Next);
  n.sym = theta;
  n.v1 = x;
  n.v2 = y;
  return mk(std::move(n));
}

Formula member_eq(const std::string& x, const std::string& X) {
  Node n = base(Op::MemberEq);
  n.v1 = x;
  n.v2 = X;
  return mk(std::move(n));
}

}  // namespace f

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  if (!avoid.count(base)) return base;
  for (int i = 1;; ++i) {
    std::string s = base + std::to_string(i);
    if (!avoid.count(s)) return s;
  }
}

Formula closed(const LabelSet& l, const std::string& X) {
  std::string x = fresh_name("u", {X}), y = fresh_name("v", {X, x});
  using namespace f;
  return all1({x, y}, implies(land(edge_any(l, x, y), in(x, X)), in(y, X)));
}

Formula ec(const LabelSet& l, const std::string& x, const std::string& X) {
  std::string y = fresh_name("y", {x, X});
  using namespace f;
  return all1(y, iff(in(y, X), eqnb(l, x, y)));
}

Formula first_node(const LabelSet& l, const std::string& x) {
  std::string y = fresh_name("y", {x});
  return f::neg(f::ex1(y, f::edge_any(l, y, x)));
}

Formula last_node(const LabelSet& l, const std::string& x) {
  std::string y = fresh_name("y", {x});
  return f::neg(f::ex1(y, f::edge_any(l, x, y)));
}

Formula first_set(const LabelSet& l, const std::string& X) {
  std::string x = fresh_name("x", {X});
  return f::all1(x, f::iff(f::in(x, X), first_node(l, x)));
}

Formula union_of(const std::string& X, const std::string& Y, const std::string& Z) {
  std::string z = fresh_name("z", {X, Y, Z});
  using namespace f;
  return all1(z, iff(in(z, Z), lor(in(z, X), in(z, Y))));
}

Formula exclusive(const LabelSet& l, const std::string& x, const std::string& y) {
  std::vector<Formula> cs;
  for (const auto& g : l) {
    LabelSet others = l;
    others.erase(g);
    cs.push_back(f::implies(f::edge(g, x, y), f::neg(f::edge_any(others, x, y))));
  }
  return f::land(std::move(cs));
}

namespace {

// Example-style expansion of string_L, or string_{L,eq}.
Formula expand_string(const LabelSet& l, bool eq_mode) {
  using namespace f;
  auto same = [&](const std::string& a, const std::string& b) { return eq_mode ? eqnb(l, a, b) : eq(a, b); };
  auto first = [&](const std::string& x) {
    std::string y = fresh_name("y", {x}), z = fresh_name("z", {x, y});
    return land(neg(ex1(y, edge_any(l, y, x))), all1(z, implies(neg(ex1(y, edge_any(l, y, z))), same(z, x))));
  };
  auto last = [&](const std::string& x) {
    std::string y = fresh_name("y", {x}), z = fresh_name("z", {x, y});
    return land(neg(ex1(y, edge_any(l, x, y))), all1(z, implies(neg(ex1(y, edge_any(l, z, y))), same(z, x))));
  };
  // in eq mode a node also reaches the members of its own class
  auto reach = [&](const std::string& a, const std::string& b) {
    return eq_mode ? lor(path(l, a, b), eqnb(l, a, b)) : path(l, a, b);
  };
  Formula succ = all1({"y", "z"}, implies(land(edge_any(l, "x", "y"), edge_any(l, "x", "z")), same("y", "z")));
  Formula pred = all1({"y", "z"}, implies(land(edge_any(l, "y", "x"), edge_any(l, "z", "x")), same("y", "z")));
  return land({ex1("x", first("x")), ex1("x", last("x")), all1("x", land(succ, pred)),
               all1({"x", "y"}, exclusive(l, "x", "y")),
               all1({"x", "y", "z"}, implies(land(first("x"), last("z")), land(reach("x", "y"), reach("y", "z"))))});
}

Formula expand_macro(const Node& n) {
  using namespace f;
  switch (n.macro) {
    case MacroKind::Path: {
      std::string X = fresh_name("X", {n.v1, n.v2});
      return all2(X, implies(land(closed(n.labels, X), in(n.v1, X)), in(n.v2, X)));
    }
    case MacroKind::String:
      return expand_string(n.labels, n.eq_mode);
    case MacroKind::EqNb: {
      std::string z = fresh_name("z", {n.v1, n.v2});
      return all1(z, land(iff(edge_any(n.labels, z, n.v1), edge_any(n.labels, z, n.v2)),
                          iff(edge_any(n.labels, n.v1, z), edge_any(n.labels, n.v2, z))));
    }
  }
  return tt();
}

// Renames bound variables so none collides with a name in `avoid`.
Formula avoid_names(const Formula& a, const std::set<std::string>& avoid);

}  // namespace

Formula build_macro(const std::string& name, const std::vector<LabelSet>& labels,
                    const std::vector<std::string>& vars) {
  auto need = [&](std::size_t nl, std::size_t nv) {
    if (labels.size() != nl || vars.size() != nv)
      throw Error(ErrorKind::UnknownMacro, "macro '" + name + "' expects " + std::to_string(nl) + " label sets and " +
                                               std::to_string(nv) + " variables");
  };
  if (name == "edge") { need(1, 2); return f::edge_any(labels[0], vars[0], vars[1]); }
  if (name == "closed") { need(1, 1); return closed(labels[0], vars[0]); }
  if (name == "path") { need(1, 2); return f::path(labels[0], vars[0], vars[1]); }
  if (name == "string") { need(1, 0); return f::string(labels[0]); }
  if (name == "string-eq") { need(1, 0); return f::string_eq(labels[0]); }
  if (name == "eq") { need(1, 2); return f::eqnb(labels[0], vars[0], vars[1]); }
  if (name == "ec") { need(1, 2); return ec(labels[0], vars[0], vars[1]); }
  if (name == "first") { need(1, 1); return first_node(labels[0], vars[0]); }
  if (name == "last") { need(1, 1); return last_node(labels[0], vars[0]); }
  if (name == "first-set") { need(1, 1); return first_set(labels[0], vars[0]); }
  if (name == "union") { need(0, 3); return union_of(vars[0], vars[1], vars[2]); }
  if (name == "exclusive") { need(1, 2); return exclusive(labels[0], vars[0], vars[1]); }
  throw Error(ErrorKind::UnknownMacro, "unknown macro '" + name + "'");
}

static void collect_free(const Formula& a, std::set<Var>& out, std::set<std::string>& bound_names) {
  auto add = [&](const std::string& v, VarKind k) {
    if (!v.empty() && !bound_names.count(v)) out.insert({v, k});
  };
  switch (a->op) {
    case Op::True: case Op::False: return;
    case Op::Lab: add(a->v1, VarKind::First); return;
    case Op::Edge: case Op::Eq: case Op::Next:
      add(a->v1, VarKind::First);
      add(a->v2, VarKind::First);
      return;
    case Op::In: case Op::MemberEq:
      add(a->v1, VarKind::First);
      add(a->v2, VarKind::Second);
      return;
    case Op::Macro:
      add(a->v1, VarKind::First);
      add(a->v2, VarKind::First);
      for (const auto& d : a->domains) add(d, VarKind::Second);
      return;
    case Op::Ex1: case Op::Ex2: case Op::All1: case Op::All2: {
      bool fresh = bound_names.insert(a->v1).second;
      collect_free(a->kids[0], out, bound_names);
      if (fresh) bound_names.erase(a->v1);
      return;
    }
    default:
      for (const auto& k : a->kids) collect_free(k, out, bound_names);
  }
}

std::set<Var> free_vars(const Formula& a) {
  std::set<Var> out;
  std::set<std::string> b;
  collect_free(a, out, b);
  return out;
}

bool is_closed(const Formula& a) { return free_vars(a).empty(); }

static void walk(const Formula& a, const std::function<void(const Node&)>& fn) {
  fn(*a);
  for (const auto& k : a->kids) walk(k, fn);
}

std::set<std::string> all_var_names(const Formula& a) {
  std::set<std::string> s;
  walk(a, [&](const Node& n) {
    if (!n.v1.empty()) s.insert(n.v1);
    if (!n.v2.empty()) s.insert(n.v2);
    for (const auto& d : n.domains) s.insert(d);
  });
  return s;
}

std::set<std::string> edge_symbols(const Formula& a) {
  std::set<std::string> s;
  walk(a, [&](const Node& n) {
    if (n.op == Op::Edge) s.insert(n.sym);
    if (n.op == Op::Macro) s.insert(n.labels.begin(), n.labels.end());
  });
  return s;
}

std::set<std::string> lab_symbols(const Formula& a) {
  std::set<std::string> s;
  walk(a, [&](const Node& n) {
    if (n.op == Op::Lab) s.insert(n.sym);
  });
  return s;
}

void check_kinds(const Formula& a) {
  std::map<std::string, VarKind> free_kind;
  std::vector<std::pair<std::string, VarKind>> scope;
  std::function<void(const Formula&)> go = [&](const Formula& n) {
    auto use = [&](const std::string& v, VarKind k) {
      if (v.empty()) return;
      for (auto it = scope.rbegin(); it != scope.rend(); ++it)
        if (it->first == v) {
          if (it->second != k) throw Error(ErrorKind::IllKinded, "variable '" + v + "' used with the wrong order");
          return;
        }
      auto [it, ins] = free_kind.emplace(v, k);
      if (!ins && it->second != k) throw Error(ErrorKind::IllKinded, "variable '" + v + "' used with both orders");
    };
    switch (n->op) {
      case Op::Lab: use(n->v1, VarKind::First); break;
      case Op::Edge: case Op::Eq: case Op::Next:
        use(n->v1, VarKind::First);
        use(n->v2, VarKind::First);
        break;
      case Op::In: case Op::MemberEq:
        use(n->v1, VarKind::First);
        use(n->v2, VarKind::Second);
        break;
      case Op::Macro:
        use(n->v1, VarKind::First);
        use(n->v2, VarKind::First);
        for (const auto& d : n->domains) use(d, VarKind::Second);
        break;
      case Op::Ex1: case Op::All1: case Op::Ex2: case Op::All2:
        scope.emplace_back(n->v1, (n->op == Op::Ex1 || n->op == Op::All1) ? VarKind::First : VarKind::Second);
        go(n->kids[0]);
        scope.pop_back();
        return;
      default:
        break;
    }
    for (const auto& k : n->kids) go(k);
  };
  go(a);
}

static Formula with_kids(const Formula& a, std::vector<Formula> kids) {
  Node n = *a;
  n.kids = std::move(kids);
  return mk(std::move(n));
}

Formula map_atoms(const Formula& a, const std::function<Formula(const Formula&)>& fn) {
  if (a->kids.empty()) {
    Formula r = fn(a);
    return r ? r : a;
  }
  std::vector<Formula> ks;
  for (const auto& k : a->kids) ks.push_back(map_atoms(k, fn));
  return with_kids(a, std::move(ks));
}

Formula reverse_edges(const Formula& a, const LabelSet& l) {
  return map_atoms(a, [&](const Formula& x) -> Formula {
    if (x->op == Op::Edge && l.count(x->sym)) return f::edge(x->sym, x->v2, x->v1);
    if (x->op == Op::Macro)
      for (const auto& s : x->labels)
        if (l.count(s)) return reverse_edges(desugar(x), l);
    return nullptr;
  });
}

Formula rename_free(const Formula& a, const std::string& from, const std::string& to) {
  switch (a->op) {
    case Op::Ex1: case Op::Ex2: case Op::All1: case Op::All2:
      if (a->v1 == from) return a;
      return with_kids(a, {rename_free(a->kids[0], from, to)});
    default:
      break;
  }
  if (a->kids.empty()) {
    Node n = *a;
    if (n.v1 == from) n.v1 = to;
    if (n.v2 == from) n.v2 = to;
    for (auto& d : n.domains)
      if (d == from) d = to;
    return mk(std::move(n));
  }
  std::vector<Formula> ks;
  for (const auto& k : a->kids) ks.push_back(rename_free(k, from, to));
  return with_kids(a, std::move(ks));
}

namespace {

Formula avoid_names(const Formula& a, const std::set<std::string>& avoid) {
  switch (a->op) {
    case Op::Ex1: case Op::Ex2: case Op::All1: case Op::All2: {
      Formula body = avoid_names(a->kids[0], avoid);
      if (!avoid.count(a->v1)) return with_kids(a, {body});
      auto used = all_var_names(body);
      used.insert(avoid.begin(), avoid.end());
      std::string nv = fresh_name(a->v1, used);
      Node n = *a;
      n.v1 = nv;
      n.kids = {rename_free(body, a->v1, nv)};
      return mk(std::move(n));
    }
    default:
      break;
  }
  if (a->kids.empty()) return a;
  std::vector<Formula> ks;
  for (const auto& k : a->kids) ks.push_back(avoid_names(k, avoid));
  return with_kids(a, std::move(ks));
}

Formula rel(const Formula& a, const std::string& Y) {
  using namespace f;
  switch (a->op) {
    case Op::Ex1:
      return ex1(a->v1, land(in(a->v1, Y), rel(a->kids[0], Y)));
    case Op::All1:
      return all1(a->v1, implies(in(a->v1, Y), rel(a->kids[0], Y)));
    case Op::Ex2:
      return ex2(a->v1, land(subset(a->v1, Y), rel(a->kids[0], Y)));
    case Op::All2:
      return all2(a->v1, implies(subset(a->v1, Y), rel(a->kids[0], Y)));
    case Op::Macro: {
      Node n = *a;
      n.domains.push_back(Y);
      return mk(std::move(n));
    }
    default:
      break;
  }
  if (a->kids.empty()) return a;
  std::vector<Formula> ks;
  for (const auto& k : a->kids) ks.push_back(rel(k, Y));
  return with_kids(a, std::move(ks));
}

}  // namespace

Formula relativize(const Formula& a, const std::string& Y) {
  if (all_var_names(a).count(Y)) throw Error(ErrorKind::VariableClash, "'" + Y + "' already occurs in the formula");
  return rel(a, Y);
}

Formula desugar(const Formula& a) {
  using namespace f;
  switch (a->op) {
    case Op::True: case Op::False: case Op::Lab: case Op::Edge: case Op::In: case Op::Next: case Op::MemberEq:
      return a;
    case Op::Eq: {
      std::string X = fresh_name("X", {a->v1, a->v2});
      return desugar(all2(X, implies(in(a->v1, X), in(a->v2, X))));
    }
    case Op::Not: return neg(desugar(a->kids[0]));
    case Op::Or: return lor(desugar(a->kids[0]), desugar(a->kids[1]));
    case Op::And: return neg(lor(neg(desugar(a->kids[0])), neg(desugar(a->kids[1]))));
    case Op::Implies: return lor(neg(desugar(a->kids[0])), desugar(a->kids[1]));
    case Op::Iff: {
      Formula p = desugar(a->kids[0]), q = desugar(a->kids[1]);
      Formula l = lor(neg(p), q), r = lor(neg(q), p);
      return neg(lor(neg(l), neg(r)));
    }
    case Op::Ex1: return ex1(a->v1, desugar(a->kids[0]));
    case Op::Ex2: return ex2(a->v1, desugar(a->kids[0]));
    case Op::All1: return neg(ex1(a->v1, neg(desugar(a->kids[0]))));
    case Op::All2: return neg(ex2(a->v1, neg(desugar(a->kids[0]))));
    case Op::Macro: {
      std::set<std::string> avoid(a->domains.begin(), a->domains.end());
      if (!a->v1.empty()) avoid.insert(a->v1);
      if (!a->v2.empty()) avoid.insert(a->v2);
      Formula e = avoid_names(expand_macro(*a), avoid);
      for (const auto& d : a->domains) e = rel(e, d);
      return desugar(e);
    }
  }
  return a;
}

static bool aeq(const Formula& a, const Formula& b, std::map<std::string, std::string>& ab,
                std::map<std::string, std::string>& ba) {
  if (a->op != b->op || a->sym != b->sym || a->kids.size() != b->kids.size()) return false;
  auto var_eq = [&](const std::string& x, const std::string& y) {
    auto i = ab.find(x);
    auto j = ba.find(y);
    if (i == ab.end() && j == ba.end()) return x == y;
    return i != ab.end() && j != ba.end() && i->second == y && j->second == x;
  };
  switch (a->op) {
    case Op::Ex1: case Op::Ex2: case Op::All1: case Op::All2: {
      auto sa = ab.find(a->v1) != ab.end() ? std::optional<std::string>(ab[a->v1]) : std::nullopt;
      auto sb = ba.find(b->v1) != ba.end() ? std::optional<std::string>(ba[b->v1]) : std::nullopt;
      ab[a->v1] = b->v1;
      ba[b->v1] = a->v1;
      bool r = aeq(a->kids[0], b->kids[0], ab, ba);
      if (sa) ab[a->v1] = *sa; else ab.erase(a->v1);
      if (sb) ba[b->v1] = *sb; else ba.erase(b->v1);
      return r;
    }
    default:
      break;
  }
  if (!var_eq(a->v1, b->v1) || !var_eq(a->v2, b->v2)) return false;
  if (a->op == Op::Macro) {
    if (a->macro != b->macro || a->labels != b->labels || a->eq_mode != b->eq_mode ||
        a->domains.size() != b->domains.size())
      return false;
    for (std::size_t i = 0; i < a->domains.size(); ++i)
      if (!var_eq(a->domains[i], b->domains[i])) return false;
  }
  for (std::size_t i = 0; i < a->kids.size(); ++i)
    if (!aeq(a->kids[i], b->kids[i], ab, ba)) return false;
  return true;
}

bool alpha_equal(const Formula& a, const Formula& b) {
  std::map<std::string, std::string> ab, ba;
  return aeq(a, b, ab, ba);
}

int depth(const Formula& a) {
  int d = 0;
  for (const auto& k : a->kids) d = std::max(d, depth(k));
  return a->kids.empty() ? 0 : d + 1;
}

std::size_t formula_size(const Formula& a) {
  std::size_t s = 1;
  for (const auto& k : a->kids) s += formula_size(k);
  return s;
}

}  // namespace msoga
