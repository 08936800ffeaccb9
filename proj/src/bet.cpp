#include "msoga/bet.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace msoga {

namespace {

// Complete DFA over the encoded alphabet: letter = base << k | bits, where
// base indexes A (base == |A| is the end marker) and bit i belongs to the
// i-th variable in scope.
struct Dfa {
  int k = 0;
  int S = 0;
  int start = 0;
  std::vector<char> fin;
  std::vector<int> d;

  int size() const { return int(fin.size()); }
  int add(bool f) {
    fin.push_back(f);
    d.resize(d.size() + std::size_t(S), -1);
    return size() - 1;
  }
  int& at(int q, int s) { return d[std::size_t(q) * std::size_t(S) + std::size_t(s)]; }
  int next(int q, int s) const { return d[std::size_t(q) * std::size_t(S) + std::size_t(s)]; }
};

struct Compiler {
  LabelSet A;
  std::vector<Label> letters;
  int B;
  std::uint64_t budget;
  std::vector<std::pair<std::string, VarKind>> scope;

  Compiler(const LabelSet& a, std::uint64_t b) : A(a), letters(a.begin(), a.end()), B(int(a.size()) + 1), budget(b) {}

  int end_marker() const { return B - 1; }
  int width(int k) const { return B << k; }

  void grow(const Dfa& a) const {
    if (std::uint64_t(a.size()) > budget)
      throw Error(ErrorKind::StateBlowup, "automaton exceeded " + std::to_string(budget) + " states");
  }

  Dfa blank(int k) const {
    Dfa a;
    a.k = k;
    a.S = width(k);
    return a;
  }

  // Letters satisfying `ok` everywhere.
  template <class F>
  Dfa letterwise(int k, F ok) const {
    Dfa a = blank(k);
    int good = a.add(true), dead = a.add(false);
    for (int s = 0; s < a.S; ++s) {
      a.at(good, s) = ok(s) ? good : dead;
      a.at(dead, s) = dead;
    }
    return a;
  }

  // Well-formed encodings: the end marker exactly at the last letter and
  // each first-order bit at exactly one letter.
  Dfa wf(int k) const {
    unsigned fo = 0;
    for (int i = 0; i < k; ++i)
      if (scope[std::size_t(i)].second == VarKind::First) fo |= 1u << i;
    Dfa a = blank(k);
    std::map<unsigned, int> id;  // seen bits << 1 | ended
    std::deque<unsigned> work;
    int dead = a.add(false);
    for (int s = 0; s < a.S; ++s) a.at(dead, s) = dead;
    auto get = [&](unsigned key) {
      auto [it, fresh] = id.try_emplace(key, a.size());
      if (fresh) {
        a.add((key & 1) && (key >> 1) == fo);
        work.push_back(key);
      }
      return it->second;
    };
    a.start = get(0);
    while (!work.empty()) {
      unsigned key = work.front();
      work.pop_front();
      int q = id.at(key);
      unsigned seen = key >> 1;
      bool ended = key & 1;
      for (int s = 0; s < a.S; ++s) {
        unsigned bits = unsigned(s) & fo & ((1u << k) - 1);
        int base = s >> k;
        int to = dead;
        if (!ended && !(bits & seen)) {
          unsigned now = seen | bits;
          if (base == end_marker()) {
            if (now == fo) to = get(now << 1 | 1);
          } else {
            to = get(now << 1);
          }
        }
        a.at(q, s) = to;
      }
    }
    return a;
  }

  template <class F>
  Dfa product(const Dfa& a, const Dfa& b, F keep) const {
    Dfa r = blank(a.k);
    std::map<std::pair<int, int>, int> id;
    std::deque<std::pair<int, int>> work;
    auto get = [&](int p, int q) {
      auto [it, fresh] = id.try_emplace({p, q}, r.size());
      if (fresh) {
        r.add(keep(bool(a.fin[std::size_t(p)]), bool(b.fin[std::size_t(q)])));
        grow(r);
        work.push_back({p, q});
      }
      return it->second;
    };
    r.start = get(a.start, b.start);
    while (!work.empty()) {
      auto [p, q] = work.front();
      work.pop_front();
      int from = id.at({p, q});
      for (int s = 0; s < r.S; ++s) {
        int to = get(a.next(p, s), b.next(q, s));
        r.at(from, s) = to;
      }
    }
    return minimize(r);
  }

  static Dfa minimize(const Dfa& a) {
    int n = a.size();
    std::vector<int> cls(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q) cls[std::size_t(q)] = a.fin[std::size_t(q)] ? 1 : 0;
    int count = 0;
    while (true) {
      std::map<std::vector<int>, int> sig;
      std::vector<int> nc(static_cast<std::size_t>(n));
      for (int q = 0; q < n; ++q) {
        std::vector<int> key{cls[std::size_t(q)]};
        for (int s = 0; s < a.S; ++s) key.push_back(cls[std::size_t(a.next(q, s))]);
        nc[std::size_t(q)] = sig.try_emplace(key, int(sig.size())).first->second;
      }
      int c = int(sig.size());
      cls.swap(nc);
      if (c == count) break;
      count = c;
    }
    Dfa r;
    r.k = a.k;
    r.S = a.S;
    r.fin.assign(std::size_t(count), 0);
    r.d.assign(std::size_t(count) * std::size_t(a.S), 0);
    for (int q = 0; q < n; ++q) {
      int c = cls[std::size_t(q)];
      r.fin[std::size_t(c)] = a.fin[std::size_t(q)];
      for (int s = 0; s < a.S; ++s) r.at(c, s) = cls[std::size_t(a.next(q, s))];
    }
    r.start = cls[std::size_t(a.start)];
    return r;
  }

  Dfa complement(const Dfa& a) const {
    Dfa c = a;
    for (auto& f : c.fin) f = !f;
    return product(c, wf(a.k), [](bool x, bool y) { return x && y; });
  }

  // Drops the last variable bit; subset construction on the result.
  Dfa project(const Dfa& a) const {
    Dfa r = blank(a.k - 1);
    int hi = 1 << (a.k - 1);
    std::map<std::vector<int>, int> id;
    std::deque<std::vector<int>> work;
    auto get = [&](std::vector<int> set) {
      auto [it, fresh] = id.try_emplace(set, r.size());
      if (fresh) {
        bool f = false;
        for (int q : set) f = f || a.fin[std::size_t(q)];
        r.add(f);
        grow(r);
        work.push_back(std::move(set));
      }
      return it->second;
    };
    r.start = get({a.start});
    while (!work.empty()) {
      auto set = work.front();
      work.pop_front();
      int from = id.at(set);
      for (int s = 0; s < r.S; ++s) {
        int base = s >> r.k, bits = s & (hi - 1);
        int s0 = (base << a.k) | bits, s1 = s0 | hi;
        std::vector<int> t;
        for (int q : set) {
          t.push_back(a.next(q, s0));
          t.push_back(a.next(q, s1));
        }
        std::sort(t.begin(), t.end());
        t.erase(std::unique(t.begin(), t.end()), t.end());
        int to = get(std::move(t));
        r.at(from, s) = to;
      }
    }
    return minimize(r);
  }

  int var(const std::string& v, VarKind kind) const {
    for (int i = int(scope.size()) - 1; i >= 0; --i)
      if (scope[std::size_t(i)].first == v) {
        if (scope[std::size_t(i)].second != kind) throw Error(ErrorKind::IllKinded, "variable '" + v + "' used at the wrong order");
        return i;
      }
    throw Error(ErrorKind::UnboundVariable, "variable '" + v + "' is free");
  }

  Dfa restrict_wf(const Dfa& a) const { return product(a, wf(a.k), [](bool x, bool y) { return x && y; }); }

  Dfa edge(const Label& l, int x, int y) const {
    int k = int(scope.size());
    auto it = std::find(letters.begin(), letters.end(), l);
    if (it == letters.end()) return letterwise(k, [](int) { return false; });
    int a = int(it - letters.begin());
    Dfa r = blank(k);
    int wait = r.add(false), expect = r.add(false), yes = r.add(true), dead = r.add(false);
    r.start = wait;
    for (int s = 0; s < r.S; ++s) {
      bool bx = (s >> x) & 1, by = (s >> y) & 1;
      r.at(wait, s) = !bx ? wait : ((s >> k) == a && !by ? expect : dead);
      r.at(expect, s) = by ? yes : dead;
      r.at(yes, s) = yes;
      r.at(dead, s) = dead;
    }
    return restrict_wf(r);
  }

  Dfa compile(const Formula& phi) {
    int k = int(scope.size());
    auto all = [](bool x, bool y) { return x && y; };
    switch (phi->op) {
      case Op::True: return wf(k);
      case Op::False: return letterwise(k, [](int) { return false; });
      case Op::Lab: {
        var(phi->v1, VarKind::First);
        if (phi->sym == kStar) return wf(k);
        return letterwise(k, [](int) { return false; });
      }
      case Op::Edge: return edge(phi->sym, var(phi->v1, VarKind::First), var(phi->v2, VarKind::First));
      case Op::Eq: {
        int x = var(phi->v1, VarKind::First), y = var(phi->v2, VarKind::First);
        return restrict_wf(letterwise(k, [&](int s) { return ((s >> x) & 1) == ((s >> y) & 1); }));
      }
      case Op::In: {
        int x = var(phi->v1, VarKind::First), X = var(phi->v2, VarKind::Second);
        return restrict_wf(letterwise(k, [&](int s) { return !((s >> x) & 1) || ((s >> X) & 1); }));
      }
      case Op::Not: return complement(compile(phi->kids[0]));
      case Op::And: return product(compile(phi->kids[0]), compile(phi->kids[1]), all);
      case Op::Or: return product(compile(phi->kids[0]), compile(phi->kids[1]), [](bool x, bool y) { return x || y; });
      case Op::Implies:
        return restrict_wf(
            product(compile(phi->kids[0]), compile(phi->kids[1]), [](bool x, bool y) { return !x || y; }));
      case Op::Iff:
        return restrict_wf(
            product(compile(phi->kids[0]), compile(phi->kids[1]), [](bool x, bool y) { return x == y; }));
      case Op::Ex1: case Op::Ex2: case Op::All1: case Op::All2: {
        bool first = phi->op == Op::Ex1 || phi->op == Op::All1;
        bool univ = phi->op == Op::All1 || phi->op == Op::All2;
        scope.emplace_back(phi->v1, first ? VarKind::First : VarKind::Second);
        Dfa body = compile(phi->kids[0]);
        if (univ) body = complement(body);
        scope.pop_back();
        Dfa r = project(body);
        return univ ? complement(r) : r;
      }
      case Op::Macro: return compile(desugar(phi));
      case Op::Next: case Op::MemberEq:
        throw Error(ErrorKind::UnknownSymbol, "next / member-eq atoms have no string automaton");
    }
    return letterwise(k, [](int) { return false; });
  }
};

}  // namespace

NFA mso_to_nfa(const Formula& phi, const LabelSet& A, std::uint64_t budget) {
  Compiler c(A, budget);
  Dfa d = c.compile(phi);
  NFA r;
  r.alphabet = A;
  int em = c.end_marker();
  for (int q = 0; q < d.size(); ++q)
    r.add_state("q" + std::to_string(q), q == d.start, d.fin[std::size_t(d.next(q, em))]);
  for (int q = 0; q < d.size(); ++q)
    for (int a = 0; a < em; ++a) r.trans.insert({q, c.letters[std::size_t(a)], d.next(q, a)});
  return trim(r);
}

Formula nfa_to_mso(const NFA& n) {
  using namespace f;
  std::set<std::string> used(n.alphabet.begin(), n.alphabet.end());
  auto fresh = [&](const std::string& base) {
    std::string v = base;
    for (int i = 1; used.count(v); ++i) v = base + std::to_string(i);
    used.insert(v);
    return v;
  };
  std::string x = fresh("x"), y = fresh("y");
  std::vector<std::string> X;
  for (std::size_t q = 0; q < n.size(); ++q) X.push_back(fresh("X" + std::to_string(q)));

  auto any = [](std::vector<Formula> ds) {
    Formula r = ff();
    for (auto it = ds.rbegin(); it != ds.rend(); ++it) r = r->op == Op::False ? *it : lor(*it, r);
    return r;
  };
  auto every = [](std::vector<Formula> cs) {
    Formula r = tt();
    for (auto it = cs.rbegin(); it != cs.rend(); ++it) r = r->op == Op::True ? *it : land(*it, r);
    return r;
  };
  auto in_states = [&](const std::set<int>& qs, const std::string& v) {
    std::vector<Formula> ds;
    for (int q : qs) ds.push_back(in(v, X[std::size_t(q)]));
    return any(ds);
  };

  std::vector<Formula> part;
  for (std::size_t q = 0; q < n.size(); ++q) {
    std::vector<Formula> cs{in(x, X[q])};
    for (std::size_t p = 0; p < n.size(); ++p)
      if (p != q) cs.push_back(neg(in(x, X[p])));
    part.push_back(every(cs));
  }
  std::vector<Formula> moves;
  for (const auto& a : n.alphabet) {
    std::vector<Formula> ds;
    for (const auto& [p, s, q] : n.trans)
      if (s == a) ds.push_back(land(in(x, X[std::size_t(p)]), in(y, X[std::size_t(q)])));
    moves.push_back(implies(edge(a, x, y), any(ds)));
  }
  Formula body = every({
      all1(x, any(part)),
      all1(x, implies(first_node(n.alphabet, x), in_states(n.initial, x))),
      all1(x, implies(last_node(n.alphabet, x), in_states(n.final, x))),
      all1(x, all1(y, every(moves))),
  });
  for (auto it = X.rbegin(); it != X.rend(); ++it) body = ex2(*it, body);
  return body;
}

}  // namespace msoga
