#include "msoga/eval.hpp"

#include <bit>
#include <tuple>
#include <unordered_map>

namespace msoga {

namespace {

using u64 = std::uint64_t;

inline K3 knot(K3 a) { return K3(2 - int(a)); }
inline bool bit(u64 m, int i) { return (m >> i) & 1; }
inline int lowest(u64 m) { return std::countr_zero(m); }

}  // namespace

Model::Model(const Graph& g, const std::vector<Edge>& unknown) : base_(g) {
  if (g.size() > 64) throw Error(ErrorKind::SizeLimit, "model checking supports at most 64 nodes");
  for (int v : g.nodes()) {
    index_[v] = int(ids_.size());
    ids_.push_back(v);
  }
  std::size_t n = ids_.size();
  all_ = n == 64 ? ~u64(0) : ((u64(1) << n) - 1);
  auto elab = [&](const Label& l) {
    auto it = edge_lab_.find(l);
    if (it != edge_lab_.end()) return it->second;
    int k = int(edge_lab_names_.size());
    edge_lab_[l] = k;
    edge_lab_names_.push_back(l);
    for (auto* v : {&out_, &in_, &uout_, &uin_}) v->emplace_back(n, 0);
    return k;
  };
  for (int v : g.nodes()) {
    const Label& l = g.label(v);
    auto it = node_lab_.find(l);
    if (it == node_lab_.end()) {
      it = node_lab_.emplace(l, int(node_lab_names_.size())).first;
      node_lab_names_.push_back(l);
    }
    node_lab_of_.push_back(it->second);
  }
  for (const auto& e : g.edges()) {
    int l = elab(e.label), i = index_[e.src], j = index_[e.dst];
    out_[l][i] |= u64(1) << j;
    in_[l][j] |= u64(1) << i;
  }
  for (const auto& e : unknown) {
    if (!index_.count(e.src) || !index_.count(e.dst))
      throw Error(ErrorKind::DanglingEdge, "undetermined edge with unknown endpoint");
    if (e.src == e.dst) throw Error(ErrorKind::LoopEdge, "undetermined loop");
    int l = elab(e.label), i = index_[e.src], j = index_[e.dst];
    if (bit(out_[l][i], j) || var_of_.count({l, i, j})) continue;
    var_of_[{l, i, j}] = int(unk_.size());
    unk_.push_back({l, i, j, K3::U});
    unk_edges_.push_back(e);
    uout_[l][i] |= u64(1) << j;
    uin_[l][j] |= u64(1) << i;
  }
}

void Model::assign(std::size_t var, K3 v) {
  auto& u = unk_[var];
  u64 bj = u64(1) << u.j, bi = u64(1) << u.i;
  out_[u.l][u.i] &= ~bj;
  in_[u.l][u.j] &= ~bi;
  uout_[u.l][u.i] &= ~bj;
  uin_[u.l][u.j] &= ~bi;
  if (v == K3::T) {
    out_[u.l][u.i] |= bj;
    in_[u.l][u.j] |= bi;
  } else if (v == K3::U) {
    uout_[u.l][u.i] |= bj;
    uin_[u.l][u.j] |= bi;
  }
  u.val = v;
}

Graph Model::materialize() const {
  std::vector<Edge> extra;
  for (std::size_t k = 0; k < unk_.size(); ++k)
    if (unk_[k].val == K3::T) extra.push_back(unk_edges_[k]);
  return add_edges(base_, extra);
}

struct Checker::Impl {
  struct CN {
    Op op;
    int lab = -1;
    int a = -1, b = -1;
    std::vector<int> kids;
    MacroKind mk{};
    bool eqm = false;
    std::vector<int> labs, doms;
    // second-order quantifiers: existential core over conj, negated for All2
    std::vector<int> conj, pw;
    // the set is only read through member-eq, so one node per class suffices
    bool by_class = false;
    std::string sym;
  };

  const Model& m;
  EvalOptions opt;
  const SaHooks* sa;
  std::vector<CN> nodes;
  std::vector<int> fo;
  std::vector<u64> so;
  // decided members of each set; a set under search is partially known
  std::vector<u64> sok;
  int root = -1;
  std::vector<int> ae_labs;
  // definite values of quantifier nodes, keyed by their free slots; only
  // valid while the undetermined edges are refined, so searches roll back
  bool memo = false;
  std::vector<std::vector<int>> free_fo, free_so;
  std::unordered_map<std::string, K3> cache;
  std::vector<std::string> cache_log;
  u64 reps = 0;  // lowest node of each Ae-class, when the Ae-edges are all known

  Impl(const Model& model, const EvalOptions& o, const SaHooks* s) : m(model), opt(o), sa(s) {
    if (!sa) return;
    for (const auto& l : sa->ae)
      if (auto it = m.edge_lab_.find(l); it != m.edge_lab_.end()) ae_labs.push_back(it->second);
    if (unknown_between(ae_labs, m.all_, m.all_) >= 0) return;
    for (u64 s = m.all_; s; s &= s - 1) {
      int i = lowest(s);
      bool first = true;
      for (u64 t = reps; t && first; t &= t - 1)
        first = !(inL(ae_labs, i) == inL(ae_labs, lowest(t)) && outL(ae_labs, i) == outL(ae_labs, lowest(t)));
      if (first) reps |= u64(1) << i;
    }
  }

  using Scope = std::vector<std::pair<std::string, int>>;
  Scope fo_scope, so_scope;

  static int find(const Scope& s, const std::string& v) {
    for (auto it = s.rbegin(); it != s.rend(); ++it)
      if (it->first == v) return it->second;
    return -1;
  }

  int fo_slot(const std::string& v) {
    int s = find(fo_scope, v);
    if (s < 0) throw Error(ErrorKind::UnboundVariable, "first-order variable '" + v + "' has no value");
    return s;
  }
  int so_slot(const std::string& v) {
    int s = find(so_scope, v);
    if (s < 0) throw Error(ErrorKind::UnboundVariable, "second-order variable '" + v + "' has no value");
    return s;
  }

  int add(CN c) {
    nodes.push_back(std::move(c));
    return int(nodes.size()) - 1;
  }

  std::vector<int> labs_of(const LabelSet& ls) {
    std::vector<int> r;
    for (const auto& l : ls)
      if (auto it = m.edge_lab_.find(l); it != m.edge_lab_.end()) r.push_back(it->second);
    return r;
  }

  void flatten_and(const Formula& a, std::vector<Formula>& out) {
    if (a->op == Op::And) {
      flatten_and(a->kids[0], out);
      flatten_and(a->kids[1], out);
    } else {
      out.push_back(a);
    }
  }

  // true when second-order slot X occurs in node k only as In(z, X)
  bool pointwise(int k, int X, int z) const {
    const CN& c = nodes[k];
    switch (c.op) {
      case Op::In: return c.b != X || c.a == z;
      case Op::MemberEq: return c.b != X;
      case Op::Macro:
        for (int d : c.doms)
          if (d == X) return false;
        return true;
      default:
        break;
    }
    for (int q : c.kids)
      if (!pointwise(q, X, z)) return false;
    for (int q : c.conj)
      if (!pointwise(q, X, z)) return false;
    return true;
  }

  bool read_plainly(int k, int X) const {
    const CN& c = nodes[k];
    if (c.op == Op::In && c.b == X) return true;
    if (c.op == Op::Macro)
      for (int d : c.doms)
        if (d == X) return true;
    for (int q : c.kids)
      if (read_plainly(q, X)) return true;
    for (int q : c.conj)
      if (read_plainly(q, X)) return true;
    return false;
  }

  int compile(const Formula& a) {
    CN c;
    c.op = a->op;
    switch (a->op) {
      case Op::True: case Op::False:
        break;
      case Op::Lab:
        if (auto it = m.node_lab_.find(a->sym); it != m.node_lab_.end()) c.lab = it->second;
        c.a = fo_slot(a->v1);
        break;
      case Op::Edge:
        if (auto it = m.edge_lab_.find(a->sym); it != m.edge_lab_.end()) c.lab = it->second;
        c.a = fo_slot(a->v1);
        c.b = fo_slot(a->v2);
        break;
      case Op::In: case Op::MemberEq:
        if (a->op == Op::MemberEq && !sa) throw Error(ErrorKind::UnknownSymbol, "member-eq outside the two-level logic");
        c.a = fo_slot(a->v1);
        c.b = so_slot(a->v2);
        break;
      case Op::Eq:
        c.a = fo_slot(a->v1);
        c.b = fo_slot(a->v2);
        break;
      case Op::Next:
        if (!sa) throw Error(ErrorKind::UnknownSymbol, "next outside the two-level logic");
        c.sym = a->sym;
        c.a = fo_slot(a->v1);
        c.b = fo_slot(a->v2);
        break;
      case Op::Not: case Op::Or: case Op::And: case Op::Implies: case Op::Iff:
        for (const auto& k : a->kids) c.kids.push_back(compile(k));
        break;
      case Op::Ex1: case Op::All1: {
        int slot = int(fo.size());
        fo.push_back(-1);
        c.a = slot;
        fo_scope.emplace_back(a->v1, slot);
        c.kids.push_back(compile(a->kids[0]));
        fo_scope.pop_back();
        break;
      }
      case Op::Ex2: case Op::All2: {
        int slot = int(so.size());
        so.push_back(0);
        sok.push_back(m.all_);
        c.a = slot;
        so_scope.emplace_back(a->v1, slot);
        std::vector<Formula> parts;
        Formula body = a->kids[0];
        if (a->op == Op::Ex2) {
          flatten_and(body, parts);
          for (const auto& p : parts) c.conj.push_back(compile(p));
        } else {
          while (body->op == Op::Implies) {
            flatten_and(body->kids[0], parts);
            body = body->kids[1];
          }
          for (const auto& p : parts) c.conj.push_back(compile(p));
          CN n;
          n.op = Op::Not;
          n.kids.push_back(compile(body));
          c.conj.push_back(add(std::move(n)));
        }
        so_scope.pop_back();
        for (int k : c.conj) {
          const CN& q = nodes[k];
          if (q.op == Op::All1 && pointwise(q.kids[0], slot, q.a)) c.pw.push_back(k);
        }
        if (reps) {
          c.by_class = true;
          for (int k : c.conj) c.by_class = c.by_class && !read_plainly(k, slot);
        }
        break;
      }
      case Op::Macro:
        c.mk = a->macro;
        c.eqm = a->eq_mode;
        c.labs = labs_of(a->labels);
        for (const auto& d : a->domains) c.doms.push_back(so_slot(d));
        if (a->macro != MacroKind::String) {
          c.a = fo_slot(a->v1);
          c.b = fo_slot(a->v2);
        }
        break;
    }
    return add(std::move(c));
  }

  using R = Result;

  u64 outL(const std::vector<int>& labs, int i) const {
    u64 r = 0;
    for (int l : labs) r |= m.out_[l][i];
    return r;
  }
  u64 inL(const std::vector<int>& labs, int i) const {
    u64 r = 0;
    for (int l : labs) r |= m.in_[l][i];
    return r;
  }

  // An undetermined edge labelled in `labs` from `src` to `dst`, or -1.
  int unknown_between(const std::vector<int>& labs, u64 src, u64 dst) const {
    if (m.unk_.empty()) return -1;
    for (int l : labs)
      for (u64 s = src; s; s &= s - 1) {
        int i = lowest(s);
        u64 t = m.uout_[l][i] & dst;
        if (t) return m.var_of_.at({l, i, lowest(t)});
      }
    return -1;
  }

  u64 domain(const CN& c) const {
    u64 d = m.all_;
    for (int s : c.doms) d &= so[s];
    return d;
  }

  u64 reach(const std::vector<int>& labs, int x, u64 d) const {
    u64 seen = u64(1) << x, frontier = seen;
    while (frontier) {
      u64 nx = 0;
      for (u64 f = frontier; f; f &= f - 1) nx |= outL(labs, lowest(f)) & d;
      frontier = nx & ~seen;
      seen |= nx;
    }
    return seen;
  }

  // witness for an undecided membership of node v in set slot X
  static int set_witness(int X, int v) { return -2 - (X * 64 + v); }
  static bool is_set_witness(int w) { return w <= -2; }
  static int witness_slot(int w) { return (-2 - w) / 64; }
  static int witness_node(int w) { return (-2 - w) % 64; }

  R macro(const CN& c) {
    for (int s : c.doms)
      if (u64 open = m.all_ & ~sok[s]) return {K3::U, set_witness(s, lowest(open))};
    u64 d = domain(c);
    switch (c.mk) {
      case MacroKind::Path: {
        int x = fo[c.a], y = fo[c.b];
        if (!bit(d, x)) return {K3::T, -1};
        if (int w = unknown_between(c.labs, d, d); w >= 0) return {K3::U, w};
        return {bit(reach(c.labs, x, d), y) ? K3::T : K3::F, -1};
      }
      case MacroKind::EqNb: {
        int x = fo[c.a], y = fo[c.b];
        u64 xy = (u64(1) << x) | (u64(1) << y);
        int w = unknown_between(c.labs, d, xy);
        if (w < 0) w = unknown_between(c.labs, xy, d);
        if (w >= 0) return {K3::U, w};
        bool same = (inL(c.labs, x) & d) == (inL(c.labs, y) & d) && (outL(c.labs, x) & d) == (outL(c.labs, y) & d);
        return {same ? K3::T : K3::F, -1};
      }
      case MacroKind::String: {
        if (int w = unknown_between(c.labs, d, d); w >= 0) return {K3::U, w};
        return {string_holds(c, d) ? K3::T : K3::F, -1};
      }
    }
    return {K3::F, -1};
  }

  bool string_holds(const CN& c, u64 d) const {
    if (!d) return false;
    std::size_t n = m.ids_.size();
    std::vector<u64> in(n), out(n);
    for (u64 s = d; s; s &= s - 1) {
      int i = lowest(s);
      in[i] = inL(c.labs, i) & d;
      out[i] = outL(c.labs, i) & d;
    }
    auto same = [&](int a, int b) { return c.eqm ? (in[a] == in[b] && out[a] == out[b]) : a == b; };
    u64 src = 0, snk = 0;
    for (u64 s = d; s; s &= s - 1) {
      int i = lowest(s);
      if (!in[i]) src |= u64(1) << i;
      if (!out[i]) snk |= u64(1) << i;
    }
    auto all_same = [&](u64 set, int x) {
      for (u64 s = set; s; s &= s - 1)
        if (!same(lowest(s), x)) return false;
      return true;
    };
    u64 firsts = 0, lasts = 0;
    for (u64 s = src; s; s &= s - 1)
      if (all_same(src, lowest(s))) firsts |= u64(1) << lowest(s);
    for (u64 s = snk; s; s &= s - 1)
      if (all_same(snk, lowest(s))) lasts |= u64(1) << lowest(s);
    if (!firsts || !lasts) return false;
    for (u64 s = d; s; s &= s - 1) {
      int x = lowest(s);
      for (u64 t = out[x]; t; t &= t - 1)
        if (!all_same(out[x], lowest(t))) return false;
      for (u64 t = in[x]; t; t &= t - 1)
        if (!all_same(in[x], lowest(t))) return false;
      for (u64 t = out[x]; t; t &= t - 1) {
        int y = lowest(t), cnt = 0;
        for (int l : c.labs) cnt += bit(m.out_[l][x], y);
        if (cnt > 1) return false;
      }
    }
    std::vector<u64> rc(n);
    for (u64 s = d; s; s &= s - 1) rc[lowest(s)] = reach(c.labs, lowest(s), d);
    for (u64 s = firsts; s; s &= s - 1)
      for (u64 t = d; t; t &= t - 1)
        if (!bit(rc[lowest(s)], lowest(t)) && !(c.eqm && same(lowest(s), lowest(t)))) return false;
    for (u64 s = lasts; s; s &= s - 1) {
      int z = lowest(s);
      for (u64 t = d; t; t &= t - 1)
        if (!bit(rc[lowest(t)], z) && !(c.eqm && same(lowest(t), z))) return false;
    }
    return true;
  }

  R eq_ae(int x, int y) const {
    u64 xy = (u64(1) << x) | (u64(1) << y);
    int w = unknown_between(ae_labs, m.all_, xy);
    if (w < 0) w = unknown_between(ae_labs, xy, m.all_);
    if (w >= 0) return {K3::U, w};
    return {(inL(ae_labs, x) == inL(ae_labs, y) && outL(ae_labs, x) == outL(ae_labs, y)) ? K3::T : K3::F, -1};
  }

  R conj_all(const std::vector<int>& cs) {
    R acc{K3::T, -1};
    for (int k : cs) {
      R r = ev(k);
      if (r.v == K3::F) return r;
      if (r.v == K3::U && acc.v == K3::T) acc = r;
    }
    return acc;
  }

  R exists_set(const CN& c) {
    u64 forced = 0, free = 0;
    if (c.pw.empty()) {
      free = m.all_;
    } else {
      sok[c.a] = m.all_;
      for (u64 s = m.all_; s; s &= s - 1) {
        int v = lowest(s);
        bool can_in = true, can_out = true;
        for (int k : c.pw) {
          const CN& q = nodes[k];
          fo[q.a] = v;
          if (can_in) {
            so[c.a] = u64(1) << v;
            can_in = ev(q.kids[0]).v != K3::F;
          }
          if (can_out) {
            so[c.a] = 0;
            can_out = ev(q.kids[0]).v != K3::F;
          }
          if (!can_in && !can_out) return {K3::F, -1};
        }
        if (can_in && can_out) free |= u64(1) << v;
        else if (can_in) forced |= u64(1) << v;
      }
    }
    if (c.by_class) {
      free &= reps;
      forced &= reps;
    }
    // branch on the undecided members the body asks about
    so[c.a] = forced;
    sok[c.a] = m.all_ & ~free;
    std::uint64_t visited = 0;
    std::function<R()> go = [&]() -> R {
      if (++visited > opt.so_budget)
        throw Error(ErrorKind::SizeLimit, "second-order search over " + std::to_string(std::popcount(free)) +
                                              " undetermined nodes exceeded its budget");
      R r = conj_all(c.conj);
      if (r.v != K3::U || !is_set_witness(r.witness) || witness_slot(r.witness) != c.a) return r;
      u64 b = u64(1) << witness_node(r.witness);
      sok[c.a] |= b;
      R acc{K3::F, -1};
      for (bool in : {true, false}) {
        if (in) so[c.a] |= b;
        else so[c.a] &= ~b;
        R sub = go();
        if (sub.v == K3::T) {
          acc = sub;
          break;
        }
        if (sub.v == K3::U && acc.v == K3::F) acc = sub;
      }
      sok[c.a] &= ~b;
      so[c.a] &= ~b;
      return acc;
    };
    R r = go();
    sok[c.a] = m.all_;
    return r;
  }

  void compute_free() {
    free_fo.assign(nodes.size(), {});
    free_so.assign(nodes.size(), {});
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      const CN& c = nodes[k];
      std::set<int> f, s;
      auto take = [&](int q) {
        f.insert(free_fo[q].begin(), free_fo[q].end());
        s.insert(free_so[q].begin(), free_so[q].end());
      };
      for (int q : c.kids) take(q);
      for (int q : c.conj) take(q);
      switch (c.op) {
        case Op::Lab: f.insert(c.a); break;
        case Op::Edge: case Op::Eq: case Op::Next: f.insert({c.a, c.b}); break;
        case Op::In: case Op::MemberEq: f.insert(c.a); s.insert(c.b); break;
        case Op::Macro:
          s.insert(c.doms.begin(), c.doms.end());
          if (c.a >= 0) f.insert({c.a, c.b});
          break;
        case Op::Ex1: case Op::All1: f.erase(c.a); break;
        case Op::Ex2: case Op::All2: s.erase(c.a); break;
        default: break;
      }
      free_fo[k].assign(f.begin(), f.end());
      free_so[k].assign(s.begin(), s.end());
    }
  }

  R ev(int k) {
    Op op = nodes[k].op;
    if (!memo || (op != Op::Ex1 && op != Op::All1 && op != Op::Ex2 && op != Op::All2)) return ev_raw(k);
    std::string key(reinterpret_cast<const char*>(&k), sizeof k);
    for (int v : free_fo[k]) key.push_back(char(fo[v]));
    for (int v : free_so[k]) {
      key.append(reinterpret_cast<const char*>(&so[v]), sizeof(u64));
      key.append(reinterpret_cast<const char*>(&sok[v]), sizeof(u64));
    }
    if (auto it = cache.find(key); it != cache.end()) return {it->second, -1};
    R r = ev_raw(k);
    if (r.v != K3::U && cache.size() < (std::size_t(1) << 22)) {
      cache.emplace(key, r.v);
      cache_log.push_back(std::move(key));
    }
    return r;
  }

  void rollback(std::size_t mark) {
    while (cache_log.size() > mark) {
      cache.erase(cache_log.back());
      cache_log.pop_back();
    }
  }

  R ev_raw(int k) {
    const CN& c = nodes[k];
    switch (c.op) {
      case Op::True: return {K3::T, -1};
      case Op::False: return {K3::F, -1};
      case Op::Lab: return {(c.lab >= 0 && m.node_lab_of_[fo[c.a]] == c.lab) ? K3::T : K3::F, -1};
      case Op::Edge: {
        if (c.lab < 0) return {K3::F, -1};
        int i = fo[c.a], j = fo[c.b];
        if (bit(m.out_[c.lab][i], j)) return {K3::T, -1};
        if (bit(m.uout_[c.lab][i], j)) return {K3::U, m.var_of_.at({c.lab, i, j})};
        return {K3::F, -1};
      }
      case Op::In:
        if (!bit(sok[c.b], fo[c.a])) return {K3::U, set_witness(c.b, fo[c.a])};
        return {bit(so[c.b], fo[c.a]) ? K3::T : K3::F, -1};
      case Op::Eq: return {fo[c.a] == fo[c.b] ? K3::T : K3::F, -1};
      case Op::Not: {
        R r = ev(c.kids[0]);
        return {knot(r.v), r.witness};
      }
      case Op::Or: {
        R l = ev(c.kids[0]);
        if (l.v == K3::T) return l;
        R r = ev(c.kids[1]);
        if (r.v == K3::T) return r;
        return l.v == K3::U ? l : r;
      }
      case Op::And: {
        R l = ev(c.kids[0]);
        if (l.v == K3::F) return l;
        R r = ev(c.kids[1]);
        if (r.v == K3::F) return r;
        return l.v == K3::U ? l : r;
      }
      case Op::Implies: {
        R l = ev(c.kids[0]);
        if (l.v == K3::F) return {K3::T, -1};
        R r = ev(c.kids[1]);
        if (r.v == K3::T) return r;
        return l.v == K3::U ? l : r;
      }
      case Op::Iff: {
        R l = ev(c.kids[0]), r = ev(c.kids[1]);
        if (l.v == K3::U) return l;
        if (r.v == K3::U) return r;
        return {l.v == r.v ? K3::T : K3::F, -1};
      }
      case Op::Ex1: {
        R acc{K3::F, -1};
        for (u64 s = m.all_; s; s &= s - 1) {
          fo[c.a] = lowest(s);
          R r = ev(c.kids[0]);
          if (r.v == K3::T) return r;
          if (r.v == K3::U && acc.v == K3::F) acc = r;
        }
        return acc;
      }
      case Op::All1: {
        R acc{K3::T, -1};
        for (u64 s = m.all_; s; s &= s - 1) {
          fo[c.a] = lowest(s);
          R r = ev(c.kids[0]);
          if (r.v == K3::F) return r;
          if (r.v == K3::U && acc.v == K3::T) acc = r;
        }
        return acc;
      }
      case Op::Ex2: return exists_set(c);
      case Op::All2: {
        R r = exists_set(c);
        return {knot(r.v), r.witness};
      }
      case Op::Macro: return macro(c);
      case Op::Next:
        return {sa->next(c.sym, m.ids_[fo[c.a]], m.ids_[fo[c.b]]) ? K3::T : K3::F, -1};
      case Op::MemberEq: {
        R acc{K3::F, -1};
        for (u64 s = so[c.b] & sok[c.b]; s; s &= s - 1) {
          R r = eq_ae(fo[c.a], lowest(s));
          if (r.v == K3::T) return r;
          if (r.v == K3::U && acc.v == K3::F) acc = r;
        }
        if (acc.v == K3::U) return acc;
        for (u64 s = m.all_ & ~sok[c.b]; s; s &= s - 1) {
          R r = eq_ae(fo[c.a], lowest(s));
          if (r.v != K3::F) return {K3::U, set_witness(c.b, lowest(s))};
        }
        return acc;
      }
    }
    return {K3::F, -1};
  }
};

Checker::Checker(const Model& m, const Formula& phi, const Valuation& rho, const EvalOptions& opt, const SaHooks* sa)
    : p_(std::make_unique<Impl>(m, opt, sa)) {
  for (const auto& [name, v] : rho.fo) {
    auto it = m.index_.find(v);
    if (it == m.index_.end()) throw Error(ErrorKind::UnknownNode, "valuation of '" + name + "' is not a node");
    p_->fo_scope.emplace_back(name, int(p_->fo.size()));
    p_->fo.push_back(it->second);
  }
  for (const auto& [name, set] : rho.so) {
    std::uint64_t mask = 0;
    for (int v : set) {
      auto it = m.index_.find(v);
      if (it == m.index_.end()) throw Error(ErrorKind::UnknownNode, "valuation of '" + name + "' is not a node set");
      mask |= std::uint64_t(1) << it->second;
    }
    p_->so_scope.emplace_back(name, int(p_->so.size()));
    p_->so.push_back(mask);
    p_->sok.push_back(m.all_);
  }
  p_->root = p_->compile(phi);
}

Checker::~Checker() = default;

Checker::Result Checker::run() { return p_->ev(p_->root); }

void Checker::enable_memo() {
  if (p_->memo) return;
  p_->compute_free();
  p_->memo = true;
}
std::size_t Checker::memo_mark() const { return p_->cache_log.size(); }
void Checker::memo_rollback(std::size_t mark) { p_->rollback(mark); }

bool eval(const Graph& g, const Valuation& rho, const Formula& phi, const EvalOptions& opt) {
  Model m(g);
  Checker c(m, phi, rho, opt);
  return c.run().v == K3::T;
}

bool exists_completion(const Graph& g, const std::vector<Edge>& unknown, const Formula& phi, std::uint64_t budget,
                       Graph* witness, SearchStats* stats, const EvalOptions& opt) {
  Model m(g, unknown);
  Checker c(m, phi, {}, opt);
  c.enable_memo();
  std::uint64_t visited = 0;
  std::function<bool()> go = [&]() -> bool {
    if (++visited > budget)
      throw Error(ErrorKind::SizeLimit, "intermediate-edge search exceeded " + std::to_string(budget) + " steps");
    auto r = c.run();
    if (r.v == K3::T) return true;
    if (r.v == K3::F) return false;
    std::size_t mark = c.memo_mark();
    for (K3 val : {K3::T, K3::F}) {
      m.assign(r.witness, val);
      bool ok = go();
      c.memo_rollback(mark);
      if (ok) return true;
    }
    m.assign(r.witness, K3::U);
    return false;
  };
  bool ok = go();
  if (stats) stats->nodes = visited;
  if (ok) {
    // a Kleene-true partial assignment stays true under every completion
    for (std::size_t k = 0; k < m.num_unknown(); ++k)
      if (m.value(k) == K3::U) m.assign(k, K3::F);
    if (witness) *witness = m.materialize();
  }
  return ok;
}

void all_completions(const Graph& g, const std::vector<Edge>& unknown, const Formula& phi,
                     const std::function<void(const Graph&)>& out, std::uint64_t budget, const EvalOptions& opt) {
  Model m(g, unknown);
  Checker c(m, phi, {}, opt);
  c.enable_memo();
  std::uint64_t visited = 0;
  auto tick = [&] {
    if (++visited > budget)
      throw Error(ErrorKind::SizeLimit, "completion enumeration exceeded " + std::to_string(budget) + " steps");
  };
  std::function<void()> go = [&]() {
    tick();
    auto r = c.run();
    if (r.v == K3::F) return;
    if (r.v == K3::T) {
      std::vector<std::size_t> open;
      for (std::size_t k = 0; k < m.num_unknown(); ++k)
        if (m.value(k) == K3::U) open.push_back(k);
      if (open.size() >= 40) throw Error(ErrorKind::SizeLimit, "too many unconstrained edges");
      for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << open.size()); ++mask) {
        tick();
        for (std::size_t i = 0; i < open.size(); ++i) m.assign(open[i], (mask >> i & 1) ? K3::T : K3::F);
        out(m.materialize());
      }
      for (auto k : open) m.assign(k, K3::U);
      return;
    }
    std::size_t mark = c.memo_mark();
    for (K3 val : {K3::T, K3::F}) {
      m.assign(r.witness, val);
      go();
      c.memo_rollback(mark);
    }
    m.assign(r.witness, K3::U);
  };
  go();
}

}  // namespace msoga
