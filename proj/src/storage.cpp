#include "msoga/storage.hpp"

#include <algorithm>
#include <functional>

namespace msoga {

bool NativeStorage::has_instruction(const std::string& theta) const {
  auto is = instructions();
  return std::find(is.begin(), is.end(), theta) != is.end();
}

const Instruction& MsoStorage::instruction(const std::string& theta) const {
  for (const auto& i : instructions)
    if (i.name == theta) return i;
  throw Error(ErrorKind::UnknownInstruction, "no instruction '" + theta + "' in storage " + name);
}

std::vector<std::string> MsoStorage::instruction_names() const {
  std::vector<std::string> r;
  for (const auto& i : instructions) r.push_back(i.name);
  return r;
}

namespace pairf {

Formula frame(const std::string& X1, const std::string& X2, Formula body, bool inverted) {
  auto nu = [&](const char* x, const char* y) { return inverted ? f::edge(kNu, y, x) : f::edge(kNu, x, y); };
  auto def1 = f::all1("z", f::iff(f::in("z", X1), f::ex1("w", nu("z", "w"))));
  auto def2 = f::all1("z", f::iff(f::in("z", X2), f::ex1("w", nu("w", "z"))));
  auto cover = f::all1("z", f::lor(f::in("z", X1), f::in("z", X2)));
  auto biclique = f::all1({"x", "y"}, f::iff(nu("x", "y"), f::land(f::in("x", X1), f::in("y", X2))));
  return f::ex2(X1, f::land({def1, f::ex2(X2, f::land({def2, cover, biclique, body}))}));
}

Formula no_edges(const LabelSet& l, const std::string& X, const std::string& Y) {
  if (l.empty()) return f::tt();
  return f::all1({"x", "y"}, f::implies(f::land(f::in("x", X), f::in("y", Y)), f::neg(f::edge_any(l, "x", "y"))));
}

Formula same_label(const LabelSet& sigma, const std::string& x, const std::string& y) {
  std::vector<Formula> ds;
  for (const auto& s : sigma) ds.push_back(f::land(f::lab(s, x), f::lab(s, y)));
  return f::lor(ds);
}

Formula iso_edges(const Label& d, const LabelSet& gamma) {
  std::vector<Formula> keep;
  for (const auto& g : gamma) keep.push_back(f::iff(f::edge(g, "x", "y"), f::edge(g, "u", "v")));
  return f::all1({"x", "u"}, f::implies(f::edge(d, "x", "u"),
                                        f::all1({"y", "v"}, f::implies(f::edge(d, "y", "v"), f::land(keep)))));
}

Formula iso_via(const Label& d, const LabelSet& sigma, const LabelSet& gamma) {
  auto labels = f::all1({"x", "y"}, f::implies(f::edge(d, "x", "y"), same_label(sigma, "x", "y")));
  return f::land(labels, iso_edges(d, gamma));
}

Formula top(const LabelSet& l, const std::string& x, const std::string& X) {
  std::string y = x == "t" ? "t1" : "t";
  return f::land(f::in(x, X), f::neg(f::ex1(y, f::land(f::in(y, X), f::edge_any(l, x, y)))));
}

Formula bijection(const Label& d, const std::string& X, const std::string& Y) {
  auto inside = f::all1({"x", "y"}, f::implies(f::edge(d, "x", "y"), f::land(f::in("x", X), f::in("y", Y))));
  auto total = f::all1("x", f::implies(f::in("x", X), f::ex1("y", f::edge(d, "x", "y"))));
  auto onto = f::all1("y", f::implies(f::in("y", Y), f::ex1("x", f::edge(d, "x", "y"))));
  auto func = f::all1({"x", "y", "u"}, f::implies(f::land(f::edge(d, "x", "y"), f::edge(d, "x", "u")), f::eq("y", "u")));
  auto inj = f::all1({"x", "y", "u"}, f::implies(f::land(f::edge(d, "x", "u"), f::edge(d, "y", "u")), f::eq("x", "y")));
  return f::land({inside, total, onto, func, inj});
}

}  // namespace pairf

Formula describe_graph(const Graph& g, const LabelSet& gamma) {
  std::vector<std::string> xs;
  std::map<int, std::string> var;
  for (int v : g.nodes()) {
    xs.push_back("n" + std::to_string(xs.size() + 1));
    var[v] = xs.back();
  }
  LabelSet labels = gamma;
  for (const auto& e : g.edges()) labels.insert(e.label);
  std::vector<Formula> cs;
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i + 1; j < xs.size(); ++j) cs.push_back(f::neg(f::eq(xs[i], xs[j])));
  std::vector<Formula> any;
  for (const auto& x : xs) any.push_back(f::eq("z", x));
  cs.push_back(f::all1("z", f::lor(any)));
  for (int v : g.nodes()) cs.push_back(f::lab(g.label(v), var[v]));
  for (int u : g.nodes())
    for (int v : g.nodes())
      if (u != v)
        for (const auto& l : labels) {
          auto e = f::edge(l, var[u], var[v]);
          cs.push_back(g.has_edge(u, l, v) ? e : f::neg(e));
        }
  Formula body = f::land(cs);
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) body = f::ex1(*it, body);
  return body;
}

// ---- TRIV ----

namespace {

class Triv : public NativeStorage {
 public:
  std::string name() const override { return "TRIV"; }
  Config initial() const override { return "c"; }
  std::vector<std::string> instructions() const override { return {"theta"}; }
  std::vector<Config> step(const Config& c, const std::string& theta) const override {
    if (theta != "theta") throw Error(ErrorKind::UnknownInstruction, "TRIV has no instruction '" + theta + "'");
    return {c};
  }
  Graph render(const Config&) const override { return Graph({{1, kStar}}, {}); }
  Graph witness_pair(const Config& c, const std::string& theta, const Config& next) const override {
    if (step(c, theta) != std::vector<Config>{next}) throw Error(ErrorKind::NotASuccessor, "not a TRIV step");
    return Graph({{1, kStar}, {2, kStar}}, {{1, kNu, 2}});
  }
};

}  // namespace

NativePtr triv_native() { return std::make_shared<Triv>(); }

MsoStorage triv_mso() {
  MsoStorage s;
  s.name = "TRIV";
  s.sigma = {kStar};
  s.phi_c = f::all1({"x", "y"}, f::eq("x", "y"));
  s.g_in = Graph({{1, kStar}}, {});
  s.instructions.push_back(
      {"theta", pairf::frame("X1", "X2", f::land(relativize(s.phi_c, "X1"), relativize(s.phi_c, "X2")))});
  return s;
}

// ---- behaviours ----

std::set<std::vector<std::string>> behaviours(const NativeStorage& s, int n, const Budget& b) {
  std::set<std::vector<std::string>> out;
  std::map<std::vector<std::string>, std::set<Config>> level{{{}, {s.initial()}}};
  out.insert(std::vector<std::string>{});
  std::uint64_t kept = 1;
  for (int len = 1; len <= n; ++len) {
    std::map<std::vector<std::string>, std::set<Config>> next;
    for (const auto& [beh, cs] : level)
      for (const auto& theta : s.instructions()) {
        std::set<Config> succ;
        for (const auto& c : cs)
          for (auto& c2 : s.step(c, theta)) succ.insert(std::move(c2));
        if (succ.empty()) continue;
        kept += succ.size();
        if (kept > b.configs) throw Error(ErrorKind::SizeLimit, "behaviour search exceeded the configuration budget");
        auto nb = beh;
        nb.push_back(theta);
        out.insert(nb);
        next[nb] = std::move(succ);
      }
    level = std::move(next);
  }
  return out;
}

bool is_behaviour(const NativeStorage& s, const std::vector<std::string>& thetas, const Budget& b) {
  std::set<Config> cur{s.initial()};
  for (const auto& t : thetas) {
    std::set<Config> nx;
    for (const auto& c : cur)
      for (auto& c2 : s.step(c, t)) nx.insert(std::move(c2));
    if (nx.empty()) return false;
    if (nx.size() > b.configs) throw Error(ErrorKind::SizeLimit, "behaviour check exceeded the configuration budget");
    cur = std::move(nx);
  }
  return true;
}

// ---- pair relations ----

std::pair<Graph, int> assemble_pair(const Graph& g1, const Graph& g2) {
  auto [u, off] = disjoint_union(g1, g2);
  std::vector<Edge> nu;
  for (int x : g1.nodes())
    for (int y : g2.nodes()) nu.push_back({x, kNu, y + off});
  return {add_edges(u, nu), off};
}

std::vector<Edge> intermediate_slots(const Graph& h, int n1, const LabelSet& labels) {
  std::vector<Edge> r;
  const auto& ns = h.nodes();
  for (int i = 0; i < n1; ++i)
    for (std::size_t j = n1; j < ns.size(); ++j)
      for (const auto& l : labels) r.push_back({ns[i], l, ns[j]});
  return r;
}

namespace {

LabelSet inter_labels(const MsoStorage& s) {
  LabelSet l = s.gamma;
  l.insert(s.delta.begin(), s.delta.end());
  return l;
}

}  // namespace

bool mso_member(const MsoStorage& s, const std::string& theta, const Graph& g1, const Graph& g2, const Budget& b,
                Graph* witness) {
  const auto& ins = s.instruction(theta);
  auto [h, off] = assemble_pair(g1, g2);
  (void)off;
  auto slots = intermediate_slots(h, int(g1.size()), s.intermediate ? *s.intermediate : inter_labels(s));
  return exists_completion(h, slots, ins.phi, b.search, witness);
}

std::vector<std::string> mso_member_any(const MsoStorage& s, const Graph& g1, const Graph& g2, const Budget& b) {
  std::vector<std::string> r;
  for (const auto& i : s.instructions)
    if (mso_member(s, i.name, g1, g2, b)) r.push_back(i.name);
  return r;
}

namespace {

// Adds g to `out` unless an isomorphic graph is already there.
void add_up_to_iso(std::vector<Graph>& out, std::map<std::string, std::vector<std::size_t>>& index, const Graph& g) {
  auto fp = iso_fingerprint(g);
  auto& bucket = index[fp];
  for (auto k : bucket)
    if (iso_equal(out[k], g, 64)) return;
  bucket.push_back(out.size());
  out.push_back(g);
}

// Calls fn on every nondecreasing sequence of length n over `labels`.
void label_tuples(const std::vector<Label>& labels, int n, const std::function<void(const std::vector<Label>&)>& fn) {
  std::vector<Label> cur;
  std::function<void(std::size_t)> go = [&](std::size_t from) {
    if (int(cur.size()) == n) {
      fn(cur);
      return;
    }
    for (std::size_t i = from; i < labels.size(); ++i) {
      cur.push_back(labels[i]);
      go(i);
      cur.pop_back();
    }
  };
  go(0);
}

}  // namespace

std::vector<Graph> configurations(const MsoStorage& s, int k, const Budget& b) {
  std::vector<Graph> out;
  std::map<std::string, std::vector<std::size_t>> index;
  std::vector<Label> sigma(s.sigma.begin(), s.sigma.end());
  for (int n = 1; n <= k; ++n)
    label_tuples(sigma, n, [&](const std::vector<Label>& labs) {
      std::vector<std::pair<int, Label>> ns;
      for (int i = 0; i < n; ++i) ns.emplace_back(i + 1, labs[i]);
      std::vector<Edge> slots;
      for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
          if (i != j)
            for (const auto& l : s.gamma) slots.push_back({i, l, j});
      all_completions(Graph(ns, {}), slots, s.phi_c, [&](const Graph& g) { add_up_to_iso(out, index, g); },
                      b.search);
    });
  return out;
}

std::vector<Successor> mso_successors(const MsoStorage& s, const Graph& g1, int k, const Budget& b) {
  std::vector<Successor> out;
  if (k <= 0) return out;
  auto cands = configurations(s, k, b);
  for (const auto& ins : s.instructions)
    for (const auto& g2 : cands)
      if (mso_member(s, ins.name, g1, g2, b)) out.push_back({ins.name, g2});
  return out;
}

// ---- enrichment ----

MsoStorage enrich(const MsoStorage& s, Enrichment which) {
  MsoStorage r = s;
  const Label& fresh = which == Enrichment::Reset ? kResetLabel : kIdLabel;
  const std::string& name = which == Enrichment::Reset ? kResetName : kIdName;
  if (s.gamma.count(fresh) || s.sigma.count(fresh))
    throw Error(ErrorKind::AlphabetClash, "label " + fresh + " already in use");
  for (const auto& i : s.instructions)
    if (i.name == name) throw Error(ErrorKind::AlphabetClash, "instruction " + name + " already present");
  auto none = f::all1({"x", "y"}, f::neg(f::edge(fresh, "x", "y")));
  r.gamma.insert(fresh);
  r.phi_c = f::land(s.phi_c, none);
  for (auto& i : r.instructions) i.phi = f::land(i.phi, none);
  LabelSet old_gamma = s.gamma;
  LabelSet back = old_gamma;
  back.insert(fresh);
  Formula body;
  if (which == Enrichment::Reset) {
    auto full = f::all1({"x", "y"}, f::implies(f::land(f::in("x", "X1"), f::in("y", "X2")), f::edge(fresh, "x", "y")));
    body = f::land({relativize(r.phi_c, "X1"), relativize(describe_graph(s.g_in, back), "X2"), full,
                    pairf::no_edges(old_gamma, "X1", "X2"), pairf::no_edges(back, "X2", "X1")});
  } else {
    body = f::land({relativize(r.phi_c, "X1"), pairf::bijection(fresh, "X1", "X2"),
                    pairf::iso_via(fresh, s.sigma, old_gamma), pairf::no_edges(old_gamma, "X1", "X2"),
                    pairf::no_edges(back, "X2", "X1")});
  }
  r.instructions.push_back({name, pairf::frame("X1", "X2", body)});
  r.exclusive_bound = 0;
  return r;
}

namespace {

class Enriched : public NativeStorage {
 public:
  Enriched(NativePtr inner, Enrichment w) : in_(std::move(inner)), w_(w) {}
  std::string name() const override { return in_->name() + (w_ == Enrichment::Reset ? "+reset" : "+id"); }
  Config initial() const override { return in_->initial(); }
  std::vector<std::string> instructions() const override {
    auto r = in_->instructions();
    r.push_back(w_ == Enrichment::Reset ? kResetName : kIdName);
    return r;
  }
  bool mine(const std::string& t) const { return t == (w_ == Enrichment::Reset ? kResetName : kIdName); }
  std::vector<Config> step(const Config& c, const std::string& theta) const override {
    if (!mine(theta)) return in_->step(c, theta);
    return {w_ == Enrichment::Reset ? in_->initial() : c};
  }
  Graph render(const Config& c) const override { return in_->render(c); }
  Graph witness_pair(const Config& c, const std::string& theta, const Config& next) const override {
    if (!mine(theta)) return in_->witness_pair(c, theta, next);
    if (step(c, theta) != std::vector<Config>{next}) throw Error(ErrorKind::NotASuccessor, "not a step of " + theta);
    Graph g1 = render(c), g2 = render(next);
    auto [h, off] = assemble_pair(g1, g2);
    std::vector<Edge> extra;
    if (w_ == Enrichment::Reset) {
      for (int x : g1.nodes())
        for (int y : g2.nodes()) extra.push_back({x, kResetLabel, y + off});
    } else {
      for (int x : g1.nodes()) extra.push_back({x, kIdLabel, x + off});
    }
    return add_edges(h, extra);
  }

 private:
  NativePtr in_;
  Enrichment w_;
};

}  // namespace

NativePtr enrich_native(NativePtr s, Enrichment which) { return std::make_shared<Enriched>(std::move(s), which); }

// ---- exclusiveness ----

ExclusiveResult check_exclusive(MsoStorage& s, int k, const Budget& b) {
  ExclusiveResult res;
  std::vector<Label> sigma(s.sigma.begin(), s.sigma.end());
  LabelSet labels = inter_labels(s);
  const auto& th = s.instructions;
  for (int n = 2; n <= k && res.ok; ++n)
    for (int n1 = 1; n1 < n && res.ok; ++n1) {
      int n2 = n - n1;
      label_tuples(sigma, n1, [&](const std::vector<Label>& l1) {
        label_tuples(sigma, n2, [&](const std::vector<Label>& l2) {
          if (!res.ok) return;
          std::vector<std::pair<int, Label>> ns;
          std::vector<Edge> es, slots;
          for (int i = 0; i < n1; ++i) ns.emplace_back(i + 1, l1[i]);
          for (int j = 0; j < n2; ++j) ns.emplace_back(n1 + j + 1, l2[j]);
          for (int i = 1; i <= n1; ++i)
            for (int j = n1 + 1; j <= n; ++j) es.push_back({i, kNu, j});
          for (int i = 1; i <= n; ++i)
            for (int j = 1; j <= n; ++j)
              if (i != j)
                for (const auto& l : labels) slots.push_back({i, l, j});
          Graph h(ns, es);
          // instructions satisfiable on this skeleton, then pairs among them
          std::vector<std::size_t> live;
          for (std::size_t i = 0; i < th.size(); ++i)
            if (exists_completion(h, slots, th[i].phi, b.search)) live.push_back(i);
          for (std::size_t a = 0; a < live.size() && res.ok; ++a)
            for (std::size_t c = a + 1; c < live.size() && res.ok; ++c) {
              Graph w = h;
              if (exists_completion(h, slots, f::land(th[live[a]].phi, th[live[c]].phi), b.search, &w)) {
                res.ok = false;
                res.theta1 = th[live[a]].name;
                res.theta2 = th[live[c]].name;
                res.witness = w;
              }
            }
        });
      });
    }
  if (res.ok) s.exclusive_bound = std::max(s.exclusive_bound, k);
  return res;
}

}  // namespace msoga
