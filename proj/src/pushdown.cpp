#include "msoga/pushdown.hpp"

#include <algorithm>

#include "msoga/sautomaton.hpp"

namespace msoga {

namespace pushdown {

namespace {

bool is_omega(const Label& w) { return std::find(kOmega.begin(), kOmega.end(), w) != kOmega.end(); }

}  // namespace

std::vector<Cell> parse(const Config& c) {
  std::vector<Cell> cells;
  auto bad = [&]() { return Error(ErrorKind::Parse, "not a pushdown configuration: '" + c + "'"); };
  std::size_t i = 0;
  while (i < c.size()) {
    if (c[i] == ' ') {
      ++i;
      continue;
    }
    if (c[i] != '(') throw bad();
    std::size_t sp = c.find(' ', i);
    if (sp == std::string::npos) throw bad();
    Label w = c.substr(i + 1, sp - i - 1);
    int depth = 1;
    std::size_t j = sp + 1;
    for (; j < c.size() && depth > 0; ++j) {
      if (c[j] == '(') ++depth;
      if (c[j] == ')') --depth;
    }
    if (depth != 0 || !is_omega(w)) throw bad();
    cells.push_back({w, c.substr(sp + 1, j - sp - 2)});
    i = j;
  }
  if (cells.empty() || cells[0].omega != kBottom) throw bad();
  return cells;
}

Config format(const std::vector<Cell>& cells) {
  Config r;
  for (const auto& c : cells) r += "(" + c.omega + " " + c.inner + ")";
  return r;
}

Label omega_label(const Label& w, int level) { return level == 1 ? w : w + std::to_string(level); }
Label d_label(int level) { return "d" + std::to_string(level); }

std::vector<std::string> instruction_names(const std::vector<std::string>& inner) {
  std::vector<std::string> r;
  for (const auto& w : kOmega) r.push_back("top(" + w + ")");
  r.push_back("pop");
  for (const auto& w : kOmega)
    for (const auto& t : inner) r.push_back("push(" + w + "," + t + ")");
  return r;
}

}  // namespace pushdown

namespace {

using pushdown::Cell;

struct Instr {
  enum { Top, Pop, Push } op;
  Label omega;
  std::string theta;
};

Instr split_instr(const std::string& name, const std::vector<std::string>& inner) {
  auto unknown = [&]() { return Error(ErrorKind::UnknownInstruction, "no pushdown instruction '" + name + "'"); };
  if (name == "pop") return {Instr::Pop, "", ""};
  if (name.size() > 5 && name.compare(0, 4, "top(") == 0 && name.back() == ')') {
    Label w = name.substr(4, name.size() - 5);
    if (!std::count(pushdown::kOmega.begin(), pushdown::kOmega.end(), w)) throw unknown();
    return {Instr::Top, w, ""};
  }
  if (name.size() > 6 && name.compare(0, 5, "push(") == 0 && name.back() == ')') {
    auto comma = name.find(',');
    if (comma == std::string::npos) throw unknown();
    Label w = name.substr(5, comma - 5);
    std::string t = name.substr(comma + 1, name.size() - comma - 2);
    if (!std::count(pushdown::kOmega.begin(), pushdown::kOmega.end(), w) ||
        !std::count(inner.begin(), inner.end(), t))
      throw unknown();
    return {Instr::Push, w, t};
  }
  throw unknown();
}

// Copies g into (nodes, edges) with ids base+1.. in node order; returns the id map.
std::map<int, int> place(const Graph& g, int base, std::vector<std::pair<int, Label>>& nodes, std::vector<Edge>& edges) {
  std::map<int, int> id;
  for (int v : g.nodes()) {
    id[v] = base + int(id.size()) + 1;
    nodes.push_back({id[v], g.label(v)});
  }
  for (const auto& e : g.edges()) edges.push_back({id[e.src], e.label, id[e.dst]});
  return id;
}

class Pushdown : public NativeStorage {
 public:
  Pushdown(NativePtr inner, int level) : inner_(std::move(inner)), level_(level) {}

  std::string name() const override { return "P(" + inner_->name() + ")"; }
  Config initial() const override { return pushdown::format({{pushdown::kBottom, inner_->initial()}}); }
  std::vector<std::string> instructions() const override {
    return pushdown::instruction_names(inner_->instructions());
  }

  std::vector<Config> step(const Config& c, const std::string& theta) const override {
    auto in = split_instr(theta, inner_->instructions());
    auto cells = pushdown::parse(c);
    switch (in.op) {
      case Instr::Top:
        if (cells.back().omega != in.omega) return {};
        return {c};
      case Instr::Pop:
        if (cells.size() < 2) return {};
        cells.pop_back();
        return {pushdown::format(cells)};
      case Instr::Push: {
        std::vector<Config> r;
        for (const auto& n : inner_->step(cells.back().inner, in.theta)) {
          auto next = cells;
          next.push_back({in.omega, n});
          r.push_back(pushdown::format(next));
        }
        return r;
      }
    }
    return {};
  }

  Graph render(const Config& c) const override {
    std::vector<std::pair<int, Label>> nodes;
    std::vector<Edge> edges;
    comps(pushdown::parse(c), nodes, edges);
    return Graph(nodes, edges);
  }

  Graph witness_pair(const Config& c, const std::string& theta, const Config& next) const override {
    auto st = step(c, theta);
    if (std::find(st.begin(), st.end(), next) == st.end())
      throw Error(ErrorKind::NotASuccessor, "'" + next + "' is not a " + theta + "-successor of '" + c + "'");
    auto in = split_instr(theta, inner_->instructions());
    auto c1 = pushdown::parse(c), c2 = pushdown::parse(next);
    std::vector<std::pair<int, Label>> nodes;
    std::vector<Edge> edges;
    auto p1 = comps(c1, nodes, edges);
    int n1 = int(nodes.size());
    auto p2 = comps(c2, nodes, edges);
    for (int a = 1; a <= n1; ++a)
      for (int b = n1 + 1; b <= int(nodes.size()); ++b) edges.push_back({a, kNu, b});
    // d-isomorphism between the shared cells
    Label d = pushdown::d_label(level_);
    std::size_t shared = std::min(c1.size(), c2.size());
    for (std::size_t i = 0; i < shared; ++i)
      for (auto [u, a] : p1[i]) edges.push_back({a, d, p2[i].at(u)});
    if (in.op == Instr::Push) {
      Graph w = inner_->witness_pair(c1.back().inner, in.theta, c2.back().inner);
      auto pv = as_pair_view(w);
      Graph g1 = inner_->render(c1.back().inner), g2 = inner_->render(c2.back().inner);
      std::map<int, int> to;
      auto pair_up = [&](const NodeSet& half, const Graph& g, const std::map<int, int>& placed) {
        auto it = half.begin();
        for (int v : g.nodes()) to[*it++] = placed.at(v);
      };
      pair_up(pv.first, g1, p1.back());
      pair_up(pv.second, g2, p2.back());
      for (const auto& e : w.edges())
        if (e.label != kNu && pv.first.count(e.src) && pv.second.count(e.dst))
          edges.push_back({to.at(e.src), e.label, to.at(e.dst)});
    }
    return Graph(nodes, edges);
  }

 private:
  // Lays out one component per cell; returns inner id -> placed id per cell.
  std::vector<std::map<int, int>> comps(const std::vector<Cell>& cells, std::vector<std::pair<int, Label>>& nodes,
                                        std::vector<Edge>& edges) const {
    std::vector<std::map<int, int>> placed;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      placed.push_back(place(inner_->render(cells[i].inner), int(nodes.size()), nodes, edges));
      if (i == 0) continue;
      Label w = pushdown::omega_label(cells[i].omega, level_);
      for (auto [u, a] : placed[i - 1])
        for (auto [v, b] : placed[i]) edges.push_back({a, w, b});
    }
    return placed;
  }

  NativePtr inner_;
  int level_;
};

LabelSet omega_labels(int level) {
  LabelSet r;
  for (const auto& w : pushdown::kOmega) r.insert(pushdown::omega_label(w, level));
  return r;
}

}  // namespace

NativePtr pushdown_native(NativePtr inner, int level) { return std::make_shared<Pushdown>(std::move(inner), level); }

MsoStorage pushdown_mso(const MsoStorage& s, int level) {
  using namespace f;
  const LabelSet om = omega_labels(level);
  const Label d = pushdown::d_label(level);
  for (const auto& l : om)
    if (s.gamma.count(l) || s.delta.count(l))
      throw Error(ErrorKind::AlphabetClash, "pushdown symbol '" + l + "' is an edge label of " + s.name);
  if (s.gamma.count(d) || s.delta.count(d))
    throw Error(ErrorKind::AlphabetClash, "'" + d + "' is an edge label of " + s.name);

  LabelSet inter = s.gamma;
  inter.insert(s.delta.begin(), s.delta.end());
  MsoStorage p;
  p.name = "P(" + s.name + ")";
  p.sigma = s.sigma;
  p.gamma = s.gamma;
  p.gamma.insert(om.begin(), om.end());
  p.delta = s.delta;
  p.delta.insert(d);
  p.intermediate = s.intermediate ? *s.intermediate : inter;
  p.intermediate->insert(d);
  p.g_in = s.g_in;

  std::vector<Formula> cs = {string_eq(om)};
  for (const auto& a : om) {
    cs.push_back(all1({"x", "y", "z"}, implies(land(edge(a, "x", "y"), edge_any(om, "x", "z")), edge(a, "x", "z"))));
    cs.push_back(all1({"x", "y", "z"}, implies(land(edge(a, "x", "y"), edge_any(om, "z", "y")), edge(a, "z", "y"))));
  }
  cs.push_back(all2("X", implies(first_set(om, "X"), relativize(describe_graph(s.g_in, s.gamma), "X"))));
  if (!s.gamma.empty()) cs.push_back(all1({"x", "y"}, implies(edge_any(s.gamma, "x", "y"), eqnb(om, "x", "y"))));
  p.phi_c = land(cs);

  auto last = [&](const std::string& z) { return neg(ex1("y", edge_any(om, z, "y"))); };
  auto first = [&](const std::string& z) { return neg(ex1("y", edge_any(om, "y", z))); };
  auto top_is = [&](const Label& w) {
    Formula phi = all1("x", implies(last("x"), ex1("y", edge(pushdown::omega_label(w, level), "y", "x"))));
    if (w == pushdown::kBottom) phi = lor(phi, all1("x", land(first("x"), last("x"))));
    return phi;
  };
  // R = the nodes of X that are (not) in the last component
  auto define = [&](const std::string& R, const std::string& X, bool in_last, Formula body) {
    Formula l = last("z");
    return ex2(R, land(all1("z", iff(in("z", R), land(in("z", X), in_last ? l : neg(l)))), body));
  };

  LabelSet inner_edges = s.gamma;
  inner_edges.insert(s.delta.begin(), s.delta.end());
  LabelSet back = inner_edges;
  back.insert(d);
  Formula iso = pairf::iso_via(d, s.sigma, p.gamma);
  auto frame = [&](std::vector<Formula> body) {
    // cheap edge exclusions first, the configuration formulas last
    body.insert(body.begin(),
                {pairf::no_edges(om, "X1", "X2"), pairf::no_edges(om, "X2", "X1"), pairf::no_edges(back, "X2", "X1")});
    body.push_back(relativize(p.phi_c, "X1"));
    body.push_back(relativize(p.phi_c, "X2"));
    return pairf::frame("X1", "X2", land(body));
  };

  for (const auto& w : pushdown::kOmega)
    p.instructions.push_back({"top(" + w + ")", frame({pairf::no_edges(inner_edges, "X1", "X2"),
                                                       pairf::bijection(d, "X1", "X2"), iso,
                                                       relativize(top_is(w), "X1")})});
  p.instructions.push_back(
      {"pop", frame({pairf::no_edges(inner_edges, "X1", "X2"),
                     define("R", "X1", false, land(pairf::bijection(d, "R", "X2"), iso))})});
  for (const auto& w : pushdown::kOmega)
    for (const auto& ins : s.instructions) {
      auto avoid = all_var_names(ins.phi);
      avoid.insert({"X1", "X2", "R", "x", "y", "z"});
      std::string T = fresh_name("T", avoid);
      // inner edges between the halves only from the old top to the new one
      Formula confined = all1({"x", "y"}, implies(land({in("x", "X1"), in("y", "X2"), edge_any(inner_edges, "x", "y")}),
                                                  land(last("x"), last("y"))));
      Formula tops = all2(T, implies(all1("z", iff(in("z", T), last("z"))), relativize(ins.phi, T)));
      p.instructions.push_back({"push(" + w + "," + ins.name + ")",
                                frame({confined, define("R", "X2", false, land(pairf::bijection(d, "X1", "R"), iso)),
                                       relativize(top_is(w), "X2"), tops})});
    }
  return p;
}

std::pair<NativePtr, MsoStorage> iterate_pushdown(int n) {
  if (n < 0 || n > kMaxPushdownDepth)
    throw Error(ErrorKind::DepthLimit, "pushdown depth " + std::to_string(n) + " is beyond " +
                                           std::to_string(kMaxPushdownDepth));
  NativePtr nat = triv_native();
  MsoStorage mso = triv_mso();
  for (int k = 1; k <= n; ++k) {
    nat = pushdown_native(nat, k);
    mso = pushdown_mso(mso, k);
  }
  return {nat, mso};
}

}  // namespace msoga
