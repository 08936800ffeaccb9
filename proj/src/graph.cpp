#include "msoga/graph.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace msoga {

const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::EmptyGraph: return "EmptyGraph";
    case ErrorKind::LoopEdge: return "LoopEdge";
    case ErrorKind::DanglingEdge: return "DanglingEdge";
    case ErrorKind::UnknownNode: return "UnknownNode";
    case ErrorKind::ReservedSymbol: return "ReservedSymbol";
    case ErrorKind::NotPairGraph: return "NotPairGraph";
    case ErrorKind::NotStringLike: return "NotStringLike";
    case ErrorKind::SizeLimit: return "SizeLimit";
    case ErrorKind::UnboundVariable: return "UnboundVariable";
    case ErrorKind::VariableClash: return "VariableClash";
    case ErrorKind::IllKinded: return "IllKinded";
    case ErrorKind::UnknownMacro: return "UnknownMacro";
    case ErrorKind::UnknownSymbol: return "UnknownSymbol";
    case ErrorKind::AlphabetMismatch: return "AlphabetMismatch";
    case ErrorKind::StateBlowup: return "StateBlowup";
    case ErrorKind::BudgetExhausted: return "BudgetExhausted";
    case ErrorKind::InvalidRun: return "InvalidRun";
    case ErrorKind::StorageMismatch: return "StorageMismatch";
    case ErrorKind::UnknownInstruction: return "UnknownInstruction";
    case ErrorKind::NotASuccessor: return "NotASuccessor";
    case ErrorKind::NotInDomain: return "NotInDomain";
    case ErrorKind::EmptyOutput: return "EmptyOutput";
    case ErrorKind::AlphabetClash: return "AlphabetClash";
    case ErrorKind::DepthLimit: return "DepthLimit";
    case ErrorKind::NotExclusive: return "NotExclusive";
    case ErrorKind::Parse: return "ParseError";
  }
  return "Error";
}

Graph::Graph(std::vector<std::pair<int, Label>> nodes, std::vector<Edge> edges) {
  if (nodes.empty()) throw Error(ErrorKind::EmptyGraph, "graph has no nodes");
  std::sort(nodes.begin(), nodes.end());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (i > 0 && nodes[i].first == nodes[i - 1].first) {
      if (nodes[i].second != nodes[i - 1].second)
        throw Error(ErrorKind::UnknownNode, "node " + std::to_string(nodes[i].first) + " has two labels");
      continue;
    }
    ids_.push_back(nodes[i].first);
    labels_.push_back(nodes[i].second);
  }
  for (const auto& e : edges) {
    if (e.src == e.dst) throw Error(ErrorKind::LoopEdge, "loop at node " + std::to_string(e.src));
    if (!has_node(e.src) || !has_node(e.dst))
      throw Error(ErrorKind::DanglingEdge,
                  "edge " + std::to_string(e.src) + " -> " + std::to_string(e.dst) + " has an undeclared endpoint");
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges_ = std::move(edges);
}

int Graph::index_of(int v) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), v);
  if (it == ids_.end() || *it != v) return -1;
  return int(it - ids_.begin());
}

bool Graph::has_node(int v) const { return index_of(v) >= 0; }

const Label& Graph::label(int v) const {
  int i = index_of(v);
  if (i < 0) throw Error(ErrorKind::UnknownNode, "node " + std::to_string(v));
  return labels_[i];
}

bool Graph::has_edge(int u, const Label& l, int v) const {
  return std::binary_search(edges_.begin(), edges_.end(), Edge{u, l, v});
}

LabelSet Graph::node_labels() const { return LabelSet(labels_.begin(), labels_.end()); }

LabelSet Graph::edge_labels() const {
  LabelSet s;
  for (const auto& e : edges_) s.insert(e.label);
  return s;
}

Graph new_graph(std::vector<std::pair<int, Label>> nodes, std::vector<Edge> edges) {
  return Graph(std::move(nodes), std::move(edges));
}

Graph induced_subgraph(const Graph& g, const NodeSet& keep) {
  if (keep.empty()) throw Error(ErrorKind::EmptyGraph, "empty node set");
  std::vector<std::pair<int, Label>> ns;
  for (int v : keep) {
    if (!g.has_node(v)) throw Error(ErrorKind::UnknownNode, "node " + std::to_string(v));
    ns.emplace_back(v, g.label(v));
  }
  std::vector<Edge> es;
  for (const auto& e : g.edges())
    if (keep.count(e.src) && keep.count(e.dst)) es.push_back(e);
  return Graph(std::move(ns), std::move(es));
}

static std::vector<std::pair<int, Label>> node_list(const Graph& g) {
  std::vector<std::pair<int, Label>> ns;
  for (int v : g.nodes()) ns.emplace_back(v, g.label(v));
  return ns;
}

Graph relabel_edges(const Graph& g, const LabelSet& delta, const Label& gamma) {
  std::vector<Edge> es;
  for (auto e : g.edges()) {
    if (delta.count(e.label)) e.label = gamma;
    es.push_back(e);
  }
  return Graph(node_list(g), std::move(es));
}

Graph shift_ids(const Graph& g, int offset) {
  std::vector<std::pair<int, Label>> ns;
  for (int v : g.nodes()) ns.emplace_back(v + offset, g.label(v));
  std::vector<Edge> es;
  for (const auto& e : g.edges()) es.push_back({e.src + offset, e.label, e.dst + offset});
  return Graph(std::move(ns), std::move(es));
}

std::pair<Graph, int> disjoint_union(const Graph& a, const Graph& b) {
  int offset = a.max_id() + 1 - b.nodes().front();
  Graph bs = shift_ids(b, offset);
  auto ns = node_list(a);
  for (int v : bs.nodes()) ns.emplace_back(v, bs.label(v));
  auto es = a.edges();
  es.insert(es.end(), bs.edges().begin(), bs.edges().end());
  return {Graph(std::move(ns), std::move(es)), offset};
}

Graph add_edges(const Graph& g, const std::vector<Edge>& extra) {
  auto es = g.edges();
  es.insert(es.end(), extra.begin(), extra.end());
  return Graph(node_list(g), std::move(es));
}

Graph remove_edges(const Graph& g, const std::vector<Edge>& drop) {
  std::set<Edge> d(drop.begin(), drop.end());
  std::vector<Edge> es;
  for (const auto& e : g.edges())
    if (!d.count(e)) es.push_back(e);
  return Graph(node_list(g), std::move(es));
}

std::vector<NodeSet> delta_components(const Graph& g, const LabelSet& delta) {
  std::map<int, std::pair<NodeSet, NodeSet>> nb;  // in, out
  for (int v : g.nodes()) nb[v];
  for (const auto& e : g.edges()) {
    if (!delta.count(e.label)) continue;
    nb[e.dst].first.insert(e.src);
    nb[e.src].second.insert(e.dst);
  }
  std::map<std::pair<NodeSet, NodeSet>, NodeSet> classes;
  for (auto& [v, io] : nb) classes[io].insert(v);
  std::vector<NodeSet> out;
  for (auto& [k, c] : classes) out.push_back(c);
  std::sort(out.begin(), out.end(), [](const NodeSet& a, const NodeSet& b) { return *a.begin() < *b.begin(); });
  return out;
}

std::optional<PairView> try_pair_view(const Graph& g, const Label& nu) {
  NodeSet v1, v2;
  std::size_t nnu = 0;
  for (const auto& e : g.edges()) {
    if (e.label != nu) continue;
    ++nnu;
    v1.insert(e.src);
    v2.insert(e.dst);
  }
  if (v1.empty()) return std::nullopt;
  for (int v : v1)
    if (v2.count(v)) return std::nullopt;
  if (v1.size() + v2.size() != g.size()) return std::nullopt;
  if (nnu != v1.size() * v2.size()) return std::nullopt;
  return PairView{g, v1, v2};
}

PairView as_pair_view(const Graph& g, const Label& nu) {
  auto p = try_pair_view(g, nu);
  if (!p) throw Error(ErrorKind::NotPairGraph, "nu-edges do not form a biclique between a partition");
  return *p;
}

std::optional<StringLikeView> try_string_like(const Graph& g, const Graph& g_in, const LabelSet& A,
                                              StringLikeReason* why) {
  auto fail = [&](StringLikeReason r) -> std::optional<StringLikeView> {
    if (why) *why = r;
    return std::nullopt;
  };
  if (A.count(kEps)) return fail(StringLikeReason::AlphabetOverlap);
  LabelSet ae = A;
  ae.insert(kEps);
  auto comps = delta_components(g, ae);
  std::map<int, int> cls;
  for (std::size_t i = 0; i < comps.size(); ++i)
    for (int v : comps[i]) cls[v] = int(i);
  // successor relation between classes and the label per class pair
  std::map<int, std::set<int>> succ, pred;
  std::map<std::pair<int, int>, LabelSet> labs;
  std::size_t nae = 0;
  for (const auto& e : g.edges()) {
    if (!ae.count(e.label)) continue;
    ++nae;
    int a = cls[e.src], b = cls[e.dst];
    if (a == b) return fail(StringLikeReason::AeStructure);
    succ[a].insert(b);
    pred[b].insert(a);
    labs[{a, b}].insert(e.label);
  }
  int start = -1;
  for (std::size_t i = 0; i < comps.size(); ++i)
    if (!pred.count(int(i))) {
      if (start >= 0) return fail(StringLikeReason::AeStructure);
      start = int(i);
    }
  if (start < 0) return fail(StringLikeReason::AeStructure);
  std::vector<int> order{start};
  std::set<int> seen{start};
  Word trace;
  std::size_t expected = 0;
  while (succ.count(order.back())) {
    const auto& s = succ[order.back()];
    if (s.size() != 1) return fail(StringLikeReason::AeStructure);
    int nx = *s.begin();
    if (seen.count(nx) || pred[nx].size() != 1) return fail(StringLikeReason::AeStructure);
    const auto& ls = labs[{order.back(), nx}];
    if (ls.size() != 1) return fail(StringLikeReason::AeStructure);
    expected += comps[order.back()].size() * comps[nx].size();
    trace.push_back(*ls.begin());
    order.push_back(nx);
    seen.insert(nx);
  }
  if (order.size() != comps.size() || expected != nae) return fail(StringLikeReason::AeStructure);
  std::vector<int> pos(comps.size());
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = int(i);
  for (const auto& e : g.edges()) {
    if (ae.count(e.label)) continue;
    int a = pos[cls[e.src]], b = pos[cls[e.dst]];
    if (!(a == b || b == a + 1)) return fail(StringLikeReason::StrayGammaEdge);
  }
  std::vector<NodeSet> ordered;
  for (int c : order) ordered.push_back(comps[c]);
  if (!iso_equal(induced_subgraph(g, ordered[0]), g_in, 64)) return fail(StringLikeReason::WrongFirstComponent);
  if (why) *why = StringLikeReason::None;
  return StringLikeView{g, ordered, trace};
}

StringLikeView as_string_like(const Graph& g, const Graph& g_in, const LabelSet& A) {
  StringLikeReason r{};
  auto v = try_string_like(g, g_in, A, &r);
  if (v) return *v;
  switch (r) {
    case StringLikeReason::AeStructure: throw NotStringLike(r, "Ae-edges do not form a chain of bicliques");
    case StringLikeReason::StrayGammaEdge: throw NotStringLike(r, "Gamma-edge between non-consecutive components");
    case StringLikeReason::WrongFirstComponent: throw NotStringLike(r, "first component is not the initial graph");
    case StringLikeReason::AlphabetOverlap: throw NotStringLike(r, "input alphabet contains e");
    default: throw NotStringLike(r, "not string-like");
  }
}

Graph string_graph(const Word& w, StringMode mode) {
  std::vector<std::pair<int, Label>> ns;
  std::vector<Edge> es;
  if (mode == StringMode::EdgeLabeled) {
    for (std::size_t i = 0; i <= w.size(); ++i) ns.emplace_back(int(i) + 1, kStar);
    for (std::size_t i = 0; i < w.size(); ++i) es.push_back({int(i) + 1, w[i], int(i) + 2});
  } else {
    if (w.empty()) throw Error(ErrorKind::EmptyGraph, "node-labeled graph of the empty string");
    for (std::size_t i = 0; i < w.size(); ++i) ns.emplace_back(int(i) + 1, w[i]);
    for (std::size_t i = 0; i + 1 < w.size(); ++i) es.push_back({int(i) + 1, kStar, int(i) + 2});
  }
  return Graph(std::move(ns), std::move(es));
}

namespace {

struct IsoData {
  std::vector<Label> lab;
  std::vector<std::vector<LabelSet>> adj;  // adj[i][j] = labels of edges i->j
  std::vector<std::string> sig;
};

IsoData iso_data(const Graph& g) {
  std::size_t n = g.size();
  IsoData d;
  d.adj.assign(n, std::vector<LabelSet>(n));
  for (int v : g.nodes()) d.lab.push_back(g.label(v));
  std::vector<std::map<Label, std::pair<int, int>>> deg(n);
  for (const auto& e : g.edges()) {
    int a = g.index_of(e.src), b = g.index_of(e.dst);
    d.adj[a][b].insert(e.label);
    deg[a][e.label].second++;
    deg[b][e.label].first++;
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::ostringstream os;
    os << d.lab[i] << '|';
    for (auto& [l, io] : deg[i]) os << l << ':' << io.first << ',' << io.second << ';';
    d.sig.push_back(os.str());
  }
  return d;
}

}  // namespace

std::string iso_fingerprint(const Graph& g) {
  auto d = iso_data(g);
  auto s = d.sig;
  std::sort(s.begin(), s.end());
  std::string out = std::to_string(g.size()) + "#" + std::to_string(g.edges().size());
  for (auto& x : s) out += "/" + x;
  return out;
}

bool iso_equal(const Graph& a, const Graph& b, std::size_t max_nodes) {
  if (a.size() > max_nodes || b.size() > max_nodes)
    throw Error(ErrorKind::SizeLimit, "isomorphism test beyond " + std::to_string(max_nodes) + " nodes");
  if (a.size() != b.size() || a.edges().size() != b.edges().size()) return false;
  auto da = iso_data(a), db = iso_data(b);
  {
    auto sa = da.sig, sb = db.sig;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return false;
  }
  std::size_t n = a.size();
  std::vector<int> map(n, -1);
  std::vector<bool> used(n, false);
  std::function<bool(std::size_t)> go = [&](std::size_t i) -> bool {
    if (i == n) return true;
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j] || da.sig[i] != db.sig[j]) continue;
      bool ok = true;
      for (std::size_t k = 0; k < i && ok; ++k) {
        int mk = map[k];
        ok = da.adj[i][k] == db.adj[j][mk] && da.adj[k][i] == db.adj[mk][j];
      }
      if (!ok) continue;
      map[i] = int(j);
      used[j] = true;
      if (go(i + 1)) return true;
      used[j] = false;
    }
    map[i] = -1;
    return false;
  };
  return go(0);
}

Word chars(const std::string& s) {
  Word w;
  for (char c : s) w.push_back(std::string(1, c));
  return w;
}

std::string join(const Word& w, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += sep;
    out += w[i];
  }
  return out;
}

}  // namespace msoga
