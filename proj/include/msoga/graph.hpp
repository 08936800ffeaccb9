#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "msoga/error.hpp"

namespace msoga {

using Label = std::string;
using LabelSet = std::set<Label>;
using Word = std::vector<Label>;
using NodeSet = std::set<int>;

// Reserved labels.
inline const Label kEps = "e";     // empty input symbol
inline const Label kNu = "nu";     // pair-graph biclique label
inline const Label kStar = "*";

struct Edge {
  int src;
  Label label;
  int dst;
  friend auto operator<=>(const Edge&, const Edge&) = default;
  friend bool operator==(const Edge&, const Edge&) = default;
};

// Finite, nonempty, loop-free, labeled directed graph.  Node ids are opaque
// integers; nodes and edges are kept sorted.
class Graph {
 public:
  Graph(std::vector<std::pair<int, Label>> nodes, std::vector<Edge> edges);

  const std::vector<int>& nodes() const { return ids_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t size() const { return ids_.size(); }
  bool has_node(int v) const;
  const Label& label(int v) const;
  int index_of(int v) const;  // position in nodes(), -1 if absent
  bool has_edge(int u, const Label& l, int v) const;
  LabelSet node_labels() const;
  LabelSet edge_labels() const;
  int max_id() const { return ids_.back(); }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.ids_ == b.ids_ && a.labels_ == b.labels_ && a.edges_ == b.edges_;
  }

 private:
  std::vector<int> ids_;
  std::vector<Label> labels_;
  std::vector<Edge> edges_;
};

Graph new_graph(std::vector<std::pair<int, Label>> nodes, std::vector<Edge> edges);
Graph induced_subgraph(const Graph& g, const NodeSet& keep);
Graph relabel_edges(const Graph& g, const LabelSet& delta, const Label& gamma);
// Shift every node id by `offset`.
Graph shift_ids(const Graph& g, int offset);
// Node-disjoint union; ids of `b` are shifted past those of `a`.  Returns the
// shift applied to `b`.
std::pair<Graph, int> disjoint_union(const Graph& a, const Graph& b);
// g plus extra edges (validated).
Graph add_edges(const Graph& g, const std::vector<Edge>& extra);
Graph remove_edges(const Graph& g, const std::vector<Edge>& drop);

// Classes of equal in/out delta-neighbourhoods, ordered by smallest member.
std::vector<NodeSet> delta_components(const Graph& g, const LabelSet& delta);

struct PairView {
  Graph underlying;
  NodeSet first, second;
  Graph first_graph() const { return induced_subgraph(underlying, first); }
  Graph second_graph() const { return induced_subgraph(underlying, second); }
};

std::optional<PairView> try_pair_view(const Graph& g, const Label& nu = kNu);
PairView as_pair_view(const Graph& g, const Label& nu = kNu);

enum class StringLikeReason { None, AeStructure, StrayGammaEdge, WrongFirstComponent, AlphabetOverlap };

struct StringLikeView {
  Graph underlying;
  std::vector<NodeSet> components;
  Word trace;  // over A plus e
};

class NotStringLike : public Error {
 public:
  NotStringLike(StringLikeReason r, const std::string& msg)
      : Error(ErrorKind::NotStringLike, msg), reason_(r) {}
  StringLikeReason reason() const { return reason_; }

 private:
  StringLikeReason reason_;
};

// Checks membership in G[S,A] given the initial configuration graph of S and
// the input alphabet A (e is added implicitly).
StringLikeView as_string_like(const Graph& g, const Graph& g_in, const LabelSet& A);
std::optional<StringLikeView> try_string_like(const Graph& g, const Graph& g_in, const LabelSet& A,
                                              StringLikeReason* why = nullptr);

enum class StringMode { EdgeLabeled, NodeLabeled };
Graph string_graph(const Word& w, StringMode mode);
inline Graph ed_gr(const Word& w) { return string_graph(w, StringMode::EdgeLabeled); }
inline Graph nd_gr(const Word& w) { return string_graph(w, StringMode::NodeLabeled); }

// Label-preserving isomorphism test (backtracking).
bool iso_equal(const Graph& a, const Graph& b, std::size_t max_nodes = 16);
// A permutation-invariant fingerprint: equal for isomorphic graphs.
std::string iso_fingerprint(const Graph& g);

// Splits a word like "0110e01" into one-character symbols.
Word chars(const std::string& s);
std::string join(const Word& w, const std::string& sep = "");

}  // namespace msoga
