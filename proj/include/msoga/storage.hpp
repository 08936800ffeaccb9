#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "msoga/eval.hpp"
#include "msoga/formula.hpp"
#include "msoga/graph.hpp"

namespace msoga {

// Configurations of native storages are canonical strings.
using Config = std::string;

class NativeStorage {
 public:
  virtual ~NativeStorage() = default;
  virtual std::string name() const = 0;
  virtual Config initial() const = 0;
  virtual std::vector<std::string> instructions() const = 0;
  // Successors in canonical order; empty when the instruction is not applicable.
  virtual std::vector<Config> step(const Config& c, const std::string& theta) const = 0;
  virtual Graph render(const Config& c) const = 0;
  // Pair graph (with intermediate edges) of one step; NotASuccessor otherwise.
  virtual Graph witness_pair(const Config& c, const std::string& theta, const Config& next) const = 0;

  bool has_instruction(const std::string& theta) const;
};
using NativePtr = std::shared_ptr<const NativeStorage>;

struct Instruction {
  std::string name;
  Formula phi;
};

struct MsoStorage {
  std::string name;
  LabelSet sigma, gamma;
  Formula phi_c;
  Graph g_in = Graph({{1, kStar}}, {});
  std::vector<Instruction> instructions;
  // Extra labels allowed on intermediate edges besides gamma.
  LabelSet delta;
  // When set, the only labels the instruction formulas allow between the two
  // halves; mso_member searches these alone.
  std::optional<LabelSet> intermediate;
  // Largest pair-graph size at which exclusiveness was verified (0: never).
  int exclusive_bound = 0;

  const Instruction& instruction(const std::string& theta) const;  // UnknownInstruction
  std::vector<std::string> instruction_names() const;
};

struct Budget {
  std::uint64_t configs = 100000;           // behaviours: configurations kept
  std::uint64_t search = std::uint64_t(1) << 22;  // intermediate-edge search steps
};

// Trivial storage: one configuration, one identity instruction "theta".
NativePtr triv_native();
MsoStorage triv_mso();

// Instruction strings of length <= n with a witnessing configuration sequence.
std::set<std::vector<std::string>> behaviours(const NativeStorage& s, int n, const Budget& b = {});
bool is_behaviour(const NativeStorage& s, const std::vector<std::string>& thetas, const Budget& b = {});

// Building blocks for instruction formulas.
namespace pairf {
// Exists X1 X2 naming the nu-sources and nu-targets, with the nu-edges
// forming exactly the biclique X1 x X2 and covering every node.  With
// `inverted` the nu-edges run from X2 to X1.
Formula frame(const std::string& X1, const std::string& X2, Formula body, bool inverted = false);
// No edge with a label in `l` from a node of X to a node of Y.
Formula no_edges(const LabelSet& l, const std::string& X, const std::string& Y);
// Node labels of `v` in `sigma`: lab(x) == lab(y).
Formula same_label(const LabelSet& sigma, const std::string& x, const std::string& y);
// The d-edges preserve gamma-edges in both directions.
Formula iso_edges(const Label& d, const LabelSet& gamma);
// ... and node labels.
Formula iso_via(const Label& d, const LabelSet& sigma, const LabelSet& gamma);
// x is the last node of X along `l`-edges.
Formula top(const LabelSet& l, const std::string& x, const std::string& X);
// Exactly one d-edge out of each node of X, and into each node of Y; none elsewhere.
Formula bijection(const Label& d, const std::string& X, const std::string& Y);
}  // namespace pairf

// Closed formula whose models are exactly the graphs isomorphic to g, among
// graphs with node labels anywhere and edge labels in `gamma` plus those of g.
Formula describe_graph(const Graph& g, const LabelSet& gamma);

// Assembles g1, g2 into a pair graph; returns the graph and the id shift of g2.
std::pair<Graph, int> assemble_pair(const Graph& g1, const Graph& g2);
// Candidate intermediate edges V1 -> V2 over gamma plus delta.
std::vector<Edge> intermediate_slots(const Graph& h, int n1, const LabelSet& labels);

// Is (g1, g2) in rel(L(theta)) for some choice of intermediate edges?
bool mso_member(const MsoStorage& s, const std::string& theta, const Graph& g1, const Graph& g2,
                const Budget& b = {}, Graph* witness = nullptr);
// Names of instructions theta with (g1, g2) in rel(L(theta)).
std::vector<std::string> mso_member_any(const MsoStorage& s, const Graph& g1, const Graph& g2, const Budget& b = {});

// Configuration graphs with at most k nodes, one per isomorphism class.
std::vector<Graph> configurations(const MsoStorage& s, int k, const Budget& b = {});
struct Successor {
  std::string theta;
  Graph g;
};
std::vector<Successor> mso_successors(const MsoStorage& s, const Graph& g1, int k, const Budget& b = {});

enum class Enrichment { Reset, Identity };
inline const Label kResetLabel = "__reset";
inline const Label kIdLabel = "__id";
inline const std::string kResetName = "reset";
inline const std::string kIdName = "id";
MsoStorage enrich(const MsoStorage& s, Enrichment which);
// Native counterpart: adds "reset" (to the initial configuration) or "id".
NativePtr enrich_native(NativePtr s, Enrichment which);

struct ExclusiveResult {
  bool ok = true;
  std::string theta1, theta2;
  std::optional<Graph> witness;
};
// Searches pair graphs with at most k nodes for one satisfying two
// instructions.  Records k in s.exclusive_bound when none is found.
ExclusiveResult check_exclusive(MsoStorage& s, int k, const Budget& b = {});

}  // namespace msoga
