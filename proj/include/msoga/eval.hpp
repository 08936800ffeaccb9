#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "msoga/formula.hpp"
#include "msoga/graph.hpp"

namespace msoga {

struct Valuation {
  std::map<std::string, int> fo;
  std::map<std::string, NodeSet> so;
};

struct EvalOptions {
  // Largest number of subsets tried by one second-order quantifier.
  std::uint64_t so_budget = std::uint64_t(1) << 20;
};

// (g, rho) |= phi.  Atoms over labels absent from g are false.
bool eval(const Graph& g, const Valuation& rho, const Formula& phi, const EvalOptions& opt = {});
inline bool models(const Graph& g, const Formula& phi) { return eval(g, {}, phi); }

// Kleene truth values for graphs with undetermined edges.
enum class K3 : std::uint8_t { F = 0, U = 1, T = 2 };

// Graph with a list of undetermined edges, stored as bitmasks (at most 64
// nodes).  Undetermined edges may be fixed one at a time.
class Model {
 public:
  explicit Model(const Graph& g, const std::vector<Edge>& unknown = {});

  std::size_t size() const { return ids_.size(); }
  std::size_t num_unknown() const { return unk_.size(); }
  const Edge& unknown_edge(std::size_t var) const { return unk_edges_[var]; }
  K3 value(std::size_t var) const { return unk_[var].val; }
  void assign(std::size_t var, K3 v);
  // Graph with every edge currently known to be present.
  Graph materialize() const;

 private:
  friend class Checker;
  struct Unknown {
    int l, i, j;
    K3 val;
  };
  std::vector<int> ids_;
  std::map<int, int> index_;
  std::map<Label, int> edge_lab_, node_lab_;
  std::vector<int> node_lab_of_;
  std::vector<Label> edge_lab_names_, node_lab_names_;
  std::vector<std::vector<std::uint64_t>> out_, in_, uout_, uin_;
  std::vector<Unknown> unk_;
  std::vector<Edge> unk_edges_;
  std::map<std::tuple<int, int, int>, int> var_of_;
  std::uint64_t all_ = 0;
  Graph base_;
};

// Two-level atoms: next(theta, x, y) and x in X up to eq over Ae.
struct SaHooks {
  LabelSet ae;
  std::function<bool(const std::string& theta, int x, int y)> next;
};

// Compiled formula bound to a model.
class Checker {
 public:
  Checker(const Model& m, const Formula& phi, const Valuation& rho = {}, const EvalOptions& opt = {},
          const SaHooks* sa = nullptr);
  ~Checker();
  struct Result {
    K3 v;
    int witness;  // an undetermined edge the value depends on, when v == U
  };
  Result run();
  // Caches definite values of quantified subformulas.  Values stay valid while
  // undetermined edges are only fixed; undo with memo_rollback when unfixing.
  void enable_memo();
  std::size_t memo_mark() const;
  void memo_rollback(std::size_t mark);

 private:
  struct Impl;
  std::unique_ptr<Impl> p_;
};

// Does some choice of the undetermined edges make phi true?  Branches on the
// undetermined edges that the evaluation depends on.  `budget` bounds the
// number of explored partial assignments.  On success `witness` receives the
// completed graph.
struct SearchStats {
  std::uint64_t nodes = 0;
};
bool exists_completion(const Graph& g, const std::vector<Edge>& unknown, const Formula& phi,
                       std::uint64_t budget = std::uint64_t(1) << 24, Graph* witness = nullptr,
                       SearchStats* stats = nullptr, const EvalOptions& opt = {});

// Every completion (undetermined edges fixed to present or absent) that
// satisfies phi, each reported once as a graph.
void all_completions(const Graph& g, const std::vector<Edge>& unknown, const Formula& phi,
                     const std::function<void(const Graph&)>& out, std::uint64_t budget = std::uint64_t(1) << 24,
                     const EvalOptions& opt = {});

}  // namespace msoga
