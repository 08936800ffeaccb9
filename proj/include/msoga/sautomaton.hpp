#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "msoga/nfa.hpp"
#include "msoga/storage.hpp"

namespace msoga {

struct STransition {
  int from;
  Label alpha;  // input symbol or e
  std::string theta;
  int to;
  friend auto operator<=>(const STransition&, const STransition&) = default;
  friend bool operator==(const STransition&, const STransition&) = default;
};

struct SAutomaton {
  LabelSet input;  // A; e is implicit
  std::vector<std::string> states;
  std::set<int> initial, final;
  std::vector<STransition> trans;
  std::string storage;  // name of the storage it runs on; empty when unspecified

  int add_state(const std::string& name, bool is_initial = false, bool is_final = false);
  void add(int from, const Label& alpha, const std::string& theta, int to);
  int state(const std::string& name) const;  // -1 if absent
  std::set<std::string> thetas() const;
  friend bool operator==(const SAutomaton&, const SAutomaton&) = default;
};

// UnknownSymbol / UnknownNode on malformed transitions.
void validate(const SAutomaton& m);

// Ae x Theta word automaton; Theta is `thetas` plus the instructions used.
NFA to_word_nfa(const SAutomaton& m, const std::vector<std::string>& thetas = {});
// Inverse of to_word_nfa; symbols must be alpha/theta pairs.
SAutomaton from_word_nfa(const NFA& n, const LabelSet& input, const std::string& storage = "");
// A TRIV-automaton with one theta-transition per NFA transition.
SAutomaton triv_automaton(const NFA& n, const std::string& theta = "theta");

// The Stack automaton accepting { w w^R w : w in {0,1}+ }.
SAutomaton wwrw_automaton();

struct AcceptOptions {
  // Longest run explored; default 4 |w| |Q| + extra_steps.
  std::optional<std::uint64_t> steps;
  std::uint64_t extra_steps = 16;
  // Instantaneous descriptions kept.
  std::uint64_t max_ids = std::uint64_t(1) << 20;
};

// Transition indices with the configurations c_1 ... c_{n+1} they pass through.
struct Run {
  int start = 0;
  std::vector<std::size_t> steps;
  std::vector<Config> configs;
};

// BudgetExhausted when the search is cut while unexplored descriptions remain.
bool s_accepts_string(const SAutomaton& m, const NativeStorage& s, const Word& w, const AcceptOptions& opt = {});
std::optional<Run> s_find_run(const SAutomaton& m, const NativeStorage& s, const Word& w,
                              const AcceptOptions& opt = {});
// Every accepting run with at most max_len steps (any input).
std::vector<Run> accepting_runs(const SAutomaton& m, const NativeStorage& s, int max_len,
                                std::size_t max_runs = 100000);
// Input consumed by a run.
Word run_input(const SAutomaton& m, const Run& r);
// InvalidRun unless r is an accepting run of m on s.
void check_run(const SAutomaton& m, const NativeStorage& s, const Run& r);

// B(S,g): the instruction string carried by a string-like graph, if any.
std::optional<std::vector<std::string>> graph_behaviour(const MsoStorage& s, const StringLikeView& v);
struct GraphAcceptance {
  bool accepted = false;
  std::optional<std::vector<std::string>> behaviour;
};
GraphAcceptance s_accepts_graph(const SAutomaton& m, const MsoStorage& s, const Graph& g);

// Closed formula defining G[S,A].
Formula stringlike_formula(const MsoStorage& s, const LabelSet& A);

// The string-like graph of a run: rendered configurations, the backend's
// intermediate edges and Ae-bicliques.
Graph build_witness_graph(const SAutomaton& m, const NativeStorage& s, const Run& r);

enum class Combine { Concat, Star };
// Glues automata through e-transitions firing the reset chi.
SAutomaton reset_combine(Combine op, const SAutomaton& m1, const SAutomaton* m2, const std::string& chi);
SAutomaton reset_concat(const SAutomaton& m1, const SAutomaton& m2, const std::string& chi);
SAutomaton reset_star(const SAutomaton& m, const std::string& chi);

// h_e: erases e.
Word erase_e(const Word& w);

}  // namespace msoga
