#pragma once

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "msoga/eval.hpp"
#include "msoga/formula.hpp"

namespace msoga {

struct MsoTransducer {
  LabelSet sigma, gamma;
  std::vector<std::string> params;  // node-set parameters
  Formula chi;
  std::vector<std::string> dups;  // D
  // psi_(sigma, d)(x) and phi_(gamma, d, d')(x, x'); absent entries are false
  std::map<std::pair<Label, std::string>, Formula> psi;
  std::map<std::tuple<Label, std::string, std::string>, Formula> phi;
  std::string x = "x", x2 = "x'";

  Formula node_formula(const Label& s, const std::string& d) const;
  Formula edge_formula(const Label& g, const std::string& d, const std::string& d2) const;
};

// D nonempty, formulas free only in the parameters and x / x'.
void validate(const MsoTransducer& t);

struct Transduced {
  Graph out;
  // output node -> (duplicate name, origin node)
  std::map<int, std::pair<std::string, int>> origin;
};
// T(g, rho): NotInDomain unless (g, rho) |= chi, EmptyOutput when no node survives.
// Node (d_i, u) gets id i * max_id(g) + u.  (v, gamma, v) edges are never created.
Transduced apply_with_origins(const MsoTransducer& t, const Graph& g, const Valuation& rho);
Graph apply(const MsoTransducer& t, const Graph& g, const Valuation& rho);

// h_(g, rho): g, T(g, rho), the nu-biclique and a d-edge from u to (d, u).
Graph origin_pair(const MsoTransducer& t, const Graph& g, const Valuation& rho);

// Closed formula over (Sigma, Gamma + D + nu) whose models are the graphs
// h_(g, rho).  AlphabetClash when D meets Gamma or nu.
Formula expressibility_formula(const MsoTransducer& t);

// The inverse relation: every nu-edge reversed.
Formula invert_relation(const Formula& phi);

// D = {d}, chi = true, psi_(s,d) = lab_s(x), phi_(g,d,d) = edge_g(x, x').
MsoTransducer copy_transducer(const LabelSet& sigma, const LabelSet& gamma);
// (ed_gr(w), ed_gr(empty)): keeps the first node only.
MsoTransducer collapse_transducer(const LabelSet& gamma);

}  // namespace msoga
