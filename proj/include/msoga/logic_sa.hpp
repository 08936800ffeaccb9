#pragma once

#include "msoga/eval.hpp"
#include "msoga/sautomaton.hpp"
#include "msoga/storage.hpp"

namespace msoga {

// Two-level formulas share the Formula AST.  Their atoms are edge_alpha(x, y)
// with alpha in Ae, member_eq(x, X) and next(theta, x, y); the connectives and
// quantifiers are the usual ones.

LabelSet ae_of(const LabelSet& A);

// UnknownInstruction for a next atom naming no instruction of s, UnknownSymbol
// for atoms outside the two-level logic (labels, =, plain membership, macros)
// and for edge labels outside Ae.
void validate_sa(const Formula& phi, const MsoStorage& s, const LabelSet& A);

// next(theta, x, y) model-checks the pair of consecutive components holding
// x and y, once per (pair, theta).
bool eval_sa(const MsoStorage& s, const LabelSet& A, const StringLikeView& g, const Valuation& rho,
             const Formula& phi, const EvalOptions& opt = {});
// NotStringLike unless g is in G[S, A].
bool eval_sa(const MsoStorage& s, const LabelSet& A, const Graph& g, const Formula& phi);

// forall x, y. AND_alpha (edge_alpha(x, y) -> OR_theta next(theta, x, y))
Formula beh_formula(const MsoStorage& s, const LabelSet& A);

// Plain formula over (Sigma, Gamma + Ae) with the same models on G[S, A].
Formula embed(const Formula& phi, const MsoStorage& s, const LabelSet& A);

// Formula over ({*}, Ae x Theta) to the two-level logic: edge_(alpha/theta)
// becomes edge_alpha and next(theta), membership becomes member-eq, lab_* is
// true.  x = y becomes "same component".
Formula lift(const Formula& phi);
// The converse rewrite into a formula over ({*}, Ae x Theta).
Formula lower(const Formula& phi, const MsoStorage& s, const LabelSet& A);

// lift(nfa_to_mso(to_word_nfa(m))): with beh, it defines GL(m).
Formula automaton_to_saformula(const SAutomaton& m, const MsoStorage& s);
// An automaton whose graph language is { g | g |= beh and phi }.
SAutomaton saformula_to_automaton(const Formula& phi, const MsoStorage& s, const LabelSet& A,
                                  std::uint64_t budget = kDeterminizeBudget);

}  // namespace msoga
