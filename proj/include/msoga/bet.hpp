#pragma once

#include <cstdint>

#include "msoga/formula.hpp"
#include "msoga/nfa.hpp"

namespace msoga {

// Closed formula over ({*}, A) to an NFA over A with
// nfa_accepts(N, w) = eval(ed_gr(w), {}, phi).  Macros are expanded first;
// next / member-eq atoms raise UnknownSymbol, free variables UnboundVariable.
// StateBlowup when an intermediate automaton exceeds `budget` states.
NFA mso_to_nfa(const Formula& phi, const LabelSet& A, std::uint64_t budget = kDeterminizeBudget);

// One existential set per state: a partition into states, initial states at
// the first node, final states at the last node, and a transition per edge.
Formula nfa_to_mso(const NFA& n);

}  // namespace msoga
