#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "msoga/graph.hpp"

namespace msoga {

// Symbols are strings; tuple symbols join their components with '/'.
using Symbol = Label;
inline constexpr char kTupleSep = '/';
Symbol tup(const std::vector<std::string>& parts);
std::vector<std::string> untup(const Symbol& s);

struct NFA {
  std::set<Symbol> alphabet;
  std::vector<std::string> states;  // names, index = state id
  std::set<int> initial, final;
  std::set<std::tuple<int, Symbol, int>> trans;

  int add_state(const std::string& name, bool is_initial = false, bool is_final = false);
  void add(int p, const Symbol& a, int q);
  int state(const std::string& name) const;  // -1 if absent
  std::size_t size() const { return states.size(); }
};

inline constexpr std::uint64_t kDeterminizeBudget = std::uint64_t(1) << 14;

// UnknownSymbol when w leaves the alphabet.
bool nfa_accepts(const NFA& n, const Word& w);

NFA nfa_union(const NFA& a, const NFA& b);      // AlphabetMismatch unless equal alphabets
NFA nfa_intersect(const NFA& a, const NFA& b);  // product, reachable part only
// Subset construction; the result is complete.  StateBlowup past the budget.
NFA determinize(const NFA& n, std::uint64_t budget = kDeterminizeBudget);
NFA nfa_complement(const NFA& n, std::uint64_t budget = kDeterminizeBudget);
// Drops tuple position i from every symbol.
NFA nfa_project(const NFA& n, std::size_t i);
// Symbols absent from `f` are kept.
NFA nfa_rename(const NFA& n, const std::map<Symbol, Symbol>& f);
// Same language over a larger alphabet.
NFA with_alphabet(const NFA& n, const std::set<Symbol>& alphabet);
// Removes states that are not both reachable and co-reachable (keeps one
// state when the language is empty).
NFA trim(const NFA& n);
bool nfa_empty(const NFA& n);

NFA nfa_universal(const std::set<Symbol>& alphabet);
NFA nfa_empty_language(const std::set<Symbol>& alphabet);
// Accepts exactly w.
NFA nfa_word(const std::set<Symbol>& alphabet, const Word& w);

enum class NfaOp { Union, Intersect, Complement, Project, Rename };
// Dispatcher over the operations above.  `index` is the projected position,
// `rename` the symbol map.
NFA nfa_combine(NfaOp op, const std::vector<NFA>& inputs, std::size_t index = 0,
                const std::map<Symbol, Symbol>& rename = {});

// Every word over `alphabet` of length <= n, shortest first.
std::vector<Word> all_words(const std::vector<Symbol>& alphabet, int n);

}  // namespace msoga
