#pragma once

#include <functional>
#include <initializer_list>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "msoga/graph.hpp"

namespace msoga {

enum class Op {
  True,
  False,
  Lab,    // lab_sym(x)
  Edge,   // edge_sym(x, y)
  In,     // x in X
  Eq,     // x = y
  Not,
  Or,
  And,
  Implies,
  Iff,
  Ex1,
  Ex2,
  All1,
  All2,
  Macro,
  Next,      // next(theta, x, y), two-level logic only
  MemberEq,  // x in X up to eq over Ae, two-level logic only
};

// Macros evaluated natively; desugar() yields their defining expansion.
enum class MacroKind {
  Path,    // path_L(x, y)
  String,  // string_L, or string_{L,eq} when eq_mode
  EqNb,    // eq_L(x, y): same L-neighbours
};

struct Node;
using Formula = std::shared_ptr<const Node>;

struct Node {
  Op op;
  std::string sym;        // label or instruction name
  std::string v1, v2;     // variables (In: v1 first-order, v2 second-order)
  std::vector<Formula> kids;
  MacroKind macro{};
  LabelSet labels;        // macro label set
  bool eq_mode = false;   // String: compare with eq_L instead of =
  std::vector<std::string> domains;  // relativization sets, innermost first
};

enum class VarKind { First, Second };
struct Var {
  std::string name;
  VarKind kind;
  friend auto operator<=>(const Var&, const Var&) = default;
};

namespace f {
Formula tt();
Formula ff();
Formula lab(const Label& s, const std::string& x);
Formula lab_any(const LabelSet& s, const std::string& x);  // disjunction
Formula edge(const Label& s, const std::string& x, const std::string& y);
Formula edge_any(const LabelSet& s, const std::string& x, const std::string& y);
Formula in(const std::string& x, const std::string& X);
Formula eq(const std::string& x, const std::string& y);
Formula neg(Formula a);
Formula lor(Formula a, Formula b);
Formula land(Formula a, Formula b);
Formula lor(std::vector<Formula> xs);   // false when empty
Formula land(std::vector<Formula> xs);  // true when empty
Formula implies(Formula a, Formula b);
Formula iff(Formula a, Formula b);
Formula ex1(const std::string& x, Formula a);
Formula ex2(const std::string& X, Formula a);
Formula all1(const std::string& x, Formula a);
Formula all2(const std::string& X, Formula a);
Formula ex1(std::initializer_list<std::string> xs, Formula a);
Formula all1(std::initializer_list<std::string> xs, Formula a);
Formula subset(const std::string& X, const std::string& Y);
Formula path(const LabelSet& l, const std::string& x, const std::string& y);
Formula string(const LabelSet& l);
Formula string_eq(const LabelSet& l);  // string_{L,eq}
Formula eqnb(const LabelSet& l, const std::string& x, const std::string& y);
Formula next(const std::string& theta, const std::string& x, const std::string& y);
Formula member_eq(const std::string& x, const std::string& X);
}  // namespace f

// Named macro builder.  Recognised names: edge, closed, path, string,
// string-eq, eq, ec, first, last, first-set, union, exclusive.
Formula build_macro(const std::string& name, const std::vector<LabelSet>& labels,
                    const std::vector<std::string>& vars);

// Expansion helpers (plain formulas).
Formula closed(const LabelSet& l, const std::string& X);
Formula ec(const LabelSet& l, const std::string& x, const std::string& X);
Formula first_node(const LabelSet& l, const std::string& x);
Formula last_node(const LabelSet& l, const std::string& x);
Formula first_set(const LabelSet& l, const std::string& X);
Formula union_of(const std::string& X, const std::string& Y, const std::string& Z);
Formula exclusive(const LabelSet& l, const std::string& x, const std::string& y);

std::set<Var> free_vars(const Formula& a);
std::set<std::string> all_var_names(const Formula& a);
std::set<std::string> edge_symbols(const Formula& a);
std::set<std::string> lab_symbols(const Formula& a);
bool is_closed(const Formula& a);
// Throws IllKinded on first/second-order misuse.
void check_kinds(const Formula& a);

Formula relativize(const Formula& a, const std::string& Y);
// Expands sugar and macros into Lab/Edge/In/Not/Or/Ex1/Ex2/True/False.
Formula desugar(const Formula& a);
// Identity up to consistent renaming of bound variables.
bool alpha_equal(const Formula& a, const Formula& b);
// Quantifier nesting depth plus connective depth.
int depth(const Formula& a);
std::size_t formula_size(const Formula& a);

// Generic bottom-up atom rewrite.  `fn` returns nullptr to keep an atom.
Formula map_atoms(const Formula& a, const std::function<Formula(const Formula&)>& fn);
// Reverses the direction of every edge atom labelled in `l`.
Formula reverse_edges(const Formula& a, const LabelSet& l);
// Renames free occurrences of variable `from` to `to`.
Formula rename_free(const Formula& a, const std::string& from, const std::string& to);

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid);

}  // namespace msoga
