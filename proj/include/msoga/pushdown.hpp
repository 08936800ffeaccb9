#pragma once

#include <string>
#include <utility>
#include <vector>

#include "msoga/storage.hpp"

namespace msoga {

namespace pushdown {
inline const std::vector<Label> kOmega = {"alpha", "beta", "gamma"};
inline const Label kBottom = "gamma";

struct Cell {
  Label omega;
  Config inner;
};
// "(gamma c)(alpha c')": one parenthesised cell per level, top last.
std::vector<Cell> parse(const Config& c);
Config format(const std::vector<Cell>& cells);

// Level-k edge labels: plain at level 1, suffixed with k above it.
Label omega_label(const Label& w, int level);
Label d_label(int level);

std::vector<std::string> instruction_names(const std::vector<std::string>& inner);
}  // namespace pushdown

// P(S).  Instructions top(w), pop, push(w,theta).
NativePtr pushdown_native(NativePtr inner, int level = 1);
// The MSO storage type for P(S) over (Sigma, Gamma + Omega + {d}).
// AlphabetClash when the level's Omega or d labels occur in S.
MsoStorage pushdown_mso(const MsoStorage& inner, int level = 1);

inline constexpr int kMaxPushdownDepth = 3;
// P^n over TRIV; DepthLimit past kMaxPushdownDepth.
std::pair<NativePtr, MsoStorage> iterate_pushdown(int n);

}  // namespace msoga
