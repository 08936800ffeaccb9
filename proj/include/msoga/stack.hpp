#pragma once

#include <string>
#include <vector>

#include "msoga/storage.hpp"

namespace msoga {

namespace stack {
inline const std::vector<Label> kOmega = {"alpha", "beta", "gamma"};
inline const Label kD = "d";
inline Label bar(const Label& w) { return w + "'"; }
bool is_barred(const Label& l);
Label unbar(const Label& l);
// "gamma alpha'" <-> {"gamma", "alpha'"}; ValidationError-free parse, checks C = Omega* bar(Omega) Omega*.
Word parse(const Config& c);
Config format(const Word& w);
bool valid(const Word& w);
// All configurations of length 1..n.
std::vector<Word> all_configs(int n);
// push(alpha), pop(alpha), moveup(alpha), movedown(alpha), ... for each symbol.
std::vector<std::string> instruction_names();
}  // namespace stack

NativePtr stack_native();
MsoStorage stack_mso();

// The pair graph realizing one native step.  NotASuccessor otherwise.
Graph stack_witness_pair(const Word& c, const std::string& theta, const Word& next);

}  // namespace msoga
