#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "msoga/io.hpp"
#include "msoga/storage.hpp"

namespace msoga::cli {

// Exit codes.
inline constexpr int kTrue = 0, kFalse = 1, kError = 2, kBudget = 3;

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Built-in native storage by name: TRIV, Stack, P(<name>), <name>+reset, <name>+id.
// Returns nullptr for unknown names.
NativePtr native_by_name(const std::string& name);

// What accept-string runs on: the named native implementation when the file
// has one, otherwise successor search over configurations with at most
// max_nodes nodes.
NativePtr native_for(const io::StorageFile& f, int max_nodes);

// "011001" splits per character; text with spaces splits on whitespace.
Word parse_word(const std::string& s);

}  // namespace msoga::cli
