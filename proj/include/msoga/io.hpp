#pragma once

#include <string>
#include <variant>
#include <vector>

#include "msoga/formula.hpp"
#include "msoga/graph.hpp"
#include "msoga/nfa.hpp"
#include "msoga/sautomaton.hpp"
#include "msoga/storage.hpp"
#include "msoga/transducer.hpp"

namespace msoga::io {

// A storage description file.  `native` names a built-in implementation
// (TRIV, Stack, P(...)) the CLI may run strings on; empty when none.
struct StorageFile {
  MsoStorage storage;
  std::string native;
};

enum class Kind { Graph, Formula, SaFormula, Nfa, Automaton, Storage, Transducer };
Kind parse_kind(const std::string& s);

using Value = std::variant<Graph, Formula, NFA, SAutomaton, StorageFile, MsoTransducer>;

std::string read_file(const std::string& path);
Value parse_formats(const std::string& path, Kind kind);

// All parsers throw ParseError with line and column.  Writers emit the
// canonical form: sorted nodes, edges and transitions, one formula per line.
Graph parse_graph(const std::string& text);
std::string write_graph(const Graph& g);

// Formulas as s-expressions; next and member-eq are always accepted.
Formula parse_formula(const std::string& text);
std::string write_formula(const Formula& a);

NFA parse_nfa(const std::string& text);
std::string write_nfa(const NFA& n);

SAutomaton parse_automaton(const std::string& text);
std::string write_automaton(const SAutomaton& m);

StorageFile parse_storage(const std::string& text);
std::string write_storage(const StorageFile& s);
inline std::string write_storage(const MsoStorage& s) { return write_storage(StorageFile{s, ""}); }

MsoTransducer parse_transducer(const std::string& text);
std::string write_transducer(const MsoTransducer& t);

// Same node kind, symbols, variables and children all the way down.
bool formula_equal(const Formula& a, const Formula& b);

// JSON mirrors the canonical text form.
std::string graph_json(const Graph& g);
std::string formula_json(const Formula& a);
std::string nfa_json(const NFA& n);
std::string automaton_json(const SAutomaton& m);
std::string storage_json(const StorageFile& s);
std::string transducer_json(const MsoTransducer& t);

// DOT.  Graphs are drawn with clusters; a label whose edges between clusters
// are all full bicliques is drawn as one edge per cluster pair.
std::string graph_dot(const Graph& g);
std::string nfa_dot(const NFA& n);
std::string automaton_dot(const SAutomaton& m);

// Quote an atom when it would not survive tokenizing.
std::string quote(const std::string& s);

}  // namespace msoga::io
