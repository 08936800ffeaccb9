#include "msoga/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "msoga/error.hpp"

namespace msoga::io {

using nlohmann::json;

namespace {

// ---- tokens ----

struct Tok {
  std::string s;
  int line, col;
};

struct Line {
  int no;
  std::string text;
};

std::vector<Line> split_lines(const std::string& text, int first = 1) {
  std::vector<Line> out;
  std::size_t i = 0;
  int no = first;
  while (i <= text.size()) {
    std::size_t j = text.find('\n', i);
    if (j == std::string::npos) j = text.size();
    std::string l = text.substr(i, j - i);
    if (!l.empty() && l.back() == '\r') l.pop_back();
    out.push_back({no++, l});
    i = j + 1;
  }
  return out;
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

// Whitespace-separated tokens; quotes may appear inside a token, # starts a comment.
std::vector<Tok> line_tokens(const Line& l) {
  std::vector<Tok> out;
  const std::string& s = l.text;
  std::size_t i = 0;
  while (i < s.size()) {
    if (is_space(s[i])) {
      ++i;
      continue;
    }
    if (s[i] == '#') break;
    Tok t{"", l.no, int(i) + 1};
    while (i < s.size() && !is_space(s[i]) && s[i] != '#') {
      if (s[i] == '"') {
        std::size_t start = i++;
        while (true) {
          if (i >= s.size()) throw ParseError(l.no, int(start) + 1, "unterminated string");
          if (s[i] == '"') break;
          if (s[i] == '\\' && i + 1 < s.size()) ++i;
          t.s += s[i++];
        }
        ++i;
      } else {
        t.s += s[i++];
      }
    }
    out.push_back(std::move(t));
  }
  return out;
}

int to_int(const Tok& t) {
  int v = 0;
  auto r = std::from_chars(t.s.data(), t.s.data() + t.s.size(), v);
  if (r.ec != std::errc() || r.ptr != t.s.data() + t.s.size())
    throw ParseError(t.line, t.col, "expected an integer, got '" + t.s + "'");
  return v;
}

[[noreturn]] void fail(const Tok& t, const std::string& msg) { throw ParseError(t.line, t.col, msg); }

Tok eof_tok(const std::vector<Line>& ls) {
  if (ls.empty()) return {"", 1, 1};
  return {"", ls.back().no, int(ls.back().text.size()) + 1};
}

// ---- s-expressions ----

struct SExp {
  enum Type { Atom, List, Set } type = Atom;
  std::string atom;
  std::vector<SExp> items;
  int line = 0, col = 0;
};

SExp atom(const std::string& s) {
  SExp e;
  e.atom = s;
  return e;
}

SExp list(std::vector<SExp> xs) {
  SExp e;
  e.type = SExp::List;
  e.items = std::move(xs);
  return e;
}

SExp set(const LabelSet& l) {
  SExp e;
  e.type = SExp::Set;
  for (const auto& x : l) e.items.push_back(atom(x));
  return e;
}

bool atom_char(char c) { return !is_space(c) && c != '(' && c != ')' && c != '{' && c != '}' && c != '"' && c != '#'; }

bool word_char(char c) { return !is_space(c) && c != '"' && c != '#'; }

std::string escaped(const std::string& s) {
  std::string r = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') r += '\\';
    r += c;
  }
  return r + "\"";
}

// quoting for the line-oriented formats
std::string word(const std::string& s) {
  if (!s.empty() && std::all_of(s.begin(), s.end(), word_char)) return s;
  return escaped(s);
}

class Reader {
 public:
  Reader(const std::string& text, int line) : s_(text), line_(line) {}

  SExp read_one() {
    skip();
    if (i_ >= s_.size()) throw ParseError(line_, col_, "expected a formula");
    SExp e = read();
    skip();
    if (i_ < s_.size()) throw ParseError(line_, col_, "unexpected text after the formula");
    return e;
  }

 private:
  const std::string& s_;
  std::size_t i_ = 0;
  int line_, col_ = 1;

  void adv() {
    if (s_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++i_;
  }

  void skip() {
    while (i_ < s_.size()) {
      if (is_space(s_[i_])) {
        adv();
      } else if (s_[i_] == '#') {
        while (i_ < s_.size() && s_[i_] != '\n') adv();
      } else {
        break;
      }
    }
  }

  SExp read() {
    skip();
    int l = line_, c = col_;
    if (i_ >= s_.size()) throw ParseError(l, c, "unexpected end of input");
    char ch = s_[i_];
    SExp e;
    if (ch == '(' || ch == '{') {
      char close = ch == '(' ? ')' : '}';
      e.type = ch == '(' ? SExp::List : SExp::Set;
      adv();
      while (true) {
        skip();
        if (i_ >= s_.size()) throw ParseError(l, c, std::string("missing '") + close + "'");
        if (s_[i_] == close) {
          adv();
          break;
        }
        if (s_[i_] == ')' || s_[i_] == '}') throw ParseError(line_, col_, std::string("unexpected '") + s_[i_] + "'");
        SExp k = read();
        if (e.type == SExp::Set && k.type != SExp::Atom) throw ParseError(k.line, k.col, "label sets hold symbols only");
        e.items.push_back(std::move(k));
      }
    } else if (ch == ')' || ch == '}') {
      throw ParseError(l, c, std::string("unexpected '") + ch + "'");
    } else if (ch == '"') {
      adv();
      while (true) {
        if (i_ >= s_.size()) throw ParseError(l, c, "unterminated string");
        if (s_[i_] == '"') break;
        if (s_[i_] == '\\' && i_ + 1 < s_.size()) adv();
        e.atom += s_[i_];
        adv();
      }
      adv();
    } else {
      while (i_ < s_.size() && atom_char(s_[i_])) {
        e.atom += s_[i_];
        adv();
      }
    }
    e.line = l;
    e.col = c;
    return e;
  }
};

std::string sexp_text(const SExp& e) {
  if (e.type == SExp::Atom) return quote(e.atom);
  std::string r(1, e.type == SExp::List ? '(' : '{');
  for (std::size_t i = 0; i < e.items.size(); ++i) {
    if (i) r += ' ';
    r += sexp_text(e.items[i]);
  }
  r += e.type == SExp::List ? ')' : '}';
  return r;
}

json sexp_json(const SExp& e) {
  if (e.type == SExp::Atom) return e.atom;
  json a = json::array();
  for (const auto& k : e.items) a.push_back(sexp_json(k));
  if (e.type == SExp::Set) return json{{"labels", a}};
  return a;
}

// ---- formulas ----

SExp to_sexp(const Formula& a) {
  auto q = [](const char* h, const std::string& v, const Formula& k) { return list({atom(h), atom(v), to_sexp(k)}); };
  switch (a->op) {
    case Op::True: return atom("true");
    case Op::False: return atom("false");
    case Op::Lab: return list({atom("lab"), atom(a->sym), atom(a->v1)});
    case Op::Edge: return list({atom("edge"), atom(a->sym), atom(a->v1), atom(a->v2)});
    case Op::In: return list({atom("in"), atom(a->v1), atom(a->v2)});
    case Op::Eq: return list({atom("eq"), atom(a->v1), atom(a->v2)});
    case Op::Not: return list({atom("not"), to_sexp(a->kids[0])});
    case Op::Or: case Op::And: {
      std::vector<SExp> xs{atom(a->op == Op::Or ? "or" : "and")};
      Formula cur = a;
      while (cur->op == a->op) {
        xs.push_back(to_sexp(cur->kids[0]));
        cur = cur->kids[1];
      }
      xs.push_back(to_sexp(cur));
      return list(std::move(xs));
    }
    case Op::Implies: return list({atom("implies"), to_sexp(a->kids[0]), to_sexp(a->kids[1])});
    case Op::Iff: return list({atom("iff"), to_sexp(a->kids[0]), to_sexp(a->kids[1])});
    case Op::Ex1: return q("exists1", a->v1, a->kids[0]);
    case Op::Ex2: return q("exists2", a->v1, a->kids[0]);
    case Op::All1: return q("forall1", a->v1, a->kids[0]);
    case Op::All2: return q("forall2", a->v1, a->kids[0]);
    case Op::Macro: {
      SExp m;
      switch (a->macro) {
        case MacroKind::Path: m = list({atom("path"), set(a->labels), atom(a->v1), atom(a->v2)}); break;
        case MacroKind::String: m = list({atom(a->eq_mode ? "string-eq" : "string"), set(a->labels)}); break;
        case MacroKind::EqNb: m = list({atom("eq"), set(a->labels), atom(a->v1), atom(a->v2)}); break;
      }
      for (const auto& d : a->domains) m = list({atom("within"), atom(d), m});
      return m;
    }
    case Op::Next: return list({atom("next"), atom(a->sym), atom(a->v1), atom(a->v2)});
    case Op::MemberEq: return list({atom("member-eq"), atom(a->v1), atom(a->v2)});
  }
  return atom("true");
}

LabelSet labels_of(const SExp& e) {
  LabelSet r;
  for (const auto& k : e.items) r.insert(k.atom);
  return r;
}

Formula from_sexp(const SExp& e) {
  auto err = [](const SExp& at, const std::string& msg) -> ParseError { return ParseError(at.line, at.col, msg); };
  if (e.type == SExp::Atom) {
    if (e.atom == "true") return f::tt();
    if (e.atom == "false") return f::ff();
    throw err(e, "expected a formula, got '" + e.atom + "'");
  }
  if (e.type == SExp::Set) throw err(e, "expected a formula, got a label set");
  if (e.items.empty() || e.items[0].type != SExp::Atom) throw err(e, "expected an operator");
  const std::string& h = e.items[0].atom;
  std::vector<SExp> args(e.items.begin() + 1, e.items.end());
  auto atoms = [&](std::size_t n) {
    if (args.size() != n) throw err(e, "'" + h + "' takes " + std::to_string(n) + " arguments");
    std::vector<std::string> r;
    for (const auto& a : args) {
      if (a.type != SExp::Atom) throw err(a, "expected a symbol or variable");
      r.push_back(a.atom);
    }
    return r;
  };
  bool leading_set = !args.empty() && args[0].type == SExp::Set;
  if ((h == "true" || h == "false") && args.empty()) return h == "true" ? f::tt() : f::ff();
  if (h == "lab") {
    auto v = atoms(2);
    return f::lab(v[0], v[1]);
  }
  if (h == "edge" && !leading_set) {
    auto v = atoms(3);
    return f::edge(v[0], v[1], v[2]);
  }
  if (h == "in") {
    auto v = atoms(2);
    return f::in(v[0], v[1]);
  }
  if (h == "eq" && !leading_set) {
    auto v = atoms(2);
    return f::eq(v[0], v[1]);
  }
  if (h == "next") {
    auto v = atoms(3);
    return f::next(v[0], v[1], v[2]);
  }
  if (h == "member-eq") {
    auto v = atoms(2);
    return f::member_eq(v[0], v[1]);
  }
  if (h == "not") {
    if (args.size() != 1) throw err(e, "'not' takes one argument");
    return f::neg(from_sexp(args[0]));
  }
  if (h == "or" || h == "and") {
    std::vector<Formula> ks;
    for (const auto& a : args) ks.push_back(from_sexp(a));
    return h == "or" ? f::lor(std::move(ks)) : f::land(std::move(ks));
  }
  if (h == "implies" || h == "iff") {
    if (args.size() != 2) throw err(e, "'" + h + "' takes two arguments");
    auto a = from_sexp(args[0]), b = from_sexp(args[1]);
    return h == "implies" ? f::implies(a, b) : f::iff(a, b);
  }
  if (h == "exists1" || h == "exists2" || h == "forall1" || h == "forall2") {
    if (args.size() < 2) throw err(e, "'" + h + "' needs a variable and a body");
    Formula body = from_sexp(args.back());
    for (std::size_t i = args.size() - 1; i-- > 0;) {
      if (args[i].type != SExp::Atom) throw err(args[i], "expected a variable");
      const auto& v = args[i].atom;
      if (h == "exists1") body = f::ex1(v, body);
      else if (h == "exists2") body = f::ex2(v, body);
      else if (h == "forall1") body = f::all1(v, body);
      else body = f::all2(v, body);
    }
    return body;
  }
  if (h == "within") {
    if (args.size() != 2 || args[0].type != SExp::Atom) throw err(e, "'within' takes a set variable and a formula");
    Formula k = from_sexp(args[1]);
    if (k->op == Op::Macro) {
      Node n = *k;
      n.domains.push_back(args[0].atom);
      return std::make_shared<const Node>(std::move(n));
    }
    try {
      return relativize(k, args[0].atom);
    } catch (const Error& x) {
      throw err(e, x.what());
    }
  }
  std::vector<LabelSet> sets;
  std::vector<std::string> vars;
  for (const auto& a : args) {
    if (a.type == SExp::Set) sets.push_back(labels_of(a));
    else if (a.type == SExp::Atom) vars.push_back(a.atom);
    else throw err(a, "macro arguments are label sets and variables");
  }
  if (h == "path" && sets.size() == 1 && vars.size() == 2) return f::path(sets[0], vars[0], vars[1]);
  if (h == "string" && sets.size() == 1 && vars.empty()) return f::string(sets[0]);
  if (h == "string-eq" && sets.size() == 1 && vars.empty()) return f::string_eq(sets[0]);
  if (h == "eq" && sets.size() == 1 && vars.size() == 2) return f::eqnb(sets[0], vars[0], vars[1]);
  try {
    return build_macro(h, sets, vars);
  } catch (const Error& x) {
    throw err(e, x.what());
  }
}

Formula formula_from(const std::string& text, int line) { return from_sexp(Reader(text, line).read_one()); }

// ---- blocks ----

struct Block {
  Tok head;
  std::vector<Line> body;
};

bool is_end(const Line& l) {
  auto t = line_tokens(l);
  return t.size() == 1 && t[0].s == "end";
}

// Lines after ls[i] up to the matching `end`; i is left on the `end` line.
Block read_block(const std::vector<Line>& ls, std::size_t& i, const Tok& head) {
  Block b{head, {}};
  for (++i; i < ls.size(); ++i) {
    if (is_end(ls[i])) return b;
    b.body.push_back(ls[i]);
  }
  fail(head, "block '" + head.s + "' has no 'end'");
}

std::string join_lines(const std::vector<Line>& ls) {
  std::string r;
  for (std::size_t i = 0; i < ls.size(); ++i) {
    if (i) r += '\n';
    r += ls[i].text;
  }
  return r;
}

Formula block_formula(const Block& b) {
  if (b.body.empty()) fail(b.head, "empty formula block");
  return formula_from(join_lines(b.body), b.body[0].no);
}

Graph graph_from_lines(const std::vector<Line>& ls, const Tok& where) {
  std::vector<std::pair<int, Label>> nodes;
  std::map<int, Tok> node_at;
  std::vector<std::pair<Edge, Tok>> edges;
  std::set<Edge> seen;
  auto label_of = [](const Tok& t) {
    if (t.s.rfind("label=", 0) != 0) fail(t, "expected label=<symbol>");
    std::string l = t.s.substr(6);
    if (l.empty()) fail(t, "empty label");
    return l;
  };
  for (const auto& l : ls) {
    auto t = line_tokens(l);
    if (t.empty()) continue;
    if (t[0].s == "node") {
      if (t.size() != 3) fail(t[0], "expected: node <id> label=<symbol>");
      int id = to_int(t[1]);
      if (node_at.count(id)) fail(t[1], "node " + t[1].s + " declared twice");
      node_at.emplace(id, t[1]);
      nodes.push_back({id, label_of(t[2])});
    } else if (t[0].s == "edge") {
      if (t.size() != 5 || t[2].s != "->") fail(t[0], "expected: edge <id> -> <id> label=<symbol>");
      Edge e{to_int(t[1]), label_of(t[4]), to_int(t[3])};
      if (e.src == e.dst) fail(t[1], "loop at node " + t[1].s);
      if (!seen.insert(e).second) fail(t[0], "duplicate edge");
      edges.push_back({e, t[0]});
    } else {
      fail(t[0], "expected 'node' or 'edge', got '" + t[0].s + "'");
    }
  }
  if (nodes.empty()) fail(where, "graph has no nodes");
  std::vector<Edge> es;
  for (const auto& [e, t] : edges) {
    if (!node_at.count(e.src)) fail(t, "unknown node " + std::to_string(e.src));
    if (!node_at.count(e.dst)) fail(t, "unknown node " + std::to_string(e.dst));
    es.push_back(e);
  }
  return Graph(std::move(nodes), std::move(es));
}

std::string labels_line(const std::string& key, const LabelSet& l) {
  std::string r = key;
  for (const auto& x : l) r += " " + word(x);
  return r + "\n";
}

LabelSet rest_labels(const std::vector<Tok>& t) {
  LabelSet r;
  for (std::size_t i = 1; i < t.size(); ++i) r.insert(t[i].s);
  return r;
}

json graph_j(const Graph& g) {
  json ns = json::array(), es = json::array();
  for (int v : g.nodes()) ns.push_back({{"id", v}, {"label", g.label(v)}});
  auto sorted = g.edges();
  std::sort(sorted.begin(), sorted.end());
  for (const auto& e : sorted) es.push_back({{"src", e.src}, {"label", e.label}, {"dst", e.dst}});
  return {{"nodes", ns}, {"edges", es}};
}

json formula_j(const Formula& a) { return sexp_json(to_sexp(a)); }

std::string dot_id(const std::string& s) {
  std::string r = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') r += '\\';
    r += c;
  }
  return r + "\"";
}

// state lines shared by the two automaton formats
template <class M>
void read_states(M& m, const std::vector<Line>& ls) {
  for (const auto& l : ls) {
    auto t = line_tokens(l);
    if (t.empty() || t[0].s != "state") continue;
    if (t.size() < 2) fail(t[0], "expected: state <q> [initial] [final]");
    if (m.state(t[1].s) >= 0) fail(t[1], "state '" + t[1].s + "' declared twice");
    bool ini = false, fin = false;
    for (std::size_t i = 2; i < t.size(); ++i) {
      if (t[i].s == "initial") ini = true;
      else if (t[i].s == "final") fin = true;
      else fail(t[i], "expected 'initial' or 'final'");
    }
    m.add_state(t[1].s, ini, fin);
  }
}

template <class M>
int state_ref(const M& m, const Tok& t) {
  int q = m.state(t.s);
  if (q < 0) fail(t, "unknown state '" + t.s + "'");
  return q;
}

template <class M>
std::string state_lines(const M& m) {
  std::string r;
  for (std::size_t q = 0; q < m.states.size(); ++q) {
    r += "state " + word(m.states[q]);
    if (m.initial.count(int(q))) r += " initial";
    if (m.final.count(int(q))) r += " final";
    r += "\n";
  }
  return r;
}

template <class M>
json states_j(const M& m) {
  json a = json::array();
  for (std::size_t q = 0; q < m.states.size(); ++q)
    a.push_back({{"name", m.states[q]}, {"initial", m.initial.count(int(q)) > 0}, {"final", m.final.count(int(q)) > 0}});
  return a;
}

template <class M>
std::string states_dot(const M& m) {
  std::string r = "  rankdir=LR;\n";
  for (std::size_t q = 0; q < m.states.size(); ++q) {
    r += "  " + dot_id(m.states[q]) + " [shape=" + (m.final.count(int(q)) ? "doublecircle" : "circle") + "];\n";
    if (m.initial.count(int(q))) {
      std::string s = dot_id("__start" + std::to_string(q));
      r += "  " + s + " [shape=point];\n  " + s + " -> " + dot_id(m.states[q]) + ";\n";
    }
  }
  return r;
}

}  // namespace

std::string quote(const std::string& s) {
  if (!s.empty() && std::all_of(s.begin(), s.end(), atom_char)) return s;
  return escaped(s);
}

Kind parse_kind(const std::string& s) {
  static const std::map<std::string, Kind> m = {{"graph", Kind::Graph},         {"formula", Kind::Formula},
                                                {"sa-formula", Kind::SaFormula}, {"nfa", Kind::Nfa},
                                                {"automaton", Kind::Automaton},  {"storage", Kind::Storage},
                                                {"transducer", Kind::Transducer}};
  auto it = m.find(s);
  if (it == m.end()) throw Error(ErrorKind::Parse, "unknown file kind '" + s + "'");
  return it->second;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Parse, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Value parse_formats(const std::string& path, Kind kind) {
  std::string text = read_file(path);
  switch (kind) {
    case Kind::Graph: return parse_graph(text);
    case Kind::Formula: case Kind::SaFormula: return parse_formula(text);
    case Kind::Nfa: return parse_nfa(text);
    case Kind::Automaton: return parse_automaton(text);
    case Kind::Storage: return parse_storage(text);
    case Kind::Transducer: return parse_transducer(text);
  }
  throw Error(ErrorKind::Parse, "unknown file kind");
}

// ---- graphs ----

Graph parse_graph(const std::string& text) {
  auto ls = split_lines(text);
  return graph_from_lines(ls, {"", 1, 1});
}

std::string write_graph(const Graph& g) {
  std::string r;
  for (int v : g.nodes()) r += "node " + std::to_string(v) + " label=" + word(g.label(v)) + "\n";
  auto es = g.edges();
  std::sort(es.begin(), es.end());
  for (const auto& e : es)
    r += "edge " + std::to_string(e.src) + " -> " + std::to_string(e.dst) + " label=" + word(e.label) + "\n";
  return r;
}

// ---- formulas ----

Formula parse_formula(const std::string& text) { return formula_from(text, 1); }

std::string write_formula(const Formula& a) { return sexp_text(to_sexp(a)) + "\n"; }

bool formula_equal(const Formula& a, const Formula& b) {
  if (a == b) return true;
  if (a->op != b->op || a->sym != b->sym || a->v1 != b->v1 || a->v2 != b->v2 || a->kids.size() != b->kids.size())
    return false;
  if (a->op == Op::Macro &&
      (a->macro != b->macro || a->labels != b->labels || a->eq_mode != b->eq_mode || a->domains != b->domains))
    return false;
  for (std::size_t i = 0; i < a->kids.size(); ++i)
    if (!formula_equal(a->kids[i], b->kids[i])) return false;
  return true;
}

// ---- automata ----

NFA parse_nfa(const std::string& text) {
  auto ls = split_lines(text);
  NFA n;
  std::optional<LabelSet> alpha;
  read_states(n, ls);
  for (const auto& l : ls) {
    auto t = line_tokens(l);
    if (t.empty() || t[0].s == "state") continue;
    if (t[0].s == "alphabet") {
      alpha = rest_labels(t);
    } else if (t[0].s == "trans") {
      if (t.size() != 4) fail(t[0], "expected: trans <q> <symbol> <q'>");
      int p = state_ref(n, t[1]), q = state_ref(n, t[3]);
      if (alpha && !alpha->count(t[2].s)) fail(t[2], "symbol '" + t[2].s + "' not in the alphabet");
      n.add(p, t[2].s, q);
    } else {
      fail(t[0], "expected 'alphabet', 'state' or 'trans', got '" + t[0].s + "'");
    }
  }
  if (n.states.empty()) fail(eof_tok(ls), "automaton has no states");
  if (alpha) n.alphabet.insert(alpha->begin(), alpha->end());
  return n;
}

std::string write_nfa(const NFA& n) {
  std::string r = labels_line("alphabet", {n.alphabet.begin(), n.alphabet.end()}) + state_lines(n);
  for (const auto& [p, a, q] : n.trans) r += "trans " + word(n.states[p]) + " " + word(a) + " " + word(n.states[q]) + "\n";
  return r;
}

SAutomaton parse_automaton(const std::string& text) {
  auto ls = split_lines(text);
  SAutomaton m;
  std::optional<LabelSet> input;
  read_states(m, ls);
  for (const auto& l : ls) {
    auto t = line_tokens(l);
    if (t.empty() || t[0].s == "state") continue;
    if (t[0].s == "input") {
      input = rest_labels(t);
      if (input->count(kEps)) fail(t[0], "'" + kEps + "' is reserved for the empty input");
    } else if (t[0].s == "storage") {
      if (t.size() != 2) fail(t[0], "expected: storage <name>");
      m.storage = t[1].s;
    } else if (t[0].s == "trans") {
      if (t.size() != 5) fail(t[0], "expected: trans <q> <symbol|e> <instruction> <q'>");
      int p = state_ref(m, t[1]), q = state_ref(m, t[4]);
      if (input && t[2].s != kEps && !input->count(t[2].s)) fail(t[2], "symbol '" + t[2].s + "' not in the input");
      m.add(p, t[2].s, t[3].s, q);
    } else {
      fail(t[0], "expected 'input', 'storage', 'state' or 'trans', got '" + t[0].s + "'");
    }
  }
  if (m.states.empty()) fail(eof_tok(ls), "automaton has no states");
  if (input) m.input.insert(input->begin(), input->end());
  return m;
}

std::string write_automaton(const SAutomaton& m) {
  std::string r = labels_line("input", m.input);
  if (!m.storage.empty()) r += "storage " + word(m.storage) + "\n";
  r += state_lines(m);
  auto ts = m.trans;
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  for (const auto& t : ts)
    r += "trans " + word(m.states[t.from]) + " " + word(t.alpha) + " " + word(t.theta) + " " + word(m.states[t.to]) + "\n";
  return r;
}

// ---- storage ----

StorageFile parse_storage(const std::string& text) {
  auto ls = split_lines(text);
  StorageFile f;
  MsoStorage& s = f.storage;
  bool has_name = false, has_sigma = false, has_gamma = false, has_gin = false;
  Formula phi_c;
  std::set<std::string> names;
  for (std::size_t i = 0; i < ls.size(); ++i) {
    auto t = line_tokens(ls[i]);
    if (t.empty()) continue;
    const std::string& k = t[0].s;
    auto one = [&](const char* what) {
      if (t.size() != 2) fail(t[0], std::string("expected: ") + k + " " + what);
      return t[1].s;
    };
    if (k == "storage") {
      s.name = one("<name>");
      has_name = true;
    } else if (k == "native") {
      f.native = one("<name>");
    } else if (k == "sigma") {
      s.sigma = rest_labels(t);
      has_sigma = true;
    } else if (k == "gamma") {
      s.gamma = rest_labels(t);
      has_gamma = true;
    } else if (k == "delta") {
      s.delta = rest_labels(t);
    } else if (k == "intermediate") {
      s.intermediate = rest_labels(t);
    } else if (k == "exclusive-bound") {
      if (t.size() != 2) fail(t[0], "expected: exclusive-bound <n>");
      s.exclusive_bound = to_int(t[1]);
    } else if (k == "g_in") {
      if (t.size() != 1) fail(t[1], "unexpected text after 'g_in'");
      Block b = read_block(ls, i, t[0]);
      s.g_in = graph_from_lines(b.body, t[0]);
      has_gin = true;
    } else if (k == "phi_c") {
      if (t.size() != 1) fail(t[1], "unexpected text after 'phi_c'");
      phi_c = block_formula(read_block(ls, i, t[0]));
    } else if (k == "instruction") {
      std::string name = one("<name>");
      if (!names.insert(name).second) fail(t[1], "instruction '" + name + "' defined twice");
      s.instructions.push_back({name, block_formula(read_block(ls, i, t[0]))});
    } else {
      fail(t[0], "unexpected '" + k + "'");
    }
  }
  Tok end = eof_tok(ls);
  if (!has_name) fail(end, "missing 'storage <name>'");
  if (!has_sigma) fail(end, "missing 'sigma'");
  if (!has_gamma) fail(end, "missing 'gamma'");
  if (!has_gin) fail(end, "missing 'g_in' block");
  if (!phi_c) fail(end, "missing 'phi_c' block");
  s.phi_c = phi_c;
  return f;
}

std::string write_storage(const StorageFile& f) {
  const MsoStorage& s = f.storage;
  std::string r = "storage " + word(s.name) + "\n";
  if (!f.native.empty()) r += "native " + word(f.native) + "\n";
  r += labels_line("sigma", s.sigma) + labels_line("gamma", s.gamma) + labels_line("delta", s.delta);
  if (s.intermediate) r += labels_line("intermediate", *s.intermediate);
  if (s.exclusive_bound) r += "exclusive-bound " + std::to_string(s.exclusive_bound) + "\n";
  r += "g_in\n" + write_graph(s.g_in) + "end\n";
  r += "phi_c\n" + write_formula(s.phi_c) + "end\n";
  for (const auto& ins : s.instructions) r += "instruction " + word(ins.name) + "\n" + write_formula(ins.phi) + "end\n";
  return r;
}

// ---- transducers ----

MsoTransducer parse_transducer(const std::string& text) {
  auto ls = split_lines(text);
  MsoTransducer t;
  bool has_chi = false;
  for (std::size_t i = 0; i < ls.size(); ++i) {
    auto tk = line_tokens(ls[i]);
    if (tk.empty()) continue;
    const std::string& k = tk[0].s;
    auto rest = [&] {
      std::vector<std::string> r;
      for (std::size_t j = 1; j < tk.size(); ++j) r.push_back(tk[j].s);
      return r;
    };
    if (k == "transducer") {
      if (tk.size() != 1) fail(tk[1], "unexpected text after 'transducer'");
    } else if (k == "sigma") {
      t.sigma = rest_labels(tk);
    } else if (k == "gamma") {
      t.gamma = rest_labels(tk);
    } else if (k == "params") {
      t.params = rest();
    } else if (k == "dups") {
      t.dups = rest();
    } else if (k == "vars") {
      if (tk.size() != 3) fail(tk[0], "expected: vars <x> <x'>");
      t.x = tk[1].s;
      t.x2 = tk[2].s;
    } else if (k == "chi") {
      t.chi = block_formula(read_block(ls, i, tk[0]));
      has_chi = true;
    } else if (k == "psi") {
      if (tk.size() != 3) fail(tk[0], "expected: psi <node label> <copy>");
      auto key = std::make_pair(tk[1].s, tk[2].s);
      if (t.psi.count(key)) fail(tk[0], "psi block defined twice");
      t.psi[key] = block_formula(read_block(ls, i, tk[0]));
    } else if (k == "phi") {
      if (tk.size() != 4) fail(tk[0], "expected: phi <edge label> <copy> <copy>");
      auto key = std::make_tuple(tk[1].s, tk[2].s, tk[3].s);
      if (t.phi.count(key)) fail(tk[0], "phi block defined twice");
      t.phi[key] = block_formula(read_block(ls, i, tk[0]));
    } else {
      fail(tk[0], "unexpected '" + k + "'");
    }
  }
  if (!has_chi) fail(eof_tok(ls), "missing 'chi' block");
  return t;
}

std::string write_transducer(const MsoTransducer& t) {
  auto words = [](const std::string& key, const std::vector<std::string>& xs) {
    std::string r = key;
    for (const auto& x : xs) r += " " + word(x);
    return r + "\n";
  };
  std::string r = "transducer\n" + labels_line("sigma", t.sigma) + labels_line("gamma", t.gamma) +
                  words("params", t.params) + words("dups", t.dups) + "vars " + word(t.x) + " " + word(t.x2) + "\n";
  r += "chi\n" + write_formula(t.chi) + "end\n";
  for (const auto& [k, a] : t.psi) r += "psi " + word(k.first) + " " + word(k.second) + "\n" + write_formula(a) + "end\n";
  for (const auto& [k, a] : t.phi)
    r += "phi " + word(std::get<0>(k)) + " " + word(std::get<1>(k)) + " " + word(std::get<2>(k)) + "\n" +
         write_formula(a) + "end\n";
  return r;
}

// ---- JSON ----

std::string graph_json(const Graph& g) { return graph_j(g).dump(2) + "\n"; }
std::string formula_json(const Formula& a) { return formula_j(a).dump(2) + "\n"; }

std::string nfa_json(const NFA& n) {
  json ts = json::array();
  for (const auto& [p, a, q] : n.trans) ts.push_back({{"from", n.states[p]}, {"symbol", a}, {"to", n.states[q]}});
  json j = {{"alphabet", n.alphabet}, {"states", states_j(n)}, {"transitions", ts}};
  return j.dump(2) + "\n";
}

std::string automaton_json(const SAutomaton& m) {
  auto sorted = m.trans;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  json ts = json::array();
  for (const auto& t : sorted)
    ts.push_back({{"from", m.states[t.from]}, {"input", t.alpha}, {"instruction", t.theta}, {"to", m.states[t.to]}});
  json j = {{"input", m.input}, {"storage", m.storage}, {"states", states_j(m)}, {"transitions", ts}};
  return j.dump(2) + "\n";
}

std::string storage_json(const StorageFile& f) {
  const MsoStorage& s = f.storage;
  json ins = json::array();
  for (const auto& i : s.instructions) ins.push_back({{"name", i.name}, {"phi", formula_j(i.phi)}});
  json j = {{"name", s.name},     {"native", f.native},        {"sigma", s.sigma},
            {"gamma", s.gamma},   {"delta", s.delta},          {"exclusive_bound", s.exclusive_bound},
            {"g_in", graph_j(s.g_in)}, {"phi_c", formula_j(s.phi_c)}, {"instructions", ins}};
  j["intermediate"] = s.intermediate ? json(*s.intermediate) : json(nullptr);
  return j.dump(2) + "\n";
}

std::string transducer_json(const MsoTransducer& t) {
  json psi = json::array(), phi = json::array();
  for (const auto& [k, a] : t.psi) psi.push_back({{"label", k.first}, {"copy", k.second}, {"formula", formula_j(a)}});
  for (const auto& [k, a] : t.phi)
    phi.push_back({{"label", std::get<0>(k)},
                   {"from", std::get<1>(k)},
                   {"to", std::get<2>(k)},
                   {"formula", formula_j(a)}});
  json j = {{"sigma", t.sigma}, {"gamma", t.gamma}, {"params", t.params}, {"dups", t.dups},
            {"vars", json::array({t.x, t.x2})}, {"chi", formula_j(t.chi)}, {"psi", psi}, {"phi", phi}};
  return j.dump(2) + "\n";
}

// ---- DOT ----

namespace {

struct Clustering {
  std::vector<int> comp;  // by node index
  std::vector<NodeSet> comps;
  LabelSet connecting;
  std::size_t drawn = 0;
};

// Weak components over `inner`; nullopt unless every other edge joins two
// distinct components inside a full biclique of its label.
std::optional<Clustering> cluster(const Graph& g, const LabelSet& connecting) {
  std::size_t n = g.size();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (const auto& e : g.edges())
    if (!connecting.count(e.label)) parent[find(g.index_of(e.src))] = find(g.index_of(e.dst));
  Clustering c;
  c.connecting = connecting;
  c.comp.assign(n, -1);
  std::map<int, int> root_id;
  for (std::size_t i = 0; i < n; ++i) {
    int r = find(int(i));
    auto [it, fresh] = root_id.emplace(r, int(c.comps.size()));
    if (fresh) c.comps.emplace_back();
    c.comp[i] = it->second;
    c.comps[std::size_t(it->second)].insert(g.nodes()[i]);
  }
  std::map<std::tuple<Label, int, int>, std::size_t> count;
  for (const auto& e : g.edges()) {
    if (!connecting.count(e.label)) {
      ++c.drawn;
      continue;
    }
    int a = c.comp[std::size_t(g.index_of(e.src))], b = c.comp[std::size_t(g.index_of(e.dst))];
    if (a == b) return std::nullopt;
    ++count[{e.label, a, b}];
  }
  for (const auto& [k, m] : count) {
    auto [l, a, b] = k;
    if (m != c.comps[std::size_t(a)].size() * c.comps[std::size_t(b)].size()) return std::nullopt;
  }
  c.drawn += count.size();
  return c;
}

}  // namespace

std::string graph_dot(const Graph& g) {
  LabelSet labels = g.edge_labels();
  std::vector<Label> lv(labels.begin(), labels.end());
  std::optional<Clustering> best;
  if (lv.size() <= 12)
    for (unsigned mask = 1; mask < (1u << lv.size()); ++mask) {
      LabelSet conn;
      for (std::size_t i = 0; i < lv.size(); ++i)
        if (mask >> i & 1) conn.insert(lv[i]);
      auto c = cluster(g, conn);
      if (c && c->drawn < g.edges().size() && (!best || c->drawn < best->drawn)) best = std::move(c);
    }
  auto nid = [](int v) { return dot_id("n" + std::to_string(v)); };
  std::string r = "digraph G {\n";
  auto node_line = [&](int v) { return nid(v) + " [label=" + dot_id(g.label(v)) + "];\n"; };
  if (best) {
    r += "  compound=true;\n";
    for (std::size_t i = 0; i < best->comps.size(); ++i) {
      r += "  subgraph " + dot_id("cluster_" + std::to_string(i)) + " {\n    style=rounded;\n";
      for (int v : best->comps[i]) r += "    " + node_line(v);
      r += "  }\n";
    }
  } else {
    for (int v : g.nodes()) r += "  " + node_line(v);
  }
  auto es = g.edges();
  std::sort(es.begin(), es.end());
  std::set<std::tuple<Label, int, int>> done;
  for (const auto& e : es) {
    if (best && best->connecting.count(e.label)) {
      int a = best->comp[std::size_t(g.index_of(e.src))], b = best->comp[std::size_t(g.index_of(e.dst))];
      if (!done.insert({e.label, a, b}).second) continue;
      const auto& ca = best->comps[std::size_t(a)];
      const auto& cb = best->comps[std::size_t(b)];
      r += "  " + nid(*ca.begin()) + " -> " + nid(*cb.begin()) + " [label=" + dot_id(e.label) + ", style=bold";
      if (ca.size() > 1) r += ", ltail=" + dot_id("cluster_" + std::to_string(a));
      if (cb.size() > 1) r += ", lhead=" + dot_id("cluster_" + std::to_string(b));
      r += "];\n";
    } else {
      r += "  " + nid(e.src) + " -> " + nid(e.dst) + " [label=" + dot_id(e.label) + "];\n";
    }
  }
  return r + "}\n";
}

std::string nfa_dot(const NFA& n) {
  std::string r = "digraph NFA {\n" + states_dot(n);
  for (const auto& [p, a, q] : n.trans)
    r += "  " + dot_id(n.states[p]) + " -> " + dot_id(n.states[q]) + " [label=" + dot_id(a) + "];\n";
  return r + "}\n";
}

std::string automaton_dot(const SAutomaton& m) {
  std::string r = "digraph SAutomaton {\n" + states_dot(m);
  auto ts = m.trans;
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  for (const auto& t : ts)
    r += "  " + dot_id(m.states[t.from]) + " -> " + dot_id(m.states[t.to]) + " [label=" +
         dot_id(t.alpha + " / " + t.theta) + "];\n";
  return r + "}\n";
}

}  // namespace msoga::io
