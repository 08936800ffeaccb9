#include "msoga/cli.hpp"

#include <algorithm>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "msoga/bet.hpp"
#include "msoga/logic_sa.hpp"
#include "msoga/pushdown.hpp"
#include "msoga/stack.hpp"

namespace msoga::cli {

namespace {

class MsoAsNative : public NativeStorage {
 public:
  MsoAsNative(MsoStorage s, int max_nodes) : s_(std::move(s)), cands_(configurations(s_, max_nodes)) {}
  std::string name() const override { return s_.name; }
  Config initial() const override { return io::write_graph(s_.g_in); }
  std::vector<std::string> instructions() const override { return s_.instruction_names(); }
  std::vector<Config> step(const Config& c, const std::string& theta) const override {
    s_.instruction(theta);
    Graph g1 = io::parse_graph(c);
    std::vector<Config> out;
    for (const auto& g2 : cands_)
      if (mso_member(s_, theta, g1, g2)) out.push_back(io::write_graph(g2));
    return out;
  }
  Graph render(const Config& c) const override { return io::parse_graph(c); }
  Graph witness_pair(const Config& c, const std::string& theta, const Config& next) const override {
    Graph w = io::parse_graph(c);
    if (!mso_member(s_, theta, io::parse_graph(c), io::parse_graph(next), {}, &w))
      throw Error(ErrorKind::NotASuccessor, "not a " + theta + " successor");
    return w;
  }

 private:
  MsoStorage s_;
  std::vector<Graph> cands_;
};

LabelSet default_alphabet(const Formula& phi, const MsoStorage* s) {
  LabelSet a;
  for (const auto& l : edge_symbols(phi)) {
    if (l == kEps) continue;
    if (s && (s->gamma.count(l) || s->delta.count(l))) continue;
    a.insert(l);
  }
  return a;
}

LabelSet split_labels(const std::string& s) {
  std::istringstream in(s);
  LabelSet r;
  for (std::string w; in >> w;) r.insert(w);
  return r;
}

struct Out {
  std::string format;
  std::ostream& os;

  void boolean(bool b) {
    if (format == "json") os << nlohmann::json{{"result", b}}.dump() << "\n";
    else os << (b ? "true" : "false") << "\n";
  }
  void graph(const Graph& g) {
    if (format == "json") os << io::graph_json(g);
    else if (format == "dot") os << io::graph_dot(g);
    else os << io::write_graph(g);
  }
  void formula(const Formula& a) { os << (format == "json" ? io::formula_json(a) : io::write_formula(a)); }
  void nfa(const NFA& n) {
    if (format == "json") os << io::nfa_json(n);
    else if (format == "dot") os << io::nfa_dot(n);
    else os << io::write_nfa(n);
  }
  void storage(const io::StorageFile& f) { os << (format == "json" ? io::storage_json(f) : io::write_storage(f)); }
};

Graph load_graph(const std::string& p) { return io::parse_graph(io::read_file(p)); }
Formula load_formula(const std::string& p) { return io::parse_formula(io::read_file(p)); }
io::StorageFile load_storage(const std::string& p) { return io::parse_storage(io::read_file(p)); }
SAutomaton load_automaton(const std::string& p) { return io::parse_automaton(io::read_file(p)); }

std::string native_name_of(const io::StorageFile& inner, int times) {
  if (inner.native.empty()) return "";
  std::string n = inner.native;
  for (int i = 0; i < times; ++i) n = "P(" + n + ")";
  return n;
}

}  // namespace

Word parse_word(const std::string& s) {
  if (s.find_first_of(" \t") == std::string::npos) return chars(s);
  std::istringstream in(s);
  Word w;
  for (std::string x; in >> x;) w.push_back(x);
  return w;
}

NativePtr native_by_name(const std::string& name) {
  for (auto [suffix, which] : {std::pair<std::string, Enrichment>{"+reset", Enrichment::Reset}, {"+id", Enrichment::Identity}})
    if (name.size() > suffix.size() && name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0) {
      auto in = native_by_name(name.substr(0, name.size() - suffix.size()));
      return in ? enrich_native(in, which) : nullptr;
    }
  if (name == "TRIV") return triv_native();
  if (name == "Stack") return stack_native();
  if (name.size() > 3 && name.rfind("P(", 0) == 0 && name.back() == ')') {
    std::string inner = name.substr(2, name.size() - 3);
    int level = 1;
    for (std::string rest = inner; rest.rfind("P(", 0) == 0; rest = rest.substr(2)) ++level;
    auto in = native_by_name(inner);
    return in ? pushdown_native(in, level) : nullptr;
  }
  return nullptr;
}

NativePtr native_for(const io::StorageFile& f, int max_nodes) {
  if (!f.native.empty()) {
    auto n = native_by_name(f.native);
    if (!n) throw Error(ErrorKind::StorageMismatch, "no built-in storage named '" + f.native + "'");
    return n;
  }
  return std::make_shared<MsoAsNative>(f.storage, max_nodes);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"MSO graph storage types and automata over them", "msoga"};
  app.require_subcommand(1);
  std::string format = "text";
  app.add_option("--output", format, "Output format")->check(CLI::IsMember({"text", "dot", "json"}))->capture_default_str();

  std::string graph_path, formula_path, automaton_path, storage_path, word, mode, file, inner_path, alphabet;
  std::uint64_t budget = AcceptOptions{}.max_ids;
  int max_nodes = 5, iterate = 1;

  auto* check = app.add_subcommand("check", "Model-check a graph against a closed formula");
  check->add_option("graph", graph_path)->required();
  check->add_option("formula", formula_path)->required();

  auto* acc_s = app.add_subcommand("accept-string", "Run an S-automaton on a word");
  acc_s->add_option("automaton", automaton_path)->required();
  acc_s->add_option("storage", storage_path)->required();
  acc_s->add_option("word", word, "Symbols; one per character unless separated by spaces")->required();
  acc_s->add_option("--budget", budget, "Instantaneous descriptions explored before giving up")->capture_default_str();
  acc_s->add_option("--max-nodes", max_nodes, "Configuration size bound for storages without a native implementation")
      ->capture_default_str();

  auto* acc_g = app.add_subcommand("accept-graph", "Decide whether an S-automaton accepts a string-like graph");
  acc_g->add_option("automaton", automaton_path)->required();
  acc_g->add_option("storage", storage_path)->required();
  acc_g->add_option("graph", graph_path)->required();

  auto* beh = app.add_subcommand("behaviour", "Instruction string carried by a string-like graph");
  beh->add_option("storage", storage_path)->required();
  beh->add_option("graph", graph_path)->required();
  beh->add_option("--alphabet", alphabet, "Input symbols; default: edge labels outside the storage");

  auto* tr = app.add_subcommand("translate", "Translate between plain and two-level formulas");
  tr->add_option("mode", mode)->required()->check(CLI::IsMember({"lift", "lower", "embed"}));
  tr->add_option("formula", formula_path)->required();
  tr->add_option("--storage", storage_path, "Storage description (needed by lower and embed)");
  tr->add_option("--alphabet", alphabet, "Input symbols; default: edge labels outside the storage");

  auto* comp = app.add_subcommand("compile", "Translate between string formulas and NFAs");
  comp->add_option("mode", mode)->required()->check(CLI::IsMember({"mso-to-nfa", "nfa-to-mso"}));
  comp->add_option("file", file)->required();
  comp->add_option("--alphabet", alphabet, "Symbols; default: edge labels of the formula");

  auto* build = app.add_subcommand("build", "Emit a storage description");
  build->add_option("kind", mode)->required()->check(CLI::IsMember({"triv", "stack-native", "stack-mso", "pushdown"}));
  build->add_option("--inner", inner_path, "Inner storage description (pushdown)");
  build->add_option("--iterate", iterate, "Number of pushdown levels")->capture_default_str()->check(CLI::Range(1, kMaxPushdownDepth));

  auto* dot = app.add_subcommand("emit-dot", "Render a graph as DOT");
  dot->add_option("graph", graph_path)->required();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kTrue : kError;
  }

  Out o{format, out};
  try {
    if (*check) {
      bool r = models(load_graph(graph_path), load_formula(formula_path));
      o.boolean(r);
      return r ? kTrue : kFalse;
    }
    if (*acc_s) {
      SAutomaton m = load_automaton(automaton_path);
      auto s = native_for(load_storage(storage_path), max_nodes);
      AcceptOptions opt;
      opt.max_ids = budget;
      bool r = s_accepts_string(m, *s, parse_word(word), opt);
      o.boolean(r);
      return r ? kTrue : kFalse;
    }
    if (*acc_g) {
      auto r = s_accepts_graph(load_automaton(automaton_path), load_storage(storage_path).storage, load_graph(graph_path));
      o.boolean(r.accepted);
      return r.accepted ? kTrue : kFalse;
    }
    if (*beh) {
      MsoStorage s = load_storage(storage_path).storage;
      Graph g = load_graph(graph_path);
      LabelSet A;
      if (!alphabet.empty()) {
        A = split_labels(alphabet);
      } else {
        for (const auto& l : g.edge_labels())
          if (l != kEps && !s.gamma.count(l) && !s.delta.count(l)) A.insert(l);
      }
      auto b = graph_behaviour(s, as_string_like(g, s.g_in, A));
      if (format == "json") out << nlohmann::json{{"behaviour", b ? nlohmann::json(*b) : nlohmann::json(nullptr)}}.dump() << "\n";
      else out << (b ? join(*b, " ") : "none") << "\n";
      return b ? kTrue : kFalse;
    }
    if (*tr) {
      Formula phi = load_formula(formula_path);
      if (mode == "lift") {
        o.formula(lift(phi));
        return kTrue;
      }
      if (storage_path.empty()) throw Error(ErrorKind::StorageMismatch, mode + " needs --storage");
      MsoStorage s = load_storage(storage_path).storage;
      LabelSet A = alphabet.empty() ? default_alphabet(phi, &s) : split_labels(alphabet);
      o.formula(mode == "lower" ? lower(phi, s, A) : embed(phi, s, A));
      return kTrue;
    }
    if (*comp) {
      if (mode == "mso-to-nfa") {
        Formula phi = load_formula(file);
        LabelSet A = alphabet.empty() ? default_alphabet(phi, nullptr) : split_labels(alphabet);
        o.nfa(mso_to_nfa(phi, A));
      } else {
        o.formula(nfa_to_mso(io::parse_nfa(io::read_file(file))));
      }
      return kTrue;
    }
    if (*build) {
      if (mode == "triv") {
        o.storage({triv_mso(), "TRIV"});
      } else if (mode == "stack-native") {
        o.storage({stack_mso(), "Stack"});
      } else if (mode == "stack-mso") {
        o.storage({stack_mso(), ""});
      } else {
        if (inner_path.empty()) throw Error(ErrorKind::StorageMismatch, "build pushdown needs --inner");
        io::StorageFile in = load_storage(inner_path);
        io::StorageFile r{in.storage, native_name_of(in, iterate)};
        for (int k = 1; k <= iterate; ++k) r.storage = pushdown_mso(r.storage, k);
        o.storage(r);
      }
      return kTrue;
    }
    if (*dot) {
      out << io::graph_dot(load_graph(graph_path));
      return kTrue;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::BudgetExhausted ? kBudget : kError;
  }
  return kError;
}

}  // namespace msoga::cli
