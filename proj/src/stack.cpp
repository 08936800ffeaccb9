#include "msoga/stack.hpp"

#include <algorithm>
#include <sstream>

namespace msoga {

namespace stack {

bool is_barred(const Label& l) { return !l.empty() && l.back() == '\''; }
Label unbar(const Label& l) { return is_barred(l) ? l.substr(0, l.size() - 1) : l; }

bool valid(const Word& w) {
  int bars = 0;
  for (const auto& l : w) {
    Label u = unbar(l);
    if (std::find(kOmega.begin(), kOmega.end(), u) == kOmega.end()) return false;
    bars += is_barred(l);
  }
  return bars == 1;
}

Word parse(const Config& c) {
  std::istringstream in(c);
  Word w;
  for (std::string t; in >> t;) w.push_back(t);
  if (!valid(w)) throw Error(ErrorKind::Parse, "not a stack configuration: '" + c + "'");
  return w;
}

Config format(const Word& w) { return join(w, " "); }

std::vector<Word> all_configs(int n) {
  std::vector<Word> out;
  for (int len = 1; len <= n; ++len) {
    int total = 1;
    for (int i = 0; i < len; ++i) total *= 3;
    for (int p = 0; p < len; ++p)
      for (int m = 0; m < total; ++m) {
        Word w;
        int x = m;
        for (int i = 0; i < len; ++i, x /= 3) w.push_back(i == p ? bar(kOmega[x % 3]) : kOmega[x % 3]);
        out.push_back(w);
      }
  }
  return out;
}

std::vector<std::string> instruction_names() {
  std::vector<std::string> r;
  for (const auto& w : kOmega)
    for (const char* op : {"push", "pop", "moveup", "movedown"}) r.push_back(std::string(op) + "(" + w + ")");
  return r;
}

}  // namespace stack

namespace {

using stack::bar;
using stack::is_barred;
using stack::unbar;

std::pair<std::string, Label> split_instr(const std::string& theta) {
  auto l = theta.find('('), r = theta.rfind(')');
  if (l == std::string::npos || r != theta.size() - 1)
    throw Error(ErrorKind::UnknownInstruction, "no stack instruction '" + theta + "'");
  std::string op = theta.substr(0, l);
  Label a = theta.substr(l + 1, r - l - 1);
  if (std::find(stack::kOmega.begin(), stack::kOmega.end(), a) == stack::kOmega.end() ||
      (op != "push" && op != "pop" && op != "moveup" && op != "movedown"))
    throw Error(ErrorKind::UnknownInstruction, "no stack instruction '" + theta + "'");
  return {op, a};
}

int pointer(const Word& w) {
  for (std::size_t i = 0; i < w.size(); ++i)
    if (is_barred(w[i])) return int(i);
  return -1;
}

std::vector<Word> step_word(const Word& w, const std::string& theta) {
  auto [op, a] = split_instr(theta);
  int p = pointer(w), n = int(w.size());
  Word r = w;
  if (op == "push") {
    if (p != n - 1) return {};
    r[p] = unbar(w[p]);
    r.push_back(bar(a));
  } else if (op == "pop") {
    if (n < 2 || p != n - 1 || w[p] != bar(a)) return {};
    r.pop_back();
    r[n - 2] = bar(w[n - 2]);
  } else if (op == "moveup") {
    if (w[p] != bar(a) || p + 1 >= n) return {};
    r[p] = a;
    r[p + 1] = bar(w[p + 1]);
  } else {
    if (w[p] != bar(a) || p == 0) return {};
    r[p] = a;
    r[p - 1] = bar(w[p - 1]);
  }
  return {r};
}

class Stack : public NativeStorage {
 public:
  std::string name() const override { return "Stack"; }
  Config initial() const override { return bar("gamma"); }
  std::vector<std::string> instructions() const override { return stack::instruction_names(); }
  std::vector<Config> step(const Config& c, const std::string& theta) const override {
    std::vector<Config> r;
    for (const auto& w : step_word(stack::parse(c), theta)) r.push_back(stack::format(w));
    return r;
  }
  Graph render(const Config& c) const override { return nd_gr(stack::parse(c)); }
  Graph witness_pair(const Config& c, const std::string& theta, const Config& next) const override {
    return stack_witness_pair(stack::parse(c), theta, stack::parse(next));
  }
};

LabelSet sigma() {
  LabelSet s;
  for (const auto& w : stack::kOmega) {
    s.insert(w);
    s.insert(bar(w));
  }
  return s;
}

Formula barred(const std::string& x) {
  std::vector<Formula> ds;
  for (const auto& w : stack::kOmega) ds.push_back(f::lab(bar(w), x));
  return f::lor(ds);
}

// lab(y) is the barred version of lab(x)
Formula bar_of(const std::string& x, const std::string& y) {
  std::vector<Formula> ds;
  for (const auto& w : stack::kOmega) ds.push_back(f::land(f::lab(w, x), f::lab(bar(w), y)));
  return f::lor(ds);
}

Formula same_unbarred(const std::string& x, const std::string& y) {
  std::vector<Formula> ds;
  for (const auto& w : stack::kOmega) ds.push_back(f::land(f::lab(w, x), f::lab(w, y)));
  return f::lor(ds);
}

const LabelSet kStarSet{kStar};

// Conditions shared by all stack instructions besides the configuration
// formulas: no star-edges between the components, d-edges only from X1 to X2
// and preserving star-edges.
Formula common() {
  return f::land({
      pairf::no_edges(kStarSet, "X1", "X2"),
      pairf::no_edges({kStar, stack::kD}, "X2", "X1"),
      f::all1({"x", "y"}, f::implies(f::edge(stack::kD, "x", "y"), f::land(f::in("x", "X1"), f::in("y", "X2")))),
      pairf::iso_edges(stack::kD, kStarSet),
  });
}

// With `inverted`, nu- and d-edges are reversed (pop from push).
Formula stack_frame(const Formula& phi_c, const Formula& body, bool inverted = false) {
  Formula core = f::land(common(), body);
  if (inverted) core = reverse_edges(core, {stack::kD});
  return pairf::frame("X1", "X2", f::land({relativize(phi_c, "X1"), relativize(phi_c, "X2"), core}), inverted);
}

Formula push_formula(const Formula& phi_c, const Label& a, bool inverted) {
  auto d = [](const char* x, const char* y) { return f::edge(stack::kD, x, y); };
  std::vector<Formula> cs = {
      // d is a bijection from X1 onto X2 minus its top
      f::all1("x", f::implies(f::in("x", "X1"), f::ex1("y", d("x", "y")))),
      f::all1("y", f::implies(f::land(f::in("y", "X2"), f::neg(pairf::top(kStarSet, "y", "X2"))),
                              f::ex1("x", d("x", "y")))),
      f::all1("y", f::implies(pairf::top(kStarSet, "y", "X2"), f::neg(f::ex1("x", d("x", "y"))))),
      f::all1({"x", "y", "u"}, f::implies(f::land(d("x", "y"), d("x", "u")), f::eq("y", "u"))),
      f::all1({"x", "y", "u"}, f::implies(f::land(d("x", "u"), d("y", "u")), f::eq("x", "y"))),
      // labels
      f::all1({"x", "y"}, f::implies(d("x", "y"), f::land(f::implies(f::neg(pairf::top(kStarSet, "x", "X1")),
                                                                     same_unbarred("x", "y")),
                                                          f::implies(pairf::top(kStarSet, "x", "X1"),
                                                                     bar_of("y", "x"))))),
      f::all1("y", f::implies(pairf::top(kStarSet, "y", "X2"), f::lab(bar(a), "y"))),
  };
  return stack_frame(phi_c, f::land(cs), inverted);
}

// moveup when `up`, else movedown
Formula move_formula(const Formula& phi_c, const Label& a, bool up) {
  auto d = [](const char* x, const char* y) { return f::edge(stack::kD, x, y); };
  auto step = up ? f::edge(kStar, "p", "q") : f::edge(kStar, "q", "p");
  auto labels = f::ex1({"p", "q"}, f::land({
      f::in("p", "X1"),
      f::lab(bar(a), "p"),
      step,
      f::all1({"r", "s"}, f::implies(f::land(d("p", "r"), d("q", "s")), f::land(bar_of("q", "s"), f::lab(a, "r")))),
      f::all1({"x", "y"}, f::implies(f::land({d("x", "y"), f::neg(f::eq("x", "p")), f::neg(f::eq("x", "q"))}),
                                     same_unbarred("x", "y"))),
  }));
  return stack_frame(phi_c, f::land(pairf::bijection(stack::kD, "X1", "X2"), labels));
}

}  // namespace

NativePtr stack_native() { return std::make_shared<Stack>(); }

MsoStorage stack_mso() {
  MsoStorage s;
  s.name = "STACK";
  s.sigma = sigma();
  s.gamma = {kStar, stack::kD};
  auto unique = f::land(f::ex1("x", barred("x")),
                        f::all1({"x", "y"}, f::implies(f::land(barred("x"), barred("y")), f::eq("x", "y"))));
  s.phi_c = f::land({f::string(s.gamma), f::all1({"x", "y"}, f::neg(f::edge(stack::kD, "x", "y"))), unique});
  s.g_in = nd_gr({bar("gamma")});
  for (const auto& a : stack::kOmega) {
    s.instructions.push_back({"push(" + a + ")", push_formula(s.phi_c, a, false)});
    s.instructions.push_back({"pop(" + a + ")", push_formula(s.phi_c, a, true)});
    s.instructions.push_back({"moveup(" + a + ")", move_formula(s.phi_c, a, true)});
    s.instructions.push_back({"movedown(" + a + ")", move_formula(s.phi_c, a, false)});
  }
  return s;
}

Graph stack_witness_pair(const Word& c, const std::string& theta, const Word& next) {
  if (!stack::valid(c) || step_word(c, theta) != std::vector<Word>{next})
    throw Error(ErrorKind::NotASuccessor,
                "'" + stack::format(next) + "' is not a " + theta + "-successor of '" + stack::format(c) + "'");
  Graph g1 = nd_gr(c), g2 = nd_gr(next);
  auto [h, off] = assemble_pair(g1, g2);
  std::vector<Edge> d;
  std::size_t m = std::min(c.size(), next.size());
  const auto& n1 = g1.nodes();
  const auto& n2 = g2.nodes();
  for (std::size_t i = 0; i < m; ++i) d.push_back({n1[i], stack::kD, n2[i] + off});
  return add_edges(h, d);
}

}  // namespace msoga
