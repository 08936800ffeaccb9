#include "msoga/nfa.hpp"

#include <algorithm>
#include <deque>

namespace msoga {

Symbol tup(const std::vector<std::string>& parts) { return join(parts, std::string(1, kTupleSep)); }

std::vector<std::string> untup(const Symbol& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == kTupleSep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

int NFA::add_state(const std::string& name, bool is_initial, bool is_final) {
  int q = int(states.size());
  states.push_back(name);
  if (is_initial) initial.insert(q);
  if (is_final) final.insert(q);
  return q;
}

void NFA::add(int p, const Symbol& a, int q) {
  alphabet.insert(a);
  trans.insert({p, a, q});
}

int NFA::state(const std::string& name) const {
  for (std::size_t i = 0; i < states.size(); ++i)
    if (states[i] == name) return int(i);
  return -1;
}

namespace {

// Successor lists indexed by state and symbol position.
struct Index {
  std::vector<Symbol> syms;
  std::map<Symbol, int> pos;
  std::vector<std::vector<std::vector<int>>> next;

  explicit Index(const NFA& n) : syms(n.alphabet.begin(), n.alphabet.end()) {
    for (std::size_t i = 0; i < syms.size(); ++i) pos[syms[i]] = int(i);
    next.assign(n.size(), std::vector<std::vector<int>>(syms.size()));
    for (const auto& [p, a, q] : n.trans) next[p][pos.at(a)].push_back(q);
  }
};

void same_alphabet(const NFA& a, const NFA& b) {
  if (a.alphabet != b.alphabet) throw Error(ErrorKind::AlphabetMismatch, "automata over different alphabets");
}

std::string set_name(const std::vector<int>& s) {
  std::string r = "{";
  for (std::size_t i = 0; i < s.size(); ++i) r += (i ? "," : "") + std::to_string(s[i]);
  return r + "}";
}

}  // namespace

bool nfa_accepts(const NFA& n, const Word& w) {
  Index ix(n);
  std::vector<char> cur(n.size(), 0);
  for (int q : n.initial) cur[q] = 1;
  for (const auto& a : w) {
    auto it = ix.pos.find(a);
    if (it == ix.pos.end()) throw Error(ErrorKind::UnknownSymbol, "symbol '" + a + "' not in the alphabet");
    std::vector<char> nxt(n.size(), 0);
    for (std::size_t q = 0; q < n.size(); ++q)
      if (cur[q])
        for (int r : ix.next[q][it->second]) nxt[r] = 1;
    cur.swap(nxt);
  }
  for (int q : n.final)
    if (cur[q]) return true;
  return false;
}

NFA nfa_union(const NFA& a, const NFA& b) {
  same_alphabet(a, b);
  NFA r;
  r.alphabet = a.alphabet;
  for (std::size_t q = 0; q < a.size(); ++q) r.add_state("1." + a.states[q], a.initial.count(int(q)), a.final.count(int(q)));
  int off = int(a.size());
  for (std::size_t q = 0; q < b.size(); ++q) r.add_state("2." + b.states[q], b.initial.count(int(q)), b.final.count(int(q)));
  r.trans = a.trans;
  for (const auto& [p, s, q] : b.trans) r.trans.insert({p + off, s, q + off});
  return r;
}

NFA nfa_intersect(const NFA& a, const NFA& b) {
  same_alphabet(a, b);
  Index ia(a), ib(b);
  NFA r;
  r.alphabet = a.alphabet;
  std::map<std::pair<int, int>, int> id;
  std::deque<std::pair<int, int>> work;
  auto get = [&](int p, int q) {
    auto [it, fresh] = id.try_emplace({p, q}, int(r.size()));
    if (fresh) {
      r.add_state("(" + a.states[p] + "," + b.states[q] + ")", a.initial.count(p) && b.initial.count(q),
                  a.final.count(p) && b.final.count(q));
      work.push_back({p, q});
    }
    return it->second;
  };
  for (int p : a.initial)
    for (int q : b.initial) get(p, q);
  while (!work.empty()) {
    auto [p, q] = work.front();
    work.pop_front();
    int from = id.at({p, q});
    for (std::size_t s = 0; s < ia.syms.size(); ++s) {
      int sb = ib.pos.at(ia.syms[s]);
      for (int p2 : ia.next[p][s])
        for (int q2 : ib.next[q][sb]) r.trans.insert({from, ia.syms[s], get(p2, q2)});
    }
  }
  if (r.size() == 0) r.add_state("empty");
  return r;
}

NFA determinize(const NFA& n, std::uint64_t budget) {
  Index ix(n);
  NFA r;
  r.alphabet = n.alphabet;
  std::map<std::vector<int>, int> id;
  std::deque<std::vector<int>> work;
  auto get = [&](std::vector<int> s) {
    auto [it, fresh] = id.try_emplace(s, int(r.size()));
    if (fresh) {
      if (r.size() >= budget)
        throw Error(ErrorKind::StateBlowup, "subset construction exceeded " + std::to_string(budget) + " states");
      bool fin = false;
      for (int q : s) fin = fin || n.final.count(q);
      r.add_state(set_name(s), false, fin);
      work.push_back(s);
    }
    return it->second;
  };
  r.initial.insert(get(std::vector<int>(n.initial.begin(), n.initial.end())));
  while (!work.empty()) {
    auto s = work.front();
    work.pop_front();
    int from = id.at(s);
    for (std::size_t a = 0; a < ix.syms.size(); ++a) {
      std::vector<int> t;
      for (int q : s) t.insert(t.end(), ix.next[q][a].begin(), ix.next[q][a].end());
      std::sort(t.begin(), t.end());
      t.erase(std::unique(t.begin(), t.end()), t.end());
      r.trans.insert({from, ix.syms[a], get(t)});
    }
  }
  return r;
}

NFA nfa_complement(const NFA& n, std::uint64_t budget) {
  NFA d = determinize(n, budget);
  std::set<int> fin;
  for (std::size_t q = 0; q < d.size(); ++q)
    if (!d.final.count(int(q))) fin.insert(int(q));
  d.final = fin;
  return d;
}

NFA nfa_project(const NFA& n, std::size_t i) {
  std::map<Symbol, Symbol> f;
  for (const auto& a : n.alphabet) {
    auto parts = untup(a);
    if (parts.size() < 2 || i >= parts.size())
      throw Error(ErrorKind::AlphabetMismatch, "cannot drop position " + std::to_string(i) + " of '" + a + "'");
    parts.erase(parts.begin() + long(i));
    f[a] = tup(parts);
  }
  return nfa_rename(n, f);
}

NFA nfa_rename(const NFA& n, const std::map<Symbol, Symbol>& f) {
  auto map = [&](const Symbol& a) {
    auto it = f.find(a);
    return it == f.end() ? a : it->second;
  };
  NFA r = n;
  r.alphabet.clear();
  r.trans.clear();
  for (const auto& a : n.alphabet) r.alphabet.insert(map(a));
  for (const auto& [p, a, q] : n.trans) r.trans.insert({p, map(a), q});
  return r;
}

NFA with_alphabet(const NFA& n, const std::set<Symbol>& alphabet) {
  if (!std::includes(alphabet.begin(), alphabet.end(), n.alphabet.begin(), n.alphabet.end()))
    throw Error(ErrorKind::AlphabetMismatch, "new alphabet must contain the old one");
  NFA r = n;
  r.alphabet = alphabet;
  return r;
}

NFA trim(const NFA& n) {
  std::vector<std::vector<int>> fw(n.size()), bw(n.size());
  for (const auto& [p, a, q] : n.trans) {
    fw[p].push_back(q);
    bw[q].push_back(p);
  }
  auto reach = [&](const std::set<int>& from, const std::vector<std::vector<int>>& adj) {
    std::vector<char> seen(n.size(), 0);
    std::vector<int> st(from.begin(), from.end());
    for (int q : st) seen[q] = 1;
    while (!st.empty()) {
      int q = st.back();
      st.pop_back();
      for (int r : adj[q])
        if (!seen[r]) {
          seen[r] = 1;
          st.push_back(r);
        }
    }
    return seen;
  };
  auto f = reach(n.initial, fw), b = reach(n.final, bw);
  NFA r;
  r.alphabet = n.alphabet;
  std::vector<int> id(n.size(), -1);
  for (std::size_t q = 0; q < n.size(); ++q)
    if (f[q] && b[q]) id[q] = r.add_state(n.states[q], n.initial.count(int(q)), n.final.count(int(q)));
  for (const auto& [p, a, q] : n.trans)
    if (id[p] >= 0 && id[q] >= 0) r.trans.insert({id[p], a, id[q]});
  if (r.size() == 0) r.add_state("empty");
  return r;
}

bool nfa_empty(const NFA& n) {
  NFA t = trim(n);
  return t.initial.empty() || t.final.empty();
}

NFA nfa_universal(const std::set<Symbol>& alphabet) {
  NFA r;
  r.alphabet = alphabet;
  int q = r.add_state("all", true, true);
  for (const auto& a : alphabet) r.trans.insert({q, a, q});
  return r;
}

NFA nfa_empty_language(const std::set<Symbol>& alphabet) {
  NFA r;
  r.alphabet = alphabet;
  r.add_state("none", true, false);
  return r;
}

NFA nfa_word(const std::set<Symbol>& alphabet, const Word& w) {
  NFA r;
  r.alphabet = alphabet;
  int q = r.add_state("p0", true, w.empty());
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!alphabet.count(w[i])) throw Error(ErrorKind::UnknownSymbol, "symbol '" + w[i] + "' not in the alphabet");
    int q2 = r.add_state("p" + std::to_string(i + 1), false, i + 1 == w.size());
    r.trans.insert({q, w[i], q2});
    q = q2;
  }
  return r;
}

NFA nfa_combine(NfaOp op, const std::vector<NFA>& in, std::size_t index, const std::map<Symbol, Symbol>& rename) {
  std::size_t need = (op == NfaOp::Union || op == NfaOp::Intersect) ? 2 : 1;
  if (in.size() != need) throw Error(ErrorKind::AlphabetMismatch, "wrong number of automata for the operation");
  switch (op) {
    case NfaOp::Union: return nfa_union(in[0], in[1]);
    case NfaOp::Intersect: return nfa_intersect(in[0], in[1]);
    case NfaOp::Complement: return nfa_complement(in[0]);
    case NfaOp::Project: return nfa_project(in[0], index);
    case NfaOp::Rename: return nfa_rename(in[0], rename);
  }
  return in[0];
}

std::vector<Word> all_words(const std::vector<Symbol>& alphabet, int n) {
  std::vector<Word> out{Word{}};
  std::size_t lo = 0;
  for (int len = 1; len <= n; ++len) {
    std::size_t hi = out.size();
    for (std::size_t i = lo; i < hi; ++i)
      for (const auto& a : alphabet) {
        Word w = out[i];
        w.push_back(a);
        out.push_back(std::move(w));
      }
    lo = hi;
  }
  return out;
}

}  // namespace msoga
