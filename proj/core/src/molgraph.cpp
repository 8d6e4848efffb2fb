//
// Project Apoflow - Copyright 2026 Apoflow Developers.
// SPDX-License-Identifier: Apache-2.0
//

#include "apoflow/molgraph.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "apoflow/errors.hpp"

namespace apoflow {

namespace {

const std::unordered_set<std::string>& element_table() {
  static const std::unordered_set<std::string> table = {
      "H",  "He", "Li", "Be", "B",  "C",  "N",  "O",  "F",  "Ne", "Na", "Mg",
      "Al", "Si", "P",  "S",  "Cl", "Ar", "K",  "Ca", "Sc", "Ti", "V",  "Cr",
      "Mn", "Fe", "Co", "Ni", "Cu", "Zn", "Ga", "Ge", "As", "Se", "Br", "Kr",
      "Rb", "Sr", "Y",  "Zr", "Nb", "Mo", "Tc", "Ru", "Rh", "Pd", "Ag", "Cd",
      "In", "Sn", "Sb", "Te", "I",  "Xe", "Cs", "Ba", "La", "Ce", "Pr", "Nd",
      "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm", "Yb", "Lu", "Hf",
      "Ta", "W",  "Re", "Os", "Ir", "Pt", "Au", "Hg", "Tl", "Pb", "Bi", "Po",
      "At", "Rn", "Fr", "Ra", "Ac", "Th", "Pa", "U",  "Np", "Pu"};
  return table;
}

struct ParserAtom {
  std::string element;
  bool aromatic = false;
  int fragment = 0;
  std::size_t offset = 0;
};

struct RingOpen {
  int atom = -1;
  std::optional<BondOrder> order;
  std::size_t offset = 0;
};

struct Parser {
  std::string_view text;
  std::size_t pos = 0;

  std::vector<ParserAtom> atoms;
  std::vector<Bond> bonds;
  std::vector<std::string> warnings;
  std::set<std::pair<int, int>> edge_set;

  int prev_atom = -1;
  std::optional<BondOrder> pending;
  std::size_t pending_offset = 0;
  std::vector<std::pair<int, std::size_t>> branch_stack;  // (atom, '(' offset)
  std::map<int, RingOpen> open_rings;
  int fragment = 0;
  std::size_t fragment_start = 0;
  int atoms_in_fragment = 0;

  [[noreturn]] void fail(const std::string& what, std::size_t at) const {
    throw ParseError(what + " at byte " + std::to_string(at), at);
  }

  char peek() const { return pos < text.size() ? text[pos] : '\0'; }

  void add_bond(int a, int b, std::optional<BondOrder> order, std::size_t at) {
    if (a == b) fail("ring closure forms a self-loop", at);
    auto key = std::minmax(a, b);
    if (!edge_set.insert({key.first, key.second}).second)
      fail("duplicate bond", at);
    BondOrder resolved = order.value_or(
        atoms[a].aromatic && atoms[b].aromatic ? BondOrder::Aromatic
                                               : BondOrder::Single);
    bonds.push_back({a, b, resolved});
  }

  void attach(int atom_idx, std::size_t at) {
    if (prev_atom >= 0) {
      add_bond(prev_atom, atom_idx, pending, at);
    } else if (pending) {
      fail("bond symbol with no preceding atom", pending_offset);
    }
    pending.reset();
    prev_atom = atom_idx;
    ++atoms_in_fragment;
  }

  int new_atom(std::string element, bool aromatic, std::size_t at) {
    atoms.push_back({std::move(element), aromatic, fragment, at});
    return static_cast<int>(atoms.size()) - 1;
  }

  void close_fragment(std::size_t at) {
    if (atoms_in_fragment == 0) fail("empty fragment", fragment_start);
    if (!branch_stack.empty())
      fail("unbalanced '('", branch_stack.back().second);
    if (!open_rings.empty()) {
      const auto& r = *open_rings.begin();
      fail("unpaired ring-closure digit " + std::to_string(r.first) +
               " in fragment",
           r.second.offset);
    }
    if (pending) fail("dangling bond symbol", pending_offset);
    (void)at;
  }

  void ring_digit(int digit, std::size_t at) {
    if (prev_atom < 0) fail("ring-closure digit before any atom", at);
    auto it = open_rings.find(digit);
    if (it == open_rings.end()) {
      open_rings[digit] = {prev_atom, pending, at};
      pending.reset();
      return;
    }
    RingOpen open = it->second;
    open_rings.erase(it);
    std::optional<BondOrder> order;
    if (open.order && pending && *open.order != *pending)
      fail("mismatched ring-closure bond orders", at);
    order = open.order ? open.order : pending;
    pending.reset();
    add_bond(open.atom, prev_atom, order, at);
  }

  void parse_bracket() {
    const std::size_t start = pos;
    ++pos;  // '['
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      std::size_t iso = pos;
      while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos;
      warnings.push_back("isotope label ignored at byte " +
                         std::to_string(iso));
    }
    std::string element;
    bool aromatic = false;
    char c = peek();
    if (std::isupper(static_cast<unsigned char>(c))) {
      element += c;
      ++pos;
      if (std::islower(static_cast<unsigned char>(peek()))) {
        std::string two = element + peek();
        if (element_table().count(two)) {
          element = two;
          ++pos;
        }
      }
    } else if (std::islower(static_cast<unsigned char>(c))) {
      static const std::unordered_set<std::string> aromatic_ok = {
          "b", "c", "n", "o", "p", "s", "se", "as"};
      std::string sym(1, c);
      ++pos;
      if (std::islower(static_cast<unsigned char>(peek())) &&
          aromatic_ok.count(sym + peek())) {
        sym += peek();
        ++pos;
      }
      if (!aromatic_ok.count(sym)) fail("unknown element token", start + 1);
      aromatic = true;
      element = sym;
      element[0] = static_cast<char>(std::toupper(element[0]));
    } else {
      fail("unknown element token", pos);
    }
    if (!element_table().count(element))
      fail("unknown element token '" + element + "'", start + 1);

    while (peek() == '@') {
      warnings.push_back("stereo mark '@' ignored at byte " +
                         std::to_string(pos));
      ++pos;
    }
    if (peek() == 'H') {
      ++pos;
      while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos;
    }
    if (peek() == '+' || peek() == '-') {
      std::size_t at = pos;
      char sign = peek();
      while (peek() == sign) ++pos;
      while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos;
      warnings.push_back(std::string("charge '") + sign +
                         "' ignored at byte " + std::to_string(at));
    }
    if (peek() == ':') {  // atom-map class
      ++pos;
      if (!std::isdigit(static_cast<unsigned char>(peek())))
        fail("malformed atom-map class", pos);
      while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos;
    }
    if (peek() != ']') fail("expected ']'", pos);
    ++pos;

    if (element == "H") {
      // Explicit hydrogen: parsed, then dropped from the heavy-atom graph.
      warnings.push_back("explicit [H] atom dropped at byte " +
                         std::to_string(start));
    }
    attach(new_atom(element, aromatic, start), start);
  }

  void run() {
    if (text.empty()) throw ParseError("empty SMILES input at byte 0", 0);
    while (pos < text.size()) {
      const std::size_t at = pos;
      const char c = text[pos];
      if (c == ' ' || c == '\t') {
        fail("whitespace inside SMILES", at);
      } else if (c == '-') {
        if (pending) fail("doubled bond symbol", at);
        pending = BondOrder::Single;
        pending_offset = at;
        ++pos;
      } else if (c == '=') {
        if (pending) fail("doubled bond symbol", at);
        pending = BondOrder::Double;
        pending_offset = at;
        ++pos;
      } else if (c == '#') {
        if (pending) fail("doubled bond symbol", at);
        pending = BondOrder::Triple;
        pending_offset = at;
        ++pos;
      } else if (c == ':') {
        if (pending) fail("doubled bond symbol", at);
        pending = BondOrder::Aromatic;
        pending_offset = at;
        ++pos;
      } else if (c == '/' || c == '\\') {
        if (pending) fail("doubled bond symbol", at);
        warnings.push_back(std::string("stereo bond '") + c +
                           "' treated as single at byte " + std::to_string(at));
        pending = BondOrder::Single;
        pending_offset = at;
        ++pos;
      } else if (c == '(') {
        if (prev_atom < 0) fail("branch before any atom", at);
        if (pending) fail("bond symbol before '('", pending_offset);
        branch_stack.emplace_back(prev_atom, at);
        ++pos;
      } else if (c == ')') {
        if (branch_stack.empty()) fail("unbalanced ')'", at);
        if (pending) fail("dangling bond symbol", pending_offset);
        prev_atom = branch_stack.back().first;
        branch_stack.pop_back();
        ++pos;
      } else if (c == '.') {
        if (!branch_stack.empty()) fail("'.' inside a branch", at);
        close_fragment(at);
        ++fragment;
        fragment_start = at + 1;
        atoms_in_fragment = 0;
        prev_atom = -1;
        ++pos;
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        ring_digit(c - '0', at);
        ++pos;
      } else if (c == '%') {
        if (pos + 2 >= text.size() ||
            !std::isdigit(static_cast<unsigned char>(text[pos + 1])) ||
            !std::isdigit(static_cast<unsigned char>(text[pos + 2])))
          fail("malformed %nn ring closure", at);
        ring_digit((text[pos + 1] - '0') * 10 + (text[pos + 2] - '0'), at);
        pos += 3;
      } else if (c == '[') {
        parse_bracket();
      } else if (std::isupper(static_cast<unsigned char>(c))) {
        std::string element(1, c);
        ++pos;
        // Two-letter organic-subset symbols.
        if ((c == 'C' && peek() == 'l') || (c == 'B' && peek() == 'r')) {
          element += peek();
          ++pos;
        }
        static const std::unordered_set<std::string> organic = {
            "B", "C", "N", "O", "P", "S", "F", "Cl", "Br", "I"};
        if (!organic.count(element))
          fail("unknown element token '" + element + "'", at);
        attach(new_atom(element, false, at), at);
      } else if (std::islower(static_cast<unsigned char>(c))) {
        static const std::unordered_set<char> aromatic_organic = {'b', 'c', 'n',
                                                                  'o', 'p', 's'};
        if (!aromatic_organic.count(c))
          fail(std::string("unknown element token '") + c + "'", at);
        std::string element(1, static_cast<char>(std::toupper(c)));
        ++pos;
        attach(new_atom(element, true, at), at);
      } else {
        fail(std::string("unexpected character '") + c + "'", at);
      }
    }
    close_fragment(text.size());
  }
};

}  // namespace

MolGraph parse_smiles(std::string_view text) {
  Parser parser{text};
  parser.run();

  // Drop explicit hydrogens; the graph is heavy-atom only.
  std::vector<int> remap(parser.atoms.size(), -1);
  MolGraph graph;
  graph.warnings = std::move(parser.warnings);
  std::vector<int> raw_fragment;
  for (std::size_t i = 0; i < parser.atoms.size(); ++i) {
    if (parser.atoms[i].element == "H") continue;
    remap[i] = graph.atom_count();
    graph.atoms.push_back(parser.atoms[i].element);
    raw_fragment.push_back(parser.atoms[i].fragment);
  }
  for (const Bond& b : parser.bonds) {
    if (remap[b.a] < 0 || remap[b.b] < 0) continue;
    graph.bonds.push_back({remap[b.a], remap[b.b], b.order});
  }

  // Relabel fragments contiguously; a fragment reduced to nothing by the
  // hydrogen drop is an error, same as an empty fragment in the source text.
  std::vector<int> label(parser.fragment + 1, -1);
  int next = 0;
  for (int f : raw_fragment)
    if (label[f] < 0) label[f] = next++;
  for (int f = 0; f <= parser.fragment; ++f)
    if (label[f] < 0)
      throw ParseError("empty fragment (only hydrogens) at byte 0", 0);
  graph.fragment_ids.reserve(raw_fragment.size());
  for (int f : raw_fragment) graph.fragment_ids.push_back(label[f]);
  return graph;
}

int MolGraph::fragment_count() const {
  int n = 0;
  for (int f : fragment_ids) n = std::max(n, f + 1);
  return n;
}

std::vector<int> MolGraph::fragment_atoms(int fragment) const {
  std::vector<int> out;
  for (int i = 0; i < atom_count(); ++i)
    if (fragment_ids[i] == fragment) out.push_back(i);
  return out;
}

int MolGraph::degree(int atom) const {
  int d = 0;
  for (const Bond& b : bonds)
    if (b.a == atom || b.b == atom) ++d;
  return d;
}

FragmentLaplacian laplacian(const MolGraph& graph, int fragment) {
  const std::vector<int> members = graph.fragment_atoms(fragment);
  if (members.empty())
    throw std::invalid_argument("unknown fragment id " +
                                std::to_string(fragment));
  std::vector<int> local(graph.atom_count(), -1);
  for (std::size_t i = 0; i < members.size(); ++i)
    local[members[i]] = static_cast<int>(i);

  FragmentLaplacian lap;
  lap.size = static_cast<int>(members.size());
  lap.entries = Eigen::MatrixXd::Zero(lap.size, lap.size);
  for (const Bond& b : graph.bonds) {
    const int i = local[b.a];
    const int j = local[b.b];
    if (i < 0 || j < 0) continue;
    lap.entries(i, i) += 1.0;
    lap.entries(j, j) += 1.0;
    lap.entries(i, j) -= 1.0;
    lap.entries(j, i) -= 1.0;
  }
  return lap;
}

namespace {

struct AutomorphismSearch {
  int n = 0;
  std::vector<std::vector<int>> adj;  // adj[i][j] = bond order int, 0 = none
  std::vector<int> klass;             // element+degree refinement class
  std::size_t cap = 0;
  std::vector<int> perm;
  std::vector<bool> used;
  AutomorphismSet out;

  bool extend(int i) {
    if (i == n) {
      out.permutations.push_back(perm);
      if (out.permutations.size() == cap) {
        out.truncated = true;
        return false;  // stop the whole search
      }
      return true;
    }
    for (int cand = 0; cand < n; ++cand) {
      if (used[cand] || klass[cand] != klass[i]) continue;
      bool ok = true;
      for (int j = 0; j < i; ++j) {
        if (adj[i][j] != adj[cand][perm[j]]) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      perm[i] = cand;
      used[cand] = true;
      const bool keep_going = extend(i + 1);
      used[cand] = false;
      if (!keep_going) return false;
    }
    return true;
  }
};

}  // namespace

AutomorphismSet automorphisms(const MolGraph& graph, int fragment,
                              std::size_t cap) {
  if (cap == 0) throw std::invalid_argument("automorphism cap must be positive");
  const std::vector<int> members = graph.fragment_atoms(fragment);
  if (members.empty())
    throw std::invalid_argument("unknown fragment id " +
                                std::to_string(fragment));
  if (members.size() > 64)
    throw std::invalid_argument("fragment too large for automorphism search (" +
                                std::to_string(members.size()) + " > 64 atoms)");

  const int n = static_cast<int>(members.size());
  std::vector<int> local(graph.atom_count(), -1);
  for (int i = 0; i < n; ++i) local[members[i]] = i;

  AutomorphismSearch search;
  search.n = n;
  search.cap = cap;
  search.adj.assign(n, std::vector<int>(n, 0));
  for (const Bond& b : graph.bonds) {
    const int i = local[b.a];
    const int j = local[b.b];
    if (i < 0 || j < 0) continue;
    search.adj[i][j] = search.adj[j][i] = static_cast<int>(b.order);
  }

  // Refinement classes: (element, degree) pairs mapped to dense ids.
  std::map<std::pair<std::string, int>, int> classes;
  search.klass.resize(n);
  for (int i = 0; i < n; ++i) {
    int deg = 0;
    for (int j = 0; j < n; ++j)
      if (search.adj[i][j]) ++deg;
    auto key = std::make_pair(graph.atoms[members[i]], deg);
    auto [it, _] = classes.try_emplace(key, static_cast<int>(classes.size()));
    search.klass[i] = it->second;
  }

  search.perm.assign(n, -1);
  search.used.assign(n, false);
  search.extend(0);
  return search.out;
}

}  // namespace apoflow
