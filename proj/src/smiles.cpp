//
// ddigraph - Copyright 2026 The ddigraph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "ddigraph/smiles.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ddigraph/error.hpp"

namespace ddigraph {
namespace {

constexpr std::string_view kElements[] = {
  "H",  "He", "Li", "Be", "B",  "C",  "N",  "O",  "F",  "Ne", "Na", "Mg",
  "Al", "Si", "P",  "S",  "Cl", "Ar", "K",  "Ca", "Sc", "Ti", "V",  "Cr",
  "Mn", "Fe", "Co", "Ni", "Cu", "Zn", "Ga", "Ge", "As", "Se", "Br", "Kr",
  "Rb", "Sr", "Y",  "Zr", "Nb", "Mo", "Tc", "Ru", "Rh", "Pd", "Ag", "Cd",
  "In", "Sn", "Sb", "Te", "I",  "Xe", "Cs", "Ba", "La", "Ce", "Pr", "Nd",
  "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm", "Yb", "Lu", "Hf",
  "Ta", "W",  "Re", "Os", "Ir", "Pt", "Au", "Hg", "Tl", "Pb", "Bi", "Po",
  "At", "Rn", "Fr", "Ra", "Ac", "Th", "Pa", "U",  "Np", "Pu", "Am", "Cm",
  "Bk", "Cf", "Es", "Fm", "Md", "No", "Lr", "Rf", "Db", "Sg", "Bh", "Hs",
  "Mt", "Ds", "Rg", "Cn", "Nh", "Fl", "Mc", "Lv", "Ts", "Og",
};

bool is_element(std::string_view sym) {
  return std::find(std::begin(kElements), std::end(kElements), sym)
         != std::end(kElements);
}

std::vector<int> standard_valences(std::string_view element) {
  if (element == "B")
    return { 3 };
  if (element == "C")
    return { 4 };
  if (element == "N" || element == "P")
    return { 3, 5 };
  if (element == "O")
    return { 2 };
  if (element == "S")
    return { 2, 4, 6 };
  if (element == "F" || element == "Cl" || element == "Br" || element == "I")
    return { 1 };
  return {};
}

struct RingOpening {
  int atom;
  std::optional<BondOrder> order;
  std::size_t position;
};

class Parser {
public:
  explicit Parser(std::string_view text): text_(text) { }

  Molecule run() {
    if (text_.empty())
      throw ParseError(ErrorCode::kEmptyInput, 0, "empty SMILES");

    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '(') {
        open_branch();
      } else if (c == ')') {
        close_branch();
      } else if (c == '-' || c == '=' || c == '#' || c == ':') {
        bond_symbol(c);
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '%') {
        ring_closure();
      } else if (c == '[') {
        bracket_atom();
      } else if (std::isalpha(static_cast<unsigned char>(c))) {
        organic_atom();
      } else {
        throw ParseError(ErrorCode::kUnsupportedToken, pos_,
                         std::string("unsupported token '") + c + "'");
      }
    }

    if (!branches_.empty())
      throw ParseError(ErrorCode::kUnclosedBranch, branches_.back().second,
                       "branch opened but never closed");
    if (!rings_.empty()) {
      const auto &[num, open] = *rings_.begin();
      throw ParseError(ErrorCode::kUnmatchedRingBond, open.position,
                       "ring bond " + std::to_string(num) + " never closed");
    }
    if (pending_)
      throw ParseError(ErrorCode::kInvalidBond, pending_pos_,
                       "bond symbol without a following atom");
    if (mol_.atoms.empty())
      throw ParseError(ErrorCode::kEmptyInput, 0, "no atoms");

    assign_implicit_hydrogens();
    return std::move(mol_);
  }

private:
  void open_branch() {
    if (prev_ < 0)
      throw ParseError(ErrorCode::kUnsupportedToken, pos_,
                       "branch without a preceding atom");
    if (pending_)
      throw ParseError(ErrorCode::kInvalidBond, pending_pos_,
                       "bond symbol before branch");
    branches_.emplace_back(prev_, pos_);
    ++pos_;
  }

  void close_branch() {
    if (branches_.empty())
      throw ParseError(ErrorCode::kUnclosedBranch, pos_,
                       "')' without matching '('");
    if (pending_)
      throw ParseError(ErrorCode::kInvalidBond, pending_pos_,
                       "bond symbol at end of branch");
    prev_ = branches_.back().first;
    branches_.pop_back();
    ++pos_;
  }

  void bond_symbol(char c) {
    if (prev_ < 0 || pending_)
      throw ParseError(ErrorCode::kInvalidBond, pos_, "misplaced bond symbol");
    switch (c) {
    case '-':
      pending_ = BondOrder::kSingle;
      break;
    case '=':
      pending_ = BondOrder::kDouble;
      break;
    case '#':
      pending_ = BondOrder::kTriple;
      break;
    default:
      pending_ = BondOrder::kAromatic;
      break;
    }
    pending_pos_ = pos_;
    ++pos_;
  }

  void ring_closure() {
    const std::size_t start = pos_;
    int num;
    if (text_[pos_] == '%') {
      if (pos_ + 2 >= text_.size()
          || !std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))
          || !std::isdigit(static_cast<unsigned char>(text_[pos_ + 2])))
        throw ParseError(ErrorCode::kUnsupportedToken, pos_,
                         "'%' must be followed by two digits");
      num = (text_[pos_ + 1] - '0') * 10 + (text_[pos_ + 2] - '0');
      pos_ += 3;
    } else {
      num = text_[pos_] - '0';
      ++pos_;
    }
    if (prev_ < 0)
      throw ParseError(ErrorCode::kUnmatchedRingBond, start,
                       "ring bond without a preceding atom");

    auto it = rings_.find(num);
    if (it == rings_.end()) {
      rings_.emplace(num, RingOpening { prev_, pending_, start });
      pending_.reset();
      return;
    }

    const RingOpening open = it->second;
    rings_.erase(it);
    std::optional<BondOrder> order = pending_;
    if (open.order) {
      if (order && *order != *open.order)
        throw ParseError(ErrorCode::kInvalidBond, start,
                         "conflicting ring bond orders");
      order = open.order;
    }
    pending_.reset();
    add_bond(open.atom, prev_, order, start);
  }

  void organic_atom() {
    const std::size_t start = pos_;
    std::string symbol;
    bool aromatic = false;
    const std::string_view rest = text_.substr(pos_);
    if (rest.starts_with("Cl") || rest.starts_with("Br")) {
      symbol = std::string(rest.substr(0, 2));
      pos_ += 2;
    } else {
      const char c = rest[0];
      switch (c) {
      case 'B':
      case 'C':
      case 'N':
      case 'O':
      case 'P':
      case 'S':
      case 'F':
      case 'I':
        symbol = std::string(1, c);
        break;
      case 'b':
      case 'c':
      case 'n':
      case 'o':
      case 'p':
      case 's':
        symbol = std::string(1, static_cast<char>(std::toupper(c)));
        aromatic = true;
        break;
      default:
        throw ParseError(ErrorCode::kUnsupportedToken, start,
                         std::string("unsupported atom '") + c + "'");
      }
      ++pos_;
    }
    add_atom(Atom { symbol, 0, aromatic, 0 }, false, start);
  }

  void bracket_atom() {
    const std::size_t start = pos_;
    ++pos_;
    auto peek = [&]() -> char {
      if (pos_ >= text_.size())
        throw ParseError(ErrorCode::kUnsupportedToken, start,
                         "unterminated bracket atom");
      return text_[pos_];
    };

    if (std::isdigit(static_cast<unsigned char>(peek())))
      throw ParseError(ErrorCode::kUnsupportedToken, pos_,
                       "isotopes are not supported");

    Atom atom;
    const char first = peek();
    if (std::islower(static_cast<unsigned char>(first))) {
      // aromatic: b c n o p s, se, as
      const std::string_view rest = text_.substr(pos_);
      if (rest.starts_with("se") || rest.starts_with("as")) {
        atom.element = rest.starts_with("se") ? "Se" : "As";
        pos_ += 2;
      } else if (std::string_view("bcnops").find(first)
                 != std::string_view::npos) {
        atom.element = std::string(1, static_cast<char>(std::toupper(first)));
        ++pos_;
      } else {
        throw ParseError(ErrorCode::kUnsupportedToken, pos_,
                         std::string("unsupported aromatic atom '") + first
                             + "'");
      }
      atom.aromatic = true;
    } else if (std::isupper(static_cast<unsigned char>(first))) {
      std::string two;
      if (pos_ + 1 < text_.size()
          && std::islower(static_cast<unsigned char>(text_[pos_ + 1])))
        two = std::string(text_.substr(pos_, 2));
      if (!two.empty() && is_element(two)) {
        atom.element = two;
        pos_ += 2;
      } else if (is_element(std::string_view(&text_[pos_], 1))) {
        atom.element = std::string(1, first);
        ++pos_;
      } else {
        throw ParseError(ErrorCode::kUnsupportedToken, pos_,
                         "unknown element");
      }
    } else {
      throw ParseError(ErrorCode::kUnsupportedToken, pos_,
                       std::string("unsupported token '") + first
                           + "' in bracket atom");
    }

    if (peek() == '@')
      throw ParseError(ErrorCode::kUnsupportedToken, pos_,
                       "chirality is not supported");

    if (peek() == 'H') {
      ++pos_;
      atom.hydrogens = 1;
      if (std::isdigit(static_cast<unsigned char>(peek()))) {
        atom.hydrogens = peek() - '0';
        ++pos_;
      }
    }

    if (peek() == '+' || peek() == '-') {
      const char sign_char = peek();
      const int sign = sign_char == '+' ? 1 : -1;
      ++pos_;
      int magnitude = 1;
      if (std::isdigit(static_cast<unsigned char>(peek()))) {
        magnitude = 0;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
          magnitude = magnitude * 10 + (peek() - '0');
          ++pos_;
        }
      } else {
        while (peek() == sign_char) {
          ++magnitude;
          ++pos_;
        }
      }
      atom.formal_charge = sign * magnitude;
    }

    if (peek() != ']')
      throw ParseError(ErrorCode::kUnsupportedToken, pos_,
                       std::string("unsupported token '") + peek()
                           + "' in bracket atom");
    ++pos_;
    add_atom(std::move(atom), true, start);
  }

  void add_atom(Atom atom, bool bracket, std::size_t position) {
    if (mol_.size() >= kMaxAtomsPerDrug)
      throw ParseError(ErrorCode::kAtomCapExceeded, position,
                       "more than " + std::to_string(kMaxAtomsPerDrug)
                           + " atoms");
    const int idx = mol_.size();
    mol_.atoms.push_back(std::move(atom));
    bracket_.push_back(bracket);
    if (prev_ >= 0) {
      add_bond(prev_, idx, pending_, pending_ ? pending_pos_ : position);
    } else if (pending_) {
      throw ParseError(ErrorCode::kInvalidBond, pending_pos_,
                       "bond symbol without a preceding atom");
    }
    pending_.reset();
    prev_ = idx;
  }

  void add_bond(int a, int b, std::optional<BondOrder> order,
                std::size_t position) {
    if (a == b)
      throw ParseError(ErrorCode::kInvalidBond, position, "self bond");
    for (const Bond &bond: mol_.bonds) {
      if ((bond.a == a && bond.b == b) || (bond.a == b && bond.b == a))
        throw ParseError(ErrorCode::kInvalidBond, position, "duplicate bond");
    }
    if (!order) {
      order = mol_.atoms[a].aromatic && mol_.atoms[b].aromatic
                  ? BondOrder::kAromatic
                  : BondOrder::kSingle;
    }
    mol_.bonds.push_back({ a, b, *order });
  }

  void assign_implicit_hydrogens() {
    std::vector<int> order_sum(mol_.atoms.size(), 0);
    std::vector<int> bond_count(mol_.atoms.size(), 0);
    for (const Bond &bond: mol_.bonds) {
      int v = 1;
      if (bond.order == BondOrder::kDouble)
        v = 2;
      else if (bond.order == BondOrder::kTriple)
        v = 3;
      for (int end: { bond.a, bond.b }) {
        // aromatic bonds count as single here; the aromatic atom gets +1
        order_sum[end] += v;
        ++bond_count[end];
      }
    }

    for (std::size_t i = 0; i < mol_.atoms.size(); ++i) {
      if (bracket_[i])
        continue;
      Atom &atom = mol_.atoms[i];
      const std::vector<int> valences = standard_valences(atom.element);
      if (atom.aromatic) {
        atom.hydrogens = std::max(0, valences.front() - (order_sum[i] + 1));
        continue;
      }
      atom.hydrogens = 0;
      for (int v: valences) {
        if (v >= order_sum[i]) {
          atom.hydrogens = v - order_sum[i];
          break;
        }
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Molecule mol_;
  std::vector<bool> bracket_;
  int prev_ = -1;
  std::optional<BondOrder> pending_;
  std::size_t pending_pos_ = 0;
  std::vector<std::pair<int, std::size_t>> branches_;
  std::map<int, RingOpening> rings_;
};

}  // namespace

std::vector<std::vector<int>> Molecule::neighbors() const {
  std::vector<std::vector<int>> adj(atoms.size());
  for (const Bond &bond: bonds) {
    adj[bond.a].push_back(bond.b);
    adj[bond.b].push_back(bond.a);
  }
  return adj;
}

Molecule parse_smiles(std::string_view text) {
  return Parser(text).run();
}

FeaturedGraph featurize(const Molecule &mol) {
  const int n = mol.size();
  FeaturedGraph g;
  g.features = Eigen::MatrixXd::Zero(n, kAtomFeatureDim);
  g.adjacency = Eigen::MatrixXd::Zero(n, n);

  for (const Bond &bond: mol.bonds) {
    g.adjacency(bond.a, bond.b) = 1.0;
    g.adjacency(bond.b, bond.a) = 1.0;
  }

  for (int i = 0; i < n; ++i) {
    const Atom &atom = mol.atoms[i];
    const auto it = std::find(kElementVocabulary.begin(),
                              kElementVocabulary.end(), atom.element);
    const int elem = static_cast<int>(it - kElementVocabulary.begin());
    g.features(i, kElementOffset + elem) = 1.0;

    const int degree = static_cast<int>(g.adjacency.row(i).sum());
    g.features(i, kDegreeOffset + std::clamp(degree, 0, kDegreeSlots - 1)) =
        1.0;
    g.features(i, kChargeOffset + std::clamp(atom.formal_charge, -2, 2) + 2) =
        1.0;
    g.features(i, kHydrogenOffset
                      + std::clamp(atom.hydrogens, 0, kHydrogenSlots - 1)) =
        1.0;
    g.features(i, kAromaticOffset) = atom.aromatic ? 1.0 : 0.0;
  }
  return g;
}

}  // namespace ddigraph
