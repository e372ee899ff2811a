//
// ddigraph - Copyright 2026 The ddigraph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef DDIGRAPH_SMILES_HPP_
#define DDIGRAPH_SMILES_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace ddigraph {

inline constexpr int kMaxAtomsPerDrug = 50;

enum class BondOrder : std::uint8_t { kSingle, kDouble, kTriple, kAromatic };

struct Atom {
  std::string element;  // capitalized symbol, e.g. "C", "Cl", "Na"
  int formal_charge = 0;
  bool aromatic = false;
  int hydrogens = 0;    // implicit (organic subset) or explicit (bracket)
};

struct Bond {
  int a;
  int b;
  BondOrder order;
};

struct Molecule {
  std::vector<Atom> atoms;
  std::vector<Bond> bonds;

  int size() const { return static_cast<int>(atoms.size()); }
  // Neighbor lists in bond order; each bond appears once per endpoint.
  std::vector<std::vector<int>> neighbors() const;
};

/// Parses a SMILES string restricted to the supported subset:
/// organic-subset atoms (B C N O P S F Cl Br I and aromatic b c n o p s),
/// bracket atoms with element, explicit H count and charge, bond symbols
/// `- = # :`, branches, ring closures (digits and `%nn`).
///
/// Stereo marks, isotopes, atom classes, wildcards and `.` are rejected.
/// Throws ParseError with the character offset on failure.
Molecule parse_smiles(std::string_view text);

// Feature layout, in column order.
inline constexpr std::array<std::string_view, 10> kElementVocabulary = {
  "B", "C", "N", "O", "P", "S", "F", "Cl", "Br", "I",
};
inline constexpr int kElementSlots = 11;  // vocabulary + "other"
inline constexpr int kDegreeSlots = 7;    // 0..6
inline constexpr int kChargeSlots = 5;    // -2..+2
inline constexpr int kHydrogenSlots = 5;  // 0..4
inline constexpr int kElementOffset = 0;
inline constexpr int kDegreeOffset = kElementOffset + kElementSlots;
inline constexpr int kChargeOffset = kDegreeOffset + kDegreeSlots;
inline constexpr int kHydrogenOffset = kChargeOffset + kChargeSlots;
inline constexpr int kAromaticOffset = kHydrogenOffset + kHydrogenSlots;
inline constexpr int kAtomFeatureDim = kAromaticOffset + 1;
static_assert(kAtomFeatureDim == 29);

struct FeaturedGraph {
  Eigen::MatrixXd features;   // N x kAtomFeatureDim
  Eigen::MatrixXd adjacency;  // N x N, binary, symmetric, zero diagonal

  int size() const { return static_cast<int>(features.rows()); }
};

/// Encodes each atom as one-hot blocks (element, heavy-atom degree, formal
/// charge, attached hydrogens) plus an aromatic flag. Out-of-range degree,
/// charge and hydrogen values are clamped into the edge slots. All bond
/// orders collapse to 1 in the adjacency.
FeaturedGraph featurize(const Molecule &mol);

}  // namespace ddigraph

#endif  // DDIGRAPH_SMILES_HPP_
