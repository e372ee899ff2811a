//
// ddigraph - Copyright 2026 The ddigraph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef DDIGRAPH_SYNTHETIC_HPP_
#define DDIGRAPH_SYNTHETIC_HPP_

// Constructed datasets with known labelling rules, used by the tests, the
// acceptance suite and `ddigraph synth`.
//
// Pair labels are symmetric in the two drugs: the joint graph and its sum
// readout do not distinguish which block an atom came from.

#include <cstdint>
#include <string>
#include <vector>

#include "ddigraph/smiles.hpp"
#include "ddigraph/training.hpp"

namespace ddigraph::synthetic {

/// Approved small-molecule drugs written in the supported SMILES subset.
const std::vector<std::string> &reference_drugs();

bool has_element(const Molecule &mol, std::string_view element);
bool has_halogen(const Molecule &mol);
bool has_carboxylic_acid(const Molecule &mol);
bool has_aromatic_nitrogen(const Molecule &mol);

/// Random small acyclic or benzene-bearing molecule. `oxygen` and `halogen`
/// decide whether hydroxyl and halogen substituents appear; nitrogen and
/// sulfur groups are sprinkled in as distractors.
std::string random_molecule(Rng &rng, bool oxygen, bool halogen);

/// Two classes: label 1 iff the first drug contains oxygen. The second drug
/// never does.
std::vector<DDISample> oxygen_dataset(int n, std::uint64_t seed);

/// Four classes: label = [pair has a hydroxyl] + 2 [pair has a halogen],
/// balanced by construction.
std::vector<DDISample> functional_group_dataset(int n, std::uint64_t seed);

/// Rule for the reference-drug pair set: an imbalanced six-way function of
/// halogen, carboxylic-acid, sulfur and aromatic-nitrogen presence.
int reference_pair_label(const Molecule &a, const Molecule &b);
inline constexpr int kReferenceClasses = 6;

/// n random pairs of reference drugs labelled by reference_pair_label.
std::vector<DDISample> reference_pair_dataset(int n, std::uint64_t seed);

/// Dataset file text (comma-delimited, header smiles_1,smiles_2,label).
std::string to_csv(const std::vector<DDISample> &samples);

}  // namespace ddigraph::synthetic

#endif  // DDIGRAPH_SYNTHETIC_HPP_
