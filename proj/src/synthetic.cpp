//
// ddigraph - Copyright 2026 The ddigraph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "ddigraph/synthetic.hpp"

#include <algorithm>
#include <array>
#include <sstream>

#include "ddigraph/rng.hpp"

namespace ddigraph::synthetic {

const std::vector<std::string> &reference_drugs() {
  static const std::vector<std::string> drugs = {
    "CC(=O)Oc1ccccc1C(=O)O",                      // aspirin
    "CC(C)Cc1ccc(cc1)C(C)C(=O)O",                 // ibuprofen
    "CC(=O)Nc1ccc(O)cc1",                         // paracetamol
    "Cn1cnc2c1c(=O)n(C)c(=O)n2C",                 // caffeine
    "COc1ccc2cc(ccc2c1)C(C)C(=O)O",               // naproxen
    "OC(=O)Cc1ccccc1Nc1c(Cl)cccc1Cl",             // diclofenac
    "CN(C)C(=N)N=C(N)N",                          // metformin
    "CC(=O)CC(c1ccccc1)c1c(O)c2ccccc2oc1=O",      // warfarin
    "CNCCC(Oc1ccc(cc1)C(F)(F)F)c1ccccc1",         // fluoxetine
    "CN1C(=O)CN=C(c2ccccc2)c2cc(Cl)ccc12",        // diazepam
    "O=C1NC(=O)C(N1)(c1ccccc1)c1ccccc1",          // phenytoin
    "NC(=O)N1c2ccccc2C=Cc2ccccc12",               // carbamazepine
    "CCN(CC)CC(=O)Nc1c(C)cccc1C",                 // lidocaine
    "CCN(CC)CCNC(=O)c1ccc(N)cc1",                 // procainamide
    "CN1CCCC1c1cccnc1",                           // nicotine
    "Cn1c2nc[nH]c2c(=O)n(C)c1=O",                 // theophylline
    "OC(=O)c1ccccc1O",                            // salicylic acid
    "CCC1(C(=O)NC(=O)NC1=O)c1ccccc1",             // phenobarbital
    "CC(C)NCC(O)COc1cccc2ccccc12",                // propranolol
    "CC(C)NCC(O)COc1ccc(CC(N)=O)cc1",             // atenolol
    "CN(C)CCCN1c2ccccc2Sc2ccc(Cl)cc12",           // chlorpromazine
    "OC1(CCN(CCCC(=O)c2ccc(F)cc2)CC1)c1ccc(Cl)cc1",  // haloperidol
    "CN(C)CCC=C1c2ccccc2CCc2ccccc12",             // amitriptyline
    "OC(=O)C1=CN(C2CC2)c2cc(N3CCNCC3)c(F)cc2C1=O",   // ciprofloxacin
    "Cc1cc(NS(=O)(=O)c2ccc(N)cc2)no1",            // sulfamethoxazole
    "COc1cc(Cc2cnc(N)nc2N)cc(OC)c1OC",            // trimethoprim
    "COc1ccc2[nH]c(nc2c1)S(=O)Cc1ncc(C)c(OC)c1C",    // omeprazole
    "Cc1ncc(n1CCO)[N+](=O)[O-]",                  // metronidazole
    "NNC(=O)c1ccncc1",                            // isoniazid
    "NS(=O)(=O)c1cc(C(=O)O)c(NCc2ccco2)cc1Cl",    // furosemide
    "NS(=O)(=O)c1cc2c(cc1Cl)NCNS2(=O)=O",         // hydrochlorothiazide
    "CC(CS)C(=O)N1CCCC1C(=O)O",                   // captopril
    "CCC(=C(c1ccccc1)c1ccc(OCCN(C)C)cc1)c1ccccc1",   // tamoxifen
    "Clc1cccc(Cl)c1NC1=NCCN1",                    // clonidine
    "CC(=O)Nc1nnc(s1)S(N)(=O)=O",                 // acetazolamide
    "CCOC(=O)c1ccc(N)cc1",                        // benzocaine
    "CC(N)COc1c(C)cccc1C",                        // mexiletine
    "NNCCc1ccccc1",                               // phenelzine
    "CC(N)Cc1ccccc1",                             // amphetamine
    "CCCC(CCC)C(=O)O",                            // valproic acid
    "O=c1[nH]cnc2[nH]ncc12",                      // allopurinol
    "CN(Cc1cnc2nc(N)nc(N)c2n1)c1ccc(cc1)C(=O)NC(CCC(=O)O)C(=O)O",  // methotrexate
    "COc1ccc(CCN(C)CCCC(C#N)(C(C)C)c2ccc(OC)c(OC)c2)cc1OC",  // verapamil
    "CC(C)(C)NCC(O)c1ccc(O)c(CO)c1",              // salbutamol
    "Nc1ccc(cc1)S(=O)(=O)Nc1ccccn1",              // sulfapyridine
    "OCC(O)CO",                                   // glycerol
    "CC1=CC(=O)c2ccccc2C1=O",                     // menadione
    "Clc1ccc(cc1)C(c1ccccc1)N1CCN(CC1)CCOCC(=O)O",   // cetirizine
  };
  return drugs;
}

bool has_element(const Molecule &mol, std::string_view element) {
  return std::any_of(mol.atoms.begin(), mol.atoms.end(),
                     [&](const Atom &a) { return a.element == element; });
}

bool has_halogen(const Molecule &mol) {
  return has_element(mol, "F") || has_element(mol, "Cl")
         || has_element(mol, "Br") || has_element(mol, "I");
}

bool has_carboxylic_acid(const Molecule &mol) {
  for (int c = 0; c < mol.size(); ++c) {
    if (mol.atoms[c].element != "C")
      continue;
    bool carbonyl = false;
    bool hydroxyl = false;
    for (const Bond &b: mol.bonds) {
      if (b.a != c && b.b != c)
        continue;
      const Atom &other = mol.atoms[b.a == c ? b.b : b.a];
      if (other.element != "O")
        continue;
      if (b.order == BondOrder::kDouble)
        carbonyl = true;
      else if (b.order == BondOrder::kSingle && other.hydrogens >= 1)
        hydroxyl = true;
    }
    if (carbonyl && hydroxyl)
      return true;
  }
  return false;
}

bool has_aromatic_nitrogen(const Molecule &mol) {
  return std::any_of(mol.atoms.begin(), mol.atoms.end(), [](const Atom &a) {
    return a.element == "N" && a.aromatic;
  });
}

std::string random_molecule(Rng &rng, bool oxygen, bool halogen) {
  static constexpr std::array<std::string_view, 3> kHalogens = { "Cl", "F",
                                                                 "Br" };
  static constexpr std::array<std::string_view, 3> kDistractors = { "N", "S",
                                                                    "C#N" };
  const int length = 2 + static_cast<int>(rng.below(5));
  std::vector<std::string> subs;
  if (oxygen) {
    subs.emplace_back("O");
    if (rng.uniform() < 0.3)
      subs.emplace_back("O");
  }
  if (halogen)
    subs.emplace_back(kHalogens[rng.below(kHalogens.size())]);
  if (rng.uniform() < 0.5)
    subs.emplace_back(kDistractors[rng.below(kDistractors.size())]);

  std::vector<std::vector<std::string>> at(length);
  for (std::string &sub: subs) {
    std::size_t pos = rng.below(static_cast<std::uint64_t>(length));
    while (at[pos].size() >= 2)
      pos = (pos + 1) % static_cast<std::size_t>(length);
    at[pos].push_back(std::move(sub));
  }

  std::string out = rng.uniform() < 0.4 ? "c1ccccc1" : "";
  for (int i = 0; i < length; ++i) {
    out += "C";
    for (const std::string &sub: at[i])
      out += "(" + sub + ")";
  }
  return out;
}

std::vector<DDISample> oxygen_dataset(int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<DDISample> out;
  for (int i = 0; i < n; ++i) {
    const int label = i % 2;
    out.push_back({ random_molecule(rng, label == 1, rng.uniform() < 0.5),
                    random_molecule(rng, false, rng.uniform() < 0.5), label,
                    static_cast<std::size_t>(i + 2) });
  }
  rng.shuffle(out);
  return out;
}

std::vector<DDISample> functional_group_dataset(int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<DDISample> out;
  for (int i = 0; i < n; ++i) {
    const int label = i % 4;
    const bool hydroxyl = (label & 1) != 0;
    const bool halogen = (label & 2) != 0;
    const bool oxygen_first = rng.uniform() < 0.5;
    const int halogen_side = halogen ? static_cast<int>(rng.below(3)) : -1;
    // halogen_side: 0 first, 1 second, 2 both
    const bool hal_first = halogen_side == 0 || halogen_side == 2;
    const bool hal_second = halogen_side == 1 || halogen_side == 2;
    out.push_back({ random_molecule(rng, hydroxyl && oxygen_first, hal_first),
                    random_molecule(rng, hydroxyl && !oxygen_first, hal_second),
                    label, static_cast<std::size_t>(i + 2) });
  }
  rng.shuffle(out);
  return out;
}

int reference_pair_label(const Molecule &a, const Molecule &b) {
  const bool halogen = has_halogen(a) || has_halogen(b);
  const bool acid = has_carboxylic_acid(a) || has_carboxylic_acid(b);
  if (halogen && acid)
    return 0;
  if (halogen)
    return 1;
  if (acid)
    return 2;
  if (has_element(a, "S") || has_element(b, "S"))
    return 3;
  if (has_aromatic_nitrogen(a) || has_aromatic_nitrogen(b))
    return 4;
  return 5;
}

std::vector<DDISample> reference_pair_dataset(int n, std::uint64_t seed) {
  const auto &drugs = reference_drugs();
  std::vector<Molecule> mols;
  for (const std::string &s: drugs)
    mols.push_back(parse_smiles(s));

  Rng rng(seed);
  std::vector<DDISample> out;
  const auto count = static_cast<std::uint64_t>(drugs.size());
  for (int i = 0; i < n; ++i) {
    const std::size_t a = rng.below(count);
    std::size_t b = rng.below(count - 1);
    if (b >= a)
      ++b;
    out.push_back({ drugs[a], drugs[b], reference_pair_label(mols[a], mols[b]),
                    static_cast<std::size_t>(i + 2) });
  }
  return out;
}

std::string to_csv(const std::vector<DDISample> &samples) {
  std::ostringstream os;
  os << "smiles_1,smiles_2,label\n";
  for (const DDISample &s: samples)
    os << s.smiles_1 << ',' << s.smiles_2 << ',' << s.label << '\n';
  return os.str();
}

}  // namespace ddigraph::synthetic
