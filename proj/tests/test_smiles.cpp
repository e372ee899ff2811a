//
// ddigraph - Copyright 2026 The ddigraph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <catch_amalgamated.hpp>

#include <string>

#include "ddigraph/error.hpp"
#include "ddigraph/smiles.hpp"
#include "ddigraph/synthetic.hpp"
#include "support.hpp"

using namespace ddigraph;

namespace {

ErrorCode parse_error_code(const std::string &text) {
  try {
    parse_smiles(text);
  } catch (const ParseError &e) {
    return e.code();
  }
  FAIL("expected a parse error for " << text);
  return ErrorCode::kIo;
}

bool has_bond(const Molecule &m, int a, int b) {
  for (const Bond &bond: m.bonds) {
    if ((bond.a == a && bond.b == b) || (bond.a == b && bond.b == a))
      return true;
  }
  return false;
}

}  // namespace

TEST_CASE("single atom", "[smiles]") {
  const Molecule m = parse_smiles("C");
  CHECK(m.size() == 1);
  CHECK(m.bonds.empty());
  CHECK(m.atoms[0].element == "C");
  CHECK(m.atoms[0].hydrogens == 4);
}

TEST_CASE("ethanol chain", "[smiles]") {
  const Molecule m = parse_smiles("CCO");
  REQUIRE(m.size() == 3);
  REQUIRE(m.bonds.size() == 2);
  CHECK(m.bonds[0].a == 0);
  CHECK(m.bonds[0].b == 1);
  CHECK(m.bonds[1].a == 1);
  CHECK(m.bonds[1].b == 2);
  for (const Bond &b: m.bonds)
    CHECK(b.order == BondOrder::kSingle);
  CHECK(m.atoms[0].hydrogens == 3);
  CHECK(m.atoms[1].hydrogens == 2);
  CHECK(m.atoms[2].hydrogens == 1);
}

TEST_CASE("ring closure", "[smiles]") {
  const Molecule m = parse_smiles("C1CC1");
  CHECK(m.size() == 3);
  CHECK(m.bonds.size() == 3);
  CHECK(has_bond(m, 0, 1));
  CHECK(has_bond(m, 1, 2));
  CHECK(has_bond(m, 2, 0));
}

TEST_CASE("percent ring labels and reuse", "[smiles]") {
  const Molecule a = parse_smiles("C%12CC%12");
  CHECK(a.bonds.size() == 3);
  // label 1 closed then reopened
  const Molecule b = parse_smiles("C1CC1C1CC1");
  CHECK(b.size() == 6);
  CHECK(b.bonds.size() == 7);
}

TEST_CASE("branches and bond symbols", "[smiles]") {
  const Molecule m = parse_smiles("CC(=O)O");
  REQUIRE(m.size() == 4);
  CHECK(has_bond(m, 1, 2));
  CHECK(has_bond(m, 1, 3));
  for (const Bond &b: m.bonds) {
    if ((b.a == 1 && b.b == 2) || (b.a == 2 && b.b == 1))
      CHECK(b.order == BondOrder::kDouble);
  }
  CHECK(m.atoms[2].hydrogens == 0);
  CHECK(m.atoms[3].hydrogens == 1);

  const Molecule n = parse_smiles("C#N");
  CHECK(n.bonds[0].order == BondOrder::kTriple);
  CHECK(n.atoms[0].hydrogens == 1);
  CHECK(n.atoms[1].hydrogens == 0);
}

TEST_CASE("aromatic ring bonds", "[smiles]") {
  const Molecule m = parse_smiles("c1ccccc1");
  REQUIRE(m.size() == 6);
  REQUIRE(m.bonds.size() == 6);
  for (const Bond &b: m.bonds)
    CHECK(b.order == BondOrder::kAromatic);
  for (const Atom &a: m.atoms) {
    CHECK(a.aromatic);
    CHECK(a.hydrogens == 1);
  }
  // substituent bond to an aromatic atom stays single
  const Molecule t = parse_smiles("Cc1ccccc1");
  CHECK(t.bonds[0].order == BondOrder::kSingle);
}

TEST_CASE("bracket atoms", "[smiles]") {
  const Molecule m = parse_smiles("[NH4+]");
  CHECK(m.atoms[0].element == "N");
  CHECK(m.atoms[0].hydrogens == 4);
  CHECK(m.atoms[0].formal_charge == 1);

  const Molecule o = parse_smiles("C[O-]");
  CHECK(o.atoms[1].formal_charge == -1);
  CHECK(o.atoms[1].hydrogens == 0);

  CHECK(parse_smiles("[Fe+2]").atoms[0].formal_charge == 2);
  CHECK(parse_smiles("[O--]").atoms[0].formal_charge == -2);
  CHECK(parse_smiles("[Na+]").atoms[0].element == "Na");
  CHECK(parse_smiles("c1cc[nH]c1").atoms[3].hydrogens == 1);
}

TEST_CASE("two-letter organic halogens", "[smiles]") {
  const Molecule m = parse_smiles("ClCBr");
  REQUIRE(m.size() == 3);
  CHECK(m.atoms[0].element == "Cl");
  CHECK(m.atoms[2].element == "Br");
}

TEST_CASE("malformed and unsupported input", "[smiles]") {
  CHECK(parse_error_code("") == ErrorCode::kEmptyInput);
  CHECK(parse_error_code("C(C") == ErrorCode::kUnclosedBranch);
  CHECK(parse_error_code("CC)C") == ErrorCode::kUnclosedBranch);
  CHECK(parse_error_code("C1CC") == ErrorCode::kUnmatchedRingBond);
  CHECK(parse_error_code("CC.CC") == ErrorCode::kUnsupportedToken);
  CHECK(parse_error_code("C/C=C/C") == ErrorCode::kUnsupportedToken);
  CHECK(parse_error_code("C[C@H](O)N") == ErrorCode::kUnsupportedToken);
  CHECK(parse_error_code("[13CH4]") == ErrorCode::kUnsupportedToken);
  CHECK(parse_error_code("C*") == ErrorCode::kUnsupportedToken);
  CHECK(parse_error_code("X") == ErrorCode::kUnsupportedToken);
  CHECK(parse_error_code("CC=") == ErrorCode::kInvalidBond);
  CHECK(parse_error_code("C11") == ErrorCode::kInvalidBond);
}

TEST_CASE("parse errors carry the offending position", "[smiles]") {
  try {
    parse_smiles("CC.C");
    FAIL("no error");
  } catch (const ParseError &e) {
    CHECK(e.position() == 2);
    CHECK(std::string(e.what()).find("position 2") != std::string::npos);
  }
}

TEST_CASE("atom cap", "[smiles]") {
  CHECK(parse_smiles(std::string(50, 'C')).size() == 50);
  CHECK(parse_error_code(std::string(51, 'C')) == ErrorCode::kAtomCapExceeded);
}

TEST_CASE("feature layout", "[smiles]") {
  STATIC_REQUIRE(kAtomFeatureDim == 29);

  const FeaturedGraph single = featurize(parse_smiles("C"));
  CHECK(single.features.rows() == 1);
  CHECK(single.features.cols() == kAtomFeatureDim);
  CHECK(single.adjacency.rows() == 1);
  CHECK(single.adjacency(0, 0) == 0.0);

  const FeaturedGraph g = featurize(parse_smiles("CCO"));
  CHECK((g.adjacency.array() != 0).count() == 4);
  CHECK(g.features(1, kDegreeOffset + 2) == 1.0);
  CHECK(g.features(2, kElementOffset + 3) == 1.0);  // O
  CHECK(g.features(0, kHydrogenOffset + 3) == 1.0);
  CHECK(g.features(0, kChargeOffset + 2) == 1.0);   // neutral

  // elements outside the vocabulary land in the "other" slot
  const FeaturedGraph na = featurize(parse_smiles("[Na+]"));
  CHECK(na.features(0, kElementOffset + kElementSlots - 1) == 1.0);
}

TEST_CASE("featurize invariants over a corpus", "[smiles][property]") {
  std::vector<std::string> corpus = testing::small_corpus();
  for (const std::string &s: synthetic::reference_drugs())
    corpus.push_back(s);
  for (const std::string &s: corpus) {
    INFO(s);
    const Molecule m = parse_smiles(s);
    CHECK(parse_smiles(s).bonds.size() == m.bonds.size());  // deterministic
    const FeaturedGraph g = featurize(m);
    CHECK(g.adjacency == g.adjacency.transpose());
    CHECK(g.adjacency.diagonal().isZero());
    const auto nbrs = m.neighbors();
    for (int i = 0; i < m.size(); ++i) {
      CHECK(g.adjacency.row(i).sum() == static_cast<double>(nbrs[i].size()));
      const auto row = g.features.row(i);
      CHECK(row.segment(kElementOffset, kElementSlots).sum() == 1.0);
      CHECK(row.segment(kDegreeOffset, kDegreeSlots).sum() == 1.0);
      CHECK(row.segment(kChargeOffset, kChargeSlots).sum() == 1.0);
      CHECK(row.segment(kHydrogenOffset, kHydrogenSlots).sum() == 1.0);
      const double flag = row(kAromaticOffset);
      CHECK((flag == 0.0 || flag == 1.0));
    }
  }
}
