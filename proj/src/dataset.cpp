//
// ddigraph - Copyright 2026 The ddigraph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "ddigraph/error.hpp"
#include "ddigraph/training.hpp"

namespace ddigraph {
namespace {

std::vector<std::string_view> split_fields(std::string_view line, char delim) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t end = line.find(delim, start);
    std::string_view field = line.substr(
        start, end == std::string_view::npos ? std::string_view::npos
                                             : end - start);
    while (!field.empty() && (field.front() == ' ' || field.front() == '"'))
      field.remove_prefix(1);
    while (!field.empty()
           && (field.back() == ' ' || field.back() == '"'
               || field.back() == '\r'))
      field.remove_suffix(1);
    out.push_back(field);
    if (end == std::string_view::npos)
      break;
    start = end + 1;
  }
  return out;
}

}  // namespace

Dataset parse_dataset(std::string_view text) {
  if (text.starts_with("\xEF\xBB\xBF"))
    text.remove_prefix(3);

  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos)
      end = text.size();
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }

  std::size_t header_idx = 0;
  while (header_idx < lines.size()
         && lines[header_idx].find_first_not_of(" \t\r")
                == std::string_view::npos)
    ++header_idx;
  if (header_idx == lines.size())
    throw Error(ErrorCode::kMissingColumn, "no header row");

  const std::string_view header = lines[header_idx];
  const char delim = header.find('\t') != std::string_view::npos ? '\t' : ',';
  const auto names = split_fields(header, delim);
  auto column = [&](std::string_view name) {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end())
      throw Error(ErrorCode::kMissingColumn,
                  "header lacks column '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - names.begin());
  };
  const std::size_t c1 = column("smiles_1");
  const std::size_t c2 = column("smiles_2");
  const std::size_t cl = column("label");

  Dataset ds;
  int max_label = -1;
  for (std::size_t i = header_idx + 1; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (lines[i].find_first_not_of(" \t\r") == std::string_view::npos)
      continue;
    const auto fields = split_fields(lines[i], delim);
    if (fields.size() != names.size())
      throw Error(ErrorCode::kMalformedRow,
                  "line " + std::to_string(line_no) + ": expected "
                      + std::to_string(names.size()) + " fields, found "
                      + std::to_string(fields.size()));
    int label = -1;
    const std::string_view lf = fields[cl];
    const auto [ptr, ec] = std::from_chars(lf.data(), lf.data() + lf.size(),
                                           label);
    if (ec != std::errc() || ptr != lf.data() + lf.size() || label < 0)
      throw Error(ErrorCode::kMalformedRow,
                  "line " + std::to_string(line_no) + ": bad label '"
                      + std::string(lf) + "'");
    max_label = std::max(max_label, label);

    DDISample s { std::string(fields[c1]), std::string(fields[c2]), label,
                  line_no };
    try {
      parse_smiles(s.smiles_1);
      parse_smiles(s.smiles_2);
    } catch (const ParseError &e) {
      ds.quarantined.push_back({ line_no, e.what() });
      continue;
    }
    ds.samples.push_back(std::move(s));
  }

  if (ds.samples.empty())
    throw Error(ErrorCode::kEmptyDataset, "no usable rows");
  ds.classes = max_label + 1;
  return ds;
}

Dataset load_dataset(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_dataset(ss.str());
}

const FeatureCache::Entry &FeatureCache::entry(const std::string &smiles) {
  auto it = entries_.find(smiles);
  if (it == entries_.end()) {
    Molecule mol = parse_smiles(smiles);
    FeaturedGraph g = featurize(mol);
    it = entries_.emplace(smiles, Entry { std::move(mol), std::move(g) }).first;
  }
  return it->second;
}

const FeaturedGraph &FeatureCache::graph(const std::string &smiles) {
  return entry(smiles).graph;
}

const Molecule &FeatureCache::molecule(const std::string &smiles) {
  return entry(smiles).mol;
}

}  // namespace ddigraph
