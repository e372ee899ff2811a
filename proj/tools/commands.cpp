//
// ddigraph - Copyright 2026 The ddigraph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <sstream>
#include <vector>

#include <json.hpp>
#include <openssl/evp.h>

#include "ddigraph/analysis.hpp"
#include "ddigraph/checkpoint.hpp"
#include "ddigraph/error.hpp"
#include "ddigraph/metrics.hpp"
#include "ddigraph/synthetic.hpp"
#include "ddigraph/training.hpp"

namespace fs = std::filesystem;

namespace ddigraph::cli {
namespace {

constexpr const char *kToolVersion = "0.1.0";

std::string utc_time(const char *format) {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, format);
  return os.str();
}

std::string read_file(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(),
                 nullptr) != 1)
    throw Error(ErrorCode::kIo, "sha256 failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i)
    os << std::hex << std::setw(2) << std::setfill('0')
       << static_cast<int>(digest[i]);
  return os.str();
}

std::string require(const Config &config, const std::string &key,
                    const std::string &flag) {
  const auto v = config.find(key);
  if (!v || v->empty())
    throw UsageError("missing required option " + flag);
  return *v;
}

fs::path output_root() {
  const char *env = std::getenv(kOutputRootEnv);
  return env && *env ? fs::path(env) : fs::current_path();
}

fs::path resolve_out(Config &config, const std::string &command) {
  const fs::path root = output_root();
  fs::path dir;
  if (const auto out = config.find("out"); out && !out->empty()) {
    dir = fs::path(*out).is_absolute() ? fs::path(*out) : root / *out;
  } else {
    std::string slug = command;
    std::replace(slug.begin(), slug.end(), ' ', '-');
    const fs::path base = root / "runs" / (slug + "-" + utc_time("%Y%m%d-%H%M%S"));
    dir = base;
    for (int n = 2; fs::exists(dir); ++n)
      dir = base.string() + "-" + std::to_string(n);
  }
  dir = fs::absolute(dir).lexically_normal();
  if (fs::exists(dir / "manifest.json"))
    throw UsageError("output directory " + dir.string()
                     + " already holds a run; choose another --out");
  fs::create_directories(dir);
  config.set("out", dir.string());
  return dir;
}

class Run {
public:
  Run(std::string command, Config &config)
      : command_(std::move(command)), config_(config),
        started_(utc_time("%Y-%m-%dT%H:%M:%SZ")) {
    dir_ = resolve_out(config_, command_);
  }

  const fs::path &dir() const { return dir_; }

  // Records an input file by absolute path and content digest.
  fs::path input(const std::string &key) {
    const fs::path path =
        fs::absolute(require(config_, key, "--" + key)).lexically_normal();
    if (!fs::exists(path))
      throw UsageError(key + " file not found: " + path.string());
    config_.set(key, path.string());
    inputs_[key] = { { "path", path.string() },
                     { "sha256", sha256_file(path) } };
    return path;
  }

  void write(const std::string &name, const std::string &content,
             bool deterministic = true) {
    const fs::path path = dir_ / name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out)
      throw Error(ErrorCode::kIo, "cannot write " + path.string());
    outputs_.push_back({ { "file", name },
                         { "sha256", sha256_hex(content) },
                         { "deterministic", deterministic } });
  }

  void record(const std::string &key, nlohmann::ordered_json value) {
    extra_[key] = std::move(value);
  }

  void finish() {
    nlohmann::ordered_json m;
    m["tool"] = "ddigraph";
    m["version"] = kToolVersion;
    m["command"] = command_;
    m["started"] = started_;
    m["finished"] = utc_time("%Y-%m-%dT%H:%M:%SZ");
    m["run_dir"] = dir_.string();
    nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
    for (const auto &[k, v]: config_.entries())
      cfg[k] = v;
    m["config"] = cfg;
    m["inputs"] = inputs_.is_null() ? nlohmann::ordered_json::object() : inputs_;
    m["outputs"] = outputs_;
    for (const auto &[k, v]: extra_.items())
      m[k] = v;
    std::ofstream out(dir_ / "manifest.json");
    out << m.dump(2) << '\n';
    if (!out)
      throw Error(ErrorCode::kIo, "cannot write manifest");
  }

private:
  std::string command_;
  Config &config_;
  std::string started_;
  fs::path dir_;
  nlohmann::ordered_json inputs_ = nlohmann::ordered_json::object();
  nlohmann::ordered_json outputs_ = nlohmann::ordered_json::array();
  nlohmann::ordered_json extra_ = nlohmann::ordered_json::object();
};

const char *kMetricsHeader =
    "split\tsubset\tsamples\taccuracy\tmacro_f1\tmacro_precision\tmacro_recall\n";

std::string metrics_row(const std::string &split, const std::string &subset,
                        std::size_t n, const MacroMetrics &m) {
  return split + '\t' + subset + '\t' + std::to_string(n) + '\t'
         + format_double(m.accuracy) + '\t' + format_double(m.macro_f1) + '\t'
         + format_double(m.macro_precision) + '\t'
         + format_double(m.macro_recall) + '\n';
}

int int_key(const Config &config, const std::string &key, long fallback) {
  const long v = config.get_int(key, fallback);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
    throw UsageError(key + " out of range");
  return static_cast<int>(v);
}

FeaturedGraph parse_pair_member(const std::string &smiles) {
  return featurize(parse_smiles(smiles));
}

// Split selection shared by eval and analyze distance. Split parameters
// default to the ones stored in the checkpoint.
std::vector<std::size_t> select_split(Config &config, const Checkpoint &ck,
                                      const Dataset &ds) {
  const std::string split = config.get_string("eval.split", "test");
  config.set("eval.split", split);
  if (split == "all") {
    std::vector<std::size_t> all(ds.samples.size());
    std::iota(all.begin(), all.end(), std::size_t{ 0 });
    return all;
  }
  if (split != "train" && split != "val" && split != "test")
    throw UsageError("--split must be train, val, test or all");
  const std::string mode = config.get_string(
      "split.mode", ck.config.get_string("split.mode", "transductive"));
  const int fold =
      int_key(config, "split.fold", ck.config.get_int("split.fold", 0));
  const long seed =
      config.get_int("train.seed", ck.config.get_int("train.seed", 42));
  config.set("split.mode", mode);
  config.set("split.fold", std::to_string(fold));
  config.set("train.seed", std::to_string(seed));
  const SplitPlan plan = make_splits(ds.samples, parse_split_mode(mode), fold,
                                     static_cast<std::uint64_t>(seed));
  return split == "train" ? plan.train : split == "val" ? plan.val : plan.test;
}

void check_classes(const Dataset &ds, const ModelShape &shape) {
  if (ds.classes > shape.classes)
    throw Error(ErrorCode::kLabelOutOfRange,
                "dataset has labels up to " + std::to_string(ds.classes - 1)
                    + " but the checkpoint predicts "
                    + std::to_string(shape.classes) + " classes");
}

// ---------------------------------------------------------------------------

void cmd_train(Run &run, Config &config) {
  const fs::path data = run.input("data");
  const TrainConfig tc = TrainConfig::from(config);
  tc.store(config);
  const SplitMode mode =
      parse_split_mode(config.get_string("split.mode", "transductive"));
  const int fold = int_key(config, "split.fold", 0);
  config.set("split.mode", std::string(to_string(mode)));
  config.set("split.fold", std::to_string(fold));

  const Dataset ds = load_dataset(data);
  std::string quarantine = "line\treason\n";
  for (const QuarantinedRow &q: ds.quarantined)
    quarantine += std::to_string(q.line) + '\t' + q.reason + '\n';
  run.write("quarantine.tsv", quarantine);

  const SplitPlan plan = make_splits(ds.samples, mode, fold, tc.seed);
  std::cerr << "samples=" << ds.samples.size() << " classes=" << ds.classes
            << " quarantined=" << ds.quarantined.size()
            << " train=" << plan.train.size() << " val=" << plan.val.size()
            << " test=" << plan.test.size() << '\n';
  run.record("split", { { "mode", to_string(mode) },
                        { "fold", fold },
                        { "train", plan.train.size() },
                        { "val", plan.val.size() },
                        { "test", plan.test.size() },
                        { "discarded", plan.discarded } });

  FeatureCache cache;
  const TrainResult result = train(
      ds.samples, ds.classes, plan, tc, cache, [&](const EpochRecord &e) {
        std::cerr << "epoch " << e.epoch << '/' << tc.max_epochs
                  << " loss=" << format_double(e.train_loss)
                  << " train_acc=" << format_double(e.train_accuracy);
        if (e.has_val)
          std::cerr << " val_acc=" << format_double(e.val.accuracy)
                    << " val_f1=" << format_double(e.val.macro_f1);
        std::cerr << '\n';
      });
  run.write("run_record.jsonl", result.record.to_jsonl());

  Config ck_config = config;
  ck_config.set("out", "");
  ck_config.set("data.sha256", sha256_file(data));
  run.write("best.ckpt", encode_checkpoint(result.best, ck_config));

  std::string metrics = kMetricsHeader;
  for (const auto &[name, idx]:
       { std::pair{ "train", &plan.train }, std::pair{ "val", &plan.val },
         std::pair{ "test", &plan.test } }) {
    if (idx->empty())
      continue;
    const Evaluation ev = evaluate(result.best, ds.samples, *idx, cache);
    const MacroMetrics m =
        macro_metrics(ddigraph::accumulate(ev.preds, ev.labels, ds.classes));
    metrics += metrics_row(name, "all", idx->size(), m);
    std::cout << "split=" << name << ' ' << to_key_value(m) << '\n';
  }
  run.write("metrics.tsv", metrics);
  run.record("best_epoch", result.record.best_epoch);
}

void cmd_eval(Run &run, Config &config) {
  const fs::path ckpt = run.input("checkpoint");
  const fs::path data = run.input("data");
  std::optional<std::vector<int>> subset;
  if (const auto labels = config.find("eval.labels"))
    subset = parse_label_subset(*labels);

  const Checkpoint ck = load_checkpoint(ckpt);
  const Dataset ds = load_dataset(data);
  check_classes(ds, ck.params.shape);
  const std::vector<std::size_t> idx = select_split(config, ck, ds);
  if (idx.empty())
    throw Error(ErrorCode::kEmptyDataset, "selected split is empty");

  FeatureCache cache;
  const Evaluation ev = evaluate(ck.params, ds.samples, idx, cache);
  const int classes = ck.params.shape.classes;
  const MacroMetrics m =
      subset ? stratified_metrics(ev.preds, ev.labels, classes, *subset)
             : macro_metrics(ddigraph::accumulate(ev.preds, ev.labels, classes));
  const std::string subset_text = config.get_string("eval.labels", "all");
  const std::string split = config.get_string("eval.split", "test");
  run.write("metrics.tsv",
            std::string(kMetricsHeader)
                + metrics_row(split, subset_text, idx.size(), m));
  std::cout << "split=" << split << " subset=" << subset_text << ' '
            << to_key_value(m) << '\n';
}

void cmd_predict(Run &run, Config &config) {
  const fs::path ckpt = run.input("checkpoint");
  const std::string s1 = require(config, "predict.smiles_1", "--smiles-1");
  const std::string s2 = require(config, "predict.smiles_2", "--smiles-2");
  const int top_k = int_key(config, "predict.top_k", 0);
  if (top_k < 0)
    throw UsageError("--top-k must be >= 0");
  config.set("predict.top_k", std::to_string(top_k));

  const FeaturedGraph g1 = parse_pair_member(s1);
  const FeaturedGraph g2 = parse_pair_member(s2);
  const Checkpoint ck = load_checkpoint(ckpt);
  const RowVectorX probs = predict(g1, g2, ck.params);

  std::vector<int> order(probs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&probs](int a, int b) { return probs(a) > probs(b); });
  const int shown = top_k == 0 ? static_cast<int>(order.size())
                               : std::min<int>(top_k, order.size());
  std::string out = "rank\tclass\tprobability\n";
  for (int r = 0; r < shown; ++r)
    out += std::to_string(r + 1) + '\t' + std::to_string(order[r]) + '\t'
           + format_double(probs(order[r])) + '\n';
  run.write("prediction.tsv", out);
  std::cout << out;
}

void cmd_oversmooth(Run &run, Config &config) {
  DepthProbeOptions opt;
  opt.seed = static_cast<std::uint64_t>(
      config.get_int("probe.seed", static_cast<long>(opt.seed)));
  opt.max_depth = int_key(config, "probe.depth", opt.max_depth);
  opt.trials = int_key(config, "probe.trials", opt.trials);
  opt.dim = int_key(config, "probe.dim", opt.dim);
  opt.hidden_dim = int_key(config, "probe.hidden_dim", 2 * opt.dim);
  opt.min_atoms = int_key(config, "probe.min_atoms", opt.min_atoms);
  opt.max_atoms = int_key(config, "probe.max_atoms", opt.max_atoms);
  opt.graphs = parse_probe_graphs(
      config.get_string("probe.graphs", std::string(to_string(opt.graphs))));
  config.set("probe.seed", std::to_string(opt.seed));
  config.set("probe.depth", std::to_string(opt.max_depth));
  config.set("probe.trials", std::to_string(opt.trials));
  config.set("probe.dim", std::to_string(opt.dim));
  config.set("probe.hidden_dim", std::to_string(opt.hidden_dim));
  config.set("probe.min_atoms", std::to_string(opt.min_atoms));
  config.set("probe.max_atoms", std::to_string(opt.max_atoms));
  config.set("probe.graphs", std::string(to_string(opt.graphs)));

  const DepthProbeReport report = depth_probe(opt);
  std::string summary = "depth\tplain\tgformer\n";
  for (int d = 0; d < opt.max_depth; ++d)
    summary += std::to_string(d + 1) + '\t' + format_double(report.plain[d])
               + '\t' + format_double(report.gformer[d]) + '\n';
  std::string trials = "trial\tdepth\tplain\tgformer\n";
  int above = 0;
  for (std::size_t t = 0; t < report.trials.size(); ++t) {
    const DepthProbeTrial &tr = report.trials[t];
    for (int d = 0; d < opt.max_depth; ++d)
      trials += std::to_string(t) + '\t' + std::to_string(d + 1) + '\t'
                + format_double(tr.plain[d]) + '\t'
                + format_double(tr.gformer[d]) + '\n';
    above += tr.plain.back() > tr.gformer.back();
  }
  run.write("oversmooth.tsv", summary);
  run.write("oversmooth_trials.tsv", trials);
  run.record("plain_above_gformer", { { "depth", opt.max_depth },
                                      { "trials", above },
                                      { "of", opt.trials } });
  std::cout << summary << "plain above gformer at depth " << opt.max_depth
            << ": " << above << '/' << opt.trials << '\n';
}

void cmd_distance(Run &run, Config &config) {
  const fs::path ckpt = run.input("checkpoint");
  const fs::path data = run.input("data");
  const int quantiles = int_key(config, "analysis.quantiles", 5);
  const std::string stat_name =
      config.get_string("analysis.statistic", "pair_mean");
  if (stat_name != "pair_mean" && stat_name != "first_drug")
    throw UsageError("--statistic must be pair_mean or first_drug");
  config.set("analysis.quantiles", std::to_string(quantiles));
  config.set("analysis.statistic", stat_name);

  const Checkpoint ck = load_checkpoint(ckpt);
  const Dataset ds = load_dataset(data);
  check_classes(ds, ck.params.shape);
  const std::vector<std::size_t> idx = select_split(config, ck, ds);
  if (idx.empty())
    throw Error(ErrorCode::kEmptyDataset, "selected split is empty");

  FeatureCache cache;
  const Evaluation ev = evaluate(ck.params, ds.samples, idx, cache);
  std::vector<std::pair<const Molecule *, const Molecule *>> pairs;
  for (std::size_t i: idx)
    pairs.emplace_back(&cache.molecule(ds.samples[i].smiles_1),
                       &cache.molecule(ds.samples[i].smiles_2));
  const DistanceStrata strata = stratify_by_distance(
      pairs, ev.preds, ev.labels, ck.params.shape.classes, quantiles,
      stat_name == "pair_mean" ? PathStatistic::kPairMean
                               : PathStatistic::kFirstDrug);

  std::string report =
      "stratum\tsamples\tmin_path\tmax_path\taccuracy\tmacro_f1\t"
      "macro_precision\tmacro_recall\n";
  for (std::size_t s = 0; s < strata.strata.size(); ++s) {
    const DistanceStratum &st = strata.strata[s];
    report += std::to_string(s) + '\t' + std::to_string(st.members.size());
    if (!st.metrics) {
      report += "\t-\t-\t-\t-\t-\t-\n";
      continue;
    }
    double lo = strata.statistics[st.members.front()];
    double hi = lo;
    for (std::size_t i: st.members) {
      lo = std::min(lo, strata.statistics[i]);
      hi = std::max(hi, strata.statistics[i]);
    }
    const MacroMetrics &m = *st.metrics;
    report += '\t' + format_double(lo) + '\t' + format_double(hi) + '\t'
              + format_double(m.accuracy) + '\t' + format_double(m.macro_f1)
              + '\t' + format_double(m.macro_precision) + '\t'
              + format_double(m.macro_recall) + '\n';
  }
  std::string samples = "line\tpath_length\tstratum\tlabel\tprediction\n";
  for (std::size_t i = 0; i < idx.size(); ++i)
    samples += std::to_string(ds.samples[idx[i]].line) + '\t'
               + format_double(strata.statistics[i]) + '\t'
               + std::to_string(strata.stratum[i]) + '\t'
               + std::to_string(ev.labels[i]) + '\t'
               + std::to_string(ev.preds[i]) + '\n';
  run.write("distance.tsv", report);
  run.write("distance_samples.tsv", samples);
  nlohmann::ordered_json cuts = strata.boundaries;
  run.record("boundaries", cuts);
  std::cout << report;
}

void cmd_edges(Run &run, Config &config) {
  const fs::path ckpt = run.input("checkpoint");
  const std::string s1 = require(config, "predict.smiles_1", "--smiles-1");
  const std::string s2 = require(config, "predict.smiles_2", "--smiles-2");
  const int k = int_key(config, "analysis.k", 10);
  const std::string which = config.get_string("analysis.matrix", "reconstructed");
  if (which != "reconstructed" && which != "integrated")
    throw UsageError("--matrix must be reconstructed or integrated");
  if (k < 1)
    throw UsageError("--k must be >= 1");
  config.set("analysis.k", std::to_string(k));
  config.set("analysis.matrix", which);

  const Molecule m1 = parse_smiles(s1);
  const Molecule m2 = parse_smiles(s2);
  const Checkpoint ck = load_checkpoint(ckpt);
  const PairExplanation ex = explain(featurize(m1), featurize(m2), ck.params);
  const std::vector<WeightedEdge> edges =
      top_edges(which == "reconstructed" ? ex.reconstructed : ex.adjacency, k,
                ex.joint.boundary);

  std::string out = "rank\tatom_1\telement_1\tatom_2\telement_2\tweight\n";
  for (std::size_t r = 0; r < edges.size(); ++r) {
    const int q = edges[r].q - ex.joint.boundary;
    out += std::to_string(r + 1) + '\t' + std::to_string(edges[r].p) + '\t'
           + m1.atoms[edges[r].p].element + '\t' + std::to_string(q) + '\t'
           + m2.atoms[q].element + '\t' + format_double(edges[r].weight) + '\n';
  }
  run.write("edges.tsv", out);
  run.record("alpha", ex.alpha);
  std::cout << "alpha=" << format_double(ex.alpha) << '\n' << out;
}

void cmd_synth(Run &run, Config &config) {
  const std::string kind = config.get_string("synth.kind", "groups");
  const int n = int_key(config, "synth.n", 200);
  const long seed = config.get_int("synth.seed", 42);
  if (n < 1)
    throw UsageError("--n must be >= 1");
  config.set("synth.kind", kind);
  config.set("synth.n", std::to_string(n));
  config.set("synth.seed", std::to_string(seed));
  const auto s = static_cast<std::uint64_t>(seed);
  std::vector<DDISample> samples;
  if (kind == "oxygen")
    samples = synthetic::oxygen_dataset(n, s);
  else if (kind == "groups")
    samples = synthetic::functional_group_dataset(n, s);
  else if (kind == "reference")
    samples = synthetic::reference_pair_dataset(n, s);
  else
    throw UsageError("--kind must be oxygen, groups or reference");
  run.write("dataset.csv", synthetic::to_csv(samples));
  std::cout << (run.dir() / "dataset.csv").string() << '\n';
}

}  // namespace

std::string sha256_file(const fs::path &path) {
  return sha256_hex(read_file(path));
}

fs::path run(const std::string &command, Config config) {
  Run r(command, config);
  if (command == kTrain)
    cmd_train(r, config);
  else if (command == kEval)
    cmd_eval(r, config);
  else if (command == kPredict)
    cmd_predict(r, config);
  else if (command == kOversmooth)
    cmd_oversmooth(r, config);
  else if (command == kDistance)
    cmd_distance(r, config);
  else if (command == kEdges)
    cmd_edges(r, config);
  else if (command == kSynth)
    cmd_synth(r, config);
  else
    throw UsageError("unknown command '" + command + "'");
  r.write("config.txt", config.to_string(), false);
  r.finish();
  return r.dir();
}

fs::path replay(const fs::path &manifest_path,
                const std::optional<fs::path> &out) {
  if (!fs::exists(manifest_path))
    throw UsageError("manifest not found: " + manifest_path.string());
  nlohmann::json m;
  try {
    m = nlohmann::json::parse(read_file(manifest_path));
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::kIo, "unreadable manifest: " + std::string(e.what()));
  }
  if (!m.contains("command") || !m.contains("config"))
    throw Error(ErrorCode::kIo, "manifest lacks command or config");

  Config config;
  for (const auto &[k, v]: m["config"].items())
    config.set(k, v.get<std::string>());
  const nlohmann::json inputs = m.value("inputs", nlohmann::json::object());
  for (const auto &[key, input]: inputs.items()) {
    const fs::path path = input.at("path").get<std::string>();
    if (!fs::exists(path))
      throw Error(ErrorCode::kIo, "input '" + key + "' missing: " + path.string());
    if (sha256_file(path) != input.at("sha256").get<std::string>())
      throw Error(ErrorCode::kIo,
                  "input '" + key + "' changed since the run: " + path.string());
  }
  fs::path dir = out ? *out
                     : fs::absolute(manifest_path).parent_path()
                           / ("replay-" + utc_time("%Y%m%d-%H%M%S"));
  config.set("out", dir.string());

  dir = run(m["command"].get<std::string>(), config);

  const nlohmann::json fresh = nlohmann::json::parse(read_file(dir / "manifest.json"));
  std::vector<std::string> differing;
  const nlohmann::json outputs = m.value("outputs", nlohmann::json::array());
  for (const auto &old: outputs) {
    if (!old.value("deterministic", false))
      continue;
    const std::string file = old.at("file").get<std::string>();
    bool same = false;
    for (const auto &now: fresh["outputs"]) {
      if (now.at("file") == file)
        same = now.at("sha256") == old.at("sha256");
    }
    std::cerr << "replay " << file << ": " << (same ? "identical" : "differs")
              << '\n';
    if (!same)
      differing.push_back(file);
  }
  if (!differing.empty()) {
    std::string list;
    for (const std::string &f: differing)
      list += (list.empty() ? "" : ", ") + f;
    throw Error(ErrorCode::kIo, "replay diverged in " + list);
  }
  return dir;
}

}  // namespace ddigraph::cli
