// Copyright 2026 The xslu Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "xslu/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "CLI11.hpp"
#include "xslu/checkpoint.hpp"
#include "xslu/corpus.hpp"
#include "xslu/errors.hpp"
#include "xslu/homogenize.hpp"
#include "xslu/manifest.hpp"
#include "xslu/metrics.hpp"
#include "xslu/projection.hpp"
#include "xslu/rng.hpp"
#include "xslu/sampler.hpp"
#include "xslu/significance.hpp"
#include "xslu/tagger.hpp"

namespace xslu {

namespace {

namespace fs = std::filesystem;

constexpr const char* kOutputDirEnv = "XSLU_OUTPUT_DIR";

// Relative output paths land under $XSLU_OUTPUT_DIR when it is set.
std::string output_path(const std::string& path) {
  const char* dir = std::getenv(kOutputDirEnv);
  if (path.empty() || !dir || !*dir || fs::path(path).is_absolute()) return path;
  return (fs::path(dir) / path).string();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << content;
  if (!out) throw Error("write failed for '" + path + "'");
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> cols;
  std::string col;
  std::istringstream ss(line);
  while (std::getline(ss, col, sep)) cols.push_back(col);
  if (!line.empty() && line.back() == sep) cols.emplace_back();
  return cols;
}

std::vector<std::vector<std::string>> read_raw_sentences(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::vector<std::vector<std::string>> out;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::vector<std::string> toks;
    std::string t;
    while (ss >> t) toks.push_back(t);
    if (!toks.empty()) out.push_back(std::move(toks));
  }
  return out;
}

struct Context {
  std::ostream& out;
  RunManifest manifest;
  std::string manifest_path;  // explicit --manifest
  std::string primary_output;
  unsigned threads = 1;

  void input(const std::string& path) { manifest.inputs.push_back(digest_input(path)); }

  // Writes `content` to `path`, or to stdout when path is empty.
  void emit(const std::string& path, const std::string& content, bool primary = true) {
    if (path.empty()) {
      out << content;
      return;
    }
    const std::string p = output_path(path);
    write_file(p, content);
    manifest.outputs.push_back(p);
    if (primary && primary_output.empty()) primary_output = p;
  }

  void finish() {
    std::string path = manifest_path;
    if (path.empty()) {
      if (!primary_output.empty()) {
        path = primary_output + ".manifest.json";
      } else {
        const char* dir = std::getenv(kOutputDirEnv);
        path = (fs::path(dir && *dir ? dir : ".") / ("xslu-" + manifest.command + ".manifest.json")).string();
      }
    } else {
      path = output_path(path);
    }
    write_file(path, manifest_json(manifest));
  }
};

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// ---------------------------------------------------------------------------
// Subcommands. Each registers its options and returns the action to run.

using Action = std::function<void(Context&)>;

Action add_validate(CLI::App& app) {
  auto* cmd = app.add_subcommand("validate", "List BIO violations; optionally write a repaired copy");
  auto input = std::make_shared<std::string>();
  auto repaired = std::make_shared<std::string>();
  cmd->add_option("--input", *input, "Corpus file")->required();
  cmd->add_option("--repair-out", *repaired, "Write the repaired corpus here");
  return [=](Context& ctx) {
    ctx.manifest.config["input"] = *input;
    ctx.manifest.config["repair_out"] = *repaired;
    ctx.input(*input);
    Dataset ds = read_dataset_file(*input);
    const auto issues = validate(ds);
    std::string report;
    for (const auto& is : issues) {
      report += is.utterance_id + "\t" + std::to_string(is.position) + "\t" +
                std::string(to_string(is.kind)) + "\n";
    }
    report += "utterances\t" + std::to_string(ds.size()) + "\n";
    report += "issues\t" + std::to_string(issues.size()) + "\n";
    ctx.out << report;
    if (!repaired->empty()) {
      for (auto& u : ds.utterances) u.slot_tags = repair(u.slot_tags);
      ds.refresh_inventories();
      ctx.emit(*repaired, write_dataset(ds));
    }
  };
}

Action add_evaluate(CLI::App& app) {
  auto* cmd = app.add_subcommand("evaluate", "Strict, unlabeled and loose slot F1 plus intent accuracy");
  auto gold = std::make_shared<std::string>();
  auto pred = std::make_shared<std::string>();
  auto out = std::make_shared<std::string>();
  auto json = std::make_shared<std::string>();
  cmd->add_option("--gold", *gold, "Gold corpus")->required();
  cmd->add_option("--pred", *pred, "Predicted corpus")->required();
  cmd->add_option("--out", *out, "Report file (default: stdout)");
  cmd->add_option("--json", *json, "Also write the report as JSON");
  return [=](Context& ctx) {
    ctx.manifest.config = {{"gold", *gold}, {"pred", *pred}, {"out", *out}, {"json", *json}};
    ctx.input(*gold);
    ctx.input(*pred);
    const EvalReport report = evaluate(read_dataset_file(*gold), read_dataset_file(*pred));
    ctx.emit(*out, format_report(report));
    if (!json->empty()) ctx.emit(*json, report_json(report), false);
  };
}

Action add_project(CLI::App& app) {
  auto* cmd = app.add_subcommand("project", "Project slot labels through alignment scores");
  auto src = std::make_shared<std::string>();
  auto align = std::make_shared<std::string>();
  auto out = std::make_shared<std::string>();
  cmd->add_option("--src", *src, "Source-language corpus")->required();
  cmd->add_option("--align", *align, "Alignment scores (JSON Lines)")->required();
  cmd->add_option("--out", *out, "Target corpus (default: stdout)");
  return [=](Context& ctx) {
    ctx.manifest.config = {{"src", *src}, {"align", *align}, {"out", *out}};
    ctx.manifest.algorithms["argmax_ties"] = "lowest target index";
    ctx.input(*src);
    ctx.input(*align);
    const Dataset ds = project_dataset(read_dataset_file(*src), read_alignments_file(*align),
                                       fs::path(*out).stem().string());
    ctx.emit(*out, write_dataset(ds));
  };
}

Action add_homogenize(CLI::App& app) {
  auto* cmd = app.add_subcommand("homogenize", "Rename slot labels and intents, trim span prefixes");
  auto input = std::make_shared<std::string>();
  auto map = std::make_shared<std::string>();
  auto out = std::make_shared<std::string>();
  cmd->add_option("--input", *input, "Corpus file")->required();
  cmd->add_option("--map", *map, "Label map file")->required();
  cmd->add_option("--out", *out, "Output corpus (default: stdout)");
  return [=](Context& ctx) {
    ctx.manifest.config = {{"input", *input}, {"map", *map}, {"out", *out}};
    ctx.input(*input);
    ctx.input(*map);
    const LabelMap m = read_label_map_file(*map);
    Dataset ds = apply_label_map(read_dataset_file(*input), m);
    if (!m.trim_tokens.empty()) {
      for (auto& u : ds.utterances) u.slot_tags = repair(u.slot_tags);
      ds = trim_span_prefixes(ds, m.trim_tokens);
    }
    ctx.emit(*out, write_dataset(ds));
  };
}

Action add_merge(CLI::App& app) {
  auto* cmd = app.add_subcommand("merge", "Concatenate corpora and shuffle with a seed");
  auto inputs = std::make_shared<std::vector<std::string>>();
  auto seed = std::make_shared<std::uint64_t>(0);
  auto out = std::make_shared<std::string>();
  cmd->add_option("--input", *inputs, "Corpus files, in order")->required();
  cmd->add_option("--seed", *seed, "Shuffle seed")->required();
  cmd->add_option("--out", *out, "Output corpus (default: stdout)");
  return [=](Context& ctx) {
    ctx.manifest.config = {{"input", *inputs}, {"out", *out}};
    ctx.manifest.seed = *seed;
    ctx.manifest.algorithms["shuffle"] = std::string(kShuffleAlgorithm);
    std::vector<Dataset> sets;
    for (const auto& p : *inputs) {
      ctx.input(p);
      sets.push_back(read_dataset_file(p));
    }
    ctx.emit(*out, write_dataset(merge_shuffle(sets, *seed)));
  };
}

Action add_schedule(CLI::App& app) {
  auto* cmd = app.add_subcommand("schedule", "Draw a proportional multi-task batch schedule");
  auto specs = std::make_shared<std::vector<std::string>>();
  auto batches = std::make_shared<std::size_t>(0);
  auto alpha = std::make_shared<double>(0.5);
  auto seed = std::make_shared<std::uint64_t>(0);
  auto out = std::make_shared<std::string>();
  cmd->add_option("--task", *specs, "name:size[:loss_weight], repeatable")->required();
  cmd->add_option("--batches", *batches, "Batches per epoch")->required();
  cmd->add_option("--alpha", *alpha, "Sampling exponent")->capture_default_str();
  cmd->add_option("--seed", *seed, "Random seed")->required();
  cmd->add_option("--out", *out, "Schedule file (default: stdout)");
  return [=](Context& ctx) {
    ctx.manifest.config = {{"task", *specs}, {"batches", *batches}, {"alpha", *alpha}, {"out", *out}};
    ctx.manifest.seed = *seed;
    ctx.manifest.algorithms["prng"] = std::string(Rng::kAlgorithm);
    std::vector<TaskSpec> tasks;
    for (const auto& spec : *specs) {
      auto parts = split(spec, ':');
      if (parts.size() < 2 || parts.size() > 3 || parts[0].empty()) {
        throw Error("--task '" + spec + "': expected name:size[:loss_weight]");
      }
      TaskSpec t;
      t.name = parts[0];
      try {
        t.size = std::stoull(parts[1]);
        if (parts.size() == 3) t.loss_weight = std::stod(parts[2]);
      } catch (const std::exception&) {
        throw Error("--task '" + spec + "': bad number");
      }
      tasks.push_back(t);
    }
    const Schedule s = schedule_epoch(tasks, *batches, *alpha, *seed);
    std::vector<std::size_t> sizes;
    for (const auto& t : tasks) sizes.push_back(t.size);
    const Eigen::VectorXd p = sampling_weights(sizes, *alpha);
    std::string text = "# task\tsize\tloss_weight\tprobability\tbatches\n";
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      text += "# " + tasks[i].name + "\t" + std::to_string(tasks[i].size) + "\t" +
              fixed(tasks[i].loss_weight) + "\t" + fixed(p(static_cast<Eigen::Index>(i)), 6) + "\t" +
              std::to_string(s.batch_counts[i]) + "\n";
    }
    text += "step\ttask\tbatch\n";
    for (std::size_t b = 0; b < s.batches.size(); ++b) {
      text += std::to_string(b) + "\t" + tasks[s.batches[b].task].name + "\t" +
              std::to_string(s.batches[b].batch) + "\n";
    }
    ctx.emit(*out, text);
  };
}

Action add_train(CLI::App& app) {
  auto* cmd = app.add_subcommand("train", "Train the joint intent/slot tagger");
  auto data = std::make_shared<std::string>();
  auto mlm = std::make_shared<std::string>();
  auto out = std::make_shared<std::string>();
  auto log = std::make_shared<std::string>();
  auto c = std::make_shared<TrainConfig>();
  auto seed = std::make_shared<std::uint64_t>(0);
  cmd->add_option("--train", *data, "Training corpus")->required();
  cmd->add_option("--mlm-text", *mlm, "Raw sentences for the MLM objective, one per line");
  cmd->add_option("--out", *out, "Checkpoint file")->required();
  cmd->add_option("--log", *log, "Per-epoch loss log (TSV)");
  cmd->add_option("--seed", *seed, "Random seed")->required();
  cmd->add_option("--epochs", c->epochs)->capture_default_str();
  cmd->add_option("--lr", c->learning_rate, "SGD learning rate")->capture_default_str();
  cmd->add_option("--batch-size", c->batch_size)->capture_default_str();
  cmd->add_option("--embed-dim", c->embed_dim)->capture_default_str();
  cmd->add_option("--hidden-dim", c->hidden_dim)->capture_default_str();
  cmd->add_option("--w-intent", c->w_intent)->capture_default_str();
  cmd->add_option("--w-slot", c->w_slot)->capture_default_str();
  cmd->add_option("--w-mlm", c->w_mlm)->capture_default_str();
  cmd->add_option("--mask-rate", c->mask_rate)->capture_default_str();
  cmd->add_option("--alpha", c->alpha, "Task sampling exponent")->capture_default_str();
  cmd->add_option("--batches-per-epoch", c->batches_per_epoch, "0: one pass over each task")
      ->capture_default_str();
  cmd->add_option("--min-count", c->min_count)->capture_default_str();
  cmd->add_option("--mlm-limit", c->mlm_limit)->capture_default_str();
  cmd->add_option("--clip-norm", c->clip_norm, "0 disables clipping")->capture_default_str();
  return [=](Context& ctx) {
    TrainConfig config = *c;
    config.seed = *seed;
    ctx.manifest.seed = *seed;
    ctx.manifest.config = {{"train", *data},
                           {"mlm_text", *mlm},
                           {"out", *out},
                           {"log", *log},
                           {"epochs", config.epochs},
                           {"lr", config.learning_rate},
                           {"batch_size", config.batch_size},
                           {"embed_dim", config.embed_dim},
                           {"hidden_dim", config.hidden_dim},
                           {"w_intent", config.w_intent},
                           {"w_slot", config.w_slot},
                           {"w_mlm", config.w_mlm},
                           {"mask_rate", config.mask_rate},
                           {"alpha", config.alpha},
                           {"batches_per_epoch", config.batches_per_epoch},
                           {"min_count", config.min_count},
                           {"mlm_limit", config.mlm_limit},
                           {"clip_norm", config.clip_norm}};
    ctx.manifest.algorithms["prng"] = std::string(Rng::kAlgorithm);
    ctx.manifest.algorithms["optimizer"] = "sgd";
    ctx.input(*data);
    std::vector<std::vector<std::string>> sentences;
    if (!mlm->empty()) {
      ctx.input(*mlm);
      sentences = read_raw_sentences(*mlm);
    }
    const TrainResult r = train(read_dataset_file(*data), sentences, config);
    std::ostringstream ckpt;
    save_model(ckpt, r.model);
    ctx.emit(*out, ckpt.str());
    if (!log->empty()) ctx.emit(*log, format_loss_log(r.log), false);
    if (!r.log.empty()) {
      ctx.out << "epochs\t" << r.log.size() << "\nfinal_loss\t" << fixed(r.log.back().loss, 6) << "\n";
    }
  };
}

Action add_predict(CLI::App& app) {
  auto* cmd = app.add_subcommand("predict", "Tag a corpus with a trained model");
  auto model = std::make_shared<std::string>();
  auto input = std::make_shared<std::string>();
  auto out = std::make_shared<std::string>();
  cmd->add_option("--model", *model, "Checkpoint file")->required();
  cmd->add_option("--input", *input, "Corpus to tag (existing tags are ignored)")->required();
  cmd->add_option("--out", *out, "Predicted corpus (default: stdout)");
  return [=](Context& ctx) {
    ctx.manifest.config = {{"model", *model}, {"input", *input}, {"out", *out}};
    ctx.input(*model);
    ctx.input(*input);
    const Model m = load_model_file(*model);
    ctx.emit(*out, write_dataset(predict_dataset(m, read_dataset_file(*input))));
  };
}

Action add_agreement(CLI::App& app) {
  auto* cmd = app.add_subcommand("agreement", "Fleiss' kappa over annotator votes");
  auto votes = std::make_shared<std::string>();
  auto out = std::make_shared<std::string>();
  cmd->add_option("--votes", *votes, "TSV: one row per item, one column per annotator")->required();
  cmd->add_option("--out", *out, "Result file (default: stdout)");
  return [=](Context& ctx) {
    ctx.manifest.config = {{"votes", *votes}, {"out", *out}};
    ctx.input(*votes);
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(read_file(*votes));
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty() || line.front() == '#') continue;
      rows.push_back(split(line, '\t'));
      if (rows.back().size() != rows.front().size()) {
        throw Error(*votes + ": line " + std::to_string(lineno) + ": expected " +
                    std::to_string(rows.front().size()) + " votes");
      }
    }
    const AgreementTable t = agreement_table(rows);
    const double kappa = fleiss_kappa(t);
    ctx.emit(*out, "items\t" + std::to_string(t.n_items()) + "\nannotators\t" +
                       std::to_string(t.n_annotators()) + "\ncategories\t" +
                       std::to_string(t.n_categories()) + "\nfleiss_kappa\t" + fixed(kappa) + "\n");
  };
}

Action add_correlate(CLI::App& app) {
  auto* cmd = app.add_subcommand("correlate", "Pairwise Pearson correlations between columns");
  auto table = std::make_shared<std::string>();
  auto out = std::make_shared<std::string>();
  auto json = std::make_shared<std::string>();
  cmd->add_option("--table", *table, "TSV with a header row of column names")->required();
  cmd->add_option("--out", *out, "Matrix file (default: stdout)");
  cmd->add_option("--json", *json, "Also write the matrix as JSON");
  return [=](Context& ctx) {
    ctx.manifest.config = {{"table", *table}, {"out", *out}, {"json", *json}};
    ctx.input(*table);
    std::istringstream in(read_file(*table));
    std::string line;
    std::vector<std::string> names;
    std::vector<std::vector<double>> rows;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty() || line.front() == '#') continue;
      auto cols = split(line, '\t');
      if (names.empty()) {
        names = cols;
        continue;
      }
      if (cols.size() != names.size()) {
        throw Error(*table + ": line " + std::to_string(lineno) + ": expected " +
                    std::to_string(names.size()) + " columns");
      }
      std::vector<double> row;
      for (const auto& v : cols) {
        try {
          row.push_back(std::stod(v));
        } catch (const std::exception&) {
          throw Error(*table + ": line " + std::to_string(lineno) + ": bad number '" + v + "'");
        }
      }
      rows.push_back(std::move(row));
    }
    Eigen::MatrixXd data(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(names.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t j = 0; j < names.size(); ++j) {
        data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
      }
    }
    const Eigen::MatrixXd r = pearson_matrix(data);
    std::string text;
    for (const auto& n : names) text += "\t" + n;
    text += "\n";
    nlohmann::ordered_json j;
    j["columns"] = names;
    nlohmann::ordered_json m = nlohmann::ordered_json::array();
    for (Eigen::Index a = 0; a < r.rows(); ++a) {
      text += names[static_cast<std::size_t>(a)];
      nlohmann::ordered_json jr = nlohmann::ordered_json::array();
      for (Eigen::Index b = 0; b < r.cols(); ++b) {
        text += "\t" + fixed(r(a, b));
        jr.push_back(r(a, b));
      }
      text += "\n";
      m.push_back(jr);
    }
    j["pearson"] = m;
    ctx.emit(*out, text);
    if (!json->empty()) ctx.emit(*json, j.dump(2) + "\n", false);
  };
}

Action add_significance(CLI::App& app) {
  auto* cmd = app.add_subcommand("significance", "Almost stochastic order tests against a baseline");
  auto scores = std::make_shared<std::string>();
  auto baseline = std::make_shared<std::string>();
  auto metric = std::make_shared<std::string>();
  auto out = std::make_shared<std::string>();
  auto json = std::make_shared<std::string>();
  auto opts = std::make_shared<AsoOptions>();
  cmd->add_option("--scores", *scores, "CSV: system,language,metric,seed,value")->required();
  cmd->add_option("--baseline", *baseline, "Baseline system name")->required();
  cmd->add_option("--metric", *metric, "Only test this metric");
  cmd->add_option("--alpha", opts->alpha, "Family-wise significance level")->capture_default_str();
  cmd->add_option("--boot", opts->n_boot, "Bootstrap iterations")->capture_default_str();
  cmd->add_option("--threshold", opts->threshold, "Dominance iff epsilon_min < threshold")
      ->capture_default_str();
  cmd->add_option("--seed", opts->seed, "Random seed")->required();
  cmd->add_option("--out", *out, "Text table (default: stdout)");
  cmd->add_option("--json", *json, "Also write the results as JSON");
  return [=](Context& ctx) {
    AsoOptions o = *opts;
    o.threads = ctx.threads;
    ctx.manifest.seed = o.seed;
    ctx.manifest.config = {{"scores", *scores}, {"baseline", *baseline}, {"metric", *metric},
                           {"alpha", o.alpha},   {"boot", o.n_boot},       {"threshold", o.threshold},
                           {"out", *out},        {"json", *json}};
    ctx.manifest.algorithms["prng"] = std::string(Rng::kAlgorithm);
    ctx.manifest.algorithms["normal_quantile"] = std::string(kNormalQuantileAlgorithm);
    ctx.input(*scores);
    const auto by_metric = read_scores_file(*scores);
    std::vector<ComparisonTable> tables;
    for (const auto& [name, table] : by_metric) {
      if (!metric->empty() && name != *metric) continue;
      tables.push_back(compare_table(table, *baseline, o));
    }
    if (tables.empty()) throw Error(*scores + ": no scores" + (metric->empty() ? "" : " for metric '" + *metric + "'"));
    std::string text;
    for (std::size_t i = 0; i < tables.size(); ++i) {
      if (i) text += "\n";
      text += format_comparison(tables[i]);
    }
    ctx.emit(*out, text);
    if (!json->empty()) ctx.emit(*json, comparison_json(tables), false);
  };
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"xslu: cross-lingual slot and intent evaluation and transfer toolkit", "xslu"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", kToolVersion);
  unsigned threads = 1;
  std::string manifest_path;
  app.add_option("--threads", threads, "Worker threads; outputs do not depend on it")
      ->capture_default_str()
      ->check(CLI::Range(1u, 256u));
  app.add_option("--manifest", manifest_path, "Run manifest path (default: beside the main output)");

  std::vector<std::pair<CLI::App*, Action>> actions;
  auto reg = [&](Action (*add)(CLI::App&)) {
    const std::size_t before = app.get_subcommands({}).size();
    Action a = add(app);
    actions.emplace_back(app.get_subcommands({})[before], std::move(a));
  };
  reg(add_evaluate);
  reg(add_project);
  reg(add_homogenize);
  reg(add_merge);
  reg(add_schedule);
  reg(add_train);
  reg(add_predict);
  reg(add_agreement);
  reg(add_correlate);
  reg(add_significance);
  reg(add_validate);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  for (auto& [sub, action] : actions) {
    if (!sub->parsed()) continue;
    Context ctx{out, {}, manifest_path, {}, threads};
    ctx.manifest.command = sub->get_name();
    try {
      action(ctx);
      ctx.finish();
    } catch (const std::exception& e) {
      err << "xslu " << sub->get_name() << ": error: " << e.what() << "\n";
      return 1;
    }
    return 0;
  }
  return 2;
}

}  // namespace xslu
