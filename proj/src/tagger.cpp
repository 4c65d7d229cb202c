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

#include "xslu/tagger.hpp"

#include <cstdio>

#include "xslu/bio.hpp"
#include "xslu/sampler.hpp"

namespace xslu {

namespace {

std::uint64_t derive_seed(std::uint64_t seed, std::string_view purpose, std::uint64_t k = 0) {
  return splitmix64(seed ^ fnv1a64(purpose) ^ splitmix64(k));
}

template <typename Derived>
int argmax(const Eigen::MatrixBase<Derived>& v) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (v(i) > v(best)) best = i;
  }
  return static_cast<int>(best);
}

}  // namespace

MaskedTokens mask_tokens(std::span<const int> ids, int vocab_size, std::uint64_t seed,
                         const MaskingOptions& opts) {
  if (!(opts.rate >= 0.0 && opts.rate <= 1.0)) throw StructuralError("mask_tokens: rate outside [0, 1]");
  MaskedTokens out{{ids.begin(), ids.end()}, {}};
  Rng rng(seed);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    // Always draw all three numbers so position i's decision does not depend on
    // the outcome at earlier positions.
    const double select = rng.uniform();
    const double branch = rng.uniform();
    const std::uint64_t pick = rng.next();
    if (!(select < opts.rate)) continue;
    out.targets.emplace_back(static_cast<int>(i), ids[i]);
    if (branch < opts.mask_share) {
      out.input[i] = Vocab::kMask;
    } else if (branch < opts.mask_share + opts.random_share) {
      const int regular = vocab_size - Vocab::kReserved;
      out.input[i] = regular > 0 ? Vocab::kReserved + static_cast<int>(pick % static_cast<std::uint64_t>(regular))
                                 : Vocab::kMask;
    }
  }
  return out;
}

void check_config(const TrainConfig& c) {
  auto fail = [](const std::string& what) { throw StructuralError("train config: " + what); };
  if (c.embed_dim < 1 || c.hidden_dim < 1) fail("dimensions must be at least 1");
  if (!(c.learning_rate >= 0.0 && c.learning_rate <= 1.0)) fail("learning rate outside [0, 1]");
  if (!(c.mask_rate >= 0.0 && c.mask_rate <= 1.0)) fail("mask rate outside [0, 1]");
  if (c.batch_size < 1) fail("batch size must be at least 1");
  if (!(c.w_intent >= 0.0 && c.w_slot >= 0.0 && c.w_mlm >= 0.0)) fail("negative loss weight");
  if (!(c.alpha >= 0.0)) fail("negative sampling alpha");
  if (!(c.clip_norm >= 0.0)) fail("negative clip norm");
}

std::vector<Example> slu_examples(const Vocab& vocab, const Dataset& ds) {
  std::vector<Example> out;
  out.reserve(ds.size());
  for (const auto& u : ds.utterances) {
    Example ex;
    ex.input = vocab.encode(u.tokens);
    ex.intent = vocab.intent_id(u.intent);
    for (const auto& tag : repair(u.slot_tags)) ex.slots.push_back(vocab.slot_tag_id(tag));
    out.push_back(std::move(ex));
  }
  return out;
}

TrainResult train(const Dataset& slu, std::span<const std::vector<std::string>> mlm_sentences,
                  const TrainConfig& config) {
  check_config(config);
  if (slu.empty()) throw StructuralError("train: empty SLU dataset");
  const auto mlm = mlm_sentences.first(std::min(mlm_sentences.size(), config.mlm_limit));
  Model model;
  model.config = config;
  model.vocab = build_vocab(std::span<const Dataset>(&slu, 1), config.min_count, mlm);
  const ModelDims dims{model.vocab.size(), config.embed_dim, config.hidden_dim,
                       model.vocab.n_intents(), model.vocab.n_slot_tags()};
  model.params = ModelParams::random(dims, derive_seed(config.seed, "init"));
  return train_from(std::move(model), slu, mlm_sentences);
}

TrainResult train_from(Model start, const Dataset& slu,
                       std::span<const std::vector<std::string>> mlm_sentences) {
  const TrainConfig& c = start.config;
  check_config(c);
  check_shapes(start.params, start.params.dims());
  const std::vector<Example> slu_data = slu_examples(start.vocab, slu);
  if (slu_data.empty()) throw StructuralError("train: empty SLU dataset");

  std::vector<std::vector<int>> mlm_data;
  for (std::size_t i = 0; i < mlm_sentences.size() && i < c.mlm_limit; ++i) {
    if (!mlm_sentences[i].empty()) mlm_data.push_back(start.vocab.encode(mlm_sentences[i]));
  }
  const bool use_mlm = !mlm_data.empty();

  std::vector<TaskSpec> tasks{{"slu", slu_data.size(), 1.0}};
  if (use_mlm) tasks.push_back({"mlm", mlm_data.size(), c.w_mlm});
  std::size_t per_epoch = c.batches_per_epoch;
  if (per_epoch == 0) {
    for (const auto& t : tasks) per_epoch += (t.size + c.batch_size - 1) / c.batch_size;
  }

  TaskBatcher slu_batches(slu_data.size(), c.batch_size, derive_seed(c.seed, "slu-order"));
  TaskBatcher mlm_batches(use_mlm ? mlm_data.size() : 1, c.batch_size, derive_seed(c.seed, "mlm-order"));
  const LossWeights weights{c.w_intent, c.w_slot, c.w_mlm};
  const MaskingOptions masking{c.mask_rate};
  const std::uint64_t mask_seed = derive_seed(c.seed, "mask");

  TrainResult result{std::move(start), {}};
  ModelParams& params = result.model.params;
  ModelParams grad;
  std::uint64_t step = 0;
  for (std::size_t epoch = 0; epoch < c.epochs; ++epoch) {
    const Schedule schedule = schedule_epoch(tasks, per_epoch, c.alpha, derive_seed(c.seed, "schedule", epoch));
    EpochLog log;
    log.epoch = epoch + 1;
    for (std::size_t b = 0; b < schedule.batches.size(); ++b, ++step) {
      Batch batch;
      if (schedule.batches[b].task == 0) {
        for (std::size_t i : slu_batches.next()) batch.push_back(slu_data[i]);
      } else {
        std::size_t k = 0;
        for (std::size_t i : mlm_batches.next()) {
          auto masked = mask_tokens(mlm_data[i], params.dims().vocab,
                                    splitmix64(mask_seed ^ splitmix64(step * 4099 + k++)), masking);
          if (masked.targets.empty()) continue;
          batch.push_back({std::move(masked.input), -1, {}, std::move(masked.targets)});
        }
        if (batch.empty()) continue;  // nothing got masked
      }
      const Loss loss = joint_loss(params, batch, weights, &grad);
      if (!std::isfinite(loss.total) || !grad.all_finite()) {
        throw NumericError("train: non-finite loss at epoch " + std::to_string(epoch + 1) +
                           ", batch " + std::to_string(b + 1));
      }
      double scale = c.learning_rate;
      if (c.clip_norm > 0.0) {
        const double norm = std::sqrt(grad.squared_norm());
        if (norm > c.clip_norm) scale *= c.clip_norm / norm;
      }
      params.add_scaled(grad, -scale);

      log.loss += loss.total;
      if (schedule.batches[b].task == 0) {
        ++log.slu_batches;
        log.intent_ce += loss.intent_ce;
        log.slot_ce += loss.slot_ce;
      } else {
        ++log.mlm_batches;
        log.mlm_ce += loss.mlm_ce;
      }
    }
    const std::size_t n = log.slu_batches + log.mlm_batches;
    if (n) log.loss /= static_cast<double>(n);
    if (log.slu_batches) {
      log.intent_ce /= static_cast<double>(log.slu_batches);
      log.slot_ce /= static_cast<double>(log.slu_batches);
    }
    if (log.mlm_batches) log.mlm_ce /= static_cast<double>(log.mlm_batches);
    result.log.push_back(log);
  }
  return result;
}

Prediction predict(const Model& model, std::span<const std::string> tokens) {
  if (tokens.empty()) throw StructuralError("predict: empty token list");
  const ModelParams& p = model.params;
  const std::vector<int> ids = model.vocab.encode(tokens);
  const auto enc = encode(p, std::span<const int>(ids));
  Prediction out;
  const Eigen::VectorXd intent_logits = p.intent_w.transpose() * enc.sentence + p.intent_b;
  if (intent_logits.size() > 0) out.intent = model.vocab.intent(argmax(intent_logits));
  std::vector<std::string> raw;
  raw.reserve(tokens.size());
  for (Eigen::Index t = 0; t < enc.states.rows(); ++t) {
    const Eigen::VectorXd logits = p.slot_w.transpose() * enc.states.row(t).transpose() + p.slot_b;
    raw.push_back(model.vocab.slot_tag(argmax(logits)));
  }
  out.tags = repair(raw);
  return out;
}

Dataset predict_dataset(const Model& model, const Dataset& input) {
  std::vector<Utterance> out;
  out.reserve(input.size());
  for (const auto& u : input.utterances) {
    Prediction p = predict(model, u.tokens);
    out.push_back({u.id, u.text, u.tokens, std::move(p.tags), std::move(p.intent)});
  }
  return make_dataset(input.name, std::move(out));
}

std::string format_loss_log(const std::vector<EpochLog>& log) {
  std::string out = "epoch\tloss\tintent_ce\tslot_ce\tmlm_ce\tslu_batches\tmlm_batches\n";
  char buf[256];
  for (const auto& e : log) {
    std::snprintf(buf, sizeof buf, "%zu\t%.8f\t%.8f\t%.8f\t%.8f\t%zu\t%zu\n", e.epoch, e.loss,
                  e.intent_ce, e.slot_ce, e.mlm_ce, e.slu_batches, e.mlm_batches);
    out += buf;
  }
  return out;
}

}  // namespace xslu
