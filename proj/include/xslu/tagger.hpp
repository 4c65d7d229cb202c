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

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "xslu/errors.hpp"
#include "xslu/rng.hpp"
#include "xslu/vocab.hpp"

namespace xslu {

// Joint intent and slot tagger with an optional masked-language-model head.
//
// A single-layer bidirectional tanh recurrence is the shared encoder; the
// intent, slot and MLM decoders are linear softmax layers on top of it. The
// sentence vector fed to the intent decoder is the concatenation of the
// final forward state (last token) and the final backward state (first
// token).

struct ModelDims {
  int vocab = 0;
  int embed = 32;   // d
  int hidden = 32;  // h, per direction
  int intents = 0;
  int slot_tags = 0;
  friend bool operator==(const ModelDims&, const ModelDims&) = default;
};

template <typename Scalar>
struct ModelParamsT {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Matrix embedding;  // vocab x d
  Matrix fwd_in;     // h x d
  Matrix fwd_rec;    // h x h
  Vector fwd_bias;   // h
  Matrix bwd_in;
  Matrix bwd_rec;
  Vector bwd_bias;
  Matrix intent_w;  // 2h x intents
  Vector intent_b;
  Matrix slot_w;  // 2h x slot tags
  Vector slot_b;
  Matrix mlm_w;  // 2h x vocab
  Vector mlm_b;

  /// (name, member) for every tensor, in a fixed order. The order is part
  /// of the checkpoint format and of initialization.
  static constexpr auto kTensors = std::make_tuple(
      std::pair{"embedding", &ModelParamsT::embedding}, std::pair{"fwd_in", &ModelParamsT::fwd_in},
      std::pair{"fwd_rec", &ModelParamsT::fwd_rec}, std::pair{"fwd_bias", &ModelParamsT::fwd_bias},
      std::pair{"bwd_in", &ModelParamsT::bwd_in}, std::pair{"bwd_rec", &ModelParamsT::bwd_rec},
      std::pair{"bwd_bias", &ModelParamsT::bwd_bias},
      std::pair{"intent_w", &ModelParamsT::intent_w},
      std::pair{"intent_b", &ModelParamsT::intent_b}, std::pair{"slot_w", &ModelParamsT::slot_w},
      std::pair{"slot_b", &ModelParamsT::slot_b}, std::pair{"mlm_w", &ModelParamsT::mlm_w},
      std::pair{"mlm_b", &ModelParamsT::mlm_b});

  /// Calls f(name, tensor) for every tensor.
  template <typename F>
  void for_each(F&& f) {
    std::apply([&](const auto&... t) { (f(t.first, this->*(t.second)), ...); }, kTensors);
  }
  template <typename F>
  void for_each(F&& f) const {
    std::apply([&](const auto&... t) { (f(t.first, this->*(t.second)), ...); }, kTensors);
  }

  /// Calls f(name, tensor_of_this, tensor_of_other) for every tensor.
  template <typename F>
  void zip(const ModelParamsT& other, F&& f) {
    std::apply([&](const auto&... t) { (f(t.first, this->*(t.second), other.*(t.second)), ...); },
               kTensors);
  }
  template <typename F>
  void zip(const ModelParamsT& other, F&& f) const {
    std::apply([&](const auto&... t) { (f(t.first, this->*(t.second), other.*(t.second)), ...); },
               kTensors);
  }

  /// this += scale * other
  void add_scaled(const ModelParamsT& other, Scalar scale) {
    zip(other, [scale](const char*, auto& a, const auto& b) { a += scale * b; });
  }

  Scalar squared_norm() const {
    Scalar s = 0;
    for_each([&s](const char*, const auto& t) { s += t.squaredNorm(); });
    return s;
  }

  ModelDims dims() const {
    return {static_cast<int>(embedding.rows()), static_cast<int>(embedding.cols()),
            static_cast<int>(fwd_rec.rows()), static_cast<int>(intent_b.size()),
            static_cast<int>(slot_b.size())};
  }

  static ModelParamsT zeros(const ModelDims& d) {
    ModelParamsT p;
    const int h2 = 2 * d.hidden;
    p.embedding = Matrix::Zero(d.vocab, d.embed);
    p.fwd_in = Matrix::Zero(d.hidden, d.embed);
    p.fwd_rec = Matrix::Zero(d.hidden, d.hidden);
    p.fwd_bias = Vector::Zero(d.hidden);
    p.bwd_in = Matrix::Zero(d.hidden, d.embed);
    p.bwd_rec = Matrix::Zero(d.hidden, d.hidden);
    p.bwd_bias = Vector::Zero(d.hidden);
    p.intent_w = Matrix::Zero(h2, d.intents);
    p.intent_b = Vector::Zero(d.intents);
    p.slot_w = Matrix::Zero(h2, d.slot_tags);
    p.slot_b = Vector::Zero(d.slot_tags);
    p.mlm_w = Matrix::Zero(h2, d.vocab);
    p.mlm_b = Vector::Zero(d.vocab);
    return p;
  }

  /// Weights uniform in +-sqrt(6 / (fan_in + fan_out)), embeddings in
  /// +-0.1, biases zero.
  static ModelParamsT random(const ModelDims& d, std::uint64_t seed) {
    ModelParamsT p = zeros(d);
    Rng rng(seed);
    p.for_each([&rng](const char* name, auto& t) {
      if (t.cols() == 1) return;  // biases
      const double limit = std::string_view(name) == "embedding"
                               ? 0.1
                               : std::sqrt(6.0 / static_cast<double>(t.rows() + t.cols()));
      for (Eigen::Index j = 0; j < t.cols(); ++j) {
        for (Eigen::Index i = 0; i < t.rows(); ++i) t(i, j) = Scalar(rng.uniform(-limit, limit));
      }
    });
    return p;
  }

  bool all_finite() const {
    bool ok = true;
    for_each([&ok](const char*, const auto& t) { ok = ok && t.allFinite(); });
    return ok;
  }

  template <typename Other>
  ModelParamsT<Other> cast() const {
    ModelParamsT<Other> out;
    cast_into(out, std::make_index_sequence<std::tuple_size_v<decltype(kTensors)>>{});
    return out;
  }

 private:
  template <typename Other, std::size_t... I>
  void cast_into(ModelParamsT<Other>& out, std::index_sequence<I...>) const {
    ((out.*(std::get<I>(ModelParamsT<Other>::kTensors).second) =
          (this->*(std::get<I>(kTensors).second)).template cast<Other>()),
     ...);
  }
};

using ModelParams = ModelParamsT<double>;

/// Throws StructuralError unless every tensor has the shape implied by `d`.
template <typename Scalar>
void check_shapes(const ModelParamsT<Scalar>& p, const ModelDims& d) {
  const ModelParamsT<Scalar> ref = ModelParamsT<Scalar>::zeros(d);
  std::vector<std::pair<Eigen::Index, Eigen::Index>> want;
  ref.for_each([&want](const char*, const auto& t) { want.emplace_back(t.rows(), t.cols()); });
  std::size_t k = 0;
  p.for_each([&](const char* name, const auto& t) {
    if (t.rows() != want[k].first || t.cols() != want[k].second) {
      throw StructuralError(std::string("tensor '") + name + "' is " + std::to_string(t.rows()) +
                            "x" + std::to_string(t.cols()) + ", expected " +
                            std::to_string(want[k].first) + "x" + std::to_string(want[k].second));
    }
    ++k;
  });
}

template <typename Scalar>
struct EncodingT {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  Matrix fwd;       // h x n, column t = forward state after token t
  Matrix bwd;       // h x n, column t = backward state after token t
  Matrix states;    // n x 2h, row t = [fwd_t; bwd_t]
  Vector sentence;  // 2h, [fwd_{n-1}; bwd_0]
};

template <typename Scalar>
EncodingT<Scalar> encode(const ModelParamsT<Scalar>& p, std::span<const int> ids) {
  using Matrix = typename EncodingT<Scalar>::Matrix;
  const auto n = static_cast<Eigen::Index>(ids.size());
  const Eigen::Index h = p.fwd_rec.rows();
  if (n == 0) throw StructuralError("encode: empty input");
  for (int id : ids) {
    if (id < 0 || id >= p.embedding.rows()) {
      throw StructuralError("encode: token id " + std::to_string(id) + " out of range");
    }
  }
  EncodingT<Scalar> e;
  e.fwd = Matrix::Zero(h, n);
  e.bwd = Matrix::Zero(h, n);
  for (Eigen::Index t = 0; t < n; ++t) {
    auto x = p.embedding.row(ids[static_cast<std::size_t>(t)]).transpose();
    auto a = (p.fwd_in * x + p.fwd_bias).eval();
    if (t > 0) a.noalias() += p.fwd_rec * e.fwd.col(t - 1);
    e.fwd.col(t) = a.array().tanh();
  }
  for (Eigen::Index t = n - 1; t >= 0; --t) {
    auto x = p.embedding.row(ids[static_cast<std::size_t>(t)]).transpose();
    auto a = (p.bwd_in * x + p.bwd_bias).eval();
    if (t < n - 1) a.noalias() += p.bwd_rec * e.bwd.col(t + 1);
    e.bwd.col(t) = a.array().tanh();
  }
  e.states.resize(n, 2 * h);
  e.states.leftCols(h) = e.fwd.transpose();
  e.states.rightCols(h) = e.bwd.transpose();
  e.sentence.resize(2 * h);
  e.sentence << e.fwd.col(n - 1), e.bwd.col(0);
  return e;
}

/// One training instance. Absent tasks: intent < 0, empty slots, empty mlm.
struct Example {
  std::vector<int> input;
  int intent = -1;
  std::vector<int> slots;
  std::vector<std::pair<int, int>> mlm;  // (position, original token id)
};

using Batch = std::vector<Example>;

template <typename Scalar>
struct LossWeightsT {
  Scalar intent = 1;
  Scalar slot = 1;
  Scalar mlm = Scalar(0.01);
};
using LossWeights = LossWeightsT<double>;

/// total = sum over present tasks of weight * mean cross-entropy, where
/// the mean runs over intents, tokens and masked positions respectively.
template <typename Scalar>
struct LossT {
  Scalar total = 0;
  Scalar intent_ce = 0;
  Scalar slot_ce = 0;
  Scalar mlm_ce = 0;
  std::size_t n_intent = 0;
  std::size_t n_slot = 0;
  std::size_t n_mlm = 0;
};
using Loss = LossT<double>;

namespace detail {

// Softmax cross-entropy of one logit vector; writes softmax into probs.
template <typename Scalar>
Scalar softmax_ce(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& logits, int target,
                  Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& probs) {
  const Scalar mx = logits.maxCoeff();
  probs = (logits.array() - mx).exp();
  const Scalar z = probs.sum();
  probs /= z;
  return std::log(z) + mx - logits(target);
}

}  // namespace detail

/// Weighted joint loss of a batch, with gradients accumulated into `grad`
/// when it is non-null (grad must have the shapes of `p`; it is
/// overwritten).
template <typename Scalar>
LossT<Scalar> joint_loss(const ModelParamsT<Scalar>& p, const Batch& batch,
                         const LossWeightsT<Scalar>& w, ModelParamsT<Scalar>* grad = nullptr) {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  LossT<Scalar> loss;
  for (const auto& ex : batch) {
    if (ex.intent >= 0) ++loss.n_intent;
    if (!ex.slots.empty()) {
      if (ex.slots.size() != ex.input.size()) throw StructuralError("joint_loss: slot/input length mismatch");
      loss.n_slot += ex.slots.size();
    }
    loss.n_mlm += ex.mlm.size();
  }
  if (loss.n_intent + loss.n_slot + loss.n_mlm == 0) {
    throw StructuralError("joint_loss: batch carries no task labels");
  }
  const Scalar c_int = loss.n_intent ? w.intent / Scalar(loss.n_intent) : Scalar(0);
  const Scalar c_slot = loss.n_slot ? w.slot / Scalar(loss.n_slot) : Scalar(0);
  const Scalar c_mlm = loss.n_mlm ? w.mlm / Scalar(loss.n_mlm) : Scalar(0);
  if (grad) *grad = ModelParamsT<Scalar>::zeros(p.dims());

  const Eigen::Index h = p.fwd_rec.rows();
  Vector probs, logits;
  for (const auto& ex : batch) {
    const EncodingT<Scalar> enc = encode(p, std::span<const int>(ex.input));
    const auto n = static_cast<Eigen::Index>(ex.input.size());
    Matrix d_states;  // n x 2h
    Vector d_sentence;
    if (grad) {
      d_states = Matrix::Zero(n, 2 * h);
      d_sentence = Vector::Zero(2 * h);
    }
    if (ex.intent >= 0) {
      if (ex.intent >= p.intent_b.size()) throw StructuralError("joint_loss: intent id out of range");
      logits = p.intent_w.transpose() * enc.sentence + p.intent_b;
      loss.intent_ce += detail::softmax_ce(logits, ex.intent, probs);
      if (grad) {
        probs(ex.intent) -= Scalar(1);
        probs *= c_int;
        grad->intent_w.noalias() += enc.sentence * probs.transpose();
        grad->intent_b += probs;
        d_sentence.noalias() += p.intent_w * probs;
      }
    }
    if (!ex.slots.empty()) {
      for (Eigen::Index t = 0; t < n; ++t) {
        const int target = ex.slots[static_cast<std::size_t>(t)];
        if (target < 0 || target >= p.slot_b.size()) throw StructuralError("joint_loss: slot id out of range");
        logits = p.slot_w.transpose() * enc.states.row(t).transpose() + p.slot_b;
        loss.slot_ce += detail::softmax_ce(logits, target, probs);
        if (grad) {
          probs(target) -= Scalar(1);
          probs *= c_slot;
          grad->slot_w.noalias() += enc.states.row(t).transpose() * probs.transpose();
          grad->slot_b += probs;
          d_states.row(t).noalias() += (p.slot_w * probs).transpose();
        }
      }
    }
    for (const auto& [pos, target] : ex.mlm) {
      if (pos < 0 || pos >= n || target < 0 || target >= p.mlm_b.size()) {
        throw StructuralError("joint_loss: MLM target out of range");
      }
      logits = p.mlm_w.transpose() * enc.states.row(pos).transpose() + p.mlm_b;
      loss.mlm_ce += detail::softmax_ce(logits, target, probs);
      if (grad) {
        probs(target) -= Scalar(1);
        probs *= c_mlm;
        grad->mlm_w.noalias() += enc.states.row(pos).transpose() * probs.transpose();
        grad->mlm_b += probs;
        d_states.row(pos).noalias() += (p.mlm_w * probs).transpose();
      }
    }
    if (!grad) continue;

    // Backpropagation through time, forward direction.
    Vector carry = Vector::Zero(h);
    for (Eigen::Index t = n - 1; t >= 0; --t) {
      Vector dh = d_states.row(t).leftCols(h).transpose() + carry;
      if (t == n - 1) dh += d_sentence.head(h);
      const Vector da = dh.array() * (Scalar(1) - enc.fwd.col(t).array().square());
      const int id = ex.input[static_cast<std::size_t>(t)];
      grad->fwd_in.noalias() += da * p.embedding.row(id);
      if (t > 0) grad->fwd_rec.noalias() += da * enc.fwd.col(t - 1).transpose();
      grad->fwd_bias += da;
      grad->embedding.row(id).noalias() += (p.fwd_in.transpose() * da).transpose();
      carry.noalias() = p.fwd_rec.transpose() * da;
    }
    // Backward direction.
    carry.setZero();
    for (Eigen::Index t = 0; t < n; ++t) {
      Vector dh = d_states.row(t).rightCols(h).transpose() + carry;
      if (t == 0) dh += d_sentence.tail(h);
      const Vector da = dh.array() * (Scalar(1) - enc.bwd.col(t).array().square());
      const int id = ex.input[static_cast<std::size_t>(t)];
      grad->bwd_in.noalias() += da * p.embedding.row(id);
      if (t < n - 1) grad->bwd_rec.noalias() += da * enc.bwd.col(t + 1).transpose();
      grad->bwd_bias += da;
      grad->embedding.row(id).noalias() += (p.bwd_in.transpose() * da).transpose();
      carry.noalias() = p.bwd_rec.transpose() * da;
    }
  }
  if (loss.n_intent) loss.intent_ce /= Scalar(loss.n_intent);
  if (loss.n_slot) loss.slot_ce /= Scalar(loss.n_slot);
  if (loss.n_mlm) loss.mlm_ce /= Scalar(loss.n_mlm);
  loss.total = w.intent * loss.intent_ce + w.slot * loss.slot_ce + w.mlm * loss.mlm_ce;
  return loss;
}

/// Masked copy of a token sequence for the MLM objective.
struct MaskedTokens {
  std::vector<int> input;
  std::vector<std::pair<int, int>> targets;  // (position, original id)
};

struct MaskingOptions {
  double rate = 0.15;
  double mask_share = 0.8;    // selected positions replaced by <mask>
  double random_share = 0.1;  // replaced by a random non-reserved token
  // the remaining share keeps the original token
};

/// Selects each position with probability `rate` and corrupts it with the
/// BERT 80/10/10 scheme. Deterministic in `seed`.
MaskedTokens mask_tokens(std::span<const int> ids, int vocab_size, std::uint64_t seed,
                         const MaskingOptions& opts = {});

struct TrainConfig {
  int embed_dim = 32;
  int hidden_dim = 32;
  double learning_rate = 0.1;
  std::size_t epochs = 10;
  std::size_t batch_size = 8;
  std::uint64_t seed = 1;
  double w_intent = 1.0;
  double w_slot = 1.0;
  double w_mlm = 0.01;
  double mask_rate = 0.15;
  double alpha = 0.5;
  /// 0 means one pass worth of batches over every task.
  std::size_t batches_per_epoch = 0;
  std::size_t min_count = 1;
  /// Raw MLM sentences beyond this many are ignored.
  std::size_t mlm_limit = 100000;
  /// Global gradient-norm clip; 0 disables clipping.
  double clip_norm = 5.0;

  // Large-scale reference settings of the transformer setup (not used
  // here): Adam, slanted triangular schedule, batch size 32.
};

/// Throws StructuralError for out-of-range settings.
void check_config(const TrainConfig& c);

struct EpochLog {
  std::size_t epoch = 0;
  double loss = 0.0;       // mean total loss over the epoch's batches
  double intent_ce = 0.0;  // mean over batches that carried intents
  double slot_ce = 0.0;
  double mlm_ce = 0.0;
  std::size_t slu_batches = 0;
  std::size_t mlm_batches = 0;
};

struct Model {
  TrainConfig config;
  Vocab vocab;
  ModelParams params;
};

struct TrainResult {
  Model model;
  std::vector<EpochLog> log;
};

/// SGD training on the SLU dataset plus optional raw sentences for the MLM
/// objective. Each batch's task is drawn by proportional sampling over the
/// two task sizes. Throws NumericError on a non-finite loss, naming the
/// epoch and batch.
TrainResult train(const Dataset& slu, std::span<const std::vector<std::string>> mlm_sentences,
                  const TrainConfig& config);

/// Same, starting from given parameters and vocabulary.
TrainResult train_from(Model start, const Dataset& slu,
                       std::span<const std::vector<std::string>> mlm_sentences);

/// Examples for the SLU task; tags outside the vocabulary raise.
std::vector<Example> slu_examples(const Vocab& vocab, const Dataset& ds);

struct Prediction {
  std::string intent;
  std::vector<std::string> tags;
};

/// Greedy decoding: argmax intent on the sentence vector, per-token argmax
/// slot tags, then BIO repair.
Prediction predict(const Model& model, std::span<const std::string> tokens);
Dataset predict_dataset(const Model& model, const Dataset& input);

std::string format_loss_log(const std::vector<EpochLog>& log);

}  // namespace xslu
