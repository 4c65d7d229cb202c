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

#include "xslu/checkpoint.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace xslu {

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_list(std::ostream& out, const char* name, const std::vector<std::string>& items) {
  out << '[' << name << "] " << items.size() << '\n';
  for (const auto& s : items) out << s << '\n';
}

bool parse_double(const std::string& s, double& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::string line() {
    std::string s;
    if (!std::getline(in_, s)) throw ParseError(lineno_ + 1, "checkpoint: unexpected end of file");
    ++lineno_;
    return s;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(lineno_, "checkpoint: " + what);
  }

  std::vector<std::string> list(const std::string& name) {
    std::istringstream head(line());
    std::string tag;
    std::size_t n = 0;
    if (!(head >> tag >> n) || tag != "[" + name + "]") fail("expected [" + name + "] section");
    std::vector<std::string> items;
    items.reserve(n);
    for (std::size_t i = 0; i < n; ++i) items.push_back(line());
    return items;
  }

 private:
  std::istream& in_;
  std::size_t lineno_ = 0;
};

}  // namespace

void save_model(std::ostream& out, const Model& model) {
  const TrainConfig& c = model.config;
  out << "xslu-checkpoint " << kCheckpointVersion << '\n';
  out << "[config]\n";
  out << "embed_dim " << c.embed_dim << '\n';
  out << "hidden_dim " << c.hidden_dim << '\n';
  out << "learning_rate " << g17(c.learning_rate) << '\n';
  out << "epochs " << c.epochs << '\n';
  out << "batch_size " << c.batch_size << '\n';
  out << "seed " << c.seed << '\n';
  out << "w_intent " << g17(c.w_intent) << '\n';
  out << "w_slot " << g17(c.w_slot) << '\n';
  out << "w_mlm " << g17(c.w_mlm) << '\n';
  out << "mask_rate " << g17(c.mask_rate) << '\n';
  out << "alpha " << g17(c.alpha) << '\n';
  out << "batches_per_epoch " << c.batches_per_epoch << '\n';
  out << "min_count " << c.min_count << '\n';
  out << "mlm_limit " << c.mlm_limit << '\n';
  out << "clip_norm " << g17(c.clip_norm) << '\n';
  write_list(out, "tokens", model.vocab.tokens());
  write_list(out, "slot_tags", model.vocab.slot_tags());
  write_list(out, "intents", model.vocab.intents());
  model.params.for_each([&out](const char* name, const auto& t) {
    out << "[tensor " << name << ' ' << t.rows() << ' ' << t.cols() << "]\n";
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
      for (Eigen::Index j = 0; j < t.cols(); ++j) {
        if (j) out << ' ';
        out << g17(t(i, j));
      }
      out << '\n';
    }
  });
  out << "[end]\n";
}

void save_model_file(const std::string& path, const Model& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  save_model(out, model);
  if (!out) throw Error("write failed for '" + path + "'");
}

Model load_model(std::istream& in) {
  Reader r(in);
  {
    std::istringstream head(r.line());
    std::string magic;
    int version = 0;
    if (!(head >> magic >> version) || magic != "xslu-checkpoint") r.fail("not an xslu checkpoint");
    if (version != kCheckpointVersion) r.fail("unsupported version " + std::to_string(version));
  }
  if (r.line() != "[config]") r.fail("expected [config]");
  std::map<std::string, std::string> kv;
  static const char* kKeys[] = {"embed_dim", "hidden_dim", "learning_rate", "epochs", "batch_size",
                                "seed",      "w_intent",   "w_slot",        "w_mlm",  "mask_rate",
                                "alpha",     "batches_per_epoch", "min_count", "mlm_limit",
                                "clip_norm"};
  for (const char* key : kKeys) {
    std::istringstream ls(r.line());
    std::string k, v;
    if (!(ls >> k >> v) || k != key) r.fail(std::string("expected config key ") + key);
    kv[k] = v;
  }
  Model m;
  TrainConfig& c = m.config;
  try {
    c.embed_dim = std::stoi(kv["embed_dim"]);
    c.hidden_dim = std::stoi(kv["hidden_dim"]);
    c.learning_rate = std::stod(kv["learning_rate"]);
    c.epochs = std::stoull(kv["epochs"]);
    c.batch_size = std::stoull(kv["batch_size"]);
    c.seed = std::stoull(kv["seed"]);
    c.w_intent = std::stod(kv["w_intent"]);
    c.w_slot = std::stod(kv["w_slot"]);
    c.w_mlm = std::stod(kv["w_mlm"]);
    c.mask_rate = std::stod(kv["mask_rate"]);
    c.alpha = std::stod(kv["alpha"]);
    c.batches_per_epoch = std::stoull(kv["batches_per_epoch"]);
    c.min_count = std::stoull(kv["min_count"]);
    c.mlm_limit = std::stoull(kv["mlm_limit"]);
    c.clip_norm = std::stod(kv["clip_norm"]);
  } catch (const std::exception&) {
    r.fail("bad config value");
  }
  check_config(c);
  auto tokens = r.list("tokens");
  auto tags = r.list("slot_tags");
  auto intents = r.list("intents");
  m.vocab = Vocab(std::move(tokens), std::move(tags), std::move(intents));
  const ModelDims dims{m.vocab.size(), c.embed_dim, c.hidden_dim, m.vocab.n_intents(),
                       m.vocab.n_slot_tags()};
  m.params = ModelParams::zeros(dims);
  m.params.for_each([&r](const char* name, auto& t) {
    std::istringstream head(r.line());
    std::string open, got;
    Eigen::Index rows = -1, cols = -1;
    std::string close;
    if (!(head >> open >> got >> rows >> close) || open != "[tensor" || got != name) {
      r.fail(std::string("expected tensor ") + name);
    }
    try {
      cols = std::stol(close);  // "C]" parses as C
    } catch (const std::exception&) {
      r.fail(std::string("bad shape for tensor ") + name);
    }
    if (rows != t.rows() || cols != t.cols()) {
      r.fail(std::string("tensor ") + name + " is " + std::to_string(rows) + "x" +
             std::to_string(cols) + ", config implies " + std::to_string(t.rows()) + "x" +
             std::to_string(t.cols()));
    }
    for (Eigen::Index i = 0; i < rows; ++i) {
      std::istringstream row(r.line());
      for (Eigen::Index j = 0; j < cols; ++j) {
        std::string v;
        if (!(row >> v)) r.fail(std::string("short row in tensor ") + name);
        double value = 0.0;
        if (!parse_double(v, value)) r.fail("bad value '" + v + "' in tensor " + name);
        t(i, j) = value;
      }
      std::string extra;
      if (row >> extra) r.fail(std::string("long row in tensor ") + name);
    }
  });
  if (r.line() != "[end]") r.fail("expected [end]");
  if (!m.params.all_finite()) throw NumericError("checkpoint: non-finite parameter");
  return m;
}

Model load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  try {
    return load_model(in);
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

}  // namespace xslu
