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

#include "xslu/significance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "xslu/errors.hpp"
#include "xslu/rng.hpp"

namespace xslu {

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw NumericError("normal_quantile: p must lie in (0, 1)");
  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    const double num =
        (((((((2509.0809287301226727 * r + 33430.575583588128105) * r + 67265.770927008700853) * r +
             45921.953931549871457) * r + 13731.693765509461125) * r + 1971.5909503065514427) * r +
          133.14166789178437745) * r + 3.387132872796366608);
    const double den =
        (((((((5226.495278852545925 * r + 28729.085735721942674) * r + 39307.89580009271061) * r +
             21213.794301586595867) * r + 5394.1960214247511077) * r + 687.1870074920579083) * r +
          42.313330701600911252) * r + 1.0);
    return q * num / den;
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double num, den;
  if (r <= 5.0) {
    r -= 1.6;
    num = (((((((7.7454501427834140764e-4 * r + 0.0227238449892691845833) * r +
                0.24178072517745061177) * r + 1.27045825245236838258) * r +
              3.64784832476320460504) * r + 5.7694972214606914055) * r + 4.6303378461565452959) * r +
           1.42343711074968357734);
    den = (((((((1.05075007164441684324e-9 * r + 5.475938084995344946e-4) * r +
                0.0151986665636164571966) * r + 0.14810397642748007459) * r +
              0.68976733498510000455) * r + 1.6763848301838038494) * r + 2.05319162663775882187) * r +
           1.0);
  } else {
    r -= 5.0;
    num = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                0.0012426609473880784386) * r + 0.026532189526576123093) * r +
              0.29656057182850489123) * r + 1.7848265399172913358) * r + 5.4637849111641143699) * r +
           6.6579046435011037772);
    den = (((((((2.04426310338993978564e-15 * r + 1.4215117583164458887e-7) * r +
                1.8463183175100546818e-5) * r + 7.868691311456132591e-4) * r +
              0.0148753612908506148525) * r + 0.13692988092273580531) * r +
            0.59983220655588793769) * r + 1.0);
  }
  const double x = num / den;
  return q < 0.0 ? -x : x;
}

namespace {

void check_sample(const Eigen::Ref<const Eigen::VectorXd>& v, const char* name) {
  if (v.size() < 2) throw StructuralError(std::string("ASO: sample ") + name + " needs at least two values");
  if (!v.allFinite()) throw NumericError(std::string("ASO: sample ") + name + " has a non-finite value");
}

Eigen::VectorXd sorted(const Eigen::Ref<const Eigen::VectorXd>& v) {
  Eigen::VectorXd s = v;
  std::sort(s.data(), s.data() + s.size());
  return s;
}

// Exact integrals over (0, 1) of the two step quantile functions. Break
// points i/n and j/m are tracked as integers in units of 1/(n*m).
std::pair<double, double> sorted_w2(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const auto n = static_cast<std::uint64_t>(a.size());
  const auto m = static_cast<std::uint64_t>(b.size());
  const double unit = 1.0 / (static_cast<double>(n) * static_cast<double>(m));
  std::uint64_t pos = 0, ia = 0, ib = 0;
  double violation = 0.0, total = 0.0;
  while (ia < n && ib < m) {
    const std::uint64_t next = std::min((ia + 1) * m, (ib + 1) * n);
    const double len = static_cast<double>(next - pos) * unit;
    const double diff = b(static_cast<Eigen::Index>(ib)) - a(static_cast<Eigen::Index>(ia));
    total += len * diff * diff;
    if (diff > 0.0) violation += len * diff * diff;
    pos = next;
    if ((ia + 1) * m == next) ++ia;
    if ((ib + 1) * n == next) ++ib;
  }
  return {violation, total};
}

double ratio(const std::pair<double, double>& w2) {
  return w2.second > 0.0 ? w2.first / w2.second : 0.5;
}

}  // namespace

std::pair<double, double> w2_components(const Eigen::Ref<const Eigen::VectorXd>& a,
                                        const Eigen::Ref<const Eigen::VectorXd>& b) {
  if (a.size() < 1 || b.size() < 1) throw StructuralError("ASO: empty sample");
  return sorted_w2(sorted(a), sorted(b));
}

double epsilon_w2(const Eigen::Ref<const Eigen::VectorXd>& a,
                  const Eigen::Ref<const Eigen::VectorXd>& b) {
  return ratio(w2_components(a, b));
}

AsoResult aso(const Eigen::Ref<const Eigen::VectorXd>& a,
              const Eigen::Ref<const Eigen::VectorXd>& b, const AsoOptions& opts) {
  check_sample(a, "a");
  check_sample(b, "b");
  if (opts.n_boot < 100) throw StructuralError("ASO: need at least 100 bootstrap iterations");
  if (!(opts.alpha > 0.0 && opts.alpha <= 0.5)) throw StructuralError("ASO: alpha must lie in (0, 0.5]");

  AsoResult res;
  res.alpha_used = opts.alpha;
  const auto observed = w2_components(a, b);
  res.epsilon_hat = ratio(observed);
  if (!(observed.second > 0.0)) {
    res.epsilon_min = res.epsilon_hat;
    res.dominant = res.epsilon_min < opts.threshold;
    return res;
  }

  std::vector<double> boot(opts.n_boot);
  auto run = [&](std::size_t begin, std::size_t end) {
    Eigen::VectorXd ra(a.size()), rb(b.size());
    for (std::size_t k = begin; k < end; ++k) {
      Rng rng(opts.seed, k);
      for (Eigen::Index i = 0; i < ra.size(); ++i) {
        ra(i) = a(static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(a.size()))));
      }
      for (Eigen::Index i = 0; i < rb.size(); ++i) {
        rb(i) = b(static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(b.size()))));
      }
      boot[k] = epsilon_w2(ra, rb);
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(opts.threads, 1, opts.n_boot);
  if (threads == 1) {
    run(0, opts.n_boot);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (opts.n_boot + threads - 1) / threads;
    for (std::size_t begin = 0; begin < opts.n_boot; begin += chunk) {
      pool.emplace_back(run, begin, std::min(opts.n_boot, begin + chunk));
    }
  }

  const Eigen::Map<const Eigen::VectorXd> eps(boot.data(), static_cast<Eigen::Index>(boot.size()));
  res.sigma_boot = std::sqrt((eps.array() - eps.mean()).square().mean());
  res.epsilon_min = res.epsilon_hat - res.sigma_boot * normal_quantile(1.0 - opts.alpha);
  res.dominant = res.epsilon_min < opts.threshold;
  return res;
}

ComparisonTable compare_table(const ScoreTable& scores, const std::string& baseline,
                              const AsoOptions& opts) {
  ComparisonTable table;
  table.baseline = baseline;
  table.alpha = opts.alpha;
  std::map<std::string, bool> languages;
  std::map<std::string, bool> systems;
  for (const auto& [key, sample] : scores) {
    languages[key.second] = true;
    if (table.metric.empty()) table.metric = sample.metric;
    if (key.first != baseline) systems[key.first] = true;
  }
  if (languages.empty()) throw StructuralError("compare_table: no scores");
  for (const auto& [lang, _] : languages) {
    if (!scores.count({baseline, lang})) {
      throw StructuralError("compare_table: no baseline '" + baseline + "' scores for language '" +
                            lang + "'");
    }
    table.languages.push_back(lang);
  }
  table.alpha_adjusted = opts.alpha / static_cast<double>(table.languages.size());

  for (const auto& [system, _] : systems) {
    table.dominant_counts[system] = 0;
    for (const auto& lang : table.languages) {
      auto it = scores.find({system, lang});
      if (it == scores.end()) continue;
      AsoOptions o = opts;
      o.alpha = table.alpha_adjusted;
      o.seed = splitmix64(opts.seed ^ fnv1a64(system + '\x1f' + lang));
      AsoResult r = aso(it->second.values, scores.at({baseline, lang}).values, o);
      table.dominant_counts[system] += r.dominant;
      table.rows.push_back({system, lang, r});
    }
  }
  return table;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cols;
  std::stringstream ss(line);
  std::string col;
  while (std::getline(ss, col, ',')) cols.push_back(col);
  if (!line.empty() && line.back() == ',') cols.emplace_back();
  return cols;
}

}  // namespace

std::map<std::string, ScoreTable> parse_scores_csv(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  // (metric, system, language) -> [(seed, value)]
  std::map<std::tuple<std::string, std::string, std::string>, std::vector<std::pair<std::string, double>>>
      raw;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header) {
      if (line != "system,language,metric,seed,value") {
        throw ParseError(lineno, "expected header 'system,language,metric,seed,value'");
      }
      header = true;
      continue;
    }
    auto cols = split_csv(line);
    if (cols.size() != 5) {
      throw ParseError(lineno, "expected 5 columns, found " + std::to_string(cols.size()));
    }
    double value = 0.0;
    try {
      std::size_t used = 0;
      value = std::stod(cols[4], &used);
      if (used != cols[4].size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw ParseError(lineno, "value '" + cols[4] + "' is not a number");
    }
    if (!std::isfinite(value)) throw ParseError(lineno, "non-finite value");
    for (int c = 0; c < 4; ++c) {
      if (cols[c].empty()) throw ParseError(lineno, "empty field");
    }
    raw[{cols[2], cols[0], cols[1]}].emplace_back(cols[3], value);
  }
  if (!header) throw ParseError(lineno, "missing header");

  std::map<std::string, ScoreTable> out;
  for (auto& [key, seeds] : raw) {
    const auto& [metric, system, language] = key;
    std::sort(seeds.begin(), seeds.end());
    for (std::size_t i = 1; i < seeds.size(); ++i) {
      if (seeds[i].first == seeds[i - 1].first) {
        throw StructuralError("duplicate seed '" + seeds[i].first + "' for " + system + "/" +
                              language + "/" + metric);
      }
    }
    ScoreSample s{system, metric, Eigen::VectorXd(static_cast<Eigen::Index>(seeds.size()))};
    for (std::size_t i = 0; i < seeds.size(); ++i) s.values(static_cast<Eigen::Index>(i)) = seeds[i].second;
    out[metric][{system, language}] = std::move(s);
  }
  return out;
}

std::map<std::string, ScoreTable> read_scores_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  try {
    return parse_scores_csv(in);
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

}  // namespace

std::string format_comparison(const ComparisonTable& t) {
  std::size_t sys_w = 6, lang_w = 8;
  for (const auto& r : t.rows) {
    sys_w = std::max(sys_w, r.system.size());
    lang_w = std::max(lang_w, r.language.size());
  }
  std::string out;
  out += "metric: " + t.metric + "\n";
  out += "baseline: " + t.baseline + "\n";
  out += "alpha: " + fmt("%.6f", t.alpha) + "  bonferroni_alpha: " + fmt("%.6f", t.alpha_adjusted) +
         "  languages: " + std::to_string(t.languages.size()) + "\n\n";
  out += pad("system", sys_w) + "  " + pad("language", lang_w) +
         "  eps_hat  sigma    eps_min  dominant\n";
  for (const auto& r : t.rows) {
    out += pad(r.system, sys_w) + "  " + pad(r.language, lang_w) + "  " +
           fmt("%7.4f", r.result.epsilon_hat) + "  " + fmt("%7.4f", r.result.sigma_boot) + "  " +
           fmt("%7.4f", r.result.epsilon_min) + "  " + (r.result.dominant ? "yes" : "no") + "\n";
  }
  out += "\n" + pad("system", sys_w) + "  significant\n";
  for (const auto& [system, count] : t.dominant_counts) {
    out += pad(system, sys_w) + "  " + std::to_string(count) + "/" +
           std::to_string(t.languages.size()) + "\n";
  }
  return out;
}

std::string comparison_json(const std::vector<ComparisonTable>& tables) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& t : tables) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : t.rows) {
      rows.push_back({{"system", r.system},
                      {"language", r.language},
                      {"epsilon_hat", r.result.epsilon_hat},
                      {"sigma_boot", r.result.sigma_boot},
                      {"epsilon_min", r.result.epsilon_min},
                      {"alpha_used", r.result.alpha_used},
                      {"dominant", r.result.dominant}});
    }
    arr.push_back({{"metric", t.metric},
                   {"baseline", t.baseline},
                   {"alpha", t.alpha},
                   {"alpha_adjusted", t.alpha_adjusted},
                   {"languages", t.languages},
                   {"rows", rows},
                   {"dominant_counts", t.dominant_counts}});
  }
  return arr.dump(2) + "\n";
}

}  // namespace xslu
