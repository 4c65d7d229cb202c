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

#include "xslu/metrics.hpp"

#include <cstdio>

#include "json.hpp"

namespace xslu {

std::string_view to_string(MatchRegime regime) {
  switch (regime) {
    case MatchRegime::kStrict:
      return "strict";
    case MatchRegime::kUnlabeled:
      return "unlabeled";
    case MatchRegime::kLoose:
      return "loose";
  }
  return "?";
}

const RegimeScores& EvalReport::micro(MatchRegime regime) const {
  switch (regime) {
    case MatchRegime::kUnlabeled:
      return unlabeled;
    case MatchRegime::kLoose:
      return loose;
    default:
      return strict;
  }
}

void check_aligned(const Dataset& gold, const Dataset& pred) {
  if (gold.size() != pred.size()) {
    throw AlignmentError("gold has " + std::to_string(gold.size()) + " utterances, prediction " +
                         std::to_string(pred.size()));
  }
  for (std::size_t k = 0; k < gold.size(); ++k) {
    const auto& g = gold.utterances[k];
    const auto& p = pred.utterances[k];
    if (g.tokens.size() != p.tokens.size()) {
      throw AlignmentError("utterance " + std::to_string(k) + " ('" + g.id + "'): gold has " +
                           std::to_string(g.tokens.size()) + " tokens, prediction " +
                           std::to_string(p.tokens.size()));
    }
  }
}

namespace {

struct SpanSets {
  std::vector<std::vector<SlotSpan>> gold;
  std::vector<std::vector<SlotSpan>> pred;
};

SpanSets extract(const Dataset& gold, const Dataset& pred) {
  check_aligned(gold, pred);
  SpanSets sets;
  sets.gold.reserve(gold.size());
  sets.pred.reserve(pred.size());
  for (std::size_t k = 0; k < gold.size(); ++k) {
    const auto& g = gold.utterances[k];
    auto issues = bio_issues(g.slot_tags);
    if (!issues.empty()) {
      throw StructuralError("gold utterance '" + g.id + "' is not valid BIO at token " +
                            std::to_string(issues.front().position));
    }
    sets.gold.push_back(spans_from_tags(g.slot_tags));
    sets.pred.push_back(spans_from_tags(repair(pred.utterances[k].slot_tags)));
  }
  return sets;
}

bool matches(const SlotSpan& a, const SlotSpan& b, MatchRegime regime) {
  switch (regime) {
    case MatchRegime::kStrict:
      return a == b;
    case MatchRegime::kUnlabeled:
      return a.start == b.start && a.end == b.end;
    case MatchRegime::kLoose:
      return a.label == b.label && a.overlaps(b);
  }
  return false;
}

// Number of spans in `side` that match at least one span in `other`.
std::size_t count_matched(const std::vector<SlotSpan>& side, const std::vector<SlotSpan>& other,
                          MatchRegime regime) {
  std::size_t n = 0;
  for (const auto& s : side) {
    for (const auto& o : other) {
      if (matches(s, o, regime)) {
        ++n;
        break;
      }
    }
  }
  return n;
}

void finalize(RegimeScores& s) {
  s.precision = s.n_pred ? static_cast<double>(s.matched_pred) / s.n_pred : 0.0;
  s.recall = s.n_gold ? static_cast<double>(s.matched_gold) / s.n_gold : 0.0;
  s.f1 = f1_score(s.precision, s.recall);
}

void finalize(LabelScores& s) {
  s.precision = s.tp + s.fp ? static_cast<double>(s.tp) / (s.tp + s.fp) : 0.0;
  s.recall = s.tp + s.fn ? static_cast<double>(s.tp) / (s.tp + s.fn) : 0.0;
  s.f1 = f1_score(s.precision, s.recall);
}

}  // namespace

RegimeScores score_spans(const std::vector<std::vector<SlotSpan>>& gold,
                         const std::vector<std::vector<SlotSpan>>& pred, MatchRegime regime) {
  if (gold.size() != pred.size()) throw AlignmentError("span lists differ in length");
  RegimeScores s;
  for (std::size_t k = 0; k < gold.size(); ++k) {
    s.n_gold += gold[k].size();
    s.n_pred += pred[k].size();
    // Spans within one side are disjoint, so under strict or unlabeled
    // matching each span matches at most one span on the other side.
    s.matched_pred += count_matched(pred[k], gold[k], regime);
    s.matched_gold += count_matched(gold[k], pred[k], regime);
  }
  finalize(s);
  return s;
}

EvalReport strict_f1(const Dataset& gold, const Dataset& pred) {
  SpanSets sets = extract(gold, pred);
  EvalReport report;
  report.n_utterances = gold.size();
  report.strict = score_spans(sets.gold, sets.pred, MatchRegime::kStrict);
  for (std::size_t k = 0; k < sets.gold.size(); ++k) {
    for (const auto& p : sets.pred[k]) {
      auto& row = report.per_label[p.label];
      bool hit = count_matched({p}, sets.gold[k], MatchRegime::kStrict) > 0;
      (hit ? row.tp : row.fp) += 1;
    }
    for (const auto& g : sets.gold[k]) {
      if (count_matched({g}, sets.pred[k], MatchRegime::kStrict) == 0) {
        report.per_label[g.label].fn += 1;
      }
    }
  }
  for (auto& [label, row] : report.per_label) finalize(row);
  return report;
}

RegimeScores unlabeled_f1(const Dataset& gold, const Dataset& pred) {
  SpanSets sets = extract(gold, pred);
  return score_spans(sets.gold, sets.pred, MatchRegime::kUnlabeled);
}

RegimeScores loose_f1(const Dataset& gold, const Dataset& pred) {
  SpanSets sets = extract(gold, pred);
  return score_spans(sets.gold, sets.pred, MatchRegime::kLoose);
}

double intent_accuracy(const Dataset& gold, const Dataset& pred) {
  if (gold.size() != pred.size()) {
    throw AlignmentError("gold has " + std::to_string(gold.size()) + " utterances, prediction " +
                         std::to_string(pred.size()));
  }
  if (gold.empty()) throw AlignmentError("intent accuracy is undefined on an empty dataset");
  std::size_t hits = 0;
  for (std::size_t k = 0; k < gold.size(); ++k) {
    hits += gold.utterances[k].intent == pred.utterances[k].intent;
  }
  return static_cast<double>(hits) / gold.size();
}

EvalReport evaluate(const Dataset& gold, const Dataset& pred) {
  EvalReport report = strict_f1(gold, pred);
  SpanSets sets = extract(gold, pred);
  report.unlabeled = score_spans(sets.gold, sets.pred, MatchRegime::kUnlabeled);
  report.loose = score_spans(sets.gold, sets.pred, MatchRegime::kLoose);
  report.intent_accuracy = intent_accuracy(gold, pred);
  return report;
}

namespace {

std::string fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

nlohmann::json regime_json(const RegimeScores& s) {
  return {{"n_pred", s.n_pred},         {"n_gold", s.n_gold},       {"matched_pred", s.matched_pred},
          {"matched_gold", s.matched_gold}, {"precision", s.precision}, {"recall", s.recall},
          {"f1", s.f1}};
}

}  // namespace

std::string format_report(const EvalReport& report) {
  std::string out;
  auto line = [&out](const std::string& key, const std::string& value) {
    out.append(key).append("\t").append(value).append("\n");
  };
  line("n_utterances", std::to_string(report.n_utterances));
  line("intent_accuracy", fixed4(report.intent_accuracy));
  for (MatchRegime r : {MatchRegime::kStrict, MatchRegime::kUnlabeled, MatchRegime::kLoose}) {
    const auto& s = report.micro(r);
    const std::string prefix(to_string(r));
    line(prefix + "_precision", fixed4(s.precision));
    line(prefix + "_recall", fixed4(s.recall));
    line(prefix + "_f1", fixed4(s.f1));
  }
  for (const auto& [label, s] : report.per_label) {
    line("slot/" + label + "/precision", fixed4(s.precision));
    line("slot/" + label + "/recall", fixed4(s.recall));
    line("slot/" + label + "/f1", fixed4(s.f1));
  }
  return out;
}

std::string report_json(const EvalReport& report) {
  nlohmann::json j;
  j["n_utterances"] = report.n_utterances;
  j["intent_accuracy"] = report.intent_accuracy;
  j["micro"] = {{"strict", regime_json(report.strict)},
                {"unlabeled", regime_json(report.unlabeled)},
                {"loose", regime_json(report.loose)}};
  nlohmann::json labels = nlohmann::json::object();
  for (const auto& [label, s] : report.per_label) {
    labels[label] = {{"tp", s.tp},         {"fp", s.fp},         {"fn", s.fn},
                     {"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
  }
  j["per_label"] = labels;
  return j.dump(2) + "\n";
}

std::size_t AgreementTable::n_annotators() const {
  return counts.rows() > 0 ? static_cast<std::size_t>(counts.row(0).sum()) : 0;
}

AgreementTable agreement_table(const std::vector<std::vector<std::string>>& votes) {
  std::map<std::string, Eigen::Index> categories;
  for (const auto& row : votes) {
    for (const auto& v : row) categories.emplace(v, 0);
  }
  Eigen::Index next = 0;
  for (auto& [name, idx] : categories) idx = next++;
  AgreementTable t{Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(votes.size()), next)};
  for (std::size_t i = 0; i < votes.size(); ++i) {
    for (const auto& v : votes[i]) t.counts(static_cast<Eigen::Index>(i), categories.at(v)) += 1;
  }
  return t;
}

double fleiss_kappa(const AgreementTable& table) {
  const Eigen::MatrixXd n = table.counts.cast<double>();
  if (n.rows() < 1) throw StructuralError("fleiss kappa: no items");
  if ((table.counts.array() < 0).any()) throw StructuralError("fleiss kappa: negative count");
  const double raters = n.row(0).sum();
  if (raters < 2) throw StructuralError("fleiss kappa: need at least two annotators");
  const Eigen::VectorXd row_sums = n.rowwise().sum();
  for (Eigen::Index i = 0; i < n.rows(); ++i) {
    if (row_sums(i) != raters) {
      throw StructuralError("fleiss kappa: item " + std::to_string(i) + " has " +
                            std::to_string(static_cast<long>(row_sums(i))) + " votes, expected " +
                            std::to_string(static_cast<long>(raters)));
    }
  }
  const double items = static_cast<double>(n.rows());
  const Eigen::VectorXd per_item =
      (n.array() * (n.array() - 1.0)).rowwise().sum() / (raters * (raters - 1.0));
  const double p_bar = per_item.mean();
  const Eigen::RowVectorXd p_j = n.colwise().sum() / (items * raters);
  const double p_e = p_j.squaredNorm();
  if (p_e >= 1.0) {
    // Every vote fell in one category.
    return 1.0;
  }
  return (p_bar - p_e) / (1.0 - p_e);
}

}  // namespace xslu
