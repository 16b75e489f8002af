#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kenli/model.hpp"

namespace kenli {

struct PRF {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

inline PRF prf_from_counts(std::size_t tp, std::size_t fp, std::size_t fn) {
  PRF r;
  // Empty denominators yield 0 rather than NaN.
  r.precision = (tp + fp) == 0
                    ? 0.0
                    : static_cast<double>(tp) / static_cast<double>(tp + fp);
  r.recall = (tp + fn) == 0
                 ? 0.0
                 : static_cast<double>(tp) / static_cast<double>(tp + fn);
  r.f1 = (r.precision + r.recall) == 0.0
             ? 0.0
             : 2.0 * r.precision * r.recall / (r.precision + r.recall);
  return r;
}

inline PRF prf_at_threshold(const std::vector<double>& probs,
                            const std::vector<bool>& labels,
                            double threshold) {
  if (probs.size() != labels.size())
    throw std::invalid_argument("prf_at_threshold: length mismatch");
  if (threshold < 0.0 || threshold > 1.0)
    throw std::invalid_argument("prf_at_threshold: threshold outside [0,1]");
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    bool pred = probs[i] >= threshold;
    if (pred && labels[i])
      ++tp;
    else if (pred && !labels[i])
      ++fp;
    else if (!pred && labels[i])
      ++fn;
  }
  return prf_from_counts(tp, fp, fn);
}

// Tie-corrected Kendall's tau-b:
//   tau = (C - D) / sqrt((n0 - n1)(n0 - n2))
// with n0 = n(n-1)/2, n1/n2 = pairs tied in x/y. Model probabilities and
// human score means tie frequently, so the uncorrected variant is unusable.
inline double kendall_tau(const std::vector<double>& x,
                          const std::vector<double>& y) {
  if (x.size() != y.size())
    throw std::invalid_argument("kendall_tau: length mismatch");
  if (x.size() < 2)
    throw std::invalid_argument("kendall_tau: need at least 2 observations");
  std::int64_t concordant = 0, discordant = 0, ties_x = 0, ties_y = 0;
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double dx = x[i] - x[j];
      double dy = y[i] - y[j];
      if (dx == 0.0) ++ties_x;
      if (dy == 0.0) ++ties_y;
      if (dx == 0.0 || dy == 0.0) continue;
      if ((dx < 0.0) == (dy < 0.0))
        ++concordant;
      else
        ++discordant;
    }
  }
  const std::int64_t n0 =
      static_cast<std::int64_t>(n) * static_cast<std::int64_t>(n - 1) / 2;
  if (ties_x == n0 || ties_y == n0)
    throw std::invalid_argument("kendall_tau: all values tied in one input");
  double denom = std::sqrt(static_cast<double>(n0 - ties_x) *
                           static_cast<double>(n0 - ties_y));
  return static_cast<double>(concordant - discordant) / denom;
}

enum class ValidityLabel { valid, invalid, needs_third };

inline const char* to_string(ValidityLabel l) {
  switch (l) {
    case ValidityLabel::valid: return "valid";
    case ValidityLabel::invalid: return "invalid";
    case ValidityLabel::needs_third: return "needs_third";
  }
  return "?";
}

struct ValidityJudgment {
  std::string candidate_id;
  std::vector<int> scores;  // 0 (very weak) .. 3 (very strong)
  double mean = 0.0;
  ValidityLabel label = ValidityLabel::invalid;
};

// Two annotators score each candidate 0..3. Disagreement at the extremes
// (one 0 and one 3) is unreliable and demands a third score; otherwise, or
// once the third score is in, the mean decides at 1.5.
inline ValidityJudgment aggregate_validity(
    const std::string& candidate_id, const std::vector<int>& initial,
    std::optional<int> third = std::nullopt) {
  if (initial.size() != 2)
    throw std::invalid_argument(
        "aggregate_validity: expected exactly 2 initial scores");
  auto check = [](int s) {
    if (s < 0 || s > 3)
      throw std::out_of_range("aggregate_validity: score outside 0..3");
  };
  check(initial[0]);
  check(initial[1]);
  ValidityJudgment j;
  j.candidate_id = candidate_id;
  j.scores = initial;
  bool unreliable = (initial[0] == 0 || initial[1] == 0) &&
                    (initial[0] == 3 || initial[1] == 3);
  if (third) {
    check(*third);
    j.scores.push_back(*third);
  }
  j.mean = static_cast<double>(
               std::accumulate(j.scores.begin(), j.scores.end(), 0)) /
           static_cast<double>(j.scores.size());
  if (unreliable && !third)
    j.label = ValidityLabel::needs_third;
  else
    j.label = j.mean >= 1.5 ? ValidityLabel::valid : ValidityLabel::invalid;
  return j;
}

struct GroupMetrics {
  std::size_t count = 0;
  PRF prf;
  std::optional<double> tau;  // unset when the group cannot support it
};

// Per-group P/R/F1 and tau between probabilities and 0/1 labels. Groups with
// fewer than 2 members, or with all-tied values on either side, skip tau
// instead of erroring.
inline std::map<std::string, GroupMetrics> breakdown(
    const std::vector<double>& probs, const std::vector<bool>& labels,
    const std::vector<std::string>& groups, double threshold) {
  if (probs.size() != labels.size() || probs.size() != groups.size())
    throw std::invalid_argument("breakdown: length mismatch");
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>>
      by_group;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    auto& [gp, gl] = by_group[groups[i]];
    gp.push_back(probs[i]);
    gl.push_back(labels[i] ? 1.0 : 0.0);
  }
  std::map<std::string, GroupMetrics> out;
  for (const auto& [group, vecs] : by_group) {
    const auto& [gp, gl] = vecs;
    GroupMetrics m;
    m.count = gp.size();
    std::vector<bool> gbool(gl.size());
    for (std::size_t i = 0; i < gl.size(); ++i) gbool[i] = gl[i] != 0.0;
    m.prf = prf_at_threshold(gp, gbool, threshold);
    bool x_varies =
        std::adjacent_find(gp.begin(), gp.end(), std::not_equal_to<>()) !=
        gp.end();
    bool y_varies =
        std::adjacent_find(gl.begin(), gl.end(), std::not_equal_to<>()) !=
        gl.end();
    if (gp.size() >= 2 && x_varies && y_varies) m.tau = kendall_tau(gp, gl);
    out[group] = std::move(m);
  }
  return out;
}

struct NLIEval {
  // Indexed by NLILabel: entailment, contradiction, neutral.
  std::array<PRF, 3> per_class{};
  std::array<std::size_t, 3> support{};
  double accuracy = 0.0;
  // In single-label classification every false positive for one class is a
  // false negative for another, so micro P = R = F1 = accuracy; macro-F1 has
  // no such identity and is not reported here.
  double micro_f1 = 0.0;
};

inline NLIEval nli_metrics(const std::vector<NLILabel>& gold,
                           const std::vector<NLILabel>& pred) {
  if (gold.size() != pred.size())
    throw std::invalid_argument("nli_metrics: length mismatch");
  if (gold.empty()) throw std::invalid_argument("nli_metrics: empty dataset");
  std::array<std::size_t, 3> tp{}, fp{}, fn{};
  std::size_t correct = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    auto g = static_cast<std::size_t>(gold[i]);
    auto p = static_cast<std::size_t>(pred[i]);
    if (g == p) {
      ++tp[g];
      ++correct;
    } else {
      ++fp[p];
      ++fn[g];
    }
  }
  NLIEval ev;
  std::size_t tp_sum = 0, fp_sum = 0, fn_sum = 0;
  for (std::size_t k = 0; k < 3; ++k) {
    ev.per_class[k] = prf_from_counts(tp[k], fp[k], fn[k]);
    ev.support[k] = tp[k] + fn[k];
    tp_sum += tp[k];
    fp_sum += fp[k];
    fn_sum += fn[k];
  }
  ev.accuracy =
      static_cast<double>(correct) / static_cast<double>(gold.size());
  ev.micro_f1 = prf_from_counts(tp_sum, fp_sum, fn_sum).f1;
  return ev;
}

inline NLIEval evaluate_nli(const KENLIModel& model,
                            const std::vector<NLIPair>& data) {
  if (data.empty())
    throw std::invalid_argument("evaluate_nli: empty dataset");
  std::vector<NLILabel> gold;
  for (const auto& pr : data) {
    if (!pr.label)
      throw std::invalid_argument("evaluate_nli: unlabeled pair");
    gold.push_back(*pr.label);
  }
  std::vector<NLILabel> pred;
  for (const auto& p : model.predict_all(data)) pred.push_back(p.label);
  return nli_metrics(gold, pred);
}

}  // namespace kenli
