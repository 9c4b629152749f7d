#include "subpair/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace subpair {

namespace {

// F1 from integer counts; the acceptance oracle uses the same expression
// so the two routes agree exactly, not just within a tolerance.
double f1_from_counts(long tp, long fp, long fn) {
  const long denom = 2 * tp + fp + fn;
  return denom == 0 ? 0.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
}

void validate_inputs(const std::vector<double>& scores,
                     const std::vector<int>& labels) {
  if (scores.size() != labels.size()) {
    throw std::invalid_argument("scores and labels differ in length: " +
                                std::to_string(scores.size()) + " vs " +
                                std::to_string(labels.size()));
  }
  if (scores.empty()) {
    throw std::invalid_argument("cannot evaluate an empty score list");
  }
  if (std::none_of(labels.begin(), labels.end(), [](int l) { return l == 1; })) {
    throw std::invalid_argument(
        "no positive labels: recall (and F1) is undefined");
  }
}

}  // namespace

PRCurve pr_curve(const std::vector<double>& scores,
                 const std::vector<int>& labels) {
  validate_inputs(scores, labels);
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });
  const long total_pos =
      std::count(labels.begin(), labels.end(), 1);

  PRCurve curve;
  long tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double threshold = scores[order[i]];
    // Consume the whole tie group: predictions flip together.
    while (i < order.size() && scores[order[i]] == threshold) {
      if (labels[order[i]] == 1) ++tp;
      else ++fp;
      ++i;
    }
    const long fn = total_pos - tp;
    PrPoint point;
    point.threshold = threshold;
    point.precision = tp + fp == 0 ? 0.0
                                   : static_cast<double>(tp) /
                                         static_cast<double>(tp + fp);
    point.recall = static_cast<double>(tp) / static_cast<double>(total_pos);
    point.f1 = f1_from_counts(tp, fp, fn);
    curve.points.push_back(point);
  }
  return curve;
}

MaxF1 max_f1(const std::vector<double>& scores, const std::vector<int>& labels) {
  const PRCurve curve = pr_curve(scores, labels);
  MaxF1 best;
  best.f1 = -1.0;
  // Points come threshold-descending; strict > keeps the higher threshold
  // on ties.
  for (const PrPoint& p : curve.points) {
    if (p.f1 > best.f1) {
      best.f1 = p.f1;
      best.threshold = p.threshold;
    }
  }
  return best;
}

double accuracy_at(const std::vector<double>& scores,
                   const std::vector<int>& labels, double threshold) {
  if (scores.size() != labels.size() || scores.empty()) {
    throw std::invalid_argument("accuracy: bad input sizes");
  }
  std::size_t correct = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const int pred = scores[i] >= threshold ? 1 : 0;
    if (pred == labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(scores.size());
}

EvalReport evaluate_scores(const std::vector<double>& scores,
                           const std::vector<int>& labels,
                           std::size_t parameter_count) {
  EvalReport report;
  report.curve = pr_curve(scores, labels);
  MaxF1 best;
  best.f1 = -1.0;
  for (const PrPoint& p : report.curve.points) {
    if (p.f1 > best.f1) {
      best.f1 = p.f1;
      best.threshold = p.threshold;
    }
  }
  report.max_f1 = best.f1;
  report.threshold = best.threshold;
  report.accuracy = accuracy_at(scores, labels, 0.5);
  report.parameter_count = parameter_count;
  return report;
}

void write_pr_tsv(std::ostream& os, const PRCurve& curve) {
  os << "threshold\tprecision\trecall\tf1\n";
  char buf[128];
  for (const PrPoint& p : curve.points) {
    std::snprintf(buf, sizeof(buf), "%.9g\t%.9g\t%.9g\t%.9g\n", p.threshold,
                  p.precision, p.recall, p.f1);
    os << buf;
  }
}

void write_report_tsv(std::ostream& os, const EvalReport& report) {
  char buf[256];
  os << "metric\tvalue\n";
  std::snprintf(buf, sizeof(buf), "max_f1\t%.9g\n", report.max_f1);
  os << buf;
  std::snprintf(buf, sizeof(buf), "threshold\t%.9g\n", report.threshold);
  os << buf;
  std::snprintf(buf, sizeof(buf), "accuracy_at_0.5\t%.9g\n", report.accuracy);
  os << buf;
  os << "parameters\t" << report.parameter_count << "\n";
}

}  // namespace subpair
