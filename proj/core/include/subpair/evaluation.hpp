#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace subpair {

struct PrPoint {
  double threshold = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Operating points at every distinct score, sorted by threshold descending
// (recall is non-decreasing down the list).
struct PRCurve {
  std::vector<PrPoint> points;
};

struct MaxF1 {
  double f1 = 0.0;
  double threshold = 0.0;
};

// Sweeps thresholds over the distinct scores, predicting positive when
// score >= threshold. Ties on F1 keep the higher threshold. Throws when
// the sizes differ or no positive label exists (recall is undefined).
MaxF1 max_f1(const std::vector<double>& scores, const std::vector<int>& labels);
PRCurve pr_curve(const std::vector<double>& scores,
                 const std::vector<int>& labels);
double accuracy_at(const std::vector<double>& scores,
                   const std::vector<int>& labels, double threshold = 0.5);

struct EvalReport {
  double max_f1 = 0.0;
  double threshold = 0.0;
  double accuracy = 0.0;  // at threshold 0.5
  PRCurve curve;
  std::size_t parameter_count = 0;  // trainable parameters
};

EvalReport evaluate_scores(const std::vector<double>& scores,
                           const std::vector<int>& labels,
                           std::size_t parameter_count);

void write_pr_tsv(std::ostream& os, const PRCurve& curve);
void write_report_tsv(std::ostream& os, const EvalReport& report);

}  // namespace subpair
