#pragma once

#include <string>

#include "aslsl/types.hpp"

namespace aslsl {

// Six multi-label metrics over k x n matrices (labels x instances).
// Ranks are descending-confidence, 1-based, ties by ascending label index.
// Instances lacking a relevant label or lacking an irrelevant label are
// excluded from ranking_loss and average_precision; coverage counts them as 0.
struct MetricReport {
  double hamming_loss = 0.0;
  double ranking_loss = 0.0;
  double coverage = 0.0;             // mean (worst relevant rank - 1), unnormalized
  double coverage_normalized = 0.0;  // coverage / k
  double average_precision = 0.0;
  double macro_f1 = 0.0;
  double micro_f1 = 0.0;
};

double hamming_loss(const Matrix& pred, const Matrix& truth);
double ranking_loss(const Matrix& conf, const Matrix& truth);
double coverage(const Matrix& conf, const Matrix& truth);
double average_precision(const Matrix& conf, const Matrix& truth);
double macro_f1(const Matrix& pred, const Matrix& truth);  // 0/0 label F1 counts as 0
double micro_f1(const Matrix& pred, const Matrix& truth);

MetricReport evaluate_all(const Matrix& pred, const Matrix& conf, const Matrix& truth);

// One CSV line "hamming_loss,...,micro_f1" matching metric_report_header().
std::string metric_report_header();
std::string metric_report_row(const MetricReport& r);

}  // namespace aslsl
