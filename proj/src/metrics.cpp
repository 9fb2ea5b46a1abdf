#include "aslsl/metrics.hpp"

#include <sstream>
#include <stdexcept>
#include <vector>

#include "aslsl/matrix_io.hpp"

namespace aslsl {

namespace {

void check_shapes(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("metric inputs must share one shape");
  }
  if (a.rows() < 1 || a.cols() < 1) {
    throw std::invalid_argument("metric inputs must be non-empty");
  }
}

void check_binary(const Matrix& m, const char* what) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (m(i, j) != 0.0 && m(i, j) != 1.0) {
        throw std::invalid_argument(std::string(what) + " must be binary");
      }
    }
  }
}

// 1-based rank of label `l` in column `i`: higher confidence first,
// equal confidence ordered by label index.
Eigen::Index rank_of(const Matrix& conf, Eigen::Index l, Eigen::Index i) {
  Eigen::Index ahead = 0;
  for (Eigen::Index j = 0; j < conf.rows(); ++j) {
    if (conf(j, i) > conf(l, i) || (conf(j, i) == conf(l, i) && j < l)) ++ahead;
  }
  return ahead + 1;
}

void f1_counts(const Matrix& pred, const Matrix& truth, Eigen::Index label,
               double& tp, double& fp, double& fn) {
  for (Eigen::Index i = 0; i < pred.cols(); ++i) {
    const bool p = pred(label, i) != 0.0;
    const bool t = truth(label, i) != 0.0;
    if (p && t) tp += 1.0;
    if (p && !t) fp += 1.0;
    if (!p && t) fn += 1.0;
  }
}

double f1_from_counts(double tp, double fp, double fn) {
  const double denom = 2.0 * tp + fp + fn;
  return denom > 0.0 ? 2.0 * tp / denom : 0.0;
}

}  // namespace

double hamming_loss(const Matrix& pred, const Matrix& truth) {
  check_shapes(pred, truth);
  check_binary(pred, "predictions");
  check_binary(truth, "truth labels");
  double wrong = 0.0;
  for (Eigen::Index i = 0; i < pred.cols(); ++i) {
    for (Eigen::Index j = 0; j < pred.rows(); ++j) {
      if (pred(j, i) != truth(j, i)) wrong += 1.0;
    }
  }
  return wrong / static_cast<double>(pred.size());
}

double ranking_loss(const Matrix& conf, const Matrix& truth) {
  check_shapes(conf, truth);
  check_binary(truth, "truth labels");
  const Eigen::Index k = conf.rows();
  double total = 0.0;
  Eigen::Index counted = 0;
  for (Eigen::Index i = 0; i < conf.cols(); ++i) {
    double bad = 0.0;
    Eigen::Index rel = 0;
    for (Eigen::Index j = 0; j < k; ++j) rel += truth(j, i) != 0.0 ? 1 : 0;
    const Eigen::Index irr = k - rel;
    if (rel == 0 || irr == 0) continue;
    for (Eigen::Index r = 0; r < k; ++r) {
      if (truth(r, i) == 0.0) continue;
      for (Eigen::Index s = 0; s < k; ++s) {
        if (truth(s, i) != 0.0) continue;
        if (conf(r, i) < conf(s, i)) bad += 1.0;
        else if (conf(r, i) == conf(s, i)) bad += 0.5;
      }
    }
    total += bad / static_cast<double>(rel * irr);
    ++counted;
  }
  return counted > 0 ? total / static_cast<double>(counted) : 0.0;
}

double coverage(const Matrix& conf, const Matrix& truth) {
  check_shapes(conf, truth);
  check_binary(truth, "truth labels");
  double total = 0.0;
  for (Eigen::Index i = 0; i < conf.cols(); ++i) {
    Eigen::Index worst = 0;
    for (Eigen::Index j = 0; j < conf.rows(); ++j) {
      if (truth(j, i) != 0.0) worst = std::max(worst, rank_of(conf, j, i));
    }
    if (worst > 0) total += static_cast<double>(worst - 1);
  }
  return total / static_cast<double>(conf.cols());
}

double average_precision(const Matrix& conf, const Matrix& truth) {
  check_shapes(conf, truth);
  check_binary(truth, "truth labels");
  const Eigen::Index k = conf.rows();
  double total = 0.0;
  Eigen::Index counted = 0;
  for (Eigen::Index i = 0; i < conf.cols(); ++i) {
    Eigen::Index rel = 0;
    for (Eigen::Index j = 0; j < k; ++j) rel += truth(j, i) != 0.0 ? 1 : 0;
    if (rel == 0 || rel == k) continue;
    double inst = 0.0;
    for (Eigen::Index l = 0; l < k; ++l) {
      if (truth(l, i) == 0.0) continue;
      const Eigen::Index rl = rank_of(conf, l, i);
      Eigen::Index at_or_above = 0;
      for (Eigen::Index j = 0; j < k; ++j) {
        if (truth(j, i) != 0.0 && rank_of(conf, j, i) <= rl) ++at_or_above;
      }
      inst += static_cast<double>(at_or_above) / static_cast<double>(rl);
    }
    total += inst / static_cast<double>(rel);
    ++counted;
  }
  return counted > 0 ? total / static_cast<double>(counted) : 0.0;
}

double macro_f1(const Matrix& pred, const Matrix& truth) {
  check_shapes(pred, truth);
  check_binary(pred, "predictions");
  check_binary(truth, "truth labels");
  double sum = 0.0;
  for (Eigen::Index j = 0; j < pred.rows(); ++j) {
    double tp = 0.0, fp = 0.0, fn = 0.0;
    f1_counts(pred, truth, j, tp, fp, fn);
    sum += f1_from_counts(tp, fp, fn);
  }
  return sum / static_cast<double>(pred.rows());
}

double micro_f1(const Matrix& pred, const Matrix& truth) {
  check_shapes(pred, truth);
  check_binary(pred, "predictions");
  check_binary(truth, "truth labels");
  double tp = 0.0, fp = 0.0, fn = 0.0;
  for (Eigen::Index j = 0; j < pred.rows(); ++j) f1_counts(pred, truth, j, tp, fp, fn);
  return f1_from_counts(tp, fp, fn);
}

MetricReport evaluate_all(const Matrix& pred, const Matrix& conf, const Matrix& truth) {
  check_shapes(conf, truth);
  MetricReport r;
  r.hamming_loss = hamming_loss(pred, truth);
  r.ranking_loss = ranking_loss(conf, truth);
  r.coverage = coverage(conf, truth);
  r.coverage_normalized = r.coverage / static_cast<double>(truth.rows());
  r.average_precision = average_precision(conf, truth);
  r.macro_f1 = macro_f1(pred, truth);
  r.micro_f1 = micro_f1(pred, truth);
  return r;
}

std::string metric_report_header() {
  return "hamming_loss,ranking_loss,coverage,coverage_normalized,"
         "average_precision,macro_f1,micro_f1";
}

std::string metric_report_row(const MetricReport& r) {
  std::ostringstream out;
  out << format_double(r.hamming_loss) << ',' << format_double(r.ranking_loss)
      << ',' << format_double(r.coverage) << ','
      << format_double(r.coverage_normalized) << ','
      << format_double(r.average_precision) << ',' << format_double(r.macro_f1)
      << ',' << format_double(r.micro_f1);
  return out.str();
}

}  // namespace aslsl
