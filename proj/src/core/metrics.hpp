#pragma once

#include <cstdint>
#include <vector>

#include "errors.hpp"

namespace mssvdd {

enum class Label : uint8_t { negative = 0, positive = 1 };

/// Rule fusing per-modality labels into one item label.
/// ds1 = AND over modalities, ds2 = OR, ds3 = first modality, ds4 = second.
enum class Decision : int { ds1 = 1, ds2 = 2, ds3 = 3, ds4 = 4 };

Label fuse_labels(const std::vector<Label>& per_modality, Decision strategy);

struct ConfusionCounts {
  long tp = 0, fp = 0, tn = 0, fn = 0;

  long p() const { return tp + fn; }
  long n() const { return tn + fp; }
  long total() const { return p() + n(); }

  void add(Label predicted, Label truth) {
    if (truth == Label::positive)
      (predicted == Label::positive ? tp : fn)++;
    else
      (predicted == Label::positive ? fp : tn)++;
  }
};

struct MetricReport {
  double accu = 0, tpr = 0, tnr = 0, pre = 0, f1 = 0, gmean = 0;
};

double gmean_of(double tpr, double tnr);
double f1_of(double pre, double tpr);

/// Throws empty_class when either class is absent. Precision is 0 when no
/// positives were predicted; F1 is 0 when pre + tpr is 0.
MetricReport compute_metrics(const ConfusionCounts& counts);

}  // namespace mssvdd
