#include "metrics.hpp"

#include <cmath>

namespace mssvdd {

Label fuse_labels(const std::vector<Label>& per_modality, Decision strategy) {
  if (per_modality.empty()) fail(errc::invalid_argument, "fuse_labels: no modality labels");
  switch (strategy) {
    case Decision::ds1: {
      for (Label l : per_modality)
        if (l == Label::negative) return Label::negative;
      return Label::positive;
    }
    case Decision::ds2: {
      for (Label l : per_modality)
        if (l == Label::positive) return Label::positive;
      return Label::negative;
    }
    case Decision::ds3:
      return per_modality[0];
    case Decision::ds4:
      if (per_modality.size() < 2)
        fail(errc::strategy_arity, "fuse_labels: ds4 needs at least two modalities");
      return per_modality[1];
  }
  fail(errc::invalid_argument, "fuse_labels: unknown strategy");
}

double gmean_of(double tpr, double tnr) { return std::sqrt(tpr * tnr); }

double f1_of(double pre, double tpr) {
  const double denom = pre + tpr;
  return denom > 0.0 ? 2.0 * pre * tpr / denom : 0.0;
}

MetricReport compute_metrics(const ConfusionCounts& counts) {
  if (counts.tp < 0 || counts.fp < 0 || counts.tn < 0 || counts.fn < 0)
    fail(errc::invalid_argument, "compute_metrics: negative counts");
  if (counts.p() == 0 || counts.n() == 0)
    fail(errc::empty_class, "compute_metrics: one class has no items");

  MetricReport r;
  r.tpr = static_cast<double>(counts.tp) / static_cast<double>(counts.p());
  r.tnr = static_cast<double>(counts.tn) / static_cast<double>(counts.n());
  r.accu = static_cast<double>(counts.tp + counts.tn) / static_cast<double>(counts.total());
  const long predicted_pos = counts.tp + counts.fp;
  r.pre = predicted_pos > 0 ? static_cast<double>(counts.tp) / static_cast<double>(predicted_pos) : 0.0;
  r.f1 = f1_of(r.pre, r.tpr);
  r.gmean = gmean_of(r.tpr, r.tnr);
  return r;
}

}  // namespace mssvdd
