#pragma once

#include <string>
#include <utility>
#include <vector>

#include "matrix.hpp"
#include "metrics.hpp"

namespace mssvdd {

/// One row of every modality describes the same item.
struct ModalDataset {
  std::vector<std::string> modality_names;
  std::vector<Matrix> x;              // D_m x N each, column i = item i
  std::vector<Label> labels;          // per item
  std::vector<std::string> item_ids;

  int modalities() const { return static_cast<int>(x.size()); }
  Index items() const { return x.empty() ? 0 : x[0].cols(); }

  ModalDataset subset(const std::vector<int>& idx) const;
  ModalDataset targets_only() const;
  std::vector<Vector> item(Index i) const;
  Index target_count() const;

  void validate() const;
};

struct SplitPlan {
  uint64_t seed = 0;
  std::vector<int> train_idx;
  std::vector<int> test_idx;
};

/// Per-feature z-scoring fitted on training target items only. Zero-variance
/// features map to 0 (inv_std entry 0).
struct Standardization {
  bool enabled = false;
  std::vector<Vector> mean;
  std::vector<Vector> inv_std;

  Vector apply(const Vector& v, int m) const;
  Matrix apply_matrix(const Matrix& x, int m) const;
};

/// UCI Robot Execution Failures file: repeated blocks of a class-name line,
/// 15 lines of 6 whitespace-separated integers (Fx Fy Fz Tx Ty Tz), and blank
/// separators. Produces modalities "force" and "torque", each 45-dim
/// time-major (t1: x,y,z, t2: x,y,z, ...).
/// An empty target_label resolves to "ok" for lp 3 and "normal" otherwise.
ModalDataset load_robot(const std::string& path, int lp, const std::string& target_label = "");

/// One SPECTF file: comma-separated rows of diagnosis (1 = healthy target)
/// followed by 22 rest features and 22 stress features.
ModalDataset load_spectf_file(const std::string& path);

std::pair<ModalDataset, ModalDataset> load_spectf(const std::string& train_path,
                                                  const std::string& test_path);

/// Per-class `fraction` (rounded) into train, deterministic under seed.
SplitPlan stratified_split(const std::vector<Label>& labels, double fraction, uint64_t seed);

/// k disjoint stratified validation sets covering train_idx.
std::vector<std::pair<std::vector<int>, std::vector<int>>> cv_folds(
    const std::vector<int>& train_idx, const std::vector<Label>& labels, int k, uint64_t seed);

Standardization fit_standardizer(const ModalDataset& data);
ModalDataset apply_standardizer(const Standardization& s, const ModalDataset& data);

}  // namespace mssvdd
