#include "dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "rng.hpp"

namespace mssvdd {

ModalDataset ModalDataset::subset(const std::vector<int>& idx) const {
  ModalDataset out;
  out.modality_names = modality_names;
  out.x.reserve(x.size());
  for (const Matrix& xm : x) {
    Matrix sub(xm.rows(), static_cast<Index>(idx.size()));
    for (size_t k = 0; k < idx.size(); ++k) sub.col(static_cast<Index>(k)) = xm.col(idx[k]);
    out.x.push_back(std::move(sub));
  }
  out.labels.reserve(idx.size());
  out.item_ids.reserve(idx.size());
  for (int i : idx) {
    out.labels.push_back(labels[static_cast<size_t>(i)]);
    out.item_ids.push_back(item_ids[static_cast<size_t>(i)]);
  }
  return out;
}

ModalDataset ModalDataset::targets_only() const {
  std::vector<int> idx;
  for (size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == Label::positive) idx.push_back(static_cast<int>(i));
  return subset(idx);
}

std::vector<Vector> ModalDataset::item(Index i) const {
  std::vector<Vector> out;
  out.reserve(x.size());
  for (const Matrix& xm : x) out.push_back(xm.col(i));
  return out;
}

Index ModalDataset::target_count() const {
  Index c = 0;
  for (Label l : labels)
    if (l == Label::positive) ++c;
  return c;
}

void ModalDataset::validate() const {
  if (x.empty()) fail(errc::invalid_argument, "dataset: no modalities");
  const Index n = x[0].cols();
  for (const Matrix& xm : x) {
    if (xm.cols() != n) fail(errc::invalid_argument, "dataset: modality item counts differ");
    require_finite(xm, "dataset");
  }
  if (static_cast<Index>(labels.size()) != n)
    fail(errc::invalid_argument, "dataset: label count differs from item count");
  if (target_count() == 0) fail(errc::invalid_argument, "dataset: no target items");
}

// ---------------------------------------------------------------------------
// Robot Execution Failures parser

namespace {

bool blank_line(const std::string& s) {
  return s.find_first_not_of(" \t\r\n") == std::string::npos;
}

std::string trimmed(const std::string& s) {
  const size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

ModalDataset load_robot(const std::string& path, int lp, const std::string& target_label) {
  std::ifstream in(path);
  if (!in) fail(errc::data_unavailable, "load_robot: cannot open " + path);

  std::string target = target_label;
  if (target.empty()) target = (lp == 3) ? "ok" : "normal";

  std::vector<std::string> classes;
  std::vector<std::array<double, 45>> force_rows, torque_rows;

  std::string line;
  int line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!blank_line(line)) return true;
    }
    return false;
  };

  while (next_line()) {
    std::string cls = trimmed(line);
    if (cls.find_first_of(" \t") != std::string::npos)
      fail(errc::parse_error,
           "load_robot: expected class name at line " + std::to_string(line_no) + ", got '" + cls + "'");
    std::array<double, 45> force{}, torque{};
    for (int t = 0; t < 15; ++t) {
      if (!next_line())
        fail(errc::parse_error, "load_robot: unexpected end of file in block starting before line " +
                                    std::to_string(line_no));
      std::istringstream row(line);
      double v[6];
      for (int c = 0; c < 6; ++c)
        if (!(row >> v[c]))
          fail(errc::parse_error, "load_robot: expected 6 numbers at line " + std::to_string(line_no));
      std::string extra;
      if (row >> extra)
        fail(errc::parse_error, "load_robot: trailing fields at line " + std::to_string(line_no));
      for (int c = 0; c < 3; ++c) {
        force[static_cast<size_t>(t * 3 + c)] = v[c];
        torque[static_cast<size_t>(t * 3 + c)] = v[3 + c];
      }
    }
    classes.push_back(cls);
    force_rows.push_back(force);
    torque_rows.push_back(torque);
  }
  if (classes.empty()) fail(errc::parse_error, "load_robot: no blocks in " + path);

  bool target_seen = false;
  for (const std::string& c : classes)
    if (c == target) { target_seen = true; break; }
  if (!target_seen)
    fail(errc::unknown_label, "load_robot: target label '" + target + "' absent from " + path);

  const Index n = static_cast<Index>(classes.size());
  ModalDataset out;
  out.modality_names = {"force", "torque"};
  Matrix f(45, n), q(45, n);
  for (Index i = 0; i < n; ++i) {
    for (int j = 0; j < 45; ++j) {
      f(j, i) = force_rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
      q(j, i) = torque_rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
    }
    out.labels.push_back(classes[static_cast<size_t>(i)] == target ? Label::positive
                                                                   : Label::negative);
    out.item_ids.push_back("item" + std::to_string(i) + ":" + classes[static_cast<size_t>(i)]);
  }
  out.x = {std::move(f), std::move(q)};
  out.validate();
  return out;
}

// ---------------------------------------------------------------------------
// SPECTF parser

ModalDataset load_spectf_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::data_unavailable, "load_spectf: cannot open " + path);

  std::vector<std::array<double, 44>> rows;
  std::vector<Label> labels;

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank_line(line)) continue;
    std::vector<double> fields;
    std::istringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        size_t used = 0;
        const double v = std::stod(cell, &used);
        if (trimmed(cell.substr(used)).size())
          fail(errc::parse_error, "load_spectf: bad field at line " + std::to_string(line_no));
        fields.push_back(v);
      } catch (const error&) {
        throw;
      } catch (const std::exception&) {
        fail(errc::parse_error, "load_spectf: bad field at line " + std::to_string(line_no));
      }
    }
    if (fields.size() != 45)
      fail(errc::column_count, "load_spectf: line " + std::to_string(line_no) + " has " +
                                   std::to_string(fields.size()) + " fields, expected 45");
    if (fields[0] != 0.0 && fields[0] != 1.0)
      fail(errc::parse_error, "load_spectf: diagnosis must be 0 or 1 at line " + std::to_string(line_no));
    labels.push_back(fields[0] == 1.0 ? Label::positive : Label::negative);
    std::array<double, 44> r{};
    std::copy(fields.begin() + 1, fields.end(), r.begin());
    rows.push_back(r);
  }
  if (rows.empty()) fail(errc::parse_error, "load_spectf: no rows in " + path);

  const Index n = static_cast<Index>(rows.size());
  Matrix rest(22, n), stress(22, n);
  for (Index i = 0; i < n; ++i)
    for (int j = 0; j < 22; ++j) {
      rest(j, i) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
      stress(j, i) = rows[static_cast<size_t>(i)][static_cast<size_t>(22 + j)];
    }

  ModalDataset out;
  out.modality_names = {"rest", "stress"};
  out.x = {std::move(rest), std::move(stress)};
  out.labels = std::move(labels);
  for (Index i = 0; i < n; ++i) out.item_ids.push_back("row" + std::to_string(i));
  out.validate();
  return out;
}

std::pair<ModalDataset, ModalDataset> load_spectf(const std::string& train_path,
                                                  const std::string& test_path) {
  return {load_spectf_file(train_path), load_spectf_file(test_path)};
}

// ---------------------------------------------------------------------------
// Splits and folds

namespace {

std::map<Label, std::vector<int>> by_class(const std::vector<Label>& labels,
                                           const std::vector<int>* restrict_to = nullptr) {
  std::map<Label, std::vector<int>> groups;
  if (restrict_to) {
    for (int i : *restrict_to) groups[labels[static_cast<size_t>(i)]].push_back(i);
  } else {
    for (size_t i = 0; i < labels.size(); ++i) groups[labels[i]].push_back(static_cast<int>(i));
  }
  return groups;
}

}  // namespace

SplitPlan stratified_split(const std::vector<Label>& labels, double fraction, uint64_t seed) {
  if (fraction <= 0.0 || fraction >= 1.0)
    fail(errc::invalid_argument, "stratified_split: fraction must be in (0,1)");
  auto groups = by_class(labels);
  for (const auto& [label, idx] : groups)
    if (idx.size() < 2) fail(errc::too_few_items, "stratified_split: a class has fewer than 2 items");

  SplitPlan plan;
  plan.seed = seed;
  Rng rng(seed);
  for (auto& [label, idx] : groups) {
    rng.shuffle(idx);
    const size_t take = static_cast<size_t>(
        std::lround(fraction * static_cast<double>(idx.size())));
    const size_t bounded = std::min(std::max<size_t>(take, 1), idx.size() - 1);
    for (size_t i = 0; i < idx.size(); ++i)
      (i < bounded ? plan.train_idx : plan.test_idx).push_back(idx[i]);
  }
  std::sort(plan.train_idx.begin(), plan.train_idx.end());
  std::sort(plan.test_idx.begin(), plan.test_idx.end());
  return plan;
}

std::vector<std::pair<std::vector<int>, std::vector<int>>> cv_folds(
    const std::vector<int>& train_idx, const std::vector<Label>& labels, int k, uint64_t seed) {
  if (k < 2) fail(errc::invalid_argument, "cv_folds: k must be >= 2");
  if (train_idx.size() < static_cast<size_t>(k))
    fail(errc::too_few_items, "cv_folds: fewer items than folds");

  auto groups = by_class(labels, &train_idx);
  std::vector<std::vector<int>> val(static_cast<size_t>(k));
  Rng rng(seed);
  for (auto& [label, idx] : groups) {
    rng.shuffle(idx);
    for (size_t i = 0; i < idx.size(); ++i) val[i % static_cast<size_t>(k)].push_back(idx[i]);
  }

  std::vector<std::pair<std::vector<int>, std::vector<int>>> folds;
  for (int f = 0; f < k; ++f) {
    std::vector<int> fit;
    for (int g = 0; g < k; ++g)
      if (g != f) fit.insert(fit.end(), val[static_cast<size_t>(g)].begin(), val[static_cast<size_t>(g)].end());
    std::vector<int> v = val[static_cast<size_t>(f)];
    std::sort(fit.begin(), fit.end());
    std::sort(v.begin(), v.end());
    folds.emplace_back(std::move(fit), std::move(v));
  }
  return folds;
}

// ---------------------------------------------------------------------------
// Standardization

Vector Standardization::apply(const Vector& v, int m) const {
  if (!enabled) return v;
  const size_t mi = static_cast<size_t>(m);
  if (v.size() != mean[mi].size()) fail(errc::invalid_argument, "standardize: dimension mismatch");
  return (v - mean[mi]).cwiseProduct(inv_std[mi]);
}

Matrix Standardization::apply_matrix(const Matrix& x, int m) const {
  if (!enabled) return x;
  const size_t mi = static_cast<size_t>(m);
  return inv_std[mi].asDiagonal() * (x.colwise() - mean[mi]);
}

Standardization fit_standardizer(const ModalDataset& data) {
  const ModalDataset targets = data.targets_only();
  if (targets.items() == 0) fail(errc::invalid_argument, "fit_standardizer: no target items");

  Standardization s;
  s.enabled = true;
  for (int m = 0; m < targets.modalities(); ++m) {
    const Matrix& xm = targets.x[static_cast<size_t>(m)];
    const Index n = xm.cols();
    const Vector mu = xm.rowwise().mean();
    const Matrix centered = xm.colwise() - mu;
    Vector inv = Vector::Zero(xm.rows());
    for (Index j = 0; j < xm.rows(); ++j) {
      const double var = centered.row(j).squaredNorm() / static_cast<double>(n);
      if (var > 0.0) inv(j) = 1.0 / std::sqrt(var);
    }
    s.mean.push_back(mu);
    s.inv_std.push_back(inv);
  }
  return s;
}

ModalDataset apply_standardizer(const Standardization& s, const ModalDataset& data) {
  ModalDataset out = data;
  if (!s.enabled) return out;
  for (int m = 0; m < data.modalities(); ++m)
    out.x[static_cast<size_t>(m)] = s.apply_matrix(data.x[static_cast<size_t>(m)], m);
  return out;
}

}  // namespace mssvdd
