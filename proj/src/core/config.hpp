#pragma once

#include <string>
#include <vector>

#include "metrics.hpp"
#include "omega.hpp"
#include "trainer.hpp"

namespace mssvdd {

/// Full experiment description, read from a TOML file with sections
/// [dataset], [grids], [protocol], [output]. Unknown keys are errors.
struct ExperimentConfig {
  // [dataset]
  std::string kind;                  // "robot" | "spectf"
  std::string path;                  // robot data file
  std::string train_path, test_path; // spectf files
  int lp = 0;
  std::string target_label;          // optional override

  // [grids]
  std::vector<Variant> variants{Variant::linear};
  std::vector<OmegaKind> omegas{OmegaKind::w0};
  std::vector<Decision> decisions{Decision::ds1};
  std::vector<double> c_grid{0.3};
  std::vector<double> beta_grid{0.1};
  std::vector<double> sigma_grid{1.0};
  std::vector<int> d_grid{1};
  double eta = 0.1;
  int max_iter = 50;
  bool include_baselines = true;
  bool center_kernel_gram = false;

  // [protocol]
  std::vector<uint64_t> seeds{1, 2, 3, 4, 5};
  int cv_k = 5;
  double train_fraction = 0.7;
  bool standardize = true;

  // [output]
  std::string out_dir = "runs";

  void validate() const;
};

ExperimentConfig parse_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text, const std::string& origin);

std::string variant_name(Variant v);
std::string omega_name(OmegaKind w);
std::string decision_name(Decision d);
Variant variant_from_name(const std::string& s);
OmegaKind omega_from_name(const std::string& s);
Decision decision_from_name(const std::string& s);

}  // namespace mssvdd
