#pragma once

#include "qcflab/io.hpp"
#include "qcflab/opnorms.hpp"

namespace qcflab {

// Right-hand side of the numerical experiments: f_j = h(x_j) cos(3 pi x_j)
// with h = 1 for x >= 0 and -1 for x < 0; smooth in the continuum region,
// discontinuous inside the atomistic region.
Displacement rhs_vector(const ModelParams& params);

struct FigureOutput {
  Table table;    // plot-ready rows
  Table summary;  // derived scalars (measured rates, slopes, crossings)
};

// Reproduces the data behind the four numerical experiments:
//   1: Richardson error histories, N=200, K in {8,32}, A_F=0.5, alpha optimal
//   2: QCL-preconditioned error history, N=800, K=32, A_F=0.2, alpha=1/3
//   3: GFC operator-norm scaling, all nine norms, K = ceil(sqrt(N))-1
//   4: GFC norms against A_F at N=256, K=15, with the unit-crossing strain
FigureOutput figure(int n);

// Effective CLI settings; round-trips losslessly through JSON, and flags
// given on the command line override file values.
struct ExperimentConfig {
  std::string command;
  int n = 8;
  int k = 2;
  double phi2 = 1.0;
  std::optional<double> phi22;
  std::optional<double> af;
  std::string precond = "qcl";
  std::optional<double> alpha;
  std::optional<std::string> alpha_rule;
  std::vector<std::string> norms;
  double tol = 1e-10;
  int max_iter = 500;
  std::string out;
  std::string format = "csv";
  std::string kind;
  std::string potential = "lj";
  std::string space = "u12";
  std::vector<int> n_list;
  std::string k_rule = "sqrt";
  int fig = 0;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

ExperimentConfig config_from_json(const std::string& text);
std::string config_to_json(const ExperimentConfig& config);

// Resolves the coefficient pair: either phi22 directly or derived from af
// via phi''_2F = (A_F - phi''_F)/4.
ModelParams params_from(const ExperimentConfig& config);

}  // namespace qcflab
