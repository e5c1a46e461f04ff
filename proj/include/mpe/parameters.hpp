#pragma once

#include <vector>

#include <Eigen/Dense>

namespace mpe {

/// Physical coefficients of the coupled system. Networks are indexed
/// 0..#J−1 with the interface-exchanging network E stored last.
struct ParameterSet {
  double mu_el = 1.0;   // elastic shear modulus
  double lambda = 1.0;  // first Lamé parameter
  double mu_f = 1.0;    // fluid viscosity

  std::vector<double> alpha;   // Biot coefficients, in [0,1]
  std::vector<double> c;       // storage coefficients, ≥ 0
  std::vector<double> kappa;   // permeabilities, > 0
  std::vector<double> mu;      // network fluid viscosities, > 0
  std::vector<double> beta_e;  // external exchange, ≥ 0
  Eigen::MatrixXd beta;        // inter-network exchange, ≥ 0, #J×#J

  int num_networks() const { return static_cast<int>(alpha.size()); }
  int exchange_network() const { return num_networks() - 1; }

  /// All coefficients 1 except alpha_E (the benchmark configuration).
  static ParameterSet unit(int num_networks = 1, double alpha_e = 0.5);

  /// Throws std::invalid_argument on any sign/range violation.
  void validate() const;
};

}  // namespace mpe
