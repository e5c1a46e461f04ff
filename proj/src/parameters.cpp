#include "mpe/parameters.hpp"

#include <stdexcept>

namespace mpe {

ParameterSet ParameterSet::unit(int num_networks, double alpha_e) {
  ParameterSet p;
  p.alpha.assign(num_networks, 1.0);
  p.alpha.back() = alpha_e;
  p.c.assign(num_networks, 1.0);
  p.kappa.assign(num_networks, 1.0);
  p.mu.assign(num_networks, 1.0);
  p.beta_e.assign(num_networks, 1.0);
  p.beta = Eigen::MatrixXd::Ones(num_networks, num_networks);
  p.validate();
  return p;
}

void ParameterSet::validate() const {
  const int nj = num_networks();
  if (nj < 1) throw std::invalid_argument("ParameterSet: at least one network required");
  if (mu_el <= 0.0 || mu_f <= 0.0)
    throw std::invalid_argument("ParameterSet: mu_el and mu_f must be positive");
  auto size_ok = [nj](const std::vector<double>& v) {
    return static_cast<int>(v.size()) == nj;
  };
  if (!size_ok(c) || !size_ok(kappa) || !size_ok(mu) || !size_ok(beta_e) ||
      beta.rows() != nj || beta.cols() != nj)
    throw std::invalid_argument("ParameterSet: per-network arrays must have #J entries");
  for (int j = 0; j < nj; ++j) {
    if (alpha[j] < 0.0 || alpha[j] > 1.0)
      throw std::invalid_argument("ParameterSet: alpha_j must lie in [0,1]");
    if (kappa[j] <= 0.0 || mu[j] <= 0.0)
      throw std::invalid_argument("ParameterSet: kappa_j and mu_j must be positive");
    if (c[j] < 0.0 || beta_e[j] < 0.0)
      throw std::invalid_argument("ParameterSet: c_j and beta_e_j must be nonnegative");
    for (int k = 0; k < nj; ++k)
      if (beta(j, k) < 0.0)
        throw std::invalid_argument("ParameterSet: beta_jk must be nonnegative");
  }
}

}  // namespace mpe
