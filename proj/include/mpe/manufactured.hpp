#pragma once

#include "mpe/fields.hpp"
#include "mpe/parameters.hpp"

namespace mpe {

/// Strong-form residuals at one point, checked by 4th-order central finite
/// differences in space (analytic time derivatives). `scale_*` are local term
/// magnitudes for relative comparison.
struct SourceCheck {
  Vec2 r_momentum_el = Vec2::Zero();
  double r_mass_e = 0.0;
  Vec2 r_momentum_f = Vec2::Zero();
  double r_div_u = 0.0;
  double scale_el = 0.0, scale_e = 0.0, scale_f = 0.0;

  double max_relative() const;
};

/// Residuals of the five interface conditions at a point (0, y) on Σ,
/// evaluated on the analytic fields. Reported by the harness, not asserted.
struct InterfaceResiduals {
  double total_stress = 0.0;       // momentum balance across Σ
  double normal_stress = 0.0;      // p_E vs fluid normal stress
  double normal_flux = 0.0;        // mass exchange
  double tangential_stress = 0.0;  // free slip of the viscous traction
};

/// The single-network trigonometric solution of the convergence study, with
/// frequency η = μ_el/(μ_f(1−α_E)) and analytically derived sources. The
/// unsubscripted κ and μ prefactors of the closed forms are bound to κ_E and
/// μ_f; at unit parameters the choice is numerically irrelevant.
class ManufacturedSolution final : public ExactSolution {
 public:
  explicit ManufacturedSolution(const ParameterSet& params);

  const ParameterSet& params() const { return params_; }
  double eta() const { return eta_; }

  int num_networks() const override { return 1; }
  Vec2 displacement(double t, const Vec2& x) const override;
  Mat2 displacement_grad(double t, const Vec2& x) const override;
  Vec2 displacement_dt(double t, const Vec2& x) const override;
  void pressures(double t, const Vec2& x, std::span<double> out) const override;
  void pressure_grads(double t, const Vec2& x, std::span<Vec2> out) const override;
  void pressures_dt(double t, const Vec2& x, std::span<double> out) const override;
  Vec2 velocity(double t, const Vec2& x) const override;
  Mat2 velocity_grad(double t, const Vec2& x) const override;
  double stokes_pressure(double t, const Vec2& x) const override;
  Vec2 stokes_pressure_grad(double t, const Vec2& x) const override;

  /// ∇·u of the closed form (identically zero; kept for verification).
  double velocity_div(double t, const Vec2& x) const;

  /// Closed-form sources obtained by substituting the fields into the strong
  /// equations.
  SourceFields source_fields() const;

  SourceCheck verify_sources_fd(double t, const Vec2& x, double step) const;
  InterfaceResiduals interface_residuals(double t, double y) const;

 private:
  ParameterSet params_;
  double eta_;
  double kpre_, mpre_;  // κ and μ prefactor bindings
};

}  // namespace mpe
