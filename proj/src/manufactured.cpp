#include "mpe/manufactured.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace mpe {

namespace {

// spatial profile shared by d and u and its derivatives
double wfun(const Vec2& x) {
  return std::sin(M_PI * x.x()) * std::sin(M_PI * x.y()) -
         std::cos(M_PI * x.x()) * std::cos(M_PI * x.y());
}

Vec2 wgrad(const Vec2& x) {
  const double g = M_PI * (std::cos(M_PI * x.x()) * std::sin(M_PI * x.y()) +
                           std::sin(M_PI * x.x()) * std::cos(M_PI * x.y()));
  return Vec2(g, g);
}

// all second derivatives of w coincide
double wxx(const Vec2& x) {
  return M_PI * M_PI *
         (std::cos(M_PI * x.x()) * std::cos(M_PI * x.y()) -
          std::sin(M_PI * x.x()) * std::sin(M_PI * x.y()));
}

using ScalarFn = std::function<double(const Vec2&)>;

double fd1(const ScalarFn& f, const Vec2& x, int dir, double h) {
  Vec2 e = Vec2::Zero();
  e[dir] = h;
  return (-f(x + 2.0 * e) + 8.0 * f(x + e) - 8.0 * f(x - e) + f(x - 2.0 * e)) /
         (12.0 * h);
}

double fd2(const ScalarFn& f, const Vec2& x, int dir, double h) {
  Vec2 e = Vec2::Zero();
  e[dir] = h;
  return (-f(x + 2.0 * e) + 16.0 * f(x + e) - 30.0 * f(x) + 16.0 * f(x - e) -
          f(x - 2.0 * e)) /
         (12.0 * h * h);
}

double fd_mixed(const ScalarFn& f, const Vec2& x, double h) {
  const ScalarFn fy = [&](const Vec2& p) { return fd1(f, p, 1, h); };
  return fd1(fy, x, 0, h);
}

}  // namespace

double SourceCheck::max_relative() const {
  double r = 0.0;
  if (scale_el > 0.0)
    r = std::max(r, r_momentum_el.cwiseAbs().maxCoeff() / scale_el);
  if (scale_e > 0.0) r = std::max(r, std::abs(r_mass_e) / scale_e);
  if (scale_f > 0.0) r = std::max(r, r_momentum_f.cwiseAbs().maxCoeff() / scale_f);
  return r;
}

ManufacturedSolution::ManufacturedSolution(const ParameterSet& params)
    : params_(params) {
  params_.validate();
  if (params_.num_networks() != 1)
    throw std::invalid_argument("ManufacturedSolution: a single network is required");
  const double alpha = params_.alpha[0];
  if (alpha >= 1.0)
    throw std::invalid_argument("ManufacturedSolution: alpha_E must be < 1");
  eta_ = params_.mu_el / (params_.mu_f * (1.0 - alpha));
  kpre_ = params_.kappa[0];
  mpre_ = params_.mu_f;
}

Vec2 ManufacturedSolution::displacement(double t, const Vec2& x) const {
  const double theta = std::cos(eta_ * t) - std::sin(eta_ * t);
  const double a = theta * M_PI * kpre_ / eta_;
  return a * wfun(x) * Vec2(1.0, -1.0);
}

Mat2 ManufacturedSolution::displacement_grad(double t, const Vec2& x) const {
  const double theta = std::cos(eta_ * t) - std::sin(eta_ * t);
  const double a = theta * M_PI * kpre_ / eta_;
  const Vec2 g = a * wgrad(x);
  Mat2 out;
  out.row(0) = g.transpose();
  out.row(1) = -g.transpose();
  return out;
}

Vec2 ManufacturedSolution::displacement_dt(double t, const Vec2& x) const {
  const double theta_dt = -eta_ * (std::sin(eta_ * t) + std::cos(eta_ * t));
  const double a = theta_dt * M_PI * kpre_ / eta_;
  return a * wfun(x) * Vec2(1.0, -1.0);
}

void ManufacturedSolution::pressures(double t, const Vec2& x,
                                     std::span<double> out) const {
  const double theta = std::cos(eta_ * t) - std::sin(eta_ * t);
  const double b = 2.0 * M_PI * M_PI * mpre_ * kpre_ / params_.mu_el;
  out[0] = -theta * (M_PI * x.x() * std::cos(M_PI * x.y()) + b * std::sin(M_PI * x.y()));
}

void ManufacturedSolution::pressure_grads(double t, const Vec2& x,
                                          std::span<Vec2> out) const {
  const double theta = std::cos(eta_ * t) - std::sin(eta_ * t);
  const double b = 2.0 * M_PI * M_PI * mpre_ * kpre_ / params_.mu_el;
  out[0] = -theta * Vec2(M_PI * std::cos(M_PI * x.y()),
                         -M_PI * M_PI * x.x() * std::sin(M_PI * x.y()) +
                             b * M_PI * std::cos(M_PI * x.y()));
}

void ManufacturedSolution::pressures_dt(double t, const Vec2& x,
                                        std::span<double> out) const {
  const double theta_dt = -eta_ * (std::sin(eta_ * t) + std::cos(eta_ * t));
  const double b = 2.0 * M_PI * M_PI * mpre_ * kpre_ / params_.mu_el;
  out[0] =
      -theta_dt * (M_PI * x.x() * std::cos(M_PI * x.y()) + b * std::sin(M_PI * x.y()));
}

Vec2 ManufacturedSolution::velocity(double t, const Vec2& x) const {
  const double b = 2.0 * std::cos(eta_ * t) * M_PI * kpre_ / params_.mu_el;
  return b * wfun(x) * Vec2(-1.0, 1.0);
}

Mat2 ManufacturedSolution::velocity_grad(double t, const Vec2& x) const {
  const double b = 2.0 * std::cos(eta_ * t) * M_PI * kpre_ / params_.mu_el;
  const Vec2 g = b * wgrad(x);
  Mat2 out;
  out.row(0) = -g.transpose();
  out.row(1) = g.transpose();
  return out;
}

double ManufacturedSolution::velocity_div(double t, const Vec2& x) const {
  const Mat2 g = velocity_grad(t, x);
  return g.trace();
}

double ManufacturedSolution::stokes_pressure(double t, const Vec2& x) const {
  const double chi = 1.5 * std::cos(eta_ * t) - 0.5 * std::sin(eta_ * t);
  const double b = 4.0 * M_PI * M_PI * mpre_ * kpre_ / params_.mu_el;
  return -chi * (x.x() * std::cos(M_PI * x.y()) + b * std::sin(M_PI * x.y()));
}

Vec2 ManufacturedSolution::stokes_pressure_grad(double t, const Vec2& x) const {
  const double chi = 1.5 * std::cos(eta_ * t) - 0.5 * std::sin(eta_ * t);
  const double b = 4.0 * M_PI * M_PI * mpre_ * kpre_ / params_.mu_el;
  return -chi * Vec2(std::cos(M_PI * x.y()),
                     -M_PI * x.x() * std::sin(M_PI * x.y()) +
                         b * M_PI * std::cos(M_PI * x.y()));
}

SourceFields ManufacturedSolution::source_fields() const {
  const ParameterSet p = params_;
  const double eta = eta_;
  const double kpre = kpre_, mpre = mpre_;
  const double alpha = p.alpha[0];

  SourceFields s;
  // f_el = −∇·σ_P(d) + α ∇p_E; the λ term drops since ∇·d ≡ 0.
  s.f_el = [=](double t, const Vec2& x, std::span<double> out) {
    const double theta = std::cos(eta * t) - std::sin(eta * t);
    const double a = theta * M_PI * kpre / eta;
    const double divsig = 2.0 * p.mu_el * a * wxx(x);
    const double b = 2.0 * M_PI * M_PI * mpre * kpre / p.mu_el;
    const Vec2 grad_pe =
        -theta * Vec2(M_PI * std::cos(M_PI * x.y()),
                      -M_PI * M_PI * x.x() * std::sin(M_PI * x.y()) +
                          b * M_PI * std::cos(M_PI * x.y()));
    out[0] = -divsig + alpha * grad_pe.x();
    out[1] = divsig + alpha * grad_pe.y();
  };
  // g_E = c ∂_t p_E + α ∇·(∂_t d) − (κ_E/μ_E) Δp_E + β_E^e p_E, with
  // ∇·d ≡ 0 and Δp_E = π²θP (the profile P is a π²-eigenfunction).
  s.g = [=](double t, const Vec2& x, std::span<double> out) {
    const double theta = std::cos(eta * t) - std::sin(eta * t);
    const double theta_dt = -eta * (std::sin(eta * t) + std::cos(eta * t));
    const double b = 2.0 * M_PI * M_PI * mpre * kpre / p.mu_el;
    const double profile =
        M_PI * x.x() * std::cos(M_PI * x.y()) + b * std::sin(M_PI * x.y());
    out[0] = -profile * (p.c[0] * theta_dt + p.kappa[0] / p.mu[0] * M_PI * M_PI * theta +
                         p.beta_e[0] * theta);
  };
  // f_f = −∇·τ_F(u) + ∇p
  s.f_f = [=](double t, const Vec2& x, std::span<double> out) {
    const double bu = 2.0 * std::cos(eta * t) * M_PI * kpre / p.mu_el;
    const double divtau = -2.0 * p.mu_f * bu * wxx(x);
    const double chi = 1.5 * std::cos(eta * t) - 0.5 * std::sin(eta * t);
    const double bq = 4.0 * M_PI * M_PI * mpre * kpre / p.mu_el;
    const Vec2 grad_p = -chi * Vec2(std::cos(M_PI * x.y()),
                                    -M_PI * x.x() * std::sin(M_PI * x.y()) +
                                        bq * M_PI * std::cos(M_PI * x.y()));
    out[0] = -divtau + grad_p.x();
    out[1] = divtau + grad_p.y();
  };
  return s;
}

SourceCheck ManufacturedSolution::verify_sources_fd(double t, const Vec2& x,
                                                    double h) const {
  const ParameterSet& p = params_;
  const SourceFields src = source_fields();
  SourceCheck out;

  const auto comp = [this, t](int c) -> ScalarFn {
    return [this, t, c](const Vec2& y) { return displacement(t, y)[c]; };
  };
  const auto ucomp = [this, t](int c) -> ScalarFn {
    return [this, t, c](const Vec2& y) { return velocity(t, y)[c]; };
  };
  const ScalarFn pe = [this, t](const Vec2& y) {
    double v;
    pressures(t, y, std::span<double>(&v, 1));
    return v;
  };
  const ScalarFn pf = [this, t](const Vec2& y) { return stokes_pressure(t, y); };

  std::vector<double> buf(2);

  // (1a) −∇·σ_P(d) + α ∇p_E − f_el
  {
    const double d0xx = fd2(comp(0), x, 0, h), d0yy = fd2(comp(0), x, 1, h);
    const double d1xx = fd2(comp(1), x, 0, h), d1yy = fd2(comp(1), x, 1, h);
    const double d0xy = fd_mixed(comp(0), x, h), d1xy = fd_mixed(comp(1), x, h);
    // ∂_i ∇·d
    const Vec2 grad_div(d0xx + d1xy, d0xy + d1yy);
    const Vec2 lap(d0xx + d0yy, d1xx + d1yy);
    const Vec2 divsig = p.mu_el * (lap + grad_div) + p.lambda * grad_div;
    const Vec2 grad_pe(fd1(pe, x, 0, h), fd1(pe, x, 1, h));
    src.f_el(t, x, buf);
    const Vec2 f(buf[0], buf[1]);
    out.r_momentum_el = -divsig + p.alpha[0] * grad_pe - f;
    out.scale_el = divsig.norm() + grad_pe.norm() + f.norm();
  }

  // (1b) c ∂_t p_E + ∇·(α ∂_t d − (κ/μ)∇p_E) + β_E^e p_E − g_E
  {
    const ScalarFn ddt0 = [this, t](const Vec2& y) { return displacement_dt(t, y)[0]; };
    const ScalarFn ddt1 = [this, t](const Vec2& y) { return displacement_dt(t, y)[1]; };
    const double div_ddt = fd1(ddt0, x, 0, h) + fd1(ddt1, x, 1, h);
    const double lap_pe = fd2(pe, x, 0, h) + fd2(pe, x, 1, h);
    double pe_dt, pe_val, g;
    pressures_dt(t, x, std::span<double>(&pe_dt, 1));
    pressures(t, x, std::span<double>(&pe_val, 1));
    src.g(t, x, std::span<double>(&g, 1));
    out.r_mass_e = p.c[0] * pe_dt + p.alpha[0] * div_ddt -
                   p.kappa[0] / p.mu[0] * lap_pe + p.beta_e[0] * pe_val - g;
    out.scale_e = std::abs(p.c[0] * pe_dt) + std::abs(p.kappa[0] / p.mu[0] * lap_pe) +
                  std::abs(p.beta_e[0] * pe_val) + std::abs(g);
  }

  // (1c) −∇·τ_F(u) + ∇p − f_f
  {
    const double u0xx = fd2(ucomp(0), x, 0, h), u0yy = fd2(ucomp(0), x, 1, h);
    const double u1xx = fd2(ucomp(1), x, 0, h), u1yy = fd2(ucomp(1), x, 1, h);
    const double u0xy = fd_mixed(ucomp(0), x, h), u1xy = fd_mixed(ucomp(1), x, h);
    const Vec2 grad_div(u0xx + u1xy, u0xy + u1yy);
    const Vec2 lap(u0xx + u0yy, u1xx + u1yy);
    const Vec2 divtau = p.mu_f * (lap + grad_div);
    const Vec2 grad_p(fd1(pf, x, 0, h), fd1(pf, x, 1, h));
    src.f_f(t, x, buf);
    const Vec2 f(buf[0], buf[1]);
    out.r_momentum_f = -divtau + grad_p - f;
    out.scale_f = divtau.norm() + grad_p.norm() + f.norm();
  }

  // (1d) ∇·u
  out.r_div_u = fd1(ucomp(0), x, 0, h) + fd1(ucomp(1), x, 1, h);

  return out;
}

InterfaceResiduals ManufacturedSolution::interface_residuals(double t, double y) const {
  const ParameterSet& p = params_;
  const Vec2 x(0.0, y);
  const Vec2 n_el(1.0, 0.0), n_f(-1.0, 0.0);

  const Mat2 gd = displacement_grad(t, x);
  const Mat2 sigma =
      2.0 * p.mu_el * sym(gd) + p.lambda * gd.trace() * Mat2::Identity();
  const Mat2 tau = 2.0 * p.mu_f * sym(velocity_grad(t, x));
  double pe;
  pressures(t, x, std::span<double>(&pe, 1));
  Vec2 gpe;
  pressure_grads(t, x, std::span<Vec2>(&gpe, 1));
  const double pr = stokes_pressure(t, x);
  const Vec2 u = velocity(t, x);
  const Vec2 ddt = displacement_dt(t, x);

  InterfaceResiduals r;
  r.total_stress =
      (sigma * n_el - p.alpha[0] * pe * n_el + tau * n_f - pr * n_f).norm();
  r.normal_stress = std::abs(pe - (pr - (tau * n_f).dot(n_f)));
  r.normal_flux = u.dot(n_f) + (ddt - p.kappa[0] / p.mu[0] * gpe).dot(n_el);
  const Vec2 traction = tau * n_f;
  r.tangential_stress = (traction - traction.dot(n_f) * n_f).norm();
  return r;
}

}  // namespace mpe
