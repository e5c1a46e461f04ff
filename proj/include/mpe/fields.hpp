#pragma once

#include <functional>
#include <span>

#include "mpe/geometry.hpp"

namespace mpe {

/// Space-time field with `components` outputs, written to `out`.
using FieldFn = std::function<void(double t, const Vec2& x, std::span<double> out)>;

inline FieldFn zero_field() {
  return [](double, const Vec2&, std::span<double> out) {
    for (double& v : out) v = 0.0;
  };
}

/// Source data (f_el, g_J, f_f) of the strong problem.
struct SourceFields {
  FieldFn f_el;  // 2 components, elastic
  FieldFn g;     // #J components, elastic
  FieldFn f_f;   // 2 components, fluid
};

/// Dirichlet traces per field; the Stokes pressure carries no constraint.
struct BoundaryFields {
  FieldFn d;   // 2 components
  FieldFn pj;  // #J components
  FieldFn u;   // 2 components
};

/// Initial data (u and p only seed the error reporting, not the stepping).
struct InitialFields {
  FieldFn d;
  FieldFn pj;
  FieldFn u;
  FieldFn p;
};

/// Closed-form space-time solution with the derivatives needed by the error
/// norms, the data estimator, and the finite-difference source oracle.
class ExactSolution {
 public:
  virtual ~ExactSolution() = default;

  virtual int num_networks() const = 0;

  virtual Vec2 displacement(double t, const Vec2& x) const = 0;
  virtual Mat2 displacement_grad(double t, const Vec2& x) const = 0;  // (i,j) = ∂_j d_i
  virtual Vec2 displacement_dt(double t, const Vec2& x) const = 0;

  virtual void pressures(double t, const Vec2& x, std::span<double> out) const = 0;
  virtual void pressure_grads(double t, const Vec2& x, std::span<Vec2> out) const = 0;
  virtual void pressures_dt(double t, const Vec2& x, std::span<double> out) const = 0;

  virtual Vec2 velocity(double t, const Vec2& x) const = 0;
  virtual Mat2 velocity_grad(double t, const Vec2& x) const = 0;
  virtual double stokes_pressure(double t, const Vec2& x) const = 0;
  virtual Vec2 stokes_pressure_grad(double t, const Vec2& x) const = 0;

  FieldFn displacement_field() const;
  FieldFn pressures_field() const;
  FieldFn velocity_field() const;
  FieldFn stokes_pressure_field() const;
  BoundaryFields boundary_fields() const;
  InitialFields initial_fields() const;
};

/// The identically-zero solution (degenerate-input testing).
class ZeroSolution final : public ExactSolution {
 public:
  explicit ZeroSolution(int num_networks = 1) : nj_(num_networks) {}
  int num_networks() const override { return nj_; }
  Vec2 displacement(double, const Vec2&) const override { return Vec2::Zero(); }
  Mat2 displacement_grad(double, const Vec2&) const override { return Mat2::Zero(); }
  Vec2 displacement_dt(double, const Vec2&) const override { return Vec2::Zero(); }
  void pressures(double, const Vec2&, std::span<double> out) const override {
    for (double& v : out) v = 0.0;
  }
  void pressure_grads(double, const Vec2&, std::span<Vec2> out) const override {
    for (Vec2& g : out) g.setZero();
  }
  void pressures_dt(double, const Vec2&, std::span<double> out) const override {
    for (double& v : out) v = 0.0;
  }
  Vec2 velocity(double, const Vec2&) const override { return Vec2::Zero(); }
  Mat2 velocity_grad(double, const Vec2&) const override { return Mat2::Zero(); }
  double stokes_pressure(double, const Vec2&) const override { return 0.0; }
  Vec2 stokes_pressure_grad(double, const Vec2&) const override { return Vec2::Zero(); }

 private:
  int nj_;
};

}  // namespace mpe
