#include "mpe/fields.hpp"

namespace mpe {

FieldFn ExactSolution::displacement_field() const {
  return [this](double t, const Vec2& x, std::span<double> out) {
    const Vec2 v = displacement(t, x);
    out[0] = v.x();
    out[1] = v.y();
  };
}

FieldFn ExactSolution::pressures_field() const {
  return [this](double t, const Vec2& x, std::span<double> out) {
    pressures(t, x, out);
  };
}

FieldFn ExactSolution::velocity_field() const {
  return [this](double t, const Vec2& x, std::span<double> out) {
    const Vec2 v = velocity(t, x);
    out[0] = v.x();
    out[1] = v.y();
  };
}

FieldFn ExactSolution::stokes_pressure_field() const {
  return [this](double t, const Vec2& x, std::span<double> out) {
    out[0] = stokes_pressure(t, x);
  };
}

BoundaryFields ExactSolution::boundary_fields() const {
  return {displacement_field(), pressures_field(), velocity_field()};
}

InitialFields ExactSolution::initial_fields() const {
  return {displacement_field(), pressures_field(), velocity_field(),
          stokes_pressure_field()};
}

}  // namespace mpe
