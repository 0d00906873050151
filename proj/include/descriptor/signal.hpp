#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "descriptor/linalg.hpp"

namespace descriptor {

/// Vector-valued input V(t) with exact derivatives.
///
/// A signal is a sum of components. Polynomial, exponential and sinusoid
/// components are generated by a linear ODE w' = S w with V = C w, which
/// lets the solvers integrate them in closed form. Sample-and-hold
/// components are piecewise constant; custom components are user callbacks
/// and fall back to quadrature.
class InputSignal {
 public:
  /// V(t) = sum_k coeffs.col(k) t^k
  struct Polynomial {
    Matrix coeffs;
  };
  /// V(t) = amplitude * exp(rate t)
  struct Exponential {
    Vector amplitude;
    double rate = 0.0;
  };
  /// V(t) = sin_amplitude * sin(omega t) + cos_amplitude * cos(omega t)
  struct Sinusoid {
    Vector sin_amplitude;
    Vector cos_amplitude;
    double omega = 0.0;
  };
  /// V(t) = values[k] on [start + k T, start + (k+1) T). Before `start` the
  /// first sample applies, after the last interval the last one is held.
  struct Samples {
    std::vector<Vector> values;
    double period = 1.0;
    double start = 0.0;
  };
  /// fn(t, order) returns the order-th derivative, for order <= max_order.
  struct Custom {
    Index dim = 0;
    std::function<Vector(double, int)> fn;
    int max_order = 0;
  };
  using Component = std::variant<Polynomial, Exponential, Sinusoid, Samples, Custom>;

  /// Closed-form generator of a component: V(t) = C w(t), w' = S w.
  struct Generator {
    Matrix S;
    Matrix C;
    std::function<Vector(double)> state;  ///< w(t)
  };

  static constexpr int kUnlimitedOrder = std::numeric_limits<int>::max();

  static InputSignal zero(Index dim);
  static InputSignal constant(const Vector& value);
  static InputSignal polynomial(const Matrix& coeffs);
  static InputSignal exponential(const Vector& amplitude, double rate);
  static InputSignal sinusoid(const Vector& sin_amplitude, const Vector& cos_amplitude, double omega);
  static InputSignal samples(std::vector<Vector> values, double period, double start = 0.0);
  static InputSignal custom(Index dim, std::function<Vector(double, int)> fn, int max_order);

  InputSignal operator+(const InputSignal& other) const;
  InputSignal scaled(double factor) const;

  Index dimension() const { return dim_; }
  const std::vector<Component>& components() const { return components_; }

  /// "polynomial", "exponential", "sinusoid", "samples", "custom", or "sum".
  std::string kind() const;

  Vector value(double t) const { return derivative(t, 0); }
  /// Throws DerivativeUnavailable beyond max_derivative_order().
  Vector derivative(double t, int order) const;
  int max_derivative_order() const;

  static std::optional<Generator> generator(const Component& component);
  static Vector component_derivative(const Component& component, double t, int order);

  /// Index of the sample interval containing t, clamped to the stored range.
  static Index sample_index(const Samples& s, double t);

 private:
  InputSignal(Index dim, std::vector<Component> components) : dim_(dim), components_(std::move(components)) {}

  Index dim_ = 0;
  std::vector<Component> components_;
};

}  // namespace descriptor
