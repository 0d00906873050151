#include "descriptor/signal.hpp"

#include <cmath>

namespace descriptor {

namespace {

double falling_factorial_ratio(int k, int order) {
  // k! / (k - order)!
  double out = 1.0;
  for (int i = 0; i < order; ++i) out *= static_cast<double>(k - i);
  return out;
}

Index component_dim(const InputSignal::Component& c) {
  return std::visit(
      [](const auto& x) -> Index {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, InputSignal::Polynomial>) return x.coeffs.rows();
        else if constexpr (std::is_same_v<T, InputSignal::Exponential>) return x.amplitude.size();
        else if constexpr (std::is_same_v<T, InputSignal::Sinusoid>) return x.sin_amplitude.size();
        else if constexpr (std::is_same_v<T, InputSignal::Samples>) return x.values.empty() ? 0 : x.values.front().size();
        else return x.dim;
      },
      c);
}

}  // namespace

InputSignal InputSignal::zero(Index dim) { return polynomial(Matrix::Zero(dim, 1)); }

InputSignal InputSignal::constant(const Vector& value) { return polynomial(Matrix(value)); }

InputSignal InputSignal::polynomial(const Matrix& coeffs) {
  if (coeffs.cols() == 0) throw Error(ErrorCode::InvalidArgument, "polynomial input needs at least one coefficient");
  return InputSignal(coeffs.rows(), {Polynomial{coeffs}});
}

InputSignal InputSignal::exponential(const Vector& amplitude, double rate) {
  return InputSignal(amplitude.size(), {Exponential{amplitude, rate}});
}

InputSignal InputSignal::sinusoid(const Vector& sin_amplitude, const Vector& cos_amplitude, double omega) {
  if (sin_amplitude.size() != cos_amplitude.size())
    throw Error(ErrorCode::DimensionMismatch, "sinusoid amplitudes differ in length");
  return InputSignal(sin_amplitude.size(), {Sinusoid{sin_amplitude, cos_amplitude, omega}});
}

InputSignal InputSignal::samples(std::vector<Vector> values, double period, double start) {
  if (values.empty()) throw Error(ErrorCode::InvalidArgument, "sample-and-hold input needs at least one sample");
  if (!(period > 0.0)) throw Error(ErrorCode::InvalidArgument, "sample period must be positive");
  const Index dim = values.front().size();
  for (const auto& v : values)
    if (v.size() != dim) throw Error(ErrorCode::DimensionMismatch, "samples differ in length");
  return InputSignal(dim, {Samples{std::move(values), period, start}});
}

InputSignal InputSignal::custom(Index dim, std::function<Vector(double, int)> fn, int max_order) {
  if (!fn) throw Error(ErrorCode::InvalidArgument, "custom input needs a callback");
  return InputSignal(dim, {Custom{dim, std::move(fn), max_order}});
}

InputSignal InputSignal::operator+(const InputSignal& other) const {
  if (other.dim_ != dim_)
    throw Error(ErrorCode::DimensionMismatch, "cannot add inputs of dimension " + std::to_string(dim_) + " and " +
                                                  std::to_string(other.dim_));
  std::vector<Component> all = components_;
  all.insert(all.end(), other.components_.begin(), other.components_.end());
  return InputSignal(dim_, std::move(all));
}

InputSignal InputSignal::scaled(double factor) const {
  std::vector<Component> out;
  for (const auto& c : components_) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          T y = x;
          if constexpr (std::is_same_v<T, Polynomial>) y.coeffs *= factor;
          else if constexpr (std::is_same_v<T, Exponential>) y.amplitude *= factor;
          else if constexpr (std::is_same_v<T, Sinusoid>) {
            y.sin_amplitude *= factor;
            y.cos_amplitude *= factor;
          } else if constexpr (std::is_same_v<T, Samples>) {
            for (auto& v : y.values) v *= factor;
          } else {
            auto fn = x.fn;
            y.fn = [fn, factor](double t, int order) -> Vector { return factor * fn(t, order); };
          }
          out.push_back(std::move(y));
        },
        c);
  }
  return InputSignal(dim_, std::move(out));
}

std::string InputSignal::kind() const {
  if (components_.size() != 1) return "sum";
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Polynomial>) return "polynomial";
        else if constexpr (std::is_same_v<T, Exponential>) return "exponential";
        else if constexpr (std::is_same_v<T, Sinusoid>) return "sinusoid";
        else if constexpr (std::is_same_v<T, Samples>) return "samples";
        else return "custom";
      },
      components_.front());
}

Index InputSignal::sample_index(const Samples& s, double t) {
  // The small offset keeps t = start + k T (computed in floating point) in interval k.
  const double x = (t - s.start) / s.period;
  const double k = std::floor(x + 1e-9);
  if (k < 0.0) return 0;
  const auto last = static_cast<Index>(s.values.size()) - 1;
  return k > static_cast<double>(last) ? last : static_cast<Index>(k);
}

Vector InputSignal::component_derivative(const Component& component, double t, int order) {
  if (order < 0) throw Error(ErrorCode::InvalidArgument, "negative derivative order");
  return std::visit(
      [&](const auto& x) -> Vector {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Polynomial>) {
          Vector out = Vector::Zero(x.coeffs.rows());
          for (int k = order; k < x.coeffs.cols(); ++k)
            out += x.coeffs.col(k) * (falling_factorial_ratio(k, order) * std::pow(t, k - order));
          return out;
        } else if constexpr (std::is_same_v<T, Exponential>) {
          return x.amplitude * (std::pow(x.rate, order) * std::exp(x.rate * t));
        } else if constexpr (std::is_same_v<T, Sinusoid>) {
          // d^n/dt^n sin(wt) = w^n sin(wt + n pi/2), likewise for cos.
          const double phase = x.omega * t + order * M_PI / 2.0;
          const double scale = std::pow(x.omega, order);
          return scale * (x.sin_amplitude * std::sin(phase) + x.cos_amplitude * std::cos(phase));
        } else if constexpr (std::is_same_v<T, Samples>) {
          if (order > 0) return Vector::Zero(x.values.front().size());
          return x.values[static_cast<size_t>(sample_index(x, t))];
        } else {
          if (order > x.max_order)
            throw Error(ErrorCode::DerivativeUnavailable,
                        "custom input provides derivatives up to order " + std::to_string(x.max_order));
          Vector v = x.fn(t, order);
          if (v.size() != x.dim) throw Error(ErrorCode::DimensionMismatch, "custom input returned wrong length");
          return v;
        }
      },
      component);
}

Vector InputSignal::derivative(double t, int order) const {
  if (order > max_derivative_order())
    throw Error(ErrorCode::DerivativeUnavailable, "input provides derivatives up to order " +
                                                      std::to_string(max_derivative_order()) + ", requested " +
                                                      std::to_string(order));
  Vector out = Vector::Zero(dim_);
  for (const auto& c : components_) {
    if (component_dim(c) != dim_) throw Error(ErrorCode::DimensionMismatch, "input component has wrong length");
    out += component_derivative(c, t, order);
  }
  return out;
}

int InputSignal::max_derivative_order() const {
  int out = kUnlimitedOrder;
  for (const auto& c : components_)
    if (const auto* custom = std::get_if<Custom>(&c)) out = std::min(out, custom->max_order);
  return out;
}

std::optional<InputSignal::Generator> InputSignal::generator(const Component& component) {
  return std::visit(
      [](const auto& x) -> std::optional<Generator> {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Polynomial>) {
          // w_k = t^k / k!, so w_k' = w_{k-1}.
          const Index n = x.coeffs.cols();
          Matrix s = Matrix::Zero(n, n);
          for (Index k = 1; k < n; ++k) s(k, k - 1) = 1.0;
          Matrix c = x.coeffs;
          double fact = 1.0;
          for (Index k = 0; k < n; ++k) {
            if (k > 0) fact *= static_cast<double>(k);
            c.col(k) *= fact;
          }
          auto state = [n](double t) {
            Vector w(n);
            double term = 1.0;
            for (Index k = 0; k < n; ++k) {
              if (k > 0) term *= t / static_cast<double>(k);
              w(k) = term;
            }
            return w;
          };
          return Generator{s, c, state};
        } else if constexpr (std::is_same_v<T, Exponential>) {
          Matrix s(1, 1);
          s(0, 0) = x.rate;
          const double rate = x.rate;
          return Generator{s, Matrix(x.amplitude), [rate](double t) { return Vector::Constant(1, std::exp(rate * t)); }};
        } else if constexpr (std::is_same_v<T, Sinusoid>) {
          Matrix s(2, 2);
          s << 0.0, x.omega, -x.omega, 0.0;
          Matrix c(x.sin_amplitude.size(), 2);
          c << x.sin_amplitude, x.cos_amplitude;
          const double w = x.omega;
          return Generator{s, c, [w](double t) {
                             Vector v(2);
                             v << std::sin(w * t), std::cos(w * t);
                             return v;
                           }};
        } else {
          return std::nullopt;
        }
      },
      component);
}

}  // namespace descriptor
