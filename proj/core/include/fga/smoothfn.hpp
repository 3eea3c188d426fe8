#pragma once

// Compactly supported smooth functions used to build potentials:
//
//   bump(x)          = exp(1/(x(x-1)))  on (0,1), 0 elsewhere
//   cut_{a,b}(x)     = 1 - int_a^x bump((y-a)/b) dy / int_a^{a+b} bump((y-a)/b) dy
//   sat_{a,b}(x)     = int_0^x cut_{a,b}(y) dy
//   bar_eps(x)       = int_0^x (1 - cut_{0,eps}(y)) dy
//
// plus exact derivatives of bump and the smoothness factor
//   max_{l<=m, x} (log|f^(l)(x)|)^+ / l.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace fga {

struct SmoothFnParams {
  double alpha = 0.0;  // onset of the transition band
  double beta = 1.0;   // width of the transition band
  double eps = 1.0;    // barrier width

  void validate() const;
};

double bump(double x);

/// Integral of bump over [0,1]. Computed once (thread-safe) to 1e-12 relative error.
double bump_integral();

/// Normalized cumulative bump, int_0^u bump / bump_integral(). Clamped to [0,1].
double bump_cdf(double u);

double cut(double x, const SmoothFnParams& params);
double sat(double x, const SmoothFnParams& params);
double bar(double x, double eps);

/// Polynomial p_j with f0^(j)(x) = p_j(1/x) exp(-1/x), f0(x) = exp(-1/x) for x > 0.
/// Generated by p_{j+1}(t) = -t^2 (p_j'(t) - p_j(t)), p_0 = 1.
class BumpDerivPoly {
 public:
  static BumpDerivPoly of_order(int order);

  int order() const noexcept { return order_; }
  int degree() const noexcept { return static_cast<int>(coefficients_.size()) - 1; }
  /// coefficients()[i] multiplies t^i.
  const std::vector<std::int64_t>& coefficients() const noexcept { return coefficients_; }

  double operator()(double t) const;
  BumpDerivPoly next() const;
  /// Sum of absolute coefficient values.
  std::int64_t coefficient_norm() const;

 private:
  BumpDerivPoly(int order, std::vector<std::int64_t> coefficients)
      : order_(order), coefficients_(std::move(coefficients)) {}

  int order_;
  std::vector<std::int64_t> coefficients_;
};

/// m-th derivative of exp(-1/x) (zero for x <= 0).
double f0_derivative(double x, int m);

/// Exact m-th derivative of bump via the Leibniz rule on f0(x) f0(1-x).
double bump_derivative(double x, int m);

/// l-th derivatives of cut/sat/bar, l >= 1, from the bump derivatives.
double cut_derivative(double x, const SmoothFnParams& params, int l);
double sat_derivative(double x, const SmoothFnParams& params, int l);
double bar_derivative(double x, double eps, int l);

/// The bound 2^m (4 m^4 / e^2)^m on max |bump^(m)|.
double bump_derivative_bound(int m);

/// Sampled derivatives of a scalar function: values[l-1][i] = f^(l)(samples[i]).
struct DerivativeTable {
  std::vector<double> samples;
  std::vector<std::vector<double>> values;

  int max_order() const noexcept { return static_cast<int>(values.size()); }
  bool empty() const noexcept { return samples.empty() || values.empty(); }
};

using ScalarFn = std::function<double(double)>;
using DerivativeFn = std::function<double(double, int)>;

/// Tabulate an exact derivative function on samples for orders 1..m.
DerivativeTable tabulate_derivatives(const DerivativeFn& derivative, std::span<const double> samples,
                                     int m);

/// Richardson-extrapolated central differences for orders 1..m (m <= 8).
DerivativeTable finite_difference_table(const ScalarFn& f, std::span<const double> samples, int m,
                                        double h = 1e-2);

/// Derivatives of f(g(x)) from derivatives of f at g(x) and of g at x (Faa di Bruno).
/// f_at_g[k-1] = f^(k)(g(x)), g_derivs[k-1] = g^(k)(x), k = 1..m.
std::vector<double> compose_derivatives(std::span<const double> f_at_g,
                                        std::span<const double> g_derivs);

/// max over l <= m and samples of (log|f^(l)|)^+ / l; (log 0)^+ is 0.
double smoothness_factor(const DerivativeTable& table, int m);

/// Evenly spaced samples on [lo, hi].
std::vector<double> linspace(double lo, double hi, std::size_t count);

}  // namespace fga
