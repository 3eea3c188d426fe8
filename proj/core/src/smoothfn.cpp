#include "fga/smoothfn.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

#include "fga/error.hpp"

namespace fga {
namespace {

using Quadrature = boost::math::quadrature::gauss_kronrod<double, 31>;

constexpr double kQuadratureTol = 1e-13;
constexpr unsigned kQuadratureDepth = 20;
constexpr int kMaxPolyOrder = 20;

double bump_moment_integrand(double s) { return s * bump(s); }

double integrate_bump(double lo, double hi) {
  if (hi <= lo) return 0.0;
  return Quadrature::integrate(bump, lo, hi, kQuadratureDepth, kQuadratureTol);
}

double integrate_moment(double lo, double hi) {
  if (hi <= lo) return 0.0;
  return Quadrature::integrate(bump_moment_integrand, lo, hi, kQuadratureDepth, kQuadratureTol);
}

// int_0^u bump_cdf(s) ds. Equals u - 1/2 for u >= 1.
double cdf_integral(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return u - 0.5;
  const double z = bump_integral();
  // first moment int_0^u s bump(s) ds; the full moment is z/2 by symmetry
  const double moment = u <= 0.5 ? integrate_moment(0.0, u) : 0.5 * z - integrate_moment(u, 1.0);
  return u * bump_cdf(u) - moment / z;
}

// beta * cdf_integral((x - alpha)/beta) = int_{-inf}^x (1 - cut(y)) dy
double excess_integral(double x, const SmoothFnParams& p) {
  return p.beta * cdf_integral((x - p.alpha) / p.beta);
}

const std::vector<BumpDerivPoly>& poly_cache() {
  static const std::vector<BumpDerivPoly> cache = [] {
    std::vector<BumpDerivPoly> polys;
    polys.reserve(kMaxPolyOrder + 1);
    polys.push_back(BumpDerivPoly::of_order(0));
    for (int j = 1; j <= kMaxPolyOrder; ++j) polys.push_back(polys.back().next());
    return polys;
  }();
  return cache;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

void require_order(int m, const char* what) {
  if (m < 0) throw InvalidArgument(std::string(what) + ": derivative order must be >= 0");
  if (m > kMaxPolyOrder)
    throw InvalidArgument(std::string(what) + ": derivative order above " +
                          std::to_string(kMaxPolyOrder) + " overflows integer coefficients");
}

}  // namespace

void SmoothFnParams::validate() const {
  if (!(beta > 0.0)) throw InvalidArgument("SmoothFnParams: beta must be > 0");
  if (!(eps > 0.0)) throw InvalidArgument("SmoothFnParams: eps must be > 0");
}

double bump(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return std::exp(1.0 / (x * (x - 1.0)));
}

double bump_integral() {
  static const double z = [] {
    double err = 0.0;
    const double v = Quadrature::integrate(bump, 0.0, 1.0, kQuadratureDepth, 1e-14, &err);
    if (!(err <= 1e-12 * v)) throw Error("bump_integral: quadrature did not reach 1e-12");
    return v;
  }();
  return z;
}

double bump_cdf(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double z = bump_integral();
  if (u <= 0.5) return integrate_bump(0.0, u) / z;
  return 1.0 - integrate_bump(u, 1.0) / z;
}

double cut(double x, const SmoothFnParams& params) {
  if (!(params.beta > 0.0)) throw InvalidArgument("cut: beta must be > 0");
  return 1.0 - bump_cdf((x - params.alpha) / params.beta);
}

double sat(double x, const SmoothFnParams& params) {
  if (!(params.beta > 0.0)) throw InvalidArgument("sat: beta must be > 0");
  const double offset = excess_integral(0.0, params);
  if (x >= params.alpha + params.beta) return params.alpha + 0.5 * params.beta + offset;
  return x - excess_integral(x, params) + offset;
}

double bar(double x, double eps) {
  if (!(eps > 0.0)) throw InvalidArgument("bar: eps must be > 0");
  if (x <= 0.0) return 0.0;
  if (x >= eps) return x - 0.5 * eps;
  return eps * cdf_integral(x / eps);
}

BumpDerivPoly BumpDerivPoly::of_order(int order) {
  if (order < 0) throw InvalidArgument("BumpDerivPoly: order must be >= 0");
  BumpDerivPoly p(0, {1});
  while (p.order() < order) p = p.next();
  return p;
}

BumpDerivPoly BumpDerivPoly::next() const {
  // -t^2 (p' - p): shifts every power up by two
  std::vector<std::int64_t> out(coefficients_.size() + 2, 0);
  for (std::size_t i = 0; i < coefficients_.size(); ++i) {
    out[i + 2] += coefficients_[i];
    if (i > 0) out[i + 1] -= static_cast<std::int64_t>(i) * coefficients_[i];
  }
  while (out.size() > 1 && out.back() == 0) out.pop_back();
  return BumpDerivPoly(order_ + 1, std::move(out));
}

double BumpDerivPoly::operator()(double t) const {
  double acc = 0.0;
  for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it)
    acc = acc * t + static_cast<double>(*it);
  return acc;
}

std::int64_t BumpDerivPoly::coefficient_norm() const {
  std::int64_t s = 0;
  for (auto c : coefficients_) s += c < 0 ? -c : c;
  return s;
}

double f0_derivative(double x, int m) {
  require_order(m, "f0_derivative");
  if (x <= 0.0) return 0.0;
  const double t = 1.0 / x;
  const double e = std::exp(-t);
  if (e == 0.0) return 0.0;
  return poly_cache()[static_cast<std::size_t>(m)](t) * e;
}

double bump_derivative(double x, int m) {
  require_order(m, "bump_derivative");
  if (x <= 0.0 || x >= 1.0) return 0.0;
  if (m == 0) return bump(x);
  double acc = 0.0;
  for (int j = 0; j <= m; ++j) {
    const double left = f0_derivative(x, j);
    if (left == 0.0) continue;
    const double right = f0_derivative(1.0 - x, m - j);
    const double sign = ((m - j) % 2 == 0) ? 1.0 : -1.0;
    acc += binomial(m, j) * left * sign * right;
  }
  return acc;
}

double cut_derivative(double x, const SmoothFnParams& params, int l) {
  if (l < 1) throw InvalidArgument("cut_derivative: order must be >= 1");
  if (!(params.beta > 0.0)) throw InvalidArgument("cut_derivative: beta must be > 0");
  const double u = (x - params.alpha) / params.beta;
  return -bump_derivative(u, l - 1) / (std::pow(params.beta, l) * bump_integral());
}

double sat_derivative(double x, const SmoothFnParams& params, int l) {
  if (l < 1) throw InvalidArgument("sat_derivative: order must be >= 1");
  if (l == 1) return cut(x, params);
  return cut_derivative(x, params, l - 1);
}

double bar_derivative(double x, double eps, int l) {
  if (l < 1) throw InvalidArgument("bar_derivative: order must be >= 1");
  const SmoothFnParams p{0.0, eps, eps};
  if (l == 1) return 1.0 - cut(x, p);
  return -cut_derivative(x, p, l - 1);
}

double bump_derivative_bound(int m) {
  const double md = m;
  return std::pow(2.0, md) * std::pow(4.0 * std::pow(md, 4) / std::exp(2.0), md);
}

DerivativeTable tabulate_derivatives(const DerivativeFn& derivative, std::span<const double> samples,
                                     int m) {
  if (m < 1) throw InvalidArgument("tabulate_derivatives: m must be >= 1");
  DerivativeTable table;
  table.samples.assign(samples.begin(), samples.end());
  table.values.assign(static_cast<std::size_t>(m), std::vector<double>(samples.size()));
  for (int l = 1; l <= m; ++l)
    for (std::size_t i = 0; i < samples.size(); ++i)
      table.values[static_cast<std::size_t>(l - 1)][i] = derivative(samples[i], l);
  return table;
}

DerivativeTable finite_difference_table(const ScalarFn& f, std::span<const double> samples, int m,
                                        double h) {
  if (m < 1 || m > 8) throw InvalidArgument("finite_difference_table: order must be in [1, 8]");
  if (!(h > 0.0)) throw InvalidArgument("finite_difference_table: step must be > 0");
  auto central = [&f](double x, int l, double step) {
    double acc = 0.0;
    for (int k = 0; k <= l; ++k) {
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      acc += sign * binomial(l, k) * f(x + (0.5 * l - k) * step);
    }
    return acc / std::pow(step, l);
  };
  DerivativeTable table;
  table.samples.assign(samples.begin(), samples.end());
  table.values.assign(static_cast<std::size_t>(m), std::vector<double>(samples.size()));
  for (int l = 1; l <= m; ++l) {
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const double coarse = central(samples[i], l, h);
      const double fine = central(samples[i], l, 0.5 * h);
      table.values[static_cast<std::size_t>(l - 1)][i] = (4.0 * fine - coarse) / 3.0;
    }
  }
  return table;
}

std::vector<double> compose_derivatives(std::span<const double> f_at_g,
                                        std::span<const double> g_derivs) {
  const int m = static_cast<int>(std::min(f_at_g.size(), g_derivs.size()));
  // bell[n][k] = partial Bell polynomial B_{n,k}(g', g'', ...)
  std::vector<std::vector<double>> bell(static_cast<std::size_t>(m + 1),
                                        std::vector<double>(static_cast<std::size_t>(m + 1), 0.0));
  bell[0][0] = 1.0;
  for (int n = 1; n <= m; ++n) {
    for (int k = 1; k <= n; ++k) {
      double acc = 0.0;
      for (int i = 1; i <= n - k + 1; ++i)
        acc += binomial(n - 1, i - 1) * g_derivs[static_cast<std::size_t>(i - 1)] *
               bell[static_cast<std::size_t>(n - i)][static_cast<std::size_t>(k - 1)];
      bell[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)] = acc;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(m), 0.0);
  for (int n = 1; n <= m; ++n)
    for (int k = 1; k <= n; ++k)
      out[static_cast<std::size_t>(n - 1)] +=
          f_at_g[static_cast<std::size_t>(k - 1)] *
          bell[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
  return out;
}

double smoothness_factor(const DerivativeTable& table, int m) {
  if (table.empty()) throw InvalidArgument("smoothness_factor: empty derivative table");
  if (m < 1 || m > table.max_order())
    throw InvalidArgument("smoothness_factor: table lacks derivative order " + std::to_string(m));
  double best = 0.0;
  for (int l = 1; l <= m; ++l) {
    for (double v : table.values[static_cast<std::size_t>(l - 1)]) {
      const double a = std::abs(v);
      if (!(a > 1.0)) continue;  // (log a)^+ vanishes
      best = std::max(best, std::log(a) / l);
    }
  }
  return best;
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double step = (hi - lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = lo + step * static_cast<double>(i);
  return out;
}

}  // namespace fga
