#include "fga/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fga/error.hpp"
#include "fga/smoothfn.hpp"

namespace fga {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void require_dim(std::size_t have, std::size_t want, const char* what) {
  if (have != want)
    throw InvalidArgument(std::string(what) + ": dimension mismatch (" + std::to_string(have) +
                          " vs " + std::to_string(want) + ")");
}

double trig_value(const TrigPolynomial& t, std::span<const double> x) {
  double v = t.constant;
  for (const auto& term : t.terms) {
    require_dim(term.frequency.size(), x.size(), "TrigPolynomial");
    double arg = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) arg += term.frequency[i] * x[i];
    arg *= 2.0 * std::numbers::pi / t.L;
    v += term.cos_coef * std::cos(arg) + term.sin_coef * std::sin(arg);
  }
  return v;
}

std::vector<double> eval_raw(const PotentialSpec& p, const GridSpec& grid);

std::vector<double> eval_pointwise(const PotentialSpec& p, const GridSpec& grid) {
  std::vector<double> out(grid.size());
  std::vector<double> x(static_cast<std::size_t>(grid.n));
  for (std::size_t i = 0; i < out.size(); ++i) {
    grid.position(i, x);
    out[i] = evaluate(p, x);
  }
  return out;
}

std::vector<double> eval_raw(const PotentialSpec& p, const GridSpec& grid) {
  return std::visit(
      Overloaded{
          [&](const InitialCut& ic) {
            // separable: tabulate 1 - cut(|x|) once per axis coordinate
            const SmoothFnParams sp{ic.alpha, ic.beta, 1.0};
            const auto xs = axis_positions(grid);
            std::vector<double> axis(xs.size());
            for (std::size_t c = 0; c < xs.size(); ++c) axis[c] = 1.0 - cut(std::abs(xs[c]), sp);
            std::vector<double> out(grid.size());
            for (std::size_t i = 0; i < out.size(); ++i) {
              std::size_t rest = i;
              double s = 0.0;
              for (int a = 0; a < grid.n; ++a) {
                s += axis[rest % static_cast<std::size_t>(grid.N)];
                rest /= static_cast<std::size_t>(grid.N);
              }
              out[i] = ic.height * s;
            }
            return out;
          },
          [&](const Saturated& s) {
            auto inner = eval_raw(*s.inner, grid);
            const SmoothFnParams sp{s.c, s.width, 1.0};
            for (auto& v : inner) v = sat(v, sp);
            return inner;
          },
          [&](const Interpolated& ip) {
            auto a = eval_raw(*ip.p0, grid);
            const auto b = eval_raw(*ip.pT, grid);
            for (std::size_t i = 0; i < a.size(); ++i) a[i] = (1.0 - ip.s) * a[i] + ip.s * b[i];
            return a;
          },
          [&](const Tabulated& t) {
            require_same_grid(t.grid, grid, "eval_potential(Tabulated)");
            return t.values;
          },
          [&](const auto&) { return eval_pointwise(p, grid); },
      },
      p.value);
}

}  // namespace

int TrigPolynomial::max_frequency() const {
  int k = 0;
  for (const auto& t : terms)
    for (int l : t.frequency) k = std::max(k, std::abs(l));
  return k;
}

PotentialPtr make_potential(PotentialSpec::Variant v) {
  auto p = std::make_shared<const PotentialSpec>(PotentialSpec{std::move(v)});
  validate(*p);
  return p;
}

PotentialPtr quadratic(std::vector<double> center, std::vector<double> curvature) {
  return make_potential(Quadratic{std::move(center), std::move(curvature)});
}

PotentialPtr isotropic_quadratic(int n, double curvature) {
  return quadratic(std::vector<double>(static_cast<std::size_t>(n), 0.0),
                   std::vector<double>(static_cast<std::size_t>(n), curvature));
}

PotentialPtr constant_potential(double value) {
  return make_potential(TrigPolynomial{1.0, value, {}});
}

PotentialPtr initial_cut(int n, double height) {
  const double w = 1.0 / (4.0 * std::sqrt(static_cast<double>(n)));
  return make_potential(InitialCut{height, w, w});
}

PotentialPtr barrier_sum(std::vector<Halfplane> planes, double strength, double eps) {
  return make_potential(BarrierSum{std::move(planes), strength, eps});
}

PotentialPtr saturated(PotentialPtr inner, double c, double width) {
  return make_potential(Saturated{std::move(inner), c, width});
}

PotentialPtr interpolated(PotentialPtr p0, PotentialPtr pT, double s) {
  return make_potential(Interpolated{std::move(p0), std::move(pT), s});
}

PotentialPtr tabulated(const GridSpec& grid, std::vector<double> values) {
  return make_potential(Tabulated{grid, std::move(values)});
}

PotentialPtr trig_polynomial(double L, double constant, std::vector<TrigTerm> terms) {
  return make_potential(TrigPolynomial{L, constant, std::move(terms)});
}

void validate(const PotentialSpec& p) {
  std::visit(
      Overloaded{
          [](const Quadratic& q) {
            if (q.center.size() != q.curvature.size() || q.center.empty())
              throw InvalidArgument("Quadratic: center and curvature must be nonempty and equal length");
            for (double c : q.curvature)
              if (!(c >= 0.0)) throw InvalidArgument("Quadratic: curvature must be >= 0");
          },
          [](const BarrierSum& b) {
            if (b.planes.empty()) throw InvalidArgument("BarrierSum: no half-planes");
            if (!(b.strength >= 0.0) || !std::isfinite(b.strength))
              throw InvalidArgument("BarrierSum: strength must be finite and >= 0");
            if (!(b.eps > 0.0)) throw InvalidArgument("BarrierSum: eps must be > 0");
            const auto dim = b.planes.front().a.size();
            for (const auto& h : b.planes) {
              require_dim(h.a.size(), dim, "BarrierSum");
              const double nrm = std::sqrt(dot(h.a, h.a));
              if (std::abs(nrm - 1.0) > 1e-9) throw InvalidArgument("BarrierSum: normals must have unit length");
              if (!(h.b >= 1.0 - 1e-12)) throw InvalidArgument("BarrierSum: offsets b_j must be >= 1");
            }
          },
          [](const InitialCut& ic) {
            if (!(ic.height >= 0.0)) throw InvalidArgument("InitialCut: height must be >= 0");
            if (!(ic.beta > 0.0)) throw InvalidArgument("InitialCut: beta must be > 0");
          },
          [](const Saturated& s) {
            if (!s.inner) throw InvalidArgument("Saturated: missing inner potential");
            if (!(s.width > 0.0)) throw InvalidArgument("Saturated: width must be > 0");
          },
          [](const Interpolated& ip) {
            if (!ip.p0 || !ip.pT) throw InvalidArgument("Interpolated: missing endpoint");
            if (!(ip.s >= 0.0 && ip.s <= 1.0)) throw InvalidArgument("Interpolated: s must lie in [0,1]");
          },
          [](const Tabulated& t) {
            if (t.values.size() != t.grid.size()) throw InvalidArgument("Tabulated: value count does not match grid");
          },
          [](const TrigPolynomial& t) {
            if (!(t.L > 0.0)) throw InvalidArgument("TrigPolynomial: L must be > 0");
            if (!t.terms.empty()) {
              const auto dim = t.terms.front().frequency.size();
              for (const auto& term : t.terms) require_dim(term.frequency.size(), dim, "TrigPolynomial");
            }
          },
      },
      p.value);
}

double evaluate(const PotentialSpec& p, std::span<const double> x) {
  return std::visit(
      Overloaded{
          [&](const Quadratic& q) {
            require_dim(q.center.size(), x.size(), "Quadratic");
            double s = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
              const double d = x[i] - q.center[i];
              s += q.curvature[i] * d * d;
            }
            return s;
          },
          [&](const BarrierSum& b) {
            double s = 0.0;
            for (const auto& h : b.planes) {
              require_dim(h.a.size(), x.size(), "BarrierSum");
              s += bar(dot(h.a, x) - h.b, b.eps);
            }
            const double v = b.strength * s;
            if (!std::isfinite(v) || v > kPotentialOverflowGuard)
              throw NonFiniteValue("BarrierSum: value exceeds the 1e300 overflow guard");
            return v;
          },
          [&](const InitialCut& ic) {
            const SmoothFnParams sp{ic.alpha, ic.beta, 1.0};
            double s = 0.0;
            for (double xi : x) s += 1.0 - cut(std::abs(xi), sp);
            return ic.height * s;
          },
          [&](const Saturated& s) { return sat(evaluate(*s.inner, x), SmoothFnParams{s.c, s.width, 1.0}); },
          [&](const Interpolated& ip) {
            return (1.0 - ip.s) * evaluate(*ip.p0, x) + ip.s * evaluate(*ip.pT, x);
          },
          [&](const Tabulated&) -> double {
            throw InvalidArgument("evaluate: tabulated potentials are defined on grid points only");
          },
          [&](const TrigPolynomial& t) { return trig_value(t, x); },
      },
      p.value);
}

std::vector<double> eval_potential(const PotentialSpec& p, const GridSpec& grid) {
  const int dim = potential_dimension(p);
  if (dim != 0 && dim != grid.n)
    throw GridMismatch("eval_potential: potential dimension " + std::to_string(dim) +
                       " does not match grid dimension " + std::to_string(grid.n));
  auto values = eval_raw(p, grid);
  double scale = 0.0;
  for (double v : values) {
    if (!std::isfinite(v) || std::abs(v) > kPotentialOverflowGuard)
      throw NonFiniteValue("eval_potential: non-finite or overflowing value on the grid");
    scale = std::max(scale, std::abs(v));
  }
  const double floor = -1e-12 * std::max(1.0, scale);
  for (auto& v : values) {
    if (v < floor) throw InvalidArgument("eval_potential: potential is negative on the grid");
    v = std::max(v, 0.0);
  }
  return values;
}

int potential_dimension(const PotentialSpec& p) {
  return std::visit(
      Overloaded{
          [](const Quadratic& q) { return static_cast<int>(q.center.size()); },
          [](const BarrierSum& b) { return static_cast<int>(b.planes.front().a.size()); },
          [](const InitialCut&) { return 0; },
          [](const Saturated& s) { return potential_dimension(*s.inner); },
          [](const Interpolated& ip) {
            const int a = potential_dimension(*ip.p0);
            return a != 0 ? a : potential_dimension(*ip.pT);
          },
          [](const Tabulated& t) { return t.grid.n; },
          [](const TrigPolynomial& t) {
            return t.terms.empty() ? 0 : static_cast<int>(t.terms.front().frequency.size());
          },
      },
      p.value);
}

}  // namespace fga
