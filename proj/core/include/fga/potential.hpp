#pragma once

#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "fga/grid.hpp"

namespace fga {

struct PotentialSpec;
using PotentialPtr = std::shared_ptr<const PotentialSpec>;

/// sum_i curvature_i (x_i - center_i)^2
struct Quadratic {
  std::vector<double> center;
  std::vector<double> curvature;
};

/// Half-space a.x <= b.
struct Halfplane {
  std::vector<double> a;
  double b = 1.0;
};

/// strength * sum_j bar_eps(a_j.x - b_j). Requires |a_j| = 1 and b_j >= 1.
struct BarrierSum {
  std::vector<Halfplane> planes;
  double strength = 1.0;
  double eps = 0.1;
};

/// height * sum_i (1 - cut_{alpha,beta}(|x_i|)); alpha = beta = 1/(4 sqrt n) for the FGA start.
struct InitialCut {
  double height = 0.0;
  double alpha = 0.25;
  double beta = 0.25;
};

/// sat_{c,width}(inner(x))
struct Saturated {
  PotentialPtr inner;
  double c = 0.0;
  double width = 1.0;
};

/// (1 - s) p0 + s pT pointwise.
struct Interpolated {
  PotentialPtr p0;
  PotentialPtr pT;
  double s = 0.0;
};

/// Values given directly on one grid.
struct Tabulated {
  GridSpec grid;
  std::vector<double> values;
};

/// One real Fourier mode cos_coef cos(2 pi l.x/L) + sin_coef sin(2 pi l.x/L).
struct TrigTerm {
  std::vector<int> frequency;
  double cos_coef = 0.0;
  double sin_coef = 0.0;
};

/// constant + sum of TrigTerms; band-limited with max |l|_inf.
struct TrigPolynomial {
  double L = 1.0;
  double constant = 0.0;
  std::vector<TrigTerm> terms;

  int max_frequency() const;
};

struct PotentialSpec {
  using Variant = std::variant<Quadratic, BarrierSum, InitialCut, Saturated, Interpolated,
                               Tabulated, TrigPolynomial>;
  Variant value;

  template <class T>
  bool holds() const noexcept {
    return std::holds_alternative<T>(value);
  }
  template <class T>
  const T& as() const {
    return std::get<T>(value);
  }
};

PotentialPtr make_potential(PotentialSpec::Variant v);

PotentialPtr quadratic(std::vector<double> center, std::vector<double> curvature);
/// |x|^2 in n dimensions.
PotentialPtr isotropic_quadratic(int n, double curvature = 1.0);
/// Constant on any grid.
PotentialPtr constant_potential(double value);
PotentialPtr initial_cut(int n, double height);
PotentialPtr barrier_sum(std::vector<Halfplane> planes, double strength, double eps);
PotentialPtr saturated(PotentialPtr inner, double c, double width = 1.0);
PotentialPtr interpolated(PotentialPtr p0, PotentialPtr pT, double s);
PotentialPtr tabulated(const GridSpec& grid, std::vector<double> values);
PotentialPtr trig_polynomial(double L, double constant, std::vector<TrigTerm> terms);

/// Checks structural invariants (unit normals, b_j >= 1, s in [0,1], ...).
void validate(const PotentialSpec& p);

/// Pointwise value; Tabulated potentials cannot be evaluated off-grid.
double evaluate(const PotentialSpec& p, std::span<const double> x);

/// Values at y L / N over the grid in the storage layout. Rejects NaN, infinity,
/// values above 1e300, and negative values.
std::vector<double> eval_potential(const PotentialSpec& p, const GridSpec& grid);

/// Dimension the potential is defined in, or 0 when it does not constrain it.
int potential_dimension(const PotentialSpec& p);

inline constexpr double kPotentialOverflowGuard = 1e300;

}  // namespace fga
