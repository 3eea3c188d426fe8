#include "fga/polytope.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "fga/error.hpp"

namespace fga {
namespace {

constexpr double kFeasTol = 1e-9;

int dim_of(const std::vector<Halfplane>& planes) {
  if (planes.empty()) throw InvalidArgument("polytope: no half-planes");
  const auto n = planes.front().a.size();
  if (n == 0) throw InvalidArgument("polytope: zero-dimensional normals");
  for (const auto& p : planes)
    if (p.a.size() != n) throw InvalidArgument("polytope: normals have inconsistent dimensions");
  return static_cast<int>(n);
}

void for_each_subset(int m, int k, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> pick(static_cast<std::size_t>(k));
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == k) {
      fn(pick);
      return;
    }
    for (int i = start; i <= m - (k - depth); ++i) {
      pick[static_cast<std::size_t>(depth)] = i;
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
}

double dot(const std::vector<double>& a, const Eigen::VectorXd& x) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * x(static_cast<Eigen::Index>(i));
  return s;
}

}  // namespace

ChebyshevBall chebyshev_ball(const std::vector<Halfplane>& planes) {
  const int n = dim_of(planes);
  const int m = static_cast<int>(planes.size());
  if (m < n + 1) throw InvalidArgument("chebyshev_ball: a bounded polytope needs at least n+1 half-planes");
  // LP: maximize rho s.t. a_j.x + |a_j| rho <= b_j; optimum sits at a vertex of n+1 active rows
  double best = -std::numeric_limits<double>::infinity();
  std::vector<Eigen::VectorXd> optima;
  for_each_subset(m, n + 1, [&](const std::vector<int>& rows) {
    Eigen::MatrixXd A(n + 1, n + 1);
    Eigen::VectorXd rhs(n + 1);
    for (int r = 0; r < n + 1; ++r) {
      const auto& p = planes[static_cast<std::size_t>(rows[static_cast<std::size_t>(r)])];
      double nrm = 0.0;
      for (int c = 0; c < n; ++c) {
        A(r, c) = p.a[static_cast<std::size_t>(c)];
        nrm += p.a[static_cast<std::size_t>(c)] * p.a[static_cast<std::size_t>(c)];
      }
      A(r, n) = std::sqrt(nrm);
      rhs(r) = p.b;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (!lu.isInvertible()) return;
    const Eigen::VectorXd z = lu.solve(rhs);
    const double rho = z(n);
    for (const auto& p : planes) {
      double nrm = 0.0;
      for (double v : p.a) nrm += v * v;
      if (dot(p.a, z.head(n)) + std::sqrt(nrm) * rho > p.b + kFeasTol * std::max(1.0, std::abs(p.b))) return;
    }
    if (rho > best + 1e-12) {
      best = rho;
      optima.assign(1, z.head(n));
    } else if (rho > best - 1e-12) {
      optima.push_back(z.head(n));
    }
  });
  if (optima.empty()) throw InvalidArgument("chebyshev_ball: polytope is empty or unbounded");
  // the optimal set is convex, so the mean of optimal vertices is optimal too
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(n);
  for (const auto& o : optima) mean += o;
  mean /= static_cast<double>(optima.size());
  return {std::vector<double>(mean.data(), mean.data() + n), best};
}

std::vector<std::vector<double>> polytope_vertices(const std::vector<Halfplane>& planes) {
  const int n = dim_of(planes);
  const int m = static_cast<int>(planes.size());
  std::vector<std::vector<double>> out;
  if (m < n) return out;
  for_each_subset(m, n, [&](const std::vector<int>& rows) {
    Eigen::MatrixXd A(n, n);
    Eigen::VectorXd rhs(n);
    for (int r = 0; r < n; ++r) {
      const auto& p = planes[static_cast<std::size_t>(rows[static_cast<std::size_t>(r)])];
      for (int c = 0; c < n; ++c) A(r, c) = p.a[static_cast<std::size_t>(c)];
      rhs(r) = p.b;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (!lu.isInvertible()) return;
    const Eigen::VectorXd x = lu.solve(rhs);
    for (const auto& p : planes)
      if (dot(p.a, x) > p.b + kFeasTol * std::max(1.0, std::abs(p.b))) return;
    std::vector<double> v(x.data(), x.data() + n);
    for (const auto& w : out) {
      double d = 0.0;
      for (int i = 0; i < n; ++i) d = std::max(d, std::abs(w[static_cast<std::size_t>(i)] - v[static_cast<std::size_t>(i)]));
      if (d < 1e-9) return;
    }
    out.push_back(std::move(v));
  });
  return out;
}

bool polytope_bounded(const std::vector<Halfplane>& planes) {
  const int n = dim_of(planes);
  const int m = static_cast<int>(planes.size());
  // candidate recession rays: +-coordinate axes and null directions of (n-1)-subsets of normals
  std::vector<Eigen::VectorXd> rays;
  for (int i = 0; i < n; ++i) {
    rays.push_back(Eigen::VectorXd::Unit(n, i));
    rays.push_back(-Eigen::VectorXd::Unit(n, i));
  }
  if (n >= 2) {
    for_each_subset(m, n - 1, [&](const std::vector<int>& rows) {
      Eigen::MatrixXd A(n - 1, n);
      for (int r = 0; r < n - 1; ++r)
        for (int c = 0; c < n; ++c)
          A(r, c) = planes[static_cast<std::size_t>(rows[static_cast<std::size_t>(r)])].a[static_cast<std::size_t>(c)];
      Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
      const Eigen::MatrixXd ker = lu.kernel();
      if (ker.cols() != 1) return;
      const Eigen::VectorXd d = ker.col(0).normalized();
      rays.push_back(d);
      rays.push_back(-d);
    });
  }
  for (const auto& d : rays) {
    bool recedes = true;
    for (const auto& p : planes)
      if (dot(p.a, d) > 1e-12) {
        recedes = false;
        break;
      }
    if (recedes) return false;
  }
  return true;
}

DrumInstance make_drum(std::vector<Halfplane> planes, double R, double eps0) {
  const int n = dim_of(planes);
  if (!(eps0 > 0.0 && eps0 < 1.0)) throw InvalidArgument("make_drum: eps0 must lie in (0,1)");
  for (auto& p : planes) {
    double nrm = 0.0;
    for (double v : p.a) nrm += v * v;
    nrm = std::sqrt(nrm);
    if (!(nrm > 0.0) || !std::isfinite(nrm) || !std::isfinite(p.b))
      throw InvalidArgument("make_drum: half-plane with zero or non-finite normal");
    for (double& v : p.a) v /= nrm;
    p.b /= nrm;
  }
  if (!polytope_bounded(planes)) throw InvalidArgument("make_drum: polytope is unbounded");
  const ChebyshevBall ball = chebyshev_ball(planes);
  if (!(ball.radius > 1e-10)) throw InvalidArgument("make_drum: polytope has empty interior");

  double vmax = 0.0;
  if (n <= 3) {
    for (const auto& v : polytope_vertices(planes)) {
      double s = 0.0;
      for (double c : v) s += c * c;
      vmax = std::max(vmax, std::sqrt(s));
    }
  }
  if (R <= 0.0) {
    if (n > 3) throw InvalidArgument("make_drum: R must be supplied above three dimensions");
    R = vmax;
  } else if (n <= 3 && R < vmax * (1.0 - 1e-12)) {
    throw InvalidArgument("make_drum: supplied R does not enclose every vertex");
  }
  return DrumInstance{std::move(planes), R, eps0};
}

NormalizedDrum normalize_drum(const DrumInstance& drum) {
  const ChebyshevBall ball = chebyshev_ball(drum.planes);
  NormalizedDrum out;
  out.center = ball.center;
  out.inradius = ball.radius;
  std::vector<Halfplane> planes;
  for (const auto& p : drum.planes) {
    double shift = 0.0;
    for (std::size_t i = 0; i < p.a.size(); ++i) shift += p.a[i] * ball.center[i];
    // the inscribed ball touches at least one face, so b' = 1 there up to rounding
    planes.push_back({p.a, std::max(1.0, (p.b - shift) / ball.radius)});
  }
  double vmax = 0.0;
  if (drum.dimension() <= 3) {
    for (const auto& v : polytope_vertices(planes)) {
      double s = 0.0;
      for (double c : v) s += c * c;
      vmax = std::max(vmax, std::sqrt(s));
    }
  } else {
    double c2 = 0.0;
    for (double c : ball.center) c2 += c * c;
    vmax = (drum.R + std::sqrt(c2)) / ball.radius;
  }
  out.circumradius = vmax;
  out.drum = DrumInstance{std::move(planes), vmax, drum.eps0};
  return out;
}

double polytope_diameter(const std::vector<Halfplane>& planes) {
  const auto v = polytope_vertices(planes);
  double d = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < v[i].size(); ++k) s += (v[i][k] - v[j][k]) * (v[i][k] - v[j][k]);
      d = std::max(d, std::sqrt(s));
    }
  return d;
}

std::vector<Halfplane> regular_polygon(int k, double circumradius) {
  if (k < 3) throw InvalidArgument("regular_polygon: need at least 3 sides");
  if (!(circumradius > 0.0)) throw InvalidArgument("regular_polygon: circumradius must be > 0");
  std::vector<Halfplane> out;
  const double apothem = circumradius * std::cos(std::numbers::pi / k);
  for (int j = 0; j < k; ++j) {
    // face normals bisect adjacent vertices at angles 2 pi j / k
    const double th = 2.0 * std::numbers::pi * (j + 0.5) / k;
    out.push_back({{std::cos(th), std::sin(th)}, apothem});
  }
  return out;
}

std::vector<Halfplane> box_planes(int n, double lo, double hi) {
  if (n < 1 || !(hi > lo)) throw InvalidArgument("box_planes: invalid box");
  std::vector<Halfplane> out;
  for (int i = 0; i < n; ++i) {
    std::vector<double> e(static_cast<std::size_t>(n), 0.0);
    e[static_cast<std::size_t>(i)] = 1.0;
    out.push_back({e, hi});
    e[static_cast<std::size_t>(i)] = -1.0;
    out.push_back({e, -lo});
  }
  return out;
}

}  // namespace fga
