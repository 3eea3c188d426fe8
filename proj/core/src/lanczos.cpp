#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "fga/eigensolvers.hpp"
#include "fga/error.hpp"

namespace fga {
namespace {

using Eigen::Index;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

constexpr Index kMaxKrylov = 1536;

struct CompressedOp {
  const HamiltonianOp& h;
  std::vector<std::size_t> idx;
  mutable std::vector<cplx> in;
  mutable std::vector<cplx> out;
  mutable int applies = 0;

  explicit CompressedOp(const HamiltonianOp& op)
      : h(op), idx(op.active_indices()), in(op.grid().size()), out(op.grid().size()) {}

  Index dim() const { return static_cast<Index>(idx.size()); }

  VectorXcd operator()(const VectorXcd& v) const {
    std::fill(in.begin(), in.end(), cplx{});
    for (std::size_t p = 0; p < idx.size(); ++p) in[idx[p]] = v(static_cast<Index>(p));
    h.apply(in, out);
    VectorXcd r(dim());
    for (std::size_t p = 0; p < idx.size(); ++p) r(static_cast<Index>(p)) = out[idx[p]];
    ++applies;
    return r;
  }

  std::vector<cplx> scatter(const VectorXcd& v) const {
    std::vector<cplx> full(h.grid().size());
    for (std::size_t p = 0; p < idx.size(); ++p) full[idx[p]] = v(static_cast<Index>(p));
    return full;
  }
};

VectorXcd random_vector(Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  VectorXcd v(dim);
  for (Index i = 0; i < dim; ++i) {
    const double re = g(rng);
    const double im = g(rng);
    v(i) = cplx(re, im);
  }
  return v.normalized();
}

// Orthogonalize w against the first k columns of V twice; returns the projections.
VectorXcd orthogonalize(const MatrixXcd& V, Index k, VectorXcd& w) {
  VectorXcd h = VectorXcd::Zero(k);
  for (int pass = 0; pass < 2; ++pass) {
    const VectorXcd c = V.leftCols(k).adjoint() * w;
    w.noalias() -= V.leftCols(k) * c;
    h += c;
  }
  return h;
}

// Fresh direction orthogonal to the basis when the Krylov space becomes invariant.
bool fresh_direction(const MatrixXcd& V, Index k, std::mt19937_64& rng, VectorXcd& out) {
  for (int attempt = 0; attempt < 4; ++attempt) {
    VectorXcd w = random_vector(V.rows(), rng);
    orthogonalize(V, k, w);
    const double nrm = w.norm();
    if (nrm > 1e-8) {
      out = w / nrm;
      return true;
    }
  }
  return false;
}

struct Attempt {
  bool converged = false;
  std::vector<double> values;
  MatrixXcd vectors;  // compressed, columns
  std::vector<double> residuals;
  double best = std::numeric_limits<double>::infinity();
};

Attempt run_budget(const CompressedOp& op, Index m, int want, double tol, int cycles, const VectorXcd& start,
                   std::mt19937_64& rng) {
  const Index dim = op.dim();
  MatrixXcd V(dim, m + 1);
  MatrixXcd T = MatrixXcd::Zero(m, m);
  V.col(0) = start;
  Index kept = 0;
  Attempt result;

  for (int cycle = 0; cycle < cycles; ++cycle) {
    double beta = 0.0;
    Index filled = m;
    for (Index j = kept; j < m; ++j) {
      VectorXcd w = op(V.col(j));
      const VectorXcd h = orthogonalize(V, j + 1, w);
      for (Index i = 0; i <= j; ++i) {
        T(i, j) = h(i);
        T(j, i) = std::conj(h(i));
      }
      T(j, j) = h(j).real();
      beta = w.norm();
      const double scale = std::max(1.0, T.topLeftCorner(j + 1, j + 1).cwiseAbs().maxCoeff());
      if (beta <= 1e-13 * scale) {
        // invariant subspace: the Ritz values so far are exact
        beta = 0.0;
        if (j + 1 >= dim) {
          filled = j + 1;
          break;
        }
        VectorXcd fresh;
        if (!fresh_direction(V, j + 1, rng, fresh)) {
          filled = j + 1;
          break;
        }
        V.col(j + 1) = fresh;
        if (j + 1 < m) {
          T(j + 1, j) = 0.0;
          T(j, j + 1) = 0.0;
        }
        continue;
      }
      V.col(j + 1) = w / beta;
      if (j + 1 < m) {
        T(j + 1, j) = beta;
        T(j, j + 1) = beta;
      }
    }

    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(T.topLeftCorner(filled, filled));
    const Eigen::VectorXd theta = es.eigenvalues();
    const MatrixXcd& Y = es.eigenvectors();
    const int got = static_cast<int>(std::min<Index>(want, filled));

    bool estimates_ok = got == want;
    double worst = 0.0;
    for (int i = 0; i < got; ++i) {
      const double est = beta * std::abs(Y(filled - 1, i));
      worst = std::max(worst, est);
      if (est > tol) estimates_ok = false;
    }

    if (estimates_ok || filled < m || cycle + 1 == cycles) {
      MatrixXcd X = V.leftCols(filled) * Y.leftCols(got);
      std::vector<double> res(static_cast<std::size_t>(got));
      double worst_explicit = 0.0;
      for (int i = 0; i < got; ++i) {
        X.col(i).normalize();
        res[static_cast<std::size_t>(i)] = (op(X.col(i)) - theta(i) * X.col(i)).norm();
        worst_explicit = std::max(worst_explicit, res[static_cast<std::size_t>(i)]);
      }
      if (worst_explicit < result.best) {
        result.best = worst_explicit;
        result.values.assign(theta.data(), theta.data() + got);
        result.vectors = X;
        result.residuals = res;
      }
      if (worst_explicit <= tol && got == want) {
        result.converged = true;
        return result;
      }
      if (filled < m) return result;  // exhausted the space without meeting tol
    }
    (void)worst;

    // thick restart: keep the lowest half of the Ritz vectors plus the residual direction
    const Index keep = std::clamp<Index>(std::max<Index>(want + 2, m / 2), 1, m - 1);
    const MatrixXcd kept_vectors = V.leftCols(m) * Y.leftCols(keep);
    const VectorXcd last = V.col(m);
    V.leftCols(keep) = kept_vectors;
    V.col(keep) = last;
    T.setZero();
    for (Index i = 0; i < keep; ++i) T(i, i) = theta(i);
    kept = keep;
  }
  return result;
}

}  // namespace

LanczosResult lanczos_lowest(const HamiltonianOp& h, const LanczosOptions& options) {
  if (options.how_many < 1) throw InvalidArgument("lanczos_lowest: how_many must be >= 1");
  if (!(options.tol > 0.0)) throw InvalidArgument("lanczos_lowest: tol must be > 0");
  const CompressedOp op(h);
  const Index dim = op.dim();
  if (options.how_many > dim) throw InvalidArgument("lanczos_lowest: how_many exceeds the operator dimension");

  std::mt19937_64 rng(options.seed);
  VectorXcd start;
  if (!options.start.empty()) {
    if (options.start.size() != h.grid().size()) throw GridMismatch("lanczos_lowest: start vector size mismatch");
    start.resize(dim);
    for (std::size_t p = 0; p < op.idx.size(); ++p) start(static_cast<Index>(p)) = options.start[op.idx[p]];
    // a little noise keeps excited components present
    start = start.normalized() + 1e-3 * random_vector(dim, rng);
    start.normalize();
  } else {
    start = random_vector(dim, rng);
  }

  Attempt best;
  int escalation = 0;
  for (; escalation <= options.max_escalations; ++escalation) {
    const Index m =
        std::min<Index>({dim, static_cast<Index>(options.krylov) << escalation, kMaxKrylov});
    const Index krylov = std::max<Index>(m, std::min<Index>(dim, options.how_many + 2));
    Attempt a = run_budget(op, krylov, options.how_many, options.tol, options.cycles_per_budget, start, rng);
    if (a.best < best.best) best = a;
    if (a.converged) break;
    if (best.vectors.cols() > 0) {
      start = best.vectors.rowwise().sum();
      if (start.norm() < 1e-12) start = random_vector(dim, rng);
      start.normalize();
    }
  }
  if (escalation > options.max_escalations)
    throw ConvergenceError("lanczos_lowest: no convergence within the Krylov budget (best residual " +
                               std::to_string(best.best) + ")",
                           best.best);

  LanczosResult out;
  out.values = best.values;
  out.residuals = best.residuals;
  out.iterations = op.applies;
  out.escalations = escalation;
  for (Index i = 0; i < best.vectors.cols(); ++i) out.vectors.push_back(op.scatter(best.vectors.col(i)));
  return out;
}

}  // namespace fga
