#include "qoegap/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>

namespace qoegap {

NormalizedLaplacian::NormalizedLaplacian(const Graph& g, std::optional<WeightedEdge> extra)
    : graph_(g), extra_(extra) {
  const std::size_t n = g.node_count();
  if (extra_) {
    if (extra_->i >= n || extra_->j >= n || extra_->i == extra_->j) {
      throw InputError("NormalizedLaplacian: invalid weighted edge");
    }
  }
  inv_sqrt_degree_.resize(n);
  kernel_.resize(static_cast<Eigen::Index>(n));
  for (NodeId v = 0; v < n; ++v) {
    double d = static_cast<double>(g.degree(v));
    if (extra_ && (v == extra_->i || v == extra_->j)) d += extra_->weight;
    if (!(d > 0.0)) throw InputError("normalized Laplacian: node " + std::to_string(v) + " is isolated");
    inv_sqrt_degree_[v] = 1.0 / std::sqrt(d);
    kernel_[v] = std::sqrt(d);
  }
  if (n > 0) kernel_.normalize();
}

void NormalizedLaplacian::apply(std::span<const double> x, std::span<double> y) const {
  const std::size_t n = size();
  for (NodeId u = 0; u < n; ++u) {
    double acc = 0.0;
    for (NodeId v : graph_.neighbors(u)) acc += x[v] * inv_sqrt_degree_[v];
    y[u] = x[u] - inv_sqrt_degree_[u] * acc;
  }
  if (extra_) {
    const auto [i, j, w] = *extra_;
    const double s = w * inv_sqrt_degree_[i] * inv_sqrt_degree_[j];
    y[i] -= s * x[j];
    y[j] -= s * x[i];
  }
}

Eigen::MatrixXd NormalizedLaplacian::dense() const {
  const auto n = static_cast<Eigen::Index>(size());
  Eigen::MatrixXd L = Eigen::MatrixXd::Identity(n, n);
  for (NodeId u = 0; u < size(); ++u) {
    for (NodeId v : graph_.neighbors(u)) L(u, v) -= inv_sqrt_degree_[u] * inv_sqrt_degree_[v];
  }
  if (extra_) {
    const auto [i, j, w] = *extra_;
    const double s = w * inv_sqrt_degree_[i] * inv_sqrt_degree_[j];
    L(i, j) -= s;
    L(j, i) -= s;
  }
  return L;
}

std::vector<double> laplacian_matvec(const Graph& g, std::span<const double> x) {
  if (x.size() != g.node_count()) throw InputError("laplacian_matvec: vector length does not match node count");
  NormalizedLaplacian op(g);
  std::vector<double> y(x.size());
  op.apply(x, y);
  return y;
}

namespace {

struct Eigenpair {
  double value = 0.0;
  Eigen::VectorXd vector;
  double residual = 0.0;
  std::size_t iterations = 0;
};

void apply_to(const NormalizedLaplacian& op, const Eigen::VectorXd& x, Eigen::Ref<Eigen::VectorXd> y) {
  op.apply({x.data(), static_cast<std::size_t>(x.size())}, {y.data(), static_cast<std::size_t>(y.size())});
}

// Thick-restart Lanczos for the smallest eigenvalue of L restricted to the
// orthogonal complement of the kernel direction. The basis V and its image
// AV are stored explicitly so Rayleigh-Ritz and restarts are plain products.
Eigenpair smallest_nontrivial(const NormalizedLaplacian& op, const SolverOptions& opts) {
  using Eigen::Index;
  using Eigen::MatrixXd;
  using Eigen::VectorXd;

  const auto n = static_cast<Index>(op.size());
  if (n < 2) throw InputError("spectral_gap: need at least 2 nodes");
  const VectorXd& q0 = op.kernel_direction();
  const Index dim = std::min<Index>(n - 1, std::max<Index>(2, static_cast<Index>(opts.krylov_dim)));
  const Index keep = std::clamp<Index>(static_cast<Index>(opts.keep), 1, std::max<Index>(1, dim - 1));

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto random_vector = [&] {
    VectorXd r(n);
    for (Index i = 0; i < n; ++i) r[i] = normal(rng);
    return r;
  };

  MatrixXd V(n, dim);
  MatrixXd AV(n, dim);
  Index k = 0;
  // Classical Gram-Schmidt, applied twice.
  auto orthogonalize = [&](VectorXd& w) {
    for (int pass = 0; pass < 2; ++pass) {
      w -= q0 * q0.dot(w);
      if (k > 0) w -= V.leftCols(k) * (V.leftCols(k).transpose() * w);
    }
  };
  // Normalized direction orthogonal to the basis; falls back to random
  // directions when w has collapsed. Returns false if the space is exhausted.
  auto next_direction = [&](VectorXd w, VectorXd& out) {
    const double scale = std::max(1.0, w.norm());
    for (int attempt = 0; attempt < 3; ++attempt) {
      orthogonalize(w);
      const double nrm = w.norm();
      if (nrm > 1e-10 * scale) {
        out = w / nrm;
        return true;
      }
      w = random_vector();
    }
    return false;
  };

  VectorXd v;
  if (!next_direction(random_vector(), v)) throw InputError("spectral_gap: degenerate start space");

  std::size_t matvecs = 0;
  double best_residual = std::numeric_limits<double>::infinity();
  bool can_expand = true;
  while (true) {
    bool exhausted = !can_expand;
    while (can_expand && k < dim) {
      V.col(k) = v;
      apply_to(op, v, AV.col(k));
      ++matvecs;
      ++k;
      if (k == dim) break;
      if (!next_direction(AV.col(k - 1), v)) {
        exhausted = true;
        break;
      }
    }

    MatrixXd H = V.leftCols(k).transpose() * AV.leftCols(k);
    H = 0.5 * (H + H.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(H);
    const VectorXd s = es.eigenvectors().col(0);
    VectorXd y = V.leftCols(k) * s;
    VectorXd Ay = AV.leftCols(k) * s;
    const double ynorm = y.norm();
    y /= ynorm;
    Ay /= ynorm;
    double theta = y.dot(Ay);
    double residual = (Ay - theta * y).norm();

    if (residual <= opts.tol) {
      // Confirm against a fresh operator application; stored AV columns
      // accumulate rounding across restarts.
      y -= q0 * q0.dot(y);
      y.normalize();
      VectorXd fresh(n);
      apply_to(op, y, fresh);
      ++matvecs;
      theta = y.dot(fresh);
      residual = (fresh - theta * y).norm();
      best_residual = std::min(best_residual, residual);
      if (residual <= opts.tol) return {theta, y, residual, matvecs};
      for (Index c = 0; c < k; ++c) apply_to(op, V.col(c), AV.col(c));
      matvecs += static_cast<std::size_t>(k);
    }
    best_residual = std::min(best_residual, residual);
    if (matvecs >= opts.max_iter) {
      throw ConvergenceError("spectral_gap: no convergence after " + std::to_string(matvecs) +
                                 " operator applications (best residual " + std::to_string(best_residual) + ")",
                             best_residual);
    }

    // Thick restart: keep the p smallest Ritz vectors and continue along the
    // residual direction.
    const Index p = exhausted ? std::min(k, dim - 1) : std::min(keep, k - 1);
    const MatrixXd S = es.eigenvectors().leftCols(std::max<Index>(p, 1));
    const MatrixXd newV = V.leftCols(k) * S;
    const MatrixXd newAV = AV.leftCols(k) * S;
    k = S.cols();
    V.leftCols(k) = newV;
    AV.leftCols(k) = newAV;
    can_expand = k < dim && next_direction(Ay - theta * y, v);
    if (!can_expand) {
      // The basis spans the whole complement; refresh its image instead.
      for (Index c = 0; c < k; ++c) apply_to(op, V.col(c), AV.col(c));
      matvecs += static_cast<std::size_t>(k);
    }
  }
}

void fix_sign(std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (std::abs(v[i]) > std::abs(v[best])) best = i;
  }
  if (!v.empty() && v[best] < 0) {
    for (auto& x : v) x = -x;
  }
}

std::vector<double> dense_eigenvalues(const NormalizedLaplacian& op) {
  if (op.size() > kDenseThreshold) {
    throw InputError("dense_spectrum: n=" + std::to_string(op.size()) + " exceeds the dense limit of " +
                     std::to_string(kDenseThreshold));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.dense(), Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

}  // namespace

SpectralSummary spectral_gap(const Graph& g, const SolverOptions& opts) {
  if (g.node_count() < 2) throw InputError("spectral_gap: need at least 2 nodes");
  if (!is_connected(g)) throw InputError("spectral_gap: graph is disconnected");
  NormalizedLaplacian op(g);
  Eigenpair pair = smallest_nontrivial(op, opts);

  SpectralSummary out;
  out.lambda2 = pair.value;
  out.fiedler.assign(pair.vector.data(), pair.vector.data() + pair.vector.size());
  fix_sign(out.fiedler);
  out.residual = pair.residual;
  out.iterations = pair.iterations;
  const DegreeStats ds = degree_stats(g);
  out.delta_max = ds.max_degree;
  out.delta_min = ds.min_degree;
  out.beta = ds.beta;

  if (opts.dense_cross_check && g.node_count() <= kDenseThreshold) {
    const auto ev = dense_eigenvalues(op);
    if (std::abs(ev[1] - out.lambda2) > 1e-6) {
      throw std::logic_error("spectral_gap: iterative lambda2 " + std::to_string(out.lambda2) +
                             " disagrees with dense " + std::to_string(ev[1]));
    }
  }
  return out;
}

std::vector<double> dense_spectrum(const Graph& g) {
  NormalizedLaplacian op(g);
  return dense_eigenvalues(op);
}

double lambda2_edge_derivative(const Graph& g, NodeId i, NodeId j, double eps, const SolverOptions& opts) {
  const std::size_t n = g.node_count();
  if (i >= n || j >= n) throw InputError("lambda2_edge_derivative: node id out of range");
  if (i == j) throw InputError("lambda2_edge_derivative: i == j");
  if (g.has_edge(i, j)) throw InputError("lambda2_edge_derivative: edge already present");
  if (!(eps > 0.0)) throw InputError("lambda2_edge_derivative: eps must be positive");
  if (!is_connected(g)) throw InputError("lambda2_edge_derivative: graph is disconnected");

  // Both evaluations go through the weighted operator so they share rounding.
  NormalizedLaplacian base(g, WeightedEdge{i, j, 0.0});
  NormalizedLaplacian bumped(g, WeightedEdge{i, j, eps});
  if (n <= kDenseThreshold) {
    return (dense_eigenvalues(bumped)[1] - dense_eigenvalues(base)[1]) / eps;
  }
  SolverOptions tight = opts;
  tight.tol = std::min(opts.tol, 1e-10);
  return (smallest_nontrivial(bumped, tight).value - smallest_nontrivial(base, tight).value) / eps;
}

}  // namespace qoegap
