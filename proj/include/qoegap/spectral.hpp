#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "qoegap/graph.hpp"

namespace qoegap {

// Iterative eigensolver failed to reach the requested residual.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double best_residual)
      : std::runtime_error(what), best_residual_(best_residual) {}
  double best_residual() const noexcept { return best_residual_; }

 private:
  double best_residual_;
};

inline constexpr std::size_t kDenseThreshold = 2000;

// An extra edge (i, j) of weight eps layered over an unweighted graph. Only
// the edge-derivative path uses this.
struct WeightedEdge {
  NodeId i = 0;
  NodeId j = 0;
  double weight = 0.0;
};

// Matrix-free normalized Laplacian L = I - D^{-1/2} W D^{-1/2}.
class NormalizedLaplacian {
 public:
  explicit NormalizedLaplacian(const Graph& g, std::optional<WeightedEdge> extra = std::nullopt);

  std::size_t size() const noexcept { return inv_sqrt_degree_.size(); }
  void apply(std::span<const double> x, std::span<double> y) const;
  // Unit vector along D^{1/2} 1, the kernel of a connected graph's L.
  const Eigen::VectorXd& kernel_direction() const noexcept { return kernel_; }
  Eigen::MatrixXd dense() const;

 private:
  const Graph& graph_;
  std::optional<WeightedEdge> extra_;
  std::vector<double> inv_sqrt_degree_;
  Eigen::VectorXd kernel_;
};

// y = L x. Throws InputError on isolated nodes or a size mismatch.
std::vector<double> laplacian_matvec(const Graph& g, std::span<const double> x);

struct SolverOptions {
  double tol = 1e-8;        // residual ||L v - lambda v||
  std::size_t max_iter = 200000;  // operator applications
  std::size_t krylov_dim = 128;
  std::size_t keep = 24;    // Ritz vectors kept across a restart
  std::uint64_t seed = 0x5eed;
#ifdef NDEBUG
  bool dense_cross_check = false;
#else
  bool dense_cross_check = true;
#endif
};

struct SpectralSummary {
  double lambda2 = 0.0;
  std::vector<double> fiedler;  // unit norm, orthogonal to D^{1/2} 1
  double residual = 0.0;
  std::size_t iterations = 0;
  std::size_t delta_max = 0;
  std::size_t delta_min = 0;
  Ratio beta;
};

// Smallest eigenpair of L on the complement of D^{1/2} 1 via thick-restart
// Lanczos with full reorthogonalization. Requires a connected graph with at
// least two nodes. The Fiedler sign is fixed so the largest-magnitude entry
// (lowest id on ties) is positive.
SpectralSummary spectral_gap(const Graph& g, const SolverOptions& opts = {});

// All eigenvalues of the dense L in ascending order. Refuses n > kDenseThreshold.
std::vector<double> dense_spectrum(const Graph& g);

// Forward difference (lambda2(eps) - lambda2(0)) / eps for adding edge (i, j)
// with weight eps. Throws InputError if the edge exists or i == j.
double lambda2_edge_derivative(const Graph& g, NodeId i, NodeId j, double eps = 1e-6,
                               const SolverOptions& opts = {});

}  // namespace qoegap
