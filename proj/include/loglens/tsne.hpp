#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "loglens/embed.hpp"
#include "loglens/matrix.hpp"

namespace loglens::tsne {

inline constexpr double kProbFloor = 1e-12;

struct TsneConfig {
  double perplexity = 30.0;  // clamped to [2, (n-1)/3] per input
  double eta = 200.0;
  double momentum_early = 0.5;
  double momentum_late = 0.8;
  std::size_t momentum_switch_iter = 250;
  std::size_t iters = 1000;
  double early_exaggeration = 4.0;
  std::size_t exaggeration_iters = 100;
  std::uint64_t seed = 0;
};

struct AffinityMatrix {
  std::size_t n = 0;
  Matrix p;                    // n x n, symmetric, zero diagonal, sums to 1
  std::vector<double> sigmas;  // per-point bandwidths
  double target_perplexity = 0.0;
};

struct Projection2D {
  Matrix y;  // n x 2
  std::vector<double> kl_trace;  // from the end of the exaggeration window
  std::uint64_t seed = 0;
  std::size_t iters = 0;
};

struct BandwidthResult {
  double sigma = 1.0;
  std::vector<double> conditional;  // probabilities over the other points, sum 1
};

// Requested perplexity clamped to what n points can support.
double effective_perplexity(double requested, std::size_t n);

// Binary search on the Gaussian bandwidth so the conditional row's perplexity
// matches the target within 1e-5 on log2-perplexity (at most 50 steps; the
// last iterate is returned on non-convergence). distances_sq holds squared
// distances to the other points. An all-zero row yields the uniform
// conditional with sigma 1.
BandwidthResult bandwidth_search(const std::vector<double>& distances_sq,
                                 double target_perplexity);

// Joint affinities p_ij = (p_{j|i} + p_{i|j}) / (2n), zero diagonal. Values
// are stored exact (unfloored); the floor applies at the point of use in KL.
AffinityMatrix compute_affinities(const Matrix& x, const TsneConfig& config);

// Squared Euclidean distances between rows.
Matrix pairwise_sq_dists(const Matrix& pts);

// Student-t joint q_ij = (1+d_ij^2)^-1 / sum, zero diagonal.
Matrix low_dim_affinities(const Matrix& y);

// sum_{i != j} max(p,floor) * ln(max(p,floor) / max(q,floor)).
double kl_divergence(const Matrix& p, const Matrix& q);

// Gradient of KL(p || q(y)) with respect to y: 4 sum_j (p-q) w (y_i - y_j).
Matrix kl_gradient(const Matrix& p, const Matrix& y);

// Momentum gradient descent on KL(P||Q) from an N(0, 1e-4 I) start.
Projection2D fit(const Matrix& x, const TsneConfig& config);

struct ProjectedPoint {
  embed::GroupRef ref;
  double y1 = 0.0;
  double y2 = 0.0;
};

// CSV sidecar: header source_path,timestamp_ms,elapsed_s,y1,y2.
void write_projection_csv(const std::vector<ProjectedPoint>& points, const std::string& path);
std::vector<ProjectedPoint> read_projection_csv(const std::string& path);

}  // namespace loglens::tsne
