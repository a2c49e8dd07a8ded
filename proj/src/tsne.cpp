#include "loglens/tsne.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "loglens/errors.hpp"
#include "loglens/io_util.hpp"
#include "loglens/rng.hpp"

namespace loglens::tsne {
namespace {

constexpr double kLn2 = 0.6931471805599453;

// Shannon entropy (nats) of the row induced by beta = 1/(2 sigma^2), plus the
// row itself. Distances are shifted by their minimum before exponentiation so
// wide 512-d spreads cannot underflow the whole row to zero.
double row_entropy(const std::vector<double>& d2, double beta, double d2_min,
                   std::vector<double>& row) {
  double z = 0.0;
  double weighted = 0.0;
  for (std::size_t j = 0; j < d2.size(); ++j) {
    double u = std::exp(-beta * (d2[j] - d2_min));
    row[j] = u;
    z += u;
    weighted += u * (d2[j] - d2_min);
  }
  for (double& v : row) v /= z;
  return std::log(z) + beta * weighted / z;
}

// Student-t weights w_ij = 1/(1+d2); returns the off-diagonal sum over
// ordered pairs. w must be n x n.
double student_t_weights(const Matrix& y, Matrix& w) {
  const std::size_t n = y.rows;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    w(i, i) = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      double dx = y(i, 0) - y(j, 0);
      double dy = y(i, 1) - y(j, 1);
      double v = 1.0 / (1.0 + dx * dx + dy * dy);
      w(i, j) = v;
      w(j, i) = v;
      total += 2.0 * v;
    }
  }
  return total;
}

}  // namespace

double effective_perplexity(double requested, std::size_t n) {
  double cap = (double(n) - 1.0) / 3.0;
  return std::max(2.0, std::min(requested, cap));
}

BandwidthResult bandwidth_search(const std::vector<double>& distances_sq,
                                 double target_perplexity) {
  const std::size_t m = distances_sq.size();
  if (m < 2) throw ConfigError("bandwidth search needs at least 2 neighbors");
  if (target_perplexity > double(m))
    throw ConfigError("perplexity target exceeds neighbor count");

  BandwidthResult out;
  out.conditional.assign(m, 1.0 / double(m));

  double d2_max = *std::max_element(distances_sq.begin(), distances_sq.end());
  if (d2_max <= 0.0) {
    out.sigma = 1.0;
    return out;
  }

  double d2_min = *std::min_element(distances_sq.begin(), distances_sq.end());
  const double target_log2 = std::log2(target_perplexity);
  double beta = 1.0;
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  std::vector<double> row(m);
  for (int step = 0; step < 50; ++step) {
    double h_log2 = row_entropy(distances_sq, beta, d2_min, row) / kLn2;
    out.conditional = row;
    if (std::abs(h_log2 - target_log2) < 1e-5) break;
    if (h_log2 > target_log2) {
      lo = beta;
      beta = std::isinf(hi) ? beta * 2.0 : 0.5 * (lo + hi);
    } else {
      hi = beta;
      beta = 0.5 * (lo + hi);
    }
  }
  out.sigma = std::sqrt(0.5 / beta);
  return out;
}

AffinityMatrix compute_affinities(const Matrix& x, const TsneConfig& config) {
  const std::size_t n = x.rows;
  if (n < 3) throw ConfigError("affinity construction needs at least 3 points");

  Matrix d2 = pairwise_sq_dists(x);
  const double target = effective_perplexity(config.perplexity, n);

  Matrix cond(n, n);
  AffinityMatrix out;
  out.n = n;
  out.target_perplexity = target;
  out.sigmas.resize(n);

  std::vector<double> row(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t k = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) row[k++] = d2(i, j);
    auto res = bandwidth_search(row, target);
    out.sigmas[i] = res.sigma;
    k = 0;
    for (std::size_t j = 0; j < n; ++j) cond(i, j) = j == i ? 0.0 : res.conditional[k++];
  }

  out.p = Matrix(n, n);
  const double scale = 1.0 / (2.0 * double(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double v = (cond(i, j) + cond(j, i)) * scale;
      out.p(i, j) = v;
      out.p(j, i) = v;
    }
    out.p(i, i) = 0.0;
  }
  return out;
}

Matrix pairwise_sq_dists(const Matrix& pts) {
  const std::size_t n = pts.rows;
  Matrix d2(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    d2(i, i) = 0.0;
    auto ri = pts.row(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      auto rj = pts.row(j);
      double acc = 0.0;
      for (std::size_t k = 0; k < pts.cols; ++k) {
        double d = ri[k] - rj[k];
        acc += d * d;
      }
      d2(i, j) = acc;
      d2(j, i) = acc;
    }
  }
  return d2;
}

Matrix low_dim_affinities(const Matrix& y) {
  const std::size_t n = y.rows;
  Matrix w(n, n);
  double total = student_t_weights(y, w);
  Matrix q(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) q(i, j) = i == j ? 0.0 : w(i, j) / total;
  return q;
}

double kl_divergence(const Matrix& p, const Matrix& q) {
  if (p.rows != q.rows || p.cols != q.cols)
    throw ConfigError("KL inputs must share a shape");
  double kl = 0.0;
  for (std::size_t i = 0; i < p.rows; ++i) {
    for (std::size_t j = 0; j < p.cols; ++j) {
      if (i == j) continue;
      double pf = std::max(p(i, j), kProbFloor);
      double qf = std::max(q(i, j), kProbFloor);
      kl += pf * std::log(pf / qf);
    }
  }
  return kl;
}

Matrix kl_gradient(const Matrix& p, const Matrix& y) {
  const std::size_t n = y.rows;
  Matrix w(n, n);
  double total = student_t_weights(y, w);
  Matrix grad(n, 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double q = w(i, j) / total;
      double c = 4.0 * (p(i, j) - q) * w(i, j);
      double gx = c * (y(i, 0) - y(j, 0));
      double gy = c * (y(i, 1) - y(j, 1));
      grad(i, 0) += gx;
      grad(i, 1) += gy;
      grad(j, 0) -= gx;
      grad(j, 1) -= gy;
    }
  }
  return grad;
}

Projection2D fit(const Matrix& x, const TsneConfig& config) {
  const std::size_t n = x.rows;
  if (n < 3) throw ConfigError("projection needs at least 3 points");
  if (config.iters < 1) throw ConfigError("iteration count must be at least 1");
  if (config.eta <= 0.0) throw ConfigError("learning rate must be positive");

  AffinityMatrix aff = compute_affinities(x, config);
  const Matrix& p = aff.p;

  // Constant pieces of the trace: sum p log p and sum p over floored entries.
  double const_plogp = 0.0;
  double p_mass = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      double pf = std::max(p(i, j), kProbFloor);
      const_plogp += pf * std::log(pf);
      p_mass += pf;
    }
  }

  Projection2D out;
  out.seed = config.seed;
  out.iters = config.iters;
  out.y = Matrix(n, 2);

  Rng rng(derive_seed(config.seed, "tsne:init"));
  for (std::size_t i = 0; i < n; ++i) {
    out.y(i, 0) = 0.01 * rng.gaussian();
    out.y(i, 1) = 0.01 * rng.gaussian();
  }

  Matrix& y = out.y;
  Matrix velocity(n, 2);
  Matrix grad(n, 2);
  Matrix w(n, n);
  const std::size_t exag_end = std::min(config.exaggeration_iters, config.iters);

  auto trace_kl = [&](double total) {
    // KL = sum pf log pf - sum pf log w + log(total) * sum pf, with q = w/total.
    double cross = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        cross += std::max(p(i, j), kProbFloor) * std::log(w(i, j));
    return const_plogp - 2.0 * cross + std::log(total) * p_mass;
  };

  for (std::size_t iter = 0; iter < config.iters; ++iter) {
    double total = student_t_weights(y, w);
    const double exag = iter < exag_end ? config.early_exaggeration : 1.0;
    if (iter >= exag_end) out.kl_trace.push_back(trace_kl(total));

    for (std::size_t i = 0; i < n; ++i) {
      grad(i, 0) = 0.0;
      grad(i, 1) = 0.0;
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        double q = w(i, j) / total;
        double c = 4.0 * (exag * p(i, j) - q) * w(i, j);
        double gx = c * (y(i, 0) - y(j, 0));
        double gy = c * (y(i, 1) - y(j, 1));
        grad(i, 0) += gx;
        grad(i, 1) += gy;
        grad(j, 0) -= gx;
        grad(j, 1) -= gy;
      }
    }

    const double momentum =
        iter < config.momentum_switch_iter ? config.momentum_early : config.momentum_late;
    double mean0 = 0.0;
    double mean1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      velocity(i, 0) = momentum * velocity(i, 0) - config.eta * grad(i, 0);
      velocity(i, 1) = momentum * velocity(i, 1) - config.eta * grad(i, 1);
      y(i, 0) += velocity(i, 0);
      y(i, 1) += velocity(i, 1);
      mean0 += y(i, 0);
      mean1 += y(i, 1);
    }
    mean0 /= double(n);
    mean1 /= double(n);
    bool finite = true;
    for (std::size_t i = 0; i < n; ++i) {
      y(i, 0) -= mean0;
      y(i, 1) -= mean1;
      finite = finite && std::isfinite(y(i, 0)) && std::isfinite(y(i, 1));
    }
    if (!finite) {
      double max_grad = 0.0;
      for (double g : grad.data) {
        if (!std::isfinite(g)) {
          max_grad = std::numeric_limits<double>::infinity();
          break;
        }
        max_grad = std::max(max_grad, std::abs(g));
      }
      throw TsneDivergenceError(int(iter), max_grad, "projection produced non-finite coordinates");
    }
  }

  {
    double total = student_t_weights(y, w);
    out.kl_trace.push_back(trace_kl(total));
  }
  if (out.kl_trace.size() >= 2 && out.kl_trace.back() > out.kl_trace.front())
    throw TsneDivergenceError(int(config.iters), 0.0, "objective increased over the descent window");
  return out;
}

void write_projection_csv(const std::vector<ProjectedPoint>& points, const std::string& path) {
  std::string out = "source_path,timestamp_ms,elapsed_s,y1,y2\n";
  for (const auto& pt : points) {
    out += csv_escape(pt.ref.source_path);
    out += ',';
    out += std::to_string(pt.ref.timestamp_ms);
    out += ',';
    out += std::to_string(pt.ref.elapsed_s);
    out += ',';
    out += format_double(pt.y1);
    out += ',';
    out += format_double(pt.y2);
    out += '\n';
  }
  write_text_file(path, out);
}

std::vector<ProjectedPoint> read_projection_csv(const std::string& path) {
  const std::string text = read_text_file(path);
  std::vector<ProjectedPoint> out;
  bool header_seen = false;
  for (std::string_view line : split_lines(text)) {
    if (line.empty()) continue;
    auto fields = parse_csv_line(line);
    if (!header_seen) {
      header_seen = true;
      if (fields.size() != 5 || fields[0] != "source_path" || fields[3] != "y1")
        throw ConfigError("projection header mismatch in " + path);
      continue;
    }
    if (fields.size() != 5) throw ConfigError("projection row has wrong width in " + path);
    ProjectedPoint pt;
    pt.ref.source_path = fields[0];
    auto ts = parse_int(fields[1]);
    auto es = parse_int(fields[2]);
    auto y1 = parse_double(fields[3]);
    auto y2 = parse_double(fields[4]);
    if (!ts || !es || !y1 || !y2 || !std::isfinite(*y1) || !std::isfinite(*y2))
      throw ConfigError("projection row is malformed in " + path);
    pt.ref.timestamp_ms = *ts;
    pt.ref.elapsed_s = *es;
    pt.y1 = *y1;
    pt.y2 = *y2;
    out.push_back(std::move(pt));
  }
  if (!header_seen) throw ConfigError("projection file is empty: " + path);
  return out;
}

}  // namespace loglens::tsne
