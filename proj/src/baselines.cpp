#include "oed/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "oed/sym_eigen.hpp"

namespace oed {

BaselineMethod parse_baseline(std::string_view name) {
  if (name == "uniform") return BaselineMethod::Uniform;
  if (name == "max-weights") return BaselineMethod::MaxWeights;
  if (name == "weighted") return BaselineMethod::WeightedSampling;
  if (name == "greedy-a") return BaselineMethod::GreedyARemoval;
  if (name == "mmd") return BaselineMethod::MmdCritic;
  if (name == "kmeans") return BaselineMethod::KMeans;
  if (name == "rrqr") return BaselineMethod::PivotedQr;
  throw ArgumentError("unknown baseline method '" + std::string(name) + "'");
}

std::string baseline_name(BaselineMethod method) {
  switch (method) {
    case BaselineMethod::Uniform:
      return "uniform";
    case BaselineMethod::MaxWeights:
      return "max-weights";
    case BaselineMethod::WeightedSampling:
      return "weighted";
    case BaselineMethod::GreedyARemoval:
      return "greedy-a";
    case BaselineMethod::MmdCritic:
      return "mmd";
    case BaselineMethod::KMeans:
      return "kmeans";
    case BaselineMethod::PivotedQr:
      return "rrqr";
  }
  return "?";
}

Selection select_uniform(const DesignPool& pool, long k, RngSeed seed) {
  if (k > pool.n())
    throw ArgumentError("select_uniform: k exceeds the pool size");
  CounterRng rng(seed);
  Selection s;
  for (long idx : rng.sample_without_replacement(pool.n(), k))
    s.indices.push_back(idx);
  return s;
}

Selection select_max_weights(const RelaxedSolution& relaxed, long k) {
  const Index n = relaxed.pi.size();
  if (k > n) throw ArgumentError("select_max_weights: k exceeds the pool");
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return relaxed.pi(a) > relaxed.pi(b);
  });
  Selection s;
  s.indices.assign(order.begin(), order.begin() + k);
  return s;
}

Selection select_weighted_sampling(const RelaxedSolution& relaxed, long k,
                                   RngSeed seed, bool distinct) {
  const Index n = relaxed.pi.size();
  if (distinct && k > n)
    throw ArgumentError("select_weighted_sampling: k exceeds the pool");
  CounterRng rng(seed);
  std::vector<double> w(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] = relaxed.pi(i);
  Selection s;
  s.with_replacement = !distinct;
  for (long t = 0; t < k; ++t) {
    const long pick = rng.next_categorical(cumulative_weights(w));
    s.indices.push_back(pick);
    if (distinct) w[static_cast<std::size_t>(pick)] = 0.0;
  }
  return s;
}

Selection select_greedy_a_removal(const DesignPool& pool, long k,
                                  int initial_factor, RngSeed seed) {
  const Index n = pool.n();
  const Index d = pool.d();
  if (k < 1) throw ArgumentError("greedy-a: k must be >= 1");
  const long start = std::min<long>(
      n, std::max<long>(static_cast<long>(initial_factor) * d, k));
  if (k > start) throw ArgumentError("greedy-a: k exceeds the working set");

  CounterRng rng(seed);
  std::vector<long> working = rng.sample_without_replacement(n, start);
  std::sort(working.begin(), working.end());

  Matrix m = Matrix::Zero(d, d);
  for (long idx : working) {
    const Vector x = pool.point(idx);
    m.noalias() += x * x.transpose();
  }
  const EigenDecomposition eig = sym_eigen(SpdMatrix::from_symmetric(m));
  if (!(eig.min_eigenvalue() > 1e-12 * eig.max_eigenvalue()))
    throw SingularMatrixError(
        "greedy-a: initial working set is rank-deficient");
  Matrix m_inv = eig.eigenvectors *
                 eig.eigenvalues.cwiseInverse().asDiagonal() *
                 eig.eigenvectors.transpose();

  while (static_cast<long>(working.size()) > k) {
    const double base_trace = m_inv.trace();
    double best_cost = std::numeric_limits<double>::infinity();
    std::size_t best_pos = working.size();
    Vector best_mx;
    double best_denom = 0.0;
    for (std::size_t pos = 0; pos < working.size(); ++pos) {
      const Vector x = pool.point(working[pos]);
      const Vector mx = m_inv * x;
      const double denom = 1.0 - x.dot(mx);
      if (denom <= 1e-10) continue;  // removal would singularize
      const double cost = base_trace + mx.squaredNorm() / denom;
      if (cost < best_cost) {
        best_cost = cost;
        best_pos = pos;
        best_mx = mx;
        best_denom = denom;
      }
    }
    if (best_pos == working.size())
      throw NumericError(
          "greedy-a: every candidate removal singularizes the working set");
    m_inv.noalias() += (best_mx * best_mx.transpose()) / best_denom;
    working.erase(working.begin() + static_cast<std::ptrdiff_t>(best_pos));
  }

  Selection s;
  s.indices.assign(working.begin(), working.end());
  return s;
}

double mmd_objective(const KernelMatrix& kernel, const Selection& s) {
  const Index n = kernel.entries.rows();
  const long m = static_cast<long>(s.indices.size());
  if (m < 1) throw ArgumentError("mmd_objective: empty selection");
  double cross = 0.0;
  for (Index j : s.indices) cross += kernel.entries.col(j).sum();
  double within = 0.0;
  for (Index i : s.indices)
    for (Index j : s.indices) within += kernel.entries(i, j);
  const double nn = static_cast<double>(n);
  const double mm = static_cast<double>(m);
  return 2.0 / (nn * mm) * cross - within / (mm * mm);
}

KernelMatrix rbf_kernel(const DesignPool& pool,
                        std::optional<double> gamma_override,
                        long max_points) {
  const Index n = pool.n();
  if (n > max_points)
    throw ArgumentError(
        "rbf_kernel: pool of " + std::to_string(n) +
        " points exceeds the dense-kernel guard of " +
        std::to_string(max_points) + "; raise max_points to override");
  double gamma;
  if (gamma_override) {
    gamma = *gamma_override;
    if (!(gamma > 0.0)) throw ArgumentError("rbf_kernel: gamma must be > 0");
  } else {
    std::vector<double> dists;
    dists.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (Index i = 0; i < n; ++i)
      for (Index j = i + 1; j < n; ++j)
        dists.push_back((pool.point(i) - pool.point(j)).norm());
    if (dists.empty())
      throw ArgumentError("rbf_kernel: need at least two points");
    std::sort(dists.begin(), dists.end());
    const std::size_t half = dists.size() / 2;
    gamma = dists.size() % 2 == 1
                ? dists[half]
                : 0.5 * (dists[half - 1] + dists[half]);
    if (!(gamma > 0.0))
      throw ArgumentError(
          "rbf_kernel: median pairwise distance is zero (identical points); "
          "supply a bandwidth override");
  }
  KernelMatrix kernel;
  kernel.gamma = gamma;
  kernel.entries.resize(n, n);
  for (Index i = 0; i < n; ++i) {
    kernel.entries(i, i) = 1.0;
    for (Index j = i + 1; j < n; ++j) {
      const double r = (pool.point(i) - pool.point(j)).norm() / gamma;
      const double v = std::exp(-0.5 * r * r);
      kernel.entries(i, j) = v;
      kernel.entries(j, i) = v;
    }
  }
  return kernel;
}

Selection select_mmd_critic(const DesignPool& pool, long k,
                            std::optional<double> gamma_override,
                            long max_points) {
  const Index n = pool.n();
  if (k > n) throw ArgumentError("mmd-critic: k exceeds the pool size");
  const KernelMatrix kernel = rbf_kernel(pool, gamma_override, max_points);
  const Vector colsum = kernel.entries.colwise().sum();
  const double nn = static_cast<double>(n);

  Selection s;
  std::vector<char> taken(static_cast<std::size_t>(n), 0);
  Vector sum_to_selected = Vector::Zero(n);
  double t1 = 0.0;  // sum over selected of column sums
  double t2 = 0.0;  // within-selection kernel mass
  double j_current = 0.0;
  for (long step = 0; step < k; ++step) {
    const double m_next = static_cast<double>(step + 1);
    double best_gain = -std::numeric_limits<double>::infinity();
    Index best = -1;
    double best_j = 0.0;
    for (Index i = 0; i < n; ++i) {
      if (taken[static_cast<std::size_t>(i)]) continue;
      const double t1_next = t1 + colsum(i);
      const double t2_next = t2 + 2.0 * sum_to_selected(i) + 1.0;
      const double j_next =
          2.0 * t1_next / (nn * m_next) - t2_next / (m_next * m_next);
      const double gain = j_next - j_current;
      if (gain > best_gain) {
        best_gain = gain;
        best = i;
        best_j = j_next;
      }
    }
    taken[static_cast<std::size_t>(best)] = 1;
    s.indices.push_back(best);
    t1 += colsum(best);
    t2 += 2.0 * sum_to_selected(best) + 1.0;
    sum_to_selected += kernel.entries.col(best);
    j_current = best_j;
  }
  return s;
}

Selection select_kmeans(const DesignPool& pool, long k, RngSeed seed,
                        int max_iters) {
  const Index n = pool.n();
  const Index d = pool.d();
  if (k > n) throw ArgumentError("kmeans: k exceeds the pool size");
  if (k < 1) throw ArgumentError("kmeans: k must be >= 1");
  CounterRng rng(seed);
  const Matrix& x = pool.features();

  // k-means++ seeding
  Matrix centroids(k, d);
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  {
    const Index first = static_cast<Index>(rng.next_below(
        static_cast<std::uint64_t>(n)));
    centroids.row(0) = x.row(first);
    used[static_cast<std::size_t>(first)] = 1;
    Vector dist_sq(n);
    for (Index i = 0; i < n; ++i)
      dist_sq(i) = (x.row(i) - centroids.row(0)).squaredNorm();
    for (long c = 1; c < k; ++c) {
      std::vector<double> mass(static_cast<std::size_t>(n));
      double total = 0.0;
      for (Index i = 0; i < n; ++i) {
        mass[static_cast<std::size_t>(i)] =
            used[static_cast<std::size_t>(i)] ? 0.0 : dist_sq(i);
        total += mass[static_cast<std::size_t>(i)];
      }
      Index pick;
      if (total > 0.0) {
        pick = rng.next_categorical(cumulative_weights(mass));
      } else {
        pick = 0;  // duplicated points exhausted the spread
        while (used[static_cast<std::size_t>(pick)]) ++pick;
      }
      centroids.row(c) = x.row(pick);
      used[static_cast<std::size_t>(pick)] = 1;
      for (Index i = 0; i < n; ++i)
        dist_sq(i) = std::min(
            dist_sq(i), (x.row(i) - centroids.row(c)).squaredNorm());
    }
  }

  std::vector<long> assign(static_cast<std::size_t>(n), 0);
  auto assign_all = [&]() {
    bool changed = false;
    for (Index i = 0; i < n; ++i) {
      long best = 0;
      double best_d = (x.row(i) - centroids.row(0)).squaredNorm();
      for (long c = 1; c < k; ++c) {
        const double dd = (x.row(i) - centroids.row(c)).squaredNorm();
        if (dd < best_d) {
          best_d = dd;
          best = c;
        }
      }
      if (assign[static_cast<std::size_t>(i)] != best) {
        assign[static_cast<std::size_t>(i)] = best;
        changed = true;
      }
    }
    return changed;
  };

  assign_all();
  for (int it = 0; it < max_iters; ++it) {
    Matrix sums = Matrix::Zero(k, d);
    std::vector<long> counts(static_cast<std::size_t>(k), 0);
    for (Index i = 0; i < n; ++i) {
      sums.row(assign[static_cast<std::size_t>(i)]) += x.row(i);
      counts[static_cast<std::size_t>(assign[static_cast<std::size_t>(i)])]++;
    }
    for (long c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        centroids.row(c) =
            sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
      } else {
        // re-seed an empty cluster at the point farthest from its centroid
        Index far = 0;
        double far_d = -1.0;
        for (Index i = 0; i < n; ++i) {
          const double dd =
              (x.row(i) -
               centroids.row(assign[static_cast<std::size_t>(i)]))
                  .squaredNorm();
          if (dd > far_d) {
            far_d = dd;
            far = i;
          }
        }
        centroids.row(c) = x.row(far);
        assign[static_cast<std::size_t>(far)] = c;
      }
    }
    if (!assign_all()) break;
  }

  // nearest member per cluster, ties by lowest index
  Selection s;
  for (long c = 0; c < k; ++c) {
    Index best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < n; ++i) {
      if (assign[static_cast<std::size_t>(i)] != c) continue;
      const double dd = (x.row(i) - centroids.row(c)).squaredNorm();
      if (dd < best_d) {
        best_d = dd;
        best = i;
      }
    }
    if (best >= 0) s.indices.push_back(best);
  }
  // ensure exactly k representatives even in pathological collapses
  for (Index i = 0; static_cast<long>(s.indices.size()) < k && i < n; ++i) {
    if (std::find(s.indices.begin(), s.indices.end(), i) == s.indices.end())
      s.indices.push_back(i);
  }
  return s;
}

Selection select_pivoted_qr(const DesignPool& pool, long k) {
  const Index n = pool.n();
  if (k > n) throw ArgumentError("rrqr: k exceeds the pool size");
  // columns of residual = points; orthogonalize greedily by largest norm
  Matrix residual = pool.features().transpose();
  std::vector<char> taken(static_cast<std::size_t>(n), 0);
  Selection s;
  for (long step = 0; step < k; ++step) {
    Index best = -1;
    double best_norm = -1.0;
    for (Index j = 0; j < n; ++j) {
      if (taken[static_cast<std::size_t>(j)]) continue;
      const double nrm = residual.col(j).squaredNorm();
      if (nrm > best_norm) {
        best_norm = nrm;
        best = j;
      }
    }
    taken[static_cast<std::size_t>(best)] = 1;
    s.indices.push_back(best);
    if (best_norm > 0.0) {
      const Vector q = residual.col(best) / std::sqrt(best_norm);
      residual.noalias() -= q * (q.transpose() * residual);
    }
  }
  return s;
}

}  // namespace oed
