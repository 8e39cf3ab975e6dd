#include "monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include "errors.hpp"
#include "rng.hpp"
#include "series_density.hpp"

namespace gtours {

int resolve_thread_count(int threads) {
  if (threads > 0) {
    return threads;
  }
  if (const char* env = std::getenv("GTOURS_THREADS")) {
    char* end = nullptr;
    const long parsed = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && parsed > 0) {
      return static_cast<int>(std::min<long>(parsed, 256));
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace {

// Stream tags keep the Philox substreams of distinct estimators and
// distinct quantities disjoint: method id in the top byte, then the tour
// parameters.  Documented in the README as part of the determinism
// contract.
std::uint32_t stream_tag(int method_id, int d, int n, int closed) {
  return (static_cast<std::uint32_t>(method_id) << 24) |
         ((static_cast<std::uint32_t>(d) & 0xff) << 16) |
         ((static_cast<std::uint32_t>(n) & 0xff) << 8) |
         static_cast<std::uint32_t>(closed & 1);
}

struct RawMoments {
  double s1 = 0.0;
  double s2 = 0.0;
  double s3 = 0.0;
  double s4 = 0.0;

  void add(double x) {
    const double x2 = x * x;
    s1 += x;
    s2 += x2;
    s3 += x2 * x;
    s4 += x2 * x2;
  }
};

RawMoments combine(const RawMoments& a, const RawMoments& b) {
  return {a.s1 + b.s1, a.s2 + b.s2, a.s3 + b.s3, a.s4 + b.s4};
}

RawMoments reduce_tree(const RawMoments* blocks, std::uint64_t count) {
  if (count == 1) {
    return blocks[0];
  }
  const std::uint64_t half = count / 2;
  return combine(reduce_tree(blocks, half),
                 reduce_tree(blocks + half, count - half));
}

// Runs fn(i) for i in [0, samples), accumulating raw moments per fixed-size
// block and combining blocks with a pairwise tree in block order.  Workers
// claim blocks dynamically, but block contents and the reduction order are
// index-determined, so any worker count produces identical bits.  make_fn
// is invoked once per worker so the sample function can hold scratch state.
template <class Factory>
RawMoments run_blocked(std::uint64_t samples, int threads, Factory&& make_fn) {
  const std::uint64_t nblocks = (samples + kMcBlockSize - 1) / kMcBlockSize;
  std::vector<RawMoments> blocks(nblocks);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&blocks, &next, samples, nblocks, &make_fn]() {
    auto fn = make_fn();
    for (;;) {
      const std::uint64_t b = next.fetch_add(1, std::memory_order_relaxed);
      if (b >= nblocks) {
        return;
      }
      RawMoments m;
      const std::uint64_t lo = b * kMcBlockSize;
      const std::uint64_t hi = std::min(samples, lo + kMcBlockSize);
      for (std::uint64_t i = lo; i < hi; ++i) {
        m.add(fn(i));
      }
      blocks[b] = m;
    }
  };
  const int workers =
      static_cast<int>(std::min<std::uint64_t>(resolve_thread_count(threads),
                                               nblocks));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int i = 0; i < workers; ++i) {
      pool.emplace_back(worker);
    }
    for (std::thread& t : pool) {
      t.join();
    }
  }
  return reduce_tree(blocks.data(), nblocks);
}

Estimate finalize(const RawMoments& m, std::uint64_t samples,
                  std::uint64_t seed, McMethod method) {
  Estimate est;
  est.samples = samples;
  est.seed = seed;
  est.method = method;
  const double n = static_cast<double>(samples);
  const double mean = m.s1 / n;
  est.value = mean;
  const double variance =
      std::max(0.0, (m.s2 - n * mean * mean) / (n - 1.0));
  est.stderr_estimate = std::sqrt(variance / n);
  const double m2 = std::max(0.0, m.s2 / n - mean * mean);
  if (m2 > 0.0) {
    const double m4 = m.s4 / n - 4.0 * mean * m.s3 / n +
                      6.0 * mean * mean * m.s2 / n - 3.0 * mean * mean * mean * mean;
    est.kurtosis = m4 / (m2 * m2);
    est.heavy_tail_warning = est.kurtosis > 50.0;
  }
  return est;
}

void require_samples(std::uint64_t samples) {
  if (samples < 2) {
    throw domain_error("monte carlo: need at least 2 samples");
  }
}

// Symmetric 3x3 eigendecomposition by cyclic Jacobi rotations; columns of
// `vectors` are the eigenvectors.  The sweep order is fixed, so results are
// reproducible to the bit.
struct Eigen3 {
  std::array<double, 3> values;
  std::array<std::array<double, 3>, 3> vectors;
};

Eigen3 jacobi_eigen3(std::array<std::array<double, 3>, 3> a) {
  std::array<std::array<double, 3>, 3> v = {
      {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}};
  for (int sweep = 0; sweep < 64; ++sweep) {
    const double off = a[0][1] * a[0][1] + a[0][2] * a[0][2] +
                       a[1][2] * a[1][2];
    if (off < 1e-30) {
      break;
    }
    for (int p = 0; p < 3; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        if (std::abs(a[p][q]) < 1e-300) {
          continue;
        }
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t =
            ((theta >= 0.0) ? 1.0 : -1.0) /
            (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double app = a[p][p];
        const double aqq = a[q][q];
        const double apq = a[p][q];
        a[p][p] = app - t * apq;
        a[q][q] = aqq + t * apq;
        a[p][q] = 0.0;
        a[q][p] = 0.0;
        const int r = 3 - p - q;
        const double arp = a[r][p];
        const double arq = a[r][q];
        a[r][p] = c * arp - s * arq;
        a[p][r] = a[r][p];
        a[r][q] = s * arp + c * arq;
        a[q][r] = a[r][q];
        for (int i = 0; i < 3; ++i) {
          const double vip = v[i][p];
          const double viq = v[i][q];
          v[i][p] = c * vip - s * viq;
          v[i][q] = s * vip + c * viq;
        }
      }
    }
  }
  return {{a[0][0], a[1][1], a[2][2]}, v};
}

}  // namespace

Estimate estimate_tour(const TourSpec& spec, std::uint64_t samples,
                       std::uint64_t seed, int threads) {
  validate(spec);
  require_samples(samples);
  const int d = spec.d;
  const int n = spec.n;
  const bool closed = spec.topology == Topology::closed;
  const int points = closed ? n : n + 1;
  // Direct products of up to 64 step lengths stay comfortably inside double
  // range; beyond that the product is accumulated as a sum of logs.
  const bool log_space = n > 64;
  const std::uint32_t tag = stream_tag(1, d, n, closed ? 1 : 0);

  auto make_fn = [=]() {
    std::vector<double> first(static_cast<std::size_t>(d));
    std::vector<double> prev(static_cast<std::size_t>(d));
    std::vector<double> cur(static_cast<std::size_t>(d));
    return [=](std::uint64_t i) mutable -> double {
      NormalStream g(seed, i, tag);
      double product = 1.0;
      double log_sum = 0.0;
      for (int p = 0; p < points; ++p) {
        double norm2 = 0.0;
        for (int c = 0; c < d; ++c) {
          const double x = g.next();
          cur[static_cast<std::size_t>(c)] = x;
          if (p > 0) {
            const double dx = x - prev[static_cast<std::size_t>(c)];
            norm2 += dx * dx;
          } else {
            first[static_cast<std::size_t>(c)] = x;
          }
        }
        if (p > 0) {
          if (log_space) {
            log_sum += 0.5 * std::log(norm2);
          } else {
            product *= std::sqrt(norm2);
          }
        }
        std::swap(cur, prev);
      }
      if (closed) {
        double norm2 = 0.0;
        for (int c = 0; c < d; ++c) {
          const double dx = first[static_cast<std::size_t>(c)] -
                            prev[static_cast<std::size_t>(c)];
          norm2 += dx * dx;
        }
        if (log_space) {
          log_sum += 0.5 * std::log(norm2);
        } else {
          product *= std::sqrt(norm2);
        }
      }
      return log_space ? std::exp(log_sum) : product;
    };
  };
  const RawMoments m = run_blocked(samples, threads, make_fn);
  return finalize(m, samples, seed, McMethod::direct_tour);
}

Estimate estimate_correlated_product(double rho, std::uint64_t samples,
                                     std::uint64_t seed, int threads) {
  if (!(rho <= 0.0)) {
    throw domain_error(
        "estimate_correlated_product: supported range is -1/sqrt(2) <= rho <= 0, got " +
        std::to_string(rho));
  }
  require_samples(samples);
  std::array<std::array<double, 3>, 3> psi;
  psi_matrix(rho, psi);
  const Eigen3 eigen = jacobi_eigen3(psi);
  std::array<double, 3> lambda = eigen.values;
  for (double& value : lambda) {
    if (value < -1e-10) {
      throw covariance_error(
          "estimate_correlated_product: Psi(rho) has eigenvalue " +
          std::to_string(value) + " < -1e-10; not a covariance matrix");
    }
    value = std::max(value, 0.0);
  }
  // Factor of the per-coordinate covariance Psi/2: columns of the
  // eigenvector matrix scaled by sqrt(lambda/2).
  std::array<std::array<double, 3>, 3> factor;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      factor[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          eigen.vectors[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
          std::sqrt(0.5 * lambda[static_cast<std::size_t>(j)]);
    }
  }
  const std::uint32_t tag = stream_tag(2, 2, 3, 0);

  auto make_fn = [=]() {
    return [=](std::uint64_t i) -> double {
      NormalStream g(seed, i, tag);
      std::array<double, 3> gu = {g.next(), g.next(), g.next()};
      std::array<double, 3> gv = {g.next(), g.next(), g.next()};
      double product = 1.0;
      for (int k = 0; k < 3; ++k) {
        double u = 0.0;
        double v = 0.0;
        for (int j = 0; j < 3; ++j) {
          u += factor[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] *
               gu[static_cast<std::size_t>(j)];
          v += factor[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] *
               gv[static_cast<std::size_t>(j)];
        }
        product *= std::sqrt(u * u + v * v);
      }
      return product;
    };
  };
  const RawMoments m = run_blocked(samples, threads, make_fn);
  return finalize(m, samples, seed, McMethod::correlated_steps);
}

Estimate estimate_sign_expectation(std::uint64_t samples, std::uint64_t seed,
                                   int threads) {
  require_samples(samples);
  const std::uint32_t tag = stream_tag(3, 1, 4, 0);
  auto make_fn = [=]() {
    return [=](std::uint64_t i) -> double {
      NormalStream g(seed, i, tag);
      double prev = g.next();
      double product = 1.0;
      for (int s = 0; s < 4; ++s) {
        const double next = g.next();
        product *= (next - prev >= 0.0) ? 1.0 : -1.0;
        prev = next;
      }
      return product;
    };
  };
  const RawMoments m = run_blocked(samples, threads, make_fn);
  return finalize(m, samples, seed, McMethod::sign_expectation);
}

Estimate estimate_orthant_indicator(std::uint64_t samples, std::uint64_t seed,
                                    int threads) {
  require_samples(samples);
  const std::uint32_t tag = stream_tag(4, 1, 4, 0);
  auto make_fn = [=]() {
    return [=](std::uint64_t i) -> double {
      NormalStream g(seed, i, tag);
      double prev = g.next();
      for (int s = 0; s < 4; ++s) {
        const double next = g.next();
        if (next - prev <= 0.0) {
          return 0.0;
        }
        prev = next;
      }
      return 1.0;
    };
  };
  const RawMoments m = run_blocked(samples, threads, make_fn);
  return finalize(m, samples, seed, McMethod::orthant_indicator);
}

}  // namespace gtours
