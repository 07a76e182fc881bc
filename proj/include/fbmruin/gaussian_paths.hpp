#pragma once

// Fractional Brownian motion on a uniform grid: covariance, an FFT circulant
// embedding sampler, and a dense Cholesky sampler used as its oracle.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace fbmruin {

class HurstIndex {
 public:
  /// Throws ValidationError unless 0 < h <= 1.
  explicit HurstIndex(double h);

  double value() const noexcept { return h_; }
  bool is_one() const noexcept { return h_ == 1.0; }
  bool is_half() const noexcept;

 private:
  double h_;
};

/// Uniform grid t_j = j * T / (n - 1), j = 0..n-1.
class Grid {
 public:
  Grid(double horizon, std::size_t n_points);

  double horizon() const noexcept { return horizon_; }
  std::size_t size() const noexcept { return n_points_; }
  double spacing() const noexcept { return horizon_ / static_cast<double>(n_points_ - 1); }
  double time(std::size_t j) const noexcept {
    return j + 1 == n_points_ ? horizon_ : static_cast<double>(j) * spacing();
  }
  /// Index of the grid point closest to t (t clamped to [0, T]).
  std::size_t nearest_index(double t) const noexcept;

 private:
  double horizon_;
  std::size_t n_points_;
};

enum class Generator { circulant, cholesky, rank_one };
std::string_view to_string(Generator g);

struct PathSample {
  Grid grid;
  std::vector<double> values;
  Generator generator;
  std::uint64_t seed;
};

using Rng = std::mt19937_64;

/// Cov(B_H(s), B_H(t)) = (t^{2H} + s^{2H} - |t-s|^{2H}) / 2 for s, t >= 0.
double fbm_covariance(double s, double t, HurstIndex h);

/// Relative size of a negative embedding eigenvalue that is clamped to zero.
inline constexpr double kEmbeddingClampTolerance = 1e-8;
/// Largest grid the dense oracle accepts unless the caller overrides it.
inline constexpr std::size_t kDefaultCholeskyLimit = 4096;

/// Interface shared by the samplers so Monte Carlo code can hold either.
class PathSampler {
 public:
  virtual ~PathSampler() = default;
  virtual const Grid& grid() const noexcept = 0;
  virtual Generator generator() const noexcept = 0;
  /// Fills two independent paths (each of grid().size() values, values[0]=0).
  virtual void sample_pair(Rng& rng, std::span<double> first, std::span<double> second) const = 0;
};

/// Circulant embedding of the fractional Gaussian noise increments. The
/// spectrum is computed once; sample_pair is const and safe to call from any
/// number of threads.
class CirculantSampler final : public PathSampler {
 public:
  CirculantSampler(Grid grid, HurstIndex h);
  ~CirculantSampler() override;
  CirculantSampler(const CirculantSampler&) = delete;
  CirculantSampler& operator=(const CirculantSampler&) = delete;

  const Grid& grid() const noexcept override { return grid_; }
  Generator generator() const noexcept override { return Generator::circulant; }
  void sample_pair(Rng& rng, std::span<double> first, std::span<double> second) const override;

  /// False when a negative eigenvalue exceeded the clamp tolerance.
  bool embedding_valid() const noexcept { return valid_; }
  std::size_t embedding_size() const noexcept { return sqrt_eigenvalues_.size(); }
  /// Most negative eigenvalue relative to the largest one (0 if none).
  double worst_negative_ratio() const noexcept { return worst_negative_ratio_; }

 private:
  Grid grid_;
  double h_;
  bool valid_ = true;
  double worst_negative_ratio_ = 0.0;
  std::vector<double> sqrt_eigenvalues_;  // sqrt(lambda_k / M)
  void* plan_ = nullptr;                  // fftw_plan
};

/// Dense lower Cholesky factor of Cov(B_H(t_1..t_{n-1})).
class CholeskySampler final : public PathSampler {
 public:
  /// Throws FactorizationError carrying the failing pivot, or
  /// ValidationError when the grid exceeds max_points.
  CholeskySampler(Grid grid, HurstIndex h, std::size_t max_points = kDefaultCholeskyLimit);

  const Grid& grid() const noexcept override { return grid_; }
  Generator generator() const noexcept override { return Generator::cholesky; }
  void sample_pair(Rng& rng, std::span<double> first, std::span<double> second) const override;
  void sample(Rng& rng, std::span<double> out) const;

 private:
  Grid grid_;
  std::size_t dim_;
  std::vector<double> lower_;  // row-major, dim_ x dim_
};

/// H = 1: B_1(t) = t * Z for a single standard normal Z.
class RankOneSampler final : public PathSampler {
 public:
  explicit RankOneSampler(Grid grid) : grid_(grid) {}
  const Grid& grid() const noexcept override { return grid_; }
  Generator generator() const noexcept override { return Generator::rank_one; }
  void sample_pair(Rng& rng, std::span<double> first, std::span<double> second) const override;

 private:
  Grid grid_;
};

/// Circulant sampler, Cholesky when the embedding is invalid, rank-one at H=1.
std::unique_ptr<PathSampler> make_sampler(const Grid& grid, HurstIndex h);

/// One circulant-embedding path, deterministic in (grid, h, seed).
PathSample sample_fbm(const Grid& grid, HurstIndex h, std::uint64_t seed);

/// One path from the dense factorization.
PathSample sample_fbm_cholesky(const Grid& grid, HurstIndex h, std::uint64_t seed,
                               std::size_t max_points = kDefaultCholeskyLimit);

}  // namespace fbmruin
