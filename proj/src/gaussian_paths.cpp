#include "fbmruin/gaussian_paths.hpp"

#include <fftw3.h>

#include <boost/random/normal_distribution.hpp>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <string>

#include "fbmruin/errors.hpp"

namespace fbmruin {
namespace {

// FFTW planning touches global state; execution with new arrays does not.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

// Autocovariance of fractional Gaussian noise with unit spacing.
double fgn_autocovariance(std::size_t k, double h) {
  const double two_h = 2.0 * h;
  const double kd = static_cast<double>(k);
  return 0.5 * (std::pow(kd + 1.0, two_h) - 2.0 * std::pow(kd, two_h) + std::pow(std::abs(kd - 1.0), two_h));
}

void cumulate(std::span<double> path) {
  path[0] = 0.0;
  for (std::size_t j = 1; j < path.size(); ++j) path[j] += path[j - 1];
}

void check_path_spans(const Grid& grid, std::span<double> first, std::span<double> second) {
  if (first.size() != grid.size() || second.size() != grid.size())
    throw ValidationError("path buffer size does not match grid size");
}

}  // namespace

HurstIndex::HurstIndex(double h) : h_(h) {
  if (!(h > 0.0 && h <= 1.0))
    throw ValidationError("Hurst index must lie in (0, 1], got " + std::to_string(h));
}

bool HurstIndex::is_half() const noexcept { return std::abs(h_ - 0.5) <= 1e-12; }

Grid::Grid(double horizon, std::size_t n_points) : horizon_(horizon), n_points_(n_points) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ValidationError("grid horizon must be positive and finite");
  if (n_points < 2) throw ValidationError("grid needs at least 2 points");
}

std::size_t Grid::nearest_index(double t) const noexcept {
  const double clamped = std::clamp(t, 0.0, horizon_);
  const auto j = static_cast<std::size_t>(std::llround(clamped / spacing()));
  return std::min(j, n_points_ - 1);
}

std::string_view to_string(Generator g) {
  switch (g) {
    case Generator::circulant: return "circulant";
    case Generator::cholesky: return "cholesky";
    case Generator::rank_one: return "rank_one";
  }
  return "unknown";
}

double fbm_covariance(double s, double t, HurstIndex h) {
  if (s < 0.0 || t < 0.0) throw ValidationError("fbm_covariance: times must be non-negative");
  const double two_h = 2.0 * h.value();
  if (s == t) return std::pow(t, two_h);
  return 0.5 * (std::pow(t, two_h) + std::pow(s, two_h) - std::pow(std::abs(t - s), two_h));
}

// ---------------------------------------------------------------------------
// Circulant embedding

CirculantSampler::CirculantSampler(Grid grid, HurstIndex h) : grid_(grid), h_(h.value()) {
  if (h.is_one()) throw ValidationError("circulant embedding needs H < 1; use the rank-one sampler");
  const std::size_t increments = grid_.size() - 1;
  std::size_t m = 2;
  while (m < 2 * increments) m <<= 1;

  const double scale = std::pow(grid_.spacing(), 2.0 * h_);
  std::vector<std::complex<double>> row(m);
  for (std::size_t j = 0; j <= m / 2; ++j) row[j] = scale * fgn_autocovariance(j, h_);
  for (std::size_t j = 1; j < m / 2; ++j) row[m - j] = row[j];

  auto* data = reinterpret_cast<fftw_complex*>(row.data());
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_plan eig = fftw_plan_dft_1d(static_cast<int>(m), data, data, FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_execute(eig);
    fftw_destroy_plan(eig);
    plan_ = fftw_plan_dft_1d(static_cast<int>(m), data, data, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  }

  double max_eig = 0.0;
  for (const auto& v : row) max_eig = std::max(max_eig, v.real());
  sqrt_eigenvalues_.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    double lambda = row[k].real();
    if (lambda < 0.0) {
      const double ratio = -lambda / max_eig;
      worst_negative_ratio_ = std::max(worst_negative_ratio_, ratio);
      if (ratio > kEmbeddingClampTolerance) valid_ = false;
      lambda = 0.0;
    }
    sqrt_eigenvalues_[k] = std::sqrt(lambda / static_cast<double>(m));
  }
}

CirculantSampler::~CirculantSampler() {
  if (plan_ != nullptr) {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
  }
}

void CirculantSampler::sample_pair(Rng& rng, std::span<double> first, std::span<double> second) const {
  check_path_spans(grid_, first, second);
  thread_local std::vector<std::complex<double>> work;
  const std::size_t m = sqrt_eigenvalues_.size();
  work.resize(m);

  boost::random::normal_distribution<double> normal;
  for (std::size_t k = 0; k < m; ++k) {
    const double re = normal(rng);
    const double im = normal(rng);
    work[k] = {sqrt_eigenvalues_[k] * re, sqrt_eigenvalues_[k] * im};
  }
  auto* data = reinterpret_cast<fftw_complex*>(work.data());
  fftw_execute_dft(static_cast<fftw_plan>(plan_), data, data);

  const std::size_t increments = grid_.size() - 1;
  for (std::size_t j = 0; j < increments; ++j) {
    first[j + 1] = work[j].real();
    second[j + 1] = work[j].imag();
  }
  cumulate(first);
  cumulate(second);
}

// ---------------------------------------------------------------------------
// Dense oracle

CholeskySampler::CholeskySampler(Grid grid, HurstIndex h, std::size_t max_points)
    : grid_(grid), dim_(grid.size() - 1) {
  if (grid.size() > max_points)
    throw ValidationError("grid of " + std::to_string(grid.size()) + " points exceeds the dense limit of " +
                          std::to_string(max_points));
  lower_.assign(dim_ * dim_, 0.0);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j <= i; ++j) lower_[i * dim_ + j] = fbm_covariance(grid.time(i + 1), grid.time(j + 1), h);

  for (std::size_t j = 0; j < dim_; ++j) {
    double* row_j = &lower_[j * dim_];
    const double diag = row_j[j];
    const double pivot = diag - std::inner_product(row_j, row_j + j, row_j, 0.0);
    if (!(pivot > 1e-14 * diag) || !std::isfinite(pivot)) throw FactorizationError(j);
    const double root = std::sqrt(pivot);
    row_j[j] = root;
    for (std::size_t i = j + 1; i < dim_; ++i) {
      double* row_i = &lower_[i * dim_];
      row_i[j] = (row_i[j] - std::inner_product(row_i, row_i + j, row_j, 0.0)) / root;
    }
  }
}

void CholeskySampler::sample(Rng& rng, std::span<double> out) const {
  thread_local std::vector<double> z;
  z.resize(dim_);
  boost::random::normal_distribution<double> normal;
  for (auto& v : z) v = normal(rng);
  out[0] = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    const double* row = &lower_[i * dim_];
    out[i + 1] = std::inner_product(row, row + i + 1, z.data(), 0.0);
  }
}

void CholeskySampler::sample_pair(Rng& rng, std::span<double> first, std::span<double> second) const {
  check_path_spans(grid_, first, second);
  sample(rng, first);
  sample(rng, second);
}

void RankOneSampler::sample_pair(Rng& rng, std::span<double> first, std::span<double> second) const {
  check_path_spans(grid_, first, second);
  boost::random::normal_distribution<double> normal;
  const double z1 = normal(rng);
  const double z2 = normal(rng);
  for (std::size_t j = 0; j < grid_.size(); ++j) {
    const double t = j == 0 ? 0.0 : grid_.time(j);
    first[j] = t * z1;
    second[j] = t * z2;
  }
}

std::unique_ptr<PathSampler> make_sampler(const Grid& grid, HurstIndex h) {
  if (h.is_one()) return std::make_unique<RankOneSampler>(grid);
  auto circulant = std::make_unique<CirculantSampler>(grid, h);
  if (circulant->embedding_valid()) return circulant;
  return std::make_unique<CholeskySampler>(grid, h);
}

PathSample sample_fbm(const Grid& grid, HurstIndex h, std::uint64_t seed) {
  const auto sampler = make_sampler(grid, h);
  Rng rng(seed);
  PathSample out{grid, std::vector<double>(grid.size()), sampler->generator(), seed};
  std::vector<double> discard(grid.size());
  sampler->sample_pair(rng, out.values, discard);
  return out;
}

PathSample sample_fbm_cholesky(const Grid& grid, HurstIndex h, std::uint64_t seed, std::size_t max_points) {
  PathSample out{grid, std::vector<double>(grid.size()), Generator::cholesky, seed};
  Rng rng(seed);
  if (h.is_one()) {
    RankOneSampler rank_one(grid);
    std::vector<double> discard(grid.size());
    rank_one.sample_pair(rng, out.values, discard);
    out.generator = Generator::rank_one;
    return out;
  }
  CholeskySampler(grid, h, max_points).sample(rng, out.values);
  return out;
}

}  // namespace fbmruin
