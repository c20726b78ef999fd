#include "fbmtopo/fbm.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <numeric>
#include <string>

#include "fbmtopo/errors.hpp"
#include "fbmtopo/random.hpp"

namespace fbmtopo {

namespace {

void check_hurst(double hurst) {
  if (!(hurst > 0.0 && hurst < 1.0))
    throw DomainError("Hurst exponent must lie in (0, 1), got " + std::to_string(hurst));
}

// The FFTW planner is process-global; plan creation and destruction must be serialized.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwDeleter {
  void operator()(fftw_complex* p) const noexcept { fftw_free(p); }
};
using FftwBuffer = std::unique_ptr<fftw_complex[], FftwDeleter>;

FftwBuffer fftw_buffer(std::size_t n) {
  auto* p = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  if (p == nullptr) throw std::bad_alloc();
  return FftwBuffer(p);
}

// In-place forward DFT, X_k = sum_j x_j exp(-2 pi i jk/n).
void forward_dft(fftw_complex* data, std::size_t n) {
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(n), data, data, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard lock(fftw_planner_mutex());
  fftw_destroy_plan(plan);
}

std::vector<double> riemann_liouville(double hurst, std::size_t length, Rng& rng) {
  std::vector<double> xi(length);
  for (auto& v : xi) v = rng.gaussian();

  // kernel[m-1] = integral of u^(H-1/2) over [m-1, m]: the exact weight of the
  // unit-step increment m steps back. Plain endpoint weights m^(H-1/2) bias the
  // small-lag increments for H < 1/2.
  const double a = hurst + 0.5;
  std::vector<double> kernel(length);
  for (std::size_t m = 1; m <= length; ++m) {
    const double mm = static_cast<double>(m);
    kernel[m - 1] = (std::pow(mm, a) - std::pow(mm - 1.0, a)) / a;
  }
  const double norm = 1.0 / std::tgamma(a);

  // x_n = sum_{k=1..n} kernel(n-k+1) xi_k; with 0-based n, k: kernel[n-k] * xi[k].
  std::vector<double> x(length);
  for (std::size_t n = 0; n < length; ++n) {
    double acc = 0.0;
    for (std::size_t k = 0; k <= n; ++k) acc += kernel[n - k] * xi[k];
    x[n] = acc * norm;
  }
  return x;
}

// Davies-Harte: embed the n x n fGn covariance in a circulant of size m >= 2(n-1)
// and colour complex white noise with the square roots of its eigenvalues.
std::vector<double> spectral_fgn(double hurst, std::size_t n, Rng& rng) {
  std::size_t m = 2 * (n - 1);
  // Negative eigenvalues mean the minimal embedding is not PSD; retry with
  // zero-padded larger embeddings before giving up.
  constexpr int kMaxPadding = 4;
  for (int attempt = 0; attempt <= kMaxPadding; ++attempt, m *= 2) {
    auto buf = fftw_buffer(m);
    const std::size_t half = m / 2;
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t lag = j <= half ? j : m - j;
      buf[j][0] = lag < n ? fgn_autocovariance(hurst, static_cast<long long>(lag)) : 0.0;
      buf[j][1] = 0.0;
    }
    forward_dft(buf.get(), m);

    double largest = 0.0;
    for (std::size_t j = 0; j < m; ++j) largest = std::max(largest, std::abs(buf[j][0]));
    const double tolerance = 1e-10 * largest;
    bool psd = true;
    std::vector<double> eigen(m);
    for (std::size_t j = 0; j < m; ++j) {
      if (buf[j][0] < -tolerance) {
        psd = false;
        break;
      }
      eigen[j] = std::max(buf[j][0], 0.0);
    }
    if (!psd) continue;

    const double scale = 1.0 / static_cast<double>(m);
    for (std::size_t j = 0; j < m; ++j) {
      const double amp = std::sqrt(eigen[j] * scale);
      buf[j][0] = amp * rng.gaussian();
      buf[j][1] = amp * rng.gaussian();
    }
    forward_dft(buf.get(), m);

    std::vector<double> noise(n);
    for (std::size_t j = 0; j < n; ++j) noise[j] = buf[j][0];
    return noise;
  }
  throw GeneratorError("circulant embedding is not positive semi-definite for H=" +
                       std::to_string(hurst) + ", n=" + std::to_string(n));
}

}  // namespace

std::string_view to_string(FbmMethod method) {
  switch (method) {
    case FbmMethod::riemann_liouville:
      return "riemann_liouville";
    case FbmMethod::spectral_fgn:
      return "spectral_fgn";
  }
  return "unknown";
}

FbmMethod parse_fbm_method(std::string_view name) {
  if (name == "riemann_liouville" || name == "rl") return FbmMethod::riemann_liouville;
  if (name == "spectral_fgn" || name == "spectral") return FbmMethod::spectral_fgn;
  throw DomainError("unknown fBm method '" + std::string(name) + "'");
}

std::size_t TimeSeries::missing_count() const noexcept {
  return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), false));
}

double fgn_autocovariance(double hurst, long long lag) {
  const double k = std::abs(static_cast<double>(lag));
  const double h2 = 2.0 * hurst;
  return 0.5 * (std::pow(k + 1.0, h2) - 2.0 * std::pow(k, h2) + std::pow(std::abs(k - 1.0), h2));
}

TimeSeries generate_fbm(double hurst, std::size_t length, std::uint64_t seed, FbmMethod method) {
  check_hurst(hurst);
  if (length < 2) throw DomainError("fBm length must be at least 2");

  Rng rng(seed);
  TimeSeries out;
  out.hurst = hurst;
  out.seed = seed;
  out.method = method;
  if (method == FbmMethod::riemann_liouville) {
    out.values = riemann_liouville(hurst, length, rng);
  } else {
    out.values = spectral_fgn(hurst, length, rng);
    std::partial_sum(out.values.begin(), out.values.end(), out.values.begin());
  }
  out.mask.assign(length, true);
  return out;
}

std::size_t missing_target(double q, std::size_t length) {
  // nearbyint honours the default FE_TONEAREST mode: ties go to even.
  return static_cast<std::size_t>(std::nearbyint(q * static_cast<double>(length)));
}

TimeSeries inject_irregularity(const TimeSeries& series, double q, std::uint64_t seed) {
  if (!(q >= 0.0 && q < 1.0))
    throw DomainError("irregularity q must lie in [0, 1), got " + std::to_string(q));
  if (series.missing_count() != 0) throw DomainError("series is already irregular");

  TimeSeries out = series;
  const std::size_t total = series.size();
  const std::size_t remove = missing_target(q, total);
  if (remove == 0) return out;

  // Partial Fisher-Yates: the first `remove` slots are a uniform sample without replacement.
  std::vector<std::size_t> index(total);
  std::iota(index.begin(), index.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = 0; i < remove; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(total - i));
    std::swap(index[i], index[j]);
    out.mask[index[i]] = false;
  }
  return out;
}

}  // namespace fbmtopo
