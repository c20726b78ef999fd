#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace fbmtopo {

enum class FbmMethod { riemann_liouville, spectral_fgn };

std::string_view to_string(FbmMethod method);
/// Throws DomainError on an unknown name.
FbmMethod parse_fbm_method(std::string_view name);

/// Scalar samples with a presence mask and the parameters that generated them.
struct TimeSeries {
  std::vector<double> values;
  std::vector<bool> mask;  // true = sample present
  double hurst = 0.5;
  std::uint64_t seed = 0;
  FbmMethod method = FbmMethod::spectral_fgn;

  std::size_t size() const noexcept { return values.size(); }
  std::size_t missing_count() const noexcept;
};

/// Samples fractional Brownian motion x_1..x_length with Hurst exponent `hurst`.
///
/// riemann_liouville: x_n = sum_{k<=n} w_{n-k+1} xi_k / Gamma(H+1/2), the
/// Riemann-Liouville fractional integral of unit-step white noise, where
/// w_m = (m^(H+1/2) - (m-1)^(H+1/2)) / (H+1/2) integrates the kernel
/// (t-s)^(H-1/2) over each step. At H = 1/2 this is the plain cumulative sum.
///
/// spectral_fgn: exact fractional Gaussian noise via circulant embedding
/// (Davies-Harte), then cumulative sum. x_1 is the first increment.
///
/// Output is a pure function of the arguments.
TimeSeries generate_fbm(double hurst, std::size_t length, std::uint64_t seed,
                        FbmMethod method = FbmMethod::spectral_fgn);

/// Marks exactly round(q*T) (ties to even) uniformly chosen samples as missing.
TimeSeries inject_irregularity(const TimeSeries& series, double q, std::uint64_t seed);

/// Number of samples inject_irregularity removes from a series of length T.
std::size_t missing_target(double q, std::size_t length);

/// Autocovariance of unit-variance fGn at integer lag k.
double fgn_autocovariance(double hurst, long long lag);

}  // namespace fbmtopo
