#include "dcekit/draws.hpp"

#include <random>

#include "dcekit/stats.hpp"

namespace dce {

namespace {
const std::vector<int> kHaltonPrimes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29};

// Uniform in (0,1) from the top 53 bits of a 64-bit draw.
double canonical_uniform(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}
} // namespace

double halton_point(int base, long index) {
  double f = 1.0;
  double r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

DrawMatrix DrawMatrix::from_raw(Eigen::MatrixXd z, int n_respondents, int n_draws) {
  if (z.cols() != static_cast<Eigen::Index>(n_respondents) * n_draws)
    throw ValidationError("from_raw: column count must be n_respondents * n_draws");
  DrawMatrix dm;
  dm.z_ = std::move(z);
  dm.n_respondents_ = n_respondents;
  dm.n_draws_ = n_draws;
  dm.dims_ = static_cast<int>(dm.z_.rows());
  return dm;
}

DrawMatrix make_draws(int n_respondents, int n_draws, int dims, const DrawConfig& config) {
  if (dims > static_cast<int>(kHaltonPrimes.size()))
    throw ValidationError("make_draws: at most " + std::to_string(kHaltonPrimes.size()) +
                          " random dimensions supported");
  if (n_respondents < 1 || n_draws < 1 || dims < 1)
    throw ValidationError("make_draws: shape must be positive");

  DrawMatrix dm;
  dm.n_respondents_ = n_respondents;
  dm.n_draws_ = n_draws;
  dm.dims_ = dims;
  dm.config_ = config;
  dm.primes_.assign(kHaltonPrimes.begin(), kHaltonPrimes.begin() + dims);

  const Eigen::Index total = static_cast<Eigen::Index>(n_respondents) * n_draws;
  dm.z_.resize(dims, total);

  if (config.tag == DrawGenerator::kHalton) {
    for (int k = 0; k < dims; ++k) {
      const int base = dm.primes_[k];
      for (Eigen::Index i = 0; i < total; ++i) {
        const double u = halton_point(base, config.burn + static_cast<long>(i) + 1);
        dm.z_(k, i) = stats::normal_quantile(u);
      }
    }
  } else {
    std::mt19937_64 rng(config.seed);
    for (Eigen::Index i = 0; i < total; ++i)
      for (int k = 0; k < dims; ++k)
        dm.z_(k, i) = stats::normal_quantile(canonical_uniform(rng));
  }
  return dm;
}

} // namespace dce
