#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "dcekit/common.hpp"

namespace dce {

enum class DrawGenerator { kHalton, kPseudo };

struct DrawConfig {
  DrawGenerator tag = DrawGenerator::kHalton;
  int burn = 50;           // leading Halton points dropped
  std::uint64_t seed = 0;  // consumed by the pseudo generator only
};

/// Radical inverse of `index` (1-based) in the given base; the base-2
/// sequence runs 1/2, 1/4, 3/4, 1/8, ...
double halton_point(int base, long index);

/// Standard-normal draws for simulated likelihoods: dimension k of
/// respondent r, draw d is z(k, r*n_draws + d). Halton dimensions use the
/// first `dims` primes with a common burn-in; respondent r owns the
/// contiguous point block [r*n_draws, (r+1)*n_draws). The same
/// (tag, primes, burn, seed, shape) always reproduces the same matrix.
class DrawMatrix {
public:
  DrawMatrix() = default;

  int n_respondents() const { return n_respondents_; }
  int n_draws() const { return n_draws_; }
  int dims() const { return dims_; }
  const DrawConfig& config() const { return config_; }
  const std::vector<int>& primes() const { return primes_; }

  /// dims x n_draws block of respondent r.
  Eigen::Block<const Eigen::MatrixXd> respondent_block(int r) const {
    return z_.block(0, static_cast<Eigen::Index>(r) * n_draws_, dims_, n_draws_);
  }
  const Eigen::MatrixXd& raw() const { return z_; }

  /// Wraps an existing dims x (n_respondents * n_draws) matrix; for draw
  /// experiments and tests.
  static DrawMatrix from_raw(Eigen::MatrixXd z, int n_respondents, int n_draws);

  friend DrawMatrix make_draws(int n_respondents, int n_draws, int dims,
                               const DrawConfig& config);

private:
  Eigen::MatrixXd z_; // dims x (n_respondents * n_draws)
  int n_respondents_ = 0;
  int n_draws_ = 0;
  int dims_ = 0;
  DrawConfig config_;
  std::vector<int> primes_;
};

DrawMatrix make_draws(int n_respondents, int n_draws, int dims,
                      const DrawConfig& config = {});

} // namespace dce
