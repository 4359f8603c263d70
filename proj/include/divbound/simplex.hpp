#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "divbound/error.hpp"
#include "divbound/summation.hpp"

namespace divbound {

struct SimplexTolerance {
  double sum = 1e-9;    // |sum - 1| allowed
  double mass = 1e-12;  // every mass must exceed this
};

/// A point on the open probability simplex: n >= 2 strictly positive masses
/// summing to one. Instances only come out of `validate`, so holding one is
/// proof that the invariants were checked.
class Distribution {
 public:
  static Distribution validate(std::span<const double> raw,
                               SimplexTolerance tol = {}) {
    if (raw.size() < 2) {
      throw Error(ErrorCode::TooShort,
                  "a distribution needs at least 2 masses, got " +
                      std::to_string(raw.size()));
    }
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (!std::isfinite(raw[i]) || raw[i] <= tol.mass) {
        throw Error(ErrorCode::NonPositiveMass,
                    "mass at index " + std::to_string(i) + " is " +
                        std::to_string(raw[i]) + ", must be > " +
                        std::to_string(tol.mass),
                    i);
      }
    }
    const double total = compensated_sum(raw);
    if (!(std::abs(total - 1.0) <= tol.sum)) {
      throw Error(ErrorCode::NotNormalized,
                  "masses sum to " + std::to_string(total) +
                      " (tolerance " + std::to_string(tol.sum) + ")");
    }
    return Distribution(std::vector<double>(raw.begin(), raw.end()));
  }

  static Distribution validate(const std::vector<double>& raw,
                               SimplexTolerance tol = {}) {
    return validate(std::span<const double>(raw), tol);
  }

  std::span<const double> masses() const noexcept { return masses_; }
  std::size_t size() const noexcept { return masses_.size(); }
  double operator[](std::size_t i) const noexcept { return masses_[i]; }

  friend bool operator==(const Distribution&, const Distribution&) = default;

 private:
  explicit Distribution(std::vector<double> masses)
      : masses_(std::move(masses)) {}

  std::vector<double> masses_;
};

/// Rescales raw weights to unit sum. Only used when a caller asks for it
/// explicitly; `validate` never renormalizes.
inline std::vector<double> normalized(std::span<const double> raw) {
  const double total = compensated_sum(raw);
  std::vector<double> out(raw.begin(), raw.end());
  if (total > 0.0 && std::isfinite(total)) {
    for (double& v : out) v /= total;
  }
  return out;
}

inline void require_same_length(const Distribution& p, const Distribution& q) {
  if (p.size() != q.size()) {
    throw Error(ErrorCode::LengthMismatch,
                "distributions have lengths " + std::to_string(p.size()) +
                    " and " + std::to_string(q.size()));
  }
}

/// Extremes of the likelihood ratio p_i / q_i over the support.
struct RatioBounds {
  double r = 1.0;
  double R = 1.0;
};

inline RatioBounds ratio_bounds(const Distribution& p, const Distribution& q) {
  require_same_length(p, q);
  RatioBounds b{p[0] / q[0], p[0] / q[0]};
  for (std::size_t i = 1; i < p.size(); ++i) {
    const double x = p[i] / q[i];
    b.r = std::min(b.r, x);
    b.R = std::max(b.R, x);
  }
  return b;
}

/// SplitMix64 finalizer; turns (seed, stream index) into an independent
/// engine seed so that trial i never depends on how trials are scheduled.
constexpr std::uint64_t stream_seed(std::uint64_t seed,
                                    std::uint64_t index) noexcept {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline constexpr int kMaxSamplingRejections = 10'000;

namespace detail {

inline std::vector<double> draw_dirichlet(std::mt19937_64& engine,
                                          std::size_t n, double concentration,
                                          double eps_mass, int& rejections) {
  std::gamma_distribution<double> gamma(concentration, 1.0);
  std::vector<double> x(n);
  for (;;) {
    for (double& v : x) v = gamma(engine);
    const double total = compensated_sum(x);
    bool ok = total > 0.0 && std::isfinite(total);
    if (ok) {
      for (double& v : x) {
        v /= total;
        ok = ok && v > eps_mass;
      }
    }
    if (ok) return x;
    if (++rejections > kMaxSamplingRejections) {
      throw Error(ErrorCode::SamplingExhausted,
                  "no admissible Dirichlet draw after " +
                      std::to_string(kMaxSamplingRejections) + " rejections");
    }
  }
}

}  // namespace detail

/// Two independent symmetric Dirichlet(concentration) draws on the
/// n-simplex. Draws with any mass at or below eps_mass are redrawn.
inline std::pair<Distribution, Distribution> sample_pair(
    std::size_t n, std::uint64_t seed, double concentration,
    SimplexTolerance tol = {}) {
  if (n < 2) {
    throw Error(ErrorCode::TooShort, "sample_pair needs n >= 2");
  }
  if (!(concentration > 0.0) || !std::isfinite(concentration)) {
    throw Error(ErrorCode::ConfigInvalid,
                "Dirichlet concentration must be positive");
  }
  std::mt19937_64 engine(seed);
  int rejections = 0;
  auto p = detail::draw_dirichlet(engine, n, concentration, tol.mass, rejections);
  auto q = detail::draw_dirichlet(engine, n, concentration, tol.mass, rejections);
  return {Distribution::validate(p, tol), Distribution::validate(q, tol)};
}

}  // namespace divbound
