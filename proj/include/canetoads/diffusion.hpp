#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "canetoads/errors.hpp"

namespace canetoads {

enum class ProfileKind { Linear, PowerLaw, OscillatingLog, Tabulated };

/// Closed form of the limit D̄ = lim D(θ/ε)/D(1/ε), when known.
enum class LimitKind {
  Identity,  ///< D̄(θ) = θ
  Power,     ///< D̄(θ) = θ^q
  Unknown,   ///< no closed form declared
};

/// Trait-dependent motility D(θ), its ε-rescaling D̄^ε and its limit D̄.
///
/// All members are immutable after construction. D is evaluated on θ ≥ 0 and
/// returns the continuous extension 0 at θ = 0 for the profiles vanishing there.
class DiffusionProfile {
 public:
  static DiffusionProfile linear() { return DiffusionProfile(ProfileKind::Linear, 1.0); }

  static DiffusionProfile power_law(double exponent) {
    if (!(exponent > 0.0) || !std::isfinite(exponent)) {
      throw DomainError("power-law exponent must be positive and finite");
    }
    return DiffusionProfile(ProfileKind::PowerLaw, exponent);
  }

  /// D(θ) = θ (1 + log(θ + 1) + sin(θ)/2), natural logarithm. Limit D̄(θ) = θ.
  static DiffusionProfile oscillating_log() {
    return DiffusionProfile(ProfileKind::OscillatingLog, 1.0);
  }

  /// Piecewise-linear motility through (theta[k], value[k]), extended linearly
  /// past the last sample. `limit_exponent` declares D̄(θ) = θ^q when known.
  static DiffusionProfile tabulated(std::vector<double> theta, std::vector<double> value,
                                    std::optional<double> limit_exponent = std::nullopt) {
    if (theta.size() != value.size() || theta.size() < 2) {
      throw DomainError("tabulated profile needs at least two (theta, D) samples of equal length");
    }
    if (theta.front() != 0.0) throw DomainError("tabulated profile must start at theta = 0");
    for (std::size_t k = 1; k < theta.size(); ++k) {
      if (!(theta[k] > theta[k - 1])) {
        throw DomainError("tabulated theta samples must be strictly increasing");
      }
      if (!(value[k] > 0.0)) throw DomainError("tabulated D must be positive for theta > 0");
    }
    if (value.front() < 0.0) throw DomainError("tabulated D must be nonnegative at theta = 0");
    const std::size_t n = theta.size();
    if (!(value[n - 1] > value[n - 2])) {
      throw DomainError("tabulated D must increase on its last segment so that D -> infinity");
    }
    if (limit_exponent && !(*limit_exponent > 0.0)) {
      throw DomainError("declared limit exponent must be positive");
    }
    DiffusionProfile p(ProfileKind::Tabulated, limit_exponent.value_or(1.0));
    p.table_theta_ = std::move(theta);
    p.table_value_ = std::move(value);
    p.limit_kind_ = limit_exponent ? LimitKind::Power : LimitKind::Unknown;
    return p;
  }

  [[nodiscard]] ProfileKind kind() const noexcept { return kind_; }
  [[nodiscard]] LimitKind limit_kind() const noexcept { return limit_kind_; }
  /// Power-law exponent p (PowerLaw) or declared limit exponent q (Tabulated).
  [[nodiscard]] double exponent() const noexcept { return exponent_; }
  [[nodiscard]] const std::vector<double>& table_theta() const noexcept { return table_theta_; }
  [[nodiscard]] const std::vector<double>& table_value() const noexcept { return table_value_; }
  [[nodiscard]] bool has_limit() const noexcept { return limit_kind_ != LimitKind::Unknown; }
  /// Linear and power laws satisfy D̄^ε = D̄ for every ε.
  [[nodiscard]] bool scale_invariant() const noexcept {
    return kind_ == ProfileKind::Linear || kind_ == ProfileKind::PowerLaw;
  }

  /// D(θ).
  [[nodiscard]] double operator()(double theta) const {
    if (!(theta >= 0.0)) throw DomainError("D(theta) requires theta >= 0");
    switch (kind_) {
      case ProfileKind::Linear:
        return theta;
      case ProfileKind::PowerLaw:
        return std::pow(theta, exponent_);
      case ProfileKind::OscillatingLog:
        return theta * (1.0 + std::log(theta + 1.0) + std::sin(theta) / 2.0);
      case ProfileKind::Tabulated:
        return interpolate(theta);
    }
    return 0.0;
  }

  /// D̄^ε(θ) = D(θ/ε) / D(1/ε). Equals 1 at θ = 1 for every ε.
  [[nodiscard]] double rescaled(double theta, double eps) const {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw DomainError("epsilon must be positive and finite");
    if (!(theta >= 0.0)) throw DomainError("D_eps(theta) requires theta >= 0");
    if (theta == 1.0) return 1.0;
    if (scale_invariant()) return limit(theta);
    return (*this)(theta / eps) / (*this)(1.0 / eps);
  }

  /// D̄(θ); zero exactly at θ = 0.
  [[nodiscard]] double limit(double theta) const {
    if (!(theta >= 0.0)) throw DomainError("limit D(theta) requires theta >= 0");
    switch (limit_kind_) {
      case LimitKind::Identity:
        return theta;
      case LimitKind::Power:
        return std::pow(theta, exponent_);
      case LimitKind::Unknown:
        break;
    }
    throw UnsupportedError("tabulated profile has no declared limit");
  }

  /// dD̄/dθ, used by gradient-based path optimization.
  [[nodiscard]] double limit_derivative(double theta) const {
    if (!(theta >= 0.0)) throw DomainError("limit derivative requires theta >= 0");
    switch (limit_kind_) {
      case LimitKind::Identity:
        return 1.0;
      case LimitKind::Power:
        if (theta == 0.0) return exponent_ < 1.0 ? HUGE_VAL : (exponent_ == 1.0 ? 1.0 : 0.0);
        return exponent_ * std::pow(theta, exponent_ - 1.0);
      case LimitKind::Unknown:
        break;
    }
    throw UnsupportedError("tabulated profile has no declared limit");
  }

  /// d²D̄/dθ² for θ > 0.
  [[nodiscard]] double limit_second_derivative(double theta) const {
    if (!(theta > 0.0)) throw DomainError("limit second derivative requires theta > 0");
    switch (limit_kind_) {
      case LimitKind::Identity:
        return 0.0;
      case LimitKind::Power:
        return exponent_ * (exponent_ - 1.0) * std::pow(theta, exponent_ - 2.0);
      case LimitKind::Unknown:
        break;
    }
    throw UnsupportedError("tabulated profile has no declared limit");
  }

  /// Profile viewed through its limit only: a profile whose D equals D̄.
  /// Solvers of the limit equations only ever need D̄.
  [[nodiscard]] DiffusionProfile limit_profile() const {
    switch (limit_kind_) {
      case LimitKind::Identity:
        return linear();
      case LimitKind::Power:
        return exponent_ == 1.0 ? linear() : power_law(exponent_);
      case LimitKind::Unknown:
        break;
    }
    throw UnsupportedError("tabulated profile has no declared limit");
  }

  [[nodiscard]] std::string name() const {
    switch (kind_) {
      case ProfileKind::Linear:
        return "linear";
      case ProfileKind::PowerLaw:
        return "power";
      case ProfileKind::OscillatingLog:
        return "oscillating_log";
      case ProfileKind::Tabulated:
        return "tabulated";
    }
    return "unknown";
  }

  friend bool operator==(const DiffusionProfile&, const DiffusionProfile&) = default;

 private:
  DiffusionProfile(ProfileKind kind, double exponent) : kind_(kind), exponent_(exponent) {
    switch (kind) {
      case ProfileKind::Linear:
      case ProfileKind::OscillatingLog:
        limit_kind_ = LimitKind::Identity;
        break;
      case ProfileKind::PowerLaw:
        limit_kind_ = exponent == 1.0 ? LimitKind::Identity : LimitKind::Power;
        break;
      case ProfileKind::Tabulated:
        limit_kind_ = LimitKind::Unknown;
        break;
    }
  }

  [[nodiscard]] double interpolate(double theta) const {
    const auto& t = table_theta_;
    const auto& v = table_value_;
    const std::size_t n = t.size();
    if (theta >= t[n - 1]) {
      const double slope = (v[n - 1] - v[n - 2]) / (t[n - 1] - t[n - 2]);
      return v[n - 1] + slope * (theta - t[n - 1]);
    }
    const auto it = std::upper_bound(t.begin(), t.end(), theta);
    const std::size_t k = static_cast<std::size_t>(it - t.begin()) - 1;
    const double w = (theta - t[k]) / (t[k + 1] - t[k]);
    return (1.0 - w) * v[k] + w * v[k + 1];
  }

  ProfileKind kind_;
  LimitKind limit_kind_ = LimitKind::Identity;
  double exponent_ = 1.0;
  std::vector<double> table_theta_;
  std::vector<double> table_value_;
};

inline double eval_D(const DiffusionProfile& profile, double theta) { return profile(theta); }
inline double eval_D_eps(const DiffusionProfile& profile, double theta, double eps) {
  return profile.rescaled(theta, eps);
}
inline double eval_D_limit(const DiffusionProfile& profile, double theta) {
  return profile.limit(theta);
}

/// Sampled check of the motility assumptions: D > 0 for θ > 0, D unbounded along
/// a logarithmic sample up to `theta_far`, and D̄(0) = 0 < D̄ on (0, theta_max].
/// Global monotonicity is deliberately not required.
inline void check_profile(const DiffusionProfile& profile, double theta_max, double theta_far = 1e6) {
  constexpr int kSamples = 400;
  double first_decade_max = 0.0;
  double last_decade_min = HUGE_VAL;
  for (int k = 0; k <= kSamples; ++k) {
    const double theta = std::pow(theta_far, static_cast<double>(k) / kSamples);
    const double d = profile(theta);
    if (!(d > 0.0) || !std::isfinite(d)) {
      throw DomainError("D(theta) must be positive and finite at theta = " + std::to_string(theta));
    }
    if (theta <= 10.0) first_decade_max = std::max(first_decade_max, d);
    if (theta >= theta_far / 10.0) last_decade_min = std::min(last_decade_min, d);
  }
  if (!(last_decade_min > 2.0 * first_decade_max)) {
    throw DomainError("D(theta) does not grow without bound on the sampled range");
  }
  if (profile.has_limit()) {
    if (profile.limit(0.0) != 0.0) throw DomainError("limit D must vanish at theta = 0");
    for (int k = 1; k <= kSamples; ++k) {
      const double theta = theta_max * k / kSamples;
      if (!(profile.limit(theta) > 0.0)) {
        throw DomainError("limit D must be positive for theta > 0");
      }
    }
  }
}

}  // namespace canetoads
