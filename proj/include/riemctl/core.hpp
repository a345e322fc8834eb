#ifndef RIEMCTL_CORE_HPP
#define RIEMCTL_CORE_HPP

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace riemctl {

// Hard cap on chart/state dimensions so all small-vector arithmetic stays on
// the stack. Plenty for the built-in spaces (dimension <= 3).
constexpr int kMaxDim = 8;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;

// Sentinel for "no finite injectivity bound" (complete, simply connected spaces).
constexpr double kUnboundedRadius = 1e18;

inline Vec make_vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

// ---------------------------------------------------------------------------
// Errors

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Preconditions on arguments (mismatched tangent bases, bad dimensions, ...).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// A point fell outside the requested chart's domain.
class ChartDomainError : public Error {
 public:
  using Error::Error;
};

// An ODE integration left every valid chart / the manifold's domain.
class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, double exit_time)
      : Error(what), exit_time(exit_time) {}
  double exit_time;
};

// Geodesic boundary-value solve did not converge.
class GeodesicSolveError : public Error {
 public:
  GeodesicSolveError(const std::string& what, int starts_tried, double best_residual)
      : Error(what), starts_tried(starts_tried), best_residual(best_residual) {}
  int starts_tried;
  double best_residual;
};

class OutsideInjectivityRadius : public Error {
 public:
  using Error::Error;
};

// Invalid run configuration (CLI code 3).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Non-finite cost encountered during quadrature.
class CostError : public Error {
 public:
  CostError(const std::string& what, double at_time) : Error(what), at_time(at_time) {}
  double at_time;
};

// ---------------------------------------------------------------------------
// Deterministic RNG
//
// Thin wrapper over a 64-bit SplitMix/xorshift mix with hand-rolled floating
// point conversions, so streams are identical across standard libraries.

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9E3779B97F4A7C15ull) {}

  std::uint64_t next_u64() {
    // splitmix64
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  // Standard normal via Marsaglia polar method.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    has_spare_ = true;
    return u * m;
  }

  // Uniform direction on the Euclidean unit sphere in R^n.
  Vec unit_vector(int n) {
    Vec v(n);
    double norm2;
    do {
      for (int i = 0; i < n; ++i) v[i] = normal();
      norm2 = v.squaredNorm();
    } while (norm2 < 1e-24);
    return v / std::sqrt(norm2);
  }

  // Independent child stream; deterministic in (parent seed, index).
  Rng fork(std::uint64_t index) const {
    Rng child(state_ ^ (0xD1B54A32D192ED03ull * (index + 1)));
    child.next_u64();
    return child;
  }

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// ---------------------------------------------------------------------------
// Nonnegative step function on [0, T]; used for the L^p dominating function.

class StepFunction {
 public:
  // Constant value on [0, horizon].
  static StepFunction constant(double value, double horizon) {
    StepFunction f;
    f.knots_ = {0.0, horizon};
    f.values_ = {value};
    return f;
  }

  // knots strictly increasing, one value per interval [knots[i], knots[i+1]).
  StepFunction(std::vector<double> knots, std::vector<double> values)
      : knots_(std::move(knots)), values_(std::move(values)) {
    if (knots_.size() != values_.size() + 1)
      throw ContractViolation("StepFunction: need one value per knot interval");
    for (std::size_t i = 0; i + 1 < knots_.size(); ++i)
      if (!(knots_[i] < knots_[i + 1]))
        throw ContractViolation("StepFunction: knots must be strictly increasing");
  }

  double operator()(double t) const {
    if (t <= knots_.front()) return values_.front();
    if (t >= knots_.back()) return values_.back();
    std::size_t i = 0;
    while (i + 2 < knots_.size() && t >= knots_[i + 1]) ++i;
    return values_[i];
  }

  // Exact integral over [a, b] (a <= b), constant extension outside the knots.
  double integral(double a, double b) const {
    if (b <= a) return 0.0;
    double total = 0.0;
    double lo = a;
    if (lo < knots_.front()) {
      const double hi = std::min(b, knots_.front());
      total += (hi - lo) * values_.front();
      lo = hi;
    }
    for (std::size_t i = 0; i + 1 < knots_.size() && lo < b; ++i) {
      const double seg_lo = std::max(lo, knots_[i]);
      const double seg_hi = std::min(b, knots_[i + 1]);
      if (seg_hi > seg_lo) total += (seg_hi - seg_lo) * values_[i];
    }
    if (b > knots_.back()) total += (b - std::max(a, knots_.back())) * values_.back();
    return total;
  }

  double max_value() const {
    double m = values_.front();
    for (double v : values_) m = std::max(m, v);
    return m;
  }

 private:
  StepFunction() = default;
  std::vector<double> knots_;
  std::vector<double> values_;
};

}  // namespace riemctl

#endif  // RIEMCTL_CORE_HPP
