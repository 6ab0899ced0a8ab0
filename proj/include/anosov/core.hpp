// Shared vector types, error kinds and small numeric helpers.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace anosov {

inline constexpr int kMaxDim = 6;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;
using IVec = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using IMat = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

enum class ErrorKind {
  InvalidArgument,
  NotHyperbolic,
  NotUnimodular,
  NotDiagonalizable,
  WindowTooShort,
  PrecisionUnreachable,
  StrengthTooWeak,
  C0Violation,
  NoFiniteM,
  Overflow,
  RefinementFailed,
  PeriodMismatch,
  ExplosionGuard,
  BudgetExceeded,
  NonpositiveHeight,
  Unimplemented,
  ConfigError,
  IoError,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NotHyperbolic: return "NotHyperbolic";
    case ErrorKind::NotUnimodular: return "NotUnimodular";
    case ErrorKind::NotDiagonalizable: return "NotDiagonalizable";
    case ErrorKind::WindowTooShort: return "WindowTooShort";
    case ErrorKind::PrecisionUnreachable: return "PrecisionUnreachable";
    case ErrorKind::StrengthTooWeak: return "StrengthTooWeak";
    case ErrorKind::C0Violation: return "C0Violation";
    case ErrorKind::NoFiniteM: return "NoFiniteM";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::RefinementFailed: return "RefinementFailed";
    case ErrorKind::PeriodMismatch: return "PeriodMismatch";
    case ErrorKind::ExplosionGuard: return "ExplosionGuard";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::NonpositiveHeight: return "NonpositiveHeight";
    case ErrorKind::Unimplemented: return "Unimplemented";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) throw Error(kind, what);
}

// Reduce each coordinate to [0,1).
inline Vec reduce(const Vec& x) {
  Vec y(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    double v = x[i] - std::floor(x[i]);
    if (v >= 1.0) v = 0.0;
    y[i] = v;
  }
  return y;
}

// Nearest-integer wrap into [-1/2, 1/2].
inline Vec wrap(const Vec& d) {
  Vec y(d.size());
  for (Eigen::Index i = 0; i < d.size(); ++i) y[i] = d[i] - std::nearbyint(d[i]);
  return y;
}

inline Vec to_vec(const std::vector<double>& v) {
  Vec x(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) x[static_cast<Eigen::Index>(i)] = v[i];
  return x;
}

inline std::vector<double> to_std(const Vec& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace anosov
