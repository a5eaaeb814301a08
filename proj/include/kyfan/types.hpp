#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace kyfan {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using Index = Eigen::Index;
using IndexList = std::vector<int>;

/// Element (t, X) of R x R^{m x n}. The Ky Fan order k is passed separately.
struct ConePoint {
  double t = 0.0;
  Mat X;

  ConePoint() = default;
  ConePoint(double t_, Mat X_) : t(t_), X(std::move(X_)) {}

  static ConePoint zero(Index m, Index n) { return {0.0, Mat::Zero(m, n)}; }

  Index rows() const { return X.rows(); }
  Index cols() const { return X.cols(); }

  ConePoint& operator+=(const ConePoint& o) {
    t += o.t;
    X += o.X;
    return *this;
  }
  ConePoint& operator-=(const ConePoint& o) {
    t -= o.t;
    X -= o.X;
    return *this;
  }
  ConePoint& operator*=(double s) {
    t *= s;
    X *= s;
    return *this;
  }
};

inline ConePoint operator+(ConePoint a, const ConePoint& b) { return a += b; }
inline ConePoint operator-(ConePoint a, const ConePoint& b) { return a -= b; }
inline ConePoint operator*(double s, ConePoint a) { return a *= s; }
inline ConePoint operator-(ConePoint a) { return a *= -1.0; }

inline double inner(const ConePoint& a, const ConePoint& b) {
  return a.t * b.t + (a.X.array() * b.X.array()).sum();
}
inline double norm(const ConePoint& a) { return std::sqrt(inner(a, a)); }
inline bool all_finite(const ConePoint& a) {
  return std::isfinite(a.t) && a.X.allFinite();
}

/// Malformed arguments: shape mismatch, k out of range, non-finite data.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine failed to reach its target.
class NumericFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& msg) {
  if (!ok) throw InvalidInput(msg);
}

}  // namespace kyfan
