#pragma once

// Pairwise relative-ranking machinery: matrix construction from attribute
// values, principal eigenvector extraction, weighted aggregation and the
// Saaty consistency diagnostic. Everything here is templated on the scalar
// type and operates on plain Eigen dense objects.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rankfarm/error.hpp"

namespace rankfarm {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Impact direction of a QoS attribute.
enum class Tendency { Positive, Negative, Close, Exact };

/// Smoothing for close/exact tendencies. The deviation of service k is
/// D_k + relative * |v_req|, or D_k + absolute when v_req is zero.
template <typename Scalar = double>
struct Smoothing {
  Scalar relative = Scalar(1e-9);
  Scalar absolute = Scalar(1e-12);
};

template <typename Scalar = double>
struct PowerIterationOptions {
  Scalar tol = Scalar(1e-12);
  int max_iter = 1000;
};

namespace detail {

template <typename Scalar>
Vector<Scalar> deviations(std::span<const Scalar> values, Tendency tendency, Scalar v_req,
                          const Smoothing<Scalar>& smoothing) {
  const Scalar eps = v_req == Scalar(0) ? smoothing.absolute : smoothing.relative * std::abs(v_req);
  Vector<Scalar> d(static_cast<Eigen::Index>(values.size()));
  for (std::size_t k = 0; k < values.size(); ++k) {
    Scalar raw;
    if (tendency == Tendency::Close) {
      raw = std::abs(values[k] - v_req);
    } else {
      raw = values[k] == v_req ? Scalar(0) : Scalar(1);
    }
    d(static_cast<Eigen::Index>(k)) = raw + eps;
  }
  return d;
}

}  // namespace detail

/// Builds the NR x NR relative ranking matrix for one attribute.
///
/// Positive tendency: entry(m, n) = V_m / V_n. Negative: V_n / V_m.
/// Close/exact rank by the smoothed deviation from the requested value,
/// lower deviation being better, so entry(m, n) = D_n / D_m.
///
/// Throws NonPositiveValue for ratio tendencies with a value <= 0 and
/// MissingVReq for close/exact without a requested value.
template <typename Scalar>
Matrix<Scalar> build_rrrm(std::span<const Scalar> values, Tendency tendency,
                          std::optional<Scalar> v_req = std::nullopt,
                          const Smoothing<Scalar>& smoothing = {}) {
  const auto nr = static_cast<Eigen::Index>(values.size());
  if (nr == 0) throw Error(ErrorCode::DimensionMismatch, "relative ranking matrix needs at least one service");

  // Ratio tendencies compare the raw values; close/exact compare deviations
  // where lower is better, so both negative and deviation forms are V_n / V_m.
  Vector<Scalar> basis(nr);
  bool higher_is_better = false;
  switch (tendency) {
    case Tendency::Positive:
    case Tendency::Negative:
      for (Eigen::Index k = 0; k < nr; ++k) {
        const Scalar v = values[static_cast<std::size_t>(k)];
        if (!std::isfinite(static_cast<double>(v)) || !(v > Scalar(0))) {
          throw Error(ErrorCode::NonPositiveValue,
                      "value " + std::to_string(static_cast<double>(v)) + " at position " + std::to_string(k) +
                          " must be finite and > 0");
        }
        basis(k) = v;
      }
      higher_is_better = tendency == Tendency::Positive;
      break;
    case Tendency::Close:
    case Tendency::Exact:
      if (!v_req) throw Error(ErrorCode::MissingVReq, "close/exact tendency requires a requested value");
      basis = detail::deviations(values, tendency, *v_req, smoothing);
      break;
  }

  Matrix<Scalar> m(nr, nr);
  for (Eigen::Index i = 0; i < nr; ++i) {
    for (Eigen::Index j = 0; j < nr; ++j) {
      if (i == j) {
        m(i, j) = Scalar(1);
      } else {
        m(i, j) = higher_is_better ? basis(i) / basis(j) : basis(j) / basis(i);
      }
    }
  }
  return m;
}

template <typename Scalar>
Matrix<Scalar> build_rrrm(const std::vector<Scalar>& values, Tendency tendency,
                          std::optional<Scalar> v_req = std::nullopt,
                          const Smoothing<Scalar>& smoothing = {}) {
  return build_rrrm(std::span<const Scalar>(values), tendency, v_req, smoothing);
}

/// Dominant eigenvector of a positive matrix by power iteration from the
/// uniform vector, L1-normalized every step. Stops once successive iterates
/// differ by less than tol in the max-norm.
template <typename Derived>
Vector<typename Derived::Scalar> principal_eigenvector(
    const Eigen::MatrixBase<Derived>& m, const PowerIterationOptions<typename Derived::Scalar>& opts = {}) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = m.rows();
  if (n == 0 || m.cols() != n) throw Error(ErrorCode::DimensionMismatch, "eigenvector needs a non-empty square matrix");

  Vector<Scalar> x = Vector<Scalar>::Constant(n, Scalar(1) / Scalar(n));
  Scalar residual = std::numeric_limits<Scalar>::infinity();
  for (int iter = 0; iter < opts.max_iter; ++iter) {
    Vector<Scalar> next = m * x;
    next /= next.sum();
    residual = (next - x).cwiseAbs().maxCoeff();
    x = std::move(next);
    if (residual < opts.tol) return x;
  }
  throw Error(ErrorCode::NoConvergence, "power iteration did not converge after " + std::to_string(opts.max_iter) +
                                            " iterations (residual " + std::to_string(static_cast<double>(residual)) +
                                            ")");
}

/// Weighted sum of same-length child vectors. Weights must be positive and
/// sum to 1.
template <typename Scalar>
Vector<Scalar> aggregate_level(std::span<const Vector<Scalar>> children, std::span<const Scalar> weights,
                               Scalar weight_tol = Scalar(1e-9)) {
  if (children.empty()) throw Error(ErrorCode::DimensionMismatch, "aggregation needs at least one child vector");
  if (children.size() != weights.size()) {
    throw Error(ErrorCode::DimensionMismatch, std::to_string(children.size()) + " children but " +
                                                  std::to_string(weights.size()) + " weights");
  }
  Scalar total(0);
  for (Scalar w : weights) {
    if (!(w > Scalar(0))) throw Error(ErrorCode::WeightError, "aggregation weight must be > 0");
    total += w;
  }
  if (std::abs(total - Scalar(1)) > weight_tol) {
    throw Error(ErrorCode::WeightError, "aggregation weights sum to " + std::to_string(static_cast<double>(total)));
  }
  const Eigen::Index n = children.front().size();
  Vector<Scalar> out = Vector<Scalar>::Zero(n);
  for (std::size_t c = 0; c < children.size(); ++c) {
    if (children[c].size() != n) throw Error(ErrorCode::DimensionMismatch, "child vectors differ in length");
    out += weights[c] * children[c];
  }
  return out;
}

/// Saaty random index for matrix orders 3..10; 0 outside that table.
template <typename Scalar = double>
Scalar random_index(Eigen::Index n) {
  static constexpr double kTable[] = {0.0, 0.0, 0.0, 0.58, 0.90, 1.12, 1.24, 1.32, 1.41, 1.45, 1.49};
  if (n < 3 || n > 10) return Scalar(0);
  return Scalar(kTable[n]);
}

/// Estimates lambda_max as the mean of (A w)_i / w_i over the principal
/// eigenvector w.
template <typename Derived>
typename Derived::Scalar principal_eigenvalue(const Eigen::MatrixBase<Derived>& m,
                                              const PowerIterationOptions<typename Derived::Scalar>& opts = {}) {
  auto w = principal_eigenvector(m, opts);
  return ((m * w).array() / w.array()).mean();
}

/// CR = (lambda_max - n) / (n - 1) / RI(n). Zero for n <= 2.
/// Orders above 10 reuse RI(10).
template <typename Derived>
typename Derived::Scalar consistency_ratio(const Eigen::MatrixBase<Derived>& m,
                                           const PowerIterationOptions<typename Derived::Scalar>& opts = {}) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = m.rows();
  if (n <= 2) return Scalar(0);
  const Scalar lambda = principal_eigenvalue(m, opts);
  const Scalar ci = (lambda - Scalar(n)) / Scalar(n - 1);
  return ci / random_index<Scalar>(std::min<Eigen::Index>(n, 10));
}

}  // namespace rankfarm
