#pragma once

#include <cmath>
#include <string>

#include <Eigen/Core>

#include "aggtree/error.hpp"

namespace aggtree {

/// Rate of moving from a tree scoring phi_prev to one scoring phi_next:
/// e^{-alpha} e^{beta phi_next} / (e^{beta phi_prev} + e^{beta phi_next}),
/// evaluated as a logistic in the difference so large scores cannot overflow.
template <typename Scalar>
Scalar transition_prob(Scalar phi_prev, Scalar phi_next, Scalar alpha, Scalar beta) {
  using std::exp;
  const Scalar d = beta * (phi_prev - phi_next);
  const Scalar logistic = d > Scalar(0) ? exp(-d) / (Scalar(1) + exp(-d)) : Scalar(1) / (Scalar(1) + exp(d));
  return exp(-alpha) * logistic;
}

/// Softmax of beta * phi: the stationary law over trees.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> stationary_distribution(
    const Eigen::MatrixBase<Derived>& phis, typename Derived::Scalar beta) {
  using Scalar = typename Derived::Scalar;
  const Scalar top = phis.maxCoeff();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> p = (beta * (phis.array() - top)).exp().matrix();
  return p / p.sum();
}

/// (1/beta) log sum_psi exp(beta phi_psi), which upper-approximates max phi.
template <typename Derived>
typename Derived::Scalar log_sum_exp_value(const Eigen::MatrixBase<Derived>& phis,
                                           typename Derived::Scalar beta) {
  using std::log;
  const auto top = phis.maxCoeff();
  return top + log((beta * (phis.array() - top)).exp().sum()) / beta;
}

/// Worst-case distance between the log-sum-exp value and max phi.
template <typename Scalar>
Scalar approximation_gap(long long num_states, Scalar beta) {
  using std::log;
  return log(static_cast<Scalar>(num_states)) / beta;
}

/// Optimality loss from estimation errors bounded by delta_max:
/// 2 phi_max (1 - e^{-2 beta delta_max}).
template <typename Scalar>
Scalar perturbation_bound(Scalar phi_max, Scalar beta, Scalar delta_max) {
  using std::expm1;
  return Scalar(2) * phi_max * -expm1(Scalar(-2) * beta * delta_max);
}

/// Half the L1 distance between two distributions.
template <typename DerivedP, typename DerivedQ>
typename DerivedP::Scalar tv_distance(const Eigen::MatrixBase<DerivedP>& p, const Eigen::MatrixBase<DerivedQ>& q) {
  if (p.size() != q.size()) {
    throw Error(ErrorKind::LengthMismatch,
                "distributions of length " + std::to_string(p.size()) + " and " + std::to_string(q.size()));
  }
  return (p - q).cwiseAbs().sum() / 2;
}

}  // namespace aggtree
