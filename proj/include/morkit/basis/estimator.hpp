// Copyright The morkit Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MORKIT_BASIS_ESTIMATOR_HPP
#define MORKIT_BASIS_ESTIMATOR_HPP

#include <cstdint>
#include <vector>

#include "morkit/basis/reduced_basis.hpp"

namespace morkit
{

// alpha_LB(mu) = min_q theta_q(mu) / theta_q(reference). Throws NonCoercive if some
// theta_q(mu) <= 0.
double coercivity_lower_bound(const HighFidelityModel &model, const ParameterVector &mu);

// Byte hash of the basis columns, used to detect a basis that changed after the
// estimator was built.
std::uint64_t basis_fingerprint(const Matrix &V);

// Residual-based a posteriori estimator
//   Delta_n(mu) = ||f - A(mu) V alpha(mu)||_{X'} / alpha_LB(mu)
// with alpha(mu) the Galerkin coefficients.
//
// Residual components (f and A_q phi_j) are mapped to the Euclidean coordinates of
// their Riesz representers and kept as coefficients in an orthonormal frame that
// grows with the basis. The online residual is then a short coefficient vector whose
// Euclidean norm is the dual norm, so no Gram-matrix cancellation occurs.
class ErrorEstimator
{
public:
  explicit ErrorEstimator(const HighFidelityModel &model);
  ErrorEstimator(const HighFidelityModel &model, const Matrix &V);

  // Adds one basis vector (assumed M-orthonormal to the previous ones).
  void append(const Vector &phi);

  Index size() const { return static_cast<Index>(V_.cols()); }
  Index frame_size() const { return frame_size_; }
  const Matrix &basis() const { return V_; }
  std::uint64_t fingerprint() const { return hash_; }
  const HighFidelityModel &model() const { return *model_; }

  struct Evaluation
  {
    double delta = 0.0;
    double residual_dual_norm = 0.0;
    double alpha_lb = 0.0;
    Vector coefficients;  // Galerkin solution
  };

  Evaluation evaluate(const ParameterVector &mu) const;

  // ||f - A(mu) V alpha||_{X'} from the offline data, for arbitrary coefficients.
  double residual_norm(const ParameterVector &mu, const Vector &alpha) const;

  // Galerkin coefficients alone.
  Vector galerkin(const ParameterVector &mu) const;
  // Reduced operator sum_q theta_q V^T A_q V and load V^T f.
  Matrix reduced_operator(const ParameterVector &mu) const;
  const Vector &reduced_rhs() const { return fN_; }

private:
  void add_to_frame(const Matrix &Y, std::vector<Vector *> targets);

  const HighFidelityModel *model_;
  Matrix V_;
  std::vector<Matrix> AqN_;  // V^T A_q V
  Vector fN_;                // V^T f
  Matrix frame_;             // Euclidean orthonormal columns (first frame_size_ used)
  Index frame_size_ = 0;
  Vector bf_;                // frame coefficients of the representer of f
  std::vector<Matrix> Bq_;   // frame coefficients of the representers of A_q phi_j
  std::uint64_t hash_;
};

ErrorEstimator estimator_offline(const HighFidelityModel &model, const SubspaceBasis &V);

// Throws StaleState when V is not the basis the state was built for.
double estimator_eval(const ErrorEstimator &state, const HighFidelityModel &model,
                      const SubspaceBasis &V, const ParameterVector &mu);

// Dual norm of f - A(mu) V alpha computed directly from the full operator.
double residual_dual_norm(const HighFidelityModel &model, const Matrix &V, const Vector &alpha,
                          const ParameterVector &mu);

}  // namespace morkit

#endif  // MORKIT_BASIS_ESTIMATOR_HPP
