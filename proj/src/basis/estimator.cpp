// Copyright The morkit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "morkit/basis/estimator.hpp"

#include <cmath>
#include <cstring>

#include "morkit/error.hpp"

namespace morkit
{
namespace
{

constexpr std::uint64_t kFnvOffset = 1469598103934665603ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

std::uint64_t hash_bytes(std::uint64_t h, const double *data, Index count)
{
  const auto *bytes = reinterpret_cast<const unsigned char *>(data);
  const std::size_t n = static_cast<std::size_t>(count) * sizeof(double);
  for (std::size_t i = 0; i < n; ++i)
  {
    h ^= bytes[i];
    h *= kFnvPrime;
  }
  return h;
}

// Relative size below which a new representer direction is treated as already
// contained in the frame.
constexpr double kFrameDrop = 1e-13;

}  // namespace

double coercivity_lower_bound(const HighFidelityModel &model, const ParameterVector &mu)
{
  const Vector t = model.theta(mu);
  const Vector tbar = model.theta(model.reference());
  double lb = INFINITY;
  for (Index q = 0; q < t.size(); ++q)
  {
    if (!(t(q) > 0.0))
      throw NonCoercive("affine coefficient " + model.terms()[static_cast<std::size_t>(q)].name +
                        " is not positive");
    if (!(tbar(q) > 0.0))
      throw NonCoercive("reference coefficient " + model.terms()[static_cast<std::size_t>(q)].name +
                        " is not positive");
    lb = std::min(lb, t(q) / tbar(q));
  }
  return lb;
}

std::uint64_t basis_fingerprint(const Matrix &V)
{
  std::uint64_t h = kFnvOffset;
  const std::uint64_t rows = static_cast<std::uint64_t>(V.rows());
  h = hash_bytes(h, reinterpret_cast<const double *>(&rows), 1);
  for (Index j = 0; j < V.cols(); ++j)
    h = hash_bytes(h, V.col(j).data(), V.rows());
  return h;
}

ErrorEstimator::ErrorEstimator(const HighFidelityModel &model)
  : model_(&model),
    V_(model.dofs(), 0),
    AqN_(static_cast<std::size_t>(model.num_terms()), Matrix(0, 0)),
    fN_(0),
    frame_(model.dofs(), 0),
    bf_(0),
    Bq_(static_cast<std::size_t>(model.num_terms()), Matrix(0, 0))
{
  const std::uint64_t rows = static_cast<std::uint64_t>(model.dofs());
  hash_ = hash_bytes(kFnvOffset, reinterpret_cast<const double *>(&rows), 1);
  const Matrix yf = model.metric().riesz_euclidean(model.rhs());
  std::vector<Vector *> targets{&bf_};
  add_to_frame(yf, targets);
}

ErrorEstimator::ErrorEstimator(const HighFidelityModel &model, const Matrix &V) : ErrorEstimator(model)
{
  if (V.rows() != model.dofs())
    throw DimensionMismatch("basis rows differ from model size");
  for (Index j = 0; j < V.cols(); ++j)
    append(V.col(j));
}

// Orthogonalizes each column of Y against the frame (two passes), extends the frame
// with whatever is left, and returns through `targets` each column's frame
// coefficients. Stored coefficient vectors are padded with zeros for new directions.
void ErrorEstimator::add_to_frame(const Matrix &Y, std::vector<Vector *> targets)
{
  const Index k0 = frame_size_;
  if (frame_.cols() < k0 + Y.cols())
    frame_.conservativeResize(Eigen::NoChange, std::max<Index>(2 * frame_.cols(), k0 + Y.cols()));
  std::vector<Vector> coeffs;
  for (Index j = 0; j < Y.cols(); ++j)
  {
    const auto F = frame_.leftCols(frame_size_);
    Vector z = Y.col(j);
    Vector coef = Vector::Zero(frame_size_);
    for (int pass = 0; pass < 2 && frame_size_ > 0; ++pass)
    {
      const Vector c = F.transpose() * z;
      z.noalias() -= F * c;
      coef += c;
    }
    const double ref = Y.col(j).norm();
    const double zn = z.norm();
    if (ref > 0.0 && zn > kFrameDrop * ref)
    {
      frame_.col(frame_size_) = z / zn;
      ++frame_size_;
      coef.conservativeResize(coef.size() + 1);
      coef(coef.size() - 1) = zn;
    }
    coeffs.push_back(std::move(coef));
  }

  const Index k = frame_size_;
  if (k > k0)
  {
    bf_.conservativeResize(k);
    bf_.tail(k - k0).setZero();
    for (auto &B : Bq_)
    {
      const Index cols = B.cols();
      B.conservativeResize(k, cols);
      B.bottomRows(k - k0).setZero();
    }
  }
  for (Index j = 0; j < Y.cols(); ++j)
  {
    Vector &c = coeffs[static_cast<std::size_t>(j)];
    const Index old = c.size();
    c.conservativeResize(k);
    c.tail(k - old).setZero();
    *targets[static_cast<std::size_t>(j)] = c;
  }
}

void ErrorEstimator::append(const Vector &phi)
{
  if (phi.size() != model_->dofs())
    throw DimensionMismatch("basis vector length differs from model size");
  const Index n = V_.cols();
  const Index Q = model_->num_terms();

  V_.conservativeResize(Eigen::NoChange, n + 1);
  V_.col(n) = phi;
  hash_ = hash_bytes(hash_, phi.data(), phi.size());

  fN_.conservativeResize(n + 1);
  fN_(n) = phi.dot(model_->rhs());

  Matrix AqPhi(model_->dofs(), Q);
  for (Index q = 0; q < Q; ++q)
  {
    const SparseMatrix &A = model_->blocks()[static_cast<std::size_t>(q)];
    AqPhi.col(q) = A * phi;
    Matrix &R = AqN_[static_cast<std::size_t>(q)];
    R.conservativeResize(n + 1, n + 1);
    const Vector col = V_.transpose() * AqPhi.col(q);
    R.col(n) = col;
    R.row(n) = col.transpose();
  }

  const Matrix Y = model_->metric().riesz_euclidean(AqPhi);
  std::vector<Vector> coeffs(static_cast<std::size_t>(Q));
  std::vector<Vector *> targets;
  for (auto &c : coeffs)
    targets.push_back(&c);
  add_to_frame(Y, targets);
  const Index k = frame_size_;
  for (Index q = 0; q < Q; ++q)
  {
    Matrix &B = Bq_[static_cast<std::size_t>(q)];
    B.conservativeResize(k, n + 1);
    B.col(n) = coeffs[static_cast<std::size_t>(q)];
  }
}

Matrix ErrorEstimator::reduced_operator(const ParameterVector &mu) const
{
  const Vector t = model_->theta(mu);
  const Index n = size();
  Matrix A = Matrix::Zero(n, n);
  for (Index q = 0; q < t.size(); ++q)
    A += t(q) * AqN_[static_cast<std::size_t>(q)];
  return A;
}

Vector ErrorEstimator::galerkin(const ParameterVector &mu) const
{
  if (size() == 0)
    return Vector(0);
  const Matrix A = reduced_operator(mu);
  Eigen::LLT<Matrix> llt(A);
  if (llt.info() != Eigen::Success)
    throw SolveFailure("reduced operator is not positive definite");
  return llt.solve(fN_);
}

double ErrorEstimator::residual_norm(const ParameterVector &mu, const Vector &alpha) const
{
  if (alpha.size() != size())
    throw DimensionMismatch("coefficient length differs from basis size");
  Vector c = bf_;
  if (size() > 0)
  {
    const Vector t = model_->theta(mu);
    for (Index q = 0; q < t.size(); ++q)
      c.noalias() -= t(q) * (Bq_[static_cast<std::size_t>(q)] * alpha);
  }
  return c.norm();
}

ErrorEstimator::Evaluation ErrorEstimator::evaluate(const ParameterVector &mu) const
{
  Evaluation ev;
  ev.alpha_lb = coercivity_lower_bound(*model_, mu);
  ev.coefficients = galerkin(mu);
  ev.residual_dual_norm = residual_norm(mu, ev.coefficients);
  ev.delta = ev.residual_dual_norm / ev.alpha_lb;
  return ev;
}

ErrorEstimator estimator_offline(const HighFidelityModel &model, const SubspaceBasis &V)
{
  if (V.size() > 0 && V.orthonormality_defect() > 1e-8 * std::sqrt(static_cast<double>(V.size())))
    throw PreconditionViolation("estimator basis is not M-orthonormal");
  return ErrorEstimator(model, V.columns());
}

double estimator_eval(const ErrorEstimator &state, const HighFidelityModel &model,
                      const SubspaceBasis &V, const ParameterVector &mu)
{
  if (&state.model() != &model)
    throw StaleState("estimator was built for a different model");
  if (V.size() != state.size() || basis_fingerprint(V.columns()) != state.fingerprint())
    throw StaleState("basis changed since the estimator was built");
  return state.evaluate(mu).delta;
}

double residual_dual_norm(const HighFidelityModel &model, const Matrix &V, const Vector &alpha,
                          const ParameterVector &mu)
{
  Vector r = model.rhs();
  if (V.cols() > 0)
    r -= model.operator_at(mu) * (V * alpha);
  return model.metric().riesz_euclidean(r).norm();
}

}  // namespace morkit
