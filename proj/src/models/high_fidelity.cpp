// Copyright The morkit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "morkit/models/high_fidelity.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>
#include <sstream>

#include "morkit/error.hpp"

namespace morkit
{
namespace
{

SparseMatrix union_pattern(const std::vector<SparseMatrix> &blocks)
{
  if (blocks.empty())
    throw PreconditionViolation("a model needs at least one affine block");
  const Index n = blocks.front().rows();
  std::vector<Eigen::Triplet<double>> trip;
  for (const auto &B : blocks)
  {
    if (B.rows() != n || B.cols() != n)
      throw DimensionMismatch("affine blocks must share one square shape");
    for (int k = 0; k < B.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(B, k); it; ++it)
        trip.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), 0.0);
  }
  SparseMatrix P(n, n);
  P.setFromTriplets(trip.begin(), trip.end());
  P.makeCompressed();
  return P;
}

std::vector<std::vector<std::pair<Index, double>>> build_scatter(
  const std::vector<SparseMatrix> &blocks, const SparseMatrix &P)
{
  std::vector<std::vector<std::pair<Index, double>>> out(blocks.size());
  for (std::size_t q = 0; q < blocks.size(); ++q)
  {
    const SparseMatrix &B = blocks[q];
    for (int k = 0; k < B.outerSize(); ++k)
    {
      // Both matrices are column-major with sorted inner indices, so walk them together.
      SparseMatrix::InnerIterator ip(P, k);
      for (SparseMatrix::InnerIterator it(B, k); it; ++it)
      {
        while (ip && ip.row() < it.row())
          ++ip;
        const Index slot = &ip.valueRef() - P.valuePtr();
        out[q].emplace_back(slot, it.value());
      }
    }
  }
  return out;
}

SparseMatrix assemble(const SparseMatrix &P,
                      const std::vector<std::vector<std::pair<Index, double>>> &scatter,
                      const Vector &theta)
{
  SparseMatrix A = P;
  double *v = A.valuePtr();
  for (std::size_t q = 0; q < scatter.size(); ++q)
    for (const auto &[slot, val] : scatter[q])
      v[slot] += theta(static_cast<Index>(q)) * val;
  return A;
}

Vector theta_of(const std::vector<AffineTerm> &terms, const ParameterVector &mu)
{
  Vector t(static_cast<Index>(terms.size()));
  for (std::size_t q = 0; q < terms.size(); ++q)
    t(static_cast<Index>(q)) = terms[q].theta(mu);
  return t;
}

std::string describe(const ParameterVector &mu)
{
  std::ostringstream os;
  os.precision(17);
  os << "mu = (";
  for (Index i = 0; i < mu.size(); ++i)
    os << (i ? ", " : "") << mu(i);
  os << ")";
  return os.str();
}

}  // namespace

HighFidelityModel::HighFidelityModel(std::vector<SparseMatrix> blocks, std::vector<AffineTerm> terms,
                                     Vector rhs, ParameterDomain domain, ParameterVector reference,
                                     std::optional<MeshData> mesh)
  : blocks_(std::move(blocks)),
    terms_(std::move(terms)),
    rhs_(std::move(rhs)),
    domain_(std::move(domain)),
    reference_(std::move(reference)),
    mesh_(std::move(mesh)),
    pattern_(union_pattern(blocks_)),
    scatter_(build_scatter(blocks_, pattern_)),
    metric_(assemble(pattern_, scatter_, theta_of(terms_, reference_)))
{
  if (terms_.size() != blocks_.size())
    throw DimensionMismatch("affine term count differs from block count");
  if (rhs_.size() != pattern_.rows())
    throw DimensionMismatch("right-hand side length differs from block size");
  if (reference_.size() != domain_.dim())
    throw DimensionMismatch("reference parameter length differs from domain dimension");
  for (const auto &t : terms_)
    if (t.parameter >= domain_.dim())
      throw DimensionMismatch("affine term refers to a parameter outside the domain");
}

Vector HighFidelityModel::theta(const ParameterVector &mu) const
{
  if (mu.size() != num_parameters())
    throw DimensionMismatch("parameter length differs from model dimension");
  return theta_of(terms_, mu);
}

SparseMatrix HighFidelityModel::operator_at(const ParameterVector &mu) const
{
  return assemble(pattern_, scatter_, theta(mu));
}

void HighFidelityModel::fill_operator(const ParameterVector &mu, SparseMatrix &A) const
{
  const Vector t = theta(mu);
  if (A.nonZeros() != pattern_.nonZeros())
    throw DimensionMismatch("operator storage does not match the model pattern");
  double *v = A.valuePtr();
  std::fill(v, v + A.nonZeros(), 0.0);
  for (std::size_t q = 0; q < scatter_.size(); ++q)
    for (const auto &[slot, val] : scatter_[q])
      v[slot] += t(static_cast<Index>(q)) * val;
}

struct HighFidelitySolver::Impl
{
  const HighFidelityModel *model;
  SparseMatrix A;
  Eigen::SimplicialLLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> llt;
  bool ready = false;
};

HighFidelitySolver::HighFidelitySolver(const HighFidelityModel &model) : impl_(std::make_unique<Impl>())
{
  impl_->model = &model;
  impl_->A = model.pattern();
  impl_->llt.analyzePattern(impl_->A);
}

HighFidelitySolver::~HighFidelitySolver() = default;
HighFidelitySolver::HighFidelitySolver(HighFidelitySolver &&) noexcept = default;

void HighFidelitySolver::factorize(const ParameterVector &mu)
{
  impl_->ready = false;
  impl_->model->fill_operator(mu, impl_->A);
  impl_->llt.factorize(impl_->A);
  if (impl_->llt.info() != Eigen::Success)
    throw SolveFailure("factorization failed at " + describe(mu));

  // A singular positive semidefinite matrix can factor "successfully" with a
  // roundoff-sized last pivot; compare every pivot with the largest diagonal entry.
  const SparseMatrix &L = impl_->llt.matrixL().nestedExpression();
  const Vector Ad = impl_->A.diagonal();
  const double dmax = Ad.cwiseAbs().maxCoeff();
  double worst = INFINITY;
  for (Index k = 0; k < L.outerSize(); ++k)
  {
    const double piv = L.coeff(k, k);
    worst = std::min(worst, piv * piv / dmax);
  }
  if (!(worst > 1e-13))
    throw SolveFailure("operator is numerically singular (relative pivot " + std::to_string(worst) +
                       ") at " + describe(mu));
  mu_ = mu;
  impl_->ready = true;
}

Vector HighFidelitySolver::solve(const Vector &b) const
{
  if (!impl_->ready)
    throw StaleState("solver has no valid factorization");
  if (b.size() != impl_->A.rows())
    throw DimensionMismatch("right-hand side length differs from model size");
  Vector x = impl_->llt.solve(b);
  const double bn = b.norm();
  if (bn == 0.0)
    return Vector::Zero(b.size());
  double res = (impl_->A.selfadjointView<Eigen::Lower>() * x - b).norm();
  if (res > 1e-10 * bn)
  {
    // One step of iterative refinement before giving up.
    x += impl_->llt.solve(b - impl_->A.selfadjointView<Eigen::Lower>() * x);
    res = (impl_->A.selfadjointView<Eigen::Lower>() * x - b).norm();
  }
  if (!(res <= 1e-10 * bn))
    throw SolveFailure("residual " + std::to_string(res / bn) + " above tolerance at " + describe(mu_));
  return x;
}

Vector HighFidelitySolver::state() const { return solve(impl_->model->rhs()); }

Vector HighFidelitySolver::sensitivity(Index i, const Vector &u) const
{
  const auto &model = *impl_->model;
  if (i < 0 || i >= model.num_parameters())
    throw DimensionMismatch("parameter index out of range");
  Vector rhs = Vector::Zero(model.dofs());
  for (Index q = 0; q < model.num_terms(); ++q)
  {
    const double d = model.terms()[static_cast<std::size_t>(q)].dtheta(i);
    if (d != 0.0)
      rhs -= d * (model.blocks()[static_cast<std::size_t>(q)] * u);
  }
  if (rhs.squaredNorm() == 0.0)
    return rhs;
  return solve(rhs);
}

Vector HighFidelitySolver::second_sensitivity(Index i, Index j, const Vector &du_i,
                                              const Vector &du_j) const
{
  const auto &model = *impl_->model;
  if (i < 0 || j < 0 || i >= model.num_parameters() || j >= model.num_parameters())
    throw DimensionMismatch("parameter index out of range");
  Vector rhs = Vector::Zero(model.dofs());
  for (Index q = 0; q < model.num_terms(); ++q)
  {
    const auto &term = model.terms()[static_cast<std::size_t>(q)];
    const auto &B = model.blocks()[static_cast<std::size_t>(q)];
    if (const double di = term.dtheta(i); di != 0.0)
      rhs -= di * (B * du_j);
    if (const double dj = term.dtheta(j); dj != 0.0)
      rhs -= dj * (B * du_i);
  }
  if (rhs.squaredNorm() == 0.0)
    return rhs;
  return solve(rhs);
}

Vector solve_high_fidelity(const HighFidelityModel &model, const ParameterVector &mu)
{
  HighFidelitySolver s(model);
  s.factorize(mu);
  return s.state();
}

Vector solve_sensitivity(const HighFidelityModel &model, const ParameterVector &mu, Index i,
                         const Vector &u)
{
  HighFidelitySolver s(model);
  s.factorize(mu);
  return s.sensitivity(i, u);
}

Vector solve_second_sensitivity(const HighFidelityModel &model, const ParameterVector &mu, Index i,
                                Index j, const Vector &du_i, const Vector &du_j)
{
  HighFidelitySolver s(model);
  s.factorize(mu);
  return s.second_sensitivity(i, j, du_i, du_j);
}

}  // namespace morkit
