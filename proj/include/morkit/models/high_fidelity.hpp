// Copyright The morkit Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MORKIT_MODELS_HIGH_FIDELITY_HPP
#define MORKIT_MODELS_HIGH_FIDELITY_HPP

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "morkit/models/parameters.hpp"
#include "morkit/numerics/inner_product.hpp"

namespace morkit
{

// One term theta_q(mu) A_q of the affine expansion. The coefficient is either the
// constant 1 or a single parameter component, which covers every model shipped
// here; second derivatives therefore vanish.
struct AffineTerm
{
  std::string name;
  int parameter = -1;  // index into mu, or -1 for the constant 1

  double theta(const ParameterVector &mu) const { return parameter < 0 ? 1.0 : mu(parameter); }
  double dtheta(Index i) const { return parameter >= 0 && parameter == i ? 1.0 : 0.0; }
};

// Triangulation metadata kept for export and diagnostics.
struct MeshData
{
  Matrix nodes;                              // 2 x n_nodes
  std::vector<std::array<int, 3>> triangles;  // node indices
  std::vector<int> triangle_region;           // 0 = post, i = subfin pair i
  std::vector<std::array<int, 2>> ext_edges;  // convective boundary
  std::vector<std::array<int, 2>> root_edges;
  double h_max = 0.0;
};

class HighFidelityModel
{
public:
  HighFidelityModel(std::vector<SparseMatrix> blocks, std::vector<AffineTerm> terms, Vector rhs,
                    ParameterDomain domain, ParameterVector reference,
                    std::optional<MeshData> mesh = std::nullopt);

  Index dofs() const { return rhs_.size(); }
  Index num_parameters() const { return domain_.dim(); }
  Index num_terms() const { return static_cast<Index>(blocks_.size()); }

  const std::vector<SparseMatrix> &blocks() const { return blocks_; }
  const std::vector<AffineTerm> &terms() const { return terms_; }
  const Vector &rhs() const { return rhs_; }
  const ParameterDomain &domain() const { return domain_; }
  const ParameterVector &reference() const { return reference_; }
  const InnerProduct &metric() const { return metric_; }
  const std::optional<MeshData> &mesh() const { return mesh_; }

  Vector theta(const ParameterVector &mu) const;

  // A(mu) = sum_q theta_q(mu) A_q on a fixed sparsity pattern (the union of all
  // blocks), so that symbolic factorizations can be reused across parameters.
  SparseMatrix operator_at(const ParameterVector &mu) const;

  // The union pattern with every stored value equal to zero.
  const SparseMatrix &pattern() const { return pattern_; }

  // Writes A(mu) values into a matrix that has pattern().
  void fill_operator(const ParameterVector &mu, SparseMatrix &A) const;

private:
  std::vector<SparseMatrix> blocks_;
  std::vector<AffineTerm> terms_;
  Vector rhs_;
  ParameterDomain domain_;
  ParameterVector reference_;
  std::optional<MeshData> mesh_;
  SparseMatrix pattern_;
  std::vector<std::vector<std::pair<Index, double>>> scatter_;  // per block: (slot, value)
  InnerProduct metric_;
};

// Sparse Cholesky solver bound to one model. The symbolic analysis is shared by
// every parameter value; each factorize() call replaces the numeric factor. Not
// safe for concurrent use; create one per worker.
class HighFidelitySolver
{
public:
  explicit HighFidelitySolver(const HighFidelityModel &model);
  ~HighFidelitySolver();
  HighFidelitySolver(HighFidelitySolver &&) noexcept;

  // Throws SolveFailure if A(mu) is not numerically positive definite.
  void factorize(const ParameterVector &mu);
  const ParameterVector &current_parameter() const { return mu_; }

  // Solves A(mu) x = b with a residual check at 1e-10 relative.
  Vector solve(const Vector &b) const;

  Vector state() const;
  Vector sensitivity(Index i, const Vector &u) const;
  Vector second_sensitivity(Index i, Index j, const Vector &du_i, const Vector &du_j) const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  ParameterVector mu_;
};

// One-shot conveniences. Each builds a fresh solver.
Vector solve_high_fidelity(const HighFidelityModel &model, const ParameterVector &mu);
Vector solve_sensitivity(const HighFidelityModel &model, const ParameterVector &mu, Index i,
                         const Vector &u);
Vector solve_second_sensitivity(const HighFidelityModel &model, const ParameterVector &mu, Index i,
                                Index j, const Vector &du_i, const Vector &du_j);

}  // namespace morkit

#endif  // MORKIT_MODELS_HIGH_FIDELITY_HPP
