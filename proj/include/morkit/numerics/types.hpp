// Copyright The morkit Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MORKIT_NUMERICS_TYPES_HPP
#define MORKIT_NUMERICS_TYPES_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace morkit
{

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

}  // namespace morkit

#endif  // MORKIT_NUMERICS_TYPES_HPP
