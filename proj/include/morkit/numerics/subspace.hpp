// Copyright The morkit Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MORKIT_NUMERICS_SUBSPACE_HPP
#define MORKIT_NUMERICS_SUBSPACE_HPP

#include "morkit/numerics/decompositions.hpp"

namespace morkit
{

struct PrincipalAngles
{
  Vector angles;   // ascending, radians
  Vector cosines;  // descending, in [0, 1]
  Vector sines;    // ascending, in [0, 1]
};

// Principal angles between span(U) and span(W) in the metric of U. Both bases are
// re-orthonormalized internally, so raw spanning sets are accepted. Small angles
// come from the sines, large ones from the clamped cosines.
PrincipalAngles principal_angles(const SubspaceBasis &U, const SubspaceBasis &W);

// sin of the largest principal angle.
double subspace_gap(const SubspaceBasis &U, const SubspaceBasis &W);

// ||sin Theta(U, W)||_F.
double sin_theta_frobenius(const SubspaceBasis &U, const SubspaceBasis &W);

struct AlignmentResult
{
  Matrix rotation;  // k x k orthogonal
  double residual;  // ||target - base * rotation||, measured in the metric
};

// Orthogonal O minimizing ||target - base O|| over O(k).
AlignmentResult procrustes_align(const SubspaceBasis &target, const SubspaceBasis &base);

struct DavisKahanReport
{
  double sin_theta_f = 0.0;  // ||sin Theta||_F between leading p-eigenspaces of A and A+E
  double bound = 0.0;        // 2 ||E||_F / delta
  double e_spectral = 0.0;   // ||E||_2
  double delta = 0.0;        // lambda_p(A) - lambda_{p+1}(A)
};

// Compares the leading p-dimensional eigenspaces of symmetric A and A + E.
DavisKahanReport davis_kahan_check(const Matrix &A, const Matrix &E, Index p);

}  // namespace morkit

#endif  // MORKIT_NUMERICS_SUBSPACE_HPP
