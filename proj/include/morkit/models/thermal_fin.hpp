// Copyright The morkit Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MORKIT_MODELS_THERMAL_FIN_HPP
#define MORKIT_MODELS_THERMAL_FIN_HPP

#include "morkit/models/high_fidelity.hpp"

namespace morkit
{

// Fin proportions. The post occupies |x| <= post_half_width, 0 <= y <= height;
// subfin pair i (1-based) spans post_half_width <= |x| <= post_half_width +
// fin_length and first_fin_offset + (i-1) spacing <= y <= ... + fin_thickness.
// The root is the bottom edge of the post.
struct FinGeometry
{
  int subfins = 4;
  double post_half_width = 0.5;
  double fin_length = 2.5;
  double fin_thickness = 0.25;
  double fin_spacing = 1.0;
  double first_fin_offset = 0.75;

  double post_height() const
  {
    return first_fin_offset + (subfins - 1) * fin_spacing + fin_thickness;
  }
};

// Conductivity regions: 0 is the post, i >= 1 the i-th subfin pair.
//
// Affine terms in order: post stiffness (theta = 1), subfin stiffness i = 1..N_f
// (theta = mu_i for i < p, else 1), convective boundary mass (theta = mu_p = Bi).
// `reference` defines the metric M = A(reference); pass an empty vector for the
// default (1, ..., 1, 0.1).
HighFidelityModel build_thermal_fin(const FinGeometry &geometry, int mesh_density, Index p,
                                    ParameterVector reference = {});

// Convenience overload with default proportions.
HighFidelityModel build_thermal_fin(int subfins, int mesh_density, const ParameterVector &reference);

// Default reference parameter (1, ..., 1, 0.1) of length p.
ParameterVector thermal_fin_reference(Index p);

// Assembles A(mu) by a single element loop with the region conductivities and Biot
// number multiplied in, bypassing the affine blocks. Used to cross-check them.
SparseMatrix assemble_thermal_fin_direct(const FinGeometry &geometry, int mesh_density,
                                         const ParameterVector &mu);

}  // namespace morkit

#endif  // MORKIT_MODELS_THERMAL_FIN_HPP
