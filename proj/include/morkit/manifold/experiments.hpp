// Copyright The morkit Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MORKIT_MANIFOLD_EXPERIMENTS_HPP
#define MORKIT_MANIFOLD_EXPERIMENTS_HPP

#include <string>
#include <vector>

#include "morkit/manifold/chart.hpp"
#include "morkit/nonlinear/features.hpp"

namespace morkit
{

struct SlopeFit
{
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  Index points_used = 0;
};

// Ordinary least squares on (log r, log value), skipping radii below r_floor and
// non-positive values. Throws TooFewPoints with fewer than 3 usable points.
SlopeFit loglog_slope_fit(const std::vector<double> &radii, const std::vector<double> &values,
                          double r_floor = 0.0);

// Radii below which roundoff dominates: r^2 < 1e-14 for first-order quantities and
// r^4 < 1e-14 for second-order ones.
double first_order_floor();
double second_order_floor();

struct ConvergenceSeries
{
  std::string name;
  std::vector<double> radii;   // strictly decreasing
  std::vector<double> values;
  std::vector<double> bounds;  // optional per-radius upper bounds (same length or empty)
  SlopeFit fit;
};

// Geometric radii 2^-first ... 2^-last (first < last).
std::vector<double> dyadic_radii(int first = 2, int last = 12);

// ||sin Theta||_F between the first q weighted-SVD modes of S^r and the tangent
// reference. bounds hold 2 ||C_r - C_0||_F / delta_q with C_r = S^r S^rT / r^2 and
// C_0 = A_0 A_0^T in Euclidean metric coordinates.
ConvergenceSeries tangent_convergence_experiment(const LocalChart &chart, const std::vector<double> &radii);

// Filtered: first k modes of (I - Pi_0) S^r against the curvature reference (k its
// observed rank). Unfiltered: modes q+1..q+k of S^r.
ConvergenceSeries curvature_convergence_experiment(const LocalChart &chart, const std::vector<double> &radii,
                                                   bool filtered);

// ||U1^r - U1* O^r||_F with O^r the Procrustes rotation.
ConvergenceSeries alignment_experiment(const LocalChart &chart, const std::vector<double> &radii);

// sigma_q / sigma_{q+1} of S^r for each radius.
std::vector<double> singular_gap_ratios(const LocalChart &chart, const std::vector<double> &radii);

// Number of leading singular values before the largest consecutive ratio above `gap`
// (0 when no ratio exceeds it).
Index detect_dimension(const Vector &singular_values, double gap = 100.0);

// Empirical chart at radius r: modes of S^r used by the coefficient maps.
class EmpiricalChart
{
public:
  // Without a tangent reference only the unfiltered blocks are formed. `k` is the
  // second-block size (m when negative).
  EmpiricalChart(const LocalChart &chart, double r);
  EmpiricalChart(const LocalChart &chart, double r, const SubspaceBasis &tangent_ref, Index k = -1);

  double radius() const { return r_; }
  const Matrix &snapshots() const { return S_; }
  const Vector &singular_values() const { return sigma_; }
  const SubspaceBasis &first_block() const { return U1_; }
  // First k modes of (I - Pi_0) S^r, Pi_0 the projector onto the tangent reference.
  const SubspaceBasis &filtered_second_block() const { return U2f_; }
  // Modes q+1..q+k of S^r.
  const SubspaceBasis &unfiltered_second_block() const { return U2u_; }

  // alpha_(1)^r(nu) = U1^T M (u(mu_star + r E nu) - u_star), one solve.
  Vector coefficient_map(const Vector &nu) const;
  // Coefficients of the sample columns.
  Matrix first_coefficients() const;
  Matrix filtered_second_coefficients() const;
  Matrix unfiltered_second_coefficients() const;

private:
  void build_second_blocks(const SubspaceBasis *tangent_ref, Index k);

  const LocalChart *chart_;
  double r_;
  Matrix S_;
  Vector sigma_;
  SubspaceBasis U1_;
  SubspaceBasis U2f_;
  SubspaceBasis U2u_;
};

struct CoefficientCheck
{
  double r = 0.0;
  double max_residual = 0.0;  // max_i ||alpha(nu_i) - O^T A* r nu_i||
  double scaled = 0.0;        // max_residual / r^2
  double linear_fit_residual = 0.0;  // residual of a linear least-squares fit alpha ~ B nu
};

// Compares the coefficient map on the chart's own directions with the linearization
// O^T A* r nu, A* = U1*^T M J_U(0).
CoefficientCheck coefficient_map_check(const LocalChart &chart, double r);

struct JacobianReport
{
  double min_singular_value = 0.0;          // min over nu of sigma_min(J_alpha(nu))
  double largest_min_singular_value = 0.0;  // max over nu of sigma_min(J_alpha(nu))
  double injectivity_margin = 0.0;
  Index pairs = 0;
};

// sigma_min of J_alpha(nu) = U1^T M J_U(r nu) over `points` sampled nu (the first is
// nu = 0), and
// min ||alpha(nu1) - alpha(nu2)|| / ||nu1 - nu2|| over `pairs` sampled pairs.
JacobianReport jacobian_condition_check(const LocalChart &chart, double r, Index points, Index pairs,
                                        std::uint64_t seed);

// Max column residual of the least-squares fit of second-block coefficients on features
// of the first-block coefficients, per radius.
ConvergenceSeries quadratic_law_fit(const LocalChart &chart, const std::vector<double> &radii,
                                    FeatureKind features = FeatureKind::HomogeneousQuadratic,
                                    bool filtered = true);

}  // namespace morkit

#endif  // MORKIT_MANIFOLD_EXPERIMENTS_HPP
