// Copyright The morkit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "morkit/manifold/experiments.hpp"

#include <cmath>

#include "morkit/error.hpp"
#include "morkit/nonlinear/regression.hpp"
#include "morkit/numerics/random.hpp"
#include "morkit/numerics/subspace.hpp"

namespace morkit
{

SlopeFit loglog_slope_fit(const std::vector<double> &radii, const std::vector<double> &values, double r_floor)
{
  if (radii.size() != values.size())
    throw DimensionMismatch("radii and values differ in length");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < radii.size(); ++i)
    if (radii[i] >= r_floor && radii[i] > 0.0 && values[i] > 0.0 && std::isfinite(values[i]))
    {
      x.push_back(std::log(radii[i]));
      y.push_back(std::log(values[i]));
    }
  const std::size_t n = x.size();
  if (n < 3)
    throw TooFewPoints(std::to_string(n) + " usable points for a slope fit");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i)
  {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i)
  {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0)
    throw TooFewPoints("all usable radii coincide");
  SlopeFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  f.points_used = static_cast<Index>(n);
  return f;
}

double first_order_floor() { return std::sqrt(1e-14); }
double second_order_floor() { return std::pow(1e-14, 0.25); }

std::vector<double> dyadic_radii(int first, int last)
{
  if (first >= last)
    throw PreconditionViolation("radius exponents must increase");
  std::vector<double> r;
  for (int k = first; k <= last; ++k)
    r.push_back(std::ldexp(1.0, -k));
  return r;
}

namespace
{

void check_radii(const std::vector<double> &radii)
{
  if (radii.size() < 4)
    throw PreconditionViolation("convergence experiments need at least 4 radii");
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] < radii[i - 1]))
      throw PreconditionViolation("radii must be strictly decreasing");
  if (radii.front() / radii.back() < std::pow(10.0, 1.5))
    throw PreconditionViolation("radii must span at least 1.5 decades");
}

void fit_or_leave(ConvergenceSeries &s, double floor)
{
  try
  {
    s.fit = loglog_slope_fit(s.radii, s.values, floor);
  }
  catch (const TooFewPoints &)
  {
    s.fit = SlopeFit{};
  }
}

Index second_block_size(const LocalChart &chart)
{
  return curvature_reference(chart, true).observed_rank;
}

double max_column_norm(const Matrix &X)
{
  return X.cols() ? X.colwise().norm().maxCoeff() : 0.0;
}

}  // namespace

EmpiricalChart::EmpiricalChart(const LocalChart &chart, double r)
  : chart_(&chart),
    r_(r),
    S_(scaled_snapshots(chart, r)),
    U1_(SubspaceBasis::empty(chart.model().metric())),
    U2f_(SubspaceBasis::empty(chart.model().metric())),
    U2u_(SubspaceBasis::empty(chart.model().metric()))
{
  build_second_blocks(nullptr, -1);
}

EmpiricalChart::EmpiricalChart(const LocalChart &chart, double r, const SubspaceBasis &tangent_ref, Index k)
  : chart_(&chart),
    r_(r),
    S_(scaled_snapshots(chart, r)),
    U1_(SubspaceBasis::empty(chart.model().metric())),
    U2f_(SubspaceBasis::empty(chart.model().metric())),
    U2u_(SubspaceBasis::empty(chart.model().metric()))
{
  build_second_blocks(&tangent_ref, k);
}

void EmpiricalChart::build_second_blocks(const SubspaceBasis *tangent_ref, Index k)
{
  const InnerProduct &metric = chart_->model().metric();
  const Index q = chart_->q();
  if (S_.cols() <= q)
    throw PreconditionViolation("chart needs more samples than its dimension");
  const WeightedSvd svd = weighted_svd(S_, metric);
  sigma_ = svd.singular_values;
  U1_ = svd.modes.leading(q);
  if (k < 0)
    k = chart_->m();
  k = std::min<Index>(k, svd.modes.size() - q);
  Matrix blk = svd.modes.columns().middleCols(q, k);
  U2u_ = SubspaceBasis(std::move(blk), metric);
  if (tangent_ref)
  {
    const Matrix F = S_ - tangent_ref->project(S_);
    U2f_ = weighted_svd(F, metric).modes.leading(std::min<Index>(k, F.cols()));
  }
}

Vector EmpiricalChart::coefficient_map(const Vector &nu) const
{
  if (nu.size() != chart_->q())
    throw DimensionMismatch("chart argument has the wrong length");
  const Matrix v = scaled_snapshots(*chart_, r_, nu);
  return U1_.coefficients(v);
}

Matrix EmpiricalChart::first_coefficients() const { return U1_.coefficients(S_); }
Matrix EmpiricalChart::filtered_second_coefficients() const { return U2f_.coefficients(S_); }
Matrix EmpiricalChart::unfiltered_second_coefficients() const { return U2u_.coefficients(S_); }

ConvergenceSeries tangent_convergence_experiment(const LocalChart &chart, const std::vector<double> &radii)
{
  check_radii(radii);
  const InnerProduct &metric = chart.model().metric();
  const Index q = chart.q();
  const SubspaceBasis ref = tangent_reference(chart);
  const Matrix Z = metric.to_euclidean(chart.jacobian() * chart.directions());
  Eigen::JacobiSVD<Matrix> zs(Z);
  const double sq = zs.singularValues()(q - 1);
  const double delta = sq * sq;

  ConvergenceSeries s;
  s.name = "tangent";
  s.radii = radii;
  for (double r : radii)
  {
    const Matrix S = scaled_snapshots(chart, r);
    const SubspaceBasis Ur = weighted_svd(S, metric).modes.leading(q);
    s.values.push_back(sin_theta_frobenius(Ur, ref));

    // ||Y Y^T - Z Z^T||_F through a thin QR of [Y Z].
    const Matrix Y = metric.to_euclidean(S) / r;
    Matrix K(Y.rows(), Y.cols() + Z.cols());
    K << Y, Z;
    Eigen::HouseholderQR<Matrix> qr(K);
    const Index c = std::min(K.rows(), K.cols());
    const Matrix R = qr.matrixQR().topRows(c).triangularView<Eigen::Upper>();
    const Matrix Ry = R.leftCols(Y.cols()), Rz = R.rightCols(Z.cols());
    const double e = (Ry * Ry.transpose() - Rz * Rz.transpose()).norm();
    s.bounds.push_back(2.0 * e / delta);
  }
  fit_or_leave(s, first_order_floor());
  return s;
}

ConvergenceSeries curvature_convergence_experiment(const LocalChart &chart, const std::vector<double> &radii,
                                                   bool filtered)
{
  check_radii(radii);
  const CurvatureReference ref = curvature_reference(chart, true);
  const SubspaceBasis tref = tangent_reference(chart);
  ConvergenceSeries s;
  s.name = filtered ? "curvature_filtered" : "curvature_unfiltered";
  s.radii = radii;
  for (double r : radii)
  {
    const EmpiricalChart ec(chart, r, tref, ref.observed_rank);
    const SubspaceBasis &blk = filtered ? ec.filtered_second_block() : ec.unfiltered_second_block();
    s.values.push_back(sin_theta_frobenius(blk, ref.basis));
  }
  fit_or_leave(s, second_order_floor());
  return s;
}

ConvergenceSeries alignment_experiment(const LocalChart &chart, const std::vector<double> &radii)
{
  check_radii(radii);
  const SubspaceBasis ref = tangent_reference(chart);
  ConvergenceSeries s;
  s.name = "alignment";
  s.radii = radii;
  for (double r : radii)
  {
    const Matrix S = scaled_snapshots(chart, r);
    const SubspaceBasis Ur = weighted_svd(S, chart.model().metric()).modes.leading(chart.q());
    s.values.push_back(procrustes_align(Ur, ref).residual);
  }
  fit_or_leave(s, first_order_floor());
  return s;
}

std::vector<double> singular_gap_ratios(const LocalChart &chart, const std::vector<double> &radii)
{
  const Index q = chart.q();
  std::vector<double> out;
  for (double r : radii)
  {
    const Vector sv = weighted_svd(scaled_snapshots(chart, r), chart.model().metric()).singular_values;
    if (sv.size() <= q)
      throw PreconditionViolation("chart needs more samples than its dimension");
    out.push_back(sv(q) > 0.0 ? sv(q - 1) / sv(q) : INFINITY);
  }
  return out;
}

Index detect_dimension(const Vector &singular_values, double gap)
{
  for (Index k = 0; k + 1 < singular_values.size(); ++k)
  {
    const double next = singular_values(k + 1);
    if (next <= 0.0 || singular_values(k) / next > gap)
      return k + 1;
  }
  return 0;
}

CoefficientCheck coefficient_map_check(const LocalChart &chart, double r)
{
  const SubspaceBasis ref = tangent_reference(chart);
  const Matrix Astar = ref.coefficients(chart.jacobian());
  const EmpiricalChart ec(chart, r);
  const Matrix O = procrustes_align(ec.first_block(), ref).rotation;
  const Matrix alpha = ec.first_coefficients();
  const Matrix lin = O.transpose() * Astar * (r * chart.directions());

  CoefficientCheck c;
  c.r = r;
  c.max_residual = max_column_norm(alpha - lin);
  c.scaled = c.max_residual / (r * r);
  const Matrix B = fit_least_squares(chart.directions(), alpha);
  c.linear_fit_residual = max_column_norm(alpha - B * chart.directions());
  return c;
}

JacobianReport jacobian_condition_check(const LocalChart &chart, double r, Index points, Index pairs,
                                        std::uint64_t seed)
{
  const Index q = chart.q();
  const EmpiricalChart ec(chart, r);
  Rng rng(seed);
  auto draw = [&] {
    Vector g(q);
    for (Index i = 0; i < q; ++i)
      g(i) = rng.normal();
    return Vector(g * (std::pow(rng.uniform(), 1.0 / static_cast<double>(q)) / g.norm()));
  };

  JacobianReport rep;
  rep.min_singular_value = INFINITY;
  rep.largest_min_singular_value = 0.0;
  for (Index i = 0; i < points; ++i)
  {
    const Vector nu = i == 0 ? Vector::Zero(q) : draw();
    const Matrix Ja = ec.first_block().coefficients(chart.jacobian_at(r * nu));
    Eigen::JacobiSVD<Matrix> svd(Ja);
    const double smin = svd.singularValues().minCoeff();
    rep.min_singular_value = std::min(rep.min_singular_value, smin);
    rep.largest_min_singular_value = std::max(rep.largest_min_singular_value, smin);
  }

  rep.injectivity_margin = INFINITY;
  rep.pairs = pairs;
  for (Index i = 0; i < pairs; ++i)
  {
    const Vector a = draw(), b = draw();
    const double d = (a - b).norm();
    if (d == 0.0)
      continue;
    const double ratio = (ec.coefficient_map(a) - ec.coefficient_map(b)).norm() / d;
    rep.injectivity_margin = std::min(rep.injectivity_margin, ratio);
  }
  return rep;
}

ConvergenceSeries quadratic_law_fit(const LocalChart &chart, const std::vector<double> &radii,
                                    FeatureKind features, bool filtered)
{
  check_radii(radii);
  const SubspaceBasis tref = tangent_reference(chart);
  const Index k = second_block_size(chart);
  const FeatureMap map(features, chart.q());
  ConvergenceSeries s;
  s.name = std::string("quadratic_law_") + to_string(features) + (filtered ? "_filtered" : "_unfiltered");
  s.radii = radii;
  for (double r : radii)
  {
    const EmpiricalChart ec(chart, r, tref, k);
    const Matrix X = ec.first_coefficients();
    const Matrix Y = filtered ? ec.filtered_second_coefficients() : ec.unfiltered_second_coefficients();
    const Matrix Psi = map.eval_columns(X);
    const Matrix W = fit_least_squares(Psi, Y);
    s.values.push_back(max_column_norm(Y - W * Psi));
  }
  fit_or_leave(s, second_order_floor());
  return s;
}

}  // namespace morkit
