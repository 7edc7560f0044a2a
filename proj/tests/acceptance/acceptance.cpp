// Copyright The morkit Authors.
// SPDX-License-Identifier: Apache-2.0

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits non-zero
// when any criterion fails. Figures after the verdict are the measured values.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <unistd.h>

#include "morkit/basis/estimator.hpp"
#include "morkit/basis/greedy.hpp"
#include "morkit/error.hpp"
#include "morkit/harness/artifacts.hpp"
#include "morkit/harness/io.hpp"
#include "morkit/harness/runner.hpp"
#include "morkit/manifold/experiments.hpp"
#include "morkit/models/thermal_fin.hpp"
#include "morkit/models/toy_quadratic.hpp"
#include "morkit/nonlinear/ncrba.hpp"
#include "morkit/nonlinear/quadratic_manifold.hpp"
#include "morkit/numerics/decompositions.hpp"
#include "morkit/numerics/parallel.hpp"
#include "morkit/numerics/random.hpp"
#include "morkit/numerics/subspace.hpp"

using namespace morkit;
namespace fs = std::filesystem;

namespace
{

constexpr int kDensity = 20;

const HighFidelityModel &fin(Index p)
{
  static std::map<Index, HighFidelityModel> cache;
  auto it = cache.find(p);
  if (it == cache.end())
  {
    FinGeometry g;
    g.subfins = static_cast<int>(std::max<Index>(4, p - 1));
    it = cache.emplace(p, build_thermal_fin(g, kDensity, p)).first;
  }
  return it->second;
}

std::vector<ParameterVector> uniform_params(const HighFidelityModel &m, std::uint64_t seed, Index count)
{
  Rng rng(seed);
  return columns_of(uniform_box(rng, m.domain().lower(), m.domain().upper(), count));
}

std::string fmt(double x, int prec = 3)
{
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", prec, x);
  return buf;
}

struct Verdict
{
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string &name, const std::function<Verdict()> &body)
{
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  try
  {
    v = body();
  }
  catch (const std::exception &e)
  {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!v.pass)
    ++failures;
  std::cout << (v.pass ? "PASS" : "FAIL") << " [" << id << "] " << name << ": " << v.detail << " (" << fmt(secs, 3)
            << " s)" << std::endl;
}

LocalChart chart(Index p, std::uint64_t seed, bool symmetric = false)
{
  const Index m = p * (p + 1) / 2;
  Index M = 4 * m + p;
  if (symmetric && M % 2)
    ++M;
  Matrix P = symmetric ? sample_symmetric_directions(p, M, seed) : sample_directions(p, M, seed);
  return LocalChart::centered(fin(p), std::move(P));
}

bool in_range(double x, double lo, double hi) { return x >= lo && x <= hi; }

struct TempDir
{
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("morkit_acceptance_" + std::to_string(::getpid())))
  {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string &n) const { return (path / n).string(); }
};

std::vector<std::vector<std::string>> read_csv(const std::string &path)
{
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(harness::read_text(path));
  std::string line;
  while (std::getline(is, line))
  {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ','))
      cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

// ---------------------------------------------------------------------------

Verdict route_equivalence()
{
  Rng rng(1001);
  double worst_sv = 0.0, worst_angle = 0.0;
  for (int pair = 0; pair < 10; ++pair)
  {
    const Index n = 30 + 5 * pair, M = 8 + pair;
    const InnerProduct metric = cholesky_spd(random_spd(rng, n, 100.0));
    Vector decay(M);
    for (Index k = 0; k < M; ++k)
      decay(k) = std::pow(10.0, -3.0 * static_cast<double>(k) / static_cast<double>(M - 1));
    const Matrix S = rng.normal_matrix(n, M) * decay.asDiagonal();
    const WeightedSvd svd = weighted_svd(S, metric);
    const CorrelationEig ce = correlation_eig(S, metric);
    for (Index k = 0; k < ce.retained; ++k)
      worst_sv = std::max(worst_sv, std::abs(svd.singular_values(k) - std::sqrt(ce.eigenvalues(k))) /
                                      svd.singular_values(k));
    const PrincipalAngles a = principal_angles(svd.modes.leading(ce.retained), ce.modes.leading(ce.retained));
    worst_angle = std::max(worst_angle, a.angles.maxCoeff());
  }
  return {worst_sv <= 1e-10 && worst_angle < 1e-8,
          "max relative singular value gap " + fmt(worst_sv) + ", max principal angle " + fmt(worst_angle) +
            " over 10 pairs"};
}

Verdict pod_identity()
{
  const HighFidelityModel &m = fin(6);
  Rng rng(2002);
  const auto params = columns_of(latin_hypercube(rng, m.domain().lower(), m.domain().upper(), 100));
  const SnapshotMatrix S = build_snapshots(m, params);
  const CorrelationEig c = correlation_eig(S.columns, m.metric());
  double worst = 0.0;
  std::string per;
  for (Index N : {1, 5, 10, 20, 30})
  {
    const ReducedBasis rb = pod(S, m.metric(), N);
    const double lhs = projection_error(S, rb.basis).errors.squaredNorm();
    const double rhs = c.eigenvalues.tail(c.eigenvalues.size() - N).sum();
    const double rel = std::abs(lhs - rhs) / rhs;
    worst = std::max(worst, rel);
    per += " N=" + std::to_string(N) + ":" + fmt(rel, 2);
  }
  return {worst <= 1e-8, "p=6, M=100, dofs=" + std::to_string(m.dofs()) + ", relative gaps" + per};
}

Verdict gss_equals_greedy()
{
  const HighFidelityModel &m = fin(6);
  const auto train = uniform_params(m, 3003, 200);
  double worst = 0.0;
  for (Index N : {5, 12, 20})
  {
    const ReducedBasis g = weak_greedy(m, train, -1.0, N);
    const ReducedBasis s = gss(m, train, N, N);
    worst = std::max(worst, principal_angles(g.basis, s.basis).angles.maxCoeff());
  }
  return {worst < 1e-8, "max principal angle " + fmt(worst) + " for N in {5, 12, 20}, M=200"};
}

Verdict basis_ordering(const TempDir &tmp)
{
  const std::string cfg = tmp.file("compare.toml");
  harness::write_text(cfg, "[model]\np = 6\nsubfins = 5\nmesh_density = 20\n\n"
                           "[sampling]\nseed = 2024\nM1 = 500\nM2 = 100\nM_pod = 100\ntest = 1000\n\n"
                           "[basis]\nN_min = 5\nN_max = 56\nrelative = true\n");
  std::ostringstream log, err;
  const int code = harness::run({"compare-bases", "", cfg, {}, tmp.file("compare"), std::nullopt}, log, err);
  if (code != 0)
    return {false, "compare-bases exited " + std::to_string(code) + ": " + err.str()};
  const auto rows = read_csv(tmp.file("compare/bases_mean.csv"));
  int total = 0, gss_pod = 0, gss_greedy = 0;
  for (std::size_t i = 1; i < rows.size(); ++i)
  {
    const double pod = std::stod(rows[i][1]), greedy = std::stod(rows[i][2]), g = std::stod(rows[i][3]);
    ++total;
    gss_pod += g <= pod;
    gss_greedy += g <= greedy;
  }
  const double f_pod = static_cast<double>(gss_pod) / total, f_greedy = static_cast<double>(gss_greedy) / total;
  return {f_pod >= 0.8 && f_greedy >= 0.6,
          "mean error GSS<=POD(M=100) at " + std::to_string(gss_pod) + "/" + std::to_string(total) + " (" +
            fmt(100 * f_pod, 3) + "%, need >=80%), GSS<=greedy(M=500) at " + std::to_string(gss_greedy) + "/" +
            std::to_string(total) + " (" + fmt(100 * f_greedy, 3) + "%, need >=60%)"};
}

Verdict estimator_soundness()
{
  const HighFidelityModel &m = fin(6);
  const ReducedBasis rb = weak_greedy(m, uniform_params(m, 4004, 300), -1.0, 20);
  const auto test = uniform_params(m, 4005, 50);
  const SnapshotMatrix T = build_snapshots(m, test);
  int violations = 0;
  std::vector<double> eff;
  for (Index N : {5, 10, 20})
  {
    const SubspaceBasis V = rb.basis.leading(N);
    const ErrorEstimator est = estimator_offline(m, V);
    const ProjectionErrors pe = projection_error(T, V);
    for (std::size_t j = 0; j < test.size(); ++j)
    {
      const auto ev = est.evaluate(test[j]);
      const Vector u = T.columns.col(static_cast<Index>(j));
      const double galerkin_err = m.metric().norm(u - V.columns() * ev.coefficients);
      if (ev.delta < pe.errors(static_cast<Index>(j)))
        ++violations;
      eff.push_back(ev.delta / galerkin_err);
    }
  }
  std::nth_element(eff.begin(), eff.begin() + static_cast<long>(eff.size() / 2), eff.end());
  return {violations == 0, std::to_string(violations) + " violations over 50 parameters x N in {5, 10, 20}; " +
                             "median effectivity Delta/||u - u_N||_X = " + fmt(eff[eff.size() / 2])};
}

Verdict tangent_slopes()
{
  const auto radii = dyadic_radii(2, 12);
  const ConvergenceSeries s1 = tangent_convergence_experiment(chart(1, 601), radii);
  const ConvergenceSeries s3 = tangent_convergence_experiment(chart(3, 603), radii);
  const ConvergenceSeries sym = tangent_convergence_experiment(chart(1, 611, true), radii);
  bool bounds = true;
  for (const auto *s : {&s1, &s3})
    for (std::size_t k = 0; k < radii.size(); ++k)
      bounds = bounds && s->values[k] <= s->bounds[k];
  const bool ok = in_range(s1.fit.slope, 0.8, 1.2) && in_range(s3.fit.slope, 0.8, 1.2) &&
                  in_range(sym.fit.slope, 1.8, 2.2);
  // Reported only: the slope over the six smallest radii, where the leading-order
  // term dominates.
  const std::vector<double> tail_r(radii.end() - 6, radii.end()), tail_v(s1.values.end() - 6, s1.values.end());
  const double tail = loglog_slope_fit(tail_r, tail_v).slope;
  return {ok, "slope p=1 " + fmt(s1.fit.slope) + " (six smallest radii " + fmt(tail) + "), p=3 " + fmt(s3.fit.slope) +
                " (need [0.8,1.2]); symmetric p=1 " +
                fmt(sym.fit.slope) + " (need [1.8,2.2]); Davis-Kahan bounds " + (bounds ? "hold" : "VIOLATED") +
                "; points used " + std::to_string(s1.fit.points_used) + "/" + std::to_string(radii.size())};
}

Verdict curvature_slopes()
{
  const auto radii = dyadic_radii(2, 12);
  std::string detail;
  bool ok = true;
  for (Index p : {1, 2})
  {
    const LocalChart c = chart(p, 700 + static_cast<std::uint64_t>(p));
    const ConvergenceSeries f = curvature_convergence_experiment(c, radii, true);
    const ConvergenceSeries u = curvature_convergence_experiment(c, radii, false);
    ok = ok && in_range(f.fit.slope, 0.8, 1.2);
    detail += "p=" + std::to_string(p) + " filtered " + fmt(f.fit.slope) + " (unfiltered " + fmt(u.fit.slope) + "); ";
  }
  return {ok, detail + "need filtered in [0.8,1.2]"};
}

Verdict quadratic_law()
{
  const auto radii = dyadic_radii(2, 12);
  std::string detail;
  bool ok = true;
  for (Index p : {1, 2, 3})
  {
    const ConvergenceSeries s = quadratic_law_fit(chart(p, 800 + static_cast<std::uint64_t>(p)), radii);
    if (p <= 2)
      ok = ok && in_range(s.fit.slope, 2.5, 3.5);
    detail += "p=" + std::to_string(p) + (p <= 2 ? " " : " (reported) ") + fmt(s.fit.slope) + "; ";
  }
  return {ok, detail + "need [2.5,3.5] for p in {1,2}"};
}

Verdict bijectivity()
{
  const LocalChart c = chart(2, 902);
  const double r = std::ldexp(1.0, -6);
  const JacobianReport rep = jacobian_condition_check(c, r, 20, 200, 903);

  const HighFidelityModel &m1 = fin(1);
  Matrix E(1, 2);
  E << m1.domain().half_widths()(0), m1.domain().half_widths()(0);
  const LocalChart dup(m1, m1.domain().center(), E, sample_directions(2, 12, 904));
  const JacobianReport bad = jacobian_condition_check(dup, r, 5, 0, 905);
  bool control_rank = false;
  try
  {
    tangent_reference(dup);
  }
  catch (const RankDeficient &)
  {
    control_rank = true;
  }
  const bool flagged = control_rank && bad.min_singular_value < 1e-8 * bad.largest_min_singular_value + 1e-12;
  return {rep.min_singular_value > 0.0 && rep.injectivity_margin > 0.0 && rep.pairs == 200 && flagged,
          "p=2, r=2^-6: min sigma_min " + fmt(rep.min_singular_value) + ", injectivity margin " +
            fmt(rep.injectivity_margin) + " on " + std::to_string(rep.pairs) + " pairs; rank-deficient control " +
            (flagged ? "flagged" : "NOT flagged") + " (sigma_min " + fmt(bad.min_singular_value) + ")"};
}

Verdict toy_quadratic()
{
  const ToyQuadratic toy = build_toy_quadratic(41, 1.0, 3.0, 1.0);
  SnapshotMatrix S;
  S.columns = toy.snapshots;
  const InnerProduct I2 = InnerProduct::identity(2);
  const double c2beta = std::abs(toy.config.c2 * toy.config.beta);
  Index center = 0;
  for (Index j = 1; j < toy.mu.size(); ++j)
    if (std::abs(toy.mu(j)) < std::abs(toy.mu(center)))
      center = j;

  double hom_center = INFINITY, full_max = 0.0, coincide = 0.0;
  for (FeatureKind kind : {FeatureKind::HomogeneousQuadratic, FeatureKind::FullQuadratic})
  {
    const FeatureMap map(kind, 1);
    const QuadManifold a = qsvdm_train(S, I2, 1, map);
    const QuadManifold b = qgm_train(S, I2, 1, 2, map);
    for (const QuadManifold *qm : {&a, &b})
    {
      const ProjectionErrors e = quad_errors(*qm, S);
      if (kind == FeatureKind::HomogeneousQuadratic)
        hom_center = std::min(hom_center, e.errors(center));
      else
        full_max = std::max(full_max, e.max);
    }
    for (Index j = 0; j < S.size(); ++j)
      coincide = std::max(coincide, (quad_reconstruct_snapshot(a, S.columns.col(j)) -
                                     quad_reconstruct_snapshot(b, S.columns.col(j))).norm());
  }
  return {hom_center >= 0.9 * c2beta && full_max < 1e-10 && coincide < 1e-12,
          "homogeneous error at mu=0 " + fmt(hom_center, 6) + " vs |c2 beta| " + fmt(c2beta, 6) +
            "; full max error " + fmt(full_max) + "; QSVDM-QGM difference " + fmt(coincide)};
}

Verdict full_dominates()
{
  const HighFidelityModel &m = fin(2);
  const SnapshotMatrix S = build_snapshots(m, uniform_params(m, 1101, 300));
  const SnapshotMatrix T = build_snapshots(m, uniform_params(m, 1102, 200));
  const Index r = 12;
  bool dominated = true;
  int strict = 0;
  std::string detail;
  for (Index n = 1; n <= 6; ++n)
  {
    const QuadManifold h = qgm_train(S, m.metric(), n, r, FeatureMap::homogeneous(n), true);
    const QuadManifold f = qgm_train(S, m.metric(), n, r, FeatureMap::full(n), true);
    const double eh = quad_errors(h, S, true).mean, ef = quad_errors(f, S, true).mean;
    const double th = quad_errors(h, T, true).mean, tf = quad_errors(f, T, true).mean;
    dominated = dominated && ef <= eh * (1.0 + 1e-10);
    strict += ef < 0.99 * eh;
    detail += " n=" + std::to_string(n) + ":" + fmt(ef, 2) + "/" + fmt(eh, 2) + "[test " + fmt(tf, 2) + "/" +
              fmt(th, 2) + "]";
  }
  return {dominated && strict >= 1, "centered, r=12, mean relative error full/homogeneous on 300 snapshots:" +
                                      detail + "; strict at " + std::to_string(strict) + " n"};
}

Verdict ncrba_pipeline()
{
  const HighFidelityModel &m = fin(1);
  const SnapshotMatrix S = build_snapshots(m, uniform_params(m, 1201, 500));
  const auto test = uniform_params(m, 1202, 100);
  const SnapshotMatrix T = build_snapshots(m, test);

  // (a) Zero correction with n = N: the Picard solve must reproduce Galerkin.
  const SubspaceBasis V8 = pod(S, m.metric(), 8).basis;
  const NcrbaModel lin = ncrba_with_zero_map(V8, 8, 8);
  const ReducedSystem red8 = reduce_system(m, V8);
  double gap_a = 0.0;
  for (std::size_t j = 0; j < 20; ++j)
  {
    PicardOptions o;
    o.initial = Vector::Zero(8);
    o.tol = 1e-12;
    const PicardResult r = ncrba_online_solve(lin, red8, test[j], o);
    const Vector g = galerkin_coefficients(red8, test[j]);
    gap_a = std::max(gap_a, (r.alpha_low - g).norm() / g.norm());
  }
  const bool part_a = gap_a < 1e-8;

  // (b) Trained polynomial correction, p = 1, n = 2, N = 20. The snapshot set has
  // lower numerical rank than 20, so the 20 leading weighted-SVD modes are used
  // directly.
  const WeightedSvd svd = weighted_svd(S.columns, m.metric());
  const Index rank = numerical_rank(svd.singular_values, S.columns.rows(), S.columns.cols());
  const SubspaceBasis V = svd.modes.leading(20);
  RegressorSpec spec;
  spec.degree = 6;
  const NcrbaModel model = ncrba_train(S, V, 2, 20, spec);
  const ReducedSystem red = reduce_system(m, V);
  const ProjectionErrors proj = projection_error(T, V, true);

  double sum_online = 0.0, sum_decode = 0.0;
  int solved = 0;
  for (std::size_t j = 0; j < test.size(); ++j)
  {
    const Vector u = T.columns.col(static_cast<Index>(j));
    const double un = m.metric().norm(u);
    sum_decode += m.metric().norm(u - ncrba_lift(model, ncrba_encode(model, u))) / un;
    try
    {
      const PicardResult r = ncrba_online_solve(model, red, test[j]);
      sum_online += m.metric().norm(u - ncrba_lift(model, r.alpha_low)) / un;
      ++solved;
    }
    catch (const Error &)
    {
    }
  }
  const double K = static_cast<double>(test.size());
  const double mean_online = solved ? sum_online / solved : INFINITY;
  const bool part_b = solved == static_cast<int>(test.size()) && mean_online <= 2.0 * proj.mean;
  return {part_a && part_b,
          "(a) zero map n=N=8 vs Galerkin max relative gap " + fmt(gap_a) + (part_a ? " ok" : " FAILED") +
            "; (b) p=1 n=2 N=20 (snapshot rank " + std::to_string(rank) + "): online mean error " + fmt(mean_online) +
            " over " + std::to_string(solved) + "/" + std::to_string(test.size()) +
            " converged solves, encode-decode mean " + fmt(sum_decode / K) + ", linear N=20 projection mean " +
            fmt(proj.mean) + " (need online <= 2x projection, all solves converged)"};
}

Verdict perturbation_suites()
{
  Rng rng(1301);
  int dk_fail = 0, proc_bound_fail = 0, proc_opt_fail = 0, invariance_fail = 0;
  for (int trial = 0; trial < 20; ++trial)
  {
    const Index n = 12;
    const Matrix A = random_spd(rng, n, 100.0);
    Matrix E = rng.normal_matrix(n, n);
    E = 0.5 * (E + E.transpose()).eval();
    const DavisKahanReport probe = davis_kahan_check(A, Matrix::Zero(n, n), 3);
    E *= (0.05 + 0.4 * rng.uniform()) * probe.delta / E.norm();
    const DavisKahanReport r = davis_kahan_check(A, E, 3);
    if (r.e_spectral < r.delta && r.sin_theta_f > r.bound)
      ++dk_fail;

    const InnerProduct metric = cholesky_spd(random_spd(rng, n, 20.0));
    const SubspaceBasis B = SubspaceBasis::orthonormalize(rng.normal_matrix(n, 3), metric);
    const SubspaceBasis Tg = SubspaceBasis::orthonormalize(B.columns() + 0.2 * rng.normal_matrix(n, 3), metric);
    const AlignmentResult al = procrustes_align(Tg, B);
    if (al.residual > std::sqrt(2.0) * sin_theta_frobenius(Tg, B) + 1e-12)
      ++proc_bound_fail;
    for (int k = 0; k < 50; ++k)
    {
      const Matrix O = random_orthogonal(rng, 3);
      if (al.residual > metric.to_euclidean(Tg.columns() - B.columns() * O).norm() + 1e-12)
        ++proc_opt_fail;
    }
    const PrincipalAngles a0 = principal_angles(Tg, B);
    const PrincipalAngles a1 = principal_angles(SubspaceBasis(Tg.columns() * random_orthogonal(rng, 3), metric), B);
    if ((a0.angles - a1.angles).cwiseAbs().maxCoeff() > 1e-12)
      ++invariance_fail;
  }
  return {dk_fail + proc_bound_fail + proc_opt_fail + invariance_fail == 0,
          "20 trials: Davis-Kahan violations " + std::to_string(dk_fail) + ", Procrustes sqrt(2) bound violations " +
            std::to_string(proc_bound_fail) + ", beaten by random rotations " + std::to_string(proc_opt_fail) +
            "/1000, angle invariance failures " + std::to_string(invariance_fail)};
}

std::map<std::string, std::string> directory_bytes(const fs::path &root)
{
  std::map<std::string, std::string> files;
  for (const auto &e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file())
      files[fs::relative(e.path(), root).generic_string()] = harness::read_text(e.path().string());
  return files;
}

Verdict determinism(const TempDir &tmp)
{
  const std::string fin_cfg = tmp.file("det_fin.toml");
  harness::write_text(fin_cfg, "[model]\np = 2\nmesh_density = 6\n\n"
                               "[sampling]\nseed = 1401\ntrain = 60\nM1 = 60\nM2 = 16\ntest = 20\n\n"
                               "[basis]\nN = 8\nN_max = 10\n\n"
                               "[quadratic]\nmap = \"full_quadratic\"\nn = [1, 2, 3]\nr = 6\ncentered = true\n\n"
                               "[manifold]\nradii_first = 2\nradii_last = 10\n");
  const std::string ncrba_cfg = tmp.file("det_ncrba.toml");
  harness::write_text(ncrba_cfg, "[model]\np = 1\nmesh_density = 6\n\n[sampling]\nseed = 1402\ntrain = 80\ntest = 15\n\n"
                                 "[ncrba]\nn = 2\nN = 6\ndegree = 3\nheldout = 10\n");
  const std::string toy_cfg = tmp.file("det_toy.toml");
  harness::write_text(toy_cfg, "[toy]\nM = 41\nmu_max = 1.0\nc1 = 3.0\nc2 = 1.0\n");

  struct Job
  {
    std::string sub, variant, cfg;
  };
  const std::vector<Job> jobs = {
    {"snapshots", "", fin_cfg},        {"basis", "pod", fin_cfg},        {"basis", "greedy", fin_cfg},
    {"basis", "gss", fin_cfg},         {"compare-bases", "", fin_cfg},   {"ncrba-train", "", ncrba_cfg},
    {"ncrba-solve", "", ncrba_cfg},    {"quadratic", "qsvdm", fin_cfg},  {"quadratic", "qgm", fin_cfg},
    {"toy-quadratic", "", toy_cfg},    {"taylor-convergence", "", fin_cfg}, {"quad-law", "", fin_cfg},
  };
  std::ostringstream log, err;
  std::vector<std::string> bad;
  std::size_t files = 0;
  for (const char *run_name : {"run_a", "run_b"})
  {
    for (const Job &j : jobs)
    {
      const std::string out = tmp.file(std::string(run_name) + "/" + j.sub + (j.variant.empty() ? "" : "-" + j.variant));
      const int code = harness::run({j.sub, j.variant, j.cfg, {}, out, std::nullopt}, log, err);
      if (code != 0)
        return {false, j.sub + " exited " + std::to_string(code) + ": " + err.str()};
    }
    if (harness::run({"report", "", "", {}, tmp.file(run_name), std::nullopt}, log, err) != 0)
      return {false, "report failed: " + err.str()};
  }
  const auto a = directory_bytes(tmp.file("run_a"));
  const auto b = directory_bytes(tmp.file("run_b"));
  for (const auto &[name, bytes] : a)
  {
    auto it = b.find(name);
    if (it == b.end() || it->second != bytes)
      bad.push_back(name);
  }
  files = a.size();
  std::string detail = std::to_string(jobs.size() + 1) + " subcommands, " + std::to_string(files) +
                       " files compared, " + std::to_string(bad.size()) + " differ";
  if (!bad.empty())
    detail += " (first: " + bad.front() + ")";
  return {bad.empty() && a.size() == b.size(), detail};
}

}  // namespace

int main()
{
  std::cout << "morkit " << MORKIT_VERSION << " acceptance, fin mesh density " << kDensity << ", "
            << worker_count() << " worker(s)" << std::endl;
  TempDir tmp;
  criterion(1, "route equivalence weighted SVD / correlation eigenproblem", route_equivalence);
  criterion(2, "POD optimality identity", pod_identity);
  criterion(3, "GSS equals greedy subspace at M2 = N", gss_equals_greedy);
  criterion(4, "basis comparison ordering p=6", [&] { return basis_ordering(tmp); });
  criterion(5, "estimator soundness", estimator_soundness);
  criterion(6, "tangent convergence", tangent_slopes);
  criterion(7, "filtered curvature convergence", curvature_slopes);
  criterion(8, "quadratic law", quadratic_law);
  criterion(9, "bijectivity diagnostics", bijectivity);
  criterion(10, "toy quadratic", toy_quadratic);
  criterion(11, "full quadratic dominates homogeneous (QGM, p=2)", full_dominates);
  criterion(12, "NCRBA pipeline", ncrba_pipeline);
  criterion(13, "Davis-Kahan and Procrustes suites", perturbation_suites);
  criterion(14, "determinism of CLI artifacts", [&] { return determinism(tmp); });
  std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " criteria FAILED") << std::endl;
  return failures == 0 ? 0 : 1;
}
