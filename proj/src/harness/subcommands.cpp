// Copyright The morkit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "subcommands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <json.hpp>
#include <map>

#include "morkit/basis/greedy.hpp"
#include "morkit/error.hpp"
#include "morkit/manifold/experiments.hpp"
#include "morkit/models/thermal_fin.hpp"
#include "morkit/models/toy_quadratic.hpp"
#include "morkit/nonlinear/ncrba.hpp"
#include "morkit/nonlinear/quadratic_manifold.hpp"
#include "morkit/numerics/decompositions.hpp"
#include "morkit/numerics/parallel.hpp"
#include "morkit/numerics/random.hpp"

namespace fs = std::filesystem;

namespace morkit::harness::detail
{
namespace
{

// ---------------------------------------------------------------------------
// Configuration helpers

std::uint64_t require_seed(Context &ctx)
{
  ctx.cfg.require_section("sampling");
  if (!ctx.cfg.has("sampling.seed"))
    throw ConfigError("missing key 'sampling.seed' (seeds must be given explicitly)");
  const std::int64_t s = ctx.cfg.get_int("sampling.seed");
  if (s < 0)
    throw ConfigError("sampling.seed must be non-negative");
  ctx.seed = static_cast<std::uint64_t>(s);
  return *ctx.seed;
}

Index positive_int(const Config &cfg, const std::string &key)
{
  const std::int64_t v = cfg.get_int(key);
  if (v <= 0)
    throw ConfigError("'" + key + "' must be positive");
  return static_cast<Index>(v);
}

Index positive_int(const Config &cfg, const std::string &key, Index fallback)
{
  return cfg.has(key) ? positive_int(cfg, key) : fallback;
}

Vector to_vector(const std::vector<double> &v)
{
  Vector out(static_cast<Index>(v.size()));
  for (std::size_t k = 0; k < v.size(); ++k)
    out(static_cast<Index>(k)) = v[k];
  return out;
}

HighFidelityModel build_model(const Config &cfg)
{
  cfg.require_section("model");
  const std::string geometry = cfg.get_string("model.geometry", "thermal_fin");
  if (geometry != "thermal_fin")
    throw ConfigError("model.geometry '" + geometry + "' is not supported (only thermal_fin)");
  const Index p = positive_int(cfg, "model.p");
  const int subfins = static_cast<int>(positive_int(cfg, "model.subfins", std::max<Index>(4, p - 1)));
  const int density = static_cast<int>(positive_int(cfg, "model.mesh_density", 20));
  ParameterVector reference;
  if (auto ref = cfg.find_doubles("model.reference"))
    reference = to_vector(*ref);

  FinGeometry g;
  g.subfins = subfins;
  HighFidelityModel m = build_thermal_fin(g, density, p, reference);

  const auto lo = cfg.find_doubles("model.lower");
  const auto hi = cfg.find_doubles("model.upper");
  if (!lo && !hi)
    return m;
  Vector lower = lo ? to_vector(*lo) : m.domain().lower();
  Vector upper = hi ? to_vector(*hi) : m.domain().upper();
  if (lower.size() != p || upper.size() != p)
    throw ConfigError("model.lower and model.upper need " + std::to_string(p) + " entries");
  if ((lower.array() <= 0.0).any() || (upper.array() <= lower.array()).any())
    throw ConfigError("model bounds must satisfy 0 < lower < upper");
  return HighFidelityModel(m.blocks(), m.terms(), m.rhs(), ParameterDomain(lower, upper), m.reference(), m.mesh());
}

std::vector<std::string> parameter_names(const HighFidelityModel &m)
{
  std::vector<std::string> names;
  for (Index i = 0; i + 1 < m.num_parameters(); ++i)
    names.push_back("k" + std::to_string(i + 1));
  names.push_back("Bi");
  return names;
}

std::vector<ParameterVector> draw(const HighFidelityModel &m, Rng rng, Index count, const std::string &design)
{
  const ParameterDomain &d = m.domain();
  if (design == "uniform")
    return columns_of(uniform_box(rng, d.lower(), d.upper(), count));
  if (design == "lhs")
    return columns_of(latin_hypercube(rng, d.lower(), d.upper(), count));
  throw ConfigError("sampling.design must be 'uniform' or 'lhs', got '" + design + "'");
}

std::vector<ParameterVector> training_set(const Context &ctx, const HighFidelityModel &m, const std::string &key)
{
  const Index M = positive_int(ctx.cfg, key);
  return draw(m, Rng(*ctx.seed).stream("sampling"), M, ctx.cfg.get_string("sampling.design", "uniform"));
}

std::vector<ParameterVector> test_set(const Context &ctx, const HighFidelityModel &m)
{
  const Index M = positive_int(ctx.cfg, "sampling.test");
  return draw(m, Rng(*ctx.seed).stream("test-set"), M, "uniform");
}

Table parameter_table(const HighFidelityModel &m, const std::vector<ParameterVector> &params)
{
  std::vector<std::string> cols{"index"};
  for (const auto &n : parameter_names(m))
    cols.push_back(n);
  Table t(cols);
  for (std::size_t j = 0; j < params.size(); ++j)
  {
    std::vector<double> row{static_cast<double>(j)};
    for (Index i = 0; i < params[j].size(); ++i)
      row.push_back(params[j](i));
    t.row(row);
  }
  return t;
}

Table error_curve_table(const Matrix &curve, Index first_N = 1)
{
  Table t({"N", "mean", "max"});
  for (Index N = first_N; N <= curve.rows(); ++N)
  {
    const auto r = curve.row(N - 1);
    t.row(std::vector<double>{static_cast<double>(N), r.mean(), r.maxCoeff()});
  }
  return t;
}

void put_notes(Context &ctx, const std::vector<std::string> &notes)
{
  if (notes.empty())
    return;
  std::string text;
  for (const auto &n : notes)
    text += n + "\n";
  ctx.store.put_bytes("notes.txt", text);
  for (const auto &n : notes)
    ctx.log << "note: " << n << "\n";
}

Table selection_table(const HighFidelityModel &m, const ReducedBasis &rb)
{
  std::vector<std::string> cols{"iteration", "index", "max_estimate"};
  for (const auto &n : parameter_names(m))
    cols.push_back(n);
  Table t(cols);
  for (std::size_t k = 0; k < rb.selected_indices.size(); ++k)
  {
    std::vector<double> row{static_cast<double>(k + 1), static_cast<double>(rb.selected_indices[k]),
                            k < rb.max_estimates.size() ? rb.max_estimates[k]
                                                        : std::numeric_limits<double>::quiet_NaN()};
    for (Index i = 0; i < rb.selected_parameters[k].size(); ++i)
      row.push_back(rb.selected_parameters[k](i));
    t.row(row);
  }
  return t;
}

// ---------------------------------------------------------------------------
// NCRBA model persistence

RegressorSpec regressor_spec(const Config &cfg)
{
  RegressorSpec spec;
  const std::string kind = cfg.get_string("ncrba.regressor", "polynomial");
  if (kind == "polynomial")
    spec.kind = CoefficientRegressor::Kind::Polynomial;
  else if (kind == "nearest_neighbor")
    spec.kind = CoefficientRegressor::Kind::NearestNeighbor;
  else if (kind == "zero")
    spec.kind = CoefficientRegressor::Kind::Zero;
  else
    throw ConfigError("ncrba.regressor must be polynomial, nearest_neighbor or zero");
  spec.degree = static_cast<int>(positive_int(cfg, "ncrba.degree", 2));
  spec.neighbors = positive_int(cfg, "ncrba.neighbors", 1);
  return spec;
}

const char *kind_name(CoefficientRegressor::Kind k)
{
  switch (k)
  {
  case CoefficientRegressor::Kind::Zero:
    return "zero";
  case CoefficientRegressor::Kind::Polynomial:
    return "polynomial";
  case CoefficientRegressor::Kind::NearestNeighbor:
    return "nearest_neighbor";
  }
  return "unknown";
}

NcrbaModel train_ncrba(Context &ctx, const HighFidelityModel &m)
{
  ctx.cfg.require_section("ncrba");
  const Index n = positive_int(ctx.cfg, "ncrba.n");
  const Index N = positive_int(ctx.cfg, "ncrba.N");
  const RegressorSpec spec = regressor_spec(ctx.cfg);

  const auto params = training_set(ctx, m, "sampling.train");
  ctx.log << "ncrba: solving " << params.size() << " training snapshots\n";
  const SnapshotMatrix S = build_snapshots(m, params);
  const Index basis_train = std::min<Index>(positive_int(ctx.cfg, "ncrba.basis_train", S.size()), S.size());
  SnapshotMatrix SB;
  SB.columns = S.columns.leftCols(basis_train);
  const SubspaceBasis V = pod(SB, m.metric(), N).basis;

  if (spec.kind == CoefficientRegressor::Kind::Zero)
    return ncrba_with_zero_map(V, n, N);

  const Index heldout = ctx.cfg.get_int("ncrba.heldout", 0);
  if (heldout < 0)
    throw ConfigError("ncrba.heldout must be non-negative");
  if (heldout == 0)
    return ncrba_train(S, V, n, N, spec);
  const auto hp = draw(m, Rng(*ctx.seed).stream("regression"), heldout, "uniform");
  const SnapshotMatrix H = build_snapshots(m, hp);
  return ncrba_train(S, V, n, N, spec, &H);
}

void store_ncrba(Context &ctx, const NcrbaModel &model, const RegressorSpec &spec)
{
  std::string meta;
  meta += "n = " + std::to_string(model.n) + "\n";
  meta += "N = " + std::to_string(model.N()) + "\n";
  meta += std::string("regressor = \"") + kind_name(model.psi_hat.kind()) + "\"\n";
  meta += "degree = " + std::to_string(spec.degree) + "\n";
  meta += "neighbors = " + std::to_string(spec.neighbors) + "\n";
  ctx.store.put_bytes("model/ncrba.toml", meta);
  ctx.store.put_matrix("model/basis.mork", model.basis.columns());
  switch (model.psi_hat.kind())
  {
  case CoefficientRegressor::Kind::Polynomial:
    ctx.store.put_matrix("model/weights.mork", model.psi_hat.polynomial_model().weights);
    break;
  case CoefficientRegressor::Kind::NearestNeighbor:
    ctx.store.put_matrix("model/knn_inputs.mork", model.psi_hat.neighbor_model().inputs);
    ctx.store.put_matrix("model/knn_outputs.mork", model.psi_hat.neighbor_model().outputs);
    break;
  case CoefficientRegressor::Kind::Zero:
    break;
  }
}

NcrbaModel load_ncrba(const std::string &dir, const HighFidelityModel &m)
{
  const fs::path root = fs::path(dir) / "model";
  const Config meta = Config::from_file((root / "ncrba.toml").string());
  const Index n = positive_int(meta, "n");
  const Index N = positive_int(meta, "N");
  const Matrix B = load_matrix((root / "basis.mork").string());
  if (B.rows() != m.dofs() || B.cols() != N)
    throw DimensionMismatch("stored NCRBA basis is " + std::to_string(B.rows()) + "x" + std::to_string(B.cols()) +
                            ", model has " + std::to_string(m.dofs()) + " dofs");
  const SubspaceBasis V(B, m.metric());
  NcrbaModel model = ncrba_with_zero_map(V, n, N);
  const std::string kind = meta.get_string("regressor");
  if (kind == "polynomial")
  {
    RegressionModel rm{FeatureMap::polynomial(n, static_cast<int>(positive_int(meta, "degree"))),
                       load_matrix((root / "weights.mork").string()), {}};
    if (rm.weights.rows() != N - n || rm.weights.cols() != rm.feature_map.output_dim())
      throw DimensionMismatch("stored regression weights do not match n, N and degree");
    model.psi_hat = CoefficientRegressor::polynomial(std::move(rm));
  }
  else if (kind == "nearest_neighbor")
  {
    NearestNeighborModel nn{positive_int(meta, "neighbors"), load_matrix((root / "knn_inputs.mork").string()),
                            load_matrix((root / "knn_outputs.mork").string())};
    if (nn.inputs.rows() != n || nn.outputs.rows() != N - n || nn.inputs.cols() != nn.outputs.cols())
      throw DimensionMismatch("stored neighbor data do not match n and N");
    model.psi_hat = CoefficientRegressor::nearest_neighbor(std::move(nn));
  }
  else if (kind != "zero")
    throw FormatError("unknown stored regressor '" + kind + "'");
  return model;
}

PicardOptions picard_options(const Config &cfg)
{
  PicardOptions o;
  const std::string schedule = cfg.get_string("ncrba.schedule", "adaptive");
  if (schedule == "adaptive")
    o.schedule = StepSchedule::Adaptive;
  else if (schedule == "constant")
    o.schedule = StepSchedule::Constant;
  else
    throw ConfigError("ncrba.schedule must be 'adaptive' or 'constant'");
  o.gamma = cfg.get_double("ncrba.gamma", 0.0);
  o.tol = cfg.get_double("ncrba.tol", o.tol);
  o.max_iter = positive_int(cfg, "ncrba.max_iter", o.max_iter);
  return o;
}

// ---------------------------------------------------------------------------
// Local chart construction

LocalChart build_chart(Context &ctx, const HighFidelityModel &m)
{
  ctx.cfg.require_section("manifold");
  const Index q = m.num_parameters();
  const Index mq = q * (q + 1) / 2;
  const bool symmetric = ctx.cfg.get_bool("manifold.symmetric", false);
  Index M = positive_int(ctx.cfg, "manifold.directions", 4 * mq + q);
  if (symmetric && M % 2)
    ++M;
  const std::uint64_t dir_seed = Rng(*ctx.seed).stream("directions").engine()();
  Matrix P = symmetric ? sample_symmetric_directions(q, M, dir_seed) : sample_directions(q, M, dir_seed);
  ctx.store.put_matrix("directions.mork", P);
  if (auto mu = ctx.cfg.find_doubles("manifold.mu_star"))
  {
    const Vector mu_star = to_vector(*mu);
    if (mu_star.size() != q)
      throw ConfigError("manifold.mu_star needs " + std::to_string(q) + " entries");
    return LocalChart(m, mu_star, Matrix(m.domain().half_widths().asDiagonal()), std::move(P));
  }
  return LocalChart::centered(m, std::move(P));
}

std::vector<double> chart_radii(const Config &cfg)
{
  const Index first = positive_int(cfg, "manifold.radii_first", 2);
  const Index last = positive_int(cfg, "manifold.radii_last", 12);
  if (auto r = cfg.find_doubles("manifold.radii"))
    return *r;
  return dyadic_radii(static_cast<int>(first), static_cast<int>(last));
}

void put_series(Context &ctx, const std::string &name, const ConvergenceSeries &s)
{
  Table t = series_table(s.radii, s.values);
  if (!s.bounds.empty())
  {
    Table tb({"r", "value", "bound"});
    std::vector<std::size_t> order(s.radii.size());
    for (std::size_t k = 0; k < order.size(); ++k)
      order[k] = k;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return s.radii[a] > s.radii[b]; });
    for (std::size_t k : order)
      tb.row(std::vector<double>{s.radii[k], s.values[k], s.bounds[k]});
    t = tb;
  }
  ctx.store.put_table(name + ".dat", t, PlotFormat::Dat);
}

void add_fit(Table &summary, const std::string &name, const SlopeFit &f)
{
  summary.row(std::vector<std::string>{name, format_number(f.slope), format_number(f.intercept), format_number(f.r2),
                                       std::to_string(f.points_used)});
}

Table fit_summary() { return Table({"experiment", "slope", "intercept", "r2", "points_used"}); }

}  // namespace

// ---------------------------------------------------------------------------

void run_snapshots(Context &ctx)
{
  require_seed(ctx);
  const HighFidelityModel m = build_model(ctx.cfg);
  const auto params = training_set(ctx, m, "sampling.train");
  ctx.log << "snapshots: " << params.size() << " solves on " << m.dofs() << " dofs\n";
  const SnapshotMatrix S = build_snapshots(m, params);
  ctx.store.put_matrix("snapshots.mork", S.columns);
  ctx.store.put_matrix("parameters.mork", stack_columns(params));
  ctx.store.put_table("parameters.csv", parameter_table(m, params), PlotFormat::Csv);

  const CorrelationEig c = correlation_eig(S.columns, m.metric());
  Table spec({"k", "eigenvalue", "relative"});
  for (Index k = 0; k < c.eigenvalues.size(); ++k)
    spec.row(std::vector<double>{static_cast<double>(k + 1), c.eigenvalues(k), c.eigenvalues(k) / c.eigenvalues(0)});
  ctx.store.put_table("spectrum.dat", spec, PlotFormat::Dat);
}

void run_basis(Context &ctx)
{
  require_seed(ctx);
  ctx.cfg.require_section("basis");
  const HighFidelityModel m = build_model(ctx.cfg);
  const auto params = training_set(ctx, m, "sampling.train");
  const std::string method = ctx.variant;

  std::optional<ReducedBasis> rb;
  if (method == "pod")
  {
    const Index N = positive_int(ctx.cfg, "basis.N");
    ctx.log << "basis pod: " << params.size() << " snapshots, N = " << N << "\n";
    const SnapshotMatrix S = build_snapshots(m, params);
    rb.emplace(pod(S, m.metric(), N, ctx.cfg.get_bool("basis.centered", false)));
    Table sv({"k", "singular_value"});
    for (Index k = 0; k < rb->singular_values->size(); ++k)
      sv.row(std::vector<double>{static_cast<double>(k + 1), (*rb->singular_values)(k)});
    ctx.store.put_table("singular_values.dat", sv, PlotFormat::Dat);
    if (ctx.cfg.get_bool("basis.centered", false))
      ctx.store.put_matrix("mean.mork", Vector(S.columns.rowwise().mean()));
  }
  else if (method == "greedy")
  {
    const double eps = ctx.cfg.get_double("basis.epsilon", 0.0);
    const Index N_max = positive_int(ctx.cfg, "basis.N_max", ctx.cfg.has("basis.N") ? positive_int(ctx.cfg, "basis.N") : 0);
    ctx.log << "basis greedy: training set " << params.size() << ", N_max = " << N_max << "\n";
    rb.emplace(weak_greedy(m, params, eps, N_max));
  }
  else
  {
    const Index N = positive_int(ctx.cfg, "basis.N");
    const Index M2 = positive_int(ctx.cfg, "sampling.M2", positive_int(ctx.cfg, "basis.M2", 2 * N));
    ctx.log << "basis gss: training set " << params.size() << ", M2 = " << M2 << ", N = " << N << "\n";
    rb.emplace(gss(m, params, M2, N));
  }

  ctx.store.put_matrix("basis.mork", rb->basis.columns());
  if (!rb->selected_indices.empty())
    ctx.store.put_table("selection.csv", selection_table(m, *rb), PlotFormat::Csv);
  put_notes(ctx, rb->notes);

  if (ctx.cfg.has("sampling.test"))
  {
    const auto tp = test_set(ctx, m);
    const SnapshotMatrix T = build_snapshots(m, tp);
    const Matrix curve = projection_error_curve(T, rb->basis, ctx.cfg.get_bool("basis.relative", true));
    ctx.store.put_table("errors.csv", error_curve_table(curve), PlotFormat::Csv);
  }
}

void run_compare_bases(Context &ctx)
{
  require_seed(ctx);
  ctx.cfg.require_section("basis");
  const HighFidelityModel m = build_model(ctx.cfg);
  const auto train = training_set(ctx, m, "sampling.M1");
  const Index M2 = positive_int(ctx.cfg, "sampling.M2");
  const Index M_pod = positive_int(ctx.cfg, "sampling.M_pod", M2);
  const Index N_min = positive_int(ctx.cfg, "basis.N_min", 1);
  const Index N_max = positive_int(ctx.cfg, "basis.N_max");
  const bool relative = ctx.cfg.get_bool("basis.relative", true);
  if (N_min > N_max || N_max > M2 || N_max > M_pod || M2 > static_cast<Index>(train.size()) ||
      M_pod > static_cast<Index>(train.size()))
    throw ConfigError("compare-bases needs N_min <= N_max <= min(M2, M_pod) and M2, M_pod <= M1");

  ctx.log << "compare-bases: greedy sampling " << M2 << " of " << train.size() << " parameters\n";
  // One greedy pass serves both methods: the greedy basis is its nested Gram-Schmidt
  // basis, and GSS compresses the M2 selected snapshots with POD.
  GreedyRun run = greedy_sample(m, train, GreedyOptions{-1.0, M2, 0});
  if (run.snapshots.size() < N_max)
    throw RankDeficient("greedy phase stopped before N_max snapshots", run.snapshots.size());
  put_notes(ctx, run.notes);
  const SubspaceBasis greedy_basis = run.orthonormal.leading(N_max);
  const SubspaceBasis gss_basis = pod(run.snapshots, m.metric(), N_max).basis;

  ctx.log << "compare-bases: POD on " << M_pod << " snapshots\n";
  const std::vector<ParameterVector> pod_params(train.begin(), train.begin() + M_pod);
  const SubspaceBasis pod_basis = pod(build_snapshots(m, pod_params), m.metric(), N_max).basis;

  const auto tp = test_set(ctx, m);
  ctx.log << "compare-bases: " << tp.size() << " test solves\n";
  const SnapshotMatrix T = build_snapshots(m, tp);

  const std::vector<std::pair<std::string, const SubspaceBasis *>> methods = {
    {"pod", &pod_basis}, {"greedy", &greedy_basis}, {"gss", &gss_basis}};
  std::vector<Matrix> curves;
  for (const auto &[name, V] : methods)
    curves.push_back(projection_error_curve(T, *V, relative));

  Table longform({"N", "method", "mean", "max"});
  Table mean_t({"N", "pod", "greedy", "gss"});
  Table max_t({"N", "pod", "greedy", "gss"});
  for (Index N = N_min; N <= N_max; ++N)
  {
    std::vector<double> mr{static_cast<double>(N)}, xr{static_cast<double>(N)};
    for (std::size_t k = 0; k < methods.size(); ++k)
    {
      const auto row = curves[k].row(N - 1);
      longform.row(std::vector<std::string>{std::to_string(N), methods[k].first, format_number(row.mean()),
                                            format_number(row.maxCoeff())});
      mr.push_back(row.mean());
      xr.push_back(row.maxCoeff());
    }
    mean_t.row(mr);
    max_t.row(xr);
  }
  ctx.store.put_table("errors.csv", longform, PlotFormat::Csv);
  ctx.store.put_table("bases_mean.csv", mean_t, PlotFormat::Csv);
  ctx.store.put_table("bases_max.csv", max_t, PlotFormat::Csv);
  ctx.store.put_table("bases_mean.dat", mean_t, PlotFormat::Dat);
  ctx.store.put_table("bases_max.dat", max_t, PlotFormat::Dat);

  ReducedBasis trace(greedy_basis, Construction::Greedy);
  trace.selected_indices = run.selected_indices;
  trace.selected_parameters = run.snapshots.parameters;
  trace.max_estimates = run.max_estimates;
  ctx.store.put_table("greedy_selection.csv", selection_table(m, trace), PlotFormat::Csv);
}

void run_ncrba_train(Context &ctx)
{
  require_seed(ctx);
  const HighFidelityModel m = build_model(ctx.cfg);
  const NcrbaModel model = train_ncrba(ctx, m);
  const RegressorSpec spec = regressor_spec(ctx.cfg);
  store_ncrba(ctx, model, spec);

  Table summary({"quantity", "value"});
  summary.row(std::vector<std::string>{"n", std::to_string(model.n)});
  summary.row(std::vector<std::string>{"N", std::to_string(model.N())});
  summary.row(std::vector<std::string>{"regressor", kind_name(model.psi_hat.kind())});
  if (model.psi_hat.kind() == CoefficientRegressor::Kind::Polynomial)
  {
    const RegressionReport &r = model.psi_hat.polynomial_model().training_report;
    summary.row(std::vector<std::string>{"training_rms", format_number(r.rms)});
    summary.row(std::vector<std::string>{"training_max_abs", format_number(r.max_abs)});
    summary.row(std::vector<std::string>{"feature_rank", std::to_string(r.rank)});
  }
  ctx.store.put_table("summary.csv", summary, PlotFormat::Csv);
  if (model.heldout_mae.size() > 0)
  {
    Table mae({"coefficient", "heldout_mae"});
    for (Index j = 0; j < model.heldout_mae.size(); ++j)
      mae.row(std::vector<double>{static_cast<double>(model.n + j + 1), model.heldout_mae(j)});
    ctx.store.put_table("heldout.csv", mae, PlotFormat::Csv);
  }
}

void run_ncrba_solve(Context &ctx)
{
  require_seed(ctx);
  ctx.cfg.require_section("ncrba");
  const HighFidelityModel m = build_model(ctx.cfg);
  const std::string model_dir = ctx.cfg.get_string("ncrba.model_dir", "");
  const NcrbaModel model = model_dir.empty() ? train_ncrba(ctx, m) : load_ncrba(model_dir, m);
  const PicardOptions opts = picard_options(ctx.cfg);
  const ReducedSystem reduced = reduce_system(m, model.basis);

  const auto tp = test_set(ctx, m);
  const std::size_t K = tp.size();
  ctx.log << "ncrba-solve: n = " << model.n << ", N = " << model.N() << ", " << K << " test parameters\n";

  struct Outcome
  {
    std::string status = "ok";
    Index iterations = 0;
    double residual = std::numeric_limits<double>::quiet_NaN();
    double ncrba = std::numeric_limits<double>::quiet_NaN();
    double projection = 0.0;
    double galerkin = 0.0;
  };
  std::vector<Outcome> out(K);
  const InnerProduct &X = m.metric();
  parallel_for(K, [&](std::size_t j) {
    const Vector u = solve_high_fidelity(m, tp[j]);
    const double un = X.norm(u);
    Outcome &o = out[j];
    o.projection = X.norm(u - model.basis.project(u)) / un;
    o.galerkin = X.norm(u - model.basis.columns() * galerkin_coefficients(reduced, tp[j])) / un;
    try
    {
      const PicardResult r = ncrba_online_solve(model, reduced, tp[j], opts);
      o.iterations = r.iterations;
      o.residual = *std::min_element(r.trace.begin(), r.trace.end());
      o.ncrba = X.norm(u - ncrba_lift(model, r.alpha_low)) / un;
    }
    catch (const NoConvergence &)
    {
      o.status = "no_convergence";
    }
    catch (const Diverged &)
    {
      o.status = "diverged";
    }
  });

  std::vector<std::string> cols{"index"};
  for (const auto &n : parameter_names(m))
    cols.push_back(n);
  for (const char *c : {"status", "iterations", "residual", "ncrba_error", "projection_error", "galerkin_error"})
    cols.push_back(c);
  Table t(cols);
  double sum_ok = 0.0, sum_proj = 0.0, sum_gal = 0.0;
  Index ok = 0;
  for (std::size_t j = 0; j < K; ++j)
  {
    std::vector<std::string> row{std::to_string(j)};
    for (Index i = 0; i < tp[j].size(); ++i)
      row.push_back(format_number(tp[j](i)));
    const Outcome &o = out[j];
    row.insert(row.end(), {o.status, std::to_string(o.iterations), format_number(o.residual), format_number(o.ncrba),
                           format_number(o.projection), format_number(o.galerkin)});
    t.row(row);
    sum_proj += o.projection;
    sum_gal += o.galerkin;
    if (o.status == "ok")
    {
      sum_ok += o.ncrba;
      ++ok;
    }
  }
  ctx.store.put_table("solve.csv", t, PlotFormat::Csv);

  const double Kd = static_cast<double>(K);
  Table summary({"quantity", "value"});
  summary.row(std::vector<std::string>{"test_parameters", std::to_string(K)});
  summary.row(std::vector<std::string>{"converged", std::to_string(ok)});
  summary.row(std::vector<std::string>{"mean_ncrba_error_converged",
                                       format_number(ok ? sum_ok / static_cast<double>(ok)
                                                        : std::numeric_limits<double>::quiet_NaN())});
  summary.row(std::vector<std::string>{"mean_projection_error", format_number(sum_proj / Kd)});
  summary.row(std::vector<std::string>{"mean_galerkin_error", format_number(sum_gal / Kd)});
  ctx.store.put_table("summary.csv", summary, PlotFormat::Csv);
  if (ok < static_cast<Index>(K))
    ctx.log << "ncrba-solve: " << (static_cast<Index>(K) - ok) << " of " << K << " Picard solves did not converge\n";
}

void run_quadratic(Context &ctx)
{
  require_seed(ctx);
  ctx.cfg.require_section("quadratic");
  const HighFidelityModel m = build_model(ctx.cfg);
  const FeatureKind kind = feature_kind_from_string(ctx.cfg.get_string("quadratic.map", "homogeneous_quadratic"));
  const int degree = static_cast<int>(positive_int(ctx.cfg, "quadratic.degree", 2));
  const bool centered = ctx.cfg.get_bool("quadratic.centered", false);
  const std::vector<std::int64_t> ns = ctx.cfg.get_ints("quadratic.n", {});
  if (ns.empty())
    throw ConfigError("missing key 'quadratic.n'");
  const bool greedy = ctx.variant == "qgm";
  const Index r = greedy ? positive_int(ctx.cfg, "quadratic.r") : 0;

  const auto params = training_set(ctx, m, "sampling.train");
  ctx.log << "quadratic " << ctx.variant << ": " << params.size() << " training snapshots\n";
  const SnapshotMatrix S = build_snapshots(m, params);
  std::optional<SnapshotMatrix> T;
  if (ctx.cfg.has("sampling.test"))
    T = build_snapshots(m, test_set(ctx, m));

  Table t({"n", "method", "map", "objective", "train_mean", "test_mean", "test_max", "linear_part_test_mean"});
  for (std::int64_t n64 : ns)
  {
    if (n64 <= 0)
      throw ConfigError("quadratic.n entries must be positive");
    const Index n = static_cast<Index>(n64);
    const FeatureMap map(kind, n, degree);
    const QuadManifold qm = greedy ? qgm_train(S, m.metric(), n, r, map, centered)
                                   : qsvdm_train(S, m.metric(), n, map, centered);
    const double train_mean = quad_errors(qm, S, true).mean;
    double test_mean = std::numeric_limits<double>::quiet_NaN(), test_max = test_mean, lin = test_mean;
    if (T)
    {
      const ProjectionErrors e = quad_errors(qm, *T, true);
      test_mean = e.mean;
      test_max = e.max;
      QuadManifold flat = qm;
      flat.W.setZero();
      lin = quad_errors(flat, *T, true).mean;
    }
    t.row(std::vector<std::string>{std::to_string(n), ctx.variant, to_string(kind), format_number(qm.objective),
                                   format_number(train_mean), format_number(test_mean), format_number(test_max),
                                   format_number(lin)});
    const std::string dir = "manifold_n" + std::to_string(n) + "/";
    ctx.store.put_matrix(dir + "V.mork", qm.V.columns());
    ctx.store.put_matrix(dir + "W.mork", qm.W);
    ctx.store.put_matrix(dir + "shift.mork", qm.shift);
    Vector modes(static_cast<Index>(qm.selected_modes.size()));
    for (std::size_t k = 0; k < qm.selected_modes.size(); ++k)
      modes(static_cast<Index>(k)) = static_cast<double>(qm.selected_modes[k]);
    ctx.store.put_matrix(dir + "modes.mork", modes);
  }
  ctx.store.put_table("quadratic.csv", t, PlotFormat::Csv);
}

void run_toy_quadratic(Context &ctx)
{
  ctx.cfg.require_section("toy");
  const Index M = positive_int(ctx.cfg, "toy.M");
  const double mu_max = ctx.cfg.get_double("toy.mu_max");
  const double c1 = ctx.cfg.get_double("toy.c1");
  const double c2 = ctx.cfg.get_double("toy.c2");
  const std::int64_t sign = ctx.cfg.get_int("toy.beta_sign", 1);
  if (sign != 1 && sign != -1)
    throw ConfigError("toy.beta_sign must be 1 or -1");
  const ToyQuadratic toy = build_toy_quadratic(M, mu_max, c1, c2, static_cast<int>(sign));
  SnapshotMatrix S;
  S.columns = toy.snapshots;
  const InnerProduct I2 = InnerProduct::identity(2);
  const bool centered = ctx.cfg.get_bool("quadratic.centered", false);

  Table data({"mu", "x1", "x2"});
  for (Index j = 0; j < M; ++j)
    data.row(std::vector<double>{toy.mu(j), S.columns(0, j), S.columns(1, j)});
  ctx.store.put_table("data.dat", data, PlotFormat::Dat);

  Table summary({"method", "map", "max_error", "mean_error", "error_at_center", "c2_beta"});
  const double c2beta = toy.config.c2 * toy.config.beta;
  Index center = 0;
  for (Index j = 1; j < M; ++j)
    if (std::abs(toy.mu(j)) < std::abs(toy.mu(center)))
      center = j;
  for (const char *method : {"qsvdm", "qgm"})
    for (FeatureKind kind : {FeatureKind::HomogeneousQuadratic, FeatureKind::FullQuadratic})
    {
      const FeatureMap map(kind, 1);
      const QuadManifold qm = std::string(method) == "qsvdm" ? qsvdm_train(S, I2, 1, map, centered)
                                                              : qgm_train(S, I2, 1, 2, map, centered);
      const ProjectionErrors e = quad_errors(qm, S);
      summary.row(std::vector<std::string>{method, to_string(kind), format_number(e.max), format_number(e.mean),
                                           format_number(e.errors(center)), format_number(c2beta)});
      if (std::string(method) == "qsvdm")
      {
        Table rec({"mu", "x1", "x2"});
        for (Index j = 0; j < M; ++j)
        {
          const Vector x = quad_reconstruct_snapshot(qm, S.columns.col(j));
          rec.row(std::vector<double>{toy.mu(j), x(0), x(1)});
        }
        ctx.store.put_table(kind == FeatureKind::FullQuadratic ? "full.dat" : "homogeneous.dat", rec, PlotFormat::Dat);
      }
    }
  ctx.store.put_table("summary.csv", summary, PlotFormat::Csv);
}

void run_taylor_convergence(Context &ctx)
{
  require_seed(ctx);
  const HighFidelityModel m = build_model(ctx.cfg);
  const LocalChart chart = build_chart(ctx, m);
  const std::vector<double> radii = chart_radii(ctx.cfg);
  ctx.log << "taylor-convergence: q = " << chart.q() << ", " << chart.samples() << " directions, " << radii.size()
          << " radii\n";

  Table summary = fit_summary();
  const ConvergenceSeries tangent = tangent_convergence_experiment(chart, radii);
  put_series(ctx, "tangent", tangent);
  add_fit(summary, "tangent", tangent.fit);

  const ConvergenceSeries cf = curvature_convergence_experiment(chart, radii, true);
  put_series(ctx, "curvature_filtered", cf);
  add_fit(summary, "curvature_filtered", cf.fit);
  const ConvergenceSeries cu = curvature_convergence_experiment(chart, radii, false);
  put_series(ctx, "curvature_unfiltered", cu);
  add_fit(summary, "curvature_unfiltered", cu.fit);

  const ConvergenceSeries al = alignment_experiment(chart, radii);
  put_series(ctx, "alignment", al);
  add_fit(summary, "alignment", al.fit);
  ctx.store.put_table("summary.csv", summary, PlotFormat::Csv);

  const std::vector<double> gaps = singular_gap_ratios(chart, radii);
  ctx.store.put_table("gap.dat", series_table(radii, gaps, "gap_ratio"), PlotFormat::Dat);
}

void run_quad_law(Context &ctx)
{
  require_seed(ctx);
  const HighFidelityModel m = build_model(ctx.cfg);
  const LocalChart chart = build_chart(ctx, m);
  const std::vector<double> radii = chart_radii(ctx.cfg);
  ctx.log << "quad-law: q = " << chart.q() << ", " << radii.size() << " radii\n";

  Table summary = fit_summary();
  for (bool filtered : {true, false})
    for (FeatureKind kind : {FeatureKind::HomogeneousQuadratic, FeatureKind::FullQuadratic})
    {
      const ConvergenceSeries s = quadratic_law_fit(chart, radii, kind, filtered);
      const std::string name = std::string(kind == FeatureKind::FullQuadratic ? "full" : "homogeneous") + "_" +
                               (filtered ? "filtered" : "unfiltered");
      put_series(ctx, "quad_law_" + name, s);
      add_fit(summary, name, s.fit);
    }
  ctx.store.put_table("summary.csv", summary, PlotFormat::Csv);

  Table coef({"r", "max_residual", "scaled", "linear_fit_residual"});
  for (double r : radii)
  {
    const CoefficientCheck c = coefficient_map_check(chart, r);
    coef.row(std::vector<double>{r, c.max_residual, c.scaled, c.linear_fit_residual});
  }
  ctx.store.put_table("coefficient_map.dat", coef, PlotFormat::Dat);

  const double rj = ctx.cfg.get_double("manifold.jacobian_radius", std::ldexp(1.0, -6));
  const Index points = positive_int(ctx.cfg, "manifold.jacobian_points", 20);
  const Index pairs = positive_int(ctx.cfg, "manifold.injectivity_pairs", 200);
  const JacobianReport jr =
    jacobian_condition_check(chart, rj, points, pairs, Rng(*ctx.seed).stream("jacobian").engine()());
  Table jt({"quantity", "value"});
  jt.row(std::vector<std::string>{"radius", format_number(rj)});
  jt.row(std::vector<std::string>{"min_singular_value", format_number(jr.min_singular_value)});
  jt.row(std::vector<std::string>{"largest_min_singular_value", format_number(jr.largest_min_singular_value)});
  jt.row(std::vector<std::string>{"injectivity_margin", format_number(jr.injectivity_margin)});
  jt.row(std::vector<std::string>{"pairs", std::to_string(jr.pairs)});
  ctx.store.put_table("jacobian.csv", jt, PlotFormat::Csv);
}

void run_report(Context &ctx)
{
  const fs::path root(ctx.store.root());
  std::vector<std::string> manifests;
  for (const auto &entry : fs::recursive_directory_iterator(root))
    if (entry.is_regular_file() && entry.path().filename() == "manifest.json")
      manifests.push_back(fs::relative(entry.path(), root).generic_string());
  std::sort(manifests.begin(), manifests.end());

  Table t({"manifest", "subcommand", "artifacts", "mismatched"});
  std::string text;
  for (const auto &rel : manifests)
  {
    const std::string path = (root / rel).string();
    nlohmann::json j;
    try
    {
      j = nlohmann::json::parse(read_text(path));
    }
    catch (const nlohmann::json::exception &e)
    {
      throw FormatError(path + ": " + e.what());
    }
    const std::string sub = j.value("subcommand", std::string("?"));
    if (sub == "report")
      continue;
    if (rel == "manifest.json")
      throw ConfigError("report output directory " + root.string() +
                        " holds a '" + sub + "' manifest; point --out at its parent directory");
    const auto bad = verify_manifest(path);
    const std::size_t artifacts = j.contains("artifacts") ? j["artifacts"].size() : 0;
    t.row(std::vector<std::string>{rel, sub, std::to_string(artifacts), std::to_string(bad.size())});
    text += "== " + rel + " (" + sub + ")\n";
    for (const auto &[name, actual] : bad)
      text += "  MISMATCH " + name + " -> " + actual + "\n";
    const fs::path summary = fs::path(path).parent_path() / "summary.csv";
    if (fs::exists(summary))
      text += read_text(summary.string());
  }
  if (t.empty())
    throw PreconditionViolation("no experiment manifests found under " + root.string());
  ctx.store.put_table("report.csv", t, PlotFormat::Csv);
  ctx.store.put_bytes("report.txt", text);
}

}  // namespace morkit::harness::detail
