// Copyright The morkit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "morkit/models/thermal_fin.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "morkit/error.hpp"

namespace morkit
{
namespace
{

using Triplets = std::vector<Eigen::Triplet<double>>;

struct FinMesh
{
  MeshData data;
  Index n_nodes = 0;
};

std::vector<double> graded_axis(const std::vector<double> &breaks, int density, const char *axis)
{
  std::vector<double> out{breaks.front()};
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k)
  {
    const double len = breaks[k + 1] - breaks[k];
    const long cells = std::lround(len * density);
    if (cells < 1)
      throw MeshTooCoarse(std::string("interval of length ") + std::to_string(len) + " along " + axis +
                          " receives no elements at density " + std::to_string(density));
    for (long c = 1; c <= cells; ++c)
      out.push_back(c == cells ? breaks[k + 1] : breaks[k] + len * static_cast<double>(c) / cells);
  }
  return out;
}

std::vector<double> unique_sorted(std::vector<double> v)
{
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  for (double x : v)
    if (out.empty() || x - out.back() > 1e-12)
      out.push_back(x);
  return out;
}

FinMesh build_mesh(const FinGeometry &g, int density)
{
  if (g.subfins < 1)
    throw PreconditionViolation("the fin needs at least one subfin");
  if (density < 1)
    throw MeshTooCoarse("mesh density must be positive");
  if (!(g.post_half_width > 0 && g.fin_length > 0 && g.fin_thickness > 0 &&
        g.fin_spacing > g.fin_thickness && g.first_fin_offset > 0))
    throw PreconditionViolation("fin proportions are inconsistent");

  const double hw = g.post_half_width, L = g.fin_length, H = g.post_height();
  const std::vector<double> xb{-hw - L, -hw, hw, hw + L};
  std::vector<double> yb{0.0, H};
  for (int i = 0; i < g.subfins; ++i)
  {
    const double y0 = g.first_fin_offset + i * g.fin_spacing;
    yb.push_back(y0);
    yb.push_back(y0 + g.fin_thickness);
  }
  const std::vector<double> xs = graded_axis(xb, density, "x");
  const std::vector<double> ys = graded_axis(unique_sorted(yb), density, "y");
  const int nx = static_cast<int>(xs.size()) - 1, ny = static_cast<int>(ys.size()) - 1;

  // Region of each cell, -1 if outside the fin.
  std::vector<int> region(static_cast<std::size_t>(nx * ny), -1);
  std::vector<int> region_cells(static_cast<std::size_t>(g.subfins + 1), 0);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
    {
      const double xc = 0.5 * (xs[i] + xs[i + 1]), yc = 0.5 * (ys[j] + ys[j + 1]);
      int r = -1;
      if (std::abs(xc) < hw && yc < H)
        r = 0;
      else if (std::abs(xc) > hw && std::abs(xc) < hw + L)
        for (int f = 0; f < g.subfins; ++f)
        {
          const double y0 = g.first_fin_offset + f * g.fin_spacing;
          if (yc > y0 && yc < y0 + g.fin_thickness)
            r = f + 1;
        }
      region[static_cast<std::size_t>(j * nx + i)] = r;
      if (r >= 0)
        ++region_cells[static_cast<std::size_t>(r)];
    }
  for (std::size_t r = 0; r < region_cells.size(); ++r)
    if (region_cells[r] == 0)
      throw MeshTooCoarse("region " + std::to_string(r) + " has no elements");

  auto cell = [&](int i, int j) {
    if (i < 0 || j < 0 || i >= nx || j >= ny)
      return -1;
    return region[static_cast<std::size_t>(j * nx + i)];
  };

  // Row-major numbering of the grid nodes that touch an active cell.
  std::vector<int> id(static_cast<std::size_t>((nx + 1) * (ny + 1)), -1);
  int count = 0;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      if (cell(i, j) >= 0 || cell(i - 1, j) >= 0 || cell(i, j - 1) >= 0 || cell(i - 1, j - 1) >= 0)
        id[static_cast<std::size_t>(j * (nx + 1) + i)] = count++;
  auto node = [&](int i, int j) { return id[static_cast<std::size_t>(j * (nx + 1) + i)]; };

  FinMesh m;
  m.n_nodes = count;
  m.data.nodes.resize(2, count);
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      if (const int k = node(i, j); k >= 0)
      {
        m.data.nodes(0, k) = xs[i];
        m.data.nodes(1, k) = ys[j];
      }

  double hmax = 0.0;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
    {
      const int r = cell(i, j);
      if (r < 0)
        continue;
      hmax = std::max({hmax, xs[i + 1] - xs[i], ys[j + 1] - ys[j]});
      const int n00 = node(i, j), n10 = node(i + 1, j), n01 = node(i, j + 1), n11 = node(i + 1, j + 1);
      m.data.triangles.push_back({n00, n10, n11});
      m.data.triangles.push_back({n00, n11, n01});
      m.data.triangle_region.push_back(r);
      m.data.triangle_region.push_back(r);

      if (cell(i, j - 1) < 0)
      {
        if (j == 0 && r == 0)
          m.data.root_edges.push_back({n00, n10});
        else
          m.data.ext_edges.push_back({n00, n10});
      }
      if (cell(i, j + 1) < 0)
        m.data.ext_edges.push_back({n01, n11});
      if (cell(i - 1, j) < 0)
        m.data.ext_edges.push_back({n00, n01});
      if (cell(i + 1, j) < 0)
        m.data.ext_edges.push_back({n10, n11});
    }
  m.data.h_max = hmax;
  return m;
}

void add_stiffness(const MeshData &mesh, std::size_t t, double coeff, Triplets &out)
{
  const auto &tri = mesh.triangles[t];
  Eigen::Matrix<double, 3, 2> P;
  for (int a = 0; a < 3; ++a)
    P.row(a) = mesh.nodes.col(tri[static_cast<std::size_t>(a)]).transpose();
  Eigen::Matrix2d J;
  J.col(0) = (P.row(1) - P.row(0)).transpose();
  J.col(1) = (P.row(2) - P.row(0)).transpose();
  const double det = J.determinant();
  const double area = 0.5 * std::abs(det);
  Eigen::Matrix<double, 3, 2> dref;
  dref << -1, -1, 1, 0, 0, 1;
  const Eigen::Matrix<double, 3, 2> grad = dref * J.inverse();
  const Eigen::Matrix3d K = coeff * area * grad * grad.transpose();
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      out.emplace_back(tri[static_cast<std::size_t>(a)], tri[static_cast<std::size_t>(b)], K(a, b));
}

void add_edge_mass(const MeshData &mesh, const std::array<int, 2> &e, double coeff, Triplets &out)
{
  const double h = (mesh.nodes.col(e[0]) - mesh.nodes.col(e[1])).norm();
  const double d = coeff * h / 3.0, o = coeff * h / 6.0;
  out.emplace_back(e[0], e[0], d);
  out.emplace_back(e[1], e[1], d);
  out.emplace_back(e[0], e[1], o);
  out.emplace_back(e[1], e[0], o);
}

SparseMatrix to_sparse(Index n, const Triplets &t)
{
  SparseMatrix A(n, n);
  A.setFromTriplets(t.begin(), t.end());
  A.makeCompressed();
  return A;
}

}  // namespace

ParameterVector thermal_fin_reference(Index p)
{
  if (p < 1)
    throw PreconditionViolation("the fin needs at least one parameter");
  Vector mu = Vector::Ones(p);
  mu(p - 1) = 0.1;
  return mu;
}

HighFidelityModel build_thermal_fin(const FinGeometry &geometry, int mesh_density, Index p,
                                    ParameterVector reference)
{
  if (mesh_density < 2)
    throw MeshTooCoarse("mesh density must be at least 2");
  if (p < 1)
    throw PreconditionViolation("the fin needs at least one parameter");
  if (reference.size() == 0)
    reference = thermal_fin_reference(p);
  if (reference.size() != p)
    throw DimensionMismatch("reference parameter length differs from p");

  FinMesh m = build_mesh(geometry, mesh_density);
  const int nf = geometry.subfins;
  std::vector<Triplets> trip(static_cast<std::size_t>(nf + 2));
  for (std::size_t t = 0; t < m.data.triangles.size(); ++t)
    add_stiffness(m.data, t, 1.0, trip[static_cast<std::size_t>(m.data.triangle_region[t])]);
  for (const auto &e : m.data.ext_edges)
    add_edge_mass(m.data, e, 1.0, trip.back());

  Vector f = Vector::Zero(m.n_nodes);
  for (const auto &e : m.data.root_edges)
  {
    const double h = (m.data.nodes.col(e[0]) - m.data.nodes.col(e[1])).norm();
    f(e[0]) += 0.5 * h;
    f(e[1]) += 0.5 * h;
  }

  std::vector<SparseMatrix> blocks;
  std::vector<AffineTerm> terms;
  blocks.push_back(to_sparse(m.n_nodes, trip[0]));
  terms.push_back({"post", -1});
  for (int i = 1; i <= nf; ++i)
  {
    blocks.push_back(to_sparse(m.n_nodes, trip[static_cast<std::size_t>(i)]));
    const int param = (i - 1 < p - 1) ? i - 1 : -1;
    terms.push_back({"subfin" + std::to_string(i), param});
  }
  blocks.push_back(to_sparse(m.n_nodes, trip.back()));
  terms.push_back({"biot", static_cast<int>(p - 1)});

  return HighFidelityModel(std::move(blocks), std::move(terms), std::move(f),
                           ParameterDomain::thermal_fin(p), std::move(reference), std::move(m.data));
}

HighFidelityModel build_thermal_fin(int subfins, int mesh_density, const ParameterVector &reference)
{
  FinGeometry g;
  g.subfins = subfins;
  return build_thermal_fin(g, mesh_density, reference.size(), reference);
}

SparseMatrix assemble_thermal_fin_direct(const FinGeometry &geometry, int mesh_density,
                                         const ParameterVector &mu)
{
  const Index p = mu.size();
  if (p < 1)
    throw PreconditionViolation("the fin needs at least one parameter");
  FinMesh m = build_mesh(geometry, mesh_density);
  Triplets t;
  for (std::size_t e = 0; e < m.data.triangles.size(); ++e)
  {
    const int r = m.data.triangle_region[e];
    const double k = (r >= 1 && r - 1 < p - 1) ? mu(r - 1) : 1.0;
    add_stiffness(m.data, e, k, t);
  }
  for (const auto &edge : m.data.ext_edges)
    add_edge_mass(m.data, edge, mu(p - 1), t);
  return to_sparse(m.n_nodes, t);
}

}  // namespace morkit
