#include "mpe/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>
#include <utility>

namespace mpe {

namespace {

constexpr double kGeomTol = 1e-12;

bool on_interface_line(const Vec2& a, const Vec2& b) {
  return std::abs(a.x()) <= kGeomTol && std::abs(b.x()) <= kGeomTol;
}

}  // namespace

Mesh::Mesh(std::vector<Vec2> vertices, std::vector<Triangle> triangles)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
  // Orient every triangle counterclockwise.
  for (auto& tri : triangles_) {
    const Vec2& a = vertices_[tri.v[0]];
    const Vec2& b = vertices_[tri.v[1]];
    const Vec2& c = vertices_[tri.v[2]];
    const double twice_area =
        (b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y());
    if (twice_area == 0.0) throw std::invalid_argument("Mesh: degenerate triangle");
    if (twice_area < 0.0) std::swap(tri.v[1], tri.v[2]);
  }

  // Build edges with owner adjacency.
  std::map<std::pair<int, int>, int> edge_of;
  tri_edges_.resize(triangles_.size());
  for (int t = 0; t < num_triangles(); ++t) {
    for (int k = 0; k < 3; ++k) {
      const int a = triangles_[t].v[k];
      const int b = triangles_[t].v[(k + 1) % 3];
      const auto key = std::minmax(a, b);
      auto [it, inserted] = edge_of.try_emplace(key, num_edges());
      if (inserted) {
        Edge e;
        e.v = {key.first, key.second};
        e.owner[0] = t;
        edges_.push_back(e);
      } else {
        Edge& e = edges_[it->second];
        if (e.owner[1] != -1)
          throw std::invalid_argument("Mesh: edge owned by more than two triangles");
        e.owner[1] = t;
      }
      tri_edges_[t][k] = it->second;
    }
  }

  // Classify and set canonical normals (outward from owner[0]; for interface
  // edges owner[0] is swapped to the elastic side first).
  for (auto& e : edges_) {
    if (e.owner[1] == -1) {
      e.kind = triangles_[e.owner[0]].tag == Subdomain::Elastic
                   ? EdgeKind::BoundaryElastic
                   : EdgeKind::BoundaryFluid;
    } else {
      const Subdomain t0 = triangles_[e.owner[0]].tag;
      const Subdomain t1 = triangles_[e.owner[1]].tag;
      if (t0 == t1) {
        e.kind = t0 == Subdomain::Elastic ? EdgeKind::InteriorElastic
                                          : EdgeKind::InteriorFluid;
      } else {
        e.kind = EdgeKind::Interface;
        if (t0 != Subdomain::Elastic) std::swap(e.owner[0], e.owner[1]);
      }
    }
    const Vec2 tangent = (vertices_[e.v[1]] - vertices_[e.v[0]]).normalized();
    Vec2 n(tangent.y(), -tangent.x());
    const Vec2 mid = 0.5 * (vertices_[e.v[0]] + vertices_[e.v[1]]);
    if (n.dot(mid - centroid(e.owner[0])) < 0.0) n = -n;
    e.normal = n;
  }
}

Vec2 Mesh::outward_normal(int e, int t) const {
  const Edge& edge = edges_[e];
  if (t == edge.owner[0]) return edge.normal;
  if (t == edge.owner[1]) return -edge.normal;
  throw std::invalid_argument("Mesh::outward_normal: triangle does not own edge");
}

Vec2 Mesh::centroid(int t) const {
  const auto& tri = triangles_[t];
  return (vertices_[tri.v[0]] + vertices_[tri.v[1]] + vertices_[tri.v[2]]) / 3.0;
}

double Mesh::area(int t) const {
  const auto& tri = triangles_[t];
  const Vec2 ab = vertices_[tri.v[1]] - vertices_[tri.v[0]];
  const Vec2 ac = vertices_[tri.v[2]] - vertices_[tri.v[0]];
  return 0.5 * (ab.x() * ac.y() - ac.x() * ab.y());
}

double Mesh::diameter(int t) const {
  const auto& tri = triangles_[t];
  double h = 0.0;
  for (int k = 0; k < 3; ++k) {
    const Vec2 d = vertices_[tri.v[(k + 1) % 3]] - vertices_[tri.v[k]];
    h = std::max(h, d.norm());
  }
  return h;
}

double Mesh::edge_length(int e) const {
  return (vertices_[edges_[e].v[1]] - vertices_[edges_[e].v[0]]).norm();
}

double Mesh::max_diameter() const {
  double h = 0.0;
  for (int t = 0; t < num_triangles(); ++t) h = std::max(h, diameter(t));
  return h;
}

Mat2 Mesh::jacobian(int t) const {
  const auto& tri = triangles_[t];
  Mat2 J;
  J.col(0) = vertices_[tri.v[1]] - vertices_[tri.v[0]];
  J.col(1) = vertices_[tri.v[2]] - vertices_[tri.v[0]];
  return J;
}

Vec2 Mesh::to_reference(int t, const Vec2& x) const {
  return jacobian(t).inverse() * (x - vertices_[triangles_[t].v[0]]);
}

Vec2 Mesh::to_physical(int t, const Vec2& xhat) const {
  return vertices_[triangles_[t].v[0]] + jacobian(t) * xhat;
}

Mesh build_two_square_mesh(int n) {
  if (n < 1) throw std::invalid_argument("build_two_square_mesh: n must be >= 1");
  const double h = 0.5 / n;
  const int ncols = 2 * n + 1;

  std::vector<Vec2> vertices;
  vertices.reserve(static_cast<std::size_t>(ncols) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i < ncols; ++i)
      vertices.emplace_back(-0.5 + i * h, j * h);

  const auto vid = [&](int i, int j) { return j * ncols + i; };

  std::vector<Triangle> triangles;
  triangles.reserve(static_cast<std::size_t>(4) * n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < 2 * n; ++i) {
      const Subdomain tag = i < n ? Subdomain::Elastic : Subdomain::Fluid;
      const int v00 = vid(i, j), v10 = vid(i + 1, j);
      const int v11 = vid(i + 1, j + 1), v01 = vid(i, j + 1);
      triangles.push_back({{v00, v10, v11}, tag});
      triangles.push_back({{v00, v11, v01}, tag});
    }
  }
  return Mesh(std::move(vertices), std::move(triangles));
}

Mesh uniform_refine(const Mesh& mesh) {
  std::vector<Vec2> vertices = mesh.vertices();
  std::vector<int> midpoint(mesh.num_edges());
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const auto& edge = mesh.edges()[e];
    midpoint[e] = static_cast<int>(vertices.size());
    vertices.push_back(0.5 * (mesh.vertices()[edge.v[0]] + mesh.vertices()[edge.v[1]]));
  }

  std::vector<Triangle> triangles;
  triangles.reserve(static_cast<std::size_t>(4) * mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles()[t];
    const auto& te = mesh.triangle_edges(t);
    const int m01 = midpoint[te[0]], m12 = midpoint[te[1]], m20 = midpoint[te[2]];
    triangles.push_back({{tri.v[0], m01, m20}, tri.tag});
    triangles.push_back({{m01, tri.v[1], m12}, tri.tag});
    triangles.push_back({{m20, m12, tri.v[2]}, tri.tag});
    triangles.push_back({{m01, m12, m20}, tri.tag});
  }
  return Mesh(std::move(vertices), std::move(triangles));
}

FacetSet classify_facets(const Mesh& mesh) {
  FacetSet fs;
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Edge& edge = mesh.edges()[e];
    switch (edge.kind) {
      case EdgeKind::InteriorElastic:
        fs.interior_elastic.push_back(e);
        break;
      case EdgeKind::InteriorFluid:
        fs.interior_fluid.push_back(e);
        break;
      case EdgeKind::Interface:
        fs.interface.push_back(e);
        break;
      case EdgeKind::BoundaryElastic:
      case EdgeKind::BoundaryFluid: {
        const Vec2& a = mesh.vertices()[edge.v[0]];
        const Vec2& b = mesh.vertices()[edge.v[1]];
        if (on_interface_line(a, b))
          throw std::invalid_argument(
              "classify_facets: edge on the interface line is owned on one side only");
        if (edge.kind == EdgeKind::BoundaryElastic) {
          fs.dirichlet_d.push_back(e);
          fs.dirichlet_j.push_back(e);
        } else {
          fs.dirichlet_u.push_back(e);
        }
        break;
      }
    }
  }
  return fs;
}

ElementGeometry element_geometry(const Mesh& mesh, int t) {
  if (t < 0 || t >= mesh.num_triangles())
    throw std::out_of_range("element_geometry: invalid element id");
  ElementGeometry g;
  g.h = mesh.diameter(t);
  g.area = mesh.area(t);
  const auto& te = mesh.triangle_edges(t);
  for (int k = 0; k < 3; ++k) g.edge_normals[k] = mesh.outward_normal(te[k], t);
  return g;
}

void dump_mesh(const Mesh& mesh, std::ostream& os) {
  os << "vertices " << mesh.num_vertices() << " triangles " << mesh.num_triangles()
     << "\n";
  for (const auto& v : mesh.vertices()) os << v.x() << " " << v.y() << "\n";
  for (const auto& t : mesh.triangles())
    os << t.v[0] << " " << t.v[1] << " " << t.v[2] << " "
       << (t.tag == Subdomain::Elastic ? "elastic" : "fluid") << "\n";
}

}  // namespace mpe
