#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "mpe/geometry.hpp"

namespace mpe {

enum class Subdomain { Elastic, Fluid };

enum class EdgeKind {
  InteriorElastic,
  InteriorFluid,
  Interface,
  BoundaryElastic,
  BoundaryFluid,
};

struct Triangle {
  std::array<int, 3> v;
  Subdomain tag;
};

/// Mesh edge with owner adjacency. owner[0] is always valid; owner[1] is -1
/// for boundary edges. For interface edges owner[0] is the elastic triangle.
struct Edge {
  std::array<int, 2> v;
  std::array<int, 2> owner{-1, -1};
  EdgeKind kind = EdgeKind::BoundaryElastic;
  Vec2 normal;  // canonical unit normal; outward from owner[0]
};

/// Conforming triangulation of the two-subdomain geometry. Immutable after
/// construction; edge connectivity and classification are derived once.
class Mesh {
 public:
  Mesh(std::vector<Vec2> vertices, std::vector<Triangle> triangles);

  const std::vector<Vec2>& vertices() const { return vertices_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  const std::vector<Edge>& edges() const { return edges_; }

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_triangles() const { return static_cast<int>(triangles_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  /// Edge ids of triangle t; local edge k joins local vertices k and (k+1)%3.
  const std::array<int, 3>& triangle_edges(int t) const { return tri_edges_[t]; }

  /// Outward unit normal of edge e as seen from owning triangle t.
  Vec2 outward_normal(int e, int t) const;

  Vec2 centroid(int t) const;
  double area(int t) const;
  double diameter(int t) const;  // h_K, longest edge
  double edge_length(int e) const;
  double max_diameter() const;

  /// Affine map helpers: x = v0 + J * x̂ with x̂ in the unit reference triangle.
  Mat2 jacobian(int t) const;
  Vec2 to_reference(int t, const Vec2& x) const;
  Vec2 to_physical(int t, const Vec2& xhat) const;

 private:
  std::vector<Vec2> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<Edge> edges_;
  std::vector<std::array<int, 3>> tri_edges_;
};

/// Facet partition used by assembly and the residual estimators. The five
/// groups cover every edge exactly once; Dirichlet sets are per field tag.
struct FacetSet {
  std::vector<int> interior_elastic;
  std::vector<int> interior_fluid;
  std::vector<int> interface;
  std::vector<int> dirichlet_d;  // elastic outer boundary
  std::vector<int> dirichlet_j;  // elastic outer boundary (same split for all networks)
  std::vector<int> dirichlet_u;  // fluid outer boundary
};

/// Ω = (−0.5,0)×(0,0.5) ∪ (0,0.5)×(0,0.5), each square an n×n grid of cells
/// split bottom-left→top-right; interface Σ = {0}×(0,0.5) is vertex-matched.
Mesh build_two_square_mesh(int n);

/// Red refinement: every triangle into 4 congruent children via edge
/// midpoints. Classification tags are re-derived and consistent with parents.
Mesh uniform_refine(const Mesh& mesh);

/// Partition the edge set. Throws if an edge lies on Σ = {x=0} but is owned
/// on one side only (non-conforming input).
FacetSet classify_facets(const Mesh& mesh);

struct ElementGeometry {
  double h;     // diameter
  double area;
  std::array<Vec2, 3> edge_normals;  // outward, per local edge
};

ElementGeometry element_geometry(const Mesh& mesh, int t);

/// Plain-text debug dump: "vertices <n> triangles <m>", vertex and triangle
/// lines. Not a stability contract.
void dump_mesh(const Mesh& mesh, std::ostream& os);

}  // namespace mpe
