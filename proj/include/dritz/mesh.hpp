#pragma once

#include <Eigen/Dense>

#include <array>
#include <iosfwd>
#include <vector>

namespace dritz {

// Simplex element: segment (2 vertex ids, v[2] unused = -1) or triangle
// (counterclockwise vertex ids).
struct Element {
  std::array<int, 3> v{-1, -1, -1};
  double measure = 0.0;
  double diameter = 0.0;
};

struct Edge {
  int id = -1;
  bool interior = false;
  int plus_element = -1;   // the element with the LARGER global index
  int minus_element = -1;  // absent (-1) on boundary edges
  Eigen::Vector2d normal = Eigen::Vector2d::Zero();  // unit, points plus -> minus
  double size = 0.0;                                 // h_e
  double gamma = 0.0;                                // penalty parameter
  // Geometry: 1D edges are single points (p0 == p1); 2D edges are segments.
  Eigen::Vector2d p0 = Eigen::Vector2d::Zero();
  Eigen::Vector2d p1 = Eigen::Vector2d::Zero();
};

struct Mesh {
  int dimension = 1;
  std::vector<Eigen::Vector2d> vertices;
  std::vector<Element> elements;
  std::vector<Edge> interior_edges;
  std::vector<Edge> boundary_edges;  // ids continue after the interior ones

  int num_elements() const { return static_cast<int>(elements.size()); }
  double domain_measure() const;
  // Plain-text dump: one line per vertex (coordinates), then one line per
  // element (vertex ids).
  void dump(std::ostream& os) const;
};

// n uniform elements on (a, b); edges are points with h_e = (b-a)/n.
Mesh build_interval_mesh(int n, double a, double b, double gamma);

// n x n uniform cells on a unit square anchored at `origin`, each split into
// two triangles by the same diagonal direction.
Mesh build_unit_square_tri_mesh(int n, double gamma,
                                std::array<double, 2> origin = {0.0, 0.0});

struct EdgeGeometry {
  Eigen::Vector2d normal;
  double size;
  int plus_element;
  int minus_element;  // -1 on boundary edges
};

// Stored orientation data for the edge with the given global id.
EdgeGeometry edge_geometry(const Mesh& mesh, int edge_id);

}  // namespace dritz
