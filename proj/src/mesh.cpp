#include "dritz/mesh.hpp"

#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>
#include <utility>

namespace dritz {

double Mesh::domain_measure() const {
  double s = 0.0;
  for (const Element& e : elements) s += e.measure;
  return s;
}

void Mesh::dump(std::ostream& os) const {
  for (const Eigen::Vector2d& v : vertices) {
    os << v.x();
    if (dimension == 2) os << ' ' << v.y();
    os << '\n';
  }
  for (const Element& e : elements) {
    os << e.v[0] << ' ' << e.v[1];
    if (dimension == 2) os << ' ' << e.v[2];
    os << '\n';
  }
}

Mesh build_interval_mesh(int n, double a, double b, double gamma) {
  if (n < 1) throw std::invalid_argument("build_interval_mesh: n must be >= 1");
  if (!(a < b)) throw std::invalid_argument("build_interval_mesh: need a < b");
  if (gamma < 0.0) throw std::invalid_argument("build_interval_mesh: gamma must be >= 0");
  Mesh mesh;
  mesh.dimension = 1;
  const double h = (b - a) / n;
  mesh.vertices.reserve(n + 1);
  for (int i = 0; i <= n; ++i) mesh.vertices.emplace_back(a + i * h, 0.0);
  mesh.elements.resize(n);
  for (int i = 0; i < n; ++i) {
    mesh.elements[i].v = {i, i + 1, -1};
    mesh.elements[i].measure = h;
    mesh.elements[i].diameter = h;
  }
  int id = 0;
  for (int i = 0; i < n - 1; ++i, ++id) {
    Edge e;
    e.id = id;
    e.interior = true;
    e.plus_element = i + 1;  // larger index; normal points toward the smaller
    e.minus_element = i;
    e.normal = {-1.0, 0.0};
    e.size = h;
    e.gamma = gamma;
    e.p0 = e.p1 = mesh.vertices[i + 1];
    mesh.interior_edges.push_back(e);
  }
  for (int side = 0; side < 2; ++side, ++id) {
    Edge e;
    e.id = id;
    e.interior = false;
    e.plus_element = side == 0 ? 0 : n - 1;
    e.normal = {side == 0 ? -1.0 : 1.0, 0.0};
    e.size = h;
    e.gamma = gamma;
    e.p0 = e.p1 = mesh.vertices[side == 0 ? 0 : n];
    mesh.boundary_edges.push_back(e);
  }
  return mesh;
}

Mesh build_unit_square_tri_mesh(int n, double gamma, std::array<double, 2> origin) {
  if (n < 1) throw std::invalid_argument("build_unit_square_tri_mesh: n must be >= 1");
  if (gamma < 0.0)
    throw std::invalid_argument("build_unit_square_tri_mesh: gamma must be >= 0");
  Mesh mesh;
  mesh.dimension = 2;
  const double h = 1.0 / n;
  const auto vid = [&](int i, int j) { return j * (n + 1) + i; };
  mesh.vertices.reserve((n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      mesh.vertices.emplace_back(origin[0] + i * h, origin[1] + j * h);

  // Each cell (i,j) splits along the diagonal from its lower-right corner to
  // its upper-left corner; both triangles are counterclockwise.
  mesh.elements.reserve(2 * n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1),
                d = vid(i, j + 1);
      Element lo, hi;
      lo.v = {a, b, d};
      hi.v = {b, c, d};
      for (Element* el : {&lo, &hi}) {
        const Eigen::Vector2d &p0 = mesh.vertices[el->v[0]],
                              &p1 = mesh.vertices[el->v[1]],
                              &p2 = mesh.vertices[el->v[2]];
        const Eigen::Vector2d e1 = p1 - p0, e2 = p2 - p0;
        el->measure = 0.5 * std::abs(e1.x() * e2.y() - e1.y() * e2.x());
        el->diameter =
            std::max({(p1 - p0).norm(), (p2 - p1).norm(), (p0 - p2).norm()});
      }
      mesh.elements.push_back(lo);
      mesh.elements.push_back(hi);
    }
  }

  std::map<std::pair<int, int>, std::vector<int>> edge_elems;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto& v = mesh.elements[e].v;
    for (int le = 0; le < 3; ++le) {
      const int v0 = v[le], v1 = v[(le + 1) % 3];
      edge_elems[{std::min(v0, v1), std::max(v0, v1)}].push_back(e);
    }
  }

  const auto centroid = [&](int e) {
    const auto& v = mesh.elements[e].v;
    return ((mesh.vertices[v[0]] + mesh.vertices[v[1]] + mesh.vertices[v[2]]) / 3.0)
        .eval();
  };

  int next_id = 0;
  std::vector<Edge> boundary;
  for (const auto& [key, elems] : edge_elems) {
    Edge e;
    e.p0 = mesh.vertices[key.first];
    e.p1 = mesh.vertices[key.second];
    const Eigen::Vector2d tang = e.p1 - e.p0;
    e.size = tang.norm();
    e.gamma = gamma;
    Eigen::Vector2d nu(tang.y(), -tang.x());
    nu.normalize();
    const Eigen::Vector2d mid = 0.5 * (e.p0 + e.p1);
    if (elems.size() == 2) {
      e.interior = true;
      e.plus_element = std::max(elems[0], elems[1]);
      e.minus_element = std::min(elems[0], elems[1]);
    } else {
      e.interior = false;
      e.plus_element = elems[0];
    }
    if (nu.dot(mid - centroid(e.plus_element)) < 0.0) nu = -nu;
    e.normal = nu;
    if (e.interior) {
      e.id = next_id++;
      mesh.interior_edges.push_back(e);
    } else {
      boundary.push_back(e);
    }
  }
  for (Edge& e : boundary) {
    e.id = next_id++;
    mesh.boundary_edges.push_back(e);
  }
  return mesh;
}

EdgeGeometry edge_geometry(const Mesh& mesh, int edge_id) {
  const int ni = static_cast<int>(mesh.interior_edges.size());
  const int nb = static_cast<int>(mesh.boundary_edges.size());
  const Edge* e = nullptr;
  if (edge_id >= 0 && edge_id < ni)
    e = &mesh.interior_edges[edge_id];
  else if (edge_id >= ni && edge_id < ni + nb)
    e = &mesh.boundary_edges[edge_id - ni];
  if (e == nullptr || e->id != edge_id)
    throw std::out_of_range("edge_geometry: unknown edge id");
  return {e->normal, e->size, e->plus_element, e->minus_element};
}

}  // namespace dritz
