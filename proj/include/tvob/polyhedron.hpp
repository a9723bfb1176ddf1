#pragma once

#include <vector>

#include "tvob/rational.hpp"

namespace tvob {

/// Half-space `normal . x >= offset` (or hyperplane when used as an equation).
struct Halfspace {
  RatVec normal;
  Rat offset;
  friend bool operator==(const Halfspace&, const Halfspace&) = default;
  friend bool operator<(const Halfspace& a, const Halfspace& b) {
    if (a.normal != b.normal) return a.normal < b.normal;
    return a.offset < b.offset;
  }
};

/// Homogeneous cone {x : A x >= 0} in double description: a lineality basis
/// plus extreme rays modulo lineality. Rows and generators are kept primitive.
struct ConeGenerators {
  RatMat lines;
  RatMat rays;
};

ConeGenerators double_description(const RatMat& constraints, size_t dim);

/// Exact rational polyhedron with both representations populated and
/// irredundant. The empty set is a distinct value (`is_empty()`), never
/// confused with the zero-dimensional polytope {0}.
class Polyhedron {
 public:
  Polyhedron() = default;

  static Polyhedron empty(size_t dim);
  static Polyhedron from_generators(size_t dim, RatMat vertices, RatMat rays = {},
                                    RatMat lines = {});
  static Polyhedron from_inequalities(size_t dim, std::vector<Halfspace> ineqs,
                                      std::vector<Halfspace> eqs = {});
  /// Cone generated by `rays` (apex at the origin).
  static Polyhedron cone(size_t dim, RatMat rays);
  static Polyhedron point(const RatVec& p);

  size_t ambient_dim() const { return dim_; }
  bool is_empty() const { return empty_; }
  bool is_bounded() const { return rays_.empty() && lines_.empty(); }
  bool is_pointed() const { return lines_.empty(); }
  /// Dimension of the affine hull; -1 for the empty set.
  int dimension() const;
  bool is_full_dimensional() const { return dimension() == static_cast<int>(dim_); }

  const RatMat& vertices() const { return vertices_; }
  const RatMat& rays() const { return rays_; }
  const RatMat& lines() const { return lines_; }
  const std::vector<Halfspace>& facets() const { return facets_; }
  const std::vector<Halfspace>& equations() const { return equations_; }

  bool contains(const RatVec& p) const;
  bool contains_direction(const RatVec& d) const;
  bool contains(const Polyhedron& other) const;
  bool is_cone() const;

  Polyhedron intersect(const Polyhedron& other) const;
  Polyhedron translate(const RatVec& t) const;
  Polyhedron scaled(const Rat& s) const;

  friend bool operator==(const Polyhedron& a, const Polyhedron& b);

 private:
  size_t dim_ = 0;
  bool empty_ = true;
  RatMat vertices_, rays_, lines_;
  std::vector<Halfspace> facets_, equations_;

  void set_generators(RatMat vertices, RatMat rays, RatMat lines);
  void set_inequalities(std::vector<Halfspace> ineqs, std::vector<Halfspace> eqs);
};

// Kernel operations.

/// Exact Minkowski sum; the empty set absorbs everything.
Polyhedron minkowski_sum(const Polyhedron& a, const Polyhedron& b);
/// Recession cone; throws "empty-polyhedron" on the empty set.
Polyhedron tail_cone(const Polyhedron& p);
/// Euclidean volume via a pulling triangulation with the lexicographically
/// smallest vertex as apex; zero when lower dimensional; "unbounded" on rays.
Rat lattice_volume(const Polyhedron& p);
/// Smallest k >= 1 with k*v in the lattice.
Int mu(const RatVec& v);
/// Simplicial with primitive generators extendable to a lattice basis.
bool is_smooth_cone(const Polyhedron& cone);
/// Projection onto the coordinates in `keep` (in the given order) by
/// Fourier-Motzkin elimination of the remaining ones.
Polyhedron fourier_motzkin_project(size_t dim, std::vector<Halfspace> ineqs,
                                   std::vector<Halfspace> eqs, const std::vector<size_t>& keep);
/// Image under the linear map x -> m x (m has `rows` rows).
Polyhedron linear_image(const Polyhedron& p, const RatMat& m);
/// Vertices of a pointed polyhedron whose affine hull has dimension `d`
/// triangulated into simplices (indices into p.vertices()).
std::vector<std::vector<size_t>> triangulate(const Polyhedron& p);
/// Integer points of a bounded polyhedron, lexicographically ordered.
RatMat lattice_points(const Polyhedron& p);
/// Affine dimension of a finite point set.
int affine_dimension(const RatMat& pts);

}  // namespace tvob
