#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tvob/polyhedron.hpp"

namespace tvob {

/// A point of P^1: an exact rational or infinity. Finite points sort
/// ascending and infinity sorts last.
struct CurvePoint {
  bool infinite = false;
  Rat value = 0;

  static CurvePoint finite(const Rat& q) { return {false, q}; }
  static CurvePoint inf() { return {true, 0}; }

  friend bool operator==(const CurvePoint& a, const CurvePoint& b) {
    return a.infinite == b.infinite && (a.infinite || a.value == b.value);
  }
  friend bool operator<(const CurvePoint& a, const CurvePoint& b) {
    if (a.infinite != b.infinite) return b.infinite;
    return !a.infinite && a.value < b.value;
  }
};

std::string to_string(const CurvePoint& p);

/// Polyhedral subdivision of N_Q attached to one point. Only the
/// full-dimensional cells are stored; lower-dimensional ones are their faces.
struct Slice {
  CurvePoint point;
  std::vector<Polyhedron> cells;
};

/// Complexity-one T-variety over P^1 in marked fansy form.
/// `tailfan` holds every cone of the fan except {0}; `marked` is a subset.
struct MarkedFansyDivisor {
  size_t rank = 0;
  std::vector<Slice> slices;
  std::vector<Polyhedron> tailfan;
  std::vector<Polyhedron> marked;

  std::vector<Polyhedron> maximal_cones() const;
  std::vector<Polyhedron> rays() const;  // one-dimensional cones
  bool is_marked(const Polyhedron& cone) const;
  const Slice* slice_at(const CurvePoint& p) const;
  /// Sorted slice points.
  std::vector<CurvePoint> points() const;
};

/// Coefficient map of a polyhedral divisor. Points not listed carry `tail`;
/// an empty Polyhedron stands for the empty coefficient.
struct PDivisor {
  Polyhedron tail;
  std::vector<std::pair<CurvePoint, Polyhedron>> coefficients;

  Polyhedron coefficient(const CurvePoint& p) const;
  bool complete_locus() const;
};

/// All faces of the given cones except {0}, deduplicated.
std::vector<Polyhedron> fan_closure(const std::vector<Polyhedron>& cones);
/// Faces of a pointed cone of every dimension >= 1 (including the cone).
std::vector<Polyhedron> cone_faces(const Polyhedron& cone);
/// Human-readable reason if `cells` fail to tile N_Q face-to-face.
std::optional<std::string> check_subdivision(const std::vector<Polyhedron>& cells, size_t rank);

/// The cell of `slice` whose tail cone is `sigma`; nullptr if none.
const Polyhedron* cell_with_tail(const Slice& slice, const Polyhedron& sigma);

PDivisor extract_pdivisor(const MarkedFansyDivisor& x, const Polyhedron& sigma);
Polyhedron degree(const PDivisor& d);
bool validate_pdivisor(const PDivisor& d);

struct Violation {
  std::string condition;
  std::string detail;
};
std::vector<Violation> validate_fansy(const MarkedFansyDivisor& x);

/// Corank-one toric downgrade. `f` is d x (d-1) (columns span N'), `p` has
/// length d and `s` is (d-1) x d.
MarkedFansyDivisor downgrade(const std::vector<Polyhedron>& fan, const RatMat& f, const RatVec& p,
                             const RatMat& s);

/// Unmarked rays of the tail fan, as primitive generators.
RatMat extremal_rays(const MarkedFansyDivisor& x);

struct TaggedVertex {
  CurvePoint point;
  RatVec v;
  friend bool operator==(const TaggedVertex&, const TaggedVertex&) = default;
};
/// Vertices of all stored slices, ordered by point then lexicographically.
std::vector<TaggedVertex> vertex_set(const MarkedFansyDivisor& x);

}  // namespace tvob
