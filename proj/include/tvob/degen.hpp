#pragma once

#include <map>
#include <set>

#include "tvob/okounkov.hpp"

namespace tvob {

/// Valuations of homogeneous sections of O(m D_h), grouped by level m.
struct ValueSemigroup {
  std::map<int, std::set<RatVec>> levels;
  int generated_up_to = 0;
};

/// Level one by direct enumeration over the weights of the box.
std::set<RatVec> level_one_valuations(const SupportFunction& h, const Flag& flag);
/// Levels 1..m_max; level m is the m-fold sumset of level one.
ValueSemigroup value_semigroup(const SupportFunction& h, const Flag& flag, int m_max);
/// conv of the level-one valuations.
Polyhedron newton_okounkov(const ValueSemigroup& v);

/// Piecewise affine function on a polytope, given by its linearity cells.
struct PiecewiseAffine {
  Polyhedron domain;
  std::vector<std::pair<Polyhedron, AffinePiece>> cells;

  /// Pointwise minimum of affine functions, restricted to `domain`.
  static PiecewiseAffine minimum(const Polyhedron& domain, std::vector<AffinePiece> pieces);
  static PiecewiseAffine constant(const Polyhedron& domain, const Rat& c);

  Rat operator()(const RatVec& u) const;
  /// Checks that the cells tile the domain.
  std::optional<std::string> check_cells() const;
};

/// Cells of the common refinement, each with the piece of every input on it.
std::vector<std::pair<Polyhedron, std::vector<AffinePiece>>> common_refinement(
    const std::vector<const PiecewiseAffine*>& fs);
PiecewiseAffine operator+(const PiecewiseAffine& a, const PiecewiseAffine& b);

struct DivisorialPolytope {
  Polyhedron box;
  std::vector<CurvePoint> points;
  std::vector<PiecewiseAffine> psi;

  Rat degree(const RatVec& u) const;
  /// Psi at `p`, or nullptr when it is identically zero there.
  const PiecewiseAffine* at(const CurvePoint& p) const;
};

std::vector<Violation> divisorial_violations(const DivisorialPolytope& d);
/// Box_h with Psi_P = h*_P; throws "not-divisorial-polytope" when the data
/// fails the divisorial polytope conditions.
DivisorialPolytope divisorial_polytope_of(const SupportFunction& h, const Flag& flag);
/// Moves the sum of all Psi_P to the single point `p`.
DivisorialPolytope concentrate(const DivisorialPolytope& d, const CurvePoint& p);
/// {(x, u) : u in box, 0 <= x <= deg Psi(u)}.
Polyhedron hypograph_body(const DivisorialPolytope& d);

/// Splitting Psi_point = psi0_0 + alpha * psi0_1.
struct Decomposition {
  CurvePoint point = CurvePoint::finite(0);
  PiecewiseAffine psi0_0;
  PiecewiseAffine psi0_1;
  Rat alpha = 1;
};

std::vector<Violation> check_decomposition(const DivisorialPolytope& d, const Decomposition& dec);

/// Degenerations of a toric surface polygon, ending in a triangle.
std::vector<Polyhedron> wps_degeneration_chain(const Polyhedron& polygon);
/// Weights (q0, q1, q2) with sum q_i n_i = 0 over the primitive facet normals.
RatVec wps_weights(const Polyhedron& triangle);
/// Vertices of a polygon in counterclockwise order.
RatMat polygon_cycle(const Polyhedron& polygon);

}  // namespace tvob
