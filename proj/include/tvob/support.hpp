#pragma once

#include <map>
#include <memory>

#include "tvob/fansy.hpp"

namespace tvob {

struct AffinePiece {
  RatVec slope;
  Rat constant;
  Rat operator()(const RatVec& x) const { return dot(slope, x) + constant; }
  friend bool operator==(const AffinePiece&, const AffinePiece&) = default;
};

inline bool operator<(const TaggedVertex& a, const TaggedVertex& b) {
  if (!(a.point == b.point)) return a.point < b.point;
  return a.v < b.v;
}

/// Divisorial support function. `pieces[i][j]` is the affine function on
/// cell j of slice i of the base; `linear[k]` is the slope on maximal cone k
/// of `base->maximal_cones()`. Points without a stored slice carry the
/// linear part. Slopes and constants may be rational (Q-Cartier data).
struct SupportFunction {
  std::shared_ptr<const MarkedFansyDivisor> base;
  std::vector<std::vector<AffinePiece>> pieces;
  RatMat linear;

  /// h_P at a point of N_Q.
  Rat value(const CurvePoint& p, const RatVec& x) const;
  /// Linear part evaluated at x.
  Rat linear_value(const RatVec& x) const;
  /// Piece on the cell of slice `p` whose tail is the maximal cone `sigma`.
  AffinePiece piece_with_tail(const CurvePoint& p, const Polyhedron& sigma) const;
  /// Smallest k with k*h integral.
  Int clearing_denominator() const;

  SupportFunction operator+(const SupportFunction& o) const;
  SupportFunction scaled(const Rat& k) const;
};

/// The zero support function on x.
SupportFunction zero_support(std::shared_ptr<const MarkedFansyDivisor> x);

/// Invariant divisor: coefficients on vertical prime divisors (P, v) and on
/// horizontal ones (unmarked rays, by primitive generator). Zero entries are
/// dropped by `normalized()` and ignored by comparison.
struct TWeilDivisor {
  std::map<TaggedVertex, Rat> vertical;
  std::map<RatVec, Rat> horizontal;

  TWeilDivisor normalized() const;
  TWeilDivisor operator+(const TWeilDivisor& o) const;
  TWeilDivisor operator-() const;
  friend bool operator==(const TWeilDivisor& a, const TWeilDivisor& b);
};

std::vector<Violation> validate_support(const SupportFunction& h);
TWeilDivisor weil_from_support(const SupportFunction& h);
SupportFunction support_from_weil(std::shared_ptr<const MarkedFansyDivisor> x,
                                  const TWeilDivisor& c);
/// Canonical divisor using K_{P^1} = -2[0] (or -2 times the first stored
/// point when 0 carries no slice).
TWeilDivisor canonical_divisor(const MarkedFansyDivisor& x);

/// A rational function on P^1 given by its divisor (point, order).
using CurveDivisor = std::vector<std::pair<CurvePoint, Int>>;
TWeilDivisor principal_divisor(const MarkedFansyDivisor& x, const CurveDivisor& f,
                               const RatVec& u);

/// Box_h together with the divisor map u -> h*(u).
struct HStar {
  Polyhedron box;
  bool complete = true;
  std::vector<CurvePoint> points;                // stored slice points
  std::vector<std::vector<AffinePiece>> pieces;  // per point, one per vertex
  /// h*_P(u) for a stored point index; general points give 0.
  Rat value(size_t point_index, const RatVec& u) const;
  /// Sum of floor(h*_P(u)) over stored points.
  Rat rounded_degree(const RatVec& u) const;
  Rat degree(const RatVec& u) const;
};

HStar hstar(const SupportFunction& h);
size_t section_dimension(const HStar& hs, const RatVec& u);
size_t section_dimension(const SupportFunction& h, const RatVec& u);
/// Sum of section dimensions over the integral points of the box. Runs on
/// TVOB_THREADS worker threads when that variable is set.
size_t total_sections(const SupportFunction& h);

}  // namespace tvob
