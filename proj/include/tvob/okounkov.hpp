#pragma once

#include "tvob/support.hpp"

namespace tvob {

enum class FlagKind { G1, G2, T1, T2 };
std::string to_string(FlagKind k);
FlagKind parse_flag_kind(const std::string& s);

/// Invariant flag of subvarieties.
///
/// G1/G2: `sigma_fix` is a smooth maximal tail cone, `point` a general
/// point Q and `ray_order` orders the rays of `sigma_fix`.
/// T1: `point` is a slice point and `cell` one of its cells; `sigma_fix`
/// is the tail of that cell and `delta_fix` the cone over {1} x cell.
/// T2: `sigma_fix` is a marked maximal cone, `point`/`point2` are P1/P2 and
/// `delta_fix` the cone over {1} x D_P1 and {-1} x D_P2.
/// Rays of `delta_fix` live in Z x N with the height coordinate first.
struct Flag {
  FlagKind kind = FlagKind::G1;
  Polyhedron sigma_fix;
  CurvePoint point;
  CurvePoint point2;
  Polyhedron cell;
  RatMat ray_order;
  Polyhedron delta_fix;
};

/// Validates `draft` against `x` and fills in the derived fields
/// (`delta_fix`, and `sigma_fix` for T1).
Flag make_flag(const MarkedFansyDivisor& x, Flag draft);

/// Principal correction removing the slope `u0` on the flag's fixed cone and
/// the constant `a` on its cell at the flag point.
struct NormalizationShift {
  RatVec u0;
  Rat a;
};
NormalizationShift normalization_shift(const SupportFunction& h, const Flag& flag);
SupportFunction normalize(const SupportFunction& h, const Flag& flag);

/// Valuation of the section f * chi^u of O(D_h).
RatVec valuation(const SupportFunction& h, const Flag& flag, const CurveDivisor& f,
                 const RatVec& u);
/// Valuation of f * chi^u given only ord_P(f) at the flag point.
RatVec flag_coordinates(const Flag& flag, const NormalizationShift& shift, const Rat& order,
                        const RatVec& u);

/// W(h) for T flags, in (x, u) coordinates, before the pairing with delta_fix.
Polyhedron weight_polytope(const SupportFunction& h, const Flag& flag);
/// Okounkov body of D_h; throws "not-big" unless full-dimensional.
Polyhedron okounkov_body(const SupportFunction& h, const Flag& flag);
/// Same construction without the bigness check.
Polyhedron okounkov_candidate(const SupportFunction& h, const Flag& flag);

/// Okounkov body of a toric divisor sum a_i D_{n_i} w.r.t. the flag of the
/// smooth cone spanned by `sigma_rays` (in that order).
Polyhedron toric_okounkov_reference(const RatMat& fan_rays, const RatVec& coefficients,
                                    const RatMat& sigma_rays);

struct ClassGroupData {
  std::vector<TaggedVertex> vertex_keys;
  RatMat ray_keys;
  RatMat relations;
  RatMat projection;  // rows span the annihilator of the relations
  size_t rank = 0;

  size_t key_count() const { return vertex_keys.size() + ray_keys.size(); }
  /// Coefficient vector over the keys; vertical coefficients at points
  /// without a slice are moved to the first slice point via [P] ~ [P0].
  RatVec key_vector(const MarkedFansyDivisor& x, const TWeilDivisor& d) const;
  RatVec class_of(const MarkedFansyDivisor& x, const TWeilDivisor& d) const;
  TWeilDivisor divisor_of(const RatVec& keys) const;
};

ClassGroupData class_group(const MarkedFansyDivisor& x);
Polyhedron eff_cone(const ClassGroupData& cg);
/// Lexicographically least effective representative of a class; throws
/// "not-effective" when the class is outside the effective cone.
TWeilDivisor divisor_from_class(const ClassGroupData& cg, const RatVec& xi);

struct GlobalOkounkovBody {
  Polyhedron cone;  // coordinates: local body (d of them), then class coordinates
  ClassGroupData cg;
  size_t body_dim = 0;
  /// Fiber over a class, as a polyhedron in the body coordinates.
  Polyhedron fiber(const RatVec& xi) const;
};

GlobalOkounkovBody global_okounkov(std::shared_ptr<const MarkedFansyDivisor> x, const Flag& flag);
/// The same cone computed by Fourier-Motzkin elimination instead of the
/// generator image; used as a cross-check.
Polyhedron global_okounkov_fm(std::shared_ptr<const MarkedFansyDivisor> x, const Flag& flag);

}  // namespace tvob
