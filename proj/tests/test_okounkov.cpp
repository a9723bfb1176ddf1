#include "doctest.h"
#include "models.hpp"
#include "tvob/linalg.hpp"
#include "tvob/okounkov.hpp"

using namespace tvob;
using namespace models;

namespace {

auto shared(MarkedFansyDivisor x) { return std::make_shared<const MarkedFansyDivisor>(std::move(x)); }

Polyhedron hull(RatMat pts) {
  size_t d = pts.at(0).size();
  return Polyhedron::from_generators(d, std::move(pts));
}

RatVec iv(std::initializer_list<long> xs) {
  RatVec r;
  for (long x : xs) r.emplace_back(x);
  return r;
}

// L = D_{rho2} + D_{rho3} on F_n: rho2 is the vertex (0,-1/n), rho3 is (inf,0).
TWeilDivisor fn_line_bundle(long n) {
  TWeilDivisor c;
  c.vertical[{at(0), v({Rat(-1, n)})}] = 1;
  c.vertical[{kInf, v({0})}] = 1;
  return c;
}

Flag z1(const MarkedFansyDivisor& x) {
  Flag f;
  f.kind = FlagKind::G1;
  f.sigma_fix = ray_plus();
  f.point = at(1);
  f.ray_order = {v({1})};
  return make_flag(x, f);
}
Flag z2(const MarkedFansyDivisor& x) {
  Flag f;
  f.kind = FlagKind::G2;
  f.sigma_fix = ray_minus();
  f.point = at(1);
  f.ray_order = {v({-1})};
  return make_flag(x, f);
}
Flag z3(const MarkedFansyDivisor& x, long n) {
  Flag f;
  f.kind = FlagKind::T1;
  f.point = at(0);
  f.cell = cell({v({Rat(-1, n)}), v({0})});
  f.ray_order = {iv({1, 0}), iv({n, -1})};
  return make_flag(x, f);
}
Flag z4(const MarkedFansyDivisor& x, long n) {
  Flag f;
  f.kind = FlagKind::T2;
  f.sigma_fix = ray_minus();
  f.point = at(0);
  f.point2 = kInf;
  f.ray_order = {iv({n, -1}), iv({-1, 0})};
  return make_flag(x, f);
}

// Toric oracle for F_n: rays rho0..rho3 in N = Z^2 and L = D2 + D3.
Polyhedron fn_toric(long n, const RatMat& sigma) {
  return toric_okounkov_reference({iv({1, 0}), iv({0, 1}), iv({-1, n}), iv({0, -1})}, iv({0, 0, 1, 1}),
                                  sigma);
}

}  // namespace

TEST_CASE("flags on the hirzebruch model") {
  auto x = hirzebruch(2);
  CHECK_NOTHROW(z1(x));
  CHECK_NOTHROW(z2(x));
  auto t1 = z3(x, 2);
  CHECK(t1.delta_fix == Polyhedron::cone(2, {iv({1, 0}), iv({2, -1})}));
  CHECK(t1.sigma_fix.dimension() == 0);
  auto t2 = z4(x, 2);
  CHECK(t2.delta_fix == Polyhedron::cone(2, {iv({2, -1}), iv({-1, 0})}));

  Flag bad;
  bad.kind = FlagKind::G1;
  bad.sigma_fix = ray_minus();
  bad.point = at(1);
  bad.ray_order = {v({-1})};
  CHECK_THROWS_WITH_AS(make_flag(x, bad), doctest::Contains("marking-mismatch"), Error);
  bad.kind = FlagKind::G2;
  bad.point = at(0);
  CHECK_THROWS_WITH_AS(make_flag(x, bad), doctest::Contains("invalid-flag"), Error);
  bad.point = at(1);
  bad.ray_order = {v({1})};
  CHECK_THROWS_WITH_AS(make_flag(x, bad), doctest::Contains("invalid-flag"), Error);
}

TEST_CASE("quadric admits only T2 flags") {
  auto q = quadric();
  Flag f;
  f.kind = FlagKind::T1;
  f.point = at(0);
  f.cell = q.slices[0].cells[0];
  f.ray_order = {};
  CHECK_THROWS_WITH_AS(make_flag(q, f), doctest::Contains("marking-mismatch"), Error);
  Flag t;
  t.kind = FlagKind::T2;
  t.sigma_fix = sigma_r();
  t.point = at(0);
  t.point2 = at(1);
  t.ray_order = {};
  CHECK_THROWS_WITH_AS(make_flag(q, t), doctest::Contains("locus-mismatch"), Error);
}

TEST_CASE("non-smooth delta is rejected") {
  MarkedFansyDivisor x;
  x.rank = 1;
  Rat a(1, 3), b(2, 3);
  x.slices = {{at(0), {cell({v({a})}, {v({-1})}), cell({v({a}), v({b})}), cell({v({b})}, {v({1})})}}};
  x.tailfan = {ray_minus(), ray_plus()};
  REQUIRE(validate_fansy(x).empty());
  Flag f;
  f.kind = FlagKind::T1;
  f.point = at(0);
  f.cell = cell({v({a}), v({b})});
  f.ray_order = {iv({3, 1}), iv({3, 2})};
  CHECK_THROWS_WITH_AS(make_flag(x, f), doctest::Contains("not-smooth"), Error);
}

TEST_CASE("normalization on F_n") {
  for (long n : {1, 2, 3}) {
    auto x = shared(hirzebruch(n));
    auto h = support_from_weil(x, fn_line_bundle(n));
    CHECK(weil_from_support(normalize(h, z1(*x))) == fn_line_bundle(n));

    TWeilDivisor e2;
    e2.horizontal[v({1})] = n + 1;
    e2.vertical[{at(0), v({0})}] = 1;
    CHECK(weil_from_support(normalize(h, z2(*x))) == e2);

    TWeilDivisor e3;
    e3.horizontal[v({1})] = 1;
    e3.vertical[{kInf, v({0})}] = 1;
    CHECK(weil_from_support(normalize(h, z3(*x, n))) == e3);

    auto h4 = normalize(h, z4(*x, n));
    CHECK(validate_support(h4).empty());
    CHECK(h4.piece_with_tail(at(0), ray_minus()) == AffinePiece{v({0}), 0});
    CHECK(h4.piece_with_tail(kInf, ray_minus()) == AffinePiece{v({0}), 0});
  }
}

TEST_CASE("Okounkov bodies of F_n for the four flags") {
  for (long n : {1, 2, 3}) {
    auto x = shared(hirzebruch(n));
    auto h = support_from_weil(x, fn_line_bundle(n));
    Rat area = Rat(n + 2) / 2;

    auto ob1 = okounkov_body(h, z1(*x));
    CHECK(ob1 == hull({iv({0, 0}), iv({1, 0}), iv({1, 1}), iv({0, n + 1})}));
    auto ob2 = okounkov_body(h, z2(*x));
    CHECK(ob2 == hull({iv({0, 0}), iv({0, n + 1}), iv({1, n}), iv({1, n + 1})}));
    auto ob3 = okounkov_body(h, z3(*x, n));
    CHECK(ob3 == hull({iv({0, 1}), iv({0, 0}), iv({1, n + 1}), iv({1, 0})}));
    CHECK(ob3 == fn_toric(n, {iv({0, 1}), iv({-1, n})}));

    auto w4 = weight_polytope(h, z4(*x, n));
    CHECK(w4 == hull({iv({0, -n - 1}), iv({0, 0}), iv({-1, -n - 1}), iv({-1, -n})}));
    auto ob4 = okounkov_body(h, z4(*x, n));
    CHECK(ob4 == fn_toric(n, {iv({-1, n}), iv({0, -1})}));
    CHECK(ob4 == hull({iv({0, 0}), iv({n + 1, 0}), iv({1, 1}), iv({0, 1})}));

    for (auto* ob : {&ob1, &ob2, &ob3, &ob4}) {
      CHECK(lattice_volume(*ob) == area);
      for (auto& p : ob->vertices())
        for (auto& c : p) CHECK(c >= 0);
    }
  }
}

TEST_CASE("W(h) of the T1 flag") {
  long n = 2;
  auto x = shared(hirzebruch(n));
  auto h = support_from_weil(x, fn_line_bundle(n));
  auto w = weight_polytope(h, z3(*x, n));
  CHECK(w == hull({iv({0, -1}), iv({0, 0}), iv({1, -1}), iv({1, 0}), iv({1, n})}));
}

TEST_CASE("valuations of F2 sections") {
  auto x = shared(hirzebruch(2));
  TWeilDivisor c;
  c.vertical[{at(0), v({Rat(-1, 2)})}] = 1;
  c.vertical[{kInf, v({0})}] = 1;
  auto h = support_from_weil(x, c);
  auto flag = z1(*x);
  CHECK(valuation(h, flag, {{at(0), 1}, {kInf, -1}}, v({3})) == iv({0, 3}));
  CHECK(valuation(h, flag, {}, v({0})) == iv({0, 0}));
  CHECK(valuation(h, flag, {{at(1), 1}, {kInf, -1}}, v({0})) == iv({1, 0}));
  CHECK_THROWS_WITH_AS(valuation(h, flag, {{kInf, 1}, {at(0), -1}}, v({3})),
                       doctest::Contains("not-a-section"), Error);
  CHECK_THROWS_WITH_AS(valuation(h, flag, {}, v({4})), doctest::Contains("not-a-section"), Error);
  auto ob = okounkov_body(h, flag);
  CHECK(ob.contains(valuation(h, flag, {{at(0), 1}, {kInf, -1}}, v({3}))));
}

TEST_CASE("quadric anticanonical body") {
  auto q = shared(quadric());
  TWeilDivisor c;
  c.vertical[{kInf, v({Rat(1, 2), Rat(1, 2)})}] = 3;
  auto h = support_from_weil(q, c);
  Flag f;
  f.kind = FlagKind::T2;
  f.sigma_fix = sigma_r();
  f.point = at(0);
  f.point2 = kInf;
  f.ray_order = {iv({1, 0, 0}), iv({1, 0, -1}), iv({-2, 1, 1})};
  f = make_flag(*q, f);
  auto ob = okounkov_body(h, f);
  CHECK(ob == hull({iv({0, 0, 0}), iv({3, 0, 0}), iv({0, 3, 0}), iv({0, 0, 6})}));
  CHECK(lattice_volume(ob) == 9);
}

TEST_CASE("cotangent bundle bodies for two flags") {
  auto x = shared(cotangent());
  auto h = support_from_weil(x, -canonical_divisor(*x));
  auto c = a2_cones();
  Flag t;
  t.kind = FlagKind::T2;
  t.sigma_fix = c[0];
  t.point = at(0);
  t.point2 = at(1);
  t.ray_order = {iv({1, 0, 0}), iv({1, 0, 1}), iv({-1, 1, 0})};
  auto obt = okounkov_body(h, make_flag(*x, t));
  CHECK(obt == hull({iv({0, 0, 0}), iv({2, 0, 0}), iv({0, 2, 0}), iv({2, 2, 0}), iv({2, 0, 2}),
                     iv({0, 2, 2}), iv({0, 0, 4})}));
  Flag g;
  g.kind = FlagKind::G2;
  g.sigma_fix = c[0];
  g.point = at(2);
  g.ray_order = {iv({1, 0}), iv({1, 1})};
  auto obg = okounkov_body(h, make_flag(*x, g));
  CHECK(obg == hull({iv({0, 0, 0}), iv({0, 2, 0}), iv({0, 0, 2}), iv({2, 2, 2}), iv({0, 4, 2}),
                     iv({0, 2, 4}), iv({0, 4, 4})}));
  CHECK(lattice_volume(obt) == 8);
  CHECK(lattice_volume(obg) == 8);
}

TEST_CASE("singular toric surface with a general flag") {
  std::vector<Polyhedron> fan{sigma_r(), sigma_t(), sigma_l(), sigma_b()};
  auto x = shared(downgrade(fan, {iv({1}), iv({-1})}, iv({1, 1}), {iv({1, 0})}));
  TWeilDivisor c;
  c.horizontal[v({-1})] = 2;
  c.vertical[{kInf, v({Rat(-1, 2)})}] = 2;
  auto h = support_from_weil(x, c);
  auto ob = okounkov_body(h, z1(*x));
  CHECK(ob == hull({iv({0, 0}), iv({0, 2}), iv({1, 0}), iv({1, 2})}));
}

TEST_CASE("homogeneity and principal invariance") {
  auto x = shared(hirzebruch(2));
  auto h = support_from_weil(x, fn_line_bundle(2));
  auto p = support_from_weil(x, principal_divisor(*x, {{at(0), 2}, {kInf, -2}}, iv({-1})));
  for (auto flag : {z1(*x), z2(*x), z3(*x, 2), z4(*x, 2)}) {
    auto ob = okounkov_body(h, flag);
    CHECK(okounkov_body(h.scaled(3), flag) == ob.scaled(3));
    CHECK(okounkov_body(h.scaled(Rat(1, 2)), flag) == ob.scaled(Rat(1, 2)));
    CHECK(okounkov_body(h + p, flag) == ob);
    CHECK(okounkov_body(normalize(h, flag), flag) == ob);
  }
  CHECK_THROWS_WITH_AS(okounkov_body(zero_support(x), z1(*x)), doctest::Contains("not-big"), Error);
}

TEST_CASE("class groups") {
  auto fn = hirzebruch(2);
  auto cg = class_group(fn);
  CHECK(cg.rank == 2);
  CHECK(cg.key_count() == 4);
  for (auto& rel : cg.relations) CHECK(is_zero(tvob::apply(cg.projection, rel)));
  CHECK(class_group(quadric()).rank == 1);
  CHECK(class_group(cotangent()).rank == 2);
  MarkedFansyDivisor p1p1;
  p1p1.rank = 1;
  p1p1.tailfan = {ray_minus(), ray_plus()};
  p1p1.slices = {{at(0), {ray_minus(), ray_plus()}}};
  CHECK(class_group(p1p1).rank == 2);

  auto d = principal_divisor(fn, {{at(0), 1}, {at(5), -1}}, iv({3}));
  CHECK(is_zero(cg.class_of(fn, d)));
  auto q = quadric();
  auto cq = class_group(q);
  TWeilDivisor three;
  three.vertical[{kInf, v({Rat(1, 2), Rat(1, 2)})}] = 3;
  CHECK(cq.class_of(q, canonical_divisor(q)) == scale(cq.class_of(q, three), -1));
}

TEST_CASE("effective cones and representatives") {
  auto fn = hirzebruch(2);
  auto cg = class_group(fn);
  auto eff = eff_cone(cg);
  CHECK(eff.dimension() == 2);
  CHECK(eff.rays().size() == 2);
  CHECK(eff.contains(RatVec(2, Rat(0))));
  auto q = class_group(quadric());
  CHECK(eff_cone(q).dimension() == 1);
  CHECK(eff_cone(q).rays().size() == 1);

  auto xi = cg.class_of(fn, fn_line_bundle(2));
  auto rep = divisor_from_class(cg, xi);
  CHECK(cg.class_of(fn, rep) == xi);
  for (auto& [k, c] : rep.vertical) CHECK(c >= 0);
  CHECK_THROWS_WITH_AS(divisor_from_class(cg, scale(xi, -1)), doctest::Contains("not-effective"), Error);
}

TEST_CASE("global body of F_n for the general flag") {
  long n = 2;
  auto x = shared(hirzebruch(n));
  auto flag = z1(*x);
  auto g = global_okounkov(x, flag);
  CHECK(g.cone.is_cone());
  auto xi = g.cg.class_of(*x, fn_line_bundle(n));
  CHECK(g.fiber(xi) == hull({iv({0, 0}), iv({1, 0}), iv({1, 1}), iv({0, n + 1})}));
  CHECK(g.fiber(RatVec(g.cg.rank, Rat(0))) == Polyhedron::point(iv({0, 0})));
  CHECK(global_okounkov_fm(x, flag) == g.cone);
}

TEST_CASE("global fibers agree with local bodies") {
  long n = 3;
  auto x = shared(hirzebruch(n));
  auto h = support_from_weil(x, fn_line_bundle(n));
  for (auto flag : {z2(*x), z3(*x, n), z4(*x, n)}) {
    auto g = global_okounkov(x, flag);
    auto xi = g.cg.class_of(*x, fn_line_bundle(n));
    CHECK(g.fiber(xi) == okounkov_body(h, flag));
    CHECK(g.fiber(scale(xi, 2)) == okounkov_body(h.scaled(2), flag));
  }
  auto q = shared(quadric());
  Flag f;
  f.kind = FlagKind::T2;
  f.sigma_fix = sigma_r();
  f.point = at(0);
  f.point2 = kInf;
  f.ray_order = {iv({1, 0, 0}), iv({1, 0, -1}), iv({-2, 1, 1})};
  f = make_flag(*q, f);
  auto g = global_okounkov(q, f);
  TWeilDivisor c;
  c.vertical[{kInf, v({Rat(1, 2), Rat(1, 2)})}] = 1;
  CHECK(g.fiber(g.cg.class_of(*q, c)) == hull({iv({0, 0, 0}), iv({1, 0, 0}), iv({0, 1, 0}), iv({0, 0, 2})}));
  CHECK(global_okounkov_fm(q, f) == g.cone);
}
