#include "doctest.h"
#include "models.hpp"
#include "tvob/support.hpp"

using namespace tvob;
using namespace models;

namespace {

auto shared(MarkedFansyDivisor x) { return std::make_shared<const MarkedFansyDivisor>(std::move(x)); }

TWeilDivisor f2_divisor() {
  TWeilDivisor c;
  c.vertical[{at(0), v({Rat(-1, 2)})}] = 1;
  c.vertical[{kInf, v({0})}] = 1;
  return c;
}

MarkedFansyDivisor trivial_p1() {
  MarkedFansyDivisor x;
  x.rank = 1;
  x.tailfan = {ray_minus(), ray_plus()};
  x.slices = {{at(0), {ray_minus(), ray_plus()}}};
  return x;
}

}  // namespace

TEST_CASE("zero support function") {
  auto h = zero_support(shared(hirzebruch(2)));
  CHECK(validate_support(h).empty());
  CHECK(weil_from_support(h) == TWeilDivisor{});
  CHECK(total_sections(h) == 1);
  auto hs = hstar(h);
  CHECK(hs.box == Polyhedron::point(v({0})));
  CHECK(hs.value(0, v({0})) == 0);
  auto back = support_from_weil(h.base, TWeilDivisor{});
  CHECK(weil_from_support(back) == TWeilDivisor{});
}

TEST_CASE("F2 line bundle from its Weil divisor") {
  auto h = support_from_weil(shared(hirzebruch(2)), f2_divisor());
  CHECK(validate_support(h).empty());
  CHECK(h.clearing_denominator() == 1);
  // pieces: 0 on [0,inf), x on [-1/2,0], 3x+1 below; -1 and 3x-1 at infinity
  CHECK(h.value(at(0), v({1})) == 0);
  CHECK(h.value(at(0), v({Rat(-1, 4)})) == Rat(-1, 4));
  CHECK(h.value(at(0), v({-1})) == -2);
  CHECK(h.value(kInf, v({1})) == -1);
  CHECK(h.value(kInf, v({-1})) == -4);
  CHECK(h.value(at(7), v({-1})) == -3);
  CHECK(weil_from_support(h) == f2_divisor());

  auto hs = hstar(h);
  CHECK(hs.box == Polyhedron::from_generators(1, {v({0}), v({3})}));
  for (long u = 0; u <= 3; ++u) {
    Rat oracle0 = std::min(Rat(0), Rat(Rat(1 - u) / 2));
    CHECK(hs.value(0, v({u})) == oracle0);
    CHECK(hs.value(1, v({u})) == 1);
  }
  std::vector<size_t> dims;
  for (long u = 0; u <= 3; ++u) dims.push_back(section_dimension(h, v({u})));
  CHECK(dims == std::vector<size_t>{2, 2, 1, 1});
  CHECK(section_dimension(h, v({4})) == 0);
  CHECK(section_dimension(h, v({-1})) == 0);
  CHECK(total_sections(h) == 6);
}

TEST_CASE("principality violation is reported once") {
  auto h = support_from_weil(shared(hirzebruch(2)), f2_divisor());
  for (auto& pc : h.pieces[1]) pc.constant += 1;
  auto vs = validate_support(h);
  REQUIRE(vs.size() == 1);
  CHECK(vs[0].condition == "cartier");
}

TEST_CASE("continuity and linear part violations") {
  auto h = support_from_weil(shared(hirzebruch(2)), f2_divisor());
  h.pieces[0][1].constant += 1;
  bool continuity = false;
  for (auto& w : validate_support(h)) continuity = continuity || w.condition == "continuity";
  CHECK(continuity);
  auto g = support_from_weil(shared(hirzebruch(2)), f2_divisor());
  g.pieces[0][2].slope = v({1});
  bool linear = false;
  for (auto& w : validate_support(g)) linear = linear || w.condition == "linear part";
  CHECK(linear);
  auto r = g.scaled(Rat(1, 2));
  bool integral = false;
  for (auto& w : validate_support(r)) integral = integral || w.condition == "integrality";
  CHECK(integral);
}

TEST_CASE("quadric anticanonical divisor") {
  auto q = shared(quadric());
  TWeilDivisor c;
  c.vertical[{kInf, v({Rat(1, 2), Rat(1, 2)})}] = 3;
  auto h = support_from_weil(q, c);
  CHECK(validate_support(h).empty());
  CHECK(weil_from_support(h) == c);
  CHECK(h.value(kInf, v({Rat(1, 2), Rat(1, 2)})) == Rat(-3, 2));
  // h^0(P^4, O(3)) - h^0(P^4, O(1)) = 35 - 5
  CHECK(total_sections(h) == 30);
  auto hs = hstar(h);
  for (auto& u : lattice_points(hs.box)) CHECK(hs.degree(u) >= 0);
}

TEST_CASE("cotangent anticanonical divisor") {
  auto c = shared(cotangent());
  TWeilDivisor expected;
  expected.vertical[{at(0), v({0, 0})}] = 2;
  expected.vertical[{at(0), v({0, 1})}] = 2;
  CHECK(-canonical_divisor(*c) == expected);
  auto h = support_from_weil(c, expected);
  CHECK(validate_support(h).empty());
  // flag variety F(1,2;3): h^0(-K) = dim of the adjoint-type rep with weight 2*rho = 27
  CHECK(total_sections(h) == 27);
}

TEST_CASE("P1 x P1 as a trivial model") {
  auto x = shared(trivial_p1());
  auto k = canonical_divisor(*x);
  TWeilDivisor expected;
  expected.vertical[{at(0), v({0})}] = -2;
  expected.horizontal[v({1})] = -1;
  expected.horizontal[v({-1})] = -1;
  CHECK(k == expected);
  auto h = support_from_weil(x, -k);
  CHECK(validate_support(h).empty());
  CHECK(total_sections(h) == 9);
}

TEST_CASE("principal divisors") {
  auto x = hirzebruch(3);
  CHECK(principal_divisor(x, {}, v({0})) == TWeilDivisor{});
  TWeilDivisor e;
  e.horizontal[v({1})] = 1;
  e.vertical[{at(0), v({Rat(-1, 3)})}] = -1;
  CHECK(principal_divisor(x, {}, v({1})) == e);
  TWeilDivisor t;
  t.vertical[{at(0), v({0})}] = 1;
  t.vertical[{at(0), v({Rat(-1, 3)})}] = 3;
  t.vertical[{kInf, v({0})}] = -1;
  CHECK(principal_divisor(x, {{at(0), 1}, {kInf, -1}}, v({0})) == t);
  CHECK_THROWS_WITH_AS(principal_divisor(x, {{at(0), 1}}, v({0})),
                       doctest::Contains("nonzero-degree"), Error);
  // a principal divisor comes from a linear support function
  auto xs = shared(hirzebruch(3));
  auto d = principal_divisor(x, {{at(0), 1}, {kInf, -1}}, v({2}));
  auto h = support_from_weil(xs, d);
  CHECK(validate_support(h).empty());
  CHECK(weil_from_support(h) == d);
  CHECK(total_sections(h) == 1);
}

TEST_CASE("non Q-Cartier and invalid keys are rejected") {
  auto x = shared(hirzebruch(2));
  TWeilDivisor bad;
  bad.horizontal[v({-1})] = 1;  // marked ray, not a prime divisor
  CHECK_THROWS_WITH_AS(support_from_weil(x, bad), doctest::Contains("invalid-divisor"), Error);
  TWeilDivisor off;
  off.vertical[{at(5), v({0})}] = 1;
  CHECK_THROWS_WITH_AS(support_from_weil(x, off), doctest::Contains("invalid-divisor"), Error);
}

TEST_CASE("scaling and linearity of the divisor map") {
  auto x = shared(hirzebruch(2));
  auto h = support_from_weil(x, f2_divisor());
  auto g = support_from_weil(x, principal_divisor(*x, {{at(0), 1}, {kInf, -1}}, v({1})));
  CHECK(weil_from_support(h + g) == weil_from_support(h) + weil_from_support(g));
  for (long k : {2, 3}) {
    auto hk = h.scaled(k);
    auto hs = hstar(h), hks = hstar(hk);
    CHECK(hks.box == hs.box.scaled(k));
    for (long u = 0; u <= 3; ++u)
      for (size_t p = 0; p < 2; ++p) CHECK(hks.value(p, v({k * u})) == k * hs.value(p, v({u})));
  }
  // concavity on a rational grid
  auto hs = hstar(h);
  for (long a = 0; a <= 12; ++a)
    for (long b = 0; b <= 12; ++b) {
      RatVec ua{Rat(Rat(a) / 4)}, ub{Rat(Rat(b) / 4)}, mid{Rat(Rat(a + b) / 8)};
      for (size_t p = 0; p < 2; ++p) CHECK(2 * hs.value(p, mid) >= hs.value(p, ua) + hs.value(p, ub));
    }
}
