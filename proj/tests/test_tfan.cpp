#include "doctest.h"
#include "models.hpp"

using namespace tvob;
using namespace models;

namespace {

// Interval oracle for rank one: a polyhedron in Q^1 as [lo, hi] with
// optional infinite ends.
struct Interval {
  bool lo_inf, hi_inf;
  Rat lo, hi;
};
Interval as_interval(const Polyhedron& p) {
  Interval i{false, false, 0, 0};
  Rat mn = p.vertices()[0][0], mx = mn;
  for (auto& x : p.vertices()) mn = std::min(mn, x[0]), mx = std::max(mx, x[0]);
  i.lo = mn, i.hi = mx;
  for (auto& r : p.rays()) (r[0] > 0 ? i.hi_inf : i.lo_inf) = true;
  return i;
}
Interval interval_sum(const Interval& a, const Interval& b) {
  return {a.lo_inf || b.lo_inf, a.hi_inf || b.hi_inf, a.lo + b.lo, a.hi + b.hi};
}

bool same_cells(const Slice& a, const Slice& b) {
  if (!(a.point == b.point) || a.cells.size() != b.cells.size()) return false;
  for (auto& c : a.cells)
    if (std::find(b.cells.begin(), b.cells.end(), c) == b.cells.end()) return false;
  return true;
}

bool same_cones(std::vector<Polyhedron> a, std::vector<Polyhedron> b) {
  if (a.size() != b.size()) return false;
  for (auto& c : a)
    if (std::find(b.begin(), b.end(), c) == b.end()) return false;
  return true;
}

}  // namespace

TEST_CASE("curve points order finite values before infinity") {
  CHECK(at(0) < at(1));
  CHECK(at(5) < kInf);
  CHECK_FALSE(kInf < at(5));
  CHECK_FALSE(kInf == at(0));
  CHECK(to_string(kInf) == "inf");
}

TEST_CASE("hirzebruch p-divisors") {
  for (long n : {1, 2, 3}) {
    auto x = hirzebruch(n);
    auto d0 = extract_pdivisor(x, ray_plus());
    CHECK(d0.coefficient(at(0)) == cell({v({0})}, {v({1})}));
    CHECK(d0.coefficient(kInf).is_empty());
    CHECK(degree(d0).is_empty());
    CHECK(validate_pdivisor(d0));

    auto d2 = extract_pdivisor(x, ray_minus());
    CHECK(d2.coefficient(at(0)) == cell({v({Rat(-1, n)})}, {v({-1})}));
    CHECK(d2.coefficient(kInf) == cell({v({0})}, {v({-1})}));
    CHECK(d2.complete_locus());
    auto oracle = interval_sum(as_interval(d2.coefficient(at(0))), as_interval(d2.coefficient(kInf)));
    auto deg = as_interval(degree(d2));
    CHECK(deg.lo_inf == oracle.lo_inf);
    CHECK(deg.hi == oracle.hi);
    CHECK(deg.hi == Rat(-1, n));
    CHECK(validate_pdivisor(d2));
    CHECK(validate_fansy(x).empty());
  }
}

TEST_CASE("degree equal to the tail is not proper") {
  PDivisor d{ray_plus(), {{at(0), ray_plus()}}};
  CHECK(degree(d) == ray_plus());
  CHECK_FALSE(validate_pdivisor(d));
  PDivisor bare{ray_plus(), {}};
  CHECK(degree(bare) == ray_plus());
}

TEST_CASE("marking the positive ray breaks the hirzebruch model") {
  auto x = hirzebruch(2);
  x.marked.push_back(ray_plus());
  auto vs = validate_fansy(x);
  REQUIRE_FALSE(vs.empty());
  bool cond = false;
  for (auto& w : vs) cond = cond || w.condition == "condition 2" || w.condition == "condition 3";
  CHECK(cond);
}

TEST_CASE("broken slices are reported") {
  auto x = hirzebruch(2);
  x.slices[0].cells.pop_back();
  CHECK_FALSE(validate_fansy(x).empty());
  auto y = hirzebruch(2);
  y.slices[0].cells.push_back(cell({v({-1}), v({1})}));
  CHECK_FALSE(validate_fansy(y).empty());
  auto z = hirzebruch(2);
  z.slices[0].cells.pop_back();
  CHECK_THROWS_AS(extract_pdivisor(z, ray_plus()), Error);
}

TEST_CASE("trivial fansy divisor") {
  MarkedFansyDivisor x;
  x.rank = 1;
  x.tailfan = {ray_minus(), ray_plus()};
  x.slices = {{at(3), {ray_minus(), ray_plus()}}};
  CHECK(validate_fansy(x).empty());
  auto d = extract_pdivisor(x, ray_plus());
  CHECK(d.coefficient(at(3)).is_empty());
  CHECK(d.coefficient(at(0)) == ray_plus());
  CHECK(vertex_set(x) == std::vector<TaggedVertex>{{at(3), v({0})}});
  // no stored slices: the empty coefficient goes to an auxiliary point
  x.slices.clear();
  auto e = extract_pdivisor(x, ray_minus());
  REQUIRE(e.coefficients.size() == 1);
  CHECK(e.coefficients[0].first == at(0));
  CHECK(e.coefficients[0].second.is_empty());
}

TEST_CASE("quadric and cotangent models validate") {
  auto q = quadric();
  CHECK(validate_fansy(q).empty());
  CHECK(extremal_rays(q).empty());
  CHECK(vertex_set(q).size() == 5);
  auto c = cotangent();
  CHECK(validate_fansy(c).empty());
  CHECK(extremal_rays(c).empty());
  CHECK(vertex_set(c).size() == 6);
}

TEST_CASE("extremal rays and vertices of the hirzebruch model") {
  auto x = hirzebruch(2);
  CHECK(extremal_rays(x) == RatMat{v({1})});
  std::vector<TaggedVertex> expected{{at(0), v({Rat(-1, 2)})}, {at(0), v({0})}, {kInf, v({0})}};
  CHECK(vertex_set(x) == expected);
}

TEST_CASE("downgrade of the hirzebruch fan") {
  for (long n : {1, 2, 3}) {
    auto x = downgrade(hirzebruch_fan(n), {v({1}), v({0})}, v({0, 1}), {v({1, 0})});
    auto ref = hirzebruch(n);
    CHECK(validate_fansy(x).empty());
    REQUIRE(x.slices.size() == 2);
    CHECK(same_cells(x.slices[0], ref.slices[0]));
    CHECK(same_cells(x.slices[1], ref.slices[1]));
    CHECK(same_cones(x.marked, ref.marked));
    CHECK(same_cones(x.tailfan, ref.tailfan));
  }
}

TEST_CASE("downgrade with the diagonal splitting") {
  long n = 2;
  auto x = downgrade(hirzebruch_fan(n), {v({1}), v({1})}, v({1, -1}), {v({1, 0})});
  CHECK(validate_fansy(x).empty());
  Slice s0{at(0), {cell({v({0})}, {v({-1})}), cell({v({0}), v({1})}), cell({v({1})}, {v({1})})}};
  Rat a(-1, n + 1);
  Slice sinf{kInf, {cell({v({a})}, {v({-1})}), cell({v({a}), v({0})}), cell({v({0})}, {v({1})})}};
  CHECK(same_cells(x.slices[0], s0));
  CHECK(same_cells(x.slices[1], sinf));
  CHECK(same_cones(x.marked, {ray_minus(), ray_plus()}));
}

TEST_CASE("downgrade of the singular square fan") {
  std::vector<Polyhedron> fan{sigma_r(), sigma_t(), sigma_l(), sigma_b()};
  auto x = downgrade(fan, {v({1}), v({-1})}, v({1, 1}), {v({1, 0})});
  CHECK(validate_fansy(x).empty());
  CHECK(x.marked.empty());
  Rat h(1, 2);
  CHECK(same_cells(x.slices[0], {at(0), {cell({v({h})}, {v({-1})}), cell({v({h})}, {v({1})})}}));
  CHECK(same_cells(x.slices[1], {kInf, {cell({v({-h})}, {v({-1})}), cell({v({-h})}, {v({1})})}}));
}

TEST_CASE("downgrade rejects bad input") {
  auto fan = hirzebruch_fan(1);
  CHECK_THROWS_WITH_AS(downgrade(fan, {v({1}), v({0})}, v({1, 1}), {v({1, 0})}),
                       doctest::Contains("not-a-splitting"), Error);
  CHECK_THROWS_WITH_AS(downgrade(fan, {v({1}), v({0})}, v({0, 2}), {v({1, 0})}),
                       doctest::Contains("not-a-splitting"), Error);
  fan.pop_back();
  CHECK_THROWS_WITH_AS(downgrade(fan, {v({1}), v({0})}, v({0, 1}), {v({1, 0})}),
                       doctest::Contains("not-complete"), Error);
}
