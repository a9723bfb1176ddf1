#include "tvob/degen.hpp"

#include <algorithm>

#include "tvob/linalg.hpp"

namespace tvob {

namespace {

Rat evaluate(const AffinePiece& p, const RatVec& u) { return dot(p.slope, u) + p.constant; }

bool integral(const Rat& q) { return q.get_den() == 1; }

RatVec lift(const Rat& x, const RatVec& u) {
  RatVec r{x};
  r.insert(r.end(), u.begin(), u.end());
  return r;
}

// Distinct vertices of all cells of a refinement.
std::set<RatVec> refinement_vertices(const std::vector<std::pair<Polyhedron, std::vector<AffinePiece>>>& cells) {
  std::set<RatVec> out;
  for (auto& [c, ps] : cells) out.insert(c.vertices().begin(), c.vertices().end());
  return out;
}

void check_graph(const PiecewiseAffine& f, const std::string& name, std::vector<Violation>& out) {
  if (auto why = f.check_cells()) out.push_back({"cells", name + ": " + *why});
  for (auto& [c, p] : f.cells)
    for (auto& u : c.vertices()) {
      Rat val = evaluate(p, u);
      if (!is_integral(u) || !integral(val))
        out.push_back({"integral graph", name + " has graph vertex (" + to_string(u) + ", " + to_string(val) + ")"});
    }
}

}  // namespace

std::set<RatVec> level_one_valuations(const SupportFunction& h, const Flag& flag) {
  HStar hs = hstar(h);
  std::set<RatVec> out;
  if (hs.box.is_empty()) return out;
  auto shift = normalization_shift(h, flag);
  for (auto& u : lattice_points(hs.box)) {
    // sections f chi^u are f in L(E) with E = sum floor(h*_P(u)) [P]
    Rat e = 0, at_flag = 0;
    for (size_t i = 0; i < hs.points.size(); ++i) {
      Rat f = floor(hs.value(i, u));
      e += f;
      if (hs.points[i] == flag.point) at_flag = f;
    }
    if (e < 0) continue;
    // on P^1, ord_P(f) + E_P takes every value in 0..deg E
    for (Rat k = 0; k <= e; k += 1) out.insert(flag_coordinates(flag, shift, k - at_flag, u));
  }
  return out;
}

ValueSemigroup value_semigroup(const SupportFunction& h, const Flag& flag, int m_max) {
  if (m_max < 1) throw Error("invalid-argument", "m_max must be at least 1");
  ValueSemigroup v;
  v.levels[1] = level_one_valuations(h, flag);
  if (v.levels[1].empty()) throw Error("not-big", "O(D_h) has no sections");
  for (int m = 2; m <= m_max; ++m) {
    auto& next = v.levels[m];
    for (auto& a : v.levels[m - 1])
      for (auto& b : v.levels[1]) next.insert(add(a, b));
  }
  v.generated_up_to = m_max;
  return v;
}

Polyhedron newton_okounkov(const ValueSemigroup& v) {
  auto it = v.levels.find(1);
  if (it == v.levels.end() || it->second.empty()) throw Error("invalid-argument", "level one is empty");
  RatMat pts(it->second.begin(), it->second.end());
  return Polyhedron::from_generators(pts[0].size(), pts);
}

PiecewiseAffine PiecewiseAffine::minimum(const Polyhedron& domain, std::vector<AffinePiece> pieces) {
  std::vector<AffinePiece> distinct;
  for (auto& p : pieces)
    if (std::find(distinct.begin(), distinct.end(), p) == distinct.end()) distinct.push_back(p);
  PiecewiseAffine f;
  f.domain = domain;
  const size_t n = domain.ambient_dim();
  for (size_t i = 0; i < distinct.size(); ++i) {
    std::vector<Halfspace> ineqs;
    for (size_t j = 0; j < distinct.size(); ++j)
      if (j != i)
        ineqs.push_back({sub(distinct[j].slope, distinct[i].slope), distinct[i].constant - distinct[j].constant});
    auto cell = domain.intersect(Polyhedron::from_inequalities(n, ineqs));
    if (cell.dimension() != domain.dimension()) continue;
    f.cells.emplace_back(cell, distinct[i]);
    if (domain.dimension() == 0) break;
  }
  return f;
}

PiecewiseAffine PiecewiseAffine::constant(const Polyhedron& domain, const Rat& c) {
  return minimum(domain, {AffinePiece{RatVec(domain.ambient_dim(), Rat(0)), c}});
}

Rat PiecewiseAffine::operator()(const RatVec& u) const {
  for (auto& [c, p] : cells)
    if (c.contains(u)) return evaluate(p, u);
  throw Error("outside-domain", to_string(u) + " is not in the domain");
}

std::optional<std::string> PiecewiseAffine::check_cells() const {
  if (cells.empty()) return "no cells";
  for (auto& [c, p] : cells) {
    if (!domain.contains(c)) return "cell leaves the domain";
    if (c.dimension() != domain.dimension()) return "cell is not full-dimensional";
  }
  if (!domain.is_full_dimensional()) return std::nullopt;
  Rat total = 0;
  for (auto& [c, p] : cells) total += lattice_volume(c);
  if (total != lattice_volume(domain)) return "cells do not tile the domain";
  for (size_t i = 0; i < cells.size(); ++i)
    for (size_t j = i + 1; j < cells.size(); ++j)
      if (cells[i].first.intersect(cells[j].first).is_full_dimensional()) return "cells overlap";
  return std::nullopt;
}

std::vector<std::pair<Polyhedron, std::vector<AffinePiece>>> common_refinement(
    const std::vector<const PiecewiseAffine*>& fs) {
  std::vector<std::pair<Polyhedron, std::vector<AffinePiece>>> out;
  if (fs.empty()) return out;
  const int dim = fs[0]->domain.dimension();
  out.push_back({fs[0]->domain, {}});
  for (auto* f : fs) {
    std::vector<std::pair<Polyhedron, std::vector<AffinePiece>>> next;
    for (auto& [c, ps] : out)
      for (auto& [d, p] : f->cells) {
        auto i = c.intersect(d);
        if (i.dimension() != dim) continue;
        auto qs = ps;
        qs.push_back(p);
        next.emplace_back(std::move(i), std::move(qs));
        if (dim == 0) break;
      }
    out = std::move(next);
  }
  return out;
}

PiecewiseAffine operator+(const PiecewiseAffine& a, const PiecewiseAffine& b) {
  PiecewiseAffine r;
  r.domain = a.domain;
  // cells carrying the same affine piece are merged when their union is convex
  std::vector<std::pair<std::vector<Polyhedron>, AffinePiece>> groups;
  for (auto& [c, ps] : common_refinement({&a, &b})) {
    AffinePiece s{add(ps[0].slope, ps[1].slope), ps[0].constant + ps[1].constant};
    auto g = std::find_if(groups.begin(), groups.end(), [&](auto& e) { return e.second == s; });
    if (g == groups.end())
      groups.push_back({{c}, s});
    else
      g->first.push_back(c);
  }
  for (auto& [cs, s] : groups) {
    RatMat pts;
    Rat vol = 0;
    for (auto& c : cs) {
      pts.insert(pts.end(), c.vertices().begin(), c.vertices().end());
      vol += lattice_volume(c);
    }
    auto hull = Polyhedron::from_generators(a.domain.ambient_dim(), pts);
    if (cs.size() == 1 || (hull.is_full_dimensional() && lattice_volume(hull) == vol)) {
      r.cells.emplace_back(hull, s);
    } else {
      for (auto& c : cs) r.cells.emplace_back(c, s);
    }
  }
  return r;
}

Rat DivisorialPolytope::degree(const RatVec& u) const {
  Rat d = 0;
  for (auto& f : psi) d += f(u);
  return d;
}

const PiecewiseAffine* DivisorialPolytope::at(const CurvePoint& p) const {
  for (size_t i = 0; i < points.size(); ++i)
    if (points[i] == p) return &psi[i];
  return nullptr;
}

std::vector<Violation> divisorial_violations(const DivisorialPolytope& d) {
  std::vector<Violation> out;
  if (d.box.is_empty() || !d.box.is_bounded() || !d.box.is_full_dimensional()) {
    out.push_back({"box", "box is not a full-dimensional polytope"});
    return out;
  }
  for (auto& u : d.box.vertices())
    if (!is_integral(u)) out.push_back({"box", "vertex " + to_string(u) + " is not a lattice point"});
  if (d.points.size() != d.psi.size()) {
    out.push_back({"shape", "one function per point is required"});
    return out;
  }
  for (size_t i = 0; i < d.psi.size(); ++i) {
    if (!(d.psi[i].domain == d.box)) out.push_back({"domain", "Psi at " + to_string(d.points[i]) + " lives on another box"});
    check_graph(d.psi[i], "Psi at " + to_string(d.points[i]), out);
  }
  if (!out.empty()) return out;
  RatVec centroid(d.box.ambient_dim(), Rat(0));
  for (auto& u : d.box.vertices()) centroid = add(centroid, u);
  centroid = scale(centroid, Rat(1) / Rat(static_cast<long>(d.box.vertices().size())));
  if (d.degree(centroid) <= 0) out.push_back({"degree", "deg Psi vanishes in the interior"});
  for (auto& u : d.box.vertices()) {
    Rat deg = d.degree(u);
    if (deg < 0) {
      out.push_back({"degree", "deg Psi is negative at " + to_string(u)});
      continue;
    }
    if (deg > 0) continue;
    for (size_t i = 0; i < d.psi.size(); ++i)
      if (!integral(d.psi[i](u)))
        out.push_back({"vertex", "deg Psi is zero at " + to_string(u) + " but Psi at " + to_string(d.points[i]) +
                                     " is not integral"});
  }
  return out;
}

DivisorialPolytope divisorial_polytope_of(const SupportFunction& h, const Flag& flag) {
  if (flag.kind != FlagKind::G1 && flag.kind != FlagKind::G2)
    throw Error("invalid-flag", "a general flag is required");
  HStar hs = hstar(normalize(h, flag));
  DivisorialPolytope d;
  d.box = hs.box;
  if (!hs.box.is_empty())
    for (size_t i = 0; i < hs.points.size(); ++i) {
      d.points.push_back(hs.points[i]);
      d.psi.push_back(PiecewiseAffine::minimum(hs.box, hs.pieces[i]));
    }
  auto vs = divisorial_violations(d);
  if (!vs.empty()) throw Error("not-divisorial-polytope", vs[0].condition + ": " + vs[0].detail);
  return d;
}

DivisorialPolytope concentrate(const DivisorialPolytope& d, const CurvePoint& p) {
  DivisorialPolytope r;
  r.box = d.box;
  r.points = {p};
  auto total = PiecewiseAffine::constant(d.box, 0);
  for (auto& f : d.psi) total = total + f;
  r.psi = {total};
  return r;
}

Polyhedron hypograph_body(const DivisorialPolytope& d) {
  std::vector<const PiecewiseAffine*> fs;
  for (auto& f : d.psi) fs.push_back(&f);
  std::set<RatVec> us;
  if (fs.empty())
    us.insert(d.box.vertices().begin(), d.box.vertices().end());
  else
    us = refinement_vertices(common_refinement(fs));
  RatMat pts;
  for (auto& u : us) {
    pts.push_back(lift(0, u));
    pts.push_back(lift(d.degree(u), u));
  }
  return Polyhedron::from_generators(d.box.ambient_dim() + 1, pts);
}

std::vector<Violation> check_decomposition(const DivisorialPolytope& d, const Decomposition& dec) {
  std::vector<Violation> out;
  auto zero = PiecewiseAffine::constant(d.box, 0);
  const PiecewiseAffine* psi0 = d.at(dec.point);
  if (!psi0) psi0 = &zero;
  if (dec.alpha <= 0) out.push_back({"alpha", "alpha must be positive"});
  for (auto* f : {&dec.psi0_0, &dec.psi0_1})
    if (!(f->domain == d.box)) out.push_back({"domain", "a summand is not defined on the box"});
  if (!out.empty()) return out;
  check_graph(dec.psi0_0, "Psi0^0", out);
  check_graph(dec.psi0_1, "Psi0^1", out);

  auto cells = common_refinement({psi0, &dec.psi0_0, &dec.psi0_1});
  for (auto& u : refinement_vertices(cells)) {
    Rat lhs = (*psi0)(u), rhs = dec.psi0_0(u) + dec.alpha * dec.psi0_1(u);
    if (lhs != rhs)
      out.push_back({"sum identity", "Psi0 at " + to_string(u) + " is " + to_string(lhs) + " but the summands give " +
                                         to_string(rhs)});
  }
  for (auto& [c, ps] : cells) {
    bool frac0 = !is_integral(ps[1].slope), frac1 = !is_integral(ps[2].slope);
    std::string where = "on the cell with vertices " + to_string(c.vertices().front()) + "..";
    if (frac0 && frac1) out.push_back({"slopes", "both summands have non-integral slope " + where});
    if (dec.alpha != 1 && frac1) out.push_back({"alpha", "alpha != 1 needs integral slopes of Psi0^1 " + where});
  }
  return out;
}

RatMat polygon_cycle(const Polyhedron& polygon) {
  RatMat vs = polygon.vertices();
  if (vs.empty() || vs[0].size() != 2) throw Error("invalid-argument", "a polygon is required");
  RatVec c{0, 0};
  for (auto& v : vs) c = add(c, v);
  c = scale(c, Rat(1) / Rat(static_cast<long>(vs.size())));
  auto half = [&](const RatVec& v) {
    RatVec d = sub(v, c);
    return d[1] < 0 || (d[1] == 0 && d[0] < 0);
  };
  std::sort(vs.begin(), vs.end(), [&](const RatVec& a, const RatVec& b) {
    bool ha = half(a), hb = half(b);
    if (ha != hb) return !ha;
    RatVec da = sub(a, c), db = sub(b, c);
    return da[0] * db[1] - da[1] * db[0] > 0;
  });
  return vs;
}

namespace {

bool is_lattice_polygon(const Polyhedron& p) {
  if (p.is_empty() || p.ambient_dim() != 2 || !p.is_bounded() || !p.is_full_dimensional()) return false;
  for (auto& v : p.vertices())
    if (!is_integral(v)) return false;
  return true;
}

// Okounkov body of the downgrade in which the neighbours of cyc[m] become
// one extremal point.
Polyhedron wps_candidate(const Polyhedron& polygon, const RatMat& cyc, size_t m) {
  const size_t k = cyc.size();
  const RatVec &um = cyc[m], &u1 = cyc[(m + 1) % k], &u2 = cyc[(m + k - 1) % k];
  RatVec w = sub(u1, u2);
  RatVec v = primitive(RatVec{-w[1], w[0]});
  if (dot(sub(um, u1), v) > 0) v = scale(v, -1);

  // splitting N = Z v + ker: p annihilates v, s(v) = 1
  RatVec p{v[1], -v[0]};
  mpz_class g, a, b;
  mpz_gcdext(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t(), v[0].get_num_mpz_t(), v[1].get_num_mpz_t());
  RatVec s{Rat(a), Rat(b)};

  // normal fan with inward facet normals and the divisor sum a_rho D_rho
  const auto& facets = polygon.facets();
  std::vector<Polyhedron> fan;
  for (auto& u : cyc) {
    RatMat rays;
    for (auto& f : facets)
      if (dot(f.normal, u) == f.offset) rays.push_back(primitive(f.normal));
    fan.push_back(Polyhedron::cone(2, rays));
  }
  auto x = std::make_shared<const MarkedFansyDivisor>(downgrade(fan, {{v[0]}, {v[1]}}, p, {s}));
  TWeilDivisor div;
  for (auto& f : facets) {
    RatVec n = primitive(f.normal);
    Rat coeff = -f.offset * (dot(f.normal, n) / dot(f.normal, f.normal));
    if (coeff == 0) continue;
    Rat height = dot(p, n), image = dot(s, n);
    if (height == 0)
      div.horizontal[{image}] += coeff;
    else if (height > 0)
      div.vertical[{CurvePoint::finite(0), {image / height}}] += coeff;
    else
      div.vertical[{CurvePoint::inf(), {-image / height}}] += coeff;
  }
  auto h = support_from_weil(x, div);

  Flag flag;
  flag.sigma_fix = Polyhedron::cone(1, {{Rat(1)}});
  flag.kind = x->is_marked(flag.sigma_fix) ? FlagKind::G2 : FlagKind::G1;
  flag.point = CurvePoint::finite(1);
  flag.ray_order = {{Rat(1)}};
  return okounkov_body(h, make_flag(*x, flag));
}

// One degeneration step with the lexicographically least vertex as the middle
// point. The result is a rational polygon in general: the degenerate surface
// is normalized and the divisor is only Q-Cartier.
Polyhedron wps_step(const Polyhedron& polygon) {
  RatMat cyc = polygon_cycle(polygon);
  size_t m = static_cast<size_t>(std::min_element(cyc.begin(), cyc.end()) - cyc.begin());
  auto ob = wps_candidate(polygon, cyc, m);
  if (ob.vertices().size() >= cyc.size() || lattice_volume(ob) != lattice_volume(polygon))
    throw Error("no-distance-2-pair", "the step did not remove an extremal point");
  return ob;
}

}  // namespace

std::vector<Polyhedron> wps_degeneration_chain(const Polyhedron& polygon) {
  if (!is_lattice_polygon(polygon)) throw Error("not-lattice-polytope", "input must be a full-dimensional lattice polygon");
  std::vector<Polyhedron> chain{polygon};
  while (chain.back().vertices().size() > 3) chain.push_back(wps_step(chain.back()));
  return chain;
}

RatVec wps_weights(const Polyhedron& triangle) {
  if (triangle.facets().size() != 3) throw Error("invalid-argument", "a triangle is required");
  RatMat cols;
  for (auto& f : triangle.facets()) cols.push_back(primitive(f.normal));
  auto ker = nullspace(transpose(cols, 2), 3);
  if (ker.size() != 1) throw Error("invalid-argument", "degenerate triangle");
  RatVec q = primitive(ker[0]);
  if (q[0] < 0) q = scale(q, -1);
  return q;
}

}  // namespace tvob
