#include "tvob/okounkov.hpp"

#include <algorithm>
#include <functional>

#include "tvob/linalg.hpp"

namespace tvob {

std::string to_string(FlagKind k) {
  switch (k) {
    case FlagKind::G1: return "G1";
    case FlagKind::G2: return "G2";
    case FlagKind::T1: return "T1";
    case FlagKind::T2: return "T2";
  }
  return "?";
}

FlagKind parse_flag_kind(const std::string& s) {
  if (s == "G1") return FlagKind::G1;
  if (s == "G2") return FlagKind::G2;
  if (s == "T1") return FlagKind::T1;
  if (s == "T2") return FlagKind::T2;
  throw Error("schema-error", "unknown flag kind '" + s + "'");
}

namespace {

bool is_general(FlagKind k) { return k == FlagKind::G1 || k == FlagKind::G2; }

bool same_ray_set(RatMat a, RatMat b) {
  for (auto& r : a) r = primitive(r);
  for (auto& r : b) r = primitive(r);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

RatVec lift(const Rat& height, const RatVec& v) {
  RatVec r{height};
  r.insert(r.end(), v.begin(), v.end());
  return r;
}

// Cone over {height} x p inside Z x N.
void push_cone_generators(RatMat& gens, const Rat& height, const Polyhedron& p) {
  for (auto& v : p.vertices()) gens.push_back(lift(height, v));
  for (auto& r : p.rays()) gens.push_back(lift(0, r));
}

size_t slice_index(const MarkedFansyDivisor& x, const CurvePoint& p) {
  for (size_t i = 0; i < x.slices.size(); ++i)
    if (x.slices[i].point == p) return i;
  return x.slices.size();
}

// Affine form a.y + c in the ambient variables y.
struct Aff {
  RatVec a;
  Rat c;
  Aff operator+(const Aff& o) const { return {add(a, o.a), c + o.c}; }
  Aff operator-(const Aff& o) const { return {sub(a, o.a), c - o.c}; }
  Aff operator*(const Rat& s) const { return {scale(a, s), c * s}; }
};

// Divisor data as affine forms in the ambient variables. Variable 0 is x,
// variables 1..k are u, anything after that parametrizes the divisor.
struct HModel {
  size_t dim = 0, rank = 0;
  std::function<Aff(const CurvePoint&, const RatVec&)> value;  // h_P(v)
  std::function<std::vector<Aff>(size_t)> slope;                // u_sigma per maximal cone
  std::vector<Aff> u0;                                          // normalization slope
  Aff a;                                                        // normalization constant

  Aff zero() const { return {RatVec(dim, Rat(0)), 0}; }
  Aff var(size_t i) const {
    Aff f = zero();
    f.a[i] = 1;
    return f;
  }
  Aff u_dot(const RatVec& v) const {
    Aff f = zero();
    for (size_t t = 0; t < rank; ++t) f.a[1 + t] = v[t];
    return f;
  }
  Aff dot_forms(const std::vector<Aff>& forms, const RatVec& v) const {
    Aff f = zero();
    for (size_t t = 0; t < rank; ++t) f = f + forms[t] * v[t];
    return f;
  }
};

Halfspace nonneg(const Aff& f) { return {f.a, -f.c}; }

// Vertices of the slice at p, or {0} when p carries no slice.
RatMat point_vertices(const MarkedFansyDivisor& x, const CurvePoint& p) {
  RatMat out;
  for (auto& tv : vertex_set(x))
    if (tv.point == p) out.push_back(tv.v);
  if (out.empty()) out.push_back(RatVec(x.rank, Rat(0)));
  return out;
}

// Inequalities cutting out the (unnormalized) region in (x, u, ...):
// G flags: u in Box, 0 <= x <= deg h*(u).
// T flags: u in Box, 0 <= x + h*_P(u) <= deg h*(u).
std::vector<Halfspace> region(const MarkedFansyDivisor& x, const HModel& m, const Flag& flag) {
  std::vector<Halfspace> out;
  auto maximal = x.maximal_cones();
  for (size_t s = 0; s < maximal.size(); ++s) {
    auto us = m.slope(s);
    for (auto& r : maximal[s].rays()) out.push_back(nonneg(m.u_dot(r) - m.dot_forms(us, r)));
  }
  auto piece = [&](const CurvePoint& p, const RatVec& v) { return m.u_dot(v) - m.value(p, v); };

  std::vector<CurvePoint> upper_points;
  if (is_general(flag.kind)) {
    out.push_back(nonneg(m.var(0)));
    upper_points = x.points();
  } else {
    for (auto& v : point_vertices(x, flag.point)) out.push_back(nonneg(m.var(0) + piece(flag.point, v)));
    for (auto& p : x.points())
      if (!(p == flag.point)) upper_points.push_back(p);
  }
  // x <= sum over points of min over vertices, expanded over vertex tuples
  std::vector<RatMat> choices;
  for (auto& p : upper_points) choices.push_back(point_vertices(x, p));
  std::vector<size_t> idx(choices.size(), 0);
  while (true) {
    Aff bound = m.zero() - m.var(0);
    for (size_t i = 0; i < choices.size(); ++i) bound = bound + piece(upper_points[i], choices[i][idx[i]]);
    out.push_back(nonneg(bound));
    size_t i = 0;
    while (i < choices.size() && ++idx[i] == choices[i].size()) idx[i++] = 0;
    if (i == choices.size()) break;
  }
  return out;
}

// Rows of the flag transform on the ambient variables, including the
// normalization shift: G -> (x, <u - u0, n_i>), T -> <(x - a, u - u0), n_i>.
std::vector<Aff> transform_rows(const HModel& m, const Flag& flag) {
  std::vector<Aff> rows;
  Aff shifted_x = m.var(0) - m.a;
  if (is_general(flag.kind)) {
    rows.push_back(m.var(0));
    for (auto& n : flag.ray_order) rows.push_back(m.u_dot(n) - m.dot_forms(m.u0, n));
  } else {
    for (auto& n : flag.ray_order) {
      RatVec w(n.begin() + 1, n.end());
      rows.push_back(shifted_x * n[0] + m.u_dot(w) - m.dot_forms(m.u0, w));
    }
  }
  return rows;
}

HModel local_model(const SupportFunction& h, const Flag& flag) {
  HModel m;
  m.rank = h.base->rank;
  m.dim = 1 + m.rank;
  const size_t dim = m.dim, rank = m.rank;
  auto constant = [dim](const Rat& c) { return Aff{RatVec(dim, Rat(0)), c}; };
  m.value = [&h, constant](const CurvePoint& p, const RatVec& v) { return constant(h.value(p, v)); };
  m.slope = [&h, constant, rank](size_t s) {
    std::vector<Aff> f;
    for (size_t t = 0; t < rank; ++t) f.push_back(constant(h.linear[s][t]));
    return f;
  };
  auto shift = normalization_shift(h, flag);
  for (auto& c : shift.u0) m.u0.push_back(constant(c));
  m.a = constant(shift.a);
  return m;
}

Polyhedron apply_rows(const Polyhedron& p, const std::vector<Aff>& rows) {
  // affine map: translate by the constants after the linear part
  RatMat lin;
  RatVec offset;
  for (auto& r : rows) {
    lin.push_back(r.a);
    offset.push_back(r.c);
  }
  auto img = linear_image(p, lin);
  return img.is_empty() ? img : img.translate(offset);
}

}  // namespace

Flag make_flag(const MarkedFansyDivisor& x, Flag f) {
  auto maximal = x.maximal_cones();
  auto is_maximal = [&](const Polyhedron& s) {
    return std::find(maximal.begin(), maximal.end(), s) != maximal.end();
  };
  if (is_general(f.kind)) {
    if (!is_maximal(f.sigma_fix)) throw Error("invalid-flag", "sigma_fix is not a maximal tail cone");
    bool want_marked = f.kind == FlagKind::G2;
    if (x.is_marked(f.sigma_fix) != want_marked)
      throw Error("marking-mismatch", to_string(f.kind) + " needs " +
                                          (want_marked ? "a marked" : "an unmarked") + " sigma_fix");
    if (!is_smooth_cone(f.sigma_fix)) throw Error("not-smooth", "sigma_fix is not smooth");
    if (x.slice_at(f.point)) throw Error("invalid-flag", "Q must be a general point");
    if (!same_ray_set(f.ray_order, f.sigma_fix.rays()))
      throw Error("invalid-flag", "ray_order is not an ordering of the rays of sigma_fix");
    for (auto& r : f.ray_order) r = primitive(r);
    return f;
  }

  RatMat gens;
  if (f.kind == FlagKind::T1) {
    const Slice* s = x.slice_at(f.point);
    if (!s) throw Error("invalid-flag", "T1 needs a slice point");
    if (std::find(s->cells.begin(), s->cells.end(), f.cell) == s->cells.end())
      throw Error("invalid-flag", "cell is not a cell of the slice at " + to_string(f.point));
    f.sigma_fix = tail_cone(f.cell);
    if (x.is_marked(f.sigma_fix))
      throw Error("marking-mismatch", "T1 needs a cell with unmarked tail");
    push_cone_generators(gens, 1, f.cell);
  } else {
    if (!is_maximal(f.sigma_fix)) throw Error("invalid-flag", "sigma_fix is not a maximal tail cone");
    if (!x.is_marked(f.sigma_fix)) throw Error("marking-mismatch", "T2 needs a marked sigma_fix");
    if (f.point == f.point2) throw Error("invalid-flag", "P1 and P2 must differ");
    PDivisor d = extract_pdivisor(x, f.sigma_fix);
    for (auto& [p, c] : d.coefficients)
      if (!(p == f.point) && !(p == f.point2) && !(c == f.sigma_fix))
        throw Error("locus-mismatch", "non-trivial coefficient at " + to_string(p));
    push_cone_generators(gens, 1, d.coefficient(f.point));
    push_cone_generators(gens, -1, d.coefficient(f.point2));
  }
  f.delta_fix = Polyhedron::cone(x.rank + 1, gens);
  if (!f.delta_fix.is_full_dimensional() || !is_smooth_cone(f.delta_fix))
    throw Error("not-smooth", "delta_fix is not a smooth full-dimensional cone");
  if (!same_ray_set(f.ray_order, f.delta_fix.rays()))
    throw Error("invalid-flag", "ray_order is not an ordering of the rays of delta_fix");
  for (auto& r : f.ray_order) r = primitive(r);
  return f;
}

NormalizationShift normalization_shift(const SupportFunction& h, const Flag& flag) {
  const auto& x = *h.base;
  if (flag.kind == FlagKind::T1) {
    size_t i = slice_index(x, flag.point);
    const auto& cells = x.slices.at(i).cells;
    size_t j = static_cast<size_t>(std::find(cells.begin(), cells.end(), flag.cell) - cells.begin());
    return {h.pieces[i].at(j).slope, h.pieces[i][j].constant};
  }
  AffinePiece pc = h.piece_with_tail(flag.point, flag.sigma_fix);
  if (is_general(flag.kind)) return {pc.slope, 0};
  return {pc.slope, pc.constant};
}

SupportFunction normalize(const SupportFunction& h, const Flag& flag) {
  const auto& x = *h.base;
  auto shift = normalization_shift(h, flag);
  // per stored point, the constant removed from every cell
  std::vector<Rat> constants(x.slices.size(), Rat(0));
  if (flag.kind == FlagKind::T1 && shift.a != 0) {
    size_t i = slice_index(x, flag.point), other = x.slices.size();
    for (size_t t = 0; t < x.slices.size(); ++t)
      if (t != i) {
        other = t;
        break;
      }
    if (other == x.slices.size())
      throw Error("cannot-normalize", "no second slice point to balance the constant");
    constants[i] = shift.a;
    constants[other] = -shift.a;
  }
  if (flag.kind == FlagKind::T2 || flag.kind == FlagKind::G2) {
    Rat total = 0;
    for (size_t i = 0; i < x.slices.size(); ++i) {
      constants[i] = h.piece_with_tail(x.slices[i].point, flag.sigma_fix).constant;
      total += constants[i];
    }
    if (total != 0) throw Error("cannot-normalize", "constants on sigma_fix do not sum to zero");
  }
  SupportFunction r = h;
  for (size_t i = 0; i < r.pieces.size(); ++i)
    for (auto& pc : r.pieces[i]) {
      pc.slope = sub(pc.slope, shift.u0);
      pc.constant -= constants[i];
    }
  for (auto& u : r.linear) u = sub(u, shift.u0);
  return r;
}

RatVec valuation(const SupportFunction& h, const Flag& flag, const CurveDivisor& f,
                 const RatVec& u) {
  const auto& x = *h.base;
  HStar hs = hstar(h);
  auto ord = [&](const CurvePoint& p) {
    Int o = 0;
    for (auto& [q, k] : f)
      if (q == p) o += k;
    return o;
  };
  Int total = 0;
  for (auto& [q, k] : f) total += k;
  if (total != 0) throw Error("nonzero-degree", "div f has nonzero degree");
  bool ok = hs.box.contains(u);
  for (size_t i = 0; ok && i < hs.points.size(); ++i) ok = Rat(ord(hs.points[i])) + hs.value(i, u) >= 0;
  for (auto& [q, k] : f)
    if (ok && !x.slice_at(q)) ok = ord(q) >= 0;
  if (!ok) throw Error("not-a-section", "f * chi^u is not a section of O(D_h)");

  return flag_coordinates(flag, normalization_shift(h, flag), Rat(ord(flag.point)), u);
}

RatVec flag_coordinates(const Flag& flag, const NormalizationShift& shift, const Rat& order,
                        const RatVec& u) {
  RatVec out;
  if (is_general(flag.kind)) {
    out.push_back(order);
    for (auto& n : flag.ray_order) out.push_back(dot(sub(u, shift.u0), n));
  } else {
    Rat xv = order - shift.a;
    for (auto& n : flag.ray_order) out.push_back(n[0] * xv + dot(sub(u, shift.u0), RatVec(n.begin() + 1, n.end())));
  }
  return out;
}

Polyhedron weight_polytope(const SupportFunction& h, const Flag& flag) {
  HModel m = local_model(h, flag);
  auto w = Polyhedron::from_inequalities(m.dim, region(*h.base, m, flag));
  auto shift = normalization_shift(h, flag);
  return w.is_empty() ? w : w.translate(scale(lift(shift.a, shift.u0), -1));
}

Polyhedron okounkov_candidate(const SupportFunction& h, const Flag& flag) {
  HModel m = local_model(h, flag);
  auto r = Polyhedron::from_inequalities(m.dim, region(*h.base, m, flag));
  return apply_rows(r, transform_rows(m, flag));
}

Polyhedron okounkov_body(const SupportFunction& h, const Flag& flag) {
  auto ob = okounkov_candidate(h, flag);
  if (!ob.is_empty() && !ob.is_bounded()) throw Error("not-complete", "Okounkov body is unbounded");
  if (!ob.is_full_dimensional()) throw Error("not-big", "the divisor is not big");
  return ob;
}

Polyhedron toric_okounkov_reference(const RatMat& fan_rays, const RatVec& coefficients,
                                    const RatMat& sigma_rays) {
  const size_t k = sigma_rays.at(0).size();
  if (!is_smooth_cone(Polyhedron::cone(k, sigma_rays)) || sigma_rays.size() != k)
    throw Error("not-smooth-cone", "sigma is not a smooth maximal cone");
  std::vector<Halfspace> ineqs;
  for (size_t i = 0; i < fan_rays.size(); ++i) ineqs.push_back({fan_rays[i], -coefficients[i]});
  auto pd = Polyhedron::from_inequalities(k, ineqs);
  RatMat lin;
  RatVec offset;
  for (auto& n : sigma_rays) {
    lin.push_back(n);
    auto it = std::find(fan_rays.begin(), fan_rays.end(), n);
    if (it == fan_rays.end()) throw Error("not-smooth-cone", "sigma ray is not a fan ray");
    offset.push_back(coefficients[static_cast<size_t>(it - fan_rays.begin())]);
  }
  auto img = linear_image(pd, lin);
  return img.is_empty() ? img : img.translate(offset);
}

RatVec ClassGroupData::key_vector(const MarkedFansyDivisor& x, const TWeilDivisor& d) const {
  RatVec c(key_count(), Rat(0));
  auto pts = x.points();
  for (auto& [key, val] : d.vertical) {
    auto it = std::find(vertex_keys.begin(), vertex_keys.end(), key);
    if (it != vertex_keys.end()) {
      c[static_cast<size_t>(it - vertex_keys.begin())] += val;
      continue;
    }
    if (x.slice_at(key.point) || !is_zero(key.v) || pts.empty())
      throw Error("invalid-divisor", "no prime divisor at " + to_string(key.point));
    // a general fiber is linearly equivalent to the pullback of [P0]
    for (size_t i = 0; i < vertex_keys.size(); ++i)
      if (vertex_keys[i].point == pts.front()) c[i] += val * Rat(mu(vertex_keys[i].v));
  }
  for (auto& [ray, val] : d.horizontal) {
    auto it = std::find(ray_keys.begin(), ray_keys.end(), ray);
    if (it == ray_keys.end()) throw Error("invalid-divisor", "ray " + to_string(ray) + " is not extremal");
    c[vertex_keys.size() + static_cast<size_t>(it - ray_keys.begin())] += val;
  }
  return c;
}

RatVec ClassGroupData::class_of(const MarkedFansyDivisor& x, const TWeilDivisor& d) const {
  return tvob::apply(projection, key_vector(x, d));
}

TWeilDivisor ClassGroupData::divisor_of(const RatVec& keys) const {
  TWeilDivisor d;
  for (size_t i = 0; i < vertex_keys.size(); ++i) d.vertical[vertex_keys[i]] = keys[i];
  for (size_t i = 0; i < ray_keys.size(); ++i) d.horizontal[ray_keys[i]] = keys[vertex_keys.size() + i];
  return d.normalized();
}

ClassGroupData class_group(const MarkedFansyDivisor& x) {
  ClassGroupData cg;
  cg.vertex_keys = vertex_set(x);
  cg.ray_keys = extremal_rays(x);
  const size_t n = cg.key_count(), nv = cg.vertex_keys.size();
  auto pts = x.points();
  auto pullback = [&](const CurvePoint& p) {
    RatVec row(n, Rat(0));
    for (size_t i = 0; i < nv; ++i)
      if (cg.vertex_keys[i].point == p) row[i] = Rat(mu(cg.vertex_keys[i].v));
    return row;
  };
  for (size_t i = 1; i < pts.size(); ++i) cg.relations.push_back(sub(pullback(pts[i]), pullback(pts[0])));
  for (size_t j = 0; j < x.rank; ++j) {
    RatVec row(n, Rat(0));
    for (size_t i = 0; i < nv; ++i) row[i] = Rat(mu(cg.vertex_keys[i].v)) * cg.vertex_keys[i].v[j];
    for (size_t i = 0; i < cg.ray_keys.size(); ++i) row[nv + i] = cg.ray_keys[i][j];
    cg.relations.push_back(row);
  }
  cg.projection = nullspace(cg.relations, n);
  for (auto& r : cg.projection) r = primitive(r);
  cg.rank = cg.projection.size();
  return cg;
}

Polyhedron eff_cone(const ClassGroupData& cg) {
  RatMat gens = transpose(cg.projection, cg.key_count());
  RatMat nonzero;
  for (auto& g : gens)
    if (!is_zero(g)) nonzero.push_back(g);
  return Polyhedron::from_generators(cg.rank, {RatVec(cg.rank, Rat(0))}, nonzero);
}

TWeilDivisor divisor_from_class(const ClassGroupData& cg, const RatVec& xi) {
  const size_t n = cg.key_count();
  std::vector<Halfspace> ineqs, eqs;
  for (size_t j = 0; j < n; ++j) {
    RatVec e(n, Rat(0));
    e[j] = 1;
    ineqs.push_back({e, 0});
  }
  for (size_t r = 0; r < cg.rank; ++r) eqs.push_back({cg.projection[r], xi[r]});
  auto fiber = Polyhedron::from_inequalities(n, ineqs, eqs);
  if (fiber.is_empty()) throw Error("not-effective", "class " + to_string(xi) + " is not effective");
  return cg.divisor_of(fiber.vertices().front());
}

namespace {

struct GlobalSetup {
  HModel model;
  std::vector<Halfspace> ineqs;
  std::vector<Aff> rows;
  ClassGroupData cg;
  size_t body_dim = 0;
};

GlobalSetup global_setup(std::shared_ptr<const MarkedFansyDivisor> xp, const Flag& flag) {
  const auto& x = *xp;
  for (auto& s : x.maximal_cones())
    if (s.rays().size() != x.rank) throw Error("not-simplicial", "a maximal tail cone is not simplicial");
  GlobalSetup g;
  g.cg = class_group(x);
  const size_t n = g.cg.key_count(), k = x.rank;
  std::vector<SupportFunction> units;
  for (size_t j = 0; j < n; ++j) {
    RatVec e(n, Rat(0));
    e[j] = 1;
    units.push_back(support_from_weil(xp, g.cg.divisor_of(e)));
  }
  HModel& m = g.model;
  m.rank = k;
  m.dim = 1 + k + n;
  // h_P(v) = -c_(P,v) / mu(v) on vertices; zero at general points
  const size_t dim = m.dim;
  m.value = [dim, cg = g.cg, k](const CurvePoint& p, const RatVec& v) {
    Aff f{RatVec(dim, Rat(0)), 0};
    TaggedVertex key{p, v};
    auto it = std::find(cg.vertex_keys.begin(), cg.vertex_keys.end(), key);
    if (it != cg.vertex_keys.end())
      f.a[1 + k + static_cast<size_t>(it - cg.vertex_keys.begin())] = -1 / Rat(mu(v));
    return f;
  };
  m.slope = [dim, units, k, n](size_t s) {
    std::vector<Aff> forms(k, Aff{RatVec(dim, Rat(0)), 0});
    for (size_t t = 0; t < k; ++t)
      for (size_t j = 0; j < n; ++j) forms[t].a[1 + k + j] = units[j].linear[s][t];
    return forms;
  };
  m.u0.assign(k, m.zero());
  m.a = m.zero();
  for (size_t j = 0; j < n; ++j) {
    auto sh = normalization_shift(units[j], flag);
    for (size_t t = 0; t < k; ++t) m.u0[t].a[1 + k + j] = sh.u0[t];
    m.a.a[1 + k + j] = sh.a;
  }
  g.ineqs = region(x, m, flag);
  for (size_t j = 0; j < n; ++j) g.ineqs.push_back(nonneg(m.var(1 + k + j)));
  g.rows = transform_rows(m, flag);
  g.body_dim = g.rows.size();
  for (auto& pr : g.cg.projection) {
    Aff f = m.zero();
    for (size_t j = 0; j < n; ++j) f.a[1 + k + j] = pr[j];
    g.rows.push_back(f);
  }
  return g;
}

}  // namespace

GlobalOkounkovBody global_okounkov(std::shared_ptr<const MarkedFansyDivisor> x, const Flag& flag) {
  GlobalSetup g = global_setup(x, flag);
  auto c = Polyhedron::from_inequalities(g.model.dim, g.ineqs);
  return {apply_rows(c, g.rows), g.cg, g.body_dim};
}

Polyhedron global_okounkov_fm(std::shared_ptr<const MarkedFansyDivisor> x, const Flag& flag) {
  GlobalSetup g = global_setup(x, flag);
  const size_t dy = g.model.dim, dz = g.rows.size();
  auto widen = [&](const RatVec& a) {
    RatVec r = a;
    r.resize(dy + dz, Rat(0));
    return r;
  };
  std::vector<Halfspace> ineqs, eqs;
  for (auto& h : g.ineqs) ineqs.push_back({widen(h.normal), h.offset});
  for (size_t i = 0; i < dz; ++i) {
    RatVec row = widen(scale(g.rows[i].a, -1));
    row[dy + i] = 1;
    eqs.push_back({row, g.rows[i].c});
  }
  std::vector<size_t> keep;
  for (size_t i = 0; i < dz; ++i) keep.push_back(dy + i);
  return fourier_motzkin_project(dy + dz, ineqs, eqs, keep);
}

Polyhedron GlobalOkounkovBody::fiber(const RatVec& xi) const {
  const size_t total = cone.ambient_dim();
  std::vector<Halfspace> eqs = cone.equations();
  for (size_t i = 0; i < xi.size(); ++i) {
    RatVec e(total, Rat(0));
    e[body_dim + i] = 1;
    eqs.push_back({e, xi[i]});
  }
  auto slice = cone.is_empty() ? cone : Polyhedron::from_inequalities(total, cone.facets(), eqs);
  RatMat proj;
  for (size_t i = 0; i < body_dim; ++i) {
    RatVec e(total, Rat(0));
    e[i] = 1;
    proj.push_back(e);
  }
  return linear_image(slice, proj);
}

}  // namespace tvob
