#include "tvob/polyhedron.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "tvob/linalg.hpp"

namespace tvob {

namespace {

using ZeroSet = std::vector<bool>;

RatMat canonical_lines(const RatMat& lines, size_t dim) {
  if (lines.empty()) return {};
  Echelon e = rref(lines, dim);
  RatMat out;
  for (auto& r : e.rows) out.push_back(primitive(r));
  return out;
}

// Component of v orthogonal to span(lines); lines are in echelon form but not
// orthogonal, so solve the normal equations.
RatVec reduce_modulo_lines(const RatVec& v, const RatMat& lines) {
  if (lines.empty()) return v;
  const size_t k = lines.size();
  RatMat gram(k, RatVec(k));
  RatVec rhs(k);
  for (size_t i = 0; i < k; ++i) {
    for (size_t j = 0; j < k; ++j) gram[i][j] = dot(lines[i], lines[j]);
    rhs[i] = dot(lines[i], v);
  }
  auto sol = solve(gram, rhs, k);
  RatVec out = v;
  for (size_t i = 0; i < k; ++i) out = sub(out, scale(lines[i], sol->particular[i]));
  return out;
}

Halfspace normalized(const Halfspace& h) {
  RatVec joined = h.normal;
  joined.push_back(h.offset);
  Int l = denominator_lcm(joined);
  Int g = 0;
  for (auto& x : joined) {
    Rat t = x * l;
    Int n = t.get_num();
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
  }
  if (g == 0) return h;
  Rat f = Rat(l) / Rat(g);
  return {scale(h.normal, f), h.offset * f};
}

struct HRep {
  std::vector<Halfspace> facets, eqs;
};

HRep generators_to_h(size_t dim, const RatMat& vertices, const RatMat& rays,
                     const RatMat& lines) {
  RatMat cons;
  auto lift = [&](const Rat& head, const RatVec& v) {
    RatVec r{head};
    r.insert(r.end(), v.begin(), v.end());
    return r;
  };
  for (auto& v : vertices) cons.push_back(lift(1, v));
  for (auto& r : rays) cons.push_back(lift(0, r));
  for (auto& l : lines) {
    cons.push_back(lift(0, l));
    cons.push_back(lift(0, scale(l, -1)));
  }
  ConeGenerators dual = double_description(cons, dim + 1);
  HRep h;
  for (auto& r : dual.rays) {
    RatVec a(r.begin() + 1, r.end());
    if (is_zero(a)) continue;
    h.facets.push_back(normalized({a, -r[0]}));
  }
  RatMat eq_rows;
  for (auto& l : dual.lines) {
    RatVec row(l.begin() + 1, l.end());
    row.push_back(-l[0]);
    eq_rows.push_back(row);
  }
  if (!eq_rows.empty()) {
    Echelon e = rref(eq_rows, dim + 1);
    for (auto& row : e.rows) {
      RatVec a(row.begin(), row.begin() + dim);
      h.eqs.push_back(normalized({a, row[dim]}));
    }
  }
  std::sort(h.facets.begin(), h.facets.end());
  h.facets.erase(std::unique(h.facets.begin(), h.facets.end()), h.facets.end());
  return h;
}

struct VRep {
  bool empty = true;
  RatMat vertices, rays, lines;
};

VRep h_to_generators(size_t dim, const std::vector<Halfspace>& ineqs,
                     const std::vector<Halfspace>& eqs) {
  RatMat cons;
  auto row = [&](const Halfspace& h, int s) {
    RatVec r{-h.offset * s};
    for (auto& x : h.normal) r.push_back(x * s);
    return r;
  };
  RatVec t(dim + 1, Rat(0));
  t[0] = 1;
  cons.push_back(t);
  for (auto& h : ineqs) cons.push_back(row(h, 1));
  for (auto& h : eqs) {
    cons.push_back(row(h, 1));
    cons.push_back(row(h, -1));
  }
  ConeGenerators g = double_description(cons, dim + 1);
  VRep v;
  for (auto& l : g.lines) v.lines.emplace_back(l.begin() + 1, l.end());
  v.lines = canonical_lines(v.lines, dim);
  for (auto& r : g.rays) {
    RatVec x(r.begin() + 1, r.end());
    if (r[0] > 0) {
      v.vertices.push_back(reduce_modulo_lines(scale(x, 1 / r[0]), v.lines));
      v.empty = false;
    } else {
      v.rays.push_back(primitive(reduce_modulo_lines(x, v.lines)));
    }
  }
  std::sort(v.vertices.begin(), v.vertices.end());
  v.vertices.erase(std::unique(v.vertices.begin(), v.vertices.end()), v.vertices.end());
  std::sort(v.rays.begin(), v.rays.end());
  v.rays.erase(std::unique(v.rays.begin(), v.rays.end()), v.rays.end());
  return v;
}

}  // namespace

ConeGenerators double_description(const RatMat& constraints, size_t dim) {
  RatMat lines;
  for (size_t i = 0; i < dim; ++i) {
    RatVec e(dim, Rat(0));
    e[i] = 1;
    lines.push_back(e);
  }
  RatMat rays;
  std::vector<ZeroSet> zeros;
  const size_t m = constraints.size();

  for (size_t i = 0; i < m; ++i) {
    const RatVec& a = constraints[i];
    size_t pivot = lines.size();
    Rat pa;
    for (size_t k = 0; k < lines.size(); ++k) {
      pa = dot(a, lines[k]);
      if (pa != 0) {
        pivot = k;
        break;
      }
    }
    if (pivot < lines.size()) {
      RatVec l = lines[pivot];
      if (pa < 0) {
        l = scale(l, -1);
        pa = -pa;
      }
      lines.erase(lines.begin() + static_cast<long>(pivot));
      for (auto& other : lines) {
        Rat c = dot(a, other);
        if (c != 0) other = primitive(sub(other, scale(l, c / pa)));
      }
      for (size_t r = 0; r < rays.size(); ++r) {
        Rat c = dot(a, rays[r]);
        if (c != 0) rays[r] = primitive(sub(rays[r], scale(l, c / pa)));
        zeros[r][i] = true;
      }
      ZeroSet z(m, false);
      for (size_t k = 0; k < i; ++k) z[k] = true;
      rays.push_back(primitive(l));
      zeros.push_back(z);
      continue;
    }

    std::vector<size_t> pos, neg;
    std::vector<Rat> val(rays.size());
    RatMat next;
    std::vector<ZeroSet> next_zeros;
    for (size_t r = 0; r < rays.size(); ++r) {
      val[r] = dot(a, rays[r]);
      if (val[r] > 0) pos.push_back(r);
      if (val[r] < 0) neg.push_back(r);
      if (val[r] >= 0) {
        next.push_back(rays[r]);
        ZeroSet z = zeros[r];
        if (val[r] == 0) z[i] = true;
        next_zeros.push_back(std::move(z));
      }
    }
    if (neg.empty()) {
      rays = std::move(next);
      zeros = std::move(next_zeros);
      continue;
    }
    const size_t needed = dim >= lines.size() + 2 ? dim - lines.size() - 2 : 0;
    for (size_t p : pos) {
      for (size_t q : neg) {
        ZeroSet common(m, false);
        size_t count = 0;
        for (size_t k = 0; k < i; ++k)
          if (zeros[p][k] && zeros[q][k]) {
            common[k] = true;
            ++count;
          }
        if (count < needed) continue;
        bool adjacent = true;
        for (size_t r = 0; r < rays.size() && adjacent; ++r) {
          if (r == p || r == q) continue;
          bool superset = true;
          for (size_t k = 0; k < i; ++k)
            if (common[k] && !zeros[r][k]) {
              superset = false;
              break;
            }
          if (superset) adjacent = false;
        }
        if (!adjacent) continue;
        RatVec combo = sub(scale(rays[q], val[p]), scale(rays[p], val[q]));
        next.push_back(primitive(combo));
        common[i] = true;
        next_zeros.push_back(std::move(common));
      }
    }
    rays = std::move(next);
    zeros = std::move(next_zeros);
  }
  ConeGenerators out;
  out.lines = canonical_lines(lines, dim);
  for (auto& r : rays) out.rays.push_back(primitive(reduce_modulo_lines(r, out.lines)));
  std::sort(out.rays.begin(), out.rays.end());
  out.rays.erase(std::unique(out.rays.begin(), out.rays.end()), out.rays.end());
  return out;
}

Polyhedron Polyhedron::empty(size_t dim) {
  Polyhedron p;
  p.dim_ = dim;
  p.empty_ = true;
  return p;
}

void Polyhedron::set_generators(RatMat vertices, RatMat rays, RatMat lines) {
  empty_ = vertices.empty();
  if (empty_) return;
  HRep h = generators_to_h(dim_, vertices, rays, lines);
  VRep v = h_to_generators(dim_, h.facets, h.eqs);
  vertices_ = std::move(v.vertices);
  rays_ = std::move(v.rays);
  lines_ = std::move(v.lines);
  facets_ = std::move(h.facets);
  equations_ = std::move(h.eqs);
}

void Polyhedron::set_inequalities(std::vector<Halfspace> ineqs, std::vector<Halfspace> eqs) {
  VRep v = h_to_generators(dim_, ineqs, eqs);
  empty_ = v.empty;
  if (empty_) return;
  HRep h = generators_to_h(dim_, v.vertices, v.rays, v.lines);
  vertices_ = std::move(v.vertices);
  rays_ = std::move(v.rays);
  lines_ = std::move(v.lines);
  facets_ = std::move(h.facets);
  equations_ = std::move(h.eqs);
}

Polyhedron Polyhedron::from_generators(size_t dim, RatMat vertices, RatMat rays, RatMat lines) {
  Polyhedron p;
  p.dim_ = dim;
  for (auto& r : rays) r = primitive(r);
  rays.erase(std::remove_if(rays.begin(), rays.end(), [](auto& r) { return is_zero(r); }),
             rays.end());
  p.set_generators(std::move(vertices), std::move(rays), std::move(lines));
  return p;
}

Polyhedron Polyhedron::from_inequalities(size_t dim, std::vector<Halfspace> ineqs,
                                         std::vector<Halfspace> eqs) {
  Polyhedron p;
  p.dim_ = dim;
  p.set_inequalities(std::move(ineqs), std::move(eqs));
  return p;
}

Polyhedron Polyhedron::cone(size_t dim, RatMat rays) {
  return from_generators(dim, {RatVec(dim, Rat(0))}, std::move(rays));
}

Polyhedron Polyhedron::point(const RatVec& p) { return from_generators(p.size(), {p}); }

int Polyhedron::dimension() const {
  if (empty_) return -1;
  RatMat dirs;
  for (size_t i = 1; i < vertices_.size(); ++i) dirs.push_back(sub(vertices_[i], vertices_[0]));
  for (auto& r : rays_) dirs.push_back(r);
  for (auto& l : lines_) dirs.push_back(l);
  return static_cast<int>(rank(dirs, dim_));
}

bool Polyhedron::contains(const RatVec& p) const {
  if (empty_) return false;
  for (auto& h : facets_)
    if (dot(h.normal, p) < h.offset) return false;
  for (auto& h : equations_)
    if (dot(h.normal, p) != h.offset) return false;
  return true;
}

bool Polyhedron::contains_direction(const RatVec& d) const {
  if (empty_) return false;
  for (auto& h : facets_)
    if (dot(h.normal, d) < 0) return false;
  for (auto& h : equations_)
    if (dot(h.normal, d) != 0) return false;
  return true;
}

bool Polyhedron::contains(const Polyhedron& other) const {
  if (other.empty_) return true;
  if (empty_) return false;
  for (auto& v : other.vertices_)
    if (!contains(v)) return false;
  for (auto& r : other.rays_)
    if (!contains_direction(r)) return false;
  for (auto& l : other.lines_)
    if (!contains_direction(l) || !contains_direction(scale(l, -1))) return false;
  return true;
}

bool Polyhedron::is_cone() const {
  return !empty_ && vertices_.size() == 1 && is_zero(vertices_[0]);
}

Polyhedron Polyhedron::intersect(const Polyhedron& other) const {
  if (empty_ || other.empty_) return empty(dim_);
  auto ineqs = facets_;
  ineqs.insert(ineqs.end(), other.facets_.begin(), other.facets_.end());
  auto eqs = equations_;
  eqs.insert(eqs.end(), other.equations_.begin(), other.equations_.end());
  return from_inequalities(dim_, std::move(ineqs), std::move(eqs));
}

Polyhedron Polyhedron::translate(const RatVec& t) const {
  if (empty_) return *this;
  RatMat vs;
  for (auto& v : vertices_) vs.push_back(add(v, t));
  return from_generators(dim_, vs, rays_, lines_);
}

Polyhedron Polyhedron::scaled(const Rat& s) const {
  if (empty_) return *this;
  if (s <= 0) throw Error("invalid-argument", "scaling factor must be positive");
  RatMat vs;
  for (auto& v : vertices_) vs.push_back(scale(v, s));
  return from_generators(dim_, vs, rays_, lines_);
}

bool operator==(const Polyhedron& a, const Polyhedron& b) {
  if (a.dim_ != b.dim_) return false;
  if (a.empty_ || b.empty_) return a.empty_ == b.empty_;
  if (a.lines_.size() != b.lines_.size()) return false;
  if (!a.lines_.empty()) {
    RatMat both = a.lines_;
    both.insert(both.end(), b.lines_.begin(), b.lines_.end());
    if (rank(both, a.dim_) != a.lines_.size()) return false;
  }
  return a.vertices_ == b.vertices_ && a.rays_ == b.rays_;
}

Polyhedron minkowski_sum(const Polyhedron& a, const Polyhedron& b) {
  if (a.ambient_dim() != b.ambient_dim())
    throw Error("rank-mismatch", "minkowski_sum of polyhedra of different rank");
  if (a.is_empty() || b.is_empty()) return Polyhedron::empty(a.ambient_dim());
  RatMat vs;
  for (auto& x : a.vertices())
    for (auto& y : b.vertices()) vs.push_back(add(x, y));
  RatMat rs = a.rays();
  rs.insert(rs.end(), b.rays().begin(), b.rays().end());
  RatMat ls = a.lines();
  ls.insert(ls.end(), b.lines().begin(), b.lines().end());
  return Polyhedron::from_generators(a.ambient_dim(), vs, rs, ls);
}

Polyhedron tail_cone(const Polyhedron& p) {
  if (p.is_empty()) throw Error("empty-polyhedron", "tail cone of the empty set");
  return Polyhedron::from_generators(p.ambient_dim(), {RatVec(p.ambient_dim(), Rat(0))},
                                     p.rays(), p.lines());
}

int affine_dimension(const RatMat& pts) {
  if (pts.empty()) return -1;
  RatMat dirs;
  for (size_t i = 1; i < pts.size(); ++i) dirs.push_back(sub(pts[i], pts[0]));
  return static_cast<int>(rank(dirs, pts[0].size()));
}

std::vector<std::vector<size_t>> triangulate(const Polyhedron& p) {
  if (!p.is_bounded()) throw Error("unbounded", "cannot triangulate an unbounded polyhedron");
  if (p.is_empty()) return {};
  const auto& verts = p.vertices();
  std::vector<std::vector<size_t>> incidence;
  for (auto& f : p.facets()) {
    std::vector<size_t> on;
    for (size_t i = 0; i < verts.size(); ++i)
      if (dot(f.normal, verts[i]) == f.offset) on.push_back(i);
    incidence.push_back(std::move(on));
  }
  auto dim_of = [&](const std::vector<size_t>& idx) {
    RatMat pts;
    for (size_t i : idx) pts.push_back(verts[i]);
    return affine_dimension(pts);
  };
  std::function<std::vector<std::vector<size_t>>(const std::vector<size_t>&, int)> rec =
      [&](const std::vector<size_t>& face, int d) -> std::vector<std::vector<size_t>> {
    if (d == 0) return {{face[0]}};
    // vertices are stored sorted, so the smallest index is the lex-min apex
    size_t apex = face[0];
    std::set<std::vector<size_t>> subfaces;
    for (auto& inc : incidence) {
      std::vector<size_t> s;
      std::set_intersection(face.begin(), face.end(), inc.begin(), inc.end(),
                            std::back_inserter(s));
      if (s.size() < static_cast<size_t>(d)) continue;
      if (std::find(s.begin(), s.end(), apex) != s.end()) continue;
      if (dim_of(s) == d - 1) subfaces.insert(s);
    }
    std::vector<std::vector<size_t>> out;
    for (auto& s : subfaces)
      for (auto simplex : rec(s, d - 1)) {
        simplex.insert(simplex.begin(), apex);
        out.push_back(std::move(simplex));
      }
    return out;
  };
  std::vector<size_t> all(verts.size());
  for (size_t i = 0; i < all.size(); ++i) all[i] = i;
  return rec(all, p.dimension());
}

Rat lattice_volume(const Polyhedron& p) {
  if (p.is_empty()) return 0;
  if (!p.is_bounded()) throw Error("unbounded", "volume of an unbounded polyhedron");
  if (!p.is_full_dimensional()) return 0;
  const size_t n = p.ambient_dim();
  if (n == 0) return 1;
  Rat total = 0;
  Int fact = 1;
  for (size_t i = 2; i <= n; ++i) fact *= static_cast<unsigned long>(i);
  for (auto& simplex : triangulate(p)) {
    RatMat m;
    for (size_t i = 1; i < simplex.size(); ++i)
      m.push_back(sub(p.vertices()[simplex[i]], p.vertices()[simplex[0]]));
    Rat d = determinant(m);
    total += abs(d);
  }
  return total / Rat(fact);
}

Int mu(const RatVec& v) { return denominator_lcm(v); }

bool is_smooth_cone(const Polyhedron& cone) {
  if (!cone.is_pointed()) return false;
  const auto& rays = cone.rays();
  if (rays.empty()) return true;
  if (rank(rays, cone.ambient_dim()) != rays.size()) return false;
  return maximal_minor_gcd(rays, cone.ambient_dim()) == 1;
}

Polyhedron fourier_motzkin_project(size_t dim, std::vector<Halfspace> ineqs,
                                   std::vector<Halfspace> eqs, const std::vector<size_t>& keep) {
  std::vector<bool> kept(dim, false);
  for (size_t k : keep) kept[k] = true;
  auto dedupe = [](std::vector<Halfspace>& hs) {
    for (auto& h : hs) h = normalized(h);
    std::sort(hs.begin(), hs.end());
    hs.erase(std::unique(hs.begin(), hs.end()), hs.end());
  };
  for (size_t j = 0; j < dim; ++j) {
    if (kept[j]) continue;
    auto eq_it = std::find_if(eqs.begin(), eqs.end(), [&](auto& e) { return e.normal[j] != 0; });
    if (eq_it != eqs.end()) {
      Halfspace e = *eq_it;
      eqs.erase(eq_it);
      auto eliminate = [&](Halfspace& h) {
        if (h.normal[j] == 0) return;
        Rat f = h.normal[j] / e.normal[j];
        h.normal = sub(h.normal, scale(e.normal, f));
        h.offset -= f * e.offset;
      };
      for (auto& h : eqs) eliminate(h);
      for (auto& h : ineqs) eliminate(h);
      continue;
    }
    std::vector<Halfspace> next, pos, neg;
    for (auto& h : ineqs) {
      int s = sign(h.normal[j]);
      (s > 0 ? pos : s < 0 ? neg : next).push_back(h);
    }
    for (auto& p : pos)
      for (auto& q : neg) {
        Rat fp = -q.normal[j], fq = p.normal[j];
        next.push_back({add(scale(p.normal, fp), scale(q.normal, fq)), p.offset * fp + q.offset * fq});
      }
    ineqs = std::move(next);
    std::vector<Halfspace> filtered;
    for (auto& h : ineqs) {
      if (is_zero(h.normal)) {
        if (h.offset > 0) return Polyhedron::empty(keep.size());
        continue;
      }
      filtered.push_back(h);
    }
    ineqs = std::move(filtered);
    dedupe(ineqs);
    if (ineqs.size() > 4 * dim + 16) {
      Polyhedron canon = Polyhedron::from_inequalities(dim, ineqs, eqs);
      if (canon.is_empty()) return Polyhedron::empty(keep.size());
      ineqs = canon.facets();
      eqs = canon.equations();
    }
  }
  auto restrict = [&](const Halfspace& h) {
    RatVec a;
    for (size_t k : keep) a.push_back(h.normal[k]);
    return Halfspace{a, h.offset};
  };
  std::vector<Halfspace> out_ineqs, out_eqs;
  for (auto& h : ineqs) out_ineqs.push_back(restrict(h));
  for (auto& h : eqs) {
    if (is_zero(restrict(h).normal)) {
      if (h.offset != 0) return Polyhedron::empty(keep.size());
      continue;
    }
    out_eqs.push_back(restrict(h));
  }
  for (auto& h : out_ineqs)
    if (is_zero(h.normal) && h.offset > 0) return Polyhedron::empty(keep.size());
  out_ineqs.erase(std::remove_if(out_ineqs.begin(), out_ineqs.end(),
                                 [](auto& h) { return is_zero(h.normal); }),
                  out_ineqs.end());
  return Polyhedron::from_inequalities(keep.size(), out_ineqs, out_eqs);
}

Polyhedron linear_image(const Polyhedron& p, const RatMat& m) {
  const size_t out = m.size();
  if (p.is_empty()) return Polyhedron::empty(out);
  RatMat vs, rs, ls;
  for (auto& v : p.vertices()) vs.push_back(apply(m, v));
  for (auto& r : p.rays()) rs.push_back(apply(m, r));
  for (auto& l : p.lines()) {
    RatVec x = apply(m, l);
    if (!is_zero(x)) ls.push_back(x);
  }
  return Polyhedron::from_generators(out, vs, rs, ls);
}

RatMat lattice_points(const Polyhedron& p) {
  if (p.is_empty()) return {};
  if (!p.is_bounded()) throw Error("unbounded", "lattice points of an unbounded polyhedron");
  const size_t n = p.ambient_dim();
  std::vector<Int> lo(n), hi(n);
  for (size_t i = 0; i < n; ++i) {
    Rat mn = p.vertices()[0][i], mx = mn;
    for (auto& v : p.vertices()) {
      mn = std::min(mn, v[i]);
      mx = std::max(mx, v[i]);
    }
    lo[i] = floor(mn).get_num();
    hi[i] = -floor(-mx).get_num();
  }
  RatMat out;
  RatVec cur(n);
  std::function<void(size_t)> rec = [&](size_t i) {
    if (i == n) {
      if (p.contains(cur)) out.push_back(cur);
      return;
    }
    for (Int x = lo[i]; x <= hi[i]; ++x) {
      cur[i] = Rat(x);
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

}  // namespace tvob
