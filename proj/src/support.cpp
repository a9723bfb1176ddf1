#include "tvob/support.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

#include "tvob/linalg.hpp"

namespace tvob {

namespace {

size_t slice_index(const MarkedFansyDivisor& x, const CurvePoint& p) {
  for (size_t i = 0; i < x.slices.size(); ++i)
    if (x.slices[i].point == p) return i;
  return x.slices.size();
}

size_t cell_index_with_tail(const Slice& s, const Polyhedron& sigma) {
  for (size_t j = 0; j < s.cells.size(); ++j)
    if (tail_cone(s.cells[j]) == sigma) return j;
  throw Error("no-cell-with-tail", "slice at " + to_string(s.point));
}

Int lcm_into(Int acc, const RatVec& v) {
  Int l = denominator_lcm(v);
  mpz_lcm(acc.get_mpz_t(), acc.get_mpz_t(), l.get_mpz_t());
  return acc;
}

}  // namespace

Rat SupportFunction::value(const CurvePoint& p, const RatVec& x) const {
  size_t i = slice_index(*base, p);
  if (i == base->slices.size()) return linear_value(x);
  const auto& cells = base->slices[i].cells;
  for (size_t j = 0; j < cells.size(); ++j)
    if (cells[j].contains(x)) return pieces[i][j](x);
  throw Error("not-complete", "no cell of the slice at " + to_string(p) + " contains " + to_string(x));
}

Rat SupportFunction::linear_value(const RatVec& x) const {
  auto maximal = base->maximal_cones();
  for (size_t k = 0; k < maximal.size(); ++k)
    if (maximal[k].contains(x)) return dot(linear[k], x);
  throw Error("not-complete", "no tail cone contains " + to_string(x));
}

AffinePiece SupportFunction::piece_with_tail(const CurvePoint& p, const Polyhedron& sigma) const {
  size_t i = slice_index(*base, p);
  if (i == base->slices.size()) {
    auto maximal = base->maximal_cones();
    auto it = std::find(maximal.begin(), maximal.end(), sigma);
    return {linear.at(static_cast<size_t>(it - maximal.begin())), 0};
  }
  return pieces[i][cell_index_with_tail(base->slices[i], sigma)];
}

Int SupportFunction::clearing_denominator() const {
  Int l = 1;
  for (auto& row : pieces)
    for (auto& pc : row) l = lcm_into(lcm_into(l, pc.slope), {pc.constant});
  for (auto& u : linear) l = lcm_into(l, u);
  return l;
}

SupportFunction SupportFunction::operator+(const SupportFunction& o) const {
  SupportFunction r = *this;
  for (size_t i = 0; i < pieces.size(); ++i)
    for (size_t j = 0; j < pieces[i].size(); ++j) {
      r.pieces[i][j].slope = add(pieces[i][j].slope, o.pieces[i][j].slope);
      r.pieces[i][j].constant += o.pieces[i][j].constant;
    }
  for (size_t k = 0; k < linear.size(); ++k) r.linear[k] = add(linear[k], o.linear[k]);
  return r;
}

SupportFunction SupportFunction::scaled(const Rat& k) const {
  SupportFunction r = *this;
  for (auto& row : r.pieces)
    for (auto& pc : row) {
      pc.slope = scale(pc.slope, k);
      pc.constant *= k;
    }
  for (auto& u : r.linear) u = scale(u, k);
  return r;
}

SupportFunction zero_support(std::shared_ptr<const MarkedFansyDivisor> x) {
  SupportFunction h;
  RatVec z(x->rank, Rat(0));
  for (auto& s : x->slices) h.pieces.emplace_back(s.cells.size(), AffinePiece{z, 0});
  h.linear.assign(x->maximal_cones().size(), z);
  h.base = std::move(x);
  return h;
}

TWeilDivisor TWeilDivisor::normalized() const {
  TWeilDivisor r;
  for (auto& [k, c] : vertical)
    if (c != 0) r.vertical[k] = c;
  for (auto& [k, c] : horizontal)
    if (c != 0) r.horizontal[k] = c;
  return r;
}

TWeilDivisor TWeilDivisor::operator+(const TWeilDivisor& o) const {
  TWeilDivisor r = *this;
  for (auto& [k, c] : o.vertical) r.vertical[k] += c;
  for (auto& [k, c] : o.horizontal) r.horizontal[k] += c;
  return r.normalized();
}

TWeilDivisor TWeilDivisor::operator-() const {
  TWeilDivisor r = *this;
  for (auto& [k, c] : r.vertical) c = -c;
  for (auto& [k, c] : r.horizontal) c = -c;
  return r;
}

bool operator==(const TWeilDivisor& a, const TWeilDivisor& b) {
  auto x = a.normalized(), y = b.normalized();
  return x.vertical == y.vertical && x.horizontal == y.horizontal;
}

std::vector<Violation> validate_support(const SupportFunction& h) {
  std::vector<Violation> out;
  const auto& x = *h.base;
  auto maximal = x.maximal_cones();
  if (h.pieces.size() != x.slices.size() || h.linear.size() != maximal.size()) {
    out.push_back({"shape", "piece table does not match the model"});
    return out;
  }
  for (size_t i = 0; i < x.slices.size(); ++i)
    if (h.pieces[i].size() != x.slices[i].cells.size()) {
      out.push_back({"shape", "slice at " + to_string(x.slices[i].point)});
      return out;
    }

  for (size_t i = 0; i < x.slices.size(); ++i) {
    const auto& s = x.slices[i];
    std::string at = "slice at " + to_string(s.point);
    for (size_t j = 0; j < s.cells.size(); ++j) {
      const auto& pc = h.pieces[i][j];
      if (!is_integral(pc.slope) || pc.constant.get_den() != 1)
        out.push_back({"integrality", at + ", cell " + std::to_string(j)});
      auto tau = tail_cone(s.cells[j]);
      for (size_t k = 0; k < maximal.size(); ++k) {
        if (tau.dimension() < 1 || !maximal[k].contains(tau)) continue;
        for (auto& r : tau.rays())
          if (dot(sub(pc.slope, h.linear[k]), r) != 0)
            out.push_back({"linear part", at + ", cell " + std::to_string(j) +
                                              " disagrees with the linear part on " + to_string(r)});
      }
      for (size_t j2 = j + 1; j2 < s.cells.size(); ++j2) {
        auto meet = s.cells[j].intersect(s.cells[j2]);
        if (meet.is_empty()) continue;
        const auto& other = h.pieces[i][j2];
        bool ok = true;
        for (auto& v : meet.vertices()) ok = ok && pc(v) == other(v);
        for (auto& r : meet.rays()) ok = ok && dot(pc.slope, r) == dot(other.slope, r);
        if (!ok)
          out.push_back({"continuity", at + ", cells " + std::to_string(j) + " and " +
                                           std::to_string(j2)});
      }
    }
  }
  for (auto& u : h.linear)
    if (!is_integral(u)) out.push_back({"integrality", "linear part " + to_string(u)});
  for (auto& ray : x.rays()) {
    const RatVec& n = ray.rays()[0];
    std::optional<Rat> val;
    for (size_t k = 0; k < maximal.size(); ++k) {
      if (!maximal[k].contains_direction(n)) continue;
      Rat here = dot(h.linear[k], n);
      if (val && *val != here) out.push_back({"linear part", "discontinuous on ray " + to_string(n)});
      val = here;
    }
  }
  for (size_t k = 0; k < maximal.size(); ++k) {
    if (!x.is_marked(maximal[k])) continue;
    Rat sum = 0;
    for (size_t i = 0; i < x.slices.size(); ++i)
      sum += h.pieces[i][cell_index_with_tail(x.slices[i], maximal[k])].constant;
    if (sum != 0)
      out.push_back({"cartier", "constants over marked cone " + std::to_string(k) + " sum to " +
                                    sum.get_str()});
  }
  return out;
}

TWeilDivisor weil_from_support(const SupportFunction& h) {
  TWeilDivisor d;
  for (auto& tv : vertex_set(*h.base)) d.vertical[tv] = -Rat(mu(tv.v)) * h.value(tv.point, tv.v);
  for (auto& n : extremal_rays(*h.base)) d.horizontal[n] = -h.linear_value(n);
  return d.normalized();
}

SupportFunction support_from_weil(std::shared_ptr<const MarkedFansyDivisor> xp,
                                  const TWeilDivisor& c) {
  const auto& x = *xp;
  const size_t k = x.rank;
  auto maximal = x.maximal_cones();
  auto verts = vertex_set(x);
  auto extremal = extremal_rays(x);
  for (auto& [key, val] : c.normalized().vertical)
    if (std::find(verts.begin(), verts.end(), key) == verts.end())
      throw Error("invalid-divisor", "no prime divisor at (" + to_string(key.point) + ", " +
                                         to_string(key.v) + ")");
  for (auto& [key, val] : c.normalized().horizontal)
    if (std::find(extremal.begin(), extremal.end(), key) == extremal.end())
      throw Error("invalid-divisor", "ray " + to_string(key) + " is not an extremal ray");

  // Unknown layout: linear slopes per maximal cone, then (slope, constant)
  // per cell of every stored slice.
  std::vector<std::vector<size_t>> cell_offset(x.slices.size());
  size_t nv = maximal.size() * k;
  for (size_t i = 0; i < x.slices.size(); ++i)
    for (size_t j = 0; j < x.slices[i].cells.size(); ++j) {
      cell_offset[i].push_back(nv);
      nv += k + 1;
    }
  RatMat rows;
  RatVec rhs;
  auto add_row = [&](RatVec row, Rat value) {
    rows.push_back(std::move(row));
    rhs.push_back(std::move(value));
  };
  auto coeff = [&](const TaggedVertex& key) {
    auto it = c.vertical.find(key);
    return it == c.vertical.end() ? Rat(0) : it->second;
  };

  for (size_t i = 0; i < x.slices.size(); ++i) {
    const auto& s = x.slices[i];
    for (size_t j = 0; j < s.cells.size(); ++j) {
      size_t off = cell_offset[i][j];
      for (auto& v : s.cells[j].vertices()) {
        RatVec row(nv, Rat(0));
        for (size_t t = 0; t < k; ++t) row[off + t] = v[t];
        row[off + k] = 1;
        add_row(row, -coeff({s.point, v}) / Rat(mu(v)));
      }
      auto tau = tail_cone(s.cells[j]);
      if (tau.dimension() < 1) continue;
      for (size_t m = 0; m < maximal.size(); ++m) {
        if (!maximal[m].contains(tau)) continue;
        for (auto& r : tau.rays()) {
          RatVec row(nv, Rat(0));
          for (size_t t = 0; t < k; ++t) {
            row[off + t] += r[t];
            row[m * k + t] -= r[t];
          }
          add_row(row, 0);
        }
      }
    }
  }
  for (auto& ray : x.rays()) {
    const RatVec& n = ray.rays()[0];
    std::vector<size_t> around;
    for (size_t m = 0; m < maximal.size(); ++m)
      if (maximal[m].contains_direction(n)) around.push_back(m);
    for (size_t a = 1; a < around.size(); ++a) {
      RatVec row(nv, Rat(0));
      for (size_t t = 0; t < k; ++t) {
        row[around[a] * k + t] += n[t];
        row[around[0] * k + t] -= n[t];
      }
      add_row(row, 0);
    }
    if (!x.is_marked(ray) && !around.empty()) {
      RatVec row(nv, Rat(0));
      for (size_t t = 0; t < k; ++t) row[around[0] * k + t] = n[t];
      auto it = c.horizontal.find(n);
      add_row(row, it == c.horizontal.end() ? Rat(0) : -it->second);
    }
  }
  for (auto& sigma : maximal) {
    if (!x.is_marked(sigma)) continue;
    RatVec row(nv, Rat(0));
    for (size_t i = 0; i < x.slices.size(); ++i)
      row[cell_offset[i][cell_index_with_tail(x.slices[i], sigma)] + k] = 1;
    add_row(row, 0);
  }

  auto sol = solve(rows, rhs, nv);
  if (!sol) throw Error("not-q-cartier", "the divisor is not Q-Cartier on this model");
  if (!sol->kernel.empty())
    throw Error("underdetermined", std::to_string(sol->kernel.size()) + "-dimensional solution space");
  const RatVec& z = sol->particular;
  SupportFunction h;
  h.base = xp;
  for (size_t m = 0; m < maximal.size(); ++m)
    h.linear.emplace_back(z.begin() + static_cast<long>(m * k), z.begin() + static_cast<long>(m * k + k));
  for (size_t i = 0; i < x.slices.size(); ++i) {
    h.pieces.emplace_back();
    for (size_t off : cell_offset[i])
      h.pieces[i].push_back({RatVec(z.begin() + static_cast<long>(off),
                                    z.begin() + static_cast<long>(off + k)),
                             z[off + k]});
  }
  return h;
}

TWeilDivisor canonical_divisor(const MarkedFansyDivisor& x) {
  TWeilDivisor d;
  auto pts = x.points();
  CurvePoint kp = CurvePoint::finite(0);
  if (!x.slice_at(kp) && !pts.empty()) kp = pts.front();
  for (auto& tv : vertex_set(x)) {
    Rat m(mu(tv.v));
    d.vertical[tv] = m * (tv.point == kp ? -2 : 0) + m - 1;
  }
  if (!x.slice_at(kp)) d.vertical[{kp, RatVec(x.rank, Rat(0))}] = -2;
  for (auto& n : extremal_rays(x)) d.horizontal[n] = -1;
  return d.normalized();
}

TWeilDivisor principal_divisor(const MarkedFansyDivisor& x, const CurveDivisor& f,
                               const RatVec& u) {
  Int total = 0;
  for (auto& [p, ord] : f) total += ord;
  if (total != 0) throw Error("nonzero-degree", "div f has degree " + total.get_str());
  auto ord_at = [&](const CurvePoint& p) {
    Int o = 0;
    for (auto& [q, ord] : f)
      if (q == p) o += ord;
    return o;
  };
  TWeilDivisor d;
  for (auto& tv : vertex_set(x)) d.vertical[tv] = Rat(mu(tv.v)) * (dot(tv.v, u) + Rat(ord_at(tv.point)));
  for (auto& [p, ord] : f)
    if (!x.slice_at(p)) d.vertical[{p, RatVec(x.rank, Rat(0))}] += Rat(ord);
  for (auto& n : extremal_rays(x)) d.horizontal[n] = dot(n, u);
  return d.normalized();
}

Rat HStar::value(size_t point_index, const RatVec& u) const {
  const auto& ps = pieces.at(point_index);
  Rat best = ps.at(0)(u);
  for (auto& pc : ps) best = std::min(best, pc(u));
  return best;
}

Rat HStar::degree(const RatVec& u) const {
  Rat s = 0;
  for (size_t i = 0; i < points.size(); ++i) s += value(i, u);
  return s;
}

Rat HStar::rounded_degree(const RatVec& u) const {
  Rat s = 0;
  for (size_t i = 0; i < points.size(); ++i) s += floor(value(i, u));
  return s;
}

HStar hstar(const SupportFunction& h) {
  const auto& x = *h.base;
  HStar hs;
  auto maximal = x.maximal_cones();
  hs.complete = !check_subdivision(maximal, x.rank).has_value();
  // u - h_bar is piecewise linear with linear pieces u - u_sigma, so it is
  // nonnegative on N exactly when each piece is nonnegative on the rays of
  // its cone.
  std::vector<Halfspace> ineqs;
  for (size_t k = 0; k < maximal.size(); ++k)
    for (auto& r : maximal[k].rays()) ineqs.push_back({r, dot(h.linear[k], r)});
  hs.box = Polyhedron::from_inequalities(x.rank, ineqs);
  for (auto& p : x.points()) {
    hs.points.push_back(p);
    std::vector<AffinePiece> ps;
    for (auto& tv : vertex_set(x))
      if (tv.point == p) ps.push_back({tv.v, -h.value(p, tv.v)});
    hs.pieces.push_back(std::move(ps));
  }
  return hs;
}

size_t section_dimension(const HStar& hs, const RatVec& u) {
  if (!hs.box.contains(u)) return 0;
  Rat e = hs.rounded_degree(u);
  return e >= 0 ? static_cast<size_t>(e.get_num().get_ui()) + 1 : 0;
}

size_t section_dimension(const SupportFunction& h, const RatVec& u) {
  return section_dimension(hstar(h), u);
}

size_t total_sections(const SupportFunction& h) {
  HStar hs = hstar(h);
  if (hs.box.is_empty()) return 0;
  if (!hs.box.is_bounded()) throw Error("not-complete", "Box_h is unbounded");
  RatMat pts = lattice_points(hs.box);
  size_t workers = 1;
  if (const char* env = std::getenv("TVOB_THREADS")) workers = std::max(1, std::atoi(env));
  workers = std::min(workers, std::max<size_t>(1, pts.size()));
  std::vector<size_t> partial(workers, 0);
  auto run = [&](size_t w) {
    for (size_t i = w; i < pts.size(); i += workers) partial[w] += section_dimension(hs, pts[i]);
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (size_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }
  size_t total = 0;
  for (size_t p : partial) total += p;
  return total;
}

}  // namespace tvob
