#include "tvob/fansy.hpp"

#include <algorithm>

#include "tvob/linalg.hpp"

namespace tvob {

std::string to_string(const CurvePoint& p) { return p.infinite ? "inf" : p.value.get_str(); }

namespace {

void push_unique(std::vector<Polyhedron>& out, const Polyhedron& p) {
  if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
}

bool fan_order(const Polyhedron& a, const Polyhedron& b) {
  if (a.dimension() != b.dimension()) return a.dimension() < b.dimension();
  return a.rays() < b.rays();
}

std::string describe(const Polyhedron& p) {
  if (p.is_empty()) return "{}";
  std::string s = "conv{";
  for (size_t i = 0; i < p.vertices().size(); ++i) s += (i ? "," : "") + to_string(p.vertices()[i]);
  s += "}";
  if (!p.rays().empty()) {
    s += "+cone{";
    for (size_t i = 0; i < p.rays().size(); ++i) s += (i ? "," : "") + to_string(p.rays()[i]);
    s += "}";
  }
  return s;
}

// I is a face of P exactly when cutting P with every facet that is tight on
// all of I gives back I.
bool is_face(const Polyhedron& face, const Polyhedron& p) {
  std::vector<Halfspace> eqs = p.equations();
  for (auto& f : p.facets()) {
    bool tight = true;
    for (auto& v : face.vertices()) tight = tight && dot(f.normal, v) == f.offset;
    for (auto& r : face.rays()) tight = tight && dot(f.normal, r) == 0;
    for (auto& l : face.lines()) tight = tight && dot(f.normal, l) == 0;
    if (tight) eqs.push_back(f);
  }
  return Polyhedron::from_inequalities(p.ambient_dim(), p.facets(), eqs) == face;
}

}  // namespace

std::vector<Polyhedron> MarkedFansyDivisor::maximal_cones() const {
  std::vector<Polyhedron> out;
  for (auto& c : tailfan)
    if (c.dimension() == static_cast<int>(rank)) out.push_back(c);
  return out;
}

std::vector<Polyhedron> MarkedFansyDivisor::rays() const {
  std::vector<Polyhedron> out;
  for (auto& c : tailfan)
    if (c.dimension() == 1) out.push_back(c);
  return out;
}

bool MarkedFansyDivisor::is_marked(const Polyhedron& cone) const {
  return std::find(marked.begin(), marked.end(), cone) != marked.end();
}

const Slice* MarkedFansyDivisor::slice_at(const CurvePoint& p) const {
  for (auto& s : slices)
    if (s.point == p) return &s;
  return nullptr;
}

std::vector<CurvePoint> MarkedFansyDivisor::points() const {
  std::vector<CurvePoint> out;
  for (auto& s : slices) out.push_back(s.point);
  std::sort(out.begin(), out.end());
  return out;
}

Polyhedron PDivisor::coefficient(const CurvePoint& p) const {
  for (auto& [q, c] : coefficients)
    if (q == p) return c;
  return tail;
}

bool PDivisor::complete_locus() const {
  return std::none_of(coefficients.begin(), coefficients.end(),
                      [](auto& pc) { return pc.second.is_empty(); });
}

std::vector<Polyhedron> cone_faces(const Polyhedron& cone) {
  std::vector<Polyhedron> out{cone};
  for (auto& f : cone.facets()) {
    auto eqs = cone.equations();
    eqs.push_back(f);
    auto face = Polyhedron::from_inequalities(cone.ambient_dim(), cone.facets(), eqs);
    if (face.dimension() < 1) continue;
    for (auto& g : cone_faces(face)) push_unique(out, g);
  }
  return out;
}

std::vector<Polyhedron> fan_closure(const std::vector<Polyhedron>& cones) {
  std::vector<Polyhedron> out;
  for (auto& c : cones)
    for (auto& f : cone_faces(c)) push_unique(out, f);
  std::sort(out.begin(), out.end(), fan_order);
  return out;
}

std::optional<std::string> check_subdivision(const std::vector<Polyhedron>& cells, size_t rank) {
  if (cells.empty()) return "no cells";
  Rat bound = 0;
  for (auto& c : cells) {
    if (!c.is_full_dimensional()) return "cell " + describe(c) + " is not full-dimensional";
    for (auto& v : c.vertices())
      for (auto& x : v) bound = std::max(bound, Rat(abs(x)));
  }
  bound = 2 * (bound + 1);
  std::vector<Halfspace> box;
  for (size_t i = 0; i < rank; ++i) {
    RatVec e(rank, Rat(0));
    e[i] = 1;
    box.push_back({e, -bound});
    box.push_back({scale(e, -1), -bound});
  }
  auto box_poly = Polyhedron::from_inequalities(rank, box);
  Rat total = 0;
  for (auto& c : cells) total += lattice_volume(c.intersect(box_poly));
  if (total != lattice_volume(box_poly)) return "cells do not cover N_Q exactly";
  for (size_t i = 0; i < cells.size(); ++i)
    for (size_t j = i + 1; j < cells.size(); ++j) {
      auto meet = cells[i].intersect(cells[j]);
      if (meet.is_empty()) continue;
      if (meet.is_full_dimensional())
        return "cells " + describe(cells[i]) + " and " + describe(cells[j]) + " overlap";
      if (!is_face(meet, cells[i]) || !is_face(meet, cells[j]))
        return "cells " + describe(cells[i]) + " and " + describe(cells[j]) +
               " do not meet in a common face";
    }
  return std::nullopt;
}

const Polyhedron* cell_with_tail(const Slice& slice, const Polyhedron& sigma) {
  for (auto& c : slice.cells)
    if (tail_cone(c) == sigma) return &c;
  return nullptr;
}

PDivisor extract_pdivisor(const MarkedFansyDivisor& x, const Polyhedron& sigma) {
  if (sigma.dimension() != static_cast<int>(x.rank) ||
      std::find(x.tailfan.begin(), x.tailfan.end(), sigma) == x.tailfan.end())
    throw Error("not-maximal", describe(sigma) + " is not a maximal cone of the tail fan");
  PDivisor d{sigma, {}};
  for (auto& p : x.points()) {
    const Polyhedron* c = cell_with_tail(*x.slice_at(p), sigma);
    if (!c) throw Error("no-cell-with-tail", "slice at " + to_string(p) + " has no cell with tail " +
                                                 describe(sigma));
    d.coefficients.emplace_back(p, *c);
  }
  if (x.is_marked(sigma)) return d;
  // Unmarked: make the locus affine by emptying one coefficient. Prefer the
  // last stored point whose coefficient is the tail cone itself.
  for (auto it = d.coefficients.rbegin(); it != d.coefficients.rend(); ++it)
    if (it->second == sigma) {
      it->second = Polyhedron::empty(x.rank);
      return d;
    }
  Rat aux = 0;
  while (x.slice_at(CurvePoint::finite(aux))) aux += 1;
  d.coefficients.emplace_back(CurvePoint::finite(aux), Polyhedron::empty(x.rank));
  std::sort(d.coefficients.begin(), d.coefficients.end(),
            [](auto& a, auto& b) { return a.first < b.first; });
  return d;
}

Polyhedron degree(const PDivisor& d) {
  Polyhedron sum = d.tail;
  for (auto& [p, c] : d.coefficients) {
    if (c.is_empty()) return Polyhedron::empty(d.tail.ambient_dim());
    sum = minkowski_sum(sum, c);
  }
  return sum;
}

bool validate_pdivisor(const PDivisor& d) {
  for (auto& [p, c] : d.coefficients)
    if (!c.is_empty() && !(tail_cone(c) == d.tail)) return false;
  Polyhedron deg = degree(d);
  if (deg.is_empty()) return true;
  return d.tail.contains(deg) && !deg.contains(RatVec(d.tail.ambient_dim(), Rat(0)));
}

std::vector<Violation> validate_fansy(const MarkedFansyDivisor& x) {
  std::vector<Violation> out;
  auto maximal = x.maximal_cones();
  if (auto why = check_subdivision(maximal, x.rank)) out.push_back({"tailfan", *why});
  auto closure = fan_closure(maximal);
  for (auto& c : closure)
    if (std::find(x.tailfan.begin(), x.tailfan.end(), c) == x.tailfan.end())
      out.push_back({"tailfan", "missing face " + describe(c)});
  for (auto& c : x.tailfan)
    if (std::find(closure.begin(), closure.end(), c) == closure.end())
      out.push_back({"tailfan", describe(c) + " is not a face of a maximal cone"});
  for (auto& m : x.marked)
    if (std::find(x.tailfan.begin(), x.tailfan.end(), m) == x.tailfan.end())
      out.push_back({"marking", describe(m) + " is not a cone of the tail fan"});
  if (!out.empty()) return out;

  auto pts = x.points();
  for (size_t i = 1; i < pts.size(); ++i)
    if (pts[i] == pts[i - 1]) out.push_back({"condition 1", "duplicate slice at " + to_string(pts[i])});
  for (auto& s : x.slices) {
    std::string at = "slice at " + to_string(s.point) + ": ";
    if (auto why = check_subdivision(s.cells, x.rank)) out.push_back({"condition 1", at + *why});
    for (auto& c : s.cells) {
      auto t = tail_cone(c);
      if (t.dimension() > 0 && std::find(x.tailfan.begin(), x.tailfan.end(), t) == x.tailfan.end())
        out.push_back({"condition 1", at + "tail of " + describe(c) + " is not in the tail fan"});
    }
    for (auto& sigma : maximal) {
      auto n = std::count_if(s.cells.begin(), s.cells.end(),
                             [&](auto& c) { return tail_cone(c) == sigma; });
      if (n != 1)
        out.push_back({"condition 1", at + std::to_string(n) + " cells with tail " + describe(sigma)});
    }
  }
  if (!out.empty()) return out;

  for (auto& sigma : maximal) {
    if (!x.is_marked(sigma)) continue;
    PDivisor d = extract_pdivisor(x, sigma);
    if (!validate_pdivisor(d))
      out.push_back({"condition 2", "p-divisor of marked " + describe(sigma) + " is not proper"});
    Polyhedron deg = degree(d);
    for (auto& tau : cone_faces(sigma)) {
      if (tau == sigma) continue;
      bool meets = !deg.intersect(tau).is_empty();
      if (meets != x.is_marked(tau))
        out.push_back({"condition 3", "face " + describe(tau) + " of " + describe(sigma) +
                                          (meets ? " meets the degree but is unmarked"
                                                 : " misses the degree but is marked")});
    }
  }
  for (auto& tau : x.marked)
    for (auto& c : x.tailfan)
      if (c.contains(tau) && !x.is_marked(c))
        out.push_back({"condition 4", describe(c) + " contains marked " + describe(tau) +
                                          " but is unmarked"});
  return out;
}

MarkedFansyDivisor downgrade(const std::vector<Polyhedron>& fan, const RatMat& f, const RatVec& p,
                             const RatMat& s) {
  const size_t d = p.size();
  if (d < 2 || f.size() != d || s.size() != d - 1)
    throw Error("not-a-splitting", "matrix shapes do not fit a corank-one splitting");
  for (auto& row : f)
    if (row.size() != d - 1) throw Error("not-a-splitting", "F must be d x (d-1)");
  for (auto& row : s)
    if (row.size() != d) throw Error("not-a-splitting", "s must be (d-1) x d");
  RatMat ft = transpose(f, d - 1);
  for (size_t j = 0; j < d - 1; ++j) {
    if (dot(p, ft[j]) != 0) throw Error("not-a-splitting", "P o F is not zero");
    for (size_t i = 0; i < d - 1; ++i)
      if (dot(s[i], ft[j]) != (i == j ? 1 : 0))
        throw Error("not-a-splitting", "s o F is not the identity");
  }
  RatMat sp = s;
  sp.push_back(p);
  if (abs(determinant(sp)) != 1) throw Error("not-a-splitting", "(s, P) is not unimodular");

  std::vector<Polyhedron> maximal;
  for (auto& c : fan)
    if (c.dimension() == static_cast<int>(d)) maximal.push_back(c);
  if (auto why = check_subdivision(maximal, d)) throw Error("not-complete", *why);

  MarkedFansyDivisor x;
  x.rank = d - 1;
  Slice zero{CurvePoint::finite(0), {}}, inf{CurvePoint::inf(), {}};
  std::vector<Polyhedron> tails, marked;
  auto level = [&](const Polyhedron& sigma, const Rat& t) {
    auto eqs = sigma.equations();
    eqs.push_back({p, t});
    return Polyhedron::from_inequalities(d, sigma.facets(), eqs);
  };
  for (auto& sigma : maximal) {
    auto up = level(sigma, 1), down = level(sigma, -1);
    for (auto [slab, slice] : {std::pair{&up, &zero}, std::pair{&down, &inf}}) {
      if (slab->is_empty()) continue;
      auto cell = linear_image(*slab, s);
      if (cell.is_full_dimensional()) slice->cells.push_back(cell);
    }
    auto tail = linear_image(level(sigma, 0), s);
    if (!tail.is_full_dimensional()) continue;
    push_unique(tails, tail);
    if (!up.is_empty() && !down.is_empty()) push_unique(marked, tail);
  }
  x.slices = {zero, inf};
  x.tailfan = fan_closure(tails);
  x.marked = marked;
  for (auto& sigma : marked) {
    Polyhedron deg = degree(extract_pdivisor(x, sigma));
    for (auto& tau : cone_faces(sigma))
      if (!(tau == sigma) && !deg.intersect(tau).is_empty()) push_unique(x.marked, tau);
  }
  std::sort(x.marked.begin(), x.marked.end(), fan_order);
  return x;
}

RatMat extremal_rays(const MarkedFansyDivisor& x) {
  RatMat out;
  for (auto& r : x.rays())
    if (!x.is_marked(r)) out.push_back(r.rays().at(0));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<TaggedVertex> vertex_set(const MarkedFansyDivisor& x) {
  std::vector<TaggedVertex> out;
  for (auto& p : x.points()) {
    RatMat vs;
    for (auto& c : x.slice_at(p)->cells)
      for (auto& v : c.vertices()) vs.push_back(v);
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    for (auto& v : vs) out.push_back({p, v});
  }
  return out;
}

}  // namespace tvob
