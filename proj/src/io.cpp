#include "tvob/io.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "tvob/linalg.hpp"

namespace tvob {

namespace {

[[noreturn]] void schema(const std::string& path, const std::string& what) {
  throw Error("schema-error", (path.empty() ? std::string("document") : path) + ": " + what);
}

const Json& field(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) schema(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) schema(path, "missing field '" + key + "'");
  return *it;
}

const Json* optional_field(const Json& j, const std::string& key) {
  auto it = j.find(key);
  return it == j.end() || it->is_null() ? nullptr : &*it;
}

std::string child(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string idx(const std::string& path, size_t i) { return path + "[" + std::to_string(i) + "]"; }

const Json& array(const Json& j, const std::string& path) {
  if (!j.is_array()) schema(path, "expected an array");
  return j;
}

Json write_int(const Rat& q) {
  if (q.get_den() == 1 && q.get_num().fits_slong_p()) return q.get_num().get_si();
  return q.get_str();
}

Json write_int_matrix(const RatMat& m) {
  Json out = Json::array();
  for (auto& row : m) {
    Json r = Json::array();
    for (auto& q : row) r.push_back(write_int(q));
    out.push_back(r);
  }
  return out;
}

CurvePoint read_point(const Json& j, const std::string& path) {
  if (j.is_string() && j.get<std::string>() == "inf") return CurvePoint::inf();
  return CurvePoint::finite(read_rational(j, path));
}

Json write_point(const CurvePoint& p) { return to_string(p); }

RatMat read_matrix_dim(const Json& j, size_t dim, const std::string& path) {
  RatMat m = read_matrix(j, path);
  for (size_t i = 0; i < m.size(); ++i)
    if (m[i].size() != dim) schema(idx(path, i), "expected " + std::to_string(dim) + " entries");
  return m;
}

Polyhedron read_cone(const Json& j, size_t dim, const std::string& path) {
  return Polyhedron::cone(dim, read_matrix_dim(field(j, "rays", path), dim, child(path, "rays")));
}

Polyhedron read_cell(const Json& j, size_t dim, const std::string& path) {
  RatMat vs = read_matrix_dim(field(j, "vertices", path), dim, child(path, "vertices"));
  RatMat rs;
  if (auto* r = optional_field(j, "rays")) rs = read_matrix_dim(*r, dim, child(path, "rays"));
  if (vs.empty()) schema(path, "a cell needs at least one vertex");
  return Polyhedron::from_generators(dim, vs, rs);
}

Json write_cone(const Polyhedron& c) { return Json{{"rays", write_int_matrix(c.rays())}}; }

Json write_cell(const Polyhedron& c) {
  return Json{{"vertices", write_matrix(c.vertices())}, {"rays", write_int_matrix(c.rays())}};
}

[[noreturn]] void invalid(const std::string& what) { throw Error("validation-error", what); }

// Runs `f`, turning module errors into validation errors.
template <class F>
auto validated(F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    invalid(e.what());
  }
}

AffinePiece read_piece(const Json& j, size_t dim, const std::string& path) {
  RatVec slope = read_vector(field(j, "slope", path), child(path, "slope"));
  if (slope.size() != dim) schema(child(path, "slope"), "expected " + std::to_string(dim) + " entries");
  return {slope, read_rational(field(j, "constant", path), child(path, "constant"))};
}

Json write_piece(const AffinePiece& p) { return Json{{"slope", write_vector(p.slope)}, {"constant", p.constant.get_str()}}; }

SupportFunction read_support(const Json& j, std::shared_ptr<const MarkedFansyDivisor> x, const std::string& path) {
  const size_t r = x->rank;
  if (auto* w = optional_field(j, "weil")) {
    TWeilDivisor d;
    const std::string wp = child(path, "weil");
    if (auto* v = optional_field(*w, "vertical")) {
      for (size_t i = 0; i < array(*v, child(wp, "vertical")).size(); ++i) {
        std::string ep = idx(child(wp, "vertical"), i);
        const Json& e = (*v)[i];
        if (!e.is_array() || e.size() != 3) schema(ep, "expected [point, vertex, coefficient]");
        RatVec vert = read_vector(e[1], idx(ep, 1));
        if (vert.size() != r) schema(idx(ep, 1), "vertex has the wrong dimension");
        d.vertical[{read_point(e[0], idx(ep, 0)), vert}] += read_rational(e[2], idx(ep, 2));
      }
    }
    if (auto* h = optional_field(*w, "horizontal")) {
      for (size_t i = 0; i < array(*h, child(wp, "horizontal")).size(); ++i) {
        std::string ep = idx(child(wp, "horizontal"), i);
        const Json& e = (*h)[i];
        if (!e.is_array() || e.size() != 2) schema(ep, "expected [ray, coefficient]");
        RatVec ray = read_vector(e[0], idx(ep, 0));
        if (ray.size() != r) schema(idx(ep, 0), "ray has the wrong dimension");
        d.horizontal[ray] += read_rational(e[1], idx(ep, 1));
      }
    }
    return validated([&] { return support_from_weil(x, d); });
  }
  const Json& pieces = field(j, "pieces", path);
  const std::string pp = child(path, "pieces");
  if (!pieces.is_array() || pieces.size() != x->slices.size()) schema(pp, "expected one entry per slice");
  SupportFunction h;
  h.base = x;
  for (size_t i = 0; i < pieces.size(); ++i) {
    const Json& row = array(pieces[i], idx(pp, i));
    if (row.size() != x->slices[i].cells.size()) schema(idx(pp, i), "expected one piece per cell");
    std::vector<AffinePiece> ps;
    for (size_t c = 0; c < row.size(); ++c) ps.push_back(read_piece(row[c], r, idx(idx(pp, i), c)));
    h.pieces.push_back(std::move(ps));
  }
  auto maximal = x->maximal_cones();
  if (auto* lin = optional_field(j, "linear")) {
    h.linear = read_matrix_dim(*lin, r, child(path, "linear"));
    if (h.linear.size() != maximal.size()) schema(child(path, "linear"), "expected one slope per maximal cone");
  } else {
    if (x->slices.empty()) schema(path, "'linear' is required when there are no slices");
    for (auto& sigma : maximal) {
      auto* c = cell_with_tail(x->slices[0], sigma);
      if (!c) invalid("slice " + to_string(x->slices[0].point) + " has no cell with a maximal tail");
      size_t k = static_cast<size_t>(c - x->slices[0].cells.data());
      h.linear.push_back(h.pieces[0][k].slope);
    }
  }
  auto vs = validate_support(h);
  if (!vs.empty()) invalid(vs[0].condition + ": " + vs[0].detail);
  return h;
}

}  // namespace

Rat read_rational(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return Rat(j.get<long>());
  if (j.is_number_unsigned()) return Rat(j.get<unsigned long>());
  if (j.is_number_float()) schema(path, "floating point values are not accepted");
  if (!j.is_string()) schema(path, "expected a rational string");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const Error&) {
    schema(path, "'" + j.get<std::string>() + "' is not an exact rational");
  }
}

RatVec read_vector(const Json& j, const std::string& path) {
  RatVec v;
  for (size_t i = 0; i < array(j, path).size(); ++i) v.push_back(read_rational(j[i], idx(path, i)));
  return v;
}

RatMat read_matrix(const Json& j, const std::string& path) {
  RatMat m;
  for (size_t i = 0; i < array(j, path).size(); ++i) m.push_back(read_vector(j[i], idx(path, i)));
  return m;
}

Json write_vector(const RatVec& v) {
  Json out = Json::array();
  for (auto& q : v) out.push_back(q.get_str());
  return out;
}

Json write_matrix(const RatMat& m) {
  Json out = Json::array();
  for (auto& row : m) out.push_back(write_vector(row));
  return out;
}

const Flag& ModelBundle::pick_flag(const std::string& name) const {
  if (name.empty()) {
    if (!flag) throw Error("schema-error", "the model document has no default flag");
    return *flag;
  }
  auto it = flags.find(name);
  if (it == flags.end()) throw Error("schema-error", "no flag named '" + name + "'");
  return it->second;
}

Json flag_to_json(const Flag& f) {
  Json j{{"kind", to_string(f.kind)}};
  if (f.kind != FlagKind::T1) j["sigma_fix"] = write_cone(f.sigma_fix);
  j["point"] = write_point(f.point);
  if (f.kind == FlagKind::T2) j["point2"] = write_point(f.point2);
  if (f.kind == FlagKind::T1) j["cell"] = write_cell(f.cell);
  j["ray_order"] = write_int_matrix(f.ray_order);
  return j;
}

Flag flag_from_json(const Json& j, const MarkedFansyDivisor& x) {
  const std::string path = "flag";
  Flag f;
  try {
    f.kind = parse_flag_kind(field(j, "kind", path).get<std::string>());
  } catch (const Error&) {
    schema(child(path, "kind"), "expected one of G1, G2, T1, T2");
  } catch (const Json::exception&) {
    schema(child(path, "kind"), "expected a string");
  }
  const size_t r = x.rank;
  f.point = read_point(field(j, "point", path), child(path, "point"));
  if (f.kind == FlagKind::T1) {
    f.cell = read_cell(field(j, "cell", path), r, child(path, "cell"));
  } else {
    f.sigma_fix = read_cone(field(j, "sigma_fix", path), r, child(path, "sigma_fix"));
  }
  if (f.kind == FlagKind::T2) f.point2 = read_point(field(j, "point2", path), child(path, "point2"));
  const size_t width = f.kind == FlagKind::G1 || f.kind == FlagKind::G2 ? r : r + 1;
  f.ray_order = read_matrix_dim(field(j, "ray_order", path), width, child(path, "ray_order"));
  return validated([&] { return make_flag(x, f); });
}

ModelBundle parse_model(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error("schema-error", std::string("malformed JSON: ") + e.what());
  }
  auto x = std::make_shared<MarkedFansyDivisor>();
  const Json& rank = field(j, "rank", "");
  if (!rank.is_number_integer() || rank.get<long>() < 1) schema("rank", "expected a positive integer");
  x->rank = rank.get<size_t>();
  const Json& slices = array(field(j, "slices", ""), "slices");
  for (size_t i = 0; i < slices.size(); ++i) {
    std::string sp = idx("slices", i);
    Slice s{read_point(field(slices[i], "point", sp), child(sp, "point")), {}};
    if (x->slice_at(s.point)) schema(child(sp, "point"), "duplicate slice point");
    const Json& cells = array(field(slices[i], "cells", sp), child(sp, "cells"));
    for (size_t c = 0; c < cells.size(); ++c) s.cells.push_back(read_cell(cells[c], x->rank, idx(child(sp, "cells"), c)));
    x->slices.push_back(std::move(s));
  }
  const Json& tail = array(field(j, "tailfan", ""), "tailfan");
  std::vector<Polyhedron> listed;
  for (size_t i = 0; i < tail.size(); ++i) listed.push_back(read_cone(tail[i], x->rank, idx("tailfan", i)));
  x->tailfan = fan_closure(listed);
  std::vector<Polyhedron> marked;
  if (auto* m = optional_field(j, "marked")) {
    for (size_t i = 0; i < array(*m, "marked").size(); ++i) {
      const Json& e = (*m)[i];
      if (!e.is_number_integer() || e.get<long>() < 0 || e.get<size_t>() >= listed.size())
        schema(idx("marked", i), "expected an index into tailfan");
      marked.push_back(listed[e.get<size_t>()]);
    }
  }
  x->marked = marked.empty() ? marked : fan_closure(marked);
  auto vs = validate_fansy(*x);
  if (!vs.empty()) invalid(vs[0].condition + ": " + vs[0].detail);

  ModelBundle b;
  b.model = x;
  if (auto* s = optional_field(j, "support_function")) b.support = read_support(*s, x, "support_function");
  if (auto* f = optional_field(j, "flag")) b.flag = flag_from_json(*f, *x);
  if (auto* fs = optional_field(j, "flags")) {
    if (!fs->is_object()) schema("flags", "expected an object of named flags");
    for (auto& [name, f] : fs->items()) b.flags.emplace(name, flag_from_json(f, *x));
  }
  return b;
}

Json model_to_json(const MarkedFansyDivisor& x, const SupportFunction* h, const Flag* flag) {
  Json j;
  j["rank"] = x.rank;
  Json slices = Json::array();
  for (auto& s : x.slices) {
    Json cells = Json::array();
    for (auto& c : s.cells) cells.push_back(write_cell(c));
    slices.push_back(Json{{"point", write_point(s.point)}, {"cells", cells}});
  }
  j["slices"] = slices;
  // maximal cones first, then marked cones not covered by a larger marked cone
  std::vector<Polyhedron> listed = x.maximal_cones();
  for (auto& m : x.marked) {
    bool covered = std::any_of(x.marked.begin(), x.marked.end(), [&](const Polyhedron& o) {
      return o.dimension() > m.dimension() && o.contains(m);
    });
    if (!covered && std::find(listed.begin(), listed.end(), m) == listed.end()) listed.push_back(m);
  }
  Json tail = Json::array(), marked = Json::array();
  for (size_t i = 0; i < listed.size(); ++i) {
    tail.push_back(write_cone(listed[i]));
    bool top = x.is_marked(listed[i]) && std::none_of(x.marked.begin(), x.marked.end(), [&](const Polyhedron& o) {
                 return o.dimension() > listed[i].dimension() && o.contains(listed[i]);
               });
    if (top) marked.push_back(i);
  }
  j["tailfan"] = tail;
  j["marked"] = marked;
  if (h) {
    Json pieces = Json::array();
    for (auto& row : h->pieces) {
      Json r = Json::array();
      for (auto& p : row) r.push_back(write_piece(p));
      pieces.push_back(r);
    }
    j["support_function"] = Json{{"pieces", pieces}, {"linear", write_matrix(h->linear)}};
  }
  if (flag) j["flag"] = flag_to_json(*flag);
  return j;
}

Json polytope_document(const Polyhedron& p) {
  Json j;
  j["ambient_dim"] = p.ambient_dim();
  j["dimension"] = p.dimension();
  j["vertices"] = write_matrix(p.vertices());
  j["rays"] = write_int_matrix(p.rays());
  j["lines"] = write_int_matrix(p.lines());
  Json facets = Json::array(), eqs = Json::array();
  for (auto& f : p.facets()) facets.push_back(Json{{"normal", write_vector(f.normal)}, {"offset", f.offset.get_str()}});
  for (auto& e : p.equations()) eqs.push_back(Json{{"normal", write_vector(e.normal)}, {"offset", e.offset.get_str()}});
  j["facets"] = facets;
  j["equations"] = eqs;
  if (!p.is_empty() && p.is_bounded() && p.is_full_dimensional())
    j["volume"] = lattice_volume(p).get_str();
  else
    j["volume"] = nullptr;
  return j;
}

Polyhedron polytope_from_document(const Json& j) {
  const Json& ad = field(j, "ambient_dim", "");
  if (!ad.is_number_integer() || ad.get<long>() < 0) schema("ambient_dim", "expected a non-negative integer");
  const size_t n = ad.get<size_t>();
  RatMat vs = read_matrix_dim(field(j, "vertices", ""), n, "vertices");
  RatMat rs, ls;
  if (auto* r = optional_field(j, "rays")) rs = read_matrix_dim(*r, n, "rays");
  if (auto* l = optional_field(j, "lines")) ls = read_matrix_dim(*l, n, "lines");
  Polyhedron p = vs.empty() ? Polyhedron::empty(n) : Polyhedron::from_generators(n, vs, rs, ls);
  if (auto* f = optional_field(j, "facets")) {
    std::vector<Halfspace> hs, es;
    auto read_hs = [&](const Json& a, const std::string& path, std::vector<Halfspace>& out) {
      for (size_t i = 0; i < array(a, path).size(); ++i) {
        std::string fp = idx(path, i);
        RatVec normal = read_vector(field(a[i], "normal", fp), child(fp, "normal"));
        if (normal.size() != n) schema(child(fp, "normal"), "wrong dimension");
        out.push_back({normal, read_rational(field(a[i], "offset", fp), child(fp, "offset"))});
      }
    };
    read_hs(*f, "facets", hs);
    if (auto* e = optional_field(j, "equations")) read_hs(*e, "equations", es);
    if (!vs.empty() && !(Polyhedron::from_inequalities(n, hs, es) == p))
      schema("facets", "the V and H descriptions disagree");
  }
  return p;
}

namespace {

std::string decimal(const Rat& q) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", q.get_d());
  std::string s = buf;
  return s == "-0" ? "0" : s;
}

// Vertices of a facet ordered counterclockwise when seen from outside.
std::vector<size_t> facet_cycle(const RatMat& verts, const Halfspace& f) {
  std::vector<size_t> on;
  for (size_t i = 0; i < verts.size(); ++i)
    if (dot(f.normal, verts[i]) == f.offset) on.push_back(i);
  RatVec c(3, Rat(0));
  for (auto i : on) c = add(c, verts[i]);
  c = scale(c, Rat(1) / Rat(static_cast<long>(on.size())));
  RatVec outward = scale(f.normal, -1);
  RatVec e1 = sub(verts[on[0]], c);
  RatVec e2{outward[1] * e1[2] - outward[2] * e1[1], outward[2] * e1[0] - outward[0] * e1[2],
            outward[0] * e1[1] - outward[1] * e1[0]};
  auto coords = [&](size_t i) {
    RatVec d = sub(verts[i], c);
    return std::pair<Rat, Rat>{dot(d, e1), dot(d, e2)};
  };
  auto half = [](const std::pair<Rat, Rat>& p) { return p.second < 0 || (p.second == 0 && p.first < 0); };
  std::sort(on.begin(), on.end(), [&](size_t a, size_t b) {
    auto pa = coords(a), pb = coords(b);
    if (half(pa) != half(pb)) return !half(pa);
    return pa.first * pb.second - pa.second * pb.first > 0;
  });
  return on;
}

}  // namespace

std::string export_off(const Polyhedron& p) {
  if (p.ambient_dim() > 3) throw Error("dimension-too-high", "OFF export supports dimension at most 3");
  if (p.is_empty() || !p.is_bounded()) throw Error("unbounded", "OFF export needs a nonempty polytope");
  if (p.ambient_dim() < 2 || !p.is_full_dimensional())
    throw Error("dimension-too-high", "OFF export needs a full-dimensional polygon or solid");
  RatMat verts;
  std::vector<std::vector<size_t>> faces;
  if (p.ambient_dim() == 2) {
    verts = polygon_cycle(p);
    for (auto& v : verts) v.push_back(0);
    std::vector<size_t> f(verts.size());
    for (size_t i = 0; i < f.size(); ++i) f[i] = i;
    faces.push_back(f);
  } else {
    verts = p.vertices();
    for (auto& f : p.facets()) faces.push_back(facet_cycle(verts, f));
  }
  std::ostringstream out;
  out << "OFF\n";
  for (size_t i = 0; i < verts.size(); ++i) out << "# v" << i << " = " << to_string(verts[i]) << "\n";
  out << verts.size() << " " << faces.size() << " 0\n";
  for (auto& v : verts) out << decimal(v[0]) << " " << decimal(v[1]) << " " << decimal(v[2]) << "\n";
  for (auto& f : faces) {
    out << f.size();
    for (auto i : f) out << " " << i;
    out << "\n";
  }
  return out.str();
}

std::string export_csv(const Polyhedron& p) {
  std::ostringstream out;
  for (size_t i = 0; i < p.ambient_dim(); ++i) out << (i ? "," : "") << "x" << i;
  out << "\n";
  for (auto& v : p.vertices()) {
    for (size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i].get_str();
    out << "\n";
  }
  return out.str();
}

Json piecewise_to_json(const PiecewiseAffine& f) {
  Json cells = Json::array();
  for (auto& [c, p] : f.cells) {
    Json e = write_piece(p);
    e["vertices"] = write_matrix(c.vertices());
    cells.push_back(e);
  }
  return Json{{"cells", cells}};
}

PiecewiseAffine piecewise_from_json(const Json& j, const Polyhedron& domain) {
  const size_t n = domain.ambient_dim();
  if (auto* ps = optional_field(j, "pieces")) {
    std::vector<AffinePiece> pieces;
    for (size_t i = 0; i < array(*ps, "pieces").size(); ++i) pieces.push_back(read_piece((*ps)[i], n, idx("pieces", i)));
    if (pieces.empty()) schema("pieces", "at least one piece is required");
    return PiecewiseAffine::minimum(domain, pieces);
  }
  const Json& cells = array(field(j, "cells", ""), "cells");
  PiecewiseAffine f;
  f.domain = domain;
  for (size_t i = 0; i < cells.size(); ++i) {
    std::string cp = idx("cells", i);
    RatMat vs = read_matrix_dim(field(cells[i], "vertices", cp), n, child(cp, "vertices"));
    if (vs.empty()) schema(cp, "a cell needs vertices");
    f.cells.emplace_back(Polyhedron::from_generators(n, vs), read_piece(cells[i], n, cp));
  }
  if (auto why = f.check_cells()) invalid(*why);
  return f;
}

}  // namespace tvob
