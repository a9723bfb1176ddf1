#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "tvob/io.hpp"

namespace tvob {

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io-error", "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json_file(const std::string& path) {
  try {
    return Json::parse(slurp(path));
  } catch (const Json::parse_error& e) {
    throw Error("schema-error", path + ": malformed JSON: " + e.what());
  }
}

struct Options {
  std::string model, out, format = "json", flag, input;
  int levels = 1;
};

class Output {
 public:
  Output(const Options& o, std::ostream& fallback) : path_(o.out), fallback_(fallback) {}
  void write(const std::string& text, const std::string& path_override = "") {
    std::string path = path_override.empty() ? path_ : path_override;
    if (path.empty()) {
      fallback_ << text;
      return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("io-error", "cannot write " + path);
    f << text;
  }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ostream& fallback_;
};

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string render_polytope(const Polyhedron& p, const std::string& format) {
  if (format == "off") return export_off(p);
  if (format == "csv") return export_csv(p);
  return dump(polytope_document(p));
}

ModelBundle load_model(const Options& o) {
  if (o.model.empty()) throw Error("schema-error", "--model is required");
  return parse_model(slurp(o.model));
}

const SupportFunction& need_support(const ModelBundle& b) {
  if (!b.support) throw Error("schema-error", "the model document has no support_function");
  return *b.support;
}

int cmd_validate(const Options& o, Output& out) {
  auto b = load_model(o);
  std::ostringstream s;
  s << "OK\n";
  s << "rank " << b.model->rank << ", " << b.model->slices.size() << " slices, " << b.model->maximal_cones().size()
    << " maximal tail cones, " << b.model->marked.size() << " marked cones\n";
  out.write(s.str());
  return 0;
}

int cmd_sections(const Options& o, Output& out) {
  auto b = load_model(o);
  const auto& h = need_support(b);
  HStar hs = hstar(h);
  std::vector<std::pair<RatVec, size_t>> dims;
  size_t total = 0;
  if (!hs.box.is_empty())
    for (auto& u : lattice_points(hs.box)) {
      size_t d = section_dimension(hs, u);
      dims.emplace_back(u, d);
      total += d;
    }
  if (o.format == "json") {
    Json weights = Json::array();
    for (auto& [u, d] : dims) weights.push_back(Json{{"u", write_vector(u)}, {"dimension", d}});
    out.write(dump(Json{{"box", polytope_document(hs.box)}, {"weights", weights}, {"total", total}}));
    return 0;
  }
  std::ostringstream s;
  s << "box:";
  for (auto& v : hs.box.vertices()) s << " " << to_string(v);
  s << "\n";
  for (auto& [u, d] : dims) s << "weight " << to_string(u) << ": " << d << "\n";
  s << "total: " << total << "\n";
  out.write(s.str());
  return 0;
}

int cmd_okounkov(const Options& o, Output& out) {
  auto b = load_model(o);
  auto ob = okounkov_body(need_support(b), b.pick_flag(o.flag));
  out.write(render_polytope(ob, o.format));
  if (o.format == "json" && !out.path().empty() && ob.ambient_dim() == 3) out.write(export_off(ob), out.path() + ".off");
  return 0;
}

int cmd_global(const Options& o, Output& out) {
  auto b = load_model(o);
  auto g = global_okounkov(b.model, b.pick_flag(o.flag));
  Json keys = Json::array();
  for (auto& k : g.cg.vertex_keys) keys.push_back(Json{{"point", to_string(k.point)}, {"vertex", write_vector(k.v)}});
  for (auto& r : g.cg.ray_keys) keys.push_back(Json{{"ray", write_vector(r)}});
  out.write(dump(Json{{"cone", polytope_document(g.cone)},
                      {"body_dim", g.body_dim},
                      {"class_group_rank", g.cg.rank},
                      {"class_projection", write_matrix(g.cg.projection)},
                      {"keys", keys}}));
  return 0;
}

int cmd_downgrade(const Options& o, Output& out) {
  Json j = read_json_file(o.input);
  std::vector<Polyhedron> fan;
  const Json& cones = j.at("fan");
  RatVec p = read_vector(j.at("P"), "P");
  for (size_t i = 0; i < cones.size(); ++i)
    fan.push_back(Polyhedron::cone(p.size(), read_matrix(cones[i].at("rays"), "fan[" + std::to_string(i) + "].rays")));
  auto x = downgrade(fan, read_matrix(j.at("F"), "F"), p, read_matrix(j.at("s"), "s"));
  out.write(dump(model_to_json(x)));
  return 0;
}

int cmd_newton(const Options& o, Output& out) {
  auto b = load_model(o);
  auto v = value_semigroup(need_support(b), b.pick_flag(o.flag), o.levels);
  Json sizes = Json::object();
  for (auto& [m, set] : v.levels) sizes[std::to_string(m)] = set.size();
  Json level_one = Json::array();
  for (auto& w : v.levels.at(1)) level_one.push_back(write_vector(w));
  out.write(dump(Json{{"level_sizes", sizes}, {"level_one", level_one}, {"body", polytope_document(newton_okounkov(v))}}));
  return 0;
}

int cmd_wps(const Options& o, Output& out) {
  Json j = read_json_file(o.input);
  Polyhedron p = j.contains("ambient_dim") ? polytope_from_document(j)
                                           : Polyhedron::from_generators(2, read_matrix(j.at("vertices"), "vertices"));
  auto chain = wps_degeneration_chain(p);
  Json docs = Json::array();
  for (auto& q : chain) docs.push_back(polytope_document(q));
  out.write(dump(Json{{"chain", docs}, {"weights", write_vector(wps_weights(chain.back()))}}));
  return 0;
}

int cmd_decomposition(const Options& o, Output& out) {
  Json j = read_json_file(o.input);
  RatMat box_vertices = read_matrix(j.at("box"), "box");
  if (box_vertices.empty()) throw Error("schema-error", "box: at least one vertex is required");
  DivisorialPolytope d;
  d.box = Polyhedron::from_generators(box_vertices[0].size(), box_vertices);
  for (auto& e : j.at("psi")) {
    d.points.push_back(e.at("point") == "inf" ? CurvePoint::inf() : CurvePoint::finite(read_rational(e.at("point"), "psi.point")));
    d.psi.push_back(piecewise_from_json(e, d.box));
  }
  const Json& dj = j.at("decomposition");
  Decomposition dec;
  dec.point = dj.at("point") == "inf" ? CurvePoint::inf() : CurvePoint::finite(read_rational(dj.at("point"), "point"));
  dec.psi0_0 = piecewise_from_json(dj.at("psi0_0"), d.box);
  dec.psi0_1 = piecewise_from_json(dj.at("psi0_1"), d.box);
  if (dj.contains("alpha")) dec.alpha = read_rational(dj.at("alpha"), "alpha");
  auto vs = divisorial_violations(d);
  auto dv = check_decomposition(d, dec);
  vs.insert(vs.end(), dv.begin(), dv.end());
  if (o.format == "json") {
    Json arr = Json::array();
    for (auto& v : vs) arr.push_back(Json{{"condition", v.condition}, {"detail", v.detail}});
    out.write(dump(Json{{"violations", arr}}));
  } else {
    std::ostringstream s;
    if (vs.empty()) s << "OK\n";
    for (auto& v : vs) s << v.condition << ": " << v.detail << "\n";
    out.write(s.str());
  }
  return vs.empty() ? 0 : 1;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Okounkov bodies of complexity-one T-varieties"};
  app.require_subcommand(1);
  Options o;
  auto model_opts = [&](CLI::App* c, bool flag, bool format) {
    c->add_option("--model", o.model, "model document (JSON)")->required()->check(CLI::ExistingFile);
    c->add_option("--out", o.out, "write the result to this file");
    if (format) c->add_option("--format", o.format, "json, off or csv")->check(CLI::IsMember({"json", "off", "csv"}));
    if (flag) c->add_option("--flag", o.flag, "named flag from the model's 'flags' block");
  };
  auto input_opts = [&](CLI::App* c, const std::string& what) {
    c->add_option("--input", o.input, what)->required()->check(CLI::ExistingFile);
    c->add_option("--out", o.out, "write the result to this file");
  };
  std::vector<std::pair<CLI::App*, int (*)(const Options&, Output&)>> commands;
  auto add = [&](const std::string& name, const std::string& help, int (*fn)(const Options&, Output&)) {
    auto* c = app.add_subcommand(name, help);
    commands.emplace_back(c, fn);
    return c;
  };
  model_opts(add("validate", "parse and validate a model", cmd_validate), false, false);
  auto* sec = add("sections", "weight-wise dimensions of global sections", cmd_sections);
  model_opts(sec, false, false);
  sec->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  model_opts(add("okounkov", "local Okounkov body", cmd_okounkov), true, true);
  model_opts(add("global-okounkov", "global Okounkov cone and class group", cmd_global), true, false);
  input_opts(add("downgrade", "downgrade a toric fan along a splitting", cmd_downgrade), "fan and splitting (JSON)");
  auto* nob = add("newton-okounkov", "value semigroup and Newton-Okounkov body", cmd_newton);
  model_opts(nob, true, false);
  nob->add_option("--levels", o.levels, "highest level to enumerate")->check(CLI::PositiveNumber);
  input_opts(add("degenerate-wps", "degeneration chain to a weighted projective plane", cmd_wps), "polygon (JSON)");
  auto* dec = add("check-decomposition", "check an admissible decomposition", cmd_decomposition);
  input_opts(dec, "divisorial polytope and decomposition (JSON)");
  dec->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));

  std::vector<const char*> argv{"tvob"};
  for (auto& a : args) argv.push_back(a.c_str());
  // sections and check-decomposition default to text output
  bool text_default = args.size() > 0 && (args[0] == "sections" || args[0] == "check-decomposition");
  if (text_default) o.format = "text";
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }
  try {
    for (auto& [c, fn] : commands)
      if (c->parsed()) {
        Output sink(o, out);
        return fn(o, sink);
      }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Json::exception& e) {
    err << "error: schema-error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace tvob
