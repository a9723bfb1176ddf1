#pragma once

#include <iosfwd>
#include <map>
#include <optional>

#include "json.hpp"
#include "tvob/degen.hpp"

namespace tvob {

using Json = nlohmann::ordered_json;

/// Contents of a model document. `flags` holds named flags (for example
/// the aliases Z1..Z4 of a fixture); `flag` is the unnamed default flag.
struct ModelBundle {
  std::shared_ptr<const MarkedFansyDivisor> model;
  std::optional<SupportFunction> support;
  std::optional<Flag> flag;
  std::map<std::string, Flag> flags;

  /// The named flag, or the default one when `name` is empty.
  const Flag& pick_flag(const std::string& name) const;
};

/// Parses and validates a model document. Throws "schema-error" for
/// malformed input (with the JSON path of the offending field) and
/// "validation-error" when the model or support function is invalid.
ModelBundle parse_model(const std::string& text);
Json model_to_json(const MarkedFansyDivisor& x, const SupportFunction* h = nullptr, const Flag* flag = nullptr);

Json flag_to_json(const Flag& f);
Flag flag_from_json(const Json& j, const MarkedFansyDivisor& x);

Json polytope_document(const Polyhedron& p);
Polyhedron polytope_from_document(const Json& j);
/// OFF text for a bounded full-dimensional polytope in dimension 2 or 3.
std::string export_off(const Polyhedron& p);
std::string export_csv(const Polyhedron& p);

Json piecewise_to_json(const PiecewiseAffine& f);
PiecewiseAffine piecewise_from_json(const Json& j, const Polyhedron& domain);

// Field readers shared by the CLI. `path` names the field in diagnostics.
Rat read_rational(const Json& j, const std::string& path);
RatVec read_vector(const Json& j, const std::string& path);
RatMat read_matrix(const Json& j, const std::string& path);
Json write_vector(const RatVec& v);
Json write_matrix(const RatMat& m);

/// Runs one CLI subcommand; returns the process exit code.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tvob
