#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "minklog/geometry.hpp"
#include "minklog/quadrature.hpp"
#include "minklog/solver.hpp"

namespace minklog::cli {

using nlohmann::json;

// Malformed files and bad flags: always exit code 1.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json read_json(const std::filesystem::path& path);
void write_json(const json& doc, const std::optional<std::filesystem::path>& path, std::ostream& fallback);

// Reads n and directions; unit-normalizes with a warning when a row is off by more than 1e-6.
DirectionSet parse_directions(const json& doc, std::ostream& warn);
DiscreteMeasure parse_measure(const json& doc, std::ostream& warn);
// Body files carry "h"; solve reports carry "h_star". Either is accepted.
SupportVector parse_body(const json& doc, std::ostream& warn);

json directions_json(const DirectionSet& dirs);
json points_json(const std::vector<Vec>& points, int n);
json vector_json(const Eigen::VectorXd& v);
json quadrature_json(const QuadratureSpec& q);
QuadratureSpec parse_quadrature(const json& doc, int n);
json bound_json(const EntropyBound& b, int n);
json trace_json(const std::vector<TraceEntry>& trace);

// Typed field access that turns json exceptions into InputError naming the field.
template <class T>
T field(const json& doc, const char* name) {
  if (!doc.is_object() || !doc.contains(name)) throw InputError(std::string("missing field '") + name + "'");
  try {
    return doc.at(name).get<T>();
  } catch (const json::exception&) {
    throw InputError(std::string("field '") + name + "' has the wrong type");
  }
}

}  // namespace minklog::cli
