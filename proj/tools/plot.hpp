#pragma once

#include <string>

#include "json.hpp"

namespace minklog::cli {

// SVG with the solution polygon, input and achieved ray families, and the
// residual history. Expects an n = 2 solve report.
std::string render_svg(const nlohmann::json& report);

}  // namespace minklog::cli
