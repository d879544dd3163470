#include "stark/params.hpp"

#include <cmath>
#include <string>

#include "stark/errors.hpp"

namespace stark {

void WaveguideParams::validate() const {
  if (!std::isfinite(field) || field < 0.0) throw ValidationError("F must be finite and >= 0");
  if (!std::isfinite(width) || width <= 0.0) throw ValidationError("d must be finite and > 0");
  if (!std::isfinite(radius) || radius < 0.0) throw ValidationError("a must be finite and >= 0");
}

std::string_view to_string(BoundaryType bc) {
  return bc == BoundaryType::DirichletDirichlet ? "dirichlet" : "neumann";
}

BoundaryType parse_boundary(std::string_view text) {
  if (text == "dirichlet" || text == "dd" || text == "DirichletDirichlet") {
    return BoundaryType::DirichletDirichlet;
  }
  if (text == "neumann" || text == "nd" || text == "NeumannDirichlet") {
    return BoundaryType::NeumannDirichlet;
  }
  throw ValidationError("unknown boundary type '" + std::string(text) +
                        "' (expected dirichlet or neumann)");
}

}  // namespace stark
