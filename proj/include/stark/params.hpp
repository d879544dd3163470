#pragma once

#include <string>
#include <string_view>

namespace stark {

// Physical configuration of the layer: field intensity F, width d and
// Neumann window radius a. Units follow -Laplacian + F z (hbar = 2m = 1).
struct WaveguideParams {
  double field = 0.0;   // F >= 0
  double width = 1.0;   // d > 0
  double radius = 0.0;  // a >= 0

  // Throws ValidationError when an invariant is violated.
  void validate() const;
  bool operator==(const WaveguideParams&) const = default;
};

// Transverse boundary conditions on [0, d]. Dirichlet at z = d in both cases.
enum class BoundaryType {
  DirichletDirichlet,  // a = 0
  NeumannDirichlet,    // a = infinity: Neumann at z = 0
};

std::string_view to_string(BoundaryType bc);
BoundaryType parse_boundary(std::string_view text);

}  // namespace stark
