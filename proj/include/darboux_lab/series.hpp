#pragma once

#include <optional>
#include <string>
#include <vector>

#include "darboux_lab/field.hpp"

namespace dlab {

// Truncated formal first integrals of degree <= order.
struct SeriesSpace {
  unsigned order = 0;
  unsigned margin = 0;
  std::vector<Poly> basis;  // starts with the constant 1
  // Variables occurring in some basis element, in field order; nullopt when
  // only constants remain.
  std::optional<std::vector<std::string>> depends_only_on;

  std::size_t dimension() const { return basis.size(); }
};

// Polynomials f of degree <= order (no constant term) whose Lie derivative
// has vanishing homogeneous components in every degree <= order + margin,
// plus the constants. Degrees above the order act as obstruction equations
// on the same unknowns.
SeriesSpace formal_integral_space(const VectorField& field, unsigned order, unsigned margin);

// A field with one parameter turned into a variable with zero dynamics.
struct ExtendedField {
  VectorField field;
  std::string promoted;
};

// Re-evaluates the field's source with `name` as an extra variable. Throws
// Error when the name is not a declared parameter or the field has no
// source.
ExtendedField promote_parameter(const VectorField& field, const std::string& name);

SeriesSpace formal_space_extended(const ExtendedField& field, unsigned order, unsigned margin);

// Every basis element is a polynomial in the promoted variable alone.
bool depends_only_on_promoted(const SeriesSpace& space, const ExtendedField& field);

}  // namespace dlab
