#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "darboux_lab/expr.hpp"
#include "darboux_lab/poly.hpp"

namespace dlab {

class NotInvariant : public Error {
 public:
  using Error::Error;
};

using ParamList = std::vector<std::pair<std::string, Rational>>;

// Symbolic form of a field file, kept so a field can be re-read with a
// parameter promoted to a variable.
struct FieldSource {
  std::vector<std::string> vars;
  ParamList params;
  std::vector<ExprPtr> equations;  // one per entry of `vars`
};

// Polynomial vector field: component i is the time derivative of variable i.
class VectorField {
 public:
  VectorField() = default;
  VectorField(VarList vars, std::vector<Poly> components, ParamList params = {});

  const VarList& vars() const { return vars_; }
  std::size_t dimension() const { return vars_.size(); }
  const std::vector<Poly>& components() const { return components_; }
  const Poly& component(std::size_t i) const { return components_[i]; }
  // Maximum total degree over the components (0 for the zero field).
  int degree() const;
  const ParamList& params() const { return params_; }
  std::optional<Rational> param(std::string_view name) const;

  // Provenance: the parsed file, variables zeroed by restriction and
  // parameters promoted to variables.
  const std::shared_ptr<const FieldSource>& source() const { return source_; }
  const std::vector<std::string>& zeroed() const { return zeroed_; }
  const std::vector<std::string>& promoted() const { return promoted_; }

  friend bool operator==(const VectorField& a, const VectorField& b) {
    return a.vars_ == b.vars_ && a.components_ == b.components_ && a.params_ == b.params_;
  }

 private:
  friend VectorField evaluate_source(std::shared_ptr<const FieldSource>, std::vector<std::string>,
                                     std::vector<std::string>);
  friend VectorField restrict_to_plane(const VectorField&, std::string_view);

  VarList vars_;
  std::vector<Poly> components_;
  ParamList params_;
  std::shared_ptr<const FieldSource> source_;
  std::vector<std::string> zeroed_;
  std::vector<std::string> promoted_;
};

// Reads the field file grammar:
//   vars: x y z
//   param a = 29851/10000
//   dx/dt = x*(1 - y + c*x - a*x*z)
// `#` starts a comment. Throws ParseError with line and column.
VectorField parse_field(std::string_view text);
VectorField load_field(const std::string& path);

// Builds the field from a parsed source with the given variables set to zero
// (dropping their equations) and parameters promoted to variables with zero
// dynamics, appended after the declared variables.
VectorField evaluate_source(std::shared_ptr<const FieldSource> source, std::vector<std::string> zeroed,
                            std::vector<std::string> promoted);

// Canonical field-file text; parse_field(print_field(X)) == X.
std::string print_field(const VectorField& field);

// Sum over i of component_i * d f / d x_i.
Poly lie_derivative(const VectorField& field, const Poly& f);

struct FieldLayer {
  std::uint32_t degree;
  VectorField field;  // homogeneous of `degree` in every component
};

// Splits the field by total degree; only nonempty layers, ascending degree.
std::vector<FieldLayer> degree_split(const VectorField& field);

// Component i divided by x_i, when it divides exactly.
std::optional<Poly> coordinate_cofactor(const VectorField& field, std::size_t var);
// Every component divisible by its own variable.
bool is_kolmogorov(const VectorField& field);

// Restriction to the invariant hyperplane {var = 0}. Throws NotInvariant
// unless the component of `var` is divisible by `var`.
VectorField restrict_to_plane(const VectorField& field, std::string_view var);

}  // namespace dlab
