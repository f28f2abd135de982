#include "darboux_lab/series.hpp"

#include <algorithm>
#include <map>

#include "darboux_lab/matrix.hpp"

namespace dlab {

SeriesSpace formal_integral_space(const VectorField& field, unsigned order, unsigned margin) {
  if (order < 1) throw Error("truncation order must be at least 1");
  const VarList& vars = field.vars();
  const unsigned top = order + margin;

  std::vector<Monomial> unknowns;
  for (unsigned k = 1; k <= order; ++k)
    for (auto& m : monomials_of_degree(field.dimension(), k)) unknowns.push_back(std::move(m));

  // Rows: every monomial of degree <= order + margin reached by some X(m).
  std::map<Monomial, std::size_t> rows;
  std::vector<Poly> images;
  images.reserve(unknowns.size());
  for (const auto& m : unknowns) {
    images.push_back(lie_derivative(field, Poly::monomial(vars, m)));
    for (const auto& t : images.back().terms())
      if (t.monomial.degree() <= top) rows.emplace(t.monomial, 0);
  }
  std::size_t r = 0;
  for (auto& [m, i] : rows) i = r++;
  RatMatrix system(rows.size(), unknowns.size());
  for (std::size_t j = 0; j < unknowns.size(); ++j)
    for (const auto& t : images[j].terms())
      if (t.monomial.degree() <= top) system(rows.at(t.monomial), j) = t.coef;

  SeriesSpace out;
  out.order = order;
  out.margin = margin;
  out.basis.push_back(Poly::constant(vars, 1));
  std::vector<Poly> found;
  for (const auto& v : span_basis(nullspace(system), unknowns.size())) {
    std::vector<Term> terms;
    for (std::size_t i = 0; i < unknowns.size(); ++i)
      if (!v[i].is_zero()) terms.push_back({unknowns[i], v[i]});
    found.emplace_back(vars, std::move(terms));
  }
  std::sort(found.begin(), found.end(), [](const Poly& a, const Poly& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    return canonical_less(a, b);
  });
  out.basis.insert(out.basis.end(), found.begin(), found.end());

  std::vector<std::string> used;
  for (std::size_t i = 0; i < field.dimension(); ++i)
    if (std::any_of(out.basis.begin(), out.basis.end(), [i](const Poly& p) { return p.involves(i); }))
      used.push_back(vars[i]);
  if (!used.empty()) out.depends_only_on = std::move(used);
  return out;
}

ExtendedField promote_parameter(const VectorField& field, const std::string& name) {
  const auto& source = field.source();
  if (!source) throw Error("field has no source to re-read with '" + name + "' as a variable");
  const bool declared = std::any_of(source->params.begin(), source->params.end(),
                                    [&](const auto& p) { return p.first == name; });
  if (!declared) throw Error("unknown parameter '" + name + "'");
  if (std::find(field.promoted().begin(), field.promoted().end(), name) != field.promoted().end())
    throw Error("parameter '" + name + "' is already a variable");
  auto promoted = field.promoted();
  promoted.push_back(name);
  return {evaluate_source(source, field.zeroed(), std::move(promoted)), name};
}

SeriesSpace formal_space_extended(const ExtendedField& field, unsigned order, unsigned margin) {
  return formal_integral_space(field.field, order, margin);
}

bool depends_only_on_promoted(const SeriesSpace& space, const ExtendedField& field) {
  return !space.depends_only_on || *space.depends_only_on == std::vector<std::string>{field.promoted};
}

}  // namespace dlab
