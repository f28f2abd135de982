#include "darboux_lab/field.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace dlab {

VectorField::VectorField(VarList vars, std::vector<Poly> components, ParamList params)
    : vars_(std::move(vars)), components_(std::move(components)), params_(std::move(params)) {
  if (components_.size() != vars_.size()) throw VariableMismatch("need exactly one component per variable");
  for (const auto& c : components_)
    if (!(c.vars() == vars_)) throw VariableMismatch("component is over a different variable set");
}

int VectorField::degree() const {
  int d = 0;
  for (const auto& c : components_) d = std::max(d, c.degree());
  return d;
}

std::optional<Rational> VectorField::param(std::string_view name) const {
  for (const auto& [n, v] : params_)
    if (n == name) return v;
  return std::nullopt;
}

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::size_t skip_space(std::string_view s, std::size_t i) {
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  return i;
}

std::size_t read_ident(std::string_view s, std::size_t i) {
  if (i >= s.size() || !is_ident_start(s[i])) return i;
  while (i < s.size() && is_ident_char(s[i])) ++i;
  return i;
}

using PK = ParseError::Kind;

}  // namespace

VectorField parse_field(std::string_view text) {
  auto source = std::make_shared<FieldSource>();
  bool have_vars = false;
  int vars_line = 1;
  struct PendingEquation {
    std::string var;
    ExprPtr expr;
    int line;
    int column;
  };
  std::vector<PendingEquation> equations;

  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    start = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

    std::size_t i = skip_space(line, 0);
    if (i == line.size()) {
      if (end == text.size()) break;
      continue;
    }
    const auto col = [](std::size_t k) { return static_cast<int>(k) + 1; };
    const std::size_t id_end = read_ident(line, i);
    const std::string_view keyword = line.substr(i, id_end - i);

    if (keyword == "vars" && line.substr(skip_space(line, id_end)).starts_with(":")) {
      if (have_vars) throw ParseError(PK::DuplicateDeclaration, line_no, col(i), "duplicate 'vars' declaration");
      have_vars = true;
      vars_line = line_no;
      std::size_t k = skip_space(line, id_end) + 1;
      while (true) {
        k = skip_space(line, k);
        if (k < line.size() && line[k] == ',') {
          ++k;
          continue;
        }
        if (k == line.size()) break;
        const std::size_t e = read_ident(line, k);
        if (e == k) throw ParseError(PK::Syntax, line_no, col(k), "expected a variable name");
        std::string name(line.substr(k, e - k));
        if (std::find(source->vars.begin(), source->vars.end(), name) != source->vars.end())
          throw ParseError(PK::DuplicateDeclaration, line_no, col(k), "variable '" + name + "' declared twice");
        source->vars.push_back(std::move(name));
        k = e;
      }
      if (source->vars.empty()) throw ParseError(PK::Syntax, line_no, col(id_end), "no variables declared");
      continue;
    }

    if (keyword == "param" && id_end < line.size() && std::isspace(static_cast<unsigned char>(line[id_end]))) {
      std::size_t k = skip_space(line, id_end);
      const std::size_t e = read_ident(line, k);
      if (e == k) throw ParseError(PK::Syntax, line_no, col(k), "expected a parameter name");
      std::string name(line.substr(k, e - k));
      for (const auto& [n, v] : source->params)
        if (n == name)
          throw ParseError(PK::DuplicateDeclaration, line_no, col(k), "parameter '" + name + "' declared twice");
      k = skip_space(line, e);
      if (k == line.size() || line[k] != '=') throw ParseError(PK::Syntax, line_no, col(k), "expected '='");
      k = skip_space(line, k + 1);
      std::size_t v_end = line.size();
      while (v_end > k && std::isspace(static_cast<unsigned char>(line[v_end - 1]))) --v_end;
      std::string literal;
      for (std::size_t q = k; q < v_end; ++q)
        if (!std::isspace(static_cast<unsigned char>(line[q]))) literal += line[q];
      if (literal.empty()) throw ParseError(PK::Syntax, line_no, col(k), "expected a rational value");
      if (literal.find_first_of(".eE") != std::string::npos)
        throw ParseError(PK::NonRationalLiteral, line_no, col(k),
                         "non-rational literal '" + literal + "' (write exact fractions such as 1/2)");
      try {
        source->params.emplace_back(std::move(name), Rational::parse(literal));
      } catch (const DivisionByZero&) {
        throw ParseError(PK::NonRationalLiteral, line_no, col(k), "zero denominator in '" + literal + "'");
      } catch (const Error&) {
        throw ParseError(PK::Syntax, line_no, col(k), "expected <int>[/<posint>], got '" + literal + "'");
      }
      continue;
    }

    // d<var>/dt = <expr>
    if (keyword.size() > 1 && keyword.front() == 'd') {
      std::size_t k = id_end;
      const std::string var(keyword.substr(1));
      if (k < line.size() && line[k] == '/') {
        const std::size_t t_end = read_ident(line, k + 1);
        if (line.substr(k + 1, t_end - k - 1) == "dt") {
          k = skip_space(line, t_end);
          if (k == line.size() || line[k] != '=') throw ParseError(PK::Syntax, line_no, col(k), "expected '='");
          const std::size_t expr_start = k + 1;
          auto expr = parse_expr(line.substr(expr_start), line_no, static_cast<int>(expr_start));
          for (const auto& eq : equations)
            if (eq.var == var)
              throw ParseError(PK::DuplicateEquation, line_no, col(i), "duplicate equation for '" + var + "'");
          equations.push_back({var, std::move(expr), line_no, col(i)});
          continue;
        }
      }
    }
    throw ParseError(PK::Syntax, line_no, col(i),
                     "expected 'vars:', 'param <name> = <value>' or 'd<var>/dt = <expr>'");
  }

  if (!have_vars) throw ParseError(PK::Syntax, 1, 1, "missing 'vars:' declaration");
  for (const auto& [name, v] : source->params)
    if (std::find(source->vars.begin(), source->vars.end(), name) != source->vars.end())
      throw ParseError(PK::DuplicateDeclaration, vars_line, 1, "'" + name + "' is both a variable and a parameter");

  source->equations.resize(source->vars.size());
  for (auto& eq : equations) {
    const auto it = std::find(source->vars.begin(), source->vars.end(), eq.var);
    if (it == source->vars.end())
      throw ParseError(PK::UnknownVariable, eq.line, eq.column, "equation for undeclared variable '" + eq.var + "'");
    source->equations[static_cast<std::size_t>(it - source->vars.begin())] = std::move(eq.expr);
  }
  for (std::size_t v = 0; v < source->vars.size(); ++v)
    if (!source->equations[v])
      throw ParseError(PK::MissingEquation, vars_line, 1,
                       "missing equation for '" + source->vars[v] + "' (expected d" + source->vars[v] + "/dt = ...)");

  return evaluate_source(std::move(source), {}, {});
}

VectorField load_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open field file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_field(buf.str());
}

VectorField evaluate_source(std::shared_ptr<const FieldSource> source, std::vector<std::string> zeroed,
                            std::vector<std::string> promoted) {
  const auto contains = [](const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
  };
  std::vector<std::string> names;
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < source->vars.size(); ++i) {
    if (contains(zeroed, source->vars[i])) continue;
    names.push_back(source->vars[i]);
    kept.push_back(i);
  }
  SymbolTable symbols;
  ParamList params;
  for (const auto& [name, value] : source->params) {
    if (contains(promoted, name)) continue;
    symbols.params.emplace(name, value);
    params.emplace_back(name, value);
  }
  for (const auto& p : promoted) names.push_back(p);
  symbols.vars = VarList(names);
  symbols.zeroed.insert(zeroed.begin(), zeroed.end());

  std::vector<Poly> components;
  for (std::size_t i : kept) components.push_back(evaluate(*source->equations[i], symbols));
  for (std::size_t i = 0; i < promoted.size(); ++i) components.emplace_back(symbols.vars);

  VectorField field(symbols.vars, std::move(components), std::move(params));
  field.source_ = std::move(source);
  field.zeroed_ = std::move(zeroed);
  field.promoted_ = std::move(promoted);
  return field;
}

std::string print_field(const VectorField& field) {
  std::string out = "vars:";
  for (const auto& v : field.vars().names()) out += " " + v;
  out += "\n";
  for (const auto& [name, value] : field.params()) out += "param " + name + " = " + value.str() + "\n";
  for (std::size_t i = 0; i < field.dimension(); ++i)
    out += "d" + field.vars()[i] + "/dt = " + field.component(i).str() + "\n";
  return out;
}

Poly lie_derivative(const VectorField& field, const Poly& f) {
  if (!(f.vars() == field.vars())) throw VariableMismatch("polynomial is not over the field's variables");
  Poly out(field.vars());
  for (std::size_t i = 0; i < field.dimension(); ++i) {
    if (!f.involves(i) || field.component(i).is_zero()) continue;
    out += field.component(i) * f.derivative(i);
  }
  return out;
}

std::vector<FieldLayer> degree_split(const VectorField& field) {
  std::vector<FieldLayer> layers;
  for (int k = 0; k <= field.degree(); ++k) {
    std::vector<Poly> comps;
    bool any = false;
    for (const auto& c : field.components()) {
      comps.push_back(c.homogeneous_part(static_cast<std::uint32_t>(k)));
      any = any || !comps.back().is_zero();
    }
    if (any)
      layers.push_back({static_cast<std::uint32_t>(k), VectorField(field.vars(), std::move(comps), field.params())});
  }
  return layers;
}

std::optional<Poly> coordinate_cofactor(const VectorField& field, std::size_t var) {
  return exact_quotient(field.component(var), Poly::variable(field.vars(), var));
}

bool is_kolmogorov(const VectorField& field) {
  for (std::size_t i = 0; i < field.dimension(); ++i)
    if (!coordinate_cofactor(field, i)) return false;
  return true;
}

VectorField restrict_to_plane(const VectorField& field, std::string_view var) {
  const auto idx = field.vars().index_of(var);
  if (!idx) throw VariableMismatch("unknown variable '" + std::string(var) + "'");
  if (!coordinate_cofactor(field, *idx))
    throw NotInvariant("the plane " + std::string(var) + " = 0 is not invariant: d" + std::string(var) +
                       "/dt is not divisible by " + std::string(var));
  const VarList reduced = field.vars().without(*idx);
  std::vector<Poly> comps;
  for (std::size_t j = 0; j < field.dimension(); ++j) {
    if (j == *idx) continue;
    comps.push_back(field.component(j).set_zero(*idx).rebase(reduced));
  }
  VectorField out(reduced, std::move(comps), field.params());
  const bool promoted_var =
      std::find(field.promoted_.begin(), field.promoted_.end(), var) != field.promoted_.end();
  if (field.source_ && !promoted_var) {
    out.source_ = field.source_;
    out.zeroed_ = field.zeroed_;
    out.zeroed_.emplace_back(var);
    out.promoted_ = field.promoted_;
  }
  return out;
}

}  // namespace dlab
