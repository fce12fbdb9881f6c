#include "compop/serialize.hpp"

#include <string>

#include "compop/errors.hpp"

namespace compop {

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::ConfigError, "field '" + field + "': " + what);
}

const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) bad(where + "." + key, "missing");
  return j.at(key);
}

double number(const json& j, const char* key, const std::string& where) {
  const json& v = require(j, key, where);
  if (!v.is_number()) bad(where + "." + key, "expected a number");
  return v.get<double>();
}

std::vector<double> numbers(const json& v, const std::string& where) {
  if (!v.is_array()) bad(where, "expected an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) bad(where, "expected an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::pair<double, double> pair_of(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    bad(where, "expected a pair [x, y]");
  return {v[0].get<double>(), v[1].get<double>()};
}

}  // namespace

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j, const char* field) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  auto [re, im] = pair_of(j, field);
  return {re, im};
}

json to_json(const WeightFunction& h) {
  switch (h.family()) {
    case WeightFamily::Zero: return {{"family", "zero"}};
    case WeightFamily::Power: return {{"family", "power"}, {"c", h.c()}, {"gamma", h.gamma()}};
    case WeightFamily::LogPower: return {{"family", "log_power"}, {"beta", h.beta()}};
    case WeightFamily::Custom: {
      json t = json::array();
      for (const auto& [x, y] : h.table()) t.push_back({x, y});
      return {{"family", "custom"}, {"table", t}};
    }
  }
  return {};
}

WeightFunction weight_from_json(const json& j) {
  const std::string where = "weight";
  const json& fam = require(j, "family", where);
  if (!fam.is_string()) bad(where + ".family", "expected a string");
  const std::string f = fam.get<std::string>();
  if (f == "zero") return WeightFunction::zero();
  if (f == "power") return WeightFunction::power(number(j, "c", where), number(j, "gamma", where));
  if (f == "log_power" || f == "logpower") return WeightFunction::log_power(number(j, "beta", where));
  if (f == "custom") {
    const json& t = require(j, "table", where);
    if (!t.is_array()) bad(where + ".table", "expected an array");
    std::vector<std::pair<double, double>> table;
    for (std::size_t i = 0; i < t.size(); ++i) table.push_back(pair_of(t[i], where + ".table[" + std::to_string(i) + "]"));
    return WeightFunction::custom(std::move(table));
  }
  bad(where + ".family", "unknown family '" + f + "'");
}

json to_json(const BoundarySet& K) {
  if (K.is_cantor()) return {{"cantor", {{"ratios", K.cantor_ratios()}}}};
  json arcs = json::array();
  if (!K.empty())
    for (const Arc& a : K.arcs()) arcs.push_back({a.a, a.b});
  return {{"arcs", arcs}};
}

BoundarySet set_from_json(const json& j) {
  const std::string where = "set";
  if (!j.is_object()) bad(where, "expected an object");
  if (j.contains("arcs")) {
    const json& a = j.at("arcs");
    if (!a.is_array()) bad(where + ".arcs", "expected an array");
    std::vector<Arc> arcs;
    for (std::size_t i = 0; i < a.size(); ++i) {
      auto [lo, hi] = pair_of(a[i], where + ".arcs[" + std::to_string(i) + "]");
      arcs.push_back({lo, hi});
    }
    return BoundarySet::from_arcs(std::move(arcs));
  }
  if (j.contains("cantor")) {
    const json& c = j.at("cantor");
    const std::string cw = where + ".cantor";
    if (c.contains("ratios")) return BoundarySet::cantor(numbers(c.at("ratios"), cw + ".ratios"));
    if (c.contains("logpower_levels"))
      return BoundarySet::cantor(logpower_cantor_ratios(static_cast<int>(number(c, "logpower_levels", cw))));
    return make_cantor_set(static_cast<int>(number(c, "level", cw)), number(c, "ratio", cw));
  }
  if (j.contains("point")) return BoundarySet::point(number(j, "point", where));
  bad(where, "expected 'arcs', 'cantor' or 'point'");
}

json to_json(const Symbol& phi) {
  switch (phi.variant()) {
    case SymbolVariant::Polynomial: {
      json c = json::array();
      for (const cplx& z : phi.coefficients()) c.push_back(to_json(z));
      return {{"variant", "polynomial"}, {"coefficients", c}};
    }
    case SymbolVariant::Outer:
      return {{"variant", "outer"}, {"weight", to_json(phi.weight())}, {"set", to_json(phi.set())}};
    case SymbolVariant::ScaledRotation:
      return {{"variant", "scaled_rotation"}, {"s", phi.scale()}, {"angle", phi.angle()}};
  }
  return {};
}

Symbol symbol_from_json(const json& j) {
  const std::string where = "symbol";
  const json& v = require(j, "variant", where);
  if (!v.is_string()) bad(where + ".variant", "expected a string");
  const std::string var = v.get<std::string>();
  if (var == "outer") return Symbol::outer(weight_from_json(require(j, "weight", where)), set_from_json(require(j, "set", where)));
  if (var == "polynomial") {
    const json& c = require(j, "coefficients", where);
    if (!c.is_array()) bad(where + ".coefficients", "expected an array");
    std::vector<cplx> coeffs;
    for (std::size_t i = 0; i < c.size(); ++i) {
      const std::string f = where + ".coefficients[" + std::to_string(i) + "]";
      coeffs.push_back(complex_from_json(c[i], f.c_str()));
    }
    return Symbol::polynomial(std::move(coeffs));
  }
  if (var == "scaled_rotation") {
    const double angle = j.contains("angle") ? number(j, "angle", where) : 0.0;
    return Symbol::scaled_rotation(number(j, "s", where), angle);
  }
  if (var == "identity") return Symbol::identity();
  bad(where + ".variant", "unknown variant '" + var + "'");
}

}  // namespace compop
