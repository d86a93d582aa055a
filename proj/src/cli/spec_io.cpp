#include "spec_io.hpp"

#include "simplexgeo/expression.hpp"

namespace simplexgeo::cli {

namespace {

std::string type_name(const Json& j) { return j.type_name(); }

}  // namespace

const Json& require_field(const Json& obj, const char* key, const std::string& ptr) {
  if (!obj.is_object()) throw SpecError(ptr, "expected an object, got " + type_name(obj));
  auto it = obj.find(key);
  if (it == obj.end()) throw SpecError(child(ptr, key), "missing required field");
  return *it;
}

const Json* optional_field(const Json& obj, const char* key, const std::string& ptr) {
  if (!obj.is_object()) throw SpecError(ptr, "expected an object, got " + type_name(obj));
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

int parse_int(const Json& j, const std::string& ptr) {
  if (!j.is_number_integer()) throw SpecError(ptr, "expected an integer, got " + type_name(j));
  const long long v = j.get<long long>();
  if (v < -1000000 || v > 1000000) throw SpecError(ptr, "integer out of range");
  return static_cast<int>(v);
}

std::string parse_string(const Json& j, const std::string& ptr) {
  if (!j.is_string()) throw SpecError(ptr, "expected a string, got " + type_name(j));
  return j.get<std::string>();
}

const Json& require_array(const Json& j, const std::string& ptr) {
  if (!j.is_array()) throw SpecError(ptr, "expected an array, got " + type_name(j));
  return j;
}

Permutation parse_permutation(const Json& j, const std::string& ptr) {
  try {
    return Permutation(parse_ints(j, ptr));
  } catch (const GeometryError& e) {
    throw SpecError(ptr, e.what());
  }
}

ConeMetric parse_cone(const Json& j, const std::string& ptr) {
  const std::string lam = parse_string(require_field(j, "lambda_fn", ptr), child(ptr, "lambda_fn"));
  const std::string mu = parse_string(require_field(j, "mu_fn", ptr), child(ptr, "mu_fn"));
  try {
    Expression::parse(lam);
  } catch (const GeometryError& e) {
    throw SpecError(child(ptr, "lambda_fn"), e.what());
  }
  try {
    Expression::parse(mu);
  } catch (const GeometryError& e) {
    throw SpecError(child(ptr, "mu_fn"), e.what());
  }
  return cone_metric_from_expressions(lam, mu);
}

}  // namespace simplexgeo::cli
