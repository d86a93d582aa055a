#pragma once

// JSON input specs for the command-line tool. Schemas are documented in
// docs/cli.md. Every schema problem raises SpecError carrying the JSON
// pointer of the offending field.

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "simplexgeo/cone.hpp"
#include "simplexgeo/embeddings.hpp"
#include "simplexgeo/tensor_fields.hpp"
#include "simplexgeo/verify.hpp"

namespace simplexgeo::cli {

using Json = nlohmann::json;

class SpecError : public std::runtime_error {
 public:
  SpecError(std::string pointer, const std::string& message)
      : std::runtime_error((pointer.empty() ? std::string("/") : pointer) + ": " + message), pointer_(std::move(pointer)) {}
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

inline std::string child(const std::string& ptr, const std::string& key) { return ptr + "/" + key; }
inline std::string child(const std::string& ptr, std::size_t index) { return ptr + "/" + std::to_string(index); }

const Json& require_field(const Json& obj, const char* key, const std::string& ptr);
const Json* optional_field(const Json& obj, const char* key, const std::string& ptr);
int parse_int(const Json& j, const std::string& ptr);
std::string parse_string(const Json& j, const std::string& ptr);
const Json& require_array(const Json& j, const std::string& ptr);
Permutation parse_permutation(const Json& j, const std::string& ptr);
ConeMetric parse_cone(const Json& j, const std::string& ptr);

/// Numbers, or strings holding an integer, a fraction "p/q" or a decimal.
/// In exact mode JSON floats are read through their shortest decimal form,
/// so 0.1 becomes 1/10.
template <Scalar T>
T parse_scalar(const Json& j, const std::string& ptr) {
  if (j.is_number_integer()) return T(j.get<long long>());
  if (j.is_number()) {
    const double v = j.get<double>();
    if constexpr (is_exact_v<T>) return parse_rational(format_shortest(v));
    else return v;
  }
  if (j.is_string()) {
    try {
      const Rational r = parse_rational(j.get<std::string>());
      if constexpr (is_exact_v<T>) return r;
      else return to_double(r);
    } catch (const GeometryError& e) {
      throw SpecError(ptr, e.what());
    }
  }
  throw SpecError(ptr, "expected a number or a numeric string");
}

template <Scalar T>
std::vector<T> parse_scalars(const Json& j, const std::string& ptr) {
  const Json& arr = require_array(j, ptr);
  std::vector<T> out;
  for (std::size_t k = 0; k < arr.size(); ++k) out.push_back(parse_scalar<T>(arr[k], child(ptr, k)));
  return out;
}

inline std::vector<int> parse_ints(const Json& j, const std::string& ptr) {
  const Json& arr = require_array(j, ptr);
  std::vector<int> out;
  for (std::size_t k = 0; k < arr.size(); ++k) out.push_back(parse_int(arr[k], child(ptr, k)));
  return out;
}

/// A weight array [w_1, ..., w_{n+1}].
template <Scalar T>
SimplexPoint<T> parse_point(const Json& j, const std::string& ptr) {
  auto w = parse_scalars<T>(j, ptr);
  if (w.size() < 2) throw SpecError(ptr, "a point needs at least 2 weights");
  const int n = static_cast<int>(w.size()) - 1;
  return make_point<T>(n, std::move(w));
}

/// An ambient component array, {"z": i} for Z_i, or {"z_coords": [c_1..c_n]}.
template <Scalar T>
TangentVector<T> parse_tangent(const Json& j, int n, const std::string& ptr) {
  if (j.is_array()) return make_tangent<T>(n, parse_scalars<T>(j, ptr));
  if (!j.is_object()) throw SpecError(ptr, "expected a component array or an object with \"z\" or \"z_coords\"");
  if (const Json* z = optional_field(j, "z", ptr)) {
    const int i = parse_int(*z, child(ptr, "z"));
    if (i < 1 || i > n + 1) throw SpecError(child(ptr, "z"), "index outside 1.." + std::to_string(n + 1));
    return z_basis<T>(n, i);
  }
  if (const Json* c = optional_field(j, "z_coords", ptr)) {
    return from_z_coords<T>(ZCoordinates<T>{n, parse_scalars<T>(*c, child(ptr, "z_coords"))});
  }
  throw SpecError(ptr, "expected \"z\" or \"z_coords\"");
}

namespace detail_io {

template <Scalar T>
T scale_of(const Json& j, const std::string& ptr) {
  const Json* s = optional_field(j, "scale", ptr);
  return s ? parse_scalar<T>(*s, child(ptr, "scale")) : T(1);
}

template <Scalar T>
TensorField<T> with_scale(TensorField<T> field, const T& scale) {
  return scale == T(1) ? field : scaled<T>(field, scale);
}

}  // namespace detail_io

/// {"kind": "fisher"|"d"|"s"|"lm"|"zero", "lambda", "mu" (lm only), "scale" (optional, not lm)}.
template <Scalar T>
TensorField<T> parse_tensor(const Json& j, int n, const std::string& ptr) {
  if (!j.is_object()) throw SpecError(ptr, "tensor spec must be an object");
  const std::string kind = parse_string(require_field(j, "kind", ptr), child(ptr, "kind"));
  if (kind == "lm") {
    return tensor_lm<T>(n, parse_scalar<T>(require_field(j, "lambda", ptr), child(ptr, "lambda")),
                        parse_scalar<T>(require_field(j, "mu", ptr), child(ptr, "mu")));
  }
  if (kind == "zero") return zero_tensor<T>(n);
  const T scale = detail_io::scale_of<T>(j, ptr);
  if (kind == "fisher") return detail_io::with_scale(fisher<T>(n), scale);
  if (kind == "d") return detail_io::with_scale(tensor_d<T>(n), scale);
  if (kind == "s") return detail_io::with_scale(tensor_s<T>(n), scale);
  throw SpecError(child(ptr, "kind"), "unknown tensor kind '" + kind + "' (expected fisher, d, s, lm or zero)");
}

/// The family n -> parse_tensor(j, n). The spec is validated once up front.
template <Scalar T>
FamilyOracle<T> parse_family(const Json& j, int max_n, const std::string& ptr) {
  const std::string label = parse_tensor<T>(j, 1, ptr).label();
  return {max_n, [j, ptr](int n) { return parse_tensor<T>(j, n, ptr); }, label};
}

/// {"n": int, "sigma": [int...], "a": [scalar...]}.
template <Scalar T>
MarkovPatch<T> parse_patch(const Json& j, const std::string& ptr) {
  if (!j.is_object()) throw SpecError(ptr, "patch spec must be an object");
  const int n = parse_int(require_field(j, "n", ptr), child(ptr, "n"));
  const Permutation sigma = parse_permutation(require_field(j, "sigma", ptr), child(ptr, "sigma"));
  return MarkovPatch<T>(n, sigma, parse_scalars<T>(require_field(j, "a", ptr), child(ptr, "a")));
}

/// {"n": int, "N": int, "kappa": [int...], "q": [scalar...]}.
template <Scalar T>
MarkovPartition<T> parse_partition(const Json& j, const std::string& ptr) {
  if (!j.is_object()) throw SpecError(ptr, "partition spec must be an object");
  const int n = parse_int(require_field(j, "n", ptr), child(ptr, "n"));
  const int N = parse_int(require_field(j, "N", ptr), child(ptr, "N"));
  return MarkovPartition<T>(n, N, parse_ints(require_field(j, "kappa", ptr), child(ptr, "kappa")),
                            parse_scalars<T>(require_field(j, "q", ptr), child(ptr, "q")));
}

/// {"kind": "identity", "n"} | {"kind": "partition", ...} | {"kind": "patch", ...}
/// | {"kind": "scalar_patch", "n", "alpha", "sigma" (optional)}
/// | {"kind": "compose", "maps": [f_1, ..., f_k]} meaning f_1 o ... o f_k.
template <Scalar T>
EmbeddingMap<T> parse_embedding(const Json& j, const std::string& ptr) {
  if (!j.is_object()) throw SpecError(ptr, "embedding spec must be an object");
  const std::string kind = parse_string(require_field(j, "kind", ptr), child(ptr, "kind"));
  if (kind == "identity") return identity_embedding<T>(parse_int(require_field(j, "n", ptr), child(ptr, "n")));
  if (kind == "partition") return markov_embedding(parse_partition<T>(j, ptr));
  if (kind == "patch") return patched_embedding(parse_patch<T>(j, ptr));
  if (kind == "scalar_patch") {
    const int n = parse_int(require_field(j, "n", ptr), child(ptr, "n"));
    const T alpha = parse_scalar<T>(require_field(j, "alpha", ptr), child(ptr, "alpha"));
    if (const Json* s = optional_field(j, "sigma", ptr)) {
      return scalar_patched<T>(n, alpha, parse_permutation(*s, child(ptr, "sigma")));
    }
    return scalar_patched<T>(n, alpha);
  }
  if (kind == "compose") {
    const std::string mp = child(ptr, "maps");
    const Json& maps = require_array(require_field(j, "maps", ptr), mp);
    if (maps.empty()) throw SpecError(mp, "compose needs at least one map");
    EmbeddingMap<T> acc = parse_embedding<T>(maps.back(), child(mp, maps.size() - 1));
    for (std::size_t k = maps.size() - 1; k-- > 0;) {
      auto f = parse_embedding<T>(maps[k], child(mp, k));
      if (f.n_dom() != acc.n_cod()) {
        throw SpecError(child(mp, k), "domain P_" + std::to_string(f.n_dom()) + " does not match codomain P_" +
                                          std::to_string(acc.n_cod()) + " of the next map");
      }
      acc = compose(f, acc);
    }
    return acc;
  }
  throw SpecError(child(ptr, "kind"), "unknown embedding kind '" + kind +
                                          "' (expected identity, partition, patch, scalar_patch or compose)");
}

}  // namespace simplexgeo::cli
