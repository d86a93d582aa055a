#include "commands.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>

#include "simplexgeo/cone.hpp"
#include "simplexgeo/sampling.hpp"
#include "simplexgeo/verify.hpp"
#include "spec_io.hpp"

namespace simplexgeo::cli {

namespace {

using OJson = nlohmann::ordered_json;

template <Scalar T>
OJson value_json(const T& v) {
  if constexpr (is_exact_v<T>) {
    return to_string(v);
  } else {
    if (!std::isfinite(v)) return nullptr;
    return v;
  }
}

template <Scalar T>
OJson values_json(std::span<const T> v) {
  auto arr = OJson::array();
  for (const T& x : v) arr.push_back(value_json(x));
  return arr;
}

template <Scalar T>
std::string format_value(const T& v) {
  if constexpr (is_exact_v<T>) {
    return to_string(v);
  } else {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }
}

void emit(std::ostream& out, const OJson& doc) { out << doc.dump() << '\n'; }

Json read_document(const RunConfig& cfg, std::istream& in) {
  std::string text;
  if (cfg.config.empty()) {
    text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  } else {
    std::ifstream file(cfg.config);
    if (!file) throw SpecError("", "cannot open config file '" + cfg.config + "'");
    text.assign(std::istreambuf_iterator<char>(file), std::istreambuf_iterator<char>());
  }
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw SpecError("", std::string("malformed JSON: ") + e.what());
  }
}

int optional_int(const Json& doc, const char* key, int fallback) {
  const Json* v = optional_field(doc, key, "");
  return v ? parse_int(*v, child("", key)) : fallback;
}

// ---------------------------------------------------------------------------

template <Scalar T>
void cmd_eval(const Json& doc, std::ostream& out) {
  const auto p = parse_point<T>(require_field(doc, "point", ""), "/point");
  const auto A = parse_tensor<T>(require_field(doc, "tensor", ""), p.n(), "/tensor");
  const auto X = parse_tangent<T>(require_field(doc, "X", ""), p.n(), "/X");
  const auto Y = parse_tangent<T>(require_field(doc, "Y", ""), p.n(), "/Y");
  out << format_value(A(p, X, Y)) << '\n';
}

template <Scalar T>
void cmd_pullback(const Json& doc, std::ostream& out) {
  const auto f = parse_embedding<T>(require_field(doc, "map", ""), "/map");
  const auto p = parse_point<T>(require_field(doc, "point", ""), "/point");
  if (p.n() != f.n_dom()) {
    throw GeometryError(ErrorKind::DimensionMismatch, "point lives on P_" + std::to_string(p.n()) +
                                                          " but the map starts at P_" + std::to_string(f.n_dom()));
  }
  const Json& spec = require_field(doc, "tensor", "");
  const auto upper = parse_tensor<T>(spec, f.n_cod(), "/tensor");
  const auto lower = parse_tensor<T>(spec, f.n_dom(), "/tensor");
  const auto X = parse_tangent<T>(require_field(doc, "X", ""), p.n(), "/X");
  const auto Y = parse_tangent<T>(require_field(doc, "Y", ""), p.n(), "/Y");
  const auto image = simplexgeo::apply(f, p);
  const auto dX = differential(f, X);
  const auto dY = differential(f, Y);
  OJson r;
  r["map"] = describe(f);
  r["image"] = values_json<T>(image.weights());
  r["dX"] = values_json<T>(dX.components());
  r["dY"] = values_json<T>(dY.components());
  r["pullback"] = value_json(pullback(upper, f)(p, X, Y));
  r["original"] = value_json(lower(p, X, Y));
  emit(out, r);
}

/// (lambda, mu) of a family object of kind lm, d or s.
template <Scalar T>
std::pair<T, T> lm_coefficients(const Json& spec) {
  const std::string kind = parse_string(require_field(spec, "kind", "/family"), "/family/kind");
  if (kind == "lm") {
    return {parse_scalar<T>(require_field(spec, "lambda", "/family"), "/family/lambda"),
            parse_scalar<T>(require_field(spec, "mu", "/family"), "/family/mu")};
  }
  const Json* s = optional_field(spec, "scale", "/family");
  const T scale = s ? parse_scalar<T>(*s, "/family/scale") : T(1);
  if (kind == "d") return {scale, T(0)};
  if (kind == "s") return {T(0), scale};
  throw SpecError("/family/kind", "a patch witness search needs a family of kind lm, d or s");
}

template <Scalar T>
void cmd_invariance(const Json& doc, const RunConfig& cfg, std::ostream& out) {
  Rng rng(cfg.seed);
  const Json& spec = require_field(doc, "family", "");
  const auto family = parse_family<T>(spec, cfg.n_max + 1, "/family");
  emit(out, to_json(check_family_invariance(family, cfg.trials, cfg.tol, rng)));
  if (const Json* patch_spec = optional_field(doc, "patch", "")) {
    const auto patch = parse_patch<T>(*patch_spec, "/patch");
    const auto [lambda, mu] = lm_coefficients<T>(spec);
    const int budget = optional_int(doc, "witness_budget", 10000);
    emit(out, to_json(search_patch_noninvariance(patch, lambda, mu, rng, budget)));
  }
}

ConditionGrid parse_grid(const Json& doc) {
  ConditionGrid grid = ConditionGrid::standard();
  const Json* g = optional_field(doc, "grid", "");
  if (!g) return grid;
  if (const Json* u = optional_field(*g, "u", "/grid")) grid.u = parse_scalars<double>(*u, "/grid/u");
  if (const Json* a = optional_field(*g, "alpha", "/grid")) grid.alpha = parse_scalars<double>(*a, "/grid/alpha");
  for (std::size_t k = 0; k < grid.u.size(); ++k) {
    if (!(grid.u[k] > 0 && grid.u[k] < 1)) throw SpecError("/grid/u/" + std::to_string(k), "u must lie in (0,1)");
  }
  for (std::size_t k = 0; k < grid.alpha.size(); ++k) {
    if (!(grid.alpha[k] > 0 && grid.alpha[k] < 1)) {
      throw SpecError("/grid/alpha/" + std::to_string(k), "alpha must lie in (0,1)");
    }
  }
  return grid;
}

template <Scalar T>
void cmd_barycenter(const Json& spec, const RunConfig& cfg, std::ostream& out) {
  const auto family = parse_family<T>(spec, cfg.n_max, "/family");
  auto [value, report] = barycenter_quantity(family, 1, cfg.tol);
  OJson r = to_json(report);
  r["value"] = value_json(value);
  emit(out, r);
}

void cmd_conditions(const Json& doc, const RunConfig& cfg, std::ostream& out) {
  const Json& spec = require_field(doc, "family", "");
  const auto family = parse_family<double>(spec, std::max(cfg.n_max, 2), "/family");
  const ConditionGrid grid = parse_grid(doc);
  emit(out, to_json(check_sym_u(family.at(1), grid.u, cfg.tol)));
  if (cfg.rational) cmd_barycenter<Rational>(spec, cfg, out);
  else cmd_barycenter<double>(spec, cfg, out);
  auto c1 = check_C1(family.at(2), family.at(1), grid);
  OJson r = to_json(c1.report);
  auto table = OJson::array();
  for (auto [t, v] : c1.r_table) table.push_back(OJson::array({t, v}));
  r["r_table"] = table;
  emit(out, r);
  emit(out, to_json(check_C2(family, grid, cfg.tol)));
}

void cmd_reconstruct(const Json& doc, const RunConfig& cfg, std::ostream& out) {
  const auto family = parse_family<double>(require_field(doc, "family", ""), std::max(cfg.n_max, 2), "/family");
  const std::string target = parse_string(require_field(doc, "target", ""), "/target");
  ReconstructionOptions options;
  options.tol = cfg.tol;
  options.invariance_trials = cfg.trials;
  options.samples_per_n = optional_int(doc, "samples", 500);
  options.grid = parse_grid(doc);
  Rng rng(cfg.seed);
  Reconstruction result;
  if (target == "lambda") result = reconstruct_lambda(family, rng, options);
  else if (target == "mu") result = reconstruct_mu(family, rng, options);
  else throw SpecError("/target", "expected \"lambda\" or \"mu\"");
  OJson r;
  r["target"] = target;
  r["value"] = value_json(result.value);
  r["report"] = to_json(result.report);
  auto pre = OJson::array();
  for (const auto& p : result.prerequisites) pre.push_back(to_json(p));
  r["prerequisites"] = pre;
  emit(out, r);
}

template <Scalar T>
void cmd_factorize(const Json& doc, const RunConfig& cfg, std::ostream& out) {
  Rng rng(cfg.seed);
  const int samples = optional_int(doc, "samples", 100);
  const double tol = cfg.tol;
  if (const Json* part_spec = optional_field(doc, "partition", "")) {
    const auto part = parse_partition<T>(*part_spec, "/partition");
    if (const Json* t = optional_field(doc, "t", "")) {
      const auto stat = parse_scalars<T>(*t, "/t");
      emit(out, to_json(check_markov_factorization<T>(part, stat, samples, rng, tol)));
    } else {
      emit(out, to_json(factorization_check_markov(part, samples, rng, tol)));
    }
    return;
  }
  const Json* patch_spec = optional_field(doc, "patch", "");
  if (!patch_spec) throw SpecError("", "expected a \"partition\" or a \"patch\"");
  const auto patch = parse_patch<T>(*patch_spec, "/patch");
  const int j = parse_int(require_field(doc, "j", ""), "/j");
  const T b = parse_scalar<T>(require_field(doc, "b", ""), "/b");
  const T c = parse_scalar<T>(require_field(doc, "c", ""), "/c");
  if (const Json* t = optional_field(doc, "t", "")) {
    const auto stat = parse_scalars<T>(*t, "/t");
    // Validates (b, c) before checking the user's statistic.
    factorization_check_patched<T>(patch, j, b, c, 1, rng, tol);
    emit(out, to_json(check_patched_factorization<T>(patch, j, b, c, stat, samples, rng, tol)));
  } else {
    emit(out, to_json(factorization_check_patched<T>(patch, j, b, c, samples, rng, tol)));
  }
}

void cmd_campbell(const Json& doc, const RunConfig& cfg, std::ostream& out) {
  const ConeMetric g = parse_cone(require_field(doc, "cone", ""), "/cone");
  const int n = optional_int(doc, "n", 2);
  if (n < 1) throw SpecError("/n", "n must be >= 1");
  const int samples = optional_int(doc, "samples", 200);
  const Json* lam_spec = optional_field(doc, "lambda", "");
  const Json* mu_spec = optional_field(doc, "mu", "");
  const double lambda = lam_spec ? parse_scalar<double>(*lam_spec, "/lambda") : g.lambda_fn(1.0);
  const double mu = mu_spec ? parse_scalar<double>(*mu_spec, "/mu") : g.mu_fn(1.0);
  Rng rng(cfg.seed);

  std::vector<double> ts;
  for (int k = 1; k <= 40; ++k) ts.push_back(k / 20.0);
  OJson warn;
  warn["positivity_warnings"] = check_positivity(g, ts);
  emit(out, warn);

  const auto iota = iota_pullback(g, n);
  const auto reference = scaled<double>(fisher<double>(n), g.lambda_fn(1.0));
  DeviationTracker iota_tracker("iota_pullback_vs_fisher[" + g.label + "]", cfg.tol);
  for (int s = 0; s < samples; ++s) {
    const auto p = random_point<double>(n, rng);
    const auto X = random_tangent<double>(n, rng);
    const auto Y = random_tangent<double>(n, rng);
    const double a = iota(p, X, Y);
    const double b = reference(p, X, Y);
    iota_tracker.record(relative_deviation(a, b), [&] { return detail::make_witness<double>(p, {&X, &Y}, {a, b}, ""); });
  }
  emit(out, to_json(iota_tracker.finish()));

  const auto jf = j_pullback(g, n);
  const auto lm = tensor_lm<double>(n + 1, lambda, mu);
  DeviationTracker j_tracker("j_pullback_vs_lm[" + g.label + " vs " + lm.label() + "]", cfg.tol);
  auto probe = [&](const SimplexPoint<double>& q, const TangentVector<double>& X, const char* where) {
    const double a = jf(q, X, X);
    const double b = lm(q, X, X);
    j_tracker.record(relative_deviation(a, b), [&] { return detail::make_witness<double>(q, {&X}, {a, b}, where); });
  };
  if (const Json* w = optional_field(doc, "witness", "")) {
    const auto q = parse_point<double>(require_field(*w, "point", "/witness"), "/witness/point");
    if (q.n() != n + 1) throw SpecError("/witness/point", "witness point must live on P_" + std::to_string(n + 1));
    probe(q, parse_tangent<double>(require_field(*w, "X", "/witness"), n + 1, "/witness/X"), "given");
  }
  for (int s = 0; s < samples; ++s) probe(random_point<double>(n + 1, rng), random_tangent<double>(n + 1, rng), "random");
  emit(out, to_json(j_tracker.finish()));
}

void cmd_sweep(const Json& doc, std::ostream& out) {
  const std::string quantity = parse_string(require_field(doc, "quantity", ""), "/quantity");
  const Json& spec = require_field(doc, "tensor", "");
  std::vector<double> grid = ConditionGrid::standard().u;
  if (const Json* g = optional_field(doc, "grid", "")) grid = parse_scalars<double>(*g, "/grid");
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!(grid[k] > 0 && grid[k] < 1)) throw SpecError("/grid/" + std::to_string(k), "u must lie in (0,1)");
  }
  const auto z = z_basis<double>(1, 1);
  if (quantity == "A1_diag" || quantity == "M_of_u") {
    const auto a1 = parse_tensor<double>(spec, 1, "/tensor");
    out << "u,value\n";
    for (double u : grid) {
      const double v = quantity == "A1_diag" ? a1(point_of_u(u), z, z) : M_profile(a1, u);
      out << format_shortest(u) << ',' << format_shortest(v) << '\n';
    }
    return;
  }
  if (quantity == "r_of_t") {
    const auto a2 = parse_tensor<double>(spec, 2, "/tensor");
    const Permutation id = Permutation::identity(3);
    out << "t,value\n";
    for (double u : grid) {
      const auto psi = make_psi_point(u, 0.5, id);
      const auto W3 = make_tangent<double>(2, {1, -1, 0});
      const auto W1 = make_tangent<double>(2, {0, -1, 1});
      const auto W2 = make_tangent<double>(2, {1, 0, -1});
      const double den = a2(psi.q, W3, W2);
      if (std::abs(den) < kDegenerateMagnitude) continue;
      out << format_shortest(u / (1 - u)) << ',' << format_shortest(a2(psi.q, W3, W1) / den) << '\n';
    }
    return;
  }
  throw SpecError("/quantity", "expected A1_diag, r_of_t or M_of_u");
}

int domain_exit(const GeometryError& e) { return e.kind() == ErrorKind::ParseError ? 2 : 1; }

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Evaluations and mechanized checks for invariant tensor fields on finite simplices", "simplexgeo"};
  app.fallthrough();
  app.require_subcommand(1, 1);
  RunConfig cfg;
  std::string mode = "float";
  app.add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  app.add_option("--tol", cfg.tol, "Comparison tolerance")->capture_default_str();
  app.add_option("--n-max", cfg.n_max, "Largest simplex dimension")->capture_default_str()->check(CLI::Range(1, 64));
  app.add_option("--trials", cfg.trials, "Random trials per check")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--mode", mode, "Arithmetic")->capture_default_str()->check(CLI::IsMember({"float", "rational"}));
  app.add_option("--out", cfg.out, "Output file (default: standard output)");
  app.add_option("--config", cfg.config, "Input JSON (default: standard input)");

  const std::vector<std::pair<const char*, const char*>> subcommands = {
      {"eval", "Evaluate a tensor field"},
      {"pullback", "Pull a tensor field back along an embedding"},
      {"invariance", "Scalar-patch invariance of a family; optional patch witness search"},
      {"conditions", "sym_u, barycenter quantity, (C1) and (C2) for a family"},
      {"reconstruct", "Reconstruct lambda or mu from a family"},
      {"factorize", "Fisher-Neyman factorization of a (patched) Markov embedding"},
      {"campbell", "Restrictions of a cone metric to simplices"},
      {"sweep", "CSV of A_1(Z_u,Z_u), r(t) or M(u)"},
      {"suite", "Run every check on the canonical families"},
  };
  for (auto [name, help] : subcommands) app.add_subcommand(name, help);

  std::vector<const char*> argv{"simplexgeo"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  cfg.rational = mode == "rational";
  const std::string cmd = app.get_subcommands().front()->get_name();

  std::ofstream file;
  if (!cfg.out.empty()) {
    file.open(cfg.out);
    if (!file) {
      err << "error: cannot open output file '" << cfg.out << "'\n";
      return 2;
    }
  }
  std::ostream& sink = cfg.out.empty() ? out : file;

  try {
    if (cmd == "suite") {
      bool all_expected = true;
      sink << run_suite(cfg, all_expected).dump(2) << '\n';
      return all_expected ? 0 : 1;
    }
    const Json doc = read_document(cfg, in);
    if (!doc.is_object()) throw SpecError("", "input must be a JSON object");
    if (cmd == "eval") cfg.rational ? cmd_eval<Rational>(doc, sink) : cmd_eval<double>(doc, sink);
    else if (cmd == "pullback") cfg.rational ? cmd_pullback<Rational>(doc, sink) : cmd_pullback<double>(doc, sink);
    else if (cmd == "invariance") cfg.rational ? cmd_invariance<Rational>(doc, cfg, sink) : cmd_invariance<double>(doc, cfg, sink);
    else if (cmd == "conditions") cmd_conditions(doc, cfg, sink);
    else if (cmd == "reconstruct") cmd_reconstruct(doc, cfg, sink);
    else if (cmd == "factorize") cfg.rational ? cmd_factorize<Rational>(doc, cfg, sink) : cmd_factorize<double>(doc, cfg, sink);
    else if (cmd == "campbell") cmd_campbell(doc, cfg, sink);
    else if (cmd == "sweep") cmd_sweep(doc, sink);
    return 0;
  } catch (const SpecError& e) {
    err << "input error at " << e.what() << '\n';
    return 2;
  } catch (const GeometryError& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return domain_exit(e);
  }
}

}  // namespace simplexgeo::cli
