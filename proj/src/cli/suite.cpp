#include <optional>

#include "commands.hpp"
#include "simplexgeo/sampling.hpp"
#include "simplexgeo/verify.hpp"

namespace simplexgeo::cli {

namespace {

using OJson = nlohmann::ordered_json;

/// Outcomes are CheckStatus names plus "prereq_failed" for reconstructions
/// refused by their preconditions.
class Bundle {
 public:
  explicit Bundle(const RunConfig& cfg) {
    doc_["config"] = {{"seed", cfg.seed},
                      {"tol", cfg.tol},
                      {"n_max", cfg.n_max},
                      {"trials", cfg.trials},
                      {"mode", cfg.rational ? "rational" : "float"}};
    doc_["results"] = OJson::array();
  }

  void add(const std::string& check, const std::string& family, const std::string& expected, const CheckReport& report,
           std::optional<OJson> value = std::nullopt) {
    push(check, family, expected, std::string(to_string(report.status)), to_json(report), std::move(value));
  }

  void add_prereq_failure(const std::string& check, const std::string& family, const std::string& expected,
                          const std::string& why) {
    push(check, family, expected, "prereq_failed", OJson{{"error", why}}, std::nullopt);
  }

  OJson finish(bool& all_expected) {
    all_expected = mismatches_ == 0;
    doc_["summary"] = {{"checks", doc_["results"].size()}, {"unexpected", mismatches_}};
    return std::move(doc_);
  }

 private:
  void push(const std::string& check, const std::string& family, const std::string& expected, const std::string& outcome,
            OJson report, std::optional<OJson> value) {
    OJson r;
    r["check"] = check;
    r["family"] = family;
    r["expected"] = expected;
    r["outcome"] = outcome;
    r["as_expected"] = expected == outcome;
    if (value) r["value"] = *value;
    r["report"] = std::move(report);
    if (expected != outcome) ++mismatches_;
    doc_["results"].push_back(std::move(r));
  }

  OJson doc_;
  long mismatches_ = 0;
};

template <Scalar T>
OJson scalar_json(const T& v) {
  if constexpr (is_exact_v<T>) return to_string(v);
  else return v;
}

template <Scalar T>
void exact_capable_checks(const RunConfig& cfg, Bundle& bundle, Rng& rng) {
  const int max_n = cfg.n_max + 1;
  const auto lm = lm_family<T>(T(3), T(-1), max_n);
  const auto lm11 = lm_family<T>(T(1), T(1), max_n);
  const auto fisher = fisher_family<T>(max_n);
  const auto zero = zero_family<T>(max_n);

  bundle.add("family_invariance", lm.label, "passed", check_family_invariance(lm, cfg.trials, cfg.tol, rng));
  bundle.add("family_invariance", lm11.label, "passed", check_family_invariance(lm11, cfg.trials, cfg.tol, rng));
  bundle.add("family_invariance", fisher.label, "failed", check_family_invariance(fisher, cfg.trials, cfg.tol, rng));
  bundle.add("family_invariance", zero.label, "passed", check_family_invariance(zero, cfg.trials, cfg.tol, rng));

  const MarkovPatch<T> closed(1, Permutation::identity(3), {ratio<T>(1, 2), ratio<T>(9, 10)});
  for (auto [lambda, mu] : {std::pair{1, 0}, std::pair{0, 1}, std::pair{1, 1}}) {
    auto report = search_patch_noninvariance<T>(closed, T(lambda), T(mu), rng);
    bundle.add("patch_noninvariance", report.name, "failed", report);
  }
  const MarkovPatch<T> flat(2, Permutation({2, 4, 1, 3}), std::vector<T>(3, ratio<T>(3, 10)));
  auto flat_report = search_patch_noninvariance<T>(flat, T(1), T(1), rng, 2000);
  bundle.add("patch_noninvariance", flat_report.name, "inconclusive", flat_report);

  const auto lm_bary = lm_family<T>(ratio<T>(5, 2), ratio<T>(3, 2), max_n);
  for (const auto* fam : {&lm_bary, &zero}) {
    auto [value, report] = barycenter_quantity(*fam, 1, cfg.tol);
    bundle.add("barycenter_quantity", fam->label, "passed", report, scalar_json(value));
  }

  for (int s = 0; s < 3; ++s) {
    const int n = uniform_int(rng, 1, std::max(1, cfg.n_max - 1));
    const int N = uniform_int(rng, n, cfg.n_max + 1);
    const auto part = random_partition<T>(n, N, rng);
    bundle.add("markov_factorization", "random partition", "passed", factorization_check_markov(part, 100, rng, 1e-12));
    if (s == 0) {
      auto t = part.weights();
      std::vector<T> bad(t.begin(), t.end());
      bad[0] += ratio<T>(1, 10);
      bundle.add("markov_factorization", "corrupted statistic", "failed",
                 check_markov_factorization<T>(part, bad, 100, rng, 1e-12));
    }
  }
  const MarkovPatch<T> patch(2, Permutation::identity(4), {ratio<T>(1, 2), ratio<T>(9, 10), ratio<T>(7, 10)});
  const T b = ratio<T>(2, 5);
  const T c = ratio<T>(7, 10);  // inside (0.2 + 0.6 * 0.7, 0.2 + 0.6 * 0.9) = (0.62, 0.74)
  bundle.add("patched_factorization", "a=(1/2,9/10,7/10) j=1", "passed",
             factorization_check_patched<T>(patch, 1, b, c, 100, rng, 1e-12));
  auto t = patched_statistic(patch, b, c);
  t[3] += ratio<T>(1, 10);
  bundle.add("patched_factorization", "corrupted statistic", "failed",
             check_patched_factorization<T>(patch, 1, b, c, std::span<const T>(t), 100, rng, 1e-12));
  const MarkovPatch<T> scalar_patch(2, Permutation({3, 1, 4, 2}), std::vector<T>(3, ratio<T>(3, 5)));
  bundle.add("patched_factorization", "scalar a=3/5 j=2", "passed",
             factorization_check_patched<T>(scalar_patch, 2, b, ratio<T>(3, 5), 100, rng, 1e-12));
}

void float_checks(const RunConfig& cfg, Bundle& bundle, Rng& rng) {
  const int max_n = std::max(cfg.n_max, 2);
  const ConditionGrid grid = ConditionGrid::standard();
  const auto d = d_family<double>(3.7, max_n);
  const auto s = s_family<double>(2.25, max_n);
  const auto lm11 = lm_family<double>(1, 1, max_n);
  const auto zero = zero_family<double>(max_n);
  const auto asym = custom_tensor<double>(1, "asymmetric", [](const auto& p, const auto&, const auto&) { return p(1); });

  bundle.add("sym_u", "d", "passed", check_sym_u(tensor_d<double>(1), grid.u, cfg.tol));
  bundle.add("sym_u", "s", "passed", check_sym_u(tensor_s<double>(1), grid.u, cfg.tol));
  bundle.add("sym_u", "asymmetric", "failed", check_sym_u(asym, grid.u, cfg.tol));

  bundle.add("C1", d.label, "passed", check_C1(d.at(2), d.at(1), grid).report);
  bundle.add("C1", s.label, "precondition_failed", check_C1(s.at(2), s.at(1), grid).report);
  bundle.add("C1", lm11.label, "failed", check_C1(lm11.at(2), lm11.at(1), grid).report);
  bundle.add("C2", s.label, "passed", check_C2(s, grid, cfg.tol));
  bundle.add("C2", d.label, "failed", check_C2(d, grid, cfg.tol));
  bundle.add("C2", zero.label, "passed", check_C2(zero, grid, cfg.tol));

  ReconstructionOptions options;
  options.tol = cfg.tol;
  options.invariance_trials = cfg.trials;
  options.grid = grid;
  auto attempt = [&](const char* check, const FamilyOracle<double>& fam, const char* expected, auto reconstruct) {
    try {
      auto r = reconstruct(fam, rng, options);
      bundle.add(check, fam.label, expected, r.report, OJson(r.value));
    } catch (const GeometryError& e) {
      if (e.kind() != ErrorKind::PrereqFailed) throw;
      bundle.add_prereq_failure(check, fam.label, expected, e.what());
    }
  };
  auto lambda = [](const auto& f, Rng& r, const auto& o) { return reconstruct_lambda(f, r, o); };
  auto mu = [](const auto& f, Rng& r, const auto& o) { return reconstruct_mu(f, r, o); };
  attempt("reconstruct_lambda", d, "passed", lambda);
  attempt("reconstruct_lambda", zero, "passed", lambda);
  attempt("reconstruct_lambda", s, "prereq_failed", lambda);
  attempt("reconstruct_mu", s, "passed", mu);
  attempt("reconstruct_mu", zero, "passed", mu);
  attempt("reconstruct_mu", d, "prereq_failed", mu);
}

}  // namespace

OJson run_suite(const RunConfig& cfg, bool& all_expected) {
  Bundle bundle(cfg);
  Rng rng(cfg.seed);
  if (cfg.rational) exact_capable_checks<Rational>(cfg, bundle, rng);
  else exact_capable_checks<double>(cfg, bundle, rng);
  float_checks(cfg, bundle, rng);
  return bundle.finish(all_expected);
}

}  // namespace simplexgeo::cli
