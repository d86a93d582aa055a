#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "simplexgeo/simplex.hpp"

namespace simplexgeo {

enum class CheckStatus { passed, failed, precondition_failed, inconclusive };

std::string_view to_string(CheckStatus status);

/// The sample behind a report's largest deviation.
struct Witness {
  std::vector<double> point;
  std::vector<std::vector<double>> tangents;
  std::vector<double> values;
  std::string description;
};

/// Outcome of one mechanized check. `passed` holds exactly when
/// `max_deviation <= tolerance`; a precondition failure sets the deviation to
/// +infinity. `inconclusive` is a pass of a witness search that found nothing.
struct CheckReport {
  std::string name;
  bool passed = true;
  CheckStatus status = CheckStatus::passed;
  double max_deviation = 0;
  double tolerance = 0;
  long trials = 0;
  std::optional<Witness> witness;
  std::vector<std::string> notes;
};

/// {"name","passed","status","max_deviation","tolerance","trials","witness","notes"}.
/// Non-finite deviations serialize as null.
nlohmann::ordered_json to_json(const CheckReport& report);

template <Scalar T>
std::vector<double> to_doubles(std::span<const T> v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const T& x : v) out.push_back(to_double(x));
  return out;
}

/// Accumulates deviations and keeps the worst sample as the witness.
class DeviationTracker {
 public:
  DeviationTracker(std::string name, double tolerance) : name_(std::move(name)), tolerance_(tolerance) {}

  /// `make_witness` is only called when this sample becomes the worst so far.
  template <class MakeWitness>
  void record(double deviation, MakeWitness&& make_witness) {
    ++trials_;
    if (std::isnan(deviation)) deviation = std::numeric_limits<double>::infinity();
    if (!worst_ || deviation > max_deviation_) {
      max_deviation_ = deviation;
      worst_ = make_witness();
    }
  }

  void note(std::string text) { notes_.push_back(std::move(text)); }
  long trials() const { return trials_; }
  double max_deviation() const { return max_deviation_; }

  CheckReport finish() const {
    CheckReport r{name_, max_deviation_ <= tolerance_, CheckStatus::passed, max_deviation_, tolerance_, trials_, {}, notes_};
    if (!r.passed) {
      r.status = CheckStatus::failed;
      r.witness = worst_;
    }
    return r;
  }

  CheckReport precondition_failed(const std::string& why) const {
    CheckReport r{name_, false, CheckStatus::precondition_failed, std::numeric_limits<double>::infinity(),
                  tolerance_, trials_, worst_, notes_};
    r.notes.push_back("precondition failed: " + why);
    return r;
  }

 private:
  std::string name_;
  double tolerance_;
  long trials_ = 0;
  double max_deviation_ = 0;
  std::optional<Witness> worst_;
  std::vector<std::string> notes_;
};

}  // namespace simplexgeo
