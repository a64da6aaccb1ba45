#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "holdout/paperprops.hpp"
#include "holdout/trajectory.hpp"
#include "holdout/verify.hpp"

// JSON wire formats for every report type, all round-trippable. Naturals are
// decimal strings so downstream consumers never truncate past 64 bits.

namespace nlohmann {

template <>
struct adl_serializer<mpz_class> {
  static void to_json(json& j, const mpz_class& n);
  static void from_json(const json& j, mpz_class& n);
};

template <typename T>
struct adl_serializer<std::optional<T>> {
  static void to_json(json& j, const std::optional<T>& value) {
    if (value) {
      j = *value;
    } else {
      j = nullptr;
    }
  }
  static void from_json(const json& j, std::optional<T>& value) {
    if (j.is_null()) {
      value = std::nullopt;
    } else {
      value = j.template get<T>();
    }
  }
};

}  // namespace nlohmann

namespace holdout {

using nlohmann::json;

void to_json(json& j, const ProblemSpec& spec);
void from_json(const json& j, ProblemSpec& spec);

void to_json(json& j, const Limits& limits);
void from_json(const json& j, Limits& limits);

void to_json(json& j, const Classification& c);
void from_json(const json& j, Classification& c);

// {"start","classification","steps","max_value","stopping_time","iterates"?}
void to_json(json& j, const TrajectoryRecord& record);
void from_json(const json& j, TrajectoryRecord& record);

void to_json(json& j, const Anomaly& anomaly);
void from_json(const json& j, Anomaly& anomaly);

void to_json(json& j, const VerificationReport& report);
void from_json(const json& j, VerificationReport& report);

void to_json(json& j, const CycleReport& report);
void from_json(const json& j, CycleReport& report);

void to_json(json& j, const TwoCycleCandidate& candidate);
void from_json(const json& j, TwoCycleCandidate& candidate);

void to_json(json& j, const TwoCycleScan& scan);
void from_json(const json& j, TwoCycleScan& scan);

void to_json(json& j, const PropertyResult& result);
void from_json(const json& j, PropertyResult& result);

void to_json(json& j, const SurveyConfig& config);
void from_json(const json& j, SurveyConfig& config);

void to_json(json& j, const SurveyRow& row);
void from_json(const json& j, SurveyRow& row);

void to_json(json& j, const SurveyReport& report);
void from_json(const json& j, SurveyReport& report);

// One problem per row: name, range, converged, cycles, aborts, status.
// Fields containing separators are quoted per the usual CSV rules.
std::string survey_csv(const SurveyReport& report);

// A report dump with elapsed_seconds and worker_count removed — the stable
// form compared across worker counts.
json stable_report_json(const VerificationReport& report);

}  // namespace holdout
