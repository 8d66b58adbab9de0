#pragma once

#include "hmstab/level.hpp"
#include "hmstab/oracle.hpp"
#include "hmstab/principal.hpp"
#include "hmstab/split.hpp"
#include "hmstab/tump.hpp"

#include <json.hpp>

#include <string>

namespace hmstab {
namespace io {

using json = nlohmann::json;

// Rationals travel as "p/q" strings everywhere, never as floats.
json rational_json(const Rational& value);
Rational rational_from(const json& j, const char* what);
std::vector<Rational> rational_list(const json& j, const char* what);
json rational_list_json(const std::vector<Rational>& values);

StabilityWeights weights_from(const json& j);
DimensionVector dimension_from(const json& j, const std::vector<std::string>& labels);
WeightedFlagSpec flag_spec_from(const json& j, const DimensionVector& ambient,
                                const StabilityWeights& w);
json one_ps_json(const OneParamSubgroup& lam);
OneParamSubgroup one_ps_from(const json& j, const std::vector<std::string>& labels);

SplitBundleData bundle_from(const json& j);
json bundle_json(const SplitBundleData& b);
BundleFlag bundle_flag_from(const json& j, const SplitBundleData& ambient);
SupportSet support_from(const json& j);
TumpCase tump_case_from(const json& j, const SplitBundleData& ambient,
                        const StabilityWeights& w, int a2);
H0Data h0_from(const json& j);
json h0_json(const H0Data& h0);

WeightedSpace weighted_space_from(const json& j);
SupportPoint support_point_from(const json& j, const WeightedSpace& space);

json family_report_json(const FamilyReport& report);

RationalSubspace subspace_from(const json& j, int ambient);
json subspace_json(const RationalSubspace& s);
level::LevelFlag level_flag_from(const json& j, level::Group g);
level::ThetaWeights theta_from(const json& j, level::Group g, int n);
level::LambdaFlag lambda_flag_from(const json& j, const level::LevelFlag& flag);
std::vector<level::SubBundleData> subbundles_from(const json& j, int n);

GiesInput gies_from(const json& j);

json verify_report_json(const oracle::VerifyReport& report);

json parse_file(const std::string& path);

}  // namespace io
}  // namespace hmstab
