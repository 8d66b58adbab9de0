#pragma once

#include "hmstab/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hmstab {

// Dimension data of a T-split vector space: one nonnegative integer per label.
struct DimensionVector {
    std::vector<std::string> labels;
    std::vector<Int> dims;

    DimensionVector() = default;
    DimensionVector(std::vector<std::string> labels_, std::vector<Int> dims_);

    std::size_t size() const { return labels.size(); }
    Int total() const;
    bool same_labels(const DimensionVector& other) const { return labels == other.labels; }
    bool leq(const DimensionVector& other) const;  // componentwise <=
    bool operator==(const DimensionVector& other) const {
        return labels == other.labels && dims == other.dims;
    }
};

// Per-label stability weights: kappa_t > 0, chi_t arbitrary.
struct StabilityWeights {
    std::vector<std::string> labels;
    std::vector<Rational> kappa;
    std::vector<Rational> chi;

    StabilityWeights() = default;
    StabilityWeights(std::vector<std::string> labels_, std::vector<Rational> kappa_,
                     std::vector<Rational> chi_);

    static StabilityWeights ones(const std::vector<std::string>& labels);
};

/// dim_kappa = sum_t kappa_t * d_t.
Rational kappa_dimension(const DimensionVector& d, const StabilityWeights& w);

/// chi-weighted total, sum_t chi_t * d_t.
Rational chi_dimension(const DimensionVector& d, const StabilityWeights& w);

// Weighted flag 0 < V_1 < ... < V_k < V with positive weights alpha_j.
// Steps are strictly increasing componentwise-<= sub-dimension data; the
// strictness is measured in kappa-total. k = 0 is legal.
struct WeightedFlagSpec {
    DimensionVector ambient;
    std::vector<DimensionVector> steps;
    std::vector<Rational> alpha;

    WeightedFlagSpec() = default;
    WeightedFlagSpec(DimensionVector ambient_, std::vector<DimensionVector> steps_,
                     std::vector<Rational> alpha_, const StabilityWeights& w);

    std::size_t length() const { return steps.size(); }
    bool operator==(const WeightedFlagSpec& other) const {
        return ambient == other.ambient && steps == other.steps && alpha == other.alpha;
    }
};

// Eigen-weight form of a one-parameter subgroup of SL^kappa_T(V): strictly
// increasing rational weights with T-split eigenspace dimensions.
struct OneParamBlock {
    Rational gamma;
    DimensionVector eigendims;
};

struct OneParamSubgroup {
    std::vector<OneParamBlock> blocks;
    DimensionVector ambient;
    bool special = false;  // sum_i gamma_i * dim_kappa(V^i) = 0 enforced when set

    void validate(const StabilityWeights& w) const;
};

/// gamma_i = sum_{j=1..k} alpha_j dim_kappa(V_j) - sum_{j=i..k} alpha_j dim_kappa(V),
/// for i = 1..k+1. Eigenspace blocks are the successive flag differences.
OneParamSubgroup flag_to_one_ps(const WeightedFlagSpec& flag, const StabilityWeights& w);

/// The unscaled block weights gamma_1 < ... < gamma_{k+1} of the flag.
std::vector<Rational> gamma_weights(const WeightedFlagSpec& flag, const StabilityWeights& w);

/// Integer form: m = least common denominator of the gammas, weights m*gamma_i.
struct IntegralWeights {
    Integer scale;  // m
    std::vector<Integer> weights;
};
IntegralWeights integral_weights(const OneParamSubgroup& lam);

/// Inverse dictionary: V_j = sum of the first j eigenspaces,
/// alpha_j = (gamma_{j+1} - gamma_j) / dim_kappa(V).
WeightedFlagSpec one_ps_to_flag(const OneParamSubgroup& lam, const StabilityWeights& w);

}  // namespace hmstab
