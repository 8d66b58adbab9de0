#pragma once

#include "hmstab/rational.hpp"
#include "hmstab/split.hpp"

#include <vector>

namespace hmstab {

// Basis-labelled space with one rational lambda-weight per basis label.
// `factors` records, per label, the positions of the base-space constituents
// the label was induced from (empty for atomic bases); constructions keep it
// consistent so supports can be traced back to block multi-indices.
struct WeightedSpace {
    std::vector<std::string> labels;
    std::vector<Rational> weights;
    std::vector<std::vector<int>> factors;

    WeightedSpace() = default;
    WeightedSpace(std::vector<std::string> labels_, std::vector<Rational> weights_);

    std::size_t dim() const { return labels.size(); }
};

struct SupportPoint {
    enum class Kind { Vector, Form };
    std::vector<std::size_t> support;  // indices into the space's basis
    Kind kind = Kind::Vector;
};

/// Hilbert-Mumford weight of a point or form: -min of the weights over the
/// support. The support must be nonempty and within range.
Rational mu_point(const WeightedSpace& space, const SupportPoint& pt);

// Induced constructions. Labels are canonical (sorted constituents for the
// exterior and symmetric powers), weights add, duals negate.
WeightedSpace tensor(const WeightedSpace& a, const WeightedSpace& b);
WeightedSpace tensor_power(const WeightedSpace& base, int a);
WeightedSpace direct_sum_power(const WeightedSpace& base, int b);
WeightedSpace exterior_power(const WeightedSpace& base, int p);
WeightedSpace symmetric_power(const WeightedSpace& base, int p);
WeightedSpace dual(const WeightedSpace& base);
/// Tensors with (det base)^{-c}: every weight shifts by -c * (sum of all base weights).
WeightedSpace det_twist(const WeightedSpace& base, int c);

/// Block weights gamma_1 < ... < gamma_{k+1} assigned by a flag to any basis
/// placed blockwise; identical to the unscaled one-parameter-subgroup weights.
std::vector<Rational> weights_from_flag(const WeightedFlagSpec& flag, const StabilityWeights& w);

/// Basis e_1..e_N split into blocks of the given sizes, label block h
/// carrying weight blockWeights[h].
WeightedSpace block_weighted_basis(const std::vector<Int>& blockSizes,
                                   const std::vector<Rational>& blockWeights);

}  // namespace hmstab
