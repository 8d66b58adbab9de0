#pragma once

#include "hmstab/rational.hpp"
#include "hmstab/split.hpp"
#include "hmstab/tump.hpp"
#include "hmstab/weighted_space.hpp"

#include <vector>

namespace hmstab {

// Character of SL_T(W), an integer tuple modulo the diagonal. Stored with the
// minimum entry subtracted so equality is plain comparison.
struct CharacterVector {
    std::vector<Int> chi;

    CharacterVector() = default;
    explicit CharacterVector(std::vector<Int> entries);

    bool operator==(const CharacterVector& other) const { return chi == other.chi; }
};

/// <chi, lambda> = sum_t chi_t sum_j alpha_j (dim(W_j) dim(W^t) - dim(W) dim(W^t_j)),
/// plain dimension totals throughout.
Rational character_pairing(const CharacterVector& chi, const WeightedFlagSpec& flag);

// One tested reduction-induced flag. The tag records geometric input: the
// caller asserts the flag arises from a weighted reduction (mu1 = 0 there).
struct PrincipalCase {
    BundleFlag flag;
    std::variant<SupportSet, FiberDecoration> dec;
    bool reduction_induced = true;
};

/// M_{1,chi} + delta * mu2; kappa is forced to all ones.
Rational principal_stability_value(const SplitBundleData& ambient, const PrincipalCase& c,
                                   const Rational& delta, const CharacterVector& chi, int a2);
FamilyReport principal_stability_family(const SplitBundleData& ambient,
                                        const std::vector<PrincipalCase>& cases,
                                        const Rational& delta, const CharacterVector& chi, int a2);

// Parabolic data at the marked point: weights beta_i and, per tested object,
// the kappa-dimensions of the intersections U_i with its fiber.
struct ParabolicStructure {
    std::vector<Rational> beta;
    std::vector<Rational> dimU;  // dim_kappa(U_i), strictly increasing

    void validate() const;
    /// True when sum beta_i < 1, the relaxed moduli existence bound.
    bool within_existence_bound() const;
};

/// pardeg = deg_{kappa,chi}(F) + sum_i beta_i dim_kappa(U_i cap F).
Rational pardeg(const SplitBundleData& f, const ParabolicStructure& par,
                const std::vector<Rational>& intersections, const StabilityWeights& w);

struct ParabolicFlagCase {
    BundleFlag flag;
    std::vector<std::vector<Rational>> step_intersections;  // per step, per parabolic level
};

/// sum_j alpha_j (pardeg(E) rk_k(E_j) - pardeg(E_j) rk_k(E)) per flag, with
/// pardeg(E) using the full intersections dim_kappa(U_i).
Rational parabolic_value(const SplitBundleData& ambient, const ParabolicFlagCase& c,
                         const ParabolicStructure& par, const StabilityWeights& w);
FamilyReport parabolic_check(const SplitBundleData& ambient,
                             const std::vector<ParabolicFlagCase>& cases,
                             const ParabolicStructure& par, const StabilityWeights& w);

struct ParabolicRep {
    WeightedSpace space;
    Integer z;                   // least common denominator of the betas
    Rational homogeneity_degree;  // z * sum_i beta_i (r - r_i)
};

/// The induced representation space tensor_i (Lambda^{r-r_i} W_tot)^{z beta_i}
/// over a weighted basis of W_tot.
ParabolicRep parabolic_rep_weights(const WeightedSpace& wTot, const std::vector<Int>& rSeq,
                                   const std::vector<Rational>& beta);

}  // namespace hmstab
