#pragma once

#include "hmstab/rational.hpp"
#include "hmstab/split.hpp"
#include "hmstab/weighted_space.hpp"

#include <optional>
#include <variant>
#include <vector>

namespace hmstab {

// Rank and degree data of a T-split vector bundle.
struct SplitBundleData {
    std::vector<std::string> labels;
    std::vector<Int> ranks;
    std::vector<Int> degrees;

    SplitBundleData() = default;
    SplitBundleData(std::vector<std::string> labels_, std::vector<Int> ranks_,
                    std::vector<Int> degrees_);

    DimensionVector rank_vector() const { return DimensionVector(labels, ranks); }
};

Rational kappa_rank(const SplitBundleData& b, const StabilityWeights& w);
Rational chi_rank(const SplitBundleData& b, const StabilityWeights& w);
/// deg_{kappa,chi} = sum_t (kappa_t d_t + chi_t r_t).
Rational kc_degree(const SplitBundleData& b, const StabilityWeights& w);

struct SlopeData {
    Rational chi_rank;
    Rational kc_degree;
    std::optional<Rational> slope;  // absent when the kappa-rank vanishes
};
SlopeData slope_kappa_chi(const SplitBundleData& b, const StabilityWeights& w);

// Weighted flag of sub-bundle data, strictly increasing in kappa-rank.
struct BundleFlag {
    std::vector<SplitBundleData> steps;
    std::vector<Rational> alpha;

    std::size_t length() const { return steps.size(); }
    void validate(const SplitBundleData& ambient, const StabilityWeights& w) const;
};

/// M = sum_j alpha_j (deg_kc(E) rk_k(E_j) - deg_kc(E_j) rk_k(E)).
Rational M_functional(const SplitBundleData& ambient, const BundleFlag& flag,
                      const StabilityWeights& w);

// Nonvanishing data: multi-indices in {1..k+1}^arity naming the tensor factors
// a decoration survives on.
struct SupportSet {
    int arity = 1;
    std::vector<std::vector<int>> indices;

    void validate(std::size_t flagLength) const;
};

/// nu_j(i) = #{entries of the multi-index <= j}.
int nu(const std::vector<int>& index, int j);

/// -min over the support of sum_j alpha_j (a rk_k(E_j) - rk_k(E) nu_j(i)).
Rational mu_support(const SplitBundleData& ambient, const BundleFlag& flag, int arity,
                    const SupportSet& support, const StabilityWeights& w);

inline Rational mu1_support(const SplitBundleData& ambient, const BundleFlag& flag, int a1,
                            const SupportSet& support, const StabilityWeights& w) {
    return mu_support(ambient, flag, a1, support, w);
}
inline Rational mu2_support(const SplitBundleData& ambient, const BundleFlag& flag, int a2,
                            const SupportSet& support, const StabilityWeights& w) {
    return mu_support(ambient, flag, a2, support, w);
}

// Local decoration as an explicit point of an induced weighted fiber space.
// block_of_base[p] is the flag block (1-based) of base position p of the
// kappa-total fiber; the space's `factors` trace induced labels back to them.
struct FiberDecoration {
    WeightedSpace sigma_space;
    SupportPoint point;
    std::vector<int> block_of_base;
};

Rational mu2_fiber(const FiberDecoration& dec);

/// Builds the sigma-space (kappa-total fiber)^{tensor arity} ( x det^{-detTwist})
/// with block weights taken from the flag. Requires integral kappa.
FiberDecoration make_fiber_decoration(const SplitBundleData& ambient, const BundleFlag& flag,
                                      const StabilityWeights& w, int arity, int detTwist,
                                      std::vector<std::size_t> support);

/// Block multi-indices of the supported labels; feeding this to mu2_support
/// reproduces mu2_fiber exactly.
SupportSet support_from_fiber(const FiberDecoration& dec);

struct StabilityParams {
    Rational delta1;
    Rational delta2;
    StabilityWeights weights;
    int a1 = 1;
    int a2 = 1;

    void validate() const;
};

// One tested flag together with its decoration shadows.
struct TumpCase {
    BundleFlag flag;
    SupportSet phi;                                 // arity a1
    std::variant<SupportSet, FiberDecoration> dec;  // arity a2 or fiber point
};

Rational mu2_of(const SplitBundleData& ambient, const TumpCase& c, int a2,
                const StabilityWeights& w);

enum class Verdict { Unstable, StrictlySemistable, NoViolationFound };
const char* verdict_name(Verdict v);

// Family verdict is relative to the supplied flags: a violation witness or
// the absence of one in this family, never a claim about all flags.
struct FamilyReport {
    Verdict verdict = Verdict::NoViolationFound;
    std::optional<std::size_t> witness;
    std::vector<std::size_t> critical;  // flags with functional exactly zero
    std::vector<Rational> values;
};

FamilyReport classify_values(const std::vector<Rational>& values);

Rational stability_value(const SplitBundleData& ambient, const TumpCase& c,
                         const StabilityParams& params);
FamilyReport stability_family(const SplitBundleData& ambient, const std::vector<TumpCase>& cases,
                              const StabilityParams& params);

// mu1 >= 0, and when mu1 = 0 the residual inequality M + delta2 mu2 (>=) 0.
FamilyReport asymptotic_family(const SplitBundleData& ambient, const std::vector<TumpCase>& cases,
                               const Rational& delta2, const StabilityWeights& w, int a1, int a2);

// h^0 bookkeeping, one value per label for the ambient and every flag step.
struct H0Data {
    std::vector<Int> ambient_h0;
    std::vector<std::vector<Int>> step_h0;

    void validate(const SplitBundleData& ambient, const BundleFlag& flag) const;
};

Rational h0_kc(const std::vector<Int>& h0, const SplitBundleData& b, const StabilityWeights& w);

/// M^s = sum_j alpha_j (h0_kc(E) rk_k(E_j) - h0_kc(E_j) rk_k(E)).
Rational Ms_functional(const SplitBundleData& ambient, const BundleFlag& flag,
                       const StabilityWeights& w, const H0Data& h0);

// Gieseker-space weight data for a flag of the section space Y.
struct GiesInput {
    std::vector<Rational> kdimY;  // dim_kappa(Y_j), strictly increasing
    std::vector<Rational> alpha;
    Rational pn;                             // dim_kappa(Y)
    std::vector<Int> ranks;                  // rk(E^t)
    std::vector<std::vector<Int>> subRanks;  // rk(F^t_j) per label t, per step j
    int a1 = 1;
    int a2 = 1;
    SupportSet sup1;
    SupportSet sup2;
};

struct GiesWeights {
    std::vector<Rational> mu0;  // per label
    Rational mu1;
    Rational mu2;
};

GiesWeights gies_weights(const GiesInput& in);

/// Bounds of the mu2 Gieseker weight:
/// -a2 sum_j alpha_j dim_k(Y_j) <= mu2 <= a2 sum_j alpha_j (p(n) - dim_k(Y_j)).
std::pair<Rational, Rational> gies_mu2_bounds(const GiesInput& in);

struct LinearizationResult {
    std::vector<Rational> eta;  // per label
    Rational theta1;
    Rational theta2;
    Integer minimal_z;  // smallest z making every output a positive integer
};

class LinearizationInfeasible : public Error {
  public:
    using Error::Error;
};

/// eta_t = z (kappa_t (p(n) + <r,chi> - a1 d1 - a2 d2) - r chi_t),
/// theta_m = z r delta_m. Throws LinearizationInfeasible when no z works.
LinearizationResult linearization_params(const Integer& z, const StabilityWeights& w,
                                         const Rational& pn, const Rational& r,
                                         const Rational& rChiPairing, int a1, int a2,
                                         const Rational& delta1, const Rational& delta2);

struct DeformationResult {
    std::vector<SplitBundleData> graded;  // successive flag differences, k+1 pieces
    std::size_t i0 = 1;                   // minimal induced level carrying phi
    SupportSet deformed_phi;
    std::size_t j0 = 1;  // minimal induced level carrying s
    FiberDecoration deformed_dec;
};

DeformationResult admissible_deformation(const SplitBundleData& ambient, const BundleFlag& flag,
                                         int a1, const SupportSet& phi, const FiberDecoration& dec,
                                         const StabilityWeights& w);

struct Wall {
    Rational delta1;
    std::vector<std::size_t> witnesses;
};

/// Roots in delta1 of M + delta1 mu1 + delta2 mu2 per case with mu1 != 0,
/// restricted to [lo, hi], sorted and deduplicated.
std::vector<Wall> delta_wall_scan(const SplitBundleData& ambient,
                                  const std::vector<TumpCase>& cases, const Rational& delta2,
                                  const StabilityWeights& w, int a1, int a2, const Rational& lo,
                                  const Rational& hi);

// Direct sums of line bundles with kappa = 1, chi = 0: the one decidable
// class, where sub-line-bundle degrees are bounded by the summand degrees.
struct ToyHnResult {
    std::vector<Int> slopes;  // distinct degrees, descending
    Int mu_max = 0;
    Int mu_min = 0;
};

ToyHnResult toy_hn(const std::vector<std::vector<Int>>& degreesPerLabel);

}  // namespace hmstab
