#pragma once

#include "hmstab/rational.hpp"
#include "hmstab/subspace.hpp"
#include "hmstab/tump.hpp"

#include <optional>
#include <vector>

namespace hmstab {
namespace level {

enum class Group { SL, SOOdd, Sp, SOEven };

const char* group_name(Group g);
BilinearFormSpec group_form(Group g, int n);
/// Number of theta-indexed factors: n-1 (SL), r (SO-odd, Sp), r-2 plus the
/// two half-spin factors (SO-even).
int theta_count(Group g, int n);

// Boundary-stratum data of a point of the compactification: the descending
// coisotropic flag W_1 > ... > W_k with dim W_j = n - r_j, plus the SO(2r)
// extras (subset of {+,-} and the maximal isotropic spaces W_+/W_-).
struct LevelFlag {
    Group group = Group::SL;
    int n = 0;
    std::vector<int> r_seq;
    std::vector<RationalSubspace> W;
    bool has_plus = false;
    bool has_minus = false;
    std::optional<RationalSubspace> W_plus;
    std::optional<RationalSubspace> W_minus;

    std::size_t length() const { return W.size(); }
    void validate() const;
};

struct ThetaWeights {
    std::vector<Int> theta;        // theta_1.. (numeric factors)
    Int theta_plus = 0;            // SO(2r) only
    Int theta_minus = 0;

    void validate(Group g, int n) const;
};

struct IndexHelpers {
    int j_minus = 0;
    int i_minus = 0;
    int j_plus = 0;
    int i_plus = 0;
};

/// j_-(i) = max{j >= 0 | r_j < i}, j^+(i) = min{j | i <= r_j}; r_0 = 0 and the
/// appended top index follows the group convention (n for SL, n - r_k for the
/// form kinds, where the flag continues into W_k-perp).
IndexHelpers index_helpers(int i, const std::vector<int>& rSeq, int n, bool formKind);

/// c_i(U, W_.) = min{ dim(U / U cap W_{j^+}), dim(U / U cap W_{j_-}) + i - i_- },
/// with W_0 the ambient and W_{k+1} = 0 (SL) or W_k-perp (forms).
int c_value(const RationalSubspace& u, const LevelFlag& flag, int i);

/// c'_i(U, W_.) = c_i(U, W_.) + c_i(U-perp, W_.) - i.
int c_prime(const RationalSubspace& u, const LevelFlag& flag, int i);

enum class ExtensionVariant { D, DPlus, DMinus };

/// Extensions W_1 > ... > W_k > W with W maximal isotropic, drawn from the
/// coordinate maximal isotropics of a standard basis adapted to the flag (and
/// to W_-/W_+ where the variant constraints involve them), deduplicated.
std::vector<RationalSubspace> enumerate_isotropic_extensions(const LevelFlag& flag,
                                                             ExtensionVariant variant);

/// c_i against the extension W_1 > ... > W_k > W (r-sequence extended by r).
int c_value_extended(const RationalSubspace& u, const LevelFlag& flag,
                     const RationalSubspace& extension, int i);
int c_prime_extended(const RationalSubspace& u, const LevelFlag& flag,
                     const RationalSubspace& extension, int i);

/// max over the variant's extensions of c'_i(U, extended flag).
int c_prime_max(const RationalSubspace& u, const LevelFlag& flag, int i,
                ExtensionVariant variant);
/// Same, over a precomputed extension list.
int c_prime_max_over(const RationalSubspace& u, const LevelFlag& flag, int i,
                     const std::vector<RationalSubspace>& extensions);

/// Type of a maximal isotropic subspace of the even orthogonal space:
/// (-1)^(dim(U cap U0) - r) against the reference U0 = span(e_1..e_r).
int isotropic_type(const RationalSubspace& u, const BilinearFormSpec& form);

// One-parameter-subgroup test flag: for the form groups these are the
// isotropic members V_1 < ... < V_s of the self-mirrored flag, with the
// mirrored weights folded into alpha.
struct LambdaFlag {
    std::vector<RationalSubspace> V;
    std::vector<Rational> alpha;

    void validate(const LevelFlag& flag) const;
};

/// The group's closed weight formula, summed over flag steps and theta factors.
Rational mu_level_closed(const LambdaFlag& lambda, const LevelFlag& flag,
                         const ThetaWeights& theta);

struct SubBundleData {
    Int degree = 0;
    RationalSubspace fiber;  // F at the marked point; rank = fiber dimension
};

struct SlackEntry {
    Rational slack;  // RHS - LHS of the group inequality
    Rational lhs;
    Rational rhs;
};

/// Per sub-bundle: deg(F) n <= delta sum theta_i (c_i n - i rk F) for SL, and
/// the 2 deg(F) <= delta (theta-weighted c') variants for the form groups.
/// SO/Sp test objects must be isotropic.
std::vector<SlackEntry> level_slacks(const std::vector<SubBundleData>& subs,
                                     const LevelFlag& flag, const ThetaWeights& theta,
                                     const Rational& delta);

FamilyReport level_stability_check(const std::vector<SubBundleData>& subs, const LevelFlag& flag,
                                   const ThetaWeights& theta, const Rational& delta);

}  // namespace level
}  // namespace hmstab
