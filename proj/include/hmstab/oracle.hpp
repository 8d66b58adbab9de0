#pragma once

#include "hmstab/level.hpp"
#include "hmstab/rational.hpp"
#include "hmstab/rng.hpp"
#include "hmstab/subspace.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace hmstab {
namespace oracle {

// Sorted i-element subsets of {0..n-1} in lexicographic order; the wedge
// basis ordering used everywhere below.
std::vector<std::vector<int>> sorted_subsets(int n, int i);

/// Exterior power of a square matrix: entry (S,T) is the minor det M[S,T].
RatMat wedge_matrix(const RatMat& m, int i);

/// det, exact.
Rational determinant(const RatMat& m);

// Explicit representation with a lambda-weight-homogeneous basis inside an
// enveloping wedge power. Columns of `basis` are the basis vectors.
struct ExplicitRep {
    int wedge_dim = 0;
    RatMat basis;
    std::vector<Rational> weight;
    std::vector<std::string> label;

    int dim() const { return static_cast<int>(basis.cols()); }
};

/// Lambda^i of the standard n-space; weight of a subset label is the sum of
/// the entry weights.
ExplicitRep build_exterior_rep(int n, int i, const std::vector<Rational>& lambdaWeights);

/// Contraction Lambda^i V -> Lambda^{i-2} V with the symplectic form.
RatMat sp_contraction(int r, int i);

/// Kernel of the contraction, the fundamental Sp(2r) representation; the
/// basis is weight-homogeneous for diagonal lambdas.
ExplicitRep build_sp_fundamental(int r, int i, const std::vector<Rational>& lambdaWeights);

/// The involution tau on Lambda^r of the even orthogonal space.
RatMat so_even_tau(int r);

/// +1/-1 eigenspaces of tau; the "+" half is the one containing the Pluecker
/// vector of span(e_1..e_r).
std::pair<ExplicitRep, ExplicitRep> build_so_even_halves(int r,
                                                         const std::vector<Rational>& lambdaWeights);

// Block data for a completed homomorphism: adapted bases for both flags plus
// the per-block isomorphisms.
//   U columns:  W_j = span of columns r_j..n-1 (descending tails)
//   U' columns: W'_j = span of columns 0..r_j-1 (ascending heads)
struct HomChain {
    int n = 0;
    std::vector<int> r_seq;    // strictly increasing, the chain's co-dimension marks
    RatMat U;
    RatMat Uprime;
    std::vector<RatMat> blocks;  // square maps per chain block, k+1 of them

    int block_count() const { return static_cast<int>(r_seq.size()) + 1; }
    int block_size(int j) const;  // 1-based block index
    void validate() const;
};

/// Profile homomorphism on Lambda^i: project (in the U-basis) onto wedge
/// subsets with exactly profile[j] entries in block j, then apply the
/// block-diagonal map into the U'-basis.
RatMat profile_hom(const HomChain& chain, int i, const std::vector<int>& profile);

/// Standard completed-homomorphism component: full determinants through block
/// j_-(i), the remaining i - i_- factors from block j^+(i).
RatMat completed_hom_component(const HomChain& chain, int i);

enum class ActionSide { Domain, Codomain };
enum class MuSign { NegMin, PosMax };
struct MuConvention {
    ActionSide side = ActionSide::Domain;
    MuSign sign = MuSign::NegMin;
};
/// The shipped convention; the calibration battery pins it.
constexpr MuConvention kShippedConvention{ActionSide::Domain, MuSign::NegMin};

std::string convention_name(MuConvention conv);
std::vector<MuConvention> all_conventions();

/// Direct Hilbert-Mumford weight of a nonzero map between explicit reps:
/// restrict h to the domain basis, check the image stays inside the codomain
/// rep, and take -min (or +max) of the supported weights on the chosen side.
Rational mu_direct(const ExplicitRep& domain, const ExplicitRep& codomain, const RatMat& h,
                   MuConvention conv = kShippedConvention);

// Per-trial reproduction record for failures.
struct TrialFailure {
    int trial = 0;
    std::string detail;
};

struct VerifyReport {
    level::Group group = level::Group::SL;
    int size = 0;
    int trials = 0;
    std::uint64_t seed = 0;
    MuConvention convention;
    int passed = 0;
    std::vector<TrialFailure> failures;

    bool all_pass() const { return failures.empty(); }
};

/// Seeded randomized comparison of the closed weight formulas against direct
/// weight enumeration on completed homomorphisms. size = n for SL, r
/// otherwise. Trials derive their randomness from (seed, index), so the
/// report is identical for any positive `jobs`.
VerifyReport verify_lemma(level::Group g, int size, int trials, std::uint64_t seed,
                          MuConvention conv = kShippedConvention, int jobs = 1);

/// Runs a small battery under every convention and reports which ones pass;
/// used to pin the shipped convention.
std::vector<std::pair<MuConvention, bool>> calibrate_conventions(std::uint64_t seed, int trials);

}  // namespace oracle
}  // namespace hmstab
