#pragma once

#include "hmstab/rational.hpp"

#include <vector>

namespace hmstab {

enum class FormKind { None, SymmetricOdd, SymmetricEven, Symplectic };

const char* form_kind_name(FormKind k);

// Fixed bilinear forms: M_n (anti-diagonal ones) for the symmetric kinds,
// J = [[0, M_r], [-M_r, 0]] for the symplectic one.
struct BilinearFormSpec {
    FormKind kind = FormKind::None;
    int n = 0;

    BilinearFormSpec() = default;
    BilinearFormSpec(FormKind kind_, int n_);

    int witt_rank() const;  // r, with n = 2r or 2r+1
    RatMat matrix() const;
    bool symmetric() const { return kind == FormKind::SymmetricOdd || kind == FormKind::SymmetricEven; }
};

/// In-place reduced row echelon form; returns the rank.
int rref_in_place(RatMat& m);

/// Kernel of m as RREF rows (dim x cols).
RatMat kernel(const RatMat& m);

// Subspace of Q^n in canonical reduced-row-echelon basis, so equality of
// subspaces is equality of matrices. Zero rows are dropped; the 0-subspace is
// a 0 x n matrix.
class RationalSubspace {
  public:
    RationalSubspace() = default;
    /// Canonicalizes the span of the given row vectors.
    RationalSubspace(RatMat rows, int ambient);

    static RationalSubspace zero(int ambient);
    static RationalSubspace full(int ambient);
    /// Span of the listed standard basis vectors (0-based).
    static RationalSubspace coordinate(const std::vector<int>& positions, int ambient);

    int dim() const { return static_cast<int>(rows_.rows()); }
    int ambient() const { return ambient_; }
    const RatMat& rows() const { return rows_; }

    bool contains(const RatVec& v) const;
    bool contains(const RationalSubspace& other) const;
    bool operator==(const RationalSubspace& other) const;
    bool operator<(const RationalSubspace& other) const;  // for dedup ordering

    /// Image under an invertible map (rows mapped through m^T), re-canonicalized.
    RationalSubspace apply(const RatMat& m) const;

  private:
    RatMat rows_;  // RREF, full row rank
    int ambient_ = 0;
};

RationalSubspace intersect(const RationalSubspace& a, const RationalSubspace& b);
RationalSubspace add(const RationalSubspace& a, const RationalSubspace& b);
RationalSubspace perp(const RationalSubspace& u, const BilinearFormSpec& form);
bool is_isotropic(const RationalSubspace& u, const BilinearFormSpec& form);
bool is_coisotropic(const RationalSubspace& u, const BilinearFormSpec& form);

/// b(x, y) = x^T F y for the fixed form matrix.
Rational form_value(const BilinearFormSpec& form, const RatVec& x, const RatVec& y);

/// Basis f_1..f_n (columns) with Gram matrix exactly the fixed form matrix,
/// such that every chain member is the span of a tail f_{d+1}..f_n of it and
/// every listed isotropic space a head-of-pairs span. `chainTails` are the
/// descending coisotropic chain members; `isotropicHead`, when present, is an
/// isotropic space containing all chain perps (adapted into the leading
/// positions). Throws when the data is not rationally congruent to the
/// standard model.
RatMat adapted_standard_basis(const BilinearFormSpec& form,
                              const std::vector<RationalSubspace>& chainTails,
                              const RationalSubspace* isotropicHead = nullptr);

/// Deterministic form-preserving rational matrix (products of symplectic
/// transvections or pairs of reflections) with entries controlled by `spread`.
class Rng;
RatMat random_isometry(const BilinearFormSpec& form, Rng& rng, long spread);

/// Random invertible matrix, entries in [-spread, spread].
RatMat random_invertible(int n, Rng& rng, long spread);

/// Totally nonsingular matrix: every minor is nonzero (Cauchy construction).
RatMat cauchy_matrix(int n, Rng& rng);

}  // namespace hmstab
