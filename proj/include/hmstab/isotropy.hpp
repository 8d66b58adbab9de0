#pragma once

#include "hmstab/rational.hpp"

#include <optional>

namespace hmstab {

/// Nontrivial integer solution of X^2 = A y^2 + B z^2, when one exists.
/// Lagrange descent with modular square roots; A, B nonzero integers.
std::optional<std::array<Integer, 3>> solve_lagrange(const Integer& A, const Integer& B);

/// Nontrivial rational solution of a x^2 + b y^2 + c z^2 = 0 for nonzero
/// rational coefficients, when one exists.
std::optional<std::array<Rational, 3>> solve_ternary(const Rational& a, const Rational& b,
                                                     const Rational& c);

/// Nonzero x with x^T G x = 0 for a symmetric rational Gram matrix, when the
/// layered strategy finds one: diagonalization shortcuts, square pairs,
/// ternary subforms, and binary-pair common values. Forms that are rationally
/// split at these sizes always succeed.
std::optional<RatVec> find_isotropic_coordinates(const RatMat& gram);

}  // namespace hmstab
