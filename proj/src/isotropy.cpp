#include "hmstab/isotropy.hpp"

#include "hmstab/subspace.hpp"

#include <algorithm>
#include <array>
#include <vector>

namespace hmstab {

namespace {

Integer isqrt(const Integer& n) {
    Integer root;
    mpz_sqrt(root.get_mpz_t(), n.get_mpz_t());
    return root;
}

bool is_square(const Integer& n) {
    return sgn(n) >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

/// n = s^2 * f with f squarefree; returns (f, s). Trial division.
std::pair<Integer, Integer> squarefree_part(Integer n) {
    Integer scale = 1;
    if (n == 0) return {0, 1};
    Integer sign = sgn(n) < 0 ? -1 : 1;
    n = abs(n);
    for (Integer p = 2; p * p <= n; ++p) {
        while (n % (p * p) == 0) {
            n /= p * p;
            scale *= p;
        }
    }
    return {sign * n, scale};
}

std::vector<Integer> prime_factors(Integer n) {
    std::vector<Integer> out;
    n = abs(n);
    for (Integer p = 2; p * p <= n; ++p)
        if (n % p == 0) {
            out.push_back(p);
            while (n % p == 0) n /= p;
        }
    if (n > 1) out.push_back(n);
    return out;
}

/// Square root of a modulo an odd prime p (Tonelli-Shanks), or nullopt.
std::optional<Integer> sqrt_mod_prime(Integer a, const Integer& p) {
    a %= p;
    if (a < 0) a += p;
    if (a == 0) return Integer(0);
    if (p == 2) return a;
    Integer legendre;
    mpz_powm(legendre.get_mpz_t(), a.get_mpz_t(), Integer((p - 1) / 2).get_mpz_t(),
             p.get_mpz_t());
    if (legendre == p - 1) return std::nullopt;
    if (p % 4 == 3) {
        Integer root;
        mpz_powm(root.get_mpz_t(), a.get_mpz_t(), Integer((p + 1) / 4).get_mpz_t(),
                 p.get_mpz_t());
        return root;
    }
    // Tonelli-Shanks
    Integer q = p - 1;
    unsigned long s = 0;
    while (q % 2 == 0) {
        q /= 2;
        ++s;
    }
    Integer z = 2;
    while (true) {
        Integer ls;
        mpz_powm(ls.get_mpz_t(), z.get_mpz_t(), Integer((p - 1) / 2).get_mpz_t(), p.get_mpz_t());
        if (ls == p - 1) break;
        ++z;
    }
    Integer m(static_cast<long>(s));
    Integer c, t, r;
    mpz_powm(c.get_mpz_t(), z.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
    mpz_powm(t.get_mpz_t(), a.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
    mpz_powm(r.get_mpz_t(), a.get_mpz_t(), Integer((q + 1) / 2).get_mpz_t(), p.get_mpz_t());
    while (t != 1) {
        Integer tt = t;
        long i = 0;
        while (tt != 1) {
            tt = tt * tt % p;
            ++i;
            if (Integer(i) == m) return std::nullopt;
        }
        Integer b = c;
        for (Integer e = 0; e < m - i - 1; ++e) b = b * b % p;
        m = i;
        c = b * b % p;
        t = t * c % p;
        r = r * b % p;
    }
    return r;
}

/// t with t^2 = a mod n for squarefree n via CRT, or nullopt.
std::optional<Integer> sqrt_mod_squarefree(const Integer& a, const Integer& n) {
    if (n == 1) return Integer(0);
    Integer result = 0, modulus = 1;
    for (const Integer& p : prime_factors(n)) {
        std::optional<Integer> rp = sqrt_mod_prime(a, p);
        if (!rp) return std::nullopt;
        // CRT combine result (mod modulus) with rp (mod p)
        Integer inv;
        if (mpz_invert(inv.get_mpz_t(), modulus.get_mpz_t(), p.get_mpz_t()) == 0)
            return std::nullopt;  // coprime by squarefreeness
        Integer diff = (*rp - result) % p;
        if (diff < 0) diff += p;
        result += modulus * ((diff * inv) % p);
        modulus *= p;
        result %= modulus;
    }
    return result;
}

}  // namespace

std::optional<std::array<Integer, 3>> solve_lagrange(const Integer& A0, const Integer& B0) {
    // X^2 = A y^2 + B z^2, descent on |A| >= |B| after square-stripping
    auto [A, sa] = squarefree_part(A0);
    auto [B, sb] = squarefree_part(B0);
    if (A == 0 || B == 0) throw Error("lagrange solver needs nonzero coefficients");

    std::array<Integer, 3> sol;
    bool found = false;
    if (is_square(A)) {
        sol = {isqrt(A), 1, 0};
        found = true;
    } else if (is_square(B)) {
        sol = {isqrt(B), 0, 1};
        found = true;
    } else if (A < 0 && B < 0) {
        return std::nullopt;
    } else {
        const bool swapped = abs(A) < abs(B);
        const Integer big = swapped ? B : A;
        const Integer small = swapped ? A : B;
        // t^2 = small (mod |big|)
        std::optional<Integer> t = sqrt_mod_squarefree(small, abs(big));
        if (!t) return std::nullopt;
        if (*t > abs(big) / 2) *t = abs(big) - *t;
        const Integer raw = (*t * *t - small) / big;  // t^2 - small = big * raw
        if (raw == 0) {
            // t^2 = small exactly: small is a square, handled above; defensive
            return std::nullopt;
        }
        auto sub = solve_lagrange(raw, small);
        if (!sub) return std::nullopt;
        // (t^2 - small)(X1^2 - small z1^2) propagates the norm form:
        // X = t X1 + small z1, z = X1 + t z1, y = raw_stripped * m * y1
        const auto [rawSf, rawScale] = squarefree_part(raw);
        (void)rawSf;
        const Integer X1 = (*sub)[0], y1 = (*sub)[1], z1 = (*sub)[2];
        Integer X = *t * X1 + small * z1;
        Integer z = X1 + *t * z1;
        Integer y = raw * rawScale * y1 / rawScale;  // big * y^2 term: see below
        // From (t^2 - small)(X1^2 - small z1^2) = big * raw * raw * y1^2 ... re-derive:
        // X^2 - small z^2 = (t^2 - small)(X1^2 - small z1^2) = big*raw * (raw * y1^2)
        // and raw * y1^2 must combine into big (y')^2: raw = rawSf * rawScale^2,
        // X1^2 - small z1^2 = raw... no: sub solves X1^2 = raw y1^2 + small z1^2,
        // so X1^2 - small z1^2 = raw y1^2, giving
        // X^2 - small z^2 = big * raw^2 * y1^2, i.e. X^2 = big (raw y1)^2 + small z^2.
        y = raw * y1;
        if (swapped) sol = {X, z, y};
        else sol = {X, y, z};
        found = true;
    }
    if (!found) return std::nullopt;
    // undo the square stripping: A0 y'^2 = A (sa y')^2 ... A0 = A sa^2:
    // X^2 = A0 y0^2 + B0 z0^2 with y0 = y / sa, z0 = z / sb; clear denominators
    Integer X = sol[0] * sa * sb;
    Integer y = sol[1] * sb;
    Integer z = sol[2] * sa;
    if (X == 0 && y == 0 && z == 0) return std::nullopt;
    // sanity
    if (X * X != A0 * y * y + B0 * z * z) throw Error("lagrange lift failed");
    Integer g = gcd(gcd(abs(X), abs(y)), abs(z));
    if (g > 1) {
        X /= g;
        y /= g;
        z /= g;
    }
    return std::array<Integer, 3>{X, y, z};
}

std::optional<std::array<Rational, 3>> solve_ternary(const Rational& a, const Rational& b,
                                                     const Rational& c) {
    if (a == 0 || b == 0 || c == 0) throw Error("ternary solver needs nonzero coefficients");
    // clear denominators to integers
    std::vector<Rational> coeffs = {a, b, c};
    Integer lcm = common_denominator(coeffs);
    auto to_int = [&](const Rational& v) {
        Rational scaled = v * Rational(lcm);
        if (scaled.get_den() != 1) throw Error("denominator clearing failed");
        return Integer(scaled.get_num());
    };
    const Integer ia = to_int(a), ib = to_int(b), ic = to_int(c);
    // a x^2 + b y^2 + c z^2 = 0  <=>  (ia x)^2 = (-ia ib) y^2 + (-ia ic) z^2
    auto sol = solve_lagrange(-ia * ib, -ia * ic);
    if (!sol) return std::nullopt;
    const Rational x = Rational((*sol)[0]) / Rational(ia);
    const Rational y = Rational((*sol)[1]);
    const Rational z = Rational((*sol)[2]);
    if (x == 0 && y == 0 && z == 0) return std::nullopt;
    if (a * x * x + b * y * y + c * z * z != 0) throw Error("ternary lift failed");
    return std::array<Rational, 3>{x, y, z};
}

std::optional<RatVec> find_isotropic_coordinates(const RatMat& gram) {
    const int m = static_cast<int>(gram.rows());
    if (gram.cols() != m) throw Error("gram matrix must be square");
    if (m == 0) return std::nullopt;
    auto value = [&](const RatVec& x) { return Rational((x.transpose() * gram * x)(0, 0)); };
    auto pairing = [&](const RatVec& x, const RatVec& y) {
        return Rational((x.transpose() * gram * y)(0, 0));
    };

    // symmetric diagonalization with isotropic shortcuts
    std::vector<RatVec> basis;
    for (int i = 0; i < m; ++i) {
        RatVec e = RatVec::Zero(m);
        e(i) = 1;
        basis.push_back(e);
    }
    std::vector<RatVec> diagVecs;
    std::vector<Rational> diag;
    std::vector<RatVec> work = basis;
    while (!work.empty()) {
        // prefer an anisotropic pivot; a nonzero isotropic vector wins outright
        int pivot = -1;
        for (std::size_t i = 0; i < work.size(); ++i) {
            if (value(work[i]) != 0) {
                pivot = static_cast<int>(i);
                break;
            }
        }
        if (pivot < 0) {
            // all basis vectors isotropic; any nonzero one does (gram may be
            // degenerate on this block, the vector is still isotropic)
            return work[0];
        }
        // check the isotropic shortcut first
        for (const auto& v : work)
            if (value(v) == 0) return v;
        const RatVec p = work[pivot];
        const Rational pv = value(p);
        diagVecs.push_back(p);
        diag.push_back(pv);
        std::vector<RatVec> rest;
        for (std::size_t i = 0; i < work.size(); ++i) {
            if (static_cast<int>(i) == pivot) continue;
            RatVec z = work[i] - (pairing(p, work[i]) / pv) * p;
            bool zero = true;
            for (int c = 0; c < m && zero; ++c) zero = z(c) == 0;
            if (!zero) rest.push_back(z);
        }
        // keep an independent subset
        if (!rest.empty()) {
            RatMat rows(static_cast<int>(rest.size()), m);
            for (std::size_t i = 0; i < rest.size(); ++i) rows.row(static_cast<int>(i)) = rest[i];
            const int rank = rref_in_place(rows);
            rest.clear();
            for (int i = 0; i < rank; ++i) rest.push_back(rows.row(i).transpose());
        }
        work = std::move(rest);
    }

    const int d = static_cast<int>(diag.size());
    // rescale each diagonal vector so its value is the squarefree integer
    // kernel of the original diagonal entry
    std::vector<Integer> sf(d);
    for (int i = 0; i < d; ++i) {
        auto [f, s] = squarefree_part(diag[i].get_num() * diag[i].get_den());
        (void)s;
        sf[i] = f;
        const Rational ratio = diag[i] / Rational(f);  // a square by construction
        const Integer rn = ratio.get_num(), rd = ratio.get_den();
        if (!is_square(rn) || !is_square(rd)) throw Error("squarefree normalization failed");
        diagVecs[i] = RatVec((Rational(isqrt(rd)) / Rational(isqrt(rn))) * diagVecs[i]);
    }

    // pairs: sf_i x^2 + sf_j y^2 = 0 solvable iff -sf_i sf_j is a square
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            const Integer target = -sf[i] * sf[j];
            if (!is_square(target)) continue;
            // x = sf_j * t ... solve sf_i x^2 = -sf_j y^2: x/y = sqrt(-sf_j/sf_i)
            // -sf_j/sf_i = (-sf_i sf_j)/sf_i^2
            const Integer root = isqrt(target);
            // x = root, y = sf_i  gives sf_i root^2 + sf_j sf_i^2 = sf_i(root^2 + sf_j sf_i) = 0
            RatVec v = Rational(root) * diagVecs[i] + Rational(abs(sf[i])) * diagVecs[j];
            if (value(v) == 0) {
                bool nz = false;
                for (int c = 0; c < m && !nz; ++c) nz = v(c) != 0;
                if (nz) return v;
            }
            // sign variant
            v = Rational(root) * diagVecs[i] - Rational(abs(sf[i])) * diagVecs[j];
            if (value(v) == 0) return v;
        }

    // ternary subforms via Lagrange descent
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j)
            for (int k = j + 1; k < d; ++k) {
                auto sol = solve_ternary(Rational(sf[i]), Rational(sf[j]), Rational(sf[k]));
                if (!sol) continue;
                RatVec v = (*sol)[0] * diagVecs[i] + (*sol)[1] * diagVecs[j] +
                           (*sol)[2] * diagVecs[k];
                bool nz = false;
                for (int c = 0; c < m && !nz; ++c) nz = v(c) != 0;
                if (nz && value(v) == 0) return v;
            }

    // binary + binary with a small common represented value
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j)
            for (int k = 0; k < d; ++k)
                for (int l = k + 1; l < d; ++l) {
                    if (k == i || k == j || l == i || l == j) continue;
                    for (long cAbs = 1; cAbs <= 40; ++cAbs) {
                        for (int sign : {1, -1}) {
                            const Rational c(sign * cAbs);
                            auto left = solve_ternary(Rational(sf[i]), Rational(sf[j]), -c);
                            if (!left || (*left)[2] == 0) continue;
                            auto right = solve_ternary(Rational(sf[k]), Rational(sf[l]), c);
                            if (!right || (*right)[2] == 0) continue;
                            // scale both to z = 1 and add
                            RatVec v = ((*left)[0] / (*left)[2]) * diagVecs[i] +
                                       ((*left)[1] / (*left)[2]) * diagVecs[j] +
                                       ((*right)[0] / (*right)[2]) * diagVecs[k] +
                                       ((*right)[1] / (*right)[2]) * diagVecs[l];
                            bool nz = false;
                            for (int cc = 0; cc < m && !nz; ++cc) nz = v(cc) != 0;
                            if (nz && value(v) == 0) return v;
                        }
                    }
                }

    return std::nullopt;
}

}  // namespace hmstab
