#include "hmstab/subspace.hpp"

#include "hmstab/isotropy.hpp"
#include "hmstab/rng.hpp"

#include <algorithm>

namespace hmstab {

const char* form_kind_name(FormKind k) {
    switch (k) {
        case FormKind::None: return "none";
        case FormKind::SymmetricOdd: return "symmetric-odd";
        case FormKind::SymmetricEven: return "symmetric-even";
        case FormKind::Symplectic: return "symplectic";
    }
    return "?";
}

BilinearFormSpec::BilinearFormSpec(FormKind kind_, int n_) : kind(kind_), n(n_) {
    if (n <= 0) throw Error("form needs positive ambient dimension");
    switch (kind) {
        case FormKind::None: break;
        case FormKind::SymmetricOdd:
            if (n % 2 == 0) throw Error("symmetric-odd form needs odd dimension");
            break;
        case FormKind::SymmetricEven:
        case FormKind::Symplectic:
            if (n % 2 != 0) throw Error("this form kind needs even dimension");
            break;
    }
}

int BilinearFormSpec::witt_rank() const { return n / 2; }

RatMat BilinearFormSpec::matrix() const {
    RatMat m = RatMat::Zero(n, n);
    switch (kind) {
        case FormKind::None:
            for (int i = 0; i < n; ++i) m(i, i) = 1;
            break;
        case FormKind::SymmetricOdd:
        case FormKind::SymmetricEven:
            for (int i = 0; i < n; ++i) m(i, n - 1 - i) = 1;
            break;
        case FormKind::Symplectic: {
            const int r = n / 2;
            for (int i = 0; i < r; ++i) {
                m(i, n - 1 - i) = 1;
                m(n - 1 - i, i) = -1;
            }
            break;
        }
    }
    return m;
}

int rref_in_place(RatMat& m) {
    const int rows = static_cast<int>(m.rows());
    const int cols = static_cast<int>(m.cols());
    int rank = 0;
    for (int col = 0; col < cols && rank < rows; ++col) {
        int pivot = -1;
        for (int r = rank; r < rows; ++r)
            if (m(r, col) != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        if (pivot != rank) m.row(pivot).swap(m.row(rank));
        const Rational inv = Rational(1) / m(rank, col);
        for (int c = col; c < cols; ++c) m(rank, c) *= inv;
        for (int r = 0; r < rows; ++r) {
            if (r == rank || m(r, col) == 0) continue;
            const Rational factor = m(r, col);
            for (int c = col; c < cols; ++c) m(r, c) -= factor * m(rank, c);
        }
        ++rank;
    }
    return rank;
}

RatMat kernel(const RatMat& m) {
    const int cols = static_cast<int>(m.cols());
    RatMat red = m;
    const int rank = rref_in_place(red);
    std::vector<int> pivotCol;
    std::vector<bool> isPivot(cols, false);
    for (int r = 0; r < rank; ++r) {
        int c = 0;
        while (c < cols && red(r, c) == 0) ++c;
        pivotCol.push_back(c);
        isPivot[c] = true;
    }
    RatMat basis(cols - rank, cols);
    basis.setZero();
    int row = 0;
    for (int freeC = 0; freeC < cols; ++freeC) {
        if (isPivot[freeC]) continue;
        basis(row, freeC) = 1;
        for (int r = 0; r < rank; ++r) basis(row, pivotCol[r]) = -red(r, freeC);
        ++row;
    }
    rref_in_place(basis);
    return basis;
}

RationalSubspace::RationalSubspace(RatMat rows, int ambient) : ambient_(ambient) {
    if (ambient <= 0) throw Error("subspace needs a positive ambient dimension");
    if (rows.cols() != ambient) throw Error("subspace row width does not match the ambient");
    const int rank = rref_in_place(rows);
    rows_ = rows.topRows(rank);
}

RationalSubspace RationalSubspace::zero(int ambient) {
    RationalSubspace s;
    s.ambient_ = ambient;
    s.rows_ = RatMat(0, ambient);
    return s;
}

RationalSubspace RationalSubspace::full(int ambient) {
    RatMat id = RatMat::Zero(ambient, ambient);
    for (int i = 0; i < ambient; ++i) id(i, i) = 1;
    return RationalSubspace(std::move(id), ambient);
}

RationalSubspace RationalSubspace::coordinate(const std::vector<int>& positions, int ambient) {
    RatMat rows = RatMat::Zero(static_cast<int>(positions.size()), ambient);
    for (std::size_t i = 0; i < positions.size(); ++i) {
        if (positions[i] < 0 || positions[i] >= ambient)
            throw Error("coordinate position out of range");
        rows(static_cast<int>(i), positions[i]) = 1;
    }
    return RationalSubspace(std::move(rows), ambient);
}

bool RationalSubspace::contains(const RatVec& v) const {
    if (v.size() != ambient_) throw Error("vector ambient mismatch");
    RatMat stacked(rows_.rows() + 1, ambient_);
    stacked.topRows(rows_.rows()) = rows_;
    stacked.row(rows_.rows()) = v.transpose();
    return rref_in_place(stacked) == dim();
}

bool RationalSubspace::contains(const RationalSubspace& other) const {
    if (other.ambient_ != ambient_) throw Error("subspace ambient mismatch");
    if (other.dim() > dim()) return false;
    RatMat stacked(rows_.rows() + other.rows_.rows(), ambient_);
    stacked.topRows(rows_.rows()) = rows_;
    stacked.bottomRows(other.rows_.rows()) = other.rows_;
    return rref_in_place(stacked) == dim();
}

bool RationalSubspace::operator==(const RationalSubspace& other) const {
    return ambient_ == other.ambient_ && rows_.rows() == other.rows_.rows() && rows_ == other.rows_;
}

bool RationalSubspace::operator<(const RationalSubspace& other) const {
    if (ambient_ != other.ambient_) return ambient_ < other.ambient_;
    if (rows_.rows() != other.rows_.rows()) return rows_.rows() < other.rows_.rows();
    for (int r = 0; r < rows_.rows(); ++r)
        for (int c = 0; c < rows_.cols(); ++c) {
            const int order = cmp(rows_(r, c), other.rows_(r, c));
            if (order != 0) return order < 0;
        }
    return false;
}

RationalSubspace RationalSubspace::apply(const RatMat& m) const {
    if (m.rows() != ambient_ || m.cols() != ambient_) throw Error("map size mismatch");
    RatMat mapped = rows_ * m.transpose();
    return RationalSubspace(std::move(mapped), ambient_);
}

RationalSubspace intersect(const RationalSubspace& a, const RationalSubspace& b) {
    if (a.ambient() != b.ambient()) throw Error("subspace ambient mismatch");
    const int n = a.ambient();
    // Zassenhaus: rows [A|A] and [B|0]; reduced rows with zero left half carry
    // the intersection in their right half.
    RatMat block(a.dim() + b.dim(), 2 * n);
    block.setZero();
    block.block(0, 0, a.dim(), n) = a.rows();
    block.block(0, n, a.dim(), n) = a.rows();
    block.block(a.dim(), 0, b.dim(), n) = b.rows();
    const int rank = rref_in_place(block);
    std::vector<int> hits;
    for (int r = 0; r < rank; ++r) {
        bool leftZero = true;
        for (int c = 0; c < n && leftZero; ++c) leftZero = block(r, c) == 0;
        if (leftZero) hits.push_back(r);
    }
    RatMat rows(static_cast<int>(hits.size()), n);
    for (std::size_t i = 0; i < hits.size(); ++i)
        rows.row(static_cast<int>(i)) = block.block(hits[i], n, 1, n);
    return RationalSubspace(std::move(rows), n);
}

RationalSubspace add(const RationalSubspace& a, const RationalSubspace& b) {
    if (a.ambient() != b.ambient()) throw Error("subspace ambient mismatch");
    RatMat stacked(a.dim() + b.dim(), a.ambient());
    stacked.topRows(a.dim()) = a.rows();
    stacked.bottomRows(b.dim()) = b.rows();
    return RationalSubspace(std::move(stacked), a.ambient());
}

RationalSubspace perp(const RationalSubspace& u, const BilinearFormSpec& form) {
    if (u.ambient() != form.n) throw Error("subspace ambient does not match the form");
    if (u.dim() == 0) return RationalSubspace::full(form.n);
    RatMat constraints = u.rows() * form.matrix();
    return RationalSubspace(kernel(constraints), form.n);
}

bool is_isotropic(const RationalSubspace& u, const BilinearFormSpec& form) {
    if (u.dim() == 0) return true;
    RatMat gram = u.rows() * form.matrix() * u.rows().transpose();
    for (int i = 0; i < gram.rows(); ++i)
        for (int j = 0; j < gram.cols(); ++j)
            if (gram(i, j) != 0) return false;
    return true;
}

bool is_coisotropic(const RationalSubspace& u, const BilinearFormSpec& form) {
    return u.contains(perp(u, form));
}

Rational form_value(const BilinearFormSpec& form, const RatVec& x, const RatVec& y) {
    if (x.size() != form.n || y.size() != form.n) throw Error("form argument size mismatch");
    return (x.transpose() * form.matrix() * y)(0, 0);
}

namespace {

Rational pair_value(const RatMat& formMatrix, const RatVec& x, const RatVec& y) {
    return (x.transpose() * formMatrix * y)(0, 0);
}

/// Particular solution of rows * x = rhs; throws when inconsistent.
RatVec solve_particular(const RatMat& rows, const RatVec& rhs) {
    const int m = static_cast<int>(rows.rows());
    const int n = static_cast<int>(rows.cols());
    RatMat aug(m, n + 1);
    aug.block(0, 0, m, n) = rows;
    aug.col(n) = rhs;
    const int rank = rref_in_place(aug);
    RatVec x = RatVec::Zero(n);
    for (int r = 0; r < rank; ++r) {
        int c = 0;
        while (c < n + 1 && aug(r, c) == 0) ++c;
        if (c == n) throw Error("inconsistent linear system");
        if (c > n) continue;
        x(c) = aug(r, n);
    }
    return x;
}

}  // namespace

RatMat adapted_standard_basis(const BilinearFormSpec& form,
                              const std::vector<RationalSubspace>& chainTails,
                              const RationalSubspace* isotropicHead) {
    const int n = form.n;
    const RatMat A = form.matrix();
    if (form.kind == FormKind::None) throw Error("adapted basis needs a fixed bilinear form");

    // Nested isotropic chain: the perps of the descending chain, then the head.
    std::vector<RationalSubspace> isoChain;
    RationalSubspace prev = RationalSubspace::zero(n);
    for (const auto& w : chainTails) {
        if (!is_coisotropic(w, form)) throw Error("chain member is not coisotropic");
        RationalSubspace p = perp(w, form);
        if (!(prev.dim() < p.dim()) || !p.contains(prev))
            throw Error("chain perps are not strictly nested");
        isoChain.push_back(p);
        prev = p;
    }
    if (isotropicHead) {
        if (!is_isotropic(*isotropicHead, form)) throw Error("head space is not isotropic");
        if (!isotropicHead->contains(prev) || isotropicHead->dim() <= prev.dim())
            throw Error("head space does not extend the chain perps");
        isoChain.push_back(*isotropicHead);
    }

    // Nested basis u_1..u_q of the isotropic chain.
    std::vector<RatVec> us;
    {
        RatMat acc(0, n);
        for (const auto& level : isoChain) {
            for (int r = 0; r < level.dim(); ++r) {
                RatMat trial(acc.rows() + 1, n);
                trial.topRows(acc.rows()) = acc;
                trial.row(acc.rows()) = level.rows().row(r);
                RatMat probe = trial;
                if (rref_in_place(probe) == static_cast<int>(trial.rows())) {
                    us.push_back(level.rows().row(r).transpose());
                    acc = trial;
                }
            }
            if (static_cast<int>(us.size()) != level.dim())
                throw Error("failed to extend the isotropic chain basis");
        }
    }
    const int q = static_cast<int>(us.size());
    // pair target: b(u_i, v_i) = +1 symmetric, -1 symplectic (so that the
    // front-to-back pairing equals the standard matrix entry).
    const Rational target = form.kind == FormKind::Symplectic ? Rational(-1) : Rational(1);

    std::vector<RatVec> vs;
    for (int i = 0; i < q; ++i) {
        RatMat constraints(q + i, n);
        RatVec rhs = RatVec::Zero(q + i);
        for (int j = 0; j < q; ++j) {
            constraints.row(j) = (us[j].transpose() * A);
            rhs(j) = (j == i) ? target : Rational(0);
        }
        for (int l = 0; l < i; ++l) constraints.row(q + l) = (vs[l].transpose() * A);
        RatVec v = solve_particular(constraints, rhs);
        if (form.symmetric()) {
            const Rational self = pair_value(A, v, v);
            if (self != 0) v -= (self / (2 * target)) * us[i];
        }
        vs.push_back(v);
    }

    // Middle block: perp of all pairs, reduced to standard hyperbolic shape.
    std::vector<RatVec> frontMid, backMid;
    RatVec center;
    bool hasCenter = false;
    {
        RatMat pairRows(2 * q, n);
        for (int i = 0; i < q; ++i) {
            pairRows.row(2 * i) = us[i].transpose();
            pairRows.row(2 * i + 1) = vs[i].transpose();
        }
        RatMat constraints = pairRows * A;
        RatMat midBasis = q > 0 ? kernel(constraints) : RationalSubspace::full(n).rows();
        std::vector<RatVec> mid;
        for (int r = 0; r < midBasis.rows(); ++r) mid.push_back(midBasis.row(r).transpose());

        auto project_away = [&](const RatVec& s, const RatVec& t, std::vector<RatVec>& rest) {
            std::vector<RatVec> out;
            for (const auto& z : rest) {
                // remove the (s,t)-plane components; works for both symmetries
                RatVec zz = z - (pair_value(A, t, z) / pair_value(A, t, s)) * s -
                            (pair_value(A, s, z) / pair_value(A, s, t)) * t;
                bool zero = true;
                for (int c = 0; c < zz.size() && zero; ++c) zero = zz(c) == 0;
                if (!zero) out.push_back(zz);
            }
            // re-reduce to an independent set
            RatMat m(static_cast<int>(out.size()), n);
            for (std::size_t r = 0; r < out.size(); ++r) m.row(static_cast<int>(r)) = out[r].transpose();
            const int rank = rref_in_place(m);
            std::vector<RatVec> red;
            for (int r = 0; r < rank; ++r) red.push_back(m.row(r).transpose());
            return red;
        };

        while (!mid.empty()) {
            if (mid.size() == 1) {
                if (!form.symmetric() || form.kind != FormKind::SymmetricOdd)
                    throw Error("unexpected odd middle block for this form");
                RatVec w = mid[0];
                const Rational c = pair_value(A, w, w);
                if (c == 0) throw Error("degenerate middle block");
                // need c to be a rational square to normalize b(w,w) = 1
                Integer num = c.get_num(), den = c.get_den();
                if (sgn(c) < 0 || mpz_perfect_square_p(num.get_mpz_t()) == 0 ||
                    mpz_perfect_square_p(den.get_mpz_t()) == 0)
                    throw Error("middle block not rationally congruent to the standard form");
                Integer sn, sd;
                mpz_sqrt(sn.get_mpz_t(), num.get_mpz_t());
                mpz_sqrt(sd.get_mpz_t(), den.get_mpz_t());
                center = w / rat(sn, sd);
                hasCenter = true;
                mid.clear();
                break;
            }
            // find an isotropic vector s in the middle
            RatVec s;
            bool found = false;
            if (form.kind == FormKind::Symplectic) {
                s = mid[0];
                found = true;
            } else {
                for (const auto& z : mid)
                    if (pair_value(A, z, z) == 0) {
                        s = z;
                        found = true;
                        break;
                    }
                if (!found) {
                    const int d = static_cast<int>(mid.size());
                    RatMat gram(d, d);
                    for (int a = 0; a < d; ++a)
                        for (int b = 0; b < d; ++b) gram(a, b) = pair_value(A, mid[a], mid[b]);
                    const auto coords = find_isotropic_coordinates(gram);
                    if (!coords)
                        throw Error(
                            "middle block has no rational isotropic vector; the flag is not "
                            "rationally congruent to the standard model");
                    RatVec cand = RatVec::Zero(n);
                    for (int p = 0; p < d; ++p) cand += (*coords)(p)*mid[p];
                    s = cand;
                    found = true;
                }
            }
            // partner t with b(s, t) != 0
            RatVec t;
            bool gotT = false;
            for (const auto& z : mid) {
                if (pair_value(A, s, z) != 0) {
                    t = z;
                    gotT = true;
                    break;
                }
            }
            if (!gotT) throw Error("degenerate middle block");
            t /= pair_value(A, s, t);  // b(s,t) = 1
            if (form.symmetric()) {
                const Rational self = pair_value(A, t, t);
                if (self != 0) t -= (self / 2) * s;
            }
            frontMid.push_back(s);
            backMid.push_back(t);
            mid = project_away(s, t, mid);
        }
    }

    // Assemble: fronts are the v's then middle fronts, backs mirror; the u's
    // occupy the tail in reverse so each chain member is a tail span.
    RatMat F(n, n);
    int front = 0;
    for (int i = 0; i < q; ++i) F.col(front++) = vs[i];
    for (const auto& s : frontMid) F.col(front++) = s;
    if (hasCenter) F.col(front++) = center;
    int back = n - 1;
    for (int i = 0; i < q; ++i) F.col(back--) = us[i];
    for (const auto& t : backMid) F.col(back--) = t;
    if (front != back + 1) throw Error("adapted basis assembly mismatch");

    if (RatMat check = F.transpose() * A * F; check != A)
        throw Error("adapted basis failed the Gram check");
    for (std::size_t j = 0; j < chainTails.size(); ++j) {
        const int d = chainTails[j].dim();
        RatMat tail(d, n);
        for (int c = 0; c < d; ++c) tail.row(c) = F.col(n - d + c).transpose();
        if (!(RationalSubspace(tail, n) == chainTails[j]))
            throw Error("adapted basis does not reproduce the chain");
    }
    return F;
}

RatMat random_isometry(const BilinearFormSpec& form, Rng& rng, long spread) {
    const int n = form.n;
    const RatMat A = form.matrix();
    RatMat g = RatMat::Zero(n, n);
    for (int i = 0; i < n; ++i) g(i, i) = 1;
    auto random_vector = [&](bool needAnisotropic) {
        while (true) {
            RatVec v(n);
            bool nonzero = false;
            for (int i = 0; i < n; ++i) {
                v(i) = Rational(rng.range(-spread, spread));
                nonzero = nonzero || v(i) != 0;
            }
            if (!nonzero) continue;
            if (needAnisotropic && pair_value(A, v, v) == 0) continue;
            return v;
        }
    };
    if (form.kind == FormKind::Symplectic) {
        for (int k = 0; k < 4; ++k) {
            const RatVec v = random_vector(false);
            const Rational c = rng.nonzero_rational(spread, 2);
            RatMat t = RatMat::Zero(n, n);
            for (int i = 0; i < n; ++i) t(i, i) = 1;
            // x -> x + c * w(x, v) v
            const RatVec av = A * v;  // w(x, v) = x^T A v
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) t(i, j) += c * v(i) * av(j);
            g = t * g;
        }
    } else {
        for (int k = 0; k < 4; ++k) {  // even count keeps det = +1
            const RatVec v = random_vector(true);
            const Rational vv = pair_value(A, v, v);
            RatMat t = RatMat::Zero(n, n);
            for (int i = 0; i < n; ++i) t(i, i) = 1;
            const RatVec av = A * v;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) t(i, j) -= 2 * v(i) * av(j) / vv;
            g = t * g;
        }
    }
    if (RatMat check = g.transpose() * A * g; check != A)
        throw Error("isometry construction failed");
    return g;
}

RatMat random_invertible(int n, Rng& rng, long spread) {
    while (true) {
        RatMat m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = Rational(rng.range(-spread, spread));
        RatMat probe = m;
        if (rref_in_place(probe) == n) return m;
    }
}

RatMat cauchy_matrix(int n, Rng& rng) {
    std::vector<Rational> xs, ys;
    for (int i = 0; i < n; ++i) xs.push_back(Rational(i + 1));
    for (int j = 0; j < n; ++j) ys.push_back(Rational(n + j + 1) + rat(rng.range(0, 9), 10));
    RatMat m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = Rational(1) / (xs[i] + ys[j]);
    return m;
}

}  // namespace hmstab
