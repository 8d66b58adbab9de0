#include "hmstab/level.hpp"
#include "hmstab/rng.hpp"

#include <doctest.h>

using namespace hmstab;
using namespace hmstab::level;

namespace {

RationalSubspace heads(int count, int n) {
    std::vector<int> pos;
    for (int i = 0; i < count; ++i) pos.push_back(i);
    return RationalSubspace::coordinate(pos, n);
}

RationalSubspace tails(int count, int n) {
    std::vector<int> pos;
    for (int i = 0; i < count; ++i) pos.push_back(n - count + i);
    return RationalSubspace::coordinate(pos, n);
}

}  // namespace

TEST_CASE("index helpers") {
    SUBCASE("empty sequence") {
        const auto h = index_helpers(1, {}, 3, false);
        CHECK(h.j_minus == 0);
        CHECK(h.i_minus == 0);
        CHECK(h.j_plus == 1);
    }
    SUBCASE("n = 3, r_seq = (1)") {
        auto h = index_helpers(1, {1}, 3, false);
        CHECK(h.j_plus == 1);
        CHECK(h.i_plus == 1);
        CHECK(h.j_minus == 0);
        CHECK(h.i_minus == 0);
        h = index_helpers(2, {1}, 3, false);
        CHECK(h.j_minus == 1);
        CHECK(h.i_minus == 1);
        CHECK(h.j_plus == 2);
        CHECK(h.i_plus == 3);
    }
}

TEST_CASE("c values") {
    LevelFlag flag;
    flag.group = Group::SL;
    flag.n = 3;
    flag.r_seq = {1};
    flag.W = {RationalSubspace::coordinate({1, 2}, 3)};  // span(e2, e3)
    flag.validate();

    SUBCASE("zero subspace") {
        for (int i = 1; i <= 2; ++i) CHECK(c_value(RationalSubspace::zero(3), flag, i) == 0);
    }
    SUBCASE("full space gives i") {
        for (int i = 1; i <= 2; ++i) CHECK(c_value(RationalSubspace::full(3), flag, i) == i);
    }
    SUBCASE("hand example U = span(e1)") {
        const auto u = heads(1, 3);
        CHECK(c_value(u, flag, 1) == 1);
        CHECK(c_value(u, flag, 2) == 1);
    }
    SUBCASE("interior point: c_i = min(dim U, i)") {
        LevelFlag interior;
        interior.group = Group::SL;
        interior.n = 4;
        interior.validate();
        for (int d = 0; d <= 4; ++d) {
            const auto u = d == 0 ? RationalSubspace::zero(4) : heads(d, 4);
            for (int i = 1; i <= 3; ++i)
                CHECK(c_value(u, interior, i) == std::min(d, i));
        }
    }
}

TEST_CASE("c-prime values") {
    SUBCASE("U = 0 gives zero") {
        LevelFlag flag;
        flag.group = Group::SOOdd;
        flag.n = 5;
        flag.validate();
        for (int i = 1; i <= 2; ++i) CHECK(c_prime(RationalSubspace::zero(5), flag, i) == 0);
    }
    SUBCASE("trivial flag closed form") {
        LevelFlag flag;
        flag.group = Group::SOOdd;
        flag.n = 5;
        flag.validate();
        const BilinearFormSpec form(FormKind::SymmetricOdd, 5);
        for (int d = 1; d <= 2; ++d) {
            const auto u = heads(d, 5);  // isotropic
            for (int i = 1; i <= 2; ++i) {
                const int expected = std::min(d, i) + std::min(5 - d, i) - i;
                CHECK(c_prime(u, flag, i) == expected);
            }
        }
    }
    SUBCASE("SO(5) with one flag step") {
        LevelFlag flag;
        flag.group = Group::SOOdd;
        flag.n = 5;
        flag.r_seq = {1};
        flag.W = {tails(4, 5)};  // span(e2..e5)
        flag.validate();
        const BilinearFormSpec form(FormKind::SymmetricOdd, 5);
        const auto u = heads(1, 5);  // span(e1), u-perp = span(e1..e4)
        const auto uperp = perp(u, form);
        REQUIRE(uperp == RationalSubspace::coordinate({0, 1, 2, 3}, 5));
        for (int i = 1; i <= 2; ++i)
            CHECK(c_prime(u, flag, i) ==
                  c_value(u, flag, i) + c_value(uperp, flag, i) - i);
    }
}

TEST_CASE("isotropic extensions") {
    SUBCASE("Sp(4), empty flag: the coordinate maximal isotropics") {
        LevelFlag flag;
        flag.group = Group::Sp;
        flag.n = 4;
        flag.validate();
        const auto exts = enumerate_isotropic_extensions(flag, ExtensionVariant::D);
        CHECK(exts.size() == 4);  // 2^r with r = 2
        const BilinearFormSpec form(FormKind::Symplectic, 4);
        for (const auto& w : exts) {
            CHECK(w.dim() == 2);
            CHECK(is_isotropic(w, form));
            CHECK(perp(w, form) == w);
        }
    }
    SUBCASE("Sp(2): the two coordinate lines") {
        LevelFlag flag;
        flag.group = Group::Sp;
        flag.n = 2;
        flag.validate();
        const auto exts = enumerate_isotropic_extensions(flag, ExtensionVariant::D);
        REQUIRE(exts.size() == 2);
        CHECK(((exts[0] == heads(1, 2) && exts[1] == tails(1, 2)) ||
               (exts[0] == tails(1, 2) && exts[1] == heads(1, 2))));
    }
    SUBCASE("SO(4), D_+ with + in I is a singleton") {
        LevelFlag flag;
        flag.group = Group::SOEven;
        flag.n = 4;
        flag.has_plus = true;
        flag.W_plus = tails(2, 4);  // span(e3,e4), type (+1)^... = (-1)^r with r=2: +1
        flag.validate();
        const auto exts = enumerate_isotropic_extensions(flag, ExtensionVariant::DPlus);
        REQUIRE(exts.size() == 1);
        CHECK(exts[0] == *flag.W_plus);
    }
    SUBCASE("every returned extension is maximal isotropic inside W_k") {
        LevelFlag flag;
        flag.group = Group::Sp;
        flag.n = 6;
        flag.r_seq = {1};
        flag.W = {tails(5, 6)};
        flag.validate();
        const BilinearFormSpec form(FormKind::Symplectic, 6);
        for (const auto& w : enumerate_isotropic_extensions(flag, ExtensionVariant::D)) {
            CHECK(flag.W[0].contains(w));
            CHECK(perp(w, form) == w);
        }
    }
}

TEST_CASE("isotropic types") {
    const BilinearFormSpec so4(FormKind::SymmetricEven, 4);
    const auto u0 = heads(2, 4);
    CHECK(isotropic_type(u0, so4) == 1);
    // swap one hyperbolic pair member: intersection with u0 drops to 1
    const auto swapped = RationalSubspace::coordinate({0, 2}, 4);  // span(e1, e3)
    REQUIRE(is_isotropic(swapped, so4));
    CHECK(isotropic_type(swapped, so4) == -1);
    CHECK_THROWS_AS(isotropic_type(heads(1, 4), so4), Error);

    // type(U) type(W) = (-1)^(dim(U cap W) - r) over the coordinate isotropics
    for (int r : {2, 3}) {
        const int n = 2 * r;
        const BilinearFormSpec form(FormKind::SymmetricEven, n);
        std::vector<RationalSubspace> all;
        for (long mask = 0; mask < (1L << r); ++mask) {
            std::vector<int> pos;
            for (int p = 0; p < r; ++p) pos.push_back(((mask >> p) & 1) ? p : n - 1 - p);
            all.push_back(RationalSubspace::coordinate(pos, n));
        }
        for (const auto& u : all)
            for (const auto& w : all) {
                const int lhs = isotropic_type(u, form) * isotropic_type(w, form);
                const int meet = intersect(u, w).dim();
                const int rhs = ((meet - r) % 2 == 0) ? 1 : -1;
                CHECK(lhs == rhs);
            }
    }
}

TEST_CASE("closed weight formula, SL(2) hand cases") {
    ThetaWeights theta;
    theta.theta = {1};

    SUBCASE("interior point") {
        LevelFlag level;
        level.group = Group::SL;
        level.n = 2;
        level.validate();
        LambdaFlag lam;
        lam.V = {heads(1, 2)};
        lam.alpha = {rat(1)};
        CHECK(mu_level_closed(lam, level, theta) == 1);
    }

    SUBCASE("boundary point W_1 = span(e2)") {
        LevelFlag level;
        level.group = Group::SL;
        level.n = 2;
        level.r_seq = {1};
        level.W = {tails(1, 2)};
        level.validate();
        LambdaFlag onE1;
        onE1.V = {heads(1, 2)};
        onE1.alpha = {rat(1)};
        CHECK(mu_level_closed(onE1, level, theta) == 1);
        LambdaFlag onE2;
        onE2.V = {tails(1, 2)};
        onE2.alpha = {rat(1)};
        CHECK(mu_level_closed(onE2, level, theta) == -1);
    }

    SUBCASE("empty lambda flag gives zero for every group") {
        LevelFlag level;
        level.group = Group::SL;
        level.n = 2;
        level.validate();
        CHECK(mu_level_closed(LambdaFlag{}, level, theta) == 0);
    }
}

TEST_CASE("level stability check") {
    SUBCASE("SL(2) line bundle against the interior level") {
        LevelFlag level;
        level.group = Group::SL;
        level.n = 2;
        level.validate();
        ThetaWeights theta;
        theta.theta = {1};
        SubBundleData f;
        f.degree = 1;
        f.fiber = heads(1, 2);
        // LHS = deg n = 2, RHS = delta (2 c_1 - 1) = delta
        auto slacks = level_slacks({f}, level, theta, rat(1));
        REQUIRE(slacks.size() == 1);
        CHECK(slacks[0].lhs == 2);
        CHECK(slacks[0].rhs == 1);
        CHECK(level_stability_check({f}, level, theta, rat(1)).verdict == Verdict::Unstable);
        CHECK(level_stability_check({f}, level, theta, rat(2)).verdict ==
              Verdict::StrictlySemistable);
        CHECK(level_stability_check({f}, level, theta, rat(3)).verdict ==
              Verdict::NoViolationFound);
    }

    SUBCASE("very negative degree always passes") {
        LevelFlag level;
        level.group = Group::SOOdd;
        level.n = 5;
        level.validate();
        ThetaWeights theta;
        theta.theta = {1, 1};
        SubBundleData f;
        f.degree = -10;
        f.fiber = heads(1, 5);
        CHECK(level_stability_check({f}, level, theta, rat(1)).verdict ==
              Verdict::NoViolationFound);
    }

    SUBCASE("non-isotropic test objects are rejected for the form groups") {
        LevelFlag level;
        level.group = Group::Sp;
        level.n = 4;
        level.validate();
        ThetaWeights theta;
        theta.theta = {1, 1};
        SubBundleData bad;
        bad.degree = 0;
        bad.fiber = RationalSubspace::coordinate({0, 3}, 4);  // pairs under J
        CHECK_THROWS_AS(level_slacks({bad}, level, theta, rat(1)), Error);
        SubBundleData zero;
        zero.degree = 0;
        zero.fiber = RationalSubspace::zero(4);
        CHECK_THROWS_AS(level_slacks({zero}, level, theta, rat(1)), Error);
    }
}

TEST_CASE("c bounds and monotonicity on random data") {
    Rng rng(2718);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = static_cast<int>(rng.range(2, 5));
        // random SL flag data
        LevelFlag flag;
        flag.group = Group::SL;
        flag.n = n;
        int mark = 0;
        const RatMat g = random_invertible(n, rng, 2);
        while (true) {
            mark += static_cast<int>(rng.range(1, 2));
            if (mark >= n) break;
            flag.r_seq.push_back(mark);
            RatMat rows(n - mark, n);
            for (int c = 0; c < n - mark; ++c) rows.row(c) = g.col(mark + c).transpose();
            flag.W.emplace_back(rows, n);
            if (flag.r_seq.size() == 2) break;
        }
        flag.validate();
        // nested U pair
        const int d2 = static_cast<int>(rng.range(1, n));
        const int d1 = static_cast<int>(rng.range(0, d2 - 1));
        RatMat big(d2, n);
        for (int r = 0; r < d2; ++r)
            for (int c = 0; c < n; ++c) big(r, c) = Rational(rng.range(-2, 2));
        RationalSubspace u2(big, n);
        RatMat small(d1, n);
        for (int r = 0; r < d1 && r < u2.dim(); ++r) small.row(r) = u2.rows().row(r);
        RationalSubspace u1(small.topRows(std::min(d1, u2.dim())), n);
        for (int i = 1; i <= n - 1; ++i) {
            const int c1 = c_value(u1, flag, i);
            const int c2 = c_value(u2, flag, i);
            CHECK(c1 >= 0);
            CHECK(c1 <= std::min(i, u1.dim()));
            CHECK(c2 <= std::min(i, u2.dim()));
            CHECK(c1 <= c2);
        }
    }
}

TEST_CASE("max over extensions is stable under form-preserving changes of basis") {
    Rng rng(90210);
    for (int trial = 0; trial < 25; ++trial) {
        const bool sp = rng.flip();
        const int r = static_cast<int>(rng.range(2, 3));
        const int n = 2 * r;
        const BilinearFormSpec form(sp ? FormKind::Symplectic : FormKind::SymmetricEven, n);
        LevelFlag flag;
        flag.group = sp ? Group::Sp : Group::SOEven;
        flag.n = n;
        const RatMat g = random_isometry(form, rng, 2);
        const int cap = sp ? r - 1 : r - 2;
        if (cap >= 1 && rng.flip()) {
            const int rj = static_cast<int>(rng.range(1, cap));
            flag.r_seq = {rj};
            RatMat rows(n - rj, n);
            for (int c = 0; c < n - rj; ++c) rows.row(c) = g.col(rj + c).transpose();
            flag.W.emplace_back(rows, n);
        }
        flag.validate();
        // random isotropic test subspace: conjugated coordinate head
        const RatMat gu = random_isometry(form, rng, 2);
        const int d = static_cast<int>(rng.range(1, r));
        RatMat urows(d, n);
        for (int c = 0; c < d; ++c) urows.row(c) = gu.col(c).transpose();
        const RationalSubspace u(urows, n);
        REQUIRE(is_isotropic(u, form));

        const auto variant = sp ? ExtensionVariant::D
                                : (rng.flip() ? ExtensionVariant::DPlus : ExtensionVariant::DMinus);

        // conjugating the whole configuration by another isometry must not
        // change the max, even though the adapted enumeration basis differs
        const RatMat h = random_isometry(form, rng, 2);
        LevelFlag moved = flag;
        for (auto& wj : moved.W) wj = wj.apply(h);
        const RationalSubspace movedU = u.apply(h);
        for (int i = 1; i <= r; ++i) {
            const int base = c_prime_max(u, flag, i, variant);
            const int conj = c_prime_max(movedU, moved, i, variant);
            CHECK(base == conj);
        }
        // the max is achieved by a returned extension
        const auto exts = enumerate_isotropic_extensions(flag, variant);
        for (int i = 1; i <= r; ++i) {
            const int best = c_prime_max(u, flag, i, variant);
            bool achieved = false;
            for (const auto& ext : exts)
                achieved = achieved || c_prime_extended(u, flag, ext, i) == best;
            CHECK(achieved);
        }
    }
}
