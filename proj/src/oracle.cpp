#include "hmstab/oracle.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <thread>

namespace hmstab {
namespace oracle {

std::vector<std::vector<int>> sorted_subsets(int n, int i) {
    if (i < 0 || i > n) throw Error("subset size out of range");
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int start) -> void {
        if (static_cast<int>(cur.size()) == i) {
            out.push_back(cur);
            return;
        }
        for (int v = start; v < n; ++v) {
            cur.push_back(v);
            self(self, v + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

Rational determinant(const RatMat& m) {
    if (m.rows() != m.cols()) throw Error("determinant of a non-square matrix");
    RatMat a = m;
    const int n = static_cast<int>(a.rows());
    Rational det = 1;
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int r = col; r < n; ++r)
            if (a(r, col) != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) return Rational(0);
        if (pivot != col) {
            a.row(pivot).swap(a.row(col));
            det = -det;
        }
        det *= a(col, col);
        const Rational inv = Rational(1) / a(col, col);
        for (int r = col + 1; r < n; ++r) {
            if (a(r, col) == 0) continue;
            const Rational f = a(r, col) * inv;
            for (int c = col; c < n; ++c) a(r, c) -= f * a(col, c);
        }
    }
    return det;
}

RatMat wedge_matrix(const RatMat& m, int i) {
    const int n = static_cast<int>(m.rows());
    if (m.cols() != n) throw Error("wedge power of a non-square matrix");
    const auto subsets = sorted_subsets(n, i);
    const int dim = static_cast<int>(subsets.size());
    RatMat out(dim, dim);
    RatMat minor(i, i);
    for (int col = 0; col < dim; ++col)
        for (int row = 0; row < dim; ++row) {
            for (int a = 0; a < i; ++a)
                for (int b = 0; b < i; ++b) minor(a, b) = m(subsets[row][a], subsets[col][b]);
            out(row, col) = determinant(minor);
        }
    return out;
}

namespace {

std::string subset_label(const std::vector<int>& s) {
    std::string out = "{";
    for (std::size_t a = 0; a < s.size(); ++a) {
        if (a) out += ",";
        out += std::to_string(s[a] + 1);
    }
    return out + "}";
}

Rational subset_weight(const std::vector<int>& s, const std::vector<Rational>& w) {
    Rational total = 0;
    for (int v : s) total += w.at(v);
    return total;
}

}  // namespace

ExplicitRep build_exterior_rep(int n, int i, const std::vector<Rational>& lambdaWeights) {
    if (static_cast<int>(lambdaWeights.size()) != n) throw Error("lambda weight count mismatch");
    const auto subsets = sorted_subsets(n, i);
    ExplicitRep rep;
    rep.wedge_dim = static_cast<int>(subsets.size());
    rep.basis = RatMat::Zero(rep.wedge_dim, rep.wedge_dim);
    for (int c = 0; c < rep.wedge_dim; ++c) {
        rep.basis(c, c) = 1;
        rep.weight.push_back(subset_weight(subsets[c], lambdaWeights));
        rep.label.push_back(subset_label(subsets[c]));
    }
    return rep;
}

RatMat sp_contraction(int r, int i) {
    const int n = 2 * r;
    if (i < 2 || i > n) throw Error("contraction degree out of range");
    const BilinearFormSpec form(FormKind::Symplectic, n);
    const RatMat J = form.matrix();
    const auto domain = sorted_subsets(n, i);
    const auto target = sorted_subsets(n, i - 2);
    std::map<std::vector<int>, int> targetIndex;
    for (std::size_t t = 0; t < target.size(); ++t) targetIndex[target[t]] = static_cast<int>(t);
    RatMat out = RatMat::Zero(static_cast<int>(target.size()), static_cast<int>(domain.size()));
    for (std::size_t c = 0; c < domain.size(); ++c) {
        const auto& S = domain[c];
        for (int p = 0; p < i; ++p)
            for (int q = p + 1; q < i; ++q) {
                const Rational omega = J(S[p], S[q]);
                if (omega == 0) continue;
                std::vector<int> rest;
                for (int a = 0; a < i; ++a)
                    if (a != p && a != q) rest.push_back(S[a]);
                const int signFactor = ((p + q) % 2 == 0) ? -1 : 1;  // (-1)^(p+q-1), 1-based
                out(targetIndex.at(rest), static_cast<int>(c)) += Rational(signFactor) * omega;
            }
    }
    return out;
}

ExplicitRep build_sp_fundamental(int r, int i, const std::vector<Rational>& lambdaWeights) {
    const int n = 2 * r;
    if (i < 1 || i > r) throw Error("fundamental representation index out of range");
    const auto subsets = sorted_subsets(n, i);
    ExplicitRep rep;
    rep.wedge_dim = static_cast<int>(subsets.size());
    if (i == 1) return build_exterior_rep(n, 1, lambdaWeights);
    const RatMat phi = sp_contraction(r, i);
    // group the wedge basis by lambda-weight; the contraction preserves the
    // weight cellwise, so the kernel splits along these groups
    std::map<Rational, std::vector<int>> byWeight;
    for (int c = 0; c < rep.wedge_dim; ++c)
        byWeight[subset_weight(subsets[c], lambdaWeights)].push_back(c);
    std::vector<RatVec> columns;
    std::vector<Rational> weights;
    for (const auto& [weight, cols] : byWeight) {
        RatMat sub(phi.rows(), static_cast<int>(cols.size()));
        for (std::size_t a = 0; a < cols.size(); ++a) sub.col(static_cast<int>(a)) = phi.col(cols[a]);
        const RatMat coeff = kernel(RatMat(sub));
        for (int kRow = 0; kRow < coeff.rows(); ++kRow) {
            RatVec v = RatVec::Zero(rep.wedge_dim);
            for (std::size_t a = 0; a < cols.size(); ++a) v(cols[a]) = coeff(kRow, static_cast<int>(a));
            columns.push_back(std::move(v));
            weights.push_back(weight);
        }
    }
    rep.basis = RatMat(rep.wedge_dim, static_cast<int>(columns.size()));
    for (std::size_t c = 0; c < columns.size(); ++c) rep.basis.col(static_cast<int>(c)) = columns[c];
    rep.weight = std::move(weights);
    for (int c = 0; c < rep.basis.cols(); ++c) rep.label.push_back("k" + std::to_string(c));
    return rep;
}

RatMat so_even_tau(int r) {
    const int n = 2 * r;
    const BilinearFormSpec form(FormKind::SymmetricEven, n);
    const auto subsets = sorted_subsets(n, r);
    const int dim = static_cast<int>(subsets.size());
    std::map<std::vector<int>, int> index;
    for (int c = 0; c < dim; ++c) index[subsets[c]] = c;
    // Lambda^r of the musical map, then the inverse wedge-pairing map:
    // psi(e_S) = sign(S, S^c) (e_{S^c})^dual, so psi^{-1} sends the dual of
    // e_T to sign(T^c, T)-corrected e_{T^c}.
    const RatMat lam = wedge_matrix(form.matrix(), r);
    auto merge_sign = [&](const std::vector<int>& S) {
        // sign of the shuffle putting (S, S^c) into ascending order
        long inversions = 0;
        for (std::size_t a = 0; a < S.size(); ++a) inversions += S[a] - static_cast<int>(a);
        return (inversions % 2 == 0) ? 1 : -1;
    };
    RatMat tau = RatMat::Zero(dim, dim);
    for (int c = 0; c < dim; ++c) {
        // lam.col(c) expresses Lambda^r(musical)(e_{S_c}) in the dual basis
        for (int t = 0; t < dim; ++t) {
            if (lam(t, c) == 0) continue;
            // psi^{-1}((e_{S_t})^dual) = sign(S_t^c) e_{S_t^c}
            std::vector<int> comp;
            std::set<int> inT(subsets[t].begin(), subsets[t].end());
            for (int v = 0; v < n; ++v)
                if (inT.find(v) == inT.end()) comp.push_back(v);
            tau(index.at(comp), c) += Rational(merge_sign(comp)) * lam(t, c);
        }
    }
    return tau;
}

std::pair<ExplicitRep, ExplicitRep> build_so_even_halves(
    int r, const std::vector<Rational>& lambdaWeights) {
    const int n = 2 * r;
    if (r < 2) throw Error("even orthogonal halves need r >= 2");
    const auto subsets = sorted_subsets(n, r);
    const int dim = static_cast<int>(subsets.size());
    RatMat tau = so_even_tau(r);
    {
        RatMat square = tau * tau;
        for (int a = 0; a < dim; ++a)
            for (int b = 0; b < dim; ++b)
                if (square(a, b) != Rational(a == b ? 1 : 0))
                    throw Error("tau is not an involution");
    }
    auto eigenspace = [&](int sign) {
        RatMat shifted = tau;
        for (int a = 0; a < dim; ++a) shifted(a, a) -= Rational(sign);
        // kernel per weight class keeps the basis weight-homogeneous
        std::map<Rational, std::vector<int>> byWeight;
        for (int c = 0; c < dim; ++c)
            byWeight[subset_weight(subsets[c], lambdaWeights)].push_back(c);
        ExplicitRep rep;
        rep.wedge_dim = dim;
        std::vector<RatVec> columns;
        for (const auto& [weight, cols] : byWeight) {
            RatMat sub(dim, static_cast<int>(cols.size()));
            for (std::size_t a = 0; a < cols.size(); ++a)
                sub.col(static_cast<int>(a)) = shifted.col(cols[a]);
            const RatMat coeff = kernel(RatMat(sub));
            for (int kRow = 0; kRow < coeff.rows(); ++kRow) {
                RatVec v = RatVec::Zero(dim);
                for (std::size_t a = 0; a < cols.size(); ++a)
                    v(cols[a]) = coeff(kRow, static_cast<int>(a));
                columns.push_back(std::move(v));
                rep.weight.push_back(weight);
            }
        }
        rep.basis = RatMat(dim, static_cast<int>(columns.size()));
        for (std::size_t c = 0; c < columns.size(); ++c)
            rep.basis.col(static_cast<int>(c)) = columns[c];
        for (int c = 0; c < rep.basis.cols(); ++c) rep.label.push_back("h" + std::to_string(c));
        return rep;
    };
    ExplicitRep plusEig = eigenspace(+1);
    ExplicitRep minusEig = eigenspace(-1);
    if (plusEig.dim() != dim / 2 || minusEig.dim() != dim / 2)
        throw Error("tau eigenspaces have unexpected dimensions");
    // the reference Pluecker vector e_1 ^ .. ^ e_r fixes which half is "+"
    std::vector<int> head(r);
    for (int a = 0; a < r; ++a) head[a] = a;
    RatVec pluecker = RatVec::Zero(dim);
    {
        const auto all = sorted_subsets(n, r);
        for (int c = 0; c < dim; ++c)
            if (all[c] == head) pluecker(c) = 1;
    }
    RatVec image = tau * pluecker;
    if (image == pluecker) return {std::move(plusEig), std::move(minusEig)};
    if (image == RatVec(-pluecker)) return {std::move(minusEig), std::move(plusEig)};
    throw Error("reference Pluecker vector is not a tau eigenvector");
}

int HomChain::block_size(int j) const {
    const int k = static_cast<int>(r_seq.size());
    if (j < 1 || j > k + 1) throw Error("block index out of range");
    const int lo = j == 1 ? 0 : r_seq[j - 2];
    const int hi = j == k + 1 ? n : r_seq[j - 1];
    return hi - lo;
}

void HomChain::validate() const {
    if (n <= 0) throw Error("chain needs a positive dimension");
    int prev = 0;
    for (int rj : r_seq) {
        // a final mark equal to n leaves an empty last block, which the
        // degenerate perp steps of the form groups produce
        if (rj <= prev || rj > n) throw Error("chain marks must be strictly increasing and proper");
        prev = rj;
    }
    if (U.rows() != n || U.cols() != n || Uprime.rows() != n || Uprime.cols() != n)
        throw Error("chain basis size mismatch");
    if (static_cast<int>(blocks.size()) != block_count()) throw Error("chain block count mismatch");
    for (int j = 1; j <= block_count(); ++j) {
        const int s = block_size(j);
        if (blocks[j - 1].rows() != s || blocks[j - 1].cols() != s)
            throw Error("chain block size mismatch");
    }
}

RatMat profile_hom(const HomChain& chain, int i, const std::vector<int>& profile) {
    chain.validate();
    const int n = chain.n;
    const int m = chain.block_count();
    if (static_cast<int>(profile.size()) != m) throw Error("profile length mismatch");
    {
        int total = 0;
        for (int j = 1; j <= m; ++j) {
            if (profile[j - 1] < 0 || profile[j - 1] > chain.block_size(j))
                throw Error("profile entry out of range");
            total += profile[j - 1];
        }
        if (total != i) throw Error("profile does not sum to the wedge degree");
    }
    // block id of each basis position
    std::vector<int> blockOf(n);
    for (int pos = 0, j = 1; j <= m; ++j)
        for (int c = 0; c < chain.block_size(j); ++c) blockOf[pos++] = j;
    // full block-diagonal map in the adapted bases
    RatMat D = RatMat::Zero(n, n);
    for (int pos = 0, j = 1; j <= m; ++j) {
        const int s = chain.block_size(j);
        D.block(pos, pos, s, s) = chain.blocks[j - 1];
        pos += s;
    }
    RatMat uInv = chain.U;
    {
        // invert via row reduction against the identity
        RatMat aug(n, 2 * n);
        aug.block(0, 0, n, n) = chain.U;
        aug.block(0, n, n, n) = RatMat::Zero(n, n);
        for (int a = 0; a < n; ++a) aug(a, n + a) = 1;
        if (rref_in_place(aug) != n) throw Error("chain basis is singular");
        uInv = aug.block(0, n, n, n);
    }
    const RatMat left = wedge_matrix(RatMat(chain.Uprime * D), i);
    const RatMat right = wedge_matrix(uInv, i);
    const auto subsets = sorted_subsets(n, i);
    RatMat projected = right;
    for (std::size_t row = 0; row < subsets.size(); ++row) {
        std::vector<int> counts(m + 1, 0);
        for (int v : subsets[row]) ++counts[blockOf[v]];
        bool keep = true;
        for (int j = 1; j <= m && keep; ++j) keep = counts[j] == profile[j - 1];
        if (!keep) projected.row(static_cast<int>(row)).setZero();
    }
    return left * projected;
}

RatMat completed_hom_component(const HomChain& chain, int i) {
    chain.validate();
    const int k = static_cast<int>(chain.r_seq.size());
    auto r_at = [&](int j) { return j == 0 ? 0 : (j <= k ? chain.r_seq[j - 1] : chain.n); };
    int jMinus = 0;
    for (int j = 0; j <= k; ++j)
        if (r_at(j) < i) jMinus = j;
    int jPlus = k + 1;
    for (int j = k; j >= 1; --j)
        if (i <= r_at(j)) jPlus = j;
    std::vector<int> profile(chain.block_count(), 0);
    for (int j = 1; j <= jMinus; ++j) profile[j - 1] = chain.block_size(j);
    if (i - r_at(jMinus) > 0) profile[jPlus - 1] = i - r_at(jMinus);
    return profile_hom(chain, i, profile);
}

std::string convention_name(MuConvention conv) {
    std::string out = conv.side == ActionSide::Domain ? "domain" : "codomain";
    out += conv.sign == MuSign::NegMin ? "/-min" : "/+max";
    return out;
}

std::vector<MuConvention> all_conventions() {
    return {{ActionSide::Domain, MuSign::NegMin},
            {ActionSide::Domain, MuSign::PosMax},
            {ActionSide::Codomain, MuSign::NegMin},
            {ActionSide::Codomain, MuSign::PosMax}};
}

namespace {

/// Coordinates of col in the column space of basis; throws if not contained.
RatVec express_in_columns(const RatMat& basis, const RatVec& col) {
    const int rows = static_cast<int>(basis.rows());
    const int cols = static_cast<int>(basis.cols());
    RatMat aug(rows, cols + 1);
    aug.block(0, 0, rows, cols) = basis;
    aug.col(cols) = col;
    RatMat probe = aug;
    const int rank = rref_in_place(probe);
    RatVec x = RatVec::Zero(cols);
    for (int r = 0; r < rank; ++r) {
        int c = 0;
        while (c < cols + 1 && probe(r, c) == 0) ++c;
        if (c == cols) throw Error("image does not stay inside the representation");
        if (c < cols) x(c) = probe(r, cols);
    }
    return x;
}

}  // namespace

Rational mu_direct(const ExplicitRep& domain, const ExplicitRep& codomain, const RatMat& h,
                   MuConvention conv) {
    if (h.rows() != codomain.wedge_dim || h.cols() != domain.wedge_dim)
        throw Error("map size does not match the representations");
    const RatMat restricted = h * domain.basis;
    bool any = false;
    bool first = true;
    Rational best;
    std::vector<bool> codomainHit(codomain.dim(), false);
    for (int c = 0; c < restricted.cols(); ++c) {
        bool nonzero = false;
        for (int r = 0; r < restricted.rows() && !nonzero; ++r) nonzero = restricted(r, c) != 0;
        if (!nonzero) continue;
        any = true;
        if (conv.side == ActionSide::Domain) {
            const Rational& w = domain.weight[c];
            if (first || (conv.sign == MuSign::NegMin ? w < best : w > best)) {
                best = w;
                first = false;
            }
        } else {
            const RatVec coords = express_in_columns(codomain.basis, restricted.col(c));
            for (int r = 0; r < coords.size(); ++r)
                if (coords(r) != 0) codomainHit[r] = true;
        }
    }
    if (!any) throw Error("zero map has no Hilbert-Mumford weight");
    if (conv.side == ActionSide::Domain) {
        // still verify the containment claim on the image
        for (int c = 0; c < restricted.cols(); ++c) express_in_columns(codomain.basis, restricted.col(c));
        return conv.sign == MuSign::NegMin ? Rational(-best) : best;
    }
    for (std::size_t r = 0; r < codomainHit.size(); ++r) {
        if (!codomainHit[r]) continue;
        const Rational& w = codomain.weight[r];
        if (first || (conv.sign == MuSign::NegMin ? w < best : w > best)) {
            best = w;
            first = false;
        }
    }
    return conv.sign == MuSign::NegMin ? Rational(-best) : best;
}

// ---------------------------------------------------------------------------
// randomized trials

namespace {

using level::ExtensionVariant;
using level::Group;
using level::LambdaFlag;
using level::LevelFlag;
using level::ThetaWeights;

struct LambdaData {
    std::vector<Rational> weights;  // per standard basis vector
    LambdaFlag flag;                // coordinate heads with folded alphas
};

/// SL lambda: ascending eigen-weights with multiplicities summing to n and
/// weighted trace zero; the flag steps are the cumulative coordinate heads.
LambdaData random_sl_lambda(int n, Rng& rng) {
    const int blocks = static_cast<int>(rng.range(2, n));
    std::vector<long> sizes(blocks, 1);
    for (int extra = 0; extra < n - blocks; ++extra)
        ++sizes[static_cast<std::size_t>(rng.range(0, blocks - 1))];
    std::set<long> raw;
    while (static_cast<int>(raw.size()) < blocks) raw.insert(rng.range(-4L * n, 4L * n));
    std::vector<long> vals(raw.begin(), raw.end());
    Rational mean = 0;
    for (int b = 0; b < blocks; ++b) mean += Rational(sizes[b]) * vals[b];
    mean /= n;
    LambdaData out;
    std::vector<Rational> blockWeight;
    for (int b = 0; b < blocks; ++b) {
        blockWeight.push_back(Rational(vals[b]) - mean);
        for (long c = 0; c < sizes[b]; ++c) out.weights.push_back(blockWeight.back());
    }
    int cum = 0;
    for (int b = 0; b + 1 < blocks; ++b) {
        cum += static_cast<int>(sizes[b]);
        std::vector<int> head(cum);
        for (int a = 0; a < cum; ++a) head[a] = a;
        out.flag.V.push_back(RationalSubspace::coordinate(head, n));
        out.flag.alpha.push_back((blockWeight[b + 1] - blockWeight[b]) / n);
    }
    return out;
}

/// Torus lambda for the form groups: isotropic coordinate heads V_1 < ... <
/// V_s at random depths d_1 < ... < d_s <= r carrying strictly increasing
/// negative weights, mirrored positively on the paired tail coordinates;
/// alphas come from the weight gaps with the next weight after V_s folded
/// to zero.
LambdaData random_form_lambda(int n, int r, Rng& rng) {
    const int s = static_cast<int>(rng.range(1, r));
    std::set<long> depthSet;
    while (static_cast<int>(depthSet.size()) < s) depthSet.insert(rng.range(1, r));
    std::vector<long> depths(depthSet.begin(), depthSet.end());
    std::set<long> raw;
    while (static_cast<int>(raw.size()) < s) raw.insert(rng.range(1, 5L * r));
    std::vector<long> cs(raw.begin(), raw.end());
    std::sort(cs.begin(), cs.end(), std::greater<long>());  // c_1 > ... > c_s
    LambdaData out;
    out.weights.assign(n, Rational(0));
    for (int j = 0; j < s; ++j) {
        const long lo = j == 0 ? 0 : depths[j - 1];
        for (long p = lo; p < depths[j]; ++p) {
            out.weights[p] = Rational(-cs[j]);
            out.weights[n - 1 - p] = Rational(cs[j]);
        }
    }
    for (int j = 0; j < s; ++j) {
        std::vector<int> head(static_cast<std::size_t>(depths[j]));
        for (long a = 0; a < depths[j]; ++a) head[static_cast<std::size_t>(a)] = static_cast<int>(a);
        out.flag.V.push_back(RationalSubspace::coordinate(head, n));
        const Rational next = j + 1 < s ? Rational(-cs[j + 1]) : Rational(0);
        out.flag.alpha.push_back((next - Rational(-cs[j])) / n);
    }
    return out;
}

std::vector<int> random_r_seq(int cap, Rng& rng) {
    if (cap <= 0) return {};
    const int k = static_cast<int>(rng.range(0, std::min(3, cap)));
    std::set<int> seq;
    while (static_cast<int>(seq.size()) < k) seq.insert(static_cast<int>(rng.range(1, cap)));
    return std::vector<int>(seq.begin(), seq.end());
}

RationalSubspace tail_space(const RatMat& basis, int count) {
    const int n = static_cast<int>(basis.rows());
    RatMat rows(count, n);
    for (int c = 0; c < count; ++c) rows.row(c) = basis.col(n - count + c).transpose();
    return RationalSubspace(std::move(rows), n);
}

std::vector<RationalSubspace> flag_from_basis(const RatMat& basis, const std::vector<int>& rSeq) {
    std::vector<RationalSubspace> out;
    const int n = static_cast<int>(basis.rows());
    for (int rj : rSeq) out.push_back(tail_space(basis, n - rj));
    return out;
}

ThetaWeights random_theta(Group g, int n, Rng& rng) {
    ThetaWeights theta;
    for (int i = 0; i < level::theta_count(g, n); ++i) theta.theta.push_back(rng.range(1, 3));
    if (g == Group::SOEven) {
        theta.theta_plus = rng.range(1, 3);
        theta.theta_minus = rng.range(1, 3);
    }
    return theta;
}

std::string detail_string(int trial, const char* what, const Rational& closed,
                          const Rational& direct, const std::vector<int>& rSeq,
                          const LambdaData& lambda, std::uint64_t seed) {
    std::ostringstream os;
    os << "trial " << trial << " (" << what << "): closed " << format_rational(closed)
       << " != direct " << format_rational(direct) << "; r_seq = [";
    for (std::size_t a = 0; a < rSeq.size(); ++a) os << (a ? "," : "") << rSeq[a];
    os << "], lambda = [";
    for (std::size_t a = 0; a < lambda.weights.size(); ++a)
        os << (a ? "," : "") << format_rational(lambda.weights[a]);
    os << "], seed = " << seed;
    return os.str();
}

// --- per-group single trials; each returns closed == direct ----------------

bool trial_sl(int n, int trial, std::uint64_t seed, MuConvention conv, std::string& failDetail) {
    Rng rng = Rng::for_trial(seed, static_cast<std::uint64_t>(trial));
    const LambdaData lambda = random_sl_lambda(n, rng);
    const std::vector<int> rSeq = random_r_seq(n - 1, rng);
    const ThetaWeights theta = random_theta(Group::SL, n, rng);

    HomChain chain;
    chain.n = n;
    chain.r_seq = rSeq;
    chain.U = random_invertible(n, rng, 2);
    chain.Uprime = random_invertible(n, rng, 2);
    for (int j = 1; j <= chain.block_count(); ++j)
        chain.blocks.push_back(cauchy_matrix(chain.block_size(j), rng));

    LevelFlag flag;
    flag.group = Group::SL;
    flag.n = n;
    flag.r_seq = rSeq;
    flag.W = flag_from_basis(chain.U, rSeq);

    const Rational closed = mu_level_closed(lambda.flag, flag, theta);
    Rational direct = 0;
    for (int i = 1; i <= n - 1; ++i) {
        const ExplicitRep rep = build_exterior_rep(n, i, lambda.weights);
        const RatMat h = completed_hom_component(chain, i);
        direct += Rational(theta.theta[i - 1]) * mu_direct(rep, rep, h, conv);
    }
    if (closed == direct) return true;
    failDetail = detail_string(trial, "sl", closed, direct, rSeq, lambda, seed);
    return false;
}

bool trial_so_odd(int r, int trial, std::uint64_t seed, MuConvention conv,
                  std::string& failDetail) {
    const int n = 2 * r + 1;
    Rng rng = Rng::for_trial(seed, static_cast<std::uint64_t>(trial));
    const BilinearFormSpec form(FormKind::SymmetricOdd, n);
    const LambdaData lambda = random_form_lambda(n, r, rng);
    const std::vector<int> rSeq = random_r_seq(r - 1, rng);
    const ThetaWeights theta = random_theta(Group::SOOdd, n, rng);
    const int rk = rSeq.empty() ? 0 : rSeq.back();

    HomChain chain;
    chain.n = n;
    chain.r_seq = rSeq;
    chain.r_seq.push_back(n - rk);  // the W_k-perp step of the diagram
    chain.U = random_isometry(form, rng, 2);
    chain.Uprime = random_isometry(form, rng, 2);
    for (std::size_t j = 0; j < rSeq.size(); ++j)
        chain.blocks.push_back(cauchy_matrix(chain.block_size(static_cast<int>(j) + 1), rng));
    chain.blocks.push_back(
        random_isometry(BilinearFormSpec(FormKind::SymmetricOdd, n - 2 * rk), rng, 3));
    chain.blocks.push_back(cauchy_matrix(rk, rng));  // below W_k-perp, never reached

    LevelFlag flag;
    flag.group = Group::SOOdd;
    flag.n = n;
    flag.r_seq = rSeq;
    flag.W = flag_from_basis(chain.U, rSeq);

    const Rational closed = mu_level_closed(lambda.flag, flag, theta);
    Rational direct = 0;
    for (int i = 1; i <= r; ++i) {
        const ExplicitRep rep = build_exterior_rep(n, i, lambda.weights);
        const RatMat h = completed_hom_component(chain, i);
        direct += Rational(theta.theta[i - 1]) * mu_direct(rep, rep, h, conv);
    }
    if (closed == direct) return true;
    failDetail = detail_string(trial, "so-odd", closed, direct, rSeq, lambda, seed);
    return false;
}

bool trial_sp(int r, int trial, std::uint64_t seed, MuConvention conv, std::string& failDetail) {
    const int n = 2 * r;
    Rng rng = Rng::for_trial(seed, static_cast<std::uint64_t>(trial));
    const BilinearFormSpec form(FormKind::Symplectic, n);
    const LambdaData lambda = random_form_lambda(n, r, rng);
    const std::vector<int> rSeq = random_r_seq(r - 1, rng);
    const ThetaWeights theta = random_theta(Group::Sp, n, rng);
    const int rk = rSeq.empty() ? 0 : rSeq.back();

    HomChain chain;
    chain.n = n;
    chain.r_seq = rSeq;
    chain.r_seq.push_back(n - rk);
    chain.U = random_isometry(form, rng, 2);
    chain.Uprime = random_isometry(form, rng, 2);
    for (std::size_t j = 0; j < rSeq.size(); ++j)
        chain.blocks.push_back(cauchy_matrix(chain.block_size(static_cast<int>(j) + 1), rng));
    chain.blocks.push_back(
        random_isometry(BilinearFormSpec(FormKind::Symplectic, n - 2 * rk), rng, 3));
    chain.blocks.push_back(cauchy_matrix(rk, rng));

    LevelFlag flag;
    flag.group = Group::Sp;
    flag.n = n;
    flag.r_seq = rSeq;
    flag.W = flag_from_basis(chain.U, rSeq);

    const Rational closed = mu_level_closed(lambda.flag, flag, theta);
    Rational direct = 0;
    for (int i = 1; i <= r; ++i) {
        const ExplicitRep rep = build_sp_fundamental(r, i, lambda.weights);
        const RatMat h = completed_hom_component(chain, i);
        direct += Rational(theta.theta[i - 1]) * mu_direct(rep, rep, h, conv);
    }
    if (closed == direct) return true;
    failDetail = detail_string(trial, "sp", closed, direct, rSeq, lambda, seed);
    return false;
}

bool trial_so_even(int r, int trial, std::uint64_t seed, MuConvention conv,
                   std::string& failDetail) {
    const int n = 2 * r;
    Rng rng = Rng::for_trial(seed, static_cast<std::uint64_t>(trial));
    const BilinearFormSpec form(FormKind::SymmetricEven, n);
    const LambdaData lambda = random_form_lambda(n, r, rng);
    const std::vector<int> rSeq = random_r_seq(r - 2, rng);
    const ThetaWeights theta = random_theta(Group::SOEven, n, rng);
    const int rk = rSeq.empty() ? 0 : rSeq.back();
    const int caseId = trial % 4;  // cycle through none, +, -, both
    const bool hasPlus = caseId == 1 || caseId == 3;
    const bool hasMinus = caseId == 2 || caseId == 3;

    const RatMat g = random_isometry(form, rng, 2);
    const RatMat gPrime = random_isometry(form, rng, 2);

    // standard-model tails/heads conjugated by g/g'; the "minus" basis swaps
    // the two central columns so W_- and W'_- become tails/heads too
    RatMat stdPlus = RatMat::Zero(n, n);
    for (int a = 0; a < n; ++a) stdPlus(a, a) = 1;
    RatMat stdMinus = stdPlus;
    stdMinus.col(r - 1).swap(stdMinus.col(r));
    const RatMat uPlus = g * stdPlus, uMinus = g * stdMinus;
    const RatMat upPlus = gPrime * stdPlus, upMinus = gPrime * stdMinus;

    LevelFlag flag;
    flag.group = Group::SOEven;
    flag.n = n;
    flag.r_seq = rSeq;
    flag.W = flag_from_basis(uPlus, rSeq);
    if (hasPlus) {
        flag.has_plus = true;
        flag.W_plus = tail_space(uPlus, r);
    }
    if (hasMinus) {
        flag.has_minus = true;
        flag.W_minus = tail_space(uMinus, r);
    }

    const Rational closed = mu_level_closed(lambda.flag, flag, theta);

    // shared numeric block maps
    std::vector<RatMat> numericBlocks;
    {
        int prev = 0;
        for (int rj : rSeq) {
            numericBlocks.push_back(cauchy_matrix(rj - prev, rng));
            prev = rj;
        }
    }

    Rational direct = 0;
    const auto halves = build_so_even_halves(r, lambda.weights);

    auto mu_of = [&](const ExplicitRep& rep, const RatMat& h) {
        return mu_direct(rep, rep, h, conv);
    };

    if (caseId == 0) {
        // interior-type half-spin data: one chain through W_k-perp with an
        // orthogonal middle map
        HomChain chain;
        chain.n = n;
        chain.r_seq = rSeq;
        chain.r_seq.push_back(n - rk);
        chain.U = uPlus;
        chain.Uprime = upPlus;
        chain.blocks = numericBlocks;
        chain.blocks.push_back(
            random_isometry(BilinearFormSpec(FormKind::SymmetricEven, n - 2 * rk), rng, 3));
        chain.blocks.push_back(cauchy_matrix(rk, rng));
        for (int i = 1; i <= r - 2; ++i) {
            const ExplicitRep rep = build_exterior_rep(n, i, lambda.weights);
            direct += Rational(theta.theta[i - 1]) * mu_of(rep, completed_hom_component(chain, i));
        }
        const RatMat hr = completed_hom_component(chain, r);
        direct += Rational(theta.theta_plus) * mu_of(halves.first, hr);
        direct += Rational(theta.theta_minus) * mu_of(halves.second, hr);
    } else if (caseId == 3) {
        // both halves present: chains (W_., W_+ + W_-, W_pm)
        auto make_chain = [&](const RatMat& u, const RatMat& up, const RatMat& alphaMid,
                              const Rational& alphaLast) {
            HomChain chain;
            chain.n = n;
            chain.r_seq = rSeq;
            chain.r_seq.push_back(r - 1);
            chain.r_seq.push_back(r);
            chain.U = u;
            chain.Uprime = up;
            chain.blocks = numericBlocks;
            chain.blocks.push_back(alphaMid);
            RatMat last(1, 1);
            last(0, 0) = alphaLast;
            chain.blocks.push_back(last);
            chain.blocks.push_back(cauchy_matrix(r, rng));
            return chain;
        };
        const RatMat alphaMid = cauchy_matrix(r - 1 - rk, rng);
        const HomChain chainPlus =
            make_chain(uPlus, upPlus, alphaMid, rng.nonzero_rational(4, 3));
        const HomChain chainMinus =
            make_chain(uMinus, upMinus, alphaMid, rng.nonzero_rational(4, 3));
        for (int i = 1; i <= r - 2; ++i) {
            const ExplicitRep rep = build_exterior_rep(n, i, lambda.weights);
            direct +=
                Rational(theta.theta[i - 1]) * mu_of(rep, completed_hom_component(chainPlus, i));
        }
        direct += Rational(theta.theta_plus) *
                  mu_of(halves.first, completed_hom_component(chainPlus, r));
        direct += Rational(theta.theta_minus) *
                  mu_of(halves.second, completed_hom_component(chainMinus, r));
    } else {
        // singleton case: the present half has a free top map; the absent one
        // is induced through the form pairing
        const bool presentIsPlus = caseId == 1;
        const RatMat& uPresent = presentIsPlus ? uPlus : uMinus;
        const RatMat& upPresent = presentIsPlus ? upPlus : upMinus;
        HomChain present;
        present.n = n;
        present.r_seq = rSeq;
        present.r_seq.push_back(r);
        present.U = uPresent;
        present.Uprime = upPresent;
        present.blocks = numericBlocks;
        const RatMat alphaTop = cauchy_matrix(r - rk, rng);
        present.blocks.push_back(alphaTop);
        present.blocks.push_back(cauchy_matrix(r, rng));

        for (int i = 1; i <= r - 2; ++i) {
            const ExplicitRep rep = build_exterior_rep(n, i, lambda.weights);
            direct +=
                Rational(theta.theta[i - 1]) * mu_of(rep, completed_hom_component(present, i));
        }
        const RatMat hPresent = completed_hom_component(present, r);

        // induced chain (W_., W_pm, W_k-perp) with the pairing-derived block
        HomChain induced;
        induced.n = n;
        induced.r_seq = rSeq;
        induced.r_seq.push_back(r);
        induced.r_seq.push_back(n - rk);
        induced.U = uPresent;
        induced.Uprime = upPresent;
        induced.blocks = numericBlocks;
        induced.blocks.push_back(alphaTop);
        // derived map on W_pm / W_k-perp from the form pairings
        {
            const RatMat A = form.matrix();
            const int sz = r - rk;
            RatMat b1(sz, sz), b2(sz, sz);
            for (int a = 0; a < sz; ++a)
                for (int b = 0; b < sz; ++b) {
                    b1(a, b) = (uPresent.col(r + a).transpose() * A * uPresent.col(rk + b))(0, 0);
                    b2(a, b) =
                        (upPresent.col(r + a).transpose() * A * upPresent.col(rk + b))(0, 0);
                }
            RatMat alphaInv = alphaTop;
            {
                RatMat aug(sz, 2 * sz);
                aug.block(0, 0, sz, sz) = alphaTop;
                aug.block(0, sz, sz, sz) = RatMat::Zero(sz, sz);
                for (int a = 0; a < sz; ++a) aug(a, sz + a) = 1;
                if (rref_in_place(aug) != sz) throw Error("singular top block");
                alphaInv = aug.block(0, sz, sz, sz);
            }
            RatMat b2Inv = b2;
            {
                RatMat aug(sz, 2 * sz);
                aug.block(0, 0, sz, sz) = b2;
                aug.block(0, sz, sz, sz) = RatMat::Zero(sz, sz);
                for (int a = 0; a < sz; ++a) aug(a, sz + a) = 1;
                if (rref_in_place(aug) != sz) throw Error("degenerate pairing block");
                b2Inv = aug.block(0, sz, sz, sz);
            }
            induced.blocks.push_back(RatMat((b1 * alphaInv * b2Inv).transpose()));
        }
        induced.blocks.push_back(cauchy_matrix(rk, rng));
        std::vector<int> profile(induced.block_count(), 0);
        for (std::size_t j = 0; j < rSeq.size(); ++j)
            profile[j] = induced.block_size(static_cast<int>(j) + 1);
        profile[rSeq.size()] = (r - rk) - 1;
        profile[rSeq.size() + 1] = 1;
        const RatMat hInduced = profile_hom(induced, r, profile);

        const ExplicitRep& plusRep = halves.first;
        const ExplicitRep& minusRep = halves.second;
        if (presentIsPlus) {
            direct += Rational(theta.theta_plus) * mu_of(plusRep, hPresent);
            direct += Rational(theta.theta_minus) * mu_of(minusRep, hInduced);
        } else {
            direct += Rational(theta.theta_minus) * mu_of(minusRep, hPresent);
            direct += Rational(theta.theta_plus) * mu_of(plusRep, hInduced);
        }
    }

    if (closed == direct) return true;
    failDetail = detail_string(trial, "so-even", closed, direct, rSeq, lambda, seed);
    return false;
}

}  // namespace

VerifyReport verify_lemma(level::Group g, int size, int trials, std::uint64_t seed,
                          MuConvention conv, int jobs) {
    if (trials < 0) throw Error("trial count must be nonnegative");
    if (jobs < 1) throw Error("jobs must be positive");
    switch (g) {
        case Group::SL:
            if (size < 2 || size > 5) throw Error("sl size must be within 2..5");
            break;
        case Group::SOOdd:
            if (size < 1 || size > 3) throw Error("so-odd size must be within 1..3");
            break;
        case Group::Sp:
            if (size < 2 || size > 3) throw Error("sp size must be within 2..3");
            break;
        case Group::SOEven:
            if (size < 2 || size > 3) throw Error("so-even size must be within 2..3");
            break;
    }
    VerifyReport report;
    report.group = g;
    report.size = size;
    report.trials = trials;
    report.seed = seed;
    report.convention = conv;
    std::vector<std::string> details(trials);
    std::vector<char> okFlags(trials, 0);
    auto run_range = [&](int lo, int hi) {
        for (int t = lo; t < hi; ++t) {
            bool ok = false;
            try {
                switch (g) {
                    case Group::SL: ok = trial_sl(size, t, seed, conv, details[t]); break;
                    case Group::SOOdd: ok = trial_so_odd(size, t, seed, conv, details[t]); break;
                    case Group::Sp: ok = trial_sp(size, t, seed, conv, details[t]); break;
                    case Group::SOEven:
                        ok = trial_so_even(size, t, seed, conv, details[t]);
                        break;
                }
            } catch (const Error& e) {
                details[t] = "trial " + std::to_string(t) + ": exception: " + e.what();
            }
            okFlags[t] = ok ? 1 : 0;
        }
    };
    if (jobs == 1 || trials <= 1) {
        run_range(0, trials);
    } else {
        const int workers = std::min(jobs, trials);
        std::vector<std::thread> pool;
        for (int wkr = 0; wkr < workers; ++wkr) {
            const int lo = trials * wkr / workers;
            const int hi = trials * (wkr + 1) / workers;
            pool.emplace_back(run_range, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    for (int t = 0; t < trials; ++t) {
        if (okFlags[t])
            ++report.passed;
        else
            report.failures.push_back({t, details[t]});
    }
    return report;
}

std::vector<std::pair<MuConvention, bool>> calibrate_conventions(std::uint64_t seed, int trials) {
    std::vector<std::pair<MuConvention, bool>> out;
    for (const MuConvention conv : all_conventions()) {
        bool pass = true;
        for (int n = 2; n <= 3 && pass; ++n)
            pass = verify_lemma(level::Group::SL, n, trials, seed, conv).all_pass();
        out.emplace_back(conv, pass);
    }
    return out;
}

}  // namespace oracle
}  // namespace hmstab
