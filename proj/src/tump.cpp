#include "hmstab/tump.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace hmstab {

SplitBundleData::SplitBundleData(std::vector<std::string> labels_, std::vector<Int> ranks_,
                                 std::vector<Int> degrees_)
    : labels(std::move(labels_)), ranks(std::move(ranks_)), degrees(std::move(degrees_)) {
    if (labels.empty()) throw Error("bundle data needs at least one label");
    if (ranks.size() != labels.size() || degrees.size() != labels.size())
        throw Error("ranks/degrees length mismatch");
    bool any = false;
    for (Int r : ranks) {
        if (r < 0) throw Error("negative rank");
        any = any || r > 0;
    }
    if (!any) throw Error("bundle data must have positive total rank");
}

namespace {
void require_labels(const std::vector<std::string>& a, const std::vector<std::string>& b,
                    const char* where) {
    if (a != b) throw Error(std::string("label mismatch in ") + where);
}
}  // namespace

Rational kappa_rank(const SplitBundleData& b, const StabilityWeights& w) {
    require_labels(b.labels, w.labels, "kappa_rank");
    Rational total = 0;
    for (std::size_t t = 0; t < b.ranks.size(); ++t) total += w.kappa[t] * b.ranks[t];
    return total;
}

Rational chi_rank(const SplitBundleData& b, const StabilityWeights& w) {
    require_labels(b.labels, w.labels, "chi_rank");
    Rational total = 0;
    for (std::size_t t = 0; t < b.ranks.size(); ++t) total += w.chi[t] * b.ranks[t];
    return total;
}

Rational kc_degree(const SplitBundleData& b, const StabilityWeights& w) {
    require_labels(b.labels, w.labels, "kc_degree");
    Rational total = 0;
    for (std::size_t t = 0; t < b.ranks.size(); ++t)
        total += w.kappa[t] * b.degrees[t] + w.chi[t] * b.ranks[t];
    return total;
}

SlopeData slope_kappa_chi(const SplitBundleData& b, const StabilityWeights& w) {
    SlopeData out;
    out.chi_rank = chi_rank(b, w);
    out.kc_degree = kc_degree(b, w);
    const Rational rk = kappa_rank(b, w);
    if (rk != 0) out.slope = out.kc_degree / rk;
    return out;
}

void BundleFlag::validate(const SplitBundleData& ambient, const StabilityWeights& w) const {
    if (steps.size() != alpha.size()) throw Error("flag steps and alpha length mismatch");
    const Rational ambientRk = kappa_rank(ambient, w);
    Rational prev = 0;
    for (const auto& step : steps) {
        require_labels(step.labels, ambient.labels, "bundle flag");
        for (std::size_t t = 0; t < step.ranks.size(); ++t)
            if (step.ranks[t] > ambient.ranks[t])
                throw Error("flag step rank exceeds the ambient rank");
        const Rational rk = kappa_rank(step, w);
        if (!(rk > prev)) throw Error("flag steps must be strictly increasing in kappa-rank");
        if (!(rk < ambientRk)) throw Error("flag step must be proper");
        prev = rk;
    }
    for (const auto& a : alpha)
        if (sign(a) <= 0) throw Error("flag weights must be positive");
}

Rational M_functional(const SplitBundleData& ambient, const BundleFlag& flag,
                      const StabilityWeights& w) {
    flag.validate(ambient, w);
    const Rational degE = kc_degree(ambient, w);
    const Rational rkE = kappa_rank(ambient, w);
    Rational total = 0;
    for (std::size_t j = 0; j < flag.length(); ++j)
        total += flag.alpha[j] *
                 (degE * kappa_rank(flag.steps[j], w) - kc_degree(flag.steps[j], w) * rkE);
    return total;
}

void SupportSet::validate(std::size_t flagLength) const {
    if (arity < 1) throw Error("support arity must be positive");
    if (indices.empty()) throw Error("support must be nonempty");
    for (const auto& idx : indices) {
        if (idx.size() != static_cast<std::size_t>(arity))
            throw Error("support multi-index has wrong arity");
        for (int v : idx)
            if (v < 1 || v > static_cast<int>(flagLength) + 1)
                throw Error("support multi-index entry out of range");
    }
}

int nu(const std::vector<int>& index, int j) {
    int count = 0;
    for (int v : index)
        if (v <= j) ++count;
    return count;
}

Rational mu_support(const SplitBundleData& ambient, const BundleFlag& flag, int arity,
                    const SupportSet& support, const StabilityWeights& w) {
    flag.validate(ambient, w);
    if (support.arity != arity) throw Error("support arity mismatch");
    support.validate(flag.length());
    const Rational rkE = kappa_rank(ambient, w);
    std::vector<Rational> stepRk;
    stepRk.reserve(flag.length());
    for (const auto& s : flag.steps) stepRk.push_back(kappa_rank(s, w));
    bool first = true;
    Rational minv;
    for (const auto& idx : support.indices) {
        Rational v = 0;
        for (std::size_t j = 0; j < flag.length(); ++j)
            v += flag.alpha[j] * (Rational(arity) * stepRk[j] - rkE * nu(idx, static_cast<int>(j) + 1));
        if (first || v < minv) {
            minv = v;
            first = false;
        }
    }
    return -minv;
}

Rational mu2_fiber(const FiberDecoration& dec) { return mu_point(dec.sigma_space, dec.point); }

FiberDecoration make_fiber_decoration(const SplitBundleData& ambient, const BundleFlag& flag,
                                      const StabilityWeights& w, int arity, int detTwist,
                                      std::vector<std::size_t> support) {
    flag.validate(ambient, w);
    for (const auto& k : w.kappa)
        if (!is_integer(k)) throw Error("fiber decorations need integral kappa");
    // Block sizes of the kappa-total fiber: contributions of E_j/E_{j-1}.
    const std::size_t k = flag.length();
    std::vector<Int> blockSizes(k + 1, 0);
    std::vector<Int> prev(ambient.labels.size(), 0);
    for (std::size_t j = 0; j <= k; ++j) {
        const std::vector<Int>& cur = (j < k) ? flag.steps[j].ranks : ambient.ranks;
        for (std::size_t t = 0; t < cur.size(); ++t)
            blockSizes[j] += w.kappa[t].get_num().get_si() * (cur[t] - prev[t]);
        prev = cur;
    }
    // gamma weights of the flag, reused as fiber block weights
    WeightedFlagSpec dimFlag;
    {
        std::vector<DimensionVector> steps;
        for (const auto& s : flag.steps) steps.push_back(s.rank_vector());
        dimFlag = WeightedFlagSpec(ambient.rank_vector(), std::move(steps), flag.alpha, w);
    }
    const std::vector<Rational> gammas = weights_from_flag(dimFlag, w);
    FiberDecoration dec;
    WeightedSpace base = block_weighted_basis(blockSizes, gammas);
    dec.block_of_base.reserve(base.dim());
    for (std::size_t j = 0; j <= k; ++j)
        for (Int c = 0; c < blockSizes[j]; ++c) dec.block_of_base.push_back(static_cast<int>(j) + 1);
    WeightedSpace space = tensor_power(base, arity);
    if (detTwist != 0) space = det_twist(space, detTwist);
    dec.sigma_space = std::move(space);
    dec.point.support = std::move(support);
    dec.point.kind = SupportPoint::Kind::Form;
    if (dec.point.support.empty()) throw Error("fiber decoration needs a nonempty support");
    for (auto idx : dec.point.support)
        if (idx >= dec.sigma_space.dim()) throw Error("fiber support index out of range");
    return dec;
}

SupportSet support_from_fiber(const FiberDecoration& dec) {
    SupportSet out;
    std::set<std::vector<int>> seen;
    out.arity = 0;
    for (std::size_t idx : dec.point.support) {
        const auto& factors = dec.sigma_space.factors.at(idx);
        std::vector<int> blocks;
        blocks.reserve(factors.size());
        for (int pos : factors) blocks.push_back(dec.block_of_base.at(pos));
        out.arity = static_cast<int>(blocks.size());
        if (seen.insert(blocks).second) out.indices.push_back(std::move(blocks));
    }
    return out;
}

void StabilityParams::validate() const {
    if (sign(delta1) <= 0 || sign(delta2) <= 0) throw Error("delta parameters must be positive");
    if (a1 < 1 || a2 < 1) throw Error("tensor arities must be positive");
}

Rational mu2_of(const SplitBundleData& ambient, const TumpCase& c, int a2,
                const StabilityWeights& w) {
    if (std::holds_alternative<SupportSet>(c.dec))
        return mu2_support(ambient, c.flag, a2, std::get<SupportSet>(c.dec), w);
    return mu2_fiber(std::get<FiberDecoration>(c.dec));
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Unstable: return "UNSTABLE";
        case Verdict::StrictlySemistable: return "STRICTLY-SEMISTABLE";
        case Verdict::NoViolationFound: return "NO-VIOLATION-FOUND";
    }
    return "?";
}

FamilyReport classify_values(const std::vector<Rational>& values) {
    FamilyReport report;
    report.values = values;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const int s = sign(values[i]);
        if (s < 0) {
            if (report.verdict != Verdict::Unstable) {
                report.verdict = Verdict::Unstable;
                report.witness = i;
            }
        } else if (s == 0) {
            report.critical.push_back(i);
            if (report.verdict == Verdict::NoViolationFound) {
                report.verdict = Verdict::StrictlySemistable;
                report.witness = i;
            }
        }
    }
    return report;
}

Rational stability_value(const SplitBundleData& ambient, const TumpCase& c,
                         const StabilityParams& params) {
    params.validate();
    const Rational M = M_functional(ambient, c.flag, params.weights);
    const Rational m1 = mu1_support(ambient, c.flag, params.a1, c.phi, params.weights);
    const Rational m2 = mu2_of(ambient, c, params.a2, params.weights);
    return M + params.delta1 * m1 + params.delta2 * m2;
}

FamilyReport stability_family(const SplitBundleData& ambient, const std::vector<TumpCase>& cases,
                              const StabilityParams& params) {
    std::vector<Rational> values;
    values.reserve(cases.size());
    for (const auto& c : cases) values.push_back(stability_value(ambient, c, params));
    return classify_values(values);
}

FamilyReport asymptotic_family(const SplitBundleData& ambient, const std::vector<TumpCase>& cases,
                               const Rational& delta2, const StabilityWeights& w, int a1, int a2) {
    // Encode the per-flag status as a sign: mu1 > 0 passes outright, mu1 < 0
    // fails outright, mu1 = 0 defers to the residual M + delta2 mu2.
    std::vector<Rational> values;
    values.reserve(cases.size());
    for (const auto& c : cases) {
        const Rational m1 = mu1_support(ambient, c.flag, a1, c.phi, w);
        const int s = sign(m1);
        if (s > 0)
            values.push_back(Rational(1));
        else if (s < 0)
            values.push_back(Rational(-1));
        else
            values.push_back(M_functional(ambient, c.flag, w) + delta2 * mu2_of(ambient, c, a2, w));
    }
    return classify_values(values);
}

void H0Data::validate(const SplitBundleData& ambient, const BundleFlag& flag) const {
    if (ambient_h0.size() != ambient.labels.size()) throw Error("h0 data length mismatch");
    if (step_h0.size() != flag.length()) throw Error("h0 data missing for some flag step");
    for (const auto& step : step_h0) {
        if (step.size() != ambient.labels.size()) throw Error("h0 step length mismatch");
        for (std::size_t t = 0; t < step.size(); ++t) {
            if (step[t] < 0 || ambient_h0[t] < 0) throw Error("h0 values must be nonnegative");
            if (step[t] > ambient_h0[t]) throw Error("h0 of a step exceeds the ambient h0");
        }
    }
}

Rational h0_kc(const std::vector<Int>& h0, const SplitBundleData& b, const StabilityWeights& w) {
    require_labels(b.labels, w.labels, "h0_kc");
    if (h0.size() != b.labels.size()) throw Error("h0 length mismatch");
    Rational total = 0;
    for (std::size_t t = 0; t < h0.size(); ++t)
        total += w.kappa[t] * h0[t] + w.chi[t] * b.ranks[t];
    return total;
}

Rational Ms_functional(const SplitBundleData& ambient, const BundleFlag& flag,
                       const StabilityWeights& w, const H0Data& h0) {
    flag.validate(ambient, w);
    h0.validate(ambient, flag);
    const Rational h0E = h0_kc(h0.ambient_h0, ambient, w);
    const Rational rkE = kappa_rank(ambient, w);
    Rational total = 0;
    for (std::size_t j = 0; j < flag.length(); ++j)
        total += flag.alpha[j] * (h0E * kappa_rank(flag.steps[j], w) -
                                  h0_kc(h0.step_h0[j], flag.steps[j], w) * rkE);
    return total;
}

namespace {

Rational gies_min_weight(const std::vector<Rational>& kdimY, const std::vector<Rational>& alpha,
                         const Rational& pn, int arity, const SupportSet& support) {
    support.validate(kdimY.size());
    if (support.arity != arity) throw Error("gieseker support arity mismatch");
    bool first = true;
    Rational minv;
    for (const auto& idx : support.indices) {
        Rational v = 0;
        for (std::size_t j = 0; j < kdimY.size(); ++j)
            v += alpha[j] * (Rational(arity) * kdimY[j] - pn * nu(idx, static_cast<int>(j) + 1));
        if (first || v < minv) {
            minv = v;
            first = false;
        }
    }
    return -minv;
}

}  // namespace

GiesWeights gies_weights(const GiesInput& in) {
    if (in.kdimY.size() != in.alpha.size()) throw Error("gieseker flag length mismatch");
    for (const auto& sub : in.subRanks)
        if (sub.size() != in.kdimY.size()) throw Error("gieseker subbundle rank data mismatch");
    if (in.subRanks.size() != in.ranks.size()) throw Error("gieseker label count mismatch");
    GiesWeights out;
    out.mu0.resize(in.ranks.size(), Rational(0));
    for (std::size_t t = 0; t < in.ranks.size(); ++t)
        for (std::size_t j = 0; j < in.kdimY.size(); ++j)
            out.mu0[t] +=
                in.alpha[j] * (in.pn * in.subRanks[t][j] - Rational(in.ranks[t]) * in.kdimY[j]);
    out.mu1 = gies_min_weight(in.kdimY, in.alpha, in.pn, in.a1, in.sup1);
    out.mu2 = gies_min_weight(in.kdimY, in.alpha, in.pn, in.a2, in.sup2);
    return out;
}

std::pair<Rational, Rational> gies_mu2_bounds(const GiesInput& in) {
    Rational low = 0, high = 0;
    for (std::size_t j = 0; j < in.kdimY.size(); ++j) {
        low -= Rational(in.a2) * in.alpha[j] * in.kdimY[j];
        high += Rational(in.a2) * in.alpha[j] * (in.pn - in.kdimY[j]);
    }
    return {low, high};
}

LinearizationResult linearization_params(const Integer& z, const StabilityWeights& w,
                                         const Rational& pn, const Rational& r,
                                         const Rational& rChiPairing, int a1, int a2,
                                         const Rational& delta1, const Rational& delta2) {
    if (z <= 0) throw Error("z must be a positive integer");
    if (sign(delta1) <= 0 || sign(delta2) <= 0) throw Error("delta parameters must be positive");
    const Rational core = pn + rChiPairing - Rational(a1) * delta1 - Rational(a2) * delta2;
    LinearizationResult out;
    std::vector<Rational> bases;
    for (std::size_t t = 0; t < w.labels.size(); ++t) {
        const Rational etaBase = w.kappa[t] * core - r * w.chi[t];
        if (sign(etaBase) <= 0)
            throw LinearizationInfeasible("eta for label '" + w.labels[t] +
                                          "' is nonpositive for every z");
        bases.push_back(etaBase);
        out.eta.push_back(Rational(z) * etaBase);
    }
    const Rational t1 = r * delta1, t2 = r * delta2;
    if (sign(t1) <= 0 || sign(t2) <= 0)
        throw LinearizationInfeasible("theta weights are nonpositive for every z");
    out.theta1 = Rational(z) * t1;
    out.theta2 = Rational(z) * t2;
    bases.push_back(t1);
    bases.push_back(t2);
    out.minimal_z = common_denominator(bases);
    return out;
}

namespace {

// 1 + number of distinct level weights strictly below the minimum supported one.
std::size_t level_index(const std::vector<Rational>& allWeights,
                        const std::vector<Rational>& supportWeights, Rational& minOut) {
    bool first = true;
    for (const auto& v : supportWeights)
        if (first || v < minOut) {
            minOut = v;
            first = false;
        }
    std::set<Rational> below;
    for (const auto& v : allWeights)
        if (v < minOut) below.insert(v);
    return below.size() + 1;
}

}  // namespace

DeformationResult admissible_deformation(const SplitBundleData& ambient, const BundleFlag& flag,
                                         int a1, const SupportSet& phi, const FiberDecoration& dec,
                                         const StabilityWeights& w) {
    flag.validate(ambient, w);
    phi.validate(flag.length());
    if (phi.arity != a1) throw Error("phi support arity mismatch");
    DeformationResult out;
    // graded pieces E_j / E_{j-1}
    std::vector<Int> prevR(ambient.labels.size(), 0), prevD(ambient.labels.size(), 0);
    for (std::size_t j = 0; j <= flag.length(); ++j) {
        const std::vector<Int>& curR = (j < flag.length()) ? flag.steps[j].ranks : ambient.ranks;
        const std::vector<Int>& curD = (j < flag.length()) ? flag.steps[j].degrees : ambient.degrees;
        std::vector<Int> r(curR.size()), d(curD.size());
        bool nonzero = false;
        for (std::size_t t = 0; t < curR.size(); ++t) {
            r[t] = curR[t] - prevR[t];
            d[t] = curD[t] - prevD[t];
            nonzero = nonzero || r[t] > 0;
        }
        if (!nonzero) throw Error("graded piece of the flag has rank zero");
        out.graded.emplace_back(ambient.labels, r, d);
        prevR = curR;
        prevD = curD;
    }
    // phi side: weight of a multi-index is the mu1 argument
    {
        const Rational rkE = kappa_rank(ambient, w);
        std::vector<Rational> stepRk;
        for (const auto& s : flag.steps) stepRk.push_back(kappa_rank(s, w));
        auto indexWeight = [&](const std::vector<int>& idx) {
            Rational v = 0;
            for (std::size_t j = 0; j < flag.length(); ++j)
                v += flag.alpha[j] *
                     (Rational(a1) * stepRk[j] - rkE * nu(idx, static_cast<int>(j) + 1));
            return v;
        };
        // all levels of the full index set {1..k+1}^a1
        std::vector<Rational> all;
        std::vector<int> idx(a1, 1);
        const int top = static_cast<int>(flag.length()) + 1;
        while (true) {
            all.push_back(indexWeight(idx));
            int pos = a1 - 1;
            while (pos >= 0 && idx[pos] == top) idx[pos--] = 1;
            if (pos < 0) break;
            ++idx[pos];
        }
        std::vector<Rational> supWeights;
        for (const auto& i : phi.indices) supWeights.push_back(indexWeight(i));
        Rational minw;
        out.i0 = level_index(all, supWeights, minw);
        out.deformed_phi.arity = a1;
        for (std::size_t i = 0; i < phi.indices.size(); ++i)
            if (supWeights[i] == minw) out.deformed_phi.indices.push_back(phi.indices[i]);
    }
    // s side: keep exactly the minimal-weight components
    {
        std::vector<Rational> supWeights;
        for (std::size_t idx : dec.point.support) supWeights.push_back(dec.sigma_space.weights.at(idx));
        Rational minw;
        out.j0 = level_index(dec.sigma_space.weights, supWeights, minw);
        out.deformed_dec = dec;
        out.deformed_dec.point.support.clear();
        for (std::size_t idx : dec.point.support)
            if (dec.sigma_space.weights[idx] == minw) out.deformed_dec.point.support.push_back(idx);
    }
    return out;
}

std::vector<Wall> delta_wall_scan(const SplitBundleData& ambient,
                                  const std::vector<TumpCase>& cases, const Rational& delta2,
                                  const StabilityWeights& w, int a1, int a2, const Rational& lo,
                                  const Rational& hi) {
    if (hi < lo) throw Error("wall scan interval is empty");
    std::map<Rational, std::vector<std::size_t>> walls;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const Rational m1 = mu1_support(ambient, cases[i].flag, a1, cases[i].phi, w);
        if (m1 == 0) continue;
        const Rational rest =
            M_functional(ambient, cases[i].flag, w) + delta2 * mu2_of(ambient, cases[i], a2, w);
        const Rational root = -rest / m1;
        if (root < lo || root > hi) continue;
        walls[root].push_back(i);
    }
    std::vector<Wall> out;
    for (auto& [root, witnesses] : walls) out.push_back({root, std::move(witnesses)});
    return out;
}

ToyHnResult toy_hn(const std::vector<std::vector<Int>>& degreesPerLabel) {
    std::vector<Int> all;
    for (const auto& degs : degreesPerLabel) all.insert(all.end(), degs.begin(), degs.end());
    if (all.empty()) throw Error("toy HN input must be nonempty");
    ToyHnResult out;
    out.mu_max = *std::max_element(all.begin(), all.end());
    out.mu_min = *std::min_element(all.begin(), all.end());
    std::set<Int, std::greater<Int>> distinct(all.begin(), all.end());
    out.slopes.assign(distinct.begin(), distinct.end());
    return out;
}

}  // namespace hmstab
