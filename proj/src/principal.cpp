#include "hmstab/principal.hpp"

#include <algorithm>

namespace hmstab {

CharacterVector::CharacterVector(std::vector<Int> entries) : chi(std::move(entries)) {
    if (chi.empty()) throw Error("character needs at least one entry");
    const Int lo = *std::min_element(chi.begin(), chi.end());
    for (auto& c : chi) c -= lo;
}

Rational character_pairing(const CharacterVector& chi, const WeightedFlagSpec& flag) {
    if (chi.chi.size() != flag.ambient.labels.size())
        throw Error("character length does not match the flag labels");
    const Int dimW = flag.ambient.total();
    Rational total = 0;
    for (std::size_t t = 0; t < chi.chi.size(); ++t) {
        if (chi.chi[t] == 0) continue;
        Rational inner = 0;
        for (std::size_t j = 0; j < flag.length(); ++j)
            inner += flag.alpha[j] * (Rational(flag.steps[j].total()) * flag.ambient.dims[t] -
                                      Rational(dimW) * flag.steps[j].dims[t]);
        total += Rational(chi.chi[t]) * inner;
    }
    return total;
}

namespace {

StabilityWeights principal_weights(const SplitBundleData& ambient, const CharacterVector& chi) {
    if (chi.chi.size() != ambient.labels.size())
        throw Error("character length does not match the bundle labels");
    std::vector<Rational> kappa(ambient.labels.size(), Rational(1));
    std::vector<Rational> chiw;
    for (Int c : chi.chi) chiw.push_back(Rational(c));
    return StabilityWeights(ambient.labels, std::move(kappa), std::move(chiw));
}

}  // namespace

Rational principal_stability_value(const SplitBundleData& ambient, const PrincipalCase& c,
                                   const Rational& delta, const CharacterVector& chi, int a2) {
    if (sign(delta) <= 0) throw Error("delta must be positive");
    const StabilityWeights w = principal_weights(ambient, chi);
    Rational m2;
    if (std::holds_alternative<SupportSet>(c.dec))
        m2 = mu2_support(ambient, c.flag, a2, std::get<SupportSet>(c.dec), w);
    else
        m2 = mu2_fiber(std::get<FiberDecoration>(c.dec));
    return M_functional(ambient, c.flag, w) + delta * m2;
}

FamilyReport principal_stability_family(const SplitBundleData& ambient,
                                        const std::vector<PrincipalCase>& cases,
                                        const Rational& delta, const CharacterVector& chi,
                                        int a2) {
    std::vector<Rational> values;
    values.reserve(cases.size());
    for (const auto& c : cases)
        values.push_back(principal_stability_value(ambient, c, delta, chi, a2));
    return classify_values(values);
}

void ParabolicStructure::validate() const {
    if (beta.size() != dimU.size()) throw Error("parabolic beta/dimU length mismatch");
    for (const auto& b : beta)
        if (sign(b) <= 0) throw Error("parabolic weights must be positive");
    Rational prev = 0;
    for (const auto& d : dimU) {
        if (!(d > prev)) throw Error("parabolic flag dimensions must be strictly increasing");
        prev = d;
    }
}

bool ParabolicStructure::within_existence_bound() const {
    Rational total = 0;
    for (const auto& b : beta) total += b;
    return total < 1;
}

Rational pardeg(const SplitBundleData& f, const ParabolicStructure& par,
                const std::vector<Rational>& intersections, const StabilityWeights& w) {
    par.validate();
    if (intersections.size() != par.beta.size())
        throw Error("parabolic intersection data length mismatch");
    const Rational rkF = kappa_rank(f, w);
    Rational prev = -1;
    for (std::size_t i = 0; i < intersections.size(); ++i) {
        const Rational& d = intersections[i];
        if (sign(d) < 0 || d > par.dimU[i] || d > rkF)
            throw Error("parabolic intersection dimension out of bounds");
        if (d < prev) throw Error("parabolic intersections must be monotone");
        prev = d;
    }
    Rational total = kc_degree(f, w);
    for (std::size_t i = 0; i < par.beta.size(); ++i) total += par.beta[i] * intersections[i];
    return total;
}

Rational parabolic_value(const SplitBundleData& ambient, const ParabolicFlagCase& c,
                         const ParabolicStructure& par, const StabilityWeights& w) {
    c.flag.validate(ambient, w);
    if (c.step_intersections.size() != c.flag.length())
        throw Error("parabolic intersection data missing for some step");
    const Rational parE = pardeg(ambient, par, par.dimU, w);
    const Rational rkE = kappa_rank(ambient, w);
    Rational total = 0;
    for (std::size_t j = 0; j < c.flag.length(); ++j) {
        const Rational parStep = pardeg(c.flag.steps[j], par, c.step_intersections[j], w);
        total += c.flag.alpha[j] * (parE * kappa_rank(c.flag.steps[j], w) - parStep * rkE);
    }
    return total;
}

FamilyReport parabolic_check(const SplitBundleData& ambient,
                             const std::vector<ParabolicFlagCase>& cases,
                             const ParabolicStructure& par, const StabilityWeights& w) {
    std::vector<Rational> values;
    values.reserve(cases.size());
    for (const auto& c : cases) values.push_back(parabolic_value(ambient, c, par, w));
    return classify_values(values);
}

ParabolicRep parabolic_rep_weights(const WeightedSpace& wTot, const std::vector<Int>& rSeq,
                                   const std::vector<Rational>& beta) {
    if (rSeq.size() != beta.size()) throw Error("flag type and beta length mismatch");
    if (rSeq.empty()) throw Error("parabolic representation needs at least one step");
    const Int r = static_cast<Int>(wTot.dim());
    Int prev = 0;
    for (Int ri : rSeq) {
        if (ri <= prev || ri >= r) throw Error("flag type must be strictly increasing and proper");
        prev = ri;
    }
    for (const auto& b : beta)
        if (sign(b) <= 0) throw Error("beta weights must be positive");

    ParabolicRep out;
    out.z = common_denominator(beta);
    out.homogeneity_degree = 0;
    bool first = true;
    WeightedSpace space;
    for (std::size_t i = 0; i < rSeq.size(); ++i) {
        const Rational zb = Rational(out.z) * beta[i];
        const long power = zb.get_num().get_si();
        WeightedSpace factor = tensor_power(exterior_power(wTot, static_cast<int>(r - rSeq[i])),
                                            static_cast<int>(power));
        space = first ? std::move(factor) : tensor(space, factor);
        first = false;
        out.homogeneity_degree += Rational(out.z) * beta[i] * Rational(r - rSeq[i]);
    }
    out.space = std::move(space);
    // homogeneity witness: with every base weight set to one, each induced
    // label must carry exactly the stated degree
    {
        WeightedSpace ones(wTot.labels, std::vector<Rational>(wTot.dim(), Rational(1)));
        bool first = true;
        WeightedSpace witness;
        for (std::size_t i = 0; i < rSeq.size(); ++i) {
            const Rational zb = Rational(out.z) * beta[i];
            WeightedSpace factor =
                tensor_power(exterior_power(ones, static_cast<int>(r - rSeq[i])),
                             static_cast<int>(zb.get_num().get_si()));
            witness = first ? std::move(factor) : tensor(witness, factor);
            first = false;
        }
        for (const auto& weight : witness.weights)
            if (weight != out.homogeneity_degree)
                throw Error("parabolic representation is not homogeneous of the stated degree");
    }
    return out;
}

}  // namespace hmstab
