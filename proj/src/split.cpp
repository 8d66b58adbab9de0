#include "hmstab/split.hpp"

namespace hmstab {

DimensionVector::DimensionVector(std::vector<std::string> labels_, std::vector<Int> dims_)
    : labels(std::move(labels_)), dims(std::move(dims_)) {
    if (labels.empty()) throw Error("dimension vector needs at least one label");
    if (labels.size() != dims.size()) throw Error("labels and dims length mismatch");
    for (Int d : dims)
        if (d < 0) throw Error("negative dimension");
}

Int DimensionVector::total() const {
    Int t = 0;
    for (Int d : dims) t += d;
    return t;
}

bool DimensionVector::leq(const DimensionVector& other) const {
    if (!same_labels(other)) return false;
    for (std::size_t i = 0; i < dims.size(); ++i)
        if (dims[i] > other.dims[i]) return false;
    return true;
}

StabilityWeights::StabilityWeights(std::vector<std::string> labels_, std::vector<Rational> kappa_,
                                   std::vector<Rational> chi_)
    : labels(std::move(labels_)), kappa(std::move(kappa_)), chi(std::move(chi_)) {
    if (labels.empty()) throw Error("stability weights need at least one label");
    if (kappa.size() != labels.size() || chi.size() != labels.size())
        throw Error("kappa/chi length mismatch");
    for (const auto& k : kappa)
        if (sign(k) <= 0) throw Error("kappa weights must be positive");
}

StabilityWeights StabilityWeights::ones(const std::vector<std::string>& labels) {
    return StabilityWeights(labels, std::vector<Rational>(labels.size(), Rational(1)),
                            std::vector<Rational>(labels.size(), Rational(0)));
}

namespace {

void require_labels(const std::vector<std::string>& a, const std::vector<std::string>& b,
                    const char* where) {
    if (a != b) throw Error(std::string("label mismatch in ") + where);
}

}  // namespace

Rational kappa_dimension(const DimensionVector& d, const StabilityWeights& w) {
    require_labels(d.labels, w.labels, "kappa_dimension");
    Rational total = 0;
    for (std::size_t i = 0; i < d.dims.size(); ++i) total += w.kappa[i] * d.dims[i];
    return total;
}

Rational chi_dimension(const DimensionVector& d, const StabilityWeights& w) {
    require_labels(d.labels, w.labels, "chi_dimension");
    Rational total = 0;
    for (std::size_t i = 0; i < d.dims.size(); ++i) total += w.chi[i] * d.dims[i];
    return total;
}

WeightedFlagSpec::WeightedFlagSpec(DimensionVector ambient_, std::vector<DimensionVector> steps_,
                                   std::vector<Rational> alpha_, const StabilityWeights& w)
    : ambient(std::move(ambient_)), steps(std::move(steps_)), alpha(std::move(alpha_)) {
    if (steps.size() != alpha.size()) throw Error("flag steps and alpha length mismatch");
    const Rational ambientK = kappa_dimension(ambient, w);
    Rational prevK = 0;
    const DimensionVector* prev = nullptr;
    for (const auto& step : steps) {
        if (!step.leq(ambient)) throw Error("flag step exceeds ambient dimensions");
        if (prev && !prev->leq(step)) throw Error("flag steps must be increasing");
        const Rational k = kappa_dimension(step, w);
        if (!(k > prevK)) throw Error("flag steps must be strictly increasing in kappa-total");
        if (!(k < ambientK)) throw Error("flag step must be a proper subspace");
        prevK = k;
        prev = &step;
    }
    for (const auto& a : alpha)
        if (sign(a) <= 0) throw Error("flag weights must be positive");
}

void OneParamSubgroup::validate(const StabilityWeights& w) const {
    if (blocks.empty()) throw Error("one-parameter subgroup needs at least one block");
    std::vector<Int> sum(ambient.dims.size(), 0);
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (i + 1 < blocks.size() && !(blocks[i].gamma < blocks[i + 1].gamma))
            throw Error("eigen-weights must be strictly increasing");
        if (!blocks[i].eigendims.same_labels(ambient))
            throw Error("eigenspace label mismatch");
        for (std::size_t t = 0; t < sum.size(); ++t) sum[t] += blocks[i].eigendims.dims[t];
    }
    if (sum != ambient.dims) throw Error("eigenspace dimensions do not sum to the ambient");
    if (special) {
        Rational trace = 0;
        for (const auto& b : blocks) trace += b.gamma * kappa_dimension(b.eigendims, w);
        if (trace != 0) throw Error("special one-parameter subgroup violates the trace condition");
    }
}

std::vector<Rational> gamma_weights(const WeightedFlagSpec& flag, const StabilityWeights& w) {
    const std::size_t k = flag.length();
    const Rational ambientK = kappa_dimension(flag.ambient, w);
    Rational head = 0;  // sum_j alpha_j dim_kappa(V_j)
    for (std::size_t j = 0; j < k; ++j) head += flag.alpha[j] * kappa_dimension(flag.steps[j], w);
    std::vector<Rational> gamma(k + 1);
    // gamma_i = head - sum_{j=i..k} alpha_j * dim_kappa(V)
    Rational tail = 0;
    for (std::size_t j = 0; j < k; ++j) tail += flag.alpha[j] * ambientK;
    for (std::size_t i = 0; i <= k; ++i) {
        gamma[i] = head - tail;
        if (i < k) tail -= flag.alpha[i] * ambientK;
    }
    return gamma;
}

OneParamSubgroup flag_to_one_ps(const WeightedFlagSpec& flag, const StabilityWeights& w) {
    const std::size_t k = flag.length();
    const std::vector<Rational> gamma = gamma_weights(flag, w);
    OneParamSubgroup lam;
    lam.ambient = flag.ambient;
    lam.special = true;
    lam.blocks.resize(k + 1);
    std::vector<Int> prev(flag.ambient.dims.size(), 0);
    for (std::size_t i = 0; i <= k; ++i) {
        const std::vector<Int>& cur = (i < k) ? flag.steps[i].dims : flag.ambient.dims;
        std::vector<Int> diff(cur.size());
        for (std::size_t t = 0; t < cur.size(); ++t) diff[t] = cur[t] - prev[t];
        lam.blocks[i].gamma = gamma[i];
        lam.blocks[i].eigendims = DimensionVector(flag.ambient.labels, diff);
        prev = cur;
    }
    lam.validate(w);
    return lam;
}

IntegralWeights integral_weights(const OneParamSubgroup& lam) {
    std::vector<Rational> gammas;
    gammas.reserve(lam.blocks.size());
    for (const auto& b : lam.blocks) gammas.push_back(b.gamma);
    IntegralWeights out;
    out.scale = common_denominator(gammas);
    for (const auto& g : gammas) {
        Rational scaled = g * Rational(out.scale);
        out.weights.push_back(scaled.get_num());
    }
    return out;
}

WeightedFlagSpec one_ps_to_flag(const OneParamSubgroup& lam, const StabilityWeights& w) {
    lam.validate(w);
    const Rational ambientK = kappa_dimension(lam.ambient, w);
    if (ambientK == 0) throw Error("ambient kappa-dimension is zero");
    std::vector<DimensionVector> steps;
    std::vector<Rational> alpha;
    std::vector<Int> running(lam.ambient.dims.size(), 0);
    for (std::size_t i = 0; i + 1 < lam.blocks.size(); ++i) {
        for (std::size_t t = 0; t < running.size(); ++t)
            running[t] += lam.blocks[i].eigendims.dims[t];
        steps.emplace_back(lam.ambient.labels, running);
        alpha.push_back((lam.blocks[i + 1].gamma - lam.blocks[i].gamma) / ambientK);
    }
    return WeightedFlagSpec(lam.ambient, std::move(steps), std::move(alpha), w);
}

}  // namespace hmstab
