#include "hmstab/weighted_space.hpp"

#include <algorithm>
#include <set>

namespace hmstab {

WeightedSpace::WeightedSpace(std::vector<std::string> labels_, std::vector<Rational> weights_)
    : labels(std::move(labels_)), weights(std::move(weights_)) {
    if (labels.empty()) throw Error("weighted space needs a nonempty basis");
    if (labels.size() != weights.size()) throw Error("labels and weights length mismatch");
    std::set<std::string> seen(labels.begin(), labels.end());
    if (seen.size() != labels.size()) throw Error("basis labels must be distinct");
    factors.resize(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) factors[i] = {static_cast<int>(i)};
}

Rational mu_point(const WeightedSpace& space, const SupportPoint& pt) {
    if (pt.support.empty()) throw Error("support must be nonempty");
    bool first = true;
    Rational minw;
    for (std::size_t idx : pt.support) {
        if (idx >= space.dim()) throw Error("support index out of range");
        if (first || space.weights[idx] < minw) {
            minw = space.weights[idx];
            first = false;
        }
    }
    return -minw;
}

WeightedSpace tensor(const WeightedSpace& a, const WeightedSpace& b) {
    WeightedSpace out;
    out.labels.reserve(a.dim() * b.dim());
    out.weights.reserve(a.dim() * b.dim());
    out.factors.reserve(a.dim() * b.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < b.dim(); ++j) {
            out.labels.push_back(a.labels[i] + "⊗" + b.labels[j]);
            out.weights.push_back(a.weights[i] + b.weights[j]);
            std::vector<int> f = a.factors[i];
            f.insert(f.end(), b.factors[j].begin(), b.factors[j].end());
            out.factors.push_back(std::move(f));
        }
    return out;
}

WeightedSpace tensor_power(const WeightedSpace& base, int a) {
    if (a < 1) throw Error("tensor power needs a >= 1");
    WeightedSpace out = base;
    for (int i = 1; i < a; ++i) out = tensor(out, base);
    return out;
}

WeightedSpace direct_sum_power(const WeightedSpace& base, int b) {
    if (b < 1) throw Error("direct sum power needs b >= 1");
    if (b == 1) return base;
    WeightedSpace out;
    for (int copy = 0; copy < b; ++copy)
        for (std::size_t i = 0; i < base.dim(); ++i) {
            out.labels.push_back(base.labels[i] + "#" + std::to_string(copy + 1));
            out.weights.push_back(base.weights[i]);
            out.factors.push_back(base.factors[i]);
        }
    return out;
}

namespace {

// Enumerates sorted index tuples; strict = subsets, else multisets.
void combinations(std::size_t n, int p, bool strict, std::vector<std::vector<std::size_t>>& out) {
    std::vector<std::size_t> cur;
    cur.reserve(p);
    auto rec = [&](auto&& self, std::size_t start) -> void {
        if (static_cast<int>(cur.size()) == p) {
            out.push_back(cur);
            return;
        }
        for (std::size_t i = start; i < n; ++i) {
            cur.push_back(i);
            self(self, strict ? i + 1 : i);
            cur.pop_back();
        }
    };
    rec(rec, 0);
}

WeightedSpace power_space(const WeightedSpace& base, int p, bool strict, const char* sep) {
    if (p < 1) throw Error("power degree must be >= 1");
    if (strict && static_cast<std::size_t>(p) > base.dim())
        throw Error("exterior power exceeds dimension");
    std::vector<std::vector<std::size_t>> tuples;
    combinations(base.dim(), p, strict, tuples);
    WeightedSpace out;
    for (const auto& tup : tuples) {
        std::string label;
        Rational weight = 0;
        std::vector<int> f;
        for (std::size_t k = 0; k < tup.size(); ++k) {
            if (k > 0) label += sep;
            label += base.labels[tup[k]];
            weight += base.weights[tup[k]];
            f.insert(f.end(), base.factors[tup[k]].begin(), base.factors[tup[k]].end());
        }
        out.labels.push_back(std::move(label));
        out.weights.push_back(std::move(weight));
        out.factors.push_back(std::move(f));
    }
    return out;
}

}  // namespace

WeightedSpace exterior_power(const WeightedSpace& base, int p) {
    return power_space(base, p, true, "∧");
}

WeightedSpace symmetric_power(const WeightedSpace& base, int p) {
    return power_space(base, p, false, "·");
}

WeightedSpace dual(const WeightedSpace& base) {
    WeightedSpace out = base;
    for (std::size_t i = 0; i < out.dim(); ++i) {
        out.labels[i] += "*";
        out.weights[i] = -out.weights[i];
    }
    return out;
}

WeightedSpace det_twist(const WeightedSpace& base, int c) {
    Rational total = 0;
    for (const auto& w : base.weights) total += w;
    WeightedSpace out = base;
    const Rational shift = Rational(-c) * total;
    for (std::size_t i = 0; i < out.dim(); ++i) {
        out.labels[i] += "(det^-" + std::to_string(c) + ")";
        out.weights[i] += shift;
    }
    return out;
}

std::vector<Rational> weights_from_flag(const WeightedFlagSpec& flag, const StabilityWeights& w) {
    return gamma_weights(flag, w);
}

WeightedSpace block_weighted_basis(const std::vector<Int>& blockSizes,
                                   const std::vector<Rational>& blockWeights) {
    if (blockSizes.size() != blockWeights.size()) throw Error("block sizes/weights mismatch");
    WeightedSpace out;
    int pos = 0;
    for (std::size_t h = 0; h < blockSizes.size(); ++h)
        for (Int i = 0; i < blockSizes[h]; ++i) {
            out.labels.push_back("e" + std::to_string(++pos));
            out.weights.push_back(blockWeights[h]);
            out.factors.push_back({pos - 1});
        }
    if (out.labels.empty()) throw Error("weighted space needs a nonempty basis");
    return out;
}

}  // namespace hmstab
