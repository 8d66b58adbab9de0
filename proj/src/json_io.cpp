#include "hmstab/json_io.hpp"

#include <algorithm>
#include <fstream>

namespace hmstab {
namespace io {

namespace {

const json& field(const json& j, const char* name) {
    if (!j.is_object() || !j.contains(name))
        throw Error(std::string("missing field '") + name + "'");
    return j.at(name);
}

std::vector<Int> int_list(const json& j, const char* what) {
    if (!j.is_array()) throw Error(std::string(what) + " must be an array");
    std::vector<Int> out;
    for (const auto& v : j) {
        if (!v.is_number_integer()) throw Error(std::string(what) + " must hold integers");
        out.push_back(v.get<Int>());
    }
    return out;
}

std::vector<std::string> string_list(const json& j, const char* what) {
    if (!j.is_array()) throw Error(std::string(what) + " must be an array");
    std::vector<std::string> out;
    for (const auto& v : j) {
        if (!v.is_string()) throw Error(std::string(what) + " must hold strings");
        out.push_back(v.get<std::string>());
    }
    return out;
}

}  // namespace

json rational_json(const Rational& value) { return format_rational(value); }

Rational rational_from(const json& j, const char* what) {
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (!j.is_string()) throw Error(std::string(what) + " must be a \"p/q\" string");
    return parse_rational(j.get<std::string>());
}

std::vector<Rational> rational_list(const json& j, const char* what) {
    if (!j.is_array()) throw Error(std::string(what) + " must be an array");
    std::vector<Rational> out;
    for (const auto& v : j) out.push_back(rational_from(v, what));
    return out;
}

json rational_list_json(const std::vector<Rational>& values) {
    json out = json::array();
    for (const auto& v : values) out.push_back(rational_json(v));
    return out;
}

StabilityWeights weights_from(const json& j) {
    const auto labels = string_list(field(j, "labels"), "labels");
    auto kappa = rational_list(field(j, "kappa"), "kappa");
    std::vector<Rational> chi(labels.size(), Rational(0));
    if (j.contains("chi")) chi = rational_list(j.at("chi"), "chi");
    return StabilityWeights(labels, std::move(kappa), std::move(chi));
}

DimensionVector dimension_from(const json& j, const std::vector<std::string>& labels) {
    return DimensionVector(labels, int_list(j, "dims"));
}

WeightedFlagSpec flag_spec_from(const json& j, const DimensionVector& ambient,
                                const StabilityWeights& w) {
    std::vector<DimensionVector> steps;
    for (const auto& s : field(j, "steps")) steps.push_back(dimension_from(s, ambient.labels));
    return WeightedFlagSpec(ambient, std::move(steps), rational_list(field(j, "alpha"), "alpha"),
                            w);
}

json one_ps_json(const OneParamSubgroup& lam) {
    json blocks = json::array();
    for (const auto& b : lam.blocks)
        blocks.push_back({{"gamma", rational_json(b.gamma)}, {"dims", b.eigendims.dims}});
    return {{"blocks", blocks}, {"special", lam.special}};
}

OneParamSubgroup one_ps_from(const json& j, const std::vector<std::string>& labels) {
    OneParamSubgroup lam;
    std::vector<Int> total(labels.size(), 0);
    for (const auto& b : field(j, "blocks")) {
        OneParamBlock block;
        block.gamma = rational_from(field(b, "gamma"), "gamma");
        block.eigendims = DimensionVector(labels, int_list(field(b, "dims"), "dims"));
        for (std::size_t t = 0; t < total.size(); ++t) total[t] += block.eigendims.dims[t];
        lam.blocks.push_back(std::move(block));
    }
    lam.ambient = DimensionVector(labels, total);
    lam.special = j.value("special", false);
    return lam;
}

SplitBundleData bundle_from(const json& j) {
    return SplitBundleData(string_list(field(j, "labels"), "labels"),
                           int_list(field(j, "ranks"), "ranks"),
                           int_list(field(j, "degrees"), "degrees"));
}

json bundle_json(const SplitBundleData& b) {
    return {{"labels", b.labels}, {"ranks", b.ranks}, {"degrees", b.degrees}};
}

BundleFlag bundle_flag_from(const json& j, const SplitBundleData& ambient) {
    BundleFlag flag;
    for (const auto& s : field(j, "steps"))
        flag.steps.emplace_back(ambient.labels, int_list(field(s, "ranks"), "ranks"),
                                int_list(field(s, "degrees"), "degrees"));
    flag.alpha = rational_list(field(j, "alpha"), "alpha");
    return flag;
}

SupportSet support_from(const json& j) {
    SupportSet out;
    out.arity = field(j, "arity").get<int>();
    for (const auto& idx : field(j, "indices")) {
        std::vector<int> entry;
        for (const auto& v : idx) entry.push_back(v.get<int>());
        out.indices.push_back(std::move(entry));
    }
    return out;
}

TumpCase tump_case_from(const json& j, const SplitBundleData& ambient, const StabilityWeights& w,
                        int a2) {
    TumpCase c;
    c.flag = bundle_flag_from(field(j, "flag"), ambient);
    c.phi = support_from(field(j, "phi"));
    const json& s = field(j, "s");
    const std::string mode = field(s, "mode").get<std::string>();
    if (mode == "support") {
        c.dec = support_from(s);
    } else if (mode == "fiber") {
        std::vector<std::size_t> support;
        for (const auto& v : field(s, "support")) support.push_back(v.get<std::size_t>());
        c.dec = make_fiber_decoration(ambient, c.flag, w, a2, s.value("det_twist", 0),
                                      std::move(support));
    } else {
        throw Error("decoration mode must be 'support' or 'fiber'");
    }
    return c;
}

H0Data h0_from(const json& j) {
    H0Data out;
    out.ambient_h0 = int_list(field(j, "ambient"), "ambient h0");
    for (const auto& s : field(j, "steps")) out.step_h0.push_back(int_list(s, "step h0"));
    return out;
}

json h0_json(const H0Data& h0) {
    return {{"ambient", h0.ambient_h0}, {"steps", h0.step_h0}};
}

WeightedSpace weighted_space_from(const json& j) {
    return WeightedSpace(string_list(field(j, "labels"), "labels"),
                         rational_list(field(j, "weights"), "weights"));
}

SupportPoint support_point_from(const json& j, const WeightedSpace& space) {
    SupportPoint pt;
    for (const auto& v : j) {
        if (v.is_number_integer()) {
            pt.support.push_back(v.get<std::size_t>());
        } else {
            const std::string label = v.get<std::string>();
            const auto it = std::find(space.labels.begin(), space.labels.end(), label);
            if (it == space.labels.end()) throw Error("unknown basis label: " + label);
            pt.support.push_back(static_cast<std::size_t>(it - space.labels.begin()));
        }
    }
    return pt;
}

json family_report_json(const FamilyReport& report) {
    json out;
    out["verdict"] = verdict_name(report.verdict);
    if (report.witness) out["witness"] = *report.witness;
    out["critical"] = report.critical;
    out["values"] = rational_list_json(report.values);
    return out;
}

RationalSubspace subspace_from(const json& j, int ambient) {
    if (!j.is_array()) throw Error("subspace must be an array of rows");
    const int rows = static_cast<int>(j.size());
    RatMat m(rows, ambient);
    for (int r = 0; r < rows; ++r) {
        const auto row = rational_list(j.at(r), "subspace row");
        if (static_cast<int>(row.size()) != ambient)
            throw Error("subspace row width does not match the ambient dimension");
        for (int c = 0; c < ambient; ++c) m(r, c) = row[c];
    }
    return RationalSubspace(std::move(m), ambient);
}

json subspace_json(const RationalSubspace& s) {
    json rows = json::array();
    for (int r = 0; r < s.dim(); ++r) {
        json row = json::array();
        for (int c = 0; c < s.ambient(); ++c) row.push_back(rational_json(s.rows()(r, c)));
        rows.push_back(row);
    }
    return rows;
}

level::LevelFlag level_flag_from(const json& j, level::Group g) {
    level::LevelFlag flag;
    flag.group = g;
    if (j.contains("n")) {
        flag.n = j.at("n").get<int>();
    } else if (j.contains("r")) {
        const int r = j.at("r").get<int>();
        flag.n = g == level::Group::SOOdd ? 2 * r + 1 : 2 * r;
    } else {
        throw Error("level flag needs 'n' or 'r'");
    }
    const json& f = field(j, "flag");
    for (const auto& v : field(f, "r_seq")) flag.r_seq.push_back(v.get<int>());
    for (const auto& s : field(f, "subspaces")) flag.W.push_back(subspace_from(s, flag.n));
    if (f.contains("I")) {
        for (const auto& v : f.at("I")) {
            const std::string item = v.is_string() ? v.get<std::string>() : std::string();
            if (item == "+")
                flag.has_plus = true;
            else if (item == "-")
                flag.has_minus = true;
            else if (!v.is_number_integer())
                throw Error("I entries must be integers, '+' or '-'");
        }
    }
    if (f.contains("W_plus")) flag.W_plus = subspace_from(f.at("W_plus"), flag.n);
    if (f.contains("W_minus")) flag.W_minus = subspace_from(f.at("W_minus"), flag.n);
    flag.validate();
    return flag;
}

level::ThetaWeights theta_from(const json& j, level::Group g, int n) {
    level::ThetaWeights theta;
    theta.theta = int_list(field(j, "theta"), "theta");
    if (g == level::Group::SOEven) {
        theta.theta_plus = field(j, "theta_plus").get<Int>();
        theta.theta_minus = field(j, "theta_minus").get<Int>();
    }
    theta.validate(g, n);
    return theta;
}

level::LambdaFlag lambda_flag_from(const json& j, const level::LevelFlag& flag) {
    level::LambdaFlag lam;
    for (const auto& s : field(j, "subspaces")) lam.V.push_back(subspace_from(s, flag.n));
    lam.alpha = rational_list(field(j, "alpha"), "alpha");
    lam.validate(flag);
    return lam;
}

std::vector<level::SubBundleData> subbundles_from(const json& j, int n) {
    std::vector<level::SubBundleData> out;
    for (const auto& s : j) {
        level::SubBundleData sub;
        sub.degree = field(s, "degree").get<Int>();
        sub.fiber = subspace_from(field(s, "fiber"), n);
        out.push_back(std::move(sub));
    }
    return out;
}

GiesInput gies_from(const json& j) {
    GiesInput in;
    in.kdimY = rational_list(field(j, "kdimY"), "kdimY");
    in.alpha = rational_list(field(j, "alpha"), "alpha");
    in.pn = rational_from(field(j, "pn"), "pn");
    in.ranks = int_list(field(j, "ranks"), "ranks");
    for (const auto& sr : field(j, "sub_ranks")) in.subRanks.push_back(int_list(sr, "sub_ranks"));
    in.a1 = field(j, "a1").get<int>();
    in.a2 = field(j, "a2").get<int>();
    in.sup1 = support_from(field(j, "sup1"));
    in.sup2 = support_from(field(j, "sup2"));
    return in;
}

json verify_report_json(const oracle::VerifyReport& report) {
    json out;
    out["group"] = level::group_name(report.group);
    out["size"] = report.size;
    out["trials"] = report.trials;
    out["seed"] = report.seed;
    out["convention"] = oracle::convention_name(report.convention);
    out["passed"] = report.passed;
    json fails = json::array();
    for (const auto& f : report.failures) fails.push_back({{"trial", f.trial}, {"detail", f.detail}});
    out["failures"] = fails;
    out["all_pass"] = report.all_pass();
    return out;
}

json parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open input file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw Error("malformed JSON in " + path + ": " + e.what());
    }
    return j;
}

}  // namespace io
}  // namespace hmstab
