// Command-line front end: JSON in, JSON out, one document per run.
// Exit codes: 0 done (verdict inside the JSON), 2 invalid input, 3 oracle
// mismatch. Plain-text output only, so NO_COLOR needs no special handling.

#include "hmstab/json_io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>

namespace {

using hmstab::io::json;
using namespace hmstab;

json load(const std::string& path) {
    if (path.empty() || path == "-") {
        json j;
        try {
            std::cin >> j;
        } catch (const json::parse_error& e) {
            throw Error(std::string("malformed JSON on stdin: ") + e.what());
        }
        return j;
    }
    return io::parse_file(path);
}

void emit(const json& doc, const std::string& outPath) {
    if (outPath.empty() || outPath == "-") {
        std::cout << doc.dump(2) << "\n";
        return;
    }
    std::ofstream out(outPath);
    if (!out) throw Error("cannot open output file: " + outPath);
    out << doc.dump(2) << "\n";
}

level::Group parse_group(const std::string& name) {
    if (name == "sl") return level::Group::SL;
    if (name == "so-odd") return level::Group::SOOdd;
    if (name == "sp") return level::Group::Sp;
    if (name == "so-even") return level::Group::SOEven;
    throw Error("unknown group '" + name + "' (expected sl|so-odd|sp|so-even)");
}

json run_flag2ops(const json& in) {
    const StabilityWeights w = io::weights_from(in);
    const DimensionVector ambient = io::dimension_from(in.at("dims"), w.labels);
    const WeightedFlagSpec flag = io::flag_spec_from(in.at("flag"), ambient, w);
    const OneParamSubgroup lam = flag_to_one_ps(flag, w);
    const IntegralWeights scaled = integral_weights(lam);
    json out = io::one_ps_json(lam);
    out["m"] = scaled.scale.get_str();
    json iw = json::array();
    for (const auto& v : scaled.weights) iw.push_back(v.get_str());
    out["integral_weights"] = iw;
    return out;
}

json run_ops2flag(const json& in) {
    const StabilityWeights w = io::weights_from(in);
    const OneParamSubgroup lam = io::one_ps_from(in, w.labels);
    const WeightedFlagSpec flag = one_ps_to_flag(lam, w);
    json steps = json::array();
    for (const auto& s : flag.steps) steps.push_back(s.dims);
    return {{"steps", steps}, {"alpha", io::rational_list_json(flag.alpha)}};
}

json run_mu(const json& in) {
    const WeightedSpace space = io::weighted_space_from(in.at("space"));
    SupportPoint pt = io::support_point_from(in.at("support"), space);
    if (in.value("kind", "vector") == std::string("form")) pt.kind = SupportPoint::Kind::Form;
    return {{"mu", io::rational_json(mu_point(space, pt))}};
}

StabilityParams params_from(const json& p) {
    StabilityParams params;
    params.weights = io::weights_from(p);
    params.delta1 = io::rational_from(p.at("delta1"), "delta1");
    params.delta2 = io::rational_from(p.at("delta2"), "delta2");
    params.a1 = p.at("a1").get<int>();
    params.a2 = p.at("a2").get<int>();
    params.validate();
    return params;
}

json run_tump_check(const std::string& paramsPath, const std::string& bundlePath,
                    const std::string& flagsPath) {
    const json p = io::parse_file(paramsPath);
    const StabilityParams params = params_from(p);
    const SplitBundleData ambient = io::bundle_from(io::parse_file(bundlePath));
    const json f = io::parse_file(flagsPath);
    std::vector<TumpCase> cases;
    for (const auto& c : f.at("cases"))
        cases.push_back(io::tump_case_from(c, ambient, params.weights, params.a2));
    const FamilyReport report = stability_family(ambient, cases, params);
    json out = io::family_report_json(report);
    const FamilyReport asym =
        asymptotic_family(ambient, cases, params.delta2, params.weights, params.a1, params.a2);
    out["asymptotic_verdict"] = verdict_name(asym.verdict);
    if (Rational(params.a2) * params.delta2 >= 1)
        out["warning"] = "a2 * delta2 is not below 1; the moduli existence bound is violated";
    return out;
}

json run_tump_walls(const std::string& paramsPath, const std::string& bundlePath,
                    const std::string& flagsPath) {
    const json p = io::parse_file(paramsPath);
    const StabilityParams params = params_from(p);
    Rational lo(0), hi(1000);
    if (p.contains("interval")) {
        const auto iv = io::rational_list(p.at("interval"), "interval");
        if (iv.size() != 2) throw Error("interval must be [lo, hi]");
        lo = iv[0];
        hi = iv[1];
    }
    const SplitBundleData ambient = io::bundle_from(io::parse_file(bundlePath));
    const json f = io::parse_file(flagsPath);
    std::vector<TumpCase> cases;
    for (const auto& c : f.at("cases"))
        cases.push_back(io::tump_case_from(c, ambient, params.weights, params.a2));
    const auto walls = delta_wall_scan(ambient, cases, params.delta2, params.weights, params.a1,
                                       params.a2, lo, hi);
    json list = json::array();
    for (const auto& wall : walls)
        list.push_back({{"delta1", io::rational_json(wall.delta1)}, {"witnesses", wall.witnesses}});
    return {{"walls", list}};
}

json run_parabolic_check(const json& in) {
    const StabilityWeights w = io::weights_from(in);
    const SplitBundleData ambient = io::bundle_from(in.at("bundle"));
    ParabolicStructure par;
    par.beta = io::rational_list(in.at("beta"), "beta");
    par.dimU = io::rational_list(in.at("dims_U"), "dims_U");
    par.validate();
    std::vector<ParabolicFlagCase> cases;
    for (const auto& c : in.at("cases")) {
        ParabolicFlagCase pc;
        pc.flag = io::bundle_flag_from(c.at("flag"), ambient);
        for (const auto& row : c.at("intersections"))
            pc.step_intersections.push_back(io::rational_list(row, "intersections"));
        cases.push_back(std::move(pc));
    }
    const FamilyReport report = parabolic_check(ambient, cases, par, w);
    json out = io::family_report_json(report);
    if (!par.within_existence_bound())
        out["warning"] = "sum of beta weights is not below 1; the moduli existence bound is violated";
    return out;
}

json run_level_check(level::Group g, const json& in) {
    const level::LevelFlag flag = io::level_flag_from(in, g);
    const level::ThetaWeights theta = io::theta_from(in, g, flag.n);
    const Rational delta = io::rational_from(in.at("delta"), "delta");
    const auto subs = io::subbundles_from(in.at("subbundles"), flag.n);
    const auto slacks = level_slacks(subs, flag, theta, delta);
    const FamilyReport report = level_stability_check(subs, flag, theta, delta);
    json results = json::array();
    for (const auto& s : slacks)
        results.push_back({{"slack", io::rational_json(s.slack)},
                           {"lhs", io::rational_json(s.lhs)},
                           {"rhs", io::rational_json(s.rhs)}});
    json out = io::family_report_json(report);
    out["results"] = results;
    return out;
}

json run_level_mu(level::Group g, const json& in) {
    const level::LevelFlag flag = io::level_flag_from(in, g);
    const level::ThetaWeights theta = io::theta_from(in, g, flag.n);
    const level::LambdaFlag lambda = io::lambda_flag_from(in.at("lambda"), flag);
    return {{"mu", io::rational_json(level::mu_level_closed(lambda, flag, theta))}};
}

json run_gies_mu(const json& in) {
    const GiesInput gi = io::gies_from(in);
    const GiesWeights gw = gies_weights(gi);
    const auto bounds = gies_mu2_bounds(gi);
    return {{"mu0", io::rational_list_json(gw.mu0)},
            {"mu1", io::rational_json(gw.mu1)},
            {"mu2", io::rational_json(gw.mu2)},
            {"mu2_bounds",
             json::array({io::rational_json(bounds.first), io::rational_json(bounds.second)})}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hmstab: exact Hilbert-Mumford weights and stability verdicts"};
    app.require_subcommand(1);

    std::string inPath, outPath;
    auto add_io = [&](CLI::App* cmd) {
        cmd->add_option("--input,-i", inPath, "input JSON file ('-' for stdin)");
        cmd->add_option("--output,-o", outPath, "output JSON file (default stdout)");
    };

    auto* flag2ops = app.add_subcommand("flag2ops", "weighted flag -> one-parameter subgroup");
    add_io(flag2ops);
    auto* ops2flag = app.add_subcommand("ops2flag", "one-parameter subgroup -> weighted flag");
    add_io(ops2flag);
    auto* mu = app.add_subcommand("mu", "Hilbert-Mumford weight of a point on a weighted space");
    add_io(mu);

    std::string paramsPath, bundlePath, flagsPath;
    auto* tump = app.add_subcommand("tump", "decorated tuples of bundles");
    auto* tumpCheck = tump->add_subcommand("check", "stability functional over a flag family");
    tumpCheck->add_option("--params", paramsPath, "stability parameters JSON")->required();
    tumpCheck->add_option("--bundle", bundlePath, "ambient bundle JSON")->required();
    tumpCheck->add_option("--flags", flagsPath, "flag family JSON")->required();
    tumpCheck->add_option("--output,-o", outPath, "output JSON file (default stdout)");
    auto* tumpWalls = tump->add_subcommand("walls", "delta_1 walls of a flag family");
    tumpWalls->add_option("--params", paramsPath, "stability parameters JSON")->required();
    tumpWalls->add_option("--bundle", bundlePath, "ambient bundle JSON")->required();
    tumpWalls->add_option("--flags", flagsPath, "flag family JSON")->required();
    tumpWalls->add_option("--output,-o", outPath, "output JSON file (default stdout)");

    auto* parabolic = app.add_subcommand("parabolic", "parabolic principal bundles");
    auto* parabolicCheck = parabolic->add_subcommand("check", "parabolic-degree stability check");
    add_io(parabolicCheck);

    std::string groupName;
    auto* levelCmd = app.add_subcommand("level", "principal bundles with a level structure");
    auto* levelCheck = levelCmd->add_subcommand("check", "closed-form stability check");
    levelCheck->add_option("--group", groupName, "sl|so-odd|sp|so-even")->required();
    add_io(levelCheck);
    auto* levelMu = levelCmd->add_subcommand("mu", "closed-form weight of a one-parameter subgroup");
    levelMu->add_option("--group", groupName, "sl|so-odd|sp|so-even")->required();
    add_io(levelMu);

    auto* gies = app.add_subcommand("gies", "Gieseker-space weights");
    auto* giesMu = gies->add_subcommand("mu", "the three closed-form weights");
    add_io(giesMu);

    auto* oracleCmd = app.add_subcommand("oracle", "brute-force verification harness");
    auto* oracleVerify = oracleCmd->add_subcommand("verify", "closed formulas vs direct weights");
    std::string oracleGroup;
    int oracleSize = 2, oracleTrials = 100, jobs = 1;
    std::uint64_t oracleSeed = 0;
    bool oracleJson = false;
    bool seedSet = false;
    oracleVerify->add_option("--group", oracleGroup, "sl|so-odd|sp|so-even")->required();
    oracleVerify->add_option("--size", oracleSize, "n for sl, r otherwise")->required();
    oracleVerify->add_option("--trials", oracleTrials, "number of randomized trials")->required();
    oracleVerify->add_option("--seed", oracleSeed, "master seed (required)")
        ->required()
        ->each([&](const std::string&) { seedSet = true; });
    oracleVerify->add_flag("--json", oracleJson, "emit the full JSON report");
    oracleVerify->add_option("--jobs", jobs, "parallel trial evaluation (deterministic)");
    oracleVerify->add_option("--output,-o", outPath, "output JSON file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        json out;
        int exitCode = 0;
        if (*flag2ops) {
            out = run_flag2ops(load(inPath));
        } else if (*ops2flag) {
            out = run_ops2flag(load(inPath));
        } else if (*mu) {
            out = run_mu(load(inPath));
        } else if (*tumpCheck) {
            out = run_tump_check(paramsPath, bundlePath, flagsPath);
        } else if (*tumpWalls) {
            out = run_tump_walls(paramsPath, bundlePath, flagsPath);
        } else if (*parabolicCheck) {
            out = run_parabolic_check(load(inPath));
        } else if (*levelCheck) {
            out = run_level_check(parse_group(groupName), load(inPath));
        } else if (*levelMu) {
            out = run_level_mu(parse_group(groupName), load(inPath));
        } else if (*giesMu) {
            out = run_gies_mu(load(inPath));
        } else if (*oracleVerify) {
            (void)seedSet;
            const oracle::VerifyReport report =
                oracle::verify_lemma(parse_group(oracleGroup), oracleSize, oracleTrials,
                                     oracleSeed, oracle::kShippedConvention, jobs);
            out = io::verify_report_json(report);
            if (!oracleJson) {
                json brief;
                brief["all_pass"] = report.all_pass();
                brief["passed"] = report.passed;
                brief["trials"] = report.trials;
                brief["group"] = level::group_name(report.group);
                brief["size"] = report.size;
                brief["seed"] = report.seed;
                out = brief;
            }
            if (!report.all_pass()) exitCode = 3;
        }
        emit(out, outPath);
        return exitCode;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "error: invalid input: " << e.what() << "\n";
        return 2;
    }
}
