// Copyright 2026 the svdpd developers
// SPDX-License-Identifier: Apache-2.0

#include "svdpd/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace svdpd {

using nlohmann::json;

const char* to_string(Experiment e) {
    switch (e) {
    case Experiment::kubo: return "kubo";
    case Experiment::dpd_sweep: return "dpd_sweep";
    case Experiment::dpd_single: return "dpd_single";
    }
    return "?";
}

Experiment experiment_from_string(const std::string& s) {
    if (s == "kubo") return Experiment::kubo;
    if (s == "dpd_sweep") return Experiment::dpd_sweep;
    if (s == "dpd_single") return Experiment::dpd_single;
    throw config_error("unknown experiment: " + s);
}

namespace {

/// Collects every problem found while parsing/validating so a bad file is
/// reported in one pass instead of error-by-error.
struct Problems {
    std::vector<std::string> items;

    void add(const std::string& p) { items.push_back(p); }
    void raise_if_any(const std::string& source) const {
        if (items.empty()) return;
        std::string msg = source + ": invalid configuration:";
        for (const auto& p : items) msg += "\n  - " + p;
        throw config_error(msg);
    }
};

void check_known_keys(const json& j, const std::set<std::string>& known, const std::string& where,
                      Problems& problems) {
    for (const auto& [key, _] : j.items())
        if (!known.count(key)) problems.add(where + ": unknown key '" + key + "'");
}

double get_number(const json& j, const std::string& key, double fallback,
                  const std::string& where, Problems& problems) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) {
        problems.add(where + "." + key + ": expected a number");
        return fallback;
    }
    return j[key].get<double>();
}

SchemeSpec parse_scheme(const json& j, const std::string& where, Problems& problems) {
    SchemeSpec s;
    check_known_keys(j,
                     {"family", "variant", "alpha", "beta", "lambda", "lambda1", "lambda2",
                      "noise_mode"},
                     where, problems);
    try {
        if (j.contains("family")) s.family = family_from_string(j["family"].get<std::string>());
        if (j.contains("variant")) s.variant = variant_from_string(j["variant"].get<std::string>());
        if (j.contains("noise_mode"))
            s.noise_mode = noise_mode_from_string(j["noise_mode"].get<std::string>());
    } catch (const config_error& e) {
        problems.add(where + ": " + e.what());
    }
    s.alpha = get_number(j, "alpha", s.alpha, where, problems);
    s.beta = get_number(j, "beta", s.beta, where, problems);
    if (j.contains("lambda") && (j.contains("lambda1") || j.contains("lambda2")))
        problems.add(where + ": give either 'lambda' or 'lambda1'/'lambda2', not both");
    if (j.contains("lambda")) {
        const double l = get_number(j, "lambda", s.lambda1, where, problems);
        s.lambda1 = l;
        s.lambda2 = l;
    } else {
        s.lambda1 = get_number(j, "lambda1", s.lambda1, where, problems);
        s.lambda2 = get_number(j, "lambda2", s.lambda2, where, problems);
    }
    return s;
}

KuboParams parse_kubo(const json& j, Problems& problems) {
    KuboParams k;
    check_known_keys(j, {"sigma", "eps", "q0", "p0"}, "kubo", problems);
    if (j.contains("sigma")) k.sigma = j["sigma"].get<double>();
    if (j.contains("eps")) k.eps = j["eps"].get<double>();
    if (j.contains("q0")) k.q0 = j["q0"].get<double>();
    if (j.contains("p0")) k.p0 = j["p0"].get<double>();
    return k;
}

DpdParams parse_dpd(const json& j, Problems& problems) {
    DpdParams d;
    check_known_keys(
        j, {"n_particles", "mass", "a", "gamma", "sigma", "q_c", "box", "kT_target"}, "dpd",
        problems);
    if (j.contains("n_particles")) d.n_particles = j["n_particles"].get<int>();
    if (j.contains("mass")) d.mass = j["mass"].get<double>();
    if (j.contains("a")) d.a = j["a"].get<double>();
    if (j.contains("gamma")) d.gamma = j["gamma"].get<double>();
    if (j.contains("sigma")) d.sigma = j["sigma"].get<double>();
    if (j.contains("q_c")) d.q_c = j["q_c"].get<double>();
    if (j.contains("kT_target")) d.kT_target = j["kT_target"].get<double>();
    if (j.contains("box")) {
        const auto& b = j["box"];
        if (b.is_array() && b.size() == 3)
            d.box = {b[0].get<double>(), b[1].get<double>(), b[2].get<double>()};
        else if (b.is_number())
            d.box = {b.get<double>(), b.get<double>(), b.get<double>()};
        else
            problems.add("dpd.box: expected a number or an array of 3 numbers");
    }
    return d;
}

} // namespace

std::vector<std::string> RunConfig::problems() const {
    Problems problems;
    if (schemes.empty()) problems.add("at least one scheme is required");
    for (std::size_t i = 0; i < schemes.size(); ++i) {
        const auto& s = schemes[i];
        const std::string where = "schemes[" + std::to_string(i) + "]";
        const std::pair<double, const char*> ranges[] = {{s.alpha, "alpha"},
                                                         {s.beta, "beta"},
                                                         {s.lambda1, "lambda1"},
                                                         {s.lambda2, "lambda2"}};
        for (const auto& [v, name] : ranges)
            if (!(v >= 0.0 && v <= 1.0))
                problems.add(where + "." + std::string(name) + ": outside [0,1]");
        if (experiment != Experiment::kubo && s.family != SchemeFamily::sv_ab &&
            s.family != SchemeFamily::sv_ba)
            problems.add(where + ": dpd experiments support sv_ab/sv_ba only");
    }
    if (dts.empty()) problems.add("dt: at least one value required");
    for (double dt : dts)
        if (!(dt > 0.0)) problems.add("dt: values must be positive");
    for (std::size_t k = 1; k < dts.size(); ++k)
        if (!(dts[k] > dts[k - 1])) problems.add("dt_list: values must be strictly increasing");
    if (experiment != Experiment::dpd_sweep && dts.size() != 1)
        problems.add("dt_list: only dpd_sweep accepts multiple dt values");
    if (!(t_end > 0.0)) problems.add("t_end: must be positive");
    if (experiment == Experiment::kubo && n_paths < 1) problems.add("n_paths: must be >= 1");
    if (!(discard_fraction >= 0.0 && discard_fraction < 1.0))
        problems.add("discard_fraction: must be in [0,1)");
    if (sample_interval < 1) problems.add("sample_interval: must be >= 1");
    if (snapshot_interval < 0) problems.add("snapshot_interval: must be >= 0");
    if (experiment == Experiment::kubo) {
        if (!(kubo.sigma >= 0.0)) problems.add("kubo.sigma: must be >= 0");
        if (!(kubo.eps >= 0.0 && kubo.eps < 2.0)) problems.add("kubo.eps: must be in [0, 2)");
    } else {
        try {
            dpd.validate();
        } catch (const config_error& e) {
            problems.add(e.what());
        }
    }
    return problems.items;
}

void RunConfig::validate() const {
    Problems all;
    all.items = problems();
    all.raise_if_any("config");
}

RunConfig parse_config_text(const std::string& text, const std::string& source_name) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw config_error(source_name + ": not valid JSON: " + e.what());
    }
    Problems problems;
    check_known_keys(j,
                     {"experiment", "schemes", "scheme", "kubo", "dpd", "dt", "dt_list", "t_end",
                      "n_paths", "seed", "output_dir", "snapshot_interval", "sample_interval",
                      "discard_fraction"},
                     "config", problems);

    RunConfig cfg;
    if (!j.contains("experiment")) problems.add("config: missing 'experiment'");
    else {
        try {
            cfg.experiment = experiment_from_string(j["experiment"].get<std::string>());
        } catch (const config_error& e) {
            problems.add(e.what());
        }
    }

    if (j.contains("schemes") && j.contains("scheme"))
        problems.add("config: give either 'scheme' or 'schemes', not both");
    cfg.schemes.clear();
    if (j.contains("schemes")) {
        std::size_t i = 0;
        for (const auto& s : j["schemes"])
            cfg.schemes.push_back(parse_scheme(s, "schemes[" + std::to_string(i++) + "]", problems));
    } else if (j.contains("scheme")) {
        cfg.schemes.push_back(parse_scheme(j["scheme"], "scheme", problems));
    } else {
        problems.add("config: missing 'scheme' or 'schemes'");
    }

    if (j.contains("kubo")) cfg.kubo = parse_kubo(j["kubo"], problems);
    if (j.contains("dpd")) cfg.dpd = parse_dpd(j["dpd"], problems);

    if (j.contains("dt") && j.contains("dt_list"))
        problems.add("config: give either 'dt' or 'dt_list', not both");
    if (j.contains("dt")) cfg.dts = {j["dt"].get<double>()};
    else if (j.contains("dt_list")) cfg.dts = j["dt_list"].get<std::vector<double>>();

    if (j.contains("t_end")) cfg.t_end = j["t_end"].get<double>();
    if (j.contains("n_paths")) cfg.n_paths = j["n_paths"].get<int>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("output_dir")) cfg.output_dir = j["output_dir"].get<std::string>();
    if (j.contains("snapshot_interval")) cfg.snapshot_interval = j["snapshot_interval"].get<int>();
    if (j.contains("sample_interval")) cfg.sample_interval = j["sample_interval"].get<int>();
    if (j.contains("discard_fraction")) cfg.discard_fraction = j["discard_fraction"].get<double>();

    // Structural and value problems are reported together, in one pass.
    for (const std::string& p : cfg.problems()) problems.add(p);
    problems.raise_if_any(source_name);
    return cfg;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

namespace {

json scheme_to_json(const SchemeSpec& s) {
    json j;
    j["family"] = to_string(s.family);
    j["variant"] = to_string(s.variant);
    j["alpha"] = s.alpha;
    j["beta"] = s.beta;
    j["lambda1"] = s.lambda1;
    j["lambda2"] = s.lambda2;
    j["noise_mode"] = to_string(s.noise_mode);
    return j;
}

} // namespace

std::string effective_config_json(const RunConfig& cfg) {
    json j;
    j["experiment"] = to_string(cfg.experiment);
    j["seed"] = cfg.seed;
    j["output_dir"] = cfg.output_dir;
    j["t_end"] = cfg.t_end;
    if (cfg.dts.size() == 1) j["dt"] = cfg.dts[0];
    else j["dt_list"] = cfg.dts;
    j["n_paths"] = cfg.n_paths;
    j["discard_fraction"] = cfg.discard_fraction;
    j["sample_interval"] = cfg.sample_interval;
    j["snapshot_interval"] = cfg.snapshot_interval;
    j["schemes"] = json::array();
    for (const auto& s : cfg.schemes) j["schemes"].push_back(scheme_to_json(s));
    j["kubo"] = {{"sigma", cfg.kubo.sigma}, {"eps", cfg.kubo.eps}, {"q0", cfg.kubo.q0},
                 {"p0", cfg.kubo.p0}};
    j["dpd"] = {{"n_particles", cfg.dpd.n_particles},
                {"mass", cfg.dpd.mass},
                {"a", cfg.dpd.a},
                {"gamma", cfg.dpd.gamma},
                {"sigma", cfg.dpd.sigma},
                {"q_c", cfg.dpd.q_c},
                {"box", cfg.dpd.box},
                {"kT_target", cfg.dpd.kT_target}};
    return j.dump(2) + "\n";
}

// --- built-in profiles -------------------------------------------------------

namespace {

SchemeSpec sv_ab(SvAbVariant v, double alpha, double beta, double l1, double l2) {
    SchemeSpec s;
    s.family = SchemeFamily::sv_ab;
    s.variant = v;
    s.alpha = alpha;
    s.beta = beta;
    s.lambda1 = l1;
    s.lambda2 = l2;
    return s;
}

} // namespace

RunConfig kubo_paper_profile() {
    RunConfig cfg;
    cfg.experiment = Experiment::kubo;
    cfg.kubo = KuboParams{0.2, 0.001, 0.0, 1.0};
    cfg.dts = {0.1};
    cfg.t_end = 2000.0;
    cfg.n_paths = 2000;
    cfg.seed = 20260808;
    cfg.output_dir = "results/kubo_paper";
    cfg.schemes = {
        sv_ab(SvAbVariant::ab1, 1.0, 0.0, 0.5, 0.5),
        sv_ab(SvAbVariant::ab2_gcc, 1.0, 1.0, 0.7, 0.7),
        sv_ab(SvAbVariant::ab3_gw, 0.0, 1.0, 0.3, 0.3),
        sv_ab(SvAbVariant::ab4, 0.5, 1.0, 0.6, 0.6),
        sv_ab(SvAbVariant::ab5, 0.0, 1.0, 0.3, 0.5),
        sv_ab(SvAbVariant::ab6, 0.4, 1.0, 0.3, 0.4),
    };
    // The oscillator's noise Hamiltonian has a momentum part; matched half
    // increments keep the long-time mean-energy error at the 1e-3 level,
    // and they are what define the GW/GCC updates. Independent halves add a
    // slow systematic energy inflation of order sigma^4 t / 2 here.
    for (auto& s : cfg.schemes) s.noise_mode = NoiseMode::approximate_half;
    return cfg;
}

RunConfig kubo_desk_profile() {
    RunConfig cfg = kubo_paper_profile();
    cfg.n_paths = 200;
    cfg.t_end = 200.0;
    cfg.output_dir = "results/kubo_desk";
    return cfg;
}

RunConfig dpd_sweep_desk_profile() {
    RunConfig cfg;
    cfg.experiment = Experiment::dpd_sweep;
    cfg.dpd = DpdParams{};
    cfg.dpd.n_particles = 375;
    cfg.dpd.box = {5.0, 5.0, 5.0};
    cfg.dts = {0.005, 0.01, 0.02, 0.04, 0.08};
    cfg.t_end = 200.0;
    cfg.seed = 20260808;
    cfg.output_dir = "results/dpd_sweep_desk";
    cfg.schemes = {
        sv_ab(SvAbVariant::ab3_gw, 0.0, 1.0, 0.65, 0.65),
        sv_ab(SvAbVariant::ab2_gcc, 1.0, 1.0, 0.5, 0.5),
    };
    return cfg;
}

RunConfig dpd_sweep_paper_profile() {
    RunConfig cfg = dpd_sweep_desk_profile();
    cfg.dpd.n_particles = 3000;
    cfg.dpd.box = {10.0, 10.0, 10.0};
    cfg.t_end = 1000.0;
    cfg.output_dir = "results/dpd_sweep_paper";
    cfg.dts.resize(20);
    for (int i = 0; i < 20; ++i)
        cfg.dts[i] = 0.001 * std::pow(0.16 / 0.001, static_cast<double>(i) / 19.0);
    cfg.schemes.push_back(sv_ab(SvAbVariant::ab4, 0.9, 1.0, 1.0, 1.0));
    return cfg;
}

RunConfig dpd_single_desk_profile() {
    RunConfig cfg;
    cfg.experiment = Experiment::dpd_single;
    cfg.dpd.n_particles = 375;
    cfg.dpd.box = {5.0, 5.0, 5.0};
    cfg.dts = {0.01};
    cfg.t_end = 50.0;
    cfg.seed = 20260808;
    cfg.snapshot_interval = 500;
    cfg.sample_interval = 10;
    cfg.output_dir = "results/dpd_single_desk";
    cfg.schemes = {sv_ab(SvAbVariant::ab3_gw, 0.0, 1.0, 0.65, 0.65)};
    return cfg;
}

} // namespace svdpd
