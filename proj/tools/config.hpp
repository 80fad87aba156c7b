///
/// \file config.hpp
///
/// Declarative run configuration for the CLI: a strict JSON document with
/// sections scene/sources/lifting/weights/solver/extract/experiment/output.
/// Unknown keys are rejected with the offending key named.
///
#ifndef WLIDOA_TOOLS_CONFIG_HPP
#define WLIDOA_TOOLS_CONFIG_HPP

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wlidoa/wlidoa.hpp"

namespace wlidoa::cli {

using nlohmann::json;

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct RunConfig {
    std::uint64_t seed = 1;

    // scene
    int n = 41;
    std::optional<int> m;
    std::optional<IndexSet> omega;
    std::optional<double> snr_db;
    std::optional<double> eta;
    int snapshots = 1;
    double spacing_ratio = 0.5;
    bool vary_amplitudes = false;

    // sources
    std::optional<std::string> preset;
    std::optional<std::vector<Source>> source_list;
    int random_k = 2;

    // lifting
    std::string lifting_kind = "hankel";
    int lifting_d = 0; ///< 0 selects the square default

    // weights
    std::string weights_mode = "minimax";
    double weights_floor = 0.05;

    // solver
    double rho = 1e3;
    double gamma = 1e5;
    int iters = 2000;
    int rank = 0; ///< 0 selects min(2 k_guess, min(d, d'))
    double tol = 1e-8;

    // extract
    std::string extract_method = "pencil";
    int k_max = 0; ///< 0 selects the source count when known, else 5
    int grid_resolution = 4096;
    double noise_tol = 1e-6;
    int bp_iters = 500;

    // experiment
    std::string sweep = "samples";
    std::vector<double> sweep_values;
    int trials = 50;
    std::vector<std::string> methods;

    std::string output_path;

    SourceSet make_sources() const
    {
        if (source_list) {
            SourceSet s;
            s.sources = *source_list;
            s.spacing_ratio = spacing_ratio;
            return s;
        }
        SourceSet s = preset_sources(preset.value_or("table1-d"));
        s.spacing_ratio = spacing_ratio;
        return s;
    }

    int pencil_d() const { return lifting_d > 0 ? lifting_d : default_pencil(n); }

    LiftingSpec make_lifting() const
    {
        if (lifting_kind == "hankel") {
            return LiftingSpec::hankel(n, pencil_d());
        }
        if (lifting_kind == "double-hankel") {
            return LiftingSpec::double_hankel(n, pencil_d());
        }
        throw ConfigError("config: unknown lifting.kind '" + lifting_kind + "'");
    }

    WeightPair make_weights(const LiftingSpec& spec, const IndexSet& om) const
    {
        if (weights_mode == "identity") {
            return WeightPair::identity(spec);
        }
        if (weights_mode == "minimax") {
            return design_weights_minimax(spec, om, weights_floor);
        }
        if (weights_mode == "surrogate") {
            return design_weights_surrogate(spec, om, weights_floor);
        }
        throw ConfigError("config: unknown weights.mode '" + weights_mode + "'");
    }
};

namespace detail_cfg {

inline void check_keys(const json& obj, const std::string& section,
                       std::initializer_list<const char*> allowed)
{
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed) {
            if (key == a) {
                ok = true;
                break;
            }
        }
        if (!ok) {
            throw ConfigError("config: unknown key '" + key + "' in section '" + section + "'");
        }
    }
}

template <typename T>
void get_if(const json& obj, const char* key, T& out)
{
    if (obj.contains(key)) {
        out = obj.at(key).get<T>();
    }
}

} // namespace detail_cfg

inline RunConfig parse_config(const json& doc)
{
    using detail_cfg::check_keys;
    using detail_cfg::get_if;
    RunConfig cfg;
    check_keys(doc, "(top level)",
               {"seed", "scene", "sources", "lifting", "weights", "solver", "extract",
                "experiment", "output"});
    get_if(doc, "seed", cfg.seed);
    if (doc.contains("scene")) {
        const auto& s = doc.at("scene");
        check_keys(s, "scene",
                   {"n", "m", "omega", "snr_db", "eta", "snapshots", "spacing_ratio",
                    "vary_amplitudes"});
        get_if(s, "n", cfg.n);
        if (s.contains("m")) cfg.m = s.at("m").get<int>();
        if (s.contains("omega")) cfg.omega = s.at("omega").get<IndexSet>();
        if (s.contains("snr_db")) cfg.snr_db = s.at("snr_db").get<double>();
        if (s.contains("eta")) cfg.eta = s.at("eta").get<double>();
        get_if(s, "snapshots", cfg.snapshots);
        get_if(s, "spacing_ratio", cfg.spacing_ratio);
        get_if(s, "vary_amplitudes", cfg.vary_amplitudes);
        if (cfg.snr_db && cfg.eta) {
            throw ConfigError("config: scene.snr_db and scene.eta are mutually exclusive");
        }
    }
    if (doc.contains("sources")) {
        const auto& s = doc.at("sources");
        check_keys(s, "sources", {"preset", "list", "random_k"});
        if (s.contains("preset")) cfg.preset = s.at("preset").get<std::string>();
        get_if(s, "random_k", cfg.random_k);
        if (s.contains("list")) {
            std::vector<Source> list;
            for (const auto& e : s.at("list")) {
                check_keys(e, "sources.list[]", {"theta_deg", "amp_re", "amp_im"});
                Source src;
                src.theta_deg = e.at("theta_deg").get<double>();
                double re = 1.0, im = 0.0;
                get_if(e, "amp_re", re);
                get_if(e, "amp_im", im);
                src.amplitude = Complex(re, im);
                list.push_back(src);
            }
            cfg.source_list = list;
        }
        if (cfg.preset && cfg.source_list) {
            throw ConfigError("config: sources.preset and sources.list are mutually exclusive");
        }
    }
    if (doc.contains("lifting")) {
        const auto& s = doc.at("lifting");
        check_keys(s, "lifting", {"kind", "d"});
        get_if(s, "kind", cfg.lifting_kind);
        get_if(s, "d", cfg.lifting_d);
    }
    if (doc.contains("weights")) {
        const auto& s = doc.at("weights");
        check_keys(s, "weights", {"mode", "floor"});
        get_if(s, "mode", cfg.weights_mode);
        get_if(s, "floor", cfg.weights_floor);
    }
    if (doc.contains("solver")) {
        const auto& s = doc.at("solver");
        check_keys(s, "solver", {"rho", "gamma", "iters", "rank", "tol"});
        get_if(s, "rho", cfg.rho);
        get_if(s, "gamma", cfg.gamma);
        get_if(s, "iters", cfg.iters);
        get_if(s, "rank", cfg.rank);
        get_if(s, "tol", cfg.tol);
    }
    if (doc.contains("extract")) {
        const auto& s = doc.at("extract");
        check_keys(s, "extract", {"method", "k_max", "grid_resolution", "noise_tol", "bp_iters"});
        get_if(s, "method", cfg.extract_method);
        get_if(s, "k_max", cfg.k_max);
        get_if(s, "grid_resolution", cfg.grid_resolution);
        get_if(s, "noise_tol", cfg.noise_tol);
        get_if(s, "bp_iters", cfg.bp_iters);
    }
    if (doc.contains("experiment")) {
        const auto& s = doc.at("experiment");
        check_keys(s, "experiment", {"sweep", "values", "trials", "methods"});
        get_if(s, "sweep", cfg.sweep);
        if (s.contains("values")) cfg.sweep_values = s.at("values").get<std::vector<double>>();
        get_if(s, "trials", cfg.trials);
        if (s.contains("methods")) cfg.methods = s.at("methods").get<std::vector<std::string>>();
    }
    if (doc.contains("output")) {
        const auto& s = doc.at("output");
        check_keys(s, "output", {"path"});
        get_if(s, "path", cfg.output_path);
    }
    return cfg;
}

inline RunConfig load_config(const std::string& path)
{
    std::ifstream is(path);
    if (!is.good()) {
        throw ConfigError("config: cannot open '" + path + "'");
    }
    json doc;
    try {
        is >> doc;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    return parse_config(doc);
}

inline Method parse_method(const std::string& name)
{
    if (name == "wli-emac") return Method::wli_emac;
    if (name == "emac") return Method::emac;
    if (name == "wli-demac") return Method::wli_demac;
    if (name == "demac") return Method::demac;
    if (name == "bp") return Method::bp;
    throw ConfigError("config: unknown method '" + name + "'");
}

inline SweepAxis parse_sweep(const std::string& name)
{
    if (name == "samples") return SweepAxis::samples;
    if (name == "snr_db") return SweepAxis::snr_db;
    if (name == "gamma") return SweepAxis::gamma;
    if (name == "snapshots") return SweepAxis::snapshots;
    throw ConfigError("config: unknown sweep axis '" + name + "'");
}

} // namespace wlidoa::cli

#endif // WLIDOA_TOOLS_CONFIG_HPP
