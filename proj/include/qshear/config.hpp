#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>

#include "io.hpp"
#include "qst.hpp"

namespace qshear {

struct RunConfig {
    struct Input {
        std::string path;
        std::string format = "csv";
    } input;

    struct GeneratorParams {
        double r0 = 1.0, r1 = 4.0;
        double angular_width = 1.0;
        double psi2_slope_shift = 0.5;
    } generator;

    struct GridParams {
        std::size_t M = 4, L = 5;
        double a_max = 1.0, S = 1.0, ds = 0.5;
    } grid;

    double L1 = 1.0, L2 = 1.0;
    double reference1 = 8.0, reference2 = 2.0;

    struct Synthesis {
        std::string mode = "frame_corrected";
        std::string coefficients;
        std::string original;
    } synthesis;

    struct Verify {
        std::size_t size = 16;
        std::size_t trials = 3;
        std::map<std::string, double> tolerances;
    } verify;

    std::string output;
    std::uint64_t seed = 0;

    GeneratorSpec base_spec() const {
        GeneratorSpec g;
        g.r0 = generator.r0;
        g.r1 = generator.r1;
        g.angular_width = generator.angular_width;
        return g;
    }
    QGenerator qgenerator() const { return default_qgenerator(base_spec(), generator.psi2_slope_shift); }
    SamplingGrid sampling_grid() const { return dyadic_grid(grid.M, grid.L, grid.a_max, grid.S, grid.ds); }
    Extent extent() const { return {L1, L2}; }
    std::array<double, 2> reference() const { return {reference1, reference2}; }
};

namespace detail {

template <typename T>
void read_opt(const io::json& j, const char* key, T& out, const std::string& where) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const io::json::exception&) {
        throw Error("config: field '" + where + key + "' has the wrong type");
    }
}

inline void reject_unknown(const io::json& j, std::set<std::string> known, const std::string& where) {
    if (!j.is_object()) throw Error("config: '" + where + "' must be an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key())) throw Error("config: unknown field '" + where + it.key() + "'");
}

} // namespace detail

/// Default gate of every verification check; keys are the accepted tolerance overrides.
inline const std::map<std::string, double>& default_tolerances() {
    static const std::map<std::string, double> t{
        {"qft_oracle", 1e-10},
        {"qft_roundtrip", 1e-10},
        {"qft_left_linearity", 1e-10},
        {"qft_left_linearity_complex", 1e-10},
        {"qft_parseval", 1e-10},
        {"qft_convolution_theorem", 1e-9},
        {"qft_right_convolution_theorem", 1e-9},
        {"shearlet_frequency_path", 1e-9},
        {"shearlet_convolution_path", 1e-9},
        {"qst_convolution_path", 1e-9},
        {"qst_decomposition", 1e-9},
        {"qst_inner_product_path", 1e-9},
        {"covariance_linearity", 1e-10},
        {"covariance_generator_right", 1e-10},
        {"covariance_generator_left", 1e-10},
        {"covariance_translation", 1e-9},
        {"covariance_parabolic_scaling", 1e-10},
        {"covariance_isotropic_scaling", 1e-6},
        {"moyal_exact", 1e-9},
        {"moyal_paper_gap", 0.05},
        {"moyal_paper_bound", 1.0},
        {"energy_identity", 1e-9},
        {"inversion_frame_corrected", 1e-8},
        {"inversion_paper_constant", 2.0},
        {"heisenberg_deficit", 1e-9},
        {"frequency_collapse", 1e-9},
        {"log_uncertainty_deficit", 1e-9},
        {"digamma_constant", 1e-9},
        {"admissibility_refinement", 0.02},
    };
    return t;
}

/// Range checks performed before any compute.
inline void validate(const RunConfig& c) {
    auto fail = [](const std::string& m) { throw Error("config: " + m); };
    if (!(c.generator.r0 > 0.0) || !(c.generator.r1 > c.generator.r0))
        fail("generator band must satisfy 0 < r0 < r1");
    if (!(c.generator.angular_width > 0.0)) fail("generator angular_width must be positive");
    if (!std::isfinite(c.generator.psi2_slope_shift)) fail("generator psi2_slope_shift must be finite");
    if (c.grid.M < 1 || c.grid.M > 16) fail("grid M must be in [1, 16]");
    if (c.grid.L < 1 || c.grid.L > 256) fail("grid L must be in [1, 256]");
    if (!(c.grid.a_max > 0.0)) fail("grid a_max must be positive");
    if (!(c.grid.ds > 0.0)) fail("grid ds must be positive");
    if (!(c.grid.S >= 0.0)) fail("grid S must be nonnegative");
    double span = double(c.grid.L - 1) * c.grid.ds;
    if (std::abs(span - 2.0 * c.grid.S) > 1e-12 * std::max(1.0, c.grid.S))
        fail("grid shears must be symmetric: (L - 1) * ds must equal 2 * S");
    if (!(c.L1 > 0.0) || !(c.L2 > 0.0)) fail("extent must be positive");
    if (!std::isfinite(c.reference1) || !std::isfinite(c.reference2)) fail("reference frequency must be finite");
    if (c.input.format != "csv" && c.input.format != "csv4" && c.input.format != "pgm")
        fail("input format must be csv, csv4 or pgm");
    parse_mode(c.synthesis.mode);
    if (c.verify.size < 8 || c.verify.size > 64 || c.verify.size % 2) fail("verify size must be even in [8, 64]");
    if (c.verify.trials < 1 || c.verify.trials > 100) fail("verify trials must be in [1, 100]");
    for (const auto& [k, v] : c.verify.tolerances) {
        if (!default_tolerances().count(k)) fail("unknown tolerance '" + k + "'");
        if (!(v > 0.0)) fail("tolerance '" + k + "' must be positive");
    }
}

inline RunConfig config_from_json(const io::json& j) {
    using detail::read_opt;
    RunConfig c;
    detail::reject_unknown(j, {"input", "generator", "grid", "extent", "reference_frequency", "synthesis", "verify",
                               "output", "seed"},
                           "");
    if (j.contains("input")) {
        const auto& s = j["input"];
        detail::reject_unknown(s, {"path", "format"}, "input.");
        read_opt(s, "path", c.input.path, "input.");
        read_opt(s, "format", c.input.format, "input.");
    }
    if (j.contains("generator")) {
        const auto& s = j["generator"];
        detail::reject_unknown(s, {"r0", "r1", "angular_width", "psi2_slope_shift"}, "generator.");
        read_opt(s, "r0", c.generator.r0, "generator.");
        read_opt(s, "r1", c.generator.r1, "generator.");
        read_opt(s, "angular_width", c.generator.angular_width, "generator.");
        read_opt(s, "psi2_slope_shift", c.generator.psi2_slope_shift, "generator.");
    }
    if (j.contains("grid")) {
        const auto& s = j["grid"];
        detail::reject_unknown(s, {"M", "L", "a_max", "S", "ds"}, "grid.");
        read_opt(s, "M", c.grid.M, "grid.");
        read_opt(s, "L", c.grid.L, "grid.");
        read_opt(s, "a_max", c.grid.a_max, "grid.");
        read_opt(s, "S", c.grid.S, "grid.");
        read_opt(s, "ds", c.grid.ds, "grid.");
    }
    auto pair_of = [&](const char* key, double& x, double& y) {
        if (!j.contains(key)) return;
        const auto& a = j[key];
        if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number())
            throw Error(std::string("config: '") + key + "' must be a two-element numeric array");
        x = a[0].get<double>();
        y = a[1].get<double>();
    };
    pair_of("extent", c.L1, c.L2);
    pair_of("reference_frequency", c.reference1, c.reference2);
    if (j.contains("synthesis")) {
        const auto& s = j["synthesis"];
        detail::reject_unknown(s, {"mode", "coefficients", "original"}, "synthesis.");
        read_opt(s, "mode", c.synthesis.mode, "synthesis.");
        read_opt(s, "coefficients", c.synthesis.coefficients, "synthesis.");
        read_opt(s, "original", c.synthesis.original, "synthesis.");
    }
    if (j.contains("verify")) {
        const auto& s = j["verify"];
        detail::reject_unknown(s, {"size", "trials", "tolerances"}, "verify.");
        read_opt(s, "size", c.verify.size, "verify.");
        read_opt(s, "trials", c.verify.trials, "verify.");
        read_opt(s, "tolerances", c.verify.tolerances, "verify.");
    }
    read_opt(j, "output", c.output, "");
    read_opt(j, "seed", c.seed, "");
    validate(c);
    return c;
}

/// Canonical form: every field present, keys sorted.
inline io::json config_to_json(const RunConfig& c) {
    io::json j;
    j["input"] = {{"path", c.input.path}, {"format", c.input.format}};
    j["generator"] = {{"r0", c.generator.r0},
                      {"r1", c.generator.r1},
                      {"angular_width", c.generator.angular_width},
                      {"psi2_slope_shift", c.generator.psi2_slope_shift}};
    j["grid"] = {{"M", c.grid.M}, {"L", c.grid.L}, {"a_max", c.grid.a_max}, {"S", c.grid.S}, {"ds", c.grid.ds}};
    j["extent"] = {c.L1, c.L2};
    j["reference_frequency"] = {c.reference1, c.reference2};
    j["synthesis"] = {{"mode", c.synthesis.mode},
                      {"coefficients", c.synthesis.coefficients},
                      {"original", c.synthesis.original}};
    j["verify"] = {{"size", c.verify.size}, {"trials", c.verify.trials}, {"tolerances", c.verify.tolerances}};
    j["output"] = c.output;
    j["seed"] = c.seed;
    return j;
}

inline RunConfig load_config(const std::string& path) {
    return config_from_json(io::read_json(path));
}

/// Generator and extent parameters stored next to a QSHC file.
inline io::json sidecar_json(const RunConfig& c) {
    io::json j = config_to_json(c);
    return {{"format", "QSHC"},
            {"version", io::qshc_version},
            {"generator", j["generator"]},
            {"grid", j["grid"]},
            {"extent", j["extent"]},
            {"reference_frequency", j["reference_frequency"]}};
}

/// Rejects generator bands above the Nyquist frequency of an n1 x n2 field.
inline void check_nyquist(const RunConfig& c, std::size_t n1, std::size_t n2) {
    double nyq = 0.5 * std::min(double(n1) / c.L1, double(n2) / c.L2);
    if (c.generator.r1 > nyq)
        throw Error("generator exceeds Nyquist: r1=" + io::format_double(c.generator.r1) + " > N/2=" +
                    io::format_double(nyq) + " for a " + std::to_string(n1) + "x" + std::to_string(n2) + " field");
}

} // namespace qshear
