// qshear: analyze, synthesize and verify quaternion shearlet transforms.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qshear/config.hpp"
#include "qshear/io.hpp"
#include "qshear/qst.hpp"
#include "qshear/verify.hpp"

namespace {

using namespace qshear;
using io::json;

struct Options {
    std::string command;
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string mode;
};

RunConfig load(const Options& o) {
    RunConfig c = o.config.empty() ? config_from_json(json::object()) : load_config(o.config);
    if (o.seed) c.seed = *o.seed;
    if (!o.out.empty()) c.output = o.out;
    if (!o.mode.empty()) {
        parse_mode(o.mode);
        c.synthesis.mode = o.mode;
    }
    return c;
}

std::string require_output(const RunConfig& c) {
    if (c.output.empty()) throw Error("no output path (use --out or the config 'output' field)");
    return c.output;
}

int analyze(const RunConfig& c) {
    if (c.input.path.empty()) throw Error("analyze: config has no input.path");
    std::string out = require_output(c);
    QField F = io::read_field(c.input.path, c.input.format);
    if (F.n1() < 8 || F.n2() < 8) throw Error("analyze: input must be at least 8x8");
    F.extent = c.extent();
    check_nyquist(c, F.n1(), F.n2());

    QGenerator G = c.qgenerator();
    SamplingGrid grid = c.sampling_grid();
    CoefficientVolume V = qst_forward(F, G, grid);
    FrameTable table = admissibility_q(G, grid, F.n1(), F.n2(), F.extent, c.reference());
    QField Fh = qft_right_forward(F);

    double peak = 0.0;
    for (const auto& h : Fh.samples.data()) peak = std::max(peak, qnorm(h));
    double support_dev = table.flatness_deviation(
        [&](std::size_t i, std::size_t j) { return peak > 0.0 && qnorm(Fh(i, j)) > 1e-12 * peak; });

    json slices = json::array();
    auto energies = slice_energies(V);
    for (std::size_t m = 0; m < grid.M(); ++m)
        for (std::size_t l = 0; l < grid.L(); ++l)
            slices.push_back({{"m", m},
                              {"l", l},
                              {"scale", grid.scales[m]},
                              {"shear", grid.shears[l]},
                              {"weight", grid.weight(m, l)},
                              {"energy", energies[m * grid.L() + l]}});
    json summary = {{"shape", {F.n1(), F.n2()}},
                    {"C", table.C},
                    {"energy", qst_energy(V)},
                    {"spectral_energy", spectral_energy(Fh, table)},
                    {"signal_energy", energy(F)},
                    {"flatness_deviation", support_dev},
                    {"slices", slices}};

    io::write_qshc(out, V);
    json side = sidecar_json(c);
    side["shape"] = {F.n1(), F.n2()};
    io::write_json(out + ".json", side);
    io::write_json(out + ".summary.json", summary);
    return 0;
}

int synthesize(const RunConfig& c) {
    if (c.synthesis.coefficients.empty()) throw Error("synthesize: config has no synthesis.coefficients");
    std::string out = require_output(c);
    CoefficientVolume V = io::read_qshc(c.synthesis.coefficients);
    V.extent = c.extent();
    check_nyquist(c, V.n1, V.n2);

    std::string side_path = c.synthesis.coefficients + ".json";
    if (std::filesystem::exists(side_path)) {
        json side = io::read_json(side_path), mine = sidecar_json(c);
        for (const char* key : {"generator", "extent", "reference_frequency"})
            if (side.contains(key) && side[key] != mine[key])
                throw Error(std::string("synthesize: coefficient file was produced with a different ") + key);
    }
    SamplingGrid grid = c.sampling_grid();
    if (!(V.grid == grid)) throw Error("synthesize: coefficient grid does not match the config grid");
    V.grid = grid;

    QGenerator G = c.qgenerator();
    FrameTable table = admissibility_q(G, grid, V.n1, V.n2, V.extent, c.reference());
    InversionMode mode = parse_mode(c.synthesis.mode);
    QField rec = qst_inverse(V, G, table, mode);
    io::write_csv4(out, rec);

    json report = {{"mode", to_string(mode)}, {"shape", {V.n1, V.n2}}, {"C", table.C}};
    if (!c.synthesis.original.empty()) {
        QField F = io::read_field(c.synthesis.original, c.input.format);
        F.extent = c.extent();
        if (F.n1() != V.n1 || F.n2() != V.n2) throw Error("synthesize: original shape differs from coefficients");
        json errors;
        for (InversionMode m : {InversionMode::paper_constant, InversionMode::frame_corrected}) {
            QField r = m == mode ? rec : qst_inverse(V, G, table, m);
            errors[to_string(m)] = relative_l2(r, F);
        }
        report["relative_l2_error"] = errors;
    }
    io::write_json(out + ".report.json", report);
    return 0;
}

int verify(const RunConfig& c) {
    VerifyReport r = run_verification(c, c.seed);
    std::string text = io::dump_json(to_json(r));
    if (c.output.empty())
        std::cout << text;
    else
        io::detail::spit(c.output, text);
    for (const auto& chk : r.checks)
        if (!chk.pass)
            std::cerr << (chk.gating ? "FAIL " : "note ") << chk.name << ": " << io::format_double(chk.measured)
                      << " > " << io::format_double(chk.tolerance) << '\n';
    return r.passed() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quaternion shearlet transform: analysis, synthesis and verification"};
    app.require_subcommand(1, 1);
    Options o;
    for (auto [name, help] : {std::pair{"analyze", "Transform an input field and write a QSHC coefficient file"},
                              std::pair{"synthesize", "Reconstruct a field from a QSHC coefficient file"},
                              std::pair{"verify", "Run the identity checks on seeded random inputs"}}) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", o.config, "JSON run configuration");
        sub->add_option("--seed", o.seed, "Random seed");
        sub->add_option("--out", o.out, "Output path");
        sub->add_option("--mode", o.mode, "Inversion mode")->check(CLI::IsMember({"paper_constant", "frame_corrected"}));
        sub->callback([&o, name = std::string(name)] { o.command = name; });
    }
    CLI11_PARSE(app, argc, argv);
    try {
        RunConfig c = load(o);
        if (o.command == "analyze") return analyze(c);
        if (o.command == "synthesize") return synthesize(c);
        return verify(c);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
