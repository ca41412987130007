#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <unistd.h>

#include "qshear/config.hpp"
#include "qshear/random.hpp"
#include "support.hpp"

using namespace qshear;
namespace fs = std::filesystem;

namespace {

fs::path scratch() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / ("qshear_cli_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string path(const std::string& name) { return (scratch() / name).string(); }

struct Outcome {
    int code = -1;
    std::string out, err;
};

Outcome run(const std::string& args) {
    std::string o = path("stdout.txt"), e = path("stderr.txt");
    std::string cmd = std::string("\"") + QSHEAR_CLI_PATH + "\" " + args + " >\"" + o + "\" 2>\"" + e + "\"";
    int status = std::system(cmd.c_str());
    Outcome r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = io::detail::slurp(o);
    r.err = io::detail::slurp(e);
    return r;
}

void write_config(const std::string& name, const io::json& j) { io::write_json(path(name), j); }

QField input_field(std::uint64_t seed, std::size_t n) {
    Rng rng(seed);
    return random_qfield(rng, n, n);
}

} // namespace

TEST(Cli, VerifyPassesForSeeds) {
    for (int seed = 1; seed <= 20; ++seed) {
        Outcome r = run("verify --seed " + std::to_string(seed));
        EXPECT_EQ(r.code, 0) << "seed " << seed << "\n" << r.err;
        auto j = io::json::parse(r.out);
        EXPECT_TRUE(j["passed"].get<bool>());
        EXPECT_EQ(j["seed"].get<int>(), seed);
        EXPECT_EQ(r.err.find("FAIL"), std::string::npos);
    }
}

TEST(Cli, TightToleranceFails) {
    write_config("tight.json", {{"verify", {{"tolerances", {{"moyal_paper_gap", 1e-15}}}}}});
    Outcome r = run("verify --seed 3 --config " + path("tight.json"));
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("FAIL moyal_paper_gap"), std::string::npos);
    EXPECT_FALSE(io::json::parse(r.out)["passed"].get<bool>());
}

TEST(Cli, VerifyIsDeterministic) {
    Outcome a = run("verify --seed 7 --out " + path("v1.json"));
    Outcome b = run("verify --seed 7 --out " + path("v2.json"));
    ASSERT_EQ(a.code, 0);
    ASSERT_EQ(b.code, 0);
    EXPECT_EQ(io::detail::slurp(path("v1.json")), io::detail::slurp(path("v2.json")));
    Outcome c = run("verify --seed 8");
    EXPECT_NE(c.out, io::detail::slurp(path("v1.json")));
}

TEST(Cli, AnalyzeAndSynthesize) {
    Rng rng(81);
    FrameTable band = admissibility_q(default_qgenerator(), default_grid(), 16, 16);
    QField F = band_limited_qfield(rng, 16, 16, covered_mask(band, 1e-3));
    io::write_csv4(path("in.csv4"), F);
    write_config("an.json", {{"input", {{"path", path("in.csv4")}, {"format", "csv4"}}},
                             {"synthesis", {{"coefficients", path("c.qshc")}, {"original", path("in.csv4")}}}});
    Outcome a = run("analyze --config " + path("an.json") + " --out " + path("c.qshc"));
    ASSERT_EQ(a.code, 0) << a.err;
    Outcome b = run("analyze --config " + path("an.json") + " --out " + path("c2.qshc"));
    ASSERT_EQ(b.code, 0);
    EXPECT_EQ(io::detail::slurp(path("c.qshc")), io::detail::slurp(path("c2.qshc")));
    EXPECT_EQ(io::detail::slurp(path("c.qshc.summary.json")), io::detail::slurp(path("c2.qshc.summary.json")));

    // report values against direct library calls
    QGenerator G = default_qgenerator();
    SamplingGrid grid = default_grid();
    CoefficientVolume V = qst_forward(F, G, grid);
    FrameTable table = admissibility_q(G, grid, 16, 16);
    EXPECT_EQ(io::encode_qshc(V), io::detail::slurp(path("c.qshc")));
    auto summary = io::read_json(path("c.qshc.summary.json"));
    EXPECT_EQ(summary["C"].get<double>(), table.C);
    EXPECT_EQ(summary["energy"].get<double>(), qst_energy(V));
    EXPECT_EQ(summary["signal_energy"].get<double>(), energy(F));
    EXPECT_EQ(summary["slices"].size(), 20u);
    EXPECT_EQ(summary["shape"], io::json({16, 16}));

    // spectral oracle: sum_k sum_{m,l} w |Psi^_{a,s}(k)|^2 ||F^(k)||^2
    auto [f1, f2] = split_field(F);
    auto d1 = oracle::dft(support::to_grid(f1), 16, 16), d2 = oracle::dft(support::to_grid(f2), 16, 16);
    GeneratorSpec s2;
    s2.slope_shift = 0.5;
    oracle::Window w1 = support::window(GeneratorSpec{}), w2 = support::window(s2);
    double spectral = 0.0;
    for (std::size_t i = 0; i < 16; ++i)
        for (std::size_t j = 0; j < 16; ++j) {
            double k1 = oracle::centered(i, 16), k2 = oracle::centered(j, 16), delta = 0.0;
            for (std::size_t m = 0; m < grid.M(); ++m)
                for (std::size_t l = 0; l < grid.L(); ++l) {
                    double a = grid.scales[m], s = grid.shears[l];
                    delta += grid.weight(m, l) * (std::norm(oracle::atom_hat(w1, a, s, 0, 0, k1, k2)) +
                                                  std::norm(oracle::atom_hat(w2, a, s, 0, 0, k1, k2)));
                }
            spectral += delta * (std::norm(d1[i * 16 + j]) + std::norm(d2[i * 16 + j]));
        }
    EXPECT_LE(std::abs(summary["energy"].get<double>() - spectral) / spectral, 1e-9);
    EXPECT_LE(std::abs(summary["spectral_energy"].get<double>() - spectral) / spectral, 1e-9);

    auto side = io::read_json(path("c.qshc.json"));
    EXPECT_EQ(side["format"], "QSHC");
    EXPECT_EQ(side["shape"], io::json({16, 16}));

    Outcome s = run("synthesize --config " + path("an.json") + " --out " + path("rec.csv4"));
    ASSERT_EQ(s.code, 0) << s.err;
    QField rec = io::read_csv4(path("rec.csv4"));
    EXPECT_EQ(max_abs_diff(rec, qst_inverse(V, G, table, InversionMode::frame_corrected)), 0.0);
    auto report = io::read_json(path("rec.csv4.report.json"));
    EXPECT_EQ(report["mode"], "frame_corrected");
    double frame = report["relative_l2_error"]["frame_corrected"].get<double>();
    double paper = report["relative_l2_error"]["paper_constant"].get<double>();
    EXPECT_EQ(paper, relative_l2(qst_inverse(V, G, table, InversionMode::paper_constant), F));
    EXPECT_LE(frame, 1e-8);

    Outcome p = run("synthesize --mode paper_constant --config " + path("an.json") + " --out " + path("recp.csv4"));
    ASSERT_EQ(p.code, 0) << p.err;
    EXPECT_EQ(io::read_json(path("recp.csv4.report.json"))["mode"], "paper_constant");
}

TEST(Cli, ZeroImage) {
    io::write_csv4(path("zero.csv4"), QField(16, 16));
    write_config("zero.json", {{"input", {{"path", path("zero.csv4")}, {"format", "csv4"}}},
                               {"synthesis", {{"coefficients", path("z.qshc")}}}});
    ASSERT_EQ(run("analyze --config " + path("zero.json") + " --out " + path("z.qshc")).code, 0);
    auto summary = io::read_json(path("z.qshc.summary.json"));
    EXPECT_EQ(summary["energy"].get<double>(), 0.0);
    EXPECT_EQ(summary["signal_energy"].get<double>(), 0.0);
    ASSERT_EQ(run("synthesize --config " + path("zero.json") + " --out " + path("z.csv4")).code, 0);
    EXPECT_EQ(max_abs_diff(io::read_csv4(path("z.csv4")), QField(16, 16)), 0.0);
}

TEST(Cli, Errors) {
    io::write_csv4(path("small.csv4"), input_field(82, 8));
    write_config("nyq.json",
                 {{"input", {{"path", path("small.csv4")}, {"format", "csv4"}}}, {"generator", {{"r1", 6.0}}}});
    Outcome n = run("analyze --config " + path("nyq.json") + " --out " + path("n.qshc"));
    EXPECT_EQ(n.code, 2);
    EXPECT_NE(n.err.find("generator exceeds Nyquist"), std::string::npos);

    io::write_csv4(path("t.csv4"), input_field(83, 16));
    write_config("t.json", {{"input", {{"path", path("t.csv4")}, {"format", "csv4"}}},
                            {"synthesis", {{"coefficients", path("t.qshc")}}}});
    ASSERT_EQ(run("analyze --config " + path("t.json") + " --out " + path("t.qshc")).code, 0);
    std::string bytes = io::detail::slurp(path("t.qshc"));
    io::detail::spit(path("t.qshc"), bytes.substr(0, bytes.size() - 40));
    Outcome t = run("synthesize --config " + path("t.json") + " --out " + path("t.csv4"));
    EXPECT_EQ(t.code, 2);
    EXPECT_NE(t.err.find("unexpected end of coefficient stream"), std::string::npos);

    write_config("bad.json", {{"grid", {{"M", 0}}}});
    Outcome b = run("verify --config " + path("bad.json"));
    EXPECT_EQ(b.code, 2);
    EXPECT_NE(b.err.find("grid M"), std::string::npos);

    Outcome m = run("synthesize --mode sideways");
    EXPECT_NE(m.code, 0);
    EXPECT_NE(run("analyze").code, 0);
    EXPECT_NE(run("").code, 0);
}
