#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "config.hpp"
#include "io.hpp"
#include "random.hpp"
#include "uncertainty.hpp"

namespace qshear {

struct CheckResult {
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    bool gating = true;
    bool pass = false;
};

struct VerifyReport {
    std::uint64_t seed = 0;
    std::vector<CheckResult> checks;

    bool passed() const {
        return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass || !c.gating; });
    }
    const CheckResult& check(const std::string& name) const {
        for (const auto& c : checks)
            if (c.name == name) return c;
        throw Error("no check named '" + name + "'");
    }
};

inline io::json to_json(const UncertaintyReport& r) {
    return {{"C", r.C},
            {"norm2", r.norm2},
            {"spatial_spread", r.spatial_spread},
            {"freq_spread", r.freq_spread},
            {"lhs", r.lhs},
            {"rhs", r.rhs},
            {"ratio", r.ratio},
            {"log_spatial", r.log_spatial},
            {"log_freq", r.log_freq},
            {"log_lhs", r.log_lhs},
            {"log_rhs", r.log_rhs},
            {"gap", r.gap}};
}

inline io::json to_json(const VerifyReport& r) {
    io::json checks = io::json::array();
    for (const auto& c : r.checks)
        checks.push_back({{"name", c.name},
                          {"measured", c.measured},
                          {"tolerance", c.tolerance},
                          {"gating", c.gating},
                          {"pass", c.pass}});
    return {{"seed", r.seed}, {"passed", r.passed()}, {"checks", checks}};
}

namespace detail {

inline double max_abs(const std::vector<Quaternion>& v) {
    double m = 0.0;
    for (const auto& h : v) m = std::max(m, qnorm(h));
    return m;
}

/// max ||a - b|| / max(max ||a||, max ||b||) over the samples.
inline double rel_max(const std::vector<Quaternion>& a, const std::vector<Quaternion>& b) {
    double d = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, qnorm(a[k] - b[k]));
    double s = std::max(max_abs(a), max_abs(b));
    return s > 0.0 ? d / s : d;
}

inline double rel_max(const QField& a, const QField& b) { return rel_max(a.samples.data(), b.samples.data()); }
inline double rel_max(const CoefficientVolume& a, const CoefficientVolume& b) { return rel_max(a.data, b.data); }

inline double rel_max(const CField& a, const CField& b) {
    double d = 0.0, s = 0.0;
    for (std::size_t k = 0; k < a.samples.size(); ++k) {
        d = std::max(d, std::abs(a.samples[k] - b.samples[k]));
        s = std::max({s, std::abs(a.samples[k]), std::abs(b.samples[k])});
    }
    return s > 0.0 ? d / s : d;
}

inline QField scale_left(const Quaternion& h, QField F) {
    for (auto& x : F.samples.data()) x = h * x;
    return F;
}

inline QField add(QField a, const QField& b) {
    for (std::size_t k = 0; k < a.samples.size(); ++k) a.samples[k] += b.samples[k];
    return a;
}

inline QField pointwise(const QField& a, const QField& b) {
    QField out = a;
    for (std::size_t k = 0; k < a.samples.size(); ++k) out.samples[k] = a.samples[k] * b.samples[k];
    return out;
}

/// Spectral support that stays strictly inside the Nyquist band after dilation by diag(c1, c2).
inline auto dilation_band(std::size_t n, std::size_t c1, std::size_t c2) {
    return [n, c1, c2](std::size_t i, std::size_t j) {
        auto c = [n](std::size_t k) { return k < n / 2 ? long(k) : long(k) - long(n); };
        return 2 * std::abs(c(i)) * long(c1) < long(n) && 2 * std::abs(c(j)) * long(c2) < long(n);
    };
}

inline std::size_t wrap(long i, std::size_t n) {
    long m = long(n);
    return std::size_t(((i % m) + m) % m);
}

} // namespace detail

/// Inner-product path expressed through the decomposition components with the j-cross terms
/// read at the reflected translation: (A1(t) + conj(B2(-t))) + j (A2(t) - conj(B1(-t))).
inline CoefficientVolume qst_inner_product_from_components(const QField& F, const QGenerator& G,
                                                           const SamplingGrid& grid) {
    auto c = classical_components(F, G, grid);
    std::size_t n1 = F.n1(), n2 = F.n2();
    CoefficientVolume vol(grid, n1, n2, F.extent);
    for (std::size_t m = 0; m < grid.M(); ++m)
        for (std::size_t l = 0; l < grid.L(); ++l)
            for (std::size_t i = 0; i < n1; ++i)
                for (std::size_t j = 0; j < n2; ++j) {
                    std::size_t ri = (n1 - i) % n1, rj = (n2 - j) % n2;
                    vol.at(m, l, i, j) = recompose(c.psi1_f1.at(m, l, i, j) + std::conj(c.psi2c_f2c.at(m, l, ri, rj)),
                                                   c.psi1_f2.at(m, l, i, j) - std::conj(c.psi2c_f1c.at(m, l, ri, rj)));
                }
    return vol;
}

/// Translation law: S(T_t' F)(t) from the components of F at t - t' and t + t'.
inline CoefficientVolume qst_translation_law(const QField& F, const QGenerator& G, const SamplingGrid& grid, long p1,
                                             long p2) {
    auto c = classical_components(F, G, grid);
    std::size_t n1 = F.n1(), n2 = F.n2();
    CoefficientVolume vol(grid, n1, n2, F.extent);
    for (std::size_t m = 0; m < grid.M(); ++m)
        for (std::size_t l = 0; l < grid.L(); ++l)
            for (std::size_t i = 0; i < n1; ++i)
                for (std::size_t j = 0; j < n2; ++j) {
                    std::size_t mi = detail::wrap(long(i) - p1, n1), mj = detail::wrap(long(j) - p2, n2);
                    std::size_t pi = detail::wrap(long(i) + p1, n1), pj = detail::wrap(long(j) + p2, n2);
                    vol.at(m, l, i, j) = recompose(c.psi1_f1.at(m, l, mi, mj) + std::conj(c.psi2c_f2c.at(m, l, pi, pj)),
                                                   c.psi1_f2.at(m, l, mi, mj) - std::conj(c.psi2c_f1c.at(m, l, pi, pj)));
                }
    return vol;
}

/// Second generator for the generator-covariance checks: shifted slope and a spatial offset.
inline QGenerator companion_qgenerator(const GeneratorSpec& base) {
    GeneratorSpec a = base, b = base;
    a.slope_shift -= 0.5;
    a.center1 = 0.125;
    b.center2 = -0.0625;
    return {Generator(a), Generator(b)};
}

/// Runs every identity check on seeded random inputs.
inline VerifyReport run_verification(const RunConfig& cfg, std::uint64_t seed) {
    VerifyReport report;
    report.seed = seed;
    const std::size_t N = cfg.verify.size, trials = cfg.verify.trials;
    const QGenerator G = cfg.qgenerator();
    const SamplingGrid grid = cfg.sampling_grid();
    const auto ref = cfg.reference();
    const std::size_t NB = std::max<std::size_t>(32, N);
    const FrameTable tableN = admissibility_q(G, grid, N, N, {}, ref);
    const FrameTable tableB = admissibility_q(G, grid, NB, NB, {}, ref);

    auto tol = [&](const std::string& name) {
        auto it = cfg.verify.tolerances.find(name);
        return it != cfg.verify.tolerances.end() ? it->second : default_tolerances().at(name);
    };
    std::uint64_t group = 0;
    auto run = [&](const std::string& name, bool gating, const std::function<double(Rng&)>& trial) {
        Rng rng(seed * 0x9E3779B97F4A7C15ull + (++group));
        double worst = 0.0;
        for (std::size_t t = 0; t < trials; ++t) {
            double v = trial(rng);
            worst = std::isnan(v) ? v : std::max(worst, v);
            if (std::isnan(worst)) break;
        }
        CheckResult c{name, worst, tol(name), gating, false};
        c.pass = !std::isnan(worst) && worst <= c.tolerance;
        report.checks.push_back(c);
    };
    using detail::rel_max;

    // QFT
    run("qft_oracle", true, [&](Rng& rng) {
        std::size_t n2 = 2 + 2 * (rng() % (N / 2));
        auto F = random_qfield(rng, N, n2);
        return max_abs_diff(qft_forward(F), qft_forward_direct(F));
    });
    run("qft_roundtrip", true, [&](Rng& rng) {
        auto F = random_qfield(rng, N, N);
        return max_abs_diff(qft_inverse(qft_forward(F)), F);
    });
    run("qft_left_linearity", false, [&](Rng& rng) {
        auto F = random_qfield(rng, N, N), H = random_qfield(rng, N, N);
        auto h1 = random_quaternion(rng), h2 = random_quaternion(rng);
        auto lhs = qft_forward(detail::add(detail::scale_left(h1, F), detail::scale_left(h2, H)));
        auto rhs = detail::add(detail::scale_left(h1, qft_forward(F)), detail::scale_left(h2, qft_forward(H)));
        return rel_max(rhs, lhs);
    });
    run("qft_left_linearity_complex", true, [&](Rng& rng) {
        auto F = random_qfield(rng, N, N), H = random_qfield(rng, N, N);
        Quaternion h1{gaussian(rng), gaussian(rng), 0.0, 0.0}, h2{gaussian(rng), gaussian(rng), 0.0, 0.0};
        auto lhs = qft_forward(detail::add(detail::scale_left(h1, F), detail::scale_left(h2, H)));
        auto rhs = detail::add(detail::scale_left(h1, qft_forward(F)), detail::scale_left(h2, qft_forward(H)));
        return rel_max(rhs, lhs);
    });
    run("qft_parseval", true, [&](Rng& rng) {
        auto F = random_qfield(rng, N, N);
        return std::abs(energy(qft_forward(F)) - energy(F)) / energy(F);
    });
    run("qft_convolution_theorem", false, [&](Rng& rng) {
        auto F = random_qfield(rng, N, N), H = random_qfield(rng, N, N);
        return rel_max(qft_forward(qconvolve(F, H)), detail::pointwise(qft_forward(F), qft_forward(H)));
    });
    run("qft_right_convolution_theorem", true, [&](Rng& rng) {
        auto F = random_qfield(rng, N, N), H = random_qfield(rng, N, N);
        return rel_max(qft_right_forward(qconvolve(F, H)),
                       detail::pointwise(qft_right_forward(F), qft_right_forward(H)));
    });

    // classical shearlet
    run("shearlet_frequency_path", true, [&](Rng& rng) {
        auto f = random_cfield(rng, N, N);
        auto fhat = dft_forward(f);
        double worst = 0.0;
        for (int probe = 0; probe < 5; ++probe) {
            double a = std::exp2(-uniform(rng, 0.0, 3.0)), s = uniform(rng, -1.0, 1.0);
            std::size_t i = rng() % N, j = rng() % N;
            auto slice = classical_slice(fhat, G.psi1, a, s);
            auto direct = classical_coefficient_direct(f, G.psi1, {a, s, double(i) / double(N), double(j) / double(N)});
            double scale = 0.0;
            for (auto z : slice.samples.data()) scale = std::max(scale, std::abs(z));
            worst = std::max(worst, std::abs(slice(i, j) - direct) / scale);
        }
        return worst;
    });
    run("shearlet_convolution_path", true, [&](Rng& rng) {
        auto f = random_cfield(rng, N, N);
        double a = std::exp2(-uniform(rng, 0.0, 3.0)), s = uniform(rng, -1.0, 1.0);
        return rel_max(classical_slice_convolution(f, G.psi1, a, s), classical_slice(dft_forward(f), G.psi1, a, s));
    });

    // quaternion shearlet paths
    run("qst_convolution_path", true, [&](Rng& rng) {
        auto F = random_qfield(rng, N, N);
        return rel_max(qst_forward_convolution(F, G, grid), qst_forward(F, G, grid));
    });
    run("qst_decomposition", true, [&](Rng& rng) {
        auto F = random_qfield(rng, N, N);
        return rel_max(qst_decompose(F, G, grid), qst_forward(F, G, grid));
    });
    run("qst_inner_product_path", true, [&](Rng& rng) {
        auto F = random_qfield(rng, N, N);
        return rel_max(qst_forward_direct(F, G, grid), qst_inner_product_from_components(F, G, grid));
    });

    // covariances
    run("covariance_linearity", true, [&](Rng& rng) {
        auto F = random_qfield(rng, N, N), H = random_qfield(rng, N, N);
        auto h1 = random_quaternion(rng), h2 = random_quaternion(rng);
        auto lhs = qst_forward(detail::add(detail::scale_left(h1, F), detail::scale_left(h2, H)), G, grid);
        auto a = qst_forward(F, G, grid), b = qst_forward(H, G, grid);
        for (std::size_t k = 0; k < a.data.size(); ++k) a.data[k] = h1 * a.data[k] + h2 * b.data[k];
        return rel_max(a, lhs);
    });
    const QGenerator Phi = companion_qgenerator(cfg.base_spec());
    run("covariance_generator_right", true, [&](Rng& rng) {
        auto F = random_qfield(rng, N, N);
        auto h1 = random_quaternion(rng), h2 = random_quaternion(rng);
        auto mixed = left_multiply(h1, G) + left_multiply(h2, Phi);
        auto lhs = qst_forward_direct(F, mixed, grid);
        auto a = qst_forward_direct(F, G, grid), b = qst_forward_direct(F, Phi, grid);
        for (std::size_t k = 0; k < a.data.size(); ++k) a.data[k] = a.data[k] * qconj(h1) + b.data[k] * qconj(h2);
        double direct = rel_max(a, lhs);
        std::complex<double> z1{gaussian(rng), gaussian(rng)}, z2{gaussian(rng), gaussian(rng)};
        auto c1 = from_complex(z1), c2 = from_complex(z2);
        auto lhs2 = qst_forward(F, left_multiply(c1, G) + left_multiply(c2, Phi), grid);
        auto p = qst_forward(F, G, grid), q = qst_forward(F, Phi, grid);
        for (std::size_t k = 0; k < p.data.size(); ++k) p.data[k] = p.data[k] * qconj(c1) + q.data[k] * qconj(c2);
        return std::max(direct, rel_max(p, lhs2));
    });
    run("covariance_generator_left", false, [&](Rng& rng) {
        auto F = random_qfield(rng, N, N);
        auto h1 = random_quaternion(rng), h2 = random_quaternion(rng);
        auto lhs = qst_forward(F, left_multiply(h1, G) + left_multiply(h2, Phi), grid);
        auto a = qst_forward(F, G, grid), b = qst_forward(F, Phi, grid);
        for (std::size_t k = 0; k < a.data.size(); ++k) a.data[k] = qconj(h1) * a.data[k] + qconj(h2) * b.data[k];
        return rel_max(a, lhs);
    });
    run("covariance_translation", true, [&](Rng& rng) {
        auto F = random_qfield(rng, N, N);
        long p1 = long(rng() % N), p2 = long(rng() % N);
        return rel_max(qst_forward(lattice_translate(F, p1, p2), G, grid), qst_translation_law(F, G, grid, p1, p2));
    });
    run("covariance_parabolic_scaling", true, [&](Rng& rng) {
        auto F = band_limited_qfield(rng, NB, NB, detail::dilation_band(NB, 4, 2));
        auto Fd = lattice_dilate(F, 4, 2);
        double a = std::exp2(-uniform(rng, 2.0, 3.0)), s = uniform(rng, -1.0, 1.0);
        auto lhs = qst_slice(qft_right_forward(Fd), G, a, s);
        auto full = qst_slice(qft_right_forward(F), G, 4.0 * a, 2.0 * s);
        QField rhs = lhs;
        for (std::size_t i = 0; i < NB; ++i)
            for (std::size_t j = 0; j < NB; ++j) rhs(i, j) = full((4 * i) % NB, (2 * j) % NB) * (1.0 / std::sqrt(8.0));
        return rel_max(lhs, rhs);
    });
    run("covariance_isotropic_scaling", false, [&](Rng& rng) {
        std::size_t lam = rng() % 2 ? 2 : 4;
        auto F = band_limited_qfield(rng, NB, NB, detail::dilation_band(NB, lam, lam));
        auto Fd = lattice_dilate(F, lam, lam);
        double a = std::exp2(-uniform(rng, 2.0, 3.0)), s = uniform(rng, -1.0, 1.0);
        auto lhs = qst_slice(qft_right_forward(Fd), G, a, s);
        auto full = qst_slice(qft_right_forward(F), G, a, s / double(lam));
        QField rhs = lhs;
        for (std::size_t i = 0; i < NB; ++i)
            for (std::size_t j = 0; j < NB; ++j) rhs(i, j) = full((lam * i) % NB, (lam * j) % NB) * (1.0 / double(lam));
        return rel_max(lhs, rhs);
    });

    // Moyal, energy, inversion
    run("moyal_exact", true, [&](Rng& rng) {
        auto F = random_qfield(rng, N, N);
        auto H = detail::add(F, random_qfield(rng, N, N));
        auto r = moyal(F, H, G, grid, tableN);
        return qnorm(r.lhs - r.rhs_exact) / qnorm(r.rhs_exact);
    });
    const double flat_tol = 0.01;
    auto flat = flat_band_mask(tableB, flat_tol);
    const double flat_dev = std::max(tableB.flatness_deviation(flat), 1e-12);
    std::vector<double> bounds;
    run("moyal_paper_gap", true, [&](Rng& rng) {
        auto F = band_limited_qfield(rng, NB, NB, flat);
        auto noise = band_limited_qfield(rng, NB, NB, flat);
        for (auto& h : noise.samples.data()) h *= 0.3;
        auto H = detail::add(F, noise);
        auto r = moyal(F, H, G, grid, tableB);
        auto Fh = qft_right_forward(F), Hh = qft_right_forward(H);
        double cs = 0.0;
        for (std::size_t k = 0; k < Fh.samples.size(); ++k) cs += qnorm(Fh.samples[k]) * qnorm(Hh.samples[k]);
        cs *= Fh.cell_area();
        double gap = qnorm(r.lhs - r.rhs_constant) / qnorm(r.rhs_constant);
        bounds.push_back(gap / (flat_dev * tableB.C * cs / qnorm(r.rhs_constant)));
        return gap;
    });
    {
        double worst = bounds.empty() ? 0.0 : *std::max_element(bounds.begin(), bounds.end());
        CheckResult c{"moyal_paper_bound", worst, tol("moyal_paper_bound"), true, false};
        c.pass = worst <= c.tolerance;
        report.checks.push_back(c);
    }
    run("energy_identity", true, [&](Rng& rng) {
        auto F = random_qfield(rng, N, N);
        double e = qst_energy(qst_forward(F, G, grid)), o = spectral_energy(qft_right_forward(F), tableN);
        return std::abs(e - o) / o;
    });
    run("inversion_frame_corrected", true, [&](Rng& rng) {
        auto F = band_limited_qfield(rng, NB, NB, covered_mask(tableB, 1e-3));
        auto rec = qst_inverse(qst_forward(F, G, grid), G, tableB, InversionMode::frame_corrected);
        return relative_l2(rec, F);
    });
    run("inversion_paper_constant", true, [&](Rng& rng) {
        auto F = band_limited_qfield(rng, NB, NB, flat);
        auto rec = qst_inverse(qst_forward(F, G, grid), G, tableB, InversionMode::paper_constant);
        return relative_l2(rec, F) / flat_dev;
    });

    // uncertainty
    const std::size_t NU = 64;
    const FrameTable tableU = admissibility_q(G, grid, NU, NU, {}, ref);
    run("heisenberg_deficit", true, [&](Rng& rng) {
        auto r = heisenberg(smooth_centered_qfield(rng, NU), G, grid, tableU);
        return std::max(0.0, 1.0 - r.ratio);
    });
    run("frequency_collapse", true, [&](Rng& rng) {
        auto [lhs, rhs] = frequency_collapse(smooth_centered_qfield(rng, NU), G, grid, tableU);
        return std::abs(lhs - rhs) / rhs;
    });
    run("log_uncertainty_deficit", true, [&](Rng& rng) {
        auto r = log_uncertainty(smooth_centered_qfield(rng, NU), G, grid, tableU);
        return std::max(0.0, -r.gap / (std::abs(r.log_lhs) + std::abs(r.log_rhs)));
    });
    run("digamma_constant", true, [&](Rng&) {
        const double gamma = 0.57721566490153286061;
        double closed = -gamma - 2.0 * std::numbers::ln2 - std::log(std::numbers::pi);
        return std::abs(log_uncertainty_constant() - closed);
    });
    run("admissibility_refinement", true, [&](Rng&) {
        auto coarse = admissibility_q(G, grid, 8, 8, {}, ref);
        auto fine = admissibility_q(G, refine(grid, 4), 8, 8, {}, ref);
        return std::abs(coarse.C - fine.C) / fine.C;
    });
    return report;
}

} // namespace qshear
