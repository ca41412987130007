#include <gtest/gtest.h>

#include "qshear/random.hpp"
#include "qshear/verify.hpp"
#include "support.hpp"

using namespace qshear;
using cd = std::complex<double>;
using detail::rel_max;

namespace {

const SamplingGrid grid = default_grid();
const QGenerator gen = default_qgenerator();

QField zero_field(std::size_t n) { return QField(n, n); }

} // namespace

TEST(Qst, ZeroInputGivesZeroVolume) {
    auto V = qst_forward(zero_field(16), gen, grid);
    for (const auto& h : V.data) EXPECT_EQ(h, Quaternion{});
    EXPECT_EQ(qst_energy(V), 0.0);
}

TEST(Qst, DirectPathMatchesInnerProductOracle) {
    Rng rng(31);
    GeneratorSpec base;
    base.center1 = 0.1;
    base.center2 = 0.05;
    QGenerator G = default_qgenerator(base);
    auto w1 = support::window(G.psi1.terms[0].window), w2 = support::window(G.psi2.terms[0].window);
    QField F = random_qfield(rng, 16, 16);
    auto Fg = support::to_grid(F);
    for (int probe = 0; probe < 4; ++probe) {
        double a = std::exp2(-uniform(rng, 0.0, 3.0)), s = uniform(rng, -1.0, 1.0);
        auto V = qst_forward_direct(F, G, SamplingGrid::from_nodes({a}, {s}, {1.0}));
        for (int t = 0; t < 4; ++t) {
            std::size_t i = rng() % 16, j = rng() % 16;
            auto expect = oracle::quaternion_coefficient(Fg, w1, w2, a, s, i / 16.0, j / 16.0, 16, 16);
            EXPECT_LE(qnorm(V.at(0, 0, i, j) - support::to_q(expect)), 1e-9);
        }
    }
}

TEST(Qst, FrequencyPathMatchesOracleForComplexGenerator) {
    Rng rng(30);
    GeneratorSpec base;
    base.center2 = 0.07;
    QGenerator G{Generator(base), Generator::zero()};
    auto w1 = support::window(base);
    oracle::Window none{1, 1};
    QField F = random_qfield(rng, 16, 16);
    QField Fh = qft_right_forward(F);
    auto Fg = support::to_grid(F);
    for (int probe = 0; probe < 8; ++probe) {
        double a = std::exp2(-uniform(rng, 0.0, 3.0)), s = uniform(rng, -1.0, 1.0);
        std::size_t i = rng() % 16, j = rng() % 16;
        auto expect = support::to_q(oracle::quaternion_coefficient(Fg, w1, none, a, s, i / 16.0, j / 16.0, 16, 16));
        EXPECT_LE(qnorm(qst_slice(Fh, G, a, s)(i, j) - expect), 1e-9);
    }
}

TEST(Qst, ThreePathsAgree) {
    Rng rng(32);
    QGenerator complex_gen{gen.psi1, Generator::zero()};
    for (std::size_t n : {8, 16}) {
        QField F = random_qfield(rng, n, n);
        auto freq = qst_forward(F, gen, grid);
        EXPECT_LE(rel_max(freq, qst_forward_convolution(F, gen, grid)), 1e-9);
        EXPECT_LE(rel_max(qst_forward_direct(F, gen, grid), qst_inner_product_from_components(F, gen, grid)), 1e-9);
        auto c = qst_forward(F, complex_gen, grid);
        EXPECT_LE(rel_max(c, qst_forward_direct(F, complex_gen, grid)), 1e-9);
        EXPECT_LE(rel_max(c, qst_forward_convolution(F, complex_gen, grid)), 1e-9);
    }
}

TEST(Qst, InnerProductDiffersFromConvolutionFormOnCrossTerms) {
    Rng rng(29);
    QField F = random_qfield(rng, 16, 16);
    EXPECT_GT(rel_max(qst_forward(F, gen, grid), qst_forward_direct(F, gen, grid)), 1e-3);
}

TEST(Qst, DecompositionMatchesForward) {
    Rng rng(33);
    for (int t = 0; t < 5; ++t) {
        QField F = random_qfield(rng, 16, 16);
        auto c = classical_components(F, gen, grid);
        for (const auto* v : {&c.psi1_f1, &c.psi1_f2, &c.psi2c_f1c, &c.psi2c_f2c}) {
            double m = 0.0;
            for (const auto& z : v->data) m = std::max(m, std::abs(z));
            EXPECT_GT(m, 1e-3);
        }
        EXPECT_LE(rel_max(qst_decompose(F, gen, grid), qst_forward(F, gen, grid)), 1e-9);
    }
}

TEST(Qst, ComplexReductions) {
    Rng rng(34);
    QGenerator G{Generator(GeneratorSpec{}), Generator::zero()};
    CField f = random_cfield(rng, 16, 16), zero(16, 16);
    for (auto& z : f.samples.data()) z = z.real();
    auto V = qst_forward(join_field(f, zero), G, grid);
    auto C = classical_transform(f, G.psi1, grid);
    for (std::size_t k = 0; k < V.data.size(); ++k) {
        EXPECT_NEAR(qnorm(V.data[k] - recompose(C.data[k], cd(0.0))), 0.0, 1e-12);
    }
    auto W = qst_forward(join_field(zero, f), G, grid);
    for (std::size_t k = 0; k < W.data.size(); ++k)
        EXPECT_NEAR(qnorm(W.data[k] - qj * recompose(C.data[k], cd(0.0))), 0.0, 1e-12);
}

TEST(Qst, AdmissibilityExamples) {
    GeneratorSpec g;
    double c1 = admissibility_classical(Generator(g), grid, 16, 16).C;
    EXPECT_NEAR(admissibility_q({Generator(g), Generator::zero()}, grid, 16, 16).C, c1, 1e-15 * c1);
    EXPECT_NEAR(admissibility_q({Generator(g), Generator(g)}, grid, 16, 16).C, 2.0 * c1, 1e-14 * c1);

    auto density = [&](double x, double y) { return gen.density(x, y); };
    auto w1 = support::window(gen.psi1.terms[0].window), w2 = support::window(gen.psi2.terms[0].window);
    auto oracle_density = [&](double x, double y) { return std::norm(w1(x, y)) + std::norm(w2(x, y)); };
    EXPECT_NEAR(density(2.5, 0.3), oracle_density(2.5, 0.3), 1e-15);
    const double ln2 = std::numbers::ln2;
    double fine = oracle::admissibility(oracle_density, 8.0, 2.0, std::log(0.125) - ln2 / 2, ln2 / 2, -1.25, 1.25, 4);
    double C = admissibility_q(gen, grid, 16, 16).C;
    EXPECT_LE(std::abs(C - fine) / fine, 0.02);
}

TEST(Qst, MoyalExact) {
    Rng rng(35);
    auto table = admissibility_q(gen, grid, 16, 16);
    QField F = random_qfield(rng, 16, 16), G = random_qfield(rng, 16, 16);
    auto r = moyal(F, G, gen, grid, table);
    EXPECT_LE(qnorm(r.lhs - r.rhs_exact) / qnorm(r.rhs_exact), 1e-9);
    auto z = moyal(F, zero_field(16), gen, grid, table);
    EXPECT_EQ(z.rhs_constant, Quaternion{});
    EXPECT_LE(qnorm(z.lhs) + qnorm(z.rhs_exact), 1e-300);
    auto s = moyal(F, F, gen, grid, table);
    double e = qst_energy(qst_forward(F, gen, grid));
    EXPECT_NEAR(s.lhs.a0, e, 1e-12 * e);
}

TEST(Qst, MoyalConstantFormOnFlatBand) {
    Rng rng(36);
    auto table = admissibility_q(gen, grid, 32, 32);
    auto mask = flat_band_mask(table, 0.01);
    double dev = std::max(table.flatness_deviation(mask), 1e-12);
    QField F = band_limited_qfield(rng, 32, 32, mask), G = band_limited_qfield(rng, 32, 32, mask);
    QField H = F;
    for (std::size_t k = 0; k < H.samples.size(); ++k) H.samples[k] += G.samples[k] * 0.3;
    auto r = moyal(F, H, gen, grid, table);
    double gap = qnorm(r.lhs - r.rhs_constant) / qnorm(r.rhs_constant);
    EXPECT_LE(gap, 0.05);
    // |sum F (Delta - C) conj(G)| <= dev C ||F|| ||G||
    EXPECT_LE(qnorm(r.lhs - r.rhs_constant), dev * table.C * std::sqrt(energy(F) * energy(H)) * (1 + 1e-12));
}

TEST(Qst, EnergyIdentity) {
    Rng rng(37);
    auto table = admissibility_q(gen, grid, 16, 16);
    QField F = random_qfield(rng, 16, 16);
    double e = qst_energy(qst_forward(F, gen, grid));
    EXPECT_LE(std::abs(e - spectral_energy(qft_right_forward(F), table)) / e, 1e-9);
    QField G = F;
    for (auto& h : G.samples.data()) h *= -2.5;
    EXPECT_NEAR(qst_energy(qst_forward(G, gen, grid)), 6.25 * e, 1e-12 * e);
}

TEST(Qst, InversionFrameCorrected) {
    Rng rng(38);
    auto table = admissibility_q(gen, grid, 32, 32);
    QField F = band_limited_qfield(rng, 32, 32, covered_mask(table, 1e-3));
    auto V = qst_forward(F, gen, grid);
    EXPECT_LE(relative_l2(qst_inverse(V, gen, table, InversionMode::frame_corrected), F), 1e-8);
    QField Z = qst_inverse(qst_forward(zero_field(32), gen, grid), gen, table, InversionMode::frame_corrected);
    EXPECT_EQ(energy(Z), 0.0);
}

TEST(Qst, InversionPaperConstantWithinBound) {
    Rng rng(39);
    auto table = admissibility_q(gen, grid, 32, 32);
    auto mask = covered_mask(table, 1e-3);
    QField F = band_limited_qfield(rng, 32, 32, mask);
    QField Fh = qft_right_forward(F);
    double dev = table.flatness_deviation([&](std::size_t i, std::size_t j) { return qnorm(Fh(i, j)) > 0.0; });
    double err = relative_l2(qst_inverse(qst_forward(F, gen, grid), gen, table, InversionMode::paper_constant), F);
    EXPECT_LE(err, dev * (1 + 1e-12));
    EXPECT_LE(err / dev, 2.0);
}

TEST(Qst, InversionErrors) {
    auto V = qst_forward(zero_field(16), gen, grid);
    EXPECT_THROW(qst_inverse(V, gen, admissibility_q(gen, grid, 32, 32), InversionMode::frame_corrected), Error);
    QGenerator none{Generator::zero(), Generator::zero()};
    auto t0 = admissibility_q(none, grid, 16, 16);
    EXPECT_THROW(qst_inverse(V, none, t0, InversionMode::paper_constant), Error);
    EXPECT_THROW(qst_inverse(V, none, t0, InversionMode::frame_corrected), Error);
    EXPECT_THROW(parse_mode("exact"), Error);
}

TEST(Qst, LinearityInTheSignal) {
    Rng rng(40);
    QField F = random_qfield(rng, 16, 16), H = random_qfield(rng, 16, 16);
    auto h1 = random_quaternion(rng), h2 = random_quaternion(rng);
    auto lhs = qst_forward(detail::add(detail::scale_left(h1, F), detail::scale_left(h2, H)), gen, grid);
    auto VF = qst_forward(F, gen, grid), VH = qst_forward(H, gen, grid);
    for (std::size_t k = 0; k < VF.data.size(); ++k) VF.data[k] = h1 * VF.data[k] + h2 * VH.data[k];
    EXPECT_LE(rel_max(lhs, VF), 1e-10);
    auto id = qst_forward(detail::scale_left(Quaternion(1.0), F), gen, grid);
    EXPECT_LE(rel_max(id, qst_forward(F, gen, grid)), 1e-15);
}

TEST(Qst, GeneratorScalarActsFromTheRight) {
    Rng rng(41);
    QField F = random_qfield(rng, 16, 16);
    QGenerator Phi = companion_qgenerator(GeneratorSpec{});
    auto h1 = random_quaternion(rng), h2 = random_quaternion(rng);
    auto mixed = left_multiply(h1, gen) + left_multiply(h2, Phi);
    auto A = qst_forward_direct(F, gen, grid), B = qst_forward_direct(F, Phi, grid);
    auto right = A;
    for (std::size_t k = 0; k < A.data.size(); ++k) right.data[k] = A.data[k] * qconj(h1) + B.data[k] * qconj(h2);
    EXPECT_LE(rel_max(qst_forward_direct(F, mixed, grid), right), 1e-10);

    auto z1 = from_complex(cd{gaussian(rng), gaussian(rng)}), z2 = from_complex(cd{gaussian(rng), gaussian(rng)});
    auto P = qst_forward(F, gen, grid), R = qst_forward(F, Phi, grid), expect = P;
    for (std::size_t k = 0; k < P.data.size(); ++k) expect.data[k] = P.data[k] * qconj(z1) + R.data[k] * qconj(z2);
    EXPECT_LE(rel_max(qst_forward(F, left_multiply(z1, gen) + left_multiply(z2, Phi), grid), expect), 1e-10);
}

TEST(Qst, LeftConjugateGeneratorLawFails) {
    Rng rng(45);
    QField F = random_qfield(rng, 16, 16);
    QGenerator Phi = companion_qgenerator(GeneratorSpec{});
    auto h1 = random_quaternion(rng), h2 = random_quaternion(rng);
    auto lhs = qst_forward(F, left_multiply(h1, gen) + left_multiply(h2, Phi), grid);
    auto A = qst_forward(F, gen, grid), B = qst_forward(F, Phi, grid), left = A;
    for (std::size_t k = 0; k < A.data.size(); ++k) left.data[k] = qconj(h1) * A.data[k] + qconj(h2) * B.data[k];
    EXPECT_GT(rel_max(lhs, left), 1e-3);
}

TEST(Qst, TranslationLaw) {
    Rng rng(42);
    QField F = random_qfield(rng, 16, 16);
    EXPECT_LE(rel_max(qst_translation_law(F, gen, grid, 0, 0), qst_forward(F, gen, grid)), 1e-12);
    for (int t = 0; t < 3; ++t) {
        long p1 = long(rng() % 16), p2 = long(rng() % 16);
        auto lhs = qst_forward(lattice_translate(F, p1, p2), gen, grid);
        EXPECT_LE(rel_max(lhs, qst_translation_law(F, gen, grid, p1, p2)), 1e-9);
    }
}

TEST(Qst, ParabolicDilation) {
    Rng rng(43);
    const std::size_t N = 32;
    QField F = band_limited_qfield(rng, N, N, detail::dilation_band(N, 4, 2));
    QField Fd = lattice_dilate(F, 4, 2);
    for (double a : {0.25, 0.18}) {
        double s = uniform(rng, -1.0, 1.0);
        auto lhs = qst_slice(qft_right_forward(Fd), gen, a, s);
        auto full = qst_slice(qft_right_forward(F), gen, 4.0 * a, 2.0 * s);
        QField rhs = lhs;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) rhs(i, j) = full((4 * i) % N, (2 * j) % N) * (1.0 / std::sqrt(8.0));
        EXPECT_GT(support::max_norm(lhs), 1e-3);
        EXPECT_LE(rel_max(lhs, rhs), 1e-10);
    }
}

TEST(Qst, LatticeHelpers) {
    Rng rng(44);
    QField F = random_qfield(rng, 8, 8);
    EXPECT_EQ(max_abs_diff(lattice_translate(F, 0, 0), F), 0.0);
    EXPECT_EQ(lattice_translate(F, 1, 2)(3, 5), F(2, 3));
    EXPECT_EQ(lattice_translate(F, -1, 0)(7, 0), F(0, 0));
    EXPECT_EQ(lattice_dilate(F, 2, 1)(3, 4), F(6, 4));
}
