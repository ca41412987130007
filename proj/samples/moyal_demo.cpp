// Compare the coefficient-domain pairing of two fields with its exact and constant-weight forms.

#include <cstdio>

#include "qshear/qst.hpp"
#include "qshear/random.hpp"

using namespace qshear;

namespace {

void show(const char* label, const Quaternion& h) {
    std::printf("  %-10s %+.6f %+.6fi %+.6fj %+.6fk\n", label, h.a0, h.a1, h.a2, h.a3);
}

} // namespace

int main() {
    const std::size_t n = 32;
    QGenerator G = default_qgenerator();
    SamplingGrid grid = default_grid();
    FrameTable table = admissibility_q(G, grid, n, n);
    auto flat = flat_band_mask(table, 0.01);

    Rng rng(11);
    QField F = band_limited_qfield(rng, n, n, flat), H = band_limited_qfield(rng, n, n, flat);
    for (std::size_t k = 0; k < H.samples.size(); ++k) H.samples[k] = F.samples[k] + 0.3 * H.samples[k];

    MoyalResult r = moyal(F, H, G, grid, table);
    std::printf("flat band: %zu of %zu frequencies, deviation %.3e\n", [&] {
        std::size_t c = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) c += flat(i, j);
        return c;
    }(), n * n, table.flatness_deviation(flat));
    show("pairing", r.lhs);
    show("exact", r.rhs_exact);
    show("C <F,H>", r.rhs_constant);
    std::printf("relative gap to C <F,H>: %.3e\n", qnorm(r.lhs - r.rhs_constant) / qnorm(r.rhs_constant));
}
