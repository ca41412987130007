// Analyze a random band-limited field and reconstruct it with both inversion modes.

#include <cstdio>

#include "qshear/qst.hpp"
#include "qshear/random.hpp"

using namespace qshear;

int main() {
    const std::size_t n = 32;
    QGenerator G = default_qgenerator();
    SamplingGrid grid = default_grid();
    FrameTable table = admissibility_q(G, grid, n, n);

    Rng rng(7);
    QField F = band_limited_qfield(rng, n, n, covered_mask(table, 1e-3));
    CoefficientVolume V = qst_forward(F, G, grid);

    std::printf("C = %.6f, coefficient energy = %.6f, C ||F||^2 = %.6f\n", table.C, qst_energy(V),
                table.C * energy(F));
    for (InversionMode mode : {InversionMode::frame_corrected, InversionMode::paper_constant})
        std::printf("%-16s relative L2 error %.3e\n", to_string(mode),
                    relative_l2(qst_inverse(V, G, table, mode), F));
}
