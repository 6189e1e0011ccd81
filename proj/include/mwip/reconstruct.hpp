#pragma once

#include "mwip/identity.hpp"

namespace mwip {

/// One accessible space-time frequency: zeta = (xi_x . omega, xi_x) for a
/// direction omega in the cap |omega - omega0| <= epsilon.
struct Frequency {
    std::array<double, 2> omega{1, 0};
    std::array<double, 3> zeta{0, 0, 0};
};

/// Tensor sampling of the accessible cone: omega on the spherical cap,
/// xi_x on a per-axis grid with |xi_x components| <= xi_max; duplicates removed.
std::vector<Frequency> cone_frequencies(int dim, const std::array<double, 2>& omega0,
                                        double epsilon, double xi_max, int omega_count,
                                        int xi_count);

enum class ProbeMode { Oracle, Blind };

struct SampleRow {
    int i = 0, j = 0;
    Frequency freq;
    cplx estimate;          // all-terms sample (full lateral trace + final data)
    cplx estimate_partial;  // measured-data-only sample (G trace + u(T) pairing)
    cplx oracle;            // fourier_oracle of q2 - q1 at zeta
    double abs_err = 0;
    bool valid = true;
    std::string error;
};

struct ReconstructionResult {
    int dim = 0;
    double h = 0;
    ProbeMode mode = ProbeMode::Oracle;
    std::vector<SampleRow> rows;
    std::vector<double> entry_rel_l2;  // m*m row-major, estimate vs oracle over the set
};

/// Recovers Fourier samples of q2 - q1 on the given frequency set from the
/// boundary data of the conjugated difference field. Oracle mode builds the
/// adjoint probe with adjoint(q1); blind mode builds it with the zero
/// potential. Requires q2 - q1 to carry a compact support mask with a
/// two-layer margin.
ReconstructionResult recover_fourier_samples(const Grid& grid, const MatrixPotential& q1,
                                             const MatrixPotential& q2,
                                             const std::vector<Frequency>& freqs, double h,
                                             ProbeMode mode, const BoundaryPartition& partition);

struct BlindOracleRow {
    double h = 0;
    double gap = 0;  // Frobenius gap over the m*m samples
    std::vector<cplx> oracle_samples, blind_samples;
};

std::vector<BlindOracleRow> blind_vs_oracle_gap(const Grid& grid, const MatrixPotential& q1,
                                                const MatrixPotential& q2, const Frequency& freq,
                                                const std::vector<double>& h_list,
                                                const BoundaryPartition& partition);

struct UniquenessVerdict {
    enum class Kind { ConsistentZero, Distinguished, Ambiguous };
    Kind kind = Kind::Ambiguous;
    bool measurements_agree = false;
    double measurement_gap = 0;
    double tolerance = 0;    // 10 x identity discretization gap, floored at 1e-8
    double max_sample = 0;
    std::string text;
};

struct SmokeOptions {
    std::vector<Frequency> freqs;
    double h = 0.25;
};

/// Runs physical measurements for built-in data presets against both
/// potentials, recovers difference samples, and reports whether the distinct
/// potentials are distinguished (or a zero difference confirmed).
UniquenessVerdict uniqueness_smoke_test(const Grid& grid, const MatrixPotential& q1,
                                        const MatrixPotential& q2, const SmokeOptions& opts,
                                        const BoundaryPartition& partition);

/// Cone-restricted inverse transform of the recovered samples, for
/// visualization only ("filtered"): the accessible frequencies cover a cone,
/// so this is not an inversion. Returns (nt+1)*num_nodes*m*m values with the
/// matrix entries stacked row-major as components.
std::vector<cplx> filtered_inverse(const ReconstructionResult& result, const Grid& grid, int m,
                                   double xi_max, int xi_count);

}  // namespace mwip
