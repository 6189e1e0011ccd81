#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>

#include "mwip/field.hpp"
#include "mwip/geometry.hpp"
#include "mwip/potential.hpp"

namespace mwip {

/// Thrown when a solve produces non-finite values or an iteration fails.
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Fills ncomp values at a spatial point.
using VecFn = std::function<void(const double* x, cplx* out)>;
/// Fills ncomp values at a lateral-boundary point.
using TraceFn = std::function<void(double t, const double* x, cplx* out)>;
/// Fills a whole level (num_nodes*ncomp values) of a space-time source.
using SourceFn = std::function<void(int k, double t, std::span<cplx> out)>;
/// Receives each finalized level, in solve order, with its physical index.
using LevelObserver = std::function<void(int k, std::span<const cplx> level)>;

/// Dirichlet problem data. Null members mean identically zero.
struct InitialBoundaryData {
    VecFn phi;    // u(0,.)
    VecFn psi;    // du/dt(0,.)
    TraceFn f;    // u on Sigma
    std::string label = "custom";
};

// ---------------------------------------------------------------- physical

/// Applies L_q = Box + q to a physical field. Interior nodes/levels use
/// centered stencils; the closure uses second-order one-sided ones.
WaveField apply_operator(const MatrixPotential& q, const WaveField& u);

/// Leapfrog solve of L_q u = F with data (phi, psi, f). Taylor start for the
/// first level. Rejects incompatible data (f(0) != phi on the boundary).
WaveField solve_ibvp(const Grid& grid, const MatrixPotential& q, const InitialBoundaryData& data,
                     const SourceFn& F = {});

/// Streaming variant: levels are handed to the observer and not stored.
void run_ibvp(const Grid& grid, const MatrixPotential& q, const InitialBoundaryData& data,
              const SourceFn& F, const LevelObserver& observe);

/// Component-wise outward normal derivative on the lateral boundary,
/// one node entry per boundary node (corner normals use the face tie-break).
struct BoundaryTrace {
    std::vector<int> nodes;
    int ncomp = 0;
    int num_levels = 0;
    std::vector<cplx> values;  // (level, node, comp), level-major
    cplx at(int k, int local_node, int c) const {
        return values[(static_cast<std::size_t>(k) * nodes.size() + local_node) * ncomp + c];
    }
};
BoundaryTrace neumann_trace(const WaveField& u);

enum class TraceRegion { FullSigma, GOnly };

/// Boundary measurement (u(T,.), normal trace, final velocity).
/// The final velocity is not part of the input-output map; consumers must
/// opt in via the provenance flag.
struct Measurement {
    std::vector<cplx> final_value;     // u(T): num_nodes*ncomp
    std::vector<cplx> final_velocity;  // du/dt(T), one-sided second order
    bool final_velocity_is_auxiliary = true;
    BoundaryTrace neumann;
    TraceRegion region = TraceRegion::FullSigma;
    std::string input_label;
    double compat_residual = 0;  // max |f(0)-phi| over boundary nodes
};

Measurement measure(const Grid& grid, const MatrixPotential& q, const InitialBoundaryData& data,
                    TraceRegion region = TraceRegion::FullSigma,
                    const BoundaryPartition* partition = nullptr);

/// Data-to-solution stability audit:
/// lhs = |du/dnu|_{L2(Sigma)} + |u|_{H1(Q)},
/// rhs = |phi|_{H1(Omega)} + |psi|_{L2(Omega)} + |f|_{L2(Sigma)}.
struct EnergyAudit {
    double lhs_trace = 0, lhs_h1 = 0, lhs_total = 0;
    double rhs_phi = 0, rhs_psi = 0, rhs_f = 0, rhs_total = 0;
    double ratio = 0;  // 0 when rhs vanishes
    bool stability_violation = false;
};
EnergyAudit energy_audit(const WaveField& u, const InitialBoundaryData& data);

// -------------------------------------------------------------- conjugated

/// Conjugated wave operator h^2 Box + sign*2h(d_t - omega.grad), obtained by
/// conjugating h^2 Box with exp(sign*phi/h) for the null phase phi = t+x.omega.
struct ConjugatedOp {
    double h = 0;
    std::array<double, 2> omega{1, 0};
    int sign = +1;
};

enum class TimeDirection { Forward, Backward };

/// Transport-tightened time step bound for conjugated solves.
double conjugated_dt_limit(const Grid& grid, double h);

/// Probe resolution rule: h must be resolved by the grid (h >= 8*dx).
void check_resolution(const Grid& grid, double h);

/// Solves (conjugated op + h^2 q_tilde) w = S with zero Cauchy and Dirichlet
/// data. Forward places the zero Cauchy data at t=0, Backward at t=T (used
/// where the opposite sign's forward modes grow like exp(t/h)).
WaveField solve_conjugated(const Grid& grid, const MatrixPotential& q_tilde,
                           const ConjugatedOp& op, const SourceFn& S, int ncomp,
                           TimeDirection dir = TimeDirection::Forward);

/// Streaming variant; the observer sees physical level indices (reversed
/// visit order for Backward).
void run_conjugated(const Grid& grid, const MatrixPotential& q_tilde, const ConjugatedOp& op,
                    const SourceFn& S, int ncomp, TimeDirection dir, const LevelObserver& observe);

/// Applies the discrete conjugated operator (+ h^2 q_tilde) to three
/// consecutive levels of an amplitude field; interior nodes only.
void apply_conjugated_stencil(const Grid& grid, const MatrixPotential& q_tilde,
                              const ConjugatedOp& op, int ncomp, int k_mid,
                              std::span<const cplx> prev, std::span<const cplx> mid,
                              std::span<const cplx> next, std::span<cplx> out);

/// Literal forward leapfrog stepper for the conjugated operator; exposes the
/// rolling levels so callers can couple several solves in lockstep.
class ConjugatedStepper {
  public:
    ConjugatedStepper(const Grid& grid, const MatrixPotential& q_tilde, const ConjugatedOp& op,
                      int ncomp);

    /// Sets levels 0 (zero) and 1 (Taylor start from the level-0 source).
    void start(std::span<const cplx> source_level0);
    /// Computes level newest+1 from the source at the newest level.
    void advance(std::span<const cplx> source_at_newest);

    int newest_level() const { return k_; }
    std::span<const cplx> newest() const { return curr_; }
    std::span<const cplx> previous() const { return prev_; }

  private:
    const Grid grid_;
    MatrixPotential q_;
    ConjugatedOp op_;
    int ncomp_;
    bool has_q_;
    int k_ = 0;
    std::vector<cplx> prev_, curr_, next_, qbuf_;
    void fill_q(double t);
};

}  // namespace mwip
