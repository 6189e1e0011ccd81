#pragma once

#include "mwip/solver.hpp"

namespace mwip {

/// Manufactured smooth solution with a nonconstant matrix potential; the
/// forcing is chosen analytically so the exact solution is known.
struct MmsResult {
    int nx = 0, nt = 0;
    double err_l2 = 0;    // |u - u*|_{L2(Q)}
    double err_linf = 0;  // max node error
    double sol_l2 = 0;    // |u*|_{L2(Q)}
};

MmsResult run_manufactured_case(const Grid& grid);

/// Observed convergence order between two runs with dx halved (dt tied to dx).
double mms_order(const MmsResult& coarse, const MmsResult& fine);

/// Five standard nonzero data presets exercising initial value, initial
/// velocity, boundary drive and mixed data.
std::vector<InitialBoundaryData> standard_data_presets(int dim, int ncomp);

}  // namespace mwip
