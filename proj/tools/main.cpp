#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "mwip/carleman.hpp"
#include "mwip/identity.hpp"
#include "mwip/io.hpp"
#include "mwip/jobs.hpp"
#include "mwip/mms.hpp"
#include "mwip/reconstruct.hpp"

namespace fs = std::filesystem;
using namespace mwip;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitCheck = 4;

struct Session {
    ExperimentConfig cfg;
    fs::path out;

    std::string path(const std::string& name) const { return (out / name).string(); }
};

Session open_session(const std::string& config_path, const std::string& out_flag,
                     std::uint64_t seed_flag, bool seed_set, int jobs_flag, bool jobs_set) {
    Session s;
    s.cfg = config_path.empty() ? ExperimentConfig{} : load_config_file(config_path);
    if (seed_set) s.cfg.seed = seed_flag;
    if (jobs_set) s.cfg.jobs = jobs_flag;
    std::string out_dir = out_flag.empty() ? s.cfg.out : out_flag;
    if (const char* env = std::getenv("MWIP_OUT")) out_dir = env;
    s.out = out_dir;
    fs::create_directories(s.out);
    return s;
}

std::array<double, 3> config_zeta(const ExperimentConfig& cfg) {
    // single representative in-cone frequency for identity/probe runs
    const std::array<double, 2> xi{0.5 * cfg.xi_max, 0.0};
    return make_zeta(cfg.dim, cfg.omega0, xi);
}

std::vector<cplx> basis_vec(int m, int i) {
    std::vector<cplx> e(m, cplx(0, 0));
    e[i] = cplx(1, 0);
    return e;
}

int cmd_simulate(const Session& s, bool check) {
    const ExperimentConfig& cfg = s.cfg;
    bool ok = true;

    if (cfg.sim_case == "mms") {
        const Grid g1 = grid_from_config(cfg);
        ExperimentConfig f = cfg;
        f.nx = 2 * (cfg.nx - 1) + 1;
        f.nt = 2 * g1.nt;
        const Grid g2 = grid_from_config(f);
        const MmsResult r1 = run_manufactured_case(g1);
        const MmsResult r2 = run_manufactured_case(g2);
        const double order = mms_order(r1, r2);
        CsvWriter csv({"case_id", "nx", "nt", "err_l2", "err_linf", "order"});
        csv.add_row({"mms-coarse", csv.cell(r1.nx), csv.cell(r1.nt), csv.cell(r1.err_l2),
                     csv.cell(r1.err_linf), "na"});
        csv.add_row({"mms-fine", csv.cell(r2.nx), csv.cell(r2.nt), csv.cell(r2.err_l2),
                     csv.cell(r2.err_linf), csv.cell(order)});
        csv.write(s.path("mms_order.csv"));
        if (check && !(order >= 1.9)) {
            std::cerr << "check failed: manufactured order " << order << " < 1.9\n";
            ok = false;
        }
        return ok ? kExitOk : kExitCheck;
    }

    const Grid grid = grid_from_config(cfg);
    const MatrixPotential q = build_potential(cfg.q2, cfg.dim);
    std::vector<InitialBoundaryData> presets;
    if (cfg.sim_case == "zero") {
        InitialBoundaryData zero;
        zero.label = "zero";
        presets.push_back(zero);
    } else {
        presets = standard_data_presets(cfg.dim, cfg.dim);
    }

    CsvWriter csv({"case_id", "nx", "nt", "h_na", "lhs_trace", "lhs_h1", "rhs_phi", "rhs_psi",
                   "rhs_f", "ratio"});
    for (const auto& data : presets) {
        const WaveField u = solve_ibvp(grid, q, data);
        const EnergyAudit a = energy_audit(u, data);
        write_field_archive(s.path("u_" + data.label + ".mwip"), u);

        // dense trace field: normal derivative at boundary nodes, zero inside
        WaveField tr(grid, u.ncomp());
        const BoundaryTrace bt = neumann_trace(u);
        for (int k = 0; k <= grid.nt; ++k)
            for (std::size_t bi = 0; bi < bt.nodes.size(); ++bi)
                for (int c = 0; c < u.ncomp(); ++c)
                    tr.at(k, bt.nodes[bi], c) = bt.at(k, static_cast<int>(bi), c);
        write_field_archive(s.path("trace_" + data.label + ".mwip"), tr);

        csv.add_row({data.label, csv.cell(grid.nx), csv.cell(grid.nt), "na", csv.cell(a.lhs_trace),
                     csv.cell(a.lhs_h1), csv.cell(a.rhs_phi), csv.cell(a.rhs_psi),
                     csv.cell(a.rhs_f), csv.cell(a.ratio)});
        if (check && a.stability_violation) {
            std::cerr << "check failed: stability violation for " << data.label << "\n";
            ok = false;
        }
        if (check && cfg.sim_case == "zero" && a.ratio != 0.0) {
            std::cerr << "check failed: zero data must give ratio 0\n";
            ok = false;
        }
    }
    csv.write(s.path("energy_audit.csv"));
    return ok ? kExitOk : kExitCheck;
}

int cmd_probe(const Session& s, bool check) {
    const ExperimentConfig& cfg = s.cfg;
    const Grid grid = grid_from_config(cfg);
    const MatrixPotential q = build_potential(cfg.q2, cfg.dim);
    const auto zeta = config_zeta(cfg);
    std::vector<cplx> K(cfg.dim, cplx(1, 0));
    const RemainderSweep sweep = remainder_norm_sweep(grid, q, cfg.omega0, zeta, K, cfg.h_list);

    CsvWriter csv({"h", "decaying_l2", "growing_l2", "decaying_residual", "growing_residual"});
    for (const auto& r : sweep.rows)
        csv.add_row({csv.cell(r.h), csv.cell(r.decaying_l2), csv.cell(r.growing_l2),
                     csv.cell(r.decaying_residual), csv.cell(r.growing_residual)});
    csv.write(s.path("probe_remainders.csv"));

    if (check && !sweep.rows.empty()) {
        const auto& first = sweep.rows.front();
        for (const auto& r : sweep.rows) {
            if (r.decaying_l2 > 2.0 * first.decaying_l2 + 1e-12 ||
                r.growing_l2 > 2.0 * first.growing_l2 + 1e-12) {
                std::cerr << "check failed: remainder norms not uniformly bounded\n";
                return kExitCheck;
            }
        }
    }
    return kExitOk;
}

int cmd_carleman(const Session& s, bool check) {
    const ExperimentConfig& cfg = s.cfg;
    const Grid grid = grid_from_config(cfg);
    const int m = cfg.dim;

    std::vector<std::pair<std::string, MatrixPotential>> pots;
    pots.emplace_back("zero", MatrixPotential::zero(m));
    PotentialSpec const_spec;
    const_spec.preset = "constant";
    pots.emplace_back("constant", build_potential(const_spec, cfg.dim));
    PotentialSpec bump_spec = cfg.q2;
    if (bump_spec.preset != "bump") {
        bump_spec = PotentialSpec{};
        bump_spec.preset = "bump";
    }
    pots.emplace_back("bump", build_potential(bump_spec, cfg.dim));

    struct Job {
        std::uint64_t seed;
        std::size_t pot;
    };
    std::vector<Job> joblist;
    for (int sd = 0; sd < cfg.carleman_seeds; ++sd)
        for (std::size_t p = 0; p < pots.size(); ++p)
            joblist.push_back({cfg.seed + static_cast<std::uint64_t>(sd), p});

    auto results = parallel_map(static_cast<int>(joblist.size()), cfg.jobs, [&](int idx) {
        const Job& jb = joblist[idx];
        const WaveField u = admissible_test_field(jb.seed, grid, m);
        std::vector<CarlemanTerms> terms;
        for (double h : cfg.h_list)
            terms.push_back(evaluate_carleman(u, pots[jb.pot].second, h, cfg.omega0));
        return terms;
    });

    CsvWriter csv({"seed", "q_preset", "h", "interior", "flux_plus", "final_velocity", "op_term",
                   "final_value", "final_gradient", "flux_minus", "ratio"});
    bool ok = true;
    for (std::size_t idx = 0; idx < joblist.size(); ++idx) {
        const Job& jb = joblist[idx];
        double prev_ratio = -1;
        for (const auto& t : results[idx]) {
            csv.add_row({std::to_string(jb.seed), pots[jb.pot].first, csv.cell(t.h),
                         csv.cell(t.interior), csv.cell(t.flux_plus), csv.cell(t.final_velocity),
                         csv.cell(t.op_term), csv.cell(t.final_value), csv.cell(t.final_gradient),
                         csv.cell(t.flux_minus), csv.cell(t.ratio)});
            if (check) {
                if (!std::isfinite(t.ratio) || t.ratio < 0) {
                    std::cerr << "check failed: non-finite or negative ratio\n";
                    ok = false;
                }
                if (prev_ratio >= 0 && t.ratio > 1.5 * prev_ratio + 1e-12) {
                    std::cerr << "check failed: ratio grew by more than 1.5x from h to h/2\n";
                    ok = false;
                }
            }
            prev_ratio = t.ratio;
        }
    }
    csv.write(s.path("carleman_sweep.csv"));
    return ok ? kExitOk : kExitCheck;
}

int cmd_identity(const Session& s, bool check) {
    const ExperimentConfig& cfg = s.cfg;
    const Grid grid = grid_from_config(cfg);
    const MatrixPotential q1 = build_potential(cfg.q1, cfg.dim);
    const MatrixPotential q2 = build_potential(cfg.q2, cfg.dim);
    const BoundaryPartition part = boundary_partition(grid, cfg.omega0, cfg.epsilon, cfg.dilation);
    const auto zeta = config_zeta(cfg);
    const int m = cfg.dim;
    const auto K1 = basis_vec(m, std::min(cfg.q2.entry_i, m - 1));
    const auto K2 = basis_vec(m, std::min(cfg.q2.entry_j, m - 1));

    CsvWriter csv({"h", "lhs_re", "lhs_im", "rhs_final_re", "rhs_final_im", "rhs_final_dual_re",
                   "rhs_final_dual_im", "rhs_lateral_re", "rhs_lateral_im", "rhs_lateral_g_re",
                   "rhs_lateral_g_im", "gap", "gap_exact", "rel_gap_exact", "target_re",
                   "target_im", "max_intermediate"});
    bool ok = true;
    for (double h : cfg.h_list) {
        const IdentityReport r = evaluate_identity(grid, q1, q2, h, cfg.omega0, zeta, K1, K2, part);
        csv.add_row({csv.cell(h), csv.cell(r.lhs.real()), csv.cell(r.lhs.imag()),
                     csv.cell(r.rhs_final.real()), csv.cell(r.rhs_final.imag()),
                     csv.cell(r.rhs_final_dual.real()), csv.cell(r.rhs_final_dual.imag()),
                     csv.cell(r.rhs_lateral.real()), csv.cell(r.rhs_lateral.imag()),
                     csv.cell(r.rhs_lateral_g.real()), csv.cell(r.rhs_lateral_g.imag()),
                     csv.cell(r.gap), csv.cell(r.gap_exact), csv.cell(r.rel_gap_exact),
                     csv.cell(r.fourier_target.real()), csv.cell(r.fourier_target.imag()),
                     csv.cell(r.max_intermediate)});
        if (check && !(r.rel_gap_exact <= 1e-2)) {
            std::cerr << "check failed: exact-identity relative gap " << r.rel_gap_exact
                      << " > 1e-2 at h = " << h << "\n";
            ok = false;
        }
    }
    csv.write(s.path("identity.csv"));
    return ok ? kExitOk : kExitCheck;
}

int cmd_sweep(const Session& s, bool check) {
    const ExperimentConfig& cfg = s.cfg;
    const Grid grid = grid_from_config(cfg);
    const MatrixPotential q1 = build_potential(cfg.q1, cfg.dim);
    const MatrixPotential q2 = build_potential(cfg.q2, cfg.dim);
    const BoundaryPartition part = boundary_partition(grid, cfg.omega0, cfg.epsilon, cfg.dilation);
    const auto zeta = config_zeta(cfg);
    const int m = cfg.dim;
    const auto rows = remainder_decay_sweep(grid, q1, q2, cfg.omega0, zeta,
                                            basis_vec(m, std::min(cfg.q2.entry_i, m - 1)),
                                            basis_vec(m, std::min(cfg.q2.entry_j, m - 1)),
                                            cfg.h_list, part);

    CsvWriter csv({"h", "final_mag", "lateral_mag", "final_lemma", "lateral_lemma",
                   "lhs_vs_target", "rel_gap_exact"});
    for (const auto& r : rows)
        csv.add_row({csv.cell(r.h), csv.cell(r.final_mag), csv.cell(r.lateral_mag),
                     csv.cell(r.final_lemma), csv.cell(r.lateral_lemma), csv.cell(r.lhs_vs_target),
                     csv.cell(r.report.rel_gap_exact)});
    csv.write(s.path("decay_sweep.csv"));

    if (check) {
        for (std::size_t i = 1; i < rows.size(); ++i) {
            if (rows[i].final_lemma > 0.9 * rows[i - 1].final_lemma ||
                rows[i].lateral_lemma > 0.9 * rows[i - 1].lateral_lemma) {
                std::cerr << "check failed: unmeasured terms not decaying by 0.9x per step\n";
                return kExitCheck;
            }
        }
        if (rows.size() >= 2) {
            const auto& a = rows.front();
            const auto& b = rows.back();
            const double span = std::log(a.h / b.h);
            const double slope_f = std::log(a.final_lemma / b.final_lemma) / span;
            const double slope_l = std::log(a.lateral_lemma / b.lateral_lemma) / span;
            if (!(slope_f >= 0.8) || !(slope_l >= 0.8)) {
                std::cerr << "check failed: decay slopes " << slope_f << ", " << slope_l
                          << " below 0.8\n";
                return kExitCheck;
            }
        }
    }
    return kExitOk;
}

int cmd_reconstruct(const Session& s, bool check) {
    const ExperimentConfig& cfg = s.cfg;
    const Grid grid = grid_from_config(cfg);
    const MatrixPotential q1 = build_potential(cfg.q1, cfg.dim);
    const MatrixPotential q2 = build_potential(cfg.q2, cfg.dim);
    const BoundaryPartition part = boundary_partition(grid, cfg.omega0, cfg.epsilon, cfg.dilation);
    const auto freqs = cone_frequencies(cfg.dim, cfg.omega0, cfg.epsilon, cfg.xi_max,
                                        cfg.omega_count, cfg.xi_count);
    double h = cfg.h_list.empty() ? 0.25 : cfg.h_list.front();
    for (double v : cfg.h_list) h = std::min(h, v);

    const ProbeMode mode = cfg.mode == "blind" ? ProbeMode::Blind : ProbeMode::Oracle;
    const ReconstructionResult res = recover_fourier_samples(grid, q1, q2, freqs, h, mode, part);

    CsvWriter csv({"i", "j", "zeta_t", "zeta_x1", "zeta_x2", "re", "im", "oracle_re", "oracle_im",
                   "abs_err"});
    for (const auto& r : res.rows)
        csv.add_row({csv.cell(r.i), csv.cell(r.j), csv.cell(r.freq.zeta[0]),
                     csv.cell(r.freq.zeta[1]), csv.cell(r.freq.zeta[2]),
                     csv.cell(r.estimate.real()), csv.cell(r.estimate.imag()),
                     csv.cell(r.oracle.real()), csv.cell(r.oracle.imag()), csv.cell(r.abs_err)});
    csv.write(s.path("samples.csv"));

    if (cfg.emit_filtered) {
        const auto vals = filtered_inverse(res, grid, cfg.dim, cfg.xi_max, cfg.xi_count);
        ArchiveHeader hd;
        hd.representation = 2;  // filtered
        hd.dim = static_cast<std::uint32_t>(grid.dim);
        hd.nx = static_cast<std::uint32_t>(grid.nx);
        hd.nt = static_cast<std::uint32_t>(grid.nt);
        hd.ncomp = static_cast<std::uint32_t>(cfg.dim * cfg.dim);
        hd.T = grid.T;
        write_raw_archive(s.path("filtered_difference.mwip"), hd, vals);
    }

    if (check) {
        for (double e : res.entry_rel_l2)
            if (!(e <= 0.1)) {
                std::cerr << "check failed: per-entry relative L2 error " << e << " > 0.1\n";
                return kExitCheck;
            }
    }
    return kExitOk;
}

int cmd_report(const Session& s, bool) {
    const ExperimentConfig& cfg = s.cfg;
    const Grid grid = grid_from_config(cfg);
    const MatrixPotential q1 = build_potential(cfg.q1, cfg.dim);
    const MatrixPotential q2 = build_potential(cfg.q2, cfg.dim);
    const BoundaryPartition part = boundary_partition(grid, cfg.omega0, cfg.epsilon, cfg.dilation);
    const auto zeta = config_zeta(cfg);
    const int m = cfg.dim;
    const auto K1 = basis_vec(m, std::min(cfg.q2.entry_i, m - 1));
    const auto K2 = basis_vec(m, std::min(cfg.q2.entry_j, m - 1));

    const auto rows = remainder_decay_sweep(grid, q1, q2, cfg.omega0, zeta, K1, K2, cfg.h_list,
                                            part);
    CsvWriter decay({"h", "final_lemma", "lateral_lemma", "final_mag", "lateral_mag",
                     "lhs_vs_target"});
    for (const auto& r : rows)
        decay.add_row({decay.cell(r.h), decay.cell(r.final_lemma), decay.cell(r.lateral_lemma),
                       decay.cell(r.final_mag), decay.cell(r.lateral_mag),
                       decay.cell(r.lhs_vs_target)});
    decay.write(s.path("decay_curves.csv"));

    Frequency f0;
    f0.omega = cfg.omega0;
    f0.zeta = zeta;
    CsvWriter err({"h", "max_entry_rel_l2", "max_abs_err"});
    for (double h : cfg.h_list) {
        const auto res = recover_fourier_samples(grid, q1, q2, {f0}, h, ProbeMode::Oracle, part);
        double mx = 0, ma = 0;
        for (double e : res.entry_rel_l2)
            if (std::isfinite(e)) mx = std::max(mx, e);
        for (const auto& r : res.rows) ma = std::max(ma, r.abs_err);
        err.add_row({err.cell(h), err.cell(mx), err.cell(ma)});
    }
    err.write(s.path("error_vs_h.csv"));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"matrix-potential wave inverse-problem laboratory"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    std::uint64_t seed = 0;
    int jobs = 0;
    bool check = false;

    app.add_option("--config", config_path, "experiment config file");
    app.add_option("--out", out_dir, "output directory (MWIP_OUT overrides)");
    app.add_option("--seed", seed, "override config seed");
    app.add_option("--jobs", jobs, "override config job count");
    app.add_flag("--check", check, "verify embedded acceptance thresholds");

    for (const char* name : {"simulate", "probe", "carleman", "identity", "sweep", "reconstruct",
                             "report"})
        app.add_subcommand(name);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp")
            return app.exit(e);
        std::cerr << e.what() << "\n";
        return kExitConfig;
    }

    try {
        const bool seed_set = app.count("--seed") > 0;
        const bool jobs_set = app.count("--jobs") > 0;
        const Session s =
            open_session(config_path, out_dir, seed, seed_set, jobs, jobs_set);
        const std::string sub = app.get_subcommands().front()->get_name();
        if (sub == "simulate") return cmd_simulate(s, check);
        if (sub == "probe") return cmd_probe(s, check);
        if (sub == "carleman") return cmd_carleman(s, check);
        if (sub == "identity") return cmd_identity(s, check);
        if (sub == "sweep") return cmd_sweep(s, check);
        if (sub == "reconstruct") return cmd_reconstruct(s, check);
        if (sub == "report") return cmd_report(s, check);
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const numerical_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}
