#include "mwip/potential.hpp"

#include <cmath>
#include <stdexcept>

namespace mwip {

double bspline_bump(double s) {
    const double r = 2.0 * std::abs(s);
    if (r < 1.0) return 1.0 - 1.5 * r * r + 0.75 * r * r * r;
    if (r < 2.0) {
        const double u = 2.0 - r;
        return 0.25 * u * u * u;
    }
    return 0.0;
}

double bspline_bump_deriv(double s) {
    const double r = 2.0 * std::abs(s);
    const double sgn = s >= 0 ? 1.0 : -1.0;
    if (r < 1.0) return sgn * 2.0 * (-3.0 * r + 2.25 * r * r);
    if (r < 2.0) {
        const double u = 2.0 - r;
        return sgn * 2.0 * (-0.75 * u * u);
    }
    return 0.0;
}

MatrixPotential MatrixPotential::zero(int m) {
    MatrixPotential q;
    q.m_ = m;
    q.zero_ = true;
    q.entries_.assign(m * m, nullptr);
    SupportBox empty;
    q.support_ = empty;
    return q;
}

MatrixPotential MatrixPotential::constant(int m, std::vector<cplx> entries) {
    if (static_cast<int>(entries.size()) != m * m)
        throw std::invalid_argument("potential: constant entries must be m*m");
    MatrixPotential q;
    q.m_ = m;
    q.entries_.reserve(m * m);
    for (cplx v : entries)
        q.entries_.push_back([v](double, const double*) { return v; });
    return q;
}

MatrixPotential MatrixPotential::closed_form(int m, std::vector<EntryFn> entries) {
    if (static_cast<int>(entries.size()) != m * m)
        throw std::invalid_argument("potential: closed_form entries must be m*m");
    MatrixPotential q;
    q.m_ = m;
    q.entries_ = std::move(entries);
    return q;
}

MatrixPotential MatrixPotential::sampled(const Grid& grid, int m,
                                         std::vector<std::vector<cplx>> entry_values) {
    if (static_cast<int>(entry_values.size()) != m * m)
        throw std::invalid_argument("potential: sampled needs m*m entry arrays");
    const std::size_t expect =
        static_cast<std::size_t>(grid.num_levels()) * static_cast<std::size_t>(grid.num_nodes());
    for (const auto& e : entry_values)
        if (e.size() != expect)
            throw std::invalid_argument("potential: sampled entry has wrong length");
    MatrixPotential q;
    q.m_ = m;
    q.kind_ = Kind::GridSampled;
    q.samples_ = std::make_shared<const std::vector<std::vector<cplx>>>(std::move(entry_values));
    q.sample_grid_ = grid;
    return q;
}

MatrixPotential MatrixPotential::bump(int dim, int m, int i, int j, double amp, double center_t,
                                      double width_t, const std::array<double, 2>& center_x,
                                      const std::array<double, 2>& width_x) {
    if (i < 0 || i >= m || j < 0 || j >= m)
        throw std::invalid_argument("potential: bump entry index out of range");
    std::vector<EntryFn> entries(m * m, nullptr);
    entries[i * m + j] = [=](double t, const double* x) {
        double v = amp * bspline_bump((t - center_t) / width_t);
        for (int a = 0; a < dim; ++a) v *= bspline_bump((x[a] - center_x[a]) / width_x[a]);
        return cplx(v, 0.0);
    };
    MatrixPotential q = closed_form(m, std::move(entries));
    SupportBox box;
    box.t0 = center_t - width_t;
    box.t1 = center_t + width_t;
    for (int a = 0; a < dim; ++a) {
        box.x0[a] = center_x[a] - width_x[a];
        box.x1[a] = center_x[a] + width_x[a];
    }
    for (int a = dim; a < 2; ++a) {
        box.x0[a] = 0;
        box.x1[a] = 0;
    }
    q.support_ = box;
    return q;
}

cplx MatrixPotential::eval_entry(int i, int j, double t, const double* x) const {
    if (zero_) return {0.0, 0.0};
    if (support_ && !support_->empty()) {
        // entries vanish identically outside the support box
        if (t < support_->t0 || t > support_->t1) return {0.0, 0.0};
        if (x[0] < support_->x0[0] || x[0] > support_->x1[0]) return {0.0, 0.0};
    }
    if (kind_ == Kind::ClosedForm) {
        const auto& f = entries_[i * m_ + j];
        return f ? f(t, x) : cplx(0.0, 0.0);
    }
    // grid-sampled: on-node queries only
    const Grid& g = sample_grid_;
    const double kf = t / g.dt;
    const int k = static_cast<int>(std::lround(kf));
    if (k < 0 || k > g.nt || std::abs(kf - k) > 1e-9)
        throw std::invalid_argument("potential: off-grid time query on sampled potential");
    int idx[2] = {0, 0};
    for (int a = 0; a < g.dim; ++a) {
        const double f = x[a] / g.dx;
        idx[a] = static_cast<int>(std::lround(f));
        if (idx[a] < 0 || idx[a] >= g.nx || std::abs(f - idx[a]) > 1e-9)
            throw std::invalid_argument("potential: off-grid space query on sampled potential");
    }
    const int node = g.node_index(idx[0], idx[1]);
    const std::size_t flat = static_cast<std::size_t>(k) * g.num_nodes() + node;
    if (sampled_conjugate_transpose_) return std::conj((*samples_)[j * m_ + i][flat]);
    return (*samples_)[i * m_ + j][flat];
}

void MatrixPotential::eval(double t, const double* x, cplx* out) const {
    for (int i = 0; i < m_; ++i)
        for (int j = 0; j < m_; ++j) out[i * m_ + j] = eval_entry(i, j, t, x);
}

MatrixPotential MatrixPotential::adjoint() const {
    MatrixPotential q = *this;
    if (zero_) return q;
    if (kind_ == Kind::GridSampled) {
        q.sampled_conjugate_transpose_ = !sampled_conjugate_transpose_;
        return q;
    }
    q.entries_.assign(m_ * m_, nullptr);
    for (int i = 0; i < m_; ++i)
        for (int j = 0; j < m_; ++j) {
            const auto& f = entries_[j * m_ + i];
            if (f) q.entries_[i * m_ + j] = [f](double t, const double* x) {
                return std::conj(f(t, x));
            };
        }
    return q;
}

MatrixPotential MatrixPotential::scaled(double factor) const {
    if (zero_ || factor == 0.0) {
        MatrixPotential z = zero(m_);
        return z;
    }
    MatrixPotential base = *this;
    std::vector<EntryFn> entries(m_ * m_, nullptr);
    for (int i = 0; i < m_; ++i)
        for (int j = 0; j < m_; ++j)
            entries[i * m_ + j] = [base, i, j, factor](double t, const double* x) {
                return factor * base.eval_entry(i, j, t, x);
            };
    MatrixPotential q = closed_form(m_, std::move(entries));
    q.support_ = support_;
    return q;
}

bool MatrixPotential::support_has_margin(const Grid& grid, int layers) const {
    if (!support_) return false;
    if (support_->empty()) return true;
    const double mt = layers * grid.dt, mx = layers * grid.dx;
    if (support_->t0 < mt - 1e-12 || support_->t1 > grid.T - mt + 1e-12) return false;
    for (int a = 0; a < grid.dim; ++a)
        if (support_->x0[a] < mx - 1e-12 || support_->x1[a] > 1.0 - mx + 1e-12) return false;
    return true;
}

double sup_norm(const MatrixPotential& q, const Grid& grid) {
    double best = 0;
    double x[2] = {0, 0};
    for (int k = 0; k <= grid.nt; ++k)
        for (int node = 0; node < grid.num_nodes(); ++node) {
            grid.node_point(node, x);
            for (int i = 0; i < q.dim(); ++i)
                for (int j = 0; j < q.dim(); ++j)
                    best = std::max(best, std::abs(q.eval_entry(i, j, grid.time(k), x)));
        }
    return best;
}

double w1inf_norm(const MatrixPotential& q, const Grid& grid) {
    const int m = q.dim();
    const int nn = grid.num_nodes();
    std::vector<cplx> cur(static_cast<std::size_t>(nn) * m * m), next;
    double best = 0;
    double x[2] = {0, 0};
    auto fill = [&](int k, std::vector<cplx>& buf) {
        for (int node = 0; node < nn; ++node) {
            grid.node_point(node, x);
            q.eval(grid.time(k), x, &buf[static_cast<std::size_t>(node) * m * m]);
        }
    };
    fill(0, cur);
    for (int k = 0; k <= grid.nt; ++k) {
        if (k < grid.nt) {
            next.resize(cur.size());
            fill(k + 1, next);
        }
        for (int node = 0; node < nn; ++node) {
            auto mlt = grid.node_multi(node);
            for (int e = 0; e < m * m; ++e) {
                const cplx v = cur[static_cast<std::size_t>(node) * m * m + e];
                best = std::max(best, std::abs(v));
                if (k < grid.nt) {
                    const cplx vt = next[static_cast<std::size_t>(node) * m * m + e];
                    best = std::max(best, std::abs(vt - v) / grid.dt);
                }
                for (int a = 0; a < grid.dim; ++a) {
                    const int ia = a == 0 ? mlt[0] : mlt[1];
                    if (ia + 1 >= grid.nx) continue;
                    const int nb = node + (a == 0 ? 1 : grid.nx);
                    const cplx vx = cur[static_cast<std::size_t>(nb) * m * m + e];
                    best = std::max(best, std::abs(vx - v) / grid.dx);
                }
            }
        }
        if (k < grid.nt) cur.swap(next);
    }
    return best;
}

cplx fourier_oracle(const MatrixPotential& q, const Grid& grid, int i, int j,
                    const std::array<double, 3>& zeta) {
    const int nn = grid.num_nodes();
    // spatial phase exp(-i zeta_x . x), reused across time levels
    std::vector<cplx> phase(nn);
    double x[2] = {0, 0};
    for (int node = 0; node < nn; ++node) {
        grid.node_point(node, x);
        double arg = zeta[1] * x[0] + (grid.dim == 2 ? zeta[2] * x[1] : 0.0);
        phase[node] = std::polar(grid.volume_weight(node), -arg);
    }
    cplx total(0, 0);
    for (int k = 0; k <= grid.nt; ++k) {
        const double t = grid.time(k);
        cplx level(0, 0);
        for (int node = 0; node < nn; ++node) {
            grid.node_point(node, x);
            const cplx v = q.eval_entry(i, j, t, x);
            if (v != cplx(0, 0)) level += phase[node] * v;
        }
        total += grid.time_weight(k) * std::polar(1.0, -zeta[0] * t) * level;
    }
    return total;
}

MatrixPotential difference(const MatrixPotential& q1, const MatrixPotential& q2) {
    if (q1.dim() != q2.dim()) throw std::invalid_argument("difference: dimension mismatch");
    if (q1.is_zero() && q2.is_zero()) return MatrixPotential::zero(q1.dim());
    const int m = q1.dim();
    std::vector<MatrixPotential::EntryFn> entries(m * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            entries[i * m + j] = [q1, q2, i, j](double t, const double* x) {
                return q2.eval_entry(i, j, t, x) - q1.eval_entry(i, j, t, x);
            };
    MatrixPotential d = MatrixPotential::closed_form(m, std::move(entries));
    if (auto box = difference_support(q1, q2)) d.set_support(*box);
    return d;
}

MatrixPotential time_reflect(const MatrixPotential& q, double T) {
    if (q.is_zero()) return q;
    const int m = q.dim();
    std::vector<MatrixPotential::EntryFn> entries(m * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            entries[i * m + j] = [q, i, j, T](double t, const double* x) {
                return q.eval_entry(i, j, T - t, x);
            };
    MatrixPotential r = MatrixPotential::closed_form(m, std::move(entries));
    if (q.support() && !q.support()->empty()) {
        SupportBox b = *q.support();
        const double t0 = b.t0;
        b.t0 = T - b.t1;
        b.t1 = T - t0;
        r.set_support(b);
    }
    return r;
}

std::optional<SupportBox> difference_support(const MatrixPotential& q1,
                                             const MatrixPotential& q2) {
    auto one = [](const MatrixPotential& q) -> std::optional<SupportBox> {
        if (q.is_zero()) return SupportBox{};  // empty
        return q.support();
    };
    auto b1 = one(q1), b2 = one(q2);
    if (!b1 || !b2) return std::nullopt;
    if (b1->empty()) return *b2;
    if (b2->empty()) return *b1;
    SupportBox u;
    u.t0 = std::min(b1->t0, b2->t0);
    u.t1 = std::max(b1->t1, b2->t1);
    for (int a = 0; a < 2; ++a) {
        u.x0[a] = std::min(b1->x0[a], b2->x0[a]);
        u.x1[a] = std::max(b1->x1[a], b2->x1[a]);
    }
    return u;
}

}  // namespace mwip
