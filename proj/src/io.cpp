#include "mwip/io.hpp"

#include <bit>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace mwip {

static_assert(std::endian::native == std::endian::little,
              "field archives are little-endian; big-endian hosts are unsupported");

namespace {

constexpr char kMagic[4] = {'M', 'W', 'I', 'P'};
constexpr std::size_t kHeaderSize = 4 + 2 * 4 + 4 * 4 + 8 + 8 + 16 + 4 + 4;

template <typename T>
void put(std::string& buf, T v) {
    char tmp[sizeof(T)];
    std::memcpy(tmp, &v, sizeof(T));
    buf.append(tmp, sizeof(T));
}

template <typename T>
T take(const std::string& buf, std::size_t& off) {
    T v;
    std::memcpy(&v, buf.data() + off, sizeof(T));
    off += sizeof(T);
    return v;
}

std::string header_bytes(const ArchiveHeader& h) {
    std::string buf;
    buf.append(kMagic, 4);
    put<std::uint16_t>(buf, h.version);
    put<std::uint16_t>(buf, h.value_kind);
    put<std::uint16_t>(buf, h.representation);
    put<std::uint16_t>(buf, 0);
    put<std::uint32_t>(buf, h.dim);
    put<std::uint32_t>(buf, h.nx);
    put<std::uint32_t>(buf, h.nt);
    put<std::uint32_t>(buf, h.ncomp);
    put<double>(buf, h.T);
    put<double>(buf, h.tag_h);
    put<double>(buf, h.tag_omega[0]);
    put<double>(buf, h.tag_omega[1]);
    put<std::int32_t>(buf, h.tag_sign);
    put<std::int32_t>(buf, 0);
    return buf;
}

std::size_t payload_count(const ArchiveHeader& h) {
    std::size_t nodes = h.nx;
    if (h.dim == 2) nodes *= h.nx;
    return static_cast<std::size_t>(h.nt + 1) * nodes * h.ncomp;
}

}  // namespace

void write_raw_archive(const std::string& path, const ArchiveHeader& header,
                       std::span<const cplx> values) {
    if (values.size() != payload_count(header))
        throw std::invalid_argument("archive: payload size disagrees with header");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::invalid_argument("archive: cannot open " + path + " for writing");
    const std::string hdr = header_bytes(header);
    out.write(hdr.data(), static_cast<std::streamsize>(hdr.size()));
    out.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(values.size() * sizeof(cplx)));
    if (!out) throw std::runtime_error("archive: write failed for " + path);
}

void write_field_archive(const std::string& path, const WaveField& u,
                         std::uint16_t representation_override) {
    ArchiveHeader h;
    h.value_kind = 1;
    h.representation = u.conjugated() ? 1 : 0;
    if (representation_override != 0xffff) h.representation = representation_override;
    h.dim = static_cast<std::uint32_t>(u.grid().dim);
    h.nx = static_cast<std::uint32_t>(u.grid().nx);
    h.nt = static_cast<std::uint32_t>(u.grid().nt);
    h.ncomp = static_cast<std::uint32_t>(u.ncomp());
    h.T = u.grid().T;
    if (u.tag()) {
        h.tag_h = u.tag()->h;
        h.tag_omega = u.tag()->omega;
        h.tag_sign = u.tag()->sign;
    }
    write_raw_archive(path, h, u.raw());
}

WaveField read_field_archive(const std::string& path, ArchiveHeader* header) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("archive: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string buf = ss.str();
    if (buf.size() < kHeaderSize || std::memcmp(buf.data(), kMagic, 4) != 0)
        throw std::invalid_argument("archive: bad magic in " + path);

    std::size_t off = 4;
    ArchiveHeader h;
    h.version = take<std::uint16_t>(buf, off);
    h.value_kind = take<std::uint16_t>(buf, off);
    h.representation = take<std::uint16_t>(buf, off);
    take<std::uint16_t>(buf, off);
    h.dim = take<std::uint32_t>(buf, off);
    h.nx = take<std::uint32_t>(buf, off);
    h.nt = take<std::uint32_t>(buf, off);
    h.ncomp = take<std::uint32_t>(buf, off);
    h.T = take<double>(buf, off);
    h.tag_h = take<double>(buf, off);
    h.tag_omega[0] = take<double>(buf, off);
    h.tag_omega[1] = take<double>(buf, off);
    h.tag_sign = take<std::int32_t>(buf, off);
    take<std::int32_t>(buf, off);
    if (h.version != 1) throw std::invalid_argument("archive: unsupported version");
    if (h.value_kind != 1) throw std::invalid_argument("archive: only complex payloads supported");

    const std::size_t count = payload_count(h);
    if (buf.size() != kHeaderSize + count * sizeof(cplx))
        throw std::invalid_argument("archive: byte length disagrees with header");

    Grid g = build_grid(static_cast<int>(h.dim), static_cast<int>(h.nx), static_cast<int>(h.nt),
                        h.T);
    WaveField u(g, static_cast<int>(h.ncomp));
    std::memcpy(u.raw().data(), buf.data() + kHeaderSize, count * sizeof(cplx));
    if (h.representation == 1)
        u.set_tag(ConjugatedTag{h.tag_h, h.tag_omega, h.tag_sign});
    if (header) *header = h;
    return u;
}

// --------------------------------------------------------------------- csv

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void CsvWriter::add_row(std::vector<std::string> cells) {
    if (cells.size() != header_.size())
        throw std::invalid_argument("csv: row width disagrees with header");
    rows_.push_back(std::move(cells));
}

void CsvWriter::write(const std::string& path) const {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::invalid_argument("csv: cannot open " + path + " for writing");
    for (std::size_t i = 0; i < header_.size(); ++i)
        out << header_[i] << (i + 1 < header_.size() ? "," : "\n");
    for (const auto& row : rows_)
        for (std::size_t i = 0; i < row.size(); ++i)
            out << row[i] << (i + 1 < row.size() ? "," : "\n");
    if (!out) throw std::runtime_error("csv: write failed for " + path);
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("csv: cannot open " + path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cur;
        for (char ch : line) {
            if (ch == ',') {
                cells.push_back(cur);
                cur.clear();
            } else {
                cur.push_back(ch);
            }
        }
        cells.push_back(cur);
        rows.push_back(std::move(cells));
    }
    return rows;
}

// ------------------------------------------------------------------ config

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    std::size_t b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

double to_double(const std::string& s, int line) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw std::invalid_argument("config line " + std::to_string(line) + ": bad number '" + s +
                                    "'");
    }
}

std::vector<double> to_list(const std::string& s, int line) {
    std::vector<double> out;
    std::string cur;
    for (char ch : std::string(s + ",")) {
        if (ch == ',') {
            if (!trim(cur).empty()) out.push_back(to_double(trim(cur), line));
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    return out;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        if (s.front() == '[' && s.back() == ']') {
            section = trim(s.substr(1, s.size() - 2));
            continue;
        }
        const std::size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        const std::string key = trim(s.substr(0, eq));
        const std::string val = trim(s.substr(eq + 1));
        const std::string full = section.empty() ? key : section + "." + key;

        auto pot = [&](PotentialSpec& p, const std::string& k) {
            if (k == "preset") p.preset = val;
            else if (k == "entries") {
                auto v = to_list(val, lineno);
                p.constant_entries.clear();
                for (double d : v) p.constant_entries.push_back(cplx(d, 0));
            } else if (k == "entry") {
                auto v = to_list(val, lineno);
                if (v.size() != 2) throw std::invalid_argument("config: entry needs i,j");
                p.entry_i = static_cast<int>(v[0]);
                p.entry_j = static_cast<int>(v[1]);
            } else if (k == "amplitude") p.amplitude = to_double(val, lineno);
            else if (k == "center_t") p.center_t = to_double(val, lineno);
            else if (k == "width_t") p.width_t = to_double(val, lineno);
            else if (k == "center_x") {
                auto v = to_list(val, lineno);
                for (std::size_t a = 0; a < std::min<std::size_t>(2, v.size()); ++a)
                    p.center_x[a] = v[a];
            } else if (k == "width_x") {
                auto v = to_list(val, lineno);
                for (std::size_t a = 0; a < std::min<std::size_t>(2, v.size()); ++a)
                    p.width_x[a] = v[a];
            } else if (k == "file") p.file = val;
            else
                throw std::invalid_argument("config line " + std::to_string(lineno) +
                                            ": unknown key " + full);
        };

        if (full == "grid.dim") cfg.dim = static_cast<int>(to_double(val, lineno));
        else if (full == "grid.nx") cfg.nx = static_cast<int>(to_double(val, lineno));
        else if (full == "grid.nt") cfg.nt = static_cast<int>(to_double(val, lineno));
        else if (full == "grid.T") cfg.T = to_double(val, lineno);
        else if (full == "grid.cfl") cfg.cfl = to_double(val, lineno);
        else if (full == "partition.omega0") {
            auto v = to_list(val, lineno);
            cfg.omega0 = {v.size() > 0 ? v[0] : 1.0, v.size() > 1 ? v[1] : 0.0};
        } else if (full == "partition.epsilon") cfg.epsilon = to_double(val, lineno);
        else if (full == "partition.dilation") cfg.dilation = static_cast<int>(to_double(val, lineno));
        else if (section == "potential.q1") pot(cfg.q1, key);
        else if (section == "potential.q2") pot(cfg.q2, key);
        else if (full == "probes.h_list") cfg.h_list = to_list(val, lineno);
        else if (full == "probes.xi_max") cfg.xi_max = to_double(val, lineno);
        else if (full == "probes.xi_count") cfg.xi_count = static_cast<int>(to_double(val, lineno));
        else if (full == "probes.omega_count")
            cfg.omega_count = static_cast<int>(to_double(val, lineno));
        else if (full == "run.mode") cfg.mode = val;
        else if (full == "run.case") cfg.sim_case = val;
        else if (full == "run.partial_data") cfg.partial_data = val == "true" || val == "1";
        else if (full == "run.emit_filtered") cfg.emit_filtered = val == "true" || val == "1";
        else if (full == "run.out") cfg.out = val;
        else if (full == "run.seed") cfg.seed = static_cast<std::uint64_t>(to_double(val, lineno));
        else if (full == "run.jobs") cfg.jobs = static_cast<int>(to_double(val, lineno));
        else if (full == "run.carleman_seeds")
            cfg.carleman_seeds = static_cast<int>(to_double(val, lineno));
        else
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": unknown key " +
                                        full);
    }

    if (cfg.mode != "oracle" && cfg.mode != "blind")
        throw std::invalid_argument("config: run.mode must be oracle or blind");
    for (const PotentialSpec* p : {&cfg.q1, &cfg.q2}) {
        if (p->preset != "zero" && p->preset != "constant" && p->preset != "bump" &&
            p->preset != "file")
            throw std::invalid_argument("config: unknown potential preset " + p->preset);
        if (p->preset == "file" && !std::filesystem::exists(p->file))
            throw std::invalid_argument("config: potential file does not exist: " + p->file);
    }
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

namespace {

void emit_potential(std::ostringstream& out, const char* name, const PotentialSpec& p) {
    out << "[potential." << name << "]\n";
    out << "preset = " << p.preset << "\n";
    if (p.preset == "constant") {
        out << "entries = ";
        for (std::size_t i = 0; i < p.constant_entries.size(); ++i)
            out << format_double(p.constant_entries[i].real())
                << (i + 1 < p.constant_entries.size() ? "," : "");
        out << "\n";
    } else if (p.preset == "bump") {
        out << "amplitude = " << format_double(p.amplitude) << "\n";
        out << "center_t = " << format_double(p.center_t) << "\n";
        out << "center_x = " << format_double(p.center_x[0]) << ","
            << format_double(p.center_x[1]) << "\n";
        out << "entry = " << p.entry_i << "," << p.entry_j << "\n";
        out << "width_t = " << format_double(p.width_t) << "\n";
        out << "width_x = " << format_double(p.width_x[0]) << "," << format_double(p.width_x[1])
            << "\n";
    } else if (p.preset == "file") {
        out << "file = " << p.file << "\n";
    }
    out << "\n";
}

}  // namespace

std::string serialize_config(const ExperimentConfig& cfg) {
    std::ostringstream out;
    out << "[grid]\n";
    out << "T = " << format_double(cfg.T) << "\n";
    out << "cfl = " << format_double(cfg.cfl) << "\n";
    out << "dim = " << cfg.dim << "\n";
    out << "nt = " << cfg.nt << "\n";
    out << "nx = " << cfg.nx << "\n\n";
    out << "[partition]\n";
    out << "dilation = " << cfg.dilation << "\n";
    out << "epsilon = " << format_double(cfg.epsilon) << "\n";
    out << "omega0 = " << format_double(cfg.omega0[0]) << "," << format_double(cfg.omega0[1])
        << "\n\n";
    emit_potential(out, "q1", cfg.q1);
    emit_potential(out, "q2", cfg.q2);
    out << "[probes]\n";
    out << "h_list = ";
    for (std::size_t i = 0; i < cfg.h_list.size(); ++i)
        out << format_double(cfg.h_list[i]) << (i + 1 < cfg.h_list.size() ? "," : "");
    out << "\n";
    out << "omega_count = " << cfg.omega_count << "\n";
    out << "xi_count = " << cfg.xi_count << "\n";
    out << "xi_max = " << format_double(cfg.xi_max) << "\n\n";
    out << "[run]\n";
    out << "carleman_seeds = " << cfg.carleman_seeds << "\n";
    out << "case = " << cfg.sim_case << "\n";
    out << "emit_filtered = " << (cfg.emit_filtered ? "true" : "false") << "\n";
    out << "jobs = " << cfg.jobs << "\n";
    out << "mode = " << cfg.mode << "\n";
    out << "out = " << cfg.out << "\n";
    out << "partial_data = " << (cfg.partial_data ? "true" : "false") << "\n";
    out << "seed = " << cfg.seed << "\n";
    return out.str();
}

int derive_nt(const ExperimentConfig& cfg) {
    const double dx = 1.0 / (cfg.nx - 1);
    double h_min = HUGE_VAL;
    for (double h : cfg.h_list) h_min = std::min(h_min, h);
    double dt_max = cfg.cfl * dx / std::sqrt(static_cast<double>(cfg.dim));
    if (std::isfinite(h_min) && h_min > 0) dt_max /= (1.0 + 2.0 * dx / h_min);
    int nt = std::max(8, static_cast<int>(std::ceil(cfg.T / dt_max - 1e-12)));
    return ((nt + 15) / 16) * 16;  // friendly round-up
}

Grid grid_from_config(const ExperimentConfig& cfg) {
    const int nt = cfg.nt > 0 ? cfg.nt : derive_nt(cfg);
    return build_grid(cfg.dim, cfg.nx, nt, cfg.T, cfg.cfl);
}

MatrixPotential build_potential(const PotentialSpec& spec, int dim) {
    const int m = dim;
    if (spec.preset == "zero") return MatrixPotential::zero(m);
    if (spec.preset == "constant") {
        std::vector<cplx> entries = spec.constant_entries;
        if (entries.empty()) {
            entries.assign(static_cast<std::size_t>(m) * m, cplx(0, 0));
            for (int i = 0; i < m; ++i) entries[static_cast<std::size_t>(i) * m + i] = cplx(1, 0);
        }
        if (static_cast<int>(entries.size()) != m * m)
            throw std::invalid_argument("potential preset: constant needs m*m entries");
        return MatrixPotential::constant(m, entries);
    }
    if (spec.preset == "bump")
        return MatrixPotential::bump(dim, m, spec.entry_i, spec.entry_j, spec.amplitude,
                                     spec.center_t, spec.width_t, spec.center_x, spec.width_x);
    // file: sampled entries from an archive with ncomp = m*m
    ArchiveHeader h;
    WaveField f = read_field_archive(spec.file, &h);
    if (static_cast<int>(h.ncomp) != m * m)
        throw std::invalid_argument("potential file: expected ncomp = m*m entries");
    std::vector<std::vector<cplx>> entries(static_cast<std::size_t>(m) * m);
    const Grid& g = f.grid();
    for (int e = 0; e < m * m; ++e) {
        entries[e].resize(static_cast<std::size_t>(g.num_levels()) * g.num_nodes());
        for (int k = 0; k <= g.nt; ++k)
            for (int node = 0; node < g.num_nodes(); ++node)
                entries[e][static_cast<std::size_t>(k) * g.num_nodes() + node] =
                    f.at(k, node, e);
    }
    return MatrixPotential::sampled(g, m, std::move(entries));
}

}  // namespace mwip
