#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "mwip/field.hpp"

namespace mwip {

// ----------------------------------------------------------------- archive

/// Binary field archive, little-endian:
///   "MWIP" | u16 version | u16 value_kind (0 real, 1 complex)
///   | u16 representation (0 physical, 1 conjugated, 2 filtered) | u16 pad
///   | u32 dim | u32 nx | u32 nt | u32 ncomp | f64 T
///   | f64 tag_h | f64 tag_omega[2] | i32 tag_sign | i32 pad
/// then (nt+1)*nx^dim*ncomp row-major, time-major f64 values
/// (re, im interleaved when complex). Byte length is fully determined by the
/// header and is verified on read.
struct ArchiveHeader {
    std::uint16_t version = 1;
    std::uint16_t value_kind = 1;
    std::uint16_t representation = 0;
    std::uint32_t dim = 0, nx = 0, nt = 0, ncomp = 0;
    double T = 0;
    double tag_h = 0;
    std::array<double, 2> tag_omega{0, 0};
    std::int32_t tag_sign = 0;
};

void write_field_archive(const std::string& path, const WaveField& u,
                         std::uint16_t representation_override = 0xffff);
WaveField read_field_archive(const std::string& path, ArchiveHeader* header = nullptr);

/// Raw variant for non-field payloads (filtered reconstructions).
void write_raw_archive(const std::string& path, const ArchiveHeader& header,
                       std::span<const cplx> values);

// --------------------------------------------------------------------- csv

std::string format_double(double v);  // 17 significant digits, round-trip exact

class CsvWriter {
  public:
    explicit CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}
    void add_row(std::vector<std::string> cells);
    std::string cell(double v) const { return format_double(v); }
    std::string cell(int v) const { return std::to_string(v); }
    void write(const std::string& path) const;
    std::size_t rows() const { return rows_.size(); }

  private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

std::vector<std::vector<std::string>> read_csv(const std::string& path);

// ------------------------------------------------------------------ config

struct PotentialSpec {
    std::string preset = "zero";  // zero | constant | bump | file
    std::vector<cplx> constant_entries;
    // bump parameters
    int entry_i = 0, entry_j = 0;
    double amplitude = 4.0;
    double center_t = 1.0, width_t = 0.6;
    std::array<double, 2> center_x{0.5, 0.5}, width_x{0.3, 0.3};
    std::string file;
};

struct ExperimentConfig {
    // grid
    int dim = 2, nx = 65, nt = 0;  // nt = 0 derives the smallest valid value
    double T = 2.0, cfl = 0.9;
    // partition
    std::array<double, 2> omega0{1, 0};
    double epsilon = 0.05;
    int dilation = 1;
    // potentials
    PotentialSpec q1, q2;
    // probes / frequencies
    std::vector<double> h_list{0.5, 0.25, 0.125};
    double xi_max = 6.0;
    int xi_count = 5, omega_count = 1;
    // run
    std::string mode = "oracle";       // oracle | blind
    std::string sim_case = "presets";  // presets | zero | mms
    bool partial_data = false;
    bool emit_filtered = false;
    std::string out = "out";
    std::uint64_t seed = 1;
    int jobs = 1;
    int carleman_seeds = 20;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);
std::string serialize_config(const ExperimentConfig& cfg);

Grid grid_from_config(const ExperimentConfig& cfg);
/// Smallest nt satisfying both the base CFL and the transport-tightened
/// bound for the smallest h in the list.
int derive_nt(const ExperimentConfig& cfg);
MatrixPotential build_potential(const PotentialSpec& spec, int dim);

}  // namespace mwip
