#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cno/anneal.hpp"
#include "cno/aqae.hpp"
#include "cno/clock_qubo.hpp"
#include "cno/hamiltonian.hpp"

namespace cno {

struct BenchConfig {
    double time = 1e12;
    int max_zoom = 20;
    std::vector<int> bits{1, 2};
    std::vector<int> sweeps{10, 100};
    std::vector<int> reads{1, 20};
    int base_bits = 2;
    int base_sweeps = 100;
    int base_reads = 20;
};

struct QuboExportConfig {
    double time = 1e12;
    int zoom = 0;
    Direction direction = Direction::Forward;
    int block = -1;  // -1: whole system in the initial state's basis
};

// Everything a CLI command needs, resolved from a JSON config file with
// Table I defaults for absent keys.
struct ExperimentConfig {
    SystemSpec spec;
    std::vector<int> initial;  // flavor label per mode
    std::vector<double> times;
    std::uint64_t seed = 1;
    AqaeConfig aqae;
    BenchConfig bench;
    QuboExportConfig qubo;
    nlohmann::json resolved;   // echo of the effective configuration

    StateVector initial_state() const;
};

ExperimentConfig parse_config(const std::string& text, const std::string& source = "<config>");
ExperimentConfig load_config(const std::string& path);
ExperimentConfig config_from_json(const nlohmann::json& j);

// Refreshes `resolved` after a field is changed programmatically.
void set_seed(ExperimentConfig& cfg, std::uint64_t seed);

// 12 significant digits.
std::string format_number(double v);

std::string witness_csv_header(int n_modes);
std::string witness_csv_row(const WitnessReport& r);

// CSV: time_ev_inv, S_1..S_N, N_ij for i < j; provenance in '#' header lines.
std::string run_evolve(const ExperimentConfig& cfg);
StateVector evolve_final_state(const ExperimentConfig& cfg);

struct AqaeExperiment {
    nlohmann::json report;
    std::string witness_csv;
    bool all_converged = true;
};

AqaeExperiment run_aqae_experiment(const ExperimentConfig& cfg, bool oracle);

// CSV rows: axis, value, zoom, infidelity, clock_energy.
std::string run_bench(const ExperimentConfig& cfg);

std::string block_census(int nf, int n_modes);

// The zoom-level QUBO AQAE would submit first for the configured block/time,
// with the t = 0 register frozen as configured.
DigitizedQubo export_clock_qubo(const ExperimentConfig& cfg);

void write_state(std::ostream& out, const StateVector& s);
StateVector read_state(std::istream& in);

nlohmann::json anneal_result_json(const AnnealResult& r);

}  // namespace cno
