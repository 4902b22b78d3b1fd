#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cno/cno.h"

namespace {

int report(cno_status s, const std::string& what) {
    if (s != CNO_OK) {
        std::cerr << "cno " << what << ": " << cno_status_name(s) << ": " << cno_last_error() << "\n";
    }
    return static_cast<int>(s);
}

// Writes to `path`, or stdout when it is empty.
bool emit(const std::string& path, const char* text) {
    if (path.empty()) {
        std::fputs(text, stdout);
        return true;
    }
    std::ofstream out(path);
    out << text;
    if (!out) {
        std::cerr << "cno: cannot write '" << path << "'\n";
        return false;
    }
    return true;
}

struct Owned {
    char* p = nullptr;
    ~Owned() { cno_string_free(p); }
};

struct ConfigHandle {
    cno_config* p = nullptr;
    ~ConfigHandle() { cno_config_free(p); }
};

cno_status open_config(const std::string& path, std::optional<uint64_t> seed, ConfigHandle& h) {
    cno_status s = cno_config_load(path.c_str(), &h.p);
    if (s == CNO_OK && seed) {
        s = cno_config_set_seed(h.p, *seed);
    }
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Collective neutrino oscillations: exact evolution, entanglement witnesses and annealer-based time evolution"};
    app.set_version_flag("--version", std::string(cno_version()));
    app.require_subcommand(1);

    std::string config, out, state_out, csv_out, state_in, qubo_in;
    std::optional<uint64_t> seed;
    bool oracle = false;
    double time = 0.0;
    int nf = 3, n_modes = 4;
    cno_anneal_schedule sched = cno_anneal_schedule_default();

    auto* evolve = app.add_subcommand("evolve", "Exact evolution; witness CSV over the configured times");
    evolve->add_option("--config", config, "JSON config file")->required()->check(CLI::ExistingFile);
    evolve->add_option("--out", out, "CSV output (default stdout)");
    evolve->add_option("--state-out", state_out, "write the state at the last time");
    evolve->add_option("--seed", seed, "seed recorded in the provenance header");

    auto* witness = app.add_subcommand("witness", "Entropies and negativities of a stored state");
    witness->add_option("--state", state_in, "state file")->required()->check(CLI::ExistingFile);
    witness->add_option("--time", time, "time label for the CSV row");
    witness->add_option("--out", out, "CSV output (default stdout)");

    auto* qubo = app.add_subcommand("qubo", "Export the clock QUBO for one zoom level");
    qubo->add_option("--config", config, "JSON config file")->required()->check(CLI::ExistingFile);
    qubo->add_option("--out", out, "QUBO text output")->required();
    qubo->add_option("--seed", seed, "unused by the export, accepted for uniformity");

    auto* anneal = app.add_subcommand("anneal", "Simulated annealing of a QUBO file");
    anneal->add_option("--qubo", qubo_in, "QUBO text file")->required()->check(CLI::ExistingFile);
    anneal->add_option("--sweeps", sched.sweeps, "Metropolis sweeps per read")->check(CLI::NonNegativeNumber);
    anneal->add_option("--reads", sched.reads, "independent reads")->check(CLI::PositiveNumber);
    anneal->add_option("--seed", sched.seed, "RNG seed");
    anneal->add_option("--beta-start", sched.beta_start, "initial inverse temperature (default automatic)");
    anneal->add_option("--beta-end", sched.beta_end, "final inverse temperature (default automatic)");
    anneal->add_option("--out", out, "JSON output (default stdout)");

    auto* aqae = app.add_subcommand("aqae", "Blocked annealer-based evolution over the configured times");
    aqae->add_option("--config", config, "JSON config file")->required()->check(CLI::ExistingFile);
    aqae->add_option("--out", out, "JSON report (default stdout)");
    aqae->add_option("--csv", csv_out, "witness CSV output");
    aqae->add_option("--seed", seed, "RNG seed (overrides the config)");
    aqae->add_flag("--oracle", oracle, "compare every block against exact evolution");

    auto* bench = app.add_subcommand("bench", "Infidelity grid over zoom, K, sweeps and reads");
    bench->add_option("--config", config, "JSON config file")->required()->check(CLI::ExistingFile);
    bench->add_option("--out", out, "CSV output (default stdout)");
    bench->add_option("--seed", seed, "RNG seed (overrides the config)");

    auto* blocks = app.add_subcommand("blocks", "Mass-basis occupation block census");
    blocks->add_option("--nf", nf, "number of flavors (2 or 3)");
    blocks->add_option("--n-modes", n_modes, "number of momentum modes");
    blocks->add_option("--out", out, "output (default stdout)");

    CLI11_PARSE(app, argc, argv);

    if (evolve->parsed()) {
        ConfigHandle cfg;
        if (cno_status s = open_config(config, seed, cfg); s != CNO_OK) return report(s, "evolve");
        Owned csv;
        cno_state* st = nullptr;
        cno_status s = cno_run_evolve(cfg.p, &csv.p, state_out.empty() ? nullptr : &st);
        if (s != CNO_OK) return report(s, "evolve");
        if (st) {
            s = cno_state_write(st, state_out.c_str());
            cno_state_free(st);
            if (s != CNO_OK) return report(s, "evolve");
        }
        return emit(out, csv.p) ? 0 : CNO_IO_ERROR;
    }
    if (witness->parsed()) {
        cno_state* st = nullptr;
        if (cno_status s = cno_state_read(state_in.c_str(), &st); s != CNO_OK) return report(s, "witness");
        Owned csv;
        cno_status s = cno_witness_csv(st, time, &csv.p);
        cno_state_free(st);
        if (s != CNO_OK) return report(s, "witness");
        return emit(out, csv.p) ? 0 : CNO_IO_ERROR;
    }
    if (qubo->parsed()) {
        ConfigHandle cfg;
        if (cno_status s = open_config(config, seed, cfg); s != CNO_OK) return report(s, "qubo");
        cno_qubo* q = nullptr;
        cno_status s = cno_config_build_qubo(cfg.p, &q);
        if (s == CNO_OK) {
            s = cno_qubo_write(q, out.c_str());
            std::cerr << "wrote " << cno_qubo_size(q) << " variables to " << out << "\n";
        }
        cno_qubo_free(q);
        return report(s, "qubo");
    }
    if (anneal->parsed()) {
        cno_qubo* q = nullptr;
        if (cno_status s = cno_qubo_read(qubo_in.c_str(), &q); s != CNO_OK) return report(s, "anneal");
        cno_anneal_result* r = nullptr;
        cno_status s = cno_anneal(q, &sched, &r);
        cno_qubo_free(q);
        if (s != CNO_OK) return report(s, "anneal");
        Owned js;
        s = cno_anneal_result_json(r, &js.p);
        cno_anneal_result_free(r);
        if (s != CNO_OK) return report(s, "anneal");
        return emit(out, js.p) ? 0 : CNO_IO_ERROR;
    }
    if (aqae->parsed()) {
        ConfigHandle cfg;
        if (cno_status s = open_config(config, seed, cfg); s != CNO_OK) return report(s, "aqae");
        Owned js, csv;
        cno_status s = cno_run_aqae(cfg.p, oracle ? 1 : 0, &js.p, &csv.p);
        if (js.p && !emit(out, js.p)) return CNO_IO_ERROR;
        if (csv.p && !csv_out.empty() && !emit(csv_out, csv.p)) return CNO_IO_ERROR;
        return report(s, "aqae");
    }
    if (bench->parsed()) {
        ConfigHandle cfg;
        if (cno_status s = open_config(config, seed, cfg); s != CNO_OK) return report(s, "bench");
        Owned csv;
        if (cno_status s = cno_run_bench(cfg.p, &csv.p); s != CNO_OK) return report(s, "bench");
        return emit(out, csv.p) ? 0 : CNO_IO_ERROR;
    }
    if (blocks->parsed()) {
        Owned text;
        if (cno_status s = cno_block_census(nf, n_modes, &text.p); s != CNO_OK) return report(s, "blocks");
        return emit(out, text.p) ? 0 : CNO_IO_ERROR;
    }
    return 0;
}
