#include "cno/cno.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <optional>
#include <sstream>
#include <string>

#include "cno/anneal.hpp"
#include "cno/experiment.hpp"
#include "cno/witness.hpp"

struct cno_config {
    cno::ExperimentConfig cfg;
};
struct cno_qubo {
    cno::QuboProblem q;
};
struct cno_anneal_result {
    cno::AnnealResult r;
};
struct cno_state {
    cno::StateVector s;
};

namespace {

thread_local std::string last_error;

cno_status fail(cno_status s, const std::string& msg) {
    last_error = msg;
    return s;
}

// Maps exceptions from the core onto status codes.
template <class F>
cno_status guarded(F&& f) {
    try {
        last_error.clear();
        return f();
    } catch (const cno::InvalidArgument& e) {
        return fail(CNO_INVALID_ARGUMENT, e.what());
    } catch (const cno::NumericalError& e) {
        return fail(CNO_NUMERICAL_ERROR, e.what());
    } catch (const std::bad_alloc&) {
        return fail(CNO_INTERNAL_ERROR, "out of memory");
    } catch (const std::exception& e) {
        return fail(CNO_INTERNAL_ERROR, e.what());
    } catch (...) {
        return fail(CNO_INTERNAL_ERROR, "unknown error");
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) {
        throw std::bad_alloc();
    }
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

#define CNO_REQUIRE(cond, msg)                      \
    do {                                            \
        if (!(cond)) {                              \
            return fail(CNO_INVALID_ARGUMENT, msg); \
        }                                           \
    } while (0)

}  // namespace

extern "C" {

const char* cno_version(void) { return "1.0.0"; }

const char* cno_last_error(void) { return last_error.c_str(); }

const char* cno_status_name(cno_status s) {
    switch (s) {
        case CNO_OK: return "ok";
        case CNO_INVALID_ARGUMENT: return "invalid argument";
        case CNO_NUMERICAL_ERROR: return "numerical error";
        case CNO_IO_ERROR: return "I/O error";
        case CNO_NOT_CONVERGED: return "not converged";
        case CNO_INTERNAL_ERROR: return "internal error";
    }
    return "unknown status";
}

void cno_string_free(char* s) { std::free(s); }

cno_status cno_config_load(const char* path, cno_config** out) {
    CNO_REQUIRE(path && out, "null argument");
    *out = nullptr;
    return guarded([&] {
        std::ifstream in(path);
        if (!in) {
            return fail(CNO_IO_ERROR, std::string("cannot open config file '") + path + "'");
        }
        std::stringstream ss;
        ss << in.rdbuf();
        *out = new cno_config{cno::parse_config(ss.str(), path)};
        return CNO_OK;
    });
}

cno_status cno_config_parse(const char* json_text, cno_config** out) {
    CNO_REQUIRE(json_text && out, "null argument");
    *out = nullptr;
    return guarded([&] {
        *out = new cno_config{cno::parse_config(json_text)};
        return CNO_OK;
    });
}

cno_status cno_config_set_seed(cno_config* cfg, uint64_t seed) {
    CNO_REQUIRE(cfg, "null config");
    return guarded([&] {
        cno::set_seed(cfg->cfg, seed);
        return CNO_OK;
    });
}

cno_status cno_config_resolved_json(const cno_config* cfg, char** out) {
    CNO_REQUIRE(cfg && out, "null argument");
    *out = nullptr;
    return guarded([&] {
        *out = dup_string(cfg->cfg.resolved.dump(2));
        return CNO_OK;
    });
}

void cno_config_free(cno_config* cfg) { delete cfg; }

cno_status cno_run_evolve(const cno_config* cfg, char** csv_out, cno_state** state_out) {
    CNO_REQUIRE(cfg && csv_out, "null argument");
    *csv_out = nullptr;
    if (state_out) *state_out = nullptr;
    return guarded([&] {
        std::string csv = cno::run_evolve(cfg->cfg);
        if (state_out) {
            *state_out = new cno_state{cno::evolve_final_state(cfg->cfg)};
        }
        *csv_out = dup_string(csv);
        return CNO_OK;
    });
}

cno_status cno_run_aqae(const cno_config* cfg, int oracle, char** json_out, char** csv_out) {
    CNO_REQUIRE(cfg && json_out && csv_out, "null argument");
    *json_out = nullptr;
    *csv_out = nullptr;
    return guarded([&] {
        const auto res = cno::run_aqae_experiment(cfg->cfg, oracle != 0);
        *json_out = dup_string(res.report.dump(2) + "\n");
        *csv_out = dup_string(res.witness_csv);
        if (!res.all_converged) {
            return fail(CNO_NOT_CONVERGED, "at least one block did not converge within max_zoom");
        }
        return CNO_OK;
    });
}

cno_status cno_run_bench(const cno_config* cfg, char** csv_out) {
    CNO_REQUIRE(cfg && csv_out, "null argument");
    *csv_out = nullptr;
    return guarded([&] {
        *csv_out = dup_string(cno::run_bench(cfg->cfg));
        return CNO_OK;
    });
}

cno_status cno_block_census(int nf, int n_modes, char** text_out) {
    CNO_REQUIRE(text_out, "null argument");
    *text_out = nullptr;
    return guarded([&] {
        *text_out = dup_string(cno::block_census(nf, n_modes));
        return CNO_OK;
    });
}

cno_status cno_config_build_qubo(const cno_config* cfg, cno_qubo** out) {
    CNO_REQUIRE(cfg && out, "null argument");
    *out = nullptr;
    return guarded([&] {
        *out = new cno_qubo{cno::export_clock_qubo(cfg->cfg).problem};
        return CNO_OK;
    });
}

cno_status cno_qubo_read(const char* path, cno_qubo** out) {
    CNO_REQUIRE(path && out, "null argument");
    *out = nullptr;
    return guarded([&] {
        std::ifstream in(path);
        if (!in) {
            return fail(CNO_IO_ERROR, std::string("cannot open QUBO file '") + path + "'");
        }
        try {
            *out = new cno_qubo{cno::read_qubo(in)};
        } catch (const cno::InvalidArgument& e) {
            return fail(CNO_INVALID_ARGUMENT, std::string(path) + ": " + e.what());
        }
        return CNO_OK;
    });
}

cno_status cno_qubo_write(const cno_qubo* q, const char* path) {
    CNO_REQUIRE(q && path, "null argument");
    return guarded([&] {
        std::ofstream out(path);
        if (!out) {
            return fail(CNO_IO_ERROR, std::string("cannot write '") + path + "'");
        }
        cno::write_qubo(out, q->q);
        if (!out) {
            return fail(CNO_IO_ERROR, std::string("write failed for '") + path + "'");
        }
        return CNO_OK;
    });
}

size_t cno_qubo_size(const cno_qubo* q) { return q ? q->q.size : 0; }

cno_status cno_qubo_energy(const cno_qubo* q, const uint8_t* bits, size_t n, double* out) {
    CNO_REQUIRE(q && bits && out, "null argument");
    *out = 0.0;
    return guarded([&] {
        *out = q->q.energy(std::span<const std::uint8_t>(bits, n));
        return CNO_OK;
    });
}

void cno_qubo_free(cno_qubo* q) { delete q; }

cno_anneal_schedule cno_anneal_schedule_default(void) {
    const cno::AnnealSchedule d;
    return {d.sweeps, d.reads, 0.0, 0.0, d.seed};
}

cno_status cno_anneal(const cno_qubo* q, const cno_anneal_schedule* s, cno_anneal_result** out) {
    CNO_REQUIRE(q && s && out, "null argument");
    *out = nullptr;
    return guarded([&] {
        cno::AnnealSchedule sched;
        sched.sweeps = s->sweeps;
        sched.reads = s->reads;
        if (s->beta_start > 0.0) sched.beta_start = s->beta_start;
        if (s->beta_end > 0.0) sched.beta_end = s->beta_end;
        sched.seed = s->seed;
        *out = new cno_anneal_result{cno::anneal(q->q, sched)};
        return CNO_OK;
    });
}

double cno_anneal_result_energy(const cno_anneal_result* r) { return r ? r->r.best_energy : 0.0; }

cno_status cno_anneal_result_bits(const cno_anneal_result* r, uint8_t* bits, size_t n) {
    CNO_REQUIRE(r && bits, "null argument");
    CNO_REQUIRE(n == r->r.best_bits.size(), "bit buffer length does not match the problem size");
    std::memcpy(bits, r->r.best_bits.data(), n);
    return CNO_OK;
}

cno_status cno_anneal_result_json(const cno_anneal_result* r, char** out) {
    CNO_REQUIRE(r && out, "null argument");
    *out = nullptr;
    return guarded([&] {
        *out = dup_string(cno::anneal_result_json(r->r).dump(2) + "\n");
        return CNO_OK;
    });
}

void cno_anneal_result_free(cno_anneal_result* r) { delete r; }

cno_status cno_state_product(int nf, const int* labels, int n_modes, cno_state** out) {
    CNO_REQUIRE(labels && out && n_modes > 0, "null argument or nonpositive mode count");
    *out = nullptr;
    return guarded([&] {
        std::vector<int> l(labels, labels + n_modes);
        *out = new cno_state{cno::StateVector::product(l, cno::Basis::Flavor, nf)};
        return CNO_OK;
    });
}

cno_status cno_state_read(const char* path, cno_state** out) {
    CNO_REQUIRE(path && out, "null argument");
    *out = nullptr;
    return guarded([&] {
        std::ifstream in(path);
        if (!in) {
            return fail(CNO_IO_ERROR, std::string("cannot open state file '") + path + "'");
        }
        try {
            *out = new cno_state{cno::read_state(in)};
        } catch (const cno::InvalidArgument& e) {
            return fail(CNO_INVALID_ARGUMENT, std::string(path) + ": " + e.what());
        }
        return CNO_OK;
    });
}

cno_status cno_state_write(const cno_state* s, const char* path) {
    CNO_REQUIRE(s && path, "null argument");
    return guarded([&] {
        std::ofstream out(path);
        if (!out) {
            return fail(CNO_IO_ERROR, std::string("cannot write '") + path + "'");
        }
        cno::write_state(out, s->s);
        return out ? CNO_OK : fail(CNO_IO_ERROR, std::string("write failed for '") + path + "'");
    });
}

int cno_state_n_modes(const cno_state* s) { return s ? s->s.n_modes() : 0; }

void cno_state_free(cno_state* s) { delete s; }

cno_status cno_witness_csv(const cno_state* s, double time, char** csv_out) {
    CNO_REQUIRE(s && csv_out, "null argument");
    return guarded([&] {
        const auto r = cno::witness_report(s->s, time);
        *csv_out = dup_string(cno::witness_csv_header(s->s.n_modes()) + cno::witness_csv_row(r));
        return CNO_OK;
    });
}

cno_status cno_entropy(const cno_state* s, int mode, double* out) {
    CNO_REQUIRE(s && out, "null argument");
    *out = 0.0;
    return guarded([&] {
        *out = cno::entanglement_entropy(s->s, mode);
        return CNO_OK;
    });
}

cno_status cno_negativity(const cno_state* s, int mode_i, int mode_j, double* out) {
    CNO_REQUIRE(s && out, "null argument");
    *out = 0.0;
    return guarded([&] {
        *out = cno::negativity(s->s, mode_i, mode_j);
        return CNO_OK;
    });
}

}  // extern "C"
