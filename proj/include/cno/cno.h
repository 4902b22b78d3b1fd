#ifndef CNO_CNO_H
#define CNO_CNO_H

/* C interface to the collective neutrino oscillation library.
 * Every call returns a cno_status; on failure cno_last_error() holds a
 * message for the calling thread. Strings returned through char** out
 * parameters are owned by the caller and released with cno_string_free. */

#include <stddef.h>
#include <stdint.h>

#if defined(CNO_BUILDING)
#define CNO_API __attribute__((visibility("default")))
#else
#define CNO_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cno_status {
    CNO_OK = 0,
    CNO_INVALID_ARGUMENT = 1,
    CNO_NUMERICAL_ERROR = 2,
    CNO_IO_ERROR = 3,
    CNO_NOT_CONVERGED = 4,
    CNO_INTERNAL_ERROR = 5
} cno_status;

typedef struct cno_config cno_config;
typedef struct cno_qubo cno_qubo;
typedef struct cno_anneal_result cno_anneal_result;
typedef struct cno_state cno_state;

CNO_API const char* cno_version(void);
CNO_API const char* cno_last_error(void);
CNO_API const char* cno_status_name(cno_status s);
CNO_API void cno_string_free(char* s);

/* Configuration (JSON). */
CNO_API cno_status cno_config_load(const char* path, cno_config** out);
CNO_API cno_status cno_config_parse(const char* json_text, cno_config** out);
CNO_API cno_status cno_config_set_seed(cno_config* cfg, uint64_t seed);
CNO_API cno_status cno_config_resolved_json(const cno_config* cfg, char** out);
CNO_API void cno_config_free(cno_config* cfg);

/* Exact evolution: witness CSV over the configured times. The final state
 * may be requested through state_out (pass NULL to skip). */
CNO_API cno_status cno_run_evolve(const cno_config* cfg, char** csv_out, cno_state** state_out);

/* Blocked AQAE. Returns CNO_NOT_CONVERGED (with both outputs filled) when
 * some block ran out of zoom steps. */
CNO_API cno_status cno_run_aqae(const cno_config* cfg, int oracle, char** json_out, char** csv_out);

CNO_API cno_status cno_run_bench(const cno_config* cfg, char** csv_out);
CNO_API cno_status cno_block_census(int nf, int n_modes, char** text_out);

/* QUBO for one zoom level of the configured clock. */
CNO_API cno_status cno_config_build_qubo(const cno_config* cfg, cno_qubo** out);
CNO_API cno_status cno_qubo_read(const char* path, cno_qubo** out);
CNO_API cno_status cno_qubo_write(const cno_qubo* q, const char* path);
CNO_API size_t cno_qubo_size(const cno_qubo* q);
CNO_API cno_status cno_qubo_energy(const cno_qubo* q, const uint8_t* bits, size_t n, double* out);
CNO_API void cno_qubo_free(cno_qubo* q);

typedef struct cno_anneal_schedule {
    int sweeps;
    int reads;
    double beta_start; /* <= 0 selects the automatic value */
    double beta_end;   /* <= 0 selects the automatic value */
    uint64_t seed;
} cno_anneal_schedule;

CNO_API cno_anneal_schedule cno_anneal_schedule_default(void);
CNO_API cno_status cno_anneal(const cno_qubo* q, const cno_anneal_schedule* s, cno_anneal_result** out);
CNO_API double cno_anneal_result_energy(const cno_anneal_result* r);
CNO_API cno_status cno_anneal_result_bits(const cno_anneal_result* r, uint8_t* bits, size_t n);
CNO_API cno_status cno_anneal_result_json(const cno_anneal_result* r, char** out);
CNO_API void cno_anneal_result_free(cno_anneal_result* r);

/* States. Labels are flavor indices (0=e, 1=mu, 2=tau) in the flavor basis. */
CNO_API cno_status cno_state_product(int nf, const int* labels, int n_modes, cno_state** out);
CNO_API cno_status cno_state_read(const char* path, cno_state** out);
CNO_API cno_status cno_state_write(const cno_state* s, const char* path);
CNO_API int cno_state_n_modes(const cno_state* s);
CNO_API void cno_state_free(cno_state* s);

/* Witnesses of a single state; time labels the CSV row. */
CNO_API cno_status cno_witness_csv(const cno_state* s, double time, char** csv_out);
CNO_API cno_status cno_entropy(const cno_state* s, int mode, double* out);
CNO_API cno_status cno_negativity(const cno_state* s, int mode_i, int mode_j, double* out);

#ifdef __cplusplus
}
#endif

#endif
