#ifndef COREC_COREC_H
#define COREC_COREC_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define COREC_API __declspec(dllexport)
#else
#define COREC_API __attribute__((visibility("default")))
#endif

typedef struct corec_session corec_session;

typedef enum corec_status {
  COREC_OK = 0,
  COREC_ERR_SYNTAX = 1,
  COREC_ERR_INPUT = 2,          /* well-formed but rejected: unguarded, invalid circuit, not GNF, ... */
  COREC_ERR_UNKNOWN_NAME = 3,   /* unknown symbol, variable, suite or oracle */
  COREC_ERR_INVALID_HANDLE = 4,
  COREC_ERR_DIVERGED = 5,
  COREC_ERR_CHECK_FAILED = 6,
  COREC_ERR_INTERNAL = 7,
  COREC_ERR_ARGUMENT = 8
} corec_status;

typedef enum corec_format { COREC_TEXT = 0, COREC_JSON = 1 } corec_format;

typedef enum corec_source {
  COREC_SOURCE_SYSTEM = 0, /* equation system text */
  COREC_SOURCE_GNF = 1,    /* grammar in Greibach normal form */
  COREC_SOURCE_CCS = 2     /* CCS agent definitions */
} corec_source;

typedef uint32_t corec_system;

COREC_API const char* corec_version(void);
COREC_API const char* corec_status_name(corec_status status);
/* Message of the last failing call on this thread; "" if none. */
COREC_API const char* corec_last_error(void);
/* Frees strings returned through char** out-parameters. */
COREC_API void corec_string_free(char* text);

COREC_API corec_status corec_session_open(corec_session** out);
COREC_API void corec_session_close(corec_session* session);

/* Parses, compiles and solves a system; the handle lives as long as the
   session. */
COREC_API corec_status corec_system_load(corec_session* session, corec_source source, const char* text,
                                         corec_system* out);
/* Variables of a loaded system, one per line (text) or a JSON array. */
COREC_API corec_status corec_system_vars(corec_session* session, corec_system system, corec_format format,
                                         char** out);
/* Depth-bounded observation of one solved variable ("u: 0 1 1 0" for streams). */
COREC_API corec_status corec_observe(corec_session* session, corec_system system, const char* var, size_t depth,
                                     corec_format format, char** out);
/* Memo versus recomputation per variable; COREC_ERR_CHECK_FAILED when they
   disagree (the report is still written). */
COREC_API corec_status corec_diagram_check(corec_session* session, corec_system system, size_t depth,
                                           corec_format format, char** out);
/* Word membership in a solved language variable; letters per character, or
   space-separated when some letter is longer. */
COREC_API corec_status corec_member(corec_session* session, corec_system system, const char* var, const char* word,
                                    int* result);
/* Observation of an agent expression over a loaded CCS system. */
COREC_API corec_status corec_ccs_agent(corec_session* session, corec_system system, const char* agent,
                                       size_t depth, corec_format format, char** out);
/* Depth-bounded bisimilarity of two agents (or two variables of a non-CCS
   system); *result is 1 or 0 and `out` receives a witness on 0. */
COREC_API corec_status corec_bounded_equal(corec_session* session, corec_system system, const char* left,
                                           const char* right, size_t depth, int* result, char** out);

/* Applies a BDE-defined operation to stream literals separated by ';'
   ("1,2|3", "ones", "|1", "5"). Tree files take rational constants. */
COREC_API corec_status corec_bde_apply(corec_session* session, const char* bde_text, const char* function,
                                       const char* args, size_t prefix, corec_format format, char** out);
/* Runs a circuit on stream literals, one per input in sorted id order,
   separated by ';' or given as id=literal. Prints every output. */
COREC_API corec_status corec_circuit_run(corec_session* session, const char* circuit_json, const char* inputs,
                                         size_t prefix, corec_format format, char** out);
/* Compiled g/f definitions of a circuit, one per line. */
COREC_API corec_status corec_circuit_compile(const char* circuit_json, char** out);

/* NULL or "" runs every suite. *all_passed is 1 when every check passed. */
COREC_API corec_status corec_run_suite(const char* name, corec_format format, char** out, int* all_passed);
/* Comma-separated suite names. */
COREC_API const char* corec_suite_names(void);
COREC_API corec_status corec_oracle_eval(const char* name, const char* const* inputs, size_t count, char** out);

#ifdef __cplusplus
}
#endif

#endif
