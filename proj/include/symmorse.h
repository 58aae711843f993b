#ifndef SYMMORSE_H
#define SYMMORSE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define SYMMORSE_API __declspec(dllexport)
#else
#define SYMMORSE_API __attribute__((visibility("default")))
#endif

/* Every entry point returns one of these; they double as CLI exit codes. */
typedef enum symmorse_status {
  SYMMORSE_OK = 0,
  SYMMORSE_ERR_ARGUMENT = 1,
  SYMMORSE_ERR_PARSE = 2,
  SYMMORSE_ERR_VALIDATION = 3,
  SYMMORSE_ERR_NUMERIC = 4,
  SYMMORSE_ERR_RESIDUAL = 5
} symmorse_status;

typedef enum symmorse_side {
  SYMMORSE_SIDE_DEFAULT = -1, /* whatever the problem declares */
  SYMMORSE_SIDE_LINE = 0,
  SYMMORSE_SIDE_PLUS = 1,
  SYMMORSE_SIDE_MINUS = 2
} symmorse_side;

typedef struct symmorse_problem symmorse_problem;
typedef struct symmorse_result symmorse_result;

/* Non-positive numeric fields fall back to the problem file, then to built-in defaults. */
typedef struct symmorse_options {
  double T;
  int nodes;
  double lambda_max;
  int threads;
  int has_seed;
  uint64_t seed;
  int side;        /* symmorse_side */
  int convergence; /* rerun with T and the node count doubled and compare the integers */
  int timings;     /* include the timings section in JSON reports */
} symmorse_options;

SYMMORSE_API void symmorse_options_init(symmorse_options* options);
SYMMORSE_API const char* symmorse_version(void);

/* Message of the last failure on this thread; "" after a success. */
SYMMORSE_API const char* symmorse_last_error(void);
/* Location of the last parse error, 0 when there is none. */
SYMMORSE_API int symmorse_last_error_line(void);
SYMMORSE_API int symmorse_last_error_column(void);

SYMMORSE_API int symmorse_problem_parse(const char* text, symmorse_problem** out);
SYMMORSE_API int symmorse_problem_load(const char* path, symmorse_problem** out);
SYMMORSE_API int symmorse_problem_builtin(const char* name, symmorse_problem** out);
SYMMORSE_API size_t symmorse_builtin_count(void);
SYMMORSE_API const char* symmorse_builtin_name(size_t index); /* NULL past the end */
SYMMORSE_API const char* symmorse_problem_name(const symmorse_problem* problem);
/* The returned text is owned by the caller; release it with symmorse_string_free. */
SYMMORSE_API int symmorse_problem_serialize(const symmorse_problem* problem, char** text);
SYMMORSE_API void symmorse_problem_free(symmorse_problem* problem);
SYMMORSE_API void symmorse_string_free(char* text);

/* Commands. When the computation completes, *out receives a result even if the status is
 * nonzero: VALIDATION or NUMERIC for an uncertified run, RESIDUAL for a failed identity. */
SYMMORSE_API int symmorse_check(const symmorse_problem* problem, const symmorse_options* options,
                                symmorse_result** out);
SYMMORSE_API int symmorse_indices(const symmorse_problem* problem, const symmorse_options* options,
                                  symmorse_result** out);
/* theorem: "B", "C", "D" or "dirichlet". */
SYMMORSE_API int symmorse_verify(const symmorse_problem* problem, const char* theorem,
                                 const symmorse_options* options, symmorse_result** out);
SYMMORSE_API int symmorse_sweep(const symmorse_problem* problem, const symmorse_options* options,
                                symmorse_result** out);

SYMMORSE_API const char* symmorse_result_json(const symmorse_result* result);
SYMMORSE_API const char* symmorse_result_csv(const symmorse_result* result);
SYMMORSE_API int symmorse_result_certified(const symmorse_result* result);
SYMMORSE_API int symmorse_result_residual(const symmorse_result* result);
/* Named output files (report.json, CSV tables, SVG plots). */
SYMMORSE_API size_t symmorse_result_artifact_count(const symmorse_result* result);
SYMMORSE_API const char* symmorse_result_artifact_name(const symmorse_result* result, size_t index);
SYMMORSE_API const char* symmorse_result_artifact_data(const symmorse_result* result, size_t index);
SYMMORSE_API void symmorse_result_free(symmorse_result* result);

/* Frames are column-major 2n x n arrays with the momentum block in rows 0..n-1. */
SYMMORSE_API int symmorse_triple_index(int n, const double* alpha, const double* beta, const double* kappa,
                                       int* out);
SYMMORSE_API int symmorse_hormander_index(int n, const double* l0, const double* l1, const double* v0,
                                          const double* v1, int* out);
/* Paths are `samples` consecutive frames; t must increase strictly. */
SYMMORSE_API int symmorse_maslov_index(int n, size_t samples, const double* t, const double* path1,
                                       const double* path2, int* index, int* certified);

#ifdef __cplusplus
}
#endif

#endif
