/*
 * C interface for the weighted-conditional-expectation operator library.
 *
 * The library analyzes operators T f = w * E(u f) between L^p and L^q over
 * purely atomic measure spaces: per-atom series statistics, nuclearity and
 * compactness verdicts, and independent numerical cross-checks.
 *
 * Conventions:
 *   - Every fallible entry returns an int status (WCE_OK = 0); on failure a
 *     human-readable message is available from wce_last_error() (thread
 *     local, valid until the next failing call on the same thread).
 *   - Objects are created into out-parameters and released with the
 *     matching _destroy function; destroy functions accept NULL.
 *   - A wce_algebra keeps a pointer to the wce_space it was created from;
 *     the space must outlive the algebra.
 */
#ifndef WCE_WCE_H
#define WCE_WCE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define WCE_API __declspec(dllexport)
#else
#define WCE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* ---- status codes -------------------------------------------------- */

enum {
  WCE_OK = 0,
  WCE_E_BAD_ARGUMENT = 1,
  WCE_E_UNKNOWN_CELL = 2,
  WCE_E_EVAL = 3,
  WCE_E_PARSE = 4,
  WCE_E_INVALID_EXPONENT = 5,
  WCE_E_REGIME_UNSUPPORTED = 6,
  WCE_E_NON_FINITE_DATA = 7,
  WCE_E_ZERO_OPERATOR = 8,
  WCE_E_INSUFFICIENT_DATA = 9,
  WCE_E_GENERATOR = 10,
  WCE_E_CONFIG = 11,
  WCE_E_NULL_POINTER = 12,
  WCE_E_INTERNAL = 13
};

/* ---- enums mirrored from the core ---------------------------------- */

enum {
  WCE_VERDICT_NUCLEAR = 0,
  WCE_VERDICT_NOT_NUCLEAR = 1,
  WCE_VERDICT_COMPACT = 2,
  WCE_VERDICT_NOT_COMPACT = 3,
  WCE_VERDICT_ZERO = 4,
  WCE_VERDICT_INCONCLUSIVE = 5
};

enum { WCE_REGIME_SMALLER = 0, WCE_REGIME_LARGER = 1, WCE_REGIME_EQUAL = 2 };

#define WCE_FLAG_VERBATIM_TYPO_SUSPECTED (1u << 0)
#define WCE_FLAG_HEURISTIC_TAIL (1u << 1)
#define WCE_FLAG_Q1_BOUNDARY (1u << 2)
#define WCE_FLAG_NON_ATOMIC_PART (1u << 3)
#define WCE_FLAG_FINITE_TRUNCATION_EXACT (1u << 4)
#define WCE_FLAG_IMPLIED_BY_NUCLEAR (1u << 5)
#define WCE_FLAG_ZERO_ON_TRUNCATION (1u << 6)

WCE_API const char* wce_status_name(int verdict_status);
WCE_API const char* wce_flag_name(unsigned single_flag);
WCE_API const char* wce_regime_name(int regime);

/* ---- opaque handles -------------------------------------------------- */

typedef struct wce_space wce_space;
typedef struct wce_algebra wce_algebra;
typedef struct wce_weight wce_weight;
typedef struct wce_analysis wce_analysis;
typedef struct wce_example wce_example;

/* ---- plain-data records ---------------------------------------------- */

typedef struct {
  double p;
  double q;
  double p_conj; /* Hoelder conjugate; HUGE_VAL when p = 1 */
  double q_conj;
  double r;     /* bridging exponent: 1/r = |1/p - 1/q|; HUGE_VAL when p = q */
  double inv_r; /* 1/r (0 when p = q) */
  int regime;   /* WCE_REGIME_* */
  double mass_exponent; /* signed exponent of the atom mass in the series */
} wce_exponents_info;

typedef struct {
  size_t block_index;
  double mass;
  double eu;   /* E(|u|^p') on the atom (ess-sup |u| when p = 1) */
  double ew;   /* E(|w|^q) on the atom */
  double d;    /* eu^{1/p'} ew^{1/q} */
  double term; /* d * mass^{+-1/r}: the series term */
  double phi_norm; /* ||u chi_A||_{p'}: dual-factor norm */
  double g_norm;   /* ||w chi_A / mass||_q */
  double product;  /* phi_norm * g_norm (equals term) */
} wce_atom_row;

typedef struct {
  int status; /* WCE_VERDICT_* */
  double partial_sum;
  int64_t terms_used;
  int has_tail_bound;
  double tail_bound;
  int has_total;
  double total;
  unsigned flags; /* WCE_FLAG_* bitmask */
} wce_verdict_info;

typedef struct {
  double formula;  /* block-aggregation operator norm (upper side) */
  double ascent;   /* best honest Rayleigh quotient found (lower side) */
  double nuclear_bound;
  double max_block_residual; /* worst |block_norm - term| / term */
  int has_pietsch;
  double pietsch_residual; /* test-function identity residual (p > 1) */
} wce_oracle_info;

typedef struct {
  const char* name; /* owned by the example handle */
  int64_t terms;
  double partial_sum;
  double tail_bound;
} wce_sub_series_info;

/* Analysis options. Initialize with wce_options_init, then override. */
typedef struct {
  double p;
  double q;
  int has_tail;       /* 0: nothing known beyond the given atoms */
  double tail_value;  /* certified bound on the remaining series */
  int tail_divergent; /* the series is known to diverge */
  int complete;       /* the atom list is the whole space */
  int series_converges;     /* -1 unknown / 0 asserted false / 1 asserted true */
  int limit_vanishes;       /* -1 / 0 / 1 */
  int sigma_limit_vanishes; /* -1 / 0 / 1 */
  int run_oracle;
} wce_options;

WCE_API void wce_options_init(wce_options* options);

/* ---- construction ----------------------------------------------------- */

WCE_API int wce_space_create(const int64_t* cell_ids, const double* masses, size_t cell_count,
                             wce_space** out);
WCE_API void wce_space_destroy(wce_space* space);
WCE_API size_t wce_space_cell_count(const wce_space* space);
WCE_API double wce_space_total_mass(const wce_space* space);

/* Blocks are given as a flat id list partitioned by block_sizes. */
WCE_API int wce_algebra_create(const wce_space* space, const size_t* block_sizes,
                               size_t block_count, const int64_t* cell_ids, wce_algebra** out);
/* Declare a non-atomic panel together with the weights' support on it. */
WCE_API int wce_algebra_add_panel(wce_algebra* algebra, const char* panel_id,
                                  int u_support_positive, int w_support_positive);
WCE_API void wce_algebra_destroy(wce_algebra* algebra);
WCE_API size_t wce_algebra_block_count(const wce_algebra* algebra);

WCE_API int wce_weight_table(const int64_t* cell_ids, const double* values, size_t count,
                             wce_weight** out);
/* Formula in the cell id n, e.g. "1/n^3"; operators + - * / ^ and (). */
WCE_API int wce_weight_expr(const char* formula, wce_weight** out);
WCE_API void wce_weight_destroy(wce_weight* weight);
WCE_API int wce_weight_eval(const wce_weight* weight, int64_t cell_id, double* out);

/* ---- full analysis ------------------------------------------------------ */

WCE_API int wce_analyze(const wce_space* space, const wce_algebra* algebra,
                        const wce_weight* u, const wce_weight* w, const wce_options* options,
                        wce_analysis** out);
WCE_API void wce_analysis_destroy(wce_analysis* analysis);
WCE_API int wce_analysis_exponents(const wce_analysis* analysis, wce_exponents_info* out);
WCE_API size_t wce_analysis_row_count(const wce_analysis* analysis);
WCE_API int wce_analysis_row(const wce_analysis* analysis, size_t index, wce_atom_row* out);
WCE_API double wce_analysis_nuclear_bound(const wce_analysis* analysis);
/* which: 0 = nuclearity, 1 = compactness */
WCE_API int wce_analysis_verdict(const wce_analysis* analysis, int which, wce_verdict_info* out);
WCE_API size_t wce_analysis_note_count(const wce_analysis* analysis, int which);
WCE_API const char* wce_analysis_note(const wce_analysis* analysis, int which, size_t index);
WCE_API int wce_analysis_consistent(const wce_analysis* analysis);
/* WCE_E_INSUFFICIENT_DATA when the analysis ran without the oracle. */
WCE_API int wce_analysis_oracle(const wce_analysis* analysis, wce_oracle_info* out);

/* ---- built-in example family ------------------------------------------- */

WCE_API int wce_example_run(const wce_options* options, int64_t terms, wce_example** out);
WCE_API void wce_example_destroy(wce_example* example);
WCE_API int wce_example_exponents(const wce_example* example, wce_exponents_info* out);
WCE_API int64_t wce_example_terms(const wce_example* example);
WCE_API size_t wce_example_row_count(const wce_example* example);
WCE_API int wce_example_row(const wce_example* example, size_t index, wce_atom_row* out);
WCE_API int wce_example_verdict(const wce_example* example, int which, wce_verdict_info* out);
WCE_API size_t wce_example_note_count(const wce_example* example, int which);
WCE_API const char* wce_example_note(const wce_example* example, int which, size_t index);
WCE_API int wce_example_consistent(const wce_example* example);
/* which: 0 = odd sub-series, 1 = even sub-series */
WCE_API int wce_example_sub(const wce_example* example, int which, wce_sub_series_info* out);
/* WCE_E_INSUFFICIENT_DATA when the window held fewer than 8 positive terms. */
WCE_API int wce_example_decay(const wce_example* example, double* slope);
WCE_API int wce_example_oracle(const wce_example* example, wce_oracle_info* out);

/* ---- standalone checks --------------------------------------------------- */

WCE_API int wce_block_norm(const wce_space* space, const wce_algebra* algebra,
                           const wce_weight* u, const wce_weight* w, double p, double q,
                           size_t block_index, double* out);
WCE_API int wce_operator_norm(const wce_space* space, const wce_algebra* algebra,
                              const wce_weight* u, const wce_weight* w, double p, double q,
                              double* formula, double* ascent);
WCE_API int wce_nuclear_bound(const wce_space* space, const wce_algebra* algebra,
                              const wce_weight* u, const wce_weight* w, double p, double q,
                              double* out);
/* p = q = 2 only. */
WCE_API int wce_trace_norm_hilbert(const wce_space* space, const wce_algebra* algebra,
                                   const wce_weight* u, const wce_weight* w, double* out);
WCE_API int wce_pietsch_residual(const wce_space* space, const wce_algebra* algebra,
                                 const wce_weight* u, const wce_weight* w, double p, double q,
                                 double* out);

/* ---- measure/conditional-expectation utilities -------------------------- */

/* Conditional expectation of f: one value per block, in block order. */
WCE_API int wce_cond_exp_blocks(const wce_space* space, const wce_algebra* algebra,
                                const wce_weight* f, double* block_values);
WCE_API int wce_integrate(const wce_space* space, const wce_weight* f, double* out);
WCE_API int wce_lp_norm(const wce_space* space, const wce_weight* f, double p, double* out);
/* (T f)(x) for every cell, in space cell order. */
WCE_API int wce_apply(const wce_space* space, const wce_algebra* algebra, const wce_weight* u,
                      const wce_weight* w, const wce_weight* f, double* cell_values);
/* Ascending indices of blocks where f is not identically zero. Copies up to
 * `capacity` indices and always reports the full count. */
WCE_API int wce_support_cover(const wce_space* space, const wce_algebra* algebra,
                              const wce_weight* f, size_t* block_indices, size_t capacity,
                              size_t* out_count);

WCE_API const char* wce_version(void);
/* Message from the most recent failing call on this thread. */
WCE_API const char* wce_last_error(void);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* WCE_WCE_H */
