#ifndef FREEMETRIC_H
#define FREEMETRIC_H

/* C interface to the freemetric library. Every object is an opaque handle
 * released with its *_free function. Functions returning char** hand over a
 * malloc'd, NUL-terminated string to be released with fm_string_free. On a
 * non-OK status, fm_last_error() describes the failure (per thread) and the
 * out parameters are left untouched unless stated otherwise. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define FM_API __declspec(dllexport)
#else
#define FM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fm_status {
  FM_OK = 0,
  FM_ERR_USAGE = 1,       /* malformed input or argument */
  FM_ERR_DOMAIN = 2,      /* unknown generator, not an automorphism, ... */
  FM_ERR_RESOURCE = 3,    /* search or memory budget exceeded */
  FM_ERR_CASE_FAILED = 4, /* a casebook check did not hold */
  FM_ERR_INTERNAL = 5
} fm_status;

typedef struct fm_basis fm_basis;
typedef struct fm_word fm_word;
typedef struct fm_morphism fm_morphism;
typedef struct fm_genset fm_genset;
typedef struct fm_frontier fm_frontier;

typedef struct fm_rational {
  int64_t num;
  int64_t den;
} fm_rational;

FM_API const char* fm_version(void);
FM_API const char* fm_last_error(void);
FM_API void fm_string_free(char* s);

/* "p/q", "p" or a terminating decimal. */
FM_API fm_status fm_rational_parse(const char* text, fm_rational* out);

/* -- bases and words -- */

/* "a,b" or "a b". */
FM_API fm_status fm_basis_parse(const char* names, fm_basis** out);
FM_API void fm_basis_free(fm_basis* basis);
FM_API size_t fm_basis_rank(const fm_basis* basis);

FM_API fm_status fm_word_parse(const fm_basis* basis, const char* text, fm_word** out);
FM_API void fm_word_free(fm_word* w);
FM_API size_t fm_word_length(const fm_word* w);
FM_API fm_status fm_word_format(const fm_word* w, char** out);
FM_API fm_status fm_word_multiply(const fm_word* u, const fm_word* v, fm_word** out);
FM_API fm_status fm_word_invert(const fm_word* u, fm_word** out);
FM_API int fm_word_equal(const fm_word* u, const fm_word* v);
FM_API fm_status fm_word_cyclic_length(const fm_word* u, size_t* out);
FM_API fm_status fm_word_is_conjugate(const fm_word* u, const fm_word* v, int* out);
FM_API fm_status fm_word_is_primitive(const fm_word* u, int* out);

/* -- endomorphisms -- */

/* {"basis": ["a","b"], "images": {"a": "a b", "b": "b"}} */
FM_API fm_status fm_morphism_parse_json(const char* json, fm_morphism** out);
/* One image per generator, in basis order. */
FM_API fm_status fm_morphism_from_images(const fm_basis* basis, const char* const* images,
                                         size_t count, fm_morphism** out);
FM_API void fm_morphism_free(fm_morphism* m);
FM_API fm_status fm_morphism_to_json(const fm_morphism* m, char** out);
FM_API fm_status fm_morphism_format(const fm_morphism* m, char** out);
FM_API fm_status fm_morphism_basis(const fm_morphism* m, fm_basis** out);
/* Apply `first`, then `second`. */
FM_API fm_status fm_morphism_compose(const fm_morphism* first, const fm_morphism* second,
                                     fm_morphism** out);
FM_API fm_status fm_morphism_apply(const fm_morphism* m, const fm_word* w, fm_word** out);
FM_API fm_status fm_morphism_invert(const fm_morphism* m, fm_morphism** out);
FM_API fm_status fm_morphism_is_automorphism(const fm_morphism* m, int* out);
FM_API int fm_morphism_equal(const fm_morphism* a, const fm_morphism* b);

/* -- generating sets and metrics -- */

/* First line `basis: a b`, then one member per line; no members means the basis. */
FM_API fm_status fm_genset_parse(const char* text, fm_genset** out);
FM_API fm_status fm_genset_from_basis(const fm_basis* basis, fm_genset** out);
FM_API void fm_genset_free(fm_genset* s);

/* Any pointer may be NULL: basis generating set, basepoint 1, gamma "ln2",
 * default search budget (0). */
typedef struct fm_metric_options {
  const fm_genset* genset;
  const fm_word* basepoint;
  const char* gamma;
  uint64_t budget;
} fm_metric_options;

FM_API fm_status fm_dist(const fm_metric_options* opts, const fm_word* g, const fm_word* h,
                         uint64_t* out);
FM_API fm_status fm_gromov(const fm_metric_options* opts, const fm_word* g, const fm_word* h,
                           fm_rational* out);
/* Text form: "0.5 2^-1", "[lo, hi] bounds ...", or "0". */
FM_API fm_status fm_sigma(const fm_metric_options* opts, const fm_word* g, const fm_word* h,
                          char** out);

/* -- Lipschitz classification -- */

/* key=value report; *in_per_inn is set to 1 or 0. */
FM_API fm_status fm_classify(const fm_morphism* m, int* in_per_inn, char** report);

/* -- audits -- */

typedef struct fm_audit_options {
  unsigned threads;   /* 0 means 1 */
  uint64_t seed;
  uint64_t budget;    /* search budget for non-basis metrics, 0 = default */
  int pair_scan;      /* force pair enumeration */
  uint64_t max_pairs; /* sample above this many pairs, 0 = default */
} fm_audit_options;

/* grid may be NULL (default grid). opts may be NULL. */
FM_API fm_status fm_audit_frontier(const fm_morphism* m, const fm_metric_options* metric,
                                   const fm_rational* grid, size_t grid_count,
                                   const unsigned* radii, size_t radius_count,
                                   const fm_audit_options* opts, fm_frontier** out);
FM_API fm_status fm_audit_qie(const fm_morphism* m, const fm_rational* grid, size_t grid_count,
                              const unsigned* radii, size_t radius_count,
                              const fm_audit_options* opts, fm_frontier** out);
FM_API fm_status fm_audit_metric_equiv(const fm_genset* a, const fm_genset* a2,
                                       const fm_rational* grid, size_t grid_count,
                                       const unsigned* radii, size_t radius_count,
                                       const fm_audit_options* opts, fm_frontier** out);
FM_API void fm_frontier_free(fm_frontier* f);
FM_API size_t fm_frontier_radius_count(const fm_frontier* f);
FM_API size_t fm_frontier_grid_count(const fm_frontier* f);
FM_API fm_status fm_frontier_qmin(const fm_frontier* f, size_t radius_index, size_t grid_index,
                                  fm_rational* out);
FM_API int fm_frontier_sampled(const fm_frontier* f);
FM_API fm_status fm_frontier_csv(const fm_frontier* f, char** out);
FM_API fm_status fm_frontier_text(const fm_frontier* f, char** out);

typedef struct fm_seminorm {
  int divergent;
  int stabilized;
  double value;
  int has_p_hat;
  fm_rational p_hat;
} fm_seminorm;

/* report (may be NULL) receives the structured text with evidence. */
FM_API fm_status fm_audit_seminorm(const fm_morphism* m, const fm_metric_options* metric,
                                   const fm_rational* grid, size_t grid_count,
                                   const unsigned* radii, size_t radius_count,
                                   const fm_audit_options* opts, fm_seminorm* out, char** report);
/* out->value is the larger of the two estimates; p_hat is not set. */
FM_API fm_status fm_audit_dbar(const fm_morphism* phi, const fm_morphism* psi,
                               const fm_metric_options* metric, const fm_rational* grid,
                               size_t grid_count, const unsigned* radii, size_t radius_count,
                               const fm_audit_options* opts, fm_seminorm* out, char** report);

/* -- casebook -- */

/* case_id NULL runs every case. n = 0 selects each case's default size; for
 * revcon it is the maximal word length. Returns FM_ERR_CASE_FAILED when a
 * check fails, with the report still written to *out. */
FM_API fm_status fm_casebook_run(const char* case_id, unsigned n, int extended, unsigned threads,
                                 char** out);

/* -- subgroups -- */

/* Folded graph of the subgroup generated by the words: key=value summary
 * followed by one `edge FROM LABEL TO` line per edge. */
FM_API fm_status fm_fold(const fm_word* const* words, size_t count, char** out);

#ifdef __cplusplus
}
#endif

#endif
