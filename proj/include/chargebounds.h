/* C interface to the charge-bounds library.
 *
 * Certified upper and lower bounds on the probability of an integer set
 * under finitely additive charges uniform on prime residue classes. All
 * values cross the boundary as exact "num/den" strings.
 *
 * Every function returns a cb_status; on any failure cb_last_error()
 * describes what went wrong. Reports are opaque handles released with
 * cb_report_free(); strings returned by cb_* calls are released with
 * cb_string_free().
 */
#ifndef CHARGEBOUNDS_H
#define CHARGEBOUNDS_H

#ifdef __cplusplus
extern "C" {
#endif

typedef struct cb_report cb_report;

typedef enum cb_status {
    CB_OK = 0,
    CB_ERROR_PARSE = 2,    /* malformed expression or configuration */
    CB_ERROR_RESOURCE = 3, /* a configured cap was exceeded */
    CB_ERROR_INVALID = 4,  /* invalid arguments to an API call */
    CB_ERROR_INTERNAL = 5
} cb_status;

typedef enum cb_format {
    CB_FORMAT_TEXT = 0,
    CB_FORMAT_JSON = 1,
    CB_FORMAT_CSV = 2
} cb_format;

typedef struct cb_config {
    const char* expression; /* required, UTF-8, grammar of the library */
    int max_level;          /* levels 1..max_level; 0 means the default 4 */
    const char* family;     /* NULL or "pr" or comma-separated moduli */
    int emit_certificates;  /* include LP certificates when rendering */
    int emit_witnesses;     /* include path multisets when rendering */
    int approx;             /* add non-authoritative decimal columns */
    long lp_row_cap;        /* 0 means the default 30030 */
    int level_cap;          /* 0 means the default 8 */
} cb_config;

/* Runs a bounds report. On CB_OK, *out owns the result. */
cb_status cb_report_run(const cb_config* config, cb_report** out);

/* Renders a report; the returned string is owned by the caller. */
cb_status cb_report_render(const cb_report* report, cb_format format, char** out);

/* Number of level rows in the report. */
int cb_report_level_count(const cb_report* report);

/* Level number (1-based truncation index) of a row. */
int cb_report_level(const cb_report* report, int index);

/* Primorial of a row's level. */
long cb_report_primorial(const cb_report* report, int index);

/* One bound of a row as "num/den"; field is one of "upper_sup",
 * "lower_sup", "lower_inf", "upper_inf". Returns CB_ERROR_INVALID for an
 * unknown field or index; *out is NULL when the bound is not computed at
 * that level (witness-only mode or non-embedding family). */
cb_status cb_report_value(const cb_report* report, int index, const char* field, char** out);

/* Thread-local message for the most recent failure in this thread. */
const char* cb_last_error(void);

void cb_report_free(cb_report* report);
void cb_string_free(char* str);

const char* cb_version(void);

#ifdef __cplusplus
}
#endif

#endif /* CHARGEBOUNDS_H */
