#ifndef HURWITZ_H
#define HURWITZ_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define HQ_API __attribute__((visibility("default")))
#else
#define HQ_API
#endif

typedef enum hq_status {
    HQ_OK = 0,
    HQ_INVALID_ARGUMENT = 1,
    HQ_OVERFLOW = 2,
    HQ_DIVISION_BY_ZERO = 3,
    HQ_BOUND_EXCEEDED = 4,
    HQ_INTERNAL = 5,
    HQ_IO = 6,
    HQ_PROPERTY_FAILURE = 7
} hq_status;

/* Hurwitz integer as doubled coordinates (a2, b2, c2, d2), all even or all odd. */
typedef struct hq_hurwitz {
    int64_t a2, b2, c2, d2;
} hq_hurwitz;

typedef struct hq_experiment hq_experiment;

/* Message for the last failing call on this thread; empty after success. */
HQ_API const char* hq_last_error(void);
HQ_API const char* hq_status_name(hq_status s);
HQ_API const char* hq_version(void);

HQ_API hq_status hq_hurwitz_make(int64_t a2, int64_t b2, int64_t c2, int64_t d2, hq_hurwitz* out);
HQ_API hq_status hq_hurwitz_parse(const char* text, hq_hurwitz* out);
/* Writes a NUL-terminated rendering; *needed receives the full length including NUL. */
HQ_API hq_status hq_hurwitz_format(hq_hurwitz x, char* buf, size_t cap, size_t* needed);
HQ_API hq_status hq_hurwitz_mul(hq_hurwitz a, hq_hurwitz b, hq_hurwitz* out);
HQ_API hq_status hq_hurwitz_norm(hq_hurwitz a, int64_t* out);
/* p = s q + r with |r| < |q|. */
HQ_API hq_status hq_hurwitz_div_rem_right(hq_hurwitz p, hq_hurwitz q, hq_hurwitz* s, hq_hurwitz* r);
HQ_API hq_status hq_hurwitz_div_rem_left(hq_hurwitz p, hq_hurwitz q, hq_hurwitz* s, hq_hurwitz* r);
HQ_API hq_status hq_hurwitz_gcd_right(hq_hurwitz a, hq_hurwitz b, hq_hurwitz* out);
HQ_API hq_status hq_count_resonant(hq_hurwitz q, int64_t* out);

HQ_API size_t hq_command_count(void);
HQ_API const char* hq_command_name(size_t index);
HQ_API const char* hq_command_help(size_t index);
/* JSON array of {name, type, default, help} for a command, NULL on unknown command. */
HQ_API const char* hq_command_schema(const char* command);

HQ_API hq_status hq_experiment_create(const char* command, hq_experiment** out);
HQ_API void hq_experiment_free(hq_experiment* e);
/* Reserved keys: seed, out, format, workers. Anything else is a command parameter. */
HQ_API hq_status hq_experiment_set(hq_experiment* e, const char* key, const char* value);
HQ_API hq_status hq_experiment_load_config(hq_experiment* e, const char* path);
/* HQ_PROPERTY_FAILURE when the run completed but reported failures. */
HQ_API hq_status hq_experiment_run(hq_experiment* e);
/* JSON: {"exit_code", "files", "summary", "failures"}; valid until the next run or free. */
HQ_API const char* hq_experiment_result(const hq_experiment* e);

#ifdef __cplusplus
}
#endif

#endif
