/* C interface to the einstein-tubes library.
 *
 * A session holds one run configuration.  Configure it with the setters,
 * then call et_run; the exit code follows the CLI contract (0 success,
 * 1 verification failure, 2 spec/configuration error, 3 classification
 * failure, 4 synthesis failure).  All functions are thread-compatible:
 * distinct sessions may be used concurrently.
 */
#ifndef EINSTEIN_TUBES_H
#define EINSTEIN_TUBES_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum et_status {
  ET_OK = 0,
  ET_INVALID_ARGUMENT = 1, /* null pointer or malformed value */
  ET_BAD_KEY = 2,          /* unknown configuration key */
  ET_RUNTIME_ERROR = 3     /* unexpected internal failure; see et_last_error */
} et_status;

typedef struct et_session et_session;

et_status et_session_create(et_session** out);
void et_session_destroy(et_session* s);

/* String keys: "command" (analyze|tube|verify|gallery), "spec" (curve spec
 * JSON path), "out" (output directory), "component" (pos|neg|both), "kind"
 * (exceptional|left|right), "suite" (verification suite name). */
et_status et_config_set_string(et_session* s, const char* key,
                               const char* value);

/* Integer keys: "seed", "grid_t", "grid_theta". */
et_status et_config_set_int(et_session* s, const char* key, long long value);

/* Named tolerance override (value must be finite). */
et_status et_config_set_tolerance(et_session* s, const char* name,
                                  double value);

/* Runs the configured command.  *exit_code receives the CLI exit code. */
et_status et_run(et_session* s, int* exit_code);

/* Message of the last failed call on this session (owned by the session;
 * valid until the next call).  Never null. */
const char* et_last_error(const et_session* s);

/* Library version as a freshly allocated string; release with
 * et_string_free. */
char* et_version(void);
void et_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* EINSTEIN_TUBES_H */
