#ifndef NEXACT_H
#define NEXACT_H

/* C interface to the exact-structure calculator.  A session holds option
 * values, input texts, and the last report; every entry point returns a
 * status and never throws across the boundary.
 *
 * Statuses mirror the tool's exit codes: 0 success, 1 rejected input,
 * 2 a configured cap refused a partial answer, 3 a violated internal
 * invariant (a bug, not an input problem). */

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nx_status {
    NX_OK = 0,
    NX_ERR_INPUT = 1,
    NX_ERR_CAPPED = 2,
    NX_ERR_INTERNAL = 3
} nx_status;

typedef struct nx_session nx_session;

const char* nx_version(void);

nx_session* nx_session_new(void);
void nx_session_free(nx_session* s);

/* Options, all passed as text:
 *   n              positive integer; 0 = the algebra file's default
 *   dim-bound      positive integer; 0 = twice the algebra dimension
 *   mult-bound     summands per side in extension-closure checks (default 2)
 *   iso-cap        exhaustive isomorphism/idempotent scan budget
 *   lattice-cap    submodule lattice size budget
 *   class-cap      extension class budget per Ext group
 *   subset-cap     subset budget for structure enumeration
 *   seed           seed for the randomized fallbacks past the scan caps
 *   format         text | structured
 *   algebra-path / modules-path / structure-path   echoed into reports
 * Unknown keys and unparsable values return NX_ERR_INPUT. */
nx_status nx_set_option(nx_session* s, const char* key, const char* value);

/* Input texts in the documented file formats (see the README). */
nx_status nx_set_algebra(nx_session* s, const char* text);
nx_status nx_set_modules(nx_session* s, const char* text);
nx_status nx_set_structure(nx_session* s, const char* text);

/* Runs one of: exn, maxn, structures, check, tr, resolve.  On NX_OK the
 * report is available from nx_report; otherwise nx_last_error explains. */
nx_status nx_run(nx_session* s, const char* command);

/* Owned by the session, valid until its next call; never NULL. */
const char* nx_report(const nx_session* s);
const char* nx_last_error(const nx_session* s);

#ifdef __cplusplus
}
#endif

#endif
