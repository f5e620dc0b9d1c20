#ifndef HALLBASE_H
#define HALLBASE_H

/* C interface to the hallbase library.
 *
 * All work goes through JSON request documents. A request names a command
 * ("field", "group-order", "epi", "hall-find", "witness-verify", "base",
 * "reg", "theorem-check") plus its parameters; the response embeds the
 * normalized request, a status, and the result payload, serialized in a
 * canonical form so stored documents can be replayed byte for byte.
 *
 * Entry points are thread safe: the library keeps no mutable global state
 * apart from an internal field-table cache guarded by a lock.
 */

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes, also used as process exit codes by the bundled CLI. */
#define HB_OK 0    /* command reached its verdict */
#define HB_FAIL 1  /* a verification or search did not reach its goal */
#define HB_ERROR 2 /* bad usage, malformed input, or exhausted budget */

/* Runs one JSON request. On return *response_json holds a heap-allocated,
 * canonically formatted JSON response document (always non-null, even on
 * errors); release it with hb_string_free. The return value matches the
 * document's status field. response_json may be null if only the status is
 * wanted. */
int hb_run_json(const char* request_json, char** response_json);

/* Re-runs the request embedded in a stored response document and compares
 * the canonical bytes. Returns HB_OK when the fresh response is identical,
 * HB_FAIL on a mismatch, HB_ERROR when the document is malformed. */
int hb_replay_json(const char* document_json, char** response_json);

/* Frees a string returned by this library. Safe on null. */
void hb_string_free(char* s);

/* Message describing the most recent failure on the calling thread, or an
 * empty string. The pointer stays valid until the next call on the same
 * thread. */
const char* hb_last_error(void);

/* Library version as "major.minor.patch". */
const char* hb_version(void);

#ifdef __cplusplus
}
#endif

#endif /* HALLBASE_H */
