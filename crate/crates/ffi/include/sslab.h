#ifndef SSLAB_H
#define SSLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SslabFormat {
  SSLAB_FORMAT_TEXT = 0,
  SSLAB_FORMAT_JSON = 1,
  SSLAB_FORMAT_DOT = 2,
} SslabFormat;

typedef enum SslabStatus {
  SSLAB_STATUS_OK = 0,
  // A required pointer argument was NULL.
  SSLAB_STATUS_NULL_ARGUMENT = 1,
  // Input text was not valid UTF-8.
  SSLAB_STATUS_INVALID_UTF8 = 2,
  // The document did not parse; the message carries line and column.
  SSLAB_STATUS_PARSE_ERROR = 3,
  // At least one query failed; the report is still produced.
  SSLAB_STATUS_QUERY_FAILED = 4,
  // The report cannot be rendered in the requested format.
  SSLAB_STATUS_RENDER_ERROR = 5,
  // An internal error; the library state is unaffected.
  SSLAB_STATUS_PANIC = 6,
} SslabStatus;

// A parsed document.
typedef struct SslabDocument SslabDocument;

// The answers to a document's queries.
typedef struct SslabReport SslabReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses a NUL-terminated UTF-8 document. On success `*out` receives a
// handle to release with `sslab_document_free`; otherwise `*out` is NULL.
//
// # Safety
// `text` must be NULL or a valid NUL-terminated string; `out` must be NULL
// or valid for writes.
enum SslabStatus sslab_document_parse(const char *text, struct SslabDocument **out);

// Number of queries in a document (0 for NULL).
//
// # Safety
// `doc` must be NULL or a live handle from `sslab_document_parse`.
size_t sslab_document_query_count(const struct SslabDocument *doc);

// Executes every query. `*out` always receives a report when `doc` is
// valid; the status is `SSLAB_STATUS_QUERY_FAILED` if any query failed.
//
// # Safety
// `doc` must be NULL or a live document handle; `out` must be NULL or valid
// for writes.
enum SslabStatus sslab_document_execute(const struct SslabDocument *doc, struct SslabReport **out);

// Number of failed queries in a report (0 for NULL).
//
// # Safety
// `report` must be NULL or a live report handle.
size_t sslab_report_failures(const struct SslabReport *report);

// Renders a report. On success `*out` receives a string to release with
// `sslab_string_free`.
//
// # Safety
// `report` must be NULL or a live report handle; `out` must be NULL or
// valid for writes.
enum SslabStatus sslab_report_render(const struct SslabReport *report,
                                     enum SslabFormat format,
                                     char **out);

// Releases a document. NULL is ignored.
//
// # Safety
// `doc` must be NULL or a handle from `sslab_document_parse` not yet freed.
void sslab_document_free(struct SslabDocument *doc);

// Releases a report. NULL is ignored.
//
// # Safety
// `report` must be NULL or a handle from `sslab_document_execute` not yet freed.
void sslab_report_free(struct SslabReport *report);

// Releases a string returned by this library. NULL is ignored.
//
// # Safety
// `s` must be NULL or a string from this library not yet freed.
void sslab_string_free(char *s);

// The message of the last failed call on this thread, or NULL. The
// pointer stays valid until the next call into the library on this thread.
const char *sslab_last_error(void);

// The library version as a static string.
const char *sslab_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SSLAB_H */
