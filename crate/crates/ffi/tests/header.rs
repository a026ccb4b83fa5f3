//! The generated header declares the whole API and compiles as C99.

use std::path::PathBuf;
use std::process::Command;

const HEADER: &str = include_str!("../include/sslab.h");

const CLIENT: &str = r#"
#include "sslab.h"

int run(const char *source) {
    SslabDocument *doc = NULL;
    SslabReport *report = NULL;
    char *text = NULL;
    if (sslab_document_parse(source, &doc) != SSLAB_STATUS_OK) {
        return sslab_last_error() != NULL;
    }
    SslabStatus status = sslab_document_execute(doc, &report);
    if (status == SSLAB_STATUS_OK || status == SSLAB_STATUS_QUERY_FAILED) {
        sslab_report_render(report, SSLAB_FORMAT_JSON, &text);
    }
    sslab_string_free(text);
    sslab_report_free(report);
    sslab_document_free(doc);
    return (int)sslab_document_query_count(NULL) + (int)sslab_report_failures(NULL);
}
"#;

#[test]
fn header_declares_every_entry_point() {
    for name in [
        "sslab_document_parse",
        "sslab_document_query_count",
        "sslab_document_execute",
        "sslab_document_free",
        "sslab_report_failures",
        "sslab_report_render",
        "sslab_report_free",
        "sslab_string_free",
        "sslab_last_error",
        "sslab_version",
        "typedef struct SslabDocument SslabDocument;",
        "typedef struct SslabReport SslabReport;",
        "SSLAB_STATUS_PARSE_ERROR = 3",
        "SSLAB_FORMAT_DOT = 2",
    ] {
        assert!(HEADER.contains(name), "header lacks {name}");
    }
}

#[test]
fn header_compiles_as_c99() {
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let dir = std::env::temp_dir().join(format!("sslab-header-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let client = dir.join("client.c");
    std::fs::write(&client, CLIENT).unwrap();
    let Ok(out) = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Wextra", "-Werror", "-pedantic", "-fsyntax-only", "-I"])
        .arg(&include)
        .arg(&client)
        .output()
    else {
        eprintln!("no C compiler on PATH; skipping");
        return;
    };
    std::fs::remove_dir_all(&dir).ok();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
