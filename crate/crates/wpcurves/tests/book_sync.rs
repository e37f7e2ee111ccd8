//! Keeps the guide honest: every Rust code block in `book/src` must appear
//! verbatim as a doc-test in this crate's sources, so the snippets shown in
//! the book are exactly the ones `cargo test --doc` executes.

use std::fs;
use std::path::{Path, PathBuf};

fn book_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../book/src")
}

fn src_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("src")
}

/// Fenced blocks tagged exactly `rust` (plain ``` blocks are ascii diagrams).
fn rust_blocks(markdown: &str) -> Vec<String> {
    let mut blocks = Vec::new();
    let mut current: Option<Vec<&str>> = None;
    for line in markdown.lines() {
        match &mut current {
            None if line.trim() == "```rust" => current = Some(Vec::new()),
            None => {}
            Some(buf) => {
                if line.trim() == "```" {
                    blocks.push(buf.join("\n"));
                    current = None;
                } else {
                    buf.push(line);
                }
            }
        }
    }
    blocks
}

/// The same block as it would appear inside a `//!` module doc comment.
fn as_doc_comment(block: &str) -> String {
    block
        .lines()
        .map(|l| if l.is_empty() { "//!".to_string() } else { format!("//! {l}") })
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn every_book_snippet_is_a_doctest() {
    let sources: Vec<String> = fs::read_dir(src_dir())
        .unwrap()
        .filter_map(|e| {
            let p = e.unwrap().path();
            (p.extension().map(|x| x == "rs") == Some(true)).then(|| fs::read_to_string(p).unwrap())
        })
        .collect();
    assert!(!sources.is_empty());

    let mut checked = 0;
    for entry in fs::read_dir(book_dir()).expect("book/src exists") {
        let path = entry.unwrap().path();
        if path.extension().map(|x| x == "md") != Some(true) {
            continue;
        }
        let text = fs::read_to_string(&path).unwrap();
        for block in rust_blocks(&text) {
            let doc = as_doc_comment(&block);
            assert!(
                sources.iter().any(|s| s.contains(&doc)),
                "snippet in {} is not a doc-test of any src module:\n{}",
                path.display(),
                block
            );
            checked += 1;
        }
    }
    assert!(checked >= 8, "expected the book to contain runnable snippets, found {checked}");
}
