//! Leading `---` fenced metadata blocks in Markdown documents.

use super::{IssueCode, ValidationIssue};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CardDocumentFormat {
    /// A bare YAML (or JSON) card document.
    PlainCard,
    /// Markdown whose leading fenced block holds the card.
    FrontMatter,
}

/// Top-level front-matter key under which an embedding document (such as a
/// hub model card) may nest the Compliance Card.
pub const EMBED_KEY: &str = "compliance_card";

fn is_fence(line: &str) -> bool {
    let line = line.strip_suffix('\n').unwrap_or(line);
    let line = line.strip_suffix('\r').unwrap_or(line);
    line.trim_end_matches([' ', '\t']) == "---"
}

fn first_line(text: &str) -> &str {
    match text.find('\n') {
        Some(i) => &text[..=i],
        None => text,
    }
}

pub fn detect_format(text: &str) -> CardDocumentFormat {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    if is_fence(first_line(text)) {
        CardDocumentFormat::FrontMatter
    } else {
        CardDocumentFormat::PlainCard
    }
}

/// Splits a document into `(metadata, body)`.
///
/// Without an opening fence the metadata is empty and the body is the whole
/// text. The metadata excludes the newline that precedes the closing fence;
/// the body starts right after the closing fence line and is returned
/// byte-for-byte.
pub fn extract_front_matter(text: &str) -> Result<(&str, &str), ValidationIssue> {
    let start = if text.starts_with('\u{feff}') { '\u{feff}'.len_utf8() } else { 0 };
    let rest = &text[start..];
    let open = first_line(rest);
    if !is_fence(open) {
        return Ok(("", text));
    }
    let meta_start = start + open.len();
    if !open.ends_with('\n') {
        return Err(unterminated());
    }
    let mut pos = meta_start;
    while pos < text.len() {
        let line = first_line(&text[pos..]);
        if is_fence(line) {
            let meta = &text[meta_start..pos];
            let meta = meta.strip_suffix('\n').unwrap_or(meta);
            let meta = meta.strip_suffix('\r').unwrap_or(meta);
            return Ok((meta, &text[pos + line.len()..]));
        }
        pos += line.len();
    }
    Err(unterminated())
}

fn unterminated() -> ValidationIssue {
    ValidationIssue::error(
        IssueCode::UnterminatedFrontMatter,
        "@1:1",
        "front matter opened with `---` but never closed",
    )
}
