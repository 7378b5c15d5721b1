//! Reading, validating and writing Compliance Card documents.

mod front_matter;
mod issue;
mod load;
mod parse;
mod raw;
mod serialize;
mod validate;

pub use front_matter::{detect_format, extract_front_matter, CardDocumentFormat, EMBED_KEY};
pub use issue::{has_errors, IssueCode, Severity, ValidationIssue};
pub(crate) use issue::sort_issues;
pub use load::{assemble_card_set, load_card_set, LoadError, LoadedCardSet, SlotInput, SourcedIssue};
pub use parse::{parse_card, parse_card_json, parse_card_node, parse_value_text, value_from_raw, ParseResult, ParsedCard};
pub use raw::RawNode;
pub use serialize::serialize_card;
pub use validate::validate_card;
