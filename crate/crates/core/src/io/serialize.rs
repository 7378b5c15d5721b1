//! Canonical card serialization.
//!
//! Layout (every line terminated by `\n`):
//!
//! ```text
//! kind: <project|data|model>
//! card_id: "<json-style quoted>"
//! subject_name: "<json-style quoted>"
//! schema_version: "<json-style quoted>"
//! attributes:
//!   <key>: <flow value>
//! ```
//!
//! Attribute keys (registered and unrecognized alike) are sorted by byte
//! order, unanswered attributes are omitted, and an empty map is written as
//! `attributes: {}`. Values use flow syntax: `true`, `3`, `"token"`,
//! `["a", "b"]`; unrecognized values are emitted as flow YAML with sorted keys.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::model::{AttributeValue, ComplianceCard};

pub fn serialize_card(card: &ComplianceCard) -> String {
    let mut out = String::with_capacity(256 + card.answered_count() * 48);
    let _ = writeln!(out, "kind: {}", card.kind);
    let _ = writeln!(out, "card_id: {}", quote(&card.card_id));
    let _ = writeln!(out, "subject_name: {}", quote(&card.subject_name));
    let _ = writeln!(out, "schema_version: {}", quote(&card.schema_version));

    let mut entries: BTreeMap<&str, String> = BTreeMap::new();
    for (id, value) in card.values() {
        entries.insert(id.as_str(), value_text(value));
    }
    for (key, value) in card.unrecognized() {
        entries.entry(key.as_str()).or_insert_with(|| json_flow(value));
    }
    if entries.is_empty() {
        out.push_str("attributes: {}\n");
    } else {
        out.push_str("attributes:\n");
        for (key, value) in entries {
            let _ = writeln!(out, "  {}: {value}", key_text(key));
        }
    }
    out
}

fn value_text(value: &AttributeValue) -> String {
    match value {
        AttributeValue::Flag(b) => b.to_string(),
        AttributeValue::Level(l) => l.get().to_string(),
        AttributeValue::Choice(t) => quote(t),
        AttributeValue::TagSet(tags) => {
            let items: Vec<String> = tags.iter().map(|t| quote(t)).collect();
            format!("[{}]", items.join(", "))
        }
        AttributeValue::Unanswered => "null".to_owned(),
    }
}

fn json_flow(value: &serde_json::Value) -> String {
    use serde_json::Value;
    match value {
        Value::Null => "null".to_owned(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => n.to_string(),
        Value::String(s) => quote(s),
        Value::Array(items) => {
            let items: Vec<String> = items.iter().map(json_flow).collect();
            format!("[{}]", items.join(", "))
        }
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            let items: Vec<String> = keys
                .into_iter()
                .map(|k| format!("{}: {}", quote(k), json_flow(&map[k])))
                .collect();
            format!("{{{}}}", items.join(", "))
        }
    }
}

const PLAIN_KEY_RESERVED: [&str; 9] = ["true", "false", "null", "yes", "no", "on", "off", "y", "n"];

fn key_text(key: &str) -> String {
    let plain = key.starts_with(|c: char| c.is_ascii_lowercase())
        && key
            .bytes()
            .all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'_' || b == b'.')
        && !key.ends_with('.')
        && !PLAIN_KEY_RESERVED.contains(&key);
    if plain {
        key.to_owned()
    } else {
        quote(key)
    }
}

/// Double-quoted scalar valid in both YAML and JSON.
fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c if c.is_control() || matches!(c, '\u{feff}' | '\u{2028}' | '\u{2029}' | '\u{fffe}' | '\u{ffff}') => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse_card;
    use crate::model::{baseline_registry, CardKind};

    #[test]
    fn canonical_layout() {
        let card = ComplianceCard::new(CardKind::Data, "ds-1", "1.0.0")
            .with_subject("Clinical \"notes\"")
            .with("intended_purpose", AttributeValue::tags(["medical_triage", "education"]))
            .with("data_governance.bias_examined", AttributeValue::Flag(true))
            .with("data_governance.data_quality_level", AttributeValue::level(3));
        assert_eq!(
            serialize_card(&card),
            "kind: data\n\
             card_id: \"ds-1\"\n\
             subject_name: \"Clinical \\\"notes\\\"\"\n\
             schema_version: \"1.0.0\"\n\
             attributes:\n\
             \x20 data_governance.bias_examined: true\n\
             \x20 data_governance.data_quality_level: 3\n\
             \x20 intended_purpose: [\"education\", \"medical_triage\"]\n"
        );
    }

    #[test]
    fn empty_attributes() {
        let card = ComplianceCard::new(CardKind::Project, "p", "1.0.0");
        assert!(serialize_card(&card).ends_with("attributes: {}\n"));
    }

    #[test]
    fn construction_order_does_not_matter() {
        let a = ComplianceCard::new(CardKind::Project, "p", "1.0.0")
            .with("is_ai_system", AttributeValue::Flag(true))
            .with("operator_role", AttributeValue::choice("provider"));
        let b = ComplianceCard::new(CardKind::Project, "p", "1.0.0")
            .with("operator_role", AttributeValue::choice("provider"))
            .with("exception", AttributeValue::Unanswered)
            .with("is_ai_system", AttributeValue::Flag(true));
        assert_eq!(serialize_card(&a), serialize_card(&b));
    }

    #[test]
    fn unrecognized_attributes_are_reemitted() {
        let reg = baseline_registry();
        let doc = "kind: model\ncard_id: m\nschema_version: 1.0.0\nattributes:\n  zz.future: {b: [1, \"x\"], a: null}\n  \"Weird Key\": 1.5\n  human_oversight.interpretability_support: true\n";
        let parsed = parse_card(doc, &reg).unwrap();
        let text = serialize_card(&parsed.card);
        assert!(text.contains("  zz.future: {\"a\": null, \"b\": [1, \"x\"]}\n"), "{text}");
        assert!(text.contains("  \"Weird Key\": 1.5\n"), "{text}");
        let again = parse_card(&text, &reg).unwrap();
        assert_eq!(again.card, parsed.card);
        assert_eq!(serialize_card(&again.card), text);
    }

    #[test]
    fn awkward_strings_round_trip() {
        let reg = baseline_registry();
        for name in ["", "tab\there", "nul\u{0}", "del\u{7f}", "c1\u{85}\u{9f}", "bom\u{feff}", "emoji 🦀", "'single'", "back\\slash", "- leading dash", "#hash", "line\u{2028}sep"] {
            let card = ComplianceCard::new(CardKind::Data, name.to_owned() + "id", "1.0.0").with_subject(name);
            let text = serialize_card(&card);
            let parsed = parse_card(&text, &reg).unwrap_or_else(|e| panic!("{name:?}: {e:?}\n{text}"));
            assert_eq!(parsed.card, card, "{name:?}");
        }
    }
}
