use std::collections::{BTreeSet, HashSet};

use super::front_matter::{detect_format, extract_front_matter, CardDocumentFormat, EMBED_KEY};
use super::raw::RawNode;
use super::validate::validate_card;
use super::{sort_issues, IssueCode, ValidationIssue};
use crate::model::{
    AttributeId, AttributeRegistry, AttributeValue, CardKind, ComplianceCard, Domain, Level,
};

/// A successfully parsed card plus any non-fatal issues.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedCard {
    pub card: ComplianceCard,
    pub warnings: Vec<ValidationIssue>,
}

pub type ParseResult = Result<ParsedCard, Vec<ValidationIssue>>;

/// Parses a card document: a plain YAML/JSON card, or Markdown with the card
/// in its front matter (optionally nested under `compliance_card`).
pub fn parse_card(text: &str, registry: &AttributeRegistry) -> ParseResult {
    let (meta, line_offset) = match detect_format(text) {
        CardDocumentFormat::PlainCard => (text, 0),
        CardDocumentFormat::FrontMatter => match extract_front_matter(text) {
            Ok((meta, _body)) => (meta, 1),
            Err(issue) => return Err(vec![issue]),
        },
    };
    let node = parse_yaml(meta, line_offset).map_err(|issue| vec![issue])?;
    let node = unwrap_embedded(node);
    parse_card_node(&node, registry)
}

/// Parses a card sent as JSON.
pub fn parse_card_json(text: &str, registry: &AttributeRegistry) -> ParseResult {
    let node: RawNode = serde_json::from_str(text).map_err(|e| {
        vec![ValidationIssue::error(
            IssueCode::SyntaxError,
            format!("@{}:{}", e.line(), e.column()),
            e.to_string(),
        )]
    })?;
    parse_card_node(&node, registry)
}

fn parse_yaml(text: &str, line_offset: usize) -> Result<RawNode, ValidationIssue> {
    serde_yaml::from_str::<RawNode>(text).map_err(|e| {
        let path = match e.location() {
            Some(loc) => format!("@{}:{}", loc.line() + line_offset, loc.column()),
            None => "@1:1".to_owned(),
        };
        ValidationIssue::error(IssueCode::SyntaxError, path, e.to_string())
    })
}

fn unwrap_embedded(node: RawNode) -> RawNode {
    if let RawNode::Map(entries) = &node {
        if let Some((_, inner @ RawNode::Map(_))) = entries.iter().find(|(k, _)| k == EMBED_KEY) {
            return inner.clone();
        }
    }
    node
}

const KNOWN_FIELDS: [&str; 5] = ["kind", "card_id", "subject_name", "schema_version", "attributes"];

/// Builds a card from an already-parsed document tree.
pub fn parse_card_node(node: &RawNode, registry: &AttributeRegistry) -> ParseResult {
    let RawNode::Map(entries) = node else {
        return Err(vec![ValidationIssue::error(
            IssueCode::SyntaxError,
            "@1:1",
            format!("a card document must be a mapping, found {}", node.type_name()),
        )]);
    };

    let mut issues = Vec::new();
    let mut seen = HashSet::new();
    for (key, _) in entries {
        if !seen.insert(key.as_str()) {
            issues.push(ValidationIssue::error(
                IssueCode::DuplicateId,
                key.clone(),
                format!("field `{key}` appears more than once"),
            ));
        }
        if !KNOWN_FIELDS.contains(&key.as_str()) {
            issues.push(ValidationIssue::warning(
                IssueCode::UnknownField,
                key.clone(),
                format!("unknown top-level field `{key}` ignored"),
            ));
        }
    }
    let field = |name: &str| entries.iter().find(|(k, _)| k == name).map(|(_, v)| v);

    let kind = match field("kind") {
        None | Some(RawNode::Null) => {
            issues.push(ValidationIssue::error(
                IssueCode::MissingKind,
                "kind",
                "card must declare `kind: project | data | model`",
            ));
            None
        }
        Some(RawNode::Str(s)) => match s.parse::<CardKind>() {
            Ok(k) => Some(k),
            Err(msg) => {
                issues.push(ValidationIssue::error(IssueCode::InvalidField, "kind", msg));
                None
            }
        },
        Some(other) => {
            issues.push(ValidationIssue::error(
                IssueCode::InvalidField,
                "kind",
                format!("`kind` must be a string, found {}", other.type_name()),
            ));
            None
        }
    };

    let mut text_field = |name: &str, required: bool| -> String {
        match field(name) {
            None | Some(RawNode::Null) => {
                if required {
                    issues.push(ValidationIssue::error(
                        IssueCode::MissingField,
                        name,
                        format!("required field `{name}` is missing"),
                    ));
                }
                String::new()
            }
            Some(RawNode::Str(s)) => s.clone(),
            Some(RawNode::Int(i)) => i.to_string(),
            Some(RawNode::UInt(u)) => u.to_string(),
            Some(RawNode::Float(f)) => f.to_string(),
            Some(other) => {
                issues.push(ValidationIssue::error(
                    IssueCode::InvalidField,
                    name,
                    format!("`{name}` must be a string, found {}", other.type_name()),
                ));
                String::new()
            }
        }
    };
    let card_id = text_field("card_id", true);
    let subject_name = text_field("subject_name", false);
    let schema_version = text_field("schema_version", true);

    let mut card = ComplianceCard::new(kind.unwrap_or(CardKind::Project), card_id, schema_version)
        .with_subject(subject_name);

    match field("attributes") {
        None | Some(RawNode::Null) => {}
        Some(RawNode::Map(attrs)) => {
            let mut seen = HashSet::new();
            for (key, raw) in attrs {
                if !seen.insert(key.as_str()) {
                    issues.push(ValidationIssue::error(
                        IssueCode::DuplicateId,
                        key.clone(),
                        format!("attribute `{key}` appears more than once"),
                    ));
                    continue;
                }
                let def = registry.lookup(key);
                let applicable = match (def, kind) {
                    (Some(def), Some(kind)) => def.applies_to(kind),
                    (Some(_), None) => true,
                    (None, _) => false,
                };
                let (Some(def), true) = (def, applicable) else {
                    // Reported by validate_card from the unrecognized map.
                    card.insert_unrecognized(key.clone(), raw.to_json());
                    continue;
                };
                match value_from_raw(&def.domain, raw) {
                    Ok(value) => {
                        card.set(def.id.clone(), value);
                    }
                    Err(msg) => issues.push(ValidationIssue::error(IssueCode::DomainViolation, key.clone(), msg)),
                }
            }
        }
        Some(other) => issues.push(ValidationIssue::error(
            IssueCode::InvalidField,
            "attributes",
            format!("`attributes` must be a mapping, found {}", other.type_name()),
        )),
    }

    if kind.is_some() {
        issues.extend(validate_card(&card, registry));
    } else {
        issues.extend(
            validate_card(&card, registry)
                .into_iter()
                .filter(|i| i.code != IssueCode::WrongKind),
        );
    }
    sort_issues(&mut issues);
    if issues.iter().any(ValidationIssue::is_error) {
        Err(issues)
    } else {
        Ok(ParsedCard { card, warnings: issues })
    }
}

/// Converts a document value into the attribute's domain.
pub fn value_from_raw(domain: &Domain, raw: &RawNode) -> Result<AttributeValue, String> {
    let value = match (domain, raw) {
        (_, RawNode::Null) => AttributeValue::Unanswered,
        (Domain::Flag, RawNode::Bool(b)) => AttributeValue::Flag(*b),
        (Domain::Level, RawNode::Int(i)) => AttributeValue::Level(
            Level::new(*i).ok_or_else(|| format!("level {i} is outside 0..={}", Level::MAX))?,
        ),
        (Domain::Level, RawNode::UInt(u)) => {
            return Err(format!("level {u} is outside 0..={}", Level::MAX))
        }
        (Domain::Choice { .. }, RawNode::Str(s)) => AttributeValue::Choice(s.clone()),
        (Domain::TagSet { .. }, RawNode::Seq(items)) => {
            let mut tags = BTreeSet::new();
            for item in items {
                match item {
                    RawNode::Str(s) => {
                        tags.insert(s.clone());
                    }
                    other => return Err(format!("tag list entries must be strings, found {}", other.type_name())),
                }
            }
            AttributeValue::TagSet(tags)
        }
        (domain, raw) => {
            return Err(format!("expected a {} value, found {}", domain_expectation(domain), raw.type_name()))
        }
    };
    if !domain.admits(&value) {
        let vocab = domain.vocabulary().unwrap_or_default().join(", ");
        return Err(format!("`{value}` is not in the vocabulary [{vocab}]"));
    }
    Ok(value)
}

fn domain_expectation(domain: &Domain) -> &'static str {
    match domain {
        Domain::Flag => "boolean",
        Domain::Level => "level (integer 0..=4)",
        Domain::Choice { .. } => "choice (token string)",
        Domain::TagSet { .. } => "tag list",
    }
}

/// Parses a command-line style value (`true`, `3`, `token`, `a,b`, `null`)
/// into the domain of `attribute`.
pub fn parse_value_text(
    registry: &AttributeRegistry,
    attribute: &str,
    text: &str,
) -> Result<(AttributeId, AttributeValue), String> {
    let def = registry
        .lookup(attribute)
        .ok_or_else(|| format!("unknown attribute `{attribute}`"))?;
    let text = text.trim();
    let raw = if matches!(text, "null" | "unanswered" | "~") {
        RawNode::Null
    } else {
        match &def.domain {
            Domain::Flag => match text {
                "true" => RawNode::Bool(true),
                "false" => RawNode::Bool(false),
                _ => RawNode::Str(text.to_owned()),
            },
            Domain::Level => text.parse::<i64>().map_or_else(|_| RawNode::Str(text.to_owned()), RawNode::Int),
            Domain::Choice { .. } => RawNode::Str(text.to_owned()),
            Domain::TagSet { .. } => RawNode::Seq(
                text.split(',')
                    .map(str::trim)
                    .filter(|t| !t.is_empty())
                    .map(|t| RawNode::Str(t.to_owned()))
                    .collect(),
            ),
        }
    };
    value_from_raw(&def.domain, &raw)
        .map(|v| (def.id.clone(), v))
        .map_err(|e| format!("`{attribute}`: {e}"))
}
