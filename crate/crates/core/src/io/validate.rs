use super::{sort_issues, IssueCode, ValidationIssue};
use crate::model::{AttributeId, AttributeRegistry, ComplianceCard};

/// Checks a card against the registry. Returns issues ordered by path; an
/// empty list means the card satisfies every card invariant.
pub fn validate_card(card: &ComplianceCard, registry: &AttributeRegistry) -> Vec<ValidationIssue> {
    let mut issues = Vec::new();

    if card.card_id.is_empty() {
        issues.push(ValidationIssue::error(
            IssueCode::MissingField,
            "card_id",
            "required field `card_id` is missing or empty",
        ));
    }
    check_schema_version(&card.schema_version, registry, &mut issues);

    for (id, value) in card.values() {
        let path = id.as_str();
        let Some(def) = registry.lookup(path) else {
            issues.push(unknown_attribute(path));
            continue;
        };
        if !def.applies_to(card.kind) {
            issues.push(wrong_kind(path, card));
        }
        if !def.domain.admits(value) {
            issues.push(ValidationIssue::error(
                IssueCode::DomainViolation,
                path,
                format!("`{value}` is outside the {} domain", def.domain.name()),
            ));
        }
    }
    for key in card.unrecognized().keys() {
        match registry.lookup(key) {
            Some(def) if def.applies_to(card.kind) => issues.push(ValidationIssue::warning(
                IssueCode::UnknownAttribute,
                key.clone(),
                format!("`{key}` is held as unrecognized although the registry defines it"),
            )),
            Some(_) => issues.push(wrong_kind(key, card)),
            None => issues.push(unknown_attribute(key)),
        }
    }
    sort_issues(&mut issues);
    issues
}

fn unknown_attribute(path: &str) -> ValidationIssue {
    let hint = if AttributeId::is_valid(path) { "" } else { " (not a valid attribute id)" };
    ValidationIssue::warning(
        IssueCode::UnknownAttribute,
        path,
        format!("attribute `{path}` is not defined by the registry{hint}; preserved as-is"),
    )
}

fn wrong_kind(path: &str, card: &ComplianceCard) -> ValidationIssue {
    ValidationIssue::warning(
        IssueCode::WrongKind,
        path,
        format!("attribute `{path}` does not apply to {} cards; preserved as-is", card.kind),
    )
}

fn check_schema_version(version: &str, registry: &AttributeRegistry, issues: &mut Vec<ValidationIssue>) {
    if version.is_empty() {
        issues.push(ValidationIssue::error(
            IssueCode::MissingField,
            "schema_version",
            "required field `schema_version` is missing or empty",
        ));
        return;
    }
    let Ok(parsed) = semver::Version::parse(version) else {
        issues.push(ValidationIssue::error(
            IssueCode::InvalidField,
            "schema_version",
            format!("`{version}` is not a semantic version (MAJOR.MINOR.PATCH)"),
        ));
        return;
    };
    let supported = registry.schema_version();
    if parsed.major > supported.major {
        issues.push(ValidationIssue::error(
            IssueCode::IncompatibleSchemaVersion,
            "schema_version",
            format!("card schema {parsed} is newer than the supported {supported}"),
        ));
    } else if parsed.major < supported.major {
        issues.push(ValidationIssue::warning(
            IssueCode::IncompatibleSchemaVersion,
            "schema_version",
            format!("card schema {parsed} predates the supported {supported}"),
        ));
    }
}
