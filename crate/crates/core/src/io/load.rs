use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};

use super::parse::{parse_card, ParseResult};
use super::{IssueCode, ValidationIssue};
use crate::exec::ExecutionMode;
use crate::model::{AttributeRegistry, CardKind, CardSet, ComplianceCard};

/// An issue tagged with the document it came from (a file path, or a
/// request location such as `data[1]`).
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct SourcedIssue {
    pub source: String,
    #[serde(flatten)]
    pub issue: ValidationIssue,
}

impl fmt::Display for SourcedIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.source, self.issue)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("card set is invalid ({} issue(s))", .0.len())]
    Invalid(Vec<SourcedIssue>),
}

#[derive(Debug, Clone)]
pub struct LoadedCardSet {
    pub set: CardSet,
    pub warnings: Vec<SourcedIssue>,
}

/// One parsed document destined for a card-set slot.
pub struct SlotInput {
    pub source: String,
    pub slot: CardKind,
    pub parsed: ParseResult,
}

/// Assembles parsed documents into a card set, enforcing slot kinds and
/// unique card ids. Issues from every input are reported together.
pub fn assemble_card_set(inputs: Vec<SlotInput>) -> Result<LoadedCardSet, Vec<SourcedIssue>> {
    let mut errors = Vec::new();
    let mut warnings = Vec::new();
    let mut project = None;
    let mut data = Vec::new();
    let mut models = Vec::new();
    let mut ids: HashMap<String, String> = HashMap::new();

    for input in inputs {
        let tag = |issue: ValidationIssue| SourcedIssue {
            source: input.source.clone(),
            issue,
        };
        let parsed = match input.parsed {
            Ok(parsed) => parsed,
            Err(issues) => {
                for issue in issues {
                    if issue.is_error() {
                        errors.push(tag(issue));
                    } else {
                        warnings.push(tag(issue));
                    }
                }
                continue;
            }
        };
        warnings.extend(parsed.warnings.into_iter().map(tag));
        let card: ComplianceCard = parsed.card;
        if card.kind != input.slot {
            errors.push(tag(ValidationIssue::error(
                IssueCode::WrongKind,
                "kind",
                format!("card `{}` is a {} card but was supplied as a {} card", card.card_id, card.kind, input.slot),
            )));
            continue;
        }
        if let Some(first) = ids.get(&card.card_id) {
            errors.push(tag(ValidationIssue::error(
                IssueCode::DuplicateId,
                "card_id",
                format!("card id `{}` is already used by {first}", card.card_id),
            )));
            continue;
        }
        ids.insert(card.card_id.clone(), input.source.clone());
        match input.slot {
            CardKind::Project => project = Some(card),
            CardKind::Data => data.push(card),
            CardKind::Model => models.push(card),
        }
    }

    if !errors.is_empty() {
        return Err(errors);
    }
    let Some(project) = project else {
        return Err(vec![SourcedIssue {
            source: "project".into(),
            issue: ValidationIssue::error(IssueCode::MissingField, "project", "a project card is required"),
        }]);
    };
    let set = CardSet::new(project, data, models).map_err(|e| {
        vec![SourcedIssue {
            source: "card set".into(),
            issue: ValidationIssue::error(IssueCode::DuplicateId, "card_id", e.to_string()),
        }]
    })?;
    Ok(LoadedCardSet { set, warnings })
}

/// Reads, parses and assembles card files. Files are read concurrently under
/// [`ExecutionMode::Parallel`]; the first unreadable file aborts the load.
pub fn load_card_set(
    project_path: &Path,
    data_paths: &[PathBuf],
    model_paths: &[PathBuf],
    registry: &AttributeRegistry,
    mode: ExecutionMode,
) -> Result<LoadedCardSet, LoadError> {
    let slots: Vec<(CardKind, &Path)> = std::iter::once((CardKind::Project, project_path))
        .chain(data_paths.iter().map(|p| (CardKind::Data, p.as_path())))
        .chain(model_paths.iter().map(|p| (CardKind::Model, p.as_path())))
        .collect();
    let read = mode.map(&slots, |(slot, path)| {
        std::fs::read_to_string(path)
            .map(|text| SlotInput {
                source: path.display().to_string(),
                slot: *slot,
                parsed: parse_card(&text, registry),
            })
            .map_err(|source| LoadError::Io {
                path: path.to_path_buf(),
                source,
            })
    });
    let inputs = read.into_iter().collect::<Result<Vec<_>, _>>()?;
    assemble_card_set(inputs).map_err(LoadError::Invalid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::baseline_registry;

    fn write(dir: &Path, name: &str, kind: &str, id: &str) -> PathBuf {
        let path = dir.join(name);
        std::fs::write(&path, format!("kind: {kind}\ncard_id: {id}\nschema_version: 1.0.0\n")).unwrap();
        path
    }

    #[test]
    fn loads_one_of_each() {
        let dir = tempfile::tempdir().unwrap();
        let reg = baseline_registry();
        let p = write(dir.path(), "p.card.yaml", "project", "p");
        let d = write(dir.path(), "d.card.yaml", "data", "d1");
        let m = write(dir.path(), "m.card.yaml", "model", "m1");
        for mode in [ExecutionMode::Sequential, ExecutionMode::Parallel] {
            let loaded = load_card_set(&p, &[d.clone()], &[m.clone()], &reg, mode).unwrap();
            assert_eq!((loaded.set.data().len(), loaded.set.models().len()), (1, 1));
        }
    }

    #[test]
    fn duplicate_ids_across_files() {
        let dir = tempfile::tempdir().unwrap();
        let reg = baseline_registry();
        let p = write(dir.path(), "p.card.yaml", "project", "p");
        let d1 = write(dir.path(), "d1.card.yaml", "data", "same");
        let d2 = write(dir.path(), "d2.card.yaml", "data", "same");
        let LoadError::Invalid(issues) = load_card_set(&p, &[d1, d2], &[], &reg, ExecutionMode::default()).unwrap_err() else {
            panic!("expected invalid");
        };
        assert_eq!(issues.len(), 1);
        assert_eq!(issues[0].issue.code, IssueCode::DuplicateId);
        assert!(issues[0].source.ends_with("d2.card.yaml"));
    }

    #[test]
    fn slot_kind_is_enforced() {
        let dir = tempfile::tempdir().unwrap();
        let reg = baseline_registry();
        let d = write(dir.path(), "d.card.yaml", "data", "d");
        let m = write(dir.path(), "m.card.yaml", "model", "m");
        let LoadError::Invalid(issues) = load_card_set(&d, &[m], &[], &reg, ExecutionMode::default()).unwrap_err() else {
            panic!("expected invalid");
        };
        assert_eq!(issues.len(), 2);
        assert!(issues.iter().all(|i| i.issue.code == IssueCode::WrongKind));
    }

    #[test]
    fn unreadable_file_names_the_path() {
        let reg = baseline_registry();
        let missing = PathBuf::from("/definitely/not/here.card.yaml");
        let err = load_card_set(&missing, &[], &[], &reg, ExecutionMode::default()).unwrap_err();
        assert!(matches!(err, LoadError::Io { .. }));
        assert!(err.to_string().contains("/definitely/not/here.card.yaml"));
    }
}
