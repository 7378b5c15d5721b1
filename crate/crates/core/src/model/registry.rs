use std::collections::HashMap;
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::attribute::is_token;
use super::{AttributeDefinition, CardKind, Domain};

const BASELINE_REGISTRY: &str = include_str!("../../data/registry.yaml");

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RegistryError {
    #[error("registry document is malformed: {0}")]
    Parse(String),
    #[error("cannot read registry file {path}: {message}")]
    Io { path: String, message: String },
    #[error("invalid registry version `{0}` (expected semantic version)")]
    Version(String),
    #[error("attribute `{0}` is defined more than once")]
    DuplicateId(String),
    #[error("attribute `{0}` must apply to at least one card kind")]
    NoCardKinds(String),
    #[error("attribute `{0}` is dispositive but does not apply to project cards")]
    DispositiveOffProject(String),
    #[error("attribute `{0}`: satisfaction rule is not compatible with its {1} domain")]
    IncompatibleRule(String, &'static str),
    #[error("attribute `{0}`: vocabulary must be a non-empty list of distinct [a-z0-9_] tokens")]
    BadVocabulary(String),
    #[error("attribute `{0}` must cite at least one provision")]
    NoArticles(String),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegistryMode {
    /// Definitions replace same-id baseline entries and add new ones.
    #[default]
    Extend,
    /// The file is the whole registry.
    Replace,
}

/// On-disk registry document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegistryFile {
    pub version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema_version: Option<String>,
    #[serde(default)]
    pub mode: RegistryMode,
    pub attributes: Vec<AttributeDefinition>,
}

/// The attribute schema: every attribute a card may carry.
#[derive(Debug, Clone)]
pub struct AttributeRegistry {
    version: String,
    schema_version: semver::Version,
    attributes: Vec<AttributeDefinition>,
    index: HashMap<String, usize>,
}

impl PartialEq for AttributeRegistry {
    fn eq(&self, other: &Self) -> bool {
        self.version == other.version
            && self.schema_version == other.schema_version
            && self.attributes == other.attributes
    }
}

impl AttributeRegistry {
    pub fn new(
        version: impl Into<String>,
        schema_version: &str,
        attributes: Vec<AttributeDefinition>,
    ) -> Result<AttributeRegistry, RegistryError> {
        let schema_version = semver::Version::parse(schema_version)
            .map_err(|_| RegistryError::Version(schema_version.to_owned()))?;
        let mut index = HashMap::with_capacity(attributes.len());
        for (i, def) in attributes.iter().enumerate() {
            check_definition(def)?;
            if index.insert(def.id.as_str().to_owned(), i).is_some() {
                return Err(RegistryError::DuplicateId(def.id.to_string()));
            }
        }
        Ok(AttributeRegistry {
            version: version.into(),
            schema_version,
            attributes,
            index,
        })
    }

    pub fn from_yaml(text: &str) -> Result<AttributeRegistry, RegistryError> {
        let file = parse_file(text)?;
        if file.mode == RegistryMode::Extend {
            return baseline_registry().extend(file);
        }
        let schema = file.schema_version.as_deref().unwrap_or("1.0.0");
        AttributeRegistry::new(file.version, schema, file.attributes)
    }

    pub fn load(path: &Path) -> Result<AttributeRegistry, RegistryError> {
        let text = std::fs::read_to_string(path).map_err(|e| RegistryError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        AttributeRegistry::from_yaml(&text)
    }

    /// Applies an override file on top of this registry.
    pub fn extend(&self, file: RegistryFile) -> Result<AttributeRegistry, RegistryError> {
        let schema = file
            .schema_version
            .unwrap_or_else(|| self.schema_version.to_string());
        if file.mode == RegistryMode::Replace {
            return AttributeRegistry::new(file.version, &schema, file.attributes);
        }
        let mut attributes = self.attributes.clone();
        for def in file.attributes {
            match self.index.get(def.id.as_str()) {
                Some(&i) => attributes[i] = def,
                None => attributes.push(def),
            }
        }
        AttributeRegistry::new(file.version, &schema, attributes)
    }

    pub fn version(&self) -> &str {
        &self.version
    }

    pub fn schema_version(&self) -> &semver::Version {
        &self.schema_version
    }

    pub fn lookup(&self, id: &str) -> Option<&AttributeDefinition> {
        self.index.get(id).map(|&i| &self.attributes[i])
    }

    pub fn attributes(&self) -> &[AttributeDefinition] {
        &self.attributes
    }

    /// Attributes applicable to `kind`, dispositive ones first, otherwise in
    /// registry order.
    pub fn for_kind(&self, kind: CardKind) -> Vec<&AttributeDefinition> {
        let mut defs: Vec<_> = self.attributes.iter().filter(|d| d.applies_to(kind)).collect();
        defs.sort_by_key(|d| !d.dispositive);
        defs
    }

    pub fn dispositive(&self) -> impl Iterator<Item = &AttributeDefinition> {
        self.attributes.iter().filter(|d| d.dispositive)
    }

    pub fn to_file(&self) -> RegistryFile {
        RegistryFile {
            version: self.version.clone(),
            schema_version: Some(self.schema_version.to_string()),
            mode: RegistryMode::Replace,
            attributes: self.attributes.clone(),
        }
    }
}

fn parse_file(text: &str) -> Result<RegistryFile, RegistryError> {
    serde_yaml::from_str(text).map_err(|e| RegistryError::Parse(e.to_string()))
}

fn check_definition(def: &AttributeDefinition) -> Result<(), RegistryError> {
    let id = || def.id.to_string();
    if def.card_kinds.is_empty() {
        return Err(RegistryError::NoCardKinds(id()));
    }
    if def.dispositive && !def.applies_to(CardKind::Project) {
        return Err(RegistryError::DispositiveOffProject(id()));
    }
    if let Domain::Choice { vocabulary } | Domain::TagSet { vocabulary } = &def.domain {
        let mut seen = std::collections::HashSet::new();
        let ok = !vocabulary.is_empty()
            && vocabulary.iter().all(|t| is_token(t) && seen.insert(t.as_str()));
        if !ok {
            return Err(RegistryError::BadVocabulary(id()));
        }
    }
    if !def.satisfaction.compatible_with(&def.domain) {
        return Err(RegistryError::IncompatibleRule(id(), def.domain.name()));
    }
    if def.articles.is_empty() {
        return Err(RegistryError::NoArticles(id()));
    }
    Ok(())
}

/// The bundled registry covering every attribute category of the project,
/// data and model card tables.
pub fn baseline_registry() -> AttributeRegistry {
    static BASELINE: OnceLock<AttributeRegistry> = OnceLock::new();
    BASELINE
        .get_or_init(|| {
            let file = parse_file(BASELINE_REGISTRY).expect("bundled registry parses");
            let schema = file.schema_version.as_deref().unwrap_or("1.0.0");
            AttributeRegistry::new(file.version, schema, file.attributes)
                .expect("bundled registry is well-formed")
        })
        .clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{satisfaction, ArticleRef, AttributeValue};

    #[test]
    fn baseline_loads_and_is_self_consistent() {
        let reg = baseline_registry();
        assert!(reg.attributes().len() >= 30);
        for def in reg.dispositive() {
            assert!(def.applies_to(CardKind::Project), "{}", def.id);
        }
    }

    #[test]
    fn lookup_examples() {
        let reg = baseline_registry();
        assert!(reg.lookup("intended_purpose").unwrap().dispositive);
        assert!(reg.lookup("no.such.attr").is_none());
        assert!(reg.lookup("Intended_Purpose").is_none());
        assert!(reg.lookup("INTENDED_PURPOSE").is_none());
    }

    #[test]
    fn data_governance_cites_article_10() {
        let reg = baseline_registry();
        let def = reg
            .attributes()
            .iter()
            .find(|d| d.id.group() == "data_governance" && d.applies_to(CardKind::Data))
            .unwrap();
        assert!(def.articles.contains(&ArticleRef::article(10)));
    }

    #[test]
    fn model_oversight_cites_14_3_a() {
        let reg = baseline_registry();
        let def = reg.lookup("human_oversight.interpretability_support").unwrap();
        assert!(def.applies_to(CardKind::Model));
        assert!(def.articles.contains(&"Art. 14(3)(a)".parse().unwrap()));
        assert!(def.articles.contains(&"Art. 14(4)(d)".parse().unwrap()));
    }

    #[test]
    fn required_dispositive_vocabularies() {
        let reg = baseline_registry();
        let vocab = |id: &str| reg.lookup(id).unwrap().domain.vocabulary().unwrap().to_vec();
        assert_eq!(
            vocab("operator_role"),
            ["provider", "deployer", "importer", "distributor", "product_manufacturer", "other"]
        );
        assert_eq!(
            vocab("exception"),
            ["none", "military_defence", "scientific_research", "personal_non_professional"]
        );
        assert_eq!(vocab("high_risk_basis"), ["none", "annex_i_safety_component", "annex_iii_use_case"]);
        assert!(vocab("intended_purpose").contains(&"general_purpose".to_owned()));
        assert!(vocab("prohibited_practices").contains(&"social_scoring".to_owned()));
        for id in ["placed_on_eu_market", "put_into_service_in_eu", "is_ai_system", "is_gpai_model", "gpai_systemic_risk"] {
            assert_eq!(reg.lookup(id).unwrap().domain, Domain::Flag, "{id}");
        }
    }

    #[test]
    fn satisfaction_is_total_over_every_domain() {
        let reg = baseline_registry();
        for def in reg.attributes() {
            let values = def.domain.enumerate();
            assert!(!values.is_empty());
            for v in values.iter().take(64) {
                assert!(satisfaction(def, v).is_ok(), "{} {v}", def.id);
            }
            if def.domain.vocabulary().is_none() && def.satisfaction != crate::model::SatisfactionRule::AlwaysInformational {
                assert_eq!(
                    satisfaction(def, &AttributeValue::Unanswered).unwrap(),
                    crate::model::TriState::Unknown
                );
            }
        }
    }

    #[test]
    fn extend_overrides_and_adds() {
        let base = baseline_registry();
        let file: RegistryFile = serde_yaml::from_str(
            r#"
version: "1.1.0"
attributes:
  - id: record_keeping.logging_enabled
    category: Record-keeping (High-risk AI systems)
    card_kinds: [project]
    domain: { type: level }
    satisfaction: { rule: level_at_least, threshold: 2 }
    articles: ["Art. 12"]
  - id: record_keeping.retention_months
    category: Record-keeping (High-risk AI systems)
    card_kinds: [project]
    domain: { type: level }
    satisfaction: { rule: level_at_least, threshold: 3 }
    articles: ["Art. 12"]
"#,
        )
        .unwrap();
        let reg = base.extend(file).unwrap();
        assert_eq!(reg.version(), "1.1.0");
        assert_eq!(reg.attributes().len(), base.attributes().len() + 1);
        assert_eq!(reg.lookup("record_keeping.logging_enabled").unwrap().domain, Domain::Level);
        assert!(reg.lookup("record_keeping.retention_months").is_some());
    }

    #[test]
    fn rejects_bad_definitions() {
        let yaml = |body: &str| format!("version: x\nmode: replace\nattributes:\n{body}");
        let cases = [
            (
                "  - {id: a, category: c, card_kinds: [data], domain: {type: flag}, satisfaction: {rule: must_be_true}, dispositive: true, articles: [\"Art. 1\"]}\n",
                "dispositive",
            ),
            (
                "  - {id: a, category: c, card_kinds: [data], domain: {type: flag}, satisfaction: {rule: level_at_least, threshold: 3}, articles: [\"Art. 1\"]}\n",
                "compatible",
            ),
            (
                "  - {id: a, category: c, card_kinds: [data], domain: {type: flag}, satisfaction: {rule: must_be_true}, articles: [\"Art. 1\"]}\n  - {id: a, category: c, card_kinds: [data], domain: {type: flag}, satisfaction: {rule: must_be_true}, articles: [\"Art. 1\"]}\n",
                "more than once",
            ),
            (
                "  - {id: a, category: c, card_kinds: [data], domain: {type: choice, vocabulary: [X]}, satisfaction: {rule: always_informational}, articles: [\"Art. 1\"]}\n",
                "vocabulary",
            ),
            (
                "  - {id: A, category: c, card_kinds: [data], domain: {type: flag}, satisfaction: {rule: must_be_true}, articles: [\"Art. 1\"]}\n",
                "invalid attribute id",
            ),
        ];
        for (body, needle) in cases {
            let err = AttributeRegistry::from_yaml(&yaml(body)).unwrap_err().to_string();
            assert!(err.contains(needle), "{err}");
        }
    }
}
