use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassificationLabel {
    InScope,
    OutOfScope,
    Prohibited,
    AiSystem,
    HighRiskAiSystem,
    GpaiModel,
    GpaiModelSystemicRisk,
}

impl ClassificationLabel {
    pub const ALL: [ClassificationLabel; 7] = [
        ClassificationLabel::InScope,
        ClassificationLabel::OutOfScope,
        ClassificationLabel::Prohibited,
        ClassificationLabel::AiSystem,
        ClassificationLabel::HighRiskAiSystem,
        ClassificationLabel::GpaiModel,
        ClassificationLabel::GpaiModelSystemicRisk,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ClassificationLabel::InScope => "in_scope",
            ClassificationLabel::OutOfScope => "out_of_scope",
            ClassificationLabel::Prohibited => "prohibited",
            ClassificationLabel::AiSystem => "ai_system",
            ClassificationLabel::HighRiskAiSystem => "high_risk_ai_system",
            ClassificationLabel::GpaiModel => "gpai_model",
            ClassificationLabel::GpaiModelSystemicRisk => "gpai_model_systemic_risk",
        }
    }
}

impl fmt::Display for ClassificationLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub type LabelSet = BTreeSet<ClassificationLabel>;

/// Checks the structural label invariants.
pub fn labels_consistent(labels: &LabelSet) -> bool {
    use ClassificationLabel as L;
    let has = |l| labels.contains(&l);
    if has(L::OutOfScope) {
        return labels.len() == 1;
    }
    has(L::InScope)
        && (!has(L::HighRiskAiSystem) || has(L::AiSystem))
        && (!has(L::GpaiModelSystemicRisk) || has(L::GpaiModel))
        && (!has(L::Prohibited) || labels.len() == 2)
}

/// Label predicate deciding whether a requirement applies.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Applicability {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub requires: Vec<ClassificationLabel>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub requires_any: Vec<ClassificationLabel>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub excludes: Vec<ClassificationLabel>,
}

impl Applicability {
    /// Out-of-scope projects match nothing.
    pub fn matches(&self, labels: &LabelSet) -> bool {
        !labels.contains(&ClassificationLabel::OutOfScope)
            && self.requires.iter().all(|l| labels.contains(l))
            && (self.requires_any.is_empty() || self.requires_any.iter().any(|l| labels.contains(l)))
            && !self.excludes.iter().any(|l| labels.contains(l))
    }

    /// Human-readable reasons why `labels` fails this predicate.
    pub fn unmet(&self, labels: &LabelSet) -> Vec<String> {
        let mut reasons = Vec::new();
        if labels.contains(&ClassificationLabel::OutOfScope) {
            reasons.push("project is out_of_scope".to_owned());
        }
        for l in &self.requires {
            if !labels.contains(l) {
                reasons.push(format!("missing label {l}"));
            }
        }
        if !self.requires_any.is_empty() && !self.requires_any.iter().any(|l| labels.contains(l)) {
            let any: Vec<&str> = self.requires_any.iter().map(|l| l.as_str()).collect();
            reasons.push(format!("none of the labels {} present", any.join(", ")));
        }
        for l in &self.excludes {
            if labels.contains(l) {
                reasons.push(format!("excluded label {l} present"));
            }
        }
        reasons
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ClassificationLabel as L;

    fn set(labels: &[L]) -> LabelSet {
        labels.iter().copied().collect()
    }

    #[test]
    fn applicability_predicates() {
        let hr = Applicability { requires: vec![L::HighRiskAiSystem], ..Default::default() };
        assert!(hr.matches(&set(&[L::InScope, L::AiSystem, L::HighRiskAiSystem])));
        assert!(!hr.matches(&set(&[L::InScope, L::AiSystem])));
        assert_eq!(hr.unmet(&set(&[L::InScope, L::AiSystem])), ["missing label high_risk_ai_system"]);

        let any = Applicability { requires_any: vec![L::AiSystem, L::GpaiModel], ..Default::default() };
        assert!(any.matches(&set(&[L::InScope, L::GpaiModel])));
        assert!(!any.matches(&set(&[L::InScope])));

        let excl = Applicability { requires: vec![L::InScope], excludes: vec![L::Prohibited], requires_any: vec![] };
        assert!(!excl.matches(&set(&[L::InScope, L::Prohibited])));

        let always = Applicability::default();
        assert!(!always.matches(&set(&[L::OutOfScope])));
    }

    #[test]
    fn label_invariants() {
        assert!(labels_consistent(&set(&[L::OutOfScope])));
        assert!(!labels_consistent(&set(&[L::OutOfScope, L::InScope])));
        assert!(labels_consistent(&set(&[L::InScope, L::Prohibited])));
        assert!(!labels_consistent(&set(&[L::InScope, L::HighRiskAiSystem])));
        assert!(labels_consistent(&set(&[L::InScope, L::AiSystem, L::GpaiModel])));
        assert!(!labels_consistent(&set(&[L::InScope, L::GpaiModelSystemicRisk])));
    }
}
