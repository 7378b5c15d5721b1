use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::model::{ArticleRef, AttributeRegistry, AttributeValue};
use crate::rules::{CheckStatus, ComplianceReport, Evidence};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Explanation {
    pub requirement_id: String,
    pub title: String,
    pub status: CheckStatus,
    pub articles: Vec<ArticleRef>,
    pub narrative: String,
    pub remediation_hint: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown requirement `{requested}`; valid ids: {}", valid.join(", "))]
pub struct ExplainError {
    pub requested: String,
    pub valid: Vec<String>,
}

fn fact(e: &Evidence) -> String {
    match &e.observed {
        AttributeValue::Unanswered => format!("attribute {} on card {} is Unanswered", e.attribute_id, e.card_id),
        v => format!("attribute {} on card {} is {} ({})", e.attribute_id, e.card_id, v, e.state),
    }
}

/// Explains one requirement's outcome. The narrative has one sentence per
/// evidence entry.
pub fn explain_requirement(
    report: &ComplianceReport,
    requirement_id: &str,
    registry: &AttributeRegistry,
) -> Result<Explanation, ExplainError> {
    let result = report.result(requirement_id).ok_or_else(|| ExplainError {
        requested: requirement_id.to_owned(),
        valid: report.results.iter().map(|r| r.requirement_id.clone()).collect(),
    })?;
    let labels: Vec<&str> = report.classification.iter().map(|l| l.as_str()).collect();
    let labels = format!("{{{}}}", labels.join(", "));

    let (narrative, remediation_hint) = match result.status {
        CheckStatus::NotApplicable => {
            let reasons = result.applies_to.unmet(&report.classification);
            (
                format!(
                    "{} does not apply: the classification {} excludes it ({}).",
                    result.requirement_id,
                    labels,
                    reasons.join("; ")
                ),
                "No action needed unless the project's dispositive characteristics change.".to_owned(),
            )
        }
        CheckStatus::Pass => (
            format!("{} passes: every check is satisfied under classification {}.", result.requirement_id, labels),
            "No action needed.".to_owned(),
        ),
        status => {
            let mut narrative = format!(
                "{} is {} under classification {}.",
                result.requirement_id,
                if status == CheckStatus::Fail { "failing" } else { "indeterminate" },
                labels
            );
            for e in &result.evidence {
                narrative.push(' ');
                narrative.push_str(&fact(e));
                narrative.push('.');
            }
            (narrative, remediation(&result.evidence, registry))
        }
    };

    Ok(Explanation {
        requirement_id: result.requirement_id.clone(),
        title: result.title.clone(),
        status: result.status,
        articles: result.articles.clone(),
        narrative,
        remediation_hint,
    })
}

fn remediation(evidence: &[Evidence], registry: &AttributeRegistry) -> String {
    let mut categories = BTreeSet::new();
    let mut unanswered = BTreeSet::new();
    let mut unsatisfied = BTreeSet::new();
    for e in evidence {
        let category = registry
            .lookup(&e.attribute_id)
            .map(|d| d.category.as_str())
            .unwrap_or(e.attribute_id.as_str());
        categories.insert(category);
        if e.observed.is_unanswered() {
            unanswered.insert(e.card_id.as_str());
        } else {
            unsatisfied.insert(e.card_id.as_str());
        }
    }
    let mut hint = format!(
        "Review the \"{}\" attributes.",
        categories.into_iter().collect::<Vec<_>>().join("\", \"")
    );
    if !unanswered.is_empty() {
        hint.push_str(&format!(
            " Ask the owners of {} to answer the open questions.",
            unanswered.into_iter().collect::<Vec<_>>().join(", ")
        ));
    }
    if !unsatisfied.is_empty() {
        hint.push_str(&format!(
            " Address the unmet measures recorded on {}.",
            unsatisfied.into_iter().collect::<Vec<_>>().join(", ")
        ));
    }
    hint
}
