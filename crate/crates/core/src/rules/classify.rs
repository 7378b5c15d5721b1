use serde::{Deserialize, Serialize};

use super::label::{ClassificationLabel as L, LabelSet};
use crate::model::{AttributeValue, ComplianceCard};

pub const OPERATOR_ROLE: &str = "operator_role";
pub const PLACED_ON_EU_MARKET: &str = "placed_on_eu_market";
pub const PUT_INTO_SERVICE_IN_EU: &str = "put_into_service_in_eu";
pub const EXCEPTION: &str = "exception";
pub const PROHIBITED_PRACTICES: &str = "prohibited_practices";
pub const IS_AI_SYSTEM: &str = "is_ai_system";
pub const HIGH_RISK_BASIS: &str = "high_risk_basis";
pub const IS_GPAI_MODEL: &str = "is_gpai_model";
pub const GPAI_SYSTEMIC_RISK: &str = "gpai_systemic_risk";

/// A dispositive attribute that was Unanswered where classification consulted
/// it, together with the value classification assumed in its place.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assumption {
    pub attribute: String,
    pub assumed: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub labels: LabelSet,
    pub assumptions: Vec<Assumption>,
}

impl Classification {
    pub fn has(&self, label: L) -> bool {
        self.labels.contains(&label)
    }

    pub fn is_out_of_scope(&self) -> bool {
        self.has(L::OutOfScope)
    }

    fn out_of_scope() -> Classification {
        Classification {
            labels: [L::OutOfScope].into(),
            assumptions: Vec::new(),
        }
    }
}

#[derive(Default)]
struct Cascade {
    labels: LabelSet,
    assumptions: Vec<Assumption>,
}

impl Cascade {
    fn assume(&mut self, attribute: &str, assumed: &str) {
        self.assumptions.push(Assumption {
            attribute: attribute.to_owned(),
            assumed: assumed.to_owned(),
        });
    }

    /// Reads a flag, widening to `true` when it is not answered.
    fn flag_or_assume(&mut self, card: &ComplianceCard, attribute: &str, assumed: &str) -> bool {
        match card.get(attribute) {
            AttributeValue::Flag(b) => *b,
            _ => {
                self.assume(attribute, assumed);
                true
            }
        }
    }

    fn finish(self) -> Classification {
        Classification {
            labels: self.labels,
            assumptions: self.assumptions,
        }
    }
}

/// Classifies a project card from its dispositive attributes.
///
/// Values that are Unanswered (or of the wrong shape) on the consulted branch
/// are replaced by the conservative reading and recorded as assumptions. An
/// out-of-scope result never carries assumptions.
pub fn classify(project: &ComplianceCard) -> Classification {
    let mut c = Cascade::default();

    match project.get(OPERATOR_ROLE) {
        AttributeValue::Choice(role) if role == "provider" => {}
        AttributeValue::Choice(_) => return Classification::out_of_scope(),
        _ => c.assume(OPERATOR_ROLE, "provider"),
    }

    let placed = project.get(PLACED_ON_EU_MARKET);
    let service = project.get(PUT_INTO_SERVICE_IN_EU);
    match (placed, service) {
        (AttributeValue::Flag(false), AttributeValue::Flag(false)) => return Classification::out_of_scope(),
        (AttributeValue::Flag(true), _) | (_, AttributeValue::Flag(true)) => {}
        _ => {
            for (id, v) in [(PLACED_ON_EU_MARKET, placed), (PUT_INTO_SERVICE_IN_EU, service)] {
                if !matches!(v, AttributeValue::Flag(_)) {
                    c.assume(id, "true");
                }
            }
        }
    }

    match project.get(EXCEPTION) {
        AttributeValue::Choice(e) if e == "none" => {}
        AttributeValue::Choice(_) => return Classification::out_of_scope(),
        _ => c.assume(EXCEPTION, "none"),
    }

    c.labels.insert(L::InScope);
    match project.get(PROHIBITED_PRACTICES) {
        AttributeValue::TagSet(tags) if !tags.is_empty() => {
            c.labels.insert(L::Prohibited);
            return c.finish();
        }
        AttributeValue::TagSet(_) => {}
        _ => c.assume(PROHIBITED_PRACTICES, "[]"),
    }

    if c.flag_or_assume(project, IS_GPAI_MODEL, "true") {
        c.labels.insert(L::GpaiModel);
        if c.flag_or_assume(project, GPAI_SYSTEMIC_RISK, "true") {
            c.labels.insert(L::GpaiModelSystemicRisk);
        }
    }
    if c.flag_or_assume(project, IS_AI_SYSTEM, "true") {
        c.labels.insert(L::AiSystem);
        match project.get(HIGH_RISK_BASIS) {
            AttributeValue::Choice(b) if b == "none" => {}
            AttributeValue::Choice(_) => {
                c.labels.insert(L::HighRiskAiSystem);
            }
            _ => {
                c.assume(HIGH_RISK_BASIS, "high_risk");
                c.labels.insert(L::HighRiskAiSystem);
            }
        }
    }
    c.finish()
}
