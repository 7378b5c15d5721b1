use serde::{Deserialize, Serialize};

use super::classify::{Classification, PROHIBITED_PRACTICES};
use super::table::{Builtin, Check, CheckTarget};
use crate::model::{satisfaction, AttributeRegistry, AttributeValue, CardSet, ComplianceCard, TriState};

pub const INTENDED_PURPOSE: &str = "intended_purpose";
pub const GENERAL_PURPOSE: &str = "general_purpose";

/// A fact that contributed a non-satisfied state to a check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    pub card_id: String,
    pub attribute_id: String,
    pub observed: AttributeValue,
    pub state: TriState,
}

impl Evidence {
    fn new(card: &ComplianceCard, attribute: &str, state: TriState) -> Evidence {
        Evidence {
            card_id: card.card_id.clone(),
            attribute_id: attribute.to_owned(),
            observed: card.get(attribute).clone(),
            state,
        }
    }
}

/// Everything a check may consult.
#[derive(Debug, Clone, Copy)]
pub struct EvalContext<'a> {
    pub set: &'a CardSet,
    pub registry: &'a AttributeRegistry,
    pub classification: &'a Classification,
}

/// Evaluates one check. Evidence lists every card (in card-set order) whose
/// state was not Satisfied.
///
/// Attribute checks whose attribute the registry cannot resolve, or whose
/// value does not fit the domain, evaluate to Unknown. Neither happens for
/// a table that passed `RuleTable::check_against` and a validated card set.
pub fn evaluate_check(check: &Check, ctx: &EvalContext<'_>) -> (TriState, Vec<Evidence>) {
    match &check.target {
        CheckTarget::Attribute(id) => {
            let cards: &[ComplianceCard] = match check.scope.card_kind() {
                Some(kind) => ctx.set.components(kind),
                None => &[],
            };
            let def = ctx.registry.lookup(id.as_str());
            fold(cards.iter().map(|card| {
                let state = def
                    .and_then(|d| satisfaction(d, card.get(id.as_str())).ok())
                    .unwrap_or(TriState::Unknown);
                (state, Evidence::new(card, id.as_str(), state))
            }))
        }
        CheckTarget::Builtin(Builtin::NoProhibitedPractices) => {
            let project = ctx.set.project();
            let state = match project.get(PROHIBITED_PRACTICES) {
                AttributeValue::TagSet(tags) if tags.is_empty() => TriState::Satisfied,
                AttributeValue::TagSet(_) => TriState::Unsatisfied,
                _ => TriState::Unknown,
            };
            fold(std::iter::once((state, Evidence::new(project, PROHIBITED_PRACTICES, state))))
        }
        CheckTarget::Builtin(Builtin::ClassificationComplete) => {
            let project = ctx.set.project();
            fold(
                ctx.classification
                    .assumptions
                    .iter()
                    .map(|a| (TriState::Unknown, Evidence::new(project, &a.attribute, TriState::Unknown))),
            )
        }
        CheckTarget::Builtin(Builtin::PurposeCompatible) => purpose_compatible(ctx.set),
    }
}

fn fold(items: impl Iterator<Item = (TriState, Evidence)>) -> (TriState, Vec<Evidence>) {
    let mut state = TriState::Satisfied;
    let mut evidence = Vec::new();
    for (s, e) in items {
        state = state.min(s);
        if s != TriState::Satisfied {
            evidence.push(e);
        }
    }
    (state, evidence)
}

/// A component is compatible when its intended purposes include
/// `general_purpose` or cover all of the project's intended purposes.
fn purpose_compatible(set: &CardSet) -> (TriState, Vec<Evidence>) {
    let project = set.project();
    let project_tags = match project.get(INTENDED_PURPOSE) {
        AttributeValue::TagSet(tags) => Some(tags),
        _ => None,
    };
    let components = set.data().iter().chain(set.models());
    let mut needs_project = false;
    let (state, mut evidence) = fold(components.map(|card| {
        let state = match card.get(INTENDED_PURPOSE) {
            AttributeValue::TagSet(tags) if tags.contains(GENERAL_PURPOSE) => TriState::Satisfied,
            AttributeValue::TagSet(tags) => match project_tags {
                Some(wanted) if tags.is_superset(wanted) => TriState::Satisfied,
                Some(_) => TriState::Unsatisfied,
                None => {
                    needs_project = true;
                    TriState::Unknown
                }
            },
            _ => TriState::Unknown,
        };
        (state, Evidence::new(card, INTENDED_PURPOSE, state))
    }));
    if needs_project {
        evidence.insert(0, Evidence::new(project, INTENDED_PURPOSE, TriState::Unknown));
    }
    (state, evidence)
}
