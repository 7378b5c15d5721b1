#![allow(dead_code)]

use compliance_cards::model::SatisfactionRule;
use compliance_cards::rules::dispositive::*;
use compliance_cards::{AttributeDefinition, AttributeRegistry, AttributeValue, CardKind, CardSet, ComplianceCard};

pub fn satisfying(def: &AttributeDefinition) -> Option<AttributeValue> {
    Some(match &def.satisfaction {
        SatisfactionRule::MustBeTrue => AttributeValue::Flag(true),
        SatisfactionRule::LevelAtLeast { .. } => AttributeValue::level(4),
        SatisfactionRule::ChoiceIn { accepted } => AttributeValue::choice(accepted[0].clone()),
        SatisfactionRule::TagSetNonEmpty => {
            AttributeValue::tags([def.domain.vocabulary().unwrap()[0].clone()])
        }
        SatisfactionRule::AlwaysInformational => return None,
    })
}

/// A card with every checkable attribute for its kind satisfied.
pub fn satisfied_card(reg: &AttributeRegistry, kind: CardKind, id: &str) -> ComplianceCard {
    let mut card = ComplianceCard::new(kind, id, reg.schema_version().to_string());
    for def in reg.for_kind(kind) {
        if def.dispositive {
            continue;
        }
        if let Some(v) = satisfying(def) {
            card = card.with(def.id.as_str(), v);
        }
    }
    if kind != CardKind::Project {
        card = card.with("intended_purpose", AttributeValue::tags(["general_purpose"]));
    }
    card
}

pub fn with_dispositive(card: ComplianceCard, ai: bool, high_risk: bool, gpai: bool) -> ComplianceCard {
    card.with(OPERATOR_ROLE, AttributeValue::choice("provider"))
        .with(PLACED_ON_EU_MARKET, AttributeValue::Flag(true))
        .with(PUT_INTO_SERVICE_IN_EU, AttributeValue::Flag(true))
        .with(EXCEPTION, AttributeValue::choice("none"))
        .with(PROHIBITED_PRACTICES, AttributeValue::tags::<_, &str>([]))
        .with(IS_AI_SYSTEM, AttributeValue::Flag(ai))
        .with(
            HIGH_RISK_BASIS,
            AttributeValue::choice(if high_risk { "annex_iii_use_case" } else { "none" }),
        )
        .with(IS_GPAI_MODEL, AttributeValue::Flag(gpai))
        .with(GPAI_SYSTEMIC_RISK, AttributeValue::Flag(false))
        .with("intended_purpose", AttributeValue::tags(["medical_triage"]))
}

pub fn high_risk_set(reg: &AttributeRegistry, data: usize, models: usize) -> CardSet {
    let project = with_dispositive(satisfied_card(reg, CardKind::Project, "proj"), true, true, false);
    CardSet::new(
        project,
        (0..data).map(|i| satisfied_card(reg, CardKind::Data, &format!("data{i}"))).collect(),
        (0..models).map(|i| satisfied_card(reg, CardKind::Model, &format!("model{i}"))).collect(),
    )
    .unwrap()
}
