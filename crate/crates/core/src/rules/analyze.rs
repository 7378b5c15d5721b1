use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::classify::{classify, Assumption, Classification};
use super::eval::{evaluate_check, EvalContext, Evidence};
use super::label::{Applicability, ClassificationLabel, LabelSet};
use super::table::{Requirement, RuleTable, RuleTableError};
use crate::exec::ExecutionMode;
use crate::model::{ArticleRef, AttributeRegistry, CardSet, TriState};

/// Version of the JSON report layout.
pub const REPORT_SCHEMA: &str = "1.0.0";

pub const DISCLAIMER: &str =
    "Automated compliance prediction from self-reported card metadata; not legal advice and not a certification.";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Compliant,
    NonCompliant,
    Indeterminate,
    Prohibited,
    OutOfScope,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Compliant => "compliant",
            Verdict::NonCompliant => "non_compliant",
            Verdict::Indeterminate => "indeterminate",
            Verdict::Prohibited => "prohibited",
            Verdict::OutOfScope => "out_of_scope",
        }
    }

    /// Banner form, e.g. `NON-COMPLIANT`.
    pub fn banner(self) -> String {
        self.as_str().replace('_', "-").to_ascii_uppercase()
    }

    /// Position under NonCompliant < Indeterminate < Compliant; None for the
    /// gate verdicts.
    pub fn rank(self) -> Option<u8> {
        match self {
            Verdict::NonCompliant => Some(0),
            Verdict::Indeterminate => Some(1),
            Verdict::Compliant => Some(2),
            Verdict::Prohibited | Verdict::OutOfScope => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    Indeterminate,
    NotApplicable,
}

impl CheckStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Indeterminate => "indeterminate",
            CheckStatus::NotApplicable => "not_applicable",
        }
    }

    pub fn from_state(state: TriState) -> CheckStatus {
        match state {
            TriState::Satisfied => CheckStatus::Pass,
            TriState::Unsatisfied => CheckStatus::Fail,
            TriState::Unknown => CheckStatus::Indeterminate,
        }
    }
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub requirement_id: String,
    pub title: String,
    pub articles: Vec<ArticleRef>,
    pub applies_to: Applicability,
    pub status: CheckStatus,
    pub evidence: Vec<Evidence>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplianceReport {
    pub report_schema: String,
    pub engine_version: String,
    pub ruleset_version: String,
    pub registry_version: String,
    pub classification: LabelSet,
    pub assumptions: Vec<Assumption>,
    pub strict: bool,
    pub verdict: Verdict,
    pub results: Vec<CheckResult>,
    pub elapsed_ms: f64,
    pub disclaimer: String,
}

impl ComplianceReport {
    pub fn result(&self, requirement_id: &str) -> Option<&CheckResult> {
        self.results.iter().find(|r| r.requirement_id == requirement_id)
    }

    pub fn count(&self, status: CheckStatus) -> usize {
        self.results.iter().filter(|r| r.status == status).count()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AnalysisOptions {
    /// Demote an Indeterminate verdict to NonCompliant.
    pub strict: bool,
    pub mode: ExecutionMode,
}

/// Requirements whose applicability matches `labels`, in table order.
pub fn applicable_requirements<'t>(labels: &LabelSet, table: &'t RuleTable) -> Vec<&'t Requirement> {
    table.active().filter(|r| r.applies_to.matches(labels)).collect()
}

/// Aggregates per-requirement statuses into a verdict.
pub fn verdict_for(labels: &LabelSet, statuses: impl IntoIterator<Item = CheckStatus>, strict: bool) -> Verdict {
    if labels.contains(&ClassificationLabel::OutOfScope) {
        return Verdict::OutOfScope;
    }
    if labels.contains(&ClassificationLabel::Prohibited) {
        return Verdict::Prohibited;
    }
    let mut indeterminate = false;
    for s in statuses {
        match s {
            CheckStatus::Fail => return Verdict::NonCompliant,
            CheckStatus::Indeterminate => indeterminate = true,
            CheckStatus::Pass | CheckStatus::NotApplicable => {}
        }
    }
    match (indeterminate, strict) {
        (false, _) => Verdict::Compliant,
        (true, false) => Verdict::Indeterminate,
        (true, true) => Verdict::NonCompliant,
    }
}

fn evaluate_requirement(req: &Requirement, ctx: &EvalContext<'_>) -> CheckResult {
    let applicable = req.applies_to.matches(&ctx.classification.labels);
    let (status, evidence) = if applicable {
        let mut state = TriState::Satisfied;
        let mut evidence = Vec::new();
        for check in &req.checks {
            let (s, e) = evaluate_check(check, ctx);
            state = state.min(s);
            evidence.extend(e);
        }
        (CheckStatus::from_state(state), evidence)
    } else {
        (CheckStatus::NotApplicable, Vec::new())
    };
    CheckResult {
        requirement_id: req.id.clone(),
        title: req.title.clone(),
        articles: req.articles.clone(),
        applies_to: req.applies_to.clone(),
        status,
        evidence,
    }
}

/// Classifies the project and evaluates every enabled requirement.
///
/// The table is re-checked against `registry` first; a mismatch is returned
/// before anything is evaluated.
pub fn analyze(
    set: &CardSet,
    table: &RuleTable,
    registry: &AttributeRegistry,
    options: AnalysisOptions,
) -> Result<ComplianceReport, RuleTableError> {
    table.check_against(registry)?;
    Ok(analyze_checked(set, table, registry, options))
}

/// Like [`analyze`] over many card sets, checking the table once.
pub fn analyze_batch(
    sets: &[CardSet],
    table: &RuleTable,
    registry: &AttributeRegistry,
    options: AnalysisOptions,
) -> Result<Vec<ComplianceReport>, RuleTableError> {
    table.check_against(registry)?;
    Ok(options.mode.map(sets, |set| analyze_checked(set, table, registry, options)))
}

pub(crate) fn analyze_checked(
    set: &CardSet,
    table: &RuleTable,
    registry: &AttributeRegistry,
    options: AnalysisOptions,
) -> ComplianceReport {
    let start = Instant::now();
    let classification: Classification = classify(set.project());
    let ctx = EvalContext { set, registry, classification: &classification };
    let active: Vec<&Requirement> = table.active().collect();
    let results = options.mode.map(&active, |req| evaluate_requirement(req, &ctx));
    let verdict = verdict_for(&classification.labels, results.iter().map(|r| r.status), options.strict);
    ComplianceReport {
        report_schema: REPORT_SCHEMA.to_owned(),
        engine_version: crate::ENGINE_VERSION.to_owned(),
        ruleset_version: table.version.clone(),
        registry_version: registry.version().to_owned(),
        classification: classification.labels,
        assumptions: classification.assumptions,
        strict: options.strict,
        verdict,
        results,
        elapsed_ms: start.elapsed().as_secs_f64() * 1000.0,
        disclaimer: DISCLAIMER.to_owned(),
    }
}
