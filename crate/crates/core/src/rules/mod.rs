//! Classification, the rule table and its evaluator.

mod analyze;
mod classify;
mod eval;
mod label;
mod table;
mod whatif;

pub use analyze::{
    analyze, analyze_batch, applicable_requirements, verdict_for, AnalysisOptions, CheckResult, CheckStatus,
    ComplianceReport, Verdict, DISCLAIMER, REPORT_SCHEMA,
};
pub use classify::{classify, Assumption, Classification};
pub use eval::{evaluate_check, EvalContext, Evidence, GENERAL_PURPOSE, INTENDED_PURPOSE};
pub use label::{labels_consistent, Applicability, ClassificationLabel, LabelSet};
pub use table::{Builtin, Check, CheckScope, CheckTarget, Requirement, RuleTable, RuleTableError};
pub use whatif::{apply_mutations, what_if, Mutation, WhatIfError, WhatIfOutcome};

/// Attribute ids consulted by [`classify`].
pub mod dispositive {
    pub use super::classify::{
        EXCEPTION, GPAI_SYSTEMIC_RISK, HIGH_RISK_BASIS, IS_AI_SYSTEM, IS_GPAI_MODEL, OPERATOR_ROLE, PLACED_ON_EU_MARKET,
        PROHIBITED_PRACTICES, PUT_INTO_SERVICE_IN_EU,
    };
}
