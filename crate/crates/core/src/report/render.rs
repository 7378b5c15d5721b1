use std::fmt::Write as _;
use std::str::FromStr;

use crate::model::{ArticleRef, AttributeValue};
use crate::rules::{CheckResult, CheckStatus, ComplianceReport, Evidence, WhatIfOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum RenderFormat {
    Json,
    #[default]
    Text,
    Markdown,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown format `{0}` (expected json, text or markdown)")]
pub struct UnknownFormat(pub String);

impl FromStr for RenderFormat {
    type Err = UnknownFormat;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(RenderFormat::Json),
            "text" => Ok(RenderFormat::Text),
            "markdown" | "md" => Ok(RenderFormat::Markdown),
            other => Err(UnknownFormat(other.to_owned())),
        }
    }
}

/// Renders a report. Every format ends with a newline.
pub fn render_report(report: &ComplianceReport, format: RenderFormat) -> String {
    match format {
        RenderFormat::Json => json(report),
        RenderFormat::Text => text(report),
        RenderFormat::Markdown => markdown(report),
    }
}

pub fn render_whatif(outcome: &WhatIfOutcome, format: RenderFormat) -> String {
    match format {
        RenderFormat::Json => json(outcome),
        RenderFormat::Text => whatif_text(outcome),
        RenderFormat::Markdown => whatif_markdown(outcome),
    }
}

fn json<T: serde::Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("report serialization is infallible");
    out.push('\n');
    out
}

fn articles(refs: &[ArticleRef]) -> String {
    refs.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn observed(value: &AttributeValue) -> String {
    match value {
        AttributeValue::Unanswered => "unanswered".to_owned(),
        v => v.to_string(),
    }
}

fn evidence_item(e: &Evidence) -> String {
    format!("{}:{}={} ({})", e.card_id, e.attribute_id, observed(&e.observed), e.state)
}

fn labels(report: &ComplianceReport) -> String {
    report.classification.iter().map(|l| l.as_str()).collect::<Vec<_>>().join(", ")
}

fn status_tag(status: CheckStatus) -> &'static str {
    match status {
        CheckStatus::Pass => "PASS",
        CheckStatus::Fail => "FAIL",
        CheckStatus::Indeterminate => "INDETERMINATE",
        CheckStatus::NotApplicable => "N/A",
    }
}

fn summary(report: &ComplianceReport) -> String {
    format!(
        "{} pass, {} fail, {} indeterminate, {} not applicable",
        report.count(CheckStatus::Pass),
        report.count(CheckStatus::Fail),
        report.count(CheckStatus::Indeterminate),
        report.count(CheckStatus::NotApplicable)
    )
}

fn text(report: &ComplianceReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "Compliance report: ruleset {}, registry {}, engine {}{}",
        report.ruleset_version,
        report.registry_version,
        report.engine_version,
        if report.strict { ", strict" } else { "" }
    );
    let _ = writeln!(out, "NOTE: {}", report.disclaimer);
    let _ = writeln!(out, "Classification: {}", labels(report));
    for a in &report.assumptions {
        let _ = writeln!(out, "Assumed: {} = {} (unanswered)", a.attribute, a.assumed);
    }
    let width = report.results.iter().map(|r| r.requirement_id.len()).max().unwrap_or(0);
    for r in &report.results {
        let _ = write!(out, "{:<13} {:<width$}  {}", status_tag(r.status), r.requirement_id, r.title);
        if !r.evidence.is_empty() {
            let items: Vec<String> = r.evidence.iter().map(evidence_item).collect();
            let _ = write!(out, "  [{}]", items.join("; "));
        }
        out.push('\n');
    }
    let _ = writeln!(out, "Summary: {} ({:.3} ms)", summary(report), report.elapsed_ms);
    let _ = writeln!(out, "VERDICT: {}", report.verdict.banner());
    out
}

fn cell(s: &str) -> String {
    s.replace('|', "\\|").replace('\n', " ")
}

fn markdown_row(r: &CheckResult) -> String {
    let evidence: Vec<String> = r
        .evidence
        .iter()
        .map(|e| format!("`{}`", cell(&evidence_item(e))))
        .collect();
    format!(
        "| {} | {} | {} | {} | {} |",
        r.requirement_id,
        cell(&r.title),
        cell(&articles(&r.articles)),
        status_tag(r.status),
        if evidence.is_empty() { String::new() } else { evidence.join("<br>") }
    )
}

fn markdown(report: &ComplianceReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# Compliance report\n");
    let _ = writeln!(out, "> {}\n", report.disclaimer);
    let _ = writeln!(out, "- **Verdict:** {}{}", report.verdict.banner(), if report.strict { " (strict)" } else { "" });
    let _ = writeln!(out, "- **Classification:** {}", labels(report));
    for a in &report.assumptions {
        let _ = writeln!(out, "- **Assumed:** `{}` = `{}` (unanswered)", a.attribute, a.assumed);
    }
    let _ = writeln!(
        out,
        "- **Versions:** ruleset {}, registry {}, engine {}",
        report.ruleset_version, report.registry_version, report.engine_version
    );
    let _ = writeln!(out, "- **Summary:** {}\n", summary(report));
    out.push_str("| Requirement | Title | Articles | Status | Evidence |\n");
    out.push_str("|---|---|---|---|---|\n");
    for r in &report.results {
        out.push_str(&markdown_row(r));
        out.push('\n');
    }
    out
}

fn changes(outcome: &WhatIfOutcome) -> Vec<(String, CheckStatus, CheckStatus)> {
    outcome
        .delta
        .iter()
        .filter_map(|id| {
            let before = outcome.baseline.result(id)?.status;
            let after = outcome.mutated.result(id)?.status;
            Some((id.clone(), before, after))
        })
        .collect()
}

fn whatif_text(outcome: &WhatIfOutcome) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "NOTE: {}", outcome.mutated.disclaimer);
    let _ = writeln!(out, "Baseline verdict: {}", outcome.baseline.verdict.banner());
    let _ = writeln!(out, "Mutated verdict: {}", outcome.mutated.verdict.banner());
    let _ = writeln!(out, "Changed requirements: {}", outcome.delta.len());
    for (id, before, after) in changes(outcome) {
        let _ = writeln!(out, "  {id}: {before} -> {after}");
    }
    let _ = writeln!(
        out,
        "VERDICT: {} -> {}",
        outcome.baseline.verdict.banner(),
        outcome.mutated.verdict.banner()
    );
    out
}

fn whatif_markdown(outcome: &WhatIfOutcome) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# What-if analysis\n");
    let _ = writeln!(out, "> {}\n", outcome.mutated.disclaimer);
    let _ = writeln!(
        out,
        "- **Verdict:** {} -> {}\n",
        outcome.baseline.verdict.banner(),
        outcome.mutated.verdict.banner()
    );
    out.push_str("| Requirement | Baseline | Mutated |\n");
    out.push_str("|---|---|---|\n");
    for (id, before, after) in changes(outcome) {
        let _ = writeln!(out, "| {id} | {} | {} |", status_tag(before), status_tag(after));
    }
    out
}
