use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context;
use compliance_cards::exec::ExecutionMode;
use compliance_cards::io::{self, load_card_set, parse_card, parse_value_text, IssueCode, LoadError, SourcedIssue, ValidationIssue};
use compliance_cards::report::{explain_requirement, render_report, render_whatif};
use compliance_cards::rules::{analyze, what_if, AnalysisOptions, ComplianceReport, Mutation, RuleTable, Verdict};
use compliance_cards::{baseline_registry, AttributeRegistry, CardKind, CardSet, ComplianceCard};

use crate::args::{Cli, Command, OutputArgs, SetArgs};
use crate::scaffold;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NON_COMPLIANT: i32 = 3;
pub const EXIT_INDETERMINATE: i32 = 4;
pub const EXIT_OUT_OF_SCOPE: i32 = 5;

/// A failure that ends the command with a specific exit code.
#[derive(Debug)]
pub enum Failure {
    /// I/O, configuration or usage problem (exit 1).
    Error(anyhow::Error),
    /// Card validation failure (exit 2).
    Invalid(Vec<SourcedIssue>),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Error(e)
    }
}

impl Failure {
    pub fn report(self) -> i32 {
        match self {
            Failure::Error(e) => {
                eprintln!("error: {e:#}");
                EXIT_ERROR
            }
            Failure::Invalid(issues) => {
                for i in &issues {
                    eprintln!("{i}");
                }
                EXIT_INVALID
            }
        }
    }
}

type Outcome = Result<i32, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Error(anyhow::anyhow!("{}", msg.into()))
}

pub fn exit_code(verdict: Verdict) -> i32 {
    match verdict {
        Verdict::Compliant => EXIT_OK,
        Verdict::NonCompliant | Verdict::Prohibited => EXIT_NON_COMPLIANT,
        Verdict::Indeterminate => EXIT_INDETERMINATE,
        Verdict::OutOfScope => EXIT_OUT_OF_SCOPE,
    }
}

struct Config {
    registry: AttributeRegistry,
    table: RuleTable,
}

fn load_registry(path: Option<&Path>) -> anyhow::Result<AttributeRegistry> {
    match path {
        Some(p) => AttributeRegistry::load(p).with_context(|| format!("registry {}", p.display())),
        None => Ok(baseline_registry()),
    }
}

fn load_config(cli: &Cli) -> anyhow::Result<Config> {
    let registry = load_registry(cli.registry.as_deref())?;
    let table = match &cli.rules {
        Some(p) => RuleTable::load(p, &registry).with_context(|| format!("rule table {}", p.display()))?,
        None => RuleTable::bundled(&registry).context("bundled rule table does not match the registry")?,
    };
    Ok(Config { registry, table })
}

fn print_warnings(warnings: &[SourcedIssue]) {
    for w in warnings {
        eprintln!("{w}");
    }
}

fn load_set(args: &SetArgs, registry: &AttributeRegistry) -> Result<CardSet, Failure> {
    match load_card_set(&args.project, &args.data, &args.model, registry, ExecutionMode::default()) {
        Ok(loaded) => {
            print_warnings(&loaded.warnings);
            Ok(loaded.set)
        }
        Err(LoadError::Io { path, source }) => {
            Err(Failure::Error(anyhow::anyhow!("cannot read {}: {source}", path.display())))
        }
        Err(LoadError::Invalid(issues)) => Err(Failure::Invalid(issues)),
    }
}

fn write_stdout(text: &str) -> anyhow::Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes()).context("writing to stdout")?;
    out.flush().context("writing to stdout")
}

pub fn run(cli: Cli) -> Outcome {
    if cli.version {
        return version(&cli);
    }
    let Some(command) = &cli.command else {
        return Err(usage("no command given (see `cc --help`)"));
    };
    match command {
        Command::Validate { paths, kind } => {
            let registry = load_registry(cli.registry.as_deref())?;
            validate(paths, kind.map(Into::into), &registry)
        }
        Command::Analyze { set, output } => {
            let config = load_config(&cli)?;
            let report = run_analysis(set, output.strict, &config)?;
            write_stdout(&render_report(&report, output.format.into()))?;
            Ok(exit_code(report.verdict))
        }
        Command::Explain { set, requirement } => {
            let config = load_config(&cli)?;
            let report = run_analysis(set, false, &config)?;
            let ex = explain_requirement(&report, requirement, &config.registry).map_err(|e| usage(e.to_string()))?;
            let refs: Vec<String> = ex.articles.iter().map(ToString::to_string).collect();
            write_stdout(&format!(
                "{}: {} [{}]\nArticles: {}\n{}\nHint: {}\n",
                ex.requirement_id,
                ex.title,
                ex.status,
                refs.join(", "),
                ex.narrative,
                ex.remediation_hint
            ))?;
            Ok(exit_code(report.verdict))
        }
        Command::Scaffold { kind, output } => {
            let registry = load_registry(cli.registry.as_deref())?;
            let text = scaffold::template(&registry, (*kind).into());
            match output {
                Some(path) => std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?,
                None => write_stdout(&text)?,
            }
            Ok(EXIT_OK)
        }
        Command::Whatif { set, output, sets, replace_model, replace_data } => {
            if sets.is_empty() && replace_model.is_empty() && replace_data.is_empty() {
                return Err(usage("whatif needs at least one --set, --replace-model or --replace-data"));
            }
            let config = load_config(&cli)?;
            let card_set = load_set(set, &config.registry)?;
            let mut mutations = Vec::new();
            for s in sets {
                mutations.push(parse_set(s, &config.registry)?);
            }
            for (kind, specs) in [(CardKind::Model, replace_model), (CardKind::Data, replace_data)] {
                for spec in specs {
                    mutations.push(parse_replace(spec, kind, &card_set, &config.registry)?);
                }
            }
            whatif(&card_set, &mutations, output, &config)
        }
    }
}

fn version(cli: &Cli) -> Outcome {
    let config = load_config(cli)?;
    write_stdout(&format!(
        "cc {}\nengine {}\nregistry {} (card schema {})\nrules {}\n",
        env!("CARGO_PKG_VERSION"),
        compliance_cards::ENGINE_VERSION,
        config.registry.version(),
        config.registry.schema_version(),
        config.table.version
    ))?;
    Ok(EXIT_OK)
}

fn validate(paths: &[PathBuf], kind: Option<CardKind>, registry: &AttributeRegistry) -> Outcome {
    let mut unreadable = false;
    let mut invalid = false;
    for path in paths {
        let source = path.display().to_string();
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("{source}: error: cannot read: {e}");
                unreadable = true;
                continue;
            }
        };
        let mut issues = match parse_card(&text, registry) {
            Ok(parsed) => {
                let mut issues = parsed.warnings;
                if let Some(expected) = kind {
                    if parsed.card.kind != expected {
                        issues.push(ValidationIssue::error(
                            IssueCode::WrongKind,
                            "kind",
                            format!("card is of kind {} but {expected} was required", parsed.card.kind),
                        ));
                    }
                }
                issues
            }
            Err(issues) => issues,
        };
        issues.sort_by(|a, b| a.path.cmp(&b.path));
        invalid |= io::has_errors(&issues);
        for issue in issues {
            eprintln!("{}", SourcedIssue { source: source.clone(), issue });
        }
    }
    Ok(if unreadable {
        EXIT_ERROR
    } else if invalid {
        EXIT_INVALID
    } else {
        EXIT_OK
    })
}

fn run_analysis(args: &SetArgs, strict: bool, config: &Config) -> Result<ComplianceReport, Failure> {
    let set = load_set(args, &config.registry)?;
    let options = AnalysisOptions { strict, mode: ExecutionMode::default() };
    analyze(&set, &config.table, &config.registry, options).map_err(|e| Failure::Error(e.into()))
}

/// Parses `CARD_ID:ATTRIBUTE=VALUE`.
pub fn parse_set(spec: &str, registry: &AttributeRegistry) -> Result<Mutation, Failure> {
    let malformed = || usage(format!("malformed --set `{spec}`; expected CARD_ID:ATTRIBUTE=VALUE, e.g. proj1:record_keeping.logging_enabled=true"));
    let (target, value) = spec.split_once('=').ok_or_else(malformed)?;
    let (card_id, attribute) = target.rsplit_once(':').ok_or_else(malformed)?;
    if card_id.is_empty() || attribute.is_empty() {
        return Err(malformed());
    }
    let (id, value) = parse_value_text(registry, attribute, value).map_err(|e| usage(format!("--set `{spec}`: {e}")))?;
    Ok(Mutation::Set { card_id: card_id.to_owned(), attribute: id.to_string(), value })
}

fn read_card(path: &Path, kind: CardKind, registry: &AttributeRegistry) -> Result<ComplianceCard, Failure> {
    let source = path.display().to_string();
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {source}"))?;
    let sourced = |issues: Vec<ValidationIssue>| {
        Failure::Invalid(issues.into_iter().map(|issue| SourcedIssue { source: source.clone(), issue }).collect())
    };
    let parsed = parse_card(&text, registry).map_err(sourced)?;
    if parsed.card.kind != kind {
        return Err(sourced(vec![ValidationIssue::error(
            IssueCode::WrongKind,
            "kind",
            format!("replacement card is of kind {} but a {kind} card was expected", parsed.card.kind),
        )]));
    }
    for w in &parsed.warnings {
        eprintln!("{source}:{w}");
    }
    Ok(parsed.card)
}

/// Parses `[CARD_ID=]FILE`. Without an explicit id the replacement takes the
/// slot of the component sharing its card id, or the only component of its kind.
pub fn parse_replace(spec: &str, kind: CardKind, set: &CardSet, registry: &AttributeRegistry) -> Result<Mutation, Failure> {
    let components = set.components(kind);
    let (explicit, file) = match spec.split_once('=') {
        Some((id, file)) if components.iter().any(|c| c.card_id == id) => (Some(id.to_owned()), file),
        _ => (None, spec),
    };
    let card = read_card(Path::new(file), kind, registry)?;
    let card_id = match explicit {
        Some(id) => id,
        None if components.iter().any(|c| c.card_id == card.card_id) => card.card_id.clone(),
        None if components.len() == 1 => components[0].card_id.clone(),
        None => {
            return Err(usage(format!(
                "cannot tell which {kind} card `{file}` replaces; use --replace-{kind} CARD_ID={file}"
            )))
        }
    };
    Ok(Mutation::ReplaceCard { card_id, card })
}

fn whatif(set: &CardSet, mutations: &[Mutation], output: &OutputArgs, config: &Config) -> Outcome {
    let options = AnalysisOptions { strict: output.strict, mode: ExecutionMode::default() };
    let outcome = what_if(set, mutations, &config.table, &config.registry, options).map_err(|e| usage(e.to_string()))?;
    write_stdout(&render_whatif(&outcome, output.format.into()))?;
    Ok(exit_code(outcome.mutated.verdict))
}
