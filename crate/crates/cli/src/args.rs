use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub const EXIT_CODES: &str = "\
Exit codes:
  0  compliant (validate: every file passed)
  1  I/O error, usage error or invalid configuration
  2  card validation failure
  3  non-compliant or prohibited
  4  indeterminate
  5  out of scope";

#[derive(Debug, Parser)]
#[command(
    name = "cc",
    about = "Validate Compliance Cards and analyse AI projects against the AI Act rule table",
    after_help = EXIT_CODES,
    disable_version_flag = true,
    subcommand_required = false,
    arg_required_else_help = true
)]
pub struct Cli {
    /// Print engine, registry and rule-table versions.
    #[arg(short = 'V', long)]
    pub version: bool,

    /// Attribute registry file (extends or replaces the bundled registry).
    #[arg(long, global = true, env = "CC_REGISTRY", value_name = "FILE")]
    pub registry: Option<PathBuf>,

    /// Rule table file (replaces the bundled table).
    #[arg(long, global = true, env = "CC_RULES", value_name = "FILE")]
    pub rules: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate card files; issues go to stderr as FILE:PATH:CODE lines.
    #[command(after_help = EXIT_CODES)]
    Validate {
        #[arg(required = true, value_name = "FILE")]
        paths: Vec<PathBuf>,
        /// Require every file to be a card of this kind.
        #[arg(long, value_enum)]
        kind: Option<Kind>,
    },
    /// Analyse a card set and print the compliance report.
    #[command(after_help = EXIT_CODES)]
    Analyze {
        #[command(flatten)]
        set: SetArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Explain one requirement's outcome for a card set.
    #[command(after_help = EXIT_CODES)]
    Explain {
        #[command(flatten)]
        set: SetArgs,
        /// Requirement id, e.g. R-ART10-DATA-GOVERNANCE.
        requirement: String,
    },
    /// Print a card template with every applicable attribute unanswered.
    Scaffold {
        #[arg(long, value_enum)]
        kind: Kind,
        /// Write to FILE instead of stdout.
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Compare the report for a card set with the report for an edited copy.
    #[command(after_help = EXIT_CODES)]
    Whatif {
        #[command(flatten)]
        set: SetArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Set an attribute: CARD_ID:ATTRIBUTE=VALUE (VALUE may be null).
        #[arg(long = "set", value_name = "CARD:ATTR=VALUE")]
        sets: Vec<String>,
        /// Swap in a model card: [CARD_ID=]FILE.
        #[arg(long = "replace-model", value_name = "[CARD_ID=]FILE")]
        replace_model: Vec<String>,
        /// Swap in a data card: [CARD_ID=]FILE.
        #[arg(long = "replace-data", value_name = "[CARD_ID=]FILE")]
        replace_data: Vec<String>,
    },
}

#[derive(Debug, Args)]
pub struct SetArgs {
    /// Project card file.
    #[arg(long, value_name = "FILE")]
    pub project: PathBuf,
    /// Data card files.
    #[arg(long, value_name = "FILE", num_args = 1..)]
    pub data: Vec<PathBuf>,
    /// Model card files.
    #[arg(long, value_name = "FILE", num_args = 1..)]
    pub model: Vec<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Treat an indeterminate verdict as non-compliant.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Project,
    Data,
    Model,
}

impl From<Kind> for compliance_cards::CardKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Project => compliance_cards::CardKind::Project,
            Kind::Data => compliance_cards::CardKind::Data,
            Kind::Model => compliance_cards::CardKind::Model,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Markdown,
}

impl From<Format> for compliance_cards::report::RenderFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Text => compliance_cards::report::RenderFormat::Text,
            Format::Json => compliance_cards::report::RenderFormat::Json,
            Format::Markdown => compliance_cards::report::RenderFormat::Markdown,
        }
    }
}
