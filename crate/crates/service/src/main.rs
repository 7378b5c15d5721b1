use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use anyhow::Context;
use cc_service::{router, Engine, ServiceConfig, DEFAULT_MAX_BODY};
use clap::{Parser, ValueEnum};
use compliance_cards::rules::RuleTable;
use compliance_cards::{baseline_registry, AttributeRegistry};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Cors {
    /// Permissive when listening on a loopback address.
    Auto,
    On,
    Off,
}

#[derive(Debug, Parser)]
#[command(name = "cc-service", version, about = "Stateless HTTP API for Compliance Cards analysis")]
struct Args {
    #[arg(long, default_value = "127.0.0.1:8787", value_name = "ADDR:PORT")]
    listen: SocketAddr,
    #[arg(long, env = "CC_RULES", value_name = "FILE")]
    rules: Option<PathBuf>,
    #[arg(long, env = "CC_REGISTRY", value_name = "FILE")]
    registry: Option<PathBuf>,
    /// Maximum request body size in bytes.
    #[arg(long, default_value_t = DEFAULT_MAX_BODY, value_name = "BYTES")]
    max_body: usize,
    /// Cross-origin policy.
    #[arg(long, value_enum, default_value_t = Cors::Auto)]
    cors: Cors,
}

#[tokio::main]
async fn main() -> anyhow::Result<()> {
    tracing_subscriber::fmt()
        .with_env_filter(tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()))
        .init();
    let args = Args::parse();

    let registry = match &args.registry {
        Some(p) => AttributeRegistry::load(p).with_context(|| format!("registry {}", p.display()))?,
        None => baseline_registry(),
    };
    let table = match &args.rules {
        Some(p) => RuleTable::load(p, &registry).with_context(|| format!("rule table {}", p.display()))?,
        None => RuleTable::bundled(&registry)?,
    };
    let config = ServiceConfig {
        max_body: args.max_body,
        cors: match args.cors {
            Cors::Auto => args.listen.ip().is_loopback(),
            Cors::On => true,
            Cors::Off => false,
        },
    };
    tracing::info!(
        registry = registry.version(),
        rules = %table.version,
        cors = config.cors,
        "listening on {}",
        args.listen
    );
    let app = router(Arc::new(Engine { registry, table }), &config);
    let listener = tokio::net::TcpListener::bind(args.listen)
        .await
        .with_context(|| format!("cannot listen on {}", args.listen))?;
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
        .context("server error")
}
