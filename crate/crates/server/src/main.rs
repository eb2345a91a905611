use std::path::PathBuf;
use std::sync::Arc;

use anyhow::Context;
use clap::Parser;
use dpverify_server::{http, ServerConfig, VerificationService};

/// Serve verification queries over HTTP.
#[derive(Parser)]
#[command(name = "dpverify-server", version)]
struct Cli {
    /// TOML configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the configured listen address.
    #[arg(long)]
    listen: Option<std::net::SocketAddr>,
}

#[tokio::main]
async fn main() -> anyhow::Result<()> {
    let cli = Cli::parse();
    let mut config = match &cli.config {
        Some(p) => {
            ServerConfig::from_file(p).with_context(|| format!("reading {}", p.display()))?
        }
        None => ServerConfig::default(),
    };
    if let Some(addr) = cli.listen {
        config.listen = addr;
    }
    let addr = config.listen;
    let service = Arc::new(VerificationService::new(config)?);
    let listener = tokio::net::TcpListener::bind(addr)
        .await
        .with_context(|| format!("binding {addr}"))?;
    eprintln!("listening on {}", listener.local_addr()?);
    axum::serve(listener, http::router(service))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}
