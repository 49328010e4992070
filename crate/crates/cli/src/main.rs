use std::io::IsTerminal;
use std::net::{IpAddr, SocketAddr};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use liveprof::repl::Repl;
use liveprof::report::{cmd_report, Format};
use liveprof::run::run_script;
use liveprof_core::Session;
use liveprof_server::{router, serve_tcp, Hub, Workbench};

#[derive(Parser)]
#[command(name = "liveprof", version, about = "Continuous data profiling workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Serve the live workbench: WebSocket protocol, /snapshot and the UI.
    Serve {
        #[arg(long, env = "LIVEPROF_PORT", default_value_t = 8765)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: IpAddr,
        /// Also accept the line protocol over raw TCP on this port.
        #[arg(long)]
        tcp_port: Option<u16>,
        /// Directory that relative `load` paths resolve against.
        #[arg(long, default_value = ".")]
        dir: PathBuf,
        /// Open the UI in a browser once listening.
        #[arg(long)]
        open: bool,
    },
    /// Interactive session in the terminal, optionally running a script first.
    Repl { script: Option<PathBuf> },
    /// Execute a script and write one profile JSON per table.
    Run {
        script: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Profile one CSV file.
    Report {
        csv: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> Result<ExitCode> {
    tracing_subscriber::fmt()
        .with_env_filter(tracing_subscriber::EnvFilter::from_default_env())
        .with_writer(std::io::stderr)
        .init();
    match Cli::parse().command {
        Command::Serve {
            port,
            host,
            tcp_port,
            dir,
            open,
        } => serve(SocketAddr::new(host, port), tcp_port, dir, open),
        Command::Repl { script } => {
            let mut repl = Repl::default();
            if let Some(path) = script {
                let src = std::fs::read_to_string(&path)
                    .with_context(|| format!("reading {}", path.display()))?;
                print!("{}", repl.execute(&src));
            }
            let stdin = std::io::stdin();
            let prompt = stdin.is_terminal();
            repl.run(stdin.lock(), std::io::stdout().lock(), prompt)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Run { script, out } => {
            let (result, written) = run_script(&script, &out)?;
            for f in &written {
                eprintln!("wrote {}", f.display());
            }
            match result.error {
                Some(e) => {
                    eprintln!("error: {e}");
                    Ok(ExitCode::FAILURE)
                }
                None => Ok(ExitCode::SUCCESS),
            }
        }
        Command::Report { csv, format, out } => {
            cmd_report(&csv, format, &out)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

#[tokio::main]
async fn serve(addr: SocketAddr, tcp_port: Option<u16>, dir: PathBuf, open: bool) -> Result<ExitCode> {
    let listener = tokio::net::TcpListener::bind(addr)
        .await
        .with_context(|| format!("binding {addr}"))?;
    let tcp = match tcp_port {
        Some(p) => Some(
            tokio::net::TcpListener::bind(SocketAddr::new(addr.ip(), p))
                .await
                .with_context(|| format!("binding tcp port {p}"))?,
        ),
        None => None,
    };
    let hub = Hub::spawn(Workbench::new(Session::new().with_base_dir(dir)));
    let local = listener.local_addr()?;
    eprintln!("liveprof listening on http://{local}");
    if let Some(tcp) = tcp {
        eprintln!("line protocol on tcp://{}", tcp.local_addr()?);
        let hub = hub.clone();
        tokio::spawn(async move {
            if let Err(e) = serve_tcp(tcp, hub).await {
                tracing::error!("tcp listener stopped: {e}");
            }
        });
    }
    if open {
        open_browser(&format!("http://{local}/"));
    }
    axum::serve(listener, router(hub))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(ExitCode::SUCCESS)
}

fn open_browser(url: &str) {
    let cmd = if cfg!(target_os = "macos") {
        "open"
    } else if cfg!(windows) {
        "explorer"
    } else {
        "xdg-open"
    };
    if let Err(e) = std::process::Command::new(cmd).arg(url).spawn() {
        eprintln!("could not open a browser: {e}");
    }
}
