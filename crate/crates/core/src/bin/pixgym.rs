use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use pixgym::envs::{EnvConfig, ENV_NAMES};
use pixgym::runner::{self, Policy, RunConfig, RunError};
use pixgym::server;

const EXIT_USAGE: u8 = 2;
const EXIT_RUNTIME: u8 = 3;

#[derive(Parser)]
#[command(name = "pixgym", version, about = "Headless visual RL environments")]
struct Cli {
    /// TOML file overriding environment parameters.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Roll out episodes and print one JSON summary line per episode.
    Run {
        #[arg(long, value_parser = ENV_NAMES)]
        env: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        episodes: u64,
        #[arg(long, value_enum, default_value_t = Policy::Random)]
        policy: Policy,
        /// Truncate episodes after this many steps.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        max_steps: Option<u64>,
        /// Directory for per-step PNG frames.
        #[arg(long)]
        dump: Option<PathBuf>,
        /// Write the first reset scene as JSON to this file.
        #[arg(long)]
        scene_dump: Option<PathBuf>,
    },
    /// Measure samples per second under a random policy.
    Bench {
        #[arg(long, value_parser = ENV_NAMES)]
        env: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        steps: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Speak the JSON-lines protocol on stdio or TCP.
    Serve {
        #[arg(long, value_enum, default_value_t = Transport::Stdio)]
        transport: Transport,
        #[arg(long, default_value_t = 7878)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Transport {
    Stdio,
    Tcp,
}

fn exec(cli: Cli) -> Result<(), RunError> {
    let config = match &cli.config {
        Some(path) => EnvConfig::load(path).map_err(|e| RunError::Usage(e.to_string()))?,
        None => EnvConfig::default(),
    };
    match cli.command {
        Command::Run {
            env,
            seed,
            episodes,
            policy,
            max_steps,
            dump,
            scene_dump,
        } => {
            let cfg = RunConfig {
                env,
                seed,
                episodes,
                max_steps,
                policy,
                dump_dir: dump,
                scene_dump,
                config,
            };
            let stdout = io::stdout();
            runner::run(&cfg, &mut stdout.lock())?;
        }
        Command::Bench { env, steps, seed } => {
            let report = runner::bench(&env, steps, seed, &config)?;
            let mut stdout = io::stdout().lock();
            writeln!(stdout, "{}", serde_json::to_string(&report).expect("report serializes")).map_err(|source| {
                RunError::Io {
                    path: "<stdout>".into(),
                    source,
                }
            })?;
        }
        Command::Serve { transport, port, host } => {
            let served = match transport {
                Transport::Stdio => server::serve_stdio(config),
                Transport::Tcp => {
                    log::info!("listening on {host}:{port}");
                    server::serve_tcp((host.as_str(), port), config)
                }
            };
            served.map_err(|source| RunError::Io {
                path: "<server>".into(),
                source,
            })?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match exec(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ RunError::Usage(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_RUNTIME)
        }
    }
}
