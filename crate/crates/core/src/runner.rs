//! Episode rollouts and throughput benchmarking.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::env::{EnvError, Reason, Seed};
use crate::envs::EnvConfig;
use crate::render::RenderError;
use crate::rng::SplitMix64;

/// Mixed into the run seed so the random policy never shares a stream
/// with environment resets.
const POLICY_STREAM: u64 = 0xB5AD_4ECE_DA1C_E2A9;

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Env(#[from] EnvError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("writing frame: {0}")]
    Frame(#[from] RenderError),
    #[error("usage: {0}")]
    Usage(String),
}

impl RunError {
    fn io(path: &Path, source: io::Error) -> Self {
        RunError::Io {
            path: path.to_owned(),
            source,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Policy {
    #[default]
    Random,
    Scripted,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub env: String,
    pub seed: u64,
    pub episodes: u64,
    /// Truncates episodes that run longer than this many steps.
    pub max_steps: Option<u64>,
    pub policy: Policy,
    /// Every observation frame is written here as `ep{episode:04}_st{step:04}.png`.
    pub dump_dir: Option<PathBuf>,
    /// The first episode's reset scene is written here as JSON.
    pub scene_dump: Option<PathBuf>,
    pub config: EnvConfig,
}

impl RunConfig {
    pub fn new(env: impl Into<String>, seed: u64, episodes: u64) -> Self {
        Self {
            env: env.into(),
            seed,
            episodes,
            max_steps: None,
            policy: Policy::Random,
            dump_dir: None,
            scene_dump: None,
            config: EnvConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeSummary {
    pub episode: u64,
    pub seed: u64,
    pub reward: f64,
    pub length: u64,
    pub reason: Reason,
    pub truncated: bool,
}

/// Reset seed used for episode `episode` of a run seeded with `seed`.
pub fn episode_seed(seed: u64, episode: u64) -> u64 {
    seed.wrapping_add(episode)
}

pub fn frame_file_name(episode: u64, step: u64) -> String {
    format!("ep{episode:04}_st{step:04}.png")
}

/// Runs the configured episodes, writing one JSON summary line per episode
/// to `out`.
pub fn run(cfg: &RunConfig, out: &mut dyn Write) -> Result<Vec<EpisodeSummary>, RunError> {
    let mut env = cfg.config.make(&cfg.env)?;
    if let Some(dir) = &cfg.dump_dir {
        fs::create_dir_all(dir).map_err(|e| RunError::io(dir, e))?;
    }
    let mut policy_rng = SplitMix64::new(cfg.seed ^ POLICY_STREAM);
    let n_actions = env.action_space().n as u64;
    let mut summaries = Vec::with_capacity(cfg.episodes as usize);

    for episode in 0..cfg.episodes {
        let seed = episode_seed(cfg.seed, episode);
        env.reset(Seed(seed))?;
        if episode == 0 {
            if let Some(path) = &cfg.scene_dump {
                let json = env.scene().to_json().expect("scenes serialize");
                fs::write(path, json).map_err(|e| RunError::io(path, e))?;
            }
        }
        if let Some(dir) = &cfg.dump_dir {
            let obs = env.observation().expect("just reset");
            obs.latest().save_png(dir.join(frame_file_name(episode, 0)))?;
        }

        let mut total = 0.0;
        let mut summary = None;
        loop {
            let action = match cfg.policy {
                Policy::Random => policy_rng.below(n_actions) as usize,
                Policy::Scripted => env.scripted_action(),
            };
            let r = env.step(action as i64)?;
            total += r.reward;
            if let Some(dir) = &cfg.dump_dir {
                r.obs
                    .latest()
                    .save_png(dir.join(frame_file_name(episode, r.step_index)))?;
            }
            let truncated = !r.done && cfg.max_steps.is_some_and(|m| r.step_index >= m);
            if r.done || truncated {
                summary = Some(EpisodeSummary {
                    episode,
                    seed,
                    reward: total,
                    length: r.step_index,
                    reason: r.reason,
                    truncated,
                });
            }
            if let Some(s) = summary.take() {
                writeln!(out, "{}", serde_json::to_string(&s).expect("summary serializes"))
                    .map_err(|e| RunError::io(Path::new("<output>"), e))?;
                summaries.push(s);
                break;
            }
        }
    }
    Ok(summaries)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub env: String,
    pub total_steps: u64,
    pub episodes: u64,
    pub wall_time_s: f64,
    pub samples_per_second: f64,
    pub render_time_mean_s: f64,
    pub render_time_p50_s: f64,
    pub render_time_p95_s: f64,
    pub render_time_max_s: f64,
    /// Step time not spent rendering: dynamics, stacking and bookkeeping.
    pub overhead_mean_s: f64,
}

fn percentile(sorted: &[Duration], q: f64) -> f64 {
    if sorted.is_empty() {
        return 0.0;
    }
    let idx = ((sorted.len() - 1) as f64 * q).round() as usize;
    sorted[idx].as_secs_f64()
}

/// Steps `env_name` `steps` times under a random policy, resetting on done.
pub fn bench(env_name: &str, steps: u64, seed: u64, config: &EnvConfig) -> Result<BenchReport, RunError> {
    if steps == 0 {
        return Err(RunError::Usage("bench needs at least one step".into()));
    }
    let mut env = config.make(env_name)?;
    let mut rng = SplitMix64::new(seed ^ POLICY_STREAM);
    let n = env.action_space().n as u64;
    let mut renders = Vec::with_capacity(steps as usize);
    let mut overhead = Duration::ZERO;
    let mut episodes = 1;

    let start = Instant::now();
    env.reset(Seed(seed))?;
    for _ in 0..steps {
        let t0 = Instant::now();
        let r = env.step(rng.below(n) as i64)?;
        let step_time = t0.elapsed();
        let render = env.last_render_time();
        renders.push(render);
        overhead += step_time.saturating_sub(render);
        if r.done {
            env.reset(Seed(seed.wrapping_add(episodes)))?;
            episodes += 1;
        }
    }
    let wall = start.elapsed().as_secs_f64();

    let mean_render = renders.iter().map(Duration::as_secs_f64).sum::<f64>() / steps as f64;
    renders.sort_unstable();
    Ok(BenchReport {
        env: env_name.to_owned(),
        total_steps: steps,
        episodes,
        wall_time_s: wall,
        samples_per_second: steps as f64 / wall,
        render_time_mean_s: mean_render,
        render_time_p50_s: percentile(&renders, 0.5),
        render_time_p95_s: percentile(&renders, 0.95),
        render_time_max_s: renders.last().map_or(0.0, Duration::as_secs_f64),
        overhead_mean_s: overhead.as_secs_f64() / steps as f64,
    })
}
