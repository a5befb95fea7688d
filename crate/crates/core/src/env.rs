//! Gym-style environment lifecycle shared by every environment: seeded
//! reset, validated step, and a fixed-depth stack of grayscale frames.
//!
//! The stack is ordered oldest first. On reset it holds `depth` copies of the
//! first frame; each step pushes the newest frame and evicts the oldest.

use std::collections::VecDeque;
use std::fmt;
use std::time::{Duration, Instant};

use ndarray::Array3;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::render::{render_gray, GrayFrame, RenderError};
use crate::rng::SplitMix64;
use crate::scene::Scene;

#[derive(Debug, Error)]
pub enum EnvError {
    #[error("action {action} out of range for {n} discrete actions")]
    InvalidAction { action: i64, n: usize },
    #[error("episode is done; call reset before stepping again")]
    SteppedAfterDone,
    #[error("environment has not been reset")]
    NotReset,
    #[error("unknown environment {0:?} (expected cartpole, hover2d or goalie)")]
    UnknownEnv(String),
    #[error(transparent)]
    Render(#[from] RenderError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionSpace {
    pub n: usize,
}

impl ActionSpace {
    pub fn discrete(n: usize) -> Self {
        assert!(n >= 1, "action space needs at least one action");
        Self { n }
    }

    pub fn contains(&self, action: i64) -> bool {
        action >= 0 && (action as u64) < self.n as u64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ObservationSpec {
    pub height: u32,
    pub width: u32,
    pub depth: usize,
}

impl Default for ObservationSpec {
    fn default() -> Self {
        Self {
            height: 100,
            width: 100,
            depth: 4,
        }
    }
}

impl ObservationSpec {
    pub fn is_valid(&self) -> bool {
        self.height >= 1 && self.width >= 1 && self.depth >= 1
    }

    /// Bytes in one serialized observation tensor.
    pub fn tensor_len(&self) -> usize {
        self.height as usize * self.width as usize * self.depth
    }
}

/// Why an episode ended, or `Running` while it has not.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reason {
    Running,
    Win,
    OutOfBounds,
    Fell,
    MaxSteps,
    Caught,
    Missed,
}

impl Reason {
    pub fn is_terminal(self) -> bool {
        self != Reason::Running
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Reason::Running => "running",
            Reason::Win => "win",
            Reason::OutOfBounds => "out_of_bounds",
            Reason::Fell => "fell",
            Reason::MaxSteps => "max_steps",
            Reason::Caught => "caught",
            Reason::Missed => "missed",
        }
    }
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Reward and termination verdict for one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Judgement {
    pub reward: f64,
    pub reason: Reason,
}

impl Judgement {
    pub fn running(reward: f64) -> Self {
        Self {
            reward,
            reason: Reason::Running,
        }
    }

    pub fn done(&self) -> bool {
        self.reason.is_terminal()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Seed(pub u64);

/// Ring of the last `depth` observation frames, oldest first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObsStack {
    frames: VecDeque<GrayFrame>,
}

impl ObsStack {
    /// A full stack of `depth` copies of `frame`.
    pub fn filled(frame: GrayFrame, depth: usize) -> Self {
        assert!(depth >= 1);
        Self {
            frames: std::iter::repeat_n(frame, depth).collect(),
        }
    }

    /// Pushes the newest frame and evicts the oldest.
    ///
    /// # Panics
    /// If `frame` does not match the stack's dimensions.
    pub fn push(&mut self, frame: GrayFrame) {
        let head = &self.frames[0];
        assert_eq!(
            (frame.width(), frame.height()),
            (head.width(), head.height()),
            "frame size mismatch"
        );
        self.frames.pop_front();
        self.frames.push_back(frame);
    }

    pub fn depth(&self) -> usize {
        self.frames.len()
    }

    pub fn width(&self) -> u32 {
        self.frames[0].width()
    }

    pub fn height(&self) -> u32 {
        self.frames[0].height()
    }

    /// Frame `i`, with 0 the oldest.
    pub fn frame(&self, i: usize) -> &GrayFrame {
        &self.frames[i]
    }

    pub fn latest(&self) -> &GrayFrame {
        self.frames.back().expect("stack is never empty")
    }

    pub fn frames(&self) -> impl Iterator<Item = &GrayFrame> {
        self.frames.iter()
    }

    /// Interleaved bytes in (height, width, depth) order, depth fastest.
    pub fn to_bytes(&self) -> Vec<u8> {
        let (h, w, d) = (self.height() as usize, self.width() as usize, self.depth());
        let mut out = vec![0u8; h * w * d];
        for (k, frame) in self.frames.iter().enumerate() {
            for (i, &p) in frame.pixels().iter().enumerate() {
                out[i * d + k] = p;
            }
        }
        out
    }
}

/// The stack as an `(height, width, depth)` tensor; channel `d` is the
/// `d`-th oldest frame.
pub fn stack_to_tensor(stack: &ObsStack) -> Array3<u8> {
    let shape = (stack.height() as usize, stack.width() as usize, stack.depth());
    Array3::from_shape_vec(shape, stack.to_bytes()).expect("stack bytes match shape")
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepResult {
    pub obs: ObsStack,
    pub reward: f64,
    pub done: bool,
    pub reason: Reason,
    pub step_index: u64,
}

/// Hidden-state logic of one environment: dynamics, reward rules and the
/// scene that makes the state visible.
pub trait Dynamics {
    fn name(&self) -> &'static str;
    fn action_space(&self) -> ActionSpace;
    /// Re-initializes the hidden state from `rng`.
    fn reset(&mut self, rng: &mut SplitMix64);
    /// Advances the hidden state one tick. `action` is already range-checked.
    fn advance(&mut self, action: usize);
    fn judge(&self) -> Judgement;
    fn scene(&self, resolution: (u32, u32)) -> Scene;
    /// A hand-written policy that solves the task most of the time.
    fn scripted_action(&self) -> usize;
}

impl<D: Dynamics + ?Sized> Dynamics for Box<D> {
    fn name(&self) -> &'static str {
        (**self).name()
    }
    fn action_space(&self) -> ActionSpace {
        (**self).action_space()
    }
    fn reset(&mut self, rng: &mut SplitMix64) {
        (**self).reset(rng)
    }
    fn advance(&mut self, action: usize) {
        (**self).advance(action)
    }
    fn judge(&self) -> Judgement {
        (**self).judge()
    }
    fn scene(&self, resolution: (u32, u32)) -> Scene {
        (**self).scene(resolution)
    }
    fn scripted_action(&self) -> usize {
        (**self).scripted_action()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    Fresh,
    Running,
    Done,
}

/// A visual environment: dynamics plus rendering and frame stacking.
pub struct Env<D> {
    dynamics: D,
    spec: ObservationSpec,
    stack: Option<ObsStack>,
    phase: Phase,
    step_index: u64,
    last_render: Duration,
}

pub type DynEnv = Env<Box<dyn Dynamics + Send>>;

impl<D: Dynamics> Env<D> {
    pub fn new(dynamics: D, spec: ObservationSpec) -> Self {
        assert!(spec.is_valid(), "observation spec must be non-empty");
        Self {
            dynamics,
            spec,
            stack: None,
            phase: Phase::Fresh,
            step_index: 0,
            last_render: Duration::ZERO,
        }
    }

    pub fn name(&self) -> &'static str {
        self.dynamics.name()
    }

    pub fn action_space(&self) -> ActionSpace {
        self.dynamics.action_space()
    }

    pub fn observation_spec(&self) -> ObservationSpec {
        self.spec
    }

    pub fn dynamics(&self) -> &D {
        &self.dynamics
    }

    /// Current observation, if the environment has been reset.
    pub fn observation(&self) -> Option<&ObsStack> {
        self.stack.as_ref()
    }

    pub fn step_index(&self) -> u64 {
        self.step_index
    }

    pub fn is_done(&self) -> bool {
        self.phase == Phase::Done
    }

    /// Wall time of the most recent render.
    pub fn last_render_time(&self) -> Duration {
        self.last_render
    }

    /// Scene for the current hidden state at the configured resolution.
    pub fn scene(&self) -> Scene {
        self.dynamics.scene((self.spec.width, self.spec.height))
    }

    fn render_frame(&mut self) -> Result<GrayFrame, EnvError> {
        let scene = self.scene();
        let start = Instant::now();
        let frame = render_gray(&scene)?;
        self.last_render = start.elapsed();
        Ok(frame)
    }

    pub fn reset(&mut self, seed: Seed) -> Result<&ObsStack, EnvError> {
        let mut rng = SplitMix64::new(seed.0);
        self.dynamics.reset(&mut rng);
        let frame = self.render_frame()?;
        self.stack = Some(ObsStack::filled(frame, self.spec.depth));
        self.phase = Phase::Running;
        self.step_index = 0;
        Ok(self.stack.as_ref().expect("just set"))
    }

    pub fn step(&mut self, action: i64) -> Result<StepResult, EnvError> {
        match self.phase {
            Phase::Fresh => return Err(EnvError::NotReset),
            Phase::Done => return Err(EnvError::SteppedAfterDone),
            Phase::Running => {}
        }
        let space = self.action_space();
        if !space.contains(action) {
            return Err(EnvError::InvalidAction { action, n: space.n });
        }
        self.dynamics.advance(action as usize);
        let verdict = self.dynamics.judge();
        let frame = self.render_frame()?;
        let stack = self.stack.as_mut().expect("running implies a stack");
        stack.push(frame);
        self.step_index += 1;
        if verdict.done() {
            self.phase = Phase::Done;
        }
        Ok(StepResult {
            obs: stack.clone(),
            reward: verdict.reward,
            done: verdict.done(),
            reason: verdict.reason,
            step_index: self.step_index,
        })
    }

    pub fn scripted_action(&self) -> usize {
        self.dynamics.scripted_action()
    }
}
