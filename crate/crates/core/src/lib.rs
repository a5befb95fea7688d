//! Headless visual reinforcement-learning environments.
//!
//! A small deterministic ray-caster renders analytic-primitive scenes into
//! grayscale frames; a Gym-style [`env::Env`] wraps environment dynamics,
//! stacks the last four frames, and hands them to the agent. Three reference
//! environments ship in [`envs`]: `cartpole`, `hover2d` and `goalie`.
//!
//! External trainers can drive environments over the JSON-lines protocol in
//! [`protocol`] and [`server`].

pub mod camera;
pub mod client;
pub mod env;
pub mod envs;
pub mod math;
pub mod protocol;
pub mod render;
pub mod rng;
pub mod runner;
pub mod scene;
pub mod server;
pub mod texture;

pub use camera::Camera;
pub use env::{
    stack_to_tensor, ActionSpace, DynEnv, Dynamics, Env, EnvError, ObsStack, ObservationSpec, Reason, Seed, StepResult,
};
pub use envs::{make_env, EnvConfig, ENV_NAMES};
pub use math::Vec3;
pub use render::{render, to_grayscale, FrameBuffer, GrayFrame};
pub use scene::{Color, Material, Primitive, Scene, SceneObject, Transform};
