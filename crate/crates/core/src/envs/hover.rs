//! Hover2D: a vehicle at fixed altitude hovers over a target using
//! velocity pulses, seen through a camera pointing straight down.
//!
//! Every action is a pulse of `delta_v` along one axis; position integrates
//! velocity with step `dt`. The episode ends on the first step within
//! `success_radius` of the target (+20), on leaving the bounds square (−20),
//! or at the step cap (+10). Other steps pay 0.

use serde::{Deserialize, Serialize};

use crate::camera::Camera;
use crate::env::{ActionSpace, Dynamics, Judgement, Reason};
use crate::math::Vec3;
use crate::rng::SplitMix64;
use crate::scene::{Color, DirectionalLight, Material, Primitive, Scene, SceneObject, Transform};

pub const REWARD_TARGET: f64 = 20.0;
pub const REWARD_OUT_OF_BOUNDS: f64 = -20.0;
pub const REWARD_MAX_STEPS: f64 = 10.0;
pub const REWARD_STEP: f64 = 0.0;

pub const PULSE_UP: usize = 0;
pub const PULSE_DOWN: usize = 1;
pub const PULSE_LEFT: usize = 2;
pub const PULSE_RIGHT: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HoverParams {
    /// Half side of the square the agent must stay in, metres.
    pub bounds: f64,
    /// Agent and target start uniformly in `±spawn_range` on both axes.
    pub spawn_range: f64,
    /// Targets closer than this to the start are redrawn.
    pub min_start_distance: f64,
    pub altitude: f64,
    /// Velocity change per pulse, m/s.
    pub delta_v: f64,
    /// Integration step, seconds.
    pub dt: f64,
    pub max_steps: u64,
    pub success_radius: f64,
    pub focal_length: f64,
    pub sensor_width: f64,
    pub ground_seed: u64,
}

impl Default for HoverParams {
    fn default() -> Self {
        Self {
            bounds: 8.0,
            spawn_range: 5.0,
            min_start_distance: 2.0,
            altitude: 5.0,
            delta_v: 0.25,
            dt: 0.1,
            max_steps: 200,
            success_radius: 2.0,
            focal_length: 18.0,
            sensor_width: 36.0,
            ground_seed: 0x5EED_6A0D,
        }
    }
}

impl HoverParams {
    pub fn validate(&self) -> Result<(), String> {
        let positive = [
            ("bounds", self.bounds),
            ("spawn_range", self.spawn_range),
            ("altitude", self.altitude),
            ("delta_v", self.delta_v),
            ("dt", self.dt),
            ("success_radius", self.success_radius),
            ("focal_length", self.focal_length),
            ("sensor_width", self.sensor_width),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(format!("hover2d.{name} must be a positive number, got {v}"));
            }
        }
        if self.spawn_range >= self.bounds {
            return Err("hover2d.spawn_range must be inside hover2d.bounds".into());
        }
        if !(self.min_start_distance >= 0.0 && self.min_start_distance < self.spawn_range) {
            return Err("hover2d.min_start_distance must be in [0, spawn_range)".into());
        }
        if self.max_steps == 0 {
            return Err("hover2d.max_steps must be >= 1".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct HoverState {
    pub pos: [f64; 2],
    pub vel: [f64; 2],
    pub target: [f64; 2],
    pub t: u64,
}

impl HoverState {
    pub fn distance_to_target(&self) -> f64 {
        (self.pos[0] - self.target[0]).hypot(self.pos[1] - self.target[1])
    }
}

fn pulse_direction(action: usize) -> [f64; 2] {
    match action {
        PULSE_UP => [0.0, 1.0],
        PULSE_DOWN => [0.0, -1.0],
        PULSE_LEFT => [-1.0, 0.0],
        _ => [1.0, 0.0],
    }
}

pub fn hover_step(p: &HoverParams, s: &HoverState, action: usize) -> HoverState {
    let dir = pulse_direction(action);
    let vel = [s.vel[0] + p.delta_v * dir[0], s.vel[1] + p.delta_v * dir[1]];
    HoverState {
        pos: [s.pos[0] + vel[0] * p.dt, s.pos[1] + vel[1] * p.dt],
        vel,
        target: s.target,
        t: s.t + 1,
    }
}

pub fn hover_judge(p: &HoverParams, s: &HoverState) -> Judgement {
    if s.distance_to_target() < p.success_radius {
        Judgement {
            reward: REWARD_TARGET,
            reason: Reason::Win,
        }
    } else if s.pos[0].abs() > p.bounds || s.pos[1].abs() > p.bounds {
        Judgement {
            reward: REWARD_OUT_OF_BOUNDS,
            reason: Reason::OutOfBounds,
        }
    } else if s.t >= p.max_steps {
        Judgement {
            reward: REWARD_MAX_STEPS,
            reason: Reason::MaxSteps,
        }
    } else {
        Judgement::running(REWARD_STEP)
    }
}

pub const RING_INNER: f64 = 1.9;
pub const RING_OUTER: f64 = 2.1;
const TARGET_HALF: f64 = 0.5;
const BORESIGHT_RADIUS: f64 = 0.3;

pub fn hover_scene(p: &HoverParams, s: &HoverState, resolution: (u32, u32)) -> Scene {
    // Identity rotation looks straight down (-Z) with image-up = world +Y.
    let pose = Transform::at(Vec3::new(s.pos[0], s.pos[1], p.altitude));
    let mut scene = Scene::new(Camera::new(p.focal_length, p.sensor_width, resolution, pose));
    scene.background = Color::gray(0.3);
    scene.light = DirectionalLight::new(Vec3::new(0.2, 0.3, -1.0), 0.7, 0.3);

    let [tx, ty] = s.target;
    let objects = [
        SceneObject::new(
            "ground",
            Primitive::Plane {
                half_extent: p.bounds + 2.0 * p.altitude,
            },
            Material::NoiseTexture {
                seed: p.ground_seed,
                scale: 1.5,
                palette: (Color::rgb(0.35, 0.45, 0.3), Color::rgb(0.85, 0.8, 0.65)),
            },
            Transform::identity(),
        ),
        SceneObject::new(
            "target",
            Primitive::Box {
                half_extents: Vec3::new(TARGET_HALF, TARGET_HALF, TARGET_HALF),
            },
            Material::flat(Color::BLACK),
            Transform::at(Vec3::new(tx, ty, TARGET_HALF)),
        ),
        SceneObject::new(
            "target_ring",
            Primitive::Ring {
                inner_radius: RING_INNER,
                outer_radius: RING_OUTER,
            },
            Material::flat(Color::WHITE),
            Transform::at(Vec3::new(tx, ty, 0.01)),
        ),
        SceneObject::new(
            "boresight",
            Primitive::Sphere {
                radius: BORESIGHT_RADIUS,
            },
            Material::flat(Color::rgb(0.9, 0.1, 0.1)),
            Transform::at(Vec3::new(s.pos[0], s.pos[1], 0.0)),
        ),
    ];
    for obj in objects {
        scene.add_object(obj).expect("fixed ids are unique");
    }
    scene
}

/// Per-axis speed the scripted controller aims for, proportional to the
/// remaining distance and capped.
fn desired_speed(err: f64) -> f64 {
    (0.6 * err).clamp(-2.0, 2.0)
}

/// Bang-bang controller: pulse along the axis whose velocity is furthest
/// from the desired approach speed.
pub fn hover_scripted_action(s: &HoverState) -> usize {
    let ex = desired_speed(s.target[0] - s.pos[0]) - s.vel[0];
    let ey = desired_speed(s.target[1] - s.pos[1]) - s.vel[1];
    if ex.abs() >= ey.abs() {
        if ex >= 0.0 {
            PULSE_RIGHT
        } else {
            PULSE_LEFT
        }
    } else if ey >= 0.0 {
        PULSE_UP
    } else {
        PULSE_DOWN
    }
}

#[derive(Debug, Clone)]
pub struct Hover2D {
    pub params: HoverParams,
    pub state: HoverState,
}

impl Hover2D {
    pub fn new(params: HoverParams) -> Self {
        Self {
            params,
            state: HoverState::default(),
        }
    }
}

impl Default for Hover2D {
    fn default() -> Self {
        Self::new(HoverParams::default())
    }
}

impl Dynamics for Hover2D {
    fn name(&self) -> &'static str {
        "hover2d"
    }

    fn action_space(&self) -> ActionSpace {
        ActionSpace::discrete(4)
    }

    fn reset(&mut self, rng: &mut SplitMix64) {
        let r = self.params.spawn_range;
        let pos = [rng.uniform(-r, r), rng.uniform(-r, r)];
        let target = loop {
            let t = [rng.uniform(-r, r), rng.uniform(-r, r)];
            if (t[0] - pos[0]).hypot(t[1] - pos[1]) >= self.params.min_start_distance {
                break t;
            }
        };
        self.state = HoverState {
            pos,
            vel: [0.0, 0.0],
            target,
            t: 0,
        };
    }

    fn advance(&mut self, action: usize) {
        self.state = hover_step(&self.params, &self.state, action);
    }

    fn judge(&self) -> Judgement {
        hover_judge(&self.params, &self.state)
    }

    fn scene(&self, resolution: (u32, u32)) -> Scene {
        hover_scene(&self.params, &self.state, resolution)
    }

    fn scripted_action(&self) -> usize {
        hover_scripted_action(&self.state)
    }
}
