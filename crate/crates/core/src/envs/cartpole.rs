//! Visual CartPole: the classic cart-and-pole balancing task observed
//! through a fixed side-on camera.
//!
//! Dynamics are the CartPole-v0 equations with explicit Euler integration.
//! Reward is +1 on every step including the terminal one; the episode is won
//! once the pole has been balanced for `win_steps` steps.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::camera::Camera;
use crate::env::{ActionSpace, Dynamics, Judgement, Reason};
use crate::math::Vec3;
use crate::rng::SplitMix64;
use crate::scene::{Color, DirectionalLight, Material, Primitive, Scene, SceneObject, Transform};

pub const STEP_REWARD: f64 = 1.0;

pub const PUSH_LEFT: usize = 0;
pub const PUSH_RIGHT: usize = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CartPoleParams {
    pub gravity: f64,
    pub mass_cart: f64,
    pub mass_pole: f64,
    /// Half the pole length, metres.
    pub half_length: f64,
    pub force_mag: f64,
    /// Integration step, seconds.
    pub tau: f64,
    pub x_threshold: f64,
    /// Radians.
    pub theta_threshold: f64,
    pub win_steps: u64,
    /// Initial state components are uniform in `±init_range`.
    pub init_range: f64,
    pub camera_distance: f64,
    pub camera_height: f64,
    pub focal_length: f64,
    pub sensor_width: f64,
}

impl Default for CartPoleParams {
    fn default() -> Self {
        Self {
            gravity: 9.8,
            mass_cart: 1.0,
            mass_pole: 0.1,
            half_length: 0.5,
            force_mag: 10.0,
            tau: 0.02,
            x_threshold: 2.4,
            theta_threshold: 12.0 * 2.0 * std::f64::consts::PI / 360.0,
            win_steps: 100,
            init_range: 0.05,
            camera_distance: 4.0,
            camera_height: 0.75,
            focal_length: 25.0,
            sensor_width: 36.0,
        }
    }
}

impl CartPoleParams {
    pub fn validate(&self) -> Result<(), String> {
        let positive = [
            ("gravity", self.gravity),
            ("mass_cart", self.mass_cart),
            ("mass_pole", self.mass_pole),
            ("half_length", self.half_length),
            ("force_mag", self.force_mag),
            ("tau", self.tau),
            ("x_threshold", self.x_threshold),
            ("theta_threshold", self.theta_threshold),
            ("camera_distance", self.camera_distance),
            ("focal_length", self.focal_length),
            ("sensor_width", self.sensor_width),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(format!("cartpole.{name} must be a positive number, got {v}"));
            }
        }
        if !(self.init_range.is_finite() && self.init_range >= 0.0) {
            return Err("cartpole.init_range must be >= 0".into());
        }
        if self.win_steps == 0 {
            return Err("cartpole.win_steps must be >= 1".into());
        }
        if self.theta_threshold >= FRAC_PI_2 {
            return Err("cartpole.theta_threshold must be below 90 degrees".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CartPoleState {
    pub x: f64,
    pub x_dot: f64,
    pub theta: f64,
    pub theta_dot: f64,
    pub t: u64,
}

impl CartPoleState {
    pub fn new(x: f64, x_dot: f64, theta: f64, theta_dot: f64) -> Self {
        Self {
            x,
            x_dot,
            theta,
            theta_dot,
            t: 0,
        }
    }

    pub fn components(&self) -> [f64; 4] {
        [self.x, self.x_dot, self.theta, self.theta_dot]
    }
}

/// One explicit Euler step.
pub fn cartpole_dynamics(p: &CartPoleParams, s: &CartPoleState, action: usize) -> CartPoleState {
    let force = if action == PUSH_RIGHT {
        p.force_mag
    } else {
        -p.force_mag
    };
    let total_mass = p.mass_pole + p.mass_cart;
    let polemass_length = p.mass_pole * p.half_length;
    let (sin_t, cos_t) = (s.theta.sin(), s.theta.cos());

    let temp = (force + polemass_length * (s.theta_dot * s.theta_dot) * sin_t) / total_mass;
    let theta_acc =
        (p.gravity * sin_t - cos_t * temp) / (p.half_length * (4.0 / 3.0 - p.mass_pole * (cos_t * cos_t) / total_mass));
    let x_acc = temp - polemass_length * theta_acc * cos_t / total_mass;

    CartPoleState {
        x: s.x + p.tau * s.x_dot,
        x_dot: s.x_dot + p.tau * x_acc,
        theta: s.theta + p.tau * s.theta_dot,
        theta_dot: s.theta_dot + p.tau * theta_acc,
        t: s.t + 1,
    }
}

pub fn cartpole_judge(p: &CartPoleParams, s: &CartPoleState) -> Judgement {
    let reason = if s.theta.abs() > p.theta_threshold {
        Reason::Fell
    } else if s.x.abs() > p.x_threshold {
        Reason::OutOfBounds
    } else if s.t >= p.win_steps {
        Reason::Win
    } else {
        Reason::Running
    };
    Judgement {
        reward: STEP_REWARD,
        reason,
    }
}

const CART_HALF: Vec3 = Vec3::new(0.25, 0.15, 0.125);
const WHEEL_CLEARANCE: f64 = 0.05;
const POLE_RADIUS: f64 = 0.06;

pub fn cartpole_scene(p: &CartPoleParams, s: &CartPoleState, resolution: (u32, u32)) -> Scene {
    // Camera on the -Y axis looking along +Y: image right is world +X.
    let pose = Transform::at(Vec3::new(0.0, -p.camera_distance, p.camera_height))
        .with_rotation(Vec3::new(FRAC_PI_2, 0.0, 0.0));
    let mut scene = Scene::new(Camera::new(p.focal_length, p.sensor_width, resolution, pose));
    scene.background = Color::gray(0.85);
    // Light has no X component so the image mirrors exactly with the state.
    scene.light = DirectionalLight::new(Vec3::new(0.0, 0.6, -0.8), 0.75, 0.25);

    let cart_z = WHEEL_CLEARANCE + CART_HALF.z;
    let hinge = Vec3::new(s.x, 0.0, cart_z + CART_HALF.z);
    let axis = Vec3::new(s.theta.sin(), 0.0, s.theta.cos());
    let objects = [
        SceneObject::new(
            "ground",
            Primitive::Plane { half_extent: 20.0 },
            Material::flat(Color::gray(0.55)),
            Transform::at(Vec3::new(0.0, 5.0, 0.0)),
        ),
        SceneObject::new(
            "track",
            Primitive::Box {
                half_extents: Vec3::new(p.x_threshold + CART_HALF.x, 0.02, 0.01),
            },
            Material::flat(Color::gray(0.25)),
            Transform::at(Vec3::new(0.0, 0.0, 0.01)),
        ),
        SceneObject::new(
            "cart",
            Primitive::Box {
                half_extents: CART_HALF,
            },
            Material::flat(Color::gray(0.1)),
            Transform::at(Vec3::new(s.x, 0.0, cart_z)),
        ),
        SceneObject::new(
            "pole",
            Primitive::Cylinder {
                radius: POLE_RADIUS,
                half_height: p.half_length,
            },
            Material::flat(Color::rgb(0.8, 0.55, 0.3)),
            Transform::at(hinge + axis * p.half_length).with_rotation(Vec3::new(0.0, s.theta, 0.0)),
        ),
    ];
    for obj in objects {
        scene.add_object(obj).expect("fixed ids are unique");
    }
    scene
}

#[derive(Debug, Clone)]
pub struct CartPole {
    pub params: CartPoleParams,
    pub state: CartPoleState,
}

impl CartPole {
    pub fn new(params: CartPoleParams) -> Self {
        Self {
            params,
            state: CartPoleState::default(),
        }
    }
}

impl Default for CartPole {
    fn default() -> Self {
        Self::new(CartPoleParams::default())
    }
}

impl Dynamics for CartPole {
    fn name(&self) -> &'static str {
        "cartpole"
    }

    fn action_space(&self) -> ActionSpace {
        ActionSpace::discrete(2)
    }

    fn reset(&mut self, rng: &mut SplitMix64) {
        let r = self.params.init_range;
        let mut draw = || rng.uniform(-r, r);
        self.state = CartPoleState::new(draw(), draw(), draw(), draw());
    }

    fn advance(&mut self, action: usize) {
        self.state = cartpole_dynamics(&self.params, &self.state, action);
    }

    fn judge(&self) -> Judgement {
        cartpole_judge(&self.params, &self.state)
    }

    fn scene(&self, resolution: (u32, u32)) -> Scene {
        cartpole_scene(&self.params, &self.state, resolution)
    }

    fn scripted_action(&self) -> usize {
        let s = &self.state;
        if s.theta + 0.5 * s.theta_dot + 0.01 * s.x + 0.05 * s.x_dot > 0.0 {
            PUSH_RIGHT
        } else {
            PUSH_LEFT
        }
    }
}
