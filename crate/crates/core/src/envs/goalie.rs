//! Goalie: a first-person goalkeeper shuffles left and right to meet a ball
//! rolling toward the goal line at constant speed and fixed heading.
//!
//! Field axis is +Y (down-field); the goal line is `y = 0`. The ball starts
//! at `(0, ball_start_y)` and heads toward the line at an angle drawn once per
//! episode. A catch (+10) needs the goalie within `catch_radius` of the
//! crossing point; a miss or leaving the bounds pays −10.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::camera::Camera;
use crate::env::{ActionSpace, Dynamics, Judgement, Reason};
use crate::math::Vec3;
use crate::rng::SplitMix64;
use crate::scene::{Color, DirectionalLight, Material, Primitive, Scene, SceneObject, Transform};

pub const REWARD_CATCH: f64 = 10.0;
pub const REWARD_MISS: f64 = -10.0;
pub const REWARD_OUT_OF_BOUNDS: f64 = -10.0;
pub const REWARD_STEP: f64 = 0.0;

pub const MOVE_LEFT: usize = 0;
pub const MOVE_RIGHT: usize = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GoalieParams {
    pub ball_start_y: f64,
    /// Field units per step.
    pub ball_speed: f64,
    /// Heading is uniform in `±max_angle_deg` from the field axis.
    pub max_angle_deg: f64,
    /// Goalie must keep `|x| <= bounds`.
    pub bounds: f64,
    pub goalie_step: f64,
    pub catch_radius: f64,
    pub max_steps: u64,
    pub ball_radius: f64,
    pub camera_back: f64,
    pub camera_height: f64,
    /// Downward tilt of the goalie camera, degrees.
    pub camera_pitch_deg: f64,
    pub focal_length: f64,
    pub sensor_width: f64,
    pub field_seed: u64,
}

impl Default for GoalieParams {
    fn default() -> Self {
        Self {
            ball_start_y: 20.0,
            ball_speed: 1.0,
            max_angle_deg: 15.0,
            bounds: 6.0,
            goalie_step: 1.0,
            catch_radius: 1.0,
            max_steps: 100,
            ball_radius: 0.6,
            camera_back: 3.0,
            camera_height: 1.8,
            camera_pitch_deg: 10.0,
            focal_length: 24.0,
            sensor_width: 36.0,
            field_seed: 0x00F1_E1D5,
        }
    }
}

impl GoalieParams {
    pub fn validate(&self) -> Result<(), String> {
        let positive = [
            ("ball_start_y", self.ball_start_y),
            ("ball_speed", self.ball_speed),
            ("bounds", self.bounds),
            ("goalie_step", self.goalie_step),
            ("catch_radius", self.catch_radius),
            ("ball_radius", self.ball_radius),
            ("camera_height", self.camera_height),
            ("focal_length", self.focal_length),
            ("sensor_width", self.sensor_width),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(format!("goalie.{name} must be a positive number, got {v}"));
            }
        }
        if !(0.0..90.0).contains(&self.max_angle_deg) {
            return Err("goalie.max_angle_deg must be in [0, 90)".into());
        }
        if !(self.camera_pitch_deg.is_finite() && self.camera_back.is_finite()) {
            return Err("goalie camera placement must be finite".into());
        }
        if self.max_steps == 0 {
            return Err("goalie.max_steps must be >= 1".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct GoalieState {
    pub goalie_x: f64,
    pub ball_pos: [f64; 2],
    /// Heading in radians from the field axis; positive drifts toward +X.
    pub ball_dir: f64,
    pub t: u64,
}

impl GoalieState {
    /// Where the ball's straight line meets the goal line.
    pub fn crossing_x(&self) -> f64 {
        self.ball_pos[0] + self.ball_pos[1] * self.ball_dir.tan()
    }
}

pub fn goalie_step(p: &GoalieParams, s: &GoalieState, action: usize) -> GoalieState {
    let dx = if action == MOVE_RIGHT {
        p.goalie_step
    } else {
        -p.goalie_step
    };
    let (sin_d, cos_d) = s.ball_dir.sin_cos();
    GoalieState {
        goalie_x: s.goalie_x + dx,
        ball_pos: [
            s.ball_pos[0] + p.ball_speed * sin_d,
            s.ball_pos[1] - p.ball_speed * cos_d,
        ],
        ball_dir: s.ball_dir,
        t: s.t + 1,
    }
}

pub fn goalie_judge(p: &GoalieParams, s: &GoalieState) -> Judgement {
    if s.goalie_x.abs() > p.bounds {
        Judgement {
            reward: REWARD_OUT_OF_BOUNDS,
            reason: Reason::OutOfBounds,
        }
    } else if s.ball_pos[1] <= 0.0 {
        if (s.goalie_x - s.crossing_x()).abs() <= p.catch_radius {
            Judgement {
                reward: REWARD_CATCH,
                reason: Reason::Caught,
            }
        } else {
            Judgement {
                reward: REWARD_MISS,
                reason: Reason::Missed,
            }
        }
    } else if s.t >= p.max_steps {
        Judgement {
            reward: REWARD_STEP,
            reason: Reason::MaxSteps,
        }
    } else {
        Judgement::running(REWARD_STEP)
    }
}

const COLUMN_COLORS: [Color; 6] = [
    Color::rgb(0.9, 0.2, 0.2),
    Color::rgb(0.2, 0.7, 0.2),
    Color::rgb(0.2, 0.3, 0.9),
    Color::rgb(0.95, 0.85, 0.2),
    Color::rgb(0.7, 0.2, 0.8),
    Color::rgb(0.1, 0.8, 0.8),
];

pub const COLUMN_COUNT: usize = 13;
const COLUMN_SPACING: f64 = 2.0;

pub fn goalie_scene(p: &GoalieParams, s: &GoalieState, resolution: (u32, u32)) -> Scene {
    let pitch = p.camera_pitch_deg.to_radians();
    let pose = Transform::at(Vec3::new(s.goalie_x, -p.camera_back, p.camera_height)).with_rotation(Vec3::new(
        FRAC_PI_2 - pitch,
        0.0,
        0.0,
    ));
    let mut scene = Scene::new(Camera::new(p.focal_length, p.sensor_width, resolution, pose));
    scene.background = Color::rgb(0.55, 0.7, 0.9);
    scene.light = DirectionalLight::new(Vec3::new(-0.3, 0.5, -1.0), 0.75, 0.3);

    let far_edge = p.ball_start_y + 5.0;
    let half_field = far_edge / 2.0 + 5.0;
    scene
        .add_object(SceneObject::new(
            "field",
            Primitive::Plane {
                half_extent: half_field,
            },
            Material::NoiseTexture {
                seed: p.field_seed,
                scale: 0.8,
                palette: (Color::rgb(0.15, 0.45, 0.15), Color::rgb(0.55, 0.8, 0.4)),
            },
            Transform::at(Vec3::new(0.0, far_edge / 2.0, 0.0)),
        ))
        .expect("fresh scene");
    scene
        .add_object(SceneObject::new(
            "goal_line",
            Primitive::Box {
                half_extents: Vec3::new(p.bounds + 1.0, 0.05, 0.005),
            },
            Material::flat(Color::WHITE),
            Transform::at(Vec3::new(0.0, 0.0, 0.005)),
        ))
        .expect("unique id");
    scene
        .add_object(SceneObject::new(
            "ball",
            Primitive::Sphere { radius: p.ball_radius },
            Material::flat(Color::WHITE),
            Transform::at(Vec3::new(s.ball_pos[0], s.ball_pos[1], p.ball_radius)),
        ))
        .expect("unique id");

    let first = -(COLUMN_COUNT as f64 - 1.0) / 2.0 * COLUMN_SPACING;
    for i in 0..COLUMN_COUNT {
        let x = first + i as f64 * COLUMN_SPACING;
        let half_height = 1.5 + 0.25 * (i % 3) as f64;
        scene
            .add_object(SceneObject::new(
                format!("column_{i:02}"),
                Primitive::Cylinder {
                    radius: 0.4,
                    half_height,
                },
                Material::flat(COLUMN_COLORS[i % COLUMN_COLORS.len()]),
                Transform::at(Vec3::new(x, far_edge, half_height)),
            ))
            .expect("unique id");
    }
    scene
}

/// Walks toward the ball's projected crossing point.
pub fn goalie_scripted_action(s: &GoalieState) -> usize {
    if s.crossing_x() > s.goalie_x {
        MOVE_RIGHT
    } else {
        MOVE_LEFT
    }
}

#[derive(Debug, Clone)]
pub struct Goalie {
    pub params: GoalieParams,
    pub state: GoalieState,
}

impl Goalie {
    pub fn new(params: GoalieParams) -> Self {
        Self {
            params,
            state: GoalieState::default(),
        }
    }
}

impl Default for Goalie {
    fn default() -> Self {
        Self::new(GoalieParams::default())
    }
}

impl Dynamics for Goalie {
    fn name(&self) -> &'static str {
        "goalie"
    }

    fn action_space(&self) -> ActionSpace {
        ActionSpace::discrete(2)
    }

    fn reset(&mut self, rng: &mut SplitMix64) {
        let max = self.params.max_angle_deg.to_radians();
        self.state = GoalieState {
            goalie_x: 0.0,
            ball_pos: [0.0, self.params.ball_start_y],
            ball_dir: rng.uniform(-max, max),
            t: 0,
        };
    }

    fn advance(&mut self, action: usize) {
        self.state = goalie_step(&self.params, &self.state, action);
    }

    fn judge(&self) -> Judgement {
        goalie_judge(&self.params, &self.state)
    }

    fn scene(&self, resolution: (u32, u32)) -> Scene {
        goalie_scene(&self.params, &self.state, resolution)
    }

    fn scripted_action(&self) -> usize {
        goalie_scripted_action(&self.state)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn start(dir: f64) -> GoalieState {
        GoalieState {
            goalie_x: 0.0,
            ball_pos: [0.0, 20.0],
            ball_dir: dir,
            t: 0,
        }
    }

    #[test]
    fn two_right_moves() {
        let p = GoalieParams::default();
        let s = goalie_step(&p, &goalie_step(&p, &start(0.1), MOVE_RIGHT), MOVE_RIGHT);
        assert_eq!(s.goalie_x, 2.0);
    }

    #[test]
    fn straight_ball_reaches_line_after_20_steps() {
        let p = GoalieParams::default();
        let mut s = start(0.0);
        for i in 0..20 {
            assert!(!goalie_judge(&p, &s).done());
            s = goalie_step(&p, &s, i % 2);
        }
        assert_eq!(s.ball_pos, [0.0, 0.0]);
        assert_eq!(goalie_judge(&p, &s).reason, Reason::Caught);
    }

    #[test]
    fn fifteen_degree_crossing() {
        let s = start(15f64.to_radians());
        assert!((s.crossing_x() - 20.0 * 15f64.to_radians().tan()).abs() < 1e-12);
        assert!((s.crossing_x() - 5.359).abs() < 1e-3);
        // The crossing is invariant along the trajectory.
        let p = GoalieParams::default();
        let mut t = s;
        for _ in 0..21 {
            t = goalie_step(&p, &t, MOVE_LEFT);
            assert!((t.crossing_x() - s.crossing_x()).abs() < 1e-9);
        }
    }

    #[test]
    fn judge_catch_boundary_inclusive() {
        let p = GoalieParams::default();
        let s = GoalieState {
            goalie_x: 3.0,
            ball_pos: [2.0, 0.0],
            ball_dir: 0.0,
            t: 20,
        };
        let j = goalie_judge(&p, &s);
        assert_eq!((j.reward, j.reason), (10.0, Reason::Caught));

        let miss = GoalieState {
            ball_pos: [1.5, 0.0],
            ..s
        };
        let j = goalie_judge(&p, &miss);
        assert_eq!((j.reward, j.reason), (-10.0, Reason::Missed));
    }

    #[test]
    fn out_of_bounds_mid_episode() {
        let p = GoalieParams::default();
        let s = GoalieState {
            goalie_x: -7.0,
            ..start(0.0)
        };
        let j = goalie_judge(&p, &s);
        assert_eq!((j.reward, j.reason), (-10.0, Reason::OutOfBounds));
    }

    #[test]
    fn camera_follows_goalie() {
        let p = GoalieParams::default();
        for gx in [-4.0, 0.0, 3.0] {
            let s = GoalieState {
                goalie_x: gx,
                ..start(0.0)
            };
            assert_eq!(goalie_scene(&p, &s, (100, 100)).camera.pose.position.x, gx);
        }
    }

    #[test]
    fn ball_visible_at_start() {
        let p = GoalieParams::default();
        let scene = goalie_scene(&p, &start(0.0), (100, 100));
        let ball = scene.object("ball").unwrap().transform.position;
        let (u, _) = scene.camera.project(ball).unwrap();
        assert!((u - 50.0).abs() < 1e-9);
    }
}
