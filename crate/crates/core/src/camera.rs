//! Pinhole camera parameterized by focal length and sensor width in
//! millimetres, the way DCC tools expose it.
//!
//! The camera looks along its local −Z axis with local +Y up and +X to the
//! right of the image. Pixel `(0, 0)` is the top-left corner; `u` grows to
//! the right and `v` grows downward. Sensor height is derived from the aspect
//! ratio (`sensor_width * H / W`), so pixels are square.

use serde::{Deserialize, Serialize};

use crate::math::{Mat3, Vec3};
use crate::scene::Transform;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Camera {
    /// Focal length in mm.
    pub focal_length: f64,
    /// Sensor width in mm.
    pub sensor_width: f64,
    /// `(width_px, height_px)`.
    pub resolution: (u32, u32),
    pub pose: Transform,
}

impl Camera {
    pub fn new(focal_length: f64, sensor_width: f64, resolution: (u32, u32), pose: Transform) -> Self {
        Self {
            focal_length,
            sensor_width,
            resolution,
            pose,
        }
    }

    pub fn width(&self) -> u32 {
        self.resolution.0
    }

    pub fn height(&self) -> u32 {
        self.resolution.1
    }

    pub fn is_valid(&self) -> bool {
        self.focal_length.is_finite()
            && self.focal_length > 0.0
            && self.sensor_width.is_finite()
            && self.sensor_width > 0.0
            && self.resolution.0 >= 1
            && self.resolution.1 >= 1
            && self.pose.position.is_finite()
            && self.pose.rotation.is_finite()
    }

    /// Horizontal field of view in radians.
    pub fn horizontal_fov(&self) -> f64 {
        2.0 * (self.sensor_width / (2.0 * self.focal_length)).atan()
    }

    /// Focal length expressed in pixels (identical on both axes).
    pub fn focal_px(&self) -> f64 {
        self.focal_length / self.sensor_width * f64::from(self.resolution.0)
    }

    pub(crate) fn rotation(&self) -> Mat3 {
        Mat3::from_euler_zyx(self.pose.rotation)
    }

    /// World point expressed in camera space (camera scale is ignored).
    pub fn world_to_camera(&self, p_world: Vec3) -> Vec3 {
        self.rotation().mul_vec_transposed(p_world - self.pose.position)
    }

    /// Project a world point to continuous pixel coordinates.
    ///
    /// Returns `None` when the point is on or behind the image plane, or
    /// when it lands outside `[0, W) x [0, H)`.
    pub fn project(&self, p_world: Vec3) -> Option<(f64, f64)> {
        self.project_camera_space(self.world_to_camera(p_world))
    }

    pub fn project_camera_space(&self, p_cam: Vec3) -> Option<(f64, f64)> {
        let depth = -p_cam.z;
        if depth.is_nan() || depth <= 0.0 {
            return None;
        }
        let (w, h) = (f64::from(self.resolution.0), f64::from(self.resolution.1));
        let f = self.focal_px();
        let u = w / 2.0 + f * p_cam.x / depth;
        let v = h / 2.0 - f * p_cam.y / depth;
        if (0.0..w).contains(&u) && (0.0..h).contains(&v) {
            Some((u, v))
        } else {
            None
        }
    }

    /// World-space origin and unit direction of the primary ray through the
    /// centre of pixel `(col, row)`.
    pub fn pixel_ray(&self, col: u32, row: u32) -> (Vec3, Vec3) {
        let rot = self.rotation();
        let f = self.focal_px();
        let dir_cam = self.pixel_dir_camera(f, col, row);
        (self.pose.position, rot.mul_vec(dir_cam).normalized())
    }

    pub(crate) fn pixel_dir_camera(&self, focal_px: f64, col: u32, row: u32) -> Vec3 {
        // Offsets are computed as (index - half + 0.5) so mirrored columns
        // produce exactly negated offsets.
        let half_w = f64::from(self.resolution.0) / 2.0;
        let half_h = f64::from(self.resolution.1) / 2.0;
        let dx = (f64::from(col) - half_w) + 0.5;
        let dy = (f64::from(row) - half_h) + 0.5;
        Vec3::new(dx / focal_px, -dy / focal_px, -1.0)
    }
}
