//! Scene graph: analytic primitives with materials and transforms, one
//! directional light and one camera.
//!
//! Scenes serialize to JSON with the field names used below. Primitives and
//! materials are internally tagged by `"kind"`:
//!
//! ```json
//! {"id": "cart",
//!  "primitive": {"kind": "box", "half_extents": {"x": 0.25, "y": 0.15, "z": 0.15}},
//!  "material": {"kind": "flat", "albedo": {"r": 0.1, "g": 0.1, "b": 0.1}},
//!  "transform": {"position": {...}, "rotation": {...}, "scale": {...}},
//!  "visible": true}
//! ```

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::camera::Camera;
use crate::math::Vec3;

#[derive(Debug, Error)]
pub enum SceneError {
    #[error("object id {0:?} already present in scene")]
    DuplicateId(String),
    #[error("no object with id {0:?}")]
    UnknownId(String),
    #[error("invalid scene: {0}")]
    Invalid(String),
    #[error("scene json: {0}")]
    Json(#[from] serde_json::Error),
}

/// Position, ZYX Euler rotation (radians) and per-axis scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Transform {
    pub position: Vec3,
    pub rotation: Vec3,
    pub scale: Vec3,
}

impl Transform {
    pub fn identity() -> Self {
        Self {
            position: Vec3::ZERO,
            rotation: Vec3::ZERO,
            scale: Vec3::ONE,
        }
    }

    pub fn at(position: Vec3) -> Self {
        Self {
            position,
            ..Self::identity()
        }
    }

    pub fn with_rotation(mut self, rotation: Vec3) -> Self {
        self.rotation = rotation;
        self
    }

    pub fn with_scale(mut self, scale: Vec3) -> Self {
        self.scale = scale;
        self
    }

    pub fn is_valid(&self) -> bool {
        self.position.is_finite()
            && self.rotation.is_finite()
            && self.scale.is_finite()
            && self.scale.x > 0.0
            && self.scale.y > 0.0
            && self.scale.z > 0.0
    }
}

impl Default for Transform {
    fn default() -> Self {
        Self::identity()
    }
}

/// Linear RGB with channels in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Color {
    pub r: f64,
    pub g: f64,
    pub b: f64,
}

impl Color {
    pub const BLACK: Color = Color::rgb(0.0, 0.0, 0.0);
    pub const WHITE: Color = Color::rgb(1.0, 1.0, 1.0);

    pub const fn rgb(r: f64, g: f64, b: f64) -> Self {
        Self { r, g, b }
    }

    pub const fn gray(v: f64) -> Self {
        Self::rgb(v, v, v)
    }

    pub fn is_valid(&self) -> bool {
        [self.r, self.g, self.b].iter().all(|c| (0.0..=1.0).contains(c))
    }

    pub fn lerp(self, other: Color, t: f64) -> Color {
        Color::rgb(
            self.r + (other.r - self.r) * t,
            self.g + (other.g - self.g) * t,
            self.b + (other.b - self.b) * t,
        )
    }

    pub fn scale(self, s: f64) -> Color {
        Color::rgb(self.r * s, self.g * s, self.b * s)
    }

    /// Quantize to 8 bits per channel (round half up, clamped).
    pub fn to_rgb8(self) -> [u8; 3] {
        let q = |c: f64| (c.clamp(0.0, 1.0) * 255.0 + 0.5).floor() as u8;
        [q(self.r), q(self.g), q(self.b)]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Material {
    Flat {
        albedo: Color,
    },
    /// Value noise blended between two palette colours. `scale` is the
    /// lattice frequency in cells per metre.
    NoiseTexture {
        seed: u64,
        scale: f64,
        palette: (Color, Color),
    },
    /// Piecewise-constant cells of side `cell_size` metres, each with a
    /// hashed colour.
    CheckerHash {
        seed: u64,
        cell_size: f64,
    },
}

impl Material {
    pub fn flat(albedo: Color) -> Self {
        Material::Flat { albedo }
    }

    pub fn is_valid(&self) -> bool {
        match self {
            Material::Flat { albedo } => albedo.is_valid(),
            Material::NoiseTexture { scale, palette, .. } => {
                scale.is_finite() && *scale > 0.0 && palette.0.is_valid() && palette.1.is_valid()
            }
            Material::CheckerHash { cell_size, .. } => cell_size.is_finite() && *cell_size > 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Primitive {
    /// Square in the local XY plane, normal +Z.
    Plane {
        half_extent: f64,
    },
    Box {
        half_extents: Vec3,
    },
    Sphere {
        radius: f64,
    },
    /// Capped cylinder along local Z.
    Cylinder {
        radius: f64,
        half_height: f64,
    },
    /// Flat annulus in the local XY plane.
    Ring {
        inner_radius: f64,
        outer_radius: f64,
    },
}

impl Primitive {
    pub fn is_valid(&self) -> bool {
        let pos = |v: f64| v.is_finite() && v > 0.0;
        match *self {
            Primitive::Plane { half_extent } => pos(half_extent),
            Primitive::Box { half_extents: h } => pos(h.x) && pos(h.y) && pos(h.z),
            Primitive::Sphere { radius } => pos(radius),
            Primitive::Cylinder { radius, half_height } => pos(radius) && pos(half_height),
            Primitive::Ring {
                inner_radius,
                outer_radius,
            } => pos(inner_radius) && pos(outer_radius) && inner_radius < outer_radius,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneObject {
    pub id: String,
    pub primitive: Primitive,
    pub material: Material,
    pub transform: Transform,
    #[serde(default = "default_visible")]
    pub visible: bool,
}

fn default_visible() -> bool {
    true
}

impl SceneObject {
    pub fn new(id: impl Into<String>, primitive: Primitive, material: Material, transform: Transform) -> Self {
        Self {
            id: id.into(),
            primitive,
            material,
            transform,
            visible: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DirectionalLight {
    /// Unit vector pointing from the light into the scene.
    pub direction: Vec3,
    pub intensity: f64,
    pub ambient: f64,
}

impl DirectionalLight {
    /// Builds a light, normalizing `direction`.
    pub fn new(direction: Vec3, intensity: f64, ambient: f64) -> Self {
        Self {
            direction: direction.normalized(),
            intensity,
            ambient,
        }
    }

    pub fn is_valid(&self) -> bool {
        self.direction.is_finite()
            && (self.direction.length() - 1.0).abs() <= 1e-9
            && self.intensity.is_finite()
            && self.intensity >= 0.0
            && (0.0..=1.0).contains(&self.ambient)
    }
}

impl Default for DirectionalLight {
    fn default() -> Self {
        Self::new(Vec3::new(0.3, 0.5, -1.0), 0.8, 0.25)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scene {
    pub objects: Vec<SceneObject>,
    pub light: DirectionalLight,
    pub camera: Camera,
    pub background: Color,
}

impl Scene {
    pub fn new(camera: Camera) -> Self {
        Self {
            objects: Vec::new(),
            light: DirectionalLight::default(),
            camera,
            background: Color::BLACK,
        }
    }

    pub fn add_object(&mut self, obj: SceneObject) -> Result<(), SceneError> {
        if self.objects.iter().any(|o| o.id == obj.id) {
            return Err(SceneError::DuplicateId(obj.id));
        }
        self.objects.push(obj);
        Ok(())
    }

    /// Builder-style [`Scene::add_object`].
    pub fn with_object(mut self, obj: SceneObject) -> Result<Self, SceneError> {
        self.add_object(obj)?;
        Ok(self)
    }

    pub fn object(&self, id: &str) -> Option<&SceneObject> {
        self.objects.iter().find(|o| o.id == id)
    }

    pub fn object_mut(&mut self, id: &str) -> Option<&mut SceneObject> {
        self.objects.iter_mut().find(|o| o.id == id)
    }

    pub fn set_transform(&mut self, id: &str, t: Transform) -> Result<(), SceneError> {
        let obj = self
            .object_mut(id)
            .ok_or_else(|| SceneError::UnknownId(id.to_owned()))?;
        obj.transform = t;
        Ok(())
    }

    pub fn set_visible(&mut self, id: &str, visible: bool) -> Result<(), SceneError> {
        let obj = self
            .object_mut(id)
            .ok_or_else(|| SceneError::UnknownId(id.to_owned()))?;
        obj.visible = visible;
        Ok(())
    }

    /// Checks every invariant; the first violation is reported.
    pub fn validate(&self) -> Result<(), SceneError> {
        let mut seen = std::collections::HashSet::new();
        for o in &self.objects {
            if !seen.insert(o.id.as_str()) {
                return Err(SceneError::DuplicateId(o.id.clone()));
            }
            if !o.primitive.is_valid() {
                return Err(SceneError::Invalid(format!(
                    "object {:?}: bad primitive dimensions",
                    o.id
                )));
            }
            if !o.material.is_valid() {
                return Err(SceneError::Invalid(format!("object {:?}: bad material", o.id)));
            }
            if !o.transform.is_valid() {
                return Err(SceneError::Invalid(format!("object {:?}: bad transform", o.id)));
            }
        }
        if !self.light.is_valid() {
            return Err(SceneError::Invalid(
                "light direction must be unit, intensity >= 0, ambient in [0,1]".into(),
            ));
        }
        if !self.background.is_valid() {
            return Err(SceneError::Invalid("background colour out of range".into()));
        }
        if !self.camera.is_valid() {
            return Err(SceneError::Invalid("degenerate camera".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String, SceneError> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Parses and validates a scene document.
    pub fn from_json(s: &str) -> Result<Self, SceneError> {
        let scene: Scene = serde_json::from_str(s)?;
        scene.validate()?;
        Ok(scene)
    }
}
