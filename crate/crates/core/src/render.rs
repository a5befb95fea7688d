//! Deterministic CPU renderer.
//!
//! One primary ray per pixel centre is cast against every visible analytic
//! primitive; the nearest hit is Lambert-shaded, everything else shows the
//! background. Each pixel is computed independently from the scene snapshot,
//! so output bytes do not depend on evaluation order.

use std::path::Path;

use thiserror::Error;

use crate::math::{Mat3, Vec3};
use crate::scene::{Color, DirectionalLight, Primitive, Scene, SceneError};
use crate::texture::surface_color;

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("degenerate camera: focal length and sensor width must be > 0 and resolution >= 1x1")]
    DegenerateCamera,
    #[error(transparent)]
    Scene(#[from] SceneError),
    #[error("png export: {0}")]
    Png(#[from] image::ImageError),
}

/// Row-major RGB8 pixels, top row first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameBuffer {
    width: u32,
    height: u32,
    pixels: Vec<[u8; 3]>,
}

impl FrameBuffer {
    pub fn filled(width: u32, height: u32, rgb: [u8; 3]) -> Self {
        Self {
            width,
            height,
            pixels: vec![rgb; width as usize * height as usize],
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn pixels(&self) -> &[[u8; 3]] {
        &self.pixels
    }

    pub fn get(&self, col: u32, row: u32) -> [u8; 3] {
        self.pixels[row as usize * self.width as usize + col as usize]
    }

    pub fn set(&mut self, col: u32, row: u32, rgb: [u8; 3]) {
        let w = self.width as usize;
        self.pixels[row as usize * w + col as usize] = rgb;
    }

    /// Interleaved `r, g, b` bytes.
    pub fn as_bytes(&self) -> Vec<u8> {
        self.pixels.iter().flatten().copied().collect()
    }

    pub fn save_png(&self, path: impl AsRef<Path>) -> Result<(), RenderError> {
        image::save_buffer(
            path,
            &self.as_bytes(),
            self.width,
            self.height,
            image::ExtendedColorType::Rgb8,
        )?;
        Ok(())
    }
}

/// Row-major 8-bit luminance, top row first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GrayFrame {
    width: u32,
    height: u32,
    pixels: Vec<u8>,
}

impl GrayFrame {
    /// Returns `None` when `pixels.len() != width * height`.
    pub fn from_raw(width: u32, height: u32, pixels: Vec<u8>) -> Option<Self> {
        (pixels.len() == width as usize * height as usize).then_some(Self { width, height, pixels })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn get(&self, col: u32, row: u32) -> u8 {
        self.pixels[row as usize * self.width as usize + col as usize]
    }

    pub fn save_png(&self, path: impl AsRef<Path>) -> Result<(), RenderError> {
        image::save_buffer(
            path,
            &self.pixels,
            self.width,
            self.height,
            image::ExtendedColorType::L8,
        )?;
        Ok(())
    }
}

/// Per-pixel distance from the camera centre to the nearest hit, `+inf`
/// where the ray escaped.
#[derive(Debug, Clone, PartialEq)]
pub struct DepthBuffer {
    pub width: u32,
    pub height: u32,
    pub depth: Vec<f64>,
}

impl DepthBuffer {
    pub fn new(width: u32, height: u32) -> Self {
        Self {
            width,
            height,
            depth: vec![f64::INFINITY; width as usize * height as usize],
        }
    }

    pub fn get(&self, col: u32, row: u32) -> f64 {
        self.depth[row as usize * self.width as usize + col as usize]
    }
}

/// Rec. 601 luma, rounded to nearest.
pub fn luma601(rgb: [u8; 3]) -> u8 {
    let y = 0.299 * f64::from(rgb[0]) + 0.587 * f64::from(rgb[1]) + 0.114 * f64::from(rgb[2]);
    y.round().clamp(0.0, 255.0) as u8
}

pub fn to_grayscale(fb: &FrameBuffer) -> GrayFrame {
    GrayFrame {
        width: fb.width,
        height: fb.height,
        pixels: fb.pixels.iter().map(|&p| luma601(p)).collect(),
    }
}

/// Lambert shading with an ambient floor.
pub fn shade(albedo: Color, normal: Vec3, light: &DirectionalLight) -> Color {
    let lambert = normal.dot(-light.direction).max(0.0);
    let k = light.ambient + light.intensity * lambert;
    Color::rgb(
        (albedo.r * k).clamp(0.0, 1.0),
        (albedo.g * k).clamp(0.0, 1.0),
        (albedo.b * k).clamp(0.0, 1.0),
    )
}

const T_EPS: f64 = 1e-9;

/// A primitive hit in object-local coordinates.
struct LocalHit {
    t: f64,
    point: Vec3,
    normal: Vec3,
}

fn hit_plane(o: Vec3, d: Vec3, inside: impl Fn(f64, f64) -> bool) -> Option<LocalHit> {
    if d.z == 0.0 {
        return None;
    }
    let t = -o.z / d.z;
    if t <= T_EPS {
        return None;
    }
    let p = o + d * t;
    inside(p.x, p.y).then_some(LocalHit {
        t,
        point: Vec3::new(p.x, p.y, 0.0),
        normal: Vec3::Z,
    })
}

fn hit_sphere(o: Vec3, d: Vec3, radius: f64) -> Option<LocalHit> {
    let a = d.dot(d);
    let b = o.dot(d);
    let c = o.dot(o) - radius * radius;
    let disc = b * b - a * c;
    if disc < 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    let mut t = (-b - sq) / a;
    if t <= T_EPS {
        t = (-b + sq) / a;
        if t <= T_EPS {
            return None;
        }
    }
    let p = o + d * t;
    Some(LocalHit {
        t,
        point: p,
        normal: p / radius,
    })
}

fn hit_box(o: Vec3, d: Vec3, h: Vec3) -> Option<LocalHit> {
    let mut t_near = f64::NEG_INFINITY;
    let mut t_far = f64::INFINITY;
    let mut near_axis = 0usize;
    let mut far_axis = 0usize;
    let axes = [(o.x, d.x, h.x), (o.y, d.y, h.y), (o.z, d.z, h.z)];
    for (axis, &(oa, da, ha)) in axes.iter().enumerate() {
        if da == 0.0 {
            if oa.abs() > ha {
                return None;
            }
            continue;
        }
        let t1 = (-ha - oa) / da;
        let t2 = (ha - oa) / da;
        let (lo, hi) = if t1 < t2 { (t1, t2) } else { (t2, t1) };
        if lo > t_near {
            t_near = lo;
            near_axis = axis;
        }
        if hi < t_far {
            t_far = hi;
            far_axis = axis;
        }
        if t_near > t_far {
            return None;
        }
    }
    let (t, axis) = if t_near > T_EPS {
        (t_near, near_axis)
    } else if t_far > T_EPS {
        (t_far, far_axis)
    } else {
        return None;
    };
    let p = o + d * t;
    let comp = [p.x, p.y, p.z][axis];
    let sign = if comp >= 0.0 { 1.0 } else { -1.0 };
    let normal = match axis {
        0 => Vec3::new(sign, 0.0, 0.0),
        1 => Vec3::new(0.0, sign, 0.0),
        _ => Vec3::new(0.0, 0.0, sign),
    };
    Some(LocalHit { t, point: p, normal })
}

fn hit_cylinder(o: Vec3, d: Vec3, radius: f64, half_height: f64) -> Option<LocalHit> {
    let mut best: Option<LocalHit> = None;
    let mut consider = |hit: LocalHit| {
        if best.as_ref().is_none_or(|b| hit.t < b.t) {
            best = Some(hit);
        }
    };

    let a = d.x * d.x + d.y * d.y;
    if a > 0.0 {
        let b = o.x * d.x + o.y * d.y;
        let c = o.x * o.x + o.y * o.y - radius * radius;
        let disc = b * b - a * c;
        if disc >= 0.0 {
            let sq = disc.sqrt();
            for t in [(-b - sq) / a, (-b + sq) / a] {
                if t > T_EPS {
                    let p = o + d * t;
                    if p.z.abs() <= half_height {
                        consider(LocalHit {
                            t,
                            point: p,
                            normal: Vec3::new(p.x / radius, p.y / radius, 0.0),
                        });
                    }
                }
            }
        }
    }
    if d.z != 0.0 {
        for cap in [-half_height, half_height] {
            let t = (cap - o.z) / d.z;
            if t > T_EPS {
                let p = o + d * t;
                if p.x * p.x + p.y * p.y <= radius * radius {
                    consider(LocalHit {
                        t,
                        point: Vec3::new(p.x, p.y, cap),
                        normal: Vec3::new(0.0, 0.0, cap.signum()),
                    });
                }
            }
        }
    }
    best
}

fn intersect_local(prim: &Primitive, o: Vec3, d: Vec3) -> Option<LocalHit> {
    match *prim {
        Primitive::Plane { half_extent } => hit_plane(o, d, |x, y| x.abs() <= half_extent && y.abs() <= half_extent),
        Primitive::Ring {
            inner_radius,
            outer_radius,
        } => {
            let (r0, r1) = (inner_radius * inner_radius, outer_radius * outer_radius);
            hit_plane(o, d, |x, y| {
                let r2 = x * x + y * y;
                r2 >= r0 && r2 <= r1
            })
        }
        Primitive::Sphere { radius } => hit_sphere(o, d, radius),
        Primitive::Box { half_extents } => hit_box(o, d, half_extents),
        Primitive::Cylinder { radius, half_height } => hit_cylinder(o, d, radius, half_height),
    }
}

fn local_bounding_radius(prim: &Primitive) -> f64 {
    match *prim {
        Primitive::Plane { half_extent } => half_extent * std::f64::consts::SQRT_2,
        Primitive::Ring { outer_radius, .. } => outer_radius,
        Primitive::Sphere { radius } => radius,
        Primitive::Box { half_extents } => half_extents.length(),
        Primitive::Cylinder { radius, half_height } => (radius * radius + half_height * half_height).sqrt(),
    }
}

fn is_flat(prim: &Primitive) -> bool {
    matches!(prim, Primitive::Plane { .. } | Primitive::Ring { .. })
}

/// Per-object data derived once per frame.
struct Prepared<'a> {
    index: usize,
    prim: &'a Primitive,
    material: &'a crate::scene::Material,
    position: Vec3,
    rotation: Mat3,
    scale: Vec3,
    bound_radius: f64,
}

/// Nearest surface hit along a world ray.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hit {
    /// Index into `scene.objects`.
    pub object: usize,
    /// Distance along the (unit) ray.
    pub distance: f64,
    pub point: Vec3,
    /// World-space unit normal, facing the ray origin for flat primitives.
    pub normal: Vec3,
    /// Surface coordinates in metres in the object frame.
    pub uv: (f64, f64),
}

/// Visible objects of a scene, prepared for ray queries.
pub struct Tracer<'a> {
    objects: Vec<Prepared<'a>>,
}

impl<'a> Tracer<'a> {
    pub fn new(scene: &'a Scene) -> Self {
        let objects = scene
            .objects
            .iter()
            .enumerate()
            .filter(|(_, o)| o.visible)
            .map(|(index, o)| {
                let s = o.transform.scale;
                Prepared {
                    index,
                    prim: &o.primitive,
                    material: &o.material,
                    position: o.transform.position,
                    rotation: Mat3::from_euler_zyx(o.transform.rotation),
                    scale: s,
                    bound_radius: local_bounding_radius(&o.primitive) * s.x.max(s.y).max(s.z) * (1.0 + 1e-9),
                }
            })
            .collect();
        Self { objects }
    }

    /// Closest hit for a ray with unit direction `dir`. Ties go to the object
    /// listed first in the scene.
    pub fn trace(&self, origin: Vec3, dir: Vec3) -> Option<Hit> {
        let mut best: Option<(f64, &Prepared, LocalHit)> = None;
        for obj in &self.objects {
            // Cheap bounding-sphere rejection.
            let oc = obj.position - origin;
            let along = oc.dot(dir);
            let perp2 = oc.dot(oc) - along * along;
            let r2 = obj.bound_radius * obj.bound_radius;
            if perp2 > r2 || (along < 0.0 && oc.dot(oc) > r2) {
                continue;
            }
            if let Some((t, _, _)) = &best {
                if along - obj.bound_radius > *t {
                    continue;
                }
            }
            let o_local = obj
                .rotation
                .mul_vec_transposed(origin - obj.position)
                .div_elem(obj.scale);
            let d_local = obj.rotation.mul_vec_transposed(dir).div_elem(obj.scale);
            if let Some(hit) = intersect_local(obj.prim, o_local, d_local) {
                if best.as_ref().is_none_or(|(t, _, _)| hit.t < *t) {
                    best = Some((hit.t, obj, hit));
                }
            }
        }
        best.map(|(t, obj, local)| {
            let mut normal = obj.rotation.mul_vec(local.normal.div_elem(obj.scale)).normalized();
            if is_flat(obj.prim) && normal.dot(dir) > 0.0 {
                normal = -normal;
            }
            Hit {
                object: obj.index,
                distance: t,
                point: origin + dir * t,
                normal,
                uv: (local.point.x * obj.scale.x, local.point.y * obj.scale.y),
            }
        })
    }

    fn material(&self, object: usize) -> &crate::scene::Material {
        self.objects
            .iter()
            .find(|o| o.index == object)
            .map(|o| o.material)
            .expect("hit refers to a prepared object")
    }
}

fn check_scene(scene: &Scene) -> Result<(), RenderError> {
    if !scene.camera.is_valid() {
        return Err(RenderError::DegenerateCamera);
    }
    scene.validate()?;
    Ok(())
}

/// Renders the scene through its camera.
pub fn render(scene: &Scene) -> Result<FrameBuffer, RenderError> {
    render_with_depth(scene).map(|(fb, _)| fb)
}

/// Renders colour and depth in one pass.
pub fn render_with_depth(scene: &Scene) -> Result<(FrameBuffer, DepthBuffer), RenderError> {
    check_scene(scene)?;
    let cam = &scene.camera;
    let (w, h) = cam.resolution;
    let background = scene.background.to_rgb8();
    let mut fb = FrameBuffer::filled(w, h, background);
    let mut depth = DepthBuffer::new(w, h);
    let tracer = Tracer::new(scene);
    let rot = cam.rotation();
    let focal_px = cam.focal_px();
    let origin = cam.pose.position;

    for row in 0..h {
        for col in 0..w {
            let dir = rot.mul_vec(cam.pixel_dir_camera(focal_px, col, row)).normalized();
            if let Some(hit) = tracer.trace(origin, dir) {
                let albedo = surface_color(tracer.material(hit.object), hit.uv.0, hit.uv.1);
                fb.set(col, row, shade(albedo, hit.normal, &scene.light).to_rgb8());
                depth.depth[row as usize * w as usize + col as usize] = hit.distance;
            }
        }
    }
    Ok((fb, depth))
}

/// Renders and converts straight to luminance.
pub fn render_gray(scene: &Scene) -> Result<GrayFrame, RenderError> {
    render(scene).map(|fb| to_grayscale(&fb))
}
