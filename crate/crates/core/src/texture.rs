//! Procedural surface patterns that never repeat.
//!
//! Both patterns hash integer lattice coordinates together with a seed, so
//! they are pure functions of `(material, u, v)`.

use thiserror::Error;

use crate::rng::mix64;
use crate::scene::{Color, Material};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("flat material has no texture to sample")]
pub struct NotATexture;

fn lattice_hash(seed: u64, ix: i64, iy: i64) -> u64 {
    let h = mix64(seed ^ 0xA076_1D64_78BD_642F);
    let h = mix64(h ^ (ix as u64).wrapping_mul(0xE703_7ED1_A0B4_28DB));
    mix64(h ^ (iy as u64).wrapping_mul(0x8EBC_6AF0_9C88_C6E3))
}

fn unit(h: u64) -> f64 {
    (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Bilinearly interpolated lattice value noise in `[0, 1]`.
pub fn value_noise(seed: u64, x: f64, y: f64) -> f64 {
    let (fx, fy) = (x.floor(), y.floor());
    let (ix, iy) = (fx as i64, fy as i64);
    let (tx, ty) = (x - fx, y - fy);
    let v00 = unit(lattice_hash(seed, ix, iy));
    let v10 = unit(lattice_hash(seed, ix.wrapping_add(1), iy));
    let v01 = unit(lattice_hash(seed, ix, iy.wrapping_add(1)));
    let v11 = unit(lattice_hash(seed, ix.wrapping_add(1), iy.wrapping_add(1)));
    let top = v00 + (v10 - v00) * tx;
    let bottom = v01 + (v11 - v01) * tx;
    top + (bottom - top) * ty
}

/// Samples a textured material at surface coordinates `(u, v)` in metres.
pub fn texture_sample(material: &Material, u: f64, v: f64) -> Result<Color, NotATexture> {
    match *material {
        Material::Flat { .. } => Err(NotATexture),
        Material::NoiseTexture { seed, scale, palette } => {
            let t = value_noise(seed, u * scale, v * scale);
            Ok(palette.0.lerp(palette.1, t))
        }
        Material::CheckerHash { seed, cell_size } => {
            let ix = (u / cell_size).floor() as i64;
            let iy = (v / cell_size).floor() as i64;
            let h = lattice_hash(seed, ix, iy);
            let channel = |shift: u32| 0.15 + 0.75 * f64::from(((h >> shift) & 0xFF) as u8) / 255.0;
            Ok(Color::rgb(channel(0), channel(8), channel(16)))
        }
    }
}

/// Surface colour of any material: the albedo for flat materials, the
/// sampled pattern otherwise.
pub fn surface_color(material: &Material, u: f64, v: f64) -> Color {
    match material {
        Material::Flat { albedo } => *albedo,
        textured => texture_sample(textured, u, v).unwrap_or(Color::BLACK),
    }
}
