// Procedural textures are pure functions of (seed, u, v).

use std::error::Error;

use pixgym::scene::{Color, Material};
use pixgym::texture::{texture_sample, value_noise};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let grass = Material::NoiseTexture {
        seed: 3,
        scale: 2.0,
        palette: (Color::rgb(0.2, 0.4, 0.1), Color::rgb(0.5, 0.8, 0.3)),
    };
    for (u, v) in [(0.0, 0.0), (0.25, 0.1), (1.7, -3.2)] {
        let c = texture_sample(&grass, u, v)?;
        println!("grass({u}, {v}) = {:?}", c.to_rgb8());
        assert_eq!(texture_sample(&grass, u, v)?, c);
    }

    // A different seed gives an unrelated pattern.
    let row: Vec<String> = (0..8)
        .map(|i| format!("{:.2}", value_noise(3, i as f64 * 0.37, 0.5)))
        .collect();
    let other: Vec<String> = (0..8)
        .map(|i| format!("{:.2}", value_noise(4, i as f64 * 0.37, 0.5)))
        .collect();
    println!("seed 3: {}", row.join(" "));
    println!("seed 4: {}", other.join(" "));

    let checker = Material::CheckerHash {
        seed: 1,
        cell_size: 0.5,
    };
    println!(
        "checker cell colours: {:?} {:?}",
        texture_sample(&checker, 0.1, 0.1)?.to_rgb8(),
        texture_sample(&checker, 0.6, 0.1)?.to_rgb8()
    );

    // Flat materials have no texture to sample.
    assert!(texture_sample(&Material::flat(Color::WHITE), 0.0, 0.0).is_err());
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
