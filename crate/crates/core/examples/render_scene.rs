// Builds a small scene by hand, renders it and writes an 8-bit grayscale
// PNG plus the scene's JSON form.

use std::error::Error;

use pixgym::math::Vec3;
use pixgym::render::render_gray;
use pixgym::scene::{Color, Material, Primitive, Scene, SceneObject, Transform};
use pixgym::Camera;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    // Camera 6 m above the origin looking straight down.
    let camera = Camera::new(25.0, 36.0, (100, 100), Transform::at(Vec3::new(0.0, 0.0, 6.0)));
    let scene = Scene::new(camera)
        .with_object(SceneObject::new(
            "ground",
            Primitive::Plane { half_extent: 10.0 },
            Material::NoiseTexture {
                seed: 7,
                scale: 1.5,
                palette: (Color::gray(0.3), Color::rgb(0.4, 0.7, 0.3)),
            },
            Transform::identity(),
        ))?
        .with_object(SceneObject::new(
            "crate",
            Primitive::Box {
                half_extents: Vec3::new(0.5, 0.5, 0.5),
            },
            Material::flat(Color::rgb(0.8, 0.5, 0.2)),
            Transform::at(Vec3::new(-1.0, 0.5, 0.5)).with_rotation(Vec3::new(0.0, 0.0, 0.4)),
        ))?
        .with_object(SceneObject::new(
            "ball",
            Primitive::Sphere { radius: 0.6 },
            Material::flat(Color::rgb(0.9, 0.1, 0.1)),
            Transform::at(Vec3::new(1.2, -0.8, 0.6)),
        ))?;

    let frame = render_gray(&scene)?;
    let dir = std::env::temp_dir().join("pixgym-examples");
    std::fs::create_dir_all(&dir)?;
    let png = dir.join("render_scene.png");
    frame.save_png(&png)?;
    std::fs::write(dir.join("render_scene.json"), scene.to_json()?)?;

    let mean = frame.pixels().iter().map(|&p| f64::from(p)).sum::<f64>() / frame.pixels().len() as f64;
    println!(
        "{}x{} frame, mean luma {mean:.1}, written to {}",
        frame.width(),
        frame.height(),
        png.display()
    );

    // Reloading the JSON reproduces the same pixels.
    let reloaded = Scene::from_json(&scene.to_json()?)?;
    assert_eq!(render_gray(&reloaded)?, frame);
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
