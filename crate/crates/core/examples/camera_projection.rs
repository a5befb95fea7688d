// Pinhole projection: where world points land on a 100x100 sensor for a
// few focal lengths.

use std::error::Error;

use pixgym::math::Vec3;
use pixgym::scene::Transform;
use pixgym::Camera;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let points = [
        Vec3::new(0.0, 0.0, -5.0),
        Vec3::new(1.0, 0.0, -5.0),
        Vec3::new(0.0, 1.0, -5.0),
        Vec3::new(0.0, 0.0, 5.0),
    ];
    for focal in [18.0, 25.0, 50.0] {
        let cam = Camera::new(focal, 36.0, (100, 100), Transform::identity());
        println!(
            "focal {focal} mm: {:.1} deg horizontal fov, {:.2} px focal",
            cam.horizontal_fov().to_degrees(),
            cam.focal_px()
        );
        for p in points {
            match cam.project(p) {
                Some((u, v)) => println!("  ({}, {}, {}) -> ({u:.2}, {v:.2})", p.x, p.y, p.z),
                None => println!("  ({}, {}, {}) -> not visible", p.x, p.y, p.z),
            }
        }
    }

    // The centre of the image is the optical axis.
    let cam = Camera::new(25.0, 36.0, (100, 100), Transform::identity());
    assert_eq!(cam.project(Vec3::new(0.0, 0.0, -3.0)), Some((50.0, 50.0)));
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
