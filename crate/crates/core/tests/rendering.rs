use pixgym::camera::Camera;
use pixgym::render::{render, render_with_depth};
use pixgym::scene::{Color, DirectionalLight, Material, Primitive, Scene, SceneObject, Transform};
use pixgym::texture::texture_sample;
use pixgym::Vec3;
use proptest::prelude::*;

fn lit_scene(camera: Camera) -> Scene {
    let mut s = Scene::new(camera);
    s.light = DirectionalLight::new(Vec3::new(0.0, 0.0, -1.0), 0.8, 0.2);
    s
}

/// Pixel rectangle `[c0, c1) x [r0, r1)` covered by non-background pixels.
fn covered_rect(fb: &pixgym::FrameBuffer, bg: [u8; 3]) -> Option<(u32, u32, u32, u32)> {
    let mut rect: Option<(u32, u32, u32, u32)> = None;
    for row in 0..fb.height() {
        for col in 0..fb.width() {
            if fb.get(col, row) != bg {
                let r = rect.get_or_insert((col, col + 1, row, row + 1));
                r.0 = r.0.min(col);
                r.1 = r.1.max(col + 1);
                r.2 = r.2.min(row);
                r.3 = r.3.max(row + 1);
            }
        }
    }
    rect
}

#[test]
fn unit_box_matches_projected_silhouette() {
    let camera = Camera::new(18.0, 36.0, (100, 100), Transform::identity());
    let mut scene = lit_scene(camera.clone());
    scene
        .add_object(SceneObject::new(
            "box",
            Primitive::Box {
                half_extents: Vec3::new(0.5, 0.5, 0.5),
            },
            Material::flat(Color::WHITE),
            Transform::at(Vec3::new(0.0, 0.0, -5.0)),
        ))
        .unwrap();
    let fb = render(&scene).unwrap();
    let (c0, c1, r0, r1) = covered_rect(&fb, [0, 0, 0]).unwrap();

    // Oracle: project all eight corners with the camera model alone.
    let (mut umin, mut umax, mut vmin, mut vmax) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for sx in [-0.5, 0.5] {
        for sy in [-0.5, 0.5] {
            for sz in [-0.5, 0.5] {
                let (u, v) = camera.project(Vec3::new(sx, sy, -5.0 + sz)).unwrap();
                umin = umin.min(u);
                umax = umax.max(u);
                vmin = vmin.min(v);
                vmax = vmax.max(v);
            }
        }
    }
    for (got, want) in [(c0, umin), (c1, umax), (r0, vmin), (r1, vmax)] {
        assert!(
            (f64::from(got) - want).abs() <= 1.0,
            "rect edge {got} vs projected {want}"
        );
    }
}

#[test]
fn render_is_byte_deterministic() {
    for name in pixgym::ENV_NAMES {
        let mut env = pixgym::make_env(name).unwrap();
        env.reset(pixgym::Seed(11)).unwrap();
        let scene = env.scene();
        assert_eq!(render(&scene).unwrap(), render(&scene).unwrap());
        // A serialized and re-loaded scene renders identically.
        let reloaded = Scene::from_json(&scene.to_json().unwrap()).unwrap();
        assert_eq!(render(&reloaded).unwrap(), render(&scene).unwrap());
    }
}

#[test]
fn texture_sampling_is_pure() {
    let m = Material::NoiseTexture {
        seed: 77,
        scale: 1.3,
        palette: (Color::gray(0.1), Color::rgb(0.9, 0.5, 0.2)),
    };
    let first = texture_sample(&m, 3.21, -0.75).unwrap();
    for _ in 0..1_000_000 {
        assert_eq!(texture_sample(&m, 3.21, -0.75).unwrap(), first);
    }
}

fn sphere(id: &str, center: Vec3, radius: f64, albedo: Color) -> SceneObject {
    SceneObject::new(
        id,
        Primitive::Sphere { radius },
        Material::flat(albedo),
        Transform::at(center),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn projection_scales_with_resolution(
        x in -3.0f64..3.0, y in -3.0f64..3.0, z in -20.0f64..-0.5,
        w in 1u32..400, h in 1u32..400,
        focal in 5.0f64..100.0, sensor in 10.0f64..50.0,
    ) {
        let small = Camera::new(focal, sensor, (w, h), Transform::identity());
        let big = Camera::new(focal, sensor, (2 * w, 2 * h), Transform::identity());
        let p = Vec3::new(x, y, z);
        if let Some((u, v)) = small.project(p) {
            let (u2, v2) = big.project(p).expect("still inside the doubled frame");
            prop_assert!((u2 - 2.0 * u).abs() <= 1e-9 * u2.abs().max(1.0));
            prop_assert!((v2 - 2.0 * v).abs() <= 1e-9 * v2.abs().max(1.0));
        }
    }

    #[test]
    fn projected_points_are_inside_the_frame(
        x in -50.0f64..50.0, y in -50.0f64..50.0, z in -50.0f64..50.0,
        rx in -3.2f64..3.2, ry in -3.2f64..3.2, rz in -3.2f64..3.2,
        w in 1u32..300, h in 1u32..300,
    ) {
        let cam = Camera::new(20.0, 36.0, (w, h), Transform::at(Vec3::new(1.0, 2.0, 3.0)).with_rotation(Vec3::new(rx, ry, rz)));
        if let Some((u, v)) = cam.project(Vec3::new(x, y, z)) {
            prop_assert!(u >= 0.0 && u < f64::from(w));
            prop_assert!(v >= 0.0 && v < f64::from(h));
        }
    }

    #[test]
    fn transform_round_trip_is_bit_identical(
        px in -1e3f64..1e3, py in -1e3f64..1e3, pz in -1e3f64..1e3,
        rx in -7.0f64..7.0, ry in -7.0f64..7.0, rz in -7.0f64..7.0,
        sx in 1e-3f64..1e3,
    ) {
        let mut scene = lit_scene(Camera::new(18.0, 36.0, (8, 8), Transform::identity()));
        scene.add_object(sphere("s", Vec3::ZERO, 1.0, Color::WHITE)).unwrap();
        let t = Transform::at(Vec3::new(px, py, pz)).with_rotation(Vec3::new(rx, ry, rz)).with_scale(Vec3::new(sx, 1.0, 2.0));
        scene.set_transform("s", t).unwrap();
        prop_assert_eq!(scene.object("s").unwrap().transform, t);
        let json = scene.to_json().unwrap();
        prop_assert_eq!(Scene::from_json(&json).unwrap().object("s").unwrap().transform, t);
    }

    #[test]
    fn overlapping_pixels_belong_to_the_nearer_object(
        d_near in 2.0f64..8.0, gap in 0.5f64..10.0,
        r_near in 0.2f64..1.5, r_far in 0.2f64..3.0,
        ox in -0.8f64..0.8, oy in -0.8f64..0.8,
    ) {
        let cam = Camera::new(18.0, 36.0, (40, 40), Transform::identity());
        let near = sphere("near", Vec3::new(ox, oy, -d_near), r_near.min(d_near - 0.5), Color::rgb(1.0, 0.0, 0.0));
        let far = sphere("far", Vec3::new(0.0, 0.0, -(d_near + gap + r_far)), r_far, Color::rgb(0.0, 0.0, 1.0));

        let only = |objs: Vec<SceneObject>| {
            let mut s = lit_scene(cam.clone());
            for o in objs { s.add_object(o).unwrap(); }
            render_with_depth(&s).unwrap()
        };
        let (_, dn) = only(vec![near.clone()]);
        let (_, df) = only(vec![far.clone()]);
        // Scene order must not matter.
        let (fb_a, da) = only(vec![near.clone(), far.clone()]);
        let (fb_b, _) = only(vec![far, near]);
        prop_assert_eq!(&fb_a, &fb_b);
        for i in 0..da.depth.len() {
            let (n, f) = (dn.depth[i], df.depth[i]);
            if n.is_finite() && f.is_finite() {
                prop_assert_eq!(da.depth[i], n.min(f));
                let px = fb_a.pixels()[i];
                prop_assert!(px[2] == 0, "far colour leaked through at {}", i);
            }
        }
    }
}
