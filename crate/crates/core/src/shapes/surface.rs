//! Area-weighted boundary samplers for every shape family.

use ndarray::Array2;
use rand::Rng as _;

use super::{FamilyParams, PointCloud, ShapeSpec};
use crate::error::{Error, Result};
use crate::rng::{stream_rng, Rng};

const MAX_REJECT: usize = 100_000;

/// Sample `n` points approximately uniform over the shape's boundary surface.
///
/// Per-family parametric sampling with analytic area weights; rejection steps
/// (torus density, ellipsoid area distortion, hole cutouts, union overlap)
/// keep the distribution exact. Deterministic given `seed`.
pub fn sample_surface(shape: &ShapeSpec, n: usize, seed: u64) -> Result<PointCloud> {
    if n == 0 {
        return Err(Error::invalid_argument("surface sample count must be >= 1"));
    }
    validate_params(shape)?;

    let mut rng = stream_rng(seed, "surface", &[shape.seed, shape.label as u64]);
    let mut pts = Array2::zeros((n, 3));
    for i in 0..n {
        let local = sample_local(&shape.params, &mut rng)?;
        let world = shape.pose.apply(local);
        for k in 0..3 {
            pts[[i, k]] = world[k];
        }
    }
    PointCloud::new(pts)
}

fn validate_params(shape: &ShapeSpec) -> Result<()> {
    let bad = |msg: &str| Err(Error::DegenerateShape(format!("{:?}: {msg}", shape.family)));
    match shape.params {
        FamilyParams::Sphere { r } => {
            if r <= 0.0 {
                return bad("radius must be positive");
            }
        }
        FamilyParams::Box { half } | FamilyParams::Ellipsoid { half } => {
            if half.iter().any(|&h| h <= 0.0) {
                return bad("extents must be positive");
            }
        }
        FamilyParams::Torus { major, minor } => {
            if major <= 0.0 || minor <= 0.0 || minor >= major {
                return bad("requires 0 < minor < major");
            }
        }
        FamilyParams::Cylinder { r, half_h } | FamilyParams::Capsule { r, half_h } => {
            if r <= 0.0 || half_h <= 0.0 {
                return bad("radius and height must be positive");
            }
        }
        FamilyParams::BoxWithHole { half, hole_r } => {
            if half.iter().any(|&h| h <= 0.0) {
                return bad("extents must be positive");
            }
            if hole_r <= 0.0 || hole_r >= half[0].min(half[1]) {
                return bad("hole must be positive and fit inside the z-faces");
            }
        }
        FamilyParams::TwoSphereUnion { r1, r2, separation } => {
            if r1 <= 0.0 || r2 <= 0.0 || separation <= 0.0 {
                return bad("radii and separation must be positive");
            }
            if separation + r1.min(r2) <= r1.max(r2) {
                return bad("one sphere swallows the other");
            }
        }
    }
    Ok(())
}

fn sample_local(params: &FamilyParams, rng: &mut Rng) -> Result<[f64; 3]> {
    use std::f64::consts::{PI, TAU};
    match *params {
        FamilyParams::Sphere { r } => Ok(scale(unit_dir(rng), r)),
        FamilyParams::Box { half } => Ok(sample_box_face(half, rng)),
        FamilyParams::Torus { major, minor } => {
            // Poloidal angle has density proportional to (major + minor cos phi).
            for _ in 0..MAX_REJECT {
                let phi = rng.random_range(0.0..TAU);
                let accept = (major + minor * phi.cos()) / (major + minor);
                if rng.random::<f64>() <= accept {
                    let theta = rng.random_range(0.0..TAU);
                    let ring = major + minor * phi.cos();
                    return Ok([ring * theta.cos(), ring * theta.sin(), minor * phi.sin()]);
                }
            }
            Err(Error::DegenerateShape("torus sampling stalled".into()))
        }
        FamilyParams::Cylinder { r, half_h } => {
            let side = TAU * r * 2.0 * half_h;
            let caps = 2.0 * PI * r * r;
            if rng.random_range(0.0..side + caps) < side {
                let theta = rng.random_range(0.0..TAU);
                Ok([r * theta.cos(), r * theta.sin(), rng.random_range(-half_h..=half_h)])
            } else {
                let (x, y) = disc(rng, r);
                let z = if rng.random::<bool>() { half_h } else { -half_h };
                Ok([x, y, z])
            }
        }
        FamilyParams::Capsule { r, half_h } => {
            let side = TAU * r * 2.0 * half_h;
            let sphere = 4.0 * PI * r * r; // two hemispherical caps
            if rng.random_range(0.0..side + sphere) < side {
                let theta = rng.random_range(0.0..TAU);
                Ok([r * theta.cos(), r * theta.sin(), rng.random_range(-half_h..=half_h)])
            } else {
                let d = unit_dir(rng);
                let shift = if d[2] >= 0.0 { half_h } else { -half_h };
                Ok([r * d[0], r * d[1], r * d[2] + shift])
            }
        }
        FamilyParams::Ellipsoid { half } => {
            let [a, b, c] = half;
            let envelope = (b * c).max(a * c).max(a * b);
            for _ in 0..MAX_REJECT {
                let u = unit_dir(rng);
                let m = [b * c * u[0], a * c * u[1], a * b * u[2]];
                let w = (m[0] * m[0] + m[1] * m[1] + m[2] * m[2]).sqrt();
                if rng.random::<f64>() <= w / envelope {
                    return Ok([a * u[0], b * u[1], c * u[2]]);
                }
            }
            Err(Error::DegenerateShape("ellipsoid sampling stalled".into()))
        }
        FamilyParams::BoxWithHole { half, hole_r } => {
            sample_box_with_hole(half, hole_r, rng)
        }
        FamilyParams::TwoSphereUnion { r1, r2, separation } => {
            let d = separation / 2.0;
            let a1 = 4.0 * PI * r1 * r1;
            let a2 = 4.0 * PI * r2 * r2;
            for _ in 0..MAX_REJECT {
                let (center_x, r, other_x, other_r) = if rng.random_range(0.0..a1 + a2) < a1 {
                    (d, r1, -d, r2)
                } else {
                    (-d, r2, d, r1)
                };
                let u = unit_dir(rng);
                let p = [center_x + r * u[0], r * u[1], r * u[2]];
                let dx = p[0] - other_x;
                if dx * dx + p[1] * p[1] + p[2] * p[2] >= other_r * other_r {
                    return Ok(p);
                }
            }
            Err(Error::DegenerateShape("two-sphere sampling stalled".into()))
        }
    }
}

/// Area-weighted point on one of the six faces of a box.
fn sample_box_face(half: [f64; 3], rng: &mut Rng) -> [f64; 3] {
    let [a, b, c] = half;
    let areas = [b * c, a * c, a * b]; // faces normal to x, y, z (per pair)
    let total: f64 = areas.iter().sum();
    let mut pick = rng.random_range(0.0..total);
    let mut axis = 0;
    for (k, &ar) in areas.iter().enumerate() {
        if pick < ar {
            axis = k;
            break;
        }
        pick -= ar;
    }
    let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
    let mut p = [
        rng.random_range(-a..=a),
        rng.random_range(-b..=b),
        rng.random_range(-c..=c),
    ];
    p[axis] = sign * half[axis];
    p
}

fn sample_box_with_hole(half: [f64; 3], hole_r: f64, rng: &mut Rng) -> Result<[f64; 3]> {
    use std::f64::consts::{PI, TAU};
    let [a, b, c] = half;
    let z_faces = 2.0 * (4.0 * a * b - PI * hole_r * hole_r);
    let x_faces = 2.0 * 4.0 * b * c;
    let y_faces = 2.0 * 4.0 * a * c;
    let tube = TAU * hole_r * 2.0 * c;
    let total = z_faces + x_faces + y_faces + tube;

    let pick = rng.random_range(0.0..total);
    if pick < z_faces {
        // z-face with the circular cutout removed.
        let z = if rng.random::<bool>() { c } else { -c };
        for _ in 0..MAX_REJECT {
            let x = rng.random_range(-a..=a);
            let y = rng.random_range(-b..=b);
            if x * x + y * y >= hole_r * hole_r {
                return Ok([x, y, z]);
            }
        }
        Err(Error::DegenerateShape("hole covers the z-face".into()))
    } else if pick < z_faces + x_faces {
        let x = if rng.random::<bool>() { a } else { -a };
        Ok([x, rng.random_range(-b..=b), rng.random_range(-c..=c)])
    } else if pick < z_faces + x_faces + y_faces {
        let y = if rng.random::<bool>() { b } else { -b };
        Ok([rng.random_range(-a..=a), y, rng.random_range(-c..=c)])
    } else {
        let theta = rng.random_range(0.0..TAU);
        Ok([
            hole_r * theta.cos(),
            hole_r * theta.sin(),
            rng.random_range(-c..=c),
        ])
    }
}

fn unit_dir(rng: &mut Rng) -> [f64; 3] {
    use rand_distr::{Distribution, StandardNormal};
    loop {
        let v: [f64; 3] = [
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
        ];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-12 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

fn disc(rng: &mut Rng, r: f64) -> (f64, f64) {
    let theta = rng.random_range(0.0..std::f64::consts::TAU);
    let rad = r * rng.random::<f64>().sqrt();
    (rad * theta.cos(), rad * theta.sin())
}

fn scale(v: [f64; 3], s: f64) -> [f64; 3] {
    [v[0] * s, v[1] * s, v[2] * s]
}
