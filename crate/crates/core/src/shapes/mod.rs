//! Procedural corpus of labeled 3D shapes with exact occupancy oracles and
//! area-weighted surface samplers.
//!
//! Eight parametric families stand in for a mesh dataset. Every shape is
//! posed (random rotation + translation) and normalized so its occupied
//! region stays strictly inside the cube `[-1,1]^3` with a 0.1 margin.
//! Occupancy tests are analytic inside/outside checks after an inverse pose
//! transform, so any query point has an exact ground-truth label.

mod corpus;
mod oracle;
mod surface;

pub use corpus::{export_xyz_ascii, export_xyz_binary, import_xyz_ascii, import_xyz_binary, Corpus};
pub use oracle::{occupancy_oracle, sample_occupancy_queries, OccupancyQueryBatch};
pub use surface::sample_surface;

use ndarray::Array2;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{stream_rng, Rng};

/// The eight shape families; the class set for probing tasks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShapeFamily {
    Sphere,
    Box,
    Torus,
    Cylinder,
    Capsule,
    Ellipsoid,
    BoxWithHole,
    TwoSphereUnion,
}

impl ShapeFamily {
    pub const ALL: [ShapeFamily; 8] = [
        ShapeFamily::Sphere,
        ShapeFamily::Box,
        ShapeFamily::Torus,
        ShapeFamily::Cylinder,
        ShapeFamily::Capsule,
        ShapeFamily::Ellipsoid,
        ShapeFamily::BoxWithHole,
        ShapeFamily::TwoSphereUnion,
    ];

    /// Class id (index into [`ShapeFamily::ALL`]).
    pub fn label(self) -> usize {
        Self::ALL.iter().position(|&f| f == self).unwrap()
    }

    pub fn name(self) -> &'static str {
        match self {
            ShapeFamily::Sphere => "sphere",
            ShapeFamily::Box => "box",
            ShapeFamily::Torus => "torus",
            ShapeFamily::Cylinder => "cylinder",
            ShapeFamily::Capsule => "capsule",
            ShapeFamily::Ellipsoid => "ellipsoid",
            ShapeFamily::BoxWithHole => "box-with-hole",
            ShapeFamily::TwoSphereUnion => "two-sphere-union",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|f| f.name() == name)
            .ok_or_else(|| Error::invalid_config(format!("unknown shape family `{name}`")))
    }
}

/// Per-family parameters in normalized units. All lengths are half-extents
/// or radii in the local (unposed) frame, which is centered at the origin.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FamilyParams {
    Sphere { r: f64 },
    Box { half: [f64; 3] },
    /// Tube axis is local z; `major` is the center-circle radius.
    Torus { major: f64, minor: f64 },
    /// Axis is local z; `half_h` is half the cylinder height.
    Cylinder { r: f64, half_h: f64 },
    /// Axis is local z; `half_h` is half the cylindrical section height.
    Capsule { r: f64, half_h: f64 },
    Ellipsoid { half: [f64; 3] },
    /// Axis-aligned box with a cylindrical hole drilled along local z.
    BoxWithHole { half: [f64; 3], hole_r: f64 },
    /// Two overlapping spheres centered at `(±separation/2, 0, 0)`.
    TwoSphereUnion { r1: f64, r2: f64, separation: f64 },
}

/// Rigid pose: unit quaternion `(w, x, y, z)` plus a translation.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Pose {
    pub rotation: [f64; 4],
    pub translation: [f64; 3],
}

impl Pose {
    pub fn identity() -> Self {
        Pose { rotation: [1.0, 0.0, 0.0, 0.0], translation: [0.0; 3] }
    }

    /// Rotate a local vector by the pose quaternion.
    fn rotate(&self, v: [f64; 3]) -> [f64; 3] {
        let [w, x, y, z] = self.rotation;
        // q * (0, v) * q^-1, expanded.
        let t = [
            2.0 * (y * v[2] - z * v[1]),
            2.0 * (z * v[0] - x * v[2]),
            2.0 * (x * v[1] - y * v[0]),
        ];
        [
            v[0] + w * t[0] + y * t[2] - z * t[1],
            v[1] + w * t[1] + z * t[0] - x * t[2],
            v[2] + w * t[2] + x * t[1] - y * t[0],
        ]
    }

    /// Local frame -> world frame.
    pub fn apply(&self, local: [f64; 3]) -> [f64; 3] {
        let r = self.rotate(local);
        [
            r[0] + self.translation[0],
            r[1] + self.translation[1],
            r[2] + self.translation[2],
        ]
    }

    /// World frame -> local frame.
    pub fn invert(&self, world: [f64; 3]) -> [f64; 3] {
        let centered = [
            world[0] - self.translation[0],
            world[1] - self.translation[1],
            world[2] - self.translation[2],
        ];
        let conj = Pose {
            rotation: [self.rotation[0], -self.rotation[1], -self.rotation[2], -self.rotation[3]],
            translation: [0.0; 3],
        };
        conj.rotate(centered)
    }

    /// Uniform random rotation (Shoemake) plus a translation bounded by `t_max`.
    fn random(rng: &mut Rng, t_max: f64) -> Self {
        let u1: f64 = rng.random();
        let u2: f64 = rng.random();
        let u3: f64 = rng.random();
        let tau = std::f64::consts::TAU;
        let rotation = [
            (1.0 - u1).sqrt() * (tau * u2).sin(),
            (1.0 - u1).sqrt() * (tau * u2).cos(),
            u1.sqrt() * (tau * u3).sin(),
            u1.sqrt() * (tau * u3).cos(),
        ];
        let mut translation = [0.0; 3];
        for t in &mut translation {
            *t = rng.random_range(-t_max..=t_max);
        }
        Pose { rotation, translation }
    }
}

/// A fully specified, posed, labeled shape. The occupancy oracle and the
/// surface sampler are deterministic functions of this value.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ShapeSpec {
    pub family: ShapeFamily,
    pub params: FamilyParams,
    pub pose: Pose,
    pub label: usize,
    pub seed: u64,
}

/// A point set in the normalized cube.
#[derive(Clone, Debug)]
pub struct PointCloud {
    points: Array2<f64>,
}

impl PointCloud {
    /// Wrap an `n x 3` coordinate array, validating the cube bound.
    pub fn new(points: Array2<f64>) -> Result<Self> {
        if points.ncols() != 3 {
            return Err(Error::ShapeMismatch(format!(
                "point cloud must be n x 3, got n x {}",
                points.ncols()
            )));
        }
        if points.iter().any(|v| !v.is_finite() || v.abs() > 1.0) {
            return Err(Error::invalid_argument(
                "point cloud coordinates must lie in [-1, 1]",
            ));
        }
        Ok(PointCloud { points })
    }

    pub fn points(&self) -> &Array2<f64> {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn point(&self, i: usize) -> [f64; 3] {
        [self.points[[i, 0]], self.points[[i, 1]], self.points[[i, 2]]]
    }

    /// Keep only the rows in `idx`.
    pub fn select(&self, idx: &[usize]) -> PointCloud {
        let mut out = Array2::zeros((idx.len(), 3));
        for (r, &i) in idx.iter().enumerate() {
            out.row_mut(r).assign(&self.points.row(i));
        }
        PointCloud { points: out }
    }
}

/// Volume-fraction bounds of the cube enforced by `make_shape`.
pub const MIN_VOLUME_FRACTION: f64 = 0.005;
pub const MAX_VOLUME_FRACTION: f64 = 0.6;
/// Shapes stay inside `[-0.9, 0.9]^3` (a 0.1 margin to the cube boundary).
pub const CUBE_MARGIN: f64 = 0.1;

impl ShapeSpec {
    /// Analytic volume of the occupied region.
    pub fn volume(&self) -> f64 {
        use std::f64::consts::PI;
        match self.params {
            FamilyParams::Sphere { r } => 4.0 / 3.0 * PI * r.powi(3),
            FamilyParams::Box { half } => 8.0 * half[0] * half[1] * half[2],
            FamilyParams::Torus { major, minor } => 2.0 * PI * PI * major * minor * minor,
            FamilyParams::Cylinder { r, half_h } => PI * r * r * 2.0 * half_h,
            FamilyParams::Capsule { r, half_h } => {
                PI * r * r * 2.0 * half_h + 4.0 / 3.0 * PI * r.powi(3)
            }
            FamilyParams::Ellipsoid { half } => 4.0 / 3.0 * PI * half[0] * half[1] * half[2],
            FamilyParams::BoxWithHole { half, hole_r } => {
                8.0 * half[0] * half[1] * half[2] - PI * hole_r * hole_r * 2.0 * half[2]
            }
            FamilyParams::TwoSphereUnion { r1, r2, separation } => {
                let v1 = 4.0 / 3.0 * PI * r1.powi(3);
                let v2 = 4.0 / 3.0 * PI * r2.powi(3);
                v1 + v2 - sphere_lens_volume(r1, r2, separation)
            }
        }
    }

    /// Fraction of the cube `[-1,1]^3` occupied by the shape.
    pub fn volume_fraction(&self) -> f64 {
        self.volume() / 8.0
    }

    /// Radius of the circumscribed sphere in the local frame.
    pub fn bounding_radius(&self) -> f64 {
        fn norm3(v: [f64; 3]) -> f64 {
            (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
        }
        match self.params {
            FamilyParams::Sphere { r } => r,
            FamilyParams::Box { half } | FamilyParams::BoxWithHole { half, .. } => norm3(half),
            FamilyParams::Torus { major, minor } => major + minor,
            FamilyParams::Cylinder { r, half_h } => (r * r + half_h * half_h).sqrt(),
            FamilyParams::Capsule { r, half_h } => half_h + r,
            FamilyParams::Ellipsoid { half } => half[0].max(half[1]).max(half[2]),
            FamilyParams::TwoSphereUnion { r1, r2, separation } => {
                separation / 2.0 + r1.max(r2)
            }
        }
    }
}

/// Volume of the intersection lens of two spheres a distance `d` apart.
fn sphere_lens_volume(r1: f64, r2: f64, d: f64) -> f64 {
    use std::f64::consts::PI;
    if d >= r1 + r2 {
        return 0.0;
    }
    if d + r1.min(r2) <= r1.max(r2) {
        // One sphere swallowed by the other.
        let r = r1.min(r2);
        return 4.0 / 3.0 * PI * r.powi(3);
    }
    PI * (r1 + r2 - d).powi(2)
        * (d * d + 2.0 * d * (r1 + r2) - 3.0 * (r1 - r2).powi(2))
        / (12.0 * d)
}

fn draw_params(family: ShapeFamily, rng: &mut Rng) -> FamilyParams {
    let mut range = |lo: f64, hi: f64| rng.random_range(lo..=hi);
    match family {
        ShapeFamily::Sphere => FamilyParams::Sphere { r: range(0.22, 0.62) },
        ShapeFamily::Box => FamilyParams::Box {
            half: [range(0.18, 0.5), range(0.18, 0.5), range(0.18, 0.5)],
        },
        ShapeFamily::Torus => {
            let major = range(0.3, 0.52);
            let minor = range(0.09, (0.55 * major).min(0.22));
            FamilyParams::Torus { major, minor }
        }
        ShapeFamily::Cylinder => FamilyParams::Cylinder {
            r: range(0.16, 0.45),
            half_h: range(0.16, 0.5),
        },
        ShapeFamily::Capsule => FamilyParams::Capsule {
            r: range(0.13, 0.3),
            half_h: range(0.12, 0.45),
        },
        ShapeFamily::Ellipsoid => {
            // Force anisotropy so ellipsoids do not collapse onto spheres.
            loop {
                let half = [range(0.18, 0.55), range(0.18, 0.55), range(0.18, 0.55)];
                let lo = half[0].min(half[1]).min(half[2]);
                let hi = half[0].max(half[1]).max(half[2]);
                if hi / lo >= 1.35 {
                    return FamilyParams::Ellipsoid { half };
                }
            }
        }
        ShapeFamily::BoxWithHole => {
            let half = [range(0.22, 0.5), range(0.22, 0.5), range(0.22, 0.5)];
            let hole_r = range(0.35, 0.7) * half[0].min(half[1]);
            FamilyParams::BoxWithHole { half, hole_r }
        }
        ShapeFamily::TwoSphereUnion => {
            let r1 = range(0.18, 0.38);
            let r2 = range(0.18, 0.38);
            let separation = range(0.6, 0.95) * (r1 + r2);
            FamilyParams::TwoSphereUnion { r1, r2, separation }
        }
    }
}

/// Draw a shape for `(family, seed)`. Parameter draws violating the
/// volume-fraction or margin invariants are rejected and resampled, so the
/// returned spec always satisfies both. Identical inputs give identical specs.
pub fn make_shape(family: ShapeFamily, seed: u64) -> ShapeSpec {
    let mut rng = stream_rng(seed, "shape-params", &[family.label() as u64]);
    loop {
        let params = draw_params(family, &mut rng);
        let probe = ShapeSpec {
            family,
            params,
            pose: Pose::identity(),
            label: family.label(),
            seed,
        };
        let frac = probe.volume_fraction();
        if !(MIN_VOLUME_FRACTION..=MAX_VOLUME_FRACTION).contains(&frac) {
            continue;
        }
        let rho = probe.bounding_radius();
        let t_max = (1.0 - CUBE_MARGIN - rho).min(0.3);
        if t_max < 0.02 {
            continue;
        }
        let pose = Pose::random(&mut rng, t_max);
        return ShapeSpec { pose, ..probe };
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn make_shape_is_deterministic() {
        let a = make_shape(ShapeFamily::Sphere, 0);
        let b = make_shape(ShapeFamily::Sphere, 0);
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        match a.params {
            FamilyParams::Sphere { r } => assert!((0.2..=0.8).contains(&r)),
            other => panic!("unexpected params {other:?}"),
        }
    }

    #[test]
    fn distinct_seeds_give_distinct_shapes() {
        let a = make_shape(ShapeFamily::Torus, 1);
        let b = make_shape(ShapeFamily::Torus, 2);
        assert_ne!(
            serde_json::to_string(&a.params).unwrap(),
            serde_json::to_string(&b.params).unwrap()
        );
    }

    #[test]
    fn every_family_satisfies_volume_and_margin_invariants() {
        for family in ShapeFamily::ALL {
            for seed in 0..200 {
                let s = make_shape(family, seed);
                let frac = s.volume_fraction();
                assert!(
                    (MIN_VOLUME_FRACTION..=MAX_VOLUME_FRACTION).contains(&frac),
                    "{:?} seed {} fraction {}",
                    family,
                    seed,
                    frac
                );
                let reach = s.bounding_radius()
                    + s.pose
                        .translation
                        .iter()
                        .fold(0.0f64, |m, t| m.max(t.abs()));
                assert!(reach <= 1.0 - CUBE_MARGIN + 1e-12, "{family:?} seed {seed}");
                assert_eq!(s.label, family.label());
            }
        }
    }

    #[test]
    fn pose_roundtrip_and_rotation_is_orthonormal() {
        let mut rng = stream_rng(3, "pose-test", &[]);
        for _ in 0..100 {
            let pose = Pose::random(&mut rng, 0.3);
            let p = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), 0.25];
            let q = pose.invert(pose.apply(p));
            for k in 0..3 {
                assert!((p[k] - q[k]).abs() < 1e-12);
            }
            // Rotation preserves norms.
            let r = pose.rotate(p);
            let n0 = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
            let n1 = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
            assert!((n0 - n1).abs() < 1e-12);
        }
    }

    #[test]
    fn lens_volume_limits() {
        // Disjoint spheres share no volume.
        assert_eq!(sphere_lens_volume(0.3, 0.2, 0.6), 0.0);
        // Coincident spheres overlap in the smaller sphere exactly.
        let v = sphere_lens_volume(0.3, 0.2, 1e-12);
        let small = 4.0 / 3.0 * std::f64::consts::PI * 0.2f64.powi(3);
        assert!((v - small).abs() < 1e-9);
    }

    #[test]
    fn point_cloud_rejects_out_of_cube() {
        let arr = ndarray::arr2(&[[0.0, 0.0, 1.5]]);
        assert!(PointCloud::new(arr).is_err());
    }
}
