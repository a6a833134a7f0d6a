//! Exact analytic occupancy tests and labeled query sampling.

use ndarray::Array2;
use rand::Rng as _;
use rand_distr::{Distribution, Normal};

use super::{sample_surface, FamilyParams, ShapeSpec};
use crate::error::{Error, Result};
use crate::rng::stream_rng;

/// Exact inside/outside test for a world-space point.
///
/// Points outside the normalized cube are legal queries; they always answer
/// `false` because every shape lies strictly inside the cube.
pub fn occupancy_oracle(shape: &ShapeSpec, x: [f64; 3]) -> bool {
    let p = shape.pose.invert(x);
    match shape.params {
        FamilyParams::Sphere { r } => sq_norm(p) <= r * r,
        FamilyParams::Box { half } => inside_box(p, half),
        FamilyParams::Torus { major, minor } => {
            let ring = (p[0] * p[0] + p[1] * p[1]).sqrt() - major;
            ring * ring + p[2] * p[2] <= minor * minor
        }
        FamilyParams::Cylinder { r, half_h } => {
            p[0] * p[0] + p[1] * p[1] <= r * r && p[2].abs() <= half_h
        }
        FamilyParams::Capsule { r, half_h } => {
            let z = p[2].abs();
            if z <= half_h {
                p[0] * p[0] + p[1] * p[1] <= r * r
            } else {
                let dz = z - half_h;
                p[0] * p[0] + p[1] * p[1] + dz * dz <= r * r
            }
        }
        FamilyParams::Ellipsoid { half } => {
            let q = (p[0] / half[0]).powi(2) + (p[1] / half[1]).powi(2) + (p[2] / half[2]).powi(2);
            q <= 1.0
        }
        FamilyParams::BoxWithHole { half, hole_r } => {
            inside_box(p, half) && p[0] * p[0] + p[1] * p[1] >= hole_r * hole_r
        }
        FamilyParams::TwoSphereUnion { r1, r2, separation } => {
            let d = separation / 2.0;
            let a = [p[0] - d, p[1], p[2]];
            let b = [p[0] + d, p[1], p[2]];
            sq_norm(a) <= r1 * r1 || sq_norm(b) <= r2 * r2
        }
    }
}

fn sq_norm(v: [f64; 3]) -> f64 {
    v[0] * v[0] + v[1] * v[1] + v[2] * v[2]
}

fn inside_box(p: [f64; 3], half: [f64; 3]) -> bool {
    p[0].abs() <= half[0] && p[1].abs() <= half[1] && p[2].abs() <= half[2]
}

/// Query points with exact occupancy labels.
#[derive(Clone, Debug)]
pub struct OccupancyQueryBatch {
    pub queries: Array2<f64>,
    pub labels: Vec<bool>,
}

impl OccupancyQueryBatch {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn query(&self, i: usize) -> [f64; 3] {
        [self.queries[[i, 0]], self.queries[[i, 1]], self.queries[[i, 2]]]
    }

    pub fn label_mean(&self) -> f64 {
        if self.labels.is_empty() {
            return 0.0;
        }
        self.labels.iter().filter(|&&b| b).count() as f64 / self.labels.len() as f64
    }
}

/// Sample `n_uniform` points uniform in the cube plus `n_near` surface points
/// perturbed by isotropic Gaussian noise of std `noise_sd`, each labeled by
/// the exact oracle. The near-surface half keeps the labels roughly balanced,
/// which uniform sampling alone cannot do for small shapes.
pub fn sample_occupancy_queries(
    shape: &ShapeSpec,
    n_uniform: usize,
    n_near: usize,
    noise_sd: f64,
    seed: u64,
) -> Result<OccupancyQueryBatch> {
    if n_uniform + n_near == 0 {
        return Err(Error::invalid_argument(
            "need at least one occupancy query",
        ));
    }
    if n_near > 0 && !(noise_sd > 0.0) {
        return Err(Error::invalid_argument(
            "noise_sd must be positive when near-surface queries are requested",
        ));
    }

    let total = n_uniform + n_near;
    let mut queries = Array2::zeros((total, 3));
    let mut rng = stream_rng(seed, "occ-queries", &[shape.seed, shape.label as u64]);

    for i in 0..n_uniform {
        for k in 0..3 {
            queries[[i, k]] = rng.random_range(-1.0..=1.0);
        }
    }

    if n_near > 0 {
        let surf = sample_surface(shape, n_near, seed.wrapping_add(0x5f5f))?;
        let normal = Normal::new(0.0, noise_sd).expect("noise_sd validated above");
        for i in 0..n_near {
            let p = surf.point(i);
            for k in 0..3 {
                queries[[n_uniform + i, k]] = p[k] + normal.sample(&mut rng);
            }
        }
    }

    let labels = (0..total)
        .map(|i| {
            occupancy_oracle(
                shape,
                [queries[[i, 0]], queries[[i, 1]], queries[[i, 2]]],
            )
        })
        .collect();

    Ok(OccupancyQueryBatch { queries, labels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes::{make_shape, Pose, ShapeFamily};

    fn unit_sphere(r: f64) -> ShapeSpec {
        ShapeSpec {
            family: ShapeFamily::Sphere,
            params: FamilyParams::Sphere { r },
            pose: Pose::identity(),
            label: 0,
            seed: 0,
        }
    }

    #[test]
    fn sphere_center_inside_corner_outside() {
        let s = unit_sphere(0.5);
        assert!(occupancy_oracle(&s, [0.0, 0.0, 0.0]));
        assert!(!occupancy_oracle(&s, [0.9, 0.9, 0.9]));
    }

    #[test]
    fn torus_tube_axis_circle_is_inside() {
        let s = ShapeSpec {
            family: ShapeFamily::Torus,
            params: FamilyParams::Torus { major: 0.5, minor: 0.15 },
            pose: Pose::identity(),
            label: 2,
            seed: 0,
        };
        assert!(occupancy_oracle(&s, [0.5, 0.0, 0.0]));
        assert!(!occupancy_oracle(&s, [0.0, 0.0, 0.0]));
    }

    #[test]
    fn pose_equivariance_holds_exactly() {
        let mut rng = stream_rng(11, "equivariance", &[]);
        for family in ShapeFamily::ALL {
            let posed = make_shape(family, 77);
            let unposed = ShapeSpec { pose: Pose::identity(), ..posed.clone() };
            for _ in 0..100 {
                let x = [
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                ];
                let lhs = occupancy_oracle(&posed, x);
                let rhs = occupancy_oracle(&unposed, posed.pose.invert(x));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn uniform_query_label_mean_tracks_volume_fraction() {
        let s = unit_sphere(0.5);
        let batch = sample_occupancy_queries(&s, 20_000, 0, 0.02, 9).unwrap();
        let p = s.volume_fraction();
        let sigma = (p * (1.0 - p) / 20_000.0).sqrt();
        assert!(
            (batch.label_mean() - p).abs() <= 3.0 * sigma,
            "mean {} expected {}",
            batch.label_mean(),
            p
        );
    }

    #[test]
    fn near_surface_labels_are_roughly_balanced() {
        let s = unit_sphere(0.5);
        let batch = sample_occupancy_queries(&s, 0, 1000, 0.02, 4).unwrap();
        let mean = batch.label_mean();
        assert!((0.35..=0.65).contains(&mean), "near-surface mean {mean}");
    }

    #[test]
    fn stored_labels_match_fresh_oracle_evaluation() {
        for family in ShapeFamily::ALL {
            let s = make_shape(family, 5);
            let batch = sample_occupancy_queries(&s, 200, 200, 0.02, 3).unwrap();
            for i in 0..batch.len() {
                assert_eq!(batch.labels[i], occupancy_oracle(&s, batch.query(i)));
            }
        }
    }

    #[test]
    fn zero_queries_is_an_error() {
        let s = unit_sphere(0.4);
        assert!(sample_occupancy_queries(&s, 0, 0, 0.02, 0).is_err());
    }
}
