//! Shape corpus assembly, the line-delimited manifest, and point-cloud files.

use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use ndarray::Array2;

use super::{make_shape, sample_surface, PointCloud, ShapeFamily, ShapeSpec};
use crate::error::{Error, Result};
use crate::par::{map_indexed, Parallelism};
use crate::rng::derive_seed;

/// A labeled set of procedural shapes.
#[derive(Clone, Debug)]
pub struct Corpus {
    pub shapes: Vec<ShapeSpec>,
}

impl Corpus {
    /// Build `count` shapes cycling through `families`. Each shape gets an
    /// independent derived seed, so corpora are reproducible and extendable.
    pub fn build(families: &[ShapeFamily], count: usize, seed: u64) -> Result<Corpus> {
        if families.is_empty() {
            return Err(Error::invalid_argument("family list must be non-empty"));
        }
        let fams = families.to_vec();
        let shapes = map_indexed(Parallelism::default(), count, |i| {
            let family = fams[i % fams.len()];
            make_shape(family, derive_seed(seed, "corpus-shape", &[i as u64]))
        });
        Ok(Corpus { shapes })
    }

    pub fn len(&self) -> usize {
        self.shapes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shapes.is_empty()
    }

    /// Surface-sample one cloud per shape, in parallel.
    pub fn sample_clouds(&self, n_points: usize, seed: u64) -> Result<Vec<PointCloud>> {
        let clouds = map_indexed(Parallelism::default(), self.len(), |i| {
            sample_surface(
                &self.shapes[i],
                n_points,
                derive_seed(seed, "corpus-cloud", &[i as u64]),
            )
        });
        clouds.into_iter().collect()
    }

    /// One JSON record per shape.
    pub fn write_manifest(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(std::fs::File::create(path)?);
        for spec in &self.shapes {
            serde_json::to_writer(&mut w, spec)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn read_manifest(path: &Path) -> Result<Corpus> {
        let r = BufReader::new(std::fs::File::open(path)?);
        let mut shapes = Vec::new();
        for line in r.lines() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            shapes.push(serde_json::from_str(&line)?);
        }
        Ok(Corpus { shapes })
    }

    /// Deterministic train/held-out split: the last `held_out` shapes.
    pub fn split(&self, held_out: usize) -> Result<(Corpus, Corpus)> {
        if held_out >= self.len() {
            return Err(Error::Split(format!(
                "cannot hold out {held_out} of {} shapes",
                self.len()
            )));
        }
        let cut = self.len() - held_out;
        Ok((
            Corpus { shapes: self.shapes[..cut].to_vec() },
            Corpus { shapes: self.shapes[cut..].to_vec() },
        ))
    }
}

/// One "x y z" line per point.
pub fn export_xyz_ascii(cloud: &PointCloud, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(std::fs::File::create(path)?);
    for i in 0..cloud.len() {
        let p = cloud.point(i);
        writeln!(w, "{} {} {}", p[0], p[1], p[2])?;
    }
    Ok(())
}

pub fn import_xyz_ascii(path: &Path) -> Result<PointCloud> {
    let r = BufReader::new(std::fs::File::open(path)?);
    let mut coords = Vec::new();
    for (ln, line) in r.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let vals: Vec<f64> = line
            .split_whitespace()
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| Error::BadFormat(format!("line {}: bad float `{t}`", ln + 1)))
            })
            .collect::<Result<_>>()?;
        if vals.len() != 3 {
            return Err(Error::BadFormat(format!(
                "line {}: expected 3 coordinates, got {}",
                ln + 1,
                vals.len()
            )));
        }
        coords.extend_from_slice(&vals);
    }
    let n = coords.len() / 3;
    let arr = Array2::from_shape_vec((n, 3), coords)
        .map_err(|e| Error::BadFormat(e.to_string()))?;
    PointCloud::new(arr)
}

/// Little-endian float32 triples behind an 8-byte (u64) count header.
pub fn export_xyz_binary(cloud: &PointCloud, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(std::fs::File::create(path)?);
    w.write_all(&(cloud.len() as u64).to_le_bytes())?;
    for i in 0..cloud.len() {
        let p = cloud.point(i);
        for v in p {
            w.write_all(&(v as f32).to_le_bytes())?;
        }
    }
    Ok(())
}

pub fn import_xyz_binary(path: &Path) -> Result<PointCloud> {
    let mut r = BufReader::new(std::fs::File::open(path)?);
    let mut header = [0u8; 8];
    r.read_exact(&mut header)?;
    let n = u64::from_le_bytes(header) as usize;
    let mut payload = vec![0u8; n * 12];
    r.read_exact(&mut payload)?;
    let mut arr = Array2::zeros((n, 3));
    for i in 0..n {
        for k in 0..3 {
            let off = (i * 3 + k) * 4;
            let bytes: [u8; 4] = payload[off..off + 4].try_into().unwrap();
            arr[[i, k]] = f64::from(f32::from_le_bytes(bytes));
        }
    }
    PointCloud::new(arr)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_build_is_deterministic_and_labeled() {
        let a = Corpus::build(&ShapeFamily::ALL, 32, 5).unwrap();
        let b = Corpus::build(&ShapeFamily::ALL, 32, 5).unwrap();
        assert_eq!(a.len(), 32);
        for (x, y) in a.shapes.iter().zip(&b.shapes) {
            assert_eq!(
                serde_json::to_string(x).unwrap(),
                serde_json::to_string(y).unwrap()
            );
        }
        assert_eq!(a.shapes[0].label, ShapeFamily::Sphere.label());
        assert_eq!(a.shapes[9].label, ShapeFamily::Box.label());
    }

    #[test]
    fn manifest_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("manifest.jsonl");
        let corpus = Corpus::build(&ShapeFamily::ALL, 16, 1).unwrap();
        corpus.write_manifest(&path).unwrap();
        let back = Corpus::read_manifest(&path).unwrap();
        assert_eq!(corpus.len(), back.len());
        for (x, y) in corpus.shapes.iter().zip(&back.shapes) {
            assert_eq!(
                serde_json::to_string(x).unwrap(),
                serde_json::to_string(y).unwrap()
            );
        }
    }

    #[test]
    fn xyz_roundtrips() {
        let dir = tempfile::tempdir().unwrap();
        let corpus = Corpus::build(&[ShapeFamily::Sphere], 1, 3).unwrap();
        let cloud = corpus.sample_clouds(64, 2).unwrap().remove(0);

        let ascii = dir.path().join("c.xyz");
        export_xyz_ascii(&cloud, &ascii).unwrap();
        let back = import_xyz_ascii(&ascii).unwrap();
        assert_eq!(back.len(), 64);
        for i in 0..64 {
            for k in 0..3 {
                assert!((back.point(i)[k] - cloud.point(i)[k]).abs() < 1e-12);
            }
        }

        let bin = dir.path().join("c.bin");
        export_xyz_binary(&cloud, &bin).unwrap();
        let back = import_xyz_binary(&bin).unwrap();
        assert_eq!(back.len(), 64);
        for i in 0..64 {
            for k in 0..3 {
                // f32 payload: only single precision survives.
                assert!((back.point(i)[k] - cloud.point(i)[k]).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn split_is_disjoint_and_total() {
        let corpus = Corpus::build(&ShapeFamily::ALL, 40, 7).unwrap();
        let (train, held) = corpus.split(8).unwrap();
        assert_eq!(train.len(), 32);
        assert_eq!(held.len(), 8);
        assert!(corpus.split(40).is_err());
    }
}
