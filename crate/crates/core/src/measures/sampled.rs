use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattes::{apply_f_complex, preimages, ExtComplex};
use crate::par::{self, Exec};

/// Default length of each random backward orbit.
pub const DEFAULT_BURN_IN: u32 = 30;
/// Root point of every backward orbit.
pub const BACKWARD_ROOT: Complex64 = Complex64::new(0.3, 0.7);
/// Largest preimage-tree depth for torsion quadrature (4^4 = 256 points).
pub const MAX_TORSION_DEPTH: u32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Provenance {
    BackwardOrbit { depth: u32 },
    TorsionQuadrature { depth: u32 },
}

/// Equally weighted points approximating mu_t at the archimedean place.
#[derive(Debug, Clone, Serialize)]
pub struct SampledMeasure {
    #[serde(skip)]
    pub t: Complex64,
    #[serde(skip)]
    pub points: Vec<ExtComplex>,
    pub provenance: Provenance,
    pub seed: u64,
    pub size: usize,
    /// Branch choices replaced because a preimage came out non-finite.
    pub resampled: usize,
}

/// Mean of a sample with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
}

impl Estimate {
    pub fn from_values(xs: &[f64]) -> Self {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        if xs.len() < 2 {
            return Estimate { mean, std_error: 0.0 };
        }
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        Estimate { mean, std_error: (var / n).sqrt() }
    }
}

impl SampledMeasure {
    pub fn weight(&self) -> f64 {
        1.0 / self.points.len() as f64
    }

    /// Estimate of the integral of f, with the Monte-Carlo standard error.
    pub fn integrate<F>(&self, exec: Exec, f: F) -> Result<Estimate>
    where
        F: Fn(ExtComplex) -> Result<f64> + Sync + Send,
    {
        let vals: Result<Vec<f64>> = par::map(exec, &self.points, |z| f(*z)).into_iter().collect();
        Ok(Estimate::from_values(&vals?))
    }

    /// Proportion of finite samples with lo <= |z| <= hi.
    pub fn mass_of_annulus(&self, lo: f64, hi: f64) -> f64 {
        let c = self
            .points
            .iter()
            .filter(|p| p.finite().is_some_and(|z| (lo..=hi).contains(&z.norm())))
            .count();
        c as f64 / self.points.len() as f64
    }
}

fn check_param(t: Complex64) -> Result<()> {
    if t.norm() == 0.0 || (t - 1.0).norm() == 0.0 || !t.is_finite() {
        return Err(Error::InvalidParameter(t.to_string()));
    }
    Ok(())
}

/// One random backward orbit of the given depth; returns the endpoint and the count of replaced branches.
fn backward_orbit(t: Complex64, depth: u32, rng: &mut ChaCha8Rng) -> (ExtComplex, usize) {
    let mut w = ExtComplex::Finite(BACKWARD_ROOT);
    let mut replaced = 0;
    for _ in 0..depth {
        let pre = preimages(t, w);
        let first = rng.random_range(0..4usize);
        let pick = (0..4).map(|k| pre[(first + k) % 4]).find(|z| z.finite().is_some_and(|z| z.is_finite()));
        match pick {
            Some(z) => {
                if pre[first] != z {
                    replaced += 1;
                }
                w = z;
            }
            None => {
                replaced += 1;
                w = ExtComplex::Finite(BACKWARD_ROOT);
            }
        }
    }
    (w, replaced)
}

/// Endpoints of n independent uniform random backward orbits of f_t.
/// Sample i draws from ChaCha8 stream i of `seed`, so the output is independent of scheduling.
pub fn sample_mu_backward(t: Complex64, n_points: usize, seed: u64, depth: u32, exec: Exec) -> Result<SampledMeasure> {
    check_param(t)?;
    if n_points == 0 {
        return Err(Error::InvalidInput("n_points must be at least 1".into()));
    }
    let out = par::map_range(exec, n_points, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        backward_orbit(t, depth, &mut rng)
    });
    let resampled = out.iter().map(|o| o.1).sum();
    if resampled > 0 {
        log::debug!("backward sampler replaced {resampled} non-finite branches at t = {t}");
    }
    Ok(SampledMeasure {
        t,
        points: out.into_iter().map(|o| o.0).collect(),
        provenance: Provenance::BackwardOrbit { depth },
        seed,
        size: n_points,
        resampled,
    })
}

/// The full depth-n preimage tree of infinity, with multiplicity: the 2^n-torsion images.
pub fn sample_mu_torsion(t: Complex64, depth: u32) -> Result<SampledMeasure> {
    check_param(t)?;
    if depth == 0 || depth > MAX_TORSION_DEPTH {
        return Err(Error::InvalidInput(format!("torsion depth must be in 1..={MAX_TORSION_DEPTH}")));
    }
    let mut level = vec![ExtComplex::Infinity];
    for _ in 0..depth {
        level = level.into_iter().flat_map(|w| preimages(t, w)).collect();
    }
    let size = level.len();
    Ok(SampledMeasure {
        t,
        points: level,
        provenance: Provenance::TorsionQuadrature { depth },
        seed: 0,
        size,
        resampled: 0,
    })
}

/// Chordal distance from f_t^k(z) back to the orbit root, for checking backward samples.
pub fn forward_defect(t: Complex64, z: ExtComplex, depth: u32) -> f64 {
    let mut w = z;
    for _ in 0..depth {
        w = apply_f_complex(t, w);
    }
    w.chordal(ExtComplex::Finite(BACKWARD_ROOT))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_across_modes() {
        let t = Complex64::new(2.0, 0.0);
        let a = sample_mu_backward(t, 200, 7, 30, Exec::Parallel).unwrap();
        let b = sample_mu_backward(t, 200, 7, 30, Exec::Sequential).unwrap();
        assert_eq!(a.points, b.points);
        let c = sample_mu_backward(t, 200, 8, 30, Exec::Parallel).unwrap();
        assert_ne!(a.points, c.points);
    }

    #[test]
    fn samples_return_to_root() {
        let t = Complex64::new(2.0, 0.0);
        let m = sample_mu_backward(t, 50, 3, 12, Exec::Sequential).unwrap();
        for z in &m.points {
            assert!(forward_defect(t, *z, 12) < 1e-6);
        }
    }

    #[test]
    fn torsion_tree() {
        let t = Complex64::new(2.0, 0.0);
        let m = sample_mu_torsion(t, 1).unwrap();
        assert_eq!(m.points.len(), 4);
        let m = sample_mu_torsion(t, 2).unwrap();
        assert_eq!(m.points.len(), 16);
        for z in &m.points {
            let w = apply_f_complex(t, *z);
            let hit = [0.0, 1.0, 2.0].iter().any(|e| w.chordal(ExtComplex::Finite(Complex64::new(*e, 0.0))) < 1e-9)
                || w.chordal(ExtComplex::Infinity) < 1e-9;
            assert!(hit);
        }
    }
}
