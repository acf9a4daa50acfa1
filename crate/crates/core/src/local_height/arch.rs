use std::sync::OnceLock;

use num_complex::Complex64;
use serde::Serialize;

use crate::arith::{ln_abs_bigint, ProjectivePointQ, Rational};
use crate::error::{Error, Result};
use crate::lattes::{lift_coefficients, resultant_data, ExtComplex, ResultantData};
use crate::poly::Poly;

fn cached() -> &'static (ResultantData, [Poly; 5], [Poly; 5]) {
    static DATA: OnceLock<(ResultantData, [Poly; 5], [Poly; 5])> = OnceLock::new();
    DATA.get_or_init(|| {
        let (p, q) = lift_coefficients();
        (resultant_data(), p, q)
    })
}

/// One-step distortion bounds m_t ||x||^4 <= ||F_t(x)|| <= M_t ||x||^4 in the sup norm.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ArchConstants {
    pub ln_upper: f64,
    pub ln_lower: f64,
    /// C_t = max(|ln m_t|, |ln M_t|)
    pub distortion: f64,
}

impl ArchConstants {
    pub fn new(t: Complex64) -> Result<Self> {
        if t.norm() == 0.0 || (t - 1.0).norm() == 0.0 {
            return Err(Error::InvalidParameter(format!("t = {t} is singular")));
        }
        let (data, p, q) = cached();
        let l1 = |cs: &[Poly]| cs.iter().map(|c| c.eval_complex(t).norm()).sum::<f64>();
        let upper = l1(p).max(l1(q));
        let cof = (l1(&data.a1) + l1(&data.b1)).max(l1(&data.a2) + l1(&data.b2));
        let ln_res = data.res.eval_complex(t).norm().ln();
        let ln_lower = ln_res - cof.ln();
        let ln_upper = upper.ln();
        let distortion = ln_lower.abs().max(ln_upper.abs());
        if !distortion.is_finite() {
            return Err(Error::Compute(format!("distortion bound is not finite at t = {t}")));
        }
        Ok(ArchConstants { ln_upper, ln_lower, distortion })
    }

    /// Smallest n with C_t / (3 4^n) <= tol.
    pub fn steps_for(&self, tol: f64) -> u32 {
        let mut n = 0;
        let mut bound = self.distortion / 3.0;
        while bound > tol && n < 200 {
            bound /= 4.0;
            n += 1;
        }
        n
    }

    pub fn tail_bound(&self, steps: u32) -> f64 {
        self.distortion / (3.0 * 4f64.powi(steps as i32))
    }
}

/// An archimedean escape-rate value with its certified truncation error.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ArchEscapeRate {
    pub value: f64,
    pub certified_error: f64,
    pub steps: u32,
}

fn f_step(t: Complex64, z: Complex64, w: Complex64) -> (Complex64, Complex64) {
    let a = z * z - t * w * w;
    (a * a, 4.0 * z * w * (z - w) * (z - t * w))
}

fn sup(z: Complex64, w: Complex64) -> f64 {
    z.norm().max(w.norm())
}

/// G_{F_t}(z, w) for a nonzero complex pair.
pub fn escape_rate_homogeneous(t: Complex64, z: Complex64, w: Complex64, tol: f64) -> Result<ArchEscapeRate> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    let s0 = sup(z, w);
    if s0 == 0.0 || !s0.is_finite() {
        return Err(Error::InvalidProjectivePoint);
    }
    let c = ArchConstants::new(t)?;
    let steps = c.steps_for(tol);
    let (mut z, mut w) = (z / s0, w / s0);
    let mut value = s0.ln();
    let mut weight = 1.0;
    for _ in 0..steps {
        weight *= 0.25;
        let (nz, nw) = f_step(t, z, w);
        let s = sup(nz, nw);
        if s == 0.0 || !s.is_finite() {
            return Err(Error::Compute("escape-rate iterate degenerated".into()));
        }
        value += weight * s.ln();
        z = nz / s;
        w = nw / s;
    }
    Ok(ArchEscapeRate { value, certified_error: c.tail_bound(steps), steps })
}

/// lambda_t(z) = G_{F_t}(z, 1); at infinity the (1, 0) lift gives 0.
pub fn escape_rate_arch(t: Complex64, z: ExtComplex, tol: f64) -> Result<ArchEscapeRate> {
    match z {
        ExtComplex::Infinity => escape_rate_homogeneous(t, Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), tol),
        ExtComplex::Finite(z) => escape_rate_homogeneous(t, z, Complex64::new(1.0, 0.0), tol),
    }
}

/// lambda_t at a rational point of any size, through a scaled lift and exact logarithms.
pub fn escape_rate_rational(t: Complex64, x: &Rational, tol: f64) -> Result<ArchEscapeRate> {
    let p = ProjectivePointQ::from_rational(x);
    let (num, den) = (p.z(), p.w());
    let big = if num.magnitude() > den.magnitude() { num.clone() } else { den.clone() };
    let scale = |n: &num_bigint::BigInt| crate::arith::rational_to_f64(&Rational::new(n.clone(), big.clone()));
    let g = escape_rate_homogeneous(
        t,
        Complex64::new(scale(num), 0.0),
        Complex64::new(scale(den), 0.0),
        tol,
    )?;
    Ok(ArchEscapeRate { value: g.value + ln_abs_bigint(&big) - ln_abs_bigint(den), ..g })
}

/// Phi_t(z) = G_{F_t}(z,1) - log+|z| and, when |t| != 1, phi(t,z) = Phi_t(z) / log|t|^{-1}.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PhiValue {
    pub raw: f64,
    pub normalized: Option<f64>,
    pub error: f64,
}

pub fn phi(t: Complex64, z: ExtComplex, tol: f64) -> Result<PhiValue> {
    let (raw, error) = match z {
        ExtComplex::Infinity => (0.0, 0.0),
        ExtComplex::Finite(z) => {
            let g = escape_rate_homogeneous(t, z, Complex64::new(1.0, 0.0), tol)?;
            (g.value - z.norm().ln().max(0.0), g.certified_error)
        }
    };
    let lt = t.norm().ln();
    let normalized = (lt != 0.0).then(|| raw / -lt);
    Ok(PhiValue { raw, normalized, error })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattes::apply_F_float;

    #[test]
    fn fixed_point_at_infinity() {
        let g = escape_rate_arch(Complex64::new(2.0, 0.0), ExtComplex::Infinity, 1e-10).unwrap();
        assert_eq!(g.value, 0.0);
    }

    #[test]
    fn functional_equation() {
        let t = Complex64::new(2.0, 0.0);
        let z = Complex64::new(3.0, 0.0);
        let g = escape_rate_arch(t, ExtComplex::Finite(z), 1e-11).unwrap();
        let (w0, w1) = apply_F_float(t, z, Complex64::new(1.0, 0.0)).unwrap().0;
        let g1 = escape_rate_homogeneous(t, Complex64::new(49.0, 0.0), Complex64::new(24.0, 0.0), 1e-11).unwrap();
        assert!((g1.value - 4.0 * g.value).abs() <= 5e-11 * 4.0);
        assert!((w1.re / w0.re - 24.0 / 49.0).abs() < 1e-12);
    }

    #[test]
    fn large_argument() {
        let t = Complex64::new(2.0, 0.0);
        let g = escape_rate_arch(t, ExtComplex::Finite(Complex64::new(1e6, 0.0)), 1e-10).unwrap();
        assert!((g.value - 1e6f64.ln()).abs() < 1e-5);
    }
}
