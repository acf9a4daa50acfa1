use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, Zero};

use super::Poly;
use crate::arith::{ln_abs_rational, Rational};

#[derive(Debug, Clone, Copy)]
pub struct RootOptions {
    pub newton_steps: usize,
}

impl Default for RootOptions {
    fn default() -> Self {
        Self { newton_steps: 8 }
    }
}

/// Coefficients of p(s*u) rescaled to max modulus 1, plus ln s.
fn scaled_coeffs(p: &Poly) -> (Vec<f64>, f64) {
    let n = p.degree().unwrap();
    let lc: Vec<f64> = p.coeffs().iter().map(ln_abs_rational).collect();
    let ln_s = (lc[0] - lc[n]) / n as f64;
    let shifted: Vec<f64> = lc.iter().enumerate().map(|(i, l)| l + i as f64 * ln_s).collect();
    let top = shifted.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let d = p
        .coeffs()
        .iter()
        .zip(&shifted)
        .map(|(c, l)| {
            let m = (l - top).exp();
            if c.is_negative() { -m } else { m }
        })
        .collect();
    (d, ln_s)
}

fn horner(d: &[f64], u: Complex64) -> (Complex64, Complex64, f64) {
    let mut v = Complex64::zero();
    let mut dv = Complex64::zero();
    let mut mag = 0.0;
    let au = u.norm();
    for &c in d.iter().rev() {
        dv = dv * u + v;
        v = v * u + c;
        mag = mag * au + c.abs();
    }
    (v, dv, mag)
}

/// Relative residual |p(x)| / sum |c_i||x|^i computed on the rescaled coefficients.
pub(crate) fn relative_residual(p: &Poly, x: Complex64) -> f64 {
    let (d, ln_s) = scaled_coeffs(p);
    let (v, _, mag) = horner(&d, x / ln_s.exp());
    if mag == 0.0 { 0.0 } else { v.norm() / mag }
}

/// Eigenvalues of the companion matrix of d. The variable is rotated by a generic angle
/// first; unshifted QR sweeps stall on the real companion matrix of x^4 + 1.
fn companion_eigenvalues(d: &[f64]) -> Option<Vec<Complex64>> {
    let n = d.len() - 1;
    for theta in [0.4142, 1.2071, 2.5] {
        let rot = Complex64::from_polar(1.0, theta);
        let mut comp = DMatrix::<Complex64>::zeros(n, n);
        for i in 1..n {
            comp[(i, i - 1)] = Complex64::new(1.0, 0.0);
        }
        // q(u) = p(rot * u) / (d_n rot^n)
        for i in 0..n {
            comp[(i, n - 1)] = -Complex64::from(d[i] / d[n]) * rot.powi(i as i32 - n as i32);
        }
        if let Some(schur) = comp.try_schur(1e-15, 10_000) {
            let (_, t) = schur.unpack();
            return Some((0..n).map(|i| t[(i, i)] * rot).collect());
        }
    }
    None
}

/// All complex roots of a square-free polynomial with nonzero constant term,
/// from companion-matrix eigenvalues followed by Newton polishing.
pub fn complex_roots(p: &Poly, opts: RootOptions) -> Vec<Complex64> {
    let Some(n) = p.degree() else { return Vec::new() };
    if n == 0 {
        return Vec::new();
    }
    let zeros = p.coeffs().iter().take_while(|c| c.is_zero()).count();
    if zeros > 0 {
        let reduced = Poly::new(p.coeffs()[zeros..].to_vec());
        let mut out = vec![Complex64::zero(); zeros];
        out.extend(complex_roots(&reduced, opts));
        return out;
    }
    let (d, ln_s) = scaled_coeffs(p);
    let s = ln_s.exp();
    let eig = companion_eigenvalues(&d).unwrap_or_default();
    eig.iter()
        .map(|&u0| {
            let mut u = u0;
            let (mut v, _, mut mag) = horner(&d, u);
            for _ in 0..opts.newton_steps {
                let (_, dv, _) = horner(&d, u);
                if dv.norm() == 0.0 || v.norm() <= 1e-17 * mag {
                    break;
                }
                let cand = u - v / dv;
                let (cv, _, cmag) = horner(&d, cand);
                if !(cv.norm() < v.norm()) {
                    break;
                }
                u = cand;
                v = cv;
                mag = cmag;
            }
            u * s
        })
        .collect()
}

fn convergents(x: f64, max_den: f64) -> Vec<Rational> {
    let mut out = Vec::new();
    let (mut h0, mut h1) = (BigInt::from(1), BigInt::from(x.floor() as i64));
    let (mut k0, mut k1) = (BigInt::from(0), BigInt::from(1));
    out.push(Rational::new(h1.clone(), k1.clone()));
    let mut frac = x - x.floor();
    for _ in 0..40 {
        if frac.abs() < 1e-18 {
            break;
        }
        let inv = 1.0 / frac;
        let a = inv.floor();
        if !a.is_finite() || a > 1e18 {
            break;
        }
        frac = inv - a;
        let ai = BigInt::from(a as i64);
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        if num_traits::ToPrimitive::to_f64(&k2).unwrap_or(f64::INFINITY) > max_den {
            break;
        }
        out.push(Rational::new(h2.clone(), k2.clone()));
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
    }
    out
}

/// Exact rational roots, recovered from real numerical roots and confirmed by exact evaluation.
pub fn rational_roots(p: &Poly) -> Vec<Rational> {
    let approx = complex_roots(p, RootOptions::default());
    rational_roots_from(p, &approx)
}

pub(crate) fn rational_roots_from(p: &Poly, approx: &[Complex64]) -> Vec<Rational> {
    let mut found: Vec<Rational> = Vec::new();
    for z in approx {
        let scale = z.re.abs().max(1.0);
        if z.im.abs() > 1e-6 * scale || !z.re.is_finite() {
            continue;
        }
        for c in convergents(z.re, 1e15) {
            let err = (crate::arith::rational_to_f64(&c) - z.re).abs();
            if err <= 1e-6 * scale && p.eval(&c).is_zero() {
                found.push(c);
                break;
            }
        }
    }
    found.sort();
    found.dedup();
    found
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn roots_of_cyclotomic_like() {
        // x^4 + 1
        let p = Poly::from_ints(&[1, 0, 0, 0, 1]);
        let r = complex_roots(&p, RootOptions::default());
        assert_eq!(r.len(), 4);
        for z in r {
            assert!((z.powu(4) + 1.0).norm() < 1e-13);
        }
    }

    #[test]
    fn rational_root_recovery() {
        let p = &(&Poly::linear_root(&rat(-7, 3)) * &Poly::linear_root(&rat(5, 11)))
            * &Poly::from_ints(&[2, 0, 1]);
        assert_eq!(rational_roots(&p), vec![rat(-7, 3), rat(5, 11)]);
    }

    #[test]
    fn root_just_below_a_found_root() {
        // the approximation of 1 may come out as 0.99999..., whose first convergent is 0
        let p = &(&Poly::linear_root(&rat(0, 1)) * &Poly::linear_root(&rat(1, 1))) * &Poly::linear_root(&rat(7, 3));
        let approx = [Complex64::new(0.0, 0.0), Complex64::new(1.0 - 1e-12, 0.0), Complex64::new(7.0 / 3.0, 0.0)];
        assert_eq!(rational_roots_from(&p, &approx), vec![rat(0, 1), rat(1, 1), rat(7, 3)]);
    }

    #[test]
    fn wide_dynamic_range() {
        let p = &(&Poly::linear_root(&rat(1, 100_000_000)) * &Poly::linear_root(&rat(3, 1)))
            * &Poly::linear_root(&rat(-100_000_000, 1));
        let mut r: Vec<f64> = complex_roots(&p, RootOptions::default()).iter().map(|z| z.re).collect();
        r.sort_by(f64::total_cmp);
        assert!((r[0] + 1e8).abs() < 1e-4);
        assert!((r[1] - 1e-8).abs() < 1e-20);
        assert!((r[2] - 3.0).abs() < 1e-12);
    }
}
