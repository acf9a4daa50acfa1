//! Limit potentials and measures of the degenerating family in the exponent coordinate a,
//! where |x| = |T|^a, and a harness comparing them with the archimedean quantities.

mod check;

pub use check::{hybrid_convergence_check, ConvergenceRow, ConvergenceTable, CuspPairing, HybridConfig, Mode};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::local_height::{PiecewiseQuadratic, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "family")]
pub enum LimitPotential {
    /// ghat_f: -a, then -a + a^2/2 on [0, 1], then -1/2
    GHat,
    /// phihat_f: 0, then -a + a^2/2 on [0, 1], then -1/2
    PhiHat,
    /// b phihat_f(a / b)
    PhiHatB { b: f64 },
    /// b ghat_f(a / b)
    GHatB { b: f64 },
    /// -a, then (a^2 + 1)/2 on [-1, 0], then 1/2
    GHatInfinity,
}

fn half<T: Scalar>() -> T {
    T::one() / T::from_int(2)
}

pub fn g_hat<T: Scalar>() -> PiecewiseQuadratic<T> {
    PiecewiseQuadratic::new(
        vec![T::zero(), T::one()],
        vec![[T::zero(), -T::one(), T::zero()], [T::zero(), -T::one(), half()], [-half::<T>(), T::zero(), T::zero()]],
    )
}

pub fn phi_hat<T: Scalar>() -> PiecewiseQuadratic<T> {
    PiecewiseQuadratic::new(
        vec![T::zero(), T::one()],
        vec![[T::zero(), T::zero(), T::zero()], [T::zero(), -T::one(), half()], [-half::<T>(), T::zero(), T::zero()]],
    )
}

pub fn g_hat_infinity<T: Scalar>() -> PiecewiseQuadratic<T> {
    PiecewiseQuadratic::new(
        vec![-T::one(), T::zero()],
        vec![[T::zero(), -T::one(), T::zero()], [half(), T::zero(), half()], [half(), T::zero(), T::zero()]],
    )
}

fn check_b<T: Scalar>(b: &T) -> Result<()> {
    if !(b >= &T::one()) {
        return Err(Error::InvalidInput(format!("b = {b:?} must be at least 1")));
    }
    Ok(())
}

pub fn phi_hat_b<T: Scalar>(b: &T) -> Result<PiecewiseQuadratic<T>> {
    check_b(b)?;
    Ok(phi_hat::<T>().rescale(b, b))
}

pub fn g_hat_b<T: Scalar>(b: &T) -> Result<PiecewiseQuadratic<T>> {
    check_b(b)?;
    Ok(g_hat::<T>().rescale(b, b))
}

impl LimitPotential {
    pub fn form(&self) -> Result<PiecewiseQuadratic<f64>> {
        Ok(match self {
            LimitPotential::GHat => g_hat(),
            LimitPotential::PhiHat => phi_hat(),
            LimitPotential::PhiHatB { b } => phi_hat_b(b)?,
            LimitPotential::GHatB { b } => g_hat_b(b)?,
            LimitPotential::GHatInfinity => g_hat_infinity(),
        })
    }
}

pub fn eval_limit_potential(which: LimitPotential, a: f64) -> Result<f64> {
    Ok(which.form()?.eval(&a))
}

/// A limit measure: uniform in a on its support.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "family")]
pub enum LimitMeasure {
    /// uniform on [0, b]
    MuB { b: f64 },
    /// uniform on [-1, 0]
    MuInfinity,
}

impl LimitMeasure {
    pub fn support(&self) -> (f64, f64) {
        match self {
            LimitMeasure::MuB { b } => (0.0, *b),
            LimitMeasure::MuInfinity => (-1.0, 0.0),
        }
    }
}

/// (1/2)(int (g1 - g2) dmu2 + int (g2 - g1) dmu1) with mu_i uniform on s_i.
pub fn limit_energy<T: Scalar>(
    g1: &PiecewiseQuadratic<T>,
    s1: (&T, &T),
    g2: &PiecewiseQuadratic<T>,
    s2: (&T, &T),
) -> T {
    let d = g1.sub(g2);
    (d.average(s2.0, s2.1) - d.average(s1.0, s1.1)) / T::from_int(2)
}

/// E(muhat_1, muhat_b) for two parameters tending to the same cusp.
pub fn limit_energy_same_cusp(b: f64) -> Result<f64> {
    let (g1, gb) = (g_hat::<f64>(), g_hat_b(&b)?);
    Ok(limit_energy(&g1, (&0.0, &1.0), &gb, (&0.0, &b)))
}

/// E(muhat_inf, muhat_b) for parameters tending to different cusps.
pub fn limit_energy_opposite_cusp(b: f64) -> Result<f64> {
    let (gi, gb) = (g_hat_infinity::<f64>(), g_hat_b(&b)?);
    Ok(limit_energy(&gi, (&-1.0, &0.0), &gb, (&0.0, &b)))
}

/// int phihat_f dmuhat_f from the stored piecewise form.
pub fn limit_integral_phi() -> f64 {
    phi_hat::<f64>().average(&0.0, &1.0)
}

/// Exact rational versions, for identities that must hold without rounding.
pub fn limit_energy_same_cusp_exact(b: &Rational) -> Result<Rational> {
    let (g1, gb) = (g_hat::<Rational>(), g_hat_b(b)?);
    Ok(limit_energy(&g1, (&Rational::zero(), &Rational::one()), &gb, (&Rational::zero(), b)))
}

pub fn limit_energy_opposite_cusp_exact(b: &Rational) -> Result<Rational> {
    let (gi, gb) = (g_hat_infinity::<Rational>(), g_hat_b(b)?);
    Ok(limit_energy(&gi, (&-Rational::one(), &Rational::zero()), &gb, (&Rational::zero(), b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn evaluations() {
        assert_eq!(eval_limit_potential(LimitPotential::GHat, 0.5).unwrap(), -3.0 / 8.0);
        assert_eq!(eval_limit_potential(LimitPotential::PhiHat, -1.0).unwrap(), 0.0);
        assert_eq!(eval_limit_potential(LimitPotential::PhiHatB { b: 3.0 }, 3.0).unwrap(), -1.5);
        assert!(eval_limit_potential(LimitPotential::PhiHatB { b: 0.5 }, 0.0).is_err());
    }

    #[test]
    fn continuity_and_identities() {
        for g in [g_hat::<Rational>(), phi_hat(), g_hat_infinity(), phi_hat_b(&rat(5, 2)).unwrap()] {
            assert!(g.max_jump().is_zero());
        }
        assert_eq!(phi_hat_b(&rat(1, 1)).unwrap(), phi_hat::<Rational>());
        // ghat - phihat = -a for a <= 0 and 0 beyond
        let d = g_hat::<Rational>().sub(&phi_hat());
        for k in -8..8 {
            let a = rat(k, 3);
            let want = if a < rat(0, 1) { -a.clone() } else { rat(0, 1) };
            assert_eq!(d.eval(&a), want);
        }
    }

    #[test]
    fn closed_forms() {
        assert_eq!(limit_energy_same_cusp_exact(&rat(2, 1)).unwrap(), rat(1, 12));
        assert_eq!(limit_energy_same_cusp_exact(&rat(4, 1)).unwrap(), rat(3, 8));
        assert_eq!(limit_energy_same_cusp_exact(&rat(1, 1)).unwrap(), rat(0, 1));
        assert_eq!(limit_energy_opposite_cusp_exact(&rat(1, 1)).unwrap(), rat(1, 3));
        assert_eq!(limit_energy_opposite_cusp_exact(&rat(2, 1)).unwrap(), rat(1, 2));
        assert!((limit_integral_phi() + 1.0 / 3.0).abs() < 1e-15);
        let b = rat(7, 3);
        assert_eq!(phi_hat_b(&b).unwrap().average(&rat(0, 1), &b), -b / rat(3, 1));
    }
}
