use num_integer::Integer;
use serde::Serialize;

use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::lattes::{ExtRational, LegendreParam};
use crate::local_height::HeightEvaluator;
use crate::par::{self, Exec};

#[derive(Debug, Clone, Serialize)]
pub struct SmallPoint {
    pub x: String,
    pub height_sum: f64,
    pub error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SmallPointResult {
    pub t1: String,
    pub t2: String,
    pub b: f64,
    pub h_max: u64,
    pub tol: f64,
    pub searched: usize,
    pub points: Vec<SmallPoint>,
    pub label: &'static str,
}

impl SmallPointResult {
    pub fn contains(&self, x: &str) -> bool {
        self.points.iter().any(|p| p.x == x)
    }
}

pub const SLICE_LABEL: &str = "rational slice of the small-point set: x = p/q with max(|p|, |q|) <= H_max, plus infinity";

/// x in P^1(Q) of naive height at most h_max with hhat_{t1}(x) + hhat_{t2}(x) <= b (up to tol and the reported error).
pub fn small_point_search(
    t1: &LegendreParam,
    t2: &LegendreParam,
    b: f64,
    h_max: u64,
    tol: f64,
    exec: Exec,
) -> Result<SmallPointResult> {
    if !(b >= 0.0) {
        return Err(Error::InvalidInput(format!("b = {b} must be nonnegative")));
    }
    let mut xs = vec![ExtRational::Infinity];
    let h = h_max as i64;
    for q in 1..=h {
        for p in -h..=h {
            if p.gcd(&q) == 1 || (p == 0 && q == 1) {
                xs.push(ExtRational::Finite(Rational::new(p.into(), q.into())));
            }
        }
    }
    let (e1, e2) = (HeightEvaluator::new(t1)?, HeightEvaluator::new(t2)?);
    let found = par::map(exec, &xs, |x| -> Result<Option<SmallPoint>> {
        let a = e1.eval(x, tol)?;
        if a.value - a.error > b + tol {
            return Ok(None);
        }
        let c = e2.eval(x, tol)?;
        let (sum, err) = (a.value + c.value, a.error + c.error);
        Ok((sum - err <= b + tol).then(|| SmallPoint { x: x.to_string(), height_sum: sum, error: err + tol }))
    });
    let mut points = Vec::new();
    for f in found {
        points.extend(f?);
    }
    Ok(SmallPointResult {
        t1: t1.to_string(),
        t2: t2.to_string(),
        b,
        h_max,
        tol,
        searched: xs.len(),
        points,
        label: SLICE_LABEL,
    })
}
