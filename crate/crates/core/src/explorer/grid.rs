use num_integer::Integer;
use serde::Serialize;

use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::lattes::{LegendreParam, Sigma};

/// Which parameter pairs a scan visits.
#[derive(Debug, Clone, Serialize)]
pub enum GridSpec {
    /// Every p/q in lowest terms with |p| <= max_num and 1 <= q <= max_den, paired without repetition.
    Farey { max_num: u64, max_den: u64, negatives: bool },
    /// All unordered pairs from an explicit list.
    Params(Vec<LegendreParam>),
    /// Explicit pairs, kept in order.
    Pairs(Vec<(LegendreParam, LegendreParam)>),
}

/// The Farey-style parameter list, sorted; 0 and 1 are skipped.
pub fn farey_params(max_num: u64, max_den: u64, negatives: bool) -> Vec<LegendreParam> {
    let mut out = Vec::new();
    for q in 1..=max_den {
        for p in 1..=max_num {
            if p.gcd(&q) != 1 {
                continue;
            }
            let r = Rational::new((p as i64).into(), (q as i64).into());
            if let Ok(t) = LegendreParam::new(r.clone()) {
                out.push(t);
            }
            if negatives {
                out.push(LegendreParam::new(-r).expect("negative is admissible"));
            }
        }
    }
    out.sort();
    out
}

impl GridSpec {
    /// Pairs in grid order, with the diagonal removed. `both_orders` adds (t2, t1) after each (t1, t2).
    pub fn pairs(&self, both_orders: bool) -> Result<Vec<(LegendreParam, LegendreParam)>> {
        let base: Vec<(LegendreParam, LegendreParam)> = match self {
            GridSpec::Farey { max_num, max_den, negatives } => {
                if *max_num == 0 || *max_den == 0 {
                    return Err(Error::InvalidInput("Farey bounds must be positive".into()));
                }
                unordered(&farey_params(*max_num, *max_den, *negatives))
            }
            GridSpec::Params(ps) => {
                let mut ps = ps.clone();
                ps.sort();
                ps.dedup();
                unordered(&ps)
            }
            GridSpec::Pairs(ps) => ps.iter().filter(|(a, b)| a != b).cloned().collect(),
        };
        if base.is_empty() {
            return Err(Error::InvalidInput("grid has no off-diagonal pairs".into()));
        }
        Ok(if both_orders { base.into_iter().flat_map(|(a, b)| [(a.clone(), b.clone()), (b, a)]).collect() } else { base })
    }

    /// The same grid with every parameter moved by sigma.
    pub fn transformed(&self, s: Sigma) -> Result<GridSpec> {
        Ok(GridSpec::Pairs(self.pairs(false)?.into_iter().map(|(a, b)| (a.apply(s), b.apply(s))).collect()))
    }
}

fn unordered(ps: &[LegendreParam]) -> Vec<(LegendreParam, LegendreParam)> {
    let mut out = Vec::new();
    for i in 0..ps.len() {
        for j in i + 1..ps.len() {
            out.push((ps[i].clone(), ps[j].clone()));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn farey_counts() {
        // p/q with p, q <= 3 in lowest terms, minus 1: 1/3 1/2 2/3 2 3/2 3
        assert_eq!(farey_params(3, 3, false).len(), 6);
        assert_eq!(farey_params(3, 3, true).len(), 13);
        let pairs = GridSpec::Farey { max_num: 3, max_den: 3, negatives: false }.pairs(true).unwrap();
        assert_eq!(pairs.len(), 30);
        assert!(pairs.iter().all(|(a, b)| a != b));
    }

    #[test]
    fn explicit_pairs_drop_diagonal() {
        let t = LegendreParam::parse("2").unwrap();
        let u = LegendreParam::parse("3").unwrap();
        let g = GridSpec::Pairs(vec![(t.clone(), t.clone()), (t, u)]);
        assert_eq!(g.pairs(false).unwrap().len(), 1);
    }
}
