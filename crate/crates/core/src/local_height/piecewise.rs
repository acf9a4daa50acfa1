use std::fmt::Debug;
use std::ops::Neg;

use num_traits::Num;

use crate::arith::Rational;

/// Scalars a piecewise quadratic can live over: exact rationals or f64.
pub trait Scalar: Clone + PartialOrd + Num + Neg<Output = Self> + Debug {
    fn from_int(i: i64) -> Self;
}

impl Scalar for Rational {
    fn from_int(i: i64) -> Self {
        Rational::from_integer(i.into())
    }
}

impl Scalar for f64 {
    fn from_int(i: i64) -> Self {
        i as f64
    }
}

fn max<T: Scalar>(a: T, b: T) -> T {
    if a >= b { a } else { b }
}

fn min<T: Scalar>(a: T, b: T) -> T {
    if a <= b { a } else { b }
}

/// Quadratic c0 + c1 x + c2 x^2.
pub type Quad<T> = [T; 3];

fn eval_quad<T: Scalar>(q: &Quad<T>, x: &T) -> T {
    q[0].clone() + x.clone() * (q[1].clone() + x.clone() * q[2].clone())
}

fn antiderivative<T: Scalar>(q: &Quad<T>, x: &T) -> T {
    let two = T::from_int(2);
    let three = T::from_int(3);
    x.clone() * (q[0].clone() + x.clone() * (q[1].clone() / two + x.clone() * q[2].clone() / three))
}

/// A continuous function of one real variable, quadratic on each piece.
/// `pieces[k]` applies on `[breaks[k-1], breaks[k]]`, with unbounded first and last pieces.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseQuadratic<T: Scalar> {
    breaks: Vec<T>,
    pieces: Vec<Quad<T>>,
}

impl<T: Scalar> PiecewiseQuadratic<T> {
    pub fn new(breaks: Vec<T>, pieces: Vec<Quad<T>>) -> Self {
        assert_eq!(pieces.len(), breaks.len() + 1, "piece count must be one more than breakpoints");
        assert!(breaks.windows(2).all(|w| w[0] <= w[1]), "breakpoints must be sorted");
        PiecewiseQuadratic { breaks, pieces }
    }

    pub fn linear(c0: T, c1: T) -> Self {
        PiecewiseQuadratic { breaks: vec![], pieces: vec![[c0, c1, T::zero()]] }
    }

    /// max(x, k) as a piecewise function.
    pub fn max_with(k: T) -> Self {
        PiecewiseQuadratic::new(vec![k.clone()], vec![[k, T::zero(), T::zero()], [T::zero(), T::one(), T::zero()]])
    }

    pub fn breaks(&self) -> &[T] {
        &self.breaks
    }

    pub fn pieces(&self) -> &[Quad<T>] {
        &self.pieces
    }

    fn piece_index(&self, x: &T) -> usize {
        self.breaks.iter().take_while(|b| *b < x).count()
    }

    fn piece_right_of(&self, x: &T) -> usize {
        self.breaks.iter().take_while(|b| *b <= x).count()
    }

    pub fn eval(&self, x: &T) -> T {
        eval_quad(&self.pieces[self.piece_index(x)], x)
    }

    /// Largest jump at a breakpoint; zero for a continuous function over exact scalars.
    pub fn max_jump(&self) -> T {
        let mut worst = T::zero();
        for (k, b) in self.breaks.iter().enumerate() {
            let d = eval_quad(&self.pieces[k], b) - eval_quad(&self.pieces[k + 1], b);
            let d = if d < T::zero() { -d } else { d };
            worst = max(worst, d);
        }
        worst
    }

    /// Exact integral over [a, b].
    pub fn integrate(&self, a: &T, b: &T) -> T {
        if a > b {
            return -self.integrate(b, a);
        }
        let mut total = T::zero();
        let mut lo = a.clone();
        for k in self.piece_index(a)..self.pieces.len() {
            let hi = match self.breaks.get(k) {
                Some(br) => min(br.clone(), b.clone()),
                None => b.clone(),
            };
            if hi > lo {
                total = total + antiderivative(&self.pieces[k], &hi) - antiderivative(&self.pieces[k], &lo);
                lo = hi;
            }
            if &lo >= b {
                break;
            }
        }
        total
    }

    /// Average over [a, b]; the point value when a = b.
    pub fn average(&self, a: &T, b: &T) -> T {
        if a == b {
            self.eval(a)
        } else {
            self.integrate(a, b) / (b.clone() - a.clone())
        }
    }

    /// x -> g(max(x, k)).
    pub fn clamp_below(&self, k: &T) -> Self {
        let v = self.eval(k);
        let idx = self.piece_right_of(k);
        let mut breaks = vec![k.clone()];
        breaks.extend(self.breaks[idx..].iter().cloned());
        let mut pieces = vec![[v, T::zero(), T::zero()]];
        pieces.extend(self.pieces[idx..].iter().cloned());
        PiecewiseQuadratic::new(breaks, pieces)
    }

    /// x -> c g(x / s) for s > 0.
    pub fn rescale(&self, s: &T, c: &T) -> Self {
        let breaks = self.breaks.iter().map(|b| b.clone() * s.clone()).collect();
        let pieces = self
            .pieces
            .iter()
            .map(|q| {
                [
                    c.clone() * q[0].clone(),
                    c.clone() * q[1].clone() / s.clone(),
                    c.clone() * q[2].clone() / (s.clone() * s.clone()),
                ]
            })
            .collect();
        PiecewiseQuadratic { breaks, pieces }
    }

    /// Pointwise sum with another piecewise quadratic.
    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a - b)
    }

    fn combine(&self, other: &Self, op: impl Fn(T, T) -> T) -> Self {
        let mut breaks: Vec<T> = self.breaks.iter().chain(other.breaks.iter()).cloned().collect();
        breaks.sort_by(|a, b| a.partial_cmp(b).expect("comparable breakpoints"));
        breaks.dedup();
        let mut pieces = Vec::with_capacity(breaks.len() + 1);
        for k in 0..=breaks.len() {
            let (i, j) = match k {
                0 => (0, 0),
                _ => (self.piece_right_of(&breaks[k - 1]), other.piece_right_of(&breaks[k - 1])),
            };
            let (p, q) = (&self.pieces[i], &other.pieces[j]);
            pieces.push([op(p[0].clone(), q[0].clone()), op(p[1].clone(), q[1].clone()), op(p[2].clone(), q[2].clone())]);
        }
        PiecewiseQuadratic { breaks, pieces }
    }
}

impl PiecewiseQuadratic<Rational> {
    pub fn to_f64(&self) -> PiecewiseQuadratic<f64> {
        let f = crate::arith::rational_to_f64;
        PiecewiseQuadratic {
            breaks: self.breaks.iter().map(f).collect(),
            pieces: self.pieces.iter().map(|q| [f(&q[0]), f(&q[1]), f(&q[2])]).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn tent() -> PiecewiseQuadratic<Rational> {
        // 0 for x <= 0, x^2 on [0, 1], 2x - 1 beyond
        PiecewiseQuadratic::new(
            vec![rat(0, 1), rat(1, 1)],
            vec![[rat(0, 1), rat(0, 1), rat(0, 1)], [rat(0, 1), rat(0, 1), rat(1, 1)], [rat(-1, 1), rat(2, 1), rat(0, 1)]],
        )
    }

    #[test]
    fn integrate_across_pieces() {
        let g = tent();
        assert_eq!(g.integrate(&rat(-1, 1), &rat(2, 1)), rat(1, 3) + rat(2, 1));
        assert_eq!(g.integrate(&rat(1, 2), &rat(1, 2)), rat(0, 1));
        assert_eq!(g.average(&rat(0, 1), &rat(1, 1)), rat(1, 3));
        assert_eq!(g.max_jump(), rat(0, 1));
    }

    #[test]
    fn clamp_and_rescale() {
        let g = tent();
        let at_break = g.clamp_below(&rat(1, 1));
        assert_eq!(at_break.eval(&rat(3, 1)), rat(5, 1));
        let c = g.clamp_below(&rat(1, 2));
        assert_eq!(c.eval(&rat(-5, 1)), rat(1, 4));
        assert_eq!(c.eval(&rat(3, 4)), rat(9, 16));
        assert_eq!(c.max_jump(), rat(0, 1));
        let r = g.rescale(&rat(2, 1), &rat(3, 1));
        for x in [-1, 1, 3] {
            let x = rat(x, 1);
            assert_eq!(r.eval(&x), rat(3, 1) * g.eval(&(&x / rat(2, 1))));
        }
    }

    #[test]
    fn sum_of_pieces() {
        let g = tent();
        let h = PiecewiseQuadratic::max_with(rat(1, 2));
        let s = g.add(&h);
        for x in [-2, 0, 1, 3] {
            let x = rat(x, 4);
            assert_eq!(s.eval(&x), g.eval(&x) + h.eval(&x));
        }
    }
}
