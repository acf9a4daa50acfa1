use crate::arith::Rational;
use crate::poly::{det_poly_matrix, Poly};

/// Bezout identities for F_t with coefficients in Q[t]:
/// a1 P + b1 Q = res z^7 and a2 P + b2 Q = res w^7, each cofactor cubic in (z, w).
#[derive(Debug, Clone)]
pub struct ResultantData {
    pub res: Poly,
    /// Coefficients of z^i w^(3-i) for i = 0..3.
    pub a1: [Poly; 4],
    pub b1: [Poly; 4],
    pub a2: [Poly; 4],
    pub b2: [Poly; 4],
}

/// Coefficients of z^k w^(4-k) of the two forms of F_t, as polynomials in t.
pub fn lift_coefficients() -> ([Poly; 5], [Poly; 5]) {
    let t = Poly::x();
    let c = |x: i64| Poly::constant(Rational::from_integer(x.into()));
    let p = [&t * &t, Poly::zero(), t.scale(&Rational::from_integer((-2).into())), Poly::zero(), c(1)];
    let q = [Poly::zero(), t.scale(&Rational::from_integer(4.into())), &c(-4) * &(&c(1) + &t), c(4), Poly::zero()];
    (p, q)
}

fn sylvester() -> Vec<Vec<Poly>> {
    // rows: coefficient of z^k w^(7-k); columns: a_0..a_3, b_0..b_3
    let (p, q) = lift_coefficients();
    let mut m = vec![vec![Poly::zero(); 8]; 8];
    for (k, row) in m.iter_mut().enumerate() {
        for i in 0..4 {
            if k >= i && k - i <= 4 {
                row[i] = p[k - i].clone();
                row[4 + i] = q[k - i].clone();
            }
        }
    }
    m
}

fn cofactor(m: &[Vec<Poly>], row: usize, col: usize) -> Poly {
    let minor: Vec<Vec<Poly>> = m
        .iter()
        .enumerate()
        .filter(|(r, _)| *r != row)
        .map(|(_, r)| r.iter().enumerate().filter(|(c, _)| *c != col).map(|(_, x)| x.clone()).collect())
        .collect();
    let d = det_poly_matrix(&minor);
    if (row + col) % 2 == 0 { d } else { -&d }
}

/// By Cramer's rule the solution of M u = res e_row is u_j = cofactor(row, j).
pub fn resultant_data() -> ResultantData {
    let m = sylvester();
    let res = det_poly_matrix(&m);
    let solve = |row: usize| -> ([Poly; 4], [Poly; 4]) {
        let u: Vec<Poly> = (0..8).map(|j| cofactor(&m, row, j)).collect();
        (
            [u[0].clone(), u[1].clone(), u[2].clone(), u[3].clone()],
            [u[4].clone(), u[5].clone(), u[6].clone(), u[7].clone()],
        )
    };
    let (a1, b1) = solve(7);
    let (a2, b2) = solve(0);
    ResultantData { res, a1, b1, a2, b2 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn resultant_closed_form() {
        let d = resultant_data();
        let t = Poly::x();
        let t1 = Poly::linear_root(&rat(1, 1));
        let expect = (&t.pow(4) * &t1.pow(4)).scale(&rat(256, 1));
        assert!(d.res == expect || d.res == -&expect, "{}", d.res);
    }

    #[test]
    fn bezout_identity_at_a_parameter() {
        let d = resultant_data();
        let (p, q) = lift_coefficients();
        let t = rat(-7, 3);
        let ev = |c: &[Poly]| c.iter().map(|x| x.eval(&t)).collect::<Vec<_>>();
        let (pv, qv) = (ev(&p), ev(&q));
        for (a, b, target) in [(&d.a1, &d.b1, 7usize), (&d.a2, &d.b2, 0)] {
            let (av, bv) = (ev(a), ev(b));
            for k in 0..8 {
                let mut s = rat(0, 1);
                for i in 0..4 {
                    if k >= i && k - i <= 4 {
                        s += &av[i] * &pv[k - i] + &bv[i] * &qv[k - i];
                    }
                }
                let want = if k == target { d.res.eval(&t) } else { rat(0, 1) };
                assert_eq!(s, want, "k = {k}");
            }
        }
    }
}
