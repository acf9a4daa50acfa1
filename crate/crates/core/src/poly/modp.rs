use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::Poly;

const P: u64 = (1 << 61) - 1;

fn mul(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn pow(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a);
        }
        a = mul(a, a);
        e >>= 1;
    }
    r
}

fn inv(a: u64) -> u64 {
    pow(a, P - 2)
}

fn reduce_int(n: &BigInt) -> u64 {
    let m = n % BigInt::from(P);
    let m = if m < BigInt::zero() { m + BigInt::from(P) } else { m };
    m.to_u64().unwrap()
}

fn reduce(p: &Poly) -> Option<Vec<u64>> {
    let mut out = Vec::with_capacity(p.coeffs.len());
    for c in &p.coeffs {
        let d = reduce_int(c.denom());
        if d == 0 {
            return None;
        }
        out.push(mul(reduce_int(c.numer()), inv(d)));
    }
    if out.last().is_some_and(|&c| c == 0) {
        return None;
    }
    Some(out)
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Degree of gcd(a, b) over F_p for p = 2^61 - 1, an upper bound for the degree over Q.
/// None when the reduction is not defined or drops a leading coefficient.
pub fn gcd_degree_mod_p(a: &Poly, b: &Poly) -> Option<usize> {
    let mut x = reduce(a)?;
    let mut y = reduce(b)?;
    while !y.is_empty() {
        let li = inv(*y.last().unwrap());
        while x.len() >= y.len() {
            let shift = x.len() - y.len();
            let c = mul(*x.last().unwrap(), li);
            for (j, &yc) in y.iter().enumerate() {
                x[shift + j] = (x[shift + j] + P - mul(c, yc)) % P;
            }
            trim(&mut x);
            if x.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut x, &mut y);
    }
    Some(x.len().saturating_sub(1))
}
