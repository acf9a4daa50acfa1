use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::Rational;
use crate::error::{Error, Result};

const TRIAL_LIMIT: u64 = 1 << 16;
const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic for n < 3.3e24, probabilistic-strong beyond.
pub fn is_prime(n: &BigUint) -> bool {
    if n < &BigUint::from(2u32) {
        return false;
    }
    for &p in &MR_BASES {
        let bp = BigUint::from(p);
        if n == &bp {
            return true;
        }
        if (n % &bp).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'outer: for &a in &MR_BASES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn pollard_brent(n: &BigUint) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    let one = BigUint::one();
    for c in 1u64..64 {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let (mut y, mut r, mut q) = (BigUint::from(2u32), 1u64, BigUint::one());
        let mut g = BigUint::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        while g == one {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g == one {
                ys = y.clone();
                for _ in 0..(128.min(r - k)) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += 128;
            }
            r *= 2;
            if r > 1 << 24 {
                break;
            }
        }
        if g == *n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if g != one {
                    break;
                }
            }
        }
        if g != one && g != *n {
            return Some(g);
        }
    }
    None
}

fn factor_into(n: BigUint, out: &mut Vec<BigUint>) -> Result<()> {
    if n.is_one() {
        return Ok(());
    }
    if is_prime(&n) {
        out.push(n);
        return Ok(());
    }
    let d = pollard_brent(&n)
        .ok_or_else(|| Error::Compute(format!("could not factor {n}")))?;
    let other = &n / &d;
    factor_into(d, out)?;
    factor_into(other, out)
}

/// Prime factorization of |n| as (prime, exponent) pairs in increasing order.
/// Primes are returned as u64; larger prime factors are a compute failure.
pub fn factor_integer(n: &BigInt) -> Result<Vec<(u64, u32)>> {
    let mut m = n.magnitude().clone();
    if m.is_zero() {
        return Err(Error::InvalidInput("cannot factor zero".into()));
    }
    let mut out: Vec<(u64, u32)> = Vec::new();
    let push = |p: u64, out: &mut Vec<(u64, u32)>| match out.iter_mut().find(|e| e.0 == p) {
        Some(e) => e.1 += 1,
        None => out.push((p, 1)),
    };
    let mut p = 2u64;
    while p <= TRIAL_LIMIT {
        let bp = BigUint::from(p);
        if &bp * &bp > m {
            break;
        }
        while (&m % &bp).is_zero() {
            m /= &bp;
            push(p, &mut out);
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !m.is_one() {
        let mut rest = Vec::new();
        factor_into(m, &mut rest)?;
        for q in rest {
            let q64 = q
                .to_u64()
                .ok_or_else(|| Error::Compute(format!("prime factor {q} exceeds 64 bits")))?;
            push(q64, &mut out);
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Primes dividing the numerator or denominator of any of the given nonzero rationals.
pub fn relevant_primes<'a, I>(xs: I) -> Result<BTreeSet<u64>>
where
    I: IntoIterator<Item = &'a Rational>,
{
    let mut set = BTreeSet::new();
    for x in xs {
        if x.is_zero() {
            continue;
        }
        for part in [x.numer(), x.denom()] {
            for (p, _) in factor_integer(part)? {
                set.insert(p);
            }
        }
    }
    Ok(set)
}
