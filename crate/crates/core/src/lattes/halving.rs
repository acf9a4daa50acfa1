use num_complex::Complex64;

use super::ExtComplex;

/// r_a + r_b evaluated without cancellation, using r_a^2 - r_b^2 = e_b - e_a.
fn stable_sum(ra: Complex64, rb: Complex64, ea: Complex64, eb: Complex64) -> Complex64 {
    let s = ra + rb;
    let d = ra - rb;
    if s.norm() >= d.norm() || d.norm() == 0.0 {
        s
    } else {
        (eb - ea) / d
    }
}

/// The four preimages of w under f_t, listed with multiplicity.
///
/// Uses the halving formula on y^2 = x(x-1)(x-t): if 2Q = P then
/// x(Q) = (r_0 + r_1)(r_0 + r_t) with r_e = +-sqrt(x(P) - e), one sign pattern per preimage.
pub fn preimages(t: Complex64, w: ExtComplex) -> [ExtComplex; 4] {
    let Some(w) = w.finite() else {
        return [
            ExtComplex::Finite(Complex64::new(0.0, 0.0)),
            ExtComplex::Finite(Complex64::new(1.0, 0.0)),
            ExtComplex::Finite(t),
            ExtComplex::Infinity,
        ];
    };
    let (e0, e1, et) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), t);
    let r0 = w.sqrt();
    let r1 = (w - e1).sqrt();
    let rt = (w - et).sqrt();
    let signs = [(1.0, 1.0, 1.0), (1.0, -1.0, -1.0), (-1.0, 1.0, -1.0), (-1.0, -1.0, 1.0)];
    signs.map(|(s0, s1, st)| {
        let a = stable_sum(s0 * r0, s1 * r1, e0, e1);
        let b = stable_sum(s0 * r0, st * rt, e0, et);
        let x = a * b;
        if x.is_finite() { ExtComplex::Finite(x) } else { ExtComplex::Infinity }
    })
}

/// Preimage selected by branch index 0..4.
pub fn preimage_branch(t: Complex64, w: ExtComplex, branch: usize) -> ExtComplex {
    preimages(t, w)[branch % 4]
}
