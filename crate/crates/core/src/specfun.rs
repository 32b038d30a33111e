//! Jacobi polynomials with complex parameters and argument, plus the
//! physicists' Hermite polynomials used by the harmonic family.
//!
//! Normalization: P_n^{(a,b)}(1) = binom(n + a, n).

use num_complex::Complex64;

/// Below this magnitude (relative to the y-coefficient) the leading
/// recurrence coefficient is treated as zero and the series is used.
pub const DEGENERATE_COEFF: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiSpec {
    pub n: usize,
    pub sp: Complex64,
    pub sm: Complex64,
}

impl JacobiSpec {
    pub fn new(n: usize, sp: Complex64, sm: Complex64) -> Self {
        JacobiSpec { n, sp, sm }
    }

    pub fn real(n: usize, sp: f64, sm: f64) -> Self {
        JacobiSpec::new(n, Complex64::new(sp, 0.0), Complex64::new(sm, 0.0))
    }

    pub fn eval(&self, y: Complex64) -> Complex64 {
        jacobi(self, y)
    }
}

/// Relative forward-error bound above which the recurrence result is
/// discarded in favour of the series.
pub const RECURRENCE_ERROR_LIMIT: f64 = 1e-11;

/// Three-term recurrence in the degree. Falls back to the series when a
/// leading coefficient degenerates or the propagated rounding bound
/// exceeds [`RECURRENCE_ERROR_LIMIT`].
pub fn jacobi(spec: &JacobiSpec, y: Complex64) -> Complex64 {
    match jacobi_recurrence(spec, y) {
        Some((v, bound)) if bound <= RECURRENCE_ERROR_LIMIT * v.norm() => v,
        _ => jacobi_series(spec, y),
    }
}

/// Raw recurrence with a running first-order bound on the absolute
/// rounding error; `None` when a leading coefficient vanishes.
pub fn jacobi_recurrence(spec: &JacobiSpec, y: Complex64) -> Option<(Complex64, f64)> {
    let (a, b) = (spec.sp, spec.sm);
    let one = Complex64::new(1.0, 0.0);
    if spec.n == 0 {
        return Some((one, 0.0));
    }
    let u = f64::EPSILON;
    let mut prev = one;
    let mut cur = (a - b) * 0.5 + (a + b + 2.0) * y * 0.5;
    let mut err_prev = 0.0;
    let mut err = 4.0 * u * ((a - b).norm() + (a + b + 2.0).norm() * y.norm());
    for m in 2..=spec.n {
        let m = m as f64;
        let c = a + b + 2.0 * m;
        let lead = 2.0 * m * (a + b + m) * (c - 2.0);
        let slope = (c - 2.0) * (c - 1.0) * c;
        if lead.norm() < DEGENERATE_COEFF * (1.0 + slope.norm()) {
            return None;
        }
        let shift = (c - 1.0) * (a * a - b * b);
        let back = 2.0 * (a + m - 1.0) * (b + m - 1.0) * c;
        let k1 = (shift + slope * y).norm() / lead.norm();
        let k2 = back.norm() / lead.norm();
        let next = ((shift + slope * y) * cur - back * prev) / lead;
        let err_next =
            k1 * err + k2 * err_prev + 16.0 * u * (k1 * cur.norm() + k2 * prev.norm() + next.norm());
        prev = cur;
        cur = next;
        err_prev = err;
        err = err_next;
    }
    Some((cur, err))
}

/// Generalized binomial coefficient binom(z, j).
fn binom(z: Complex64, j: usize) -> Complex64 {
    (0..j).fold(Complex64::new(1.0, 0.0), |acc, i| {
        acc * (z - i as f64) / (i as f64 + 1.0)
    })
}

/// Finite hypergeometric sum
/// Σ_k binom(n+a, n−k) binom(n+b, k) ((y−1)/2)^k ((y+1)/2)^{n−k}.
pub fn jacobi_series(spec: &JacobiSpec, y: Complex64) -> Complex64 {
    jacobi_series_terms(spec, y).iter().sum()
}

/// Individual series terms; their magnitudes bound the cancellation in the sum.
pub fn jacobi_series_terms(spec: &JacobiSpec, y: Complex64) -> Vec<Complex64> {
    let n = spec.n;
    let lo = (y - 1.0) * 0.5;
    let hi = (y + 1.0) * 0.5;
    (0..=n)
        .map(|k| {
            binom(spec.sp + n as f64, n - k)
                * binom(spec.sm + n as f64, k)
                * lo.powu(k as u32)
                * hi.powu((n - k) as u32)
        })
        .collect()
}

/// Physicists' Hermite polynomial H_n(x).
pub fn hermite(n: usize, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 2.0 * x;
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}
