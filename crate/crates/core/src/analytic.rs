//! Closed-form levels and eigenfunctions of the partner h and of H.
//!
//! Energies follow ε_n of each family and E_n = (1 − α − β)ε_n. Wavefunctions
//! come in two pictures related by φ = ρψ with ρ = e^{−μΩ}; the gauge factor
//! is always taken from [`Superpotential::antiderivative`] so that the two
//! pictures agree with the diagonal operators of the `operators` module.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::DerivedParams;
use crate::specfun::{hermite, jacobi, JacobiSpec};
use crate::superpotential::{ln_cosh, Family, Superpotential};

/// Default distance (in ε units) from the RM-II continuum edge at which a
/// level is flagged marginal.
pub const MARGINAL_TOLERANCE: f64 = 1e-3;

/// Largest admissible imaginary remainder of the rotated RM-I eigenfunction,
/// relative to its amplitude.
pub const PHASE_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelRecord {
    pub n: usize,
    pub eps: f64,
    pub energy: f64,
    /// Normalizable bound state.
    pub valid: bool,
    /// The weaker condition n < a (RM-II); equals `valid` elsewhere.
    pub index_below_a: bool,
    /// Within the marginal tolerance of the continuum edge (RM-II only).
    pub marginal: bool,
}

impl LevelRecord {
    fn new(d: &DerivedParams, n: usize, eps: f64) -> Self {
        LevelRecord {
            n,
            eps,
            energy: d.scale * eps,
            valid: true,
            index_below_a: true,
            marginal: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Picture {
    /// φ, eigenfunction of h.
    Hermitian,
    /// ψ = ρ⁻¹φ, eigenfunction of H.
    NonHermitian,
}

fn expect(d: &DerivedParams, family: Family) -> Result<()> {
    if d.family == family {
        Ok(())
    } else {
        Err(Error::FamilyMismatch {
            expected: family.name(),
            got: d.family.name(),
        })
    }
}

pub fn rm1_energy(d: &DerivedParams, n: usize) -> Result<LevelRecord> {
    expect(d, Family::Rm1Trig)?;
    let m = d.cap_a + n as f64;
    let eps = m * m - d.cap_b * d.cap_b / (m * m) + d.offset;
    Ok(LevelRecord::new(d, n, eps))
}

pub fn rm2_energy(d: &DerivedParams, n: usize) -> Result<LevelRecord> {
    rm2_energy_with(d, n, MARGINAL_TOLERANCE)
}

/// RM-II level with an explicit marginal tolerance.
pub fn rm2_energy_with(d: &DerivedParams, n: usize, marginal_tol: f64) -> Result<LevelRecord> {
    expect(d, Family::Rm2Hyp)?;
    let (a, b) = (d.cap_a, d.cap_b);
    if n as f64 >= a {
        return Err(Error::LevelOutOfRange { n, a });
    }
    let m = a - n as f64;
    let eps = -m * m - b * b / (m * m) + d.offset;
    let mut rec = LevelRecord::new(d, n, eps);
    rec.valid = m * m > b;
    rec.marginal = (eps - rm2_threshold(d)).abs() < marginal_tol;
    Ok(rec)
}

/// Lower continuum edge of the RM-II partner potential (its x → −∞ limit).
pub fn rm2_threshold(d: &DerivedParams) -> f64 {
    d.offset - 2.0 * d.cap_b
}

pub fn harmonic_energy(d: &DerivedParams, n: usize) -> Result<LevelRecord> {
    expect(d, Family::Harmonic)?;
    let eps = (2 * n + 1) as f64 * d.omega_tilde() - 1.0 / d.scale;
    Ok(LevelRecord::new(d, n, eps))
}

pub fn energy(d: &DerivedParams, n: usize) -> Result<LevelRecord> {
    match d.family {
        Family::Rm1Trig => rm1_energy(d, n),
        Family::Rm2Hyp => rm2_energy(d, n),
        Family::Harmonic => harmonic_energy(d, n),
    }
}

/// Number of RM-II indices with n < a.
pub fn rm2_level_count(d: &DerivedParams) -> usize {
    if d.cap_a <= 0.0 {
        0
    } else {
        d.cap_a.ceil() as usize
    }
}

/// Up to `max` lowest levels; for RM-II only indices below a are listed.
pub fn levels(d: &DerivedParams, max: usize) -> Result<Vec<LevelRecord>> {
    let count = match d.family {
        Family::Rm2Hyp => max.min(rm2_level_count(d)),
        _ => max,
    };
    (0..count).map(|n| energy(d, n)).collect()
}

/// (s₊, s₋) of the trigonometric eigenfunction. The imaginary parts are
/// ordered so that the result solves the partner equation.
pub fn rm1_jacobi_params(d: &DerivedParams, n: usize) -> (Complex64, Complex64) {
    let m = d.cap_a + n as f64;
    let im = d.cap_b / m;
    (Complex64::new(-m, -im), Complex64::new(-m, im))
}

/// (s₊, s₋) = a − n ± b/(a − n).
pub fn rm2_jacobi_params(d: &DerivedParams, n: usize) -> (f64, f64) {
    let m = d.cap_a - n as f64;
    (m + d.cap_b / m, m - d.cap_b / m)
}

/// ln of ρ⁻¹ = e^{μΩ}.
fn log_gauge(d: &DerivedParams, sp: &Superpotential, x: f64) -> Result<f64> {
    Ok(d.mu * sp.antiderivative(x)?)
}

fn check_interior(sp: &Superpotential, x: f64) -> Result<()> {
    let dom = sp.domain();
    if dom.contains(x) {
        Ok(())
    } else {
        Err(Error::Domain {
            x,
            lo: dom.lo,
            hi: dom.hi,
        })
    }
}

/// sin^{A+n}x · e^{Bx/(A+n)} · P_n^{(s₊,s₋)}(i cot x), times ρ⁻¹ for ψ.
/// Unnormalized and complex; see [`WavefunctionSampler`] for the real form.
pub fn rm1_wavefunction(
    d: &DerivedParams,
    sp: &Superpotential,
    n: usize,
    picture: Picture,
    x: f64,
) -> Result<Complex64> {
    expect(d, Family::Rm1Trig)?;
    check_interior(sp, x)?;
    let m = d.cap_a + n as f64;
    let (p, q) = rm1_jacobi_params(d, n);
    let y = Complex64::new(0.0, 1.0 / x.tan());
    let mut log_amp = m * x.sin().ln() + d.cap_b / m * x;
    if picture == Picture::NonHermitian {
        log_amp += log_gauge(d, sp, x)?;
    }
    Ok(jacobi(&JacobiSpec::new(n, p, q), y) * log_amp.exp())
}

/// (1−y)^{s₊/2}(1+y)^{s₋/2} P_n^{(s₊,s₋)}(y) with y = tanh x, times ρ⁻¹ for ψ.
pub fn rm2_wavefunction(
    d: &DerivedParams,
    sp: &Superpotential,
    n: usize,
    picture: Picture,
    x: f64,
) -> Result<f64> {
    let level = rm2_energy(d, n)?;
    if !level.valid {
        return Err(Error::LevelOutOfRange { n, a: d.cap_a });
    }
    check_interior(sp, x)?;
    let (p, q) = rm2_jacobi_params(d, n);
    // ln(1 ∓ tanh x) = ∓x − ln cosh x + ln 2 − ln 2; the common ln 2 is dropped.
    let lc = ln_cosh(x);
    let mut log_amp = 0.5 * p * (-x - lc) + 0.5 * q * (x - lc);
    if picture == Picture::NonHermitian {
        log_amp += log_gauge(d, sp, x)?;
    }
    let poly = jacobi(&JacobiSpec::real(n, p, q), Complex64::new(x.tanh(), 0.0)).re;
    Ok(poly * log_amp.exp())
}

/// H_n(√ω̃ x) e^{−ω̃x²/2}, times ρ⁻¹ for ψ.
pub fn harmonic_wavefunction(
    d: &DerivedParams,
    n: usize,
    picture: Picture,
    x: f64,
) -> Result<f64> {
    expect(d, Family::Harmonic)?;
    let w = d.omega_tilde();
    let mut log_amp = -0.5 * w * x * x;
    if picture == Picture::NonHermitian {
        log_amp += log_gauge(d, &Superpotential::Harmonic, x)?;
    }
    Ok(hermite(n, w.sqrt() * x) * log_amp.exp())
}

/// Real-valued sampler of one level in one picture.
#[derive(Debug, Clone)]
pub struct WavefunctionSampler {
    pub picture: Picture,
    pub level: LevelRecord,
    pub derived: DerivedParams,
    pub sp: Superpotential,
    /// Unit phase removed from the complex RM-I expression.
    phase: Complex64,
}

impl WavefunctionSampler {
    pub fn new(d: &DerivedParams, sp: &Superpotential, n: usize, picture: Picture) -> Result<Self> {
        if d.family != sp.family() {
            return Err(Error::FamilyMismatch {
                expected: d.family.name(),
                got: sp.family().name(),
            });
        }
        let level = energy(d, n)?;
        if !level.valid {
            return Err(Error::LevelOutOfRange { n, a: d.cap_a });
        }
        let phase = if d.family == Family::Rm1Trig {
            rm1_phase(d, sp, n)?
        } else {
            Complex64::new(1.0, 0.0)
        };
        Ok(WavefunctionSampler {
            picture,
            level,
            derived: d.clone(),
            sp: *sp,
            phase,
        })
    }

    pub fn family(&self) -> Family {
        self.derived.family
    }

    /// Unnormalized real value. For RM-I the imaginary remainder after the
    /// phase rotation is checked against [`PHASE_TOLERANCE`].
    pub fn eval(&self, x: f64) -> Result<f64> {
        let (d, n) = (&self.derived, self.level.n);
        match d.family {
            Family::Rm1Trig => {
                let z = rm1_wavefunction(d, &self.sp, n, self.picture, x)? * self.phase.conj();
                if z.im.abs() > PHASE_TOLERANCE * z.norm().max(f64::MIN_POSITIVE) && z.norm() > 1e-200 {
                    return Err(Error::Phase(z.im.abs() / z.norm()));
                }
                Ok(z.re)
            }
            Family::Rm2Hyp => rm2_wavefunction(d, &self.sp, n, self.picture, x),
            Family::Harmonic => harmonic_wavefunction(d, n, self.picture, x),
        }
    }

    pub fn sample(&self, nodes: &[f64]) -> Result<Vec<f64>> {
        nodes.iter().map(|&x| self.eval(x)).collect()
    }

    /// Samples scaled to unit discrete L² norm (step-weighted) with a
    /// positive value at the middle node.
    pub fn sample_normalized(&self, nodes: &[f64], step: f64) -> Result<Vec<f64>> {
        let mut v = self.sample(nodes)?;
        normalize_l2(&mut v, step)?;
        Ok(v)
    }
}

/// Phase of φ_n at π/2, or at the largest of a few interior probes when the
/// polynomial nearly vanishes there (B = 0 and odd n).
fn rm1_phase(d: &DerivedParams, sp: &Superpotential, n: usize) -> Result<Complex64> {
    let at = |x: f64| rm1_wavefunction(d, sp, n, Picture::Hermitian, x);
    let mid = at(FRAC_PI_2)?;
    let mut best = mid;
    for k in 1..32 {
        let z = at(std::f64::consts::PI * k as f64 / 32.0)?;
        if z.norm() > best.norm() {
            best = z;
        }
    }
    let reference = if mid.norm() > 1e-6 * best.norm() { mid } else { best };
    if reference.norm() == 0.0 {
        return Err(Error::Phase(f64::NAN));
    }
    Ok(reference / reference.norm())
}

/// Scales to h·Σv² = 1 and makes the middle entry (or the first entry of
/// noticeable size scanning outward from the middle) positive.
pub fn normalize_l2(v: &mut [f64], step: f64) -> Result<()> {
    let norm = (step * v.iter().map(|t| t * t).sum::<f64>()).sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::ZeroVector);
    }
    let sign = orientation(v);
    v.iter_mut().for_each(|t| *t *= sign / norm);
    Ok(())
}

/// +1 or −1 so that the vector is positive at the middle node; when that
/// entry is tiny compared with the largest, the nearest sizeable entry
/// scanning right of the middle decides.
pub fn orientation(v: &[f64]) -> f64 {
    if v.is_empty() {
        return 1.0;
    }
    let peak = v.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    let mid = v.len() / 2;
    let decisive = (0..v.len())
        .map(|k| {
            // mid, mid+1, mid-1, mid+2, ...
            let off = k.div_ceil(2);
            if k % 2 == 1 { mid + off } else { mid.wrapping_sub(off) }
        })
        .filter(|&i| i < v.len())
        .find(|&i| v[i].abs() > 1e-3 * peak)
        .unwrap_or(mid);
    if v[decisive] < 0.0 {
        -1.0
    } else {
        1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SusyForm {
    /// w = −A cot x − B/A on (0, π).
    Rm1,
    /// w = a tanh x + b/a on the line.
    Rm2,
}

/// w² − w′ − V for the shape-invariant forms, V carrying its constant
/// (−A² + B²/A² or a² + b²/a²). Zero up to rounding.
pub fn susy_factorization_check(form: SusyForm, a: f64, b: f64, x: f64) -> Result<f64> {
    match form {
        SusyForm::Rm1 => {
            if !(x > 0.0 && x < std::f64::consts::PI) {
                return Err(Error::Domain {
                    x,
                    lo: 0.0,
                    hi: std::f64::consts::PI,
                });
            }
            let cot = 1.0 / x.tan();
            let csc2 = 1.0 / (x.sin() * x.sin());
            let w = -a * cot - b / a;
            let wp = a * csc2;
            let v = a * (a - 1.0) * csc2 + 2.0 * b * cot - a * a + b * b / (a * a);
            Ok(w * w - wp - v)
        }
        SusyForm::Rm2 => {
            if !x.is_finite() {
                return Err(Error::Domain {
                    x,
                    lo: f64::NEG_INFINITY,
                    hi: f64::INFINITY,
                });
            }
            let t = x.tanh();
            let sech2 = 1.0 - t * t;
            let w = a * t + b / a;
            let wp = a * sech2;
            let v = -a * (a + 1.0) * sech2 + 2.0 * b * t + a * a + b * b / (a * a);
            Ok(w * w - wp - v)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{derive, SwansonParams};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn model(alpha: f64, beta: f64, sp: Superpotential) -> (DerivedParams, Superpotential) {
        (derive(&SwansonParams::new(alpha, beta), &sp).unwrap(), sp)
    }

    fn t1r1() -> (DerivedParams, Superpotential) {
        model(0.25, 0.5, Superpotential::rm1(1.5, 0.125).unwrap())
    }

    fn t2r1() -> (DerivedParams, Superpotential) {
        model(0.25, 0.5, Superpotential::rm2(1.5, 0.25).unwrap())
    }

    /// −φ'' + (V − ε)φ by a fine central difference, relative to |φ|.
    fn ode_residual(f: impl Fn(f64) -> f64, v: impl Fn(f64) -> f64, eps: f64, x: f64) -> f64 {
        let h = 1e-4;
        let d2 = (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
        (-d2 + (v(x) - eps) * f(x)).abs() / f(x).abs().max(1e-3)
    }

    #[test]
    fn rm1_ground_energy() {
        let (d, _) = t1r1();
        let rec = rm1_energy(&d, 0).unwrap();
        assert_relative_eq!(rec.eps, -289.0 / 144.0, epsilon = 1e-12);
        assert_relative_eq!(rec.energy, -289.0 / 576.0, epsilon = 1e-12);
        assert!(rec.valid && !rec.marginal);
    }

    #[test]
    fn rm1_spectral_gaps() {
        let (d, _) = t1r1();
        let (a, b) = (d.cap_a, d.cap_b);
        for n in 0..10 {
            let m = a + n as f64;
            let gap = (m + 1.0).powi(2) - m * m - b * b * ((m + 1.0).powi(-2) - m.powi(-2));
            let direct = rm1_energy(&d, n + 1).unwrap().eps - rm1_energy(&d, n).unwrap().eps;
            assert!((gap - direct).abs() <= 1e-12 * gap.abs().max(1.0));
        }
    }

    #[test]
    fn pt_energies() {
        let (d, _) = model(0.0, 0.5, Superpotential::rm1(1.5, 0.0).unwrap());
        assert_eq!(d.cap_a, 3.0);
        assert_eq!(rm1_energy(&d, 0).unwrap().eps, 0.0);
        for n in 0..6 {
            let m = d.cap_a + n as f64;
            assert_relative_eq!(rm1_energy(&d, n).unwrap().eps, m * m - 9.0, epsilon = 1e-12);
        }
        let (d, _) = model(0.0, 0.5, Superpotential::rm2(1.5, 0.0).unwrap());
        assert_eq!(d.cap_a, 3.0);
        assert_eq!(rm2_energy(&d, 0).unwrap().eps, 0.0);
        for n in 0..3 {
            let m = d.cap_a - n as f64;
            assert_relative_eq!(rm2_energy(&d, n).unwrap().eps, 9.0 - m * m, epsilon = 1e-12);
        }
    }

    #[test]
    fn rm1_b_zero_n2() {
        let (d, _) = model(0.0, 0.5, Superpotential::rm1(1.5, 0.0).unwrap());
        assert_eq!(rm1_energy(&d, 2).unwrap().eps, 16.0);
        // A = 3 here, so (A + 2)^2 - A^2 = 16.
    }

    #[test]
    fn rm2_levels_of_first_row() {
        let (d, _) = t2r1();
        let a = (-1.0 + 97f64.sqrt()) / 2.0;
        let e0 = rm2_energy(&d, 0).unwrap();
        assert_relative_eq!(e0.eps, -a * a - 4.0 / (a * a) + 164.0 / 9.0, epsilon = 1e-12);
        assert_relative_eq!(e0.energy, e0.eps / 4.0, epsilon = 1e-15);
        let all = levels(&d, 10).unwrap();
        assert_eq!(all.len(), 5);
        let valid: Vec<_> = all.iter().filter(|l| l.valid).map(|l| l.n).collect();
        assert_eq!(valid, vec![0, 1, 2, 3]);
        assert!(all[3].marginal && !all[2].marginal);
        assert!(!all[4].valid && all[4].index_below_a);
        assert!(matches!(rm2_energy(&d, 5), Err(Error::LevelOutOfRange { .. })));
    }

    #[test]
    fn marginal_tolerance_is_configurable() {
        let (d, _) = t2r1();
        assert!(!rm2_energy_with(&d, 3, 1e-4).unwrap().marginal);
        assert!(rm2_energy_with(&d, 2, 10.0).unwrap().marginal);
    }

    #[test]
    fn harmonic_values() {
        let (d, _) = model(0.0, 0.0, Superpotential::Harmonic);
        assert_eq!(harmonic_energy(&d, 0).unwrap().energy, 0.0);
        let (d, _) = model(0.25, 0.5, Superpotential::Harmonic);
        assert_relative_eq!(harmonic_energy(&d, 0).unwrap().energy, 0.5f64.sqrt() - 1.0, epsilon = 1e-14);
        let (d, _) = model(0.125, 0.125, Superpotential::Harmonic);
        assert_relative_eq!(
            harmonic_energy(&d, 1).unwrap().energy,
            3.0 * (15.0f64 / 16.0).sqrt() - 1.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn family_mismatch_rejected() {
        let (d, _) = t1r1();
        assert!(matches!(rm2_energy(&d, 0), Err(Error::FamilyMismatch { .. })));
        assert!(WavefunctionSampler::new(&d, &Superpotential::Harmonic, 0, Picture::Hermitian).is_err());
    }

    #[test]
    fn rm1_ground_state_ratio() {
        let (d, sp) = t1r1();
        let f = |x| rm1_wavefunction(&d, &sp, 0, Picture::Hermitian, x).unwrap();
        let ratio = f(FRAC_PI_2) / f(PI / 4.0);
        let expected = 2f64.sqrt().powi(4) * (PI / 16.0).exp();
        assert!((ratio.re - expected).abs() < 1e-12 * expected && ratio.im.abs() < 1e-12);
    }

    #[test]
    fn rm1_pt_ground_state_is_positive() {
        let (d, sp) = model(0.0, 0.5, Superpotential::rm1(1.5, 0.0).unwrap());
        let s = WavefunctionSampler::new(&d, &sp, 0, Picture::NonHermitian).unwrap();
        for k in 1..20 {
            let x = PI * k as f64 / 20.0;
            let expected = x.sin().powf(d.cap_a + d.mu2);
            assert_relative_eq!(s.eval(x).unwrap(), expected, max_relative = 1e-12);
        }
    }

    #[test]
    fn rm1_levels_solve_partner_equation() {
        let (d, sp) = t1r1();
        let v = |x: f64| 12.0 / x.sin().powi(2) + 2.0 / x.tan() - 323.0 / 18.0;
        for n in 0..5 {
            let s = WavefunctionSampler::new(&d, &sp, n, Picture::Hermitian).unwrap();
            let eps = s.level.eps;
            for x in [0.4, 1.1, 2.0, 2.7] {
                assert!(ode_residual(|t| s.eval(t).unwrap(), v, eps, x) < 1e-4, "n = {n}, x = {x}");
            }
        }
    }

    #[test]
    fn rm1_phase_is_constant() {
        let (d, sp) = t1r1();
        for n in 0..6 {
            let x0 = rm1_wavefunction(&d, &sp, n, Picture::Hermitian, FRAC_PI_2).unwrap();
            for x in [0.3, 0.9, 1.7, 2.9] {
                let z = rm1_wavefunction(&d, &sp, n, Picture::Hermitian, x).unwrap();
                let cross = z.im * x0.re - z.re * x0.im;
                assert!(cross.abs() <= 1e-10 * z.norm() * x0.norm());
            }
        }
        // odd n with B = 0 vanishes at the midpoint; the sampler still works
        let (d, sp) = model(0.0, 0.5, Superpotential::rm1(1.5, 0.0).unwrap());
        let s = WavefunctionSampler::new(&d, &sp, 1, Picture::Hermitian).unwrap();
        assert!(s.eval(1.0).unwrap().abs() > 0.0);
    }

    #[test]
    fn rm2_levels_solve_partner_equation() {
        let (d, sp) = t2r1();
        let v = |x: f64| -24.0 / x.cosh().powi(2) + 4.0 * x.tanh() + 164.0 / 9.0;
        for n in 0..4 {
            let s = WavefunctionSampler::new(&d, &sp, n, Picture::Hermitian).unwrap();
            for x in [-1.3, 0.2, 2.1] {
                assert!(ode_residual(|t| s.eval(t).unwrap(), v, s.level.eps, x) < 1e-4);
            }
        }
    }

    #[test]
    fn rm2_tail_decay_rate() {
        let (d, sp) = t2r1();
        let (sp_plus, _) = rm2_jacobi_params(&d, 0);
        let f = |x| rm2_wavefunction(&d, &sp, 0, Picture::Hermitian, x).unwrap();
        let slope = (f(8.0) / f(7.0)).ln();
        assert!((slope + sp_plus).abs() < 1e-3);
    }

    #[test]
    fn rm2_pt_ground_state_is_even_sech_power() {
        let (d, sp) = model(0.0, 0.5, Superpotential::rm2(1.5, 0.0).unwrap());
        for x in [0.3, 1.0, 2.5] {
            let l = rm2_wavefunction(&d, &sp, 0, Picture::NonHermitian, x).unwrap();
            let r = rm2_wavefunction(&d, &sp, 0, Picture::NonHermitian, -x).unwrap();
            assert_relative_eq!(l, r, max_relative = 1e-13);
            assert_relative_eq!(l, x.cosh().powf(-(d.cap_a - d.mu2)), max_relative = 1e-12);
        }
    }

    #[test]
    fn pictures_differ_by_gauge() {
        for (d, sp) in [t1r1(), t2r1(), model(0.25, 0.5, Superpotential::Harmonic)] {
            let phi = WavefunctionSampler::new(&d, &sp, 1, Picture::Hermitian).unwrap();
            let psi = WavefunctionSampler::new(&d, &sp, 1, Picture::NonHermitian).unwrap();
            for x in [0.5, 1.2, 2.2] {
                let rho = (-d.mu * sp.antiderivative(x).unwrap()).exp();
                let (a, b) = (psi.eval(x).unwrap() * rho, phi.eval(x).unwrap());
                assert!((a - b).abs() <= 1e-12 * b.abs().max(1e-300));
            }
        }
    }

    #[test]
    fn harmonic_ground_state() {
        let (d, _) = model(0.25, 0.5, Superpotential::Harmonic);
        let w = d.omega_tilde();
        let f = harmonic_wavefunction(&d, 0, Picture::Hermitian, 0.7).unwrap();
        assert_relative_eq!(f, (-0.5 * w * 0.49f64).exp(), max_relative = 1e-14);
    }

    #[test]
    fn normalization_and_sign() {
        let mut v = vec![0.0, -1.0, -2.0, -1.0, 0.0];
        normalize_l2(&mut v, 0.5).unwrap();
        assert!(v[2] > 0.0);
        assert_relative_eq!(0.5 * v.iter().map(|t| t * t).sum::<f64>(), 1.0, epsilon = 1e-15);
        let odd = [-1.0, -2.0, 0.0, 2.0, 1.0];
        assert_eq!(orientation(&odd), 1.0);
        assert!(normalize_l2(&mut [0.0, 0.0], 1.0).is_err());
    }

    #[test]
    fn susy_identities() {
        for x in [-2.0, -0.3, 0.0, 1.7] {
            assert!(susy_factorization_check(SusyForm::Rm2, 1.0, 0.0, x).unwrap().abs() < 1e-14);
        }
        assert!(susy_factorization_check(SusyForm::Rm1, 4.0, 1.0, PI / 3.0).unwrap().abs() <= 1e-12);
        assert!(susy_factorization_check(SusyForm::Rm2, 2.0, 1.0, 0.0).unwrap().abs() <= 1e-12);
        assert!(susy_factorization_check(SusyForm::Rm1, 4.0, 1.0, 0.0).is_err());
    }
}
