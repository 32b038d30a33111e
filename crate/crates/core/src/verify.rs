//! Symmetric tridiagonal eigensolver (Sturm bisection plus inverse
//! iteration), the η inner product, and the end-to-end verification that
//! ties the closed forms to the discretized operators under grid doubling.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::analytic::{self, LevelRecord, Picture, WavefunctionSampler};
use crate::error::{Error, Result};
use crate::operators::{
    build_eta, build_h, build_swanson, conjugation_residual, default_half_width, eigen_residual,
    pseudo_hermiticity_residual, DiagonalOperator, GridSpec, TridiagonalOperator,
};
use crate::params::{derive, DerivedParams, SwansonParams};
use crate::superpotential::{Family, Superpotential};

/// Relative width at which bisection stops.
pub const BISECTION_TOLERANCE: f64 = 1e-12;
/// Inverse-iteration cap per level.
pub const MAX_INVERSE_ITERATIONS: usize = 50;
/// Relative shift added to the bisection eigenvalue before factorizing.
pub const SHIFT_PERTURBATION: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenResult {
    pub eigenvalues: Vec<f64>,
    /// Euclidean unit norm, positive at the middle node.
    pub eigenvectors: Vec<Vec<f64>>,
    pub iterations: Vec<usize>,
}

/// Number of eigenvalues strictly below `x` (LDLᵀ inertia).
pub fn sturm_count(t: &TridiagonalOperator, x: f64) -> usize {
    let mut count = 0;
    let mut d = 1.0;
    for i in 0..t.dim() {
        let off = if i == 0 { 0.0 } else { t.sub[i - 1] * t.sub[i - 1] / d };
        d = t.diag[i] - x - off;
        if d == 0.0 {
            d = -f64::EPSILON * (t.diag[i].abs() + x.abs()).max(f64::MIN_POSITIVE);
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

fn gershgorin(t: &TridiagonalOperator) -> (f64, f64) {
    let n = t.dim();
    (0..n).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), i| {
        let r = if i > 0 { t.sub[i - 1].abs() } else { 0.0 } + if i + 1 < n { t.sup[i].abs() } else { 0.0 };
        (lo.min(t.diag[i] - r), hi.max(t.diag[i] + r))
    })
}

/// j-th smallest eigenvalue (0-based) by bisection.
pub fn bisect_eigenvalue(t: &TridiagonalOperator, j: usize) -> f64 {
    let (mut lo, mut hi) = gershgorin(t);
    let pad = 1e-12 * (lo.abs().max(hi.abs())).max(1.0);
    lo -= pad;
    hi += pad;
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= BISECTION_TOLERANCE * lo.abs().max(hi.abs()).max(1.0) || mid == lo || mid == hi {
            break;
        }
        if sturm_count(t, mid) > j {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Solves (T − σI)x = b by Gaussian elimination with partial pivoting.
fn shifted_solve(t: &TridiagonalOperator, sigma: f64, b: &[f64]) -> Vec<f64> {
    let n = t.dim();
    // rows carry (diag, first super, second super) after pivoting
    let mut d: Vec<f64> = t.diag.iter().map(|a| a - sigma).collect();
    let mut u1: Vec<f64> = (0..n).map(|i| if i + 1 < n { t.sup[i] } else { 0.0 }).collect();
    let mut u2 = vec![0.0; n];
    let mut l: Vec<f64> = t.sub.clone();
    let mut rhs = b.to_vec();
    let tiny = f64::EPSILON * t.diag.iter().fold(1.0f64, |m, a| m.max(a.abs()));
    for i in 0..n.saturating_sub(1) {
        if l[i].abs() > d[i].abs() {
            // swap rows i and i+1
            let (di, u1i, u2i) = (d[i], u1[i], u2[i]);
            d[i] = l[i];
            u1[i] = d[i + 1];
            u2[i] = u1[i + 1];
            l[i] = di;
            d[i + 1] = u1i;
            u1[i + 1] = u2i;
            rhs.swap(i, i + 1);
        }
        if d[i] == 0.0 {
            d[i] = tiny;
        }
        let m = l[i] / d[i];
        d[i + 1] -= m * u1[i];
        u1[i + 1] -= m * u2[i];
        rhs[i + 1] -= m * rhs[i];
        l[i] = m;
    }
    if n > 0 && d[n - 1] == 0.0 {
        d[n - 1] = tiny;
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = rhs[i];
        if i + 1 < n {
            s -= u1[i] * x[i + 1];
        }
        if i + 2 < n {
            s -= u2[i] * x[i + 2];
        }
        x[i] = s / d[i];
    }
    x
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn unit(v: &mut [f64]) -> f64 {
    let n = dot(v, v).sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|t| *t /= n);
    }
    n
}

/// The `k` smallest eigenpairs of a symmetric tridiagonal matrix.
pub fn solve_symmetric_tridiagonal(t: &TridiagonalOperator, k: usize) -> Result<EigenResult> {
    if !t.symmetric || t.sub != t.sup {
        return Err(Error::NotSymmetric);
    }
    let n = t.dim();
    if k == 0 || k > n {
        return Err(Error::EigenCount { k, dim: n });
    }
    let eigenvalues: Vec<f64> = (0..k).map(|j| bisect_eigenvalue(t, j)).collect();
    let mut eigenvectors: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut iterations = Vec::with_capacity(k);
    for (level, &lambda) in eigenvalues.iter().enumerate() {
        let sigma = lambda + SHIFT_PERTURBATION * lambda.abs().max(1.0);
        // deterministic start with components along every mode
        let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 0.5 * ((i * 7 + level * 13) % 11) as f64 / 11.0).collect();
        unit(&mut x);
        let mut done = None;
        for it in 1..=MAX_INVERSE_ITERATIONS {
            let mut y = shifted_solve(t, sigma, &x);
            for prev in &eigenvectors {
                let c = dot(&y, prev);
                y.iter_mut().zip(prev).for_each(|(a, b)| *a -= c * b);
            }
            if unit(&mut y) == 0.0 || y.iter().any(|v| !v.is_finite()) {
                break;
            }
            let overlap = dot(&x, &y).abs();
            x = y;
            if 1.0 - overlap < 1e-14 {
                done = Some(it);
                break;
            }
        }
        let Some(it) = done else {
            return Err(Error::NoConvergence { level });
        };
        let sign = analytic::orientation(&x);
        x.iter_mut().for_each(|v| *v *= sign);
        eigenvectors.push(x);
        iterations.push(it);
    }
    Ok(EigenResult {
        eigenvalues,
        eigenvectors,
        iterations,
    })
}

/// h·Σ uᵢηᵢvᵢ.
pub fn eta_inner_product(u: &[f64], v: &[f64], eta: &DiagonalOperator, g: &GridSpec) -> Result<f64> {
    if u.len() != v.len() || u.len() != eta.dim() || u.len() != g.n_interior {
        return Err(Error::Dimension {
            left: u.len(),
            right: v.len().min(eta.dim()).min(g.n_interior),
        });
    }
    Ok(g.h_step * u.iter().zip(v).zip(&eta.log_entries).map(|((a, b), l)| a * l.exp() * b).sum::<f64>())
}

/// Largest |⟨uᵢ, ηuⱼ⟩| / √(⟨uᵢ, ηuᵢ⟩⟨uⱼ, ηuⱼ⟩) over i ≠ j.
pub fn eta_gram_offdiagonal(vectors: &[Vec<f64>], eta: &DiagonalOperator, g: &GridSpec) -> Result<f64> {
    let norms: Vec<f64> = vectors
        .iter()
        .map(|v| eta_inner_product(v, v, eta, g).map(f64::sqrt))
        .collect::<Result<_>>()?;
    let mut worst = 0.0f64;
    for i in 0..vectors.len() {
        for j in 0..i {
            let ip = eta_inner_product(&vectors[i], &vectors[j], eta, g)?;
            worst = worst.max(ip.abs() / (norms[i] * norms[j]));
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// Absolute bound on |ε_numeric − ε_analytic| at the base grid.
    pub spectrum: f64,
    /// Bound on normalized η-Gram off-diagonals.
    pub gram: f64,
    pub ratio_min: f64,
    pub ratio_max: f64,
    /// Residuals at or below this on both grids count as converged.
    pub floor: f64,
    pub marginal: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            spectrum: 1e-3,
            gram: 1e-6,
            ratio_min: 3.2,
            ratio_max: 4.8,
            floor: 1e-12,
            marginal: analytic::MARGINAL_TOLERANCE,
        }
    }
}

impl Tolerances {
    /// Second-order decay between a grid and its doubling.
    pub fn converges(&self, coarse: f64, fine: f64) -> bool {
        if coarse <= self.floor && fine <= self.floor {
            return true;
        }
        let r = coarse / fine;
        r.is_finite() && (self.ratio_min..=self.ratio_max).contains(&r)
    }
}

/// A value on the base grid and on its doubling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Convergence {
    pub coarse: f64,
    pub fine: f64,
    /// coarse / fine; absent when both sit at the floor.
    pub ratio: Option<f64>,
    pub pass: bool,
}

impl Convergence {
    fn new(coarse: f64, fine: f64, tol: &Tolerances) -> Self {
        let ratio = coarse / fine;
        Convergence {
            coarse,
            fine,
            ratio: ratio.is_finite().then_some(ratio),
            pass: tol.converges(coarse, fine),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelReport {
    pub level: LevelRecord,
    pub eps_numeric: f64,
    pub eps_numeric_fine: f64,
    pub spectrum_deviation: Convergence,
    pub eigen_residual: Convergence,
    /// Marginal levels are reported but not gated.
    pub gated: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub family: Family,
    pub grid: GridSpec,
    pub grid_fine: GridSpec,
    pub tolerances: Tolerances,
    pub hermitian_limit: bool,
    pub conjugation: Convergence,
    pub pseudo_hermiticity: Convergence,
    pub levels: Vec<LevelReport>,
    /// Largest normalized η-Gram off-diagonal of the analytic ψ.
    pub eta_gram_offdiagonal: f64,
    /// Largest |⟨vᵢ, vⱼ⟩| of the numeric eigenvectors of h.
    pub numeric_orthogonality: f64,
    /// Largest normalized η-Gram off-diagonal of ρ⁻¹v for numeric v.
    pub mapped_eta_orthogonality: f64,
    pub residuals: BTreeMap<String, f64>,
    pub pass: BTreeMap<String, bool>,
    pub all_pass: bool,
}

/// Parameters, superpotential and derived quantities of one model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Model {
    pub params: SwansonParams,
    pub superpotential: Superpotential,
    pub derived: DerivedParams,
}

impl Model {
    pub fn new(params: SwansonParams, superpotential: Superpotential) -> Result<Self> {
        let derived = derive(&params, &superpotential)?;
        Ok(Model {
            params,
            superpotential,
            derived,
        })
    }

    /// α = 1/4, β = 1/2, A₁ = 3/2, B₁ = 1/8.
    pub fn table1_row1() -> Self {
        Model::new(SwansonParams::new(0.25, 0.5), Superpotential::Rm1Trig { a1: 1.5, b1: 0.125 }).unwrap()
    }

    /// α = 1/4, β = 1/2, A₂ = 3/2, B₂ = 1/4.
    pub fn table2_row1() -> Self {
        Model::new(SwansonParams::new(0.25, 0.5), Superpotential::Rm2Hyp { a2: 1.5, b2: 0.25 }).unwrap()
    }

    /// α = 0, β = 1/2, A₁ = 3/2, B₁ = 0 (A = 3).
    pub fn rm1_pt() -> Self {
        Model::new(SwansonParams::new(0.0, 0.5), Superpotential::Rm1Trig { a1: 1.5, b1: 0.0 }).unwrap()
    }

    /// α = 0, β = 1/2, A₂ = 3/2, B₂ = 0 (a = 3).
    pub fn rm2_pt() -> Self {
        Model::new(SwansonParams::new(0.0, 0.5), Superpotential::Rm2Hyp { a2: 1.5, b2: 0.0 }).unwrap()
    }

    /// The oscillator W = x at α = 1/4, β = 1/2.
    pub fn harmonic_swanson() -> Self {
        Model::new(SwansonParams::new(0.25, 0.5), Superpotential::Harmonic).unwrap()
    }

    pub fn family(&self) -> Family {
        self.derived.family
    }

    pub fn default_half_width(&self) -> Result<f64> {
        default_half_width(&self.derived, &self.superpotential)
    }

    /// Grid over the family domain; `half_width` falls back to the default.
    pub fn grid(&self, n_interior: usize, half_width: Option<f64>) -> Result<GridSpec> {
        let l = match half_width {
            Some(l) => l,
            None => self.default_half_width()?,
        };
        GridSpec::for_family(self.family(), n_interior, l)
    }

    pub fn partner(&self, g: &GridSpec) -> Result<TridiagonalOperator> {
        build_h(&self.derived, &self.superpotential, g)
    }

    pub fn swanson(&self, g: &GridSpec) -> Result<TridiagonalOperator> {
        build_swanson(&self.params, &self.superpotential, g)
    }

    /// Normalized analytic samples of level n.
    pub fn wavefunction(&self, n: usize, picture: Picture, g: &GridSpec) -> Result<Vec<f64>> {
        WavefunctionSampler::new(&self.derived, &self.superpotential, n, picture)?.sample_normalized(&g.nodes(), g.h_step)
    }

    /// Numeric eigenvalues of h.
    pub fn numeric_spectrum(&self, g: &GridSpec, k: usize) -> Result<EigenResult> {
        solve_symmetric_tridiagonal(&self.partner(g)?, k)
    }

    /// Admissible, or the explicit Hermitian limit α = β.
    pub fn check_admissible(&self) -> Result<()> {
        if self.derived.admissible() || self.params.is_hermitian() {
            return Ok(());
        }
        let names: Vec<&str> = self.derived.constraint_flags.failed().iter().map(|c| c.name()).collect();
        Err(Error::Constraint(names.join(", ")))
    }
}

/// Levels used by the verification: valid ones among the first `levels`.
pub fn verified_levels(d: &DerivedParams, levels: usize, marginal_tol: f64) -> Result<Vec<LevelRecord>> {
    let mut out = Vec::new();
    for rec in analytic::levels(d, levels)? {
        let rec = if d.family == Family::Rm2Hyp {
            analytic::rm2_energy_with(d, rec.n, marginal_tol)?
        } else {
            rec
        };
        if !rec.valid {
            break;
        }
        out.push(rec);
    }
    Ok(out)
}

fn level_residual(m: &Model, n: usize, energy: f64, g: &GridSpec) -> Result<f64> {
    let psi = WavefunctionSampler::new(&m.derived, &m.superpotential, n, Picture::NonHermitian)?.sample(&g.nodes())?;
    eigen_residual(&m.swanson(g)?, &psi, energy)
}

/// Everything at the base grid `g` and at its doubling.
pub fn run_full_verification(m: &Model, g: &GridSpec, levels: usize, tol: &Tolerances) -> Result<VerificationReport> {
    m.check_admissible()?;
    let (p, sp, d) = (&m.params, &m.superpotential, &m.derived);
    g.check_family(sp.family())?;
    let gf = g.doubled();

    let conjugation = Convergence::new(conjugation_residual(p, d, sp, g)?, conjugation_residual(p, d, sp, &gf)?, tol);
    let pseudo = Convergence::new(pseudo_hermiticity_residual(p, sp, g)?, pseudo_hermiticity_residual(p, sp, &gf)?, tol);

    let records = verified_levels(d, levels, tol.marginal)?;
    let k = records.len();
    let (coarse, fine) = if k > 0 {
        (Some(m.numeric_spectrum(g, k)?), Some(m.numeric_spectrum(&gf, k)?))
    } else {
        (None, None)
    };

    let mut level_reports = Vec::with_capacity(k);
    for (j, rec) in records.iter().enumerate() {
        let (ec, ef) = (coarse.as_ref().unwrap().eigenvalues[j], fine.as_ref().unwrap().eigenvalues[j]);
        let dev = Convergence::new((ec - rec.eps).abs(), (ef - rec.eps).abs(), tol);
        let res = Convergence::new(
            level_residual(m, rec.n, rec.energy, g)?,
            level_residual(m, rec.n, rec.energy, &gf)?,
            tol,
        );
        let gated = !rec.marginal;
        let pass = !gated || (dev.coarse <= tol.spectrum && dev.pass && res.pass);
        level_reports.push(LevelReport {
            level: *rec,
            eps_numeric: ec,
            eps_numeric_fine: ef,
            spectrum_deviation: dev,
            eigen_residual: res,
            gated,
            pass,
        });
    }

    let eta = build_eta(p, sp, g)?;
    let gated_levels: Vec<usize> = records.iter().filter(|r| !r.marginal).map(|r| r.n).collect();
    let psis: Vec<Vec<f64>> = gated_levels
        .iter()
        .map(|&n| m.wavefunction(n, Picture::NonHermitian, g))
        .collect::<Result<_>>()?;
    let gram = eta_gram_offdiagonal(&psis, &eta, g)?;

    let (mut numeric_orth, mut mapped_orth) = (0.0f64, 0.0f64);
    if let Some(ev) = &coarse {
        let vs: Vec<&Vec<f64>> = gated_levels.iter().map(|&n| &ev.eigenvectors[n]).collect();
        for i in 0..vs.len() {
            for j in 0..i {
                numeric_orth = numeric_orth.max(dot(vs[i], vs[j]).abs());
            }
        }
        let rho_inv = crate::operators::build_rho(p, sp, g)?.inverse();
        let mapped: Vec<Vec<f64>> = vs.iter().map(|v| rho_inv.apply(v)).collect::<Result<_>>()?;
        mapped_orth = eta_gram_offdiagonal(&mapped, &eta, g)?;
    }

    let mut residuals = BTreeMap::new();
    residuals.insert("conjugation".to_string(), conjugation.coarse);
    residuals.insert("conjugation_fine".to_string(), conjugation.fine);
    residuals.insert("pseudo_hermiticity".to_string(), pseudo.coarse);
    residuals.insert("pseudo_hermiticity_fine".to_string(), pseudo.fine);
    residuals.insert("eta_orthogonality".to_string(), gram);
    residuals.insert("numeric_orthogonality".to_string(), numeric_orth);
    residuals.insert("mapped_eta_orthogonality".to_string(), mapped_orth);
    for l in &level_reports {
        residuals.insert(format!("spectrum_deviation_{}", l.level.n), l.spectrum_deviation.coarse);
        residuals.insert(format!("eigen_residual_{}", l.level.n), l.eigen_residual.coarse);
    }

    let mut pass = BTreeMap::new();
    pass.insert("conjugation".to_string(), conjugation.pass);
    pass.insert("pseudo_hermiticity".to_string(), pseudo.pass);
    pass.insert("eta_orthogonality".to_string(), gram <= tol.gram);
    pass.insert("numeric_orthogonality".to_string(), numeric_orth <= 1e-8);
    pass.insert("mapped_eta_orthogonality".to_string(), mapped_orth <= tol.gram);
    for l in &level_reports {
        if l.gated {
            pass.insert(format!("spectrum_{}", l.level.n), l.spectrum_deviation.coarse <= tol.spectrum);
            pass.insert(format!("spectrum_convergence_{}", l.level.n), l.spectrum_deviation.pass);
            pass.insert(format!("eigen_residual_{}", l.level.n), l.eigen_residual.pass);
        }
    }
    let all_pass = pass.values().all(|&b| b);

    Ok(VerificationReport {
        family: d.family,
        grid: *g,
        grid_fine: gf,
        tolerances: *tol,
        hermitian_limit: p.is_hermitian(),
        conjugation,
        pseudo_hermiticity: pseudo,
        levels: level_reports,
        eta_gram_offdiagonal: gram,
        numeric_orthogonality: numeric_orth,
        mapped_eta_orthogonality: mapped_orth,
        residuals,
        pass,
        all_pass,
    })
}
