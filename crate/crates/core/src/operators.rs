//! Second-order finite-difference matrices of h, H and H† on uniform
//! Dirichlet grids, the diagonal gauge ρ and metric η, and the probe
//! residuals of the identities ρHρ⁻¹ = (1 − α − β)h and Hᵀη = ηH.

use std::f64::consts::PI;

use serde::Serialize;

use crate::analytic::{rm2_wavefunction, Picture};
use crate::error::{Error, Result};
use crate::params::{DerivedParams, SwansonParams};
use crate::superpotential::{Family, Superpotential, MAX_LOG};

/// Half-width used for the harmonic family unless overridden.
pub const HARMONIC_HALF_WIDTH: f64 = 10.0;
/// First RM-II half-width tried by [`rm2_default_half_width`].
pub const RM2_START_HALF_WIDTH: f64 = 12.0;
/// Relative size of the ground state at ±L required by the RM-II default.
pub const RM2_TAIL_TOLERANCE: f64 = 1e-12;
/// Number of fixed probe vectors.
pub const PROBE_COUNT: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub n_interior: usize,
    pub h_step: f64,
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, n_interior: usize) -> Result<Self> {
        if n_interior == 0 {
            return Err(Error::Grid("at least one interior node is needed".into()));
        }
        if !(x_min.is_finite() && x_max.is_finite() && x_min < x_max) {
            return Err(Error::Grid(format!("bad interval [{x_min}, {x_max}]")));
        }
        Ok(GridSpec {
            x_min,
            x_max,
            n_interior,
            h_step: (x_max - x_min) / (n_interior + 1) as f64,
        })
    }

    /// (0, π) for RM-I, (−L, L) otherwise.
    pub fn for_family(family: Family, n_interior: usize, half_width: f64) -> Result<Self> {
        match family {
            Family::Rm1Trig => GridSpec::new(0.0, PI, n_interior),
            _ => GridSpec::new(-half_width, half_width, n_interior),
        }
    }

    pub fn node(&self, i: usize) -> f64 {
        self.x_min + (i + 1) as f64 * self.h_step
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n_interior).map(|i| self.node(i)).collect()
    }

    /// N → 2N + 1, which halves the step and keeps every old node.
    pub fn doubled(&self) -> Self {
        GridSpec::new(self.x_min, self.x_max, 2 * self.n_interior + 1).expect("valid grid stays valid")
    }

    pub fn check_family(&self, family: Family) -> Result<()> {
        let ok = match family {
            Family::Rm1Trig => self.x_min == 0.0 && self.x_max == PI,
            _ => self.x_min == -self.x_max,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Grid(format!(
                "[{}, {}] does not fit the {} domain",
                self.x_min,
                self.x_max,
                family.name()
            )))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TridiagonalOperator {
    pub sub: Vec<f64>,
    pub diag: Vec<f64>,
    pub sup: Vec<f64>,
    pub symmetric: bool,
}

impl TridiagonalOperator {
    pub fn new(sub: Vec<f64>, diag: Vec<f64>, sup: Vec<f64>) -> Result<Self> {
        let n = diag.len();
        let off = n.saturating_sub(1);
        if sub.len() != off || sup.len() != off {
            return Err(Error::Dimension {
                left: sub.len().max(sup.len()),
                right: off,
            });
        }
        let symmetric = sub == sup;
        Ok(TridiagonalOperator {
            sub,
            diag,
            sup,
            symmetric,
        })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn transpose(&self) -> Self {
        TridiagonalOperator {
            sub: self.sup.clone(),
            diag: self.diag.clone(),
            sup: self.sub.clone(),
            symmetric: self.symmetric,
        }
    }

    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        let n = self.dim();
        if v.len() != n {
            return Err(Error::Dimension {
                left: n,
                right: v.len(),
            });
        }
        Ok((0..n)
            .map(|i| {
                let mut y = self.diag[i] * v[i];
                if i > 0 {
                    y += self.sub[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    y += self.sup[i] * v[i + 1];
                }
                y
            })
            .collect())
    }

    /// Dense row-major copy, for small test matrices.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        let mut m = vec![vec![0.0; n]; n];
        for i in 0..n {
            m[i][i] = self.diag[i];
            if i + 1 < n {
                m[i][i + 1] = self.sup[i];
                m[i + 1][i] = self.sub[i];
            }
        }
        m
    }
}

/// Positive diagonal matrix stored through its logarithms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagonalOperator {
    pub log_entries: Vec<f64>,
}

impl DiagonalOperator {
    pub fn from_logs(log_entries: Vec<f64>) -> Result<Self> {
        if let Some((index, &l)) = log_entries
            .iter()
            .enumerate()
            .find(|(_, l)| !l.is_finite() || l.abs() > MAX_LOG)
        {
            return Err(Error::ExponentOverflow { index, log_value: l });
        }
        Ok(DiagonalOperator { log_entries })
    }

    pub fn identity(n: usize) -> Self {
        DiagonalOperator {
            log_entries: vec![0.0; n],
        }
    }

    pub fn dim(&self) -> usize {
        self.log_entries.len()
    }

    pub fn entries(&self) -> Vec<f64> {
        self.log_entries.iter().map(|l| l.exp()).collect()
    }

    pub fn inverse(&self) -> Self {
        DiagonalOperator {
            log_entries: self.log_entries.iter().map(|l| -l).collect(),
        }
    }

    /// Entrywise square, exact in log space.
    pub fn square(&self) -> Result<Self> {
        DiagonalOperator::from_logs(self.log_entries.iter().map(|l| 2.0 * l).collect())
    }

    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.dim() {
            return Err(Error::Dimension {
                left: self.dim(),
                right: v.len(),
            });
        }
        Ok(v.iter().zip(&self.log_entries).map(|(x, l)| x * l.exp()).collect())
    }
}

/// Partner potential kW² − W′/(1 − α − β) with k = (1 − 4αβ)/(1 − α − β)².
pub fn potential_v(d: &DerivedParams, sp: &Superpotential, x: f64) -> Result<f64> {
    let w = sp.eval_w(x)?;
    Ok(d.coupling * w * w - sp.eval_w_prime(x)? / d.scale)
}

/// The same potential in its family form: σcsc²x + 2Bcot x + c,
/// −χsech²x + 2b tanh x + c, or ω̃²x² − 1/(1 − α − β).
pub fn potential_v_special(d: &DerivedParams, sp: &Superpotential, x: f64) -> Result<f64> {
    sp.eval_w(x)?;
    Ok(match d.family {
        Family::Rm1Trig => {
            let s = x.sin();
            d.strength / (s * s) + 2.0 * d.cap_b / x.tan() + d.offset
        }
        Family::Rm2Hyp => {
            let c = x.cosh();
            -d.strength / (c * c) + 2.0 * d.cap_b * x.tanh() + d.offset
        }
        Family::Harmonic => d.strength * x * x + d.offset,
    })
}

/// Diagonal of H before the kinetic term: (1+α+β)W² − (1−α+β)W′.
pub fn swanson_potential(p: &SwansonParams, sp: &Superpotential, x: f64) -> Result<f64> {
    let w = sp.eval_w(x)?;
    Ok((1.0 + p.alpha + p.beta) * w * w - (1.0 - p.alpha + p.beta) * sp.eval_w_prime(x)?)
}

/// First-derivative coefficient 2(α − β)W of H.
pub fn swanson_drift(p: &SwansonParams, sp: &Superpotential, x: f64) -> Result<f64> {
    Ok(2.0 * (p.alpha - p.beta) * sp.eval_w(x)?)
}

/// Nodal pieces of the H stencil, kept apart so identities can be checked
/// without forming 1/h² differences.
#[derive(Debug, Clone, PartialEq)]
pub struct SwansonStencil {
    pub grid: GridSpec,
    pub scale: f64,
    pub drift: Vec<f64>,
    pub potential: Vec<f64>,
}

impl SwansonStencil {
    pub fn new(p: &SwansonParams, sp: &Superpotential, g: &GridSpec) -> Result<Self> {
        let scale = p.scale();
        if scale == 0.0 {
            return Err(Error::SingularGauge);
        }
        g.check_family(sp.family())?;
        let nodes = g.nodes();
        Ok(SwansonStencil {
            grid: *g,
            scale,
            drift: nodes.iter().map(|&x| swanson_drift(p, sp, x)).collect::<Result<_>>()?,
            potential: nodes.iter().map(|&x| swanson_potential(p, sp, x)).collect::<Result<_>>()?,
        })
    }

    pub fn assemble(&self) -> TridiagonalOperator {
        let h = self.grid.h_step;
        let n = self.grid.n_interior;
        let kin = self.scale / (h * h);
        let diag = self.potential.iter().map(|v| 2.0 * kin + v).collect();
        let sup = (0..n - 1).map(|i| -kin + self.drift[i] / (2.0 * h)).collect();
        let sub = (0..n - 1).map(|i| -kin - self.drift[i + 1] / (2.0 * h)).collect();
        TridiagonalOperator::new(sub, diag, sup).expect("lengths match by construction")
    }
}

pub fn partner_potential_nodes(d: &DerivedParams, sp: &Superpotential, g: &GridSpec) -> Result<Vec<f64>> {
    g.check_family(sp.family())?;
    g.nodes().iter().map(|&x| potential_v(d, sp, x)).collect()
}

/// −d²/dx² + V with Dirichlet ends.
pub fn build_h(d: &DerivedParams, sp: &Superpotential, g: &GridSpec) -> Result<TridiagonalOperator> {
    if d.family != sp.family() {
        return Err(Error::FamilyMismatch {
            expected: d.family.name(),
            got: sp.family().name(),
        });
    }
    let h2 = g.h_step * g.h_step;
    let diag = partner_potential_nodes(d, sp, g)?
        .into_iter()
        .map(|v| 2.0 / h2 + v)
        .collect();
    let off = vec![-1.0 / h2; g.n_interior - 1];
    TridiagonalOperator::new(off.clone(), diag, off)
}

/// −(1−α−β)d²/dx² + 2(α−β)W d/dx + (1+α+β)W² − (1−α+β)W′.
pub fn build_swanson(p: &SwansonParams, sp: &Superpotential, g: &GridSpec) -> Result<TridiagonalOperator> {
    Ok(SwansonStencil::new(p, sp, g)?.assemble())
}

/// Transpose of [`build_swanson`].
pub fn build_swanson_dagger(
    p: &SwansonParams,
    sp: &Superpotential,
    g: &GridSpec,
) -> Result<TridiagonalOperator> {
    Ok(build_swanson(p, sp, g)?.transpose())
}

/// ln ρ = −μΩ at the interior nodes.
pub fn log_rho_nodes(p: &SwansonParams, sp: &Superpotential, g: &GridSpec) -> Result<Vec<f64>> {
    let s = p.scale();
    if s == 0.0 {
        return Err(Error::SingularGauge);
    }
    g.check_family(sp.family())?;
    let mu = (p.alpha - p.beta) / s;
    g.nodes().iter().map(|&x| Ok(-mu * sp.antiderivative(x)?)).collect()
}

/// ρ = e^{−μΩ}.
pub fn build_rho(p: &SwansonParams, sp: &Superpotential, g: &GridSpec) -> Result<DiagonalOperator> {
    DiagonalOperator::from_logs(log_rho_nodes(p, sp, g)?)
}

/// η = ρ².
pub fn build_eta(p: &SwansonParams, sp: &Superpotential, g: &GridSpec) -> Result<DiagonalOperator> {
    build_rho(p, sp, g)?.square()
}

/// sin(mπt)·sin⁴(πt) with t the normalized position, m = 1..=5. The taper
/// keeps the probes inside the region where the gauge factor is regular.
pub fn probe_vectors(g: &GridSpec) -> Vec<Vec<f64>> {
    let width = g.x_max - g.x_min;
    (1..=PROBE_COUNT)
        .map(|m| {
            g.nodes()
                .iter()
                .map(|&x| {
                    let t = PI * (x - g.x_min) / width;
                    (m as f64 * t).sin() * t.sin().powi(4)
                })
                .collect()
        })
        .collect()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|t| t * t).sum::<f64>().sqrt()
}

/// Tridiagonal matrix applied to v, from (sub, diag, sup) slices.
fn apply_parts(sub: &[f64], diag: &[f64], sup: &[f64], v: &[f64]) -> Vec<f64> {
    let n = diag.len();
    (0..n)
        .map(|i| {
            let mut y = diag[i] * v[i];
            if i > 0 {
                y += sub[i - 1] * v[i - 1];
            }
            if i + 1 < n {
                y += sup[i] * v[i + 1];
            }
            y
        })
        .collect()
}

/// Largest ‖(ρHρ⁻¹/(1−α−β) − h)v‖/‖v‖ over the probes. The difference
/// matrix is formed entrywise from the stencil pieces, so the Hermitian
/// limit is free of 1/h² cancellation.
pub fn conjugation_residual(p: &SwansonParams, d: &DerivedParams, sp: &Superpotential, g: &GridSpec) -> Result<f64> {
    let st = SwansonStencil::new(p, sp, g)?;
    let v = partner_potential_nodes(d, sp, g)?;
    let l = log_rho_nodes(p, sp, g)?;
    let (h, s) = (g.h_step, st.scale);
    let n = g.n_interior;
    let diag: Vec<f64> = (0..n).map(|i| st.potential[i] / s - v[i]).collect();
    let sup: Vec<f64> = (0..n - 1)
        .map(|i| {
            let dl = l[i] - l[i + 1];
            -dl.exp_m1() / (h * h) + dl.exp() * st.drift[i] / (2.0 * h * s)
        })
        .collect();
    let sub: Vec<f64> = (0..n - 1)
        .map(|i| {
            let dl = l[i + 1] - l[i];
            -dl.exp_m1() / (h * h) - dl.exp() * st.drift[i + 1] / (2.0 * h * s)
        })
        .collect();
    Ok(max_probe(&sub, &diag, &sup, g))
}

/// Largest ‖ρ⁻¹(Hᵀη − ηH)ρ⁻¹v‖/‖v‖ over the probes, i.e. the
/// antisymmetric part of ρHρ⁻¹. Same identity as Hᵀη = ηH, scaled by the
/// metric so it stays finite where η is huge or tiny.
pub fn pseudo_hermiticity_residual(p: &SwansonParams, sp: &Superpotential, g: &GridSpec) -> Result<f64> {
    let st = SwansonStencil::new(p, sp, g)?;
    let l = log_rho_nodes(p, sp, g)?;
    let h = g.h_step;
    let n = g.n_interior;
    let kin = st.scale / (h * h);
    // M = ρ⁻¹Hᵀρ − ρHρ⁻¹; M[i][i+1] = e^{-Δ}H[i+1][i] − e^{Δ}H[i][i+1], Δ = l_i − l_{i+1}.
    let upper: Vec<f64> = (0..n - 1)
        .map(|i| {
            let dl = l[i] - l[i + 1];
            2.0 * kin * dl.sinh() - ((-dl).exp() * st.drift[i + 1] + dl.exp() * st.drift[i]) / (2.0 * h)
        })
        .collect();
    let lower: Vec<f64> = upper.iter().map(|t| -t).collect();
    let diag = vec![0.0; n];
    Ok(max_probe(&lower, &diag, &upper, g))
}

/// The raw ‖(Hᵀη − ηH)v‖/‖v‖ with assembled matrices; finite only while η
/// stays in range at every node.
pub fn pseudo_hermiticity_residual_raw(p: &SwansonParams, sp: &Superpotential, g: &GridSpec) -> Result<f64> {
    let hm = build_swanson(p, sp, g)?;
    let eta = build_eta(p, sp, g)?.entries();
    let n = g.n_interior;
    let upper: Vec<f64> = (0..n - 1).map(|i| hm.sub[i] * eta[i + 1] - eta[i] * hm.sup[i]).collect();
    let lower: Vec<f64> = upper.iter().map(|t| -t).collect();
    Ok(max_probe(&lower, &vec![0.0; n], &upper, g))
}

fn max_probe(sub: &[f64], diag: &[f64], sup: &[f64], g: &GridSpec) -> f64 {
    probe_vectors(g)
        .iter()
        .map(|v| norm(&apply_parts(sub, diag, sup, v)) / norm(v))
        .fold(0.0, f64::max)
}

/// ‖Hψ − Eψ‖/‖ψ‖.
pub fn eigen_residual(op: &TridiagonalOperator, psi: &[f64], energy: f64) -> Result<f64> {
    let hp = op.apply(psi)?;
    let nrm = norm(psi);
    if nrm == 0.0 {
        return Err(Error::ZeroVector);
    }
    let r: Vec<f64> = hp.iter().zip(psi).map(|(a, b)| a - energy * b).collect();
    Ok(norm(&r) / nrm)
}

/// Smallest L ≥ 12 (unit steps) with |φ₀(±L)| < 1e-12·max|φ₀|.
pub fn rm2_default_half_width(d: &DerivedParams, sp: &Superpotential) -> Result<f64> {
    let phi = |x: f64| rm2_wavefunction(d, sp, 0, Picture::Hermitian, x).map(f64::abs);
    let peak = (-4000..=4000)
        .map(|k| phi(k as f64 * 0.01))
        .try_fold(0.0f64, |m, v| v.map(|v| m.max(v)))?;
    let mut l = RM2_START_HALF_WIDTH;
    while phi(l)?.max(phi(-l)?) >= RM2_TAIL_TOLERANCE * peak {
        l += 1.0;
        if l > 200.0 {
            return Err(Error::Grid("RM-II ground state does not decay".into()));
        }
    }
    Ok(l)
}

/// Default truncation: π-interval for RM-I, the tail rule for RM-II,
/// [`HARMONIC_HALF_WIDTH`] for the oscillator.
pub fn default_half_width(d: &DerivedParams, sp: &Superpotential) -> Result<f64> {
    match d.family {
        Family::Rm1Trig => Ok(PI / 2.0),
        Family::Rm2Hyp => rm2_default_half_width(d, sp),
        Family::Harmonic => Ok(HARMONIC_HALF_WIDTH),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::derive;
    use approx::assert_relative_eq;

    fn t1r1() -> (SwansonParams, Superpotential, DerivedParams) {
        let p = SwansonParams::new(0.25, 0.5);
        let sp = Superpotential::rm1(1.5, 0.125).unwrap();
        (p, sp, derive(&p, &sp).unwrap())
    }

    #[test]
    fn grid_nodes_and_doubling() {
        let g = GridSpec::new(-1.0, 1.0, 3).unwrap();
        assert_eq!(g.nodes(), vec![-0.5, 0.0, 0.5]);
        let g2 = g.doubled();
        assert_eq!(g2.n_interior, 7);
        assert_eq!(g2.h_step, 0.25);
        assert!(GridSpec::new(1.0, 0.0, 3).is_err());
        assert!(GridSpec::new(0.0, 1.0, 0).is_err());
        assert!(g.check_family(Family::Rm1Trig).is_err());
        assert!(GridSpec::for_family(Family::Rm1Trig, 9, 0.0).unwrap().check_family(Family::Rm1Trig).is_ok());
    }

    #[test]
    fn potential_matches_worked_example() {
        let (_, sp, d) = t1r1();
        let v = potential_v(&d, &sp, PI / 2.0).unwrap();
        assert_relative_eq!(v, -107.0 / 18.0, epsilon = 1e-12);
        let (p0, h) = (SwansonParams::new(0.0, 0.0), Superpotential::Harmonic);
        let d0 = derive(&p0, &h).unwrap();
        assert_relative_eq!(potential_v(&d0, &h, 1.0).unwrap(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn swanson_pieces_at_midpoint() {
        let (p, sp, _) = t1r1();
        let x = PI / 2.0;
        // drift 2(α−β)W = (18 cot x + 1)/24
        assert_relative_eq!(swanson_drift(&p, &sp, x).unwrap(), 1.0 / 24.0, epsilon = 1e-15);
        assert_relative_eq!(
            swanson_potential(&p, &sp, x).unwrap(),
            33.0 / 16.0 - 2261.0 / 576.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn hermitian_limit_is_symmetric() {
        let p = SwansonParams::new(0.2, 0.2);
        let sp = Superpotential::rm2(1.5, 0.25).unwrap();
        let g = GridSpec::new(-8.0, 8.0, 101).unwrap();
        let hm = build_swanson(&p, &sp, &g).unwrap();
        assert!(hm.symmetric);
        assert_eq!(build_swanson_dagger(&p, &sp, &g).unwrap(), hm);
        assert!(build_rho(&p, &sp, &g).unwrap().log_entries.iter().all(|&l| l == 0.0));
    }

    #[test]
    fn dagger_is_transpose_and_swap_relation() {
        let (p, sp, _) = t1r1();
        let g = GridSpec::for_family(Family::Rm1Trig, 50, 0.0).unwrap();
        let hm = build_swanson(&p, &sp, &g).unwrap();
        let hd = build_swanson_dagger(&p, &sp, &g).unwrap();
        assert_eq!(hd.transpose(), hm);
        // H(β, α) vs H†(α, β): the drift is sampled at the row node in one and
        // the column node in the other, so off-diagonals differ by
        // (c_{i+1} − c_i)/(2h) in both bands; diagonals differ by −2(α − β)W′.
        let swapped = build_swanson(&SwansonParams::new(p.beta, p.alpha), &sp, &g).unwrap();
        let c: Vec<f64> = g.nodes().iter().map(|&x| swanson_drift(&p, &sp, x).unwrap()).collect();
        for i in 0..g.n_interior - 1 {
            let jump = (c[i + 1] - c[i]) / (2.0 * g.h_step);
            assert!((swapped.sup[i] - hd.sup[i] - jump).abs() < 1e-9 * hd.sup[i].abs());
            assert!((swapped.sub[i] - hd.sub[i] - jump).abs() < 1e-9 * hd.sub[i].abs());
        }
        for (i, x) in g.nodes().into_iter().enumerate() {
            let wp = sp.eval_w_prime(x).unwrap();
            let expected = -2.0 * (p.alpha - p.beta) * wp;
            assert!((swapped.diag[i] - hd.diag[i] - expected).abs() < 1e-9 * hd.diag[i].abs());
        }
    }

    #[test]
    fn eta_is_rho_squared() {
        let (p, sp, _) = t1r1();
        let g = GridSpec::for_family(Family::Rm1Trig, 99, 0.0).unwrap();
        let rho = build_rho(&p, &sp, &g).unwrap();
        let eta = build_eta(&p, &sp, &g).unwrap();
        for (r, e) in rho.entries().iter().zip(eta.entries()) {
            assert_relative_eq!(r * r, e, max_relative = 1e-14);
        }
        // ψ = e^{x/12} sin^{3/2}x φ
        for (x, l) in g.nodes().iter().zip(&rho.log_entries) {
            let inv = (x / 12.0).exp() * x.sin().powf(1.5);
            assert_relative_eq!((-l).exp(), inv, max_relative = 1e-12);
        }
    }

    #[test]
    fn overflow_names_node() {
        let err = DiagonalOperator::from_logs(vec![0.0, 800.0]).unwrap_err();
        assert_eq!(err, Error::ExponentOverflow { index: 1, log_value: 800.0 });
    }

    #[test]
    fn box_operator_is_symmetric() {
        let t = TridiagonalOperator::new(vec![-1.0; 2], vec![2.0; 3], vec![-1.0; 2]).unwrap();
        assert!(t.symmetric);
        assert_eq!(t.apply(&[1.0, 1.0, 1.0]).unwrap(), vec![1.0, 0.0, 1.0]);
        assert!(t.apply(&[1.0]).is_err());
        assert!(TridiagonalOperator::new(vec![1.0], vec![1.0; 3], vec![1.0; 2]).is_err());
    }

    #[test]
    fn residuals_vanish_in_hermitian_limit() {
        let p = SwansonParams::new(0.2, 0.2);
        let sp = Superpotential::rm1(1.5, 0.125).unwrap();
        let d = derive(&p, &sp).unwrap();
        let g = GridSpec::for_family(Family::Rm1Trig, 999, 0.0).unwrap();
        assert!(conjugation_residual(&p, &d, &sp, &g).unwrap() <= 1e-12);
        assert_eq!(pseudo_hermiticity_residual(&p, &sp, &g).unwrap(), 0.0);
    }

    #[test]
    fn conjugation_converges_quadratically() {
        let (p, sp, d) = t1r1();
        let g = GridSpec::for_family(Family::Rm1Trig, 199, 0.0).unwrap();
        let r1 = conjugation_residual(&p, &d, &sp, &g).unwrap();
        let r2 = conjugation_residual(&p, &d, &sp, &g.doubled()).unwrap();
        assert!((3.2..=4.8).contains(&(r1 / r2)), "ratio {}", r1 / r2);
    }

    #[test]
    fn raw_and_scaled_pseudo_hermiticity_agree_in_hermitian_case() {
        let p = SwansonParams::new(0.1, 0.1);
        let g = GridSpec::new(-5.0, 5.0, 99).unwrap();
        assert_eq!(pseudo_hermiticity_residual_raw(&p, &Superpotential::Harmonic, &g).unwrap(), 0.0);
    }

    #[test]
    fn eigen_residual_rejects_zero() {
        let t = TridiagonalOperator::new(vec![], vec![3.0], vec![]).unwrap();
        assert_eq!(eigen_residual(&t, &[2.0], 3.0).unwrap(), 0.0);
        assert!(eigen_residual(&t, &[0.0], 3.0).is_err());
    }

    #[test]
    fn rm2_half_width_grows_until_tail_is_small() {
        let p = SwansonParams::new(0.25, 0.5);
        let sp = Superpotential::rm2(1.5, 0.25).unwrap();
        let d = derive(&p, &sp).unwrap();
        let l = rm2_default_half_width(&d, &sp).unwrap();
        assert!(l >= RM2_START_HALF_WIDTH);
        let phi = |x| rm2_wavefunction(&d, &sp, 0, Picture::Hermitian, x).unwrap().abs();
        assert!(phi(-l) < 1e-12 * phi(0.0) * 10.0);
    }
}
