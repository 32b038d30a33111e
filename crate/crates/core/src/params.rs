//! Swanson couplings (α, β) and every quantity derived from them.
//!
//! With s = 1 − α − β and k = (1 − 4αβ)/s² the Hermitian partner is
//! h = −d²/dx² + k W² − W'/s, and E = s ε. The gauge exponent is
//! μ = (α − β)/s.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::superpotential::{Family, Superpotential};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SwansonParams {
    pub alpha: f64,
    pub beta: f64,
}

impl SwansonParams {
    pub fn new(alpha: f64, beta: f64) -> Self {
        SwansonParams { alpha, beta }
    }

    /// 1 − α − β, the ratio E/ε.
    pub fn scale(&self) -> f64 {
        1.0 - self.alpha - self.beta
    }

    pub fn is_hermitian(&self) -> bool {
        self.alpha == self.beta
    }
}

/// μ = (α − β)/(1 − α − β).
pub fn derive_mu(p: &SwansonParams) -> Result<f64> {
    let s = p.scale();
    if s == 0.0 {
        return Err(Error::SingularGauge);
    }
    Ok((p.alpha - p.beta) / s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Constraint {
    SumBelowOne,
    ProductBelowQuarter,
    AlphaBelowBeta,
    /// A₁ > (1 − α − β)/(1 − 4αβ), equivalently σ > 0.
    Rm1Strength,
    /// B₂ < A₂².
    Rm2Ratio,
    /// |μ₂| > |μ₁| for the hyperbolic gauge factor.
    Rm2GaugeOrder,
    /// b < a² for the hyperbolic partner potential.
    Rm2PartnerRatio,
}

impl Constraint {
    pub const ALL: [Constraint; 7] = [
        Constraint::SumBelowOne,
        Constraint::ProductBelowQuarter,
        Constraint::AlphaBelowBeta,
        Constraint::Rm1Strength,
        Constraint::Rm2Ratio,
        Constraint::Rm2GaugeOrder,
        Constraint::Rm2PartnerRatio,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Constraint::SumBelowOne => "alpha + beta < 1",
            Constraint::ProductBelowQuarter => "4 alpha beta < 1",
            Constraint::AlphaBelowBeta => "alpha < beta",
            Constraint::Rm1Strength => "A1 > (1 - alpha - beta)/(1 - 4 alpha beta)",
            Constraint::Rm2Ratio => "B2 < A2^2",
            Constraint::Rm2GaugeOrder => "|mu2| > |mu1|",
            Constraint::Rm2PartnerRatio => "b < a^2",
        }
    }

    /// Bit used in scan rasters.
    pub fn bit(self) -> u32 {
        1 << Constraint::ALL.iter().position(|&c| c == self).unwrap()
    }

    pub fn applies_to(self, family: Family) -> bool {
        match self {
            Constraint::SumBelowOne | Constraint::ProductBelowQuarter => true,
            Constraint::AlphaBelowBeta => family != Family::Harmonic,
            Constraint::Rm1Strength => family == Family::Rm1Trig,
            Constraint::Rm2Ratio | Constraint::Rm2GaugeOrder | Constraint::Rm2PartnerRatio => {
                family == Family::Rm2Hyp
            }
        }
    }
}

/// Pass/fail per applicable constraint, in [`Constraint::ALL`] order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConstraintFlags(pub Vec<(Constraint, bool)>);

impl ConstraintFlags {
    pub fn admissible(&self) -> bool {
        self.0.iter().all(|&(_, ok)| ok)
    }

    pub fn get(&self, c: Constraint) -> Option<bool> {
        self.0.iter().find(|(k, _)| *k == c).map(|&(_, v)| v)
    }

    pub fn failed(&self) -> Vec<Constraint> {
        self.0.iter().filter(|(_, ok)| !ok).map(|&(c, _)| c).collect()
    }

    /// Bits of the constraints that pass.
    pub fn pass_mask(&self) -> u32 {
        self.0
            .iter()
            .filter(|(_, ok)| *ok)
            .fold(0, |m, &(c, _)| m | c.bit())
    }
}

impl Serialize for ConstraintFlags {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = ser.serialize_map(Some(self.0.len()))?;
        for (c, ok) in &self.0 {
            map.serialize_entry(c.name(), ok)?;
        }
        map.end()
    }
}

/// Evaluates every constraint that applies to the family. Never fails, so
/// parameter scans can map infeasible regions.
pub fn check_constraints(p: &SwansonParams, sp: &Superpotential) -> ConstraintFlags {
    let (alpha, beta) = (p.alpha, p.beta);
    let s = p.scale();
    let q = 1.0 - 4.0 * alpha * beta;
    let family = sp.family();
    let mu = if s != 0.0 { (alpha - beta) / s } else { f64::NAN };

    let mut flags = Vec::new();
    for c in Constraint::ALL {
        if !c.applies_to(family) {
            continue;
        }
        let ok = match c {
            Constraint::SumBelowOne => alpha + beta < 1.0,
            Constraint::ProductBelowQuarter => 4.0 * alpha * beta < 1.0,
            Constraint::AlphaBelowBeta => alpha < beta,
            Constraint::Rm1Strength => {
                let (a1, _) = sp.params();
                q > 0.0 && a1 > s / q
            }
            Constraint::Rm2Ratio => {
                let (a2, b2) = sp.params();
                b2 < a2 * a2
            }
            Constraint::Rm2GaugeOrder => {
                let (a2, b2) = sp.params();
                (a2 * mu).abs() > (b2 / a2 * mu).abs()
            }
            Constraint::Rm2PartnerRatio => {
                let (a2, b2) = sp.params();
                if s == 0.0 {
                    false
                } else {
                    let chi = (a2 * a2 * q + a2 * s) / (s * s);
                    let a = -0.5 + 0.5 * (1.0 + 4.0 * chi).sqrt();
                    let b = b2 * q / (s * s);
                    a > 0.0 && b < a * a
                }
            }
        };
        flags.push((c, ok));
    }
    ConstraintFlags(flags)
}

/// Transformation and partner-potential parameters of one model.
///
/// `strength` is σ (RM-I), χ (RM-II) or ω̃² (harmonic); `cap_a`/`cap_b`
/// are A, B (RM-I) or a, b (RM-II) and zero for the harmonic family, where
/// `mu2` is unused as well. `offset` is the additive constant of the partner
/// potential and `coupling` is k = (1 − 4αβ)/(1 − α − β)².
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DerivedParams {
    pub family: Family,
    pub alpha: f64,
    pub beta: f64,
    pub mu: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub strength: f64,
    pub cap_a: f64,
    pub cap_b: f64,
    pub scale: f64,
    pub coupling: f64,
    pub offset: f64,
    pub constraint_flags: ConstraintFlags,
}

impl DerivedParams {
    pub fn admissible(&self) -> bool {
        self.constraint_flags.admissible()
    }

    /// ω̃ of the harmonic family.
    pub fn omega_tilde(&self) -> f64 {
        self.strength.sqrt()
    }
}

fn global_checks(p: &SwansonParams) -> Result<(f64, f64)> {
    let s = p.scale();
    if s == 0.0 {
        return Err(Error::SingularGauge);
    }
    let q = 1.0 - 4.0 * p.alpha * p.beta;
    if q <= 0.0 {
        return Err(Error::Constraint(Constraint::ProductBelowQuarter.name().into()));
    }
    if s < 0.0 {
        return Err(Error::Constraint(Constraint::SumBelowOne.name().into()));
    }
    Ok((s, q))
}

fn family_mismatch(expected: Family, sp: &Superpotential) -> Error {
    Error::FamilyMismatch {
        expected: expected.name(),
        got: sp.family().name(),
    }
}

pub fn derive_rm1(p: &SwansonParams, sp: &Superpotential) -> Result<DerivedParams> {
    let Superpotential::Rm1Trig { a1, b1 } = *sp else {
        return Err(family_mismatch(Family::Rm1Trig, sp));
    };
    let (s, q) = global_checks(p)?;
    let mu = (p.alpha - p.beta) / s;
    let k = q / (s * s);
    let sigma = (a1 * a1 * q - a1 * s) / (s * s);
    if sigma <= 0.0 {
        return Err(Error::NoBoundStates(sigma));
    }
    Ok(DerivedParams {
        family: Family::Rm1Trig,
        alpha: p.alpha,
        beta: p.beta,
        mu,
        mu1: b1 / a1 * mu,
        mu2: -a1 * mu,
        strength: sigma,
        cap_a: 0.5 + 0.5 * (1.0 + 4.0 * sigma).sqrt(),
        cap_b: b1 * k,
        scale: s,
        coupling: k,
        offset: -(a1 * a1 - b1 * b1 / (a1 * a1)) * k,
        constraint_flags: check_constraints(p, sp),
    })
}

pub fn derive_rm2(p: &SwansonParams, sp: &Superpotential) -> Result<DerivedParams> {
    let Superpotential::Rm2Hyp { a2, b2 } = *sp else {
        return Err(family_mismatch(Family::Rm2Hyp, sp));
    };
    let (s, q) = global_checks(p)?;
    let mu = (p.alpha - p.beta) / s;
    let k = q / (s * s);
    let chi = (a2 * a2 * q + a2 * s) / (s * s);
    let a = -0.5 + 0.5 * (1.0 + 4.0 * chi).sqrt();
    let b = b2 * k;
    if b >= a * a {
        return Err(Error::Constraint(format!(
            "{} (b = {b}, a^2 = {})",
            Constraint::Rm2PartnerRatio.name(),
            a * a
        )));
    }
    Ok(DerivedParams {
        family: Family::Rm2Hyp,
        alpha: p.alpha,
        beta: p.beta,
        mu,
        mu1: b2 / a2 * mu,
        mu2: a2 * mu,
        strength: chi,
        cap_a: a,
        cap_b: b,
        scale: s,
        coupling: k,
        offset: (a2 * a2 + b2 * b2 / (a2 * a2)) * k,
        constraint_flags: check_constraints(p, sp),
    })
}

pub fn derive_harmonic(p: &SwansonParams) -> Result<DerivedParams> {
    let s = p.scale();
    if s == 0.0 {
        return Err(Error::SingularGauge);
    }
    let q = 1.0 - 4.0 * p.alpha * p.beta;
    if q <= 0.0 {
        return Err(Error::ComplexFrequency);
    }
    if s < 0.0 {
        return Err(Error::Constraint(Constraint::SumBelowOne.name().into()));
    }
    let omega = q.sqrt() / s;
    Ok(DerivedParams {
        family: Family::Harmonic,
        alpha: p.alpha,
        beta: p.beta,
        mu: (p.alpha - p.beta) / s,
        mu1: 0.0,
        mu2: 0.0,
        strength: omega * omega,
        cap_a: 0.0,
        cap_b: 0.0,
        scale: s,
        coupling: q / (s * s),
        offset: -1.0 / s,
        constraint_flags: check_constraints(p, &Superpotential::Harmonic),
    })
}

/// Dispatches on the superpotential family.
pub fn derive(p: &SwansonParams, sp: &Superpotential) -> Result<DerivedParams> {
    match sp.family() {
        Family::Rm1Trig => derive_rm1(p, sp),
        Family::Rm2Hyp => derive_rm2(p, sp),
        Family::Harmonic => derive_harmonic(p),
    }
}
