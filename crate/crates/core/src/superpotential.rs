//! Superpotential families W(x) with closed-form derivative and antiderivative.
//!
//! | family | W | W' | Ω = ∫W |
//! |---|---|---|---|
//! | trigonometric Rosen-Morse I on (0, π) | −A₁cot x − B₁/A₁ | A₁csc²x | −A₁ ln sin x − (B₁/A₁)x |
//! | hyperbolic Rosen-Morse II on ℝ | A₂tanh x + B₂/A₂ | A₂sech²x | A₂ ln cosh x + (B₂/A₂)x |
//! | harmonic on ℝ | x | 1 | x²/2 |
//!
//! The integration constant of Ω only rescales the gauge factor, so it is
//! fixed by the table above and never exposed.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Distance kept from a finite endpoint when testing domain membership.
pub const DOMAIN_GUARD: f64 = 1e-12;

/// Largest |log| that still exponentiates to a finite, normal f64.
pub const MAX_LOG: f64 = 709.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    Rm1Trig,
    Rm2Hyp,
    Harmonic,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Rm1Trig => "rm1-trig",
            Family::Rm2Hyp => "rm2-hyp",
            Family::Harmonic => "harmonic",
        }
    }
}

/// Open interval; infinite ends are allowed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        x.is_finite() && x > self.lo + DOMAIN_GUARD && x < self.hi - DOMAIN_GUARD
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    /// Reflection that maps the interval onto itself.
    pub fn reflect(&self, x: f64) -> f64 {
        if self.is_bounded() {
            self.lo + self.hi - x
        } else {
            -x
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Superpotential {
    Rm1Trig { a1: f64, b1: f64 },
    Rm2Hyp { a2: f64, b2: f64 },
    Harmonic,
}

impl Superpotential {
    pub fn rm1(a1: f64, b1: f64) -> Result<Self> {
        if !(a1.is_finite() && b1.is_finite()) || a1 <= 0.0 || b1 < 0.0 {
            return Err(Error::InvalidSuperpotential(format!(
                "RM-I needs A1 > 0 and B1 >= 0, got A1 = {a1}, B1 = {b1}"
            )));
        }
        Ok(Superpotential::Rm1Trig { a1, b1 })
    }

    pub fn rm2(a2: f64, b2: f64) -> Result<Self> {
        if !(a2.is_finite() && b2.is_finite()) || a2 <= 0.0 || b2 < 0.0 {
            return Err(Error::InvalidSuperpotential(format!(
                "RM-II needs A2 > 0 and B2 >= 0, got A2 = {a2}, B2 = {b2}"
            )));
        }
        if b2 >= a2 * a2 {
            return Err(Error::InvalidSuperpotential(format!(
                "RM-II needs B2 < A2^2, got B2 = {b2}, A2^2 = {}",
                a2 * a2
            )));
        }
        Ok(Superpotential::Rm2Hyp { a2, b2 })
    }

    pub fn harmonic() -> Self {
        Superpotential::Harmonic
    }

    pub fn family(&self) -> Family {
        match self {
            Superpotential::Rm1Trig { .. } => Family::Rm1Trig,
            Superpotential::Rm2Hyp { .. } => Family::Rm2Hyp,
            Superpotential::Harmonic => Family::Harmonic,
        }
    }

    /// (p1, p2) = (A, B) of the family; zero for the harmonic case.
    pub fn params(&self) -> (f64, f64) {
        match *self {
            Superpotential::Rm1Trig { a1, b1 } => (a1, b1),
            Superpotential::Rm2Hyp { a2, b2 } => (a2, b2),
            Superpotential::Harmonic => (0.0, 0.0),
        }
    }

    pub fn domain(&self) -> Interval {
        match self {
            Superpotential::Rm1Trig { .. } => Interval { lo: 0.0, hi: PI },
            _ => Interval {
                lo: f64::NEG_INFINITY,
                hi: f64::INFINITY,
            },
        }
    }

    fn check(&self, x: f64) -> Result<()> {
        let d = self.domain();
        if d.contains(x) {
            Ok(())
        } else {
            Err(Error::Domain {
                x,
                lo: d.lo,
                hi: d.hi,
            })
        }
    }

    pub fn eval_w(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        Ok(match *self {
            Superpotential::Rm1Trig { a1, b1 } => -a1 / x.tan() - b1 / a1,
            Superpotential::Rm2Hyp { a2, b2 } => a2 * x.tanh() + b2 / a2,
            Superpotential::Harmonic => x,
        })
    }

    pub fn eval_w_prime(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        Ok(match *self {
            Superpotential::Rm1Trig { a1, .. } => {
                let s = x.sin();
                a1 / (s * s)
            }
            Superpotential::Rm2Hyp { a2, .. } => {
                let c = x.cosh();
                a2 / (c * c)
            }
            Superpotential::Harmonic => 1.0,
        })
    }

    pub fn antiderivative(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        Ok(match *self {
            Superpotential::Rm1Trig { a1, b1 } => -a1 * x.sin().ln() - (b1 / a1) * x,
            Superpotential::Rm2Hyp { a2, b2 } => a2 * ln_cosh(x) + (b2 / a2) * x,
            Superpotential::Harmonic => 0.5 * x * x,
        })
    }

    /// f₀ = exp(−Ω), the nodeless ground state of 𝒜†𝒜.
    pub fn ground_state_generator(&self, x: f64) -> Result<f64> {
        let omega = self.antiderivative(x)?;
        if omega.abs() > MAX_LOG {
            return Err(Error::ExponentOverflow {
                index: 0,
                log_value: -omega,
            });
        }
        Ok((-omega).exp())
    }

    /// True iff W is odd under the reflection of its domain (x → −x, or
    /// x → π − x on (0, π)).
    pub fn pt_check(&self) -> bool {
        match *self {
            Superpotential::Rm1Trig { b1, .. } => b1 == 0.0,
            Superpotential::Rm2Hyp { b2, .. } => b2 == 0.0,
            Superpotential::Harmonic => true,
        }
    }
}

/// ln cosh x without overflow for large |x|.
pub fn ln_cosh(x: f64) -> f64 {
    let a = x.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}
