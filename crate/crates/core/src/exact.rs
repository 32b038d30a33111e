//! Exact rational evaluation of the derived parameters for rational inputs.
//!
//! A and a are the only irrational quantities; they are returned as a
//! discriminant (1 + 4σ or 1 + 4χ) plus the exact root when that
//! discriminant is a perfect square.

use num_integer::Roots;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

pub type Rational = Ratio<i128>;

pub fn rat(n: i128, d: i128) -> Rational {
    Rational::new(n, d)
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact square root when both reduced numerator and denominator are squares.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let (n, d) = (*r.numer(), *r.denom());
    let (rn, rd) = (n.sqrt(), d.sqrt());
    (rn * rn == n && rd * rd == d).then(|| Rational::new(rn, rd))
}

/// Formats as `p/q`, or `p` for integers.
pub fn display(r: &Rational) -> String {
    if r.is_integer() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactDerived {
    #[serde(serialize_with = "ser_rat")]
    pub sum: Rational,
    #[serde(serialize_with = "ser_rat")]
    pub product4: Rational,
    #[serde(serialize_with = "ser_rat")]
    pub scale: Rational,
    #[serde(serialize_with = "ser_rat")]
    pub mu: Rational,
    #[serde(serialize_with = "ser_rat")]
    pub mu1: Rational,
    #[serde(serialize_with = "ser_rat")]
    pub mu2: Rational,
    /// σ or χ.
    #[serde(serialize_with = "ser_rat")]
    pub strength: Rational,
    /// 1 + 4·strength.
    #[serde(serialize_with = "ser_rat")]
    pub discriminant: Rational,
    /// A or a when the discriminant is a perfect square.
    #[serde(serialize_with = "ser_opt_rat")]
    pub cap_a_exact: Option<Rational>,
    pub cap_a: f64,
    /// B or b.
    #[serde(serialize_with = "ser_rat")]
    pub cap_b: Rational,
}

fn ser_rat<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&display(r))
}

fn ser_opt_rat<S: serde::Serializer>(
    r: &Option<Rational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&display(r)),
        None => s.serialize_none(),
    }
}

struct Common {
    sum: Rational,
    product4: Rational,
    scale: Rational,
    q: Rational,
    mu: Rational,
}

fn common(alpha: Rational, beta: Rational) -> Result<Common> {
    let one = Rational::one();
    let scale = one - alpha - beta;
    if scale.is_zero() {
        return Err(Error::SingularGauge);
    }
    let product4 = Rational::from_integer(4) * alpha * beta;
    Ok(Common {
        sum: alpha + beta,
        product4,
        scale,
        q: one - product4,
        mu: (alpha - beta) / scale,
    })
}

/// σ, A, B, μ₁, μ₂ of the trigonometric family.
pub fn derive_rm1_exact(
    alpha: Rational,
    beta: Rational,
    a1: Rational,
    b1: Rational,
) -> Result<ExactDerived> {
    if !a1.is_positive() {
        return Err(Error::InvalidSuperpotential("A1 must be positive".into()));
    }
    let c = common(alpha, beta)?;
    let s2 = c.scale * c.scale;
    let strength = (a1 * a1 * c.q - a1 * c.scale) / s2;
    let discriminant = Rational::one() + Rational::from_integer(4) * strength;
    let root = rational_sqrt(&discriminant);
    let half = rat(1, 2);
    Ok(ExactDerived {
        sum: c.sum,
        product4: c.product4,
        scale: c.scale,
        mu: c.mu,
        mu1: b1 / a1 * c.mu,
        mu2: -a1 * c.mu,
        strength,
        discriminant,
        cap_a_exact: root.map(|r| half + half * r),
        cap_a: 0.5 + 0.5 * to_f64(&discriminant).sqrt(),
        cap_b: b1 * c.q / s2,
    })
}

/// χ, a, b, μ₁, μ₂ of the hyperbolic family.
pub fn derive_rm2_exact(
    alpha: Rational,
    beta: Rational,
    a2: Rational,
    b2: Rational,
) -> Result<ExactDerived> {
    if !a2.is_positive() {
        return Err(Error::InvalidSuperpotential("A2 must be positive".into()));
    }
    let c = common(alpha, beta)?;
    let s2 = c.scale * c.scale;
    let strength = (a2 * a2 * c.q + a2 * c.scale) / s2;
    let discriminant = Rational::one() + Rational::from_integer(4) * strength;
    let root = rational_sqrt(&discriminant);
    let half = rat(1, 2);
    Ok(ExactDerived {
        sum: c.sum,
        product4: c.product4,
        scale: c.scale,
        mu: c.mu,
        mu1: b2 / a2 * c.mu,
        mu2: a2 * c.mu,
        strength,
        discriminant,
        cap_a_exact: root.map(|r| -half + half * r),
        cap_a: -0.5 + 0.5 * to_f64(&discriminant).sqrt(),
        cap_b: b2 * c.q / s2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_squares() {
        assert_eq!(rational_sqrt(&rat(49, 4)), Some(rat(7, 2)));
        assert_eq!(rational_sqrt(&rat(97, 1)), None);
        assert_eq!(rational_sqrt(&rat(-4, 1)), None);
        assert_eq!(rational_sqrt(&Rational::zero()), Some(Rational::zero()));
    }

    #[test]
    fn table1_row1_is_exact() {
        let d = derive_rm1_exact(rat(1, 4), rat(1, 2), rat(3, 2), rat(1, 8)).unwrap();
        assert_eq!(d.mu1, rat(-1, 12));
        assert_eq!(d.mu2, rat(3, 2));
        assert_eq!(d.strength, rat(12, 1));
        assert_eq!(d.cap_a_exact, Some(rat(4, 1)));
        assert_eq!(d.cap_b, rat(1, 1));
        assert_eq!(d.scale, rat(1, 4));
    }

    #[test]
    fn table1_row4_b_is_24() {
        let d = derive_rm1_exact(rat(1, 3), rat(1, 2), rat(1, 1), rat(2, 1)).unwrap();
        assert_eq!(d.cap_b, rat(24, 1));
        assert_eq!(d.cap_a_exact, Some(rat(3, 1)));
    }

    #[test]
    fn table2_rows() {
        let d = derive_rm2_exact(rat(1, 4), rat(1, 2), rat(3, 2), rat(1, 4)).unwrap();
        assert_eq!(d.strength, rat(24, 1));
        assert_eq!(d.discriminant, rat(97, 1));
        assert_eq!(d.cap_a_exact, None);
        assert_eq!(d.cap_b, rat(2, 1));

        let d = derive_rm2_exact(rat(1, 6), rat(1, 3), rat(3, 2), rat(1, 2)).unwrap();
        assert_eq!(d.cap_b, rat(14, 9));
        assert_eq!(d.scale, rat(1, 2));

        let d = derive_rm2_exact(rat(1, 3), rat(1, 2), rat(1, 2), rat(1, 8)).unwrap();
        assert_eq!(d.cap_a_exact, Some(rat(2, 1)));
        assert_eq!(d.cap_b, rat(3, 2));
    }

    #[test]
    fn singular_gauge() {
        assert_eq!(
            derive_rm1_exact(rat(1, 2), rat(1, 2), rat(1, 1), rat(0, 1)),
            Err(Error::SingularGauge)
        );
    }

    #[test]
    fn display_forms() {
        assert_eq!(display(&rat(-10, 1)), "-10");
        assert_eq!(display(&rat(2, 6)), "1/3");
    }
}
