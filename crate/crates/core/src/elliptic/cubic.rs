use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Relative threshold below which `|D|` counts as numerically zero.
pub const DEGENERACY_THRESHOLD: f64 = 1e-12;

/// `D = −4p³ − 27q²`, evaluated exactly.
pub fn discriminant_exact(p: &BigRational, q: &BigRational) -> BigRational {
    let four = BigRational::from_integer(BigInt::from(4));
    let twenty_seven = BigRational::from_integer(BigInt::from(27));
    -(four * p * p * p) - twenty_seven * q * q
}

/// Exact value of a finite `f64`.
pub(crate) fn exact(x: f64) -> Result<BigRational> {
    BigRational::from_f64(x).ok_or_else(|| Error::Domain(format!("coefficient {x} is not finite")))
}

/// `D = −4p³ − 27q²`, computed exactly from the binary values of `p` and `q`
/// and rounded once. Non-finite input yields NaN.
pub fn discriminant(p: f64, q: f64) -> f64 {
    match (exact(p), exact(q)) {
        (Ok(p), Ok(q)) => discriminant_exact(&p, &q).to_f64().unwrap_or(f64::NAN),
        _ => f64::NAN,
    }
}

/// The Weierstrass cubic `x³ + px + q` of a smooth real curve.
#[derive(Clone, Debug, PartialEq)]
pub struct RealCubic {
    pub p: f64,
    pub q: f64,
    pub discriminant: f64,
    /// Exact sign of the discriminant of the given coefficients.
    pub sign: Ordering,
}

impl RealCubic {
    /// Rejects `|D| < 1e−12 · max(|p|³, q², 1)`.
    pub fn new(p: f64, q: f64) -> Result<Self> {
        let d = discriminant_exact(&exact(p)?, &exact(q)?);
        let value = d.to_f64().unwrap_or(f64::NAN);
        let scale = (p.abs().powi(3)).max(q * q).max(1.0);
        if !(value.abs() >= DEGENERACY_THRESHOLD * scale) {
            return Err(Error::Degenerate { discriminant: value });
        }
        Ok(RealCubic {
            p,
            q,
            discriminant: value,
            sign: d.cmp(&BigRational::zero()),
        })
    }

    /// Coefficients with a discriminant `d` computed by other means (such as
    /// the product formula for `Δ`) that is more accurate than
    /// `−4p³ − 27q²` on the rounded coefficients. `d` must agree with that
    /// formula to within `10⁻¹²·(4|p|³ + 27q²)`; its sign decides the case.
    pub fn with_discriminant(p: f64, q: f64, d: f64) -> Result<Self> {
        let from_coefficients = discriminant_exact(&exact(p)?, &exact(q)?).to_f64().unwrap_or(f64::NAN);
        let mass = 4.0 * p.abs().powi(3) + 27.0 * q * q;
        if !d.is_finite() || !((d - from_coefficients).abs() <= 1e-12 * mass) {
            return Err(Error::Domain(format!(
                "discriminant {d:e} is inconsistent with -4p³ - 27q² = {from_coefficients:e}"
            )));
        }
        let scale = (p.abs().powi(3)).max(q * q).max(1.0);
        if !(d.abs() >= DEGENERACY_THRESHOLD * scale) {
            return Err(Error::Degenerate { discriminant: d });
        }
        Ok(RealCubic {
            p,
            q,
            discriminant: d,
            sign: if d > 0.0 { Ordering::Greater } else { Ordering::Less },
        })
    }

    /// Exact coefficients: only an exactly vanishing discriminant is rejected.
    pub fn from_rational(p: &BigRational, q: &BigRational) -> Result<Self> {
        let d = discriminant_exact(p, q);
        let sign = d.cmp(&BigRational::zero());
        let value = d.to_f64().unwrap_or(f64::NAN);
        if sign == Ordering::Equal {
            return Err(Error::Degenerate { discriminant: 0.0 });
        }
        let (pf, qf) = (p.to_f64(), q.to_f64());
        match (pf, qf) {
            (Some(pf), Some(qf)) if pf.is_finite() && qf.is_finite() => Ok(RealCubic {
                p: pf,
                q: qf,
                discriminant: value,
                sign,
            }),
            _ => Err(Error::Domain("coefficients out of floating-point range".into())),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        (x * x + self.p) * x + self.q
    }

    pub fn derivative(&self, x: f64) -> f64 {
        3.0 * x * x + self.p
    }

    /// Scale-free size `max(|p|^{1/2}, |q|^{1/3})`.
    pub fn scale(&self) -> f64 {
        self.p.abs().sqrt().max(self.q.abs().cbrt())
    }
}

/// Real roots of `x³ + px + q` by sign changes on monotone pieces and
/// bisection. Independent of the discriminant; roots sorted ascending.
pub fn isolate_real_roots(p: f64, q: f64) -> Vec<f64> {
    let f = |x: f64| (x * x + p) * x + q;
    let bound = 1.0 + p.abs().max(q.abs());
    let mut breaks = vec![-bound];
    if p < 0.0 {
        let c = (-p / 3.0).sqrt();
        breaks.extend([-c, c]);
    }
    breaks.push(bound);
    let mut roots = Vec::new();
    for w in breaks.windows(2) {
        let (mut lo, mut hi) = (w[0], w[1]);
        let (flo, fhi) = (f(lo), f(hi));
        if flo == 0.0 {
            if roots.last() != Some(&lo) {
                roots.push(lo);
            }
            continue;
        }
        if flo.signum() == fhi.signum() || fhi == 0.0 {
            continue;
        }
        let rising = fhi > flo;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if (f(mid) > 0.0) == rising {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        roots.push(0.5 * (lo + hi));
    }
    if let Some(&last) = breaks.last() {
        if f(last) == 0.0 {
            roots.push(last);
        }
    }
    roots
}

/// 3 if `D > 0`, else 1, confirmed by [`isolate_real_roots`].
pub fn real_root_count(p: f64, q: f64) -> Result<u8> {
    let cubic = RealCubic::new(p, q)?;
    root_count_checked(&cubic)
}

pub(crate) fn root_count_checked(cubic: &RealCubic) -> Result<u8> {
    let by_sign = if cubic.sign == Ordering::Greater { 3 } else { 1 };
    let isolated = isolate_real_roots(cubic.p, cubic.q).len();
    if isolated != by_sign as usize {
        return Err(Error::Internal(format!(
            "discriminant {} predicts {by_sign} real roots but bisection isolated {isolated}",
            cubic.discriminant
        )));
    }
    Ok(by_sign)
}

/// 2 components iff `D > 0` (three real roots), otherwise 1.
pub fn components_from_discriminant(p: f64, q: f64) -> Result<u8> {
    let cubic = RealCubic::new(p, q)?;
    Ok(components_for_sign(cubic.sign))
}

pub(crate) fn components_for_sign(sign: Ordering) -> u8 {
    if sign == Ordering::Greater {
        2
    } else {
        1
    }
}

/// The real root of largest absolute value (for `D > 0`) or the unique real
/// root (for `D < 0`), polished by Newton's method. Both choices are simple
/// roots separated from the other two by at least their own magnitude.
pub(crate) fn dominant_root(cubic: &RealCubic) -> f64 {
    let (p, q) = (cubic.p, cubic.q);
    let guess = if cubic.sign == Ordering::Greater {
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = ((3.0 * q) / (p * m)).clamp(-1.0, 1.0);
        let phi = arg.acos();
        (0..3)
            .map(|k| m * (phi / 3.0 - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos())
            .max_by(|a, b| a.abs().total_cmp(&b.abs()))
            .unwrap_or(0.0)
    } else {
        // Cardano with the cancellation-free pairing of the two cube roots.
        let disc = (-cubic.discriminant / 108.0).max(0.0).sqrt();
        let a = -q.signum() * (q.abs() / 2.0 + disc).cbrt();
        let a = if q == 0.0 { (disc).cbrt() } else { a };
        if a == 0.0 {
            0.0
        } else {
            a - p / (3.0 * a)
        }
    };
    let mut x = guess;
    for _ in 0..8 {
        let d = cubic.derivative(x);
        if d == 0.0 {
            break;
        }
        let next = x - cubic.eval(x) / d;
        if next == x || !next.is_finite() {
            break;
        }
        x = next;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discriminant_values() {
        assert_eq!(discriminant(-1.0, 0.0), 4.0);
        assert_eq!(discriminant(0.0, -1.0), -27.0);
        assert_eq!(discriminant(0.0, 0.0), 0.0);
    }

    #[test]
    fn degenerate_rejected() {
        assert!(matches!(RealCubic::new(0.0, 0.0), Err(Error::Degenerate { .. })));
        // (x - 1)²(x + 2) = x³ - 3x + 2
        assert!(RealCubic::new(-3.0, 2.0).is_err());
        assert!(RealCubic::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn root_counts() {
        assert_eq!(real_root_count(-1.0, 0.0).unwrap(), 3);
        assert_eq!(real_root_count(0.0, 1.0).unwrap(), 1);
        assert_eq!(real_root_count(0.0, -1.0).unwrap(), 1);
        let r = isolate_real_roots(-1.0, 0.0);
        assert_eq!(r.len(), 3);
        for (got, want) in r.iter().zip([-1.0, 0.0, 1.0]) {
            assert!((got - want).abs() < 1e-12, "{r:?}");
        }
        let r = isolate_real_roots(0.0, 1.0);
        assert!((r[0] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn component_counts() {
        assert_eq!(components_from_discriminant(-1.0, 0.0).unwrap(), 2);
        assert_eq!(components_from_discriminant(0.0, -1.0).unwrap(), 1);
        assert_eq!(components_from_discriminant(0.0, 1.0).unwrap(), 1);
    }

    #[test]
    fn supplied_discriminant() {
        let c = RealCubic::with_discriminant(-1.0, 0.0, 4.0 + 1e-13).unwrap();
        assert_eq!(c.sign, Ordering::Greater);
        assert!(RealCubic::with_discriminant(-1.0, 0.0, 5.0).is_err());
        assert!(RealCubic::with_discriminant(-1.0, 0.0, f64::NAN).is_err());
    }

    #[test]
    fn rational_mode_keeps_exact_sign() {
        // p = -3, q = 2 + 10⁻³⁰: D = -108·10⁻³⁰ - 27·10⁻⁶⁰ < 0.
        let tiny = BigRational::new(BigInt::from(1), BigInt::from(10).pow(30));
        let q = BigRational::from_integer(2.into()) + tiny;
        let c = RealCubic::from_rational(&BigRational::from_integer((-3).into()), &q).unwrap();
        assert_eq!(c.sign, Ordering::Less);
        let zero = RealCubic::from_rational(
            &BigRational::from_integer((-3).into()),
            &BigRational::from_integer(2.into()),
        );
        assert!(zero.is_err());
    }

    #[test]
    fn dominant_root_is_a_root() {
        for (p, q) in [
            (-1.0, 0.0),
            (-3.0, 1.9),
            (-3.0, -1.9),
            (0.0, -1.0),
            (2.0, 5.0),
            (-7.0, 0.3),
        ] {
            let c = RealCubic::new(p, q).unwrap();
            let r = dominant_root(&c);
            assert!(c.eval(r).abs() < 1e-12 * (1.0 + r.abs().powi(3)), "p={p} q={q} r={r}");
            let all = isolate_real_roots(p, q);
            let max = all.iter().map(|x| x.abs()).fold(0.0, f64::max);
            assert!((r.abs() - max).abs() < 1e-9 * (1.0 + max), "p={p} q={q}");
        }
    }
}
