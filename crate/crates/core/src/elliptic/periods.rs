//! Period lattice of `y² = x³ + px + q` (with `x = ℘`, `y = ℘′/2`) by the
//! arithmetic–geometric mean.

use std::cmp::Ordering;
use std::f64::consts::PI;

use num_complex::Complex64;

use super::cubic::{dominant_root, RealCubic};
use super::eisenstein::{eisenstein, PeriodLattice};
use crate::error::{Error, Result};

/// Default relative tolerance of the Eisenstein round-trip check.
pub const ROUND_TRIP_TOLERANCE: f64 = 1e-6;

pub fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..64 {
        if (a - b).abs() <= 4.0 * f64::EPSILON * a.abs() {
            break;
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    0.5 * (a + b)
}

/// Root differences of the cubic, computed without cancellation:
/// the dominant root `r` is well separated, and the gap of the remaining
/// pair follows from `(e₂ − e₃)² = D / f′(r)²`.
struct RootGeometry {
    dominant: f64,
    fprime: f64,
    /// `|D| / f′(r)²`
    pair_gap_sq: f64,
}

fn root_geometry(cubic: &RealCubic) -> RootGeometry {
    let dominant = dominant_root(cubic);
    let fprime = cubic.derivative(dominant);
    RootGeometry {
        dominant,
        fprime,
        pair_gap_sq: cubic.discriminant.abs() / (fprime * fprime),
    }
}

/// AGM periods of the curve; no round-trip check.
pub fn agm_periods(cubic: &RealCubic) -> Result<PeriodLattice> {
    let g = root_geometry(cubic);
    if !(g.fprime > 0.0 && g.pair_gap_sq.is_finite()) {
        return Err(Error::Numeric(format!(
            "root geometry is not well conditioned (f'(r) = {}, gap² = {})",
            g.fprime, g.pair_gap_sq
        )));
    }
    let r = g.dominant;
    match cubic.sign {
        Ordering::Greater => {
            // e₁ > e₂ > e₃; full real period π/M(√(e₁−e₃), √(e₁−e₂)),
            // imaginary period iπ/M(√(e₁−e₃), √(e₂−e₃)).
            let s = g.pair_gap_sq.sqrt();
            let (d12, d13, d23) = if r > 0.0 {
                (0.5 * (3.0 * r - s), 0.5 * (3.0 * r + s), s)
            } else {
                (s, 0.5 * (3.0 * r.abs() + s), 0.5 * (3.0 * r.abs() - s))
            };
            let w1 = PI / agm(d13.sqrt(), d12.sqrt());
            let w2 = PI / agm(d13.sqrt(), d23.sqrt());
            PeriodLattice::new(Complex64::new(w1, 0.0), Complex64::new(0.0, w2))
        }
        Ordering::Less => {
            // One real root e₁: with b = √f′(e₁), a = 3e₁,
            // ω₁ = 2π/M(2√b, √(2b+a)), ω₂ = −ω₁/2 + iπ/M(2√b, √(2b−a)),
            // where (2b+a)(2b−a) = −D/f′(e₁)².
            let b = g.fprime.sqrt();
            let a = 3.0 * r;
            let big = 2.0 * b + a.abs();
            let small = g.pair_gap_sq / big;
            let (plus, minus) = if a >= 0.0 { (big, small) } else { (small, big) };
            let w1 = 2.0 * PI / agm(2.0 * b.sqrt(), plus.sqrt());
            let w2 = Complex64::new(-0.5 * w1, PI / agm(2.0 * b.sqrt(), minus.sqrt()));
            PeriodLattice::new(Complex64::new(w1, 0.0), w2)
        }
        Ordering::Equal => Err(Error::Degenerate { discriminant: 0.0 }),
    }
}

/// Scale-aware residual of an Eisenstein round trip.
pub fn coefficient_residual(cubic: &RealCubic, p: f64, q: f64) -> f64 {
    let s = cubic.scale();
    ((p - cubic.p).abs() / (s * s)).max((q - cubic.q).abs() / (s * s * s))
}

/// Period lattice of the curve, verified by recomputing `(p, q)` from its
/// Eisenstein series.
pub fn period_lattice(p: f64, q: f64) -> Result<PeriodLattice> {
    period_lattice_with_tolerance(&RealCubic::new(p, q)?, ROUND_TRIP_TOLERANCE)
}

pub fn period_lattice_with_tolerance(cubic: &RealCubic, tolerance: f64) -> Result<PeriodLattice> {
    let lat = agm_periods(cubic)?;
    let back = eisenstein(&lat);
    let residual = coefficient_residual(cubic, back.p, back.q);
    if !(residual <= tolerance) {
        return Err(Error::Numeric(format!(
            "Eisenstein round trip of ({}, {}) gave ({}, {}), residual {residual:e} above {tolerance:e}",
            cubic.p, cubic.q, back.p, back.q
        )));
    }
    Ok(lat)
}

/// Full real period `∫_{e}^{∞} dx/√f(x)` over the largest real root `e`, by
/// adaptive Simpson quadrature after `x = e + tan²u`. Independent of the AGM.
pub fn real_period_by_quadrature(cubic: &RealCubic) -> f64 {
    let roots = super::cubic::isolate_real_roots(cubic.p, cubic.q);
    let e = roots.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    // f(x) = (x − e)·h(x), h(x) = x² + ex + e² + p > 0 for x > e.
    let h = |x: f64| x * x + e * x + e * e + cubic.p;
    // ∫ dx/√f = 2∫₀^∞ dt/√h(e + t²); t = tan u.
    let integrand = |u: f64| {
        if u >= 0.5 * PI {
            return 1.0;
        }
        let t = u.tan();
        let sec2 = 1.0 + t * t;
        sec2 / h(e + t * t).sqrt()
    };
    2.0 * adaptive_simpson(&integrand, 0.0, 0.5 * PI, 1e-13, 50)
}

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn agm_known_value() {
        // Gauss's constant: 1/M(1, √2) = 0.8346268…
        assert!((1.0 / agm(1.0, 2f64.sqrt()) - 0.834_626_841_674_073_2).abs() < 1e-15);
    }

    #[test]
    fn round_trip_both_signs() {
        for (p, q) in [
            (-1.0, 0.0),
            (0.0, -1.0),
            (0.0, 1.0),
            (-3.0, 1.0),
            (-3.0, -1.0),
            (2.0, -0.5),
            (-0.7, 0.2),
        ] {
            let cubic = RealCubic::new(p, q).unwrap();
            let lat = agm_periods(&cubic).unwrap();
            let back = eisenstein(&lat);
            let res = coefficient_residual(&cubic, back.p, back.q);
            assert!(res < 1e-12, "p={p} q={q} back={back:?} residual={res}");
        }
    }

    #[test]
    fn near_degenerate_round_trip() {
        // (x − 1)²(x + 2) perturbed: tiny positive and negative discriminants.
        for dq in [-1e-9, 1e-9] {
            let cubic = RealCubic::new(-3.0, 2.0 + dq).unwrap();
            let lat = agm_periods(&cubic).unwrap();
            let back = eisenstein(&lat);
            assert!(coefficient_residual(&cubic, back.p, back.q) < 1e-12, "dq={dq}");
        }
    }

    #[test]
    fn quadrature_matches_agm_real_period() {
        for (p, q) in [(-1.0, 0.0), (0.0, -1.0), (1.0, 1.0), (-3.0, 1.5)] {
            let cubic = RealCubic::new(p, q).unwrap();
            let lat = agm_periods(&cubic).unwrap();
            let quad = real_period_by_quadrature(&cubic);
            assert!(
                (quad - lat.omega1.re).abs() < 1e-9 * quad,
                "p={p} q={q}: {quad} vs {}",
                lat.omega1
            );
        }
    }

    #[test]
    fn period_lattice_checks_round_trip() {
        assert!(period_lattice(-1.0, 0.0).is_ok());
        assert!(period_lattice(0.0, 0.0).is_err());
    }
}
