use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A lattice `ℤω₁ + ℤω₂ ⊂ ℂ`, oriented so that `Im(ω₂/ω₁) > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PeriodLattice {
    pub omega1: Complex64,
    pub omega2: Complex64,
}

impl PeriodLattice {
    /// Fails if the two periods are (numerically) ℝ-linearly dependent.
    pub fn new(omega1: Complex64, omega2: Complex64) -> Result<Self> {
        if !(omega1.is_finite() && omega2.is_finite()) || omega1.norm() == 0.0 {
            return Err(Error::Shape("periods must be finite and nonzero".into()));
        }
        let tau = omega2 / omega1;
        if !(tau.im.abs() > 1e-12 * tau.norm()) {
            return Err(Error::Shape(format!(
                "periods {omega1} and {omega2} are linearly dependent over ℝ"
            )));
        }
        let omega2 = if tau.im < 0.0 { -omega2 } else { omega2 };
        Ok(PeriodLattice { omega1, omega2 })
    }

    pub fn tau(&self) -> Complex64 {
        self.omega2 / self.omega1
    }

    /// Covolume `|Im(ω̄₁ω₂)|`.
    pub fn area(&self) -> f64 {
        (self.omega1.conj() * self.omega2).im.abs()
    }

    pub fn scaled(&self, t: f64) -> Self {
        PeriodLattice {
            omega1: self.omega1 * t,
            omega2: self.omega2 * t,
        }
    }

    /// Lagrange–Gauss reduced basis: `|ω₁| ≤ |ω₂|`, `|Re(ω₂/ω₁)| ≤ ½`, `Im(ω₂/ω₁) > 0`.
    pub fn reduced(&self) -> Self {
        let (mut a, mut b) = (self.omega1, self.omega2);
        for _ in 0..1000 {
            if b.norm_sqr() < a.norm_sqr() {
                std::mem::swap(&mut a, &mut b);
            }
            let m = (b / a).re.round();
            b -= a * m;
            if b.norm_sqr() >= a.norm_sqr() * (1.0 - 1e-15) {
                break;
            }
        }
        if (b / a).im < 0.0 {
            b = -b;
        }
        PeriodLattice { omega1: a, omega2: b }
    }
}

/// Weierstrass coefficients of a lattice: `p = −15·G₄`, `q = −35·G₆`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EisensteinValues {
    /// `Σ' λ⁻⁴`
    pub g4: Complex64,
    /// `Σ' λ⁻⁶`
    pub g6: Complex64,
    pub p: f64,
    pub q: f64,
    /// `D = −4p³ − 27q²` of the lattice, evaluated without cancellation where
    /// available (`Δ/16` from the product formula), else from `(p, q)`.
    pub discriminant: f64,
    /// Estimated absolute truncation error of `(p, q)`, larger of the two.
    pub tail_bound: f64,
    /// `max(|Im p|, |Im q|)`; zero up to rounding for conjugation-stable lattices.
    pub imaginary_residual: f64,
}

impl EisensteinValues {
    fn from_sums(g4: Complex64, g6: Complex64, discriminant: Option<f64>, tail_bound: f64) -> Self {
        let p = g4 * -15.0;
        let q = g6 * -35.0;
        EisensteinValues {
            g4,
            g6,
            p: p.re,
            q: q.re,
            discriminant: discriminant.unwrap_or_else(|| super::cubic::discriminant(p.re, q.re)),
            tail_bound,
            imaginary_residual: p.im.abs().max(q.im.abs()),
        }
    }
}

/// Eisenstein sums via the Lambert-series (q-expansion) form of the row sums:
/// `G₄(τ) = π⁴/45·(1 + 240 Σ σ₃(n)qⁿ)`, `G₆(τ) = 2π⁶/945·(1 − 504 Σ σ₅(n)qⁿ)`,
/// `q = e^{2πiτ}`, on a reduced basis so that `|q| ≤ e^{−π√3}`. The
/// discriminant comes from `Δ(τ) = (2π)¹²·q·∏(1 − qⁿ)²⁴`, which stays accurate
/// where `−4p³ − 27q²` cancels (large `Im τ`).
pub fn eisenstein(lat: &PeriodLattice) -> EisensteinValues {
    let red = lat.reduced();
    let tau = red.tau();
    let nome = (Complex64::i() * 2.0 * PI * tau).exp();
    let (mut s3, mut s5) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    let mut qn = Complex64::new(1.0, 0.0);
    let mut tail = 0.0;
    for n in 1..200u32 {
        qn *= nome;
        let lambert = qn / (Complex64::new(1.0, 0.0) - qn);
        let nf = n as f64;
        let t3 = lambert * nf.powi(3);
        let t5 = lambert * nf.powi(5);
        s3 += t3;
        s5 += t5;
        tail = t5.norm();
        if tail < 1e-22 {
            break;
        }
    }
    let g4_tau = (1.0 + s3 * 240.0) * (PI.powi(4) / 45.0);
    let g6_tau = (1.0 - s5 * 504.0) * (2.0 * PI.powi(6) / 945.0);
    let w4 = red.omega1.powi(4);
    let w6 = red.omega1.powi(6);
    let g4 = g4_tau / w4;
    let g6 = g6_tau / w6;
    let rel_tail = tail * 504.0;
    let tail_bound = (15.0 * g4.norm()).max(35.0 * g6.norm()) * (rel_tail + 4.0 * f64::EPSILON);
    let delta = modular_discriminant(nome) / red.omega1.powi(12);
    EisensteinValues::from_sums(g4, g6, Some(delta.re / 16.0), tail_bound)
}

/// `(2π)¹²·q·∏(1 − qⁿ)²⁴`.
fn modular_discriminant(nome: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let mut prod = one;
    let mut qn = one;
    for _ in 1..200 {
        qn *= nome;
        if qn.norm() < 1e-18 {
            break;
        }
        prod *= one - qn;
    }
    nome * prod.powi(24) * (2.0 * PI).powi(12)
}

/// Default truncation radius of [`eisenstein_truncated`], in units of `√area`.
pub const DEFAULT_CUTOFF_CELLS: f64 = 200.0;

/// Direct summation over the nonzero lattice points with `|λ| ≤ 2R`,
/// `R = cutoff·√area`, in order of increasing `|λ|` (ties by argument) with
/// compensated accumulation. The reported tail bound is `|S(2R) − S(R)|`.
pub fn eisenstein_truncated(lat: &PeriodLattice, cutoff: f64) -> Result<EisensteinValues> {
    if !(cutoff >= 2.0) {
        return Err(Error::Domain(format!(
            "truncation cutoff {cutoff} is below the minimum of 2 cells"
        )));
    }
    let red = lat.reduced();
    let inner = cutoff * red.area().sqrt();
    let outer = 2.0 * inner;
    let points = lattice_points(&red, outer);

    let mut s4 = Compensated::default();
    let mut s6 = Compensated::default();
    let mut at_inner = None;
    for (r2, _, z) in &points {
        if at_inner.is_none() && *r2 > inner * inner {
            at_inner = Some((s4.value(), s6.value()));
        }
        let inv2 = (z * z).inv();
        let inv4 = inv2 * inv2;
        s4.add(inv4);
        s6.add(inv4 * inv2);
    }
    let (g4, g6) = (s4.value(), s6.value());
    let (g4_in, g6_in) = at_inner.unwrap_or((g4, g6));
    let tail_bound = (15.0 * (g4 - g4_in).norm()).max(35.0 * (g6 - g6_in).norm());
    Ok(EisensteinValues::from_sums(g4, g6, None, tail_bound))
}

/// Nonzero lattice points in the disc of the given radius, sorted by
/// `(|λ|², arg λ)`.
fn lattice_points(red: &PeriodLattice, radius: f64) -> Vec<(f64, f64, Complex64)> {
    let unit = red.omega1 / red.omega1.norm();
    let w1 = red.omega1.norm();
    let rot = red.omega2 * unit.conj();
    let (shift, height) = (rot.re, rot.im);
    let n_max = (radius / height).floor() as i64;
    let mut out = Vec::new();
    for n in -n_max..=n_max {
        let y = n as f64 * height;
        let half = (radius * radius - y * y).max(0.0).sqrt();
        let x0 = n as f64 * shift;
        let m_lo = ((-half - x0) / w1).ceil() as i64;
        let m_hi = ((half - x0) / w1).floor() as i64;
        for m in m_lo..=m_hi {
            if m == 0 && n == 0 {
                continue;
            }
            let z = red.omega1 * m as f64 + red.omega2 * n as f64;
            let r2 = z.norm_sqr();
            if r2 <= radius * radius {
                out.push((r2, z.arg(), z));
            }
        }
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    out
}

/// Neumaier summation for complex values.
#[derive(Default)]
struct Compensated {
    sum: Complex64,
    carry: Complex64,
}

impl Compensated {
    fn add(&mut self, x: Complex64) {
        let re = neumaier(self.sum.re, x.re, &mut self.carry.re);
        let im = neumaier(self.sum.im, x.im, &mut self.carry.im);
        self.sum = Complex64::new(re, im);
    }

    fn value(&self) -> Complex64 {
        self.sum + self.carry
    }
}

fn neumaier(sum: f64, x: f64, carry: &mut f64) -> f64 {
    let t = sum + x;
    if sum.abs() >= x.abs() {
        *carry += (sum - t) + x;
    } else {
        *carry += (x - t) + sum;
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn square_lattice_has_q_zero() {
        let lat = PeriodLattice::new(c(1.0, 0.0), c(0.0, 1.0)).unwrap();
        let e = eisenstein(&lat);
        assert!(e.p < 0.0);
        assert!(e.q.abs() <= 1e-12 * e.p.abs().powf(1.5), "{e:?}");
        // G₄(ℤ[i]) = Γ(1/4)⁸/(960π²)
        let gamma_quarter: f64 = 3.625_609_908_221_908;
        let g4 = gamma_quarter.powi(8) / (960.0 * PI * PI);
        assert!((e.g4.re - g4).abs() < 1e-13 * g4, "{} vs {g4}", e.g4.re);
    }

    #[test]
    fn hexagonal_lattice_has_p_zero() {
        let w = c(-0.5, 3f64.sqrt() / 2.0);
        let e = eisenstein(&PeriodLattice::new(c(1.0, 0.0), w).unwrap());
        assert!(e.q < 0.0);
        assert!(e.p.abs() <= 1e-12 * e.q.abs().powf(2.0 / 3.0), "{e:?}");
    }

    #[test]
    fn truncated_sum_agrees_with_series() {
        for tau in [c(0.0, 1.3), c(-0.5, 0.9), c(0.0, 0.4)] {
            let lat = PeriodLattice::new(c(1.7, 0.0), tau * 1.7).unwrap();
            let a = eisenstein(&lat);
            let b = eisenstein_truncated(&lat, 30.0).unwrap();
            let scale = a.p.abs().max(a.q.abs());
            assert!((a.p - b.p).abs() < 1e-4 * scale, "{a:?} {b:?}");
            assert!((a.q - b.q).abs() < 1e-4 * scale, "{a:?} {b:?}");
            assert!(b.tail_bound < 1e-3 * scale);
        }
    }

    #[test]
    fn homogeneity() {
        let lat = PeriodLattice::new(c(1.0, 0.0), c(-0.5, 1.7)).unwrap();
        let t = 2.5;
        let a = eisenstein(&lat);
        let b = eisenstein(&lat.scaled(t));
        assert!((b.p - a.p * t.powi(-4)).abs() < 1e-13 * a.p.abs());
        assert!((b.q - a.q * t.powi(-6)).abs() < 1e-13 * a.q.abs());
    }

    #[test]
    fn basis_independence() {
        let lat = PeriodLattice::new(c(1.0, 0.0), c(0.1, 1.2)).unwrap();
        // (ω₁, ω₂) ↦ (2ω₁ + ω₂, 3ω₁ + 2ω₂) has determinant 1.
        let other = PeriodLattice::new(lat.omega1 * 2.0 + lat.omega2, lat.omega1 * 3.0 + lat.omega2 * 2.0).unwrap();
        let (a, b) = (eisenstein(&lat), eisenstein(&other));
        assert!((a.g4 - b.g4).norm() < 1e-12 * a.g4.norm());
        assert!((a.g6 - b.g6).norm() < 1e-12 * a.g6.norm());
    }

    #[test]
    fn product_discriminant() {
        // mpmath: (2π)¹²·q·∏(1 − qⁿ)²⁴/16 at 50 digits.
        #[allow(clippy::excessive_precision)]
        let cases = [
            (c(0.0, 5.0), 5.373_718_337_473_604_6e-6),
            (c(-0.5, 5.0), -5.373_718_337_479_462_6e-6),
            (c(0.0, 1.2), 124_162.655_545_399_55),
        ];
        for (tau, want) in cases {
            let e = eisenstein(&PeriodLattice::new(c(1.0, 0.0), tau).unwrap());
            assert!(
                (e.discriminant - want).abs() < 1e-13 * want.abs(),
                "{tau}: {} vs {want}",
                e.discriminant
            );
        }
        // Where −4p³ − 27q² does not cancel, both agree.
        let e = eisenstein(&PeriodLattice::new(c(1.0, 0.0), c(-0.5, 0.9)).unwrap());
        let direct = crate::elliptic::discriminant(e.p, e.q);
        assert!((e.discriminant - direct).abs() < 1e-12 * direct.abs());
    }

    #[test]
    fn dependent_periods_rejected() {
        assert!(PeriodLattice::new(c(1.0, 0.0), c(2.0, 0.0)).is_err());
        assert!(PeriodLattice::new(c(0.0, 0.0), c(0.0, 1.0)).is_err());
        assert!(eisenstein_truncated(&PeriodLattice::new(c(1.0, 0.0), c(0.0, 1.0)).unwrap(), 1.0).is_err());
    }
}
