use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::component::RealGroupSpec;
use crate::error::{Error, Result};
use crate::involution::InvolutiveLattice;
use crate::linalg::{kernel_lattice, IntegerMatrix};

/// Tolerance for recognising integers and the two admissible real parts.
pub const RECOGNITION_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LatticeShape {
    /// `ω ∈ iℝ`
    Rectangular,
    /// `ω ∈ −½ + iℝ`
    Rhombic,
}

impl fmt::Display for LatticeShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LatticeShape::Rectangular => "Rectangular",
            LatticeShape::Rhombic => "Rhombic",
        })
    }
}

/// A conjugation-stable lattice rescaled to `ℤ + ℤτ` with `Im τ > 0` and
/// `Re τ ∈ {0, −½}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormalizedLattice {
    pub shape: LatticeShape,
    pub tau: Complex64,
    /// Positive generator of the real periods of the original lattice.
    pub real_period: f64,
}

/// Integer matrix `C` of complex conjugation in the basis `(ω₁, ω₂)`:
/// `conj(ω_j) = Σᵢ C[i][j]·ωᵢ`. Rounded with [`RECOGNITION_TOLERANCE`] and
/// verified to satisfy `C² = I` exactly.
pub fn conjugation_matrix(omega1: Complex64, omega2: Complex64) -> Result<IntegerMatrix> {
    let det = omega1.re * omega2.im - omega2.re * omega1.im;
    if !(det.abs() > 0.0) || !det.is_finite() {
        return Err(Error::Shape("periods are linearly dependent over ℝ".into()));
    }
    let mut c = IntegerMatrix::zeros(2, 2);
    for (j, w) in [omega1, omega2].into_iter().enumerate() {
        let target = w.conj();
        // Cramer's rule for target = x·ω₁ + y·ω₂ over ℝ.
        let x = (target.re * omega2.im - omega2.re * target.im) / det;
        let y = (omega1.re * target.im - target.re * omega1.im) / det;
        for (i, v) in [x, y].into_iter().enumerate() {
            let rounded = v.round();
            let residual = (v - rounded).abs();
            if !(residual <= RECOGNITION_TOLERANCE * (1.0 + rounded.abs())) {
                return Err(Error::Recognition(format!(
                    "coordinate {v} of conj(ω{}) is not within {RECOGNITION_TOLERANCE:e} of an integer",
                    j + 1
                )));
            }
            c.set(i, j, BigInt::from(rounded as i64));
        }
    }
    if !c.mul(&c)?.is_identity() {
        return Err(Error::Internal(format!(
            "conjugation matrix {c} does not square to the identity"
        )));
    }
    Ok(c)
}

/// Rescales by the positive generator of `L ∩ ℝ`, reduces `Re τ` into
/// `[−½, ½)` and classifies the lattice.
pub fn normalize_lattice(omega1: Complex64, omega2: Complex64) -> Result<NormalizedLattice> {
    let c = conjugation_matrix(omega1, omega2).map_err(|e| match e {
        Error::Recognition(msg) => Error::Shape(msg),
        other => other,
    })?;
    let c_minus_id = c.sub(&IntegerMatrix::identity(2))?;
    let real = kernel_lattice(&c_minus_id);
    if real.rank() != 1 {
        return Err(Error::Internal(format!("real sublattice has rank {}", real.rank())));
    }
    let v = &real.vectors()[0];
    let (x, y) = (to_f64(&v[0])?, to_f64(&v[1])?);
    let r = omega1 * x + omega2 * y;
    let (sign, r) = if r.re < 0.0 { (-1.0, -r.re) } else { (1.0, r.re) };
    let (x, y) = (x * sign, y * sign);
    // Complement w with det [v w] = 1.
    let (_, a, b) = crate::linalg::ext_gcd(&BigInt::from(x as i64), &BigInt::from(y as i64));
    let w = omega1 * -to_f64(&b)? + omega2 * to_f64(&a)?;
    let mut tau = w / r;
    if tau.im < 0.0 {
        tau = -tau;
    }
    let shift = (tau.re + 0.5).floor();
    let mut re = tau.re - shift;
    if re > 0.5 - RECOGNITION_TOLERANCE {
        re -= 1.0;
    }
    let shape = if re.abs() <= RECOGNITION_TOLERANCE {
        LatticeShape::Rectangular
    } else if (re + 0.5).abs() <= RECOGNITION_TOLERANCE {
        LatticeShape::Rhombic
    } else {
        return Err(Error::Internal(format!(
            "normalized period {re:+}+{}i is neither rectangular nor rhombic",
            tau.im
        )));
    };
    let re = match shape {
        LatticeShape::Rectangular => 0.0,
        LatticeShape::Rhombic => -0.5,
    };
    Ok(NormalizedLattice {
        shape,
        tau: Complex64::new(re, tau.im),
        real_period: r,
    })
}

fn to_f64(x: &BigInt) -> Result<f64> {
    x.to_f64().ok_or(Error::Overflow {
        context: "lattice coordinate",
    })
}

/// The group spec of `ℂ/iΛ` with `iΛ = ℤ + ℤτ`: `σ = −C` for the conjugation
/// matrix `C` in the basis `(1, τ)`, and no coroots.
pub fn conjugation_spec(lat: &NormalizedLattice) -> Result<RealGroupSpec> {
    let c = conjugation_matrix(Complex64::new(1.0, 0.0), lat.tau)?;
    let lattice = InvolutiveLattice::new(c.neg()).map_err(|e| Error::Internal(e.to_string()))?;
    Ok(RealGroupSpec::without_coroots(
        lattice,
        Some(format!("elliptic {}", lat.shape)),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::component::pi0;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn normalization_examples() {
        let n = normalize_lattice(c(1.0, 0.0), c(0.0, 1.0)).unwrap();
        assert_eq!((n.shape, n.tau), (LatticeShape::Rectangular, c(0.0, 1.0)));

        let h = 3f64.sqrt() / 2.0;
        let n = normalize_lattice(c(1.0, 0.0), c(-0.5, h)).unwrap();
        assert_eq!(n.shape, LatticeShape::Rhombic);
        assert!((n.tau - c(-0.5, h)).norm() < 1e-15);

        let n = normalize_lattice(c(2.0, 0.0), c(2.0, 2.0)).unwrap();
        assert_eq!(n.shape, LatticeShape::Rectangular);
        assert!((n.tau - c(0.0, 1.0)).norm() < 1e-15);
        assert_eq!(n.real_period, 2.0);
    }

    #[test]
    fn rhombic_given_in_disguise() {
        // Basis (ω, ω + 1) of the lattice ℤ + ℤω, ω = 0.5 + 2i; real generator 1.
        let w = c(0.5, 2.0);
        let n = normalize_lattice(w, w + 1.0).unwrap();
        assert_eq!(n.shape, LatticeShape::Rhombic);
        assert!((n.tau.im - 2.0).abs() < 1e-12);
        assert!((n.real_period - 1.0).abs() < 1e-12);
    }

    #[test]
    fn non_real_lattice_is_rejected() {
        let err = normalize_lattice(c(1.0, 0.0), c(0.3, 1.1)).unwrap_err();
        assert!(matches!(err, Error::Shape(_)), "{err}");
    }

    #[test]
    fn conjugation_matrices() {
        let rect = NormalizedLattice {
            shape: LatticeShape::Rectangular,
            tau: c(0.0, 1.5),
            real_period: 1.0,
        };
        let spec = conjugation_spec(&rect).unwrap();
        assert_eq!(spec.sigma(), &IntegerMatrix::from_i64(&[&[-1, 0], &[0, 1]]));
        assert_eq!(pi0(&spec).unwrap().rank, 1);

        let rhombic = NormalizedLattice {
            shape: LatticeShape::Rhombic,
            tau: c(-0.5, 0.8),
            real_period: 1.0,
        };
        let c_mat = conjugation_matrix(c(1.0, 0.0), rhombic.tau).unwrap();
        assert_eq!(c_mat, IntegerMatrix::from_i64(&[&[1, -1], &[0, -1]]));
        let spec = conjugation_spec(&rhombic).unwrap();
        assert_eq!(spec.sigma(), &IntegerMatrix::from_i64(&[&[-1, 1], &[0, 1]]));
        assert_eq!(pi0(&spec).unwrap().rank, 0);
    }
}
