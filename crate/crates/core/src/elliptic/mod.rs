//! Real elliptic curves `y² = x³ + px + q`.
//!
//! The number of connected components of `E(ℝ)` is computed three ways: from
//! the sign of the discriminant, from the number of real roots of the cubic,
//! and from the shape of the period lattice fed through [`crate::pi0`].

mod cubic;
mod eisenstein;
mod normalize;
mod periods;

use std::cmp::Ordering;

use num_complex::Complex64;
use num_rational::BigRational;
use serde::Serialize;

pub use cubic::{
    components_from_discriminant, discriminant, discriminant_exact, isolate_real_roots, real_root_count, RealCubic,
    DEGENERACY_THRESHOLD,
};
pub use eisenstein::{eisenstein, eisenstein_truncated, EisensteinValues, PeriodLattice, DEFAULT_CUTOFF_CELLS};
pub use normalize::{
    conjugation_matrix, conjugation_spec, normalize_lattice, LatticeShape, NormalizedLattice, RECOGNITION_TOLERANCE,
};
pub use periods::{
    agm, agm_periods, coefficient_residual, period_lattice, period_lattice_with_tolerance, real_period_by_quadrature,
    ROUND_TRIP_TOLERANCE,
};

use crate::component::pi0;
use crate::error::{Error, Result};

/// Outcome of [`elliptic_pi0`].
#[derive(Clone, Debug, Serialize)]
pub struct EllipticReport {
    pub p: f64,
    pub q: f64,
    pub discriminant: f64,
    pub real_roots: Vec<f64>,
    pub by_discriminant: u8,
    pub by_root_count: u8,
    pub by_period_lattice: u8,
    pub shape: LatticeShape,
    /// Normalized period `τ` as `(re, im)`.
    pub tau: (f64, f64),
    pub pi0_rank: usize,
    pub components: u8,
}

/// Component count of the curve, required to agree across all three routes.
pub fn elliptic_pi0(p: f64, q: f64) -> Result<EllipticReport> {
    elliptic_pi0_with_tolerance(&RealCubic::new(p, q)?, ROUND_TRIP_TOLERANCE)
}

/// As [`elliptic_pi0`] for exact rational coefficients.
pub fn elliptic_pi0_rational(p: &BigRational, q: &BigRational) -> Result<EllipticReport> {
    elliptic_pi0_with_tolerance(&RealCubic::from_rational(p, q)?, ROUND_TRIP_TOLERANCE)
}

pub fn elliptic_pi0_with_tolerance(cubic: &RealCubic, tolerance: f64) -> Result<EllipticReport> {
    let by_discriminant = cubic::components_for_sign(cubic.sign);
    let roots = isolate_real_roots(cubic.p, cubic.q);
    let by_root_count = match roots.len() {
        3 => 2,
        1 => 1,
        n => {
            return Err(Error::OracleMismatch(format!(
                "bisection isolated {n} real roots of x³ + ({})x + ({}); expected 1 or 3",
                cubic.p, cubic.q
            )))
        }
    };
    let lattice = period_lattice_with_tolerance(cubic, tolerance)?;
    let normalized = normalize_lattice(lattice.omega1, lattice.omega2)
        .map_err(|e| Error::Numeric(format!("period lattice of a real curve failed to normalize: {e}")))?;
    let spec = conjugation_spec(&normalized)?;
    let rank = pi0(&spec)?.rank;
    let by_period_lattice = 1u8 << rank;
    let report = EllipticReport {
        p: cubic.p,
        q: cubic.q,
        discriminant: cubic.discriminant,
        real_roots: roots,
        by_discriminant,
        by_root_count,
        by_period_lattice,
        shape: normalized.shape,
        tau: (normalized.tau.re, normalized.tau.im),
        pi0_rank: rank,
        components: by_discriminant,
    };
    if by_discriminant != by_root_count || by_discriminant != by_period_lattice {
        return Err(Error::OracleMismatch(format!(
            "component counts disagree for p = {}, q = {}: discriminant {} (D = {:e}, sign {:?}), \
             root count {} (roots {:?}), period lattice {} ({} τ = {}+{}i)",
            cubic.p,
            cubic.q,
            by_discriminant,
            cubic.discriminant,
            cubic.sign,
            by_root_count,
            report.real_roots,
            by_period_lattice,
            normalized.shape,
            normalized.tau.re,
            normalized.tau.im
        )));
    }
    Ok(report)
}

/// Outcome of [`lattice_pi0`].
#[derive(Clone, Debug, Serialize)]
pub struct LatticeReport {
    pub shape: LatticeShape,
    pub tau: (f64, f64),
    pub real_period: f64,
    pub p: f64,
    pub q: f64,
    pub discriminant: f64,
    pub tail_bound: f64,
    pub pi0_rank: usize,
    pub components: u8,
}

/// Eisenstein coefficients, normalization and the component count of the
/// curve `ℂ/L` for a conjugation-stable lattice `L = ℤω₁ + ℤω₂`.
pub fn lattice_pi0(omega1: Complex64, omega2: Complex64) -> Result<LatticeReport> {
    let lat = PeriodLattice::new(omega1, omega2)?;
    let normalized = normalize_lattice(lat.omega1, lat.omega2)?;
    let values = eisenstein(&lat);
    let spec = conjugation_spec(&normalized)?;
    let rank = pi0(&spec)?.rank;
    let d = values.discriminant;
    let sign_components = if d > 0.0 { 2 } else { 1 };
    let components = 1u8 << rank;
    let degenerate = d.abs() < DEGENERACY_THRESHOLD * values.p.abs().powi(3).max(values.q * values.q);
    if !degenerate && sign_components != components {
        return Err(Error::OracleMismatch(format!(
            "{} lattice τ = {}+{}i has pi0 rank {rank} but Eisenstein discriminant {d:e}",
            normalized.shape, normalized.tau.re, normalized.tau.im
        )));
    }
    Ok(LatticeReport {
        shape: normalized.shape,
        tau: (normalized.tau.re, normalized.tau.im),
        real_period: normalized.real_period,
        p: values.p,
        q: values.q,
        discriminant: d,
        tail_bound: values.tail_bound,
        pi0_rank: rank,
        components,
    })
}

/// `D > 0` iff the curve has two real components.
pub fn discriminant_sign(p: f64, q: f64) -> Result<Ordering> {
    Ok(RealCubic::new(p, q)?.sign)
}
