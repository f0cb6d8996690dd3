//! The component group `π₀G(ℝ) ≅ Λ₊/(2Λ̃₊ + Q∨₊)` and the lattice formula
//! for `H¹(ℝ, iΛ/iQ∨)`.
//!
//! All half-lattices are handled in doubled ambient coordinates, so every
//! computation stays inside `ℤⁿ`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::involution::{doubled_projection_plus, minus_lattice, plus_lattice, InvolutiveLattice};
use crate::linalg::{lattice_intersect, lattice_sum, quotient_group, quotient_invariants, IntegerMatrix, LatticeBasis};

/// The full input of the component-group formula: `(Λ, σ)` and the
/// σ-stable coroot lattice `Q∨ ⊆ Λ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealGroupSpec {
    lattice: InvolutiveLattice,
    coroots: Vec<Vec<BigInt>>,
    coroot_lattice: LatticeBasis,
    name: Option<String>,
}

impl RealGroupSpec {
    /// Validates the coroot generators (length and σ-stability of their span).
    pub fn new(lattice: InvolutiveLattice, coroots: Vec<Vec<BigInt>>, name: Option<String>) -> Result<Self> {
        let n = lattice.rank();
        for (i, c) in coroots.iter().enumerate() {
            if c.len() != n {
                return Err(Error::InvalidSpec {
                    field: format!("coroots[{i}]"),
                    message: format!("expected {n} coordinates, found {}", c.len()),
                });
            }
        }
        let coroot_lattice = LatticeBasis::from_vectors(n, &coroots)?;
        for (i, c) in coroots.iter().enumerate() {
            let image = lattice.apply(c)?;
            if !coroot_lattice.contains(&image) {
                return Err(Error::InvalidSpec {
                    field: format!("coroots[{i}]"),
                    message: "sigma maps this coroot outside the coroot lattice (Q∨ is not σ-stable)".into(),
                });
            }
        }
        Ok(RealGroupSpec {
            lattice,
            coroots,
            coroot_lattice,
            name,
        })
    }

    /// Spec with `Q∨ = 0` (tori, abelian varieties).
    pub fn without_coroots(lattice: InvolutiveLattice, name: Option<String>) -> Self {
        let n = lattice.rank();
        RealGroupSpec {
            lattice,
            coroots: Vec::new(),
            coroot_lattice: LatticeBasis::zero(n),
            name,
        }
    }

    pub fn from_i64(sigma: &[&[i64]], coroots: &[&[i64]]) -> Result<Self> {
        let lattice = InvolutiveLattice::from_i64(sigma)?;
        let coroots = coroots.iter().map(|c| crate::linalg::big_vec(c)).collect();
        Self::new(lattice, coroots, None)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn lattice(&self) -> &InvolutiveLattice {
        &self.lattice
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn sigma(&self) -> &IntegerMatrix {
        self.lattice.sigma()
    }

    /// Coroot generators as given.
    pub fn coroots(&self) -> &[Vec<BigInt>] {
        &self.coroots
    }

    pub fn coroot_lattice(&self) -> &LatticeBasis {
        &self.coroot_lattice
    }

    /// The same group in the basis given by unimodular `u`: `σ' = UσU⁻¹`, `Q∨' = U·Q∨`.
    pub fn base_change(&self, u: &IntegerMatrix, u_inv: &IntegerMatrix) -> Result<Self> {
        let lattice = self.lattice.conjugate(u, u_inv)?;
        let coroots = self.coroots.iter().map(|c| u.apply(c)).collect::<Result<Vec<_>>>()?;
        Self::new(lattice, coroots, self.name.clone())
    }
}

/// `π₀G(ℝ) ≅ (ℤ/2)^rank`, with one representative `λ ∈ Λ₊` per summand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pi0Result {
    pub rank: usize,
    /// Nontrivial invariant factors of `Λ₊/(2Λ̃₊ + Q∨₊)`; all equal to 2.
    pub invariant_factors: Vec<BigInt>,
    /// Generators `λ` of the quotient, in ambient coordinates.
    pub representatives: Vec<Vec<BigInt>>,
}

impl Pi0Result {
    /// Exponent vectors `λ/2` of the points `Exp(iλ/2)`.
    pub fn half_representatives(&self) -> Vec<Vec<BigRational>> {
        self.representatives.iter().map(|l| halve(l)).collect()
    }

    /// `2^rank`, if it fits in a `u64`.
    pub fn order(&self) -> Option<u64> {
        1u64.checked_shl(u32::try_from(self.rank).ok()?)
    }
}

fn halve(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().map(|x| BigRational::new(x.clone(), BigInt::from(2))).collect()
}

/// The lattices entering the component-group quotient.
#[derive(Clone, Debug)]
pub struct Pi0Lattices {
    /// `Λ₊`
    pub plus: LatticeBasis,
    /// `2Λ̃₊`
    pub doubled_projection: LatticeBasis,
    /// `Q∨₊ = Q∨ ∩ Λ₊`
    pub coroots_plus: LatticeBasis,
    /// `2Λ̃₊ + Q∨₊`
    pub denominator: LatticeBasis,
}

pub fn pi0_lattices(spec: &RealGroupSpec) -> Result<Pi0Lattices> {
    let plus = plus_lattice(&spec.lattice);
    let doubled_projection = doubled_projection_plus(&spec.lattice);
    let coroots_plus = lattice_intersect(&spec.coroot_lattice, &plus)?;
    let denominator = lattice_sum(&doubled_projection, &coroots_plus)?;
    Ok(Pi0Lattices {
        plus,
        doubled_projection,
        coroots_plus,
        denominator,
    })
}

/// Computes `π₀G(ℝ) ≅ Λ₊/(2Λ̃₊ + Q∨₊)` with representatives.
pub fn pi0(spec: &RealGroupSpec) -> Result<Pi0Result> {
    let lat = pi0_lattices(spec)?;
    quotient_to_result(&lat.plus, &lat.denominator)
}

/// `Λ₊/2Λ̃₊`, the abelian-variety case, computed without any reference to coroots.
pub fn pi0_without_coroots(lattice: &InvolutiveLattice) -> Result<Pi0Result> {
    let plus = plus_lattice(lattice);
    let doubled = doubled_projection_plus(lattice);
    quotient_to_result(&plus, &doubled)
}

fn quotient_to_result(plus: &LatticeBasis, denominator: &LatticeBasis) -> Result<Pi0Result> {
    if !denominator.is_sublattice_of(plus) {
        return Err(Error::Internal("2Λ̃₊ + Q∨₊ is not contained in Λ₊".into()));
    }
    let q = quotient_group(plus, denominator)?;
    let invariant_factors = q.nontrivial();
    let two = BigInt::from(2);
    if let Some(bad) = invariant_factors.iter().find(|d| **d != two) {
        return Err(Error::Internal(format!(
            "component group is not elementary abelian of exponent 2: invariant factor {bad}"
        )));
    }
    Ok(Pi0Result {
        rank: invariant_factors.len(),
        invariant_factors,
        representatives: q.generators,
    })
}

/// The component-group denominator (`2Λ̃₊ + Q∨₊`) and the one appearing in the
/// cohomological derivation (`(2Λ̃₊ + Q∨) ∩ Λ₊`), computed independently.
pub fn denominator_pair(spec: &RealGroupSpec) -> Result<(LatticeBasis, LatticeBasis)> {
    let lat = pi0_lattices(spec)?;
    let via_full = lattice_intersect(&lattice_sum(&lat.doubled_projection, &spec.coroot_lattice)?, &lat.plus)?;
    Ok((lat.denominator, via_full))
}

/// `H¹(ℝ, iΛ/iQ∨) ≅ Λ ∩ (Λ̃₊ + ½Q∨₋) / (2Λ̃₊ + Q∨)`, held in doubled coordinates.
#[derive(Clone, Debug)]
pub struct H1Gamma {
    /// `2Λ ∩ (2Λ̃₊ + Q∨₋)`, the doubled cocycle lattice.
    pub cocycles: LatticeBasis,
    /// `4Λ̃₊ + 2Q∨`, the doubled coboundary lattice.
    pub coboundaries: LatticeBasis,
    /// `2Q∨`, the common denominator of `Z¹` and `B¹`.
    pub base: LatticeBasis,
    /// Nontrivial invariant factors of `cocycles/coboundaries`.
    pub invariant_factors: Vec<BigInt>,
}

impl H1Gamma {
    /// Invariant factors of `Z¹ = cocycles/base` (zeros for free summands).
    pub fn cocycle_invariants(&self) -> Result<Vec<BigInt>> {
        quotient_invariants(&self.cocycles, &self.base)
    }

    /// Invariant factors of `B¹ = coboundaries/base`.
    pub fn coboundary_invariants(&self) -> Result<Vec<BigInt>> {
        quotient_invariants(&self.coboundaries, &self.base)
    }
}

pub fn h1_gamma(spec: &RealGroupSpec) -> Result<H1Gamma> {
    let n = spec.rank();
    let doubled_plus = doubled_projection_plus(&spec.lattice);
    let coroots_minus = lattice_intersect(&spec.coroot_lattice, &minus_lattice(&spec.lattice))?;
    let two_lambda = LatticeBasis::full(n).scaled(2);
    let cocycles = lattice_intersect(&two_lambda, &lattice_sum(&doubled_plus, &coroots_minus)?)?;
    let base = spec.coroot_lattice.scaled(2);
    let coboundaries = lattice_sum(&doubled_plus.scaled(2), &base)?;
    let q = quotient_group(&cocycles, &coboundaries)?;
    if q.order().is_none() {
        return Err(Error::Internal("H¹ lattice quotient is not finite".into()));
    }
    Ok(H1Gamma {
        invariant_factors: q.nontrivial(),
        cocycles,
        coboundaries,
        base,
    })
}

/// Textual description of the component containing `Exp(iλ/2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentRepresentative {
    pub lambda: Vec<BigInt>,
    /// `λ/2`, the exponent of `Exp`.
    pub exponent: Vec<BigRational>,
    /// `(-1)^{λ_j}`: the point `exp(πiλ)` in standard torus coordinates, when
    /// `Λ` is read as the cocharacter lattice of `𝔾_mⁿ`.
    pub torus_point: Vec<i8>,
    pub is_identity: bool,
}

impl fmt::Display for ComponentRepresentative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity {
            return write!(f, "identity component (λ = 0)");
        }
        let exps: Vec<String> = self.exponent.iter().map(ToString::to_string).collect();
        let signs: Vec<&str> = self
            .torus_point
            .iter()
            .map(|s| if *s < 0 { "-1" } else { "1" })
            .collect();
        if self.exponent.len() == 1 {
            let half = &self.exponent[0];
            let arg = if half.is_one() {
                "i".to_string()
            } else if *half == BigRational::new(1.into(), 2.into()) {
                "i/2".to_string()
            } else {
                format!("i·{half}")
            };
            let lam = &self.lambda[0];
            let pi = if lam.is_one() {
                "πi".to_string()
            } else {
                format!("{lam}πi")
            };
            write!(f, "Exp({arg}) = exp({pi}) = {}", signs[0])
        } else {
            write!(
                f,
                "Exp(iλ/2) with λ/2 = ({}); torus coordinates ({})",
                exps.join(", "),
                signs.join(", ")
            )
        }
    }
}

/// Describes the component of `Exp(iλ/2)` for a σ-fixed `λ`.
pub fn representative_description(lattice: &InvolutiveLattice, lambda: &[BigInt]) -> Result<ComponentRepresentative> {
    if lambda.len() != lattice.rank() {
        return Err(Error::DimensionMismatch {
            context: "representative".into(),
            expected: lattice.rank(),
            found: lambda.len(),
        });
    }
    if lattice.apply(lambda)? != lambda {
        return Err(Error::Domain("representative λ is not fixed by σ".into()));
    }
    let torus_point = lambda.iter().map(|x| if x.is_even() { 1 } else { -1 }).collect();
    Ok(ComponentRepresentative {
        lambda: lambda.to_vec(),
        exponent: halve(lambda),
        torus_point,
        is_identity: lambda.iter().all(Zero::is_zero),
    })
}

/// Block-diagonal sum of two specs.
pub fn direct_sum(a: &RealGroupSpec, b: &RealGroupSpec) -> RealGroupSpec {
    let (na, nb) = (a.rank(), b.rank());
    let lattice = a.lattice.direct_sum(&b.lattice);
    let pad = |v: &Vec<BigInt>, before: usize, after: usize| {
        let mut out = vec![BigInt::zero(); before];
        out.extend(v.iter().cloned());
        out.resize(before + v.len() + after, BigInt::zero());
        out
    };
    let coroots: Vec<Vec<BigInt>> = a
        .coroots
        .iter()
        .map(|c| pad(c, 0, nb))
        .chain(b.coroots.iter().map(|c| pad(c, na, 0)))
        .collect();
    let name = match (a.name(), b.name()) {
        (Some(x), Some(y)) => Some(format!("{x} x {y}")),
        _ => None,
    };
    RealGroupSpec::new(lattice, coroots, name).expect("direct sum of valid specs is valid")
}

/// Renders a rational exponent the way the JSON output expects ("1/2", "0", "-3/2").
pub fn rational_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `|x|` as `u64`, for reporting invariant factors.
pub fn factor_u64(x: &BigInt) -> Option<u64> {
    x.abs().to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::big_vec;

    fn rank(sigma: &[&[i64]], coroots: &[&[i64]]) -> usize {
        pi0(&RealGroupSpec::from_i64(sigma, coroots).unwrap()).unwrap().rank
    }

    fn h1(sigma: &[&[i64]], coroots: &[&[i64]]) -> Vec<BigInt> {
        h1_gamma(&RealGroupSpec::from_i64(sigma, coroots).unwrap())
            .unwrap()
            .invariant_factors
    }

    #[test]
    fn tori() {
        let split = pi0(&RealGroupSpec::from_i64(&[&[1]], &[]).unwrap()).unwrap();
        assert_eq!(split.rank, 1);
        assert_eq!(split.representatives, vec![big_vec(&[1])]);
        assert_eq!(split.order(), Some(2));
        assert_eq!(rank(&[&[-1]], &[]), 0);
        assert_eq!(rank(&[&[0, 1], &[1, 0]], &[]), 0);
    }

    #[test]
    fn rank_one_semisimple() {
        assert_eq!(rank(&[&[1]], &[&[1]]), 0, "SL2");
        assert_eq!(rank(&[&[1]], &[&[2]]), 1, "PGL2");
    }

    #[test]
    fn general_linear() {
        assert_eq!(rank(&[&[1, 0], &[0, 1]], &[&[1, -1]]), 1);
        assert_eq!(
            rank(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]], &[&[1, -1, 0], &[0, 1, -1]]),
            1
        );
    }

    #[test]
    fn elliptic_lattices() {
        assert_eq!(rank(&[&[-1, 0], &[0, 1]], &[]), 1);
        assert_eq!(rank(&[&[-1, 1], &[0, 1]], &[]), 0);
        let rect = pi0(&RealGroupSpec::from_i64(&[&[-1, 0], &[0, 1]], &[]).unwrap()).unwrap();
        assert_eq!(rect.representatives, vec![big_vec(&[0, 1])]);
    }

    #[test]
    fn h1_examples() {
        assert_eq!(h1(&[&[1]], &[&[2]]), big_vec(&[2]));
        assert_eq!(h1(&[&[-1]], &[&[2]]), big_vec(&[2]));
        assert!(h1(&[&[0, 1], &[1, 0]], &[]).is_empty());
    }

    #[test]
    fn h1_cocycle_and_coboundary_lattices() {
        let spec = RealGroupSpec::from_i64(&[&[-1]], &[&[4]]).unwrap();
        let h = h1_gamma(&spec).unwrap();
        // Z¹ = ℤ ∩ (0 + 2ℤ) / 4ℤ ≅ ℤ/2, B¹ = 4ℤ/4ℤ = 0.
        assert_eq!(h.cocycle_invariants().unwrap(), big_vec(&[2]));
        assert_eq!(h.coboundary_invariants().unwrap(), big_vec(&[1]));
        assert_eq!(h.invariant_factors, big_vec(&[2]));
    }

    #[test]
    fn coroot_validation() {
        // σ = swap, Q∨ = ⟨(1, 0)⟩ is not σ-stable.
        let err = RealGroupSpec::from_i64(&[&[0, 1], &[1, 0]], &[&[1, 0]]).unwrap_err();
        assert!(err.to_string().contains("coroots[0]"), "{err}");
        let err = RealGroupSpec::from_i64(&[&[1]], &[&[1, 2]]).unwrap_err();
        assert!(err.is_input_error());
    }

    #[test]
    fn representatives_text() {
        let l = InvolutiveLattice::identity(1);
        let r = representative_description(&l, &big_vec(&[1])).unwrap();
        assert_eq!(r.to_string(), "Exp(i/2) = exp(πi) = -1");
        let id = representative_description(&l, &big_vec(&[0])).unwrap();
        assert!(id.is_identity);

        let rect = InvolutiveLattice::from_i64(&[&[-1, 0], &[0, 1]]).unwrap();
        let r = representative_description(&rect, &big_vec(&[0, 1])).unwrap();
        assert_eq!(
            r.exponent,
            vec![BigRational::zero(), BigRational::new(1.into(), 2.into())]
        );
        assert!(representative_description(&rect, &big_vec(&[1, 0])).is_err());
    }

    #[test]
    fn sums() {
        let gm = RealGroupSpec::from_i64(&[&[1]], &[]).unwrap();
        let sl2 = RealGroupSpec::from_i64(&[&[1]], &[&[1]]).unwrap();
        let aniso = RealGroupSpec::from_i64(&[&[-1]], &[]).unwrap();
        assert_eq!(pi0(&direct_sum(&gm, &sl2)).unwrap().rank, 1);
        assert_eq!(pi0(&direct_sum(&aniso, &aniso)).unwrap().rank, 0);
        assert_eq!(pi0(&direct_sum(&gm, &gm)).unwrap().rank, 2);
    }

    #[test]
    fn abelian_variety_path_matches() {
        let l = InvolutiveLattice::from_i64(&[&[-1, 1], &[0, 1]]).unwrap();
        let a = pi0_without_coroots(&l).unwrap();
        let b = pi0(&RealGroupSpec::without_coroots(l, None)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rational_strings() {
        assert_eq!(rational_string(&BigRational::new(1.into(), 2.into())), "1/2");
        assert_eq!(rational_string(&BigRational::new(4.into(), 2.into())), "2");
        assert_eq!(rational_string(&BigRational::new((-3).into(), 2.into())), "-3/2");
    }
}
