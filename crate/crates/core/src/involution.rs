//! Lattices with an integral involution.
//!
//! Fractional lattices never appear: the projection lattices `Λ̃±` are kept
//! as their doubles `(I ± σ)Λ`, so `2Λ̃₊` is an honest sublattice of `ℤⁿ`.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{kernel_lattice, quotient_invariants, IntegerMatrix, LatticeBasis};

/// `Λ = ℤⁿ` together with an integral `σ` satisfying `σ² = I`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InvolutiveLattice {
    sigma: IntegerMatrix,
}

impl InvolutiveLattice {
    pub fn new(sigma: IntegerMatrix) -> Result<Self> {
        if !sigma.is_square() {
            return Err(Error::InvalidSpec {
                field: "sigma".into(),
                message: format!("must be square, got {}x{}", sigma.rows(), sigma.cols()),
            });
        }
        let square = sigma.mul(&sigma)?;
        let n = sigma.rows();
        for i in 0..n {
            for j in 0..n {
                let expected = if i == j { BigInt::one() } else { BigInt::from(0) };
                if *square.get(i, j) != expected {
                    return Err(Error::InvalidSpec {
                        field: "sigma".into(),
                        message: format!(
                            "sigma^2 is not the identity: entry [{i}][{j}] of sigma^2 is {}",
                            square.get(i, j)
                        ),
                    });
                }
            }
        }
        Ok(InvolutiveLattice { sigma })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::new(IntegerMatrix::from_i64(rows))
    }

    pub fn identity(n: usize) -> Self {
        InvolutiveLattice {
            sigma: IntegerMatrix::identity(n),
        }
    }

    pub fn negation(n: usize) -> Self {
        InvolutiveLattice {
            sigma: IntegerMatrix::identity(n).neg(),
        }
    }

    /// `n` copies of the coordinate swap on `ℤ²`.
    pub fn swaps(n: usize) -> Self {
        let swap = IntegerMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        let sigma = (0..n).fold(IntegerMatrix::zeros(0, 0), |acc, _| acc.block_diag(&swap));
        InvolutiveLattice { sigma }
    }

    pub fn rank(&self) -> usize {
        self.sigma.rows()
    }

    pub fn sigma(&self) -> &IntegerMatrix {
        &self.sigma
    }

    pub fn apply(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        self.sigma.apply(v)
    }

    pub fn direct_sum(&self, other: &InvolutiveLattice) -> Self {
        InvolutiveLattice {
            sigma: self.sigma.block_diag(&other.sigma),
        }
    }

    /// Conjugate involution `U σ U⁻¹` for unimodular `u` (with inverse `u_inv`).
    pub fn conjugate(&self, u: &IntegerMatrix, u_inv: &IntegerMatrix) -> Result<Self> {
        Self::new(u.mul(&self.sigma)?.mul(u_inv)?)
    }

    fn shifted(&self, sign: i64) -> IntegerMatrix {
        let id = IntegerMatrix::identity(self.rank()).scale(&BigInt::from(sign));
        self.sigma.add(&id).expect("square")
    }
}

/// `Λ₊ = ker(σ − I)`, saturated.
pub fn plus_lattice(l: &InvolutiveLattice) -> LatticeBasis {
    kernel_lattice(&l.shifted(-1))
}

/// `Λ₋ = ker(σ + I)`, saturated.
pub fn minus_lattice(l: &InvolutiveLattice) -> LatticeBasis {
    kernel_lattice(&l.shifted(1))
}

/// `2Λ̃₊ = (I + σ)Λ`.
pub fn doubled_projection_plus(l: &InvolutiveLattice) -> LatticeBasis {
    LatticeBasis::image(&l.shifted(1))
}

/// `2Λ̃₋ = (I − σ)Λ`.
pub fn doubled_projection_minus(l: &InvolutiveLattice) -> LatticeBasis {
    LatticeBasis::image(&l.shifted(-1).neg())
}

/// Checks `2Λ± ⊆ 2Λ̃± ⊆ Λ±`, i.e. `Λ± ⊆ Λ̃± ⊆ ½Λ±` in doubled coordinates.
pub fn sandwich_check(l: &InvolutiveLattice) -> bool {
    let pairs = [
        (plus_lattice(l), doubled_projection_plus(l)),
        (minus_lattice(l), doubled_projection_minus(l)),
    ];
    pairs
        .iter()
        .all(|(eigen, doubled)| eigen.scaled(2).is_sublattice_of(doubled) && doubled.is_sublattice_of(eigen))
}

/// Multiplicities of the indecomposable integral ℤ/2-representations:
/// `a` trivial (split `𝔾_m`), `b` sign (`U₁`), `c` swap (`R_{ℂ/ℝ}𝔾_m`), so
/// that `T(ℝ) ≅ (ℝ^×)ᵃ × U₁ᵇ × (ℂ^×)ᶜ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TorusShape {
    pub split: usize,
    pub anisotropic: usize,
    pub swap: usize,
}

impl TorusShape {
    pub fn rank(&self) -> usize {
        self.split + self.anisotropic + 2 * self.swap
    }
}

/// Reads off the torus type from `[2Λ̃₊ : 2Λ₊] = 2^c` and the eigenlattice ranks.
pub fn classify_torus(l: &InvolutiveLattice) -> Result<TorusShape> {
    let plus = plus_lattice(l);
    let minus = minus_lattice(l);
    let doubled = doubled_projection_plus(l);
    let factors = quotient_invariants(&doubled, &plus.scaled(2))?;
    let index = factors.iter().fold(BigInt::one(), |acc, d| acc * d);
    let bits = index.bits();
    if index.is_zero_or_not_power_of_two() {
        return Err(Error::Internal(format!(
            "index [2Λ̃₊ : 2Λ₊] = {index} is not a power of two"
        )));
    }
    let swap = (bits - 1).to_usize().expect("small");
    let (rp, rm) = (plus.rank(), minus.rank());
    if swap > rp || swap > rm || rp + rm != l.rank() {
        return Err(Error::Internal(format!(
            "inconsistent invariants: rank Λ₊ = {rp}, rank Λ₋ = {rm}, swap count {swap}, n = {}",
            l.rank()
        )));
    }
    Ok(TorusShape {
        split: rp - swap,
        anisotropic: rm - swap,
        swap,
    })
}

trait PowerOfTwo {
    fn is_zero_or_not_power_of_two(&self) -> bool;
}

impl PowerOfTwo for BigInt {
    fn is_zero_or_not_power_of_two(&self) -> bool {
        self.sign() != num_bigint::Sign::Plus || self.trailing_zeros() != Some(self.bits() - 1)
    }
}
