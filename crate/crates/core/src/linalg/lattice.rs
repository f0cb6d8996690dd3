use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::normal_form::{hnf, snf};
use super::IntegerMatrix;
use crate::error::{Error, Result};

/// A sublattice of `ℤⁿ`, stored as the nonzero rows of its Hermite normal
/// form. Two bases compare equal iff they span the same lattice.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeBasis {
    ambient: usize,
    basis: IntegerMatrix,
    pivots: Vec<usize>,
}

/// Structure of a finite-or-not quotient `super/sub`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientGroup {
    /// Invariant factors, one per rank of `super`: units, then torsion, then
    /// zeros for free summands.
    pub invariants: Vec<BigInt>,
    /// For every invariant factor other than 1, a vector of `super` (ambient
    /// coordinates) generating that cyclic summand.
    pub generators: Vec<Vec<BigInt>>,
}

impl QuotientGroup {
    /// Invariant factors with the trivial (unit) ones dropped.
    pub fn nontrivial(&self) -> Vec<BigInt> {
        self.invariants.iter().filter(|d| !d.is_one()).cloned().collect()
    }

    /// Order of the group, or `None` if it has a free part.
    pub fn order(&self) -> Option<BigInt> {
        self.invariants
            .iter()
            .try_fold(BigInt::one(), |acc, d| (!d.is_zero()).then(|| acc * d))
    }
}

impl LatticeBasis {
    /// Lattice spanned by the rows of `generators` (any number, any rank).
    pub fn from_generators(generators: &IntegerMatrix) -> Self {
        let herm = hnf(generators);
        let basis = herm.h.select_rows(|i| i < herm.rank);
        LatticeBasis {
            ambient: generators.cols(),
            basis,
            pivots: herm.pivots,
        }
    }

    pub fn from_vectors(ambient: usize, vectors: &[Vec<BigInt>]) -> Result<Self> {
        let m = IntegerMatrix::from_rows(ambient, vectors)?;
        Ok(Self::from_generators(&m))
    }

    pub fn from_i64(ambient: usize, vectors: &[&[i64]]) -> Result<Self> {
        let owned: Vec<Vec<i64>> = vectors.iter().map(|v| v.to_vec()).collect();
        let m = IntegerMatrix::from_rows(ambient, &owned)?;
        Ok(Self::from_generators(&m))
    }

    pub fn zero(ambient: usize) -> Self {
        Self::from_generators(&IntegerMatrix::zeros(0, ambient))
    }

    /// The standard lattice `ℤⁿ`.
    pub fn full(ambient: usize) -> Self {
        Self::from_generators(&IntegerMatrix::identity(ambient))
    }

    /// Image of `ℤⁿ` under `m` acting on column vectors.
    pub fn image(m: &IntegerMatrix) -> Self {
        Self::from_generators(&m.transpose())
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.rank() == 0
    }

    /// Basis vectors as the rows of a `rank × ambient` matrix.
    pub fn matrix(&self) -> &IntegerMatrix {
        &self.basis
    }

    pub fn vectors(&self) -> Vec<Vec<BigInt>> {
        self.basis.row_vectors()
    }

    /// Coordinates of `v` in this basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        if v.len() != self.ambient {
            return None;
        }
        let mut residual = v.to_vec();
        let mut coords = Vec::with_capacity(self.rank());
        for (i, &p) in self.pivots.iter().enumerate() {
            let pivot = self.basis.get(i, p);
            let (q, r) = residual[p].div_rem(pivot);
            if !r.is_zero() {
                return None;
            }
            if !q.is_zero() {
                for (res, b) in residual.iter_mut().zip(self.basis.row(i)) {
                    *res -= &q * b;
                }
            }
            coords.push(q);
        }
        residual.iter().all(Zero::is_zero).then_some(coords)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn is_sublattice_of(&self, other: &LatticeBasis) -> bool {
        self.ambient == other.ambient && (0..self.rank()).all(|i| other.contains(self.basis.row(i)))
    }

    /// Lattice vector with the given coordinates.
    pub fn combination(&self, coords: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.ambient];
        for (i, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, b) in out.iter_mut().zip(self.basis.row(i)) {
                *o += c * b;
            }
        }
        out
    }

    pub fn scaled(&self, k: i64) -> Self {
        Self::from_generators(&self.basis.scale(&BigInt::from(k)))
    }

    /// Image of this lattice under `m` acting on column vectors.
    pub fn map(&self, m: &IntegerMatrix) -> Result<Self> {
        // rows b_i ↦ (m·b_i)ᵀ = b_i·mᵀ
        Ok(Self::from_generators(&self.basis.mul(&m.transpose())?))
    }

    /// `true` iff `ℤⁿ ∩ ℚ·L = L`.
    pub fn is_saturated(&self) -> bool {
        snf(&self.basis).factors.iter().all(One::is_one)
    }

    fn check_ambient(&self, other: &LatticeBasis, context: &str) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch {
                context: context.to_string(),
                expected: self.ambient,
                found: other.ambient,
            });
        }
        Ok(())
    }
}

/// Saturated integer kernel `{x ∈ ℤⁿ : M·x = 0}`.
pub fn kernel_lattice(m: &IntegerMatrix) -> LatticeBasis {
    // U·Mᵀ = H; rows of U matching zero rows of H span the left kernel of Mᵀ.
    let herm = hnf(&m.transpose());
    let kernel = herm.u.select_rows(|i| i >= herm.rank);
    LatticeBasis::from_generators(&kernel)
}

pub fn lattice_sum(a: &LatticeBasis, b: &LatticeBasis) -> Result<LatticeBasis> {
    a.check_ambient(b, "lattice sum")?;
    Ok(LatticeBasis::from_generators(&a.basis.vstack(&b.basis)?))
}

pub fn lattice_intersect(a: &LatticeBasis, b: &LatticeBasis) -> Result<LatticeBasis> {
    a.check_ambient(b, "lattice intersection")?;
    if a.is_zero() || b.is_zero() {
        return Ok(LatticeBasis::zero(a.ambient));
    }
    // Integer relations x·A = y·B are the kernel of [A; -B]ᵀ; x·A runs over A ∩ B.
    let stacked = a.basis.vstack(&b.basis.neg())?;
    let relations = kernel_lattice(&stacked.transpose());
    let k = a.rank();
    let mut gens = IntegerMatrix::zeros(relations.rank(), a.ambient);
    for (r, rel) in relations.vectors().iter().enumerate() {
        let v = a.combination(&rel[..k]);
        for (j, x) in v.into_iter().enumerate() {
            gens.set(r, j, x);
        }
    }
    Ok(LatticeBasis::from_generators(&gens))
}

/// Coordinates of every generator of `sub` in the basis of `sup`, as rows.
fn relative_matrix(sup: &LatticeBasis, sub: &LatticeBasis) -> Result<IntegerMatrix> {
    sup.check_ambient(sub, "quotient")?;
    let mut rows = Vec::with_capacity(sub.rank());
    for (i, v) in sub.vectors().iter().enumerate() {
        match sup.coordinates(v) {
            Some(c) => rows.push(c),
            None => {
                return Err(Error::NotContained {
                    generator: i,
                    vector: v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "),
                })
            }
        }
    }
    IntegerMatrix::from_rows(sup.rank(), &rows)
}

/// Structure of `sup/sub`, including generators of each nontrivial summand.
pub fn quotient_group(sup: &LatticeBasis, sub: &LatticeBasis) -> Result<QuotientGroup> {
    let rel = relative_matrix(sup, sub)?;
    let m = sup.rank();
    let s = snf(&rel);
    let mut invariants = s.factors.clone();
    invariants.resize(m, BigInt::zero());

    // rowspan(rel) = rowspan(diag·V⁻¹): summand i is generated by row i of V⁻¹.
    let v_inv = super::unimodular_inverse(&s.v)
        .ok_or_else(|| Error::Internal("SNF column transform is not unimodular".into()))?;
    // Canonical lifts: reduce modulo the Hermite basis of `sub` in sup-coordinates.
    let sub_coords = LatticeBasis::from_generators(&rel);
    let generators = invariants
        .iter()
        .enumerate()
        .filter(|(_, d)| !d.is_one())
        .map(|(i, _)| {
            let reduced = reduce_modulo(v_inv.row(i), &sub_coords);
            sup.combination(&reduced)
        })
        .collect();
    Ok(QuotientGroup { invariants, generators })
}

/// Invariant factors of `sup/sub` (zeros for free summands).
pub fn quotient_invariants(sup: &LatticeBasis, sub: &LatticeBasis) -> Result<Vec<BigInt>> {
    let rel = relative_matrix(sup, sub)?;
    let mut invariants = snf(&rel).factors;
    invariants.resize(sup.rank(), BigInt::zero());
    Ok(invariants)
}

/// Reduces `v` modulo a Hermite basis so every pivot coordinate lands in
/// `[0, pivot)`.
fn reduce_modulo(v: &[BigInt], lattice: &LatticeBasis) -> Vec<BigInt> {
    let mut out = v.to_vec();
    for (i, &p) in lattice.pivots.iter().enumerate() {
        let pivot = lattice.basis.get(i, p);
        let q = out[p].div_floor(pivot);
        if !q.is_zero() {
            for (o, b) in out.iter_mut().zip(lattice.basis.row(i)) {
                *o -= &q * b;
            }
        }
    }
    out
}
