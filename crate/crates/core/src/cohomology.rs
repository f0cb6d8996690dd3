//! Brute-force `H¹(ℤ/2, M)` for a finite abelian group `M` with an
//! involution, by enumerating cocycles `σz + z = 0` and coboundaries `a − σa`.
//!
//! This is the independent check of the lattice formula in
//! [`crate::component::h1_gamma`] whenever `Λ/Q∨` is finite.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::component::{h1_gamma, RealGroupSpec};
use crate::error::{Error, Result};
use crate::linalg::{quotient_invariants, snf, unimodular_inverse, IntegerMatrix, LatticeBasis};

pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;

/// Environment variable overriding [`DEFAULT_ENUMERATION_CAP`].
pub const ENUMERATION_CAP_ENV: &str = "PI0_ENUM_CAP";

/// Cap from `PI0_ENUM_CAP`, falling back to the default when unset or unparsable.
pub fn enumeration_cap_from_env() -> u64 {
    std::env::var(ENUMERATION_CAP_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_ENUMERATION_CAP)
}

/// `ℤ/m₁ × … × ℤ/m_k` with an involution given by an integer matrix acting on
/// residue column vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteModule {
    orders: Vec<u64>,
    action: Vec<Vec<u64>>,
}

impl FiniteModule {
    /// Validates that `action` is a well-defined endomorphism and an involution.
    pub fn new(orders: Vec<u64>, action: Vec<Vec<i64>>) -> Result<Self> {
        let k = orders.len();
        if let Some(i) = orders.iter().position(|&m| m == 0) {
            return Err(Error::InvalidSpec {
                field: format!("orders[{i}]"),
                message: "cyclic orders must be at least 1".into(),
            });
        }
        if action.len() != k || action.iter().any(|r| r.len() != k) {
            return Err(Error::InvalidSpec {
                field: "action".into(),
                message: format!("expected a {k}x{k} matrix"),
            });
        }
        let reduced: Vec<Vec<u64>> = action
            .iter()
            .enumerate()
            .map(|(i, row)| row.iter().map(|&a| a.rem_euclid(orders[i] as i64) as u64).collect())
            .collect();
        // Column j must send an element of order m_j to something killed by m_j.
        for i in 0..k {
            for j in 0..k {
                if !(reduced[i][j] as u128 * orders[j] as u128).is_multiple_of(orders[i] as u128) {
                    return Err(Error::InvalidSpec {
                        field: format!("action[{i}][{j}]"),
                        message: "entry does not induce a homomorphism between the cyclic factors".into(),
                    });
                }
            }
        }
        let module = FiniteModule {
            orders,
            action: reduced,
        };
        for j in 0..k {
            let mut e = vec![0u64; k];
            e[j] = 1 % module.orders[j];
            if module.act(&module.act(&e)) != e {
                return Err(Error::InvalidSpec {
                    field: "action".into(),
                    message: format!("action squared is not the identity on generator {j}"),
                });
            }
        }
        Ok(module)
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    /// Action matrix with entries reduced into `[0, m_i)`.
    pub fn action(&self) -> &[Vec<u64>] {
        &self.action
    }

    /// Number of elements, as `u128` to survive large products.
    pub fn size(&self) -> u128 {
        self.orders.iter().map(|&m| m as u128).product()
    }

    pub fn act(&self, z: &[u64]) -> Vec<u64> {
        self.action
            .iter()
            .zip(&self.orders)
            .map(|(row, &m)| {
                let s: u128 = row.iter().zip(z).map(|(&a, &x)| a as u128 * x as u128).sum();
                (s % m as u128) as u64
            })
            .collect()
    }

    fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .zip(&self.orders)
            .map(|((x, y), m)| (x + y) % m)
            .collect()
    }

    fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .zip(&self.orders)
            .map(|((x, y), m)| (x + m - y) % m)
            .collect()
    }

    fn elements(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        let total = self.size();
        (0..total).map(move |mut idx| {
            self.orders
                .iter()
                .map(|&m| {
                    let d = (idx % m as u128) as u64;
                    idx /= m as u128;
                    d
                })
                .collect()
        })
    }

    /// The lattice `ℤᵏ` → `M` relation lattice `⊕ mᵢℤ`.
    fn relation_lattice(&self) -> LatticeBasis {
        LatticeBasis::from_generators(&IntegerMatrix::diagonal(
            &self.orders.iter().map(|&m| BigInt::from(m)).collect::<Vec<_>>(),
        ))
    }
}

/// `Λ/Q∨` in Smith coordinates with the induced action of `σ`.
pub fn finite_quotient_module(spec: &RealGroupSpec) -> Result<FiniteModule> {
    let n = spec.rank();
    let q = spec.coroot_lattice();
    if q.rank() < n {
        return Err(Error::InfiniteQuotient {
            rank: q.rank(),
            ambient: n,
        });
    }
    // U·B·V = S with rows of B spanning Q∨. In coordinates y = x·V the
    // sublattice is ⊕ dᵢℤ, and the row-vector action x ↦ x·σᵀ becomes
    // y ↦ y·(V⁻¹σᵀV).
    let s = snf(q.matrix());
    let v_inv = unimodular_inverse(&s.v).ok_or_else(|| Error::Internal("SNF transform is not unimodular".into()))?;
    let w = v_inv.mul(&spec.sigma().transpose())?.mul(&s.v)?;
    let keep: Vec<usize> = (0..n).filter(|&i| !s.factors[i].is_one()).collect();
    let orders = keep
        .iter()
        .map(|&i| {
            s.factors[i].to_u64().ok_or(Error::Overflow {
                context: "module order",
            })
        })
        .collect::<Result<Vec<u64>>>()?;
    let action = keep
        .iter()
        .enumerate()
        .map(|(a, &i)| {
            keep.iter()
                .map(|&j| {
                    let m = BigInt::from(orders[a]);
                    let e = ((w.get(j, i) % &m) + &m) % &m;
                    e.to_i64().ok_or(Error::Overflow {
                        context: "module action",
                    })
                })
                .collect::<Result<Vec<i64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    FiniteModule::new(orders, action).map_err(|e| Error::Internal(format!("induced action is invalid: {e}")))
}

/// Enumerated `Z¹` and `B¹` together with the structure of `H¹ = Z¹/B¹`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruteH1 {
    pub cocycle_count: u128,
    pub coboundary_count: u128,
    /// Nontrivial invariant factors of `Z¹/B¹`.
    pub invariant_factors: Vec<BigInt>,
}

/// Enumerates the module and computes `H¹` by a Smith form on the lifted
/// subgroups `Z¹ + ⊕mᵢℤ ⊇ B¹ + ⊕mᵢℤ`.
pub fn brute_h1(m: &FiniteModule, cap: u64) -> Result<BruteH1> {
    let size = m.size();
    if size > cap as u128 {
        return Err(Error::EnumerationCap { size, cap });
    }
    let k = m.orders.len();
    let relations = m.relation_lattice();
    let mut cocycles = relations.clone();
    let mut coboundaries = relations.clone();
    let mut cocycle_count = 0u128;
    let mut boundary_set = std::collections::HashSet::new();
    let zero = vec![0u64; k];

    for z in m.elements() {
        let sz = m.act(&z);
        if m.add(&sz, &z) == zero {
            cocycle_count += 1;
            cocycles = extend(cocycles, &z)?;
        }
        let b = m.sub(&z, &sz);
        if boundary_set.insert(b.clone()) {
            coboundaries = extend(coboundaries, &b)?;
        }
    }
    let invariant_factors = quotient_invariants(&cocycles, &coboundaries)?
        .into_iter()
        .filter(|d| !d.is_one())
        .collect::<Vec<_>>();
    if invariant_factors.iter().any(Zero::is_zero) {
        return Err(Error::Internal("brute-force H¹ came out infinite".into()));
    }
    Ok(BruteH1 {
        cocycle_count,
        coboundary_count: boundary_set.len() as u128,
        invariant_factors,
    })
}

fn extend(lattice: LatticeBasis, v: &[u64]) -> Result<LatticeBasis> {
    let v: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
    if lattice.contains(&v) {
        return Ok(lattice);
    }
    let mut gens = lattice.vectors();
    gens.push(v);
    LatticeBasis::from_vectors(lattice.ambient_rank(), &gens)
}

/// Both routes to `H¹(ℝ, Λ/Q∨)` and whether they agree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H1Comparison {
    pub lattice_formula: Vec<BigInt>,
    pub enumeration: Vec<BigInt>,
    pub module_size: u128,
}

/// Runs the lattice formula and the enumeration; disagreement is an error.
pub fn compare_h1(spec: &RealGroupSpec, cap: u64) -> Result<H1Comparison> {
    let module = finite_quotient_module(spec)?;
    let brute = brute_h1(&module, cap)?;
    let formula = h1_gamma(spec)?;
    let mut a = formula.invariant_factors.clone();
    let mut b = brute.invariant_factors.clone();
    a.sort();
    b.sort();
    if a != b {
        return Err(Error::OracleMismatch(format!(
            "H¹ lattice formula gives {a:?}, enumeration of the {}-element module gives {b:?}",
            module.size()
        )));
    }
    Ok(H1Comparison {
        lattice_formula: a,
        enumeration: b,
        module_size: module.size(),
    })
}
