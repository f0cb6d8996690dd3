//! JSON input and output records.
//!
//! Input: `{"name": str?, "rank": n, "sigma": [[..]..], "coroots": [[..]..]}`.
//! The output record repeats these fields next to the result, so a record can
//! be fed back in as input.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::cohomology::compare_h1;
use crate::component::{denominator_pair, pi0, rational_string, Pi0Result, RealGroupSpec};
use crate::error::{Error, Result};
use crate::involution::{classify_torus, InvolutiveLattice};
use crate::linalg::IntegerMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpecFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub rank: usize,
    pub sigma: Vec<Vec<i64>>,
    #[serde(default)]
    pub coroots: Vec<Vec<i64>>,
    /// Only read by the self-test fixture loader.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_pi0_rank: Option<usize>,
}

impl GroupSpecFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidSpec {
            field: "document".into(),
            message: e.to_string(),
        })
    }

    /// Validates shapes field by field and builds the spec.
    pub fn to_spec(&self) -> Result<RealGroupSpec> {
        let n = self.rank;
        if self.sigma.len() != n {
            return Err(Error::InvalidSpec {
                field: "sigma".into(),
                message: format!("expected {n} rows for rank {n}, found {}", self.sigma.len()),
            });
        }
        for (i, row) in self.sigma.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidSpec {
                    field: format!("sigma[{i}]"),
                    message: format!("expected {n} entries, found {}", row.len()),
                });
            }
        }
        let sigma = IntegerMatrix::from_rows(n, &self.sigma)?;
        let lattice = InvolutiveLattice::new(sigma)?;
        let coroots = self
            .coroots
            .iter()
            .map(|c| c.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        RealGroupSpec::new(lattice, coroots, self.name.clone())
    }

    pub fn from_spec(spec: &RealGroupSpec) -> Result<Self> {
        Ok(GroupSpecFile {
            name: spec.name().map(String::from),
            rank: spec.rank(),
            sigma: spec.sigma().to_i64_rows()?,
            coroots: spec.coroots().iter().map(|c| to_i64_vec(c)).collect::<Result<_>>()?,
            expected_pi0_rank: None,
        })
    }
}

fn to_i64_vec(v: &[BigInt]) -> Result<Vec<i64>> {
    v.iter()
        .map(|x| {
            x.to_i64().ok_or(Error::Overflow {
                context: "vector entry",
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleRecord {
    pub used: String,
    #[serde(rename = "match")]
    pub matched: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pi0Record {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub pi0_rank: usize,
    pub order: u128,
    pub representatives: Vec<Vec<i64>>,
    pub half_representatives: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleRecord>,
    pub rank: usize,
    pub sigma: Vec<Vec<i64>>,
    pub coroots: Vec<Vec<i64>>,
}

impl Pi0Record {
    pub fn new(spec: &RealGroupSpec, result: &Pi0Result, oracle: Option<OracleRecord>) -> Result<Self> {
        let input = GroupSpecFile::from_spec(spec)?;
        let order = u32::try_from(result.rank)
            .ok()
            .and_then(|r| 1u128.checked_shl(r))
            .ok_or(Error::Overflow {
                context: "component group order",
            })?;
        Ok(Pi0Record {
            name: input.name,
            pi0_rank: result.rank,
            order,
            representatives: result
                .representatives
                .iter()
                .map(|v| to_i64_vec(v))
                .collect::<Result<_>>()?,
            half_representatives: result
                .half_representatives()
                .iter()
                .map(|v| v.iter().map(rational_string).collect())
                .collect(),
            oracle,
            rank: input.rank,
            sigma: input.sigma,
            coroots: input.coroots,
        })
    }

    /// The input part of the record.
    pub fn input(&self) -> GroupSpecFile {
        GroupSpecFile {
            name: self.name.clone(),
            rank: self.rank,
            sigma: self.sigma.clone(),
            coroots: self.coroots.clone(),
            expected_pi0_rank: None,
        }
    }
}

/// Independent check of `pi0` chosen by the shape of `Q∨`:
/// torus classification when `Q∨ = 0`, enumeration of `H¹(ℝ, Λ/Q∨)` when
/// `Q∨` has full rank, and the two denominator constructions otherwise.
/// A disagreement is reported with `matched = false`; errors that prevent the
/// check from running are returned.
pub fn run_oracle(spec: &RealGroupSpec, result: &Pi0Result, cap: u64) -> Result<OracleRecord> {
    let q_rank = spec.coroot_lattice().rank();
    if q_rank == 0 {
        let shape = classify_torus(spec.lattice())?;
        let matched = shape.split == result.rank;
        return Ok(OracleRecord {
            used: "torus-classification".into(),
            matched,
            detail: Some(format!(
                "(split, anisotropic, swap) = ({}, {}, {})",
                shape.split, shape.anisotropic, shape.swap
            )),
        });
    }
    if q_rank == spec.rank() {
        return match compare_h1(spec, cap) {
            Ok(c) => Ok(OracleRecord {
                used: "h1-enumeration".into(),
                matched: true,
                detail: Some(format!(
                    "H¹ factors {:?} on {} elements",
                    c.lattice_formula.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    c.module_size
                )),
            }),
            Err(Error::OracleMismatch(msg)) => Ok(OracleRecord {
                used: "h1-enumeration".into(),
                matched: false,
                detail: Some(msg),
            }),
            Err(e) => Err(e),
        };
    }
    let (plus_part, via_full) = denominator_pair(spec)?;
    Ok(OracleRecord {
        used: "denominator-identity".into(),
        matched: plus_part == via_full,
        detail: None,
    })
}

/// Parses, computes and (optionally) cross-checks one spec document.
pub fn evaluate(text: &str, oracle_cap: Option<u64>) -> Result<Pi0Record> {
    let spec = GroupSpecFile::parse(text)?.to_spec()?;
    let result = pi0(&spec)?;
    let oracle = oracle_cap.map(|cap| run_oracle(&spec, &result, cap)).transpose()?;
    Pi0Record::new(&spec, &result, oracle)
}
