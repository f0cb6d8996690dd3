//! The randomized check battery behind `pi0 selftest`.
//!
//! Every suite draws from its own seeded stream, so a `(seed, cases)` pair
//! always produces the same case list.

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::catalog;
use crate::cohomology::compare_h1;
use crate::component::{denominator_pair, direct_sum, h1_gamma, pi0, pi0_lattices, pi0_without_coroots, RealGroupSpec};
use crate::elliptic::{
    eisenstein, elliptic_pi0_with_tolerance, normalize_lattice, period_lattice_with_tolerance, RealCubic,
};
use crate::error::{Error, Result};
use crate::involution::{classify_torus, sandwich_check};
use crate::linalg::quotient_invariants;
use crate::random;
use crate::spec_file::GroupSpecFile;

pub const DEFAULT_SEED: u64 = 20240229;
pub const DEFAULT_CASES: usize = 200;
/// Failure messages kept per suite.
const MAX_MESSAGES: usize = 5;

#[derive(Clone, Debug, Default, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub passed: usize,
    pub failed: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        SuiteReport {
            name: name.into(),
            ..Default::default()
        }
    }

    fn record(&mut self, case: impl FnOnce() -> Result<()>, label: impl FnOnce() -> String) {
        match case() {
            Ok(()) => self.passed += 1,
            Err(e) => {
                self.failed += 1;
                if self.failures.len() < MAX_MESSAGES {
                    self.failures.push(format!("{}: {e}", label()));
                }
            }
        }
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub cases: usize,
    pub suites: Vec<SuiteReport>,
}

impl SelftestReport {
    pub fn passed(&self) -> usize {
        self.suites.iter().map(|s| s.passed).sum()
    }

    pub fn failed(&self) -> usize {
        self.suites.iter().map(|s| s.failed).sum()
    }

    pub fn ok(&self) -> bool {
        self.failed() == 0
    }
}

#[derive(Clone, Debug)]
pub struct SelftestOptions {
    pub seed: u64,
    pub cases: usize,
    pub enumeration_cap: u64,
    pub round_trip_tolerance: f64,
    /// Extra specs with an expected `π₀` rank.
    pub fixtures: Vec<GroupSpecFile>,
}

impl Default for SelftestOptions {
    fn default() -> Self {
        SelftestOptions {
            seed: DEFAULT_SEED,
            cases: DEFAULT_CASES,
            enumeration_cap: crate::cohomology::DEFAULT_ENUMERATION_CAP,
            round_trip_tolerance: crate::elliptic::ROUND_TRIP_TOLERANCE,
            fixtures: Vec::new(),
        }
    }
}

fn fail(msg: String) -> Result<()> {
    Err(Error::OracleMismatch(msg))
}

/// All invariant factors of `Λ₊/(2Λ̃₊ + Q∨₊)` lie in `{1, 2}`. Computed
/// from the lattices directly, not from [`pi0`]'s own check.
pub fn elementary_two(spec: &RealGroupSpec) -> Result<()> {
    let lat = pi0_lattices(spec)?;
    let factors = quotient_invariants(&lat.plus, &lat.denominator)?;
    let two = BigInt::from(2);
    match factors.iter().find(|d| !d.is_one() && **d != two) {
        Some(d) => fail(format!("invariant factor {d} in {factors:?}")),
        None => Ok(()),
    }
}

pub fn catalog_suite() -> SuiteReport {
    let mut s = SuiteReport::new("catalog");
    match catalog::golden() {
        Ok(entries) => {
            for e in entries {
                s.record(
                    || {
                        let r = pi0(&e.spec)?.rank;
                        if r == e.expected {
                            Ok(())
                        } else {
                            fail(format!("rank {r}, expected {}", e.expected))
                        }
                    },
                    || e.name.clone(),
                );
            }
        }
        Err(e) => s.record(|| Err(e), || "building the catalog".into()),
    }
    s
}

/// `h1_gamma` against enumeration on random full-rank specs (rank ≤ 4,
/// `|Λ/Q∨| ≤ 500`).
pub fn h1_oracle_suite(seed: u64, cases: usize, cap: u64) -> SuiteReport {
    let mut rng = random::rng(seed, 1);
    let mut s = SuiteReport::new("h1-oracle");
    for i in 0..cases {
        let spec = random::full_rank_spec(&mut rng, 4, 500);
        s.record(
            || {
                compare_h1(&spec, cap)?;
                elementary_two(&spec)
            },
            || {
                format!(
                    "case {i} sigma={} coroots={:?}",
                    spec.sigma(),
                    spec.coroot_lattice().matrix()
                )
            },
        );
    }
    s
}

/// `pi0` rank with `Q∨ = 0` against the torus classification (rank ≤ 6).
pub fn torus_oracle_suite(seed: u64, cases: usize) -> SuiteReport {
    let mut rng = random::rng(seed, 2);
    let mut s = SuiteReport::new("torus-oracle");
    for i in 0..cases {
        let (lattice, built) = random::involution(&mut rng, 6);
        s.record(
            || {
                let spec = RealGroupSpec::without_coroots(lattice.clone(), None);
                let shape = classify_torus(&lattice)?;
                let rank = pi0(&spec)?.rank;
                if shape != built {
                    return fail(format!("classified {shape:?}, built {built:?}"));
                }
                if rank != shape.split {
                    return fail(format!("pi0 rank {rank}, split count {}", shape.split));
                }
                if pi0_without_coroots(&lattice)?.rank != rank {
                    return fail("coroot-free path disagrees".into());
                }
                if !sandwich_check(&lattice) {
                    return fail("sandwich inclusions fail".into());
                }
                elementary_two(&spec)
            },
            || format!("case {i} sigma={}", lattice.sigma()),
        );
    }
    s
}

/// Base-change invariance, direct-sum additivity and the denominator identity.
pub fn structural_suite(seed: u64, cases: usize) -> SuiteReport {
    let mut rng = random::rng(seed, 3);
    let mut s = SuiteReport::new("structural");
    for i in 0..cases {
        let a = random::spec(&mut rng, 4);
        let b = random::spec(&mut rng, 3);
        let (u, u_inv) = random::unimodular(&mut rng, a.rank());
        s.record(
            || {
                let changed = a.base_change(&u, &u_inv)?;
                let (ra, rc) = (pi0(&a)?, pi0(&changed)?);
                if ra.rank != rc.rank {
                    return fail(format!("base change moved rank {} to {}", ra.rank, rc.rank));
                }
                let (ha, hc) = (h1_gamma(&a)?, h1_gamma(&changed)?);
                if ha.invariant_factors != hc.invariant_factors {
                    return fail(format!(
                        "base change moved H¹ {:?} to {:?}",
                        ha.invariant_factors, hc.invariant_factors
                    ));
                }
                let sum = direct_sum(&a, &b);
                let (rb, rs) = (pi0(&b)?.rank, pi0(&sum)?.rank);
                if rs != ra.rank + rb {
                    return fail(format!("rank of sum {rs} != {} + {rb}", ra.rank));
                }
                let (plus_part, via_full) = denominator_pair(&a)?;
                if plus_part != via_full {
                    return fail(format!(
                        "denominators differ: {:?} vs {:?}",
                        plus_part.matrix(),
                        via_full.matrix()
                    ));
                }
                elementary_two(&a)?;
                elementary_two(&changed)?;
                elementary_two(&sum)
            },
            || format!("case {i} sigma={} coroots={:?}", a.sigma(), a.coroot_lattice().matrix()),
        );
    }
    s
}

/// Three-route agreement on random curves.
pub fn elliptic_suite(seed: u64, cases: usize, tolerance: f64) -> SuiteReport {
    let mut rng = random::rng(seed, 4);
    let mut s = SuiteReport::new("elliptic-routes");
    for i in 0..cases {
        let (p, q) = random::cubic(&mut rng);
        s.record(
            || elliptic_pi0_with_tolerance(&RealCubic::new(p, q)?, tolerance).map(|_| ()),
            || format!("case {i} p={p} q={q}"),
        );
    }
    s
}

/// Largest deviation of the normalized `τ` after lattice → (p, q) → lattice.
pub fn lattice_round_trip_error(lattice: &crate::elliptic::PeriodLattice, tolerance: f64) -> Result<f64> {
    let original = normalize_lattice(lattice.omega1, lattice.omega2)?;
    let values = eisenstein(lattice);
    let cubic = RealCubic::with_discriminant(values.p, values.q, values.discriminant)?;
    let back = period_lattice_with_tolerance(&cubic, tolerance)?;
    let again = normalize_lattice(back.omega1, back.omega2)?;
    if again.shape != original.shape {
        return fail(format!("shape {} came back as {}", original.shape, again.shape)).map(|_| f64::INFINITY);
    }
    Ok((again.tau - original.tau).norm())
}

/// Eisenstein round trip on random conjugation-stable lattices.
pub fn lattice_suite(seed: u64, cases: usize, tolerance: f64) -> SuiteReport {
    let mut rng = random::rng(seed, 5);
    let mut s = SuiteReport::new("eisenstein-round-trip");
    for i in 0..cases {
        let (lattice, tau) = random::real_lattice(&mut rng);
        s.record(
            || {
                let err = lattice_round_trip_error(&lattice, tolerance)?;
                if err <= tolerance {
                    Ok(())
                } else {
                    fail(format!("normalized τ moved by {err:e}"))
                }
            },
            || format!("case {i} tau={tau}"),
        );
    }
    s
}

pub fn fixture_suite(fixtures: &[GroupSpecFile]) -> SuiteReport {
    let mut s = SuiteReport::new("fixtures");
    for (i, f) in fixtures.iter().enumerate() {
        s.record(
            || {
                let rank = pi0(&f.to_spec()?)?.rank;
                match f.expected_pi0_rank {
                    Some(want) if want != rank => fail(format!("rank {rank}, fixture expects {want}")),
                    _ => Ok(()),
                }
            },
            || format!("fixture {i} ({})", f.name.as_deref().unwrap_or("unnamed")),
        );
    }
    s
}

pub fn run(opts: &SelftestOptions) -> SelftestReport {
    let (seed, n) = (opts.seed, opts.cases);
    let mut suites = vec![
        catalog_suite(),
        h1_oracle_suite(seed, n, opts.enumeration_cap),
        torus_oracle_suite(seed, n),
        structural_suite(seed, n),
        elliptic_suite(seed, n, opts.round_trip_tolerance),
        lattice_suite(seed, n.div_ceil(4), opts.round_trip_tolerance),
    ];
    if !opts.fixtures.is_empty() {
        suites.push(fixture_suite(&opts.fixtures));
    }
    SelftestReport { seed, cases: n, suites }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_battery_passes() {
        let report = run(&SelftestOptions {
            cases: 10,
            ..Default::default()
        });
        for s in &report.suites {
            assert!(s.ok(), "{}: {:?}", s.name, s.failures);
        }
    }

    #[test]
    fn bad_fixture_fails() {
        let bad =
            GroupSpecFile::parse(r#"{"rank": 1, "sigma": [[1]], "coroots": [[2]], "expected_pi0_rank": 0}"#).unwrap();
        let s = fixture_suite(&[bad]);
        assert_eq!((s.passed, s.failed), (0, 1));
    }
}
