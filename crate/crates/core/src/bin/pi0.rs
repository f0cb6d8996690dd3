use std::fmt::Write as _;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use serde::Serialize;

use pi0::catalog;
use pi0::cohomology::{compare_h1, enumeration_cap_from_env};
use pi0::component::{pi0 as compute_pi0, rational_string, representative_description, Pi0Result, RealGroupSpec};
use pi0::elliptic::{self, EllipticReport, LatticeReport, RealCubic};
use pi0::selftest::{self, SelftestOptions};
use pi0::spec_file::{run_oracle, GroupSpecFile, OracleRecord, Pi0Record};
use pi0::{h1_gamma, Error};

#[derive(Parser, Debug)]
#[command(name = "pi0", version, about = "Component groups of real algebraic groups")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Emit a JSON record instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Cross-check results with an independent oracle.
    #[arg(long, global = true)]
    oracle: bool,
    /// Seed for `selftest`.
    #[arg(long, global = true, default_value_t = selftest::DEFAULT_SEED)]
    seed: u64,
    /// Cases per randomized suite in `selftest`.
    #[arg(long, global = true, default_value_t = selftest::DEFAULT_CASES)]
    cases: usize,
    /// Relative tolerance of the Eisenstein round trip.
    #[arg(long, global = true, default_value_t = elliptic::ROUND_TRIP_TOLERANCE)]
    tolerance: f64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute π₀ for a JSON group spec (`-` reads stdin).
    Group { path: PathBuf },
    /// Evaluate a catalog entry, e.g. `gl 3` or `split-torus 1 + sl 2`; no argument runs the golden list.
    Catalog {
        #[arg(num_args = 0.., allow_hyphen_values = true)]
        entry: Vec<String>,
    },
    /// Component count of y² = x³ + px + q, or of the curve of a lattice.
    Elliptic {
        /// Coefficient p (decimal, or exact `a/b`).
        #[arg(long, allow_negative_numbers = true, requires = "q", conflicts_with = "lattice")]
        p: Option<String>,
        /// Coefficient q (decimal, or exact `a/b`).
        #[arg(long, allow_negative_numbers = true, requires = "p")]
        q: Option<String>,
        /// Lattice basis ω₁ = re1 + i·im1, ω₂ = re2 + i·im2.
        #[arg(long, num_args = 4, value_names = ["RE1", "IM1", "RE2", "IM2"], allow_negative_numbers = true)]
        lattice: Option<Vec<f64>>,
    },
    /// H¹(ℝ, iΛ/iQ∨) by the lattice formula for a JSON group spec.
    H1 { path: PathBuf },
    /// Run the randomized check battery.
    Selftest {
        /// Extra spec files carrying `expected_pi0_rank`.
        #[arg(long = "fixture")]
        fixtures: Vec<PathBuf>,
    },
}

/// Outcome of a subcommand: text or JSON plus the exit status.
struct Output {
    body: String,
    failed: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let outcome = std::panic::catch_unwind(|| run(&cli));
    match outcome {
        Ok(Ok(out)) => {
            print!("{}", out.body);
            if out.failed {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_input_error() { 1 } else { 2 })
        }
        Err(_) => {
            eprintln!("error: internal failure (panic)");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<Output, Error> {
    let g = &cli.global;
    if !(g.tolerance > 0.0 && g.tolerance.is_finite()) {
        return Err(Error::Domain(format!(
            "--tolerance must be a positive number, got {}",
            g.tolerance
        )));
    }
    match &cli.command {
        Command::Group { path } => cmd_group(g, path),
        Command::Catalog { entry } => cmd_catalog(g, entry),
        Command::Elliptic { p, q, lattice } => cmd_elliptic(g, p.as_deref(), q.as_deref(), lattice.as_deref()),
        Command::H1 { path } => cmd_h1(g, path),
        Command::Selftest { fixtures } => cmd_selftest(g, fixtures),
    }
}

fn read_input(path: &Path) -> Result<String, Error> {
    let mut text = String::new();
    let res = if path == Path::new("-") {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|e| Error::Domain(format!("cannot read {}: {e}", path.display())))?;
    Ok(text)
}

fn json<T: Serialize>(value: &T) -> Result<String, Error> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| Error::Internal(format!("serialization failed: {e}")))
}

fn fmt_vec<T: ToString>(v: &[T]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

fn describe_pi0(spec: &RealGroupSpec, result: &Pi0Result, oracle: Option<&OracleRecord>) -> Result<String, Error> {
    let mut s = String::new();
    if let Some(name) = spec.name() {
        let _ = writeln!(s, "group: {name}");
    }
    let order = match result.order() {
        Some(o) => o.to_string(),
        None => format!("2^{}", result.rank),
    };
    let _ = writeln!(
        s,
        "π₀ G(ℝ) ≅ (ℤ/2)^{}: rank {}, order {}",
        result.rank, result.rank, order
    );
    if result.rank == 0 {
        let _ = writeln!(s, "G(ℝ) is connected");
    } else {
        let _ = writeln!(s, "representatives:");
        for (lambda, half) in result.representatives.iter().zip(result.half_representatives()) {
            let d = representative_description(spec.lattice(), lambda)?;
            let halves: Vec<String> = half.iter().map(rational_string).collect();
            let _ = writeln!(s, "  λ = {}  λ/2 = ({})  {d}", fmt_vec(lambda), halves.join(", "));
        }
    }
    if let Some(o) = oracle {
        let verdict = if o.matched { "match" } else { "MISMATCH" };
        let _ = write!(s, "oracle: {} {verdict}", o.used);
        if let Some(d) = &o.detail {
            let _ = write!(s, " [{d}]");
        }
        s.push('\n');
    }
    Ok(s)
}

fn report_spec(g: &Global, spec: &RealGroupSpec, expected: Option<usize>) -> Result<Output, Error> {
    let result = compute_pi0(spec)?;
    let oracle = if g.oracle {
        Some(run_oracle(spec, &result, enumeration_cap_from_env())?)
    } else {
        None
    };
    let mut failed = oracle.as_ref().is_some_and(|o| !o.matched);
    let mut body = if g.json {
        json(&Pi0Record::new(spec, &result, oracle.clone())?)?
    } else {
        describe_pi0(spec, &result, oracle.as_ref())?
    };
    if let Some(want) = expected {
        if want != result.rank {
            failed = true;
            if !g.json {
                let _ = writeln!(body, "expected rank {want}: FAIL");
            }
        } else if !g.json {
            let _ = writeln!(body, "expected rank {want}: ok");
        }
    }
    Ok(Output { body, failed })
}

fn cmd_group(g: &Global, path: &Path) -> Result<Output, Error> {
    let spec = GroupSpecFile::parse(&read_input(path)?)?.to_spec()?;
    report_spec(g, &spec, None)
}

fn cmd_catalog(g: &Global, entry: &[String]) -> Result<Output, Error> {
    if !entry.is_empty() {
        let e = catalog::build(entry)?;
        return report_spec(g, &e.spec, Some(e.expected));
    }
    let suite = selftest::catalog_suite();
    let failed = !suite.ok();
    let body = if g.json {
        json(&suite)?
    } else {
        let mut s = String::new();
        for e in catalog::golden()? {
            let rank = compute_pi0(&e.spec)?.rank;
            let verdict = if rank == e.expected { "ok" } else { "FAIL" };
            let _ = writeln!(s, "{:<22} rank {rank} (expected {}) {verdict}", e.name, e.expected);
        }
        let _ = writeln!(s, "{} passed, {} failed", suite.passed, suite.failed);
        s
    };
    Ok(Output { body, failed })
}

fn parse_rational(flag: &str, s: &str) -> Result<BigRational, Error> {
    let bad = || Error::Domain(format!("--{flag}: cannot parse `{s}` as a rational a/b"));
    let (n, d) = s.split_once('/').ok_or_else(bad)?;
    let n: BigInt = n.trim().parse().map_err(|_| bad())?;
    let d: BigInt = d.trim().parse().map_err(|_| bad())?;
    if d == BigInt::from(0) {
        return Err(Error::Domain(format!("--{flag}: zero denominator in `{s}`")));
    }
    Ok(BigRational::new(n, d))
}

fn parse_decimal(flag: &str, s: &str) -> Result<f64, Error> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| Error::Domain(format!("--{flag}: cannot parse `{s}` as a number")))?;
    if !v.is_finite() {
        return Err(Error::Domain(format!("--{flag}: `{s}` is not finite")));
    }
    Ok(v)
}

fn cmd_elliptic(g: &Global, p: Option<&str>, q: Option<&str>, lattice: Option<&[f64]>) -> Result<Output, Error> {
    match (p, q, lattice) {
        (Some(p), Some(q), None) => {
            let cubic = if p.contains('/') || q.contains('/') {
                let to_rat = |flag, s: &str| {
                    if s.contains('/') {
                        parse_rational(flag, s)
                    } else {
                        let v = parse_decimal(flag, s)?;
                        BigRational::from_float(v)
                            .ok_or_else(|| Error::Domain(format!("--{flag}: `{s}` is not finite")))
                    }
                };
                RealCubic::from_rational(&to_rat("p", p)?, &to_rat("q", q)?)?
            } else {
                RealCubic::new(parse_decimal("p", p)?, parse_decimal("q", q)?)?
            };
            let report = elliptic::elliptic_pi0_with_tolerance(&cubic, g.tolerance)?;
            let body = if g.json {
                json(&report)?
            } else {
                describe_curve(&report)
            };
            Ok(Output { body, failed: false })
        }
        (None, None, Some(l)) => {
            let report = elliptic::lattice_pi0(Complex64::new(l[0], l[1]), Complex64::new(l[2], l[3]))?;
            let body = if g.json {
                json(&report)?
            } else {
                describe_lattice(&report)
            };
            Ok(Output { body, failed: false })
        }
        _ => Err(Error::Domain(
            "give either --p and --q, or --lattice RE1 IM1 RE2 IM2".into(),
        )),
    }
}

fn describe_curve(r: &EllipticReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "curve: y² = x³ + ({})x + ({})", r.p, r.q);
    let _ = writeln!(s, "D = {}", r.discriminant);
    let roots: Vec<String> = r.real_roots.iter().map(|&x| fixed(x)).collect();
    let _ = writeln!(s, "real roots: {} [{}]", r.real_roots.len(), roots.join(", "));
    let _ = writeln!(
        s,
        "routes: discriminant {}, root count {}, period lattice {}",
        r.by_discriminant, r.by_root_count, r.by_period_lattice
    );
    let _ = writeln!(
        s,
        "lattice: {} τ = {} + {}i, pi0 rank {}",
        r.shape,
        fixed(r.tau.0),
        fixed(r.tau.1),
        r.pi0_rank
    );
    let _ = writeln!(
        s,
        "{} component{}",
        r.components,
        if r.components == 1 { "" } else { "s" }
    );
    s
}

fn describe_lattice(r: &LatticeReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "shape: {} τ = {} + {}i, real period {}",
        r.shape,
        fixed(r.tau.0),
        fixed(r.tau.1),
        r.real_period
    );
    let _ = writeln!(s, "p = {:e}, q = {:e} (tail bound {:e})", r.p, r.q, r.tail_bound);
    let _ = writeln!(s, "D = {:e}", r.discriminant);
    let _ = writeln!(
        s,
        "pi0 rank {}: {} component{}",
        r.pi0_rank,
        r.components,
        if r.components == 1 { "" } else { "s" }
    );
    s
}

#[derive(Serialize)]
struct H1Record {
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    invariant_factors: Vec<String>,
    cocycle_invariants: Vec<String>,
    coboundary_invariants: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<OracleRecord>,
}

fn strings(v: &[BigInt]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn cmd_h1(g: &Global, path: &Path) -> Result<Output, Error> {
    let spec = GroupSpecFile::parse(&read_input(path)?)?.to_spec()?;
    let h = h1_gamma(&spec)?;
    let oracle = if g.oracle {
        if spec.coroot_lattice().rank() < spec.rank() {
            return Err(Error::InfiniteQuotient {
                rank: spec.coroot_lattice().rank(),
                ambient: spec.rank(),
            });
        }
        Some(match compare_h1(&spec, enumeration_cap_from_env()) {
            Ok(c) => OracleRecord {
                used: "h1-enumeration".into(),
                matched: true,
                detail: Some(format!("{} elements", c.module_size)),
            },
            Err(Error::OracleMismatch(m)) => OracleRecord {
                used: "h1-enumeration".into(),
                matched: false,
                detail: Some(m),
            },
            Err(e) => return Err(e),
        })
    } else {
        None
    };
    let record = H1Record {
        name: spec.name().map(String::from),
        invariant_factors: strings(&h.invariant_factors),
        cocycle_invariants: strings(&h.cocycle_invariants()?),
        coboundary_invariants: strings(&h.coboundary_invariants()?),
        oracle,
    };
    let failed = record.oracle.as_ref().is_some_and(|o| !o.matched);
    let body = if g.json {
        json(&record)?
    } else {
        let mut s = String::new();
        let group = if record.invariant_factors.is_empty() {
            "0".to_string()
        } else {
            record
                .invariant_factors
                .iter()
                .map(|d| format!("ℤ/{d}"))
                .collect::<Vec<_>>()
                .join(" × ")
        };
        let _ = writeln!(s, "H¹(ℝ, iΛ/iQ∨) ≅ {group}");
        let _ = writeln!(s, "Z¹ invariants {}", fmt_vec(&record.cocycle_invariants));
        let _ = writeln!(s, "B¹ invariants {}", fmt_vec(&record.coboundary_invariants));
        if let Some(o) = &record.oracle {
            let verdict = if o.matched { "match" } else { "MISMATCH" };
            let _ = writeln!(
                s,
                "oracle: {} {verdict} [{}]",
                o.used,
                o.detail.as_deref().unwrap_or("")
            );
        }
        s
    };
    Ok(Output { body, failed })
}

fn cmd_selftest(g: &Global, fixtures: &[PathBuf]) -> Result<Output, Error> {
    let fixtures = fixtures
        .iter()
        .map(|p| GroupSpecFile::parse(&read_input(p)?))
        .collect::<Result<Vec<_>, Error>>()?;
    let report = selftest::run(&SelftestOptions {
        seed: g.seed,
        cases: g.cases,
        enumeration_cap: enumeration_cap_from_env(),
        round_trip_tolerance: g.tolerance,
        fixtures,
    });
    let body = if g.json {
        json(&report)?
    } else {
        let mut s = String::new();
        let _ = writeln!(s, "seed {}, {} cases per suite", report.seed, report.cases);
        for suite in &report.suites {
            let verdict = if suite.ok() { "ok" } else { "FAIL" };
            let _ = writeln!(
                s,
                "{:<24} {:>5} passed {:>5} failed  {verdict}",
                suite.name, suite.passed, suite.failed
            );
            for f in &suite.failures {
                let _ = writeln!(s, "    {f}");
            }
        }
        let _ = writeln!(s, "total: {} passed, {} failed", report.passed(), report.failed());
        s
    };
    Ok(Output {
        body,
        failed: !report.ok(),
    })
}

/// Twelve decimals, without a sign on values that round to zero.
fn fixed(x: f64) -> String {
    let s = format!("{x:.12}");
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
        _ => s,
    }
}
