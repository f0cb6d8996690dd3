//! Named groups with known component groups.

use num_bigint::BigInt;
use num_complex::Complex64;

use crate::component::{direct_sum, RealGroupSpec};
use crate::elliptic::{conjugation_spec, normalize_lattice};
use crate::error::{Error, Result};
use crate::involution::InvolutiveLattice;

/// Families understood by [`build`]; the flag says whether a size parameter is taken.
pub const FAMILIES: &[(&str, bool)] = &[
    ("split-torus", true),
    ("anisotropic-torus", true),
    ("weil-restriction", true),
    ("sl", true),
    ("gl", true),
    ("pgl2", false),
    ("elliptic-rect", false),
    ("elliptic-rhombic", false),
];

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub parameters: Vec<usize>,
    pub spec: RealGroupSpec,
    /// Known rank of `π₀`.
    pub expected: usize,
}

/// Builds one family member, e.g. `("gl", Some(3))`.
pub fn entry(family: &str, n: Option<usize>) -> Result<CatalogEntry> {
    let takes_param = FAMILIES
        .iter()
        .find(|(f, _)| *f == family)
        .map(|(_, p)| *p)
        .ok_or_else(|| Error::Domain(format!("unknown catalog entry `{family}`")))?;
    let n = match (takes_param, n) {
        (true, Some(n)) => Some(n),
        (true, None) => return Err(Error::Domain(format!("`{family}` needs a size parameter"))),
        (false, Some(_)) => return Err(Error::Domain(format!("`{family}` takes no parameter"))),
        (false, None) => None,
    };
    let size = n.unwrap_or(0);
    let check_size = |min: usize| {
        if size < min || size > 64 {
            Err(Error::Domain(format!(
                "`{family}` needs a size in {min}..=64, got {size}"
            )))
        } else {
            Ok(())
        }
    };
    let (spec, expected) = match family {
        "split-torus" => {
            check_size(1)?;
            (
                RealGroupSpec::without_coroots(InvolutiveLattice::identity(size), None),
                size,
            )
        }
        "anisotropic-torus" => {
            check_size(1)?;
            (
                RealGroupSpec::without_coroots(InvolutiveLattice::negation(size), None),
                0,
            )
        }
        "weil-restriction" => {
            check_size(1)?;
            (RealGroupSpec::without_coroots(InvolutiveLattice::swaps(size), None), 0)
        }
        "sl" => {
            check_size(2)?;
            // Λ = Q∨ = ℤ^{n−1}: simply connected, split.
            let m = size - 1;
            let coroots = (0..m).map(|i| unit(m, i)).collect();
            (RealGroupSpec::new(InvolutiveLattice::identity(m), coroots, None)?, 0)
        }
        "gl" => {
            check_size(1)?;
            let coroots = (0..size - 1)
                .map(|i| {
                    let mut v = unit(size, i);
                    v[i + 1] = BigInt::from(-1);
                    v
                })
                .collect();
            (RealGroupSpec::new(InvolutiveLattice::identity(size), coroots, None)?, 1)
        }
        "pgl2" => (RealGroupSpec::from_i64(&[&[1]], &[&[2]])?, 1),
        "elliptic-rect" => {
            let lat = normalize_lattice(Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0))?;
            (conjugation_spec(&lat)?, 1)
        }
        "elliptic-rhombic" => {
            let lat = normalize_lattice(Complex64::new(1.0, 0.0), Complex64::new(-0.5, 3f64.sqrt() / 2.0))?;
            (conjugation_spec(&lat)?, 0)
        }
        _ => unreachable!("family list and builder out of sync"),
    };
    let name = match n {
        Some(n) => format!("{family} {n}"),
        None => family.to_string(),
    };
    Ok(CatalogEntry {
        spec: spec.with_name(name.clone()),
        name,
        parameters: n.into_iter().collect(),
        expected,
    })
}

fn unit(n: usize, i: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::from(0); n];
    v[i] = BigInt::from(1);
    v
}

/// Parses tokens such as `["gl", "3"]` or `["split-torus", "1", "+", "sl", "2"]`.
/// A product's expected rank is the sum of its factors'.
pub fn build(tokens: &[String]) -> Result<CatalogEntry> {
    let joined = tokens.join(" ");
    let mut factors = Vec::new();
    for part in joined.split('+') {
        let words: Vec<&str> = part.split_whitespace().collect();
        let entry = match words.as_slice() {
            [family] => entry(family, None)?,
            [family, n] => {
                let n = n.parse::<usize>().map_err(|_| {
                    Error::Domain(format!(
                        "size parameter `{n}` of `{family}` is not a non-negative integer"
                    ))
                })?;
                entry(family, Some(n))?
            }
            [] => return Err(Error::Domain(format!("empty factor in catalog expression `{joined}`"))),
            _ => return Err(Error::Domain(format!("cannot parse catalog factor `{}`", part.trim()))),
        };
        factors.push(entry);
    }
    let mut iter = factors.into_iter();
    let first = iter
        .next()
        .ok_or_else(|| Error::Domain("no catalog entry given".into()))?;
    Ok(iter.fold(first, |acc, f| {
        let name = format!("{} + {}", acc.name, f.name);
        CatalogEntry {
            spec: direct_sum(&acc.spec, &f.spec).with_name(name.clone()),
            name,
            parameters: acc.parameters.into_iter().chain(f.parameters).collect(),
            expected: acc.expected + f.expected,
        }
    }))
}

/// The fixed list checked by the self-test and the golden tests.
pub fn golden() -> Result<Vec<CatalogEntry>> {
    let mut out = Vec::new();
    for n in 1..=4 {
        out.push(entry("split-torus", Some(n))?);
        out.push(entry("anisotropic-torus", Some(n))?);
        out.push(entry("weil-restriction", Some(n))?);
        out.push(entry("gl", Some(n))?);
    }
    for n in 2..=5 {
        out.push(entry("sl", Some(n))?);
    }
    out.push(entry("pgl2", None)?);
    out.push(entry("elliptic-rect", None)?);
    out.push(entry("elliptic-rhombic", None)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::component::pi0;

    fn tokens(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    #[test]
    fn golden_entries_match_expectations() {
        for e in golden().unwrap() {
            assert_eq!(pi0(&e.spec).unwrap().rank, e.expected, "{}", e.name);
        }
    }

    #[test]
    fn products() {
        let e = build(&tokens("split-torus 1 + sl 2")).unwrap();
        assert_eq!((e.expected, pi0(&e.spec).unwrap().rank), (1, 1));
        let e = build(&tokens("split-torus 1 + split-torus 1")).unwrap();
        assert_eq!(pi0(&e.spec).unwrap().rank, 2);
        let e = build(&tokens("gl 3+pgl2")).unwrap();
        assert_eq!(pi0(&e.spec).unwrap().rank, 2);
    }

    #[test]
    fn bad_names() {
        assert!(build(&tokens("so 3")).is_err());
        assert!(build(&tokens("gl")).is_err());
        assert!(build(&tokens("pgl2 2")).is_err());
        assert!(build(&tokens("sl 1")).is_err());
        assert!(build(&tokens("gl x")).is_err());
        assert!(build(&tokens("gl 2 +")).is_err());
    }
}
