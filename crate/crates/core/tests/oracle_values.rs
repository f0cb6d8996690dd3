//! Reference values computed independently with mpmath at 40 digits.

#![allow(clippy::excessive_precision)]

use num_complex::Complex64;
use pi0::elliptic::{
    agm_periods, eisenstein, eisenstein_truncated, real_period_by_quadrature, PeriodLattice, RealCubic,
};

fn lattice(re: f64, im: f64) -> PeriodLattice {
    PeriodLattice::new(Complex64::new(1.0, 0.0), Complex64::new(re, im)).unwrap()
}

fn close(got: f64, want: f64, rel: f64) -> bool {
    (got - want).abs() <= rel * want.abs().max(1e-300)
}

#[test]
fn weierstrass_coefficients_of_reference_lattices() {
    // (τ, p, q) for the lattice ℤ + ℤτ.
    let cases = [
        ((0.0, 1.0), -47.268_180_032_308_463, 0.0),
        ((-0.5, 3f64.sqrt() / 2.0), 0.0, -205.206_109_269_889_06),
        ((0.0, 0.3), -4_008.605_340_847_008, 97_687.222_983_189_38),
        ((-0.5, 2.0), -32.442_521_956_346_73, -71.339_167_149_626_29),
    ];
    for ((re, im), p, q) in cases {
        let (p, q): (f64, f64) = (p, q);
        let v = eisenstein(&lattice(re, im));
        let scale = p.abs().max(q.abs());
        assert!((v.p - p).abs() <= 1e-14 * scale, "τ = {re}+{im}i: p = {} vs {p}", v.p);
        assert!((v.q - q).abs() <= 1e-14 * scale, "τ = {re}+{im}i: q = {} vs {q}", v.q);
    }
}

#[test]
fn truncated_sum_agrees_with_series_within_its_tail_bound() {
    for (re, im) in [(0.0, 1.0), (-0.5, 2.0), (0.0, 0.7)] {
        let lat = lattice(re, im);
        let series = eisenstein(&lat);
        let direct = eisenstein_truncated(&lat, 50.0).unwrap();
        let err = (series.p - direct.p).abs().max((series.q - direct.q).abs());
        assert!(
            err <= 10.0 * direct.tail_bound + 1e-9,
            "τ = {re}+{im}i: {err} vs tail {}",
            direct.tail_bound
        );
    }
}

#[test]
fn real_periods() {
    let cases = [
        (-1.0, 0.0, 2.622_057_554_292_119_8),
        (0.0, 1.0, 4.206_546_315_976_362_8),
        (0.0, -1.0, 2.428_650_647_887_581_6),
        (-3.0, 1.0, 2.177_551_426_237_567_5),
        (2.0, -0.5, 2.900_533_605_933_359_5),
    ];
    for (p, q, want) in cases {
        let cubic = RealCubic::new(p, q).unwrap();
        let agm = agm_periods(&cubic).unwrap().omega1.re;
        assert!(close(agm, want, 1e-13), "p={p} q={q}: AGM {agm} vs {want}");
        let quad = real_period_by_quadrature(&cubic);
        assert!(close(quad, want, 1e-9), "p={p} q={q}: quadrature {quad} vs {want}");
    }
}
