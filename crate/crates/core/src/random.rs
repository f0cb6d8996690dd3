//! Seeded generators for randomized checks.

use num_bigint::BigInt;
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::component::RealGroupSpec;
use crate::elliptic::{discriminant, PeriodLattice};
use crate::involution::{InvolutiveLattice, TorusShape};
use crate::linalg::{abs_det, unimodular_inverse, IntegerMatrix, LatticeBasis};

pub type TestRng = ChaCha8Rng;

/// Independent stream `stream` of the generator for `seed`.
pub fn rng(seed: u64, stream: u64) -> TestRng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// A unimodular matrix with small entries, as a product of a signed
/// permutation and a few elementary row operations, together with its inverse.
pub fn unimodular(rng: &mut TestRng, n: usize) -> (IntegerMatrix, IntegerMatrix) {
    let mut u = IntegerMatrix::identity(n);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut p = IntegerMatrix::zeros(n, n);
    for (i, &j) in perm.iter().enumerate() {
        let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
        p.set(i, j, BigInt::from(sign));
    }
    if n >= 2 {
        for _ in 0..2 * n {
            let i = rng.gen_range(0..n);
            let mut j = rng.gen_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            let k = BigInt::from(rng.gen_range(-2i64..=2));
            u.add_row_multiple(i, j, &k);
        }
    }
    let u = u.mul(&p).expect("square");
    let inv = unimodular_inverse(&u).expect("product of unimodular matrices");
    (u, inv)
}

/// `U · blockdiag(I_a, −I_b, swapᶜ) · U⁻¹` with `1 ≤ a + b + 2c ≤ max_rank`,
/// and the shape it was built from.
pub fn involution(rng: &mut TestRng, max_rank: usize) -> (InvolutiveLattice, TorusShape) {
    let n = rng.gen_range(1..=max_rank.max(1));
    let c = rng.gen_range(0..=n / 2);
    let a = rng.gen_range(0..=n - 2 * c);
    let b = n - 2 * c - a;
    let block = InvolutiveLattice::identity(a)
        .direct_sum(&InvolutiveLattice::negation(b))
        .direct_sum(&InvolutiveLattice::swaps(c));
    let (u, u_inv) = unimodular(rng, n);
    let lattice = block.conjugate(&u, &u_inv).expect("conjugate of an involution");
    (
        lattice,
        TorusShape {
            split: a,
            anisotropic: b,
            swap: c,
        },
    )
}

/// A spec with σ-stable, full-rank `Q∨` and `|Λ/Q∨| ≤ max_index`:
/// `Q∨ = mℤⁿ + span(gᵢ, σgᵢ)` for a random modulus `m` and random `gᵢ`.
pub fn full_rank_spec(rng: &mut TestRng, max_rank: usize, max_index: u64) -> RealGroupSpec {
    loop {
        let (lattice, _) = involution(rng, max_rank);
        let n = lattice.rank();
        let m = rng.gen_range(1..=8i64);
        let mut gens: Vec<Vec<BigInt>> = (0..n)
            .map(|j| (0..n).map(|i| BigInt::from(if i == j { m } else { 0 })).collect())
            .collect();
        for _ in 0..rng.gen_range(0..=3) {
            let g: Vec<BigInt> = (0..n).map(|_| BigInt::from(rng.gen_range(-m..=m))).collect();
            let sg = lattice.apply(&g).expect("dimension");
            gens.push(g);
            gens.push(sg);
        }
        let q = LatticeBasis::from_vectors(n, &gens).expect("dimension");
        let index = abs_det(q.matrix());
        if q.rank() != n || index > BigInt::from(max_index) {
            continue;
        }
        // Present Q∨ by its Hermite basis, the form a user would write down.
        if let Ok(spec) = RealGroupSpec::new(lattice, q.vectors(), None) {
            return spec;
        }
    }
}

/// A spec with random (not necessarily full-rank) σ-stable `Q∨`.
pub fn spec(rng: &mut TestRng, max_rank: usize) -> RealGroupSpec {
    let (lattice, _) = involution(rng, max_rank);
    let n = lattice.rank();
    let mut gens = Vec::new();
    for _ in 0..rng.gen_range(0..=n) {
        let g: Vec<BigInt> = (0..n).map(|_| BigInt::from(rng.gen_range(-3i64..=3))).collect();
        gens.push(lattice.apply(&g).expect("dimension"));
        gens.push(g);
    }
    RealGroupSpec::new(lattice, gens, None).expect("span of a σ-orbit is σ-stable")
}

/// `(p, q)` with `|D| ≥ 10⁻³ · max(4|p|³, 27q²)`, coefficients in `[−10, 10]`.
pub fn cubic(rng: &mut TestRng) -> (f64, f64) {
    loop {
        let p = rng.gen_range(-10.0..10.0);
        let q = rng.gen_range(-10.0..10.0);
        let scale = (4.0 * f64::abs(p).powi(3)).max(27.0 * q * q);
        if discriminant(p, q).abs() >= 1e-3 * scale {
            return (p, q);
        }
    }
}

/// A conjugation-stable lattice `r·(ℤ + ℤτ)` with `τ = it` or `−½ + it`,
/// `t ∈ [0.3, 5]`, `r ∈ [0.5, 2]`, presented in a randomly changed basis.
/// The bound on `r` keeps `|p|³ > 1`, where the degeneracy threshold is
/// relative to the coefficients.
pub fn real_lattice(rng: &mut TestRng) -> (PeriodLattice, Complex64) {
    let t = rng.gen_range(0.3..=5.0);
    let re = if rng.gen_bool(0.5) { 0.0 } else { -0.5 };
    let tau = Complex64::new(re, t);
    let r = rng.gen_range(0.5..2.0);
    let (a, b, c, d) = *[(1, 0, 0, 1), (0, 1, -1, 0), (1, 1, 0, 1), (2, 1, 1, 1), (1, 0, -1, 1)]
        .choose(rng)
        .expect("nonempty");
    let (one, tau_r) = (Complex64::new(r, 0.0), tau * r);
    let w1 = one * a as f64 + tau_r * b as f64;
    let w2 = one * c as f64 + tau_r * d as f64;
    (PeriodLattice::new(w1, w2).expect("unimodular change of basis"), tau)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::involution::classify_torus;

    #[test]
    fn deterministic_streams() {
        let a: Vec<(f64, f64)> = (0..5).map(|_| cubic(&mut rng(7, 0))).collect();
        let b: Vec<(f64, f64)> = (0..5).map(|_| cubic(&mut rng(7, 0))).collect();
        assert_eq!(a, b);
        assert_ne!(cubic(&mut rng(7, 0)), cubic(&mut rng(7, 1)));
    }

    #[test]
    fn generated_involutions_have_the_built_shape() {
        let mut r = rng(1, 0);
        for _ in 0..50 {
            let (l, shape) = involution(&mut r, 6);
            assert_eq!(classify_torus(&l).unwrap(), shape);
        }
    }

    #[test]
    fn full_rank_specs_respect_the_bound() {
        let mut r = rng(2, 0);
        for _ in 0..50 {
            let s = full_rank_spec(&mut r, 4, 500);
            assert_eq!(s.coroot_lattice().rank(), s.rank());
            assert!(abs_det(s.coroot_lattice().matrix()) <= BigInt::from(500));
        }
    }
}
