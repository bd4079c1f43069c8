//! Seeded identity suites for the closed-form Cauchy-matrix machinery.
//!
//! Each suite draws a fixed number of random instances from a ChaCha8
//! stream keyed by the caller's seed (draws are resampled until the node
//! separation preconditions hold, so every instance is well-posed) and
//! records the worst relative error. Identical seeds reproduce identical
//! instances byte for byte.

use crate::hirota::{Soliton, SolitonParams};
use crate::model::ModelParams;
use crate::numkit::{Complex64, ComplexMatrix};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{
    d_inverse_closed, d_matrix, d_mixed_product, eta_multi_bruteforce, partial_fraction_identity,
};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Outcome of one identity suite.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    /// Which identity family was exercised.
    pub name: &'static str,
    pub instances: usize,
    pub max_rel_err: f64,
    pub tolerance: f64,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.max_rel_err <= self.tolerance
    }
}

fn annulus(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> Complex64 {
    let mag = rng.gen_range(lo..hi);
    let arg = rng.gen_range(0.0..std::f64::consts::TAU);
    Complex64::from_polar(mag, arg)
}

/// Draws `count` nodes in the annulus `[0.5, 2]` with pairwise gaps of at
/// least 0.25, keeping the Cauchy matrices well conditioned.
fn separated_nodes(rng: &mut ChaCha8Rng, count: usize) -> Vec<Complex64> {
    let mut nodes: Vec<Complex64> = Vec::new();
    while nodes.len() < count {
        let cand = annulus(rng, 0.5, 2.0);
        if nodes.iter().all(|z| (z - cand).norm() > 0.25) {
            nodes.push(cand);
        }
    }
    nodes
}

fn soliton_instance(rng: &mut ChaCha8Rng, l: usize) -> (SolitonParams, Vec<usize>) {
    loop {
        let n = rng.gen_range(3..=8usize);
        let model = ModelParams::new(n, ONE).unwrap();
        let solitons: Vec<Soliton> = (0..l)
            .map(|_| {
                Soliton::new(
                    rng.gen_range(1..n),
                    annulus(rng, 0.5, 2.0),
                    Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)),
                )
            })
            .collect();
        let Ok(params) = SolitonParams::new(model, solitons) else {
            continue;
        };
        let indices: Vec<usize> = (0..l).collect();
        if eta_multi_bruteforce(&params, &indices).is_ok() {
            return (params, indices);
        }
    }
}

/// Runs all five identity suites with `instances` draws each.
pub fn run_suite(seed: u64, instances: usize) -> Vec<IdentityReport> {
    vec![
        closed_inverse_vs_lu(seed, instances),
        inverse_product_identity(seed.wrapping_add(1), instances),
        mixed_product_identity(seed.wrapping_add(2), instances),
        interaction_coefficient_factorization(seed.wrapping_add(3), instances),
        root_of_unity_partial_fraction(seed.wrapping_add(4), instances),
    ]
}

/// Closed-form inverse entries against the LU-based inverse.
pub fn closed_inverse_vs_lu(seed: u64, instances: usize) -> IdentityReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..instances {
        let r = rng.gen_range(2..=5usize);
        let mut all = separated_nodes(&mut rng, 2 * r);
        let g = all.split_off(r);
        let f = all;
        let closed = d_inverse_closed(&f, &g).expect("separated draw");
        let lu = d_matrix(&f, &g)
            .expect("separated draw")
            .inverse()
            .expect("Cauchy-type matrices of separated nodes are invertible");
        for i in 0..r {
            for j in 0..r {
                let a = closed.get(i, j);
                let b = lu.get(i, j);
                let err = (a - b).norm() / b.norm().max(1.0);
                worst = worst.max(err);
            }
        }
    }
    IdentityReport {
        name: "closed-form inverse vs LU inverse",
        instances,
        max_rel_err: worst,
        tolerance: 1e-9,
    }
}

/// `D · D⁻¹(closed form) = I`.
pub fn inverse_product_identity(seed: u64, instances: usize) -> IdentityReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..instances {
        let r = rng.gen_range(2..=5usize);
        let mut all = separated_nodes(&mut rng, 2 * r);
        let g = all.split_off(r);
        let f = all;
        let d = d_matrix(&f, &g).expect("separated draw");
        let closed = d_inverse_closed(&f, &g).expect("separated draw");
        let err = d.mul(&closed).sub(&ComplexMatrix::identity(r)).max_abs();
        worst = worst.max(err);
    }
    IdentityReport {
        name: "inverse product residue sum",
        instances,
        max_rel_err: worst,
        tolerance: 1e-10,
    }
}

/// Mixed product `D(f̃,g)·D⁻¹(f,g)` against its closed form.
pub fn mixed_product_identity(seed: u64, instances: usize) -> IdentityReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..instances {
        let r = rng.gen_range(2..=4usize);
        let mut all = separated_nodes(&mut rng, 3 * r);
        let g = all.split_off(2 * r);
        let f = all.split_off(r);
        let ft = all;
        let closed = d_mixed_product(&ft, &f, &g).expect("separated draw");
        let product = d_matrix(&ft, &g)
            .expect("separated draw")
            .mul(&d_inverse_closed(&f, &g).expect("separated draw"));
        let err = closed.sub(&product).max_abs() / product.max_abs().max(1.0);
        worst = worst.max(err);
    }
    IdentityReport {
        name: "mixed Cauchy product closed form",
        instances,
        max_rel_err: worst,
        tolerance: 1e-10,
    }
}

/// Multi-index interaction coefficient: signed permutation sum against
/// the pairwise product, 2 to 4 indices.
pub fn interaction_coefficient_factorization(seed: u64, instances: usize) -> IdentityReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..instances {
        let l = rng.gen_range(2..=4usize);
        let (params, indices) = soliton_instance(&mut rng, l);
        let (perm, product) = eta_multi_bruteforce(&params, &indices).expect("validated draw");
        let err = (perm - product).norm() / (1.0 + product.norm());
        worst = worst.max(err);
    }
    IdentityReport {
        name: "interaction coefficient factorization",
        instances,
        max_rel_err: worst,
        tolerance: 1e-9,
    }
}

/// Root-of-unity partial-fraction resummation.
pub fn root_of_unity_partial_fraction(seed: u64, instances: usize) -> IdentityReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..instances {
        let n = rng.gen_range(2..=9usize);
        let j = rng.gen_range(-12..=12i64);
        let (lhs, rhs) = loop {
            let z = annulus(&mut rng, 0.3, 2.5);
            if let Ok(pair) = partial_fraction_identity(n, j, z) {
                break pair;
            }
        };
        let err = (lhs - rhs).norm() / (1.0 + rhs.norm());
        worst = worst.max(err);
    }
    IdentityReport {
        name: "root-of-unity partial fraction",
        instances,
        max_rel_err: worst,
        tolerance: 1e-10,
    }
}
