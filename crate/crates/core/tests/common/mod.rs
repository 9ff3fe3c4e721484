//! Shared fixtures for the integration test targets: the fan catalog,
//! deterministic random unimodular maps, and fan images under them.
//!
//! Each integration test target compiles its own copy of this module and
//! typically uses only part of it.
#![allow(dead_code)]

use fanmori::builders::{
    fan_hirzebruch, fan_p1_power, fan_point, fan_projective_space,
    fan_projectivized_split_bundle, fan_projectivized_tangent_p1_power, product_fan,
};
use fanmori::divisor::TDivisor;
use fanmori::fan::Fan;
use fanmori::lattice::IntMatrix;
use num_bigint::BigInt;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct CatalogEntry {
    pub name: &'static str,
    pub fan: Fan,
}

/// The reference corpus: every fan here is smooth, complete, and
/// projective, spanning dimensions 0 through 7.
pub fn catalog() -> Vec<CatalogEntry> {
    let p1 = fan_projective_space(1).unwrap();
    let p2 = fan_projective_space(2).unwrap();
    let entry = |name: &'static str, fan: Fan| CatalogEntry { name, fan };
    vec![
        entry("point", fan_point()),
        entry("p1", p1.clone()),
        entry("p2", p2.clone()),
        entry("p3", fan_projective_space(3).unwrap()),
        entry("p5", fan_projective_space(5).unwrap()),
        entry("p7", fan_projective_space(7).unwrap()),
        entry("p1pow2", fan_p1_power(2).unwrap()),
        entry("p1pow3", fan_p1_power(3).unwrap()),
        entry("p1pow4", fan_p1_power(4).unwrap()),
        entry("hirzebruch0", fan_hirzebruch(0)),
        entry("hirzebruch1", fan_hirzebruch(1)),
        entry("hirzebruch2", fan_hirzebruch(2)),
        entry("hirzebruch3", fan_hirzebruch(3)),
        entry("p1xp2", product_fan(&p1, &p2).unwrap()),
        entry("ptangent2", fan_projectivized_tangent_p1_power(2).unwrap()),
        entry("ptangent3", fan_projectivized_tangent_p1_power(3).unwrap()),
        entry("pbundle_p1_023", {
            let degrees = vec![
                TDivisor::from_i64(&[0, 0]),
                TDivisor::from_i64(&[0, 2]),
                TDivisor::from_i64(&[0, 3]),
            ];
            fan_projectivized_split_bundle(&p1, &degrees).unwrap()
        }),
    ]
}

/// Apply a lattice map to every ray, keeping the cone combinatorics.
pub fn image_fan(fan: &Fan, matrix: &IntMatrix) -> Fan {
    let rays = fan.rays().iter().map(|r| matrix.map_vector(r)).collect();
    let cones = fan
        .max_cones()
        .iter()
        .map(|c| c.rays().to_vec())
        .collect();
    Fan::new(fan.rank(), rays, cones)
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn max_abs_entry(m: &IntMatrix) -> BigInt {
    let mut best = BigInt::from(0);
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            let a = m.at(r, c).abs();
            if a > best {
                best = a;
            }
        }
    }
    best
}

/// A random unimodular `d x d` matrix, produced from a short product of
/// elementary row operations and rejection-sampled until every entry has
/// absolute value at most `bound`.
pub fn random_unimodular(rng: &mut ChaCha8Rng, d: usize, bound: i64) -> IntMatrix {
    assert!(d >= 1 && bound >= 1);
    loop {
        let mut m = IntMatrix::identity(d);
        let ops = rng.gen_range(d..=d + 3);
        for _ in 0..ops {
            let i = rng.gen_range(0..d);
            match rng.gen_range(0..3) {
                0 if d >= 2 => {
                    // Add a small multiple of another row.
                    let mut j = rng.gen_range(0..d);
                    while j == i {
                        j = rng.gen_range(0..d);
                    }
                    let c = BigInt::from([-2i64, -1, 1, 2][rng.gen_range(0..4)]);
                    for col in 0..d {
                        let val = m.at(i, col) + &c * m.at(j, col);
                        m.set(i, col, val);
                    }
                }
                1 if d >= 2 => {
                    // Swap two rows.
                    let mut j = rng.gen_range(0..d);
                    while j == i {
                        j = rng.gen_range(0..d);
                    }
                    for col in 0..d {
                        let a = m.at(i, col).clone();
                        let b = m.at(j, col).clone();
                        m.set(i, col, b);
                        m.set(j, col, a);
                    }
                }
                _ => {
                    // Negate a row.
                    for col in 0..d {
                        let val = -m.at(i, col);
                        m.set(i, col, val);
                    }
                }
            }
        }
        if max_abs_entry(&m) <= BigInt::from(bound) {
            debug_assert!(m.is_unimodular().unwrap());
            return m;
        }
    }
}
