//! Built-in semigroups used throughout the tests and the CLI, plus the
//! seeded random generator for sweeps.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::table::{
    generate_from_partial_bijections, symmetric_inverse_monoid, InverseSemigroupTable, PartialBijection,
};

pub struct Fixture {
    pub name: &'static str,
    pub table: InverseSemigroupTable,
}

fn from_labelled(labels: &[&str], rows: Vec<Vec<usize>>) -> InverseSemigroupTable {
    InverseSemigroupTable::from_rows(labels.iter().map(|s| s.to_string()).collect(), rows)
        .expect("builtin fixture is an inverse semigroup")
}

/// Meet semilattice `0 < f < e`.
pub fn chain3() -> InverseSemigroupTable {
    from_labelled(&["0", "f", "e"], vec![vec![0, 0, 0], vec![0, 1, 1], vec![0, 1, 2]])
}

/// Meet semilattice `{0, a, b, 1}` with `a ∧ b = 0`: the Boolean algebra 2².
pub fn sl22() -> InverseSemigroupTable {
    from_labelled(
        &["0", "a", "b", "1"],
        vec![vec![0, 0, 0, 0], vec![0, 1, 0, 1], vec![0, 0, 2, 2], vec![0, 1, 2, 3]],
    )
}

/// The five 2×2 matrix units with zero: `eij·ekl = eil` if `j = k`, else 0.
pub fn b2() -> InverseSemigroupTable {
    let labels = ["0", "e11", "e12", "e21", "e22"];
    let unit = |k: usize| ((k - 1) / 2, (k - 1) % 2);
    let rows = (0..5)
        .map(|x| {
            (0..5)
                .map(|y| {
                    if x == 0 || y == 0 {
                        return 0;
                    }
                    let ((i, j), (k, l)) = (unit(x), unit(y));
                    if j == k {
                        1 + 2 * i + l
                    } else {
                        0
                    }
                })
                .collect()
        })
        .collect();
    from_labelled(&labels, rows)
}

/// Symmetric inverse monoid on two points.
pub fn i2() -> InverseSemigroupTable {
    symmetric_inverse_monoid(2)
}

/// The group Z/2 with a zero adjoined.
pub fn z2_0() -> InverseSemigroupTable {
    from_labelled(&["0", "1", "g"], vec![vec![0, 0, 0], vec![0, 1, 2], vec![0, 2, 1]])
}

/// The two-element Boolean algebra `{0, 1}`.
pub fn two() -> InverseSemigroupTable {
    from_labelled(&["0", "1"], vec![vec![0, 0], vec![0, 1]])
}

/// Trivial semigroup `{0}`.
pub fn trivial() -> InverseSemigroupTable {
    from_labelled(&["0"], vec![vec![0]])
}

/// The Boolean algebra 2^k as a meet semilattice, labelled by bit masks.
pub fn boolean_algebra(k: u32) -> InverseSemigroupTable {
    let n = 1usize << k;
    let labels: Vec<String> = (0..n).map(|m| format!("{m:0width$b}", width = k as usize)).collect();
    let rows = (0..n).map(|a| (0..n).map(|b| a & b).collect()).collect();
    InverseSemigroupTable::from_rows(labels, rows).expect("Boolean algebra")
}

pub const BUILTIN_NAMES: [&str; 5] = ["CHAIN3", "SL22", "B2", "I2", "Z2_0"];

pub fn builtin(name: &str) -> Option<InverseSemigroupTable> {
    Some(match name.to_ascii_uppercase().as_str() {
        "CHAIN3" => chain3(),
        "SL22" => sl22(),
        "B2" => b2(),
        "I2" => i2(),
        "Z2_0" => z2_0(),
        "TWO" => two(),
        "TRIVIAL" => trivial(),
        _ => return None,
    })
}

/// The five named fixtures.
pub fn all() -> Vec<Fixture> {
    BUILTIN_NAMES.iter().map(|&name| Fixture { name, table: builtin(name).unwrap() }).collect()
}

/// A randomly generated inverse semigroup together with what produced it.
pub struct RandomFixture {
    pub seed: u64,
    pub generators: Vec<PartialBijection>,
    pub table: InverseSemigroupTable,
}

fn random_map(rng: &mut ChaCha8Rng, degree: usize) -> PartialBijection {
    let mut images: Vec<usize> = (1..=degree).collect();
    for i in (1..images.len()).rev() {
        images.swap(i, rng.gen_range(0..=i));
    }
    let pairs: Vec<(usize, usize)> =
        (1..=degree).zip(images).filter(|_| rng.gen_bool(0.7)).collect();
    PartialBijection::new(degree, &pairs).expect("injective by construction")
}

/// Generates an inverse semigroup from 2–3 random partial bijections of degree
/// at most 4, resampling until the closure has at most `max_order` elements.
/// The same seed always yields the same semigroup.
pub fn random_inverse_semigroup(seed: u64, max_order: usize) -> RandomFixture {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let degree = rng.gen_range(2..=4);
        let count = rng.gen_range(2..=3);
        let gens: Vec<PartialBijection> = (0..count).map(|_| random_map(&mut rng, degree)).collect();
        if let Ok(table) = generate_from_partial_bijections(&gens, max_order + 1) {
            if table.order() <= max_order {
                return RandomFixture { seed, generators: gens, table };
            }
        }
    }
}

/// `count` random fixtures with seeds `base, base+1, ...`.
pub fn random_sweep(base: u64, count: usize, max_order: usize) -> Vec<RandomFixture> {
    (0..count as u64).map(|i| random_inverse_semigroup(base.wrapping_add(i), max_order)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_validate() {
        for f in all() {
            assert!(f.table.validate().is_valid(), "{}", f.name);
        }
        for t in [two(), trivial(), boolean_algebra(3)] {
            assert!(t.validate().is_valid());
        }
    }

    #[test]
    fn fixture_orders() {
        let orders: Vec<usize> = all().iter().map(|f| f.table.order()).collect();
        assert_eq!(orders, vec![3, 4, 5, 7, 3]);
    }

    #[test]
    fn random_fixtures_are_reproducible_and_bounded() {
        for seed in 0..30 {
            let a = random_inverse_semigroup(seed, 12);
            let b = random_inverse_semigroup(seed, 12);
            assert!(a.table.order() <= 12);
            assert_eq!(a.table, b.table);
            assert_eq!(a.generators, b.generators);
            assert!(a.table.validate().is_valid());
        }
    }
}
