mod common;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use sturmlab::farey::{
    b_range_search, congruence_test, exact_integral, farey_cells, locate_cell, perm_on_cell, sign_sum,
    simplices_congruent, Congruence, FareyCell, Fraction,
};
use sturmlab::permtool::{b_alpha, pi_direct};
use sturmlab::sturmian::factor_set;
use sturmlab::IrrationalSlope;

use common::{inversion_sign, oracle_slopes};

fn totient(n: u64) -> u64 {
    (1..=n).filter(|&k| num_integer::gcd(k, n) == 1).count() as u64
}

#[test]
fn cell_counts_and_lengths() {
    for n in 1..=100usize {
        let cells = farey_cells(n).unwrap();
        let farey_len = 1 + (1..=n as u64).map(totient).sum::<u64>();
        assert_eq!(cells.len() as u64, farey_len - 1, "n = {n}");
        let total = cells.iter().fold(BigRational::zero(), |acc, c| acc + c.length());
        assert!(total.is_one(), "n = {n}: lengths sum to {total}");
        for c in &cells {
            assert_eq!(c.left.den * c.right.num - c.left.num * c.right.den, 1);
            let w = c.witness().den as usize;
            assert!(n < w && w <= 2 * n.max(1), "n = {n}, witness {}", c.witness());
        }
    }
}

fn check_cells(n: usize, count: usize, seed: u64) {
    let cells = farey_cells(n).unwrap();
    let mut state = seed;
    for _ in 0..count {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let cell = cells[(state >> 33) as usize % cells.len()];
        let pi = perm_on_cell(&cell, n).unwrap();
        for k in [2u64, 3] {
            let alpha = cell.interior_surd(k).unwrap();
            assert!(cell.contains(&alpha).unwrap());
            assert_eq!(pi, pi_direct(&alpha, n).unwrap(), "n = {n}, cell {cell}, k = {k}");
        }
    }
}

#[test]
fn permutations_are_constant_on_cells() {
    check_cells(5, 50, 1);
    check_cells(10, 50, 2);
    check_cells(20, 50, 3);
    check_cells(30, 20, 4);
}

#[test]
fn located_cells_hold_the_slope() {
    for (name, alpha, _) in oracle_slopes(30) {
        for n in [1usize, 2, 5, 17, 60] {
            let cell = locate_cell(&alpha, n).unwrap();
            assert!(cell.contains(&alpha).unwrap(), "{name}, n = {n}");
            assert_eq!(perm_on_cell(&cell, n).unwrap(), pi_direct(&alpha, n).unwrap(), "{name}, n = {n}");
        }
    }
    let cell = locate_cell(&IrrationalSlope::phi(), 5).unwrap();
    assert_eq!(perm_on_cell(&cell, 5).unwrap().one_line(), &[5, 2, 4, 1, 3]);
}

#[test]
fn small_cells() {
    let half_to_one = FareyCell {
        left: Fraction { num: 1, den: 2 },
        right: Fraction { num: 1, den: 1 },
    };
    assert_eq!(perm_on_cell(&half_to_one, 2).unwrap().one_line(), &[2, 1]);
    let bad = FareyCell {
        left: Fraction { num: 0, den: 1 },
        right: Fraction { num: 1, den: 1 },
    };
    assert_eq!(perm_on_cell(&bad, 3).unwrap_err().code(), "witness_collision");
}

#[test]
fn integral_is_length_weighted() {
    for n in 1..=12 {
        let r = exact_integral(n).unwrap();
        assert!(r.length_sum.is_one());
        let by_hand = farey_cells(n)
            .unwrap()
            .iter()
            .map(|c| c.length() * BigRational::from_integer(BigInt::from(perm_on_cell(c, n).unwrap().order())))
            .fold(BigRational::zero(), |a, b| a + b);
        assert_eq!(r.value, by_hand, "n = {n}");
    }
}

#[test]
fn sign_sums_track_direct_signs() {
    for (name, alpha, _) in oracle_slopes(30) {
        let mut running = 0i64;
        let mut best = 0i64;
        for n in 1..=300u64 {
            running += i64::from(inversion_sign(&pi_direct(&alpha, n as usize).unwrap()));
            best = best.max(running.abs());
            let r = sign_sum(&alpha, n).unwrap();
            assert_eq!((r.final_sum, r.max_abs), (running, best), "{name}, N = {n}");
        }
    }
    assert_eq!(sign_sum(&IrrationalSlope::e(), 10).unwrap().final_sum, -4);
    let one = sign_sum(&IrrationalSlope::phi(), 1).unwrap();
    assert_eq!((one.final_sum, one.max_abs), (1, 1));
}

#[test]
fn b_range_finds_least_witness() {
    let alpha = IrrationalSlope::e_inv();
    assert_eq!(b_range_search(&alpha, 0, 10).unwrap(), Some(1));
    let k = b_range_search(&alpha, 7, 10_000).unwrap().unwrap();
    assert_eq!(b_alpha(&alpha, k as usize).unwrap(), 7);
    assert!((1..k as usize).all(|j| b_alpha(&alpha, j).unwrap() != 7));
}

#[test]
fn congruence_is_reflexive_and_symmetric() {
    let slopes: Vec<IrrationalSlope> = oracle_slopes(20).into_iter().map(|(_, a, _)| a).collect();
    for n in 1..=8 {
        for a in &slopes {
            assert_eq!(congruence_test(a, a, n).unwrap(), Congruence::Congruent);
            let comp = a.complement().unwrap();
            assert_eq!(congruence_test(a, &comp, n).unwrap(), Congruence::Congruent);
            for b in &slopes {
                assert_eq!(congruence_test(a, b, n).unwrap(), congruence_test(b, a, n).unwrap());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn congruence_ignores_cell_representative(n in 2usize..10, i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let cells = farey_cells(n + 1).unwrap();
        let (ci, cj) = (cells[i.index(cells.len())], cells[j.index(cells.len())]);
        let (a1, a2) = (ci.interior_surd(2).unwrap(), ci.interior_surd(5).unwrap());
        let b = cj.interior_surd(3).unwrap();
        prop_assert_eq!(congruence_test(&a1, &b, n).unwrap(), congruence_test(&a2, &b, n).unwrap());
        let (fa, fb) = (factor_set(&a1, n).unwrap(), factor_set(&b, n).unwrap());
        if simplices_congruent(&fa, &fb) {
            prop_assert!(fa == fb || fa == fb.complement(), "congruent but unrelated: {} vs {}", a1, b);
        }
    }
}
