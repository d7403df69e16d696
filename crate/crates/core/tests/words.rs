mod common;

use num_rational::Rational64;
use proptest::prelude::*;
use sturmlab::farey::farey_cells;
use sturmlab::permtool::pi_direct;
use sturmlab::sturmian::{
    characteristic_prefix, factor_set, factor_set_from_perm, factor_set_of_word, Factor, Intercept, Rounding,
    WordSpec, DEFAULT_SCAN_FACTOR,
};
use sturmlab::IrrationalSlope;

use common::{oracle_slopes, Decimal};

#[test]
fn characteristic_word_is_a_floor_difference() {
    for (name, alpha, dec) in oracle_slopes(60) {
        let word = characteristic_prefix(&alpha, 2000).unwrap();
        for (i, &letter) in word.iter().enumerate() {
            let i = i as i64;
            // letters follow the slope mod 1
            let want = dec.floor(i + 2) - dec.floor(i + 1) - dec.floor(1);
            assert_eq!(num_bigint::BigInt::from(letter), want, "{name}, i = {i}");
        }
    }
}

#[test]
fn factor_sets_have_n_plus_one_members() {
    for (name, alpha, _) in oracle_slopes(40) {
        for n in 1..=200 {
            let fs = factor_set(&alpha, n).unwrap();
            assert_eq!(fs.factors().len(), n + 1, "{name}, n = {n}");
            assert!(fs.factors().windows(2).all(|w| w[0].bits() > w[1].bits()), "{name}: not anti-lex");
            assert_eq!(fs, factor_set_from_perm(&pi_direct(&alpha, n).unwrap()), "{name}, n = {n}");
        }
    }
}

#[test]
fn factor_weights_take_two_adjacent_values() {
    let alpha = IrrationalSlope::e_inv();
    let dec = Decimal::e_inv(40);
    for n in 1..=80i64 {
        let fs = factor_set(&alpha, n as usize).unwrap();
        let lo = dec.floor(n);
        let weights: std::collections::BTreeSet<_> = fs.iter().map(Factor::weight).collect();
        for w in weights {
            let w = num_bigint::BigInt::from(w);
            assert!(w == lo || w == &lo + 1, "n = {n}");
        }
    }
}

#[test]
fn complement_slope_gives_complement_factors() {
    for (name, alpha, _) in oracle_slopes(40) {
        let red = alpha.reduced().unwrap();
        let other = red.complement().unwrap();
        for n in [1usize, 2, 5, 13, 40] {
            assert_eq!(factor_set(&other, n).unwrap(), factor_set(&red, n).unwrap().complement(), "{name}, n = {n}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn factors_do_not_depend_on_intercept(
        r in -50i64..50,
        s in 1i64..30,
        ceiling in any::<bool>(),
        n in 1usize..25,
        which in 0usize..4,
    ) {
        let (_, alpha, _) = oracle_slopes(30).swap_remove(which);
        let rounding = if ceiling { Rounding::Ceiling } else { Rounding::Floor };
        let spec = WordSpec::new(&alpha, Intercept::Rational(Rational64::new(r, s)), rounding).unwrap();
        let fs = factor_set_of_word(&spec, n, DEFAULT_SCAN_FACTOR).unwrap();
        prop_assert_eq!(fs, factor_set(&alpha, n).unwrap());
    }

    #[test]
    fn factor_sets_are_constant_on_farey_cells(n in 1usize..30, pick in any::<prop::sample::Index>(), k in 0usize..3) {
        let cells = farey_cells(n + 1).unwrap();
        let cell = cells[pick.index(cells.len())];
        let radicands = [2u64, 3, 5, 7];
        let a = cell.interior_surd(radicands[k]).unwrap();
        let b = cell.interior_surd(radicands[k + 1]).unwrap();
        prop_assert!(cell.contains(&a).unwrap() && cell.contains(&b).unwrap());
        prop_assert_eq!(factor_set(&a, n).unwrap(), factor_set(&b, n).unwrap());
    }
}
