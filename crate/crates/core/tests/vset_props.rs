use cwlab::vset::{
    analyze, classify_by_coefficients, classify_by_power_sums, coset_test, derivative_constancy, functional_linearity,
    omega, power_sum, scale_translate, subspace_structure, Classification, Linearity,
};
use cwlab::{Elem, FiniteField, MultiPoly};
use proptest::prelude::*;

fn gf(spec: &str) -> FiniteField {
    FiniteField::parse(spec).unwrap()
}

fn subsets(f: &FiniteField, min: u32) -> impl Iterator<Item = Vec<Elem>> + '_ {
    let q = f.order();
    (0u32..1 << q)
        .filter(move |m| m.count_ones() >= min)
        .map(move |m| (0..q).filter(|i| m >> i & 1 == 1).map(Elem).collect())
}

#[test]
fn both_criteria_agree_on_every_subset_of_f16() {
    let f = gf("2^4");
    for y in subsets(&f, 2) {
        let (_, by_sums) = classify_by_power_sums(&f, &y).unwrap();
        assert_eq!(by_sums, classify_by_coefficients(&f, &y).unwrap(), "{y:?}");
    }
}

#[test]
fn report_invariants_hold_exhaustively() {
    for spec in ["2^1", "3^1", "2^2", "5^1", "2^3", "3^2", "11^1"] {
        let f = gf(spec);
        let p = f.characteristic() as usize;
        for y in subsets(&f, 2) {
            let r = analyze(&f, &y).unwrap();
            assert!(r.omega <= r.size);
            if r.p_divides_size {
                assert!(r.omega < r.size);
            }
            assert_eq!(r.classification == Classification::Vandermonde, r.omega + 1 == r.size);
            assert_eq!(r.classification == Classification::SuperVandermonde, r.omega == r.size);
            if r.derivative_constant.is_some() {
                assert_eq!(r.classification, Classification::Vandermonde);
                assert_eq!(r.size % p, 0);
            }
            if r.coset_flag {
                assert_eq!(r.classification, Classification::Vandermonde, "{spec} {y:?}");
            }
        }
    }
}

#[test]
fn functional_and_structural_linearity_agree() {
    for spec in ["2^2", "2^3", "3^2", "2^4"] {
        let f = gf(spec);
        for b in f.subfield_degrees() {
            for y in subsets(&f, 1) {
                let structural = subspace_structure(&f, &y, b).unwrap();
                assert_eq!(functional_linearity(&f, &y, b).unwrap(), structural, "{spec} b={b} {y:?}");
                if b == 1 {
                    let is_coset = coset_test(&f, &y).unwrap().is_some();
                    assert_eq!(is_coset, structural != Linearity::Neither);
                }
            }
        }
    }
}

#[test]
fn cosets_of_size_at_least_two_have_constant_derivative() {
    for spec in ["2^2", "2^3", "3^2", "5^1"] {
        let f = gf(spec);
        for y in subsets(&f, 2) {
            if let Some(group) = coset_test(&f, &y).unwrap() {
                assert_eq!(group.len(), y.len());
                let c = derivative_constancy(&f, &y).unwrap();
                assert!(c.is_some_and(|c| !c.is_zero()), "{spec} {y:?}");
            }
        }
    }
}

fn subset_strategy() -> impl Strategy<Value = (FiniteField, Vec<Elem>)> {
    prop::sample::select(vec!["3^3", "5^2", "7^2", "2^5", "13^1"]).prop_flat_map(|s| {
        let f = gf(s);
        let q = f.order();
        (Just(f), prop::collection::btree_set(0..q, 2..=12).prop_map(|s| s.into_iter().map(Elem).collect()))
    })
}

proptest! {
    #[test]
    fn omega_is_scale_invariant((f, y) in subset_strategy(), alpha_seed: u32) {
        let alpha = Elem(1 + alpha_seed % (f.order() - 1));
        let scaled = scale_translate(&f, &y, alpha, Elem::ZERO).unwrap();
        prop_assert_eq!(omega(&f, &scaled).unwrap(), omega(&f, &y).unwrap());
        for k in 1..=y.len() as u64 {
            let expected = f.mul(f.pow(alpha, k), power_sum(&f, &y, k).unwrap());
            prop_assert_eq!(power_sum(&f, &scaled, k).unwrap(), expected);
        }
    }

    #[test]
    fn criteria_agree_on_larger_fields((f, y) in subset_strategy()) {
        let (_, by_sums) = classify_by_power_sums(&f, &y).unwrap();
        prop_assert_eq!(by_sums, classify_by_coefficients(&f, &y).unwrap());
        let phi = MultiPoly::vanishing(&f, &y).unwrap();
        let newton = cwlab::vset::newton_power_sums(&phi).unwrap();
        for (k, pk) in newton.iter().enumerate() {
            prop_assert_eq!(*pk, power_sum(&f, &y, k as u64 + 1).unwrap());
        }
    }
}

/// Translates of a Vandermonde set with p | #Y stay Vandermonde.
#[test]
fn translates_keep_p_divisible_vandermonde_sets() {
    for spec in ["2^3", "3^2", "2^4"] {
        let f = gf(spec);
        let listing = cwlab::census::enumerate_vandermonde(&f, 16, true).unwrap().listing;
        assert!(!listing.is_empty());
        for y in &listing {
            for beta in f.elements() {
                let moved = scale_translate(&f, y, Elem::ONE, beta).unwrap();
                assert_eq!(classify_by_power_sums(&f, &moved).unwrap().1, Classification::Vandermonde);
            }
        }
    }
}
