use std::sync::OnceLock;

use cwlab::field::{default_modulus, is_prime};
use cwlab::{Elem, FiniteField};
use proptest::prelude::*;

fn small_fields() -> Vec<FiniteField> {
    let mut out = Vec::new();
    for p in 2..=16u32 {
        if !is_prime(p) {
            continue;
        }
        let mut a = 1;
        while p.pow(a) <= 16 {
            out.push(FiniteField::new(p, a, None).unwrap());
            a += 1;
        }
    }
    // A non-default modulus: t^2 + t + 2 over F_3.
    out.push(FiniteField::parse("3^2/2,1,1").unwrap());
    out
}

#[test]
fn field_axioms_exhaustive_up_to_16() {
    for f in small_fields() {
        let elems: Vec<Elem> = f.elements().collect();
        for &x in &elems {
            assert_eq!(f.add(x, f.zero()), x);
            assert_eq!(f.mul(x, f.one()), x);
            assert_eq!(f.add(x, f.neg(x)), f.zero());
            assert_eq!(f.pow(x, f.order() as u64), x, "{f}: x^q = x");
            if !x.is_zero() {
                assert_eq!(f.mul(x, f.inv(x).unwrap()), f.one());
            }
            for &y in &elems {
                assert_eq!(f.add(x, y), f.add(y, x));
                assert_eq!(f.mul(x, y), f.mul(y, x));
                assert_eq!(f.sub(f.add(x, y), y), x);
                let p = f.characteristic() as u64;
                assert_eq!(f.pow(f.add(x, y), p), f.add(f.pow(x, p), f.pow(y, p)), "{f}: Frobenius");
                for &z in &elems {
                    assert_eq!(f.add(f.add(x, y), z), f.add(x, f.add(y, z)));
                    assert_eq!(f.mul(f.mul(x, y), z), f.mul(x, f.mul(y, z)));
                    assert_eq!(f.mul(x, f.add(y, z)), f.add(f.mul(x, y), f.mul(x, z)));
                }
            }
        }
    }
}

#[test]
fn multiplicative_group_is_cyclic() {
    for f in small_fields() {
        let q = f.order() as u64;
        let has_generator = f.elements().skip(1).any(|g| (1..q - 1).all(|k| f.pow(g, k) != f.one()));
        assert!(has_generator, "{f}");
    }
}

#[test]
fn subfields_are_closed() {
    for spec in ["2^4", "3^2", "2^6", "5^2"] {
        let f = FiniteField::parse(spec).unwrap();
        for b in f.subfield_degrees() {
            let sub = f.subfield(b).unwrap();
            assert_eq!(sub.len() as u32, f.characteristic().pow(b));
            for &x in &sub {
                for &y in &sub {
                    assert!(sub.contains(&f.add(x, y)) && sub.contains(&f.mul(x, y)));
                }
            }
        }
    }
}

fn larger_fields() -> &'static [FiniteField] {
    static FIELDS: OnceLock<Vec<FiniteField>> = OnceLock::new();
    FIELDS.get_or_init(|| {
        ["2^8", "3^5", "5^3", "7^2", "13^2", "251^1", "2^7", "3^2/2,1,1"]
            .into_iter()
            .map(|s| FiniteField::parse(s).unwrap())
            .collect()
    })
}

fn field_strategy() -> impl Strategy<Value = FiniteField> {
    prop::sample::select(larger_fields().to_vec())
}

fn field_with_elems(k: usize) -> impl Strategy<Value = (FiniteField, Vec<Elem>)> {
    field_strategy().prop_flat_map(move |f| {
        let q = f.order();
        (Just(f), prop::collection::vec((0..q).prop_map(Elem), k))
    })
}

proptest! {
    #[test]
    fn ring_laws_on_larger_fields((f, v) in field_with_elems(3)) {
        let (x, y, z) = (v[0], v[1], v[2]);
        prop_assert_eq!(f.mul(x, f.add(y, z)), f.add(f.mul(x, y), f.mul(x, z)));
        prop_assert_eq!(f.mul(f.mul(x, y), z), f.mul(x, f.mul(y, z)));
        prop_assert_eq!(f.add(f.add(x, y), z), f.add(x, f.add(y, z)));
        if !y.is_zero() {
            prop_assert_eq!(f.mul(f.div(x, y).unwrap(), y), x);
        }
    }

    #[test]
    fn powers_add_exponents((f, v) in field_with_elems(1), e1 in 0u64..1000, e2 in 0u64..1000) {
        let x = v[0];
        prop_assert_eq!(f.mul(f.pow(x, e1), f.pow(x, e2)), f.pow(x, e1 + e2));
    }

    #[test]
    fn spec_string_round_trips(f in field_strategy()) {
        let again = FiniteField::parse(&f.spec()).unwrap();
        prop_assert_eq!(&again, &f);
        prop_assert_eq!(f.modulus().len() as u32, f.degree() + 1);
    }

    #[test]
    fn coefficients_encode_the_index((f, v) in field_with_elems(1)) {
        let p = f.characteristic();
        let digits = f.coefficients(v[0]);
        let back = digits.iter().rev().fold(0u32, |acc, &d| acc * p + d);
        prop_assert_eq!(back, v[0].index());
    }
}

#[test]
fn default_moduli_have_no_roots() {
    for (p, a) in [(2, 2), (2, 3), (3, 2), (3, 3), (5, 2), (7, 3)] {
        let m = default_modulus(p, a);
        for x in 0..p as u64 {
            let v = m.iter().rev().fold(0u64, |acc, &c| (acc * x + c as u64) % p as u64);
            assert_ne!(v, 0, "{p}^{a} modulus has root {x}");
        }
    }
}
