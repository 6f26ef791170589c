use cwlab::census::{census, closed_form_coset_count, enumerate_cosets, enumerate_vandermonde, gl_order};
use cwlab::field::is_prime;
use cwlab::{Error, FiniteField};
use num_bigint::BigUint;

fn fields_up_to_16() -> Vec<FiniteField> {
    let mut out = Vec::new();
    for p in (2..=16).filter(|&p| is_prime(p)) {
        let mut a = 1;
        while p.pow(a) <= 16 {
            out.push(FiniteField::new(p, a, None).unwrap());
            a += 1;
        }
    }
    out
}

/// `Σ_d [n choose d]_p p^{n−d}` by the q-Pascal recurrence.
fn pascal_coset_count(p: u32, n: u32) -> BigUint {
    let pb = BigUint::from(p);
    let n = n as usize;
    let mut row = vec![BigUint::from(1u32)];
    for m in 1..=n {
        let mut next = vec![BigUint::from(1u32); m + 1];
        for k in 1..m {
            next[k] = &row[k - 1] + pb.pow(k as u32) * &row[k];
        }
        row = next;
    }
    row.iter().enumerate().map(|(d, g)| g * pb.pow((n - d) as u32)).sum()
}

#[test]
fn closed_form_matches_enumeration() {
    for f in fields_up_to_16() {
        let c = enumerate_cosets(&f, 16).unwrap();
        assert_eq!(closed_form_coset_count(f.characteristic(), f.degree()), BigUint::from(c.count), "{f}");
    }
}

#[test]
fn closed_form_matches_gaussian_binomials() {
    for p in [2, 3, 5, 7] {
        for n in 0..=7 {
            assert_eq!(closed_form_coset_count(p, n), pascal_coset_count(p, n), "p={p} n={n}");
        }
    }
}

#[test]
fn general_linear_group_orders() {
    // |GL_n(F_p)| = p^{n(n−1)/2} ∏ (p^i − 1)
    for p in [2u32, 3, 5] {
        for n in 0..=5u32 {
            let pb = BigUint::from(p);
            let expected = (1..=n).fold(pb.pow(n * (n.max(1) - 1) / 2), |acc, i| acc * (pb.pow(i) - 1u32));
            assert_eq!(gl_order(p, n), expected);
        }
    }
}

#[test]
fn cosets_are_listed_among_vandermonde_sets() {
    for f in fields_up_to_16() {
        let (report, listing) = census(&f, 16, true).unwrap();
        assert_eq!(report.v_count as usize, listing.len());
        assert!(listing.windows(2).all(|w| w[0] < w[1]), "listing is sorted");
        assert!(report.v_count >= report.c_count_size_ge2);
        assert!(report.v_excludes_sizes_below_2);
        let p = f.characteristic() as usize;
        assert!(listing.iter().all(|s| s.len() >= 2 && s.len() % p == 0));
        let per_size: u64 = report.per_size.values().map(|c| c.vandermonde).sum();
        assert_eq!(per_size, report.v_count);
    }
}

#[test]
fn listing_flag_only_changes_the_listing() {
    let f = FiniteField::parse("2^3").unwrap();
    let with = enumerate_vandermonde(&f, 16, true).unwrap();
    let without = enumerate_vandermonde(&f, 16, false).unwrap();
    assert_eq!((with.count, &with.per_size), (without.count, &without.per_size));
    assert!(without.listing.is_empty());
}

#[test]
fn cap_is_enforced() {
    let f = FiniteField::parse("2^4").unwrap();
    assert_eq!(census(&f, 8, false).unwrap_err(), Error::CensusTooLarge { q: 16, max: 8 });
    let big = FiniteField::parse("2^6").unwrap();
    assert!(matches!(enumerate_vandermonde(&big, 1000, false), Err(Error::CensusTooLarge { .. })));
}
