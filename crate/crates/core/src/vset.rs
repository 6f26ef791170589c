//! Power sums, ω(Y) and the Vandermonde classification of subsets of a field.
//!
//! Classification is available through two independent routes: scanning
//! power sums directly ([`classify_by_power_sums`]) and reading the
//! coefficients of the vanishing polynomial φ_Y ([`classify_by_coefficients`]).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, FiniteField};
use crate::mpoly::MultiPoly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Classification {
    NotVandermonde,
    Vandermonde,
    SuperVandermonde,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Linearity {
    Linear,
    Affine,
    Neither,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceFlag {
    pub subfield_degree: u32,
    /// Y is an F_{p^b}-subspace.
    pub subspace: bool,
    /// Y is a coset of an F_{p^b}-subspace.
    pub coset: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VsetReport {
    pub size: usize,
    pub omega: usize,
    pub classification: Classification,
    pub p_divides_size: bool,
    pub derivative_constant: Option<Elem>,
    pub coset_flag: bool,
    pub subspace_flags: Vec<SubspaceFlag>,
}

/// Sorts, deduplicates and range-checks a subset literal.
pub fn canonical_set(field: &FiniteField, set: &[Elem]) -> Result<Vec<Elem>> {
    for &y in set {
        field.check(y)?;
    }
    let mut out = set.to_vec();
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn require_size(set: &[Elem], min: usize) -> Result<()> {
    if set.is_empty() {
        Err(Error::EmptySet)
    } else if set.len() < min {
        Err(Error::SetTooSmall { min, got: set.len() })
    } else {
        Ok(())
    }
}

/// `π_k(Y) = Σ_{y∈Y} y^k` for `k ≥ 1`.
pub fn power_sum(field: &FiniteField, set: &[Elem], k: u64) -> Result<Elem> {
    require_size(set, 1)?;
    if k == 0 {
        return Err(Error::ZeroExponent);
    }
    Ok(field.sum(set.iter().map(|&y| field.pow(y, k))))
}

/// Least `k ≥ 1` with `π_k(Y) ≠ 0`; `None` only for `Y = {0}`.
fn omega_scan(field: &FiniteField, set: &[Elem]) -> Option<usize> {
    let mut powers = set.to_vec();
    for k in 1..=set.len() {
        if !field.sum(powers.iter().copied()).is_zero() {
            return Some(k);
        }
        for (pw, &y) in powers.iter_mut().zip(set) {
            *pw = field.mul(*pw, y);
        }
    }
    None
}

fn classification_of(size: usize, omega: usize) -> Classification {
    if omega == size {
        Classification::SuperVandermonde
    } else if omega + 1 == size {
        Classification::Vandermonde
    } else {
        Classification::NotVandermonde
    }
}

/// ω(Y) and the resulting classification, for `#Y ≥ 2`.
pub fn classify_by_power_sums(field: &FiniteField, set: &[Elem]) -> Result<(usize, Classification)> {
    let set = canonical_set(field, set)?;
    require_size(&set, 2)?;
    let omega = omega_scan(field, &set).expect("a set of size ≥ 2 has a nonzero power sum");
    Ok((omega, classification_of(set.len(), omega)))
}

pub fn omega(field: &FiniteField, set: &[Elem]) -> Result<usize> {
    classify_by_power_sums(field, set).map(|(w, _)| w)
}

/// Classification read off the coefficients `a_i` of `φ_Y = t^r + Σ a_i t^i`.
///
/// By Newton's identities `π_1 = ⋯ = π_k = 0` iff the elementary symmetric
/// functions `s_i = ±a_{r−i}` vanish for `i ≤ k`, `p ∤ i`. The condition is
/// on the index of `s`, not of `a`; the two agree only when `p | r`.
pub fn classify_by_coefficients(field: &FiniteField, set: &[Elem]) -> Result<Classification> {
    let set = canonical_set(field, set)?;
    require_size(&set, 2)?;
    let p = field.characteristic() as usize;
    let r = set.len();
    let a = MultiPoly::vanishing(field, &set)?.univariate_coeffs()?;
    let vanish_upto = |k: usize| (1..=k).filter(|i| i % p != 0).all(|i| a[r - i].is_zero());
    Ok(if vanish_upto(r - 1) {
        Classification::SuperVandermonde
    } else if vanish_upto(r - 2) {
        Classification::Vandermonde
    } else {
        Classification::NotVandermonde
    })
}

/// Power sums `π_1..π_r` of the roots of a monic degree-r univariate
/// polynomial, via Newton's identities on the elementary symmetric functions
/// `s_j = (−1)^j a_{r−j}`.
pub fn newton_power_sums(poly: &MultiPoly) -> Result<Vec<Elem>> {
    let f = poly.field();
    let a = poly.univariate_coeffs()?;
    if a.last() != Some(&Elem::ONE) {
        return Err(Error::NonMonicPolynomial);
    }
    let r = a.len() - 1;
    let sign = |j: usize, x: Elem| if j.is_multiple_of(2) { x } else { f.neg(x) };
    let s: Vec<Elem> = (0..=r).map(|j| sign(j, a[r - j])).collect();
    let mut pi: Vec<Elem> = Vec::with_capacity(r);
    for k in 1..=r {
        let mut acc = sign(k - 1, f.mul(f.from_int(k as u64), s[k]));
        for i in 1..k {
            acc = f.add(acc, sign(k - 1 + i, f.mul(s[k - i], pi[i - 1])));
        }
        pi.push(acc);
    }
    Ok(pi)
}

/// The constant value `c` of `φ_Y'` on `Y`, if there is one.
///
/// When present, also checks that `c ≠ 0` and that `φ_Y − ct` only has
/// exponents divisible by p.
pub fn derivative_constancy(field: &FiniteField, set: &[Elem]) -> Result<Option<Elem>> {
    let set = canonical_set(field, set)?;
    require_size(&set, 2)?;
    let phi = MultiPoly::vanishing(field, &set)?;
    let deriv = phi.derivative()?;
    let c = deriv.evaluate_unchecked(&[set[0]]);
    if set.iter().any(|&y| deriv.evaluate_unchecked(&[y]) != c) {
        return Ok(None);
    }
    assert!(!c.is_zero(), "φ_Y is separable, so φ_Y' cannot vanish on Y");
    let p = field.characteristic();
    let rest = phi.sub(&MultiPoly::var(field, 1, 0).scale(c))?;
    assert!(
        rest.terms().all(|(e, _)| e[0] % p == 0),
        "φ_Y − ct must be a polynomial in t^p"
    );
    Ok(Some(c))
}

fn add_closed(field: &FiniteField, sorted: &[Elem]) -> bool {
    sorted
        .iter()
        .all(|&x| sorted.iter().all(|&y| sorted.binary_search(&field.add(x, y)).is_ok()))
}

/// If `Y` is a coset of an additive subgroup, returns that subgroup.
pub fn coset_test(field: &FiniteField, set: &[Elem]) -> Result<Option<Vec<Elem>>> {
    let set = canonical_set(field, set)?;
    require_size(&set, 1)?;
    let base = set[0];
    let mut group: Vec<Elem> = set.iter().map(|&y| field.sub(y, base)).collect();
    group.sort_unstable();
    Ok(add_closed(field, &group).then_some(group))
}

/// Structural test: is `Y` an F_{p^b}-subspace, a coset of one, or neither.
pub fn subspace_structure(field: &FiniteField, set: &[Elem], b: u32) -> Result<Linearity> {
    let scalars = field.subfield(b)?;
    let set = canonical_set(field, set)?;
    require_size(&set, 1)?;
    let is_subspace = |s: &[Elem]| {
        s.binary_search(&Elem::ZERO).is_ok()
            && add_closed(field, s)
            && scalars
                .iter()
                .all(|&l| s.iter().all(|&y| s.binary_search(&field.mul(l, y)).is_ok()))
    };
    if is_subspace(&set) {
        return Ok(Linearity::Linear);
    }
    let mut shifted: Vec<Elem> = set.iter().map(|&y| field.sub(y, set[0])).collect();
    shifted.sort_unstable();
    Ok(if is_subspace(&shifted) { Linearity::Affine } else { Linearity::Neither })
}

/// Functional test: is `E(φ_Y)` F_{p^b}-linear, affine, or neither on the
/// whole field.
pub fn functional_linearity(field: &FiniteField, set: &[Elem], b: u32) -> Result<Linearity> {
    let scalars = field.subfield(b)?;
    let set = canonical_set(field, set)?;
    let phi = MultiPoly::vanishing(field, &set)?;
    let values: Vec<Elem> = field.elements().map(|x| phi.evaluate_unchecked(&[x])).collect();
    let is_linear = |g: &dyn Fn(Elem) -> Elem| {
        field.elements().all(|x| {
            field.elements().all(|y| g(field.add(x, y)) == field.add(g(x), g(y)))
                && scalars.iter().all(|&l| g(field.mul(l, x)) == field.mul(l, g(x)))
        })
    };
    let value = |x: Elem| values[x.0 as usize];
    if is_linear(&value) {
        return Ok(Linearity::Linear);
    }
    let at_zero = values[0];
    let shifted = |x: Elem| field.sub(values[x.0 as usize], at_zero);
    Ok(if is_linear(&shifted) { Linearity::Affine } else { Linearity::Neither })
}

/// `αY + β` for `α ≠ 0`.
pub fn scale_translate(field: &FiniteField, set: &[Elem], alpha: Elem, beta: Elem) -> Result<Vec<Elem>> {
    field.check(alpha)?;
    field.check(beta)?;
    if alpha.is_zero() {
        return Err(Error::ZeroScale);
    }
    let image: Vec<Elem> = set.iter().map(|&y| field.add(field.mul(alpha, y), beta)).collect();
    canonical_set(field, &image)
}

/// Full report for a subset of size at least 2.
pub fn analyze(field: &FiniteField, set: &[Elem]) -> Result<VsetReport> {
    let set = canonical_set(field, set)?;
    let (omega, classification) = classify_by_power_sums(field, &set)?;
    let by_coeffs = classify_by_coefficients(field, &set)?;
    assert_eq!(classification, by_coeffs, "power-sum and coefficient criteria disagree");
    let subspace_flags = field
        .subfield_degrees()
        .into_iter()
        .map(|b| {
            let s = subspace_structure(field, &set, b)?;
            Ok(SubspaceFlag {
                subfield_degree: b,
                subspace: s == Linearity::Linear,
                coset: s != Linearity::Neither,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VsetReport {
        size: set.len(),
        omega,
        classification,
        p_divides_size: set.len() % field.characteristic() as usize == 0,
        derivative_constant: derivative_constancy(field, &set)?,
        coset_flag: coset_test(field, &set)?.is_some(),
        subspace_flags,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32, a: u32) -> FiniteField {
        FiniteField::new(p, a, None).unwrap()
    }

    fn set(v: &[u32]) -> Vec<Elem> {
        v.iter().map(|&i| Elem(i)).collect()
    }

    #[test]
    fn power_sums() {
        let f3 = gf(3, 1);
        assert_eq!(power_sum(&f3, &set(&[0, 1, 2]), 1).unwrap(), Elem(0));
        assert_eq!(power_sum(&f3, &set(&[0, 1, 2]), 2).unwrap(), Elem(2));
        assert_eq!(power_sum(&f3, &set(&[1]), 0).unwrap_err(), Error::ZeroExponent);
        assert_eq!(power_sum(&f3, &[], 1).unwrap_err(), Error::EmptySet);
        let f8 = gf(2, 3);
        for a in 0..8 {
            for b in a + 1..8 {
                assert!(!power_sum(&f8, &set(&[a, b]), 1).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn classification_examples() {
        let f3 = gf(3, 1);
        assert_eq!(classify_by_power_sums(&f3, &set(&[0, 1, 2])).unwrap(), (2, Classification::Vandermonde));
        assert_eq!(classify_by_power_sums(&f3, &set(&[1, 2])).unwrap(), (2, Classification::SuperVandermonde));
        assert_eq!(classify_by_power_sums(&f3, &set(&[0, 1])).unwrap(), (1, Classification::Vandermonde));
        assert_eq!(classify_by_coefficients(&f3, &set(&[1, 2])).unwrap(), Classification::SuperVandermonde);
        assert_eq!(classify_by_coefficients(&gf(2, 1), &set(&[0, 1])).unwrap(), Classification::Vandermonde);
        // {0,1,x} ⊂ F_4: a_2 = 1 + x ≠ 0 with 2 | 2, yet π_1 ≠ 0.
        let f4 = gf(2, 2);
        assert_eq!(classify_by_coefficients(&f4, &set(&[0, 1, 2])).unwrap(), Classification::NotVandermonde);
        assert_eq!(
            classify_by_power_sums(&f3, &set(&[0])).unwrap_err(),
            Error::SetTooSmall { min: 2, got: 1 }
        );
    }

    #[test]
    fn newton() {
        let f3 = gf(3, 1);
        let phi = MultiPoly::vanishing(&f3, &set(&[1, 2])).unwrap();
        assert_eq!(newton_power_sums(&phi).unwrap(), set(&[0, 2]));
        let f2 = gf(2, 1);
        let phi = MultiPoly::vanishing(&f2, &set(&[0, 1])).unwrap();
        assert_eq!(newton_power_sums(&phi).unwrap(), set(&[1, 1]));
        let non_monic = MultiPoly::from_univariate_coeffs(&f3, &set(&[1, 2])).unwrap();
        assert_eq!(newton_power_sums(&non_monic).unwrap_err(), Error::NonMonicPolynomial);
    }

    #[test]
    fn derivative_examples() {
        let f3 = gf(3, 1);
        assert_eq!(derivative_constancy(&f3, &set(&[0, 1, 2])).unwrap(), Some(Elem(2)));
        assert_eq!(derivative_constancy(&f3, &set(&[0, 1])).unwrap(), None);
        let f4 = gf(2, 2);
        assert!(derivative_constancy(&f4, &set(&[2, 3])).unwrap().is_some());
    }

    #[test]
    fn cosets() {
        let f2 = gf(2, 1);
        assert_eq!(coset_test(&f2, &set(&[0, 1])).unwrap(), Some(set(&[0, 1])));
        let f4 = gf(2, 2);
        assert_eq!(coset_test(&f4, &set(&[0, 1])).unwrap(), Some(set(&[0, 1])));
        assert_eq!(coset_test(&f4, &set(&[2, 3])).unwrap(), Some(set(&[0, 1])));
        assert_eq!(coset_test(&f4, &set(&[0, 1, 2])).unwrap(), None);
    }

    #[test]
    fn linearity_examples() {
        let f4 = gf(2, 2);
        assert_eq!(functional_linearity(&f4, &set(&[0, 1]), 1).unwrap(), Linearity::Linear);
        assert_eq!(functional_linearity(&f4, &set(&[2, 3]), 1).unwrap(), Linearity::Affine);
        let f3 = gf(3, 1);
        assert_eq!(functional_linearity(&f3, &set(&[1, 2]), 1).unwrap(), Linearity::Neither);
        assert!(matches!(functional_linearity(&f4, &set(&[0]), 3), Err(Error::NotASubfield { .. })));
        // {0,1} is an F_2-line in F_4 but not an F_4-subspace.
        assert_eq!(subspace_structure(&f4, &set(&[0, 1]), 2).unwrap(), Linearity::Neither);
        assert_eq!(functional_linearity(&f4, &set(&[0, 1]), 2).unwrap(), Linearity::Neither);
    }

    #[test]
    fn scaling() {
        let f5 = gf(5, 1);
        let y = set(&[1, 3]);
        assert_eq!(scale_translate(&f5, &y, Elem(1), Elem(0)).unwrap(), y);
        assert_eq!(scale_translate(&f5, &y, Elem(0), Elem(0)).unwrap_err(), Error::ZeroScale);
        // {0,1,4} is Vandermonde in F_5 with 5 ∤ 3, so no nonzero translate is.
        let y = set(&[0, 1, 4]);
        assert_eq!(classify_by_power_sums(&f5, &y).unwrap().1, Classification::Vandermonde);
        for beta in 1..5 {
            let moved = scale_translate(&f5, &y, Elem(1), Elem(beta)).unwrap();
            assert_ne!(classify_by_power_sums(&f5, &moved).unwrap().1, Classification::Vandermonde);
        }
        // Size two is different: {0,1} + 1 = {1,2} still has π_1 ≠ 0.
        let moved = scale_translate(&f5, &set(&[0, 1]), Elem(1), Elem(1)).unwrap();
        assert_eq!(classify_by_power_sums(&f5, &moved).unwrap().1, Classification::Vandermonde);
    }

    #[test]
    fn report_serializes() {
        let f3 = gf(3, 1);
        let report = analyze(&f3, &set(&[1, 2])).unwrap();
        assert_eq!(report.classification, Classification::SuperVandermonde);
        assert!(!report.coset_flag);
        let json = serde_json::to_string(&report).unwrap();
        assert!(json.contains("\"classification\":\"SuperVandermonde\""));
    }
}
