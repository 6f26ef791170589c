//! Exhaustive counts over a small field F_{p^n}: Vandermonde subsets of size
//! divisible by p (V) and cosets of additive subgroups (C).
//!
//! V only counts sizes r ≥ 2, since ω and the Vandermonde property are
//! defined from r = 2 on. The empty set is never counted.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, FiniteField};
use crate::grid::additive_subgroups;
use crate::vset::{classify_by_coefficients, Classification};

/// Default cap on q for exhaustive scans.
pub const DEFAULT_MAX_Q: u32 = 16;
/// Subset masks are `u64`; beyond this the scan cannot be expressed.
pub const HARD_MAX_Q: u32 = 32;

const CHUNK: u64 = 1 << 12;

fn check_size(field: &FiniteField, max_q: u32) -> Result<()> {
    let q = field.order();
    if q > max_q.min(HARD_MAX_Q) {
        return Err(Error::CensusTooLarge { q, max: max_q.min(HARD_MAX_Q) });
    }
    Ok(())
}

fn mask_to_set(mask: u64) -> Vec<Elem> {
    (0..64).filter(|i| mask >> i & 1 == 1).map(Elem).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VandermondeCensus {
    pub count: u64,
    pub per_size: BTreeMap<usize, u64>,
    /// Sorted; empty unless a listing was requested.
    pub listing: Vec<Vec<Elem>>,
}

/// Scans all 2^q subsets for Vandermonde sets of size r ≥ 2 with p | r.
pub fn enumerate_vandermonde(field: &FiniteField, max_q: u32, keep_listing: bool) -> Result<VandermondeCensus> {
    check_size(field, max_q)?;
    let q = field.order() as usize;
    let p = field.characteristic() as usize;
    // powers[x][k] = x^k for k ≤ q
    let powers: Vec<Vec<Elem>> = field
        .elements()
        .map(|x| (0..=q as u64).map(|k| field.pow(x, k)).collect())
        .collect();
    let is_hit = |mask: u64| -> bool {
        let r = mask.count_ones() as usize;
        if r < 2 || !r.is_multiple_of(p) {
            return false;
        }
        let members: Vec<usize> = (0..q).filter(|&i| mask >> i & 1 == 1).collect();
        // Vandermonde: π_k = 0 for 1 ≤ k ≤ r−2 and π_{r−1} ≠ 0.
        (1..r).all(|k| field.sum(members.iter().map(|&i| powers[i][k])).is_zero() == (k < r - 1))
    };
    let total: u64 = 1u64 << q;
    let chunks: Vec<(u64, u64)> = (0..total.div_ceil(CHUNK))
        .map(|c| (c * CHUNK, ((c + 1) * CHUNK).min(total)))
        .collect();
    let hits: Vec<u64> = chunks
        .par_iter()
        .flat_map_iter(|&(lo, hi)| (lo..hi).filter(|&m| is_hit(m)))
        .collect();
    let mut per_size = BTreeMap::new();
    let mut listing = Vec::new();
    for &mask in &hits {
        let set = mask_to_set(mask);
        assert_eq!(
            classify_by_coefficients(field, &set)?,
            Classification::Vandermonde,
            "coefficient criterion disagrees on {set:?}"
        );
        *per_size.entry(set.len()).or_insert(0) += 1;
        if keep_listing {
            listing.push(set);
        }
    }
    listing.sort();
    Ok(VandermondeCensus { count: hits.len() as u64, per_size, listing })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetCensus {
    pub count: u64,
    pub per_size: BTreeMap<usize, u64>,
    /// Every coset, sorted.
    pub cosets: Vec<Vec<Elem>>,
}

/// All distinct cosets `a + G` of additive subgroups `G ≤ (F, +)`.
pub fn enumerate_cosets(field: &FiniteField, max_q: u32) -> Result<CosetCensus> {
    check_size(field, max_q)?;
    let mut cosets: BTreeSet<Vec<Elem>> = BTreeSet::new();
    for group in additive_subgroups(field, 1) {
        let members: Vec<Elem> = group.points().iter().map(|x| x[0]).collect();
        for a in field.elements() {
            let mut coset: Vec<Elem> = members.iter().map(|&g| field.add(a, g)).collect();
            coset.sort_unstable();
            cosets.insert(coset);
        }
    }
    let mut per_size = BTreeMap::new();
    for c in &cosets {
        *per_size.entry(c.len()).or_insert(0) += 1;
    }
    Ok(CosetCensus { count: cosets.len() as u64, per_size, cosets: cosets.into_iter().collect() })
}

/// `#GL_m(F_p) = ∏_{i<m} (p^m − p^i)`, with `#GL_0 = 1`.
pub fn gl_order(p: u32, m: u32) -> BigUint {
    let pb = BigUint::from(p);
    let pm = pb.pow(m);
    (0..m).fold(BigUint::one(), |acc, i| acc * (&pm - pb.pow(i)))
}

/// `C(p,n) = Σ_{d=0}^{n} p^{(1−d)(n−d)} #GL_n / (#GL_d #GL_{n−d})`.
///
/// The exponent is negative for 2 ≤ d < n; the division is exact and is
/// checked.
pub fn closed_form_coset_count(p: u32, n: u32) -> BigUint {
    let pb = BigUint::from(p);
    let gl_n = gl_order(p, n);
    let mut total = BigUint::from(0u32);
    for d in 0..=n {
        let exp = (1 - d as i64) * (n as i64 - d as i64);
        let mut num = gl_n.clone();
        let mut den = gl_order(p, d) * gl_order(p, n - d);
        if exp >= 0 {
            num *= pb.pow(exp as u32);
        } else {
            den *= pb.pow((-exp) as u32);
        }
        assert!((&num % &den) == BigUint::from(0u32), "coset count term is not integral");
        total += num / den;
    }
    total
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeCounts {
    pub vandermonde: u64,
    pub cosets: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusReport {
    pub field: String,
    pub p: u32,
    pub n: u32,
    pub v_count: u64,
    pub c_count: u64,
    pub c_count_closed_form: u64,
    /// Cosets of size ≥ 2; each of them is among the V sets when p | size.
    pub c_count_size_ge2: u64,
    pub c_over_v: Option<f64>,
    pub per_size: BTreeMap<usize, SizeCounts>,
    pub v_excludes_sizes_below_2: bool,
}

/// Runs both enumerations and the closed form.
pub fn census(field: &FiniteField, max_q: u32, keep_listing: bool) -> Result<(CensusReport, Vec<Vec<Elem>>)> {
    let v = enumerate_vandermonde(field, max_q, true)?;
    let c = enumerate_cosets(field, max_q)?;
    let closed = closed_form_coset_count(field.characteristic(), field.degree());
    let closed = closed.to_u64().expect("desk-scale counts fit in u64");
    assert_eq!(closed, c.count, "closed form disagrees with enumeration");
    let listed: BTreeSet<&Vec<Elem>> = v.listing.iter().collect();
    for coset in c.cosets.iter().filter(|s| s.len() >= 2) {
        assert!(listed.contains(coset), "coset {coset:?} missing from the Vandermonde listing");
    }
    let sizes: BTreeSet<usize> = v.per_size.keys().chain(c.per_size.keys()).copied().collect();
    let per_size = sizes
        .into_iter()
        .map(|s| {
            let counts = SizeCounts {
                vandermonde: v.per_size.get(&s).copied().unwrap_or(0),
                cosets: c.per_size.get(&s).copied().unwrap_or(0),
            };
            (s, counts)
        })
        .collect();
    let report = CensusReport {
        field: field.spec(),
        p: field.characteristic(),
        n: field.degree(),
        v_count: v.count,
        c_count: c.count,
        c_count_closed_form: closed,
        c_count_size_ge2: c.cosets.iter().filter(|s| s.len() >= 2).count() as u64,
        c_over_v: (v.count > 0).then(|| c.count as f64 / v.count as f64),
        per_size,
        v_excludes_sizes_below_2: true,
    };
    let listing = if keep_listing { v.listing } else { Vec::new() };
    Ok((report, listing))
}
