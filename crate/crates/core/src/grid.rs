//! Point sets in F_q^n and the invariant ω̲(X).
//!
//! `π_k(X) = Σ_{x∈X} x_1^{k_1}⋯x_n^{k_n}` and ω̲(X) is the least `|k|` with
//! `π_k(X) ≠ 0`. The search is bounded by the projection bound
//! `Σ (#X_i − 1)`, which always contains a witness.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

pub use crate::affine::{AffineMap, AffineMapJson};
use crate::error::{Error, Result};
use crate::field::{Elem, FiniteField};
use crate::mpoly::MultiPoly;
use crate::vset::{canonical_set, omega};

pub type Point = Vec<Elem>;

/// A sorted, deduplicated set of points of F_q^n. May be empty; every
/// ω̲-related operation rejects the empty set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    field: FiniteField,
    arity: usize,
    points: Vec<Point>,
}

/// Wire form: `{"arity": n, "points": [[i1,…,in], …]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSetJson {
    pub arity: usize,
    pub points: Vec<Point>,
}

impl PointSet {
    pub fn new(field: &FiniteField, arity: usize, mut points: Vec<Point>) -> Result<Self> {
        for x in &points {
            if x.len() != arity {
                return Err(Error::ArityMismatch { expected: arity, got: x.len() });
            }
            for &c in x {
                field.check(c)?;
            }
        }
        points.sort_unstable();
        points.dedup();
        Ok(Self { field: field.clone(), arity, points })
    }

    pub fn from_json(field: &FiniteField, raw: &PointSetJson) -> Result<Self> {
        Self::new(field, raw.arity, raw.points.clone())
    }

    pub fn to_json(&self) -> PointSetJson {
        PointSetJson { arity: self.arity, points: self.points.clone() }
    }

    /// All of F_q^n in lexicographic order.
    pub fn full_space(field: &FiniteField, n: usize) -> Self {
        let axes = vec![field.elements().collect::<Vec<_>>(); n];
        Self { field: field.clone(), arity: n, points: cartesian(&axes) }
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, x: &[Elem]) -> bool {
        self.points.binary_search_by(|p| p.as_slice().cmp(x)).is_ok()
    }

    /// `∫_X P = Σ_{x∈X} P(x)`.
    pub fn integrate(&self, poly: &MultiPoly) -> Result<Elem> {
        if poly.field() != &self.field {
            return Err(Error::FieldMismatch);
        }
        if poly.arity() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, got: poly.arity() });
        }
        Ok(self.field.sum(self.points.iter().map(|x| poly.evaluate_unchecked(x))))
    }
}

fn cartesian(axes: &[Vec<Elem>]) -> Vec<Point> {
    axes.iter().fold(vec![Vec::new()], |acc, axis| {
        acc.iter()
            .flat_map(|prefix| {
                axis.iter().map(move |&c| {
                    let mut x = prefix.clone();
                    x.push(c);
                    x
                })
            })
            .collect()
    })
}

/// A product `X_1 × ⋯ × X_n` of nonempty subsets of F_q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridSet {
    field: FiniteField,
    axes: Vec<Vec<Elem>>,
}

impl GridSet {
    pub fn new(field: &FiniteField, axes: Vec<Vec<Elem>>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::Instance("grid needs at least one axis".into()));
        }
        let axes = axes
            .iter()
            .map(|a| {
                let a = canonical_set(field, a)?;
                if a.is_empty() {
                    Err(Error::EmptySet)
                } else {
                    Ok(a)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { field: field.clone(), axes })
    }

    pub fn full(field: &FiniteField, n: usize) -> Self {
        Self { field: field.clone(), axes: vec![field.elements().collect(); n] }
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn axes(&self) -> &[Vec<Elem>] {
        &self.axes
    }

    pub fn arity(&self) -> usize {
        self.axes.len()
    }

    /// `Σ (#X_i − 1)`.
    pub fn degree_budget(&self) -> u32 {
        self.axes.iter().map(|a| a.len() as u32 - 1).sum()
    }

    pub fn to_point_set(&self) -> PointSet {
        PointSet { field: self.field.clone(), arity: self.axes.len(), points: cartesian(&self.axes) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaBarReport {
    pub omega_bar: u32,
    pub witness: Vec<u32>,
    pub upper_bound: u32,
    pub optimal: bool,
    pub p_divides_size: bool,
}

/// How far each exponent of a multi-index is scanned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExponentMode {
    /// Every `k_i` up to the projection bound.
    #[default]
    Formal,
    /// `k_i ≤ q − 1`, using `x^q = x`.
    Reduced,
}

pub fn multi_power_sum(set: &PointSet, k: &[u32]) -> Result<Elem> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    if k.len() != set.arity {
        return Err(Error::ArityMismatch { expected: set.arity, got: k.len() });
    }
    let f = &set.field;
    Ok(f.sum(set.points.iter().map(|x| {
        f.product(x.iter().zip(k).map(|(&xi, &ki)| f.pow(xi, ki as u64)))
    })))
}

/// Coordinate-wise images `X_1, …, X_n`.
pub fn projections(set: &PointSet) -> Vec<Vec<Elem>> {
    (0..set.arity)
        .map(|i| {
            set.points
                .iter()
                .map(|x| x[i])
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect()
        })
        .collect()
}

/// Calls `visit` on every composition of `total` into `parts` parts in
/// lexicographic order until it returns `true`.
fn compositions_until(
    total: u32,
    parts: usize,
    cap: u32,
    prefix: &mut Vec<u32>,
    visit: &mut dyn FnMut(&[u32]) -> bool,
) -> bool {
    if parts == 1 {
        if total > cap {
            return false;
        }
        prefix.push(total);
        let hit = visit(prefix);
        prefix.pop();
        return hit;
    }
    for first in 0..=total.min(cap) {
        prefix.push(first);
        let hit = compositions_until(total - first, parts - 1, cap, prefix, visit);
        prefix.pop();
        if hit {
            return true;
        }
    }
    false
}

pub fn omega_bar(set: &PointSet) -> Result<OmegaBarReport> {
    omega_bar_with(set, ExponentMode::Formal)
}

/// ω̲(X) with its first witness in (|k|, lexicographic) order.
pub fn omega_bar_with(set: &PointSet, mode: ExponentMode) -> Result<OmegaBarReport> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let f = &set.field;
    let n = set.arity;
    let upper_bound: u32 = projections(set).iter().map(|a| a.len() as u32 - 1).sum();
    let cap = match mode {
        ExponentMode::Formal => upper_bound,
        ExponentMode::Reduced => upper_bound.min(f.order() - 1),
    };
    // powers[point][i][e] = x_i^e
    let powers: Vec<Vec<Vec<Elem>>> = set
        .points
        .iter()
        .map(|x| {
            x.iter()
                .map(|&xi| {
                    let mut row = Vec::with_capacity(cap as usize + 1);
                    let mut acc = Elem::ONE;
                    row.push(acc);
                    for _ in 0..cap {
                        acc = f.mul(acc, xi);
                        row.push(acc);
                    }
                    row
                })
                .collect()
        })
        .collect();
    let mut witness = None;
    for level in 0..=upper_bound {
        let mut prefix = Vec::with_capacity(n);
        let found = compositions_until(level, n, cap, &mut prefix, &mut |k| {
            let sum = f.sum(powers.iter().map(|pw| {
                f.product(pw.iter().zip(k).map(|(row, &ki)| row[ki as usize]))
            }));
            if sum.is_zero() {
                false
            } else {
                witness = Some(k.to_vec());
                true
            }
        });
        if found {
            break;
        }
    }
    let witness = witness.expect("the projection bound always contains a witness");
    let omega_bar: u32 = witness.iter().sum();
    Ok(OmegaBarReport {
        omega_bar,
        witness,
        upper_bound,
        optimal: omega_bar == upper_bound,
        p_divides_size: set.len().is_multiple_of(f.characteristic() as usize),
    })
}

/// ω̲ of a grid from its axes: `π_k(X) = ∏ π_{k_i}(X_i)`, so each axis adds
/// 0 when `p ∤ #X_i` (its `π_0` is nonzero) and `ω(X_i)` otherwise.
pub fn grid_omega_bar(grid: &GridSet) -> u32 {
    let p = grid.field().characteristic() as usize;
    grid.axes()
        .iter()
        .filter(|axis| axis.len() % p == 0)
        .map(|axis| omega(grid.field(), axis).expect("p | size implies size ≥ 2") as u32)
        .sum()
}

/// `σ(X)`.
pub fn affine_apply(set: &PointSet, sigma: &AffineMap) -> Result<PointSet> {
    if sigma.field() != &set.field {
        return Err(Error::FieldMismatch);
    }
    let image = set.points.iter().map(|x| sigma.apply(x)).collect::<Result<Vec<_>>>()?;
    let out = PointSet::new(&set.field, set.arity, image)?;
    assert_eq!(out.len(), set.len(), "an invertible map is injective");
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanCoset {
    pub set: PointSet,
    /// `#set = p^e`.
    pub e: u32,
}

/// Closure of `generators` under addition, translated by `base`.
pub fn span_coset(field: &FiniteField, generators: &[Point], base: &[Elem]) -> Result<SpanCoset> {
    let n = base.len();
    for g in generators {
        if g.len() != n {
            return Err(Error::ArityMismatch { expected: n, got: g.len() });
        }
        for &c in g {
            field.check(c)?;
        }
    }
    for &c in base {
        field.check(c)?;
    }
    let add = |x: &[Elem], y: &[Elem]| -> Point { x.iter().zip(y).map(|(&a, &b)| field.add(a, b)).collect() };
    let mut group: BTreeSet<Point> = BTreeSet::from([vec![Elem::ZERO; n]]);
    for g in generators {
        if group.contains(g) {
            continue;
        }
        // span(G, g) = ∪_{m<p} (G + m g)
        let mut next = group.clone();
        let mut shift = g.clone();
        while !shift.iter().all(|c| c.is_zero()) {
            for x in &group {
                next.insert(add(x, &shift));
            }
            shift = add(&shift, g);
        }
        group = next;
    }
    let size = group.len();
    let p = field.characteristic() as usize;
    let mut e = 0u32;
    let mut rest = size;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    assert_eq!(rest, 1, "additive subgroups have p-power order");
    let points = group.iter().map(|x| add(x, base)).collect();
    Ok(SpanCoset { set: PointSet::new(field, n, points)?, e })
}

/// All additive subgroups of F_q^n, each as a sorted point set, ordered by
/// size then lexicographically.
pub fn additive_subgroups(field: &FiniteField, n: usize) -> Vec<PointSet> {
    let space = PointSet::full_space(field, n);
    let zero = vec![Elem::ZERO; n];
    let mut seen: HashSet<Vec<Point>> = HashSet::new();
    let mut frontier = vec![vec![zero.clone()]];
    seen.insert(frontier[0].clone());
    while let Some(group) = frontier.pop() {
        let members: BTreeSet<&Point> = group.iter().collect();
        for g in space.points() {
            if members.contains(g) {
                continue;
            }
            let mut gens = group.clone();
            gens.push(g.clone());
            let bigger = span_coset(field, &gens, &zero).expect("valid generators").set.points;
            if seen.insert(bigger.clone()) {
                frontier.push(bigger);
            }
        }
    }
    let mut all: Vec<Vec<Point>> = seen.into_iter().collect();
    all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    all.into_iter()
        .map(|points| PointSet { field: field.clone(), arity: n, points })
        .collect()
}

/// The graph `{(x, f(x)) : x ∈ F_q^{n−1}}` of a non-constant polynomial in
/// `n − 1` variables.
pub fn graph_set(f: &MultiPoly) -> Result<PointSet> {
    if f.total_degree().unwrap_or(0) == 0 {
        return Err(Error::ConstantPolynomial);
    }
    let field = f.field();
    let domain = PointSet::full_space(field, f.arity());
    let points = domain
        .points
        .into_iter()
        .map(|mut x| {
            let y = f.evaluate_unchecked(&x);
            x.push(y);
            x
        })
        .collect();
    PointSet::new(field, f.arity() + 1, points)
}
