//! Sparse multivariate polynomials over a [`FiniteField`].
//!
//! Exponents are formal: `t^q` and `t` are different polynomials even though
//! they induce the same function on F_q. Terms are kept in a `BTreeMap`
//! keyed by exponent vector, so iteration (and therefore serialization) is
//! lexicographic.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::affine::AffineMap;
use crate::error::{Error, Result};
use crate::field::{Elem, FiniteField};

pub type Exponents = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    field: FiniteField,
    arity: usize,
    terms: BTreeMap<Exponents, Elem>,
}

/// Wire form: `{"arity": n, "terms": [[coeff, [e1,…,en]], …]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub arity: usize,
    pub terms: Vec<(Elem, Exponents)>,
}

impl MultiPoly {
    /// Builds a polynomial from `(coefficient, exponents)` pairs; repeated
    /// exponent vectors are summed and zero coefficients dropped.
    pub fn build<I>(field: &FiniteField, arity: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Elem, Exponents)>,
    {
        let mut map: BTreeMap<Exponents, Elem> = BTreeMap::new();
        for (c, e) in terms {
            field.check(c)?;
            if e.len() != arity {
                return Err(Error::ArityMismatch { expected: arity, got: e.len() });
            }
            let slot = map.entry(e).or_insert(Elem::ZERO);
            *slot = field.add(*slot, c);
        }
        map.retain(|_, c| !c.is_zero());
        Ok(Self { field: field.clone(), arity, terms: map })
    }

    fn from_map(field: &FiniteField, arity: usize, terms: BTreeMap<Exponents, Elem>) -> Self {
        debug_assert!(terms.values().all(|c| !c.is_zero()));
        Self { field: field.clone(), arity, terms }
    }

    pub fn zero(field: &FiniteField, arity: usize) -> Self {
        Self::from_map(field, arity, BTreeMap::new())
    }

    pub fn constant(field: &FiniteField, arity: usize, c: Elem) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; arity], c);
        }
        Self::from_map(field, arity, terms)
    }

    pub fn one(field: &FiniteField, arity: usize) -> Self {
        Self::constant(field, arity, Elem::ONE)
    }

    /// The variable `t_{i+1}` (zero-based `i`).
    pub fn var(field: &FiniteField, arity: usize, i: usize) -> Self {
        let mut e = vec![0; arity];
        e[i] = 1;
        Self::from_map(field, arity, BTreeMap::from([(e, Elem::ONE)]))
    }

    pub fn from_json(field: &FiniteField, raw: &PolyJson) -> Result<Self> {
        Self::build(field, raw.arity, raw.terms.iter().cloned())
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            arity: self.arity,
            terms: self.terms.iter().map(|(e, &c)| (c, e.clone())).collect(),
        }
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, Elem)> {
        self.terms.iter().map(|(e, &c)| (e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Formal total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Whether the degree is strictly below `bound`. The zero polynomial
    /// satisfies every such bound.
    pub fn degree_below(&self, bound: u32) -> bool {
        self.total_degree().is_none_or(|d| d < bound)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.arity != other.arity {
            return Err(Error::ArityMismatch { expected: self.arity, got: other.arity });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.add_unchecked(other))
    }

    fn add_unchecked(&self, other: &Self) -> Self {
        let f = &self.field;
        let mut terms = self.terms.clone();
        for (e, &c) in &other.terms {
            let slot = terms.entry(e.clone()).or_insert(Elem::ZERO);
            *slot = f.add(*slot, c);
        }
        terms.retain(|_, c| !c.is_zero());
        Self::from_map(f, self.arity, terms)
    }

    pub fn neg(&self) -> Self {
        self.scale(self.field.neg(Elem::ONE))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: Elem) -> Self {
        let f = &self.field;
        if c.is_zero() {
            return Self::zero(f, self.arity);
        }
        let terms = self.terms.iter().map(|(e, &x)| (e.clone(), f.mul(c, x))).collect();
        Self::from_map(f, self.arity, terms)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let f = &self.field;
        let mut acc: HashMap<Exponents, Elem> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &other.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let slot = acc.entry(e).or_insert(Elem::ZERO);
                *slot = f.add(*slot, f.mul(ca, cb));
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Self::from_map(f, self.arity, terms)
    }

    /// `self^k`, with `f^0 = 1`.
    pub fn pow(&self, mut k: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.field, self.arity);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    /// Value of the induced function at `x`.
    pub fn evaluate(&self, x: &[Elem]) -> Result<Elem> {
        if x.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, got: x.len() });
        }
        for &xi in x {
            self.field.check(xi)?;
        }
        Ok(self.evaluate_unchecked(x))
    }

    pub(crate) fn evaluate_unchecked(&self, x: &[Elem]) -> Elem {
        let f = &self.field;
        let mut max_exp = vec![0u32; self.arity];
        for e in self.terms.keys() {
            for (m, &ei) in max_exp.iter_mut().zip(e) {
                *m = (*m).max(ei);
            }
        }
        let powers: Vec<Vec<Elem>> = x
            .iter()
            .zip(&max_exp)
            .map(|(&xi, &m)| {
                let mut row = Vec::with_capacity(m as usize + 1);
                let mut acc = Elem::ONE;
                row.push(acc);
                for _ in 0..m {
                    acc = f.mul(acc, xi);
                    row.push(acc);
                }
                row
            })
            .collect();
        self.terms.iter().fold(Elem::ZERO, |sum, (e, &c)| {
            let term = e
                .iter()
                .zip(&powers)
                .fold(c, |acc, (&ei, row)| f.mul(acc, row[ei as usize]));
            f.add(sum, term)
        })
    }

    /// Coefficient of `t^d` (zero when absent).
    pub fn coeff_of(&self, d: &[u32]) -> Result<Elem> {
        if d.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, got: d.len() });
        }
        Ok(self.terms.get(d).copied().unwrap_or(Elem::ZERO))
    }

    /// True iff no monomial of the support other than `t^d` itself is
    /// divisible by `t^d`.
    pub fn is_d_topped(&self, d: &[u32]) -> Result<bool> {
        if d.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, got: d.len() });
        }
        Ok(self
            .terms
            .keys()
            .all(|e| e.as_slice() == d || e.iter().zip(d).any(|(ei, di)| ei < di)))
    }

    /// Dense coefficient list of a univariate polynomial, low degree first.
    pub fn univariate_coeffs(&self) -> Result<Vec<Elem>> {
        if self.arity != 1 {
            return Err(Error::NotUnivariate(self.arity));
        }
        let len = self.total_degree().map_or(0, |d| d as usize + 1);
        let mut out = vec![Elem::ZERO; len];
        for (e, &c) in &self.terms {
            out[e[0] as usize] = c;
        }
        Ok(out)
    }

    pub fn from_univariate_coeffs(field: &FiniteField, coeffs: &[Elem]) -> Result<Self> {
        Self::build(field, 1, coeffs.iter().enumerate().map(|(i, &c)| (c, vec![i as u32])))
    }

    /// Formal derivative of a univariate polynomial.
    pub fn derivative(&self) -> Result<Self> {
        if self.arity != 1 {
            return Err(Error::NotUnivariate(self.arity));
        }
        let f = &self.field;
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e[0] > 0)
            .map(|(e, &c)| (vec![e[0] - 1], f.mul(f.from_int(e[0] as u64), c)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Ok(Self::from_map(f, 1, terms))
    }

    /// The vanishing polynomial `∏_{y∈Y} (t − y)`.
    pub fn vanishing(field: &FiniteField, set: &[Elem]) -> Result<Self> {
        if set.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut uniq = set.to_vec();
        uniq.sort_unstable();
        uniq.dedup();
        // Dense product, then back to sparse.
        let mut coeffs = vec![Elem::ONE];
        for &y in &uniq {
            field.check(y)?;
            let ny = field.neg(y);
            let mut next = vec![Elem::ZERO; coeffs.len() + 1];
            for (i, &c) in coeffs.iter().enumerate() {
                next[i + 1] = field.add(next[i + 1], c);
                next[i] = field.add(next[i], field.mul(ny, c));
            }
            coeffs = next;
        }
        Self::from_univariate_coeffs(field, &coeffs)
    }

    /// `P_σ(t) = P(σ(t))`, so that `∫_{σ(X)} P = ∫_X P_σ`.
    pub fn affine_substitute(&self, sigma: &AffineMap) -> Result<Self> {
        if sigma.field() != &self.field {
            return Err(Error::FieldMismatch);
        }
        if sigma.dim() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, got: sigma.dim() });
        }
        let f = &self.field;
        let n = self.arity;
        let forms: Vec<MultiPoly> = sigma
            .matrix()
            .iter()
            .zip(sigma.translation())
            .map(|(row, &a)| {
                let mut terms: Vec<(Elem, Exponents)> = vec![(a, vec![0; n])];
                for (j, &m) in row.iter().enumerate() {
                    let mut e = vec![0; n];
                    e[j] = 1;
                    terms.push((m, e));
                }
                MultiPoly::build(f, n, terms).expect("well-formed linear form")
            })
            .collect();
        let mut cache: HashMap<(usize, u32), MultiPoly> = HashMap::new();
        let mut out = Self::zero(f, n);
        for (e, &c) in &self.terms {
            let mut term = Self::constant(f, n, c);
            for (i, &ei) in e.iter().enumerate() {
                if ei == 0 {
                    continue;
                }
                let power = cache.entry((i, ei)).or_insert_with(|| forms[i].pow(ei as u64));
                term = term.mul_unchecked(power);
            }
            out = out.add_unchecked(&term);
        }
        Ok(out)
    }
}

/// A nonempty list of positive-degree polynomials over a shared field and
/// arity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolySystem {
    polys: Vec<MultiPoly>,
}

impl PolySystem {
    pub fn new(polys: Vec<MultiPoly>) -> Result<Self> {
        let first = polys.first().ok_or(Error::EmptySystem)?;
        for (i, f) in polys.iter().enumerate() {
            first.check_compatible(f)?;
            if f.total_degree().unwrap_or(0) == 0 {
                return Err(Error::NonPositiveDegree(i));
            }
        }
        Ok(Self { polys })
    }

    pub fn polys(&self) -> &[MultiPoly] {
        &self.polys
    }

    pub fn field(&self) -> &FiniteField {
        self.polys[0].field()
    }

    pub fn arity(&self) -> usize {
        self.polys[0].arity()
    }

    /// `Σ deg f_j` over formal degrees.
    pub fn degree_sum(&self) -> u32 {
        self.polys.iter().map(|f| f.total_degree().unwrap_or(0)).sum()
    }

    /// True iff every member vanishes at `x`.
    pub fn vanishes_at(&self, x: &[Elem]) -> bool {
        self.polys.iter().all(|f| f.evaluate_unchecked(x).is_zero())
    }

    /// The Chevalley polynomial `∏_j (1 − f_j^{q−1})`.
    pub fn chevalley_poly(&self) -> MultiPoly {
        let field = self.field();
        let one = MultiPoly::one(field, self.arity());
        let q1 = field.order() as u64 - 1;
        self.polys.iter().fold(one.clone(), |acc, f| {
            let factor = one.add_unchecked(&f.pow(q1).neg());
            acc.mul_unchecked(&factor)
        })
    }

    pub fn to_json(&self) -> Vec<PolyJson> {
        self.polys.iter().map(MultiPoly::to_json).collect()
    }
}

/// The Lagrange-type indicator `δ_{X,x} = ∏_i ∏_{y∈X_i∖{x_i}} (t_i − y)/(x_i − y)`
/// on the grid `∏ X_i`.
pub fn delta_poly(field: &FiniteField, axes: &[Vec<Elem>], anchor: &[Elem]) -> Result<MultiPoly> {
    let n = axes.len();
    if anchor.len() != n {
        return Err(Error::ArityMismatch { expected: n, got: anchor.len() });
    }
    let mut out = MultiPoly::one(field, n);
    for (i, (axis, &xi)) in axes.iter().zip(anchor).enumerate() {
        if !axis.contains(&xi) {
            return Err(Error::AnchorOutsideGrid);
        }
        let mut others = axis.clone();
        others.sort_unstable();
        others.dedup();
        for &y in others.iter().filter(|&&y| y != xi) {
            field.check(y)?;
            let scale = field.inv(field.sub(xi, y))?;
            let mut e = vec![0; n];
            e[i] = 1;
            let factor = MultiPoly::build(
                field,
                n,
                [(scale, e), (field.neg(field.mul(scale, y)), vec![0; n])],
            )?;
            out = out.mul_unchecked(&factor);
        }
    }
    Ok(out)
}
