//! Finite fields GF(p^a) with an explicit modulus.
//!
//! An element is stored as its index in `[0, q)`: the base-p digits of the
//! index, least significant first, are the coefficients of the residue
//! polynomial modulo the field's monic irreducible modulus. Arithmetic goes
//! through full addition/multiplication tables built once at construction,
//! which is cheap for the desk-scale orders supported here (q ≤ 256).

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest field order accepted by [`FiniteField::new`].
pub const MAX_ORDER: u32 = 256;

/// A field element, identified by its index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct FieldData {
    p: u32,
    degree: u32,
    order: u32,
    modulus: Vec<u32>,
    default_modulus: bool,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

/// GF(p^a). Cloning is cheap; all clones share the same tables.
#[derive(Clone)]
pub struct FiniteField(Arc<FieldData>);

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FiniteField {}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteField({})", self.spec())
    }
}

impl fmt::Display for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec())
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

// Polynomials over F_p, coefficient vectors low to high, trimmed of trailing zeros.

fn trim(mut v: Vec<u32>) -> Vec<u32> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn fp_inv(a: u32, p: u32) -> u32 {
    // p is prime, so a^(p-2) is the inverse.
    let mut base = a % p;
    let mut exp = p - 2;
    let mut acc = 1u32;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

fn fp_poly_rem(num: &[u32], den: &[u32], p: u32) -> Vec<u32> {
    let den = trim(den.to_vec());
    let mut rem = trim(num.to_vec());
    let lead_inv = fp_inv(*den.last().expect("nonzero divisor"), p);
    while rem.len() >= den.len() {
        let shift = rem.len() - den.len();
        let factor = rem.last().copied().unwrap_or(0) * lead_inv % p;
        for (i, &d) in den.iter().enumerate() {
            let slot = &mut rem[shift + i];
            *slot = (*slot + p * p - factor * d % p) % p;
        }
        rem = trim(rem);
    }
    rem
}

fn digits(mut n: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(n % p);
        n /= p;
    }
    out
}

fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let degree = modulus.len() - 1;
    // Any reducible polynomial of degree a has a monic factor of degree ≤ a/2.
    for d in 1..=degree / 2 {
        let count = p.pow(d as u32);
        for low in 0..count {
            let mut divisor = digits(low, p, d);
            divisor.push(1);
            if fp_poly_rem(modulus, &divisor, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// The monic irreducible of degree `a` whose low coefficients encode to the
/// least integer.
pub fn default_modulus(p: u32, a: u32) -> Vec<u32> {
    let count = p.pow(a);
    for low in 0..count {
        let mut candidate = digits(low, p, a as usize);
        candidate.push(1);
        if is_irreducible(&candidate, p) {
            return candidate;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl FiniteField {
    /// Builds GF(p^a), using the default modulus when `modulus` is `None`.
    pub fn new(p: u32, a: u32, modulus: Option<Vec<u32>>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if a == 0 {
            return Err(Error::ZeroDegree);
        }
        let order = (p as u64).checked_pow(a).unwrap_or(u64::MAX);
        if order > MAX_ORDER as u64 {
            return Err(Error::FieldTooLarge { order, max: MAX_ORDER as u64 });
        }
        let default = default_modulus(p, a);
        let modulus = match modulus {
            None => default.clone(),
            Some(m) => {
                if m.len() != a as usize + 1 {
                    return Err(Error::ModulusLength { expected: a as usize + 1, got: m.len() });
                }
                if let Some(&c) = m.iter().find(|&&c| c >= p) {
                    return Err(Error::ModulusCoefficient(c));
                }
                if m[a as usize] != 1 {
                    return Err(Error::NotMonic);
                }
                if !is_irreducible(&m, p) {
                    return Err(Error::Reducible);
                }
                m
            }
        };
        let default_modulus = modulus == default;
        Ok(Self(Arc::new(build_tables(p, a, modulus, default_modulus))))
    }

    /// Parses `"p^a"` or `"p^a/c0,c1,...,1"`.
    pub fn parse(spec: &str) -> Result<Self> {
        let bad = || Error::FieldSpec(spec.to_string());
        let spec_trim = spec.trim();
        let (head, modulus) = match spec_trim.split_once('/') {
            Some((h, m)) => {
                let coeffs = m
                    .split(',')
                    .map(|c| c.trim().parse::<u32>().map_err(|_| bad()))
                    .collect::<Result<Vec<_>>>()?;
                (h, Some(coeffs))
            }
            None => (spec_trim, None),
        };
        let (p, a) = match head.split_once('^') {
            Some((p, a)) => (
                p.trim().parse::<u32>().map_err(|_| bad())?,
                a.trim().parse::<u32>().map_err(|_| bad())?,
            ),
            None => (head.trim().parse::<u32>().map_err(|_| bad())?, 1),
        };
        Self::new(p, a, modulus)
    }

    /// Canonical spec string; the modulus is spelled out only when it is not
    /// the default one.
    pub fn spec(&self) -> String {
        let d = &self.0;
        if d.default_modulus {
            format!("{}^{}", d.p, d.degree)
        } else {
            let coeffs: Vec<String> = d.modulus.iter().map(|c| c.to_string()).collect();
            format!("{}^{}/{}", d.p, d.degree, coeffs.join(","))
        }
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.degree
    }

    pub fn order(&self) -> u32 {
        self.0.order
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    pub fn one(&self) -> Elem {
        Elem::ONE
    }

    pub fn elem(&self, index: u32) -> Result<Elem> {
        self.check(Elem(index))?;
        Ok(Elem(index))
    }

    pub fn check(&self, x: Elem) -> Result<()> {
        if x.0 < self.0.order {
            Ok(())
        } else {
            Err(Error::ElementOutOfRange { index: x.0, order: self.0.order })
        }
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: u64) -> Elem {
        Elem((n % self.0.p as u64) as u32)
    }

    /// Residue-polynomial coefficients of `x`, low degree first.
    pub fn coefficients(&self, x: Elem) -> Vec<u32> {
        digits(x.0, self.0.p, self.0.degree as usize)
    }

    #[inline]
    pub fn add(&self, x: Elem, y: Elem) -> Elem {
        Elem(self.0.add[(x.0 * self.0.order + y.0) as usize])
    }

    #[inline]
    pub fn sub(&self, x: Elem, y: Elem) -> Elem {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn neg(&self, x: Elem) -> Elem {
        Elem(self.0.neg[x.0 as usize])
    }

    #[inline]
    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        Elem(self.0.mul[(x.0 * self.0.order + y.0) as usize])
    }

    pub fn inv(&self, x: Elem) -> Result<Elem> {
        if x.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(Elem(self.0.inv[x.0 as usize]))
        }
    }

    pub fn div(&self, x: Elem, y: Elem) -> Result<Elem> {
        Ok(self.mul(x, self.inv(y)?))
    }

    /// `x^e`, with `x^0 = 1` for every `x` including zero.
    pub fn pow(&self, x: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if x.is_zero() {
            return Elem::ZERO;
        }
        // The multiplicative group has order q - 1.
        let mut e = e % (self.0.order as u64 - 1);
        if e == 0 {
            return Elem::ONE;
        }
        let mut base = x;
        let mut acc = Elem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn sum<I: IntoIterator<Item = Elem>>(&self, items: I) -> Elem {
        items.into_iter().fold(Elem::ZERO, |acc, x| self.add(acc, x))
    }

    pub fn product<I: IntoIterator<Item = Elem>>(&self, items: I) -> Elem {
        items.into_iter().fold(Elem::ONE, |acc, x| self.mul(acc, x))
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.0.order).map(Elem)
    }

    /// The subfield of order p^b: elements fixed by `x ↦ x^(p^b)`.
    pub fn subfield(&self, b: u32) -> Result<Vec<Elem>> {
        if b == 0 || !self.0.degree.is_multiple_of(b) {
            return Err(Error::NotASubfield { sub: b, degree: self.0.degree });
        }
        let frob = (self.0.p as u64).pow(b);
        Ok(self.elements().filter(|&x| self.pow(x, frob) == x).collect())
    }

    /// Divisors b of the extension degree, ascending.
    pub fn subfield_degrees(&self) -> Vec<u32> {
        (1..=self.0.degree).filter(|b| self.0.degree.is_multiple_of(*b)).collect()
    }
}

fn build_tables(p: u32, a: u32, modulus: Vec<u32>, default_modulus: bool) -> FieldData {
    let q = p.pow(a);
    let n = a as usize;
    let coeffs: Vec<Vec<u32>> = (0..q).map(|i| digits(i, p, n)).collect();
    let encode = |c: &[u32]| c.iter().rev().fold(0u32, |acc, &d| acc * p + d);

    let mut add = vec![0u32; (q * q) as usize];
    let mut mul = vec![0u32; (q * q) as usize];
    let mut prod = vec![0u32; 2 * n];
    for x in 0..q {
        let cx = &coeffs[x as usize];
        for y in 0..q {
            let cy = &coeffs[y as usize];
            let sum: Vec<u32> = cx.iter().zip(cy).map(|(u, v)| (u + v) % p).collect();
            add[(x * q + y) as usize] = encode(&sum);

            prod.iter_mut().for_each(|c| *c = 0);
            for (i, &u) in cx.iter().enumerate() {
                for (j, &v) in cy.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + u * v) % p;
                }
            }
            // Reduce with the monic modulus from the top down.
            for top in (n..2 * n).rev() {
                let c = prod[top];
                if c == 0 {
                    continue;
                }
                prod[top] = 0;
                for (k, &m) in modulus[..n].iter().enumerate() {
                    let slot = &mut prod[top - n + k];
                    *slot = (*slot + p * p - c * m % p) % p;
                }
            }
            mul[(x * q + y) as usize] = encode(&prod[..n]);
        }
    }
    let neg = (0..q)
        .map(|x| (0..q).find(|&y| add[(x * q + y) as usize] == 0).expect("additive inverse"))
        .collect();
    let inv = (0..q)
        .map(|x| {
            if x == 0 {
                0
            } else {
                (1..q).find(|&y| mul[(x * q + y) as usize] == 1).expect("field has inverses")
            }
        })
        .collect();
    FieldData { p, degree: a, order: q, modulus, default_modulus, add, mul, neg, inv }
}

impl FromStr for FiniteField {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl Serialize for FiniteField {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.spec())
    }
}

impl<'de> Deserialize<'de> for FiniteField {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let spec = String::deserialize(deserializer)?;
        FiniteField::parse(&spec).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32, a: u32) -> FiniteField {
        FiniteField::new(p, a, None).unwrap()
    }

    /// Independent oracle: a monic quadratic over F_p is irreducible iff it
    /// has no root.
    fn quadratic_has_root(c0: u32, c1: u32, p: u32) -> bool {
        (0..p).any(|x| (x * x + c1 * x + c0).is_multiple_of(p))
    }

    #[test]
    fn default_moduli() {
        assert_eq!(gf(2, 1).modulus(), &[0, 1]);
        assert_eq!(gf(2, 2).modulus(), &[1, 1, 1]);
        assert_eq!(gf(3, 2).modulus(), &[1, 0, 1]);
    }

    #[test]
    fn default_modulus_is_least_rootless_quadratic() {
        for p in [2u32, 3, 5, 7, 11] {
            let least = (0..p * p).find(|&i| !quadratic_has_root(i % p, i / p, p)).unwrap();
            assert_eq!(default_modulus(p, 2), vec![least % p, least / p, 1]);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert_eq!(FiniteField::new(4, 1, None).unwrap_err(), Error::NotPrime(4));
        assert_eq!(FiniteField::new(2, 0, None).unwrap_err(), Error::ZeroDegree);
        assert_eq!(FiniteField::new(2, 2, Some(vec![1, 0, 1])).unwrap_err(), Error::Reducible);
        assert_eq!(FiniteField::new(2, 2, Some(vec![1, 1, 0])).unwrap_err(), Error::NotMonic);
        assert!(matches!(FiniteField::new(2, 9, None), Err(Error::FieldTooLarge { .. })));
        assert!(matches!(FiniteField::new(3, 2, Some(vec![2, 1])), Err(Error::ModulusLength { .. })));
    }

    #[test]
    fn small_products() {
        let f4 = gf(2, 2);
        assert_eq!(f4.mul(Elem(2), Elem(2)), Elem(3));
        let f3 = gf(3, 1);
        assert_eq!(f3.inv(Elem(2)).unwrap(), Elem(2));
        assert_eq!(f3.inv(Elem(0)), Err(Error::DivisionByZero));
        assert_eq!(f4.pow(Elem(0), 0), Elem(1));
        assert_eq!(f4.pow(Elem(0), 5), Elem(0));
    }

    #[test]
    fn f4_multiplication_matches_polynomial_oracle() {
        // (u0 + u1 t)(v0 + v1 t) with t^2 = t + 1 over F_2
        let f4 = gf(2, 2);
        for x in 0..4u32 {
            for y in 0..4u32 {
                let (u0, u1, v0, v1) = (x & 1, x >> 1, y & 1, y >> 1);
                let c0 = (u0 * v0 + u1 * v1) % 2;
                let c1 = (u0 * v1 + u1 * v0 + u1 * v1) % 2;
                assert_eq!(f4.mul(Elem(x), Elem(y)), Elem(c0 + 2 * c1));
            }
        }
    }

    #[test]
    fn subfields() {
        let f4 = gf(2, 2);
        assert_eq!(f4.elements().collect::<Vec<_>>(), vec![Elem(0), Elem(1), Elem(2), Elem(3)]);
        assert_eq!(f4.subfield(1).unwrap(), vec![Elem(0), Elem(1)]);
        let f9 = gf(3, 2);
        assert_eq!(f9.subfield(1).unwrap(), vec![Elem(0), Elem(1), Elem(2)]);
        assert_eq!(f9.subfield(2).unwrap().len(), 9);
        assert!(matches!(gf(2, 3).subfield(2), Err(Error::NotASubfield { .. })));
    }

    #[test]
    fn spec_strings() {
        assert_eq!(FiniteField::parse("3^2").unwrap().spec(), "3^2");
        assert_eq!(FiniteField::parse("3^2/1,0,1").unwrap().spec(), "3^2");
        let other = FiniteField::parse("3^2/2,1,1").unwrap();
        assert_eq!(other.spec(), "3^2/2,1,1");
        assert_ne!(other, gf(3, 2));
        assert_eq!(FiniteField::parse("7").unwrap(), gf(7, 1));
        assert!(matches!(FiniteField::parse("x^2"), Err(Error::FieldSpec(_))));
    }
}
