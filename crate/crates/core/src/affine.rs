//! Invertible affine maps `x ↦ Mx + a` of F_q^n.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, FiniteField};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineMap {
    field: FiniteField,
    matrix: Vec<Vec<Elem>>,
    translation: Vec<Elem>,
}

/// Wire form: `{"matrix": [[..]..], "translation": [..]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AffineMapJson {
    pub matrix: Vec<Vec<Elem>>,
    pub translation: Vec<Elem>,
}

fn gauss_jordan(field: &FiniteField, matrix: &[Vec<Elem>]) -> Option<Vec<Vec<Elem>>> {
    let n = matrix.len();
    let mut a: Vec<Vec<Elem>> = matrix
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Elem::ONE } else { Elem::ZERO }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let inv = field.inv(a[col][col]).expect("pivot is nonzero");
        for x in a[col].iter_mut() {
            *x = field.mul(*x, inv);
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col];
            let pivot = a[col].clone();
            for (x, &y) in a[r].iter_mut().zip(&pivot) {
                *x = field.sub(*x, field.mul(factor, y));
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

impl AffineMap {
    pub fn new(field: &FiniteField, matrix: Vec<Vec<Elem>>, translation: Vec<Elem>) -> Result<Self> {
        let n = translation.len();
        if matrix.len() != n {
            return Err(Error::ArityMismatch { expected: n, got: matrix.len() });
        }
        for row in &matrix {
            if row.len() != n {
                return Err(Error::ArityMismatch { expected: n, got: row.len() });
            }
            for &x in row {
                field.check(x)?;
            }
        }
        for &x in &translation {
            field.check(x)?;
        }
        if gauss_jordan(field, &matrix).is_none() {
            return Err(Error::SingularMatrix);
        }
        Ok(Self { field: field.clone(), matrix, translation })
    }

    pub fn from_json(field: &FiniteField, raw: AffineMapJson) -> Result<Self> {
        Self::new(field, raw.matrix, raw.translation)
    }

    pub fn identity(field: &FiniteField, n: usize) -> Self {
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Elem::ONE } else { Elem::ZERO }).collect())
            .collect();
        Self { field: field.clone(), matrix, translation: vec![Elem::ZERO; n] }
    }

    pub fn translation_by(field: &FiniteField, shift: Vec<Elem>) -> Result<Self> {
        let mut map = Self::identity(field, shift.len());
        for &x in &shift {
            field.check(x)?;
        }
        map.translation = shift;
        Ok(map)
    }

    /// Uniformly random invertible matrix and translation.
    pub fn random<R: Rng + ?Sized>(field: &FiniteField, n: usize, rng: &mut R) -> Self {
        let q = field.order();
        loop {
            let matrix: Vec<Vec<Elem>> = (0..n)
                .map(|_| (0..n).map(|_| Elem(rng.random_range(0..q))).collect())
                .collect();
            if gauss_jordan(field, &matrix).is_some() {
                let translation = (0..n).map(|_| Elem(rng.random_range(0..q))).collect();
                return Self { field: field.clone(), matrix, translation };
            }
        }
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    pub fn matrix(&self) -> &[Vec<Elem>] {
        &self.matrix
    }

    pub fn translation(&self) -> &[Elem] {
        &self.translation
    }

    pub fn apply(&self, x: &[Elem]) -> Result<Vec<Elem>> {
        if x.len() != self.dim() {
            return Err(Error::ArityMismatch { expected: self.dim(), got: x.len() });
        }
        let f = &self.field;
        Ok(self
            .matrix
            .iter()
            .zip(&self.translation)
            .map(|(row, &a)| {
                row.iter().zip(x).fold(a, |acc, (&m, &xi)| f.add(acc, f.mul(m, xi)))
            })
            .collect())
    }

    pub fn inverse(&self) -> Self {
        let f = &self.field;
        let inv = gauss_jordan(f, &self.matrix).expect("matrix is invertible by construction");
        let translation = inv
            .iter()
            .map(|row| {
                let v = row
                    .iter()
                    .zip(&self.translation)
                    .fold(Elem::ZERO, |acc, (&m, &a)| f.add(acc, f.mul(m, a)));
                f.neg(v)
            })
            .collect();
        Self { field: f.clone(), matrix: inv, translation }
    }

    pub fn to_json(&self) -> AffineMapJson {
        AffineMapJson { matrix: self.matrix.clone(), translation: self.translation.clone() }
    }
}
