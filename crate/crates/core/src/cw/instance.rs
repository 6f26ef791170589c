use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, FiniteField};
use crate::grid::{GridSet, PointSet, PointSetJson};
use crate::mpoly::{MultiPoly, PolyJson, PolySystem};

/// The statements [`super::verify`] knows how to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoremId {
    /// `Σ deg f_j < n` ⇒ `#Z ≠ 1` on F_q^n.
    Chevalley,
    /// `Σ deg f_j < n` ⇒ `p | #Z` on F_q^n.
    Cw,
    /// `d = Σ deg f_j < n` ⇒ `Z = ∅` or `#Z ≥ q^{n−d}`.
    Warning,
    /// `(q−1) Σ deg f_j < Σ (#X_i − 1)` ⇒ `#Z_X ≠ 1` on a grid.
    Rchev,
    /// Same hypothesis ⇒ `Σ_{x∈Z_X} 1/∏ φ_i'(x_i) = 0`.
    Rcw0,
    /// Same hypothesis with coset axes ⇒ `p | #Z_X`.
    Coset,
    /// Same hypothesis with Vandermonde axes of size divisible by p ⇒ `p | #Z_X`.
    Vcw,
    /// `(q−1) Σ deg f_j < ω̲(X)` ⇒ `p | #Z_X` for any point set.
    Rcw,
    /// Vandermonde axes of size divisible by p and a d-topped `f` ⇒
    /// `(c_1⋯c_n) c_d(f) = Σ_{x∈X} f(x)`.
    CoeffFormula,
    /// X a coset of a subgroup of order p^e in F_{p^a}^n and
    /// `a Σ deg f_j < e` ⇒ `p | #Z_X`.
    AmBound,
    /// Like [`TheoremId::AmBound`] but with hypothesis `a Σ deg f_j < p − 1`.
    /// This does not imply the conclusion (a single point is a coset of the
    /// trivial group); kept to exercise counterexample reporting.
    #[serde(rename = "am-bound-p-minus-1")]
    AmBoundPMinusOne,
}

impl TheoremId {
    pub const ALL: [TheoremId; 11] = [
        TheoremId::Chevalley,
        TheoremId::Cw,
        TheoremId::Warning,
        TheoremId::Rchev,
        TheoremId::Rcw0,
        TheoremId::Coset,
        TheoremId::Vcw,
        TheoremId::Rcw,
        TheoremId::CoeffFormula,
        TheoremId::AmBound,
        TheoremId::AmBoundPMinusOne,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::Chevalley => "chevalley",
            TheoremId::Cw => "cw",
            TheoremId::Warning => "warning",
            TheoremId::Rchev => "rchev",
            TheoremId::Rcw0 => "rcw0",
            TheoremId::Coset => "coset",
            TheoremId::Vcw => "vcw",
            TheoremId::Rcw => "rcw",
            TheoremId::CoeffFormula => "coeff-formula",
            TheoremId::AmBound => "am-bound",
            TheoremId::AmBoundPMinusOne => "am-bound-p-minus-1",
        }
    }

    pub(crate) fn domain_kind(self) -> DomainKind {
        match self {
            TheoremId::Chevalley | TheoremId::Cw | TheoremId::Warning => DomainKind::FullSpace,
            TheoremId::Rchev
            | TheoremId::Rcw0
            | TheoremId::Coset
            | TheoremId::Vcw
            | TheoremId::CoeffFormula => DomainKind::Grid,
            TheoremId::Rcw | TheoremId::AmBound | TheoremId::AmBoundPMinusOne => DomainKind::Points,
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::UnknownTheorem(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum DomainKind {
    FullSpace,
    Grid,
    Points,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Domain {
    /// All of F_q^n, n taken from the system.
    FullSpace,
    Grid(GridSet),
    Points(PointSet),
}

/// A theorem id, a polynomial system and the set its variables range over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub theorem: TheoremId,
    pub system: PolySystem,
    pub domain: Domain,
}

/// Wire form:
/// `{"theorem": id, "field": spec, "system": [poly…], "grid": [[axis]…] | "points": PointSet}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceJson {
    pub theorem: String,
    pub field: String,
    pub system: Vec<PolyJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<Vec<Vec<Elem>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<PointSetJson>,
}

impl Instance {
    pub fn new(theorem: TheoremId, system: PolySystem, domain: Domain) -> Result<Self> {
        let n = system.arity();
        let field = system.field();
        let (kind, arity) = match &domain {
            Domain::FullSpace => (DomainKind::FullSpace, n),
            Domain::Grid(g) => {
                if g.field() != field {
                    return Err(Error::FieldMismatch);
                }
                (DomainKind::Grid, g.arity())
            }
            Domain::Points(x) => {
                if x.field() != field {
                    return Err(Error::FieldMismatch);
                }
                (DomainKind::Points, x.arity())
            }
        };
        if arity != n {
            return Err(Error::ArityMismatch { expected: n, got: arity });
        }
        let expected = theorem.domain_kind();
        // A grid is also a point set.
        let ok = kind == expected || (expected == DomainKind::Points && kind == DomainKind::Grid);
        if !ok {
            let want = match expected {
                DomainKind::FullSpace => "no grid or points (the full space)",
                DomainKind::Grid => "a \"grid\"",
                DomainKind::Points => "\"points\" or a \"grid\"",
            };
            return Err(Error::Instance(format!("theorem {theorem} expects {want}")));
        }
        Ok(Self { theorem, system, domain })
    }

    pub fn field(&self) -> &FiniteField {
        self.system.field()
    }

    pub fn arity(&self) -> usize {
        self.system.arity()
    }

    /// The domain as an explicit point set.
    pub fn point_set(&self) -> PointSet {
        match &self.domain {
            Domain::FullSpace => PointSet::full_space(self.field(), self.arity()),
            Domain::Grid(g) => g.to_point_set(),
            Domain::Points(x) => x.clone(),
        }
    }

    pub fn from_json(raw: &InstanceJson) -> Result<Self> {
        let theorem: TheoremId = raw.theorem.parse()?;
        let field = FiniteField::parse(&raw.field)?;
        let polys = raw
            .system
            .iter()
            .map(|p| MultiPoly::from_json(&field, p))
            .collect::<Result<Vec<_>>>()?;
        let system = PolySystem::new(polys)?;
        let domain = match (&raw.grid, &raw.points) {
            (Some(_), Some(_)) => {
                return Err(Error::Instance("give either \"grid\" or \"points\", not both".into()))
            }
            (Some(axes), None) => Domain::Grid(GridSet::new(&field, axes.clone())?),
            (None, Some(points)) => {
                let set = PointSet::from_json(&field, points)?;
                if set.is_empty() {
                    return Err(Error::EmptySet);
                }
                Domain::Points(set)
            }
            (None, None) => Domain::FullSpace,
        };
        Self::new(theorem, system, domain)
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        let raw: InstanceJson =
            serde_json::from_str(text).map_err(|e| Error::Instance(e.to_string()))?;
        Self::from_json(&raw)
    }

    pub fn to_json(&self) -> InstanceJson {
        let (grid, points) = match &self.domain {
            Domain::FullSpace => (None, None),
            Domain::Grid(g) => (Some(g.axes().to_vec()), None),
            Domain::Points(x) => (None, Some(x.to_json())),
        };
        InstanceJson {
            theorem: self.theorem.to_string(),
            field: self.field().spec(),
            system: self.system.to_json(),
            grid,
            points,
        }
    }
}
