//! Seeded random instances per theorem and a parallel fuzzing driver.
//!
//! Trial `i` of a run with seed `s` draws from `ChaCha8(s)` on stream `i`,
//! so every trial is reproducible on its own and results do not depend on
//! scheduling. Degrees are drawn so the hypothesis holds about half the
//! time.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::affine::AffineMap;
use crate::census::enumerate_vandermonde;
use crate::cw::{verify, Domain, Instance, InstanceJson, TheoremId, VerificationRecord};
use crate::error::Result;
use crate::field::{Elem, FiniteField};
use crate::grid::{additive_subgroups, affine_apply, graph_set, omega_bar, span_coset, GridSet, Point, PointSet};
use crate::mpoly::{MultiPoly, PolySystem};

/// Most terms in a random polynomial.
pub const MAX_TERMS: usize = 6;
const MAX_POLYS: u32 = 3;
/// Ambient spaces with more points than this are not drawn.
const MAX_SPACE: u64 = 256;

/// The RNG for one trial.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Per-field data reused across trials.
#[derive(Debug, Clone)]
pub struct FuzzContext {
    field: FiniteField,
    /// Additive subgroups of F_q.
    subgroups: Vec<Vec<Elem>>,
    /// Vandermonde subsets with size divisible by p.
    vandermonde: Vec<Vec<Elem>>,
}

impl FuzzContext {
    pub fn new(field: &FiniteField) -> Self {
        let subgroups: Vec<Vec<Elem>> = additive_subgroups(field, 1)
            .iter()
            .map(|g| g.points().iter().map(|x| x[0]).collect())
            .collect();
        // Beyond q = 16 the exhaustive list is too slow; nontrivial subgroups
        // are Vandermonde with p | size.
        let vandermonde = match enumerate_vandermonde(field, 16, true) {
            Ok(v) => v.listing,
            Err(_) => subgroups.iter().filter(|g| g.len() >= 2).cloned().collect(),
        };
        Self { field: field.clone(), subgroups, vandermonde }
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    fn elem<R: Rng>(&self, rng: &mut R) -> Elem {
        Elem(rng.random_range(0..self.field.order()))
    }

    fn nonzero<R: Rng>(&self, rng: &mut R) -> Elem {
        Elem(rng.random_range(1..self.field.order()))
    }

    fn point<R: Rng>(&self, n: usize, rng: &mut R) -> Point {
        (0..n).map(|_| self.elem(rng)).collect()
    }

    /// Largest n ≤ `cap` with q^n ≤ [`MAX_SPACE`].
    fn max_arity(&self, cap: usize) -> usize {
        let q = self.field.order() as u64;
        (1..=cap).take_while(|&n| q.pow(n as u32) <= MAX_SPACE).last().unwrap_or(1)
    }

    fn arity<R: Rng>(&self, cap: usize, rng: &mut R) -> usize {
        rng.random_range(1..=self.max_arity(cap))
    }

    /// A subset of F_q of size at least half of q.
    fn large_subset<R: Rng>(&self, rng: &mut R) -> Vec<Elem> {
        let q = self.field.order() as usize;
        let size = q - rng.random_range(0..=q / 2);
        let mut all: Vec<Elem> = self.field.elements().collect();
        all.shuffle(rng);
        all.truncate(size.max(1));
        all.sort_unstable();
        all
    }

    /// A uniformly chosen subgroup, then a uniform translate.
    fn coset<R: Rng>(&self, rng: &mut R) -> Vec<Elem> {
        let group = self.subgroups.choose(rng).expect("the trivial group");
        let a = self.elem(rng);
        let mut c: Vec<Elem> = group.iter().map(|&g| self.field.add(a, g)).collect();
        c.sort_unstable();
        c
    }

    fn vandermonde_axis<R: Rng>(&self, rng: &mut R) -> Vec<Elem> {
        self.vandermonde.choose(rng).expect("F_q itself qualifies").clone()
    }

    fn grid<R: Rng>(&self, n: usize, rng: &mut R, axis: impl Fn(&Self, &mut R) -> Vec<Elem>) -> GridSet {
        let axes = (0..n).map(|_| axis(self, rng)).collect();
        GridSet::new(&self.field, axes).expect("axes are nonempty subsets of F_q")
    }

    /// An exponent vector of total degree `deg`, each entry at most `cap`.
    fn exponent_of_degree<R: Rng>(&self, n: usize, deg: u32, cap: u32, rng: &mut R) -> Vec<u32> {
        assert!(deg <= cap * n as u32);
        let mut e = vec![0u32; n];
        for _ in 0..deg {
            let open: Vec<usize> = (0..n).filter(|&i| e[i] < cap).collect();
            e[*open.choose(rng).expect("room left")] += 1;
        }
        e
    }

    /// A polynomial of total degree exactly `deg ≥ 1` with at most
    /// [`MAX_TERMS`] terms. Exponents stay ≤ q − 1 unless `deg` forces more.
    pub fn random_poly<R: Rng>(&self, n: usize, deg: u32, rng: &mut R) -> MultiPoly {
        assert!(deg >= 1 && n >= 1);
        let cap = (self.field.order() - 1).max(deg.div_ceil(n as u32));
        loop {
            let mut terms = vec![(self.nonzero(rng), self.exponent_of_degree(n, deg, cap, rng))];
            for _ in 1..rng.random_range(1..=MAX_TERMS) {
                let d = rng.random_range(0..=deg);
                terms.push((self.elem(rng), self.exponent_of_degree(n, d, cap, rng)));
            }
            let f = MultiPoly::build(&self.field, n, terms).expect("well-formed terms");
            if f.total_degree() == Some(deg) {
                return f;
            }
        }
    }

    /// `total` split into 1 to 3 positive parts, one polynomial per part.
    fn random_system<R: Rng>(&self, n: usize, total: u32, rng: &mut R) -> PolySystem {
        let r = rng.random_range(1..=total.clamp(1, MAX_POLYS));
        let mut parts = vec![1u32; r as usize];
        for _ in r..total {
            let k = rng.random_range(0..parts.len());
            parts[k] += 1;
        }
        let polys = parts.into_iter().map(|d| self.random_poly(n, d, rng)).collect();
        PolySystem::new(polys).expect("positive degrees, one field")
    }

    /// A degree sum `d ≥ 1` with `mult·d < budget` when `hold`, else just
    /// above the largest such value. `None` if `hold` is impossible.
    fn degree_sum<R: Rng>(hold: bool, mult: u64, budget: u64, rng: &mut R) -> Option<u32> {
        let dmax = if budget == 0 { 0 } else { (budget - 1) / mult.max(1) } as u32;
        match (hold, dmax) {
            (true, 0) => None,
            (true, _) => Some(rng.random_range(1..=dmax)),
            (false, _) => Some(dmax + rng.random_range(1..=2)),
        }
    }

    fn rcw_domain<R: Rng>(&self, rng: &mut R) -> PointSet {
        let field = &self.field;
        let n = self.arity(3, rng);
        let choice = rng.random_range(0..5);
        match choice {
            0 => self.grid(n, rng, Self::vandermonde_axis).to_point_set(),
            1 => {
                let gens: Vec<Point> = (0..rng.random_range(1..=n + 1)).map(|_| self.point(n, rng)).collect();
                let base = self.point(n, rng);
                span_coset(field, &gens, &base).expect("generators in F_q^n").set
            }
            2 if n >= 2 => {
                let f = self.random_poly(n - 1, rng.random_range(1..=field.order().min(4)), rng);
                graph_set(&f).expect("non-constant")
            }
            3 => {
                let grid = self.grid(n, rng, Self::large_subset).to_point_set();
                affine_apply(&grid, &AffineMap::random(field, n, rng)).expect("same dimension")
            }
            _ => {
                let space = PointSet::full_space(field, n);
                let p = field.characteristic() as usize;
                let size = p * rng.random_range(1..=space.len() / p);
                let mut pts = space.points().to_vec();
                pts.shuffle(rng);
                pts.truncate(size);
                PointSet::new(field, n, pts).expect("points of F_q^n")
            }
        }
    }

    /// A polynomial with a `t^corner` term; `spoil` adds a monomial strictly
    /// above the corner so the polynomial is not corner-topped.
    fn coeff_formula_poly<R: Rng>(&self, corner: &[u32], spoil: bool, rng: &mut R) -> MultiPoly {
        let n = corner.len();
        let q = self.field.order();
        loop {
            let mut terms = vec![(self.elem(rng), corner.to_vec())];
            for _ in 1..rng.random_range(1..=MAX_TERMS) {
                let e: Vec<u32> = corner.iter().map(|&c| rng.random_range(0..=c.max(q - 1))).collect();
                terms.push((self.elem(rng), e));
            }
            if spoil {
                let mut e = corner.to_vec();
                e[rng.random_range(0..n)] += rng.random_range(1..=2);
                terms.push((self.nonzero(rng), e));
            }
            let f = MultiPoly::build(&self.field, n, terms).expect("well-formed terms");
            if f.total_degree().unwrap_or(0) >= 1 {
                return f;
            }
        }
    }

    /// A random instance of `theorem` over this field. The hypothesis is
    /// aimed to hold with probability about 1/2; domains too small for it
    /// are redrawn a bounded number of times.
    pub fn random_instance<R: Rng>(&self, theorem: TheoremId, rng: &mut R) -> Instance {
        const REDRAWS: usize = 32;
        let hold = rng.random_bool(0.5);
        for attempt in 0..REDRAWS {
            let hold = hold && attempt + 1 < REDRAWS;
            if let Some((system, domain)) = self.try_instance(theorem, hold, rng) {
                return Instance::new(theorem, system, domain).expect("generated instances are well-formed");
            }
        }
        unreachable!("the last attempt never aims for the hypothesis")
    }

    fn try_instance<R: Rng>(&self, theorem: TheoremId, hold: bool, rng: &mut R) -> Option<(PolySystem, Domain)> {
        let field = &self.field;
        let q = field.order() as u64;
        Some(match theorem {
            TheoremId::Chevalley | TheoremId::Cw | TheoremId::Warning => {
                let n = self.arity(4, rng);
                let d = Self::degree_sum(hold, 1, n as u64, rng)?;
                (self.random_system(n, d, rng), Domain::FullSpace)
            }
            TheoremId::Rchev | TheoremId::Rcw0 | TheoremId::Coset | TheoremId::Vcw => {
                let n = self.arity(3, rng);
                let grid = match theorem {
                    TheoremId::Coset => self.grid(n, rng, Self::coset),
                    TheoremId::Vcw => self.grid(n, rng, Self::vandermonde_axis),
                    _ => self.grid(n, rng, Self::large_subset),
                };
                let d = Self::degree_sum(hold, q - 1, grid.degree_budget() as u64, rng)?;
                (self.random_system(n, d, rng), Domain::Grid(grid))
            }
            TheoremId::Rcw => {
                let set = self.rcw_domain(rng);
                let budget = omega_bar(&set).expect("nonempty set").omega_bar as u64;
                let d = Self::degree_sum(hold, q - 1, budget, rng)?;
                (self.random_system(set.arity(), d, rng), Domain::Points(set))
            }
            TheoremId::CoeffFormula => {
                let n = self.arity(3, rng);
                let grid = self.grid(n, rng, Self::vandermonde_axis);
                let corner: Vec<u32> = grid.axes().iter().map(|a| a.len() as u32 - 1).collect();
                let f = self.coeff_formula_poly(&corner, !hold, rng);
                (PolySystem::new(vec![f]).expect("non-constant"), Domain::Grid(grid))
            }
            TheoremId::AmBound | TheoremId::AmBoundPMinusOne => {
                let n = self.arity(3, rng);
                let gens: Vec<Point> = (0..rng.random_range(0..=n + 1)).map(|_| self.point(n, rng)).collect();
                let base = self.point(n, rng);
                let coset = span_coset(field, &gens, &base).expect("generators in F_q^n");
                let a = field.degree() as u64;
                let budget = match theorem {
                    TheoremId::AmBound => coset.e as u64,
                    _ => field.characteristic() as u64 - 1,
                };
                let d = Self::degree_sum(hold, a, budget, rng)?;
                (self.random_system(n, d, rng), Domain::Points(coset.set))
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzCounterexample {
    pub trial: u64,
    pub instance: InstanceJson,
    pub record: VerificationRecord,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzReport {
    pub theorem: TheoremId,
    pub seed: u64,
    pub fields: Vec<String>,
    pub trials: u64,
    pub hypothesis_held: u64,
    pub conclusion_failures: u64,
    /// Trials where `#Z_X` differed from the 0/1 sum of the Chevalley polynomial.
    pub indicator_mismatches: u64,
    pub counterexamples: Vec<FuzzCounterexample>,
}

impl FuzzReport {
    pub fn clean(&self) -> bool {
        self.conclusion_failures == 0 && self.indicator_mismatches == 0
    }
}

/// One random instance for trial `trial`; field `trial mod #fields`.
pub fn fuzz_trial(theorem: TheoremId, contexts: &[FuzzContext], seed: u64, trial: u64) -> Instance {
    let mut rng = trial_rng(seed, trial);
    let ctx = &contexts[(trial % contexts.len() as u64) as usize];
    ctx.random_instance(theorem, &mut rng)
}

/// Generates and verifies `trials` instances in parallel.
pub fn run_fuzz(theorem: TheoremId, fields: &[FiniteField], trials: u64, seed: u64) -> Result<FuzzReport> {
    assert!(!fields.is_empty(), "at least one field");
    let contexts: Vec<FuzzContext> = fields.iter().map(FuzzContext::new).collect();
    let records = (0..trials)
        .into_par_iter()
        .map(|i| {
            let instance = fuzz_trial(theorem, &contexts, seed, i);
            verify(&instance).map(|r| (i, r))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report = FuzzReport {
        theorem,
        seed,
        fields: fields.iter().map(FiniteField::spec).collect(),
        trials,
        hypothesis_held: 0,
        conclusion_failures: 0,
        indicator_mismatches: 0,
        counterexamples: Vec::new(),
    };
    for (trial, record) in records {
        report.hypothesis_held += record.hypothesis_holds as u64;
        if record.quantities.get("indicator_sum") != record.quantities.get("z_count") {
            report.indicator_mismatches += 1;
        }
        if let Some(instance) = record.counterexample.clone() {
            report.conclusion_failures += 1;
            report.counterexamples.push(FuzzCounterexample { trial, instance, record });
        }
    }
    Ok(report)
}
