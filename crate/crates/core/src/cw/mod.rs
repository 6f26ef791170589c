//! Brute-force solution counting and verification of Chevalley–Warning-type
//! statements on explicit instances.
//!
//! A failed hypothesis is not an error: the record says so and carries no
//! conclusion. Every verification also recounts the zero set through the
//! expanded Chevalley polynomial and checks the two counts agree.

mod instance;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub use instance::{Domain, Instance, InstanceJson, TheoremId};

use crate::error::{Error, Result};
use crate::field::{Elem, FiniteField};
use crate::grid::{omega_bar, GridSet, PointSet};
use crate::mpoly::{MultiPoly, PolySystem};
use crate::vset::{classify_by_power_sums, coset_test, derivative_constancy, Classification};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solutions {
    pub count: usize,
    pub zeros: PointSet,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub theorem: TheoremId,
    pub hypothesis_holds: bool,
    pub quantities: BTreeMap<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conclusion_holds: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<InstanceJson>,
}

impl VerificationRecord {
    pub fn failed(&self) -> bool {
        self.conclusion_holds == Some(false)
    }
}

fn check_domain(system: &PolySystem, set: &PointSet) -> Result<()> {
    if system.field() != set.field() {
        return Err(Error::FieldMismatch);
    }
    if system.arity() != set.arity() {
        return Err(Error::ArityMismatch { expected: system.arity(), got: set.arity() });
    }
    Ok(())
}

/// `Z_X`: the common zeros of the system inside `X`.
pub fn count_solutions(system: &PolySystem, set: &PointSet) -> Result<Solutions> {
    check_domain(system, set)?;
    let zeros: Vec<Vec<Elem>> = set
        .points()
        .iter()
        .filter(|x| system.vanishes_at(x))
        .cloned()
        .collect();
    let zeros = PointSet::new(set.field(), set.arity(), zeros)?;
    Ok(Solutions { count: zeros.len(), zeros })
}

/// `#{x ∈ X : χ(x) = 1}` using the expanded Chevalley polynomial; panics if
/// χ takes a value other than 0 or 1 on X.
pub fn indicator_count(system: &PolySystem, set: &PointSet) -> Result<usize> {
    check_domain(system, set)?;
    let chi = system.chevalley_poly();
    Ok(set
        .points()
        .iter()
        .map(|x| match chi.evaluate_unchecked(x) {
            Elem::ZERO => 0,
            Elem::ONE => 1,
            other => panic!("Chevalley polynomial took value {other} at {x:?}"),
        })
        .sum())
}

/// `φ_i'(x_i)` for every element of one axis, in axis order.
fn derivative_values(field: &FiniteField, axis: &[Elem]) -> Result<Vec<Elem>> {
    let d = MultiPoly::vanishing(field, axis)?.derivative()?;
    Ok(axis.iter().map(|&x| d.evaluate_unchecked(&[x])).collect())
}

/// `Σ_{x∈Z_X} 1 / ∏_i φ_i'(x_i)` over a grid.
pub fn weighted_residue(system: &PolySystem, grid: &GridSet) -> Result<Elem> {
    let f = grid.field();
    let derivs = grid
        .axes()
        .iter()
        .map(|axis| derivative_values(f, axis))
        .collect::<Result<Vec<_>>>()?;
    let zeros = count_solutions(system, &grid.to_point_set())?.zeros;
    let mut total = Elem::ZERO;
    for x in zeros.points() {
        let weight = f.product(x.iter().zip(grid.axes()).zip(&derivs).map(|((xi, axis), dv)| {
            let pos = axis.binary_search(xi).expect("zero lies on the grid");
            dv[pos]
        }));
        let inv = f.inv(weight).expect("vanishing polynomials are separable");
        total = f.add(total, inv);
    }
    Ok(total)
}

fn grid_of(instance: &Instance) -> GridSet {
    match &instance.domain {
        Domain::Grid(g) => g.clone(),
        Domain::FullSpace => GridSet::full(instance.field(), instance.arity()),
        Domain::Points(_) => unreachable!("grid theorems are validated to carry a grid"),
    }
}

fn vandermonde_divisible(field: &FiniteField, axis: &[Elem]) -> bool {
    let p = field.characteristic() as usize;
    axis.len() >= 2
        && axis.len().is_multiple_of(p)
        && classify_by_power_sums(field, axis).map(|(_, c)| c) == Ok(Classification::Vandermonde)
}

/// If `X − x_0` is closed under addition, `Some(e)` with `#X = p^e`.
fn point_coset_exponent(set: &PointSet) -> Option<u32> {
    let f = set.field();
    let base = set.points().first()?;
    let shifted: Vec<Vec<Elem>> = set
        .points()
        .iter()
        .map(|x| x.iter().zip(base).map(|(&a, &b)| f.sub(a, b)).collect())
        .collect();
    let group = PointSet::new(f, set.arity(), shifted).ok()?;
    for x in group.points() {
        for y in group.points() {
            let s: Vec<Elem> = x.iter().zip(y).map(|(&a, &b)| f.add(a, b)).collect();
            if !group.contains(&s) {
                return None;
            }
        }
    }
    let p = f.characteristic() as usize;
    let (mut size, mut e) = (group.len(), 0u32);
    while size % p == 0 {
        size /= p;
        e += 1;
    }
    (size == 1).then_some(e)
}

/// Checks one instance of its theorem.
pub fn verify(instance: &Instance) -> Result<VerificationRecord> {
    let field = instance.field();
    let system = &instance.system;
    let q = field.order() as u64;
    let p = field.characteristic() as u64;
    let a = field.degree() as u64;
    let n = instance.arity() as u64;
    let d = system.degree_sum() as u64;

    let set = instance.point_set();
    let solutions = count_solutions(system, &set)?;
    let z = solutions.count as u64;
    let indicator = indicator_count(system, &set)? as u64;
    assert_eq!(indicator, z, "indicator identity violated");

    let mut quantities: BTreeMap<String, Value> = BTreeMap::new();
    quantities.insert("q".into(), json!(q));
    quantities.insert("n".into(), json!(n));
    quantities.insert("degree_sum".into(), json!(d));
    quantities.insert("x_size".into(), json!(set.len()));
    quantities.insert("z_count".into(), json!(z));
    quantities.insert("indicator_sum".into(), json!(indicator));
    quantities.insert("p_divides_z".into(), json!(z.is_multiple_of(p)));

    let (hypothesis, conclusion) = match instance.theorem {
        TheoremId::Chevalley => (d < n, z != 1),
        TheoremId::Cw => (d < n, z.is_multiple_of(p)),
        TheoremId::Warning => {
            let hyp = d < n;
            let bound = if hyp { Some(q.pow((n - d) as u32)) } else { None };
            if let Some(b) = bound {
                quantities.insert("warning_bound".into(), json!(b));
            }
            (hyp, bound.is_some_and(|b| z == 0 || z >= b))
        }
        TheoremId::Rchev | TheoremId::Rcw0 | TheoremId::Coset | TheoremId::Vcw => {
            let grid = grid_of(instance);
            let budget = grid.degree_budget() as u64;
            quantities.insert("axis_budget".into(), json!(budget));
            let mut hyp = (q - 1) * d < budget;
            let conclusion = match instance.theorem {
                TheoremId::Rchev => z != 1,
                TheoremId::Rcw0 => {
                    let residue = weighted_residue(system, &grid)?;
                    quantities.insert("residue".into(), json!(residue));
                    residue.is_zero()
                }
                TheoremId::Coset => {
                    let all_cosets = grid
                        .axes()
                        .iter()
                        .map(|axis| coset_test(field, axis).map(|g| g.is_some()))
                        .collect::<Result<Vec<_>>>()?
                        .into_iter()
                        .all(|c| c);
                    quantities.insert("axes_are_cosets".into(), json!(all_cosets));
                    hyp &= all_cosets;
                    z.is_multiple_of(p)
                }
                _ => {
                    let all_vdm = grid.axes().iter().all(|axis| vandermonde_divisible(field, axis));
                    quantities.insert("axes_vandermonde_divisible".into(), json!(all_vdm));
                    hyp &= all_vdm;
                    z.is_multiple_of(p)
                }
            };
            (hyp, conclusion)
        }
        TheoremId::Rcw => {
            let report = omega_bar(&set)?;
            quantities.insert("omega_bar".into(), json!(report.omega_bar));
            quantities.insert("omega_bar_witness".into(), json!(report.witness));
            ((q - 1) * d < report.omega_bar as u64, z.is_multiple_of(p))
        }
        TheoremId::CoeffFormula => {
            if system.polys().len() != 1 {
                return Err(Error::Instance("coeff-formula takes exactly one polynomial".into()));
            }
            let f = &system.polys()[0];
            let grid = grid_of(instance);
            let all_vdm = grid.axes().iter().all(|axis| vandermonde_divisible(field, axis));
            let corner: Vec<u32> = grid.axes().iter().map(|axis| axis.len() as u32 - 1).collect();
            let topped = f.is_d_topped(&corner)?;
            quantities.insert("axes_vandermonde_divisible".into(), json!(all_vdm));
            quantities.insert("d_topped".into(), json!(topped));
            let integral = set.integrate(f)?;
            quantities.insert("integral".into(), json!(integral));
            let c_d = f.coeff_of(&corner)?;
            quantities.insert("corner_coefficient".into(), json!(c_d));
            let hyp = all_vdm && topped;
            let conclusion = if all_vdm {
                let constants = grid
                    .axes()
                    .iter()
                    .map(|axis| derivative_constancy(field, axis))
                    .collect::<Result<Vec<_>>>()?;
                let constants: Vec<Elem> =
                    constants.into_iter().map(|c| c.expect("Vandermonde axis with p | size")).collect();
                let lhs = field.mul(field.product(constants.iter().copied()), c_d);
                quantities.insert("derivative_constants".into(), json!(constants));
                quantities.insert("scaled_coefficient".into(), json!(lhs));
                lhs == integral
            } else {
                false
            };
            (hyp, conclusion)
        }
        TheoremId::AmBound | TheoremId::AmBoundPMinusOne => {
            let e = point_coset_exponent(&set);
            quantities.insert("coset".into(), json!(e.is_some()));
            if let Some(e) = e {
                quantities.insert("e".into(), json!(e));
            }
            quantities.insert("a".into(), json!(a));
            let bound = match instance.theorem {
                TheoremId::AmBound => e.map(u64::from),
                _ => e.map(|_| p - 1),
            };
            (bound.is_some_and(|b| a * d < b), z.is_multiple_of(p))
        }
    };

    let conclusion_holds = hypothesis.then_some(conclusion);
    let counterexample = (conclusion_holds == Some(false)).then(|| instance.to_json());
    Ok(VerificationRecord {
        theorem: instance.theorem,
        hypothesis_holds: hypothesis,
        quantities,
        conclusion_holds,
        counterexample,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theorem_ids_serialize_as_their_names() {
        for t in TheoremId::ALL {
            assert_eq!(serde_json::to_value(t).unwrap(), serde_json::Value::from(t.as_str()));
            assert_eq!(t.as_str().parse::<TheoremId>().unwrap(), t);
        }
    }

    fn gf(p: u32, a: u32) -> FiniteField {
        FiniteField::new(p, a, None).unwrap()
    }

    fn linear_sum(f: &FiniteField, n: usize) -> MultiPoly {
        MultiPoly::build(f, n, (0..n).map(|i| {
            let mut e = vec![0; n];
            e[i] = 1;
            (Elem::ONE, e)
        }))
        .unwrap()
    }

    fn full_axes(f: &FiniteField, n: usize) -> Vec<Vec<Elem>> {
        vec![f.elements().collect(); n]
    }

    #[test]
    fn counting_examples() {
        let f2 = gf(2, 1);
        let sys = PolySystem::new(vec![linear_sum(&f2, 2)]).unwrap();
        let sol = count_solutions(&sys, &PointSet::full_space(&f2, 2)).unwrap();
        assert_eq!(sol.count, 2);
        assert_eq!(sol.zeros.points(), &[vec![Elem(0), Elem(0)], vec![Elem(1), Elem(1)]]);
        let sys = PolySystem::new(vec![MultiPoly::var(&f2, 2, 0)]).unwrap();
        let x = GridSet::new(&f2, vec![vec![Elem(1)], vec![Elem(1)]]).unwrap().to_point_set();
        assert_eq!(count_solutions(&sys, &x).unwrap().count, 0);
    }

    #[test]
    fn residues() {
        let f2 = gf(2, 1);
        let sys = PolySystem::new(vec![linear_sum(&f2, 2)]).unwrap();
        let grid = GridSet::new(&f2, full_axes(&f2, 2)).unwrap();
        assert_eq!(weighted_residue(&sys, &grid).unwrap(), Elem(0));
        let empty = GridSet::new(&f2, vec![vec![Elem(1)], vec![Elem(0)]]).unwrap();
        assert_eq!(weighted_residue(&sys, &empty).unwrap(), Elem(0));
        // Full axes: φ' = −1, so the residue is (−1)^n #Z.
        let f3 = gf(3, 1);
        for n in 1..=3 {
            let sys = PolySystem::new(vec![MultiPoly::var(&f3, n, 0)]).unwrap();
            let grid = GridSet::full(&f3, n);
            let z = count_solutions(&sys, &grid.to_point_set()).unwrap().count as u64;
            let expected = if n % 2 == 0 { f3.from_int(z) } else { f3.neg(f3.from_int(z)) };
            assert_eq!(weighted_residue(&sys, &grid).unwrap(), expected);
        }
    }

    #[test]
    fn rcw_boundary_is_strict() {
        let f2 = gf(2, 1);
        let diag = PointSet::new(&f2, 2, vec![vec![Elem(0), Elem(0)], vec![Elem(1), Elem(1)]]).unwrap();
        let sys = PolySystem::new(vec![linear_sum(&f2, 2)]).unwrap();
        let inst = Instance::new(TheoremId::Rcw, sys, Domain::Points(diag)).unwrap();
        let rec = verify(&inst).unwrap();
        assert!(!rec.hypothesis_holds);
        assert_eq!(rec.conclusion_holds, None);
        assert_eq!(rec.counterexample, None);
    }

    #[test]
    fn vcw_and_cw_examples() {
        let f2 = gf(2, 1);
        let sys = PolySystem::new(vec![linear_sum(&f2, 3)]).unwrap();
        let inst = Instance::new(TheoremId::Vcw, sys, Domain::Grid(GridSet::full(&f2, 3))).unwrap();
        let rec = verify(&inst).unwrap();
        assert!(rec.hypothesis_holds);
        assert_eq!(rec.quantities["z_count"], json!(4));
        assert_eq!(rec.conclusion_holds, Some(true));

        let f3 = gf(3, 1);
        let sys = PolySystem::new(vec![MultiPoly::var(&f3, 2, 0)]).unwrap();
        let inst = Instance::new(TheoremId::Cw, sys, Domain::FullSpace).unwrap();
        let rec = verify(&inst).unwrap();
        assert_eq!(rec.quantities["z_count"], json!(3));
        assert_eq!(rec.conclusion_holds, Some(true));
    }

    #[test]
    fn p_minus_one_bound_has_a_counterexample() {
        // A single point is a coset of the trivial subgroup; f = t1 − x1 has
        // degree 1 < p − 1 = 4 and exactly one zero there.
        let f5 = gf(5, 1);
        let f = MultiPoly::build(&f5, 2, [(Elem(1), vec![1, 0]), (Elem(3), vec![0, 0])]).unwrap();
        let point = PointSet::new(&f5, 2, vec![vec![Elem(2), Elem(4)]]).unwrap();
        let sys = PolySystem::new(vec![f]).unwrap();
        let weak = Instance::new(TheoremId::AmBoundPMinusOne, sys.clone(), Domain::Points(point.clone())).unwrap();
        let rec = verify(&weak).unwrap();
        assert!(rec.failed());
        assert_eq!(rec.counterexample, Some(weak.to_json()));
        let strong = Instance::new(TheoremId::AmBound, sys, Domain::Points(point)).unwrap();
        assert!(!verify(&strong).unwrap().hypothesis_holds);
    }

    #[test]
    fn instance_shape_checked() {
        let f3 = gf(3, 1);
        let sys = PolySystem::new(vec![MultiPoly::var(&f3, 2, 0)]).unwrap();
        assert!(matches!(
            Instance::new(TheoremId::Vcw, sys.clone(), Domain::FullSpace),
            Err(Error::Instance(_))
        ));
        let grid = GridSet::full(&f3, 3);
        assert!(matches!(
            Instance::new(TheoremId::Rchev, sys, Domain::Grid(grid)),
            Err(Error::ArityMismatch { .. })
        ));
        assert_eq!("nope".parse::<TheoremId>().unwrap_err(), Error::UnknownTheorem("nope".into()));
    }

    #[test]
    fn instance_json_round_trip() {
        let text = r#"{"theorem":"rchev","field":"3^1","system":[{"arity":2,"terms":[[2,[0,1]],[1,[1,0]]]}],"grid":[[0,1,2],[0,1]]}"#;
        let inst = Instance::parse_json(text).unwrap();
        assert_eq!(serde_json::to_string(&inst.to_json()).unwrap(), text);
    }
}
