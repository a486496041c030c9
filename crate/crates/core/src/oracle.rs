//! Brute-force ground truth over F_p: enumerate fibers, find singular points
//! by the Jacobian criterion, compute Hessian ranks, and diff against the
//! classifier.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra_core::{inv_mod, mul_mod, pow_mod, MultiPoly};
use crate::classifier::{classify, CoefficientPoint, SingularityReport};
use crate::error::{Error, Result};
use crate::presentations::{bfz_presentation, reduced_presentation, reduction_witness, Family, Presentation};

pub const DEFAULT_BUDGET: u128 = 100_000_000;
pub const BUDGET_ENV: &str = "CLUSTER_SING_BUDGET";

/// Point budget, from the environment if set.
pub fn default_budget() -> u128 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|s| s.trim().replace('_', "").parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

/// A polynomial flattened for repeated evaluation mod p.
#[derive(Clone, Debug)]
struct Compiled {
    terms: Vec<(u64, Vec<(usize, i32)>)>,
}

impl Compiled {
    fn new(f: &MultiPoly, p: u64) -> Self {
        let terms = f
            .reduce_mod(p)
            .terms()
            .map(|(e, c)| {
                let c = crate::algebra_core::poly::bigint_mod(c, p);
                let vars = e.iter().enumerate().filter(|(_, &k)| k != 0).map(|(i, &k)| (i, k)).collect();
                (c, vars)
            })
            .collect();
        Self { terms }
    }

    /// Every variable with a negative exponent must be nonzero in `pt`.
    fn eval(&self, pt: &[u64], p: u64) -> u64 {
        let mut acc = 0;
        for (c, vars) in &self.terms {
            let mut t = *c;
            for &(i, k) in vars {
                let base = if k > 0 { pt[i] } else { inv_mod(pt[i], p).expect("unit coordinate") };
                t = mul_mod(t, pow_mod(base, k.unsigned_abs() as u64, p), p);
                if t == 0 {
                    break;
                }
            }
            acc = (acc + t) % p;
        }
        acc
    }
}

/// A presentation with its coefficient variables bound to η.
#[derive(Clone, Debug)]
pub struct FiberInstance {
    pub presentation: Presentation,
    pub point: CoefficientPoint,
    /// Registry indices of the free (ambient) variables, in order.
    ambient: Vec<usize>,
    /// Full-registry template with the bound values filled in.
    template: Vec<u64>,
}

impl FiberInstance {
    /// Binds c1, c2, ... to the entries of η; every other variable is free,
    /// ranging over F_p or over F_p^× when invertible.
    pub fn new(presentation: Presentation, point: CoefficientPoint) -> Result<Self> {
        Self::with_bindings(presentation, point.clone(), &point.assignment())
    }

    pub fn with_bindings(
        presentation: Presentation,
        point: CoefficientPoint,
        bindings: &BTreeMap<String, u64>,
    ) -> Result<Self> {
        let reg = presentation.registry.clone();
        let p = point.p();
        let mut template = vec![0u64; reg.len()];
        let mut ambient = Vec::new();
        for i in 0..reg.len() {
            match bindings.get(reg.name(i)) {
                Some(&v) => {
                    if reg.is_invertible(i) && v % p == 0 {
                        return Err(Error::ZeroOnInvertible(reg.name(i).to_string()));
                    }
                    template[i] = v % p;
                }
                None => ambient.push(i),
            }
        }
        Ok(Self { presentation, point, ambient, template })
    }

    pub fn p(&self) -> u64 {
        self.point.p()
    }

    pub fn ambient_names(&self) -> Vec<String> {
        self.ambient.iter().map(|&i| self.presentation.registry.name(i).to_string()).collect()
    }

    fn ranges(&self) -> Vec<(u64, u64)> {
        let p = self.p();
        self.ambient
            .iter()
            .map(|&i| if self.presentation.registry.is_invertible(i) { (1, p - 1) } else { (0, p) })
            .collect()
    }

    /// Number of candidate points.
    pub fn size(&self) -> u128 {
        self.ranges().iter().map(|&(_, n)| n as u128).product()
    }

    fn full_point(&self, ambient_values: &[u64]) -> Vec<u64> {
        let mut pt = self.template.clone();
        for (k, &i) in self.ambient.iter().enumerate() {
            pt[i] = ambient_values[k];
        }
        pt
    }

    fn decode(&self, mut idx: u128, ranges: &[(u64, u64)]) -> Vec<u64> {
        let mut out = vec![0u64; ranges.len()];
        for k in (0..ranges.len()).rev() {
            let (lo, n) = ranges[k];
            out[k] = lo + (idx % n as u128) as u64;
            idx /= n as u128;
        }
        out
    }
}

fn check_budget(needed: u128, budget: u128) -> Result<()> {
    if needed > budget {
        Err(Error::BudgetExceeded { needed, budget })
    } else {
        Ok(())
    }
}

/// All ambient coordinate vectors on the fiber, in lexicographic order.
pub fn enumerate_fiber(fi: &FiberInstance, budget: u128) -> Result<Vec<Vec<u64>>> {
    check_budget(fi.size(), budget)?;
    let p = fi.p();
    let gens: Vec<Compiled> = fi.presentation.generators.iter().map(|g| Compiled::new(g, p)).collect();
    let ranges = fi.ranges();
    let total = fi.size();
    Ok((0..total as u64)
        .into_par_iter()
        .filter_map(|idx| {
            let amb = fi.decode(idx as u128, &ranges);
            let pt = fi.full_point(&amb);
            gens.iter().all(|g| g.eval(&pt, p) == 0).then_some(amb)
        })
        .collect())
}

/// Rank mod p by fraction-free elimination: row_j <- a_ii row_j - a_ji row_i.
pub fn rank_mod_p(rows: &[Vec<u64>], p: u64) -> usize {
    let mut m: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|v| v % p).collect()).collect();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][col] != 0) else { continue };
        m.swap(rank, piv);
        let a = m[rank][col];
        for r in rank + 1..m.len() {
            let b = m[r][col];
            if b == 0 {
                continue;
            }
            for c in col..ncols {
                let v = (mul_mod(a, m[r][c], p) + p - mul_mod(b, m[rank][c], p)) % p;
                m[r][c] = v;
            }
        }
        rank += 1;
    }
    rank
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingularSet {
    pub vars: Vec<String>,
    pub points: Vec<Vec<u64>>,
    pub codim_expected: usize,
}

/// Fiber points where the Jacobian in the ambient variables has rank below
/// the number of generators.
pub fn singular_points(fi: &FiberInstance, budget: u128) -> Result<SingularSet> {
    Ok(scan(fi, budget)?.1)
}

/// Fiber points and singular points in one pass.
fn scan(fi: &FiberInstance, budget: u128) -> Result<(Vec<Vec<u64>>, SingularSet)> {
    let p = fi.p();
    let jac: Vec<Vec<Compiled>> = fi
        .presentation
        .generators
        .iter()
        .map(|g| fi.ambient.iter().map(|&i| Compiled::new(&g.partial_derivative_at(i), p)).collect())
        .collect();
    let r = fi.presentation.generators.len();
    let fiber = enumerate_fiber(fi, budget)?;
    let points = fiber
        .par_iter()
        .filter(|amb| {
            let pt = fi.full_point(amb);
            let rows: Vec<Vec<u64>> = jac.iter().map(|row| row.iter().map(|d| d.eval(&pt, p)).collect()).collect();
            rank_mod_p(&rows, p) < r
        })
        .cloned()
        .collect();
    Ok((fiber, SingularSet { vars: fi.ambient_names(), points, codim_expected: r }))
}

/// Rank of the Hessian of `f` in `vars` at `point`. Refuses p = 2, and
/// points where f or its gradient in `vars` does not vanish.
pub fn hessian_rank_at(f: &MultiPoly, vars: &[String], point: &BTreeMap<String, u64>, p: u64) -> Result<usize> {
    if p == 2 {
        return Err(Error::CharacteristicTwo);
    }
    if !crate::algebra_core::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let reg = f.registry();
    let mut pt = vec![0u64; reg.len()];
    for i in 0..reg.len() {
        match point.get(reg.name(i)) {
            Some(&v) => pt[i] = v % p,
            None if f.support().contains(&i) => return Err(Error::MissingAssignment(reg.name(i).to_string())),
            None => {}
        }
    }
    if f.evaluate_residues(&pt, p)? != 0 {
        return Err(Error::InvalidPoint("the equation does not vanish there".into()));
    }
    let firsts = vars.iter().map(|v| f.partial_derivative(v)).collect::<Result<Vec<_>>>()?;
    for d in &firsts {
        if d.evaluate_residues(&pt, p)? != 0 {
            return Err(Error::InvalidPoint("the gradient does not vanish there".into()));
        }
    }
    let mut rows = Vec::new();
    for d in &firsts {
        let row = vars
            .iter()
            .map(|v| d.partial_derivative(v).and_then(|e| e.evaluate_residues(&pt, p)))
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Ok(rank_mod_p(&rows, p))
}

/// Full-rank check of the Hessian shipped with a report, if any.
pub fn hessian_certify(report: &SingularityReport) -> Result<Option<bool>> {
    match &report.hessian {
        Some(h) => Ok(Some(hessian_rank_at(&h.equation, &h.vars, &h.point, report.point.p())? == h.vars.len())),
        None => Ok(None),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub eta: Vec<u64>,
    pub point: Vec<u64>,
    /// "oracle" when only the Jacobian criterion flags the point,
    /// "classifier" when only the reported locus contains it.
    pub side: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EtaOutcome {
    pub eta: Vec<u64>,
    pub fiber_points: usize,
    pub singular_points: usize,
    pub verdict: String,
    pub stratum: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiffReport {
    pub family: String,
    pub p: u64,
    pub vars: Vec<String>,
    pub outcomes: Vec<EtaOutcome>,
    pub discrepancies: Vec<Discrepancy>,
}

impl DiffReport {
    pub fn agrees(&self) -> bool {
        self.discrepancies.is_empty()
    }

    pub fn singular_eta(&self) -> usize {
        self.outcomes.iter().filter(|o| o.singular_points > 0).count()
    }

    pub fn agreeing_eta(&self) -> usize {
        let bad: BTreeSet<&Vec<u64>> = self.discrepancies.iter().map(|d| &d.eta).collect();
        self.outcomes.iter().filter(|o| !bad.contains(&o.eta)).count()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "type": self.family,
            "p": self.p,
            "vars": self.vars,
            "eta_total": self.outcomes.len(),
            "eta_agree": self.agreeing_eta(),
            "eta_singular": self.singular_eta(),
            "summary": format!("{}/{} eta agree", self.agreeing_eta(), self.outcomes.len()),
            "discrepancies": serde_json::to_value(&self.discrepancies).expect("serializable"),
        })
    }
}

/// Points of `fiber` lying on some component of the reported locus.
fn predicted(fi: &FiberInstance, fiber: &[Vec<u64>], report: &SingularityReport) -> Vec<Vec<u64>> {
    let p = fi.p();
    let comps: Vec<Vec<Compiled>> = report
        .locus
        .iter()
        .map(|c| {
            c.equations
                .iter()
                .map(|e| Compiled::new(&e.embed(&fi.presentation.registry).expect("same chart"), p))
                .collect()
        })
        .collect();
    fiber
        .iter()
        .filter(|amb| {
            let pt = fi.full_point(amb);
            comps.iter().any(|eqs| eqs.iter().all(|e| e.eval(&pt, p) == 0))
        })
        .cloned()
        .collect()
}

/// Compare the oracle's singular set with the classifier's locus for one η.
pub fn diff_at(family: Family, pt: &CoefficientPoint, budget: u128) -> Result<(EtaOutcome, Vec<Discrepancy>)> {
    let pres = reduced_presentation(family)?;
    let fi = FiberInstance::new(pres, pt.clone())?;
    let (fiber, sing) = scan(&fi, budget)?;
    let report = classify(family, pt)?;
    let want: BTreeSet<Vec<u64>> = predicted(&fi, &fiber, &report).into_iter().collect();
    let got: BTreeSet<Vec<u64>> = sing.points.into_iter().collect();
    let mut disc = Vec::new();
    for q in got.difference(&want) {
        disc.push(Discrepancy { eta: pt.eta().to_vec(), point: q.clone(), side: "oracle".into() });
    }
    for q in want.difference(&got) {
        disc.push(Discrepancy { eta: pt.eta().to_vec(), point: q.clone(), side: "classifier".into() });
    }
    let outcome = EtaOutcome {
        eta: pt.eta().to_vec(),
        fiber_points: fiber.len(),
        singular_points: got.len(),
        verdict: report.verdict.kind().into(),
        stratum: report.stratum,
    };
    Ok((outcome, disc))
}

/// Run `diff_at` for every η in (F_p^×)^n.
pub fn diff_against_classifier(family: Family, p: u64, budget: u128) -> Result<DiffReport> {
    family.validate()?;
    let pres = reduced_presentation(family)?;
    let etas = CoefficientPoint::all(p, family.rank())?;
    let probe = FiberInstance::new(pres, etas[0].clone())?;
    check_budget(probe.size() * etas.len() as u128, budget)?;
    let results = etas
        .par_iter()
        .map(|pt| diff_at(family, pt, budget))
        .collect::<Result<Vec<_>>>()?;
    let mut outcomes = Vec::new();
    let mut discrepancies = Vec::new();
    for (o, d) in results {
        outcomes.push(o);
        discrepancies.extend(d);
    }
    Ok(DiffReport { family: family.to_string(), p, vars: probe.ambient_names(), outcomes, discrepancies })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransportReport {
    pub bfz_fiber_points: usize,
    pub reduced_fiber_points: usize,
    pub bfz_singular_points: usize,
    pub reduced_singular_points: usize,
    /// Pulled-back reduced points are distinct and exactly the BFZ points.
    pub fiber_bijective: bool,
    pub singular_bijective: bool,
}

impl TransportReport {
    pub fn passed(&self) -> bool {
        self.fiber_bijective && self.singular_bijective
    }
}

/// Pull the reduced fiber over η back to the BFZ chart along the reduction
/// witness and compare with the BFZ fiber enumerated directly.
pub fn transport_check(family: Family, pt: &CoefficientPoint, budget: u128) -> Result<TransportReport> {
    pt.check_rank(family)?;
    let p = pt.p();
    let w = reduction_witness(family)?;
    let pull = w.pullback_map()?;
    let red = reduced_presentation(family)?;
    let bfz = bfz_presentation(&family.principal_seed()?)?;

    let red_fi = FiberInstance::new(red.clone(), pt.clone())?;
    let (red_fiber, red_sing) = scan(&red_fi, budget)?;

    // η in the BFZ chart: the pulled-back coefficient values.
    let full_of = |amb: &[u64]| -> Vec<u64> {
        let pt_full = red_fi.full_point(amb);
        let mut vals = vec![0u64; w.registry.len()];
        for (i, name) in red.registry.names().iter().enumerate() {
            vals[w.registry.require(name).expect("chart var in working registry")] = pt_full[i];
        }
        vals
    };
    let comp: BTreeMap<String, Compiled> = pull.iter().map(|(k, f)| (k.clone(), Compiled::new(f, p))).collect();
    let zero_amb = vec![0u64; red_fi.ambient.len()];
    let base = full_of(&zero_amb);
    let mut bindings = BTreeMap::new();
    for i in 0..bfz.registry.len() {
        if bfz.registry.is_invertible(i) {
            let name = bfz.registry.name(i);
            bindings.insert(name.to_string(), comp[name].eval(&base, p));
        }
    }
    let bfz_fi = FiberInstance::with_bindings(bfz.clone(), pt.clone(), &bindings)?;
    let (bfz_fiber, bfz_sing) = scan(&bfz_fi, budget)?;

    let amb_names = bfz_fi.ambient_names();
    let image = |pts: &[Vec<u64>]| -> (BTreeSet<Vec<u64>>, bool) {
        let mut set = BTreeSet::new();
        let mut distinct = true;
        for q in pts {
            let full = full_of(q);
            let img: Vec<u64> = amb_names.iter().map(|n| comp[n].eval(&full, p)).collect();
            distinct &= set.insert(img);
        }
        (set, distinct)
    };
    let (fiber_img, fd) = image(&red_fiber);
    let (sing_img, sd) = image(&red_sing.points);
    let bfz_fiber_set: BTreeSet<Vec<u64>> = bfz_fiber.iter().cloned().collect();
    let bfz_sing_set: BTreeSet<Vec<u64>> = bfz_sing.points.iter().cloned().collect();
    Ok(TransportReport {
        bfz_fiber_points: bfz_fiber.len(),
        reduced_fiber_points: red_fiber.len(),
        bfz_singular_points: bfz_sing.points.len(),
        reduced_singular_points: red_sing.points.len(),
        fiber_bijective: fd && fiber_img == bfz_fiber_set,
        singular_bijective: sd && sing_img == bfz_sing_set,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra_core::VarRegistry;

    fn pt(p: u64, eta: &[i64]) -> CoefficientPoint {
        CoefficientPoint::new(p, eta).unwrap()
    }

    #[test]
    fn a1_fiber_count() {
        let fi = FiberInstance::new(reduced_presentation(Family::A(1)).unwrap(), pt(3, &[2])).unwrap();
        assert_eq!(enumerate_fiber(&fi, DEFAULT_BUDGET).unwrap().len(), 5);
    }

    #[test]
    fn empty_ideal_is_everything() {
        let reg = VarRegistry::split(&["a", "b"], &["c1"]).unwrap();
        let fi = FiberInstance::new(Presentation::new(reg, vec![]), pt(3, &[1])).unwrap();
        assert_eq!(enumerate_fiber(&fi, DEFAULT_BUDGET).unwrap().len(), 9);
    }

    #[test]
    fn a3_singular_sets() {
        let pres = reduced_presentation(Family::A(3)).unwrap();
        let fi = FiberInstance::new(pres.clone(), pt(5, &[2, 1, 3])).unwrap();
        assert_eq!(singular_points(&fi, DEFAULT_BUDGET).unwrap().points, vec![vec![0; 4]]);
        let fi = FiberInstance::new(pres, pt(5, &[1, 1, 2])).unwrap();
        assert!(singular_points(&fi, DEFAULT_BUDGET).unwrap().points.is_empty());
    }

    #[test]
    fn budget_is_enforced() {
        let fi = FiberInstance::new(reduced_presentation(Family::A(3)).unwrap(), pt(5, &[2, 1, 3])).unwrap();
        assert_eq!(
            enumerate_fiber(&fi, 100),
            Err(Error::BudgetExceeded { needed: 625, budget: 100 })
        );
    }

    #[test]
    fn hessian_examples() {
        let reg = VarRegistry::split(&["x", "y", "z", "z1", "z2", "z3", "z4"], &[]).unwrap();
        let origin: BTreeMap<String, u64> = reg.names().iter().map(|n| (n.clone(), 0)).collect();
        let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        let f = MultiPoly::parse("x*y - z^2", &reg).unwrap();
        assert_eq!(hessian_rank_at(&f, &s(&["x", "y", "z"]), &origin, 5).unwrap(), 3);
        let f = MultiPoly::parse("x^3 + y*z", &reg).unwrap();
        assert_eq!(hessian_rank_at(&f, &s(&["x", "y", "z"]), &origin, 5).unwrap(), 2);
        let f = MultiPoly::parse("z1*z2*z3*z4 - z1*z2 - z1*z4 - z3*z4 + 1 - 1", &reg).unwrap();
        assert_eq!(hessian_rank_at(&f, &s(&["z1", "z2", "z3", "z4"]), &origin, 5).unwrap(), 4);
        assert_eq!(hessian_rank_at(&f, &s(&["z1"]), &origin, 2), Err(Error::CharacteristicTwo));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank_mod_p(&[vec![1, 2], vec![2, 4]], 7), 1);
        assert_eq!(rank_mod_p(&[vec![1, 2], vec![2, 4]], 2), 1);
        assert_eq!(rank_mod_p(&[vec![0, 0], vec![0, 3]], 3), 0);
        assert_eq!(rank_mod_p(&[vec![0, 1, 0], vec![1, 0, 0]], 5), 2);
    }

    #[test]
    fn g2_over_f3() {
        let r = diff_against_classifier(Family::G2, 3, DEFAULT_BUDGET).unwrap();
        assert!(r.agrees(), "{:?}", r.discrepancies);
        assert_eq!(r.singular_eta(), 4);
        assert!(r.outcomes.iter().all(|o| o.singular_points == 1));
    }

    #[test]
    fn transport_small() {
        for (f, p, eta) in [
            (Family::A(2), 3, vec![1, 2]),
            (Family::A(3), 5, vec![2, 1, 3]),
            (Family::B(2), 2, vec![1, 1]),
            (Family::G2, 3, vec![2, 1]),
            (Family::RankTwo(2, -1), 3, vec![2, 2]),
            (Family::D(4), 2, vec![1, 1, 1, 1]),
        ] {
            let r = transport_check(f, &pt(p, &eta), DEFAULT_BUDGET).unwrap();
            assert!(r.passed(), "{f}: {r:?}");
            assert_eq!(r.bfz_fiber_points, r.reduced_fiber_points);
        }
    }
}
