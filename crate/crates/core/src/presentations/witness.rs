//! Explicit changes of variables taking the BFZ presentation with principal
//! coefficients to the reduced presentation, and a checker that replays them.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::{bfz_presentation, names, reduced_presentation, Ctx, Family};
use crate::algebra_core::{MultiPoly, VarRegistry};
use crate::error::Result;
use crate::seeds::LabeledSeed;

/// The reduction as a script over one working registry (BFZ variables plus
/// the reduced chart variables).
///
/// 1. `substitution` is applied simultaneously to every BFZ generator
///    g_k; the result must equal `units[k] * intermediates[k]`.
/// 2. `recombination` steps `(target, source, f)` replace
///    `rel[target]` by `rel[target] + f * rel[source]`, in order.
/// 3. `eliminations` `(v, f)` substitute v := f in all relations, in order.
///    f may not mention v.
/// 4. Relations listed in `surviving` must equal the reduced generators in
///    that order; the others must vanish.
#[derive(Clone, Debug)]
pub struct VariableChange {
    pub family: Family,
    pub registry: Arc<VarRegistry>,
    pub substitution: BTreeMap<String, MultiPoly>,
    pub units: Vec<MultiPoly>,
    pub intermediates: Vec<MultiPoly>,
    pub recombination: Vec<(usize, usize, MultiPoly)>,
    pub eliminations: Vec<(String, MultiPoly)>,
    pub surviving: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub subject: String,
    pub checks: Vec<CheckLine>,
}

impl VerificationReport {
    fn new(subject: impl Into<String>) -> Self {
        Self { subject: subject.into(), checks: Vec::new() }
    }

    fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(CheckLine { name: name.into(), passed, detail: detail.into() });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&CheckLine> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.subject)?;
        for c in &self.checks {
            let tag = if c.passed { "ok  " } else { "FAIL" };
            writeln!(f, "  [{tag}] {}: {}", c.name, c.detail)?;
        }
        Ok(())
    }
}

struct Builder {
    c: Ctx,
    subst: BTreeMap<String, MultiPoly>,
    units: Vec<MultiPoly>,
    inter: Vec<MultiPoly>,
    recomb: Vec<(usize, usize, MultiPoly)>,
    elim: Vec<(String, MultiPoly)>,
}

impl Builder {
    fn v(&self, s: &str) -> MultiPoly {
        self.c.v(s)
    }

    fn x(&self, k: usize) -> MultiPoly {
        self.c.x_or_one(k)
    }

    fn y(&self, k: usize) -> MultiPoly {
        self.c.v(&format!("y{k}"))
    }

    /// var := factor * var
    fn scale(&mut self, var: String, factor: MultiPoly) {
        let img = &factor * &self.c.v(&var);
        self.subst.insert(var, img);
    }

    /// The type-A rescaling x_k -> λ_{k-1}^{-1} x_k, y_k -> λ_k^{-1} λ_{k-1} y_k.
    fn a_change(&mut self, k: usize) {
        let fx = self.c.lam_inv(k - 1);
        let fy = &self.c.lam_inv(k) * &self.c.lam(k - 1);
        self.scale(format!("x{k}"), fx);
        self.scale(format!("y{k}"), fy);
    }

    /// x_k y_k - x_{k-1} - rhs
    fn chain(&self, k: usize, rhs: MultiPoly) -> MultiPoly {
        &(&(&self.x(k) * &self.y(k)) - &self.x(k - 1)) - &rhs
    }

    fn rel(&mut self, unit: MultiPoly, inter: MultiPoly) {
        self.units.push(unit);
        self.inter.push(inter);
    }

    fn eliminate(&mut self, var: impl Into<String>, f: MultiPoly) {
        self.elim.push((var.into(), f));
    }

    /// x_k := P_k(x1, y1..y_{k-1}) for k in `ks`.
    fn eliminate_chain(&mut self, ks: impl IntoIterator<Item = usize>) {
        for k in ks {
            let mut args = vec!["x1".to_string()];
            args.extend(names("y", 1..k));
            let f = self.c.cont(&args);
            self.eliminate(format!("x{k}"), f);
        }
    }

    /// x1 -> z1, y_k -> z_{k+1} for k < m.
    fn rename_z(&mut self, m: usize) {
        let z1 = self.v("z1");
        self.eliminate("x1", z1);
        for k in 1..m {
            let z = self.v(&format!("z{}", k + 1));
            self.eliminate(format!("y{k}"), z);
        }
    }

    fn rename(&mut self, from: &str, to: &str) {
        let t = self.v(to);
        self.eliminate(from, t);
    }
}

/// The scripted change of variables for `family`.
pub fn reduction_witness(family: Family) -> Result<VariableChange> {
    family.validate()?;
    let bfz = bfz_presentation(&family.principal_seed()?)?;
    let red = reduced_presentation(family)?;
    let reg = bfz.registry.extended(
        red.registry
            .names()
            .iter()
            .cloned()
            .zip(red.registry.invertible_flags().iter().copied()),
    )?;
    let mut b = Builder {
        c: Ctx::new(reg.clone()),
        subst: BTreeMap::new(),
        units: Vec::new(),
        inter: Vec::new(),
        recomb: Vec::new(),
        elim: Vec::new(),
    };
    let one = b.c.k(1);
    let surviving: Vec<usize>;
    match family {
        Family::A(1) => {
            b.rel(one, bfz.generators[0].embed(&reg)?);
            surviving = vec![0];
        }
        Family::A(n) => {
            for k in 1..=n {
                b.a_change(k);
            }
            for k in 1..n {
                let r = b.x(k + 1);
                let g = b.chain(k, r);
                b.rel(b.c.lam_inv(k), g);
            }
            let g = b.chain(n, b.c.lam(n));
            b.rel(b.c.lam_inv(n), g);
            b.eliminate_chain(2..=n);
            b.rename_z(n + 1);
            surviving = vec![n - 1];
        }
        Family::B(n) => {
            for k in 1..=n {
                b.a_change(k);
            }
            for k in 1..n - 1 {
                let r = b.x(k + 1);
                let g = b.chain(k, r);
                b.rel(b.c.lam_inv(k), g);
            }
            let g = b.chain(n - 1, &b.c.lam_inv(n - 1) * &b.x(n).pow(2));
            b.rel(b.c.lam_inv(n - 1), g);
            let g = b.chain(n, b.c.lam(n));
            b.rel(b.c.lam_inv(n), g);
            b.recomb.push((n - 2, n - 1, b.y(n - 1)));
            b.eliminate_chain(2..n);
            b.rename_z(n - 1);
            b.rename(&format!("x{n}"), "u1");
            b.rename(&format!("y{n}"), "u2");
            b.rename(&format!("y{}", n - 1), "u3");
            surviving = vec![n - 2, n - 1];
        }
        Family::C(n) => {
            for k in 1..n {
                b.a_change(k);
            }
            b.scale(format!("x{n}"), b.c.lam_inv(n - 1));
            let f = &(&b.c.lam_inv(n - 2) * &b.c.lam_inv(n)) * &b.c.lam(n - 1);
            b.scale(format!("y{n}"), f);
            for k in 1..n {
                let r = b.x(k + 1);
                let g = b.chain(k, r);
                b.rel(b.c.lam_inv(k), g);
            }
            let g = &(&(&b.x(n) * &b.y(n)) - &b.x(n - 1).pow(2)) - &(&b.c.lam(n - 2) * &b.c.lam(n));
            b.rel(&b.c.lam_inv(n - 2) * &b.c.lam_inv(n), g);
            b.eliminate_chain(2..=n);
            b.rename_z(n + 1);
            surviving = vec![n - 1];
        }
        Family::D(n) => {
            for k in 1..n {
                b.a_change(k);
            }
            let lam_hat = &b.c.lam(n - 3) * &b.c.c_inv(n);
            b.scale(format!("y{n}"), lam_hat.unit_inverse().expect("unit"));
            for k in 1..n - 2 {
                let r = b.x(k + 1);
                let g = b.chain(k, r);
                b.rel(b.c.lam_inv(k), g);
            }
            let g3 = b.chain(n - 2, &b.x(n - 1) * &b.x(n));
            b.rel(b.c.lam_inv(n - 2), g3);
            let g2 = &(&(&b.x(n - 1) * &b.y(n - 1)) - &b.x(n - 2)) - &b.c.lam(n - 1);
            b.rel(b.c.lam_inv(n - 1), g2);
            let g1 = &(&(&b.x(n) * &b.y(n)) - &b.x(n - 2)) - &lam_hat;
            b.rel(lam_hat.unit_inverse().expect("unit"), g1);
            b.recomb.push((n - 3, n - 2, b.y(n - 2)));
            b.recomb.push((n - 1, n - 2, b.c.k(-1)));
            let f = &b.v("u1") + &(&b.y(n - 2) * &b.y(n - 1));
            b.eliminate(format!("x{n}"), f);
            b.rename(&format!("y{n}"), "u2");
            b.rename(&format!("x{}", n - 1), "u3");
            b.rename(&format!("y{}", n - 1), "u4");
            let f = -&(&b.c.lam_inv(n - 1) * &(&b.x(n - 3) + &(&b.v("u1") * &b.v("u3"))));
            b.eliminate(format!("y{}", n - 2), f);
            b.eliminate_chain(2..=n - 2);
            b.rename_z(n - 2);
            surviving = vec![n - 1, n - 2];
        }
        Family::E(n) => {
            for k in 1..=n - 3 {
                b.a_change(k);
            }
            let c = &b.c;
            let (cn, cn_inv, cm, cm_inv) = (c.c(n), c.c_inv(n), c.c(n - 1), c.c_inv(n - 1));
            let table = [
                (format!("x{}", n - 2), &cn * &c.lam_inv(n - 3)),
                (format!("y{}", n - 2), &(&cn_inv * &c.lam_inv(n - 2)) * &c.lam(n - 3)),
                (format!("x{}", n - 1), cn_inv.clone()),
                (format!("y{}", n - 1), &(&cn * &cm) * &c.lam_inv(n - 4)),
                (format!("x{n}"), &cm * &c.lam_inv(n - 4)),
                (format!("y{n}"), &cm_inv * &c.lam(n - 4)),
            ];
            for (v, f) in table {
                b.scale(v, f);
            }
            for k in 1..n - 3 {
                let r = b.x(k + 1);
                let g = b.chain(k, r);
                b.rel(b.c.lam_inv(k), g);
            }
            let g = b.chain(n - 3, &b.x(n - 2) * &b.x(n - 1));
            b.rel(b.c.lam_inv(n - 3), g);
            let g = &(&(&b.x(n - 2) * &b.y(n - 2)) - &b.x(n - 3)) - &b.c.lam(n - 2);
            b.rel(b.c.lam_inv(n - 2), g);
            let g = &(&(&b.x(n - 1) * &b.y(n - 1)) - &b.x(n - 3)) - &b.x(n);
            b.rel(&cm * &b.c.lam_inv(n - 4), g);
            let g = &(&(&b.x(n) * &b.y(n)) - &b.x(n - 1)) - &one;
            b.rel(one.clone(), g);
            let f = &(&b.x(n) * &b.y(n)) - &one;
            b.eliminate(format!("x{}", n - 1), f);
            b.eliminate_chain(2..=n - 3);
            b.rename_z(n - 2);
            b.rename(&format!("x{n}"), "u1");
            b.rename(&format!("y{n}"), "u2");
            b.rename(&format!("x{}", n - 2), "u3");
            b.rename(&format!("y{}", n - 2), "u4");
            b.rename(&format!("y{}", n - 1), "u5");
            surviving = vec![n - 4, n - 3, n - 2];
        }
        Family::F4 => {
            let m = |f: &[(&str, i32)]| b.c.mono(f);
            let table = [
                ("x1", m(&[("c2", -1), ("c4", -2)])),
                ("x2", m(&[("c1", 1)])),
                ("x3", m(&[("c4", -1)])),
                ("x4", m(&[("c1", 1), ("c3", 1)])),
                ("y1", m(&[("c1", 1), ("c2", 1), ("c4", 2)])),
                ("y2", m(&[("c1", -1), ("c4", -2)])),
                ("y3", m(&[("c1", 1), ("c3", 1), ("c4", 1)])),
                ("y4", m(&[("c1", -1), ("c3", -1)])),
            ];
            let units = [m(&[("c1", 1)]), m(&[("c4", -2)]), m(&[("c1", 1), ("c3", 1)]), one.clone()];
            for (v, f) in table {
                b.scale(v.to_string(), f);
            }
            for (u, g) in units.into_iter().zip(&red.generators) {
                b.rel(u, g.embed(&reg)?);
            }
            surviving = vec![0, 1, 2, 3];
        }
        Family::G2 => {
            b.scale("x1".into(), b.c.c_inv(2));
            b.scale("y1".into(), b.c.c(2));
            let g = &(&(&b.x(1) * &b.y(1)) - &b.c.c(1)) - &b.x(2).pow(3);
            b.rel(one.clone(), g);
            let g = &(&(&b.x(2) * &b.y(2)) - &b.x(1)) - &one;
            b.rel(one.clone(), g);
            let f = &(&b.x(2) * &b.y(2)) - &one;
            b.eliminate("x1", f);
            b.rename("x2", "x");
            b.rename("y1", "y");
            b.rename("y2", "z");
            surviving = vec![0];
        }
        Family::RankTwo(a, _) => {
            // Invert the coefficient on the side whose exchange polynomial
            // carries it next to the monomial.
            let flip = match a.signum() {
                1 => Some(2),
                -1 => Some(1),
                _ => None,
            };
            if let Some(i) = flip {
                b.subst.insert(format!("c{i}"), b.c.c_inv(i));
                b.scale(format!("y{i}"), b.c.c_inv(i));
            }
            for (i, g) in red.generators.iter().enumerate() {
                let u = if Some(i + 1) == flip { b.c.c_inv(i + 1) } else { one.clone() };
                b.rel(u, g.embed(&reg)?);
            }
            surviving = vec![0, 1];
        }
    }
    Ok(VariableChange {
        family,
        registry: reg,
        substitution: b.subst,
        units: b.units,
        intermediates: b.inter,
        recombination: b.recomb,
        eliminations: b.elim,
        surviving,
    })
}

impl VariableChange {
    /// Every BFZ variable (coefficients included) as a Laurent polynomial in
    /// the reduced chart: the rescaling followed by the eliminations.
    pub fn pullback_map(&self) -> Result<BTreeMap<String, MultiPoly>> {
        let bfz = bfz_presentation(&self.family.principal_seed()?)?;
        let mut out = BTreeMap::new();
        for name in bfz.registry.names() {
            let mut f = match self.substitution.get(name) {
                Some(img) => img.clone(),
                None => MultiPoly::var(&self.registry, name)?,
            };
            for (v, g) in &self.eliminations {
                f = f.substitute_in_place(&BTreeMap::from([(v.clone(), g.clone())]))?;
            }
            out.insert(name.clone(), f);
        }
        Ok(out)
    }
}

/// Replay the witness for `family` and report every identity it claims.
pub fn verify_reduction(family: Family) -> Result<VerificationReport> {
    verify_witness(&reduction_witness(family)?)
}

/// A single term whose plain part is exactly `var`; for an invertible `var`,
/// any unit monomial.
fn is_rescaling(reg: &VarRegistry, var: &str, img: &MultiPoly) -> Result<bool> {
    let i = reg.require(var)?;
    if reg.is_invertible(i) {
        return Ok(img.is_unit());
    }
    Ok(img.as_unit_monomial().is_none()
        && img.num_terms() == 1
        && img.terms().all(|(e, c)| {
            (c == &1.into() || c == &(-1).into())
                && e.iter().enumerate().all(|(j, &k)| if j == i { k == 1 } else { k == 0 || reg.is_invertible(j) })
        }))
}

pub fn verify_witness(w: &VariableChange) -> Result<VerificationReport> {
    let family = w.family;
    let reg = &w.registry;
    let bfz = bfz_presentation(&family.principal_seed()?)?;
    let red = reduced_presentation(family)?;
    let mut rep = VerificationReport::new(format!("reduction {family}"));

    rep.push(
        "shape",
        w.units.len() == bfz.generators.len() && w.intermediates.len() == bfz.generators.len(),
        format!("{} generators, {} units", bfz.generators.len(), w.units.len()),
    );
    for (v, img) in &w.substitution {
        rep.push(format!("rescaling {v}"), is_rescaling(reg, v, img)?, format!("{v} -> {img}"));
    }

    let mut rels = Vec::new();
    for (k, g) in bfz.generators.iter().enumerate() {
        let lhs = g.embed(reg)?.substitute_in_place(&w.substitution)?;
        let (u, h) = match (w.units.get(k), w.intermediates.get(k)) {
            (Some(u), Some(h)) => (u, h),
            _ => break,
        };
        let ok = u.is_unit() && lhs == u * h;
        rep.push(format!("relation {}", k + 1), ok, format!("unit {u}; {h}"));
        rels.push(h.clone());
    }
    if rels.len() != bfz.generators.len() {
        return Ok(rep);
    }

    for (t, s, f) in &w.recombination {
        let ok = t != s && !w.recombination.iter().any(|(t2, _, _)| t2 == s);
        rep.push(format!("recombine {} += ({f}) * {}", t + 1, s + 1), ok, "elementary");
        rels[*t] = &rels[*t] + &(f * &rels[*s]);
    }

    for (v, f) in &w.eliminations {
        let i = reg.require(v)?;
        let free = f.terms().all(|(e, _)| e[i] == 0) && !reg.is_invertible(i);
        rep.push(format!("eliminate {v}"), free, format!("{v} := {f}"));
        let map = BTreeMap::from([(v.clone(), f.clone())]);
        for r in rels.iter_mut() {
            *r = r.substitute_in_place(&map)?;
        }
    }

    rep.push(
        "surviving count",
        w.surviving.len() == red.generators.len(),
        format!("{} of {}", w.surviving.len(), rels.len()),
    );
    for (j, r) in rels.iter().enumerate() {
        match w.surviving.iter().position(|&s| s == j) {
            Some(pos) => {
                let target = red.generators.get(pos).map(|g| g.embed(reg)).transpose()?;
                let ok = target.as_ref() == Some(r) && r.embed(&red.registry).is_ok();
                rep.push(format!("result {}", j + 1), ok, format!("{r}"));
            }
            None => rep.push(format!("result {}", j + 1), r.is_zero(), format!("{r}")),
        }
    }
    Ok(rep)
}

/// Generic coefficients in terms of principal ones: y_k -> t_k y_k and
/// s_k -> t_k c_k, with generic relation k equal to t_k times principal
/// relation k.
#[derive(Clone, Debug)]
pub struct GenToPrinWitness {
    pub registry: Arc<VarRegistry>,
    pub substitution: BTreeMap<String, MultiPoly>,
    pub units: Vec<MultiPoly>,
}

pub fn gen_to_prin_witness(seed: &LabeledSeed) -> Result<GenToPrinWitness> {
    let generic = bfz_presentation(&seed.with_generic_coefficients()?)?;
    let n = seed.n();
    let reg = generic.registry.extended(names("c", 1..=n).into_iter().map(|c| (c, true)))?;
    let c = Ctx::new(reg.clone());
    let mut substitution = BTreeMap::new();
    let mut units = Vec::new();
    for k in 1..=n {
        let y = super::exchanged_name(&seed.vars()[k - 1]);
        let t = c.v(&format!("t{k}"));
        substitution.insert(y.clone(), &t * &c.v(&y));
        substitution.insert(format!("s{k}"), &t * &c.c(k));
        units.push(t);
    }
    Ok(GenToPrinWitness { registry: reg, substitution, units })
}

pub fn verify_gen_to_prin(seed: &LabeledSeed) -> Result<VerificationReport> {
    let w = gen_to_prin_witness(seed)?;
    let generic = bfz_presentation(&seed.with_generic_coefficients()?)?;
    let principal = bfz_presentation(&seed.with_principal_coefficients()?)?;
    let mut rep = VerificationReport::new("generic to principal coefficients");
    for (k, (g, p)) in generic.generators.iter().zip(&principal.generators).enumerate() {
        let lhs = g.embed(&w.registry)?.substitute_in_place(&w.substitution)?;
        let rhs = &w.units[k] * &p.embed(&w.registry)?;
        rep.push(format!("relation {}", k + 1), lhs == rhs, format!("{lhs}"));
    }
    Ok(rep)
}
