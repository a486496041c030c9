//! Singularity verdicts for the fibers of the reduced presentations over a
//! closed point η of the coefficient torus, and the stratification of the
//! torus by verdict.

mod rules;
mod strata;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra_core::{is_prime, pow_mod, MultiPoly, PrimeFieldElement};
use crate::error::{Error, Result};
use crate::presentations::Family;

pub use rules::{
    classify, classify_a, classify_b, classify_c, classify_d, classify_e, classify_f4, classify_g2,
    classify_rank2, g2_normal_form_identity,
};
pub use strata::{locate, stratify, Condition, StratumDescriptor};

/// A closed point of the coefficient torus over F_p.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CoefficientPoint {
    p: u64,
    eta: Vec<u64>,
}

impl CoefficientPoint {
    pub fn new(p: u64, eta: &[i64]) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let eta: Vec<u64> = eta.iter().map(|&v| v.rem_euclid(p as i64) as u64).collect();
        if let Some(i) = eta.iter().position(|&v| v == 0) {
            return Err(Error::InvalidPoint(format!("eta_{} vanishes mod {p}", i + 1)));
        }
        Ok(Self { p, eta })
    }

    /// Comma-separated residues, e.g. "2,1,3".
    pub fn parse(p: u64, text: &str) -> Result<Self> {
        let vals = text
            .split(',')
            .map(|s| s.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad residue `{s}`"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(p, &vals)
    }

    /// Every point of (F_p^×)^n, in lexicographic order.
    pub fn all(p: u64, n: usize) -> Result<Vec<Self>> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let mut out = Vec::new();
        let mut cur = vec![1u64; n];
        loop {
            out.push(Self { p, eta: cur.clone() });
            let mut i = n;
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                if cur[i] + 1 < p {
                    cur[i] += 1;
                    break;
                }
                cur[i] = 1;
            }
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn eta(&self) -> &[u64] {
        &self.eta
    }

    pub fn len(&self) -> usize {
        self.eta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eta.is_empty()
    }

    fn fe(&self, r: u64) -> PrimeFieldElement {
        PrimeFieldElement::new(r as i64, self.p).expect("prime checked")
    }

    /// η_i, 1-based.
    pub fn c(&self, i: usize) -> PrimeFieldElement {
        self.fe(self.eta[i - 1])
    }

    /// λ_k(η).
    pub fn lambda(&self, k: usize) -> PrimeFieldElement {
        let mut acc = self.fe(1);
        let mut i = if k % 2 == 0 { 2 } else { 1 };
        while i <= k {
            acc = acc.mul(self.c(i).inv().expect("nonzero"));
            i += 2;
        }
        acc
    }

    /// (-1)^k in F_p.
    pub fn sign(&self, k: usize) -> PrimeFieldElement {
        self.fe(if k % 2 == 0 { 1 } else { self.p - 1 })
    }

    pub fn element(&self, v: i64) -> PrimeFieldElement {
        PrimeFieldElement::new(v, self.p).expect("prime checked")
    }

    /// c_i -> η_i.
    pub fn assignment(&self) -> BTreeMap<String, u64> {
        self.eta.iter().enumerate().map(|(i, &v)| (format!("c{}", i + 1), v)).collect()
    }

    pub fn check_rank(&self, family: Family) -> Result<()> {
        if self.eta.len() != family.rank() {
            return Err(Error::InvalidPoint(format!(
                "{family} needs {} coefficients, got {}",
                family.rank(),
                self.eta.len()
            )));
        }
        Ok(())
    }

    /// Residue of `f` at η; `f` may only involve the c-variables.
    pub fn evaluate(&self, f: &MultiPoly) -> Result<u64> {
        let reg = f.registry();
        let mut pt = vec![0u64; reg.len()];
        for (name, v) in self.assignment() {
            if let Some(i) = reg.index_of(&name) {
                pt[i] = v;
            }
        }
        for i in f.support() {
            if !self.assignment().contains_key(reg.name(i)) {
                return Err(Error::MissingAssignment(reg.name(i).to_string()));
            }
        }
        f.evaluate_residues(&pt, self.p)
    }
}

impl fmt::Display for CoefficientPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.eta.iter().map(|v| v.to_string()).collect();
        write!(f, "({}) over F_{}", s.join(","), self.p)
    }
}

/// Per-component data for a rank-two fiber.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankTwoComponent {
    pub name: String,
    /// |a| for Y_a, |b| for Y_b.
    pub exponent: u64,
    /// Prime-to-p part of the exponent.
    pub alpha: u64,
    /// p-adic valuation of the exponent.
    pub m: u32,
    /// A_{p^m - 1}
    pub singularity: String,
    /// Number of F_p-rational points.
    pub rational_points: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    Regular,
    IsolatedHypersurface { singularity: String, point: BTreeMap<String, u64> },
    TwoLines { point: BTreeMap<String, u64> },
    FourPlanes,
    /// Two regular surfaces meeting in a regular curve.
    TwoSurfaces,
    /// Characteristic two, type C: case "2b" (singular locus singular) or
    /// "2c" (cylinder over A1 along a regular singular locus).
    CSpecial { case: String, rho: u64, two_lines: bool, cyl_dim: usize },
    /// Type D with η_{n-1} = η_n: components Y0..Y4.
    DComponents { case: char, components: Vec<String> },
    /// Type D with η_{n-1} ≠ η_n: a single regular curve, from the
    /// λ_{n-1} branch or the λ_{n-3}η_n^{-1} branch.
    DCurve { branch: String },
    /// Type E: regular surface along which the fiber is a cylinder over A1.
    ESurface { cyl_dim: usize },
    RankTwo { components: Vec<RankTwoComponent> },
}

impl Verdict {
    pub fn is_singular(&self) -> bool {
        !matches!(self, Verdict::Regular)
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Verdict::Regular => "regular",
            Verdict::IsolatedHypersurface { .. } => "isolated_hypersurface",
            Verdict::TwoLines { .. } => "two_lines",
            Verdict::FourPlanes => "four_planes",
            Verdict::TwoSurfaces => "two_surfaces",
            Verdict::CSpecial { .. } => "c_special",
            Verdict::DComponents { .. } => "d_components",
            Verdict::DCurve { .. } => "d_curve",
            Verdict::ESurface { .. } => "e_surface",
            Verdict::RankTwo { .. } => "rank_two",
        }
    }

    pub fn summary(&self) -> String {
        match self {
            Verdict::Regular => "regular".into(),
            Verdict::IsolatedHypersurface { singularity, point } => {
                if point.values().all(|&v| v == 0) {
                    format!("isolated {singularity} at origin")
                } else {
                    let coords: Vec<String> = point.iter().map(|(k, v)| format!("{k}={v}")).collect();
                    format!("isolated {singularity} at ({})", coords.join(", "))
                }
            }
            Verdict::TwoLines { .. } => "union of two lines".into(),
            Verdict::FourPlanes => "union of four coordinate planes".into(),
            Verdict::TwoSurfaces => "union of two regular surfaces".into(),
            Verdict::CSpecial { case, two_lines, .. } => {
                if *two_lines {
                    format!("case {case}, singular locus a union of two lines")
                } else {
                    format!("case {case}")
                }
            }
            Verdict::DComponents { case, components } => {
                if *case == 'a' {
                    "case a, six coordinate axes".into()
                } else {
                    format!("case {case}, components {}", components.join(", "))
                }
            }
            Verdict::DCurve { branch } => format!("regular singular curve ({branch} branch)"),
            Verdict::ESurface { .. } => "singular along a regular surface".into(),
            Verdict::RankTwo { components } => {
                let c: Vec<String> = components.iter().map(|c| format!("{} {}", c.name, c.singularity)).collect();
                c.join(", ")
            }
        }
    }
}

/// One irreducible (or at least closed) piece of the singular locus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocusComponent {
    pub name: String,
    pub equations: Vec<MultiPoly>,
}

/// Input for a Hessian-rank check: `equation` in the listed local variables
/// is the hypersurface left after the elimination notes in `eliminated`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HessianWitness {
    pub equation: MultiPoly,
    pub vars: Vec<String>,
    pub point: BTreeMap<String, u64>,
    pub eliminated: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularityReport {
    pub family: Family,
    pub point: CoefficientPoint,
    pub verdict: Verdict,
    /// Union of components, all in the reduced chart with η substituted.
    pub locus: Vec<LocusComponent>,
    pub stratum: String,
    pub hessian: Option<HessianWitness>,
}

impl SingularityReport {
    pub fn locus_equations(&self) -> Vec<&MultiPoly> {
        self.locus.iter().flat_map(|c| c.equations.iter()).collect()
    }

    pub fn to_json(&self) -> Value {
        let (a, b) = match self.family {
            Family::RankTwo(a, b) => (json!(a), json!(b)),
            _ => (Value::Null, Value::Null),
        };
        let mut v = json!({
            "type": self.family.type_name(),
            "n": self.family.rank(),
            "p": self.point.p(),
            "eta": self.point.eta(),
            "verdict": serde_json::to_value(&self.verdict).expect("serializable"),
            "summary": self.verdict.summary(),
            "locus": self.locus.iter().map(|c| {
                c.equations.iter().map(|e| e.to_string()).collect::<Vec<_>>()
            }).collect::<Vec<_>>(),
            "components": self.locus.iter().map(|c| c.name.clone()).collect::<Vec<_>>(),
            "stratum": self.stratum,
        });
        if !a.is_null() {
            v["a"] = a;
            v["b"] = b;
        }
        if let Some(h) = &self.hessian {
            v["hessian"] = json!({
                "equation": h.equation.to_string(),
                "vars": h.vars,
                "point": h.point,
                "eliminated": h.eliminated,
            });
        }
        v
    }
}

/// (α, m) with e = α p^m and p ∤ α.
pub fn split_p_part(e: u64, p: u64) -> (u64, u32) {
    let (mut a, mut m) = (e, 0);
    while a > 0 && a % p == 0 {
        a /= p;
        m += 1;
    }
    (a, m)
}

/// #{x in F_p : x^e = t}.
pub fn count_roots(e: u64, t: u64, p: u64) -> u64 {
    (0..p).filter(|&x| pow_mod(x, e, p) == t % p).count() as u64
}
