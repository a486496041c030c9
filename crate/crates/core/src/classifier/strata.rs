use serde_json::{json, Value};

use super::CoefficientPoint;
use crate::algebra_core::{has_cube_root, is_square, MultiPoly, VarRegistry};
use crate::error::{Error, Result};
use crate::presentations::{names, Ctx, Family};

/// A condition on η, stated through a Laurent polynomial in c1..cn.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Condition {
    Vanishes(MultiPoly),
    NonVanishing(MultiPoly),
    IsSquare(MultiPoly),
    NotSquare(MultiPoly),
    HasCubeRoot(MultiPoly),
    NoCubeRoot(MultiPoly),
}

impl Condition {
    pub fn holds(&self, pt: &CoefficientPoint) -> Result<bool> {
        let val = |f: &MultiPoly| -> Result<_> { Ok(pt.element(pt.evaluate(f)? as i64)) };
        Ok(match self {
            Condition::Vanishes(f) => val(f)?.is_zero(),
            Condition::NonVanishing(f) => !val(f)?.is_zero(),
            Condition::IsSquare(f) => is_square(val(f)?),
            Condition::NotSquare(f) => !is_square(val(f)?),
            Condition::HasCubeRoot(f) => has_cube_root(val(f)?),
            Condition::NoCubeRoot(f) => !has_cube_root(val(f)?),
        })
    }

    pub fn to_text(&self) -> String {
        match self {
            Condition::Vanishes(f) => format!("{f} = 0"),
            Condition::NonVanishing(f) => format!("{f} != 0"),
            Condition::IsSquare(f) => format!("is_square({f})"),
            Condition::NotSquare(f) => format!("not is_square({f})"),
            Condition::HasCubeRoot(f) => format!("has_cube_root({f})"),
            Condition::NoCubeRoot(f) => format!("not has_cube_root({f})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumDescriptor {
    pub label: String,
    pub conditions: Vec<Condition>,
    /// `Verdict::kind` of every fiber over the stratum.
    pub verdict: String,
    pub singular: bool,
}

impl StratumDescriptor {
    pub fn contains(&self, pt: &CoefficientPoint) -> Result<bool> {
        for c in &self.conditions {
            if !c.holds(pt)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "label": self.label,
            "conditions": self.conditions.iter().map(|c| c.to_text()).collect::<Vec<_>>(),
            "verdict": self.verdict,
            "singular": self.singular,
        })
    }
}

/// Strata of `strata` containing `pt`.
pub fn locate<'a>(strata: &'a [StratumDescriptor], pt: &CoefficientPoint) -> Result<Vec<&'a StratumDescriptor>> {
    let mut out = Vec::new();
    for s in strata {
        if s.contains(pt)? {
            out.push(s);
        }
    }
    Ok(out)
}

struct S {
    list: Vec<StratumDescriptor>,
}

impl S {
    fn add(&mut self, label: &str, conditions: Vec<Condition>, verdict: &str) {
        self.list.push(StratumDescriptor {
            label: label.into(),
            conditions,
            verdict: verdict.into(),
            singular: verdict != "regular",
        });
    }
}

/// The stratification of (F_p^×)^n by verdict.
pub fn stratify(family: Family, p: u64) -> Result<Vec<StratumDescriptor>> {
    use Condition::*;
    family.validate()?;
    if !crate::algebra_core::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let n = family.rank();
    let reg = VarRegistry::split::<String>(&[], &names("c", 1..=n))?;
    let c = Ctx::new(reg);
    let sign = |k: usize| c.k(if k % 2 == 0 { 1 } else { -1 });
    let mut s = S { list: Vec::new() };
    match family {
        Family::A(1) => {
            let f = &c.c(1) + &c.k(1);
            s.add("S1", vec![Vanishes(f.clone())], "two_lines");
            s.add("S2", vec![NonVanishing(f)], "regular");
        }
        Family::A(n) if n % 2 == 0 => s.add("S", vec![], "regular"),
        Family::A(n) => {
            let f = &c.lam(n) - &sign((n + 1) / 2);
            s.add("S1", vec![Vanishes(f.clone())], "isolated_hypersurface");
            s.add("S2", vec![NonVanishing(f)], "regular");
        }
        Family::B(n) if n % 2 == 1 => {
            let f = &c.lam(n) - &sign((n - 1) / 2 + 1);
            s.add("S1", vec![Vanishes(f.clone())], "isolated_hypersurface");
            s.add("S2", vec![NonVanishing(f)], "regular");
        }
        Family::B(n) => {
            if p == 2 {
                let f = c.lam(n - 1);
                s.add("S1", vec![IsSquare(f.clone())], "isolated_hypersurface");
                s.add("S2", vec![NotSquare(f)], "regular");
            } else {
                s.add("S", vec![], "regular");
            }
        }
        Family::C(n) => {
            let mu = &(&c.lam(n - 2) * &c.lam(n)) + &c.k(1);
            if p != 2 {
                if n % 2 == 0 {
                    s.add("S", vec![], "regular");
                } else {
                    s.add("S1", vec![Vanishes(mu.clone())], "isolated_hypersurface");
                    s.add("S2", vec![NonVanishing(mu)], "regular");
                }
            } else {
                let minus_cn = -&c.c(n);
                if n % 2 == 1 {
                    s.add("S1", vec![IsSquare(minus_cn.clone()), Vanishes(mu.clone())], "c_special");
                    s.add("S2", vec![IsSquare(minus_cn.clone()), NonVanishing(mu)], "c_special");
                    s.add("S3", vec![NotSquare(minus_cn)], "regular");
                } else {
                    s.add("S1", vec![IsSquare(minus_cn.clone())], "c_special");
                    s.add("S2", vec![NotSquare(minus_cn)], "regular");
                }
            }
        }
        Family::D(n) => {
            let split = &c.c(n - 1) - &c.c(n);
            if n % 2 == 1 {
                s.add("S1", vec![Vanishes(split.clone())], "d_components");
                s.add("S2", vec![NonVanishing(split)], "regular");
            } else {
                let sg = sign((n - 2) / 2 + 1);
                let fl = &c.lam(n - 1) - &sg;
                let fh = &(&c.lam(n - 3) * &c.c_inv(n)) - &sg;
                s.add("S1", vec![Vanishes(split.clone()), Vanishes(fl.clone())], "d_components");
                s.add("S2", vec![Vanishes(split.clone()), NonVanishing(fl.clone())], "d_components");
                s.add("S3", vec![NonVanishing(split.clone()), Vanishes(fl.clone())], "d_curve");
                s.add("S4", vec![NonVanishing(split.clone()), Vanishes(fh.clone())], "d_curve");
                s.add("S5", vec![NonVanishing(split), NonVanishing(fl), NonVanishing(fh)], "regular");
            }
        }
        Family::E(n) => {
            if (n - 3) % 2 == 1 {
                s.add("S", vec![], "regular");
            } else {
                let f = &c.lam(n - 2) - &sign((n - 3) / 2 + 1);
                s.add("S1", vec![Vanishes(f.clone())], "e_surface");
                s.add("S2", vec![NonVanishing(f)], "regular");
            }
        }
        Family::F4 => s.add("S", vec![], "regular"),
        Family::G2 => {
            if p == 3 {
                s.add("S1", vec![HasCubeRoot(c.c(1))], "isolated_hypersurface");
                s.add("S2", vec![NoCubeRoot(c.c(1))], "regular");
            } else {
                s.add("S", vec![], "regular");
            }
        }
        Family::RankTwo(0, 0) => {
            let f1 = &c.c(1) + &c.k(1);
            let f2 = &c.c(2) + &c.k(1);
            s.add("S1", vec![Vanishes(f1.clone()), Vanishes(f2.clone())], "four_planes");
            s.add("S2", vec![Vanishes(f1.clone()), NonVanishing(f2.clone())], "two_surfaces");
            s.add("S3", vec![NonVanishing(f1.clone()), Vanishes(f2.clone())], "two_surfaces");
            s.add("S4", vec![NonVanishing(f1), NonVanishing(f2)], "regular");
        }
        Family::RankTwo(a, b) => {
            let pi = p as i64;
            let kind = if a % pi == 0 || b % pi == 0 { "rank_two" } else { "regular" };
            s.add("S", vec![], kind);
        }
    }
    Ok(s.list)
}
