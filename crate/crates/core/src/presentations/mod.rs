//! Presentations of cluster algebras: the BFZ presentation of an acyclic
//! seed, continuants, λ-terms, reduced presentations per type and the
//! changes of variables relating them.

mod reduced;
mod witness;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra_core::{MultiPoly, VarRegistry};
use crate::error::{Error, Result};
use crate::seeds::{self, DynkinType, LabeledSeed};

pub use reduced::{reduced_presentation, reduced_presentation_with, RankTwoForm};
pub use witness::{
    gen_to_prin_witness, reduction_witness, verify_gen_to_prin, verify_reduction, verify_witness, CheckLine,
    GenToPrinWitness, VariableChange, VerificationReport,
};

/// A cluster type handled by the reduction and classification code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    A(usize),
    B(usize),
    C(usize),
    D(usize),
    /// Any n >= 6; n >= 9 is not of finite type.
    E(usize),
    F4,
    G2,
    RankTwo(i64, i64),
}

impl Family {
    pub fn new(ty: &str, n: Option<usize>, a: Option<i64>, b: Option<i64>) -> Result<Self> {
        let need_n = || n.ok_or_else(|| Error::InvalidFamily(format!("type {ty} needs n")));
        let f = match ty.to_ascii_uppercase().as_str() {
            "A" => Family::A(need_n()?),
            "B" => Family::B(need_n()?),
            "C" => Family::C(need_n()?),
            "D" => Family::D(need_n()?),
            "E" => Family::E(need_n()?),
            "F4" | "F" => Family::F4,
            "G2" | "G" => Family::G2,
            "RANK2" | "R2" | "RANKTWO" => {
                let (a, b) = a
                    .zip(b)
                    .ok_or_else(|| Error::InvalidFamily("rank two needs a and b".into()))?;
                Family::RankTwo(a, b)
            }
            _ => return Err(Error::InvalidFamily(format!("unknown type `{ty}`"))),
        };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Family::A(n) => n >= 1,
            Family::B(n) => n >= 2,
            Family::C(n) => n >= 3,
            Family::D(n) => n >= 4,
            Family::E(n) => n >= 6,
            Family::F4 | Family::G2 => true,
            Family::RankTwo(a, b) => (a == 0 && b == 0) || a * b < 0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidFamily(format!("{self} is out of range")))
        }
    }

    /// Number of mutable directions, i.e. of coefficients c_i.
    pub fn rank(&self) -> usize {
        match *self {
            Family::A(n) | Family::B(n) | Family::C(n) | Family::D(n) | Family::E(n) => n,
            Family::F4 => 4,
            Family::G2 | Family::RankTwo(..) => 2,
        }
    }

    pub fn type_name(&self) -> &'static str {
        match self {
            Family::A(_) => "A",
            Family::B(_) => "B",
            Family::C(_) => "C",
            Family::D(_) => "D",
            Family::E(_) => "E",
            Family::F4 => "F4",
            Family::G2 => "G2",
            Family::RankTwo(..) => "rank2",
        }
    }

    /// Seed with trivial coefficients.
    pub fn seed(&self) -> Result<LabeledSeed> {
        self.validate()?;
        match *self {
            Family::A(n) => seeds::dynkin_seed(DynkinType::A, n),
            Family::B(n) => seeds::dynkin_seed(DynkinType::B, n),
            Family::C(n) => seeds::dynkin_seed(DynkinType::C, n),
            Family::D(n) => seeds::dynkin_seed(DynkinType::D, n),
            Family::E(n) => seeds::dynkin_seed(DynkinType::E, n),
            Family::F4 => seeds::dynkin_seed(DynkinType::F4, 4),
            Family::G2 => seeds::dynkin_seed(DynkinType::G2, 2),
            Family::RankTwo(a, b) => seeds::rank_two_seed(a, b),
        }
    }

    pub fn principal_seed(&self) -> Result<LabeledSeed> {
        self.seed()?.with_principal_coefficients()
    }

    pub fn coefficient_names(&self) -> Vec<String> {
        (1..=self.rank()).map(|i| format!("c{i}")).collect()
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Family::A(n) => write!(f, "A{n}"),
            Family::B(n) => write!(f, "B{n}"),
            Family::C(n) => write!(f, "C{n}"),
            Family::D(n) => write!(f, "D{n}"),
            Family::E(n) => write!(f, "E{n}"),
            Family::F4 => write!(f, "F4"),
            Family::G2 => write!(f, "G2"),
            Family::RankTwo(a, b) => write!(f, "rank2({a},{b})"),
        }
    }
}

/// Ambient variables with invertibility flags and the ideal generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub registry: Arc<VarRegistry>,
    pub generators: Vec<MultiPoly>,
    pub expected_fiber_dim: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationJson {
    pub vars: Vec<String>,
    pub invertible: Vec<bool>,
    pub generators: Vec<String>,
}

impl Presentation {
    pub fn new(registry: Arc<VarRegistry>, generators: Vec<MultiPoly>) -> Self {
        let plain = registry.invertible_flags().iter().filter(|&&f| !f).count() as i64;
        let expected_fiber_dim = plain - generators.len() as i64;
        Self { registry, generators, expected_fiber_dim }
    }

    /// Indices of the non-invertible (ambient) variables.
    pub fn ambient_indices(&self) -> Vec<usize> {
        (0..self.registry.len()).filter(|&i| !self.registry.is_invertible(i)).collect()
    }

    pub fn to_json(&self) -> PresentationJson {
        PresentationJson {
            vars: self.registry.names().to_vec(),
            invertible: self.registry.invertible_flags().to_vec(),
            generators: self.generators.iter().map(|g| g.to_string()).collect(),
        }
    }

    pub fn from_json(j: &PresentationJson) -> Result<Self> {
        if j.vars.len() != j.invertible.len() {
            return Err(Error::Parse("vars and invertible differ in length".into()));
        }
        let reg = VarRegistry::new(j.vars.iter().cloned().zip(j.invertible.iter().copied()))?;
        let gens = j
            .generators
            .iter()
            .map(|g| MultiPoly::parse(g, &reg))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(reg, gens))
    }
}

/// Name of the exchanged variable x_k': `y<k>` when x_k is `x<k>`.
pub(crate) fn exchanged_name(var: &str) -> String {
    match var.strip_prefix('x') {
        Some(rest) if !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()) => format!("y{rest}"),
        _ => format!("{var}'"),
    }
}

/// Generators x_k x_k' - (monomials) for k = 1..n over (x, x', frozen).
pub fn bfz_presentation(s: &LabeledSeed) -> Result<Presentation> {
    if !seeds::is_acyclic(s.matrix()) {
        return Err(Error::NotAcyclic);
    }
    let n = s.n();
    let mut vars: Vec<(String, bool)> = Vec::new();
    for i in 0..n {
        vars.push((s.vars()[i].clone(), s.invertible()[i]));
    }
    for i in 0..n {
        vars.push((exchanged_name(&s.vars()[i]), false));
    }
    for i in n..s.m() {
        vars.push((s.vars()[i].clone(), s.invertible()[i]));
    }
    let reg = VarRegistry::new(vars)?;
    let gens = (1..=n)
        .map(|k| s.exchange_relation(k, &exchanged_name(&s.vars()[k - 1]))?.embed(&reg))
        .collect::<Result<Vec<_>>>()?;
    Ok(Presentation::new(reg, gens))
}

/// P_n(vars[0..n]): P_0 = 1, P_1 = y_1, P_n = y_1 P_{n-1}(y_2..) - P_{n-2}(y_3..).
pub fn continuant(registry: &Arc<VarRegistry>, n: usize, vars: &[MultiPoly]) -> Result<MultiPoly> {
    if vars.len() < n {
        return Err(Error::InvalidFamily(format!("P_{n} needs {n} variables, got {}", vars.len())));
    }
    // q[i] = P_{n-i}(vars[i..n])
    let mut next = MultiPoly::one(registry);
    if n == 0 {
        return Ok(next);
    }
    let mut cur = vars[n - 1].embed(registry)?;
    for i in (0..n - 1).rev() {
        let v = vars[i].embed(registry)?;
        let q = &(&v * &cur) - &next;
        next = cur;
        cur = q;
    }
    Ok(cur)
}

/// Continuant in the named variables.
pub fn continuant_named<S: AsRef<str>>(registry: &Arc<VarRegistry>, names: &[S]) -> Result<MultiPoly> {
    let vars = names
        .iter()
        .map(|s| MultiPoly::var(registry, s.as_ref()))
        .collect::<Result<Vec<_>>>()?;
    continuant(registry, vars.len(), &vars)
}

/// λ_k as a Laurent monomial together with its index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaTerm {
    pub k: usize,
    pub poly: MultiPoly,
}

/// λ_{2s} = prod c_{2α}^{-1}, λ_{2s+1} = prod c_{2α-1}^{-1}, λ_0 = 1, with
/// c_i the i-th entry of `c_vars`.
pub fn lambda_term<S: AsRef<str>>(registry: &Arc<VarRegistry>, k: usize, c_vars: &[S]) -> Result<LambdaTerm> {
    if c_vars.len() < k {
        return Err(Error::InvalidFamily(format!("λ_{k} needs {k} coefficients")));
    }
    let mut e = vec![0i32; registry.len()];
    let mut i = if k % 2 == 0 { 2 } else { 1 };
    while i <= k {
        e[registry.require(c_vars[i - 1].as_ref())?] -= 1;
        i += 2;
    }
    Ok(LambdaTerm { k, poly: MultiPoly::monomial(registry, 1, e)? })
}

/// Small helper for building polynomials by name over one registry.
pub(crate) struct Ctx {
    pub reg: Arc<VarRegistry>,
}

impl Ctx {
    pub fn new(reg: Arc<VarRegistry>) -> Self {
        Self { reg }
    }

    pub fn v(&self, name: &str) -> MultiPoly {
        MultiPoly::var(&self.reg, name).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn k(&self, c: i64) -> MultiPoly {
        MultiPoly::constant(&self.reg, c)
    }

    pub fn mono(&self, f: &[(&str, i32)]) -> MultiPoly {
        MultiPoly::monomial_named(&self.reg, f).unwrap_or_else(|e| panic!("{e}"))
    }

    /// λ_k in c1, c2, ...
    pub fn lam(&self, k: usize) -> MultiPoly {
        let names: Vec<String> = (1..=k.max(1)).map(|i| format!("c{i}")).collect();
        lambda_term(&self.reg, k, &names).unwrap_or_else(|e| panic!("{e}")).poly
    }

    pub fn lam_inv(&self, k: usize) -> MultiPoly {
        self.lam(k).unit_inverse().expect("λ is a unit")
    }

    pub fn c(&self, i: usize) -> MultiPoly {
        self.v(&format!("c{i}"))
    }

    pub fn c_inv(&self, i: usize) -> MultiPoly {
        self.mono(&[(&format!("c{i}"), -1)])
    }

    pub fn cont<S: AsRef<str>>(&self, names: &[S]) -> MultiPoly {
        continuant_named(&self.reg, names).unwrap_or_else(|e| panic!("{e}"))
    }

    /// x_k for k >= 1, and the constant 1 for k = 0.
    pub fn x_or_one(&self, k: usize) -> MultiPoly {
        if k == 0 {
            self.k(1)
        } else {
            self.v(&format!("x{k}"))
        }
    }
}

pub(crate) fn names(prefix: &str, range: impl IntoIterator<Item = usize>) -> Vec<String> {
    range.into_iter().map(|i| format!("{prefix}{i}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_continuants() {
        let reg = VarRegistry::split(&["y1", "y2", "y3"], &[]).unwrap();
        let c = Ctx::new(reg.clone());
        assert_eq!(c.cont::<&str>(&[]), c.k(1));
        assert_eq!(c.cont(&["y1", "y2"]), MultiPoly::parse("y1*y2 - 1", &reg).unwrap());
        assert_eq!(
            c.cont(&["y1", "y2", "y3"]),
            MultiPoly::parse("y1*y2*y3 - y1 - y3", &reg).unwrap()
        );
        assert_eq!(&c.cont(&["y1", "y2"]) + &c.k(1), c.mono(&[("y1", 1), ("y2", 1)]));
    }

    #[test]
    fn lambdas() {
        let reg = VarRegistry::split::<&str>(&[], &["c1", "c2", "c3"]).unwrap();
        let c = Ctx::new(reg.clone());
        assert_eq!(c.lam(0), c.k(1));
        assert_eq!(c.lam(1), MultiPoly::parse("c1^-1", &reg).unwrap());
        assert_eq!(c.lam(2), MultiPoly::parse("c2^-1", &reg).unwrap());
        assert_eq!(c.lam(3), MultiPoly::parse("c1^-1 * c3^-1", &reg).unwrap());
    }

    #[test]
    fn bfz_a3() {
        let s = Family::A(3).principal_seed().unwrap();
        let p = bfz_presentation(&s).unwrap();
        let r = &p.registry;
        let want = ["x1*y1 - c1 - x2", "x2*y2 - c2*x1 - x3", "x3*y3 - c3*x2 - 1"];
        for (g, w) in p.generators.iter().zip(want) {
            assert_eq!(*g, MultiPoly::parse(w, r).unwrap());
        }
        assert_eq!(p.expected_fiber_dim, 3);
    }

    #[test]
    fn bfz_d4_and_rank_two() {
        let p = bfz_presentation(&Family::D(4).principal_seed().unwrap()).unwrap();
        let r = &p.registry;
        let want = ["x1*y1 - c1 - x2", "x2*y2 - c2*x1 - x3*x4", "x3*y3 - c3*x2 - 1", "x4*y4 - c4*x2 - 1"];
        for (g, w) in p.generators.iter().zip(want) {
            assert_eq!(*g, MultiPoly::parse(w, r).unwrap());
        }
        let p = bfz_presentation(&Family::RankTwo(3, -2).principal_seed().unwrap()).unwrap();
        let r = &p.registry;
        assert_eq!(p.generators[0], MultiPoly::parse("x1*y1 - c1 - x2^2", r).unwrap());
        assert_eq!(p.generators[1], MultiPoly::parse("x2*y2 - c2*x1^3 - 1", r).unwrap());
    }

    #[test]
    fn cyclic_seed_has_no_bfz_presentation() {
        let m = seeds::ExtendedExchangeMatrix::square(vec![vec![0, 1, -1], vec![-1, 0, 1], vec![1, -1, 0]]).unwrap();
        assert_eq!(bfz_presentation(&LabeledSeed::from_matrix(m)), Err(Error::NotAcyclic));
    }
}
