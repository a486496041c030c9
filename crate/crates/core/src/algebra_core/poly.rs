use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::field::{inv_mod, mul_mod, pow_mod, PrimeFieldElement};
use super::registry::VarRegistry;
use crate::error::{Error, Result};

pub type Exponents = Vec<i32>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// Sparse polynomial over Z in the variables of a registry.
///
/// Invertible variables may carry negative exponents. Terms are keyed by
/// dense exponent vectors; zero coefficients are never stored.
#[derive(Clone, Debug)]
pub struct MultiPoly {
    registry: Arc<VarRegistry>,
    terms: BTreeMap<Exponents, BigInt>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        self.compatible(other) && self.terms == other.terms
    }
}

impl Eq for MultiPoly {}

impl MultiPoly {
    pub fn zero(registry: &Arc<VarRegistry>) -> Self {
        Self { registry: registry.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(registry: &Arc<VarRegistry>, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut p = Self::zero(registry);
        if !c.is_zero() {
            p.terms.insert(vec![0; registry.len()], c);
        }
        p
    }

    pub fn one(registry: &Arc<VarRegistry>) -> Self {
        Self::constant(registry, 1)
    }

    pub fn var(registry: &Arc<VarRegistry>, name: &str) -> Result<Self> {
        let i = registry.require(name)?;
        Ok(Self::var_at(registry, i))
    }

    pub fn var_at(registry: &Arc<VarRegistry>, i: usize) -> Self {
        let mut e = vec![0; registry.len()];
        e[i] = 1;
        Self::monomial(registry, 1, e).expect("a variable is a valid monomial")
    }

    pub fn monomial(
        registry: &Arc<VarRegistry>,
        coef: impl Into<BigInt>,
        exps: Exponents,
    ) -> Result<Self> {
        assert_eq!(exps.len(), registry.len());
        for (i, &e) in exps.iter().enumerate() {
            if e < 0 && !registry.is_invertible(i) {
                return Err(Error::NegativeExponent(registry.name(i).to_string()));
            }
        }
        let mut p = Self::zero(registry);
        let c = coef.into();
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        Ok(p)
    }

    /// Product of named variables raised to signed powers.
    pub fn monomial_named(registry: &Arc<VarRegistry>, factors: &[(&str, i32)]) -> Result<Self> {
        let mut e = vec![0; registry.len()];
        for (name, k) in factors {
            e[registry.require(name)?] += k;
        }
        Self::monomial(registry, 1, e)
    }

    pub fn registry(&self) -> &Arc<VarRegistry> {
        &self.registry
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponents, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn compatible(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.registry, &other.registry) || self.registry == other.registry
    }

    pub fn constant_term(&self) -> BigInt {
        self.terms
            .get(&vec![0; self.registry.len()])
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    /// Indices of variables occurring with nonzero exponent.
    pub fn support(&self) -> Vec<usize> {
        let mut used = vec![false; self.registry.len()];
        for e in self.terms.keys() {
            for (i, &k) in e.iter().enumerate() {
                if k != 0 {
                    used[i] = true;
                }
            }
        }
        (0..used.len()).filter(|&i| used[i]).collect()
    }

    pub fn total_degree_of(exps: &[i32]) -> i64 {
        exps.iter().map(|&e| e as i64).sum()
    }

    /// Terms whose total degree is at most `d`.
    pub fn truncate_degree(&self, d: i64) -> Self {
        let mut p = Self::zero(&self.registry);
        for (e, c) in &self.terms {
            if Self::total_degree_of(e) <= d {
                p.terms.insert(e.clone(), c.clone());
            }
        }
        p
    }

    fn insert_add(terms: &mut BTreeMap<Exponents, BigInt>, e: Exponents, c: BigInt) {
        use std::collections::btree_map::Entry;
        match terms.entry(e) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn poly_arith(a: &Self, b: &Self, op: ArithOp) -> Result<Self> {
        if !a.compatible(b) {
            return Err(Error::RegistryMismatch);
        }
        let mut terms = BTreeMap::new();
        match op {
            ArithOp::Add | ArithOp::Sub => {
                terms = a.terms.clone();
                for (e, c) in &b.terms {
                    let c = if op == ArithOp::Sub { -c.clone() } else { c.clone() };
                    Self::insert_add(&mut terms, e.clone(), c);
                }
            }
            ArithOp::Mul => {
                for (ea, ca) in &a.terms {
                    for (eb, cb) in &b.terms {
                        let e: Exponents = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                        Self::insert_add(&mut terms, e, ca * cb);
                    }
                }
            }
        }
        Ok(Self { registry: a.registry.clone(), terms })
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero(&self.registry);
        }
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect();
        Self { registry: self.registry.clone(), terms }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(&self.registry);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Sign and exponents when `self` is ±(monomial in invertible variables).
    pub fn as_unit_monomial(&self) -> Option<(i8, &Exponents)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next()?;
        let sign = if c.is_one() {
            1
        } else if (-c).is_one() {
            -1
        } else {
            return None;
        };
        let ok = e
            .iter()
            .enumerate()
            .all(|(i, &k)| k == 0 || self.registry.is_invertible(i));
        ok.then_some((sign, e))
    }

    pub fn is_unit(&self) -> bool {
        self.as_unit_monomial().is_some()
    }

    /// Inverse of a unit monomial.
    pub fn unit_inverse(&self) -> Option<Self> {
        let (s, e) = self.as_unit_monomial()?;
        let e: Exponents = e.iter().map(|k| -k).collect();
        Self::monomial(&self.registry, s, e).ok()
    }

    /// Re-express over `target`, which must contain every variable in the
    /// support with the same invertibility.
    pub fn embed(&self, target: &Arc<VarRegistry>) -> Result<Self> {
        if Arc::ptr_eq(&self.registry, target) || *self.registry == **target {
            return Ok(Self { registry: target.clone(), terms: self.terms.clone() });
        }
        let mut map = vec![usize::MAX; self.registry.len()];
        for i in self.support() {
            let name = self.registry.name(i);
            let j = target.require(name)?;
            if self.registry.is_invertible(i) && !target.is_invertible(j) {
                return Err(Error::NonUnitImage(name.to_string()));
            }
            map[i] = j;
        }
        let mut out = Self::zero(target);
        for (e, c) in &self.terms {
            let mut f = vec![0; target.len()];
            for (i, &k) in e.iter().enumerate() {
                if k != 0 {
                    f[map[i]] = k;
                }
            }
            out.terms.insert(f, c.clone());
        }
        Ok(out)
    }

    /// Simultaneous substitution `var -> image`; images live over `target`.
    /// Variables without an image are carried over by name.
    pub fn substitute(
        &self,
        map: &BTreeMap<String, MultiPoly>,
        target: &Arc<VarRegistry>,
    ) -> Result<Self> {
        let n = self.registry.len();
        let mut images: Vec<Option<MultiPoly>> = vec![None; n];
        let mut inverses: Vec<Option<MultiPoly>> = vec![None; n];
        for i in self.support() {
            let name = self.registry.name(i);
            let img = match map.get(name) {
                Some(img) => img.embed(target)?,
                None => MultiPoly::var(target, name)?,
            };
            if self.registry.is_invertible(i) {
                match img.unit_inverse() {
                    Some(inv) => inverses[i] = Some(inv),
                    None => return Err(Error::NonUnitImage(name.to_string())),
                }
            }
            images[i] = Some(img);
        }
        let mut cache: HashMap<(usize, i32), MultiPoly> = HashMap::new();
        let mut out = Self::zero(target);
        for (e, c) in &self.terms {
            let mut term = Self::constant(target, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let power = cache
                    .entry((i, k))
                    .or_insert_with(|| {
                        let base = if k > 0 { &images[i] } else { &inverses[i] };
                        base.as_ref().expect("support image").pow(k.unsigned_abs())
                    })
                    .clone();
                term = &term * &power;
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Substitution with all names resolved in the polynomial's own registry.
    pub fn substitute_in_place(&self, map: &BTreeMap<String, MultiPoly>) -> Result<Self> {
        let reg = self.registry.clone();
        self.substitute(map, &reg)
    }

    pub fn partial_derivative(&self, var: &str) -> Result<Self> {
        let i = self.registry.require(var)?;
        Ok(self.partial_derivative_at(i))
    }

    pub fn partial_derivative_at(&self, i: usize) -> Self {
        let mut out = Self::zero(&self.registry);
        for (e, c) in &self.terms {
            let k = e[i];
            if k == 0 {
                continue;
            }
            let mut f = e.clone();
            f[i] -= 1;
            Self::insert_add(&mut out.terms, f, c * BigInt::from(k));
        }
        out
    }

    /// Value at a point given as residues indexed like the registry.
    pub fn evaluate_residues(&self, point: &[u64], p: u64) -> Result<u64> {
        assert_eq!(point.len(), self.registry.len());
        let mut acc = 0u64;
        for (e, c) in &self.terms {
            let mut t = bigint_mod(c, p);
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let base = if k > 0 {
                    point[i] % p
                } else {
                    inv_mod(point[i], p)
                        .ok_or_else(|| Error::ZeroOnInvertible(self.registry.name(i).to_string()))?
                };
                t = mul_mod(t, pow_mod(base, k.unsigned_abs() as u64, p), p);
            }
            acc = (acc + t) % p;
        }
        Ok(acc)
    }

    /// Value at a named point. Every variable of the registry needs a value.
    pub fn evaluate(&self, point: &HashMap<String, PrimeFieldElement>) -> Result<PrimeFieldElement> {
        let mut p = None;
        let mut residues = Vec::with_capacity(self.registry.len());
        for (i, name) in self.registry.names().iter().enumerate() {
            let v = point.get(name).ok_or_else(|| Error::MissingAssignment(name.clone()))?;
            if self.registry.is_invertible(i) && v.is_zero() {
                return Err(Error::ZeroOnInvertible(name.clone()));
            }
            p = Some(v.modulus());
            residues.push(v.residue());
        }
        let p = match p {
            Some(p) => p,
            None => return Err(Error::MissingAssignment("<modulus>".into())),
        };
        Ok(PrimeFieldElement::from_parts(self.evaluate_residues(&residues, p)?, p))
    }

    /// Coefficients reduced into [0, p); terms divisible by p are dropped.
    pub fn reduce_mod(&self, p: u64) -> Self {
        let mut out = Self::zero(&self.registry);
        for (e, c) in &self.terms {
            let r = bigint_mod(c, p);
            if r != 0 {
                out.terms.insert(e.clone(), BigInt::from(r));
            }
        }
        out
    }

    /// Bind the named variables to residues mod `p` (negative powers use the
    /// inverse residue) and reduce all coefficients mod `p`.
    pub fn specialize_mod(&self, values: &BTreeMap<String, u64>, p: u64) -> Result<Self> {
        let mut bound: Vec<Option<u64>> = vec![None; self.registry.len()];
        for (k, v) in values {
            bound[self.registry.require(k)?] = Some(v % p);
        }
        let mut out = Self::zero(&self.registry);
        for (e, c) in &self.terms {
            let mut t = bigint_mod(c, p);
            let mut f = e.clone();
            for (i, slot) in bound.iter().enumerate() {
                let (Some(v), k) = (slot, e[i]) else { continue };
                if k == 0 {
                    continue;
                }
                let base = if k > 0 {
                    *v
                } else {
                    inv_mod(*v, p).ok_or_else(|| Error::ZeroOnInvertible(self.registry.name(i).to_string()))?
                };
                t = mul_mod(t, pow_mod(base, k.unsigned_abs() as u64, p), p);
                f[i] = 0;
            }
            if t != 0 {
                Self::insert_add(&mut out.terms, f, BigInt::from(t));
            }
        }
        Ok(out.reduce_mod(p))
    }

    /// Replace the named variables by integer values (invertible ones must be
    /// substituted by units mod p elsewhere; here only plain integers).
    pub fn specialize(&self, values: &BTreeMap<String, i64>) -> Result<Self> {
        let map = values
            .iter()
            .map(|(k, v)| (k.clone(), MultiPoly::constant(&self.registry, *v)))
            .collect::<BTreeMap<_, _>>();
        for k in values.keys() {
            let i = self.registry.require(k)?;
            if self.registry.is_invertible(i) {
                return Err(Error::NonUnitImage(k.clone()));
            }
        }
        self.substitute_in_place(&map)
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }

    /// Parse the text form written by `Display`. Bare variables and
    /// coefficient-free terms are accepted too.
    pub fn parse(text: &str, registry: &Arc<VarRegistry>) -> Result<Self> {
        parse::parse(text, registry)
    }
}

pub(crate) fn bigint_mod(c: &BigInt, p: u64) -> u64 {
    c.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits in u64")
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let mag = c.abs();
            if idx == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            write!(f, "{mag}")?;
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, " * {}", self.registry.name(i))?,
                    _ => write!(f, " * {}^{}", self.registry.name(i), k)?,
                }
            }
        }
        Ok(())
    }
}

macro_rules! impl_op {
    ($tr:ident, $m:ident, $op:expr) => {
        impl<'a> $tr<&'a MultiPoly> for &'a MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: &'a MultiPoly) -> MultiPoly {
                MultiPoly::poly_arith(self, rhs, $op).expect("registry mismatch")
            }
        }
        impl $tr<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: MultiPoly) -> MultiPoly {
                MultiPoly::poly_arith(&self, &rhs, $op).expect("registry mismatch")
            }
        }
        impl<'a> $tr<&'a MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: &'a MultiPoly) -> MultiPoly {
                MultiPoly::poly_arith(&self, rhs, $op).expect("registry mismatch")
            }
        }
        impl<'a> $tr<MultiPoly> for &'a MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: MultiPoly) -> MultiPoly {
                MultiPoly::poly_arith(self, &rhs, $op).expect("registry mismatch")
            }
        }
    };
}

impl_op!(Add, add, ArithOp::Add);
impl_op!(Sub, sub, ArithOp::Sub);
impl_op!(Mul, mul, ArithOp::Mul);

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&BigInt::from(-1))
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

mod parse {
    use super::*;

    struct Lexer<'a> {
        s: &'a [u8],
        i: usize,
    }

    impl<'a> Lexer<'a> {
        fn skip_ws(&mut self) {
            while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
                self.i += 1;
            }
        }
        fn peek(&mut self) -> Option<u8> {
            self.skip_ws();
            self.s.get(self.i).copied()
        }
        fn eat(&mut self, c: u8) -> bool {
            if self.peek() == Some(c) {
                self.i += 1;
                true
            } else {
                false
            }
        }
        fn int(&mut self) -> Option<BigInt> {
            self.skip_ws();
            let start = self.i;
            if self.i < self.s.len() && self.s[self.i] == b'-' {
                self.i += 1;
            }
            while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
                self.i += 1;
            }
            let t = std::str::from_utf8(&self.s[start..self.i]).ok()?;
            if t.is_empty() || t == "-" {
                self.i = start;
                return None;
            }
            t.parse().ok()
        }
        fn ident(&mut self) -> Option<String> {
            self.skip_ws();
            let start = self.i;
            while self.i < self.s.len() {
                let c = self.s[self.i];
                if c.is_ascii_alphanumeric() || c == b'_' || c == b'\'' {
                    self.i += 1;
                } else {
                    break;
                }
            }
            (self.i > start).then(|| String::from_utf8_lossy(&self.s[start..self.i]).into_owned())
        }
    }

    pub(super) fn parse(text: &str, reg: &Arc<VarRegistry>) -> Result<MultiPoly> {
        let mut lx = Lexer { s: text.as_bytes(), i: 0 };
        let out = expr(&mut lx, reg, text)?;
        if lx.peek().is_some() {
            return Err(Error::Parse(format!("unexpected character in `{text}`")));
        }
        Ok(out)
    }

    fn expr(lx: &mut Lexer, reg: &Arc<VarRegistry>, text: &str) -> Result<MultiPoly> {
        let mut out = MultiPoly::zero(reg);
        let mut negate = lx.eat(b'-');
        loop {
            let t = term(lx, reg, text)?;
            out = if negate { &out - &t } else { &out + &t };
            if lx.eat(b'+') {
                negate = false;
            } else if lx.eat(b'-') {
                negate = true;
            } else {
                return Ok(out);
            }
        }
    }

    fn term(lx: &mut Lexer, reg: &Arc<VarRegistry>, text: &str) -> Result<MultiPoly> {
        let mut t = factor(lx, reg, text)?;
        while lx.eat(b'*') {
            t = &t * &factor(lx, reg, text)?;
        }
        Ok(t)
    }

    fn factor(lx: &mut Lexer, reg: &Arc<VarRegistry>, text: &str) -> Result<MultiPoly> {
        let err = |m: &str| Error::Parse(format!("{m} in `{text}`"));
        let exponent = |lx: &mut Lexer| -> Result<Option<i32>> {
            if !lx.eat(b'^') {
                return Ok(None);
            }
            let paren = lx.eat(b'(');
            let e = lx.int().ok_or_else(|| err("bad exponent"))?;
            if paren && !lx.eat(b')') {
                return Err(err("unclosed exponent"));
            }
            e.to_i32().map(Some).ok_or_else(|| err("exponent too large"))
        };
        match lx.peek() {
            Some(b'(') => {
                lx.eat(b'(');
                let inner = expr(lx, reg, text)?;
                if !lx.eat(b')') {
                    return Err(err("unclosed parenthesis"));
                }
                match exponent(lx)? {
                    None => Ok(inner),
                    Some(k) if k >= 0 => Ok(inner.pow(k as u32)),
                    Some(k) => inner
                        .unit_inverse()
                        .map(|u| u.pow(k.unsigned_abs()))
                        .ok_or_else(|| err("negative power of a non-unit")),
                }
            }
            Some(c) if c.is_ascii_digit() => {
                let k = lx.int().ok_or_else(|| err("bad integer"))?;
                let base = MultiPoly::constant(reg, k);
                match exponent(lx)? {
                    None => Ok(base),
                    Some(k) if k >= 0 => Ok(base.pow(k as u32)),
                    Some(_) => Err(err("negative power of an integer")),
                }
            }
            Some(_) => {
                let name = lx.ident().ok_or_else(|| err("expected factor"))?;
                let k = exponent(lx)?.unwrap_or(1);
                MultiPoly::monomial_named(reg, &[(&name, k)])
            }
            None => Err(err("unexpected end")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reg() -> Arc<VarRegistry> {
        VarRegistry::new([("x", false), ("y", false), ("c1", true), ("c3", true)]).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let r = reg();
        let x = MultiPoly::var(&r, "x").unwrap();
        let one = MultiPoly::one(&r);
        let lhs = &(&x + &one) * &(&x - &one);
        assert_eq!(lhs, MultiPoly::parse("x^2 - 1", &r).unwrap());
    }

    #[test]
    fn laurent_cancellation() {
        let r = reg();
        let c = MultiPoly::var(&r, "c1").unwrap();
        assert_eq!(&c * &c.unit_inverse().unwrap(), MultiPoly::one(&r));
        let inv = MultiPoly::monomial_named(&r, &[("c1", -1)]).unwrap();
        let d = inv.partial_derivative("c1").unwrap();
        assert_eq!(d, MultiPoly::parse("-1 * c1^-2", &r).unwrap());
    }

    #[test]
    fn negative_exponent_on_plain_variable_is_rejected() {
        let r = reg();
        assert!(MultiPoly::monomial_named(&r, &[("x", -1)]).is_err());
    }

    #[test]
    fn text_round_trip() {
        let r = reg();
        let p = MultiPoly::parse("3 * x^2 * y - 1 * c1^-1 * c3^-1 + 1", &r).unwrap();
        let s = p.to_string();
        assert_eq!(MultiPoly::parse(&s, &r).unwrap(), p);
        assert_eq!(MultiPoly::zero(&r).to_string(), "0");
    }

    #[test]
    fn evaluate_in_f5() {
        let r = reg();
        let p = MultiPoly::parse("1 - c1^-1 * c3^-1", &r).unwrap();
        let pt: HashMap<String, PrimeFieldElement> = [("x", 0), ("y", 0), ("c1", 2), ("c3", 3)]
            .into_iter()
            .map(|(k, v)| (k.to_string(), PrimeFieldElement::new(v, 5).unwrap()))
            .collect();
        assert_eq!(p.evaluate(&pt).unwrap().residue(), 0);
        let mut bad = pt.clone();
        bad.insert("c1".into(), PrimeFieldElement::new(0, 5).unwrap());
        assert_eq!(p.evaluate(&bad), Err(Error::ZeroOnInvertible("c1".into())));
        bad.remove("c1");
        assert!(matches!(p.evaluate(&bad), Err(Error::MissingAssignment(_))));
    }

    #[test]
    fn substitution_into_unit_needs_unit_image() {
        let r = reg();
        let p = MultiPoly::parse("c1 * x", &r).unwrap();
        let mut map = BTreeMap::new();
        map.insert("c1".to_string(), MultiPoly::parse("x + 1", &r).unwrap());
        assert_eq!(p.substitute_in_place(&map), Err(Error::NonUnitImage("c1".into())));
        map.insert("c1".to_string(), MultiPoly::parse("c3^-2", &r).unwrap());
        assert_eq!(
            p.substitute_in_place(&map).unwrap(),
            MultiPoly::parse("c3^-2 * x", &r).unwrap()
        );
    }

    #[test]
    fn registry_mismatch_is_an_error() {
        let a = MultiPoly::one(&reg());
        let other = VarRegistry::new([("t", false)]).unwrap();
        let b = MultiPoly::one(&other);
        assert_eq!(MultiPoly::poly_arith(&a, &b, ArithOp::Add), Err(Error::RegistryMismatch));
    }
}
