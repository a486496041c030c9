//! Labeled seeds, extended exchange matrices and mutation.
//!
//! Mutation directions are 1-based throughout, as in the usual notation.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::algebra_core::{MultiPoly, VarRegistry};
use crate::error::{Error, Result};

/// An m×n integer matrix whose top n×n block is skew-symmetrizable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExtendedExchangeMatrix {
    n: usize,
    entries: Vec<Vec<i64>>,
}

/// Positive integers d with d_i b_ij = -d_j b_ji.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SkewSymmetrizer {
    pub d: Vec<i64>,
}

impl SkewSymmetrizer {
    pub fn symmetrizes(&self, m: &ExtendedExchangeMatrix) -> bool {
        let n = m.n;
        self.d.len() == n
            && self.d.iter().all(|&x| x > 0)
            && (0..n).all(|i| (0..n).all(|j| self.d[i] * m.get(i, j) == -self.d[j] * m.get(j, i)))
    }
}

impl ExtendedExchangeMatrix {
    pub fn new(entries: Vec<Vec<i64>>, n: usize) -> Result<Self> {
        let m = Self::unchecked(entries, n)?;
        if find_skew_symmetrizer(&m).is_none() {
            return Err(Error::NotSkewSymmetrizable);
        }
        Ok(m)
    }

    /// Shape checks only.
    pub fn unchecked(entries: Vec<Vec<i64>>, n: usize) -> Result<Self> {
        if entries.len() < n {
            return Err(Error::MalformedMatrix(format!("{} rows but {n} columns", entries.len())));
        }
        if let Some(r) = entries.iter().find(|r| r.len() != n) {
            return Err(Error::MalformedMatrix(format!("row of length {} in a {n}-column matrix", r.len())));
        }
        Ok(Self { n, entries })
    }

    /// A square exchange matrix without frozen rows.
    pub fn square(entries: Vec<Vec<i64>>) -> Result<Self> {
        let n = entries.len();
        Self::new(entries, n)
    }

    pub fn m(&self) -> usize {
        self.entries.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    pub fn top_block(&self) -> Vec<Vec<i64>> {
        self.entries[..self.n].to_vec()
    }

    /// The matrix with `rows` appended below.
    pub fn stacked(&self, rows: &[Vec<i64>]) -> Result<Self> {
        let mut e = self.entries.clone();
        e.extend(rows.iter().cloned());
        Self::unchecked(e, self.n)
    }

    pub fn mutate(&self, k: usize) -> Result<Self> {
        if k == 0 || k > self.n {
            return Err(Error::DirectionOutOfRange { k, n: self.n });
        }
        let k = k - 1;
        let mut e = self.entries.clone();
        for i in 0..self.m() {
            for j in 0..self.n {
                e[i][j] = if i == k || j == k {
                    -self.entries[i][j]
                } else {
                    let bik = self.entries[i][k];
                    let bkj = self.entries[k][j];
                    self.entries[i][j] + bik.signum() * (bik * bkj).max(0)
                };
            }
        }
        Ok(Self { n: self.n, entries: e })
    }
}

impl fmt::Display for ExtendedExchangeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.entries.iter().enumerate() {
            if i == self.n {
                writeln!(f, "--")?;
            }
            let cells: Vec<String> = row.iter().map(|v| format!("{v:>3}")).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

pub fn mutate_matrix(m: &ExtendedExchangeMatrix, k: usize) -> Result<ExtendedExchangeMatrix> {
    m.mutate(k)
}

/// Γ(B) has an edge i→j iff b_ij > 0; acyclic iff it has no oriented cycle.
pub fn is_acyclic(m: &ExtendedExchangeMatrix) -> bool {
    let n = m.n;
    let mut indeg = vec![0usize; n];
    for i in 0..n {
        for j in 0..n {
            if m.get(i, j) > 0 {
                indeg[j] += 1;
            }
        }
    }
    let mut queue: VecDeque<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
    let mut seen = 0;
    while let Some(i) = queue.pop_front() {
        seen += 1;
        for j in 0..n {
            if m.get(i, j) > 0 {
                indeg[j] -= 1;
                if indeg[j] == 0 {
                    queue.push_back(j);
                }
            }
        }
    }
    seen == n
}

/// Minimal symmetrizer, normalized to gcd 1 on every connected component of
/// the sign pattern.
pub fn find_skew_symmetrizer(m: &ExtendedExchangeMatrix) -> Option<SkewSymmetrizer> {
    let n = m.n;
    for i in 0..n {
        for j in 0..n {
            let (a, b) = (m.get(i, j), m.get(j, i));
            if a.signum() != -b.signum() {
                return None;
            }
        }
    }
    // d stored as num/den
    let mut d: Vec<Option<(i64, i64)>> = vec![None; n];
    for root in 0..n {
        if d[root].is_some() {
            continue;
        }
        d[root] = Some((1, 1));
        let mut comp = vec![root];
        let mut queue = VecDeque::from([root]);
        while let Some(i) = queue.pop_front() {
            let (ni, di) = d[i].unwrap();
            for j in 0..n {
                let bij = m.get(i, j);
                if bij == 0 || i == j {
                    continue;
                }
                // d_j = d_i * b_ij / (-b_ji)
                let num = ni * bij;
                let den = di * -m.get(j, i);
                let g = num.gcd(&den) * den.signum();
                let cand = (num / g, den / g);
                match d[j] {
                    None => {
                        d[j] = Some(cand);
                        comp.push(j);
                        queue.push_back(j);
                    }
                    Some(existing) if existing == cand => {}
                    Some(_) => return None,
                }
            }
        }
        let l = comp.iter().fold(1i64, |acc, &i| acc.lcm(&d[i].unwrap().1));
        let ints: Vec<i64> = comp.iter().map(|&i| d[i].unwrap().0 * (l / d[i].unwrap().1)).collect();
        let g = ints.iter().fold(0i64, |acc, &x| acc.gcd(&x));
        for (&i, v) in comp.iter().zip(ints) {
            d[i] = Some((v / g, 1));
        }
    }
    let s = SkewSymmetrizer { d: d.into_iter().map(|x| x.unwrap().0).collect() };
    s.symmetrizes(m).then_some(s)
}

/// Seed: variables x_1..x_m (first n mutable) and an extended exchange matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LabeledSeed {
    matrix: ExtendedExchangeMatrix,
    vars: Vec<String>,
    invertible: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedJson {
    pub m: usize,
    pub n: usize,
    pub entries: Vec<Vec<i64>>,
    pub vars: Vec<String>,
    pub invertible: Vec<bool>,
}

impl LabeledSeed {
    pub fn new(matrix: ExtendedExchangeMatrix, vars: Vec<String>, invertible: Vec<bool>) -> Result<Self> {
        if vars.len() != matrix.m() || invertible.len() != matrix.m() {
            return Err(Error::MalformedMatrix(format!(
                "{} rows but {} variable names and {} flags",
                matrix.m(),
                vars.len(),
                invertible.len()
            )));
        }
        let mut seen = HashSet::new();
        for v in &vars {
            if !seen.insert(v) {
                return Err(Error::DuplicateVariable(v.clone()));
            }
        }
        Ok(Self { matrix, vars, invertible })
    }

    /// Mutable variables x1..xn, frozen f1..f(m-n), nothing invertible.
    pub fn from_matrix(matrix: ExtendedExchangeMatrix) -> Self {
        let n = matrix.n();
        let vars = (1..=matrix.m())
            .map(|i| if i <= n { format!("x{i}") } else { format!("f{}", i - n) })
            .collect();
        let invertible = vec![false; matrix.m()];
        Self { matrix, vars, invertible }
    }

    pub fn matrix(&self) -> &ExtendedExchangeMatrix {
        &self.matrix
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn invertible(&self) -> &[bool] {
        &self.invertible
    }

    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    pub fn m(&self) -> usize {
        self.matrix.m()
    }

    pub fn registry(&self) -> Result<Arc<VarRegistry>> {
        VarRegistry::new(self.vars.iter().cloned().zip(self.invertible.iter().copied()))
    }

    /// x_k x_k' - prod_{b_ik>0} x_i^b_ik - prod_{b_ik<0} x_i^-b_ik over the
    /// seed variables plus `new_name`.
    pub fn exchange_relation(&self, k: usize, new_name: &str) -> Result<MultiPoly> {
        if k == 0 || k > self.n() {
            return Err(Error::DirectionOutOfRange { k, n: self.n() });
        }
        let reg = self.registry()?.extended([(new_name.to_string(), false)])?;
        let col = k - 1;
        let mut pos = vec![0i32; reg.len()];
        let mut neg = vec![0i32; reg.len()];
        for i in 0..self.m() {
            let b = self.matrix.get(i, col);
            if b > 0 {
                pos[i] = b as i32;
            } else if b < 0 {
                neg[i] = (-b) as i32;
            }
        }
        let lead = MultiPoly::monomial_named(&reg, &[(&self.vars[col], 1), (new_name, 1)])?;
        Ok(lead - MultiPoly::monomial(&reg, 1, pos)? - MultiPoly::monomial(&reg, 1, neg)?)
    }

    /// Mutated seed (x_k renamed x_k') and the exchange relation.
    pub fn mutate(&self, k: usize) -> Result<(LabeledSeed, MultiPoly)> {
        let matrix = self.matrix.mutate(k)?;
        let new_name = format!("{}'", self.vars[k - 1]);
        let relation = self.exchange_relation(k, &new_name)?;
        let mut vars = self.vars.clone();
        vars[k - 1] = new_name;
        Ok((LabeledSeed { matrix, vars, invertible: self.invertible.clone() }, relation))
    }

    /// [B~; I_n] with new invertible frozen c_1..c_n.
    pub fn with_principal_coefficients(&self) -> Result<Self> {
        let n = self.n();
        let rows: Vec<Vec<i64>> = (0..n).map(|i| unit_row(n, i, 1)).collect();
        let mut vars = self.vars.clone();
        vars.extend((1..=n).map(|i| format!("c{i}")));
        let mut inv = self.invertible.clone();
        inv.extend(std::iter::repeat(true).take(n));
        Self::new(self.matrix.stacked(&rows)?, vars, inv)
    }

    /// [B~; I_n; -I_n] with new invertible frozen s_1..s_n, t_1..t_n.
    pub fn with_generic_coefficients(&self) -> Result<Self> {
        let n = self.n();
        let mut rows: Vec<Vec<i64>> = (0..n).map(|i| unit_row(n, i, 1)).collect();
        rows.extend((0..n).map(|i| unit_row(n, i, -1)));
        let mut vars = self.vars.clone();
        vars.extend((1..=n).map(|i| format!("s{i}")));
        vars.extend((1..=n).map(|i| format!("t{i}")));
        let mut inv = self.invertible.clone();
        inv.extend(std::iter::repeat(true).take(2 * n));
        Self::new(self.matrix.stacked(&rows)?, vars, inv)
    }

    pub fn to_json(&self) -> SeedJson {
        SeedJson {
            m: self.m(),
            n: self.n(),
            entries: self.matrix.entries.clone(),
            vars: self.vars.clone(),
            invertible: self.invertible.clone(),
        }
    }

    pub fn from_json(j: &SeedJson) -> Result<Self> {
        let matrix = ExtendedExchangeMatrix::new(j.entries.clone(), j.n)?;
        if matrix.m() != j.m {
            return Err(Error::MalformedMatrix(format!("m = {} but {} rows", j.m, matrix.m())));
        }
        Self::new(matrix, j.vars.clone(), j.invertible.clone())
    }
}

fn unit_row(n: usize, i: usize, v: i64) -> Vec<i64> {
    let mut r = vec![0; n];
    r[i] = v;
    r
}

/// True iff μ_k(μ_k(M)) = M.
pub fn involution_check(s: &LabeledSeed, k: usize) -> Result<bool> {
    let once = s.matrix.mutate(k)?;
    Ok(once.mutate(k)? == s.matrix)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DynkinType {
    A,
    B,
    C,
    D,
    E,
    F4,
    G2,
}

impl DynkinType {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_uppercase().as_str() {
            "A" => Self::A,
            "B" => Self::B,
            "C" => Self::C,
            "D" => Self::D,
            "E" => Self::E,
            "F4" | "F" => Self::F4,
            "G2" | "G" => Self::G2,
            _ => return Err(Error::InvalidFamily(format!("unknown Dynkin type `{s}`"))),
        })
    }
}

/// Exchange matrix of the given finite type (trivial coefficients).
pub fn dynkin_matrix(ty: DynkinType, n: usize) -> Result<ExtendedExchangeMatrix> {
    let bad = |what: &str| Err(Error::InvalidFamily(format!("{what} needs {}", match ty {
        DynkinType::A => "n >= 1",
        DynkinType::B => "n >= 2",
        DynkinType::C => "n >= 3",
        DynkinType::D => "n >= 4",
        DynkinType::E => "n >= 6",
        DynkinType::F4 => "n = 4",
        DynkinType::G2 => "n = 2",
    })));
    let ok = match ty {
        DynkinType::A => n >= 1,
        DynkinType::B => n >= 2,
        DynkinType::C => n >= 3,
        DynkinType::D => n >= 4,
        DynkinType::E => n >= 6,
        DynkinType::F4 => n == 4,
        DynkinType::G2 => n == 2,
    };
    if !ok {
        return bad(&format!("{ty:?}{n}"));
    }
    let mut b = vec![vec![0i64; n]; n];
    let mut edge = |i: usize, j: usize, bij: i64, bji: i64| {
        b[i - 1][j - 1] = bij;
        b[j - 1][i - 1] = bji;
    };
    match ty {
        DynkinType::A => (1..n).for_each(|k| edge(k, k + 1, 1, -1)),
        DynkinType::B => {
            (1..n - 1).for_each(|k| edge(k, k + 1, 1, -1));
            edge(n - 1, n, 1, -2);
        }
        DynkinType::C => {
            (1..n - 1).for_each(|k| edge(k, k + 1, 1, -1));
            edge(n - 1, n, 2, -1);
        }
        DynkinType::D => {
            (1..n - 2).for_each(|k| edge(k, k + 1, 1, -1));
            edge(n - 2, n - 1, 1, -1);
            edge(n - 2, n, 1, -1);
        }
        DynkinType::E => {
            (1..n - 3).for_each(|k| edge(k, k + 1, 1, -1));
            edge(n - 3, n - 2, 1, -1);
            edge(n - 3, n - 1, 1, -1);
            edge(n - 1, n, 1, -1);
        }
        DynkinType::F4 => {
            edge(1, 2, 1, -1);
            edge(2, 3, 1, -2);
            edge(3, 4, 1, -1);
        }
        DynkinType::G2 => edge(1, 2, 1, -3),
    }
    ExtendedExchangeMatrix::square(b)
}

pub fn dynkin_seed(ty: DynkinType, n: usize) -> Result<LabeledSeed> {
    Ok(LabeledSeed::from_matrix(dynkin_matrix(ty, n)?))
}

/// [[0,a],[b,0]]; requires ab < 0 or a = b = 0.
pub fn rank_two_seed(a: i64, b: i64) -> Result<LabeledSeed> {
    if !((a == 0 && b == 0) || a * b < 0) {
        return Err(Error::InvalidFamily(format!("rank two needs ab < 0 or a = b = 0, got ({a},{b})")));
    }
    Ok(LabeledSeed::from_matrix(ExtendedExchangeMatrix::square(vec![vec![0, a], vec![b, 0]])?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MutationClass {
    Finite(usize),
    /// Budget hit before closure; says nothing about infiniteness.
    Exceeded,
}

pub const DEFAULT_CLASS_BUDGET: usize = 10_000;

/// Canonical representative up to simultaneous permutation of the mutable
/// indices (frozen rows keep their order).
pub fn canonical_form(m: &ExtendedExchangeMatrix) -> Vec<i64> {
    let n = m.n();
    let rows = m.m();
    let inv = |i: usize| {
        let mut r: Vec<i64> = (0..n).map(|j| m.get(i, j)).collect();
        let mut c: Vec<i64> = (0..n).map(|j| m.get(j, i)).collect();
        r.sort_unstable();
        c.sort_unstable();
        let frozen: Vec<i64> = (n..rows).map(|f| m.get(f, i)).collect();
        (r, c, frozen)
    };
    let invariants: Vec<_> = (0..n).map(inv).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| invariants[a].cmp(&invariants[b]));
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &i in &order {
        match groups.last_mut() {
            Some(g) if invariants[g[0]] == invariants[i] => g.push(i),
            _ => groups.push(vec![i]),
        }
    }
    let encode = |perm: &[usize]| -> Vec<i64> {
        let mut out = Vec::with_capacity(rows * n);
        for &i in perm {
            for &j in perm {
                out.push(m.get(i, j));
            }
        }
        for f in n..rows {
            for &j in perm {
                out.push(m.get(f, j));
            }
        }
        out
    };
    let mut best: Option<Vec<i64>> = None;
    let mut current: Vec<usize> = Vec::with_capacity(n);
    fn rec(
        groups: &[Vec<usize>],
        gi: usize,
        current: &mut Vec<usize>,
        best: &mut Option<Vec<i64>>,
        encode: &dyn Fn(&[usize]) -> Vec<i64>,
    ) {
        if gi == groups.len() {
            let e = encode(current);
            if best.as_ref().map_or(true, |b| e < *b) {
                *best = Some(e);
            }
            return;
        }
        let mut g = groups[gi].clone();
        permute(&mut g, 0, &mut |p| {
            let len = current.len();
            current.extend_from_slice(p);
            rec(groups, gi + 1, current, best, encode);
            current.truncate(len);
        });
    }
    fn permute(v: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
        if k == v.len() {
            f(v);
            return;
        }
        for i in k..v.len() {
            v.swap(k, i);
            permute(v, k + 1, f);
            v.swap(k, i);
        }
    }
    rec(&groups, 0, &mut current, &mut best, &encode);
    best.unwrap_or_default()
}

/// BFS over the mutation class of the matrix, up to permutation of mutable
/// indices.
pub fn mutation_class_is_finite(s: &LabeledSeed, budget: usize) -> MutationClass {
    let start = s.matrix().clone();
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    seen.insert(canonical_form(&start));
    let mut queue = VecDeque::from([start]);
    while let Some(m) = queue.pop_front() {
        for k in 1..=m.n() {
            let next = m.mutate(k).expect("direction in range");
            if seen.insert(canonical_form(&next)) {
                if seen.len() > budget {
                    return MutationClass::Exceeded;
                }
                queue.push_back(next);
            }
        }
    }
    MutationClass::Finite(seen.len())
}
