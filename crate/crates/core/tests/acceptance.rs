//! Acceptance suite. One PASS/FAIL line per criterion; exits nonzero if any
//! criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use std::time::{Duration, Instant};

use cluster_sing::algebra_core::{MultiPoly, VarRegistry};
use cluster_sing::classifier::{locate, stratify};
use cluster_sing::classifier::{classify, g2_normal_form_identity, CoefficientPoint, Verdict};
use cluster_sing::oracle::{
    default_budget, diff_against_classifier, diff_at, hessian_certify, singular_points, transport_check, FiberInstance,
};
use cluster_sing::presentations::reduced_presentation;
use cluster_sing::presentations::{verify_gen_to_prin, verify_reduction};
use cluster_sing::presentations::{continuant_named, Family};
use cluster_sing::seeds::{involution_check, ExtendedExchangeMatrix, LabeledSeed, SkewSymmetrizer};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const LIMIT_CONTINUANTS: Duration = Duration::from_secs(5);
const LIMIT_MUTATION: Duration = Duration::from_secs(10);
const LIMIT_REDUCTION: Duration = Duration::from_secs(30);
const LIMIT_GRID: Duration = Duration::from_secs(600);

const SEED_COUNT: usize = 500;
const RNG_SEED: u64 = 0x5eed_2024;

type Outcome = (bool, String);

fn main() {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("1 continuant suite", continuants),
        ("2 mutation suite", mutation),
        ("3 reduction verification", reductions),
        ("4 oracle/classifier agreement", agreement),
        ("5 headline reproductions", headlines),
        ("6 hessian A1 certification", hessians),
        ("7 stratification partition", strata),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        let (ok, detail) = f();
        let secs = start.elapsed().as_secs_f64();
        println!("criterion {name}: {} ({secs:.2}s) {detail}", if ok { "PASS" } else { "FAIL" });
        if !ok {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}

fn within(start: Instant, limit: Duration, ok: bool, detail: String) -> Outcome {
    let t = start.elapsed();
    if t > limit {
        return (false, format!("{detail}; over time limit {limit:?}"));
    }
    (ok, detail)
}

// ---- 1 ----

fn ys(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("y{i}")).collect()
}

/// P over a slice of names; the empty slice gives 1 and `None` gives P_{-1} = 0.
fn cont(reg: &Arc<VarRegistry>, names: Option<&[String]>) -> MultiPoly {
    match names {
        None => MultiPoly::zero(reg),
        Some(s) => continuant_named(reg, s).unwrap(),
    }
}

/// Independent construction: sum over sets of disjoint adjacent pairs,
/// each deleted pair contributing -1.
fn euler_rule(reg: &Arc<VarRegistry>, names: &[String]) -> MultiPoly {
    fn go(reg: &Arc<VarRegistry>, names: &[String], i: usize, sign: i64, mono: Vec<i32>, out: &mut MultiPoly) {
        if i >= names.len() {
            *out = &*out + &MultiPoly::monomial(reg, sign, mono).unwrap();
            return;
        }
        let mut keep = mono.clone();
        keep[reg.require(&names[i]).unwrap()] += 1;
        go(reg, names, i + 1, sign, keep, out);
        if i + 1 < names.len() {
            go(reg, names, i + 2, -sign, mono, out);
        }
    }
    let mut out = MultiPoly::zero(reg);
    go(reg, names, 0, 1, vec![0; reg.len()], &mut out);
    out
}

fn low_order_form(reg: &Arc<VarRegistry>, n: usize) -> MultiPoly {
    let y = |i: usize| MultiPoly::var(reg, &format!("y{i}")).unwrap();
    let odd_sum = (1..=n).step_by(2).fold(MultiPoly::zero(reg), |acc, i| &acc + &y(i));
    let mut pairs = MultiPoly::zero(reg);
    for j in (2..=n).step_by(2) {
        for i in (1..j).step_by(2) {
            pairs = &pairs + &(&y(i) * &y(j));
        }
    }
    let one = MultiPoly::one(reg);
    match n % 4 {
        0 => &one - &pairs,
        1 => odd_sum,
        2 => &pairs - &one,
        _ => -&odd_sum,
    }
}

fn continuants() -> Outcome {
    let start = Instant::now();
    let reg = VarRegistry::split::<String>(&ys(12), &[]).unwrap();
    let mut bad = Vec::new();
    for n in 0..=9 {
        let y = ys(n);
        let p = cont(&reg, Some(&y));
        if p != euler_rule(&reg, &y) {
            bad.push(format!("euler rule n={n}"));
        }
        let rev: BTreeMap<String, MultiPoly> = (1..=n)
            .map(|i| (format!("y{i}"), MultiPoly::var(&reg, &format!("y{}", n + 1 - i)).unwrap()))
            .collect();
        if p.substitute_in_place(&rev).unwrap() != p {
            bad.push(format!("symmetry n={n}"));
        }
        if p.terms().any(|(_, c)| c.magnitude() > &1u32.into()) {
            bad.push(format!("coefficients n={n}"));
        }
        // splits: P_n = P_k(y1..yk) P_{n-k}(y_{k+1}..) - P_{k-1}(y1..y_{k-1}) P_{n-k-1}(y_{k+2}..)
        for k in 1..n {
            let a = cont(&reg, Some(&y[..k]));
            let b = cont(&reg, Some(&y[k..]));
            let c = cont(&reg, Some(&y[..k - 1]));
            let d = if k + 1 <= n { cont(&reg, Some(&y[k + 1..])) } else { cont(&reg, None) };
            if &(&a * &b) - &(&c * &d) != p {
                bad.push(format!("split n={n} k={k}"));
            }
        }
        for k in 1..=n {
            let lhs = p.partial_derivative(&y[k - 1]).unwrap();
            let rhs = &cont(&reg, Some(&y[..k - 1])) * &cont(&reg, Some(&y[k..]));
            if lhs != rhs {
                bad.push(format!("derivative n={n} k={k}"));
            }
        }
    }
    for n in 1..=12 {
        let p = cont(&reg, Some(&ys(n)));
        if p.truncate_degree(2) != low_order_form(&reg, n) {
            bad.push(format!("low order n={n}"));
        }
    }
    let detail = if bad.is_empty() { "n<=9 exact, low-order n<=12".to_string() } else { bad.join(", ") };
    within(start, LIMIT_CONTINUANTS, bad.is_empty(), detail)
}

// ---- 2 ----

fn random_seed(rng: &mut StdRng) -> (LabeledSeed, SkewSymmetrizer) {
    let n = rng.gen_range(1..=6);
    let d: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=3)).collect();
    // B = S D with S skew-symmetric makes D B skew-symmetric.
    let mut s = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = rng.gen_range(-2..=2);
            s[i][j] = v;
            s[j][i] = -v;
        }
    }
    let mut rows: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| s[i][j] * d[j]).collect()).collect();
    let frozen = rng.gen_range(0..=n);
    for _ in 0..frozen {
        rows.push((0..n).map(|_| rng.gen_range(-3..=3)).collect());
    }
    let m = ExtendedExchangeMatrix::new(rows, n).expect("skew-symmetrizable by construction");
    (LabeledSeed::from_matrix(m), SkewSymmetrizer { d })
}

fn mutation() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(RNG_SEED);
    let mut failures = 0;
    let mut checks = 0;
    for _ in 0..SEED_COUNT {
        let (seed, d) = random_seed(&mut rng);
        for k in 1..=seed.n() {
            checks += 1;
            let mutated = seed.matrix().mutate(k).unwrap();
            if !involution_check(&seed, k).unwrap() || !d.symmetrizes(&mutated) {
                failures += 1;
            }
        }
        // a random walk as well, so symmetrizers are tested away from the start
        let mut m = seed.matrix().clone();
        // short: entries grow geometrically outside finite type
        for _ in 0..4 {
            m = m.mutate(rng.gen_range(1..=seed.n())).unwrap();
            checks += 1;
            if !d.symmetrizes(&m) {
                failures += 1;
            }
        }
    }
    within(start, LIMIT_MUTATION, failures == 0, format!("{SEED_COUNT} seeds, {checks} checks, {failures} failures"))
}

// ---- 3 ----

fn reduction_grid() -> Vec<Family> {
    let mut g = Vec::new();
    g.extend((1..=6).map(Family::A));
    g.extend((2..=5).map(Family::B));
    g.extend((3..=5).map(Family::C));
    g.extend((4..=6).map(Family::D));
    g.extend((6..=8).map(Family::E));
    g.push(Family::F4);
    g.push(Family::G2);
    g.extend([(1, -1), (2, -1), (2, -2), (3, -1)].map(|(a, b)| Family::RankTwo(a, b)));
    g
}

fn reductions() -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    let grid = reduction_grid();
    for &f in &grid {
        match verify_reduction(f) {
            Ok(r) if r.passed() => {}
            Ok(r) => bad.push(format!("{f}: {}", r.failures().len())),
            Err(e) => bad.push(format!("{f}: {e}")),
        }
        match f.seed().and_then(|s| verify_gen_to_prin(&s)) {
            Ok(r) if r.passed() => {}
            Ok(_) => bad.push(format!("{f} generic")),
            Err(e) => bad.push(format!("{f} generic: {e}")),
        }
    }
    let detail = if bad.is_empty() { format!("{} families", grid.len()) } else { bad.join(", ") };
    within(start, LIMIT_REDUCTION, bad.is_empty(), detail)
}

// ---- 4 ----

fn agreement_grid() -> Vec<(Family, u64)> {
    let mut g = Vec::new();
    let mut add = |fs: Vec<Family>, ps: &[u64]| {
        for f in fs {
            for &p in ps {
                g.push((f, p));
            }
        }
    };
    add((1..=4).map(Family::A).collect(), &[2, 3, 5]);
    add((2..=4).map(Family::B).collect(), &[2, 3, 5]);
    add((3..=4).map(Family::C).collect(), &[2, 3, 5]);
    add((4..=5).map(Family::D).collect(), &[2, 3]);
    add(vec![Family::E(7)], &[2]);
    add(vec![Family::F4], &[2, 3]);
    add(vec![Family::G2], &[3, 5, 7]);
    add([(2, -2), (2, -3), (3, -3), (0, 0)].map(|(a, b)| Family::RankTwo(a, b)).to_vec(), &[2, 3]);
    g
}

fn agreement() -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut etas = 0;
    let grid = agreement_grid();
    for &(f, p) in &grid {
        match diff_against_classifier(f, p, default_budget()) {
            Ok(r) => {
                etas += r.outcomes.len();
                if !r.agrees() {
                    bad.push(format!("{f}/F{p}: {} discrepancies", r.discrepancies.len()));
                }
            }
            Err(e) => bad.push(format!("{f}/F{p}: {e}")),
        }
    }
    let detail = if bad.is_empty() {
        format!("{} grid entries, {etas} eta, zero discrepancies", grid.len())
    } else {
        bad.join(", ")
    };
    within(start, LIMIT_GRID, bad.is_empty(), detail)
}

// ---- 5 ----

fn singular_set(f: Family, pt: &CoefficientPoint) -> (Vec<String>, BTreeSet<Vec<u64>>) {
    let fi = FiberInstance::new(reduced_presentation(f).unwrap(), pt.clone()).unwrap();
    let s = singular_points(&fi, default_budget()).unwrap();
    (s.vars, s.points.into_iter().collect())
}

fn headline_a3() -> Result<(), String> {
    let pts = CoefficientPoint::all(5, 3).unwrap();
    let mut singular = 0;
    for pt in &pts {
        let (vars, s) = singular_set(Family::A(3), pt);
        if s.is_empty() {
            continue;
        }
        singular += 1;
        if s.len() != 1 || !s.contains(&vec![0; vars.len()]) {
            return Err(format!("A3 eta {:?}: {} singular points", pt.eta(), s.len()));
        }
        if (pt.eta()[0] * pt.eta()[2]) % 5 != 1 {
            return Err(format!("A3 eta {:?} singular off eta1 eta3 = 1", pt.eta()));
        }
    }
    if singular != 16 {
        return Err(format!("A3: {singular}/64 singular"));
    }
    Ok(())
}

fn headline_g2() -> Result<(), String> {
    for pt in CoefficientPoint::all(3, 2).unwrap() {
        let (_, s) = singular_set(Family::G2, &pt);
        if s.len() != 1 {
            return Err(format!("G2 eta {:?}: {} singular points", pt.eta(), s.len()));
        }
    }
    for delta in [1, 2] {
        if !g2_normal_form_identity(delta).map_err(|e| e.to_string())? {
            return Err(format!("G2 normal form identity fails for delta={delta}"));
        }
    }
    Ok(())
}

/// λ3 = (η1 η3)^{-1} = 1 over F3; the six-axes claim checked for each such η.
/// Returns the η for which the singular set is not the six axes.
fn headline_d4() -> (usize, Vec<Vec<u64>>) {
    let mut total = 0;
    let mut off = Vec::new();
    for pt in CoefficientPoint::all(3, 4).unwrap() {
        if pt.eta()[0] * pt.eta()[2] % 3 != 1 {
            continue;
        }
        total += 1;
        let (vars, s) = singular_set(Family::D(4), &pt);
        let axes: BTreeSet<Vec<u64>> = std::iter::once(vec![0; vars.len()])
            .chain((0..vars.len()).flat_map(|i| {
                [1, 2].map(|v| {
                    let mut q = vec![0; vars.len()];
                    q[i] = v;
                    q
                })
            }))
            .collect();
        if s != axes {
            off.push(pt.eta().to_vec());
        }
    }
    (total, off)
}

fn headline_rank2() -> Result<(), String> {
    let f = Family::RankTwo(2, -2);
    let pt = CoefficientPoint::new(2, &[1, 1]).unwrap();
    let rep = classify(f, &pt).map_err(|e| e.to_string())?;
    let Verdict::RankTwo { components } = &rep.verdict else {
        return Err(format!("rank2(2,-2): verdict {}", rep.verdict.kind()));
    };
    if components.len() != 2 || components.iter().any(|c| c.singularity != "A1") || rep.locus.len() != 2 {
        return Err(format!("rank2(2,-2): {}", rep.verdict.summary()));
    }
    let (o, d) = diff_at(f, &pt, default_budget()).map_err(|e| e.to_string())?;
    if !d.is_empty() || o.singular_points == 0 {
        return Err(format!("rank2(2,-2): {} discrepancies", d.len()));
    }
    Ok(())
}

fn headlines() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for (tag, r) in [("a", headline_a3()), ("b", headline_g2()), ("d", headline_rank2())] {
        match r {
            Ok(()) => notes.push(format!("({tag}) ok")),
            Err(e) => {
                ok = false;
                notes.push(format!("({tag}) {e}"));
            }
        }
    }
    let (total, off) = headline_d4();
    if off.is_empty() {
        notes.push(format!("(c) ok on all {total} eta with lambda3 = 1"));
    } else {
        ok = false;
        let same = off.iter().all(|e| e[2] != e[3]);
        // the same counts straight from the unreduced chart
        let bfz: Vec<String> = off
            .iter()
            .map(|e| {
                let pt = CoefficientPoint::new(3, &e.iter().map(|&v| v as i64).collect::<Vec<_>>()).unwrap();
                let t = transport_check(Family::D(4), &pt, default_budget()).unwrap();
                format!("{e:?}:{}", t.bfz_singular_points)
            })
            .collect();
        notes.push(format!(
            "(c) six axes on {}/{total} eta with lambda3 = 1; the {} others (singular points in the unreduced chart {}) all have eta3 != eta4: {}",
            total - off.len(),
            off.len(),
            bfz.join(" "),
            if same { "the six-axes claim needs eta3 = eta4 as well" } else { "unexplained" }
        ));
    }
    (ok, notes.join("; "))
}

// ---- 6 ----

fn hessians() -> Outcome {
    let mut certified = 0;
    let mut bad = Vec::new();
    for (f, p) in agreement_grid() {
        if p != 3 && p != 5 {
            continue;
        }
        for pt in CoefficientPoint::all(p, f.rank()).unwrap() {
            let rep = classify(f, &pt).unwrap();
            let a1 = matches!(&rep.verdict, Verdict::IsolatedHypersurface { singularity, .. } if singularity == "A1");
            if !a1 {
                continue;
            }
            match hessian_certify(&rep) {
                Ok(Some(true)) => certified += 1,
                Ok(Some(false)) => bad.push(format!("{f}/F{p} {:?} rank deficient", pt.eta())),
                Ok(None) => bad.push(format!("{f}/F{p} {:?} no witness", pt.eta())),
                Err(e) => bad.push(format!("{f}/F{p} {:?}: {e}", pt.eta())),
            }
        }
    }
    let ok = bad.is_empty() && certified > 0;
    let detail = if bad.is_empty() { format!("{certified} isolated A1 points certified") } else { bad.join(", ") };
    (ok, detail)
}

// ---- 7 ----

fn strata() -> Outcome {
    let mut bad = Vec::new();
    let mut etas = 0;
    for (f, p) in agreement_grid() {
        let st = stratify(f, p).unwrap();
        for pt in CoefficientPoint::all(p, f.rank()).unwrap() {
            etas += 1;
            let hit = locate(&st, &pt).unwrap();
            let rep = classify(f, &pt).unwrap();
            if hit.len() != 1 {
                bad.push(format!("{f}/F{p} {:?} in {} strata", pt.eta(), hit.len()));
            } else if hit[0].label != rep.stratum || hit[0].verdict != rep.verdict.kind() {
                bad.push(format!(
                    "{f}/F{p} {:?}: stratum {} ({}) vs classify {} ({})",
                    pt.eta(),
                    hit[0].label,
                    hit[0].verdict,
                    rep.stratum,
                    rep.verdict.kind()
                ));
            }
        }
    }
    let detail = if bad.is_empty() { format!("{etas} eta, each in exactly one matching stratum") } else { bad.join(", ") };
    (bad.is_empty(), detail)
}
