use std::collections::BTreeMap;

use super::{
    count_roots, split_p_part, CoefficientPoint, HessianWitness, LocusComponent, RankTwoComponent,
    SingularityReport, Verdict,
};
use crate::algebra_core::{cube_root, square_root, MultiPoly, PrimeFieldElement};
use crate::error::{Error, Result};
use crate::presentations::{names, reduced_presentation, Ctx, Family};

/// Builds η-specialized polynomials over a reduced chart.
struct Chart {
    c: Ctx,
    pt: CoefficientPoint,
    family: Family,
}

impl Chart {
    fn new(family: Family, pt: &CoefficientPoint) -> Result<Self> {
        family.validate()?;
        pt.check_rank(family)?;
        let reg = reduced_presentation(family)?.registry;
        Ok(Self { c: Ctx::new(reg), pt: pt.clone(), family })
    }

    fn v(&self, s: &str) -> MultiPoly {
        self.c.v(s)
    }

    fn k(&self, r: PrimeFieldElement) -> MultiPoly {
        self.c.k(r.residue() as i64)
    }

    fn specialize(&self, f: MultiPoly) -> MultiPoly {
        f.specialize_mod(&self.pt.assignment(), self.pt.p()).expect("c bound to units")
    }

    fn z(&self, k: usize) -> Vec<String> {
        names("z", 1..=k)
    }

    fn vars(&self, list: &[String]) -> Vec<MultiPoly> {
        list.iter().map(|s| self.v(s)).collect()
    }

    fn origin(&self) -> BTreeMap<String, u64> {
        let reg = &self.c.reg;
        (0..reg.len())
            .filter(|&i| !reg.is_invertible(i))
            .map(|i| (reg.name(i).to_string(), 0))
            .collect()
    }

    fn component(&self, name: &str, eqs: Vec<MultiPoly>) -> LocusComponent {
        LocusComponent { name: name.into(), equations: eqs.into_iter().map(|e| self.specialize(e)).collect() }
    }

    fn report(&self, verdict: Verdict, locus: Vec<LocusComponent>, stratum: &str) -> SingularityReport {
        SingularityReport {
            family: self.family,
            point: self.pt.clone(),
            verdict,
            locus,
            stratum: stratum.into(),
            hessian: None,
        }
    }

    fn regular(&self, stratum: &str) -> SingularityReport {
        self.report(Verdict::Regular, Vec::new(), stratum)
    }

    /// Isolated A1 at the origin, with the hypersurface `eq` in `local` for
    /// the Hessian check.
    fn a1_origin(&self, eq: MultiPoly, local: Vec<String>, eliminated: Vec<String>, stratum: &str) -> SingularityReport {
        let origin = self.origin();
        let all: Vec<String> = origin.keys().cloned().collect();
        let mut r = self.report(
            Verdict::IsolatedHypersurface { singularity: "A1".into(), point: origin.clone() },
            vec![self.component("origin", self.vars(&all))],
            stratum,
        );
        if self.pt.p() != 2 {
            r.hessian = Some(HessianWitness { equation: self.specialize(eq), vars: local, point: origin, eliminated });
        }
        r
    }
}

pub fn classify(family: Family, pt: &CoefficientPoint) -> Result<SingularityReport> {
    match family {
        Family::A(n) => classify_a(n, pt),
        Family::B(n) => classify_b(n, pt),
        Family::C(n) => classify_c(n, pt),
        Family::D(n) => classify_d(n, pt),
        Family::E(n) => classify_e(n, pt),
        Family::F4 => classify_f4(pt),
        Family::G2 => classify_g2(pt),
        Family::RankTwo(a, b) => classify_rank2(a, b, pt),
    }
}

pub fn classify_a(n: usize, pt: &CoefficientPoint) -> Result<SingularityReport> {
    let ch = Chart::new(Family::A(n), pt)?;
    if n == 1 {
        if pt.c(1) == pt.element(-1) {
            let point = ch.origin();
            let locus = vec![ch.component("origin", vec![ch.v("x1"), ch.v("y1")])];
            return Ok(ch.report(Verdict::TwoLines { point }, locus, "S1"));
        }
        return Ok(ch.regular("S2"));
    }
    if n % 2 == 0 {
        return Ok(ch.regular("S"));
    }
    let m = (n + 1) / 2;
    if pt.lambda(n) != pt.sign(m) {
        return Ok(ch.regular("S2"));
    }
    let z = ch.z(n + 1);
    let eq = &ch.c.cont(&z) - &ch.c.lam(n);
    Ok(ch.a1_origin(eq, z, Vec::new(), "S1"))
}

pub fn classify_b(n: usize, pt: &CoefficientPoint) -> Result<SingularityReport> {
    let ch = Chart::new(Family::B(n), pt)?;
    let z = ch.z(n - 1);
    if n % 2 == 1 {
        let m = (n - 1) / 2;
        if pt.lambda(n) != pt.sign(m + 1) {
            return Ok(ch.regular("S2"));
        }
        let h = &(&(&ch.v("u1") * &ch.v("u2")) - &ch.c.lam(n)) - &ch.c.cont(&z);
        let mut local = z.clone();
        local.extend(["u1".to_string(), "u2".to_string()]);
        return Ok(ch.a1_origin(h, local, vec!["u3 via g_n, u1 u2 - λ_n is a unit".into()], "S1"));
    }
    if pt.p() != 2 {
        return Ok(ch.regular("S"));
    }
    let Some(rho) = square_root(pt.lambda(n - 1)) else {
        return Ok(ch.regular("S2"));
    };
    let u2 = rho.inv().expect("unit").mul(pt.lambda(n));
    let mut point = ch.origin();
    point.insert("u1".into(), rho.residue());
    point.insert("u2".into(), u2.residue());
    let mut eqs = ch.vars(&z);
    eqs.push(&ch.v("u1") - &ch.k(rho));
    eqs.push(&ch.v("u2") - &ch.k(u2));
    eqs.push(ch.v("u3"));
    let locus = vec![ch.component("q", eqs)];
    Ok(ch.report(Verdict::IsolatedHypersurface { singularity: "A1".into(), point }, locus, "S1"))
}

pub fn classify_c(n: usize, pt: &CoefficientPoint) -> Result<SingularityReport> {
    let ch = Chart::new(Family::C(n), pt)?;
    let z = ch.z(n + 1);
    let kappa = pt.lambda(n - 2).mul(pt.lambda(n));
    if pt.p() != 2 {
        if n % 2 == 0 {
            return Ok(ch.regular("S"));
        }
        if kappa != pt.element(-1) {
            return Ok(ch.regular("S2"));
        }
        let f = reduced_presentation(Family::C(n))?.generators.remove(0);
        return Ok(ch.a1_origin(f, z, Vec::new(), "S1"));
    }
    let minus_inv = pt.c(n).neg().inv().expect("unit");
    let Some(delta) = square_root(minus_inv) else {
        return Ok(ch.regular(if n % 2 == 1 { "S3" } else { "S2" }));
    };
    let rho = delta.mul(pt.lambda(n - 2));
    let b_case = n % 2 == 1 && rho == pt.element(1);
    let eqs = vec![
        ch.v(&z[n]),
        ch.c.cont(&z[..n]),
        &ch.c.cont(&z[..n - 1]) + &ch.k(rho),
    ];
    let verdict = Verdict::CSpecial {
        case: if b_case { "2b" } else { "2c" }.into(),
        rho: rho.residue(),
        two_lines: b_case && n == 3,
        cyl_dim: n - 2,
    };
    let stratum = if b_case || n % 2 == 0 { "S1" } else { "S2" };
    Ok(ch.report(verdict, vec![ch.component("D", eqs)], stratum))
}

pub fn classify_d(n: usize, pt: &CoefficientPoint) -> Result<SingularityReport> {
    let ch = Chart::new(Family::D(n), pt)?;
    let z = ch.z(n - 2);
    let lam = pt.lambda(n - 1);
    let lam_hat = pt.lambda(n - 3).mul(pt.c(n).inv().expect("unit"));
    let eps = lam_hat.sub(lam);
    let even = n % 2 == 0;
    let s = pt.sign((n - 2) / 2 + 1);
    let zs = ch.vars(&z);
    let u = |i: usize| ch.v(&format!("u{i}"));
    if eps.is_zero() {
        let mut y0 = (1..=4).map(u).collect::<Vec<_>>();
        y0.push(&ch.c.cont(&z) + &ch.c.lam(n - 1));
        let mut locus = vec![ch.component("Y0", y0)];
        if even && lam == s {
            for i in 1..=4 {
                let mut eqs = zs.clone();
                eqs.extend((1..=4).filter(|&j| j != i).map(u));
                locus.push(ch.component(&format!("Y{i}"), eqs));
            }
            let case = if n == 4 { 'a' } else { 'b' };
            let components = locus.iter().map(|c| c.name.clone()).collect();
            return Ok(ch.report(Verdict::DComponents { case, components }, locus, "S1"));
        }
        let verdict = Verdict::DComponents { case: 'c', components: vec!["Y0".into()] };
        return Ok(ch.report(verdict, locus, if even { "S2" } else { "S1" }));
    }
    if !even {
        return Ok(ch.regular("S2"));
    }
    let e = ch.k(eps);
    let (branch, eqs, stratum) = if lam == s {
        let mut eqs = zs;
        eqs.extend([u(3), u(4), &(&u(1) * &u(2)) - &e]);
        ("lambda", eqs, "S3")
    } else if lam_hat == s {
        let mut eqs = zs;
        eqs.extend([u(1), u(2), &(&u(3) * &u(4)) + &e]);
        ("lambda_hat", eqs, "S4")
    } else {
        return Ok(ch.regular("S5"));
    };
    Ok(ch.report(Verdict::DCurve { branch: branch.into() }, vec![ch.component("curve", eqs)], stratum))
}

pub fn classify_e(n: usize, pt: &CoefficientPoint) -> Result<SingularityReport> {
    let ch = Chart::new(Family::E(n), pt)?;
    if (n - 3) % 2 == 1 {
        return Ok(ch.regular("S"));
    }
    let m = (n - 3) / 2;
    if pt.lambda(n - 2) != pt.sign(m + 1) {
        return Ok(ch.regular("S2"));
    }
    let mut eqs = ch.vars(&ch.z(n - 2));
    eqs.push(ch.v("u3"));
    eqs.push(ch.v("u4"));
    eqs.push(&ch.c.cont(&["u1", "u2", "u5"]) + &ch.c.lam(n - 2));
    Ok(ch.report(Verdict::ESurface { cyl_dim: 2 }, vec![ch.component("Y", eqs)], "S1"))
}

pub fn classify_f4(pt: &CoefficientPoint) -> Result<SingularityReport> {
    Ok(Chart::new(Family::F4, pt)?.regular("S"))
}

pub fn classify_g2(pt: &CoefficientPoint) -> Result<SingularityReport> {
    let ch = Chart::new(Family::G2, pt)?;
    if pt.p() != 3 {
        return Ok(ch.regular("S"));
    }
    let Some(delta) = cube_root(pt.c(1)) else {
        return Ok(ch.regular("S2"));
    };
    let x = delta.neg();
    let zc = delta.inv().expect("unit").neg();
    let point = BTreeMap::from([("x".to_string(), x.residue()), ("y".to_string(), 0), ("z".to_string(), zc.residue())]);
    let eqs = vec![&ch.v("x") - &ch.k(x), ch.v("y"), &ch.v("z") - &ch.k(zc)];
    let verdict = Verdict::IsolatedHypersurface { singularity: "A2".into(), point };
    Ok(ch.report(verdict, vec![ch.component("point", eqs)], "S1"))
}

/// In characteristic 3 with η_1 = δ^3 the G2 equation is y u - w^3 for
/// u = xz - 1 and w = x + δ. Checked as an identity of integer
/// polynomials modulo 3.
pub fn g2_normal_form_identity(delta: i64) -> Result<bool> {
    let p = reduced_presentation(Family::G2)?;
    let c = Ctx::new(p.registry.clone());
    let d = c.k(delta);
    let f = p.generators[0].substitute_in_place(&BTreeMap::from([("c1".to_string(), c.k(1))]))?;
    // c1 -> 1 then add back 1 - δ^3 so that the constant is -δ^3.
    let f = &(&f + &c.k(1)) - &d.pow(3);
    let u = &(&c.v("x") * &c.v("z")) - &c.k(1);
    let w = &c.v("x") + &d;
    let normal = &(&c.v("y") * &u) - &w.pow(3);
    Ok((&f - &normal).reduce_mod(3).is_zero())
}

pub fn classify_rank2(a: i64, b: i64, pt: &CoefficientPoint) -> Result<SingularityReport> {
    let family = Family::RankTwo(a, b);
    if !((a == 0 && b == 0) || a * b < 0) {
        return Err(Error::InvalidFamily(format!("rank two needs ab < 0 or a = b = 0, got ({a},{b})")));
    }
    let ch = Chart::new(family, pt)?;
    let v = |s: &str| ch.v(s);
    let p = pt.p();
    if a == 0 && b == 0 {
        let s1 = pt.c(1) == pt.element(-1);
        let s2 = pt.c(2) == pt.element(-1);
        let mut locus = Vec::new();
        if s1 {
            locus.push(ch.component("V(x1,y1)", vec![v("x1"), v("y1")]));
        }
        if s2 {
            locus.push(ch.component("V(x2,y2)", vec![v("x2"), v("y2")]));
        }
        return Ok(match (s1, s2) {
            (true, true) => ch.report(Verdict::FourPlanes, locus, "S1"),
            (true, false) => ch.report(Verdict::TwoSurfaces, locus, "S2"),
            (false, true) => ch.report(Verdict::TwoSurfaces, locus, "S3"),
            (false, false) => ch.regular("S4"),
        });
    }
    let (ea, eb) = (a.unsigned_abs(), b.unsigned_abs());
    let mut comps = Vec::new();
    let mut locus = Vec::new();
    let mut push = |name: &str, e: u64, t: PrimeFieldElement, eqs: Vec<MultiPoly>| {
        let (alpha, m) = split_p_part(e, p);
        comps.push(RankTwoComponent {
            name: name.into(),
            exponent: e,
            alpha,
            m,
            singularity: format!("A{}", p.pow(m) - 1),
            rational_points: count_roots(e, t.neg().residue(), p),
        });
        locus.push(ch.component(name, eqs));
    };
    let c1 = ch.c.c(1);
    let c2 = ch.c.c(2);
    if ea % p == 0 {
        let eqs = vec![
            v("x2"),
            v("y2"),
            &v("x1").pow(ea as u32) + &c2,
            &(&v("x1") * &v("y1")) - &c1,
        ];
        push("Y_a", ea, pt.c(2), eqs);
    }
    if eb % p == 0 {
        let eqs = vec![
            v("x1"),
            v("y1"),
            &v("x2").pow(eb as u32) + &c1,
            &(&v("x2") * &v("y2")) - &c2,
        ];
        push("Y_b", eb, pt.c(1), eqs);
    }
    if comps.is_empty() {
        return Ok(ch.regular("S"));
    }
    Ok(ch.report(Verdict::RankTwo { components: comps }, locus, "S"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(p: u64, eta: &[i64]) -> CoefficientPoint {
        CoefficientPoint::new(p, eta).unwrap()
    }

    #[test]
    fn type_a_examples() {
        let r = classify_a(3, &pt(5, &[2, 1, 3])).unwrap();
        assert_eq!(r.verdict.summary(), "isolated A1 at origin");
        assert!(r.hessian.is_some());
        assert!(!classify_a(3, &pt(5, &[1, 1, 2])).unwrap().verdict.is_singular());
        for eta in [[1, 1], [2, 3], [4, 4]] {
            assert_eq!(classify_a(2, &pt(5, &eta)).unwrap().verdict, Verdict::Regular);
        }
        assert!(matches!(classify_a(1, &pt(3, &[2])).unwrap().verdict, Verdict::TwoLines { .. }));
        assert_eq!(classify_a(1, &pt(3, &[1])).unwrap().verdict, Verdict::Regular);
    }

    #[test]
    fn type_b_examples() {
        // λ3 = (η1 η3)^{-1} = 1
        assert!(classify_b(3, &pt(5, &[2, 4, 3])).unwrap().verdict.is_singular());
        assert!(!classify_b(3, &pt(5, &[1, 1, 2])).unwrap().verdict.is_singular());
        for eta in [[1, 1], [2, 1], [2, 2]] {
            assert!(!classify_b(2, &pt(3, &eta)).unwrap().verdict.is_singular());
        }
        let r = classify_b(4, &pt(2, &[1, 1, 1, 1])).unwrap();
        match &r.verdict {
            Verdict::IsolatedHypersurface { point, .. } => {
                assert_eq!(point["u1"], 1);
                assert_eq!(point["u2"], 1);
                assert_eq!(point["u3"], 0);
            }
            v => panic!("{v:?}"),
        }
        assert!(r.hessian.is_none());
    }

    #[test]
    fn type_c_examples() {
        // -λ1 λ3 = -(η1^2 η3)^{-1}; η = (1,1,4) gives -4^{-1} = 1 in F5.
        assert!(classify_c(3, &pt(5, &[1, 1, 4])).unwrap().verdict.is_singular());
        assert!(!classify_c(4, &pt(5, &[1, 2, 3, 4])).unwrap().verdict.is_singular());
        let r = classify_c(3, &pt(2, &[1, 1, 1])).unwrap();
        assert_eq!(r.verdict, Verdict::CSpecial { case: "2b".into(), rho: 1, two_lines: true, cyl_dim: 1 });
        let r = classify_c(4, &pt(2, &[1, 1, 1, 1])).unwrap();
        assert!(matches!(r.verdict, Verdict::CSpecial { ref case, .. } if case == "2c"));
    }

    #[test]
    fn type_c_square_condition_is_not_enough() {
        // -η3 = 1 is a square in F5 but -λ1 λ3 = -(4·4)^{-1} = 4 ≠ 1.
        assert!(!classify_c(3, &pt(5, &[2, 1, 4])).unwrap().verdict.is_singular());
    }

    #[test]
    fn type_d_examples() {
        let r = classify_d(4, &pt(5, &[2, 1, 3, 3])).unwrap();
        assert_eq!(r.verdict.summary(), "case a, six coordinate axes");
        assert_eq!(r.locus.len(), 5);
        let r = classify_d(4, &pt(5, &[2, 1, 3, 1])).unwrap();
        assert!(matches!(r.verdict, Verdict::DCurve { .. }));
        for eta in [[1, 1, 1, 1, 1], [2, 1, 2, 1, 1]] {
            let r = classify_d(5, &pt(3, &eta)).unwrap();
            assert!(matches!(r.verdict, Verdict::DComponents { case: 'c', .. }));
        }
        // λ5 = (η1 η3 η5)^{-1} = 2 = -1 in F3
        let r = classify_d(6, &pt(3, &[2, 1, 1, 1, 1, 1])).unwrap();
        assert!(matches!(r.verdict, Verdict::DComponents { case: 'b', .. }));
    }

    #[test]
    fn type_e_examples() {
        for eta in [[1; 6], [2, 1, 2, 1, 2, 1]] {
            assert!(!classify_e(6, &pt(3, &eta)).unwrap().verdict.is_singular());
        }
        // λ5 = (η1 η3 η5)^{-1}
        assert!(classify_e(7, &pt(3, &[2, 1, 1, 1, 1, 1, 1])).unwrap().verdict.is_singular());
        assert!(classify_e(7, &pt(2, &[1; 7])).unwrap().verdict.is_singular());
        assert!(classify_e(9, &pt(3, &[1; 9])).unwrap().verdict.is_singular());
    }

    #[test]
    fn exceptional_examples() {
        for p in [2, 3, 7] {
            assert!(!classify_f4(&pt(p, &[1, 1, 1, 1])).unwrap().verdict.is_singular());
        }
        let r = classify_g2(&pt(3, &[1, 1])).unwrap();
        assert_eq!(
            r.verdict,
            Verdict::IsolatedHypersurface {
                singularity: "A2".into(),
                point: BTreeMap::from([("x".into(), 2), ("y".into(), 0), ("z".into(), 2)])
            }
        );
        assert!(classify_g2(&pt(3, &[2, 1])).unwrap().verdict.is_singular());
        assert!(!classify_g2(&pt(5, &[2, 3])).unwrap().verdict.is_singular());
        for d in [1, 2, 5, -4] {
            assert!(g2_normal_form_identity(d).unwrap());
        }
    }

    #[test]
    fn rank_two_examples() {
        assert_eq!(classify_rank2(0, 0, &pt(3, &[2, 2])).unwrap().verdict, Verdict::FourPlanes);
        assert_eq!(classify_rank2(0, 0, &pt(3, &[2, 1])).unwrap().verdict, Verdict::TwoSurfaces);
        let r = classify_rank2(2, -2, &pt(2, &[1, 1])).unwrap();
        match &r.verdict {
            Verdict::RankTwo { components } => {
                assert_eq!(components.len(), 2);
                assert!(components.iter().all(|c| c.singularity == "A1" && c.alpha == 1 && c.m == 1));
            }
            v => panic!("{v:?}"),
        }
        let r = classify_rank2(2, -3, &pt(3, &[1, 2])).unwrap();
        match &r.verdict {
            Verdict::RankTwo { components } => {
                assert_eq!(components.len(), 1);
                assert_eq!(components[0].name, "Y_b");
                assert_eq!(components[0].singularity, "A2");
            }
            v => panic!("{v:?}"),
        }
        assert!(classify_rank2(1, 1, &pt(3, &[1, 1])).is_err());
    }

    #[test]
    fn report_json_shape() {
        let r = classify_a(3, &pt(5, &[2, 1, 3])).unwrap();
        let j = r.to_json();
        assert_eq!(j["type"], "A");
        assert_eq!(j["n"], 3);
        assert_eq!(j["eta"], serde_json::json!([2, 1, 3]));
        assert_eq!(j["verdict"]["kind"], "isolated_hypersurface");
        assert_eq!(j["locus"].as_array().unwrap()[0].as_array().unwrap().len(), 4);
    }
}
