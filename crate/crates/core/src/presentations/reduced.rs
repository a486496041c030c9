use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{bfz_presentation, names, Ctx, Family, Presentation};
use crate::algebra_core::VarRegistry;
use crate::error::Result;

/// Which rank-two presentation to return.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum RankTwoForm {
    /// x1 y1 - c1 - x2^|b|, x2 y2 - c2 - x1^|a|.
    #[default]
    Normalized,
    /// The principal-coefficient exchange relations as they come.
    Bfz,
}

/// Chart registry: plain variables then c1..cn.
fn chart(plain: Vec<String>, n: usize) -> Result<Arc<VarRegistry>> {
    VarRegistry::split(&plain, &names("c", 1..=n))
}

pub(crate) fn z_names(k: usize) -> Vec<String> {
    names("z", 1..=k)
}

pub fn reduced_presentation(family: Family) -> Result<Presentation> {
    reduced_presentation_with(family, RankTwoForm::Normalized)
}

pub fn reduced_presentation_with(family: Family, form: RankTwoForm) -> Result<Presentation> {
    family.validate()?;
    let n = family.rank();
    let p = match family {
        Family::A(1) => {
            let reg = chart(vec!["x1".into(), "y1".into()], 1)?;
            let c = Ctx::new(reg.clone());
            let g = &(&(&c.v("x1") * &c.v("y1")) - &c.c(1)) - &c.k(1);
            Presentation::new(reg, vec![g])
        }
        Family::A(n) => {
            let reg = chart(z_names(n + 1), n)?;
            let c = Ctx::new(reg.clone());
            let g = &c.cont(&z_names(n + 1)) - &c.lam(n);
            Presentation::new(reg, vec![g])
        }
        Family::B(n) => {
            let mut plain = z_names(n - 1);
            plain.extend(names("u", 1..=3));
            let reg = chart(plain, n)?;
            let c = Ctx::new(reg.clone());
            let z = z_names(n - 1);
            let (u1, u2, u3) = (c.v("u1"), c.v("u2"), c.v("u3"));
            let u1u2 = &u1 * &u2;
            let g = &(&(&(&u1u2 - &c.lam(n)) * &u3) - &(&c.lam_inv(n - 1) * &u1.pow(2))) - &c.cont(&z[..n - 2]);
            let h = &(&u1u2 - &c.lam(n)) - &c.cont(&z);
            Presentation::new(reg, vec![g, h])
        }
        Family::C(n) => {
            let reg = chart(z_names(n + 1), n)?;
            let c = Ctx::new(reg.clone());
            let z = z_names(n + 1);
            let g = &(&(&c.cont(&z[..n]) * &c.v(&z[n])) - &c.cont(&z[..n - 1]).pow(2))
                - &(&c.lam(n - 2) * &c.lam(n));
            Presentation::new(reg, vec![g])
        }
        Family::D(n) => {
            let mut plain = z_names(n - 2);
            plain.extend(names("u", 1..=4));
            let reg = chart(plain, n)?;
            let c = Ctx::new(reg.clone());
            let z = z_names(n - 2);
            let (u1, u2, u3, u4) = (c.v("u1"), c.v("u2"), c.v("u3"), c.v("u4"));
            let lam = c.lam(n - 1);
            let lam_hat = &c.lam(n - 3) * &c.c_inv(n);
            let u3u4 = &u3 * &u4;
            let tail = &(&c.lam_inv(n - 1) * &(&u2 * &u4)) * &(&(&u1 * &u3) + &c.cont(&z[..n - 3]));
            let h1 = &(&(&(&u1 * &u2) - &u3u4) - &tail) - &(&lam_hat - &lam);
            let h2 = &(&u3u4 - &c.cont(&z)) - &lam;
            Presentation::new(reg, vec![h1, h2])
        }
        Family::E(n) => {
            let mut plain = z_names(n - 2);
            plain.extend(names("u", 1..=5));
            let reg = chart(plain, n)?;
            let c = Ctx::new(reg.clone());
            let z = z_names(n - 2);
            let h1 = &c.cont(&z) - &(&c.v("u3") * &c.cont(&["u1", "u2"]));
            let h2 = &(&(&c.v("u3") * &c.v("u4")) - &c.cont(&z[..n - 3])) - &c.lam(n - 2);
            let h3 = &c.cont(&["u1", "u2", "u5"]) - &c.cont(&z[..n - 3]);
            Presentation::new(reg, vec![h1, h2, h3])
        }
        Family::F4 => {
            let trivial = bfz_presentation(&family.seed()?)?;
            let reg = trivial.registry.extended(names("c", 1..=4).into_iter().map(|s| (s, true)))?;
            let gens = trivial.generators.iter().map(|g| g.embed(&reg)).collect::<Result<Vec<_>>>()?;
            Presentation::new(reg, gens)
        }
        Family::G2 => {
            let reg = chart(vec!["x".into(), "y".into(), "z".into()], 2)?;
            let c = Ctx::new(reg.clone());
            let g = &(&(&c.mono(&[("x", 1), ("y", 1), ("z", 1)]) - &c.v("y")) - &c.c(1)) - &c.v("x").pow(3);
            Presentation::new(reg, vec![g])
        }
        Family::RankTwo(a, b) => {
            let bfz = bfz_presentation(&family.principal_seed()?)?;
            if form == RankTwoForm::Bfz || (a == 0 && b == 0) {
                bfz
            } else {
                let c = Ctx::new(bfz.registry.clone());
                let g1 = &(&(&c.v("x1") * &c.v("y1")) - &c.c(1)) - &c.v("x2").pow(b.unsigned_abs() as u32);
                let g2 = &(&(&c.v("x2") * &c.v("y2")) - &c.c(2)) - &c.v("x1").pow(a.unsigned_abs() as u32);
                Presentation::new(bfz.registry, vec![g1, g2])
            }
        }
    };
    debug_assert_eq!(p.registry.invertible_flags().iter().filter(|&&f| f).count(), n);
    Ok(p)
}
