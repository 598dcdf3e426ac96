//! Clifford-theory recursions for the mirabolic-type groups `P_n`, the
//! stabilisers `T_n`, the semidirect products `(F_q^n x F_q^n) : GL_n(F_q)`
//! and the automorphism groups `G_(l,1^n) = Aut(o_l + o_1^n)`.
//!
//! ```text
//! R_P1 = D
//! R_Pn(D) = R_P(n-1)(D^(q^(n-1) - 1)) + R_GL(n-1)(D)
//! R_T2 = q D
//! R_Tn(D) = (q-1) R_GL(n-2)(D^(q^(n-2))) + R_T(n-1)(D^(q^(n-2) - 1)) + R_P(n-1)(D)
//! R_SDn(D) = R_GLn(D) + 2 R_Pn(D^(q^n - 1)) + R_Tn(D^((q^n - 1)(q^(n-1) - 1)))
//!            + (q-1) R_GL(n-1)(D^(q^(n-1) (q^n - 1)))
//! R_G(l,n)(D) = q^(l-2) (q-1)^2 R_GLn(D^(q^n)) + q^(l-2) (q-1) R_SDn(D)
//! ```

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{OnceLock, RwLock};

use thiserror::Error;

use crate::greens::{gl_order, gl_zeta};
use crate::{DimensionPoly, RationalPoly, ZetaPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TowerError {
    #[error("{family} is defined for {requirement}, got {got}")]
    OutOfRange {
        family: &'static str,
        requirement: &'static str,
        got: String,
    },
    #[error("unknown family {0:?} (expected gl, p, t, sd or g)")]
    UnknownFamily(String),
}

/// A group family together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyId {
    /// `GL_n(F_q)`, `n >= 0`.
    Gl { n: usize },
    /// Matrices in `GL_n(F_q)` with first row `(1, 0, ..., 0)`, `n >= 1`.
    P { n: usize },
    /// Matrices in `GL_n(F_q)` with first column `e_1` and second row
    /// `e_2^T`, `n >= 2`.
    T { n: usize },
    /// `(F_q^n x F_q^n) : GL_n(F_q)`, `n >= 2`.
    Sd { n: usize },
    /// `Aut(o_l + o_1^n)`, `l >= 2`, `n >= 2`.
    G { ell: usize, n: usize },
}

impl FamilyId {
    pub fn validate(self) -> Result<Self, TowerError> {
        let (ok, family, requirement) = match self {
            FamilyId::Gl { .. } => (true, "GL", "n >= 0"),
            FamilyId::P { n } => (n >= 1, "P", "n >= 1"),
            FamilyId::T { n } => (n >= 2, "T", "n >= 2"),
            FamilyId::Sd { n } => (n >= 2, "SD", "n >= 2"),
            FamilyId::G { ell, n } => (ell >= 2 && n >= 2, "G", "l >= 2 and n >= 2"),
        };
        if ok {
            Ok(self)
        } else {
            Err(TowerError::OutOfRange {
                family,
                requirement,
                got: self.params_string(),
            })
        }
    }

    /// Short lowercase family tag as used on the command line.
    pub fn tag(self) -> &'static str {
        match self {
            FamilyId::Gl { .. } => "gl",
            FamilyId::P { .. } => "p",
            FamilyId::T { .. } => "t",
            FamilyId::Sd { .. } => "sd",
            FamilyId::G { .. } => "g",
        }
    }

    pub fn n(self) -> usize {
        match self {
            FamilyId::Gl { n }
            | FamilyId::P { n }
            | FamilyId::T { n }
            | FamilyId::Sd { n }
            | FamilyId::G { n, .. } => n,
        }
    }

    pub fn ell(self) -> Option<usize> {
        match self {
            FamilyId::G { ell, .. } => Some(ell),
            _ => None,
        }
    }

    /// Builds a family from its tag and parameters; `ell` is only read for `g`.
    pub fn from_parts(tag: &str, n: usize, ell: Option<usize>) -> Result<Self, TowerError> {
        let f = match tag.to_ascii_lowercase().as_str() {
            "gl" => FamilyId::Gl { n },
            "p" => FamilyId::P { n },
            "t" => FamilyId::T { n },
            "sd" => FamilyId::Sd { n },
            "g" => FamilyId::G {
                ell: ell.ok_or(TowerError::OutOfRange {
                    family: "G",
                    requirement: "an explicit l",
                    got: "none".into(),
                })?,
                n,
            },
            other => return Err(TowerError::UnknownFamily(other.to_string())),
        };
        f.validate()
    }

    fn params_string(self) -> String {
        match self {
            FamilyId::G { ell, n } => format!("l = {ell}, n = {n}"),
            other => format!("n = {}", other.n()),
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FamilyId::Gl { n } => write!(f, "GL_{n}"),
            FamilyId::P { n } => write!(f, "P_{n}"),
            FamilyId::T { n } => write!(f, "T_{n}"),
            FamilyId::Sd { n } => write!(f, "SD_{n}"),
            FamilyId::G { ell, n } => write!(f, "G_({ell},1^{n})"),
        }
    }
}

impl FromStr for FamilyId {
    type Err = TowerError;

    /// Accepts `gl:3`, `p:2`, `t:4`, `sd:2`, `g:3:2` (the last being `l:n`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut it = s.split(':');
        let tag = it.next().unwrap_or_default();
        let nums: Result<Vec<usize>, _> = it.map(str::parse).collect();
        let bad = || TowerError::UnknownFamily(s.to_string());
        let nums = nums.map_err(|_| bad())?;
        match (tag, nums.as_slice()) {
            ("g", [ell, n]) => FamilyId::from_parts(tag, *n, Some(*ell)),
            (_, [n]) if tag != "g" => FamilyId::from_parts(tag, *n, None),
            _ => Err(bad()),
        }
    }
}

fn zeta_cache() -> &'static RwLock<HashMap<FamilyId, ZetaPoly>> {
    static CACHE: OnceLock<RwLock<HashMap<FamilyId, ZetaPoly>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Zeta polynomial of any family, through the shared memo table.
pub fn family_zeta(f: FamilyId) -> Result<ZetaPoly, TowerError> {
    let f = f.validate()?;
    if let FamilyId::Gl { n } = f {
        return Ok(gl_zeta(n));
    }
    if let Some(z) = zeta_cache().read().expect("zeta cache poisoned").get(&f) {
        return Ok(z.clone());
    }
    // The lock is not held while recursing; concurrent computations of the
    // same entry produce equal values and the first insert wins.
    let z = match f {
        FamilyId::Gl { .. } => unreachable!(),
        FamilyId::P { n } => compute_p(n)?,
        FamilyId::T { n } => compute_t(n)?,
        FamilyId::Sd { n } => compute_sd(n)?,
        FamilyId::G { ell, n } => compute_g(ell, n)?,
    };
    Ok(zeta_cache()
        .write()
        .expect("zeta cache poisoned")
        .entry(f)
        .or_insert(z)
        .clone())
}

fn dim_q_pow_minus_one(k: usize) -> DimensionPoly {
    DimensionPoly::q_pow_minus_one(k)
}

fn subst(z: &ZetaPoly, e: &DimensionPoly) -> ZetaPoly {
    z.subst(e).expect("recursion exponents are nonzero")
}

fn compute_p(n: usize) -> Result<ZetaPoly, TowerError> {
    if n == 1 {
        return Ok(ZetaPoly::trivial());
    }
    let lower = family_zeta(FamilyId::P { n: n - 1 })?;
    Ok(subst(&lower, &dim_q_pow_minus_one(n - 1)).add(&gl_zeta(n - 1)))
}

fn compute_t(n: usize) -> Result<ZetaPoly, TowerError> {
    if n == 2 {
        return Ok(ZetaPoly::single(DimensionPoly::one(), RationalPoly::q()));
    }
    let type_a = subst(&gl_zeta(n - 2), &DimensionPoly::q_pow(n - 2))
        .scale(&RationalPoly::from_i64s(&[-1, 1]));
    let type_b = subst(
        &family_zeta(FamilyId::T { n: n - 1 })?,
        &dim_q_pow_minus_one(n - 2),
    );
    let type_c = family_zeta(FamilyId::P { n: n - 1 })?;
    Ok(type_a.add(&type_b).add(&type_c))
}

fn compute_sd(n: usize) -> Result<ZetaPoly, TowerError> {
    let qn1 = dim_q_pow_minus_one(n);
    let trivial_orbit = gl_zeta(n);
    let one_sided = subst(&family_zeta(FamilyId::P { n })?, &qn1).scale(&RationalPoly::from_i64(2));
    let generic = subst(
        &family_zeta(FamilyId::T { n })?,
        &(&qn1 * &dim_q_pow_minus_one(n - 1)),
    );
    let paired = subst(&gl_zeta(n - 1), &(&DimensionPoly::q_pow(n - 1) * &qn1))
        .scale(&RationalPoly::from_i64s(&[-1, 1]));
    Ok(trivial_orbit.add(&one_sided).add(&generic).add(&paired))
}

fn compute_g(ell: usize, n: usize) -> Result<ZetaPoly, TowerError> {
    let q_l2 = RationalPoly::q_pow(ell - 2);
    let q1 = RationalPoly::from_i64s(&[-1, 1]);
    let heisenberg = subst(&gl_zeta(n), &DimensionPoly::q_pow(n)).scale(&(&q_l2 * &q1.pow(2)));
    let quotient = family_zeta(FamilyId::Sd { n })?.scale(&(&q_l2 * &q1));
    Ok(heisenberg.add(&quotient))
}

pub fn p_zeta(n: usize) -> Result<ZetaPoly, TowerError> {
    family_zeta(FamilyId::P { n })
}

pub fn t_zeta(n: usize) -> Result<ZetaPoly, TowerError> {
    family_zeta(FamilyId::T { n })
}

pub fn sd_zeta(n: usize) -> Result<ZetaPoly, TowerError> {
    family_zeta(FamilyId::Sd { n })
}

pub fn g_zeta(ell: usize, n: usize) -> Result<ZetaPoly, TowerError> {
    family_zeta(FamilyId::G { ell, n })
}

/// Group order as a polynomial in `q`.
pub fn order_poly(f: FamilyId) -> Result<RationalPoly, TowerError> {
    let q = RationalPoly::q_pow;
    Ok(match f.validate()? {
        FamilyId::Gl { n } => gl_order(n),
        FamilyId::P { n } => q(n - 1) * gl_order(n - 1),
        FamilyId::T { n } => q(2 * n - 3) * gl_order(n - 2),
        FamilyId::Sd { n } => q(2 * n) * gl_order(n),
        FamilyId::G { ell, n } => {
            q(ell - 1) * RationalPoly::from_i64s(&[-1, 1]) * q(2 * n) * gl_order(n)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn rp(c: &[i64]) -> RationalPoly {
        RationalPoly::new(
            c.iter()
                .map(|&x| BigRational::from_integer(x.into()))
                .collect(),
        )
    }

    fn dp(c: &[i64]) -> DimensionPoly {
        DimensionPoly::new(c.iter().map(|&x| x.into()).collect())
    }

    #[test]
    fn p_examples() {
        assert_eq!(p_zeta(1).unwrap(), ZetaPoly::trivial());
        let expected = ZetaPoly::from_terms([(dp(&[1]), rp(&[-1, 1])), (dp(&[-1, 1]), rp(&[1]))]);
        assert_eq!(p_zeta(2).unwrap(), expected);
        let p3 = p_zeta(3).unwrap();
        assert_eq!(p3.len(), 6);
        assert_eq!(p3.count(), rp(&[-1, 1, 1]));
        assert_eq!(p_zeta(2).unwrap().second_moment(), rp(&[0, -1, 1]));
    }

    #[test]
    fn t_examples() {
        assert_eq!(t_zeta(2).unwrap(), ZetaPoly::single(dp(&[1]), rp(&[0, 1])));
        let expected = ZetaPoly::from_terms([
            (dp(&[0, 1]), rp(&[1, -2, 1])),
            (dp(&[-1, 1]), rp(&[1, 1])),
            (dp(&[1]), rp(&[-1, 1])),
        ]);
        assert_eq!(t_zeta(3).unwrap(), expected);
        assert_eq!(t_zeta(3).unwrap().count(), rp(&[1, 0, 1]));
        assert_eq!(
            t_zeta(4).unwrap().second_moment(),
            RationalPoly::q_pow(5) * gl_order(2)
        );
    }

    #[test]
    fn sd_examples() {
        let sd2 = sd_zeta(2).unwrap();
        // 4 + 2 + 1 + 1 summand terms, of which the P and T images share
        // the dimension (q^2 - 1)(q - 1)
        assert_eq!(sd2.len(), 7);
        assert_eq!(sd2.second_moment(), RationalPoly::q_pow(4) * gl_order(2));
        let shared = dp(&[1, -1, -1, 1]);
        assert_eq!(sd2.multiplicity(&shared), Some(&rp(&[2, 1])));
    }

    #[test]
    fn range_checks() {
        assert!(p_zeta(0).is_err());
        assert!(t_zeta(1).is_err());
        assert!(sd_zeta(1).is_err());
        assert!(g_zeta(1, 2).is_err());
        assert!(g_zeta(3, 1).is_err());
        assert!(order_poly(FamilyId::G { ell: 2, n: 1 }).is_err());
    }

    #[test]
    fn order_examples() {
        assert_eq!(
            order_poly(FamilyId::Gl { n: 2 }).unwrap(),
            rp(&[-1, 0, 1]) * rp(&[0, -1, 1])
        );
        assert_eq!(order_poly(FamilyId::P { n: 2 }).unwrap(), rp(&[0, -1, 1]));
        let g32 = order_poly(FamilyId::G { ell: 3, n: 2 }).unwrap();
        assert_eq!(
            g32.eval_int(&2.into()),
            BigRational::from_integer(384.into())
        );
        assert_eq!(
            order_poly(FamilyId::T { n: 3 })
                .unwrap()
                .eval_int(&2.into()),
            BigRational::from_integer(8.into())
        );
    }

    #[test]
    fn count_consistency() {
        for (ell, n) in [(2, 2), (3, 2), (2, 3), (4, 3)] {
            let q_l2 = RationalPoly::q_pow(ell - 2);
            let q1 = rp(&[-1, 1]);
            let expected =
                &q_l2 * &q1.pow(2) * gl_zeta(n).count() + &q_l2 * &q1 * sd_zeta(n).unwrap().count();
            assert_eq!(g_zeta(ell, n).unwrap().count(), expected);
        }
    }

    #[test]
    fn family_parsing() {
        assert_eq!(
            "g:3:2".parse::<FamilyId>().unwrap(),
            FamilyId::G { ell: 3, n: 2 }
        );
        assert_eq!("sd:2".parse::<FamilyId>().unwrap(), FamilyId::Sd { n: 2 });
        assert!("g:2".parse::<FamilyId>().is_err());
        assert!("x:2".parse::<FamilyId>().is_err());
        assert!("t:1".parse::<FamilyId>().is_err());
        assert_eq!(
            FamilyId::from_parts("GL", 0, None).unwrap(),
            FamilyId::Gl { n: 0 }
        );
    }
}
