//! The generic zeta polynomial of `GL_n(F_q)`.
//!
//! Irreducible characters of `GL_n(F_q)` fall into families indexed by
//! *types*: multisets of pairs `(d, lambda)` where `d` is the degree of a
//! Frobenius orbit of characters of a multiplicative group and `lambda` a
//! partition, with `sum d |lambda| = n`. Every character of a given type has
//! degree
//!
//! ```text
//! psi_n(q) * prod q^{d n(lambda)} / prod_{cells x} (q^{d h(x)} - 1),
//! psi_n(q) = (q - 1)(q^2 - 1) ... (q^n - 1),
//! ```
//!
//! and the number of characters of the type is a product of falling
//! factorials in the orbit counts `m_d(q)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::poly::PolyError;
use crate::{DimensionPoly, RationalPoly, ZetaPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GreensError {
    #[error("type has weight {weight} but GL_{n} was requested")]
    WeightMismatch { weight: usize, n: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("degree quotient {0} has non-integral coefficients")]
    NonIntegralDegree(String),
}

/// A weakly decreasing sequence of positive integers.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// # Panics
    ///
    /// Panics if `parts` is not weakly decreasing or contains a zero.
    pub fn new(parts: Vec<usize>) -> Self {
        assert!(
            parts.windows(2).all(|w| w[0] >= w[1]) && parts.iter().all(|&p| p > 0),
            "partition parts must be positive and weakly decreasing: {parts:?}"
        );
        Partition { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn conjugate(&self) -> Partition {
        let width = self.parts.first().copied().unwrap_or(0);
        Partition {
            parts: (0..width)
                .map(|j| self.parts.iter().take_while(|&&p| p > j).count())
                .collect(),
        }
    }

    /// Hook lengths of all cells, row by row.
    pub fn hooks(&self) -> Vec<usize> {
        let conj = self.conjugate();
        let mut out = Vec::with_capacity(self.size());
        for (i, &row) in self.parts.iter().enumerate() {
            for j in 0..row {
                let arm = row - j - 1;
                let leg = conj.parts[j] - i - 1;
                out.push(arm + leg + 1);
            }
        }
        out
    }

    /// `n(lambda) = sum (i - 1) lambda_i`.
    pub fn n_stat(&self) -> usize {
        self.parts.iter().enumerate().map(|(i, &p)| i * p).sum()
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// All partitions of `n` in reverse lexicographic order, `(n)` first.
pub fn partitions(n: usize) -> Vec<Partition> {
    fn rec(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        for p in (1..=rem.min(max)).rev() {
            cur.push(p);
            rec(rem - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Hook-length multiset (sorted descending) and `n(lambda)`.
pub fn partition_stats(lambda: &Partition) -> (Vec<usize>, usize) {
    let mut hooks = lambda.hooks();
    hooks.sort_unstable_by(|a, b| b.cmp(a));
    (hooks, lambda.n_stat())
}

pub(crate) fn mobius(mut n: usize) -> i64 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Number of Frobenius orbits of size exactly `d` on the characters of the
/// multiplicative group of `F_{q^d}`:
/// `(1/d) sum_{e | d} mu(d/e) (q^e - 1)`.
///
/// # Panics
///
/// Panics if `d == 0`.
pub fn necklace_count(d: usize) -> RationalPoly {
    assert!(d >= 1, "orbit degree must be positive");
    let mut acc = RationalPoly::zero();
    for e in (1..=d).filter(|e| d.is_multiple_of(*e)) {
        let mu = mobius(d / e);
        if mu != 0 {
            acc =
                acc + RationalPoly::q_pow_minus_one(e).scale(&BigRational::from_integer(mu.into()));
        }
    }
    acc.scale(&BigRational::new(1.into(), BigInt::from(d)))
}

/// A multiset of `(orbit degree, partition)` pairs, kept sorted.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GLType {
    assignments: Vec<(usize, Partition)>,
}

impl GLType {
    pub fn new(mut assignments: Vec<(usize, Partition)>) -> Self {
        assert!(
            assignments.iter().all(|(d, l)| *d >= 1 && !l.is_empty()),
            "type entries need a positive degree and a nonempty partition"
        );
        assignments.sort();
        GLType { assignments }
    }

    pub fn assignments(&self) -> &[(usize, Partition)] {
        &self.assignments
    }

    pub fn weight(&self) -> usize {
        self.assignments.iter().map(|(d, l)| d * l.size()).sum()
    }
}

impl fmt::Debug for GLType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set()
            .entries(self.assignments.iter().map(|(d, l)| (d, l)))
            .finish()
    }
}

/// Every type of weight `n`, each exactly once.
///
/// Pairs are ordered by degree ascending, then partition size descending,
/// then reverse lexicographically; types are listed as nondecreasing
/// sequences of pairs in lexicographic order. `n = 0` yields the empty type.
pub fn enumerate_types(n: usize) -> Vec<GLType> {
    let mut atoms: Vec<(usize, Partition)> = Vec::new();
    for d in 1..=n {
        for size in (1..=n / d).rev() {
            for lambda in partitions(size) {
                atoms.push((d, lambda));
            }
        }
    }
    fn rec(
        atoms: &[(usize, Partition)],
        start: usize,
        rem: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<GLType>,
    ) {
        if rem == 0 {
            out.push(GLType::new(cur.iter().map(|&i| atoms[i].clone()).collect()));
            return;
        }
        for i in start..atoms.len() {
            let w = atoms[i].0 * atoms[i].1.size();
            if w <= rem {
                cur.push(i);
                rec(atoms, i, rem - w, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(&atoms, 0, n, &mut Vec::new(), &mut out);
    out
}

/// Common degree of the irreducible characters of type `t`.
pub fn type_degree(t: &GLType, n: usize) -> Result<DimensionPoly, GreensError> {
    let weight = t.weight();
    if weight != n {
        return Err(GreensError::WeightMismatch { weight, n });
    }
    let psi: RationalPoly = (1..=n).map(RationalPoly::q_pow_minus_one).product();
    let q_exp: usize = t.assignments.iter().map(|(d, l)| d * l.n_stat()).sum();
    let numerator = &psi * &RationalPoly::q_pow(q_exp);
    let denominator: RationalPoly = t
        .assignments
        .iter()
        .flat_map(|(d, l)| l.hooks().into_iter().map(move |h| d * h))
        .map(RationalPoly::q_pow_minus_one)
        .product();
    let quotient = numerator.div_exact(&denominator)?;
    quotient
        .to_integer()
        .ok_or_else(|| GreensError::NonIntegralDegree(quotient.to_string()))
}

/// Number of irreducible characters of type `t`.
pub fn type_count(t: &GLType) -> RationalPoly {
    // degree -> (partition -> repetitions)
    let mut by_degree: BTreeMap<usize, BTreeMap<&Partition, usize>> = BTreeMap::new();
    for (d, l) in &t.assignments {
        *by_degree.entry(*d).or_default().entry(l).or_default() += 1;
    }
    let mut acc = RationalPoly::one();
    for (d, reps) in by_degree {
        let orbits = necklace_count(d);
        let total: usize = reps.values().sum();
        // falling factorial m (m-1) ... (m-K+1)
        let falling: RationalPoly = (0..total)
            .map(|i| &orbits - &RationalPoly::constant(BigRational::from_integer(i.into())))
            .product();
        let denom: BigInt = reps
            .values()
            .map(|&k| (1..=k).map(BigInt::from).product::<BigInt>())
            .product();
        acc = &acc * &falling.scale(&BigRational::new(1.into(), denom));
    }
    acc
}

fn compute_gl_zeta(n: usize) -> ZetaPoly {
    let mut z = ZetaPoly::new();
    for t in enumerate_types(n) {
        let degree = type_degree(&t, n)
            .unwrap_or_else(|e| panic!("degree formula failed for type {t:?} of GL_{n}: {e}"));
        z.add_term(degree, type_count(&t));
    }
    z
}

fn gl_cache() -> &'static RwLock<HashMap<usize, ZetaPoly>> {
    static CACHE: OnceLock<RwLock<HashMap<usize, ZetaPoly>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// The zeta polynomial of `GL_n(F_q)`; `gl_zeta(0)` is `D` (trivial group).
///
/// Results are memoized process-wide.
pub fn gl_zeta(n: usize) -> ZetaPoly {
    if let Some(z) = gl_cache().read().expect("gl cache poisoned").get(&n) {
        return z.clone();
    }
    let z = compute_gl_zeta(n);
    gl_cache()
        .write()
        .expect("gl cache poisoned")
        .entry(n)
        .or_insert(z)
        .clone()
}

/// `|GL_n(F_q)| = prod_{k<n} (q^n - q^k)`.
pub fn gl_order(n: usize) -> RationalPoly {
    (0..n)
        .map(|k| &RationalPoly::q_pow(n) - &RationalPoly::q_pow(k))
        .product()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(p: &[usize]) -> Partition {
        Partition::new(p.to_vec())
    }

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

    fn half(p: RationalPoly) -> RationalPoly {
        p.scale(&BigRational::new(1.into(), 2.into()))
    }

    #[test]
    fn partition_counts() {
        assert_eq!(partitions(4).len(), 5);
        assert_eq!(partitions(1), vec![part(&[1])]);
        assert_eq!(partitions(0), vec![Partition::default()]);
        let p4: Vec<_> = partitions(4)
            .into_iter()
            .map(|p| p.parts().to_vec())
            .collect();
        assert_eq!(
            p4,
            vec![
                vec![4],
                vec![3, 1],
                vec![2, 2],
                vec![2, 1, 1],
                vec![1, 1, 1, 1]
            ]
        );
        // p(10) = 42
        assert_eq!(partitions(10).len(), 42);
    }

    #[test]
    fn stats_examples() {
        assert_eq!(partition_stats(&part(&[2])), (vec![2, 1], 0));
        assert_eq!(partition_stats(&part(&[1, 1])), (vec![2, 1], 1));
        assert_eq!(partition_stats(&part(&[2, 1])), (vec![3, 1, 1], 1));
        assert_eq!(part(&[3, 1]).conjugate(), part(&[2, 1, 1]));
    }

    #[test]
    fn mobius_values() {
        let mu: Vec<i64> = (1..=12).map(mobius).collect();
        assert_eq!(mu, vec![1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0]);
    }

    /// Orbits of `x -> x^q` of exact size `d` on `Z/(q^d - 1)`, which is the
    /// character group of the multiplicative group of `F_{q^d}`.
    fn brute_force_orbits(q: u64, d: u32) -> u64 {
        let m = q.pow(d) - 1;
        let mut seen = vec![false; m as usize];
        let mut count = 0;
        for x in 0..m {
            if seen[x as usize] {
                continue;
            }
            let mut y = x;
            let mut size = 0;
            loop {
                seen[y as usize] = true;
                size += 1;
                y = y * q % m;
                if y == x {
                    break;
                }
            }
            if size == d {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn necklace_examples() {
        assert_eq!(necklace_count(1), rp(&[-1, 1]));
        assert_eq!(necklace_count(2), half(rp(&[0, -1, 1])));
        assert_eq!(
            necklace_count(3),
            rp(&[0, -1, 0, 1]).scale(&BigRational::new(1.into(), 3.into()))
        );
        for (q, d) in [(2, 2), (3, 2), (2, 3), (3, 3), (2, 4), (5, 2), (2, 6)] {
            let formula = necklace_count(d as usize).eval_int(&q.into());
            assert_eq!(
                formula,
                BigRational::from_integer(brute_force_orbits(q, d).into()),
                "q={q} d={d}"
            );
        }
    }

    #[test]
    fn type_enumeration() {
        assert_eq!(enumerate_types(1).len(), 1);
        let t2 = enumerate_types(2);
        assert_eq!(
            t2,
            vec![
                GLType::new(vec![(1, part(&[2]))]),
                GLType::new(vec![(1, part(&[1, 1]))]),
                GLType::new(vec![(1, part(&[1])), (1, part(&[1]))]),
                GLType::new(vec![(2, part(&[1]))]),
            ]
        );
        assert_eq!(enumerate_types(3).len(), 8);
        for n in 0..=6 {
            let types = enumerate_types(n);
            let mut sorted = types.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted.len(), types.len());
            assert!(types.iter().all(|t| t.weight() == n));
        }
    }

    #[test]
    fn degree_examples() {
        let steinberg = GLType::new(vec![(1, part(&[1, 1]))]);
        assert_eq!(type_degree(&steinberg, 2).unwrap(), dp(&[0, 1]));
        let cuspidal = GLType::new(vec![(2, part(&[1]))]);
        assert_eq!(type_degree(&cuspidal, 2).unwrap(), dp(&[-1, 1]));
        let principal = GLType::new(vec![(1, part(&[1])), (1, part(&[1]))]);
        assert_eq!(type_degree(&principal, 2).unwrap(), dp(&[1, 1]));
        assert_eq!(
            type_degree(&principal, 3),
            Err(GreensError::WeightMismatch { weight: 2, n: 3 })
        );
    }

    #[test]
    fn count_examples() {
        assert_eq!(
            type_count(&GLType::new(vec![(1, part(&[2]))])),
            rp(&[-1, 1])
        );
        assert_eq!(
            type_count(&GLType::new(vec![(2, part(&[1]))])),
            half(rp(&[0, -1, 1]))
        );
        assert_eq!(
            type_count(&GLType::new(vec![(1, part(&[1])), (1, part(&[1]))])),
            half(rp(&[-1, 1]) * rp(&[-2, 1]))
        );
        // distinct partitions on the same degree: ordered choice of 2 orbits
        assert_eq!(
            type_count(&GLType::new(vec![(1, part(&[1])), (1, part(&[1, 1]))])),
            rp(&[-1, 1]) * rp(&[-2, 1])
        );
    }

    #[test]
    fn gl_zeta_small() {
        assert_eq!(gl_zeta(0), ZetaPoly::trivial());
        assert_eq!(
            gl_zeta(1),
            ZetaPoly::single(DimensionPoly::one(), rp(&[-1, 1]))
        );
        assert_eq!(gl_zeta(3).count(), rp(&[0, -1, 0, 1]));
        assert_eq!(gl_zeta(2).count(), rp(&[-1, 0, 1]));
    }

    #[test]
    fn gl_moment_identity() {
        for n in 0..=6 {
            assert_eq!(gl_zeta(n).second_moment(), gl_order(n), "n = {n}");
        }
    }

    #[test]
    fn class_count_integrality() {
        for n in 1..=5 {
            for q in [2, 3, 4] {
                let total: RationalPoly = enumerate_types(n).iter().map(type_count).sum();
                let v = total.eval_int(&q.into());
                assert!(v.is_integer() && v >= BigRational::from_integer(0.into()));
            }
        }
    }
}
