//! Finite local rings `o_l = o / p^l` in their two classical shapes:
//! `Z/p^l` (mixed characteristic) and `F_p[t]/t^l` (equal characteristic).
//!
//! Elements are encoded as integers in `0..p^l`. For `Z/p^l` the code is the
//! residue itself; for `F_p[t]/t^l` it is `sum c_i p^i` with `c_i` the
//! coefficient of `t^i`. In both cases a code below `p` is a constant that
//! reduces to itself modulo the maximal ideal.

use std::fmt;
use std::str::FromStr;

use super::OracleError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RingKind {
    /// `Z / p^l`.
    IntegersMod,
    /// `F_p[t] / t^l`.
    TruncatedPoly,
}

impl RingKind {
    pub fn tag(self) -> &'static str {
        match self {
            RingKind::IntegersMod => "zmod",
            RingKind::TruncatedPoly => "fpt",
        }
    }
}

impl fmt::Display for RingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for RingKind {
    type Err = OracleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "zmod" | "integers" | "integers-mod" => Ok(RingKind::IntegersMod),
            "fpt" | "poly" | "truncated" | "truncated-polynomials" => Ok(RingKind::TruncatedPoly),
            other => Err(OracleError::UnknownRingKind(other.to_string())),
        }
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Largest ring the oracle will build; codes must fit in `u16`.
pub const MAX_RING_SIZE: u32 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueRing {
    p: u32,
    ell: u32,
    kind: RingKind,
    size: u32,
}

impl ResidueRing {
    pub fn new(p: u32, ell: u32, kind: RingKind) -> Result<Self, OracleError> {
        if !is_prime(p as u64) {
            return Err(OracleError::InvalidPrime(p));
        }
        if ell == 0 {
            return Err(OracleError::InvalidLength);
        }
        let size = (p as u64)
            .checked_pow(ell)
            .filter(|&s| s <= MAX_RING_SIZE as u64);
        let size = size.ok_or(OracleError::RingTooLarge { p, ell })? as u32;
        Ok(ResidueRing { p, ell, kind, size })
    }

    /// The residue field `F_p`.
    pub fn field(p: u32) -> Result<Self, OracleError> {
        Self::new(p, 1, RingKind::IntegersMod)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn kind(&self) -> RingKind {
        self.kind
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn unit_count(&self) -> u32 {
        self.size / self.p * (self.p - 1)
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.size
    }

    pub fn units(&self) -> impl Iterator<Item = u32> + '_ {
        self.elements().filter(|&x| self.is_unit(x))
    }

    pub fn is_unit(&self, x: u32) -> bool {
        self.reduce(x) != 0
    }

    /// Image in the residue field, as a code in `0..p`.
    pub fn reduce(&self, x: u32) -> u32 {
        x % self.p
    }

    /// Constant lift of a residue-field element.
    pub fn lift(&self, a: u32) -> u32 {
        debug_assert!(a < self.p);
        a
    }

    /// Generator of `p^(l-1)`, the minimal nonzero ideal.
    pub fn socle_generator(&self) -> u32 {
        self.size / self.p
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        match self.kind {
            RingKind::IntegersMod => (a + b) % self.size,
            RingKind::TruncatedPoly => self.digitwise(a, b, |x, y| (x + y) % self.p),
        }
    }

    pub fn neg(&self, a: u32) -> u32 {
        match self.kind {
            RingKind::IntegersMod => (self.size - a) % self.size,
            RingKind::TruncatedPoly => self.digitwise(a, 0, |x, _| (self.p - x) % self.p),
        }
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match self.kind {
            RingKind::IntegersMod => ((a as u64 * b as u64) % self.size as u64) as u32,
            RingKind::TruncatedPoly => {
                let da = self.digits(a);
                let db = self.digits(b);
                let l = self.ell as usize;
                let mut out = vec![0u32; l];
                for i in 0..l {
                    if da[i] == 0 {
                        continue;
                    }
                    for j in 0..l - i {
                        out[i + j] = (out[i + j] + da[i] * db[j]) % self.p;
                    }
                }
                self.compose_digits(&out)
            }
        }
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1 % self.size;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Inverse of a unit, `None` otherwise.
    pub fn inv(&self, a: u32) -> Option<u32> {
        if !self.is_unit(a) {
            return None;
        }
        Some(self.pow(a, self.unit_count() as u64 - 1))
    }

    fn digits(&self, mut x: u32) -> Vec<u32> {
        (0..self.ell)
            .map(|_| {
                let d = x % self.p;
                x /= self.p;
                d
            })
            .collect()
    }

    fn compose_digits(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn digitwise(&self, a: u32, b: u32, f: impl Fn(u32, u32) -> u32) -> u32 {
        let da = self.digits(a);
        let db = self.digits(b);
        let out: Vec<u32> = da.iter().zip(&db).map(|(&x, &y)| f(x, y)).collect();
        self.compose_digits(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_sizes() {
        let z4 = ResidueRing::new(2, 2, RingKind::IntegersMod).unwrap();
        assert_eq!((z4.size(), z4.units().count()), (4, 2));
        let f2t = ResidueRing::new(2, 2, RingKind::TruncatedPoly).unwrap();
        assert_eq!((f2t.size(), f2t.units().count()), (4, 2));
        // characteristic 2: 1 + 1 = 0
        assert_eq!(f2t.add(1, 1), 0);
        assert_eq!(z4.add(1, 1), 2);
        for kind in [RingKind::IntegersMod, RingKind::TruncatedPoly] {
            let f3 = ResidueRing::new(3, 1, kind).unwrap();
            assert_eq!(f3.size(), 3);
            assert!(f3.units().all(|u| f3.mul(u, f3.inv(u).unwrap()) == 1));
        }
    }

    #[test]
    fn invalid_inputs() {
        assert_eq!(ResidueRing::field(4), Err(OracleError::InvalidPrime(4)));
        assert_eq!(ResidueRing::field(1), Err(OracleError::InvalidPrime(1)));
        assert!(ResidueRing::new(2, 40, RingKind::IntegersMod).is_err());
    }

    #[test]
    fn ring_axioms_exhaustive() {
        for (p, l) in [(2, 3), (3, 2), (5, 2), (2, 4)] {
            for kind in [RingKind::IntegersMod, RingKind::TruncatedPoly] {
                let r = ResidueRing::new(p, l, kind).unwrap();
                assert_eq!(r.units().count() as u32, r.unit_count());
                for a in r.elements() {
                    assert_eq!(r.add(a, r.neg(a)), 0);
                    if let Some(ai) = r.inv(a) {
                        assert_eq!(r.mul(a, ai), 1);
                    }
                    for b in r.elements() {
                        assert_eq!(r.mul(a, b), r.mul(b, a));
                        assert_eq!(r.reduce(r.mul(a, b)), (r.reduce(a) * r.reduce(b)) % p);
                        assert_eq!(r.reduce(r.add(a, b)), (r.reduce(a) + r.reduce(b)) % p);
                        for c in [0, 1, r.size() - 1, r.socle_generator()] {
                            assert_eq!(r.mul(a, r.add(b, c)), r.add(r.mul(a, b), r.mul(a, c)));
                            assert_eq!(r.mul(r.mul(a, b), c), r.mul(a, r.mul(b, c)));
                        }
                    }
                }
                // the socle is killed by the maximal ideal
                let s = r.socle_generator();
                assert!(r
                    .elements()
                    .filter(|&x| !r.is_unit(x))
                    .all(|x| r.mul(s, x) == 0));
            }
        }
    }

    #[test]
    fn kinds_differ_multiplicatively() {
        // Z/4 has a unit of order 2 that is -1 = 3; F_2[t]/t^2 has 1 + t, also
        // of order 2, but Z/8 vs F_2[t]/t^3 differ: (1+t)^2 = 1 + t^2 has order
        // 2 while every unit of Z/8 squares to 1.
        let z8 = ResidueRing::new(2, 3, RingKind::IntegersMod).unwrap();
        let f2t3 = ResidueRing::new(2, 3, RingKind::TruncatedPoly).unwrap();
        assert!(z8.units().all(|u| z8.mul(u, u) == 1));
        assert!(!f2t3.units().all(|u| f2t3.mul(u, u) == 1));
    }
}
