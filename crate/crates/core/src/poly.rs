//! Dense univariate polynomials in the residue cardinality `q`.
//!
//! [`Poly`] is generic over its coefficient ring. The crate works almost
//! exclusively with two instantiations, re-exported at the crate root:
//! [`RationalPoly`](crate::RationalPoly) (coefficients in `BigRational`) for
//! multiplicities and group orders, and [`DimensionPoly`](crate::DimensionPoly)
//! (coefficients in `BigInt`) for representation dimensions.
//!
//! Coefficients are stored in ascending order of exponent and trailing zeros
//! are always stripped, so structural equality is polynomial equality.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("polynomial division leaves a nonzero remainder")]
    NonExactDivision,
}

/// Coefficient ring for [`Poly`].
pub trait Coeff:
    Clone
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> Coeff for T where
    T: Clone
        + PartialEq
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
{
}

/// Coefficient rings in which every nonzero element is invertible.
///
/// Implemented explicitly so that `BigInt`, whose `Div` truncates, does not
/// qualify.
pub trait FieldCoeff: Coeff + Div<Output = Self> + FromPrimitive {}

impl FieldCoeff for BigRational {}
impl FieldCoeff for f64 {}
impl FieldCoeff for f32 {}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Coeff> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// `c * q^k`.
    pub fn monomial(c: T, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![T::zero(); k];
        coeffs.push(c);
        Poly { coeffs }
    }

    /// The indeterminate `q`.
    pub fn q() -> Self {
        Self::monomial(T::one(), 1)
    }

    /// `q^k`.
    pub fn q_pow(k: usize) -> Self {
        Self::monomial(T::one(), k)
    }

    /// `q^k - 1`.
    pub fn q_pow_minus_one(k: usize) -> Self {
        Self::q_pow(k) - Self::one()
    }

    /// `q + c`.
    pub fn linear(c: T) -> Self {
        Self::new(vec![c, T::one()])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    /// Returns `self(q^d)`.
    ///
    /// # Panics
    ///
    /// Panics if `d == 0`.
    pub fn subst_power(&self, d: usize) -> Self {
        assert!(d >= 1, "subst_power needs a positive exponent");
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![T::zero(); (self.coeffs.len() - 1) * d + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[k * d] = c.clone();
        }
        Self::new(coeffs)
    }

    pub fn map_coeffs<U: Coeff>(&self, f: impl FnMut(&T) -> U) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }
}

impl<T: Coeff + FromPrimitive> Poly<T> {
    /// Polynomial with small integer coefficients, ascending.
    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&c| T::from_i64(c).expect("small integer fits the coefficient type"))
                .collect(),
        )
    }

    pub fn from_i64(c: i64) -> Self {
        Self::from_i64s(&[c])
    }
}

impl<T: FieldCoeff> Poly<T> {
    /// Euclidean division, returning `(quotient, remainder)`.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self), PolyError> {
        let lead = divisor.leading_coeff().ok_or(PolyError::DivisionByZero)?;
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![T::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].clone() / lead.clone();
            if c.is_zero() {
                continue;
            }
            for (j, b) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].clone() - c.clone() * b.clone();
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Quotient `c` with `divisor * c == self`, failing loudly otherwise.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self, PolyError> {
        let (q, r) = self.div_rem(divisor)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(PolyError::NonExactDivision)
        }
    }

    /// The falling factorial `m (m-1) ... (m-k+1) / k!`, i.e. the number of
    /// `k`-element subsets of a set of size `m`, as a polynomial.
    pub fn binomial(m: &Self, k: usize) -> Self {
        let mut acc = Self::one();
        for i in 0..k {
            let shift = T::from_usize(i).expect("small integer fits the coefficient type");
            acc = &acc * &(m - &Self::constant(shift));
        }
        let mut fact = T::one();
        for i in 2..=k {
            fact = fact * T::from_usize(i).expect("small integer fits the coefficient type");
        }
        acc.scale(&(T::one() / fact))
    }
}

impl Poly<BigRational> {
    /// Exact value at an integer point.
    pub fn eval_int(&self, q0: &BigInt) -> BigRational {
        self.eval(&BigRational::from_integer(q0.clone()))
    }

    /// Some(integer polynomial) when every coefficient is an integer.
    pub fn to_integer(&self) -> Option<Poly<BigInt>> {
        if self.coeffs.iter().all(|c| c.is_integer()) {
            Some(Poly {
                coeffs: self.coeffs.iter().map(|c| c.to_integer()).collect(),
            })
        } else {
            None
        }
    }
}

impl Poly<BigInt> {
    pub fn to_rational(&self) -> Poly<BigRational> {
        Poly {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        }
    }
}

impl<T: Coeff> From<T> for Poly<T> {
    fn from(c: T) -> Self {
        Self::constant(c)
    }
}

impl<'a, T: Coeff> Add<&'a Poly<T>> for &'a Poly<T> {
    type Output = Poly<T>;

    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c = c.clone() + s.clone();
        }
        Poly::new(coeffs)
    }
}

impl<'a, T: Coeff> Sub<&'a Poly<T>> for &'a Poly<T> {
    type Output = Poly<T>;

    fn sub(self, rhs: &Poly<T>) -> Poly<T> {
        self + &(-rhs)
    }
}

impl<'a, T: Coeff> Mul<&'a Poly<T>> for &'a Poly<T> {
    type Output = Poly<T>;

    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(coeffs)
    }
}

impl<T: Coeff> Neg for &Poly<T> {
    type Output = Poly<T>;

    fn neg(self) -> Poly<T> {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

impl<T: Coeff> Neg for Poly<T> {
    type Output = Poly<T>;

    fn neg(self) -> Poly<T> {
        -&self
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl<T: Coeff> $trait<Poly<T>> for Poly<T> {
            type Output = Poly<T>;
            fn $method(self, rhs: Poly<T>) -> Poly<T> {
                (&self).$method(&rhs)
            }
        }
        impl<T: Coeff> $trait<&Poly<T>> for Poly<T> {
            type Output = Poly<T>;
            fn $method(self, rhs: &Poly<T>) -> Poly<T> {
                (&self).$method(rhs)
            }
        }
        impl<T: Coeff> $trait<Poly<T>> for &Poly<T> {
            type Output = Poly<T>;
            fn $method(self, rhs: Poly<T>) -> Poly<T> {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl<T: Coeff> AddAssign<&Poly<T>> for Poly<T> {
    fn add_assign(&mut self, rhs: &Poly<T>) {
        *self = &*self + rhs;
    }
}

impl<T: Coeff> std::iter::Sum for Poly<T> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| a + b)
    }
}

impl<T: Coeff> std::iter::Product for Poly<T> {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::one(), |a, b| a * b)
    }
}

/// Degree first, then coefficients compared lexicographically from the
/// constant term upwards.
impl<T: Coeff + Ord> Ord for Poly<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl<T: Coeff + Ord> PartialOrd for Poly<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Plain-text rendering, highest power first: `q^2 - 2q + 1`.
impl<T: Coeff + Signed + fmt::Display> fmt::Display for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let show_mag = k == 0 || !mag.is_one();
            if show_mag {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "q")?,
                _ => write!(f, "q^{k}")?,
            }
        }
        Ok(())
    }
}

impl<T: fmt::Debug> fmt::Debug for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Poly").field(&self.coeffs).finish()
    }
}
