//! Representation zeta polynomials `R_G(D) = sum over Irr(G) of D^{dim rho}`,
//! with dimensions and multiplicities kept symbolic in `q`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::{DimensionPoly, RationalPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZetaError {
    #[error("dimension substitution by the zero polynomial")]
    ZeroExponent,
    #[error("multiplicity {mult} of D^({dim}) is not an integer at q = {q}")]
    NonIntegralMultiplicity {
        dim: String,
        mult: String,
        q: BigInt,
    },
    #[error("multiplicity {mult} of D^({dim}) is negative at q = {q}")]
    NegativeMultiplicity {
        dim: String,
        mult: String,
        q: BigInt,
    },
    #[error("dimension {dim} evaluates to {value} at q = {q}")]
    NonPositiveDimension {
        dim: String,
        value: BigInt,
        q: BigInt,
    },
}

/// A finite sum `sum_i m_i(q) D^{d_i(q)}`.
///
/// Keys are distinct canonical dimension polynomials and no stored
/// multiplicity is zero. Two keys that merely coincide at a particular `q`
/// stay separate; they merge only in [`ZetaPoly::eval`]. Iteration follows
/// the canonical order on [`DimensionPoly`]: degree, then coefficients from
/// the constant term up.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct ZetaPoly {
    terms: BTreeMap<DimensionPoly, RationalPoly>,
}

impl ZetaPoly {
    pub fn new() -> Self {
        Self::default()
    }

    /// `D`, the zeta polynomial of the trivial group.
    pub fn trivial() -> Self {
        Self::single(DimensionPoly::one(), RationalPoly::one())
    }

    pub fn single(dim: DimensionPoly, mult: RationalPoly) -> Self {
        let mut z = Self::new();
        z.add_term(dim, mult);
        z
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (DimensionPoly, RationalPoly)>) -> Self {
        let mut z = Self::new();
        for (d, m) in terms {
            z.add_term(d, m);
        }
        z
    }

    /// Adds `mult * D^dim`, merging with an existing equal key.
    pub fn add_term(&mut self, dim: DimensionPoly, mult: RationalPoly) {
        if mult.is_zero() {
            return;
        }
        match self.terms.get_mut(&dim) {
            Some(slot) => {
                *slot += &mult;
                if slot.is_zero() {
                    self.terms.remove(&dim);
                }
            }
            None => {
                self.terms.insert(dim, mult);
            }
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DimensionPoly, &RationalPoly)> {
        self.terms.iter()
    }

    pub fn multiplicity(&self, dim: &DimensionPoly) -> Option<&RationalPoly> {
        self.terms.get(dim)
    }

    pub fn add(&self, other: &ZetaPoly) -> ZetaPoly {
        let mut out = self.clone();
        for (d, m) in other.terms() {
            out.add_term(d.clone(), m.clone());
        }
        out
    }

    /// Multiplies every multiplicity by `c`.
    pub fn scale(&self, c: &RationalPoly) -> ZetaPoly {
        if c.is_zero() {
            return ZetaPoly::new();
        }
        ZetaPoly {
            terms: self.terms.iter().map(|(d, m)| (d.clone(), m * c)).collect(),
        }
    }

    /// The substitution `D -> D^e`: every dimension is multiplied by `e`.
    pub fn subst(&self, e: &DimensionPoly) -> Result<ZetaPoly, ZetaError> {
        if e.is_zero() {
            return Err(ZetaError::ZeroExponent);
        }
        Ok(ZetaPoly::from_terms(
            self.terms.iter().map(|(d, m)| (d * e, m.clone())),
        ))
    }

    /// Number of irreducible representations, i.e. of conjugacy classes.
    pub fn count(&self) -> RationalPoly {
        self.terms.values().cloned().sum()
    }

    /// `sum m_i d_i^2`, which must equal the group order.
    pub fn second_moment(&self) -> RationalPoly {
        self.terms
            .iter()
            .map(|(d, m)| {
                let d = d.to_rational();
                m * &(&d * &d)
            })
            .sum()
    }

    /// Largest degree among the dimension polynomials.
    pub fn max_dimension_degree(&self) -> Option<usize> {
        self.terms.keys().filter_map(|d| d.degree()).max()
    }

    /// Specialises to `q = q0`, merging dimensions that coincide numerically.
    pub fn eval(&self, q0: &BigInt) -> Result<DimensionMultiset, ZetaError> {
        let qr = BigRational::from_integer(q0.clone());
        let mut out = DimensionMultiset::new();
        for (d, m) in &self.terms {
            let dim = d.eval(q0);
            if !dim.is_positive() {
                return Err(ZetaError::NonPositiveDimension {
                    dim: d.to_string(),
                    value: dim,
                    q: q0.clone(),
                });
            }
            let count = m.eval(&qr);
            if !count.is_integer() {
                return Err(ZetaError::NonIntegralMultiplicity {
                    dim: d.to_string(),
                    mult: m.to_string(),
                    q: q0.clone(),
                });
            }
            let count = count.to_integer();
            if count.is_negative() {
                return Err(ZetaError::NegativeMultiplicity {
                    dim: d.to_string(),
                    mult: m.to_string(),
                    q: q0.clone(),
                });
            }
            // both checked positive / nonnegative above
            out.insert(dim.magnitude().clone(), count.magnitude().clone());
        }
        Ok(out)
    }
}

impl fmt::Debug for ZetaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ZetaPoly {{ {self} }}")
    }
}

/// `(m)D^(d) + ...` in canonical order; `0` when empty.
impl fmt::Display for ZetaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "0");
        }
        for (i, (d, m)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({m})D^({d})")?;
        }
        Ok(())
    }
}

/// Irreducible degrees of a concrete group: dimension -> number of
/// irreducibles of that dimension. Counts are strictly positive.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DimensionMultiset {
    entries: BTreeMap<BigUint, BigUint>,
}

impl DimensionMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, dim: BigUint, count: BigUint) {
        if count.is_zero() {
            return;
        }
        *self.entries.entry(dim).or_default() += count;
    }

    pub fn merge(&self, other: &DimensionMultiset) -> DimensionMultiset {
        let mut out = self.clone();
        for (d, c) in other.iter() {
            out.insert(d.clone(), c.clone());
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BigUint, &BigUint)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, dim: u64) -> Option<&BigUint> {
        self.entries.get(&BigUint::from(dim))
    }

    /// Total number of irreducibles.
    pub fn total(&self) -> BigUint {
        self.entries.values().sum()
    }

    /// `sum count * dim^2`.
    pub fn sum_of_squares(&self) -> BigUint {
        self.entries.iter().map(|(d, c)| c * d * d).sum()
    }
}

impl<D: Into<BigUint>, C: Into<BigUint>> FromIterator<(D, C)> for DimensionMultiset {
    fn from_iter<I: IntoIterator<Item = (D, C)>>(iter: I) -> Self {
        let mut m = Self::new();
        for (d, c) in iter {
            m.insert(d.into(), c.into());
        }
        m
    }
}
