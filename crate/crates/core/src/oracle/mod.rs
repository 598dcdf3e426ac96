//! Brute-force ground truth: build the groups explicitly, sweep their
//! conjugacy classes and read off the irreducible degrees.

mod compare;
mod dixon;
mod groups;
mod ring;
mod table;

use thiserror::Error;

pub use compare::{compare_with_formula, Comparison, OracleReport, RingChoice};
pub use dixon::{dixon_degrees, dixon_prime, exponent};
pub use groups::{
    Elem, ElementaryAbelian, FiniteGroup, LocalAutGroup, MatrixGroup, MatrixShape, SemidirectGroup,
};
pub use ring::{ResidueRing, RingKind};
pub use table::GroupTable;

use crate::towers::{order_poly, FamilyId, TowerError};

/// Default bound on the order of groups the oracle will enumerate.
pub const DEFAULT_MAX_ORDER: u64 = 500_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{0} is not a prime")]
    InvalidPrime(u32),
    #[error("ring length must be at least 1")]
    InvalidLength,
    #[error("ring of order {p}^{ell} is too large")]
    RingTooLarge { p: u32, ell: u32 },
    #[error("unknown ring kind {0:?} (expected zmod or fpt)")]
    UnknownRingKind(String),
    #[error("{family} over a ring of length {got} (expected {expected})")]
    RingMismatch {
        family: String,
        expected: u32,
        got: u32,
    },
    #[error("group order {order} exceeds the cap {cap}")]
    OrderCapExceeded { order: String, cap: u64 },
    #[error("no prime r = 1 mod {exponent} below {bound}")]
    NoSuitablePrime { exponent: u64, bound: u64 },
    #[error("eigenvector computation failed: {0}")]
    EigenvectorFailure(String),
    #[error("inconsistent group: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Family(#[from] TowerError),
}

pub type DynGroup = Box<dyn FiniteGroup<Elem = Elem> + Send + Sync>;

/// The ring a family is built over: `o_l` for `G`, the residue field otherwise.
pub fn ring_for(f: FamilyId, p: u32, kind: RingKind) -> Result<ResidueRing, OracleError> {
    match f {
        FamilyId::G { ell, .. } => ResidueRing::new(p, ell as u32, kind),
        _ => ResidueRing::new(p, 1, kind),
    }
}

/// Constructs the concrete group for `f` over `ring`, refusing anything
/// whose order exceeds `max_order`.
pub fn build_group(
    f: FamilyId,
    ring: &ResidueRing,
    max_order: u64,
) -> Result<GroupTable<DynGroup>, OracleError> {
    let f = f.validate()?;
    let expected_ell = f.ell().unwrap_or(1) as u32;
    if ring.ell() != expected_ell {
        return Err(OracleError::RingMismatch {
            family: f.to_string(),
            expected: expected_ell,
            got: ring.ell(),
        });
    }
    let order = order_poly(f)?.eval_int(&ring.p().into());
    if order > num_rational::BigRational::from_integer(max_order.into()) {
        return Err(OracleError::OrderCapExceeded {
            order: order.to_string(),
            cap: max_order,
        });
    }
    let p = ring.p();
    let group: DynGroup = match f {
        FamilyId::Gl { n } => Box::new(MatrixGroup::new(MatrixShape::General, n, p)),
        FamilyId::P { n } => Box::new(MatrixGroup::new(MatrixShape::FirstRowFixed, n, p)),
        FamilyId::T { n } => Box::new(MatrixGroup::new(MatrixShape::TwoFixed, n, p)),
        FamilyId::Sd { n } => Box::new(SemidirectGroup::new(n, p)),
        FamilyId::G { n, .. } => Box::new(LocalAutGroup::new(ring.clone(), n)),
    };
    GroupTable::build(group)
}
