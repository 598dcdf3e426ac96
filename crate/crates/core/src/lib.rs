//! Exact representation zeta polynomials for the finite groups
//! `G_(l,1^n) = Aut(o_l + o_1^n)` and the auxiliary families `GL_n(F_q)`,
//! `P_n`, `T_n` and `(F_q^n x F_q^n) : GL_n(F_q)`, together with a
//! brute-force character-degree oracle over explicit finite groups.

pub mod greens;
pub mod io;
pub mod oracle;
pub mod poly;
pub mod towers;
pub mod zeta;

use num_bigint::BigInt;
use num_rational::BigRational;

/// Polynomial in `q` with exact rational coefficients.
pub type RationalPoly = poly::Poly<BigRational>;
/// Polynomial in `q` with integer coefficients.
pub type DimensionPoly = poly::Poly<BigInt>;

pub use greens::{gl_order, gl_zeta, GLType, Partition};
pub use io::FormatError;
pub use oracle::{build_group, compare_with_formula, dixon_degrees, OracleError};
pub use poly::{Poly, PolyError};
pub use towers::{family_zeta, g_zeta, order_poly, p_zeta, sd_zeta, t_zeta, FamilyId, TowerError};
pub use zeta::{DimensionMultiset, ZetaError, ZetaPoly};
