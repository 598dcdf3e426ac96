//! Formula against oracle, per prime and ring kind.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::{json, Value};

use super::{build_group, dixon_degrees, ring_for, OracleError, RingKind};
use crate::io::multiset_to_json;
use crate::towers::{family_zeta, order_poly, FamilyId};
use crate::DimensionMultiset;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingChoice {
    IntegersMod,
    TruncatedPoly,
    Both,
}

impl RingChoice {
    pub fn kinds(self) -> Vec<RingKind> {
        match self {
            RingChoice::IntegersMod => vec![RingKind::IntegersMod],
            RingChoice::TruncatedPoly => vec![RingKind::TruncatedPoly],
            RingChoice::Both => vec![RingKind::IntegersMod, RingKind::TruncatedPoly],
        }
    }
}

impl FromStr for RingChoice {
    type Err = OracleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "both" {
            return Ok(RingChoice::Both);
        }
        Ok(match s.parse::<RingKind>()? {
            RingKind::IntegersMod => RingChoice::IntegersMod,
            RingKind::TruncatedPoly => RingChoice::TruncatedPoly,
        })
    }
}

/// One oracle run against the formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub family: FamilyId,
    pub p: u32,
    /// `None` when the group lives over the residue field, where both kinds
    /// coincide.
    pub kind: Option<RingKind>,
    pub order: u64,
    pub expected_order: BigInt,
    pub classes: usize,
    pub expected_classes: BigInt,
    pub degrees: DimensionMultiset,
    pub formula_degrees: DimensionMultiset,
    pub spot_check: bool,
}

impl OracleReport {
    pub fn degrees_match(&self) -> bool {
        self.degrees == self.formula_degrees
    }

    pub fn order_match(&self) -> bool {
        BigInt::from(self.order) == self.expected_order
    }

    pub fn classes_match(&self) -> bool {
        BigInt::from(self.classes) == self.expected_classes
    }

    pub fn is_match(&self) -> bool {
        self.degrees_match() && self.order_match() && self.classes_match() && self.spot_check
    }

    pub fn to_json(&self) -> Value {
        let params = match self.family.ell() {
            Some(ell) => json!({ "ell": ell, "n": self.family.n() }),
            None => json!({ "n": self.family.n() }),
        };
        json!({
            "family": self.family.tag(),
            "params": params,
            "p": self.p,
            "kind": self.kind.map_or("field", RingKind::tag),
            "order": self.order,
            "classes": self.classes,
            "degrees": multiset_to_json(&self.degrees),
            "formula_degrees": multiset_to_json(&self.formula_degrees),
            "order_match": self.order_match(),
            "classes_match": self.classes_match(),
            "match": self.is_match(),
        })
    }
}

/// All runs for one family at one prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison {
    pub reports: Vec<OracleReport>,
    /// Whether the degree multisets of all ring kinds coincide; `None` if
    /// only one kind was run.
    pub rings_agree: Option<bool>,
}

impl Comparison {
    pub fn is_match(&self) -> bool {
        self.reports.iter().all(OracleReport::is_match) && self.rings_agree != Some(false)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "reports": self.reports.iter().map(OracleReport::to_json).collect::<Vec<_>>(),
            "rings_agree": self.rings_agree,
            "match": self.is_match(),
        })
    }
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} p={} kind={} order={} classes={} match={}",
            self.family,
            self.p,
            self.kind.map_or("field", RingKind::tag),
            self.order,
            self.classes,
            self.is_match()
        )
    }
}

/// Builds the group for `f` at `q = p` over each requested ring kind and
/// compares its degrees with the evaluated zeta polynomial. Ring kinds only
/// matter for `G`; other families are run once over `F_p`.
pub fn compare_with_formula(
    f: FamilyId,
    p: u32,
    choice: RingChoice,
    max_order: u64,
) -> Result<Comparison, OracleError> {
    let f = f.validate()?;
    let q = BigInt::from(p);
    let zeta = family_zeta(f)?;
    let formula_degrees = zeta
        .eval(&q)
        .map_err(|e| OracleError::Inconsistent(e.to_string()))?;
    let expected_classes = exact_integer(zeta.count().eval_int(&q))?;
    let expected_order = exact_integer(order_poly(f)?.eval_int(&q))?;
    let kinds = match f {
        FamilyId::G { .. } => choice.kinds().into_iter().map(Some).collect(),
        _ => vec![None],
    };
    let mut reports = Vec::new();
    for kind in kinds {
        let ring = ring_for(f, p, kind.unwrap_or(RingKind::IntegersMod))?;
        let table = build_group(f, &ring, max_order)?;
        let degrees = dixon_degrees(&table)?;
        reports.push(OracleReport {
            family: f,
            p,
            kind,
            order: table.order(),
            expected_order: expected_order.clone(),
            classes: table.class_count(),
            expected_classes: expected_classes.clone(),
            degrees,
            formula_degrees: formula_degrees.clone(),
            spot_check: table.spot_check_classes(u64::from(p), 100),
        });
    }
    let rings_agree =
        (reports.len() > 1).then(|| reports.windows(2).all(|w| w[0].degrees == w[1].degrees));
    Ok(Comparison {
        reports,
        rings_agree,
    })
}

fn exact_integer(x: num_rational::BigRational) -> Result<BigInt, OracleError> {
    if x.is_integer() {
        Ok(x.to_integer())
    } else {
        Err(OracleError::Inconsistent(format!("{x} is not an integer")))
    }
}
