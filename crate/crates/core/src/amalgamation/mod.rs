//! Forbidden-substructure classes and the amalgamation property.

mod ap;
mod family;

pub use ap::{ap_bound, decide_ap, decide_one_point_diagram, ApOptions, ApVerdict, Diagram};
pub use family::{
    forbidden_family_from_matrix, max_pair_completions, minimal_forbidden_family, minimize_family,
    two_element_types, FamilyLimits, ForbiddenFamily,
};

use crate::error::Result;
use crate::logic::{check_asnp_shape, AsnpParts, ShapeViolation, SnpSentence};

/// The step of [`decide_asnp`] at which a sentence was rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AsnpStage {
    Shape,
    Amalgamation,
}

impl AsnpStage {
    pub fn name(self) -> &'static str {
        match self {
            AsnpStage::Shape => "shape",
            AsnpStage::Amalgamation => "amalgamation",
        }
    }
}

#[derive(Debug, Clone)]
pub struct AsnpVerdict {
    pub in_asnp: bool,
    pub failed: Option<AsnpStage>,
    pub shape_violation: Option<ShapeViolation>,
    pub parts: Option<AsnpParts>,
    /// The minimal family of the existential part.
    pub family: Option<ForbiddenFamily>,
    pub ap: Option<ApVerdict>,
}

/// Decides membership in ASNP: the clause shape, then the amalgamation
/// property of the class described by the existential-only clauses.
pub fn decide_asnp(s: &SnpSentence, family_limits: FamilyLimits, ap_opts: &ApOptions) -> Result<AsnpVerdict> {
    let parts = match check_asnp_shape(s) {
        Ok(p) => p,
        Err(v) => {
            return Ok(AsnpVerdict {
                in_asnp: false,
                failed: Some(AsnpStage::Shape),
                shape_violation: Some(v),
                parts: None,
                family: None,
                ap: None,
            })
        }
    };
    let k = parts.rho_part.iter().map(|c| c.variables().len()).max().unwrap_or(0);
    let family = minimal_forbidden_family(&parts.rho_part, s.exist_sig(), k, family_limits)?;
    let ap = decide_ap(&family, ap_opts)?;
    Ok(AsnpVerdict {
        in_asnp: ap.holds,
        failed: (!ap.holds).then_some(AsnpStage::Amalgamation),
        shape_violation: None,
        parts: Some(parts),
        family: Some(family),
        ap: Some(ap),
    })
}
