//! The fiber-preserving equivalence problem of `y''' = F(x, y, y', y'')`:
//! invariant coframe, structure functions, reduction conditions and the
//! distinguished family of equations.

mod coframe;
mod conditions;
mod family;
mod problem;
mod structure;
mod tau;

use thiserror::Error;

use crate::expr::{Coord, ExprError};
use crate::forms::FormError;

pub use coframe::{invariant_coframe, invariant_coframe_with, CoframeVariant, Theta3Reading};
pub use conditions::{check_einstein_conditions, Condition, ConditionReport};
pub use family::{family_detect, family_invariants, FamilyData, FamilyInvariants, FamilyRejection};
pub use problem::OdeProblem;
pub use structure::{
    expand_differentials, extract_structure_functions, structure_pattern, StructureFunctions,
    COFRAME_NAMES, STRUCTURE_NAMES,
};
pub use tau::{
    appendix_tables, flat_tables, reduced_tables, tau_basis, tau_matrix, verify_appendix,
    verify_appendix_with, AppendixVariant, TableResiduals, TauBasis, TAU_NAMES,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CartanError {
    #[error("F_qq vanishes identically; the equation has no invariant coframe")]
    DegenerateFqq,
    #[error("F depends on {0}, which is not a jet-space coordinate")]
    NotOnJetSpace(Coord),
    #[error("structure equation for d{equation} is violated at ({}, {}): residual {residual}", slot.0, slot.1)]
    InconsistentStructure {
        equation: &'static str,
        slot: (&'static str, &'static str),
        residual: String,
    },
    #[error("not in the distinguished family: {0}")]
    NotInFamily(#[from] FamilyRejection),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Form(#[from] FormError),
}

/// `a..s` of the invariant coframe of `prob`.
pub fn structure_functions(prob: &OdeProblem) -> Result<StructureFunctions, CartanError> {
    extract_structure_functions(&invariant_coframe(prob)?)
}
