//! Curvature of the split-signature metrics on the four-dimensional quotient
//! `M`, in coordinate tensor language and in the moving-frame language of the
//! bundle `P`.

mod connection;
mod metric;
mod petrov;
mod tensors;
mod upoly;

use thiserror::Error;

use crate::cartan::{CartanError, TauBasis, TAU_NAMES};
use crate::expr::{Coord, ExprError, Expression};
use crate::forms::{DifferentialForm, FormError};

pub use connection::{
    cartan_connection_so22, connection_and_curvature_on_p, family_frame, CartanConnection,
    ConnectionReport, FamilyFrame,
};
pub use metric::{metric_from_family, FamilyMetric, Metric4, Signature, M_COORDS};
pub use petrov::{classify3, hodge_star, petrov_classification, PetrovType, WeylOperator, PAIRS};
pub use tensors::{curvature_tensors, einstein_residual, CurvatureTensors};
pub use upoly::UPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurvatureError {
    #[error("metric must be 4x4, got {0}x{1}")]
    WrongShape(usize, usize),
    #[error("metric is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("metric component depends on {0}, which is not one of x, y, z, t")]
    ForeignDependency(Coord),
    #[error("metric is degenerate")]
    DegenerateMetric,
    #[error("metric is singular at the sample point")]
    SingularAtPoint,
    #[error("|det g| is not the square of a rational at the sample point")]
    IrrationalVolume,
    #[error("Hodge star does not square to the identity on 2-forms")]
    StarNotInvolution,
    #[error("Weyl operator does not preserve the eigenspaces of the Hodge star")]
    StarNotPreserved,
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Cartan(#[from] CartanError),
}

/// A named identity and the residuals whose vanishing establishes it.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub residuals: Vec<(String, Expression)>,
}

impl Check {
    pub fn new(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            residuals: Vec::new(),
        }
    }

    pub fn push(&mut self, label: impl Into<String>, value: Expression) {
        self.residuals.push((label.into(), value));
    }

    pub fn holds(&self) -> bool {
        self.residuals.iter().all(|(_, r)| r.is_zero())
    }

    /// Residuals that fail to vanish.
    pub fn failures(&self) -> impl Iterator<Item = &(String, Expression)> {
        self.residuals.iter().filter(|(_, r)| !r.is_zero())
    }

    /// Record a 2-form residual through its coefficients in `basis`; a
    /// vanishing form leaves a single zero entry so the check is never empty.
    fn push_two_form(
        &mut self,
        label: &str,
        form: &DifferentialForm,
        basis: &TauBasis,
    ) -> Result<(), FormError> {
        let c = basis.coframe().expand_two_form(form)?;
        let before = self.residuals.len();
        for (i, j, v) in c.iter() {
            if !v.is_zero() {
                self.push(
                    format!("{label}[{}^{}]", TAU_NAMES[i], TAU_NAMES[j]),
                    v.clone(),
                );
            }
        }
        if self.residuals.len() == before {
            self.push(label, Expression::zero());
        }
        Ok(())
    }

    fn push_one_form(
        &mut self,
        label: &str,
        form: &DifferentialForm,
        basis: &TauBasis,
    ) -> Result<(), FormError> {
        let c = basis.coframe().expand_one_form(form)?;
        let before = self.residuals.len();
        for (i, v) in c.iter().enumerate() {
            if !v.is_zero() {
                self.push(format!("{label}[{}]", TAU_NAMES[i]), v.clone());
            }
        }
        if self.residuals.len() == before {
            self.push(label, Expression::zero());
        }
        Ok(())
    }
}
