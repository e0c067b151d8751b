//! Singular K3 surfaces `X_Q` attached to positive definite binary forms: CM points,
//! Inose pencils, Enriques quotients and the fields of definition involved.

pub mod classify;
pub mod cm;
pub mod inose;
pub mod jfunc;
pub mod report;

pub use classify::{
    base_change_enriques, brauer_example, class_number_one_discriminants, enriques_admissible,
    exception_list, fields_report, kummer_sandwich, Admissibility, BaseChangeVerdict,
    BrauerExample, FieldReport, KummerSandwich, Verdict, EXCEPTION_CAVEAT,
};
pub use cm::{cm_points, CMPoint, CmPoints};
pub use inose::{
    inose_pencil, pencil_row, rational_inose_model, ExtraFibers, InoseCoefficient, InoseData,
};
pub use jfunc::{hilbert_class_poly, j_cm, JValue, DEFAULT_BITS, DEFAULT_TERMS};
pub use report::{enriques_report, FieldClaim, K3EnriquesReport};

use crate::bqf::{BinaryQuadraticForm, BqfError};
use crate::ellsurf::EllsurfError;
use crate::lattice::LatticeError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum K3Error {
    #[error("form {0} is not primitive")]
    Imprimitive(BinaryQuadraticForm),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("insufficient precision: {0}")]
    Precision(String),
    #[error(transparent)]
    Bqf(#[from] BqfError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Ellsurf(#[from] EllsurfError),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}
