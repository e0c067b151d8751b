//! Elliptic surfaces over `P^1` with coefficients in `Q` or a quadratic field.

pub mod field;
pub mod height;
pub mod kodaira;
pub mod parse;
pub mod poly;
pub mod ratfun;
pub mod roots;
pub mod survey;
pub mod weierstrass;

pub use field::Fe;
pub use height::{
    analyze_section, height_from_data, local_contribution, local_pairing, SectionAnalysis,
    SectionData,
};
pub use kodaira::{KodairaFiber, KodairaType};
pub use parse::{parse_fe, parse_ratfun, ParseError};
pub use poly::Poly;
pub use ratfun::RationalFunction;
pub use survey::{
    fiber_survey, kodaira_type, localize_minimal, shioda_tate, torsion_embeds, FiberSurvey,
    LocalModel, Place, ShiodaTate, SurveyEntry,
};
pub use weierstrass::{Invariants, ModelFile, WeierstrassModel};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EllsurfError {
    #[error("discriminant vanishes identically: not an elliptic surface")]
    Singular,
    #[error("coefficient in Q(sqrt {0}) does not belong to the base field Q(sqrt {1})")]
    FieldMismatch(i64, i64),
    #[error("base change by a constant function")]
    ConstantSubstitution,
    #[error("twist by zero")]
    ZeroTwist,
    #[error("model is not in short form y^2 = x^3 + a4 x + a6")]
    NotShort,
    #[error("{0}")]
    NonLinearPlace(String),
    #[error("Euler number sum {0} is neither 12 (rational) nor 24 (K3)")]
    EulerChecksum(u32),
    #[error("point does not satisfy the Weierstrass equation")]
    NotOnCurve,
    #[error("{0}")]
    ComponentAmbiguity(String),
    #[error("{0}")]
    Input(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}
