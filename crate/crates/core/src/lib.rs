//! Exact arithmetic invariants of singular K3 surfaces and their Enriques quotients.
//!
//! The crate is organised in four layers:
//!
//! - [`bqf`]: positive-definite binary quadratic forms, Gauss composition, class groups.
//! - [`lattice`]: even integral lattices, Smith normal form and discriminant forms.
//! - [`ellsurf`]: elliptic surfaces over `K(t)`, Kodaira fibres, base change, heights.
//! - [`k3enriques`]: CM data, Inose pencils and the Enriques classification layer.

pub mod bqf;
pub mod ellsurf;
pub mod k3enriques;
pub mod lattice;

mod intser;

pub use bqf::BinaryQuadraticForm;
