//! Exact equivalence between Kirchhoff-Love thin-plate boundary data and 2D
//! linear-elasticity boundary data on a simply connected domain.
//!
//! The crate provides:
//! - the fourth-order tensor algebra and the duality map between plate
//!   stiffness and elastic compliance ([`tensor4`]);
//! - spectral calculus on closed boundary curves ([`curve`]);
//! - the four boundary datasets with gauge normalization and CSV/JSON IO
//!   ([`boundary_data`]);
//! - the boundary-data conversions in both directions ([`transforms`]);
//! - exact polynomial manufactured solutions ([`manufactured`]);
//! - null-Lagrangian verification and the determinant counterexample
//!   ([`nulllag`]);
//! - the Dichotomy-condition classifier ([`dichotomy`]).

pub mod boundary_data;
pub mod curve;
pub mod dichotomy;
pub mod error;
pub mod manufactured;
pub mod nulllag;
pub mod tensor4;
pub mod transforms;

pub use boundary_data::{
    BoundaryDataset, DatasetKind, ElastDirichlet, ElastNeumann, GaugeReport, PlateDirichlet,
    PlateNeumann,
};
pub use curve::{ClosedCurve, CurveDescriptor, CurveShape};
pub use dichotomy::{DichotomyCoeffs, DichotomyReport};
pub use error::{PlateError, Result};
pub use manufactured::{ManufacturedData, PolyField};
pub use tensor4::{IsotropicModuli, Sym2, Tensor4, TensorKind};
