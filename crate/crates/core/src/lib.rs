//! Exact computations with iterated cobar constructions.
//!
//! The crate builds `ΩC` and `Ω²C` for 1-connected dg-coalgebras over `F2` or `Q`, equips
//! `Ω²C` with the cup-1 product, `E_{1,2}`, the bracket, the restriction and the
//! Connes–Moscovici operator, computes homology with its induced structure, and compares it
//! with independently enumerated free models.

pub mod cobar;
pub mod dgc;
pub mod error;
pub mod field;
pub mod free_model;
pub mod graded;
pub mod hga;
pub mod hirsch;
pub mod homology_ring;
pub mod lin;
pub mod linalg;
pub mod transfer;

pub use cobar::{cobar, double_cobar, Coalgebra, Cobar, DoubleCobar, HopfReport};
pub use dgc::{detect_field, double_suspension, homology_coalgebra, parse_coalgebra, DgCoalgebra, FieldTag, GenId};
pub use error::{Error, Result};
pub use field::{Field, F2, Q};
pub use free_model::{hilbert_series, FreeModel, SeriesComparison};
pub use graded::{koszul_apply, shift, validate_complex, ChainComplex, GradedMap, GradedSpace, Word};
pub use hga::{check_delta_cm, check_hga_identities, Hga, IdentityRow};
pub use hirsch::{build_nabla_e, check_hirsch, parse_family, HirschReport, TwistingFamily};
pub use homology_ring::{verify_bv, verify_freeness, BvReport, Class, FreenessReport, HomologyAlgebra};
pub use lin::Lin;
pub use linalg::{homology, kernel_basis, rref, Homology, SparseMatrix, SparseVec};
pub use transfer::{build_contraction, transfer_ainfty, verify_formality, Contraction, FormalityReport, Transfer};
