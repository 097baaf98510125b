//! Exact construction and certification of Campana rational curves.
//!
//! The crate covers toric fans and their contact-order dictionary, Campana
//! multiplicity structures, explicit rational curves in projective space with
//! certified tangency, and orbifold covers of the projective line with
//! certified branch data. All certification paths use exact arithmetic.

pub mod campana;
pub mod curve;
pub mod error;
pub mod fan;
pub mod field;
pub mod lattice;
pub mod linalg;
pub mod p1;
pub mod poly;

pub use campana::{CampanaJet, CampanaStructure, Multiplicity};
pub use curve::{build_curve, evaluate, verify_tangency, RationalCurvePd};
pub use error::{Error, Result};
pub use fan::{projective_space_fan, ContactCollection, ContactOrder, DivisorDegrees, Fan};
pub use field::{Characteristic, Field, PrimeField, Rationals};
pub use lattice::{
    has_p_torsion, quotient_torsion, smith_normal_form, sublattice_rank, IntegerMatrix,
    LatticeVector, SnfDecomposition,
};
pub use p1::{klt_fano_check, maximal_cases, riemann_hurwitz, OrbifoldCover, P1Orbifold};
