//! Exact integer linear algebra on lattices `Z^d`.

mod matrix;
mod snf;

pub use matrix::{IntegerMatrix, LatticeVector};
pub use snf::{smith_normal_form, SnfDecomposition};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::Result;
use crate::field::Characteristic;

fn stack(vectors: &[LatticeVector], dim: usize) -> Result<IntegerMatrix> {
    IntegerMatrix::from_vectors(vectors, dim)
}

/// Rank of the subgroup of `Z^dim` generated by `vectors`.
pub fn sublattice_rank(vectors: &[LatticeVector], dim: usize) -> Result<usize> {
    Ok(smith_normal_form(&stack(vectors, dim)?).rank())
}

/// Invariant factors `> 1` of the torsion part of `Z^dim / <vectors>`.
/// An empty result means the quotient is torsion-free.
pub fn quotient_torsion(vectors: &[LatticeVector], dim: usize) -> Result<Vec<BigInt>> {
    Ok(smith_normal_form(&stack(vectors, dim)?).torsion_factors())
}

/// Whether some invariant factor is divisible by `p`. Always false in
/// characteristic zero.
pub fn has_p_torsion(factors: &[BigInt], p: i64) -> Result<bool> {
    Ok(has_char_torsion(factors, Characteristic::new(p)?))
}

pub fn has_char_torsion(factors: &[BigInt], p: Characteristic) -> bool {
    if p.is_zero() {
        return false;
    }
    let p = BigInt::from(p.get());
    factors.iter().any(|f| (f % &p).is_zero())
}
