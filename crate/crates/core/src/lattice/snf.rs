//! Smith normal form over the integers.
//!
//! Reduction by elementary row and column operations, always pivoting on the
//! entry of least absolute value in the remaining block. The transforms and
//! their inverses are tracked alongside, so `A = U * D * V` holds on exit.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntegerMatrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfDecomposition {
    /// Left unimodular factor, `rows x rows`.
    pub u: IntegerMatrix,
    /// Diagonal, nonnegative, `d_1 | d_2 | ...`, zeros last.
    pub d: IntegerMatrix,
    /// Right unimodular factor, `cols x cols`.
    pub v: IntegerMatrix,
    /// `U^{-1}`
    pub u_inv: IntegerMatrix,
    /// `V^{-1}`
    pub v_inv: IntegerMatrix,
}

impl SnfDecomposition {
    /// Diagonal entries, including trailing zeros, of length `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }

    /// Nonzero diagonal entries greater than one.
    pub fn torsion_factors(&self) -> Vec<BigInt> {
        self.diagonal()
            .into_iter()
            .filter(|x| x > &BigInt::one())
            .collect()
    }
}

struct Reducer {
    a: IntegerMatrix,
    /// P with P * A_orig * Q = A
    p: IntegerMatrix,
    p_inv: IntegerMatrix,
    q: IntegerMatrix,
    q_inv: IntegerMatrix,
}

impl Reducer {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.p.swap_rows(i, j);
        self.p_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.q.swap_cols(i, j);
        self.q_inv.swap_rows(i, j);
    }

    /// row[i] += k * row[j]
    fn add_row(&mut self, i: usize, j: usize, k: &BigInt) {
        self.a.add_row_multiple(i, j, k);
        self.p.add_row_multiple(i, j, k);
        self.p_inv.add_col_multiple(j, i, &-k);
    }

    /// col[i] += k * col[j]
    fn add_col(&mut self, i: usize, j: usize, k: &BigInt) {
        self.a.add_col_multiple(i, j, k);
        self.q.add_col_multiple(i, j, k);
        self.q_inv.add_row_multiple(j, i, &-k);
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        self.p.negate_row(i);
        self.p_inv.negate_col(i);
    }

    fn min_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, BigInt)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let x = &self.a[(i, j)];
                if x.is_zero() {
                    continue;
                }
                let ax = x.abs();
                if best.as_ref().is_none_or(|(_, _, b)| &ax < b) {
                    best = Some((i, j, ax));
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }

    fn run(&mut self) {
        let n = self.a.rows().min(self.a.cols());
        for t in 0..n {
            loop {
                let Some((pi, pj)) = self.min_entry(t) else {
                    return;
                };
                self.swap_rows(t, pi);
                self.swap_cols(t, pj);
                let pivot = self.a[(t, t)].clone();

                let mut clean = true;
                for i in t + 1..self.a.rows() {
                    let q = self.a[(i, t)].div_floor(&pivot);
                    if !q.is_zero() {
                        self.add_row(i, t, &-q);
                    }
                    clean &= self.a[(i, t)].is_zero();
                }
                for j in t + 1..self.a.cols() {
                    let q = self.a[(t, j)].div_floor(&pivot);
                    if !q.is_zero() {
                        self.add_col(j, t, &-q);
                    }
                    clean &= self.a[(t, j)].is_zero();
                }
                if !clean {
                    continue;
                }
                // Pivot isolated; enforce divisibility of the remaining block.
                let offender = (t + 1..self.a.rows()).find(|&i| {
                    (t + 1..self.a.cols()).any(|j| !self.a[(i, j)].is_multiple_of(&pivot))
                });
                match offender {
                    Some(i) => self.add_row(t, i, &BigInt::one()),
                    None => break,
                }
            }
            if self.a[(t, t)].is_negative() {
                self.negate_row(t);
            }
        }
    }
}

/// Smith normal form `A = U * D * V` with `U`, `V` unimodular.
pub fn smith_normal_form(a: &IntegerMatrix) -> SnfDecomposition {
    let (r, c) = (a.rows(), a.cols());
    let mut red = Reducer {
        a: a.clone(),
        p: IntegerMatrix::identity(r),
        p_inv: IntegerMatrix::identity(r),
        q: IntegerMatrix::identity(c),
        q_inv: IntegerMatrix::identity(c),
    };
    red.run();
    SnfDecomposition {
        u: red.p_inv,
        d: red.a,
        v: red.q_inv,
        u_inv: red.p,
        v_inv: red.q,
    }
}
