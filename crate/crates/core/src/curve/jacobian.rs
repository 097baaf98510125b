//! Differential of the two-point evaluation map at `(b_0, u, b_inf)`.
//!
//! With markings normalized to `t_k = -1` and affine marking coordinates
//! `m_k`, the map in the charts `s` (around `b_0`) and `t` (around `b_inf`) is
//!
//! ```text
//! X_i = lam_i * prod_k (m_k + s)^{A_ik},    Y_i = lam_i * prod_k (t*m_k + 1)^{A_ik}
//! ```
//!
//! for `i = 1..d`, where `A` is the exponent matrix. Columns of the Jacobian
//! are ordered `lam_1..lam_d, m_1..m_n, s, t`; rows `X_1..X_d, Y_1..Y_d`.

use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Zero};
use serde::Serialize;

use super::ExponentMatrix;
use crate::error::{Error, Result};
use crate::field::{format_rational, Characteristic, Field, PrimeField, Rationals};
use crate::linalg;

/// Scalars the evaluation map can be computed over: exact rationals or `f64`.
pub trait Scalar: Clone + Num + FromPrimitive {}

impl Scalar for f64 {}
impl Scalar for BigRational {}

fn ipow<T: Scalar>(x: &T, e: i64) -> T {
    let p = num_traits::pow(x.clone(), e.unsigned_abs() as usize);
    if e < 0 {
        T::one() / p
    } else {
        p
    }
}

fn from_i64<T: Scalar>(x: i64) -> T {
    T::from_i64(x).expect("integer fits")
}

/// `(X, Y)` at the point `(lam, m, s, t)`.
#[allow(clippy::needless_range_loop)]
pub fn evaluation_map<T: Scalar>(
    a: &ExponentMatrix,
    lam: &[T],
    m: &[T],
    s: &T,
    t: &T,
) -> (Vec<T>, Vec<T>) {
    let mut xs = Vec::with_capacity(a.d());
    let mut ys = Vec::with_capacity(a.d());
    for i in 0..a.d() {
        let mut x = lam[i].clone();
        let mut y = lam[i].clone();
        for (k, mk) in m.iter().enumerate() {
            let e = a.get(i, k);
            x = x * ipow(&(mk.clone() + s.clone()), e);
            y = y * ipow(&(t.clone() * mk.clone() + T::one()), e);
        }
        xs.push(x);
        ys.push(y);
    }
    (xs, ys)
}

/// Jacobian of [`evaluation_map`] by logarithmic differentiation of the
/// products of linear factors.
pub fn analytic_jacobian<T: Scalar>(
    a: &ExponentMatrix,
    lam: &[T],
    m: &[T],
    s: &T,
    t: &T,
) -> Vec<Vec<T>> {
    let (d, n) = (a.d(), a.n());
    let cols = d + n + 2;
    let (xs, ys) = evaluation_map(a, lam, m, s, t);
    let mut jac = vec![vec![T::zero(); cols]; 2 * d];
    for i in 0..d {
        // lambda block: d X_i / d lam_i = X_i / lam_i
        jac[i][i] = xs[i].clone() / lam[i].clone();
        jac[d + i][i] = ys[i].clone() / lam[i].clone();
        let mut dx_ds = T::zero();
        let mut dy_dt = T::zero();
        for k in 0..n {
            let e: T = from_i64(a.get(i, k));
            let lin_x = m[k].clone() + s.clone();
            let lin_y = t.clone() * m[k].clone() + T::one();
            jac[i][d + k] = e.clone() * xs[i].clone() / lin_x.clone();
            jac[d + i][d + k] = e.clone() * ys[i].clone() * t.clone() / lin_y.clone();
            dx_ds = dx_ds + e.clone() / lin_x;
            dy_dt = dy_dt + e * m[k].clone() / lin_y;
        }
        jac[i][d + n] = xs[i].clone() * dx_ds;
        jac[d + i][d + n + 1] = ys[i].clone() * dy_dt;
    }
    jac
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JacobianReport {
    pub rows: usize,
    pub cols: usize,
    pub characteristic: u64,
    pub rank: usize,
    /// `2d`: the rank needed for a submersion.
    pub target_rank: usize,
    /// `(dY_i / d lam_j)` is the identity.
    pub lambda_block_identity: bool,
    /// Rank of `(dX_i / d m_k)`, equal to the rank of the exponent matrix.
    pub marking_block_rank: usize,
    /// Exact entries over `Q`, as `"num/den"` strings.
    pub entries: Vec<Vec<String>>,
}

impl JacobianReport {
    pub fn is_full_rank(&self) -> bool {
        self.rank == self.target_rank
    }
}

/// Rank of the `2d x (d+n+2)` Jacobian at `s = t = 0` with scalars
/// `lam_i = lambda_i / lambda_0`, over `Q` or `F_p`.
pub fn jacobian_rank(
    d: usize,
    contacts: &[Vec<u64>],
    markings: &[BigRational],
    lambda: &[BigRational],
    p: Characteristic,
) -> Result<JacobianReport> {
    let a = ExponentMatrix::from_contacts(d, contacts)?;
    if markings.len() != a.n() {
        return Err(Error::DimensionMismatch {
            expected: a.n(),
            found: markings.len(),
        });
    }
    if lambda.len() != d + 1 {
        return Err(Error::DimensionMismatch {
            expected: d + 1,
            found: lambda.len(),
        });
    }
    if lambda.iter().any(Zero::is_zero) {
        return Err(Error::InvalidCurve("scalars must be nonzero".into()));
    }
    for (k, mk) in markings.iter().enumerate() {
        if mk.is_zero() {
            return Err(Error::DegenerateMarking(format!("marking {k} is b_0")));
        }
        if let Some(j) = markings[..k].iter().position(|o| o == mk) {
            return Err(Error::DegenerateMarking(format!(
                "markings {j} and {k} coincide"
            )));
        }
    }
    let lam: Vec<BigRational> = lambda[1..].iter().map(|l| l / &lambda[0]).collect();
    let zero = BigRational::zero();
    let jac = analytic_jacobian(&a, &lam, markings, &zero, &zero);

    let lambda_block_identity = (0..d).all(|i| {
        (0..d).all(|j| {
            jac[d + i][j]
                == if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
        })
    });
    let marking_block: Vec<Vec<BigRational>> =
        (0..d).map(|i| jac[i][d..d + a.n()].to_vec()).collect();
    let entries = jac
        .iter()
        .map(|row| row.iter().map(format_rational).collect())
        .collect();

    let (rank, marking_block_rank) = if p.is_zero() {
        (
            linalg::rank(&Rationals, &jac),
            linalg::rank(&Rationals, &marking_block),
        )
    } else {
        let f = PrimeField::new(p.get()).expect("validated characteristic");
        for (k, mk) in markings.iter().enumerate() {
            if f.from_rational(mk).map_or(true, |r| r == 0) {
                return Err(Error::DegenerateMarking(format!(
                    "marking {k} reduces to 0 or infinity mod {p}"
                )));
            }
        }
        let reduce = |m: &[Vec<BigRational>]| -> Result<Vec<Vec<u64>>> {
            m.iter()
                .map(|row| row.iter().map(|x| f.from_rational(x)).collect())
                .collect()
        };
        (
            linalg::rank(&f, &reduce(&jac)?),
            linalg::rank(&f, &reduce(&marking_block)?),
        )
    };
    Ok(JacobianReport {
        rows: 2 * d,
        cols: d + a.n() + 2,
        characteristic: p.get(),
        rank,
        target_rank: 2 * d,
        lambda_block_identity,
        marking_block_rank,
        entries,
    })
}
