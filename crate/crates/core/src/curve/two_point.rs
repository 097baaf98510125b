//! Markings through two prescribed torus points.
//!
//! With `t_k = -1` the scalars are `lambda = x`, and the image of `b_0` is
//! `lambda_i * prod_k s_k^{c_{k,i}}`. Matching `y` means solving the monomial
//! system `prod_k s_k^{A_ik} = r_i := (y_i/y_0) / (x_i/x_0)` for `i = 1..d`.
//!
//! Exact route: write every `|r_i|` over a coprime base of integers that are
//! not perfect powers. Exponent vectors then solve `A X = E` over `Z` column
//! by column through the Smith form of `A`, and signs solve `A sigma = sgn`
//! over `F_2`. A rational solution exists iff all of these are solvable; the
//! obstruction, if any, is an invariant factor of `A` (or the sign system).

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::ExponentMatrix;
use crate::error::{Error, Result};
use crate::field::{Field, PrimeField};
use crate::lattice::{smith_normal_form, IntegerMatrix};
use crate::linalg;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMode {
    /// Exact when possible, otherwise floating point.
    #[default]
    Auto,
    Exact,
    Numeric,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TwoPointSolution {
    Exact {
        #[serde(serialize_with = "rational_strings")]
        markings: Vec<BigRational>,
    },
    Numeric {
        markings: Vec<f64>,
        max_residual: f64,
        obstruction: Option<String>,
    },
}

fn rational_strings<S: serde::Serializer>(
    v: &[BigRational],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(crate::field::format_rational))
}

/// Solves for affine markings `s_k` (with `t_k = -1`) so that the curve with
/// `f(b_inf) = x` also has `f(b_0) = y`.
pub fn two_point_solve(
    d: usize,
    contacts: &[Vec<u64>],
    x: &[BigRational],
    y: &[BigRational],
    mode: SolveMode,
) -> Result<TwoPointSolution> {
    let a = ExponentMatrix::from_contacts(d, contacts)?;
    for p in [x, y] {
        if p.len() != d + 1 {
            return Err(Error::DimensionMismatch {
                expected: d + 1,
                found: p.len(),
            });
        }
        if p.iter().any(Zero::is_zero) {
            return Err(Error::InvalidInput(
                "two-point targets must be torus points".into(),
            ));
        }
    }
    let snf = smith_normal_form(&a.to_integer_matrix());
    if snf.rank() < d {
        return Err(Error::RankDeficient {
            rank: snf.rank(),
            d,
        });
    }
    let targets: Vec<BigRational> = (1..=d).map(|i| (&y[i] / &y[0]) / (&x[i] / &x[0])).collect();

    if mode != SolveMode::Numeric {
        match exact_solve(&a, &snf, &targets) {
            Ok(markings) => return Ok(TwoPointSolution::Exact { markings }),
            Err(Error::NoRationalSolution(why)) if mode == SolveMode::Auto => {
                return numeric_solve(&a, &snf, &targets, Some(why));
            }
            Err(e) => return Err(e),
        }
    }
    numeric_solve(&a, &snf, &targets, None)
}

/// Pairwise coprime integers `> 1`, none a perfect power, over which every
/// input factors.
pub(crate) fn coprime_base(values: &[BigInt]) -> Vec<BigInt> {
    let mut base: Vec<BigInt> = values
        .iter()
        .filter(|v| **v > BigInt::one())
        .cloned()
        .collect();
    loop {
        base.sort();
        base.dedup();
        let split = (0..base.len())
            .flat_map(|i| (i + 1..base.len()).map(move |j| (i, j)))
            .find_map(|(i, j)| {
                let g = base[i].gcd(&base[j]);
                (g > BigInt::one()).then_some((i, j, g))
            });
        match split {
            Some((i, j, g)) => {
                let (a, b) = (&base[i] / &g, &base[j] / &g);
                base.remove(j);
                base.remove(i);
                base.extend([a, b, g].into_iter().filter(|v| *v > BigInt::one()));
            }
            None => break,
        }
    }
    let mut base: Vec<BigInt> = base.into_iter().map(primitive_root).collect();
    base.sort();
    base.dedup();
    base
}

/// The smallest `r` with `r^k = n` for some `k >= 1`.
fn primitive_root(n: BigInt) -> BigInt {
    let mut n = n;
    loop {
        let bits = n.bits() as u32;
        let reduced = (2..=bits.max(2)).rev().find_map(|k| {
            let r = n.nth_root(k);
            (r > BigInt::one() && num_traits::pow(r.clone(), k as usize) == n).then_some(r)
        });
        match reduced {
            Some(r) => n = r,
            None => return n,
        }
    }
}

fn exponent_in(mut v: BigInt, base: &[BigInt]) -> Vec<i64> {
    let mut e = vec![0i64; base.len()];
    for (j, b) in base.iter().enumerate() {
        while (&v % b).is_zero() {
            v /= b;
            e[j] += 1;
        }
    }
    debug_assert!(v.is_one(), "value does not factor over the base");
    e
}

/// Particular integer solution of `A X = e`, or the invariant factor that obstructs.
fn integer_solve(
    snf: &crate::lattice::SnfDecomposition,
    e: &[i64],
) -> std::result::Result<Vec<BigInt>, BigInt> {
    let col =
        IntegerMatrix::from_rows(&e.iter().map(|&v| vec![v]).collect::<Vec<_>>()).expect("column");
    let w = snf.u_inv.mul(&col).expect("shapes agree");
    let diag = snf.diagonal();
    let n = snf.v.rows();
    let mut yv = vec![BigInt::zero(); n];
    for (j, dj) in diag.iter().enumerate() {
        let wj = &w[(j, 0)];
        if dj.is_zero() {
            if !wj.is_zero() {
                return Err(BigInt::zero());
            }
            continue;
        }
        if !(wj % dj).is_zero() {
            return Err(dj.clone());
        }
        yv[j] = wj / dj;
    }
    Ok((0..n)
        .map(|k| (0..n).map(|j| &snf.v_inv[(k, j)] * &yv[j]).sum())
        .collect())
}

fn kernel_basis(snf: &crate::lattice::SnfDecomposition) -> Vec<Vec<i64>> {
    let rank = snf.rank();
    let n = snf.v.rows();
    let mut basis: Vec<Vec<i64>> = (rank..n)
        .map(|j| {
            (0..n)
                .map(|k| snf.v_inv[(k, j)].to_i64().expect("small kernel entries"))
                .collect()
        })
        .collect();
    // greedy pairwise size reduction in the L1 norm
    let l1 = |v: &[i64]| v.iter().map(|x| x.unsigned_abs()).sum::<u64>();
    loop {
        let mut improved = false;
        for i in 0..basis.len() {
            for j in 0..basis.len() {
                if i == j {
                    continue;
                }
                for sign in [1i64, -1] {
                    let cand: Vec<i64> = basis[i]
                        .iter()
                        .zip(&basis[j])
                        .map(|(a, b)| a + sign * b)
                        .collect();
                    if l1(&cand) < l1(&basis[i]) {
                        basis[i] = cand;
                        improved = true;
                    }
                }
            }
        }
        if !improved {
            break;
        }
    }
    basis
}

/// Deterministic preference among integer exponent vectors: fewest negative
/// entries (integral markings), then smallest L1 norm, then lexicographic.
fn score(v: &[i64]) -> (usize, u64, Vec<i64>) {
    (
        v.iter().filter(|&&x| x < 0).count(),
        v.iter().map(|x| x.unsigned_abs()).sum(),
        v.to_vec(),
    )
}

/// Coefficient vectors of kernel combinations searched, in a fixed order.
fn kernel_offsets(dim: usize) -> Vec<Vec<i64>> {
    let bound: i64 = match dim {
        0 => return vec![vec![]],
        1..=4 => 2,
        5..=8 => 1,
        _ => 0,
    };
    if bound == 0 {
        let mut out = vec![vec![0; dim]];
        for j in 0..dim {
            for s in [1, -1, 2, -2] {
                let mut v = vec![0; dim];
                v[j] = s;
                out.push(v);
            }
        }
        return out;
    }
    let mut out = vec![vec![]];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<i64>| {
                (-bound..=bound).map(move |c| {
                    let mut v = prefix.clone();
                    v.push(c);
                    v
                })
            })
            .collect();
    }
    out
}

fn combine(base: &[i64], kernel: &[Vec<i64>], coeffs: &[i64]) -> Vec<i64> {
    let mut v = base.to_vec();
    for (kv, &c) in kernel.iter().zip(coeffs) {
        for (x, k) in v.iter_mut().zip(kv) {
            *x += c * k;
        }
    }
    v
}

fn reduce_against_kernel(mut v: Vec<i64>, kernel: &[Vec<i64>]) -> Vec<i64> {
    loop {
        let mut improved = false;
        for kv in kernel {
            for sign in [1i64, -1] {
                let cand: Vec<i64> = v.iter().zip(kv).map(|(a, b)| a + sign * b).collect();
                if score(&cand).1 < score(&v).1 {
                    v = cand;
                    improved = true;
                }
            }
        }
        if !improved {
            return v;
        }
    }
}

fn canonical_solution(particular: Vec<i64>, kernel: &[Vec<i64>]) -> Vec<i64> {
    let start = reduce_against_kernel(particular, kernel);
    kernel_offsets(kernel.len())
        .iter()
        .map(|c| combine(&start, kernel, c))
        .min_by_key(|v| score(v))
        .expect("offsets include zero")
}

fn rows_distinct(columns: &[Vec<i64>], n: usize) -> bool {
    let rows: BTreeSet<Vec<i64>> = (0..n)
        .map(|k| columns.iter().map(|c| c[k]).collect())
        .collect();
    rows.len() == n
}

fn exact_solve(
    a: &ExponentMatrix,
    snf: &crate::lattice::SnfDecomposition,
    targets: &[BigRational],
) -> Result<Vec<BigRational>> {
    let n = a.n();
    let mut magnitudes = Vec::new();
    for r in targets {
        magnitudes.push(r.numer().abs());
        magnitudes.push(r.denom().clone());
    }
    let base = coprime_base(&magnitudes);
    let kernel = kernel_basis(snf);

    // exponent columns, one per base element
    let mut columns: Vec<Vec<i64>> = Vec::with_capacity(base.len() + 2);
    for (j, b) in base.iter().enumerate() {
        let e: Vec<i64> = targets
            .iter()
            .map(|r| {
                exponent_in(r.numer().abs(), &base)[j] - exponent_in(r.denom().clone(), &base)[j]
            })
            .collect();
        let particular = integer_solve(snf, &e).map_err(|obstruction| {
            Error::NoRationalSolution(format!(
                "invariant factor {obstruction} of the exponent matrix does not divide the exponent of {b}; the required root is irrational"
            ))
        })?;
        let particular: Vec<i64> = particular
            .iter()
            .map(|x| {
                x.to_i64()
                    .ok_or_else(|| Error::NoRationalSolution("exponent overflow".into()))
            })
            .collect::<Result<_>>()?;
        columns.push(canonical_solution(particular, &kernel));
    }

    // signs over F_2
    let f2 = PrimeField::new(2).expect("2 is prime");
    let system: Vec<Vec<u64>> = a
        .rows()
        .iter()
        .map(|row| row.iter().map(|&x| f2.from_i64(x)).collect())
        .collect();
    let rhs: Vec<u64> = targets.iter().map(|r| u64::from(r.is_negative())).collect();
    let sign = linalg::solve(&f2, &system, &rhs).ok_or_else(|| {
        Error::NoRationalSolution(
            "sign system has no solution: an even invariant factor meets a negative target".into(),
        )
    })?;
    let sign_col: Vec<i64> = sign.iter().map(|&b| b as i64).collect();

    let mut all = columns.clone();
    all.push(sign_col.clone());
    let mut fresh: Option<(BigInt, Vec<i64>)> = None;
    if !rows_distinct(&all, n) {
        // move along the kernel torus in a new prime direction
        let g = (2u64..)
            .map(BigInt::from)
            .find(|q| {
                crate::field::is_prime(q.to_u64().unwrap())
                    && base.iter().all(|b| b.gcd(q).is_one())
            })
            .unwrap();
        let choice = kernel_offsets(kernel.len())
            .iter()
            .map(|c| combine(&vec![0; n], &kernel, c))
            .filter(|v| {
                let mut cols = all.clone();
                cols.push(v.clone());
                rows_distinct(&cols, n)
            })
            .min_by_key(|v| score(v));
        match choice {
            Some(v) => fresh = Some((g, v)),
            None => {
                return Err(Error::MarkingsNotDistinct(
                    kernel_offsets(kernel.len()).len(),
                ))
            }
        }
    }

    let markings: Vec<BigRational> = (0..n)
        .map(|k| {
            let mut v = if sign_col[k] == 1 {
                -BigRational::one()
            } else {
                BigRational::one()
            };
            for (b, col) in base.iter().zip(&columns) {
                v *= rational_pow(b, col[k]);
            }
            if let Some((g, col)) = &fresh {
                v *= rational_pow(g, col[k]);
            }
            v
        })
        .collect();

    // the solution must reproduce the targets exactly
    for (i, r) in targets.iter().enumerate() {
        let got = markings
            .iter()
            .enumerate()
            .fold(BigRational::one(), |acc, (k, s)| {
                acc * rational_pow_q(s, a.get(i, k))
            });
        assert_eq!(&got, r, "exact two-point solution failed self-check");
    }
    Ok(markings)
}

fn rational_pow(b: &BigInt, e: i64) -> BigRational {
    rational_pow_q(&BigRational::from_integer(b.clone()), e)
}

fn rational_pow_q(b: &BigRational, e: i64) -> BigRational {
    let p = num_traits::pow(b.clone(), e.unsigned_abs() as usize);
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

#[allow(clippy::needless_range_loop)]
fn solve_dense_f64(mut m: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs()))?;
        if m[p][c].abs() < 1e-300 {
            return None;
        }
        m.swap(c, p);
        b.swap(c, p);
        for i in c + 1..n {
            let f = m[i][c] / m[c][c];
            for j in c..n {
                m[i][j] -= f * m[c][j];
            }
            b[i] -= f * b[c];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| m[i][j] * x[j]).sum();
        x[i] = (b[i] - s) / m[i][i];
    }
    Some(x)
}

fn ln_abs(q: &BigRational) -> f64 {
    let ln_int = |v: &BigInt| {
        let bits = v.bits();
        let shift = bits.saturating_sub(60);
        let top = (v >> shift).to_f64().unwrap_or(f64::MAX);
        top.ln() + shift as f64 * std::f64::consts::LN_2
    };
    ln_int(&q.numer().abs()) - ln_int(q.denom())
}

fn numeric_solve(
    a: &ExponentMatrix,
    snf: &crate::lattice::SnfDecomposition,
    targets: &[BigRational],
    obstruction: Option<String>,
) -> Result<TwoPointSolution> {
    let (d, n) = (a.d(), a.n());
    let f2 = PrimeField::new(2).expect("2 is prime");
    let system: Vec<Vec<u64>> = a
        .rows()
        .iter()
        .map(|row| row.iter().map(|&x| f2.from_i64(x)).collect())
        .collect();
    let rhs: Vec<u64> = targets.iter().map(|r| u64::from(r.is_negative())).collect();
    let sign = linalg::solve(&f2, &system, &rhs).ok_or_else(|| {
        Error::NoRationalSolution("no real solution: the sign system is inconsistent".into())
    })?;

    // minimum-norm solution of A L = log|r|
    let af: Vec<Vec<f64>> = a
        .rows()
        .iter()
        .map(|r| r.iter().map(|&x| x as f64).collect())
        .collect();
    let gram: Vec<Vec<f64>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| (0..n).map(|k| af[i][k] * af[j][k]).sum())
                .collect()
        })
        .collect();
    let logs: Vec<f64> = targets.iter().map(ln_abs).collect();
    let z = solve_dense_f64(gram, logs).ok_or(Error::RankDeficient {
        rank: snf.rank(),
        d,
    })?;
    let base_log: Vec<f64> = (0..n)
        .map(|k| (0..d).map(|i| af[i][k] * z[i]).sum())
        .collect();

    let kernel = kernel_basis(snf);
    let direction: Vec<f64> = (0..n)
        .map(|k| {
            kernel
                .iter()
                .enumerate()
                .map(|(j, v)| v[k] as f64 / (j + 1) as f64)
                .sum()
        })
        .collect();
    const ATTEMPTS: usize = 64;
    for attempt in 0..ATTEMPTS {
        let step = 0.1 * attempt as f64;
        let markings: Vec<f64> = (0..n)
            .map(|k| {
                let mag = (base_log[k] + step * direction[k]).exp();
                if sign[k] == 1 {
                    -mag
                } else {
                    mag
                }
            })
            .collect();
        let distinct = (0..n).all(|k| {
            (0..k).all(|l| (markings[k] - markings[l]).abs() > 1e-6 * markings[k].abs().max(1.0))
        });
        if !distinct {
            continue;
        }
        let max_residual = targets
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let prod: f64 = markings
                    .iter()
                    .enumerate()
                    .map(|(k, s)| s.powi(a.get(i, k) as i32))
                    .product();
                (prod / r.to_f64().unwrap_or(f64::NAN) - 1.0).abs()
            })
            .fold(0.0, f64::max);
        return Ok(TwoPointSolution::Numeric {
            markings,
            max_residual,
            obstruction,
        });
    }
    Err(Error::MarkingsNotDistinct(ATTEMPTS))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{b_zero, build_curve, evaluate, normalized_markings, projectively_equal};
    use crate::field::{int, rational};

    fn contacts_235() -> Vec<Vec<u64>> {
        vec![vec![0, 2], vec![0, 3], vec![5, 0]]
    }

    #[test]
    fn coprime_base_examples() {
        let b = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert_eq!(coprime_base(&b(&[128])), b(&[2]));
        assert_eq!(coprime_base(&b(&[12, 18])), b(&[2, 3]));
        assert_eq!(coprime_base(&b(&[36, 1])), b(&[6]));
        assert_eq!(coprime_base(&b(&[10, 15, 7])), b(&[2, 3, 5, 7]));
        assert!(coprime_base(&b(&[1, 1])).is_empty());
    }

    #[test]
    fn exact_example() {
        let sol = two_point_solve(
            1,
            &contacts_235(),
            &[int(1), int(1)],
            &[int(1), int(128)],
            SolveMode::Exact,
        )
        .unwrap();
        assert_eq!(
            sol,
            TwoPointSolution::Exact {
                markings: vec![int(4), int(2), int(1)]
            }
        );
    }

    #[test]
    fn identity_target_has_distinct_markings() {
        let x = vec![int(2), int(3)];
        let sol = two_point_solve(1, &contacts_235(), &x, &x, SolveMode::Exact).unwrap();
        let TwoPointSolution::Exact { markings } = sol else {
            panic!("expected exact")
        };
        let set: BTreeSet<_> = markings.iter().cloned().collect();
        assert_eq!(set.len(), 3);
        let curve = build_curve(1, &normalized_markings(&markings), &contacts_235(), &x).unwrap();
        assert!(projectively_equal(&evaluate(&curve, &b_zero()), &x));
    }

    #[test]
    fn irrational_root_falls_back_to_numeric() {
        // A = [2, 4, -6] has invariant factor 2; r = 2 needs sqrt(2)
        let contacts = vec![vec![0, 2], vec![0, 4], vec![6, 0]];
        let x = vec![int(1), int(1)];
        let y = vec![int(1), int(2)];
        match two_point_solve(1, &contacts, &x, &y, SolveMode::Exact) {
            Err(Error::NoRationalSolution(why)) => {
                assert!(why.contains("invariant factor 2"), "{why}")
            }
            other => panic!("unexpected {other:?}"),
        }
        match two_point_solve(1, &contacts, &x, &y, SolveMode::Auto).unwrap() {
            TwoPointSolution::Numeric {
                max_residual,
                obstruction,
                markings,
            } => {
                assert!(max_residual < 1e-9);
                assert!(obstruction.is_some());
                assert_eq!(markings.len(), 3);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn negative_target_with_even_factor_is_infeasible() {
        let contacts = vec![vec![0, 2], vec![0, 4], vec![6, 0]];
        let r = two_point_solve(
            1,
            &contacts,
            &[int(1), int(1)],
            &[int(1), int(-4)],
            SolveMode::Auto,
        );
        assert!(matches!(r, Err(Error::NoRationalSolution(_))));
    }

    #[test]
    fn rank_deficient_rejected() {
        let contacts = vec![vec![3, 3, 0], vec![0, 0, 3]];
        let ones = vec![int(1), int(1), int(1)];
        let r = two_point_solve(2, &contacts, &ones, &ones, SolveMode::Auto);
        assert!(matches!(r, Err(Error::RankDeficient { rank: 1, d: 2 })));
    }

    #[test]
    fn p2_exact_interpolation() {
        let contacts = vec![
            vec![0, 3, 0],
            vec![0, 3, 0],
            vec![0, 0, 3],
            vec![0, 0, 3],
            vec![3, 0, 0],
            vec![3, 0, 0],
        ];
        let x = vec![int(1), rational(2, 3), int(-5)];
        // y chosen so the ratios are cubes up to the lattice: r = (8/27 * 27, 1)
        let y = vec![int(1), rational(2, 3) * int(8), int(-5) * rational(1, 27)];
        let TwoPointSolution::Exact { markings } =
            two_point_solve(2, &contacts, &x, &y, SolveMode::Exact).unwrap()
        else {
            panic!("expected exact solution")
        };
        let curve = build_curve(2, &normalized_markings(&markings), &contacts, &x).unwrap();
        assert!(projectively_equal(&evaluate(&curve, &b_zero()), &y));
    }
}
