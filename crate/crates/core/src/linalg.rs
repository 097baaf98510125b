//! Gaussian elimination over an arbitrary field.

#![allow(clippy::needless_range_loop)]

use crate::field::Field;

/// Row echelon form in place; returns the pivot columns.
pub fn row_echelon<F: Field>(field: &F, m: &mut [Vec<F::Elem>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !field.is_zero(&m[i][c])) else {
            continue;
        };
        m.swap(r, p);
        let inv = field.inv(&m[r][c]).expect("pivot is nonzero");
        for j in c..cols {
            m[r][j] = field.mul(&m[r][j], &inv);
        }
        for i in 0..rows {
            if i == r || field.is_zero(&m[i][c]) {
                continue;
            }
            let factor = m[i][c].clone();
            for j in c..cols {
                let v = field.mul(&factor, &m[r][j]);
                m[i][j] = field.sub(&m[i][j], &v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(field: &F, m: &[Vec<F::Elem>]) -> usize {
    let mut work = m.to_vec();
    row_echelon(field, &mut work).len()
}

/// Solves `m * x = b`. Free variables are set to zero. `None` if inconsistent.
pub fn solve<F: Field>(field: &F, m: &[Vec<F::Elem>], b: &[F::Elem]) -> Option<Vec<F::Elem>> {
    let cols = m.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<F::Elem>> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = row_echelon(field, &mut aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![field.zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][cols].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{int, PrimeField, Rationals};

    #[test]
    fn rank_over_q_and_fp() {
        let q = Rationals;
        let m = vec![vec![int(3), int(0), int(-3)], vec![int(0), int(3), int(-3)]];
        assert_eq!(rank(&q, &m), 2);
        let f3 = PrimeField::new(3).unwrap();
        let m3: Vec<Vec<u64>> = m
            .iter()
            .map(|r| r.iter().map(|x| f3.from_rational(x).unwrap()).collect())
            .collect();
        assert_eq!(rank(&f3, &m3), 0);
    }

    #[test]
    fn solve_consistent_and_not() {
        let q = Rationals;
        let m = vec![vec![int(1), int(2)], vec![int(2), int(4)]];
        assert_eq!(solve(&q, &m, &[int(3), int(6)]), Some(vec![int(3), int(0)]));
        assert_eq!(solve(&q, &m, &[int(3), int(7)]), None);
    }
}
