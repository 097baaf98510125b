//! Explicit rational curves in `P^d` with prescribed contact orders.
//!
//! The curve with markings `[s_k : t_k]` and contact matrix `c_{k,i}` is
//! `x_i = lambda_i * prod_k (t*s_k - s*t_k)^{c_{k,i}}`; the scalars are fixed
//! by the image `x_inf` of `b_inf = [1:0]`.

mod jacobian;
mod two_point;

pub use jacobian::{analytic_jacobian, evaluation_map, jacobian_rank, JacobianReport, Scalar};
pub use two_point::{two_point_solve, SolveMode, TwoPointSolution};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::campana::{campana_type_of_table, CampanaTypeReport, Multiplicity};
use crate::error::{Error, Result};
use crate::field::{format_rational, parse_rational, Characteristic, Field, PrimeField, Rationals};
use crate::linalg;
use crate::poly::{BinaryForm, PolyRing};

pub type Point = (BigRational, BigRational);

/// `b_inf = [1:0]`
pub fn b_infinity() -> Point {
    (BigRational::one(), BigRational::zero())
}

/// `b_0 = [0:1]`
pub fn b_zero() -> Point {
    (BigRational::zero(), BigRational::one())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalCurvePd {
    pub d: usize,
    pub beta: u64,
    pub markings: Vec<Point>,
    /// `contacts[k][i] = c_{k,i}`
    pub contacts: Vec<Vec<u64>>,
    pub lambda: Vec<BigRational>,
    pub forms: Vec<BinaryForm<BigRational>>,
}

/// `A[i][k] = c_{k,i+1} - c_{k,0}`, a `d x n` integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentMatrix {
    rows: Vec<Vec<i64>>,
    n: usize,
}

impl ExponentMatrix {
    pub fn from_contacts(d: usize, contacts: &[Vec<u64>]) -> Result<Self> {
        check_contact_shape(d, contacts)?;
        let rows = (1..=d)
            .map(|i| {
                contacts
                    .iter()
                    .map(|row| row[i] as i64 - row[0] as i64)
                    .collect()
            })
            .collect();
        Ok(ExponentMatrix {
            rows,
            n: contacts.len(),
        })
    }

    pub fn d(&self) -> usize {
        self.rows.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn get(&self, i: usize, k: usize) -> i64 {
        self.rows[i][k]
    }

    pub fn to_integer_matrix(&self) -> crate::lattice::IntegerMatrix {
        crate::lattice::IntegerMatrix::from_rows(&self.rows)
            .unwrap_or_else(|_| crate::lattice::IntegerMatrix::zeros(0, self.n))
    }

    /// Rank over `Q` (`p = 0`) or `F_p`.
    pub fn rank(&self, p: Characteristic) -> usize {
        if p.is_zero() {
            let q = Rationals;
            let m: Vec<Vec<BigRational>> = self
                .rows
                .iter()
                .map(|r| r.iter().map(|&x| q.from_i64(x)).collect())
                .collect();
            linalg::rank(&q, &m)
        } else {
            let f = PrimeField::new(p.get()).expect("validated characteristic");
            let m: Vec<Vec<u64>> = self
                .rows
                .iter()
                .map(|r| r.iter().map(|&x| f.from_i64(x)).collect())
                .collect();
            linalg::rank(&f, &m)
        }
    }
}

fn check_contact_shape(d: usize, contacts: &[Vec<u64>]) -> Result<()> {
    if d == 0 {
        return Err(Error::InvalidCurve("d must be at least 1".into()));
    }
    for (k, row) in contacts.iter().enumerate() {
        if row.len() != d + 1 {
            return Err(Error::DimensionMismatch {
                expected: d + 1,
                found: row.len(),
            });
        }
        if row.iter().all(|&c| c == 0) {
            return Err(Error::InvalidCurve(format!(
                "marking {k} has zero contact order"
            )));
        }
        if row.iter().all(|&c| c > 0) {
            return Err(Error::InvalidCurve(format!(
                "marking {k} meets every hyperplane; not a cone of P^d"
            )));
        }
    }
    Ok(())
}

/// Common column sum `beta = sum_k c_{k,i}`, which must not depend on `i`.
pub fn curve_degree(d: usize, contacts: &[Vec<u64>]) -> Result<u64> {
    check_contact_shape(d, contacts)?;
    let sums: Vec<u64> = (0..=d)
        .map(|i| contacts.iter().map(|r| r[i]).sum())
        .collect();
    if sums.iter().any(|&s| s != sums[0]) {
        return Err(Error::InvalidCurve(format!(
            "column sums {sums:?} differ; contact orders are not balanced"
        )));
    }
    if sums[0] == 0 {
        return Err(Error::InvalidCurve(
            "curve class must have positive degree".into(),
        ));
    }
    Ok(sums[0])
}

fn same_point(a: &Point, b: &Point) -> bool {
    &a.0 * &b.1 == &a.1 * &b.0
}

/// Linear form `t*s_k - s*t_k` vanishing at `[s_k : t_k]`.
fn marking_form(r: &PolyRing<Rationals>, (s_k, t_k): &Point) -> BinaryForm<BigRational> {
    r.linear_form(-t_k.clone(), s_k.clone())
}

/// Builds the curve with `f(b_inf) = x_inf`.
pub fn build_curve(
    d: usize,
    markings: &[Point],
    contacts: &[Vec<u64>],
    x_inf: &[BigRational],
) -> Result<RationalCurvePd> {
    let beta = curve_degree(d, contacts)?;
    if markings.len() != contacts.len() {
        return Err(Error::DimensionMismatch {
            expected: contacts.len(),
            found: markings.len(),
        });
    }
    if x_inf.len() != d + 1 {
        return Err(Error::DimensionMismatch {
            expected: d + 1,
            found: x_inf.len(),
        });
    }
    if x_inf.iter().any(Zero::is_zero) {
        return Err(Error::InvalidCurve(
            "x_inf lies on the toric boundary".into(),
        ));
    }
    for (k, m) in markings.iter().enumerate() {
        if m.1.is_zero() {
            return Err(Error::InvalidCurve(format!(
                "marking {k} is b_inf; markings must lie in the affine line"
            )));
        }
        if let Some(j) = markings[..k].iter().position(|o| same_point(o, m)) {
            return Err(Error::InvalidCurve(format!(
                "markings {j} and {k} coincide"
            )));
        }
    }
    let r = PolyRing::new(Rationals);
    let mut lambda = Vec::with_capacity(d + 1);
    let mut forms = Vec::with_capacity(d + 1);
    for i in 0..=d {
        // f^*x_i(b_inf) = lambda_i * prod (-t_k)^{c_{k,i}}
        let at_inf = markings
            .iter()
            .zip(contacts)
            .fold(BigRational::one(), |acc, ((_, t_k), row)| {
                acc * num_traits::pow(-t_k.clone(), row[i] as usize)
            });
        let l = &x_inf[i] / at_inf;
        let mut form = r.constant_form(l.clone());
        for (m, row) in markings.iter().zip(contacts) {
            if row[i] > 0 {
                form = r.form_mul(&form, &r.form_pow(&marking_form(&r, m), row[i]));
            }
        }
        debug_assert_eq!(form.degree as u64, beta);
        lambda.push(l);
        forms.push(form);
    }
    Ok(RationalCurvePd {
        d,
        beta,
        markings: markings.to_vec(),
        contacts: contacts.to_vec(),
        lambda,
        forms,
    })
}

/// `(form_0(s,t) : ... : form_d(s,t))`
pub fn evaluate(curve: &RationalCurvePd, point: &Point) -> Vec<BigRational> {
    let r = PolyRing::new(Rationals);
    curve
        .forms
        .iter()
        .map(|f| r.form_eval(f, &point.0, &point.1))
        .collect()
}

/// Whether two homogeneous coordinate vectors define the same point.
pub fn projectively_equal(a: &[BigRational], b: &[BigRational]) -> bool {
    if a.len() != b.len() || a.iter().all(Zero::is_zero) || b.iter().all(Zero::is_zero) {
        return false;
    }
    (0..a.len()).all(|i| (0..a.len()).all(|j| &a[i] * &b[j] == &a[j] * &b[i]))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TangencyCertificate {
    /// `table[k][i]`: order of vanishing of form `i` at marking `k`.
    pub table: Vec<Vec<u64>>,
    pub forms_coprime: bool,
    pub campana: Option<CampanaTypeReport>,
}

/// Recomputes every tangency multiplicity by exact repeated division and
/// checks it against the curve's contact matrix. Errors on any mismatch or
/// on a common root of the forms.
pub fn verify_tangency(
    curve: &RationalCurvePd,
    multiplicities: Option<&[Multiplicity]>,
) -> Result<TangencyCertificate> {
    let r = PolyRing::new(Rationals);
    if curve.forms.len() != curve.d + 1 || curve.lambda.len() != curve.d + 1 {
        return Err(Error::InvalidCurve("need d+1 forms and scalars".into()));
    }
    let mut table = vec![vec![0u64; curve.d + 1]; curve.markings.len()];
    for (i, form) in curve.forms.iter().enumerate() {
        if form.degree as u64 != curve.beta {
            return Err(Error::InvalidCurve(format!(
                "form {i} has degree {} != beta = {}",
                form.degree, curve.beta
            )));
        }
        let mut rest = form.clone();
        for (k, (s_k, t_k)) in curve.markings.iter().enumerate() {
            let v = r
                .valuation_at(form, s_k, t_k)
                .ok_or_else(|| Error::InvalidCurve(format!("form {i} is zero")))?;
            table[k][i] = v;
            let expected = curve.contacts.get(k).map_or(0, |row| row[i]);
            if v != expected {
                return Err(Error::TangencyMismatch {
                    marking: k,
                    hyperplane: i,
                    expected,
                    found: v,
                });
            }
            for _ in 0..v {
                rest = r
                    .divide_by_point(&rest, s_k, t_k)
                    .expect("valuation already established");
            }
        }
        // what remains must be the constant lambda_i
        if rest.degree != 0 || rest.coeffs[0] != curve.lambda[i] {
            return Err(Error::InvalidCurve(format!(
                "form {i} has extra factors beyond the markings"
            )));
        }
    }
    let forms_coprime = r.forms_coprime(&curve.forms);
    if !forms_coprime {
        return Err(Error::CommonRoot);
    }
    let campana = multiplicities
        .map(|m| campana_type_of_table(&table, m))
        .transpose()?;
    Ok(TangencyCertificate {
        table,
        forms_coprime,
        campana,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeparabilityReport {
    pub rank: usize,
    pub d: usize,
    pub characteristic: u64,
    pub full_rank: bool,
}

/// Rank of `(c_{k,i} - c_{k,0})` over `Q` or `F_p`, compared to `d`.
pub fn separability_rank(
    d: usize,
    contacts: &[Vec<u64>],
    p: Characteristic,
) -> Result<SeparabilityReport> {
    let a = ExponentMatrix::from_contacts(d, contacts)?;
    let rank = a.rank(p);
    Ok(SeparabilityReport {
        rank,
        d,
        characteristic: p.get(),
        full_rank: rank == d,
    })
}

/// `n` distinct nonzero rationals from a seeded generator. For `p > 0` the
/// reductions mod `p` are nonzero too, and pairwise distinct when `p > n`.
pub fn seeded_markings(seed: u64, n: usize, p: Characteristic) -> Vec<BigRational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let field = (!p.is_zero()).then(|| PrimeField::new(p.get()).expect("validated characteristic"));
    let mut out: Vec<BigRational> = Vec::with_capacity(n);
    let mut residues: Vec<u64> = Vec::new();
    while out.len() < n {
        let num: i64 = rng.gen_range(-97..=97);
        let den: i64 = rng.gen_range(1..=13);
        if num == 0 {
            continue;
        }
        let q = BigRational::new(BigInt::from(num), BigInt::from(den));
        if out.contains(&q) {
            continue;
        }
        if let Some(f) = field {
            let Ok(res) = f.from_rational(&q) else {
                continue;
            };
            if res == 0 || (f.modulus() as usize > n && residues.contains(&res)) {
                continue;
            }
            residues.push(res);
        }
        out.push(q);
    }
    out
}

/// Markings `[s_k : -1]`, the normalization used by the two-point and
/// Jacobian computations.
pub fn normalized_markings(s: &[BigRational]) -> Vec<Point> {
    s.iter().map(|x| (x.clone(), -BigRational::one())).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveJson {
    pub d: usize,
    pub beta: u64,
    pub markings: Vec<[String; 2]>,
    pub contacts: Vec<Vec<u64>>,
    pub lambda: Vec<String>,
    pub forms: Vec<Vec<String>>,
}

impl RationalCurvePd {
    pub fn to_json(&self) -> CurveJson {
        CurveJson {
            d: self.d,
            beta: self.beta,
            markings: self
                .markings
                .iter()
                .map(|(s, t)| [format_rational(s), format_rational(t)])
                .collect(),
            contacts: self.contacts.clone(),
            lambda: self.lambda.iter().map(format_rational).collect(),
            forms: self
                .forms
                .iter()
                .map(|f| f.coeffs.iter().map(format_rational).collect())
                .collect(),
        }
    }

    /// Reads the stored data verbatim; certification is left to [`verify_tangency`].
    pub fn from_json(json: &CurveJson) -> Result<Self> {
        let parse_all = |v: &[String]| {
            v.iter()
                .map(|x| parse_rational(x))
                .collect::<Result<Vec<_>>>()
        };
        let markings = json
            .markings
            .iter()
            .map(|[s, t]| Ok((parse_rational(s)?, parse_rational(t)?)))
            .collect::<Result<Vec<_>>>()?;
        let lambda = parse_all(&json.lambda)?;
        let forms = json
            .forms
            .iter()
            .map(|coeffs| {
                let coeffs = parse_all(coeffs)?;
                if coeffs.len() as u64 != json.beta + 1 {
                    return Err(Error::InvalidCurve(format!(
                        "form has {} coefficients, expected beta+1",
                        coeffs.len()
                    )));
                }
                Ok(BinaryForm {
                    degree: json.beta as usize,
                    coeffs,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        check_contact_shape(json.d, &json.contacts)?;
        if markings.len() != json.contacts.len() {
            return Err(Error::DimensionMismatch {
                expected: json.contacts.len(),
                found: markings.len(),
            });
        }
        if lambda.iter().any(Zero::is_zero) {
            return Err(Error::InvalidCurve("scalars must be nonzero".into()));
        }
        Ok(RationalCurvePd {
            d: json.d,
            beta: json.beta,
            markings,
            contacts: json.contacts.clone(),
            lambda,
            forms,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{int, rational};

    fn p1_example() -> RationalCurvePd {
        let markings: Vec<Point> = [1, 2, 3].iter().map(|&s| (int(s), int(-1))).collect();
        let contacts = vec![vec![0, 2], vec![0, 3], vec![5, 0]];
        build_curve(1, &markings, &contacts, &[int(1), int(1)]).unwrap()
    }

    #[test]
    fn p1_example_forms() {
        let c = p1_example();
        let r = PolyRing::new(Rationals);
        assert_eq!(c.beta, 5);
        assert_eq!(c.lambda, vec![int(1), int(1)]);
        // independent expansion: x_1 = (t + s)^2 (2t + s)^3, x_0 = (3t + s)^5
        let lin = |a: i64| r.linear_form(int(1), int(a));
        let x1 = r.form_mul(&r.form_pow(&lin(1), 2), &r.form_pow(&lin(2), 3));
        let x0 = r.form_pow(&lin(3), 5);
        assert_eq!(c.forms, vec![x0, x1]);
        assert_eq!(evaluate(&c, &b_infinity()), vec![int(1), int(1)]);
        // b_0: lambda_i prod s_k^{c_{k,i}}
        assert_eq!(evaluate(&c, &b_zero()), vec![int(243), int(8)]);
    }

    #[test]
    fn tangency_examples() {
        let c = p1_example();
        let cert = verify_tangency(&c, None).unwrap();
        assert_eq!(cert.table, vec![vec![0, 2], vec![0, 3], vec![5, 0]]);
        let cert = verify_tangency(
            &c,
            Some(&[Multiplicity::Finite(5), Multiplicity::Finite(2)]),
        )
        .unwrap();
        assert!(cert.campana.unwrap().is_campana_type());
        let cert = verify_tangency(
            &c,
            Some(&[Multiplicity::Finite(5), Multiplicity::Finite(3)]),
        )
        .unwrap();
        assert!(!cert.campana.unwrap().is_campana_type());
    }

    #[test]
    fn perturbed_form_is_detected() {
        let mut c = p1_example();
        c.forms[1].coeffs[2] += int(1);
        assert!(matches!(
            verify_tangency(&c, None),
            Err(Error::TangencyMismatch { hyperplane: 1, .. })
        ));
        let mut c = p1_example();
        c.lambda[0] = int(2);
        assert!(matches!(
            verify_tangency(&c, None),
            Err(Error::InvalidCurve(_))
        ));
    }

    #[test]
    fn evaluation_at_markings_hits_boundary() {
        let c = p1_example();
        for (k, m) in c.markings.iter().enumerate() {
            let v = evaluate(&c, m);
            for (x, &c_ki) in v.iter().zip(&c.contacts[k]) {
                assert_eq!(x.is_zero(), c_ki > 0);
            }
        }
    }

    #[test]
    fn build_errors() {
        let m: Vec<Point> = [1, 1, 3].iter().map(|&s| (int(s), int(-1))).collect();
        let contacts = vec![vec![0, 2], vec![0, 3], vec![5, 0]];
        assert!(build_curve(1, &m, &contacts, &[int(1), int(1)]).is_err());
        // projectively equal markings
        let m = vec![(int(1), int(-1)), (int(-2), int(2)), (int(3), int(-1))];
        assert!(build_curve(1, &m, &contacts, &[int(1), int(1)]).is_err());
        let m: Vec<Point> = [1, 2, 3].iter().map(|&s| (int(s), int(-1))).collect();
        assert!(build_curve(
            1,
            &m,
            &[vec![0, 2], vec![0, 3], vec![4, 0]],
            &[int(1), int(1)]
        )
        .is_err());
        assert!(build_curve(1, &m, &contacts, &[int(0), int(1)]).is_err());
        let at_inf = vec![(int(1), int(0)), (int(2), int(-1)), (int(3), int(-1))];
        assert!(build_curve(1, &at_inf, &contacts, &[int(1), int(1)]).is_err());
    }

    #[test]
    fn general_markings_and_scalars() {
        // markings with t_k != -1 still evaluate to x_inf at b_inf
        let m = vec![
            (rational(1, 2), int(3)),
            (int(-4), int(5)),
            (int(7), rational(-2, 3)),
        ];
        let contacts = vec![vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 2]];
        let x = vec![int(3), rational(-1, 5), int(7)];
        let c = build_curve(2, &m, &contacts, &x).unwrap();
        assert_eq!(evaluate(&c, &b_infinity()), x);
        verify_tangency(&c, None).unwrap();
    }

    #[test]
    fn separability_examples() {
        assert_eq!(
            separability_rank(
                1,
                &[vec![0, 2], vec![0, 3], vec![5, 0]],
                Characteristic::ZERO
            )
            .unwrap()
            .rank,
            1
        );
        let c = vec![vec![0, 3, 0], vec![0, 0, 3], vec![3, 0, 0]];
        let three = Characteristic::new(3).unwrap();
        assert_eq!(separability_rank(2, &c, three).unwrap().rank, 0);
        assert_eq!(
            separability_rank(2, &c, Characteristic::ZERO).unwrap().rank,
            2
        );
    }

    #[test]
    fn json_round_trip() {
        let c = p1_example();
        let j = c.to_json();
        assert_eq!(j.markings[0], ["1/1".to_string(), "-1/1".to_string()]);
        let text = serde_json::to_string(&j).unwrap();
        let back = RationalCurvePd::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn seeded_markings_are_reproducible() {
        let p = Characteristic::new(7).unwrap();
        let a = seeded_markings(42, 6, p);
        assert_eq!(a, seeded_markings(42, 6, p));
        assert_ne!(a, seeded_markings(43, 6, p));
        let f = PrimeField::new(7).unwrap();
        let res: std::collections::BTreeSet<u64> =
            a.iter().map(|q| f.from_rational(q).unwrap()).collect();
        assert_eq!(res.len(), 6);
        assert!(!res.contains(&0));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        /// Contact tables whose columns each sum to `beta`.
        fn tables() -> impl Strategy<Value = (usize, Vec<Vec<u64>>)> {
            (1usize..=3, 1u64..=8, 2usize..=5).prop_flat_map(|(d, beta, n)| {
                let column =
                    proptest::collection::vec(0..=beta, n - 1).prop_map(move |mut cuts| {
                        cuts.sort_unstable();
                        let mut parts = Vec::with_capacity(n);
                        let mut prev = 0;
                        for c in cuts.into_iter().chain(std::iter::once(beta)) {
                            parts.push(c - prev);
                            prev = c;
                        }
                        parts
                    });
                proptest::collection::vec(column, d + 1).prop_map(move |cols| {
                    let rows: Vec<Vec<u64>> = (0..n)
                        .map(|k| cols.iter().map(|c| c[k]).collect::<Vec<u64>>())
                        .filter(|r| r.iter().any(|&v| v > 0))
                        .collect();
                    (d, rows)
                })
            })
        }

        proptest! {
            #[test]
            fn build_then_verify((d, table) in tables(), seed in 0u64..1000) {
                prop_assume!(check_contact_shape(d, &table).is_ok());
                let s = seeded_markings(seed, table.len(), Characteristic::ZERO);
                let x: Vec<BigRational> = (0..=d).map(|i| int(i as i64 + 1)).collect();
                let curve = build_curve(d, &normalized_markings(&s), &table, &x).unwrap();
                let cert = verify_tangency(&curve, None).unwrap();
                prop_assert_eq!(cert.table, table);
                prop_assert!(cert.forms_coprime);
                prop_assert!(projectively_equal(&evaluate(&curve, &b_infinity()), &x));
            }
        }
    }
}
