//! Cyclic, dihedral and icosahedral covers with exact branch certification.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::riemann_hurwitz;
use crate::curve::Point;
use crate::error::{Error, Result};
use crate::field::{format_rational, parse_rational, Characteristic, Field, PrimeField, Rationals};
use crate::poly::{BinaryForm, PolyRing};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CoverKind {
    Cyclic { m: u64 },
    Dihedral { m: u64 },
    Icosahedral,
    Custom,
}

/// Which sign makes the Klein syzygy hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Syzygy {
    /// `T^2 = -H^3 + 1728 f^5`
    #[serde(rename = "T^2 = -H^3 + 1728 f^5")]
    MinusH,
    /// `T^2 = H^3 - 1728 f^5`
    #[serde(rename = "T^2 = H^3 - 1728 f^5")]
    PlusH,
}

/// A map `[s:t] -> [num : den]` of degree `n` with certified branching.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbifoldCover {
    pub kind: CoverKind,
    pub num: BinaryForm<BigRational>,
    pub den: BinaryForm<BigRational>,
    pub branch: Vec<(Point, Vec<u64>)>,
    pub characteristic: Characteristic,
    pub syzygy: Option<Syzygy>,
    pub certificate: BranchCertificate,
}

impl OrbifoldCover {
    pub fn degree(&self) -> u64 {
        self.num.degree as u64
    }

    pub fn partitions(&self) -> Vec<Vec<u64>> {
        self.branch.iter().map(|(_, p)| p.clone()).collect()
    }

    /// `(n, b, r)`: degree, branch point count, and points over them.
    pub fn log_normal_data(&self) -> (u64, u64, u64) {
        let r = self.branch.iter().map(|(_, p)| p.len() as u64).sum();
        (self.degree(), self.branch.len() as u64, r)
    }

    pub fn to_json(&self) -> CoverJson {
        CoverJson {
            degree: self.degree(),
            num: self.num.coeffs.iter().map(format_rational).collect(),
            den: self.den.coeffs.iter().map(format_rational).collect(),
            branch: self
                .branch
                .iter()
                .map(|((a, b), p)| BranchJson {
                    value: [format_rational(a), format_rational(b)],
                    partition: p.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchJson {
    pub value: [String; 2],
    pub partition: Vec<u64>,
}

/// Exchange format; `num[a]` multiplies `s^a t^(n-a)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverJson {
    pub degree: u64,
    pub num: Vec<String>,
    pub den: Vec<String>,
    pub branch: Vec<BranchJson>,
}

impl CoverJson {
    /// Parsed forms and claimed branch data.
    #[allow(clippy::type_complexity)]
    pub fn parse(
        &self,
    ) -> Result<(
        BinaryForm<BigRational>,
        BinaryForm<BigRational>,
        Vec<(Point, Vec<u64>)>,
    )> {
        let n = self.degree as usize;
        let form = |v: &[String], name: &str| -> Result<BinaryForm<BigRational>> {
            if v.len() != n + 1 {
                return Err(Error::InvalidForm(format!(
                    "{name} needs {} coefficients, got {}",
                    n + 1,
                    v.len()
                )));
            }
            Ok(BinaryForm {
                degree: n,
                coeffs: v.iter().map(|c| parse_rational(c)).collect::<Result<_>>()?,
            })
        };
        let branch = self
            .branch
            .iter()
            .map(|b| {
                Ok((
                    (parse_rational(&b.value[0])?, parse_rational(&b.value[1])?),
                    b.partition.clone(),
                ))
            })
            .collect::<Result<_>>()?;
        Ok((form(&self.num, "num")?, form(&self.den, "den")?, branch))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberReport {
    pub value: [String; 2],
    pub claimed: Vec<u64>,
    pub computed: Vec<u64>,
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BranchCertificate {
    pub degree: u64,
    pub characteristic: u64,
    pub fibers: Vec<FiberReport>,
    /// `sum(e - 1)` over the claimed points.
    pub ramification: u64,
    /// The Wronskian is nonzero and the claimed ramification exhausts its degree `2n - 2`.
    pub unramified_elsewhere: bool,
}

impl BranchCertificate {
    pub fn certified(&self) -> bool {
        self.unramified_elsewhere && self.fibers.iter().all(|f| f.matches)
    }
}

/// Geometric ramification partition of the zero set of a nonzero form:
/// a squarefree factor of degree `e` and multiplicity `mu` gives `e` parts `mu`.
fn form_partition<F: Field>(ring: &PolyRing<F>, g: &BinaryForm<F::Elem>) -> Vec<u64> {
    let mut parts = Vec::new();
    let at_inf = ring.infinity_multiplicity(g);
    if at_inf > 0 {
        parts.push(at_inf as u64);
    }
    let affine = ring.dehomogenize(g);
    if !ring.is_constant(&affine) {
        for (factor, mu) in ring.squarefree_decomposition(&affine) {
            let e = factor.degree().unwrap_or(0);
            parts.extend(std::iter::repeat_n(mu, e));
        }
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    parts
}

fn certify_in<F: Field>(
    field: F,
    num: &BinaryForm<BigRational>,
    den: &BinaryForm<BigRational>,
    claimed: &[(Point, Vec<u64>)],
) -> Result<BranchCertificate> {
    let ring = PolyRing::new(field);
    let conv = |q: &BigRational| field.from_rational(q);
    let (f, g) = (
        ring.map_form::<Rationals>(num, conv)?,
        ring.map_form::<Rationals>(den, conv)?,
    );
    let n = f.degree;
    if ring.form_is_zero(&f) || ring.form_is_zero(&g) {
        return Err(Error::InvalidForm(
            "numerator and denominator must be nonzero".into(),
        ));
    }
    if !ring.forms_coprime(&[f.clone(), g.clone()]) {
        return Err(Error::NotCoprime);
    }
    for (k, ((a, b), _)) in claimed.iter().enumerate() {
        for ((c, d), _) in &claimed[..k] {
            if a * d == b * c {
                return Err(Error::InvalidInput(format!(
                    "branch value {k} repeats an earlier value"
                )));
            }
        }
    }
    let mut fibers = Vec::with_capacity(claimed.len());
    let mut ramification = 0u64;
    for ((a, b), partition) in claimed {
        let (a_f, b_f) = (conv(a)?, conv(b)?);
        if field.is_zero(&a_f) && field.is_zero(&b_f) {
            return Err(Error::InvalidInput("branch value [0:0]".into()));
        }
        // zeros of b*num - a*den are the preimages of [a:b]
        let fiber = ring.form_combine(&b_f, &f, &field.neg(&a_f), &g);
        let computed = form_partition(&ring, &fiber);
        let mut claimed_sorted = partition.clone();
        claimed_sorted.sort_unstable_by(|x, y| y.cmp(x));
        ramification += partition.iter().map(|e| e.saturating_sub(1)).sum::<u64>();
        fibers.push(FiberReport {
            value: [format_rational(a), format_rational(b)],
            matches: computed == claimed_sorted,
            claimed: partition.clone(),
            computed,
        });
    }
    // Wronskian F_s G_t - F_t G_s has degree 2n - 2 and vanishes to order e - 1
    // at each tame ramification point of index e.
    let wronskian = ring.form_combine(
        &field.one(),
        &ring.form_mul(&ring.partial_s(&f), &ring.partial_t(&g)),
        &field.neg(&field.one()),
        &ring.form_mul(&ring.partial_t(&f), &ring.partial_s(&g)),
    );
    let expected = 2 * n as u64 - 2;
    let unramified_elsewhere = !ring.form_is_zero(&wronskian) && ramification == expected;
    Ok(BranchCertificate {
        degree: n as u64,
        characteristic: field.characteristic().get(),
        fibers,
        ramification,
        unramified_elsewhere,
    })
}

/// Recomputes the ramification partitions of `[num : den]` over each claimed
/// value by exact squarefree factorization, over `Q` or `F_p`.
pub fn verify_branch_data(
    num: &BinaryForm<BigRational>,
    den: &BinaryForm<BigRational>,
    claimed: &[(Point, Vec<u64>)],
    p: Characteristic,
) -> Result<BranchCertificate> {
    if num.degree != den.degree || num.degree == 0 {
        return Err(Error::InvalidForm(format!(
            "forms must share a positive degree, got {} and {}",
            num.degree, den.degree
        )));
    }
    if p.is_zero() {
        certify_in(Rationals, num, den, claimed)
    } else {
        certify_in(PrimeField::new(p.get())?, num, den, claimed)
    }
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn sparse_form(degree: usize, terms: &[(usize, i64)]) -> BinaryForm<BigRational> {
    let mut coeffs = vec![BigRational::zero(); degree + 1];
    for &(a, c) in terms {
        coeffs[a] = q(c);
    }
    BinaryForm { degree, coeffs }
}

fn point(a: i64, b: i64) -> Point {
    (q(a), q(b))
}

fn finish(
    kind: CoverKind,
    num: BinaryForm<BigRational>,
    den: BinaryForm<BigRational>,
    branch: Vec<(Point, Vec<u64>)>,
    p: Characteristic,
    syzygy: Option<Syzygy>,
) -> Result<OrbifoldCover> {
    let certificate = verify_branch_data(&num, &den, &branch, p)?;
    if !certificate.certified() {
        let bad: Vec<String> = certificate
            .fibers
            .iter()
            .filter(|f| !f.matches)
            .map(|f| {
                format!(
                    "[{}:{}] claimed {:?} computed {:?}",
                    f.value[0], f.value[1], f.claimed, f.computed
                )
            })
            .collect();
        return Err(Error::BranchMismatch(if bad.is_empty() {
            "extra ramification".into()
        } else {
            bad.join("; ")
        }));
    }
    let partitions: Vec<Vec<u64>> = branch.iter().map(|(_, p)| p.clone()).collect();
    let rh = riemann_hurwitz(num.degree as u64, &partitions)?;
    debug_assert!(rh.rational);
    Ok(OrbifoldCover {
        kind,
        num,
        den,
        branch,
        characteristic: p,
        syzygy,
        certificate,
    })
}

/// `[s:t] -> [s^m : t^m]`, totally ramified over `[1:0]` and `[0:1]`.
pub fn cyclic_cover(m: u64, p: Characteristic) -> Result<OrbifoldCover> {
    if m == 0 {
        return Err(Error::InvalidInput("cyclic cover needs m >= 1".into()));
    }
    if p.divides(m) {
        return Err(Error::UnsupportedCharacteristic {
            p: p.get(),
            reason: format!("{} divides m = {m}; wild ramification", p.get()),
        });
    }
    let n = m as usize;
    let num = sparse_form(n, &[(n, 1)]);
    let den = sparse_form(n, &[(0, 1)]);
    let branch = vec![(point(1, 0), vec![m]), (point(0, 1), vec![m])];
    finish(CoverKind::Cyclic { m }, num, den, branch, p, None)
}

/// `[s:t] -> [s^{2m} + t^{2m} : 2 s^m t^m]`, branch data `(m,m), (2^m), (2^m)`.
pub fn dihedral_cover(m: u64, p: Characteristic) -> Result<OrbifoldCover> {
    if m < 2 {
        return Err(Error::InvalidInput("dihedral cover needs m >= 2".into()));
    }
    if p.divides(2 * m) {
        return Err(Error::UnsupportedCharacteristic {
            p: p.get(),
            reason: format!("{} divides 2m = {}", p.get(), 2 * m),
        });
    }
    let n = 2 * m as usize;
    let num = sparse_form(n, &[(n, 1), (0, 1)]);
    let den = sparse_form(n, &[(m as usize, 2)]);
    let branch = vec![
        (point(1, 0), vec![m, m]),
        (point(1, 1), vec![2; m as usize]),
        (point(-1, 1), vec![2; m as usize]),
    ];
    finish(CoverKind::Dihedral { m }, num, den, branch, p, None)
}

/// Klein's icosahedral invariants in the classical normalization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KleinForms {
    pub f: BinaryForm<BigRational>,
    pub h: BinaryForm<BigRational>,
    pub t: BinaryForm<BigRational>,
}

pub fn klein_forms() -> KleinForms {
    KleinForms {
        // st(s^10 + 11 s^5 t^5 - t^10)
        f: sparse_form(12, &[(11, 1), (6, 11), (1, -1)]),
        // -(s^20 + t^20) + 228(s^15 t^5 - s^5 t^15) - 494 s^10 t^10
        h: sparse_form(20, &[(20, -1), (0, -1), (15, 228), (5, -228), (10, -494)]),
        // (s^30 + t^30) + 522(s^25 t^5 - s^5 t^25) - 10005(s^20 t^10 + s^10 t^20)
        t: sparse_form(
            30,
            &[
                (30, 1),
                (0, 1),
                (25, 522),
                (5, -522),
                (20, -10005),
                (10, -10005),
            ],
        ),
    }
}

impl KleinForms {
    /// Checks the syzygy exactly and returns the sign that holds.
    pub fn syzygy(&self) -> Result<Syzygy> {
        let ring = PolyRing::new(Rationals);
        let t2 = ring.form_pow(&self.t, 2);
        let h3 = ring.form_pow(&self.h, 3);
        let f5 = ring.form_pow(&self.f, 5);
        let rhs = ring.form_combine(&q(-1), &h3, &q(1728), &f5);
        if t2 == rhs {
            Ok(Syzygy::MinusH)
        } else if ring.form_scale(&t2, &q(-1)) == rhs {
            Ok(Syzygy::PlusH)
        } else {
            Err(Error::SyzygyFailed)
        }
    }
}

fn has_distinct_roots(form: &BinaryForm<BigRational>, p: Characteristic) -> Result<bool> {
    fn check<F: Field>(field: F, form: &BinaryForm<BigRational>) -> Result<bool> {
        let ring = PolyRing::new(field);
        let g = ring.map_form::<Rationals>(form, |q| field.from_rational(q))?;
        Ok(!ring.form_is_zero(&g) && form_partition(&ring, &g) == vec![1; form.degree])
    }
    if p.is_zero() {
        check(Rationals, form)
    } else {
        check(PrimeField::new(p.get())?, form)
    }
}

/// `[s:t] -> [H^3 : 1728 f^5]`, degree 60, branch data `(5^12), (3^20), (2^30)`.
pub fn icosahedral_cover(p: Characteristic) -> Result<OrbifoldCover> {
    if [2, 3, 5].contains(&p.get()) {
        return Err(Error::UnsupportedCharacteristic {
            p: p.get(),
            reason: "the icosahedral group order 60 is divisible by the characteristic".into(),
        });
    }
    let k = klein_forms();
    let syzygy = k.syzygy()?;
    let ring = PolyRing::new(Rationals);
    // each invariant has distinct roots
    for (form, name) in [(&k.f, "f"), (&k.h, "H"), (&k.t, "T")] {
        if !has_distinct_roots(form, p)? {
            return Err(Error::BranchMismatch(format!("{name} is not squarefree")));
        }
    }
    let num = ring.form_pow(&k.h, 3);
    let den = ring.form_scale(&ring.form_pow(&k.f, 5), &q(1728));
    let branch = vec![
        (point(1, 0), vec![5; 12]),
        (point(0, 1), vec![3; 20]),
        (point(1, 1), vec![2; 30]),
    ];
    finish(CoverKind::Icosahedral, num, den, branch, p, Some(syzygy))
}
