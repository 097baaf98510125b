//! Orbifold structures on the projective line and their uniformizing covers.

mod covers;

pub use covers::{
    cyclic_cover, dihedral_cover, icosahedral_cover, klein_forms, verify_branch_data,
    BranchCertificate, CoverJson, CoverKind, FiberReport, KleinForms, OrbifoldCover, Syzygy,
};

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::campana::Multiplicity;
use crate::curve::Point;
use crate::error::{Error, Result};
use crate::field::{format_rational, parse_rational, Characteristic};

/// Boundary points of `P^1` with multiplicities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct P1Orbifold {
    points: Vec<Point>,
    multiplicities: Vec<Multiplicity>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct P1OrbifoldJson {
    #[serde(default)]
    pub points: Option<Vec<[String; 2]>>,
    pub multiplicities: Vec<Multiplicity>,
}

impl P1Orbifold {
    pub fn new(points: Vec<Point>, multiplicities: Vec<Multiplicity>) -> Result<Self> {
        if points.len() != multiplicities.len() {
            return Err(Error::DimensionMismatch {
                expected: points.len(),
                found: multiplicities.len(),
            });
        }
        for (k, p) in points.iter().enumerate() {
            if p.0.is_zero() && p.1.is_zero() {
                return Err(Error::InvalidInput(format!("point {k} is [0:0]")));
            }
            for q in &points[..k] {
                if &p.0 * &q.1 == &p.1 * &q.0 {
                    return Err(Error::InvalidInput(format!(
                        "boundary point {k} repeats an earlier point"
                    )));
                }
            }
        }
        if multiplicities
            .iter()
            .any(|m| m.as_finite().is_some_and(|m| m < 2))
        {
            return Err(Error::InvalidMultiplicities(
                "boundary multiplicities must be >= 2 or inf".into(),
            ));
        }
        Ok(P1Orbifold {
            points,
            multiplicities,
        })
    }

    /// Points default to `0, inf, 1, 2, 3, ...` in that order.
    pub fn from_multiplicities(multiplicities: Vec<Multiplicity>) -> Result<Self> {
        let points = (0..multiplicities.len())
            .map(|k| match k {
                0 => (BigRational::zero(), BigRational::one()),
                1 => (BigRational::one(), BigRational::zero()),
                _ => (
                    BigRational::from_integer(BigInt::from(k - 1)),
                    BigRational::one(),
                ),
            })
            .collect();
        Self::new(points, multiplicities)
    }

    pub fn from_json(json: &P1OrbifoldJson) -> Result<Self> {
        match &json.points {
            None => Self::from_multiplicities(json.multiplicities.clone()),
            Some(pts) => {
                let points = pts
                    .iter()
                    .map(|[a, b]| Ok((parse_rational(a)?, parse_rational(b)?)))
                    .collect::<Result<_>>()?;
                Self::new(points, json.multiplicities.clone())
            }
        }
    }

    pub fn to_json(&self) -> P1OrbifoldJson {
        P1OrbifoldJson {
            points: Some(
                self.points
                    .iter()
                    .map(|(a, b)| [format_rational(a), format_rational(b)])
                    .collect(),
            ),
            multiplicities: self.multiplicities.clone(),
        }
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn multiplicities(&self) -> &[Multiplicity] {
        &self.multiplicities
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FanoCheck {
    pub is_fano: bool,
    pub is_klt: bool,
    /// `deg(-K - Delta) = 2 - sum(1 - 1/m_i)`, exact.
    #[serde(serialize_with = "crate::p1::ser_rational")]
    pub degree: BigRational,
}

pub(crate) fn ser_rational<S: serde::Serializer>(
    q: &BigRational,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(q))
}

pub fn klt_fano_check(multiplicities: &[Multiplicity]) -> FanoCheck {
    let total: BigRational = multiplicities.iter().map(Multiplicity::weight).sum();
    let degree = BigRational::from_integer(BigInt::from(2)) - total;
    FanoCheck {
        is_fano: degree > BigRational::zero(),
        is_klt: multiplicities.iter().all(|m| m.as_finite().is_some()),
        degree,
    }
}

/// The three families of minimal uniformizing covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum MaximalCase {
    /// `(m, m)`
    Cyclic { m: u64 },
    /// `(2, 2, m)`
    Dihedral { m: u64 },
    /// `(2, 3, 5)`
    Icosahedral,
}

impl MaximalCase {
    pub fn multiplicities(&self) -> Vec<u64> {
        match *self {
            MaximalCase::Cyclic { m } => vec![m, m],
            MaximalCase::Dihedral { m } => vec![2, 2, m],
            MaximalCase::Icosahedral => vec![2, 3, 5],
        }
    }

    pub fn cover(&self, p: Characteristic) -> Result<OrbifoldCover> {
        match *self {
            MaximalCase::Cyclic { m } => cyclic_cover(m, p),
            MaximalCase::Dihedral { m } => dihedral_cover(m, p),
            MaximalCase::Icosahedral => icosahedral_cover(p),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reduction {
    pub case: MaximalCase,
    /// Multiplicity of the maximal case assigned to each input point; always
    /// `>=` the input, so Campana curves of the case stay Campana for the input.
    pub assigned: Vec<u64>,
}

/// Reduces a klt Fano multiplicity tuple to a dominating maximal case.
/// Entries equal to `1` impose nothing and are assigned `1`.
pub fn maximal_cases(multiplicities: &[Multiplicity]) -> Result<Reduction> {
    let check = klt_fano_check(multiplicities);
    if !check.is_klt {
        return Err(Error::NotKltFano("infinite multiplicity is not klt".into()));
    }
    if !check.is_fano {
        return Err(Error::NotKltFano(format!(
            "degree {} is not positive",
            format_rational(&check.degree)
        )));
    }
    let values: Vec<u64> = multiplicities
        .iter()
        .map(|m| m.as_finite().expect("klt"))
        .collect();
    let mut active: Vec<usize> = (0..values.len()).filter(|&k| values[k] >= 2).collect();
    active.sort_by_key(|&k| (values[k], k));
    let mut assigned = vec![1; values.len()];
    let sorted: Vec<u64> = active.iter().map(|&k| values[k]).collect();
    let case = match sorted.as_slice() {
        [] => MaximalCase::Cyclic { m: 1 },
        [m] => MaximalCase::Cyclic { m: *m },
        [_, m] => MaximalCase::Cyclic { m: *m },
        [2, 2, m] => MaximalCase::Dihedral { m: *m },
        [2, 3, c] if *c <= 5 => MaximalCase::Icosahedral,
        _ => unreachable!("klt Fano tuples have at most three points of the listed shapes"),
    };
    let targets = case.multiplicities();
    // dominance: the sorted input sits under the sorted case tuple
    let offset = targets.len().saturating_sub(sorted.len());
    for (j, &k) in active.iter().enumerate() {
        assigned[k] = targets[offset + j].max(values[k]);
    }
    debug_assert!(assigned.iter().zip(&values).all(|(a, v)| a >= v));
    Ok(Reduction { case, assigned })
}

/// Availability of a tame minimal cover in a given characteristic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CoverAvailability {
    Available { case: MaximalCase },
    Unsupported { reason: String },
    OpenPerSource { question: String },
}

/// Whether a minimal cover for the tuple can be produced in characteristic `p`.
/// The octahedral tuple `(2, 3, 4)` in characteristic 2 is an open question
/// and is reported as such rather than decided.
pub fn cover_availability(
    multiplicities: &[Multiplicity],
    p: Characteristic,
) -> Result<CoverAvailability> {
    let reduction = maximal_cases(multiplicities)?;
    let mut active: Vec<u64> = multiplicities
        .iter()
        .filter_map(|m| m.as_finite())
        .filter(|&m| m >= 2)
        .collect();
    active.sort_unstable();
    if p.get() == 2 && active == [2, 3, 4] {
        return Ok(CoverAvailability::OpenPerSource {
            question: "existence of a minimal-ramification cover for (2,3,4) in characteristic 2 is open per source".into(),
        });
    }
    Ok(match reduction.case.cover(p) {
        Ok(_) => CoverAvailability::Available {
            case: reduction.case,
        },
        Err(Error::UnsupportedCharacteristic { reason, .. }) => {
            CoverAvailability::Unsupported { reason }
        }
        Err(e) => return Err(e),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RiemannHurwitz {
    pub degree: u64,
    pub ramification: u64,
    /// `2 - 2g = 2n - sum(e - 1)`
    pub euler_characteristic: i64,
    pub genus: u64,
    pub rational: bool,
}

/// Riemann-Hurwitz for a tame cover of `P^1` with the given partitions.
pub fn riemann_hurwitz(degree: u64, partitions: &[Vec<u64>]) -> Result<RiemannHurwitz> {
    if degree == 0 {
        return Err(Error::InconsistentBranchData(
            "cover degree must be positive".into(),
        ));
    }
    let mut ramification = 0u64;
    for (i, part) in partitions.iter().enumerate() {
        if part.contains(&0) {
            return Err(Error::InconsistentBranchData(format!(
                "partition {i} has a zero part"
            )));
        }
        let sum: u64 = part.iter().sum();
        if sum != degree {
            return Err(Error::InconsistentBranchData(format!(
                "partition {i} sums to {sum}, not {degree}"
            )));
        }
        ramification += part.iter().map(|e| e - 1).sum::<u64>();
    }
    let chi = 2 * degree as i64 - ramification as i64;
    if chi % 2 != 0 {
        return Err(Error::InconsistentBranchData(format!(
            "Euler characteristic {chi} is odd"
        )));
    }
    if chi > 2 {
        return Err(Error::InconsistentBranchData(format!(
            "Euler characteristic {chi} gives negative genus {}",
            (2 - chi) / 2
        )));
    }
    let genus = ((2 - chi) / 2) as u64;
    Ok(RiemannHurwitz {
        degree,
        ramification,
        euler_characteristic: chi,
        genus,
        rational: genus == 0,
    })
}

/// `n(2 - b) - (2 - r)`: degree of the log normal sheaf of a degree `n` map
/// with `b` boundary points and `r` points over them.
pub fn log_normal_degree(n: u64, b: u64, r: u64) -> i64 {
    n as i64 * (2 - b as i64) - (2 - r as i64)
}

/// Log normal degree after composing `cover` with a general degree `d` map,
/// optionally with one simple ramification point over a marked point.
pub fn composed_log_normal_degree(cover: &OrbifoldCover, d: u64, simple_ramification: bool) -> i64 {
    let (n, b, r) = cover.log_normal_data();
    log_normal_degree(n * d, b, r * d - u64::from(simple_ramification))
}

/// Distinct parts of a partition, mostly for display.
pub fn partition_shape(partition: &[u64]) -> BTreeSet<u64> {
    partition.iter().copied().collect()
}
