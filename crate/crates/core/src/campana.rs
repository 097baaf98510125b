//! Campana multiplicity structures on toric boundaries: weights, the
//! Campana-type condition on contact orders, Campana jets, and a generator of
//! Campana-type contact collections with full rank and no `p`-torsion.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::fan::{ContactCollection, Fan};
use crate::field::{Characteristic, Field, Rationals};
use crate::lattice::{has_char_torsion, quotient_torsion, sublattice_rank};
use crate::poly::UniPoly;

/// Multiplicity `m` of a boundary component; `Infinite` has weight 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Multiplicity {
    Finite(u64),
    Infinite,
}

impl Multiplicity {
    pub fn finite(m: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidMultiplicities(
                "multiplicities must be >= 1".into(),
            ));
        }
        Ok(Multiplicity::Finite(m))
    }

    /// `1 - 1/m`, and `1` for `m = inf`.
    pub fn weight(&self) -> BigRational {
        match *self {
            Multiplicity::Finite(m) => {
                BigRational::one() - BigRational::new(BigInt::one(), BigInt::from(m))
            }
            Multiplicity::Infinite => BigRational::one(),
        }
    }

    pub fn as_finite(&self) -> Option<u64> {
        match *self {
            Multiplicity::Finite(m) => Some(m),
            Multiplicity::Infinite => None,
        }
    }
}

impl PartialOrd for Multiplicity {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Multiplicity {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use Multiplicity::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.cmp(b),
            (Finite(_), Infinite) => std::cmp::Ordering::Less,
            (Infinite, Finite(_)) => std::cmp::Ordering::Greater,
            (Infinite, Infinite) => std::cmp::Ordering::Equal,
        }
    }
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Multiplicity::Finite(m) => write!(f, "{m}"),
            Multiplicity::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Multiplicity {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Multiplicity::Finite(m) => s.serialize_u64(*m),
            Multiplicity::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Multiplicity {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(u64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(m) => Multiplicity::finite(m).map_err(serde::de::Error::custom),
            Raw::Str(s) if s == "inf" || s == "∞" => Ok(Multiplicity::Infinite),
            Raw::Str(s) => s
                .parse::<u64>()
                .map_err(|_| {
                    serde::de::Error::custom(format!(
                        "multiplicity must be a positive integer or \"inf\", got {s:?}"
                    ))
                })
                .and_then(|m| Multiplicity::finite(m).map_err(serde::de::Error::custom)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicitiesJson {
    pub multiplicities: Vec<Multiplicity>,
}

/// One multiplicity per ray of a fan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CampanaStructure {
    multiplicities: Vec<Multiplicity>,
}

impl CampanaStructure {
    pub fn new(fan: &Fan, multiplicities: Vec<Multiplicity>) -> Result<Self> {
        if multiplicities.len() != fan.ray_count() {
            return Err(Error::InvalidMultiplicities(format!(
                "{} multiplicities for {} rays",
                multiplicities.len(),
                fan.ray_count()
            )));
        }
        Self::from_multiplicities(multiplicities)
    }

    /// A structure not tied to a fan, e.g. the hyperplanes of `P^d` or points of `P^1`.
    pub fn from_multiplicities(multiplicities: Vec<Multiplicity>) -> Result<Self> {
        if multiplicities.contains(&Multiplicity::Finite(0)) {
            return Err(Error::InvalidMultiplicities(
                "multiplicities must be >= 1".into(),
            ));
        }
        Ok(CampanaStructure { multiplicities })
    }

    pub fn uniform(fan: &Fan, m: Multiplicity) -> Result<Self> {
        Self::new(fan, vec![m; fan.ray_count()])
    }

    pub fn multiplicities(&self) -> &[Multiplicity] {
        &self.multiplicities
    }

    pub fn weights(&self) -> Vec<BigRational> {
        self.multiplicities
            .iter()
            .map(Multiplicity::weight)
            .collect()
    }

    /// All multiplicities finite.
    pub fn is_klt(&self) -> bool {
        self.multiplicities.iter().all(|m| m.as_finite().is_some())
    }

    /// `sup` of the multiplicities, when all are finite.
    pub fn max_finite(&self) -> Option<u64> {
        self.multiplicities
            .iter()
            .map(Multiplicity::as_finite)
            .collect::<Option<Vec<_>>>()?
            .into_iter()
            .max()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// `0 < c < m` on a finite-multiplicity component.
    BelowMultiplicity {
        marking: usize,
        ray: usize,
        coefficient: u64,
        multiplicity: u64,
    },
    /// A second marking meets an infinite-multiplicity component.
    RepeatedInfiniteContact {
        marking: usize,
        ray: usize,
        first_marking: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CampanaTypeReport {
    pub violations: Vec<Violation>,
}

impl CampanaTypeReport {
    pub fn is_campana_type(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Campana-type check on a coefficient table `table[k][i] = c_{k,i}`.
pub fn campana_type_of_table(
    table: &[Vec<u64>],
    multiplicities: &[Multiplicity],
) -> Result<CampanaTypeReport> {
    let mut violations = Vec::new();
    for row in table {
        if row.len() != multiplicities.len() {
            return Err(Error::DimensionMismatch {
                expected: multiplicities.len(),
                found: row.len(),
            });
        }
    }
    for (i, m) in multiplicities.iter().enumerate() {
        match *m {
            Multiplicity::Finite(m) => {
                for (k, row) in table.iter().enumerate() {
                    let c = row[i];
                    if c > 0 && c < m {
                        violations.push(Violation::BelowMultiplicity {
                            marking: k,
                            ray: i,
                            coefficient: c,
                            multiplicity: m,
                        });
                    }
                }
            }
            Multiplicity::Infinite => {
                let mut first = None;
                for (k, row) in table.iter().enumerate() {
                    if row[i] == 0 {
                        continue;
                    }
                    match first {
                        None => first = Some(k),
                        Some(f) => violations.push(Violation::RepeatedInfiniteContact {
                            marking: k,
                            ray: i,
                            first_marking: f,
                        }),
                    }
                }
            }
        }
    }
    Ok(CampanaTypeReport { violations })
}

pub fn is_campana_type(
    contacts: &ContactCollection,
    structure: &CampanaStructure,
) -> Result<CampanaTypeReport> {
    if contacts.ray_count() != structure.multiplicities.len() {
        return Err(Error::DimensionMismatch {
            expected: structure.multiplicities.len(),
            found: contacts.ray_count(),
        });
    }
    campana_type_of_table(&contacts.coefficient_table(), &structure.multiplicities)
}

/// `Z.varsigma` has rank `d` and `N / Z.varsigma` has no `p`-torsion.
pub fn check_full_rank_no_p_torsion(
    contacts: &ContactCollection,
    p: Characteristic,
) -> Result<bool> {
    let points = contacts.points();
    let rank = sublattice_rank(&points, contacts.dim())?;
    let torsion = quotient_torsion(&points, contacts.dim())?;
    Ok(rank == contacts.dim() && !has_char_torsion(&torsion, p))
}

/// Splits `degree = t1 + t2` with both parts `>= m` and prime to `p`.
/// Starts at `floor(degree/2)` and shifts `t1` down, then up, by the
/// smallest amount that works; returns `(t1, t2)`.
pub fn split_degree(degree: u64, m: u64, p: Characteristic) -> Option<(u64, u64)> {
    if degree < 2 * m {
        return None;
    }
    let mid = degree / 2;
    let ok = |t: u64| t >= m && degree - t >= m && !p.divides(t) && !p.divides(degree - t);
    (0..=mid - m)
        .map(|shift| mid - shift)
        .chain(mid + 1..=degree - m)
        .find(|&t| ok(t))
        .map(|t| (t, degree - t))
}

/// Two markings per ray, each a multiple of a single ray generator, with
/// `t1 + t2 = D_rho`, `t1, t2 >= max m` and neither divisible by `p`.
pub fn generate_campana_contacts(
    fan: &Fan,
    structure: &CampanaStructure,
    per_ray_degree: &[u64],
    p: Characteristic,
) -> Result<ContactCollection> {
    if per_ray_degree.len() != fan.ray_count() {
        return Err(Error::DimensionMismatch {
            expected: fan.ray_count(),
            found: per_ray_degree.len(),
        });
    }
    if structure.multiplicities.len() != fan.ray_count() {
        return Err(Error::DimensionMismatch {
            expected: fan.ray_count(),
            found: structure.multiplicities.len(),
        });
    }
    if let Some(ray) = structure
        .multiplicities
        .iter()
        .position(|m| m.as_finite().is_none())
    {
        return Err(Error::NotKlt(ray));
    }
    let m = structure.max_finite().unwrap_or(1);
    let mut weighted = vec![0i64; fan.dim()];
    for (ray, &d) in per_ray_degree.iter().enumerate() {
        for (x, u) in weighted.iter_mut().zip(&fan.rays()[ray].0) {
            *x += d as i64 * u;
        }
    }
    if weighted.iter().any(|&x| x != 0) {
        return Err(Error::UnbalancedDegrees(weighted));
    }
    let bound = 2 * m + 2;
    if let Some((ray, &degree)) = per_ray_degree.iter().enumerate().find(|&(_, &d)| d < bound) {
        return Err(Error::DegreeBelowBound { ray, degree, bound });
    }
    let mut table = Vec::with_capacity(2 * fan.ray_count());
    for (ray, &degree) in per_ray_degree.iter().enumerate() {
        let (t1, t2) = split_degree(degree, m, p).ok_or(Error::InfeasibleSplit {
            ray,
            degree,
            min: m,
            p: p.get(),
        })?;
        for t in [t1, t2] {
            let mut row = vec![0u64; fan.ray_count()];
            row[ray] = t;
            table.push(row);
        }
    }
    ContactCollection::from_coefficients(fan, &table)
}

/// A jet of order `n` described by the `t`-adic valuations of the pulled-back
/// boundary ideals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CampanaJet {
    pub order: u64,
    pub valuations: Vec<JetValuation>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum JetValuation {
    Exact(u64),
    /// At least `n + 1`: the truncation cannot see the exact order.
    Saturated,
}

impl JetValuation {
    fn lower_bound(&self, order: u64) -> u64 {
        match *self {
            JetValuation::Exact(v) => v,
            JetValuation::Saturated => order + 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JetJson {
    pub n: u64,
    pub valuations: Vec<u64>,
}

impl CampanaJet {
    /// Values above `n` are recorded as saturated.
    pub fn new(order: u64, valuations: &[u64]) -> Self {
        let valuations = valuations
            .iter()
            .map(|&v| {
                if v > order {
                    JetValuation::Saturated
                } else {
                    JetValuation::Exact(v)
                }
            })
            .collect();
        CampanaJet { order, valuations }
    }

    pub fn from_json(json: &JetJson) -> Self {
        Self::new(json.n, &json.valuations)
    }

    /// Valuations of an order-`n` jet of `P^d` given by homogeneous
    /// coordinate series `x_i(t)` (terms above `t^n` are ignored), measured
    /// against the coordinate hyperplanes.
    pub fn from_coordinate_series(order: u64, coords: &[UniPoly<BigRational>]) -> Result<Self> {
        let q = Rationals;
        let ord = |p: &UniPoly<BigRational>| {
            p.coeffs()
                .iter()
                .take(order as usize + 1)
                .position(|c| !q.is_zero(c))
        };
        let orders: Vec<Option<usize>> = coords.iter().map(ord).collect();
        let base = orders
            .iter()
            .flatten()
            .min()
            .copied()
            .ok_or_else(|| Error::InvalidJet("all coordinates vanish to order n".into()))?;
        let valuations = orders
            .iter()
            .map(|o| match o {
                Some(v) if (v - base) as u64 <= order => JetValuation::Exact((v - base) as u64),
                _ => JetValuation::Saturated,
            })
            .collect();
        Ok(CampanaJet { order, valuations })
    }
}

/// `n >= max m_i` over the components the jet meets, and every positive
/// valuation is at least the component's multiplicity.
pub fn check_campana_jet(jet: &CampanaJet, multiplicities: &[Multiplicity]) -> Result<bool> {
    if jet.valuations.len() != multiplicities.len() {
        return Err(Error::DimensionMismatch {
            expected: multiplicities.len(),
            found: jet.valuations.len(),
        });
    }
    let mut needed = 0;
    let mut ok = true;
    for (i, (v, m)) in jet.valuations.iter().zip(multiplicities).enumerate() {
        let v = v.lower_bound(jet.order);
        if v == 0 {
            continue;
        }
        let m = m.as_finite().ok_or_else(|| {
            Error::InvalidJet(format!(
                "component {i} has infinite multiplicity; jets are defined for klt structures"
            ))
        })?;
        needed = needed.max(m);
        ok &= v >= m;
    }
    Ok(ok && jet.order >= needed)
}

/// `sum eps_i`, for reports.
pub fn total_weight(multiplicities: &[Multiplicity]) -> BigRational {
    multiplicities
        .iter()
        .map(Multiplicity::weight)
        .fold(BigRational::zero(), |a, b| a + b)
}
