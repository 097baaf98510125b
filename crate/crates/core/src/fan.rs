//! Simplicial fans, smoothness and completeness, and the dictionary between
//! contact orders and lattice points of the support of a smooth fan.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Rationals;
use crate::lattice::{smith_normal_form, IntegerMatrix, LatticeVector};
use crate::linalg;

/// A simplicial fan in `N = Z^dim`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fan {
    dim: usize,
    rays: Vec<LatticeVector>,
    max_cones: Vec<Vec<usize>>,
}

/// On-disk fan description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanJson {
    pub dim: usize,
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
}

impl Fan {
    /// Validates primitivity of rays and linear independence of every cone.
    pub fn new(dim: usize, rays: Vec<LatticeVector>, max_cones: Vec<Vec<usize>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidFan("dimension must be positive".into()));
        }
        for (i, r) in rays.iter().enumerate() {
            if r.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: r.dim(),
                });
            }
            if !r.is_primitive() {
                return Err(Error::InvalidFan(format!(
                    "ray {i} = {:?} is zero or not primitive",
                    r.0
                )));
            }
        }
        if rays.iter().collect::<BTreeSet<_>>().len() != rays.len() {
            return Err(Error::InvalidFan("duplicate rays".into()));
        }
        let mut seen = BTreeSet::new();
        let mut cones = Vec::with_capacity(max_cones.len());
        for cone in max_cones {
            if cone.is_empty() {
                return Err(Error::InvalidFan("empty maximal cone".into()));
            }
            if let Some(&bad) = cone.iter().find(|&&i| i >= rays.len()) {
                return Err(Error::InvalidFan(format!(
                    "cone refers to missing ray {bad}"
                )));
            }
            let sorted: Vec<usize> = cone
                .iter()
                .copied()
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            if sorted.len() != cone.len() {
                return Err(Error::InvalidFan(format!("cone {cone:?} repeats a ray")));
            }
            let generators: Vec<LatticeVector> = sorted.iter().map(|&i| rays[i].clone()).collect();
            if smith_normal_form(&IntegerMatrix::from_vectors(&generators, dim)?).rank()
                != sorted.len()
            {
                return Err(Error::InvalidFan(format!(
                    "cone {sorted:?} is not simplicial"
                )));
            }
            if !seen.insert(sorted.clone()) {
                return Err(Error::InvalidFan(format!("cone {sorted:?} listed twice")));
            }
            cones.push(sorted);
        }
        Ok(Fan {
            dim,
            rays,
            max_cones: cones,
        })
    }

    pub fn from_json(json: &FanJson) -> Result<Self> {
        Fan::new(
            json.dim,
            json.rays.iter().cloned().map(LatticeVector::new).collect(),
            json.max_cones.clone(),
        )
    }

    pub fn to_json(&self) -> FanJson {
        FanJson {
            dim: self.dim,
            rays: self.rays.iter().map(|r| r.0.clone()).collect(),
            max_cones: self.max_cones.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn ray_count(&self) -> usize {
        self.rays.len()
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    fn cone_matrix(&self, cone: &[usize]) -> IntegerMatrix {
        let gens: Vec<LatticeVector> = cone.iter().map(|&i| self.rays[i].clone()).collect();
        IntegerMatrix::from_vectors(&gens, self.dim).expect("rays validated")
    }

    /// Every maximal cone's generators extend to a lattice basis.
    pub fn is_smooth(&self) -> bool {
        self.max_cones.iter().all(|cone| {
            let snf = smith_normal_form(&self.cone_matrix(cone));
            snf.rank() == cone.len() && snf.torsion_factors().is_empty()
        })
    }

    /// Every maximal cone is full-dimensional and every wall lies in exactly
    /// two maximal cones.
    pub fn is_complete(&self) -> bool {
        if self.max_cones.iter().any(|c| c.len() != self.dim) {
            return false;
        }
        let mut walls: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for cone in &self.max_cones {
            for skip in 0..cone.len() {
                let wall: Vec<usize> = cone
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != skip)
                    .map(|(_, &r)| r)
                    .collect();
                *walls.entry(wall).or_default() += 1;
            }
        }
        !walls.is_empty() && walls.values().all(|&n| n == 2)
    }

    /// Writes `c` in the generators of the minimal cone containing it.
    pub fn decompose_contact_order(&self, c: &LatticeVector) -> Result<ContactOrder> {
        if c.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: c.dim(),
            });
        }
        if c.is_zero() {
            return Err(Error::ZeroContactOrder);
        }
        if !self.is_smooth() {
            return Err(Error::NotSmooth);
        }
        let q = Rationals;
        let target: Vec<BigRational> =
            c.0.iter()
                .map(|&x| BigRational::from_integer(x.into()))
                .collect();
        for cone in &self.max_cones {
            // columns are the cone's rays: dim x |cone| system
            let system: Vec<Vec<BigRational>> = (0..self.dim)
                .map(|row| {
                    cone.iter()
                        .map(|&r| BigRational::from_integer(self.rays[r].0[row].into()))
                        .collect()
                })
                .collect();
            let Some(coords) = linalg::solve(&q, &system, &target) else {
                continue;
            };
            if coords.iter().any(|x| x.is_negative()) {
                continue;
            }
            let mut decomposition = BTreeMap::new();
            for (&ray, x) in cone.iter().zip(&coords) {
                if x.is_zero() {
                    continue;
                }
                assert!(x.is_integer(), "smooth cone gives integral coordinates");
                let value = x
                    .to_integer()
                    .to_u64()
                    .ok_or_else(|| Error::InvalidInput("coefficient too large".into()))?;
                decomposition.insert(ray, value);
            }
            return Ok(ContactOrder {
                point: c.clone(),
                decomposition,
            });
        }
        Err(Error::OutsideSupport(c.0.clone()))
    }
}

/// Fan of `P^d`: rays `rho_0 = -(e_1 + ... + e_d), rho_1 = e_1, ..., rho_d = e_d`,
/// so ray `i` corresponds to the hyperplane `x_i = 0`. Cone `i` omits ray `i`.
pub fn projective_space_fan(d: usize) -> Result<Fan> {
    if d < 1 {
        return Err(Error::InvalidFan("projective space needs d >= 1".into()));
    }
    let mut rays = vec![LatticeVector::new(vec![-1; d])];
    for i in 0..d {
        let mut e = vec![0; d];
        e[i] = 1;
        rays.push(LatticeVector::new(e));
    }
    let cones = (0..=d)
        .map(|skip| (0..=d).filter(|&r| r != skip).collect())
        .collect();
    Fan::new(d, rays, cones)
}

/// A positive contact order: a nonzero lattice point together with its
/// coefficients on the rays of its minimal cone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContactOrder {
    pub point: LatticeVector,
    pub decomposition: BTreeMap<usize, u64>,
}

impl ContactOrder {
    pub fn coefficient(&self, ray: usize) -> u64 {
        self.decomposition.get(&ray).copied().unwrap_or(0)
    }

    /// `sum c_rho * u_rho`
    pub fn reassemble(&self, fan: &Fan) -> LatticeVector {
        let mut v = vec![0i64; fan.dim()];
        for (&ray, &c) in &self.decomposition {
            for (x, u) in v.iter_mut().zip(&fan.rays()[ray].0) {
                *x += c as i64 * u;
            }
        }
        LatticeVector::new(v)
    }
}

/// The markings' contact orders `c_1, ..., c_n` on a fixed fan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContactCollection {
    dim: usize,
    ray_count: usize,
    orders: Vec<ContactOrder>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContactsJson {
    pub orders: Vec<Vec<i64>>,
}

impl ContactCollection {
    pub fn from_points(fan: &Fan, points: &[LatticeVector]) -> Result<Self> {
        let orders = points
            .iter()
            .map(|p| fan.decompose_contact_order(p))
            .collect::<Result<Vec<_>>>()?;
        Ok(ContactCollection {
            dim: fan.dim(),
            ray_count: fan.ray_count(),
            orders,
        })
    }

    pub fn from_json(fan: &Fan, json: &ContactsJson) -> Result<Self> {
        let points: Vec<LatticeVector> = json
            .orders
            .iter()
            .cloned()
            .map(LatticeVector::new)
            .collect();
        Self::from_points(fan, &points)
    }

    /// Builds a collection from per-marking ray coefficients (`table[k][ray]`).
    pub fn from_coefficients(fan: &Fan, table: &[Vec<u64>]) -> Result<Self> {
        let mut orders = Vec::with_capacity(table.len());
        for row in table {
            if row.len() != fan.ray_count() {
                return Err(Error::DimensionMismatch {
                    expected: fan.ray_count(),
                    found: row.len(),
                });
            }
            let decomposition: BTreeMap<usize, u64> = row
                .iter()
                .enumerate()
                .filter(|&(_, &c)| c > 0)
                .map(|(i, &c)| (i, c))
                .collect();
            let order = ContactOrder {
                point: LatticeVector::zero(fan.dim()),
                decomposition,
            };
            let point = order.reassemble(fan);
            let canonical = fan.decompose_contact_order(&point)?;
            if canonical.decomposition != order.decomposition {
                return Err(Error::InvalidInput(format!(
                    "coefficients {row:?} do not lie on a single cone of the fan"
                )));
            }
            orders.push(canonical);
        }
        Ok(ContactCollection {
            dim: fan.dim(),
            ray_count: fan.ray_count(),
            orders,
        })
    }

    pub fn to_json(&self) -> ContactsJson {
        ContactsJson {
            orders: self.orders.iter().map(|o| o.point.0.clone()).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ray_count(&self) -> usize {
        self.ray_count
    }

    pub fn len(&self) -> usize {
        self.orders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn orders(&self) -> &[ContactOrder] {
        &self.orders
    }

    pub fn points(&self) -> Vec<LatticeVector> {
        self.orders.iter().map(|o| o.point.clone()).collect()
    }

    /// `table[k][ray] = c_{k,ray}`
    pub fn coefficient_table(&self) -> Vec<Vec<u64>> {
        self.orders
            .iter()
            .map(|o| (0..self.ray_count).map(|r| o.coefficient(r)).collect())
            .collect()
    }

    /// The lattice-point sum of all contact orders vanishes.
    pub fn check_balancing(&self) -> bool {
        let mut sum = vec![BigInt::zero(); self.dim];
        for o in &self.orders {
            for (acc, &x) in sum.iter_mut().zip(&o.point.0) {
                *acc += x;
            }
        }
        sum.iter().all(Zero::is_zero)
    }

    pub fn divisor_degrees(&self) -> DivisorDegrees {
        let totals: Vec<u64> = (0..self.ray_count)
            .map(|r| self.orders.iter().map(|o| o.coefficient(r)).sum())
            .collect();
        let beta = match totals.first() {
            Some(&b) if totals.iter().all(|&t| t == b) => Some(b),
            _ => None,
        };
        DivisorDegrees { totals, beta }
    }
}

/// Per-ray totals `D_rho = sum_k c_{k,rho}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DivisorDegrees {
    pub totals: Vec<u64>,
    /// Common value of all totals, when they agree. On `P^d` this is the
    /// degree of the curve class.
    pub beta: Option<u64>,
}

impl DivisorDegrees {
    /// `sum D_rho * u_rho`; vanishes exactly for balanced collections.
    pub fn weighted_sum(&self, fan: &Fan) -> Vec<i64> {
        let mut v = vec![0i64; fan.dim()];
        for (ray, &d) in self.totals.iter().enumerate() {
            for (x, u) in v.iter_mut().zip(&fan.rays()[ray].0) {
                *x += d as i64 * u;
            }
        }
        v
    }
}
