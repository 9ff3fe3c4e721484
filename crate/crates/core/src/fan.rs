//! Fans of strongly convex rational simplicial cones in `Z^d`.
//!
//! A [`Fan`] stores primitive ray generators plus maximal cones given as
//! ray-index sets. Construction never fails; structural soundness is
//! established by [`Fan::validate`], and every geometric operation insists
//! on a valid fan first. Expensive derived data (validation report, walls,
//! support function, Smith form of the ray matrix) is computed once per fan
//! and cached immutably.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use once_cell::sync::OnceCell;

use crate::error::{Error, Result};
use crate::lattice::{smith_normal_form, IntMatrix, LatticeVector, SmithForm};
use crate::lp;

/// A cone of the fan, identified by the sorted set of its ray indices.
///
/// Cones here are always simplicial, so a cone is determined by its rays
/// and its dimension equals the number of rays.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cone {
    ray_indices: Vec<usize>,
}

impl Cone {
    pub fn new(indices: impl IntoIterator<Item = usize>) -> Self {
        let mut ray_indices: Vec<usize> = indices.into_iter().collect();
        ray_indices.sort_unstable();
        ray_indices.dedup();
        Cone { ray_indices }
    }

    pub fn rays(&self) -> &[usize] {
        &self.ray_indices
    }

    pub fn dim(&self) -> usize {
        self.ray_indices.len()
    }

    /// True when `other`'s rays are a subset of this cone's rays, i.e.
    /// `other` is a face of this (simplicial) cone.
    pub fn contains(&self, other: &Cone) -> bool {
        other
            .ray_indices
            .iter()
            .all(|i| self.ray_indices.binary_search(i).is_ok())
    }
}

impl fmt::Debug for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, i) in self.ray_indices.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "]")
    }
}

/// A single defect found by validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    RayRankMismatch { ray: usize, expected: usize, got: usize },
    ZeroRay { ray: usize },
    NonPrimitiveRay { ray: usize },
    DuplicateRay { first: usize, second: usize },
    UnusedRay { ray: usize },
    ConeIndexOutOfRange { cone: usize, index: usize },
    ConeNotFullDimensional { cone: usize, dim: usize, expected: usize },
    DegenerateCone { cone: usize },
    DuplicateMaxCone { first: usize, second: usize },
    ImproperIntersection { first: usize, second: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::RayRankMismatch { ray, expected, got } => {
                write!(f, "ray {ray} has {got} coordinates, expected {expected}")
            }
            Violation::ZeroRay { ray } => write!(f, "zero ray {ray}"),
            Violation::NonPrimitiveRay { ray } => write!(f, "non-primitive ray {ray}"),
            Violation::DuplicateRay { first, second } => {
                write!(f, "duplicate ray {second} (same as ray {first})")
            }
            Violation::UnusedRay { ray } => {
                write!(f, "ray {ray} is not used by any maximal cone")
            }
            Violation::ConeIndexOutOfRange { cone, index } => {
                write!(f, "maximal cone {cone}: ray index {index} out of range")
            }
            Violation::ConeNotFullDimensional { cone, dim, expected } => {
                write!(f, "maximal cone {cone} has dimension {dim}, expected {expected}")
            }
            Violation::DegenerateCone { cone } => {
                write!(f, "maximal cone {cone} has linearly dependent rays")
            }
            Violation::DuplicateMaxCone { first, second } => {
                write!(f, "duplicate maximal cone {second} (same as cone {first})")
            }
            Violation::ImproperIntersection { first, second } => {
                write!(
                    f,
                    "maximal cones {first} and {second} do not intersect in a common face"
                )
            }
        }
    }
}

/// Exhaustive list of everything wrong with a fan; empty means valid.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ValidationReport {
    violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "no violations");
        }
        for (k, violation) in self.violations.iter().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            write!(f, "violation: {violation}")?;
        }
        Ok(())
    }
}

/// A wall: a codimension-one cone `tau` shared by exactly two maximal cones.
///
/// The rays of the two cones satisfy a unique integer relation
/// `u' + u + sum_i alpha_i rho_i = 0`, normalized so that the coefficient
/// of both opposite rays `u`, `u'` is `1`; smoothness makes that
/// normalization exact over `Z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wall {
    tau: Cone,
    sigma: usize,
    sigma_prime: usize,
    opposite: (usize, usize),
    relation: Vec<(usize, BigInt)>,
}

impl Wall {
    pub fn tau(&self) -> &Cone {
        &self.tau
    }

    /// Index (into `max_cones`) of the first adjacent maximal cone.
    pub fn sigma(&self) -> usize {
        self.sigma
    }

    /// Index of the second adjacent maximal cone.
    pub fn sigma_prime(&self) -> usize {
        self.sigma_prime
    }

    /// Ray indices `(u, u')`: the ray of `sigma` opposite the wall, then
    /// the ray of `sigma_prime` opposite the wall.
    pub fn opposite_rays(&self) -> (usize, usize) {
        self.opposite
    }

    /// Relation coefficients on the rays of `sigma ∪ sigma_prime`, sorted
    /// by ray index. Rays outside the support have coefficient zero and do
    /// not appear.
    pub fn relation(&self) -> &[(usize, BigInt)] {
        &self.relation
    }

    pub fn coefficient(&self, ray: usize) -> BigInt {
        self.relation
            .iter()
            .find(|(r, _)| *r == ray)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(BigInt::zero)
    }
}

/// An exact witness of projectivity: one linear functional per maximal
/// cone, interpolating common values on the rays and strictly convex
/// across every wall.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportFunction {
    ray_values: Vec<BigInt>,
    cone_functionals: Vec<Vec<BigInt>>,
}

impl SupportFunction {
    /// Value prescribed on each ray (the functional of any cone containing
    /// the ray evaluates to minus this value on it).
    pub fn ray_values(&self) -> &[BigInt] {
        &self.ray_values
    }

    /// The linear functional attached to maximal cone `i`.
    pub fn cone_functional(&self, i: usize) -> &[BigInt] {
        &self.cone_functionals[i]
    }

    /// Re-check every equality and strict inequality demanded of a strictly
    /// convex support function, using only exact integer arithmetic and
    /// none of the solver's internal state.
    pub fn verify(&self, fan: &Fan) -> Result<bool> {
        if self.ray_values.len() != fan.rays().len()
            || self.cone_functionals.len() != fan.max_cones().len()
            || self.cone_functionals.iter().any(|m| m.len() != fan.rank())
        {
            return Ok(false);
        }
        let eval = |cone: usize, ray: usize| -> BigInt {
            self.cone_functionals[cone]
                .iter()
                .zip(fan.ray(ray).coords())
                .map(|(m, u)| m * u)
                .sum()
        };
        // Each functional interpolates the ray values on its own cone.
        for (ci, cone) in fan.max_cones().iter().enumerate() {
            for &r in cone.rays() {
                if eval(ci, r) != -&self.ray_values[r] {
                    return Ok(false);
                }
            }
        }
        for wall in fan.walls()? {
            let (s, sp) = (wall.sigma(), wall.sigma_prime());
            // Agreement on the wall.
            for &r in wall.tau().rays() {
                if eval(s, r) != eval(sp, r) {
                    return Ok(false);
                }
            }
            // Strict convexity, from both sides.
            let (u, u_prime) = wall.opposite_rays();
            if eval(s, u_prime) <= eval(sp, u_prime) {
                return Ok(false);
            }
            if eval(sp, u) <= eval(s, u) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Clone, Default)]
struct FanCaches {
    validation: OnceCell<ValidationReport>,
    smooth: OnceCell<bool>,
    complete: OnceCell<bool>,
    walls: OnceCell<Vec<Wall>>,
    support: OnceCell<Option<SupportFunction>>,
    ray_snf: OnceCell<SmithForm>,
}

/// A fan in `Z^rank`: primitive rays plus full-dimensional simplicial
/// maximal cones.
#[derive(Clone)]
pub struct Fan {
    rank: usize,
    rays: Vec<LatticeVector>,
    max_cones: Vec<Cone>,
    caches: FanCaches,
}

impl PartialEq for Fan {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.rays == other.rays && self.max_cones == other.max_cones
    }
}

impl Eq for Fan {}

impl fmt::Debug for Fan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Fan")
            .field("rank", &self.rank)
            .field("rays", &self.rays)
            .field("max_cones", &self.max_cones)
            .finish()
    }
}

impl Fan {
    /// Assemble a fan from raw data. No geometric checks happen here; call
    /// [`Fan::validate`] (or any operation, which does so implicitly) to
    /// find out whether the data is sound.
    pub fn new(rank: usize, rays: Vec<LatticeVector>, max_cones: Vec<Vec<usize>>) -> Fan {
        Fan {
            rank,
            rays,
            max_cones: max_cones.into_iter().map(Cone::new).collect(),
            caches: FanCaches::default(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &LatticeVector {
        &self.rays[i]
    }

    pub fn max_cones(&self) -> &[Cone] {
        &self.max_cones
    }

    pub fn max_cone(&self, i: usize) -> &Cone {
        &self.max_cones[i]
    }

    /// Matrix whose columns are the rays of `cone`, in sorted index order.
    pub(crate) fn cone_matrix(&self, cone: &Cone) -> IntMatrix {
        let cols: Vec<LatticeVector> =
            cone.rays().iter().map(|&i| self.rays[i].clone()).collect();
        IntMatrix::from_columns(&cols).expect("validated cone rays share the fan rank")
    }

    /// Full structural validation. The report lists every violation found:
    /// ray defects (wrong rank, zero, non-primitive, duplicates), cone
    /// defects (bad indices, wrong dimension, dependent rays, duplicates),
    /// unused rays, and pairs of maximal cones whose intersection is not a
    /// common face. The pairwise check is an exact rational feasibility
    /// problem, so no valid pair is ever flagged.
    pub fn validate(&self) -> &ValidationReport {
        self.caches.validation.get_or_init(|| self.run_validation())
    }

    fn run_validation(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let nrays = self.rays.len();

        let mut ray_ok = vec![true; nrays];
        for (i, ray) in self.rays.iter().enumerate() {
            if ray.rank() != self.rank {
                violations.push(Violation::RayRankMismatch {
                    ray: i,
                    expected: self.rank,
                    got: ray.rank(),
                });
                ray_ok[i] = false;
            } else if ray.is_zero() {
                violations.push(Violation::ZeroRay { ray: i });
            } else if !ray.is_primitive() {
                violations.push(Violation::NonPrimitiveRay { ray: i });
            }
        }

        let mut seen: BTreeMap<&LatticeVector, usize> = BTreeMap::new();
        for (i, ray) in self.rays.iter().enumerate() {
            match seen.get(ray) {
                Some(&first) => {
                    violations.push(Violation::DuplicateRay { first, second: i })
                }
                None => {
                    seen.insert(ray, i);
                }
            }
        }

        let mut cone_ok = vec![true; self.max_cones.len()];
        let mut cone_inverses: Vec<Option<IntMatrix>> = vec![None; self.max_cones.len()];
        for (ci, cone) in self.max_cones.iter().enumerate() {
            let mut indices_ok = true;
            for &idx in cone.rays() {
                if idx >= nrays {
                    violations.push(Violation::ConeIndexOutOfRange { cone: ci, index: idx });
                    indices_ok = false;
                }
            }
            if !indices_ok {
                cone_ok[ci] = false;
                continue;
            }
            if cone.dim() != self.rank {
                violations.push(Violation::ConeNotFullDimensional {
                    cone: ci,
                    dim: cone.dim(),
                    expected: self.rank,
                });
                cone_ok[ci] = false;
                continue;
            }
            if cone.rays().iter().any(|&idx| !ray_ok[idx]) {
                cone_ok[ci] = false;
                continue;
            }
            let matrix = self.cone_matrix(cone);
            let det = matrix.determinant().expect("cone matrix is square");
            if det.is_zero() {
                violations.push(Violation::DegenerateCone { cone: ci });
                cone_ok[ci] = false;
            } else if det.abs().is_one() {
                // Kept for the fast separating-functional certificate in
                // the pairwise intersection check below.
                cone_inverses[ci] = matrix.inverse_unimodular().ok().flatten();
            }
        }

        let mut first_of: BTreeMap<&Cone, usize> = BTreeMap::new();
        let mut duplicate = vec![false; self.max_cones.len()];
        for (ci, cone) in self.max_cones.iter().enumerate() {
            match first_of.get(cone) {
                Some(&first) => {
                    violations.push(Violation::DuplicateMaxCone { first, second: ci });
                    duplicate[ci] = true;
                }
                None => {
                    first_of.insert(cone, ci);
                }
            }
        }

        let mut used = vec![false; nrays];
        for cone in &self.max_cones {
            for &idx in cone.rays() {
                if idx < nrays {
                    used[idx] = true;
                }
            }
        }
        for (i, &u) in used.iter().enumerate() {
            if !u {
                violations.push(Violation::UnusedRay { ray: i });
            }
        }

        for i in 0..self.max_cones.len() {
            for j in i + 1..self.max_cones.len() {
                if !cone_ok[i] || !cone_ok[j] || duplicate[i] || duplicate[j] {
                    continue;
                }
                if self.max_cones[i] == self.max_cones[j] {
                    continue;
                }
                if !self.pair_intersects_in_common_face(i, j, &cone_inverses) {
                    violations.push(Violation::ImproperIntersection { first: i, second: j });
                }
            }
        }

        ValidationReport { violations }
    }

    /// Cheap sufficient certificate that cones `a` and `b` meet in their
    /// common face, using the dual basis of cone `a`.
    ///
    /// Let `w` be the sum of the dual-basis functionals of `a`'s non-shared
    /// rays. Then `w` vanishes on the shared rays and equals `1` on each
    /// non-shared ray of `a`; if `w` is additionally nonpositive on every
    /// non-shared ray of `b`, any point of the intersection has `w = 0`,
    /// forcing its `a`-coordinates off the shared rays to vanish. The
    /// certificate can fail on genuinely proper pairs; callers must then
    /// fall back to the exact feasibility test.
    fn face_certificate(&self, a: usize, b: usize, inv_a: &IntMatrix) -> bool {
        let ca = &self.max_cones[a];
        let cb = &self.max_cones[b];
        let shared = |r: usize| cb.rays().binary_search(&r).is_ok();
        let mut w = vec![BigInt::zero(); self.rank];
        for (pos, &r) in ca.rays().iter().enumerate() {
            if !shared(r) {
                for (k, entry) in w.iter_mut().enumerate() {
                    *entry += inv_a.at(pos, k);
                }
            }
        }
        cb.rays()
            .iter()
            .filter(|&&r| !ca.rays().binary_search(&r).is_ok())
            .all(|&r| {
                let value: BigInt = w
                    .iter()
                    .zip(self.rays[r].coords())
                    .map(|(wk, uk)| wk * uk)
                    .sum();
                !value.is_positive()
            })
    }

    /// Decide whether `max_cones[i] ∩ max_cones[j]` equals the cone on
    /// their common rays.
    ///
    /// Writing points of cone `i` in the basis formed by its own rays, the
    /// intersection fails to be the common face exactly when it contains a
    /// point with positive coordinate on a non-shared ray — an exact
    /// rational feasibility question.
    fn pair_intersects_in_common_face(
        &self,
        i: usize,
        j: usize,
        inverses: &[Option<IntMatrix>],
    ) -> bool {
        let d = self.rank;
        let ci = &self.max_cones[i];
        let cj = &self.max_cones[j];
        let common: BTreeSet<usize> = ci
            .rays()
            .iter()
            .copied()
            .filter(|r| cj.rays().binary_search(r).is_ok())
            .collect();
        let free_positions: Vec<usize> = ci
            .rays()
            .iter()
            .enumerate()
            .filter(|(_, r)| !common.contains(r))
            .map(|(pos, _)| pos)
            .collect();
        if free_positions.is_empty() {
            return true; // equal cones are handled as duplicates
        }

        if let Some(inv) = &inverses[i] {
            if self.face_certificate(i, j, inv) {
                return true;
            }
        }
        if let Some(inv) = &inverses[j] {
            if self.face_certificate(j, i, inv) {
                return true;
            }
        }

        let mj = self.cone_matrix(cj);
        // Column c of `t` holds the cj-basis coordinates of ci's c-th ray.
        let mut t: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); d]; d];
        for (c, &ray_idx) in ci.rays().iter().enumerate() {
            let col = mj
                .solve_rational(self.rays[ray_idx].coords())
                .expect("cone matrix is square")
                .expect("cone matrix is invertible");
            for (r, value) in col.into_iter().enumerate() {
                t[r][c] = value;
            }
        }

        // Variables: lambda_0..lambda_{d-1} (ci coordinates), then d slack
        // variables turning `T lambda >= 0` into equalities.
        let cols = 2 * d;
        let mut a: Vec<Vec<BigRational>> = Vec::with_capacity(d + 1);
        let mut b: Vec<BigRational> = Vec::with_capacity(d + 1);
        for r in 0..d {
            let mut row = vec![BigRational::zero(); cols];
            row[..d].clone_from_slice(&t[r]);
            row[d + r] = -BigRational::one();
            a.push(row);
            b.push(BigRational::zero());
        }
        let mut selector = vec![BigRational::zero(); cols];
        for &pos in &free_positions {
            selector[pos] = BigRational::one();
        }
        a.push(selector);
        b.push(BigRational::one());

        lp::solve_eq_nonneg(&a, &b).is_none()
    }

    fn ensure_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidFan(report.clone()))
        }
    }

    /// True when every maximal cone's rays form a basis of the lattice.
    pub fn is_smooth(&self) -> Result<bool> {
        self.ensure_valid()?;
        self.caches
            .smooth
            .get_or_try_init(|| {
                for cone in &self.max_cones {
                    let det = self.cone_matrix(cone).determinant()?;
                    if !det.abs().is_one() {
                        return Ok(false);
                    }
                }
                Ok(true)
            })
            .copied()
    }

    fn ensure_smooth(&self) -> Result<()> {
        if self.is_smooth()? {
            Ok(())
        } else {
            Err(Error::NotSmooth)
        }
    }

    /// Map from each codimension-one face (as sorted ray indices) to the
    /// maximal cones containing it. Assumes a valid fan.
    fn ridge_map(&self) -> BTreeMap<Vec<usize>, Vec<usize>> {
        let mut map: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for (ci, cone) in self.max_cones.iter().enumerate() {
            for drop in 0..cone.dim() {
                let mut key = cone.rays().to_vec();
                key.remove(drop);
                map.entry(key).or_default().push(ci);
            }
        }
        map
    }

    /// True when the cones cover all of `R^rank`.
    ///
    /// Criterion for a valid pure simplicial fan: every codimension-one
    /// face lies in exactly two maximal cones and the wall-adjacency graph
    /// is connected. A one-sided face would be a boundary piece of the
    /// support, and a disconnected cover of `R^rank` is impossible.
    pub fn is_complete(&self) -> Result<bool> {
        self.ensure_valid()?;
        self.caches
            .complete
            .get_or_try_init(|| {
                if self.rank == 0 {
                    // The point: complete iff the zero cone is present.
                    return Ok(self.max_cones.len() == 1);
                }
                if self.max_cones.is_empty() {
                    return Ok(false);
                }
                let ridges = self.ridge_map();
                let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); self.max_cones.len()];
                for cones in ridges.values() {
                    if cones.len() != 2 {
                        return Ok(false);
                    }
                    adjacency[cones[0]].push(cones[1]);
                    adjacency[cones[1]].push(cones[0]);
                }
                let mut visited = vec![false; self.max_cones.len()];
                let mut queue = vec![0usize];
                visited[0] = true;
                while let Some(c) = queue.pop() {
                    for &next in &adjacency[c] {
                        if !visited[next] {
                            visited[next] = true;
                            queue.push(next);
                        }
                    }
                }
                Ok(visited.into_iter().all(|v| v))
            })
            .copied()
    }

    fn ensure_complete(&self) -> Result<()> {
        if self.is_complete()? {
            Ok(())
        } else {
            Err(Error::NotComplete)
        }
    }

    /// All walls of a smooth complete fan, each with its normalized integer
    /// relation. Walls are ordered lexicographically by the sorted ray
    /// indices of `tau`, which makes the sequence deterministic.
    pub fn walls(&self) -> Result<&[Wall]> {
        self.ensure_smooth()?;
        self.ensure_complete()?;
        self.caches
            .walls
            .get_or_try_init(|| {
                let mut walls = Vec::new();
                for (key, cones) in self.ridge_map() {
                    let (i, j) = match cones.as_slice() {
                        &[a, b] => (a.min(b), a.max(b)),
                        _ => {
                            return Err(Error::Internal(
                                "complete fan must pair codimension-one faces".into(),
                            ))
                        }
                    };
                    walls.push(self.build_wall(key, i, j)?);
                }
                Ok(walls)
            })
            .map(Vec::as_slice)
    }

    fn build_wall(&self, tau_key: Vec<usize>, i: usize, j: usize) -> Result<Wall> {
        let sigma = &self.max_cones[i];
        let sigma_prime = &self.max_cones[j];
        let in_tau = |r: usize| tau_key.binary_search(&r).is_ok();
        let opp_u = *sigma
            .rays()
            .iter()
            .find(|&&r| !in_tau(r))
            .ok_or_else(|| Error::Internal("wall must omit one ray of sigma".into()))?;
        let opp_u_prime = *sigma_prime
            .rays()
            .iter()
            .find(|&&r| !in_tau(r))
            .ok_or_else(|| Error::Internal("wall must omit one ray of sigma_prime".into()))?;

        // Coordinates of u' in the basis formed by sigma's rays. The
        // opposite ray u must carry coordinate -1 there; anything else
        // breaks the normalization and signals a bug.
        let m = self.cone_matrix(sigma);
        let coords = m
            .solve_integer(self.rays[opp_u_prime].coords())?
            .ok_or_else(|| {
                Error::Internal("opposite ray must have integer coordinates in a smooth cone".into())
            })?;
        let mut relation: Vec<(usize, BigInt)> = Vec::with_capacity(self.rank + 1);
        relation.push((opp_u_prime, BigInt::one()));
        for (pos, &ray_idx) in sigma.rays().iter().enumerate() {
            if ray_idx == opp_u {
                if coords[pos] != BigInt::from(-1) {
                    return Err(Error::Internal(
                        "wall relation failed to normalize to coefficient one".into(),
                    ));
                }
                relation.push((ray_idx, BigInt::one()));
            } else {
                relation.push((ray_idx, -&coords[pos]));
            }
        }
        relation.sort_by_key(|(r, _)| *r);

        // The defining identity of the relation, re-checked exactly.
        let mut sum = LatticeVector::zero(self.rank);
        for (ray_idx, coeff) in &relation {
            sum = sum.add(&self.rays[*ray_idx].scaled(coeff));
        }
        if !sum.is_zero() {
            return Err(Error::Internal("wall relation does not sum to zero".into()));
        }

        Ok(Wall {
            tau: Cone::new(tau_key),
            sigma: i,
            sigma_prime: j,
            opposite: (opp_u, opp_u_prime),
            relation,
        })
    }

    /// The strictly convex support function witnessing projectivity, if one
    /// exists.
    ///
    /// Solved as an exact rational feasibility problem. On a smooth fan a
    /// support function is determined by its values on the rays (each cone
    /// functional interpolates them through a unimodular basis), so the
    /// solver works with one value per ray; the strict inequality across
    /// each wall becomes `>= 1` after scaling. The witness handed back is
    /// re-verified from scratch before this method returns it.
    pub fn support_function(&self) -> Result<Option<&SupportFunction>> {
        self.ensure_smooth()?;
        self.ensure_complete()?;
        self.caches
            .support
            .get_or_try_init(|| {
                let walls = self.walls()?;
                let nrays = self.rays.len();
                let constraints: Vec<(Vec<BigRational>, BigRational)> = walls
                    .iter()
                    .map(|w| {
                        let mut row = vec![BigRational::zero(); nrays];
                        for (ray_idx, coeff) in w.relation() {
                            row[*ray_idx] = BigRational::from(coeff.clone());
                        }
                        (row, BigRational::one())
                    })
                    .collect();
                let solution = match lp::solve_ge_free(&constraints, nrays) {
                    Some(s) => s,
                    None => return Ok(None),
                };
                // Clear denominators; the constraint system is invariant
                // under positive scaling.
                let scale = solution
                    .iter()
                    .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                let ray_values: Vec<BigInt> = solution
                    .iter()
                    .map(|x| (x * BigRational::from(scale.clone())).to_integer())
                    .collect();
                let mut cone_functionals = Vec::with_capacity(self.max_cones.len());
                for cone in &self.max_cones {
                    let rhs: Vec<BigInt> =
                        cone.rays().iter().map(|&r| -&ray_values[r]).collect();
                    let functional = self
                        .cone_matrix(cone)
                        .transpose()
                        .solve_integer(&rhs)?
                        .ok_or_else(|| {
                            Error::Internal(
                                "support functional must be integral on a smooth cone".into(),
                            )
                        })?;
                    cone_functionals.push(functional);
                }
                let sf = SupportFunction {
                    ray_values,
                    cone_functionals,
                };
                if !sf.verify(self)? {
                    return Err(Error::Internal(
                        "support function witness failed re-verification".into(),
                    ));
                }
                Ok(Some(sf))
            })
            .map(Option::as_ref)
    }

    /// True when the fan admits a strictly convex support function.
    pub fn is_projective(&self) -> Result<bool> {
        Ok(self.support_function()?.is_some())
    }

    /// Dimension of the torus orbit attached to a cone of the fan:
    /// `rank - dim(cone)`. The zero cone yields the dense orbit.
    pub fn orbit_dim(&self, cone: &Cone) -> Result<usize> {
        self.ensure_valid()?;
        if cone.rays().iter().any(|&r| r >= self.rays.len()) {
            return Err(Error::ConeNotInFan);
        }
        let in_fan = cone.dim() == 0 || self.max_cones.iter().any(|c| c.contains(cone));
        if !in_fan {
            return Err(Error::ConeNotInFan);
        }
        Ok(self.rank - cone.dim())
    }

    /// Smith form of the matrix whose rows are the rays; fixed basis for
    /// the divisor class group.
    pub(crate) fn ray_matrix_snf(&self) -> Result<&SmithForm> {
        self.caches.ray_snf.get_or_try_init(|| {
            let rows: Vec<Vec<BigInt>> = self
                .rays
                .iter()
                .map(|r| r.coords().to_vec())
                .collect();
            smith_normal_form(&IntMatrix::from_rows(rows)?)
        })
    }
}
