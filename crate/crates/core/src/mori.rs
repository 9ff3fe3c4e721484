//! Curve classes, the Mori cone, and extremal contractions.
//!
//! Numerical classes of curves on a smooth complete fan live in the lattice
//! of integer relations among the rays; the class of a wall is its relation
//! vector. The Mori cone is spanned by the wall classes, extremal rays are
//! the generators that cannot be expressed inside the cone of the others,
//! and each extremal ray carries a length and a contraction profile read
//! off from a minimal wall on the ray.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::divisor;
use crate::error::{Error, Result};
use crate::fan::{Fan, Wall};
use crate::lp;

/// A numerical curve class: an integer relation among the rays, stored
/// densely (one entry per ray of the fan it belongs to).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CurveClass {
    entries: Vec<BigInt>,
}

impl CurveClass {
    pub fn new(entries: Vec<BigInt>) -> Self {
        CurveClass { entries }
    }

    pub fn from_i64(entries: &[i64]) -> Self {
        CurveClass {
            entries: entries.iter().map(|&e| BigInt::from(e)).collect(),
        }
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn scaled(&self, factor: &BigInt) -> CurveClass {
        CurveClass {
            entries: self.entries.iter().map(|e| e * factor).collect(),
        }
    }

    /// The primitive class on the same ray of the relation lattice:
    /// entries divided by their (positive) greatest common divisor.
    pub fn primitive(&self) -> Result<CurveClass> {
        let content = self
            .entries
            .iter()
            .fold(BigInt::zero(), |acc, e| acc.gcd(e));
        if content.is_zero() {
            return Err(Error::ZeroVector);
        }
        Ok(CurveClass {
            entries: self.entries.iter().map(|e| e / &content).collect(),
        })
    }
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, e) in self.entries.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// How the contraction of an extremal ray behaves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContractionKind {
    /// No ray of the wall relation has a negative coefficient: the
    /// contraction is a fibration onto a lower-dimensional variety.
    Fibration,
    /// Exactly one negative coefficient: the contraction shrinks a
    /// divisor.
    Divisorial,
    /// Two or more negative coefficients: the exceptional locus has
    /// codimension at least two.
    Small,
}

impl fmt::Display for ContractionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ContractionKind::Fibration => write!(f, "fibration"),
            ContractionKind::Divisorial => write!(f, "divisorial"),
            ContractionKind::Small => write!(f, "small"),
        }
    }
}

/// Combinatorial profile of the contraction of an extremal ray, read from
/// a wall of minimal anticanonical degree on the ray.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionProfile {
    /// Primitive generator of the extremal ray.
    pub ray: CurveClass,
    /// Length of the ray: minimal `-K . C` over wall classes on the ray.
    pub length: BigInt,
    /// Number of positive coefficients in the minimal wall relation
    /// (always includes the two normalized ones).
    pub pos_rays: usize,
    /// Number of negative coefficients in the minimal wall relation.
    pub neg_rays: usize,
    /// Number of zero coefficients on the relation's support.
    pub zero_rays: usize,
    pub kind: ContractionKind,
    /// Dimension of a general fiber of the contraction on its exceptional
    /// locus.
    pub fiber_dim: usize,
    /// Dimension of the exceptional locus (the whole variety for a
    /// fibration).
    pub locus_dim: usize,
}

/// The numerical class of the curve `V(tau)` attached to a wall.
pub fn curve_class(fan: &Fan, wall: &Wall) -> Result<CurveClass> {
    let walls = fan.walls()?;
    if !walls.contains(wall) {
        return Err(Error::ForeignWall);
    }
    let mut entries = vec![BigInt::zero(); fan.rays().len()];
    for (ray, coeff) in wall.relation() {
        entries[*ray] = coeff.clone();
    }
    Ok(CurveClass { entries })
}

/// Generators of the Mori cone: the distinct wall classes, in wall order.
///
/// Requires projectivity: only then is the cone guaranteed pointed, so
/// that extremality and lengths downstream are meaningful.
pub fn mori_generators(fan: &Fan) -> Result<Vec<CurveClass>> {
    if !fan.is_projective()? {
        return Err(Error::NotProjective);
    }
    let mut generators: Vec<CurveClass> = Vec::new();
    for wall in fan.walls()? {
        let class = curve_class(fan, wall)?;
        if !generators.contains(&class) {
            generators.push(class);
        }
    }
    Ok(generators)
}

/// Whether `target` lies in the convex cone spanned by `generators`,
/// decided exactly.
fn in_cone(target: &CurveClass, generators: &[CurveClass]) -> bool {
    if target.is_zero() {
        return true;
    }
    if generators.is_empty() {
        return false;
    }
    let rows = target.entries().len();
    let mut a: Vec<Vec<BigRational>> = Vec::with_capacity(rows);
    let mut b: Vec<BigRational> = Vec::with_capacity(rows);
    for r in 0..rows {
        a.push(
            generators
                .iter()
                .map(|g| BigRational::from(g.entries()[r].clone()))
                .collect(),
        );
        b.push(BigRational::from(target.entries()[r].clone()));
    }
    lp::solve_eq_nonneg(&a, &b).is_some()
}

/// Primitive generators of the extremal rays of the Mori cone.
///
/// Wall classes are first collapsed to one representative per ray of the
/// cone (positive multiples are identified), then each survivor is kept
/// exactly when it is not a nonnegative combination of the others.
pub fn extremal_rays(fan: &Fan) -> Result<Vec<CurveClass>> {
    let mut representatives: Vec<CurveClass> = Vec::new();
    for class in mori_generators(fan)? {
        let prim = class.primitive()?;
        if !representatives.contains(&prim) {
            representatives.push(prim);
        }
    }
    let mut extremal = Vec::new();
    for (i, candidate) in representatives.iter().enumerate() {
        let others: Vec<CurveClass> = representatives
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| g.clone())
            .collect();
        if !in_cone(candidate, &others) {
            extremal.push(candidate.clone());
        }
    }
    Ok(extremal)
}

fn ensure_matching_class(fan: &Fan, class: &CurveClass) -> Result<()> {
    if class.entries().len() != fan.rays().len() {
        return Err(Error::ForeignCurveClass);
    }
    Ok(())
}

/// Walls whose class is a positive multiple of `prim`, paired with their
/// anticanonical degrees, in wall order.
fn walls_on_ray(fan: &Fan, prim: &CurveClass) -> Result<Vec<(usize, BigInt)>> {
    let mut found = Vec::new();
    for (wi, wall) in fan.walls()?.iter().enumerate() {
        let class = curve_class(fan, wall)?;
        if &class.primitive()? == prim {
            found.push((wi, divisor::anticanonical_degree(fan, &class)?));
        }
    }
    Ok(found)
}

fn ensure_extremal(fan: &Fan, class: &CurveClass) -> Result<CurveClass> {
    ensure_matching_class(fan, class)?;
    if class.is_zero() {
        return Err(Error::NotExtremal);
    }
    let prim = class.primitive()?;
    if !extremal_rays(fan)?.contains(&prim) {
        return Err(Error::NotExtremal);
    }
    Ok(prim)
}

/// Length of the extremal ray through `class`: the minimal anticanonical
/// degree of a wall class on the ray. Zero or negative when the canonical
/// divisor is not negative on the ray.
pub fn ray_length(fan: &Fan, class: &CurveClass) -> Result<BigInt> {
    let prim = ensure_extremal(fan, class)?;
    let degrees = walls_on_ray(fan, &prim)?;
    degrees
        .into_iter()
        .map(|(_, deg)| deg)
        .min()
        .ok_or(Error::NotExtremal)
}

/// Contraction profile of the extremal ray through `class`.
///
/// The wall of minimal anticanonical degree on the ray (first in wall
/// order on ties) determines the profile: with `p` positive and `n`
/// negative coefficients in its relation, the contraction is a fibration
/// (`n = 0`), divisorial (`n = 1`) or small (`n >= 2`), a general
/// nontrivial fiber has dimension `p - 1`, and the exceptional locus has
/// dimension `rank - n`.
pub fn contraction_profile(fan: &Fan, class: &CurveClass) -> Result<ContractionProfile> {
    let prim = ensure_extremal(fan, class)?;
    let degrees = walls_on_ray(fan, &prim)?;
    let (wall_index, length) = degrees
        .into_iter()
        .min_by_key(|(wi, deg)| (deg.clone(), *wi))
        .ok_or(Error::NotExtremal)?;
    let wall = &fan.walls()?[wall_index];

    let mut pos_rays = 0usize;
    let mut neg_rays = 0usize;
    let mut zero_rays = 0usize;
    for (_, coeff) in wall.relation() {
        if coeff.is_positive() {
            pos_rays += 1;
        } else if coeff.is_negative() {
            neg_rays += 1;
        } else {
            zero_rays += 1;
        }
    }
    let kind = match neg_rays {
        0 => ContractionKind::Fibration,
        1 => ContractionKind::Divisorial,
        _ => ContractionKind::Small,
    };
    let fiber_dim = pos_rays - 1;
    let locus_dim = fan.rank() - neg_rays;

    // Fiber-locus inequality for the contraction of an extremal ray:
    // dim(locus) + dim(fiber) >= dim(X) + length - 1. A violation means
    // the wall bookkeeping is wrong, not that the input is bad.
    let lhs = BigInt::from(locus_dim as u64) + BigInt::from(fiber_dim as u64);
    let rhs = BigInt::from(fan.rank() as u64) + &length - BigInt::one();
    if lhs < rhs {
        return Err(Error::Internal(
            "contraction profile violates the fiber-locus inequality".into(),
        ));
    }

    Ok(ContractionProfile {
        ray: prim,
        length,
        pos_rays,
        neg_rays,
        zero_rays,
        kind,
        fiber_dim,
        locus_dim,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeVector;
    use num_traits::ToPrimitive;

    fn fan_p2() -> Fan {
        Fan::new(
            2,
            vec![
                LatticeVector::from_i64(&[1, 0]),
                LatticeVector::from_i64(&[0, 1]),
                LatticeVector::from_i64(&[-1, -1]),
            ],
            vec![vec![0, 1], vec![1, 2], vec![0, 2]],
        )
    }

    fn fan_p1xp1() -> Fan {
        Fan::new(
            2,
            vec![
                LatticeVector::from_i64(&[1, 0]),
                LatticeVector::from_i64(&[0, 1]),
                LatticeVector::from_i64(&[-1, 0]),
                LatticeVector::from_i64(&[0, -1]),
            ],
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]],
        )
    }

    fn fan_hirzebruch(a: i64) -> Fan {
        Fan::new(
            2,
            vec![
                LatticeVector::from_i64(&[1, 0]),
                LatticeVector::from_i64(&[0, 1]),
                LatticeVector::from_i64(&[-1, a]),
                LatticeVector::from_i64(&[0, -1]),
            ],
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]],
        )
    }

    #[test]
    fn p2_has_one_extremal_ray_of_length_three() {
        let fan = fan_p2();
        let generators = mori_generators(&fan).unwrap();
        assert_eq!(generators, vec![CurveClass::from_i64(&[1, 1, 1])]);
        let extremal = extremal_rays(&fan).unwrap();
        assert_eq!(extremal, generators);
        assert_eq!(ray_length(&fan, &extremal[0]).unwrap().to_i64(), Some(3));
        let profile = contraction_profile(&fan, &extremal[0]).unwrap();
        assert_eq!(profile.kind, ContractionKind::Fibration);
        assert_eq!(profile.fiber_dim, 2);
        assert_eq!(profile.locus_dim, 2);
        assert_eq!(profile.length.to_i64(), Some(3));
        assert_eq!(profile.ray, extremal[0]);
        assert_eq!((profile.pos_rays, profile.neg_rays, profile.zero_rays), (3, 0, 0));
    }

    #[test]
    fn p1xp1_has_two_fibration_rays_of_length_two() {
        let fan = fan_p1xp1();
        let extremal = extremal_rays(&fan).unwrap();
        assert_eq!(extremal.len(), 2);
        assert!(extremal.contains(&CurveClass::from_i64(&[0, 1, 0, 1])));
        assert!(extremal.contains(&CurveClass::from_i64(&[1, 0, 1, 0])));
        for ray in &extremal {
            assert_eq!(ray_length(&fan, ray).unwrap().to_i64(), Some(2));
            let profile = contraction_profile(&fan, ray).unwrap();
            assert_eq!(profile.kind, ContractionKind::Fibration);
            assert_eq!(profile.fiber_dim, 1);
            assert_eq!(profile.locus_dim, 2);
            assert_eq!((profile.pos_rays, profile.neg_rays, profile.zero_rays), (2, 0, 1));
        }
    }

    #[test]
    fn hirzebruch_one_contracts_the_minus_one_section() {
        let fan = fan_hirzebruch(1);
        let generators = mori_generators(&fan).unwrap();
        // Fiber, negative section, and the positive section = B + 2f.
        assert_eq!(generators.len(), 3);
        let extremal = extremal_rays(&fan).unwrap();
        assert_eq!(extremal.len(), 2);
        let fiber = CurveClass::from_i64(&[0, 1, 0, 1]);
        let section = CurveClass::from_i64(&[1, -1, 1, 0]);
        assert!(extremal.contains(&fiber));
        assert!(extremal.contains(&section));
        assert_eq!(ray_length(&fan, &fiber).unwrap().to_i64(), Some(2));
        assert_eq!(ray_length(&fan, &section).unwrap().to_i64(), Some(1));
        let profile = contraction_profile(&fan, &section).unwrap();
        assert_eq!(profile.kind, ContractionKind::Divisorial);
        assert_eq!(profile.fiber_dim, 1);
        assert_eq!(profile.locus_dim, 1);
        assert_eq!((profile.pos_rays, profile.neg_rays, profile.zero_rays), (2, 1, 0));
    }

    #[test]
    fn hirzebruch_lengths_drop_with_the_twist() {
        let cases = [(0i64, 2i64), (1, 1), (2, 0), (3, -1)];
        for (a, expected) in cases {
            let fan = fan_hirzebruch(a);
            let section = CurveClass::from_i64(&[1, -a, 1, 0]);
            let extremal = extremal_rays(&fan).unwrap();
            if a == 0 {
                // F_0 = P^1 x P^1: the "section" class is a fiber class.
                assert_eq!(extremal.len(), 2);
            }
            assert_eq!(
                ray_length(&fan, &section).unwrap().to_i64(),
                Some(expected),
                "length of the section ray on the Hirzebruch surface with twist {a}"
            );
        }
    }

    #[test]
    fn positive_multiples_lie_on_the_same_ray() {
        let fan = fan_p2();
        let doubled = CurveClass::from_i64(&[2, 2, 2]);
        assert_eq!(ray_length(&fan, &doubled).unwrap().to_i64(), Some(3));
    }

    #[test]
    fn non_extremal_classes_are_rejected() {
        let fan = fan_hirzebruch(1);
        // B + f is in the Mori cone but interior to it.
        let interior = CurveClass::from_i64(&[1, 0, 1, 1]);
        assert!(matches!(
            ray_length(&fan, &interior),
            Err(Error::NotExtremal)
        ));
        let zero = CurveClass::from_i64(&[0, 0, 0, 0]);
        assert!(matches!(ray_length(&fan, &zero), Err(Error::NotExtremal)));
        let unrelated = CurveClass::from_i64(&[5, 1, 2, 0]);
        assert!(matches!(
            contraction_profile(&fan, &unrelated),
            Err(Error::NotExtremal)
        ));
    }

    #[test]
    fn foreign_wall_is_rejected() {
        let other = fan_hirzebruch(1);
        let wall = other.walls().unwrap()[0].clone();
        let fan = fan_p2();
        assert!(matches!(curve_class(&fan, &wall), Err(Error::ForeignWall)));
    }

    #[test]
    fn foreign_class_is_rejected() {
        let fan = fan_p2();
        let wrong_len = CurveClass::from_i64(&[1, 1, 1, 1]);
        assert!(matches!(
            ray_length(&fan, &wrong_len),
            Err(Error::ForeignCurveClass)
        ));
    }

    #[test]
    fn primitive_normalization() {
        let class = CurveClass::from_i64(&[2, -4, 6]);
        assert_eq!(class.primitive().unwrap(), CurveClass::from_i64(&[1, -2, 3]));
        let zero = CurveClass::from_i64(&[0, 0]);
        assert!(zero.primitive().is_err());
    }

    #[test]
    fn in_cone_examples() {
        let inside = CurveClass::from_i64(&[1, 1]);
        let gens = [CurveClass::from_i64(&[1, 0]), CurveClass::from_i64(&[0, 1])];
        assert!(in_cone(&inside, &gens));
        let outside = CurveClass::from_i64(&[-1, 1]);
        assert!(!in_cone(&outside, &gens));
        assert!(in_cone(&CurveClass::from_i64(&[0, 0]), &[]));
        assert!(!in_cone(&CurveClass::from_i64(&[1, 0]), &[]));
    }
}
