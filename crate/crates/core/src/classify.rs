//! Fan recognition and the contact-structure decision.
//!
//! A smooth projective toric variety of odd dimension `2n + 1` carries a
//! contact structure exactly when it is the projective space `P^{2n+1}`
//! or the projectivized tangent bundle of a product `(P^1)^{n+1}`.
//! [`classify_contact`] decides which case holds for a given fan by
//! combining a divisibility test on the anticanonical class with explicit
//! isomorphism searches against the two reference fans, and it returns
//! both the verdict and the evidence gathered along the way.
//!
//! The supporting predicates are independently useful:
//! [`fan_isomorphic`] searches for a lattice automorphism identifying two
//! fans, [`is_p1_power`] recognizes the fan of `(P^1)^m`, and
//! [`has_split_tangent`] detects fans whose wall relations all have the
//! minimal possible support.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::Zero;

use crate::builders;
use crate::divisor;
use crate::error::{Error, Result};
use crate::fan::{Cone, Fan};
use crate::lattice::{is_unimodular_basis, IntMatrix, LatticeVector};
use crate::mori::{self, CurveClass};

/// A verified identification of two fans: a unimodular lattice map
/// together with the ray bijection it induces.
///
/// `matrix` acts on ray vectors of the source fan; `ray_permutation[i]`
/// is the index of the target ray equal to `matrix * source.ray(i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanIsomorphism {
    pub matrix: IntMatrix,
    pub ray_permutation: Vec<usize>,
}

impl FanIsomorphism {
    /// Check from scratch that this datum really is an isomorphism from
    /// `source` onto `target`: the matrix is square of the right size and
    /// unimodular, the permutation is a bijection of ray indices, every
    /// source ray maps to the claimed target ray, and the induced map
    /// sends the maximal cones of `source` exactly onto those of `target`.
    pub fn verify(&self, source: &Fan, target: &Fan) -> bool {
        let d = source.rank();
        if target.rank() != d || self.matrix.rows() != d || self.matrix.cols() != d {
            return false;
        }
        if !matches!(self.matrix.is_unimodular(), Ok(true)) {
            return false;
        }
        let n = source.rays().len();
        if target.rays().len() != n || self.ray_permutation.len() != n {
            return false;
        }
        let mut seen = vec![false; n];
        for &j in &self.ray_permutation {
            if j >= n || seen[j] {
                return false;
            }
            seen[j] = true;
        }
        for (i, ray) in source.rays().iter().enumerate() {
            if ray.rank() != d {
                return false;
            }
            if self.matrix.map_vector(ray) != *target.ray(self.ray_permutation[i]) {
                return false;
            }
        }
        if source.max_cones().len() != target.max_cones().len() {
            return false;
        }
        let target_cones: BTreeSet<&Cone> = target.max_cones().iter().collect();
        let mut images: BTreeSet<Cone> = BTreeSet::new();
        for cone in source.max_cones() {
            let mapped = Cone::new(cone.rays().iter().map(|&i| self.ray_permutation[i]));
            if mapped.dim() != cone.dim() || !target_cones.contains(&mapped) {
                return false;
            }
            images.insert(mapped);
        }
        images.len() == source.max_cones().len()
    }
}

fn ensure_smooth_complete(fan: &Fan) -> Result<()> {
    if !fan.is_smooth()? {
        return Err(Error::NotSmooth);
    }
    if !fan.is_complete()? {
        return Err(Error::NotComplete);
    }
    Ok(())
}

/// True when every wall relation of the smooth complete fan `fan` is
/// supported on the two opposite rays alone, i.e. each relation reads
/// `u + u' = 0` with all other coefficients zero.
///
/// Geometrically this says every wall curve meets the invariant divisors
/// through the wall trivially; it holds exactly for products of `P^1`s
/// (in any lattice coordinates).
pub fn has_split_tangent(fan: &Fan) -> Result<bool> {
    for wall in fan.walls()? {
        let (a, b) = wall.opposite_rays();
        for (ray, coeff) in wall.relation() {
            if *ray != a && *ray != b && !coeff.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Recognize the fan of a product of projective lines, up to a unimodular
/// change of lattice coordinates.
///
/// Returns `Ok(Some(m))` when `fan` is the fan of `(P^1)^m` in some
/// lattice basis (the point fan counts as the empty product, `m = 0`),
/// and `Ok(None)` otherwise. Requires a smooth complete fan.
pub fn is_p1_power(fan: &Fan) -> Result<Option<usize>> {
    ensure_smooth_complete(fan)?;
    let d = fan.rank();
    if d == 0 {
        return Ok(Some(0));
    }
    let nrays = fan.rays().len();
    if nrays != 2 * d {
        return Ok(None);
    }

    // Pair each ray with its negation; the pairing must be perfect.
    let index: BTreeMap<&LatticeVector, usize> = fan
        .rays()
        .iter()
        .enumerate()
        .map(|(i, r)| (r, i))
        .collect();
    let mut partner = vec![0usize; nrays];
    for i in 0..nrays {
        match index.get(&fan.ray(i).negated()) {
            Some(&j) => partner[i] = j,
            None => return Ok(None),
        }
    }

    // One representative per pair must form a basis of the lattice.
    let representatives: Vec<usize> = (0..nrays).filter(|&i| i < partner[i]).collect();
    if representatives.len() != d {
        return Ok(None);
    }
    let basis: Vec<LatticeVector> = representatives
        .iter()
        .map(|&i| fan.ray(i).clone())
        .collect();
    if !is_unimodular_basis(&basis)? {
        return Ok(None);
    }

    // Exactly one maximal cone per sign pattern. Since no cone may use
    // both rays of a pair, a maximal cone picks one ray from each of the
    // `d` pairs, and `2^d` distinct cones exhaust the patterns.
    if d >= 64 {
        return Ok(None);
    }
    if fan.max_cones().len() as u128 != 1u128 << d {
        return Ok(None);
    }
    for cone in fan.max_cones() {
        for &i in cone.rays() {
            if cone.rays().binary_search(&partner[i]).is_ok() {
                return Ok(None);
            }
        }
    }
    Ok(Some(d))
}

fn wall_coefficient_multiset(fan: &Fan) -> Result<Vec<Vec<BigInt>>> {
    let mut multiset: Vec<Vec<BigInt>> = fan
        .walls()?
        .iter()
        .map(|w| {
            let mut values: Vec<BigInt> =
                w.relation().iter().map(|(_, c)| c.clone()).collect();
            values.sort();
            values
        })
        .collect();
    multiset.sort();
    Ok(multiset)
}

fn try_candidate(
    source: &Fan,
    matrix: &IntMatrix,
    target_rays: &BTreeMap<&LatticeVector, usize>,
    target_cones: &BTreeSet<&Cone>,
) -> Option<FanIsomorphism> {
    let mut permutation = Vec::with_capacity(source.rays().len());
    for ray in source.rays() {
        let image = matrix.map_vector(ray);
        match target_rays.get(&image) {
            Some(&j) => permutation.push(j),
            None => return None,
        }
    }
    for cone in source.max_cones() {
        let mapped = Cone::new(cone.rays().iter().map(|&i| permutation[i]));
        if !target_cones.contains(&mapped) {
            return None;
        }
    }
    Some(FanIsomorphism {
        matrix: matrix.clone(),
        ray_permutation: permutation,
    })
}

/// Search for a unimodular lattice map carrying `source` onto `target`.
///
/// Returns a verified [`FanIsomorphism`] if one exists and `Ok(None)`
/// otherwise. Obvious mismatches (rank, ray count, cone count) return
/// `Ok(None)` without validating either fan; beyond that point both fans
/// must be smooth and complete.
///
/// The search anchors the lexicographically least maximal cone of
/// `source` and tries every maximal cone of `target` under every
/// ordering of its rays; each pairing determines the lattice map
/// uniquely, so the search is exhaustive. A cheap intrinsic invariant —
/// the multiset of sorted wall-relation coefficient vectors — prunes
/// most non-isomorphic pairs before the search.
pub fn fan_isomorphic(source: &Fan, target: &Fan) -> Result<Option<FanIsomorphism>> {
    if source.rank() != target.rank()
        || source.rays().len() != target.rays().len()
        || source.max_cones().len() != target.max_cones().len()
    {
        return Ok(None);
    }
    ensure_smooth_complete(source)?;
    ensure_smooth_complete(target)?;

    if source.rank() == 0 {
        let iso = FanIsomorphism {
            matrix: IntMatrix::identity(0),
            ray_permutation: Vec::new(),
        };
        if !iso.verify(source, target) {
            return Err(Error::Internal(
                "point-fan isomorphism failed re-verification".into(),
            ));
        }
        return Ok(Some(iso));
    }

    if wall_coefficient_multiset(source)? != wall_coefficient_multiset(target)? {
        return Ok(None);
    }

    let anchor = source
        .max_cones()
        .iter()
        .min()
        .expect("complete fan of positive rank has maximal cones");
    let anchor_inverse = source
        .cone_matrix(anchor)
        .inverse_unimodular()?
        .ok_or_else(|| Error::Internal("smooth cone matrix is not invertible".into()))?;

    let target_rays: BTreeMap<&LatticeVector, usize> = target
        .rays()
        .iter()
        .enumerate()
        .map(|(i, r)| (r, i))
        .collect();
    let target_cones: BTreeSet<&Cone> = target.max_cones().iter().collect();

    for cone in target.max_cones() {
        for ordering in cone.rays().iter().copied().permutations(cone.dim()) {
            let columns: Vec<LatticeVector> =
                ordering.iter().map(|&j| target.ray(j).clone()).collect();
            let cone_matrix = IntMatrix::from_columns(&columns)?;
            let candidate = cone_matrix.mul(&anchor_inverse);
            if let Some(iso) = try_candidate(source, &candidate, &target_rays, &target_cones)
            {
                if !iso.verify(source, target) {
                    return Err(Error::Internal(
                        "fan isomorphism candidate failed re-verification".into(),
                    ));
                }
                return Ok(Some(iso));
            }
        }
    }
    Ok(None)
}

/// Outcome of one reference-fan comparison inside [`classify_contact`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoCheck {
    /// The comparison was not needed for the verdict and was not run.
    Skipped,
    /// The comparison ran and found no isomorphism.
    Refuted,
    /// The comparison found this verified isomorphism onto the reference.
    Verified(FanIsomorphism),
}

impl IsoCheck {
    pub fn is_verified(&self) -> bool {
        matches!(self, IsoCheck::Verified(_))
    }
}

/// Final answer of the contact classification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// The variety is `P^{2n+1}`; the payload is `n`.
    ProjectiveSpace(usize),
    /// The variety is the projectivized tangent bundle of `(P^1)^{n+1}`;
    /// the payload is `n`.
    ProjectivizedTangentOfP1Power(usize),
    /// The variety carries no contact structure.
    NotContact,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::ProjectiveSpace(n) => write!(f, "CONTACT: P^{}", 2 * n + 1),
            Verdict::ProjectivizedTangentOfP1Power(n) => {
                write!(f, "CONTACT: P(T_(P1)^{})", n + 1)
            }
            Verdict::NotContact => write!(f, "NOT-CONTACT"),
        }
    }
}

/// Everything [`classify_contact`] computed on the way to its verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evidence {
    /// Dimension of the variety (= rank of the fan's lattice).
    pub dimension: usize,
    /// Whether the dimension is odd; contact structures need `dim = 2n + 1`.
    pub odd_dimension: bool,
    /// The `n` with `dim = 2n + 1`, when the dimension is odd.
    pub n: Option<usize>,
    /// Every extremal ray of the Mori cone with its length.
    pub extremal_lengths: Vec<(CurveClass, BigInt)>,
    /// Whether the anticanonical class is divisible by `n + 1` in the
    /// divisor class group; `None` when the dimension is even.
    pub anticanonical_divisible: Option<bool>,
    /// Comparison against the fan of `P^{2n+1}`.
    pub projective_space_check: IsoCheck,
    /// Comparison against the fan of the projectivized tangent bundle of
    /// `(P^1)^{n+1}`.
    pub tangent_bundle_check: IsoCheck,
}

/// Verdict plus supporting evidence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationReport {
    pub verdict: Verdict,
    pub evidence: Evidence,
}

/// Decide whether the smooth projective toric variety of `fan` carries a
/// contact structure.
///
/// The fan must be valid, smooth, complete, and projective; each failed
/// precondition reports its own error. The decision procedure:
///
/// 1. Even dimension: no contact structure (a contact variety has
///    dimension `2n + 1`).
/// 2. Odd dimension `2n + 1`: a contact variety has anticanonical class
///    divisible by `n + 1`. If divisibility fails the verdict is
///    negative; with `full_evidence` the isomorphism checks still run so
///    the report shows the refutations explicitly.
/// 3. When divisibility holds, compare against the two fans that carry
///    contact structures in dimension `2n + 1`: the fan of `P^{2n+1}`
///    and, for `n >= 1`, the fan of the projectivized tangent bundle of
///    `(P^1)^{n+1}`. A verified isomorphism settles the verdict; two
///    refutations settle it negatively.
///
/// The extremal rays of the Mori cone and their lengths are computed as
/// evidence in every case.
pub fn classify_contact(fan: &Fan, full_evidence: bool) -> Result<ClassificationReport> {
    let report = fan.validate();
    if !report.is_valid() {
        return Err(Error::InvalidFan(report.clone()));
    }
    if !fan.is_smooth()? {
        return Err(Error::NotSmooth);
    }
    if !fan.is_complete()? {
        return Err(Error::NotComplete);
    }
    if !fan.is_projective()? {
        return Err(Error::NotProjective);
    }

    let d = fan.rank();
    let mut extremal_lengths: Vec<(CurveClass, BigInt)> = Vec::new();
    for ray in mori::extremal_rays(fan)? {
        let length = mori::ray_length(fan, &ray)?;
        extremal_lengths.push((ray, length));
    }

    if d % 2 == 0 {
        return Ok(ClassificationReport {
            verdict: Verdict::NotContact,
            evidence: Evidence {
                dimension: d,
                odd_dimension: false,
                n: None,
                extremal_lengths,
                anticanonical_divisible: None,
                projective_space_check: IsoCheck::Skipped,
                tangent_bundle_check: IsoCheck::Skipped,
            },
        });
    }

    let n = (d - 1) / 2;
    let anticanonical = divisor::anticanonical_divisor(fan)?;
    let anticanonical_class = divisor::class_of(fan, &anticanonical)?;
    let divisible =
        divisor::divide_class(fan, &anticanonical_class, n as u64 + 1)?.is_some();

    if !divisible && !full_evidence {
        return Ok(ClassificationReport {
            verdict: Verdict::NotContact,
            evidence: Evidence {
                dimension: d,
                odd_dimension: true,
                n: Some(n),
                extremal_lengths,
                anticanonical_divisible: Some(false),
                projective_space_check: IsoCheck::Skipped,
                tangent_bundle_check: IsoCheck::Skipped,
            },
        });
    }

    let reference_pn = builders::fan_projective_space(d)?;
    let projective_space_check = match fan_isomorphic(fan, &reference_pn)? {
        Some(witness) => IsoCheck::Verified(witness),
        None => IsoCheck::Refuted,
    };

    let run_tangent_check =
        n >= 1 && (!projective_space_check.is_verified() || full_evidence);
    let tangent_bundle_check = if run_tangent_check {
        let reference_pt = builders::fan_projectivized_tangent_p1_power(n + 1)?;
        match fan_isomorphic(fan, &reference_pt)? {
            Some(witness) => IsoCheck::Verified(witness),
            None => IsoCheck::Refuted,
        }
    } else {
        IsoCheck::Skipped
    };

    let verdict = if projective_space_check.is_verified() {
        Verdict::ProjectiveSpace(n)
    } else if tangent_bundle_check.is_verified() {
        Verdict::ProjectivizedTangentOfP1Power(n)
    } else {
        Verdict::NotContact
    };

    if !divisible && verdict != Verdict::NotContact {
        return Err(Error::Internal(
            "isomorphism witness found although the anticanonical divisibility test failed"
                .into(),
        ));
    }

    Ok(ClassificationReport {
        verdict,
        evidence: Evidence {
            dimension: d,
            odd_dimension: true,
            n: Some(n),
            extremal_lengths,
            anticanonical_divisible: Some(divisible),
            projective_space_check,
            tangent_bundle_check,
        },
    })
}
