//! Constructors for reference fans: projective spaces, powers of the
//! projective line, products, Hirzebruch surfaces, and projectivizations
//! of split bundles — in particular the projectivized tangent bundle of
//! `(P^1)^m`.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::divisor::TDivisor;
use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::lattice::LatticeVector;

fn basis_vector(rank: usize, i: usize) -> LatticeVector {
    let mut coords = vec![BigInt::zero(); rank];
    coords[i] = BigInt::from(1);
    LatticeVector::new(coords)
}

/// The rank-zero fan of a point: no rays, one zero-dimensional cone.
pub fn fan_point() -> Fan {
    Fan::new(0, vec![], vec![vec![]])
}

/// The fan of projective `n`-space: rays `e_1, ..., e_n, -(e_1+...+e_n)`,
/// maximal cones all `n`-element subsets of the rays.
pub fn fan_projective_space(n: usize) -> Result<Fan> {
    if n == 0 {
        return Err(Error::BadArgument(
            "projective space needs dimension >= 1".into(),
        ));
    }
    let mut rays: Vec<LatticeVector> = (0..n).map(|i| basis_vector(n, i)).collect();
    rays.push(LatticeVector::new(vec![BigInt::from(-1); n]));
    let max_cones = (0..=n)
        .map(|skip| (0..=n).filter(|&i| i != skip).collect())
        .collect();
    Ok(Fan::new(n, rays, max_cones))
}

/// The cube fan of `(P^1)^m`: rays `e_1, ..., e_m, -e_1, ..., -e_m` and
/// all `2^m` sign-combination cones.
pub fn fan_p1_power(m: usize) -> Result<Fan> {
    if m == 0 {
        return Err(Error::BadArgument(
            "power of the projective line needs exponent >= 1".into(),
        ));
    }
    let mut rays: Vec<LatticeVector> = (0..m).map(|i| basis_vector(m, i)).collect();
    for i in 0..m {
        rays.push(basis_vector(m, i).negated());
    }
    let mut max_cones = Vec::with_capacity(1 << m);
    for mask in 0u64..(1u64 << m) {
        let cone: Vec<usize> = (0..m)
            .map(|j| if mask >> j & 1 == 1 { m + j } else { j })
            .collect();
        max_cones.push(cone);
    }
    Ok(Fan::new(m, rays, max_cones))
}

/// The product fan: rays of both factors embedded in `Z^{d1+d2}`, maximal
/// cones the sums of one cone from each factor.
pub fn product_fan(left: &Fan, right: &Fan) -> Result<Fan> {
    for fan in [left, right] {
        let report = fan.validate();
        if !report.is_valid() {
            return Err(Error::InvalidFan(report.clone()));
        }
    }
    let rank = left.rank() + right.rank();
    let mut rays = Vec::with_capacity(left.rays().len() + right.rays().len());
    for ray in left.rays() {
        let mut coords = ray.coords().to_vec();
        coords.extend(std::iter::repeat(BigInt::zero()).take(right.rank()));
        rays.push(LatticeVector::new(coords));
    }
    for ray in right.rays() {
        let mut coords = vec![BigInt::zero(); left.rank()];
        coords.extend_from_slice(ray.coords());
        rays.push(LatticeVector::new(coords));
    }
    let offset = left.rays().len();
    let mut max_cones = Vec::with_capacity(left.max_cones().len() * right.max_cones().len());
    for lc in left.max_cones() {
        for rc in right.max_cones() {
            let mut cone: Vec<usize> = lc.rays().to_vec();
            cone.extend(rc.rays().iter().map(|&i| i + offset));
            max_cones.push(cone);
        }
    }
    Ok(Fan::new(rank, rays, max_cones))
}

/// The Hirzebruch surface with twist `a`: rays `e_1, e_2, -e_1 + a e_2,
/// -e_2`, four cones in cyclic order. Isomorphic to the projectivization
/// of `O + O(a)` over the projective line.
pub fn fan_hirzebruch(a: u64) -> Fan {
    Fan::new(
        2,
        vec![
            LatticeVector::from_i64(&[1, 0]),
            LatticeVector::from_i64(&[0, 1]),
            LatticeVector::new(vec![BigInt::from(-1), BigInt::from(a)]),
            LatticeVector::from_i64(&[0, -1]),
        ],
        vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]],
    )
}

/// The fan of the projectivized split bundle
/// `P(O + O(D_1) + ... + O(D_r))` over a smooth complete base.
///
/// `degrees` lists the divisors of all `r + 1` summands; the first must be
/// the zero divisor. Since `P(E)` and `P(E tensor L)` coincide, any split
/// bundle can be brought to this shape by twisting — hence the
/// normalization error carries that hint rather than guessing a twist.
///
/// Construction: in `N_base + Z^r`, every base ray `u` lifts to
/// `(u, D_1(u), ..., D_r(u))`, the fiber directions contribute rays
/// `f_1, ..., f_r` (standard basis of the `Z^r` part) and
/// `f_0 = -(f_1 + ... + f_r)`, and each maximal base cone combines with
/// each `r`-subset of the fiber rays.
pub fn fan_projectivized_split_bundle(base: &Fan, degrees: &[TDivisor]) -> Result<Fan> {
    if !base.is_smooth()? {
        return Err(Error::NotSmooth);
    }
    if !base.is_complete()? {
        return Err(Error::NotComplete);
    }
    if degrees.len() < 2 {
        return Err(Error::BadArgument(
            "projectivized bundle needs at least two summands".into(),
        ));
    }
    let nbase = base.rays().len();
    for d in degrees {
        if d.coefficients().len() != nbase {
            return Err(Error::ForeignDivisor);
        }
    }
    if degrees[0].coefficients().iter().any(|c| !c.is_zero()) {
        return Err(Error::DegreesNotNormalized);
    }

    let r = degrees.len() - 1;
    let d = base.rank();
    let rank = d + r;

    let mut rays = Vec::with_capacity(nbase + r + 1);
    for (idx, u) in base.rays().iter().enumerate() {
        let mut coords = u.coords().to_vec();
        for degree in &degrees[1..] {
            coords.push(degree.coefficient(idx).clone());
        }
        rays.push(LatticeVector::new(coords));
    }
    for j in 0..r {
        rays.push(basis_vector(rank, d + j));
    }
    let mut last = vec![BigInt::zero(); rank];
    for coord in last.iter_mut().skip(d) {
        *coord = BigInt::from(-1);
    }
    rays.push(LatticeVector::new(last));

    // Fiber ray indices: f_j at nbase + j - 1 for j = 1..r, f_0 last.
    let fiber_index = |j: usize| if j == 0 { nbase + r } else { nbase + j - 1 };
    let mut max_cones = Vec::with_capacity(base.max_cones().len() * (r + 1));
    for base_cone in base.max_cones() {
        for skip in 0..=r {
            let mut cone: Vec<usize> = base_cone.rays().to_vec();
            cone.extend((0..=r).filter(|&j| j != skip).map(fiber_index));
            max_cones.push(cone);
        }
    }
    Ok(Fan::new(rank, rays, max_cones))
}

/// The fan of the projectivized tangent bundle of `(P^1)^m`, `m >= 2`.
///
/// The tangent bundle of `(P^1)^m` splits as the sum of the pullbacks of
/// the `m` degree-2 bundles on the factors; twisting away the first
/// summand leaves degrees `2 p_j - 2 p_1` for `j = 2..m`, written on the
/// rays of the cube fan (where `p_j` is the divisor of a point pulled
/// back from factor `j`, i.e. the ray divisor of `-e_j`).
pub fn fan_projectivized_tangent_p1_power(m: usize) -> Result<Fan> {
    if m < 2 {
        return Err(Error::BadArgument(
            "projectivized tangent bundle needs a power >= 2".into(),
        ));
    }
    let base = fan_p1_power(m)?;
    let nrays = base.rays().len();
    let mut degrees = vec![TDivisor::new(vec![BigInt::zero(); nrays])];
    for j in 1..m {
        let mut coeffs = vec![BigInt::zero(); nrays];
        coeffs[m] = BigInt::from(-2); // ray -e_1
        coeffs[m + j] = BigInt::from(2); // ray -e_{j+1}
        degrees.push(TDivisor::new(coeffs));
    }
    fan_projectivized_split_bundle(&base, &degrees)
}
