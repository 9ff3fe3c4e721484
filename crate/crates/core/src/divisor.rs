//! Torus-invariant divisors and the divisor class group.
//!
//! A [`TDivisor`] is an integer coefficient per ray. On a smooth complete
//! fan the class group is free of rank `#rays - rank`; a fixed basis for it
//! comes from the Smith normal form of the ray matrix, so classes are plain
//! integer vectors that can be compared, divided, and intersected exactly.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::lattice::LatticeVector;
use crate::mori::CurveClass;

/// A torus-invariant divisor `sum_rho a_rho D_rho`, stored as one
/// coefficient per ray of the fan it belongs to.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TDivisor {
    coefficients: Vec<BigInt>,
}

impl TDivisor {
    pub fn new(coefficients: Vec<BigInt>) -> Self {
        TDivisor { coefficients }
    }

    pub fn from_i64(coefficients: &[i64]) -> Self {
        TDivisor {
            coefficients: coefficients.iter().map(|&c| BigInt::from(c)).collect(),
        }
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    pub fn coefficient(&self, ray: usize) -> &BigInt {
        &self.coefficients[ray]
    }

    pub fn add(&self, other: &TDivisor) -> TDivisor {
        assert_eq!(self.coefficients.len(), other.coefficients.len());
        TDivisor {
            coefficients: self
                .coefficients
                .iter()
                .zip(&other.coefficients)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scaled(&self, factor: &BigInt) -> TDivisor {
        TDivisor {
            coefficients: self.coefficients.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn negated(&self) -> TDivisor {
        TDivisor {
            coefficients: self.coefficients.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for TDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, c) in self.coefficients.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// An element of the divisor class group: coordinates in the basis fixed
/// by the Smith normal form of the fan's ray matrix, together with one
/// divisor representing the class.
///
/// Equality compares class vectors only; two representatives differing by
/// a principal divisor give equal classes.
#[derive(Clone, Debug, Eq)]
pub struct DivisorClass {
    representative: TDivisor,
    class_vector: Vec<BigInt>,
}

impl PartialEq for DivisorClass {
    fn eq(&self, other: &Self) -> bool {
        self.class_vector == other.class_vector
    }
}

impl DivisorClass {
    pub fn representative(&self) -> &TDivisor {
        &self.representative
    }

    pub fn class_vector(&self) -> &[BigInt] {
        &self.class_vector
    }

    pub fn is_zero(&self) -> bool {
        self.class_vector.iter().all(Zero::is_zero)
    }

    pub fn scaled(&self, factor: &BigInt) -> DivisorClass {
        DivisorClass {
            representative: self.representative.scaled(factor),
            class_vector: self.class_vector.iter().map(|c| c * factor).collect(),
        }
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.class_vector.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
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

fn ensure_matching_divisor(fan: &Fan, divisor: &TDivisor) -> Result<()> {
    if divisor.coefficients().len() != fan.rays().len() {
        return Err(Error::ForeignDivisor);
    }
    Ok(())
}

/// The canonical divisor `K = -sum_rho D_rho`.
pub fn canonical_divisor(fan: &Fan) -> Result<TDivisor> {
    Ok(anticanonical_divisor(fan)?.negated())
}

/// The anticanonical divisor `-K = sum_rho D_rho`.
pub fn anticanonical_divisor(fan: &Fan) -> Result<TDivisor> {
    if !fan.validate().is_valid() {
        return Err(Error::InvalidFan(fan.validate().clone()));
    }
    Ok(TDivisor {
        coefficients: vec![BigInt::one(); fan.rays().len()],
    })
}

/// The principal divisor of the character `chi^m`:
/// `div(chi^m) = sum_rho <m, u_rho> D_rho`.
pub fn character_divisor(fan: &Fan, m: &LatticeVector) -> Result<TDivisor> {
    if !fan.validate().is_valid() {
        return Err(Error::InvalidFan(fan.validate().clone()));
    }
    if m.rank() != fan.rank() {
        return Err(Error::DimensionMismatch {
            expected: fan.rank(),
            got: m.rank(),
        });
    }
    Ok(TDivisor {
        coefficients: fan.rays().iter().map(|u| m.dot(u)).collect(),
    })
}

/// Rank of the divisor class group of a smooth complete fan:
/// `#rays - rank`, since the class group is free.
pub fn picard_rank(fan: &Fan) -> Result<usize> {
    ensure_smooth_complete(fan)?;
    Ok(fan.rays().len() - fan.rank())
}

/// The class of a divisor in the fixed basis of the class group.
///
/// With `U * R * V = S` the Smith decomposition of the ray matrix `R`
/// (rows are rays), principal divisors are exactly the vectors whose image
/// under `U` vanishes beyond the first `rank` coordinates, so the trailing
/// coordinates of `U * D` give the class.
pub fn class_of(fan: &Fan, divisor: &TDivisor) -> Result<DivisorClass> {
    ensure_smooth_complete(fan)?;
    ensure_matching_divisor(fan, divisor)?;
    let nrays = fan.rays().len();
    let d = fan.rank();
    if nrays == 0 {
        return Ok(DivisorClass {
            representative: divisor.clone(),
            class_vector: vec![],
        });
    }
    let snf = fan.ray_matrix_snf()?;
    for factor in snf.diagonal() {
        if !factor.is_one() {
            return Err(Error::Internal(
                "ray matrix of a smooth complete fan must have unit invariant factors".into(),
            ));
        }
    }
    if snf.diagonal().len() != d {
        return Err(Error::Internal(
            "rays of a complete fan must span the whole lattice".into(),
        ));
    }
    let image = snf.u.mul_vec(divisor.coefficients());
    Ok(DivisorClass {
        representative: divisor.clone(),
        class_vector: image[d..].to_vec(),
    })
}

/// Divide a class by `k >= 1` inside the class group.
///
/// Returns the unique class with `k * result = class` when every
/// coordinate is divisible by `k` (the group is free, so uniqueness is
/// automatic), and `None` otherwise. The result carries the representative
/// `U^{-1} * (0, ..., 0, class / k)`.
pub fn divide_class(fan: &Fan, class: &DivisorClass, k: u64) -> Result<Option<DivisorClass>> {
    ensure_smooth_complete(fan)?;
    if k == 0 {
        return Err(Error::ZeroDivisionIndex);
    }
    let rank = picard_rank(fan)?;
    if class.class_vector().len() != rank {
        return Err(Error::ForeignDivisor);
    }
    let nrays = fan.rays().len();
    if nrays == 0 {
        return Ok(Some(DivisorClass {
            representative: TDivisor { coefficients: vec![] },
            class_vector: vec![],
        }));
    }
    let kk = BigInt::from(k);
    let mut quotient = Vec::with_capacity(class.class_vector().len());
    for c in class.class_vector() {
        if (c % &kk).is_zero() {
            quotient.push(c / &kk);
        } else {
            return Ok(None);
        }
    }
    let snf = fan.ray_matrix_snf()?;
    let u_inv = snf
        .u
        .inverse_unimodular()?
        .ok_or_else(|| Error::Internal("Smith transform must be unimodular".into()))?;
    let mut lifted = vec![BigInt::zero(); nrays];
    lifted[fan.rank()..].clone_from_slice(&quotient);
    let coefficients = u_inv.mul_vec(&lifted);
    let representative = TDivisor { coefficients };
    // The representative must land on the quotient class exactly.
    let check = class_of(fan, &representative)?;
    if check.class_vector() != quotient.as_slice() {
        return Err(Error::Internal("class division produced a wrong representative".into()));
    }
    Ok(Some(check))
}

/// Intersection number `D . C` of a divisor with a curve class, computed
/// as the dot product of the coefficient vectors. Principal divisors pair
/// to zero with every curve class, so the number depends only on the class
/// of `D`.
pub fn intersect(fan: &Fan, divisor: &TDivisor, class: &CurveClass) -> Result<BigInt> {
    ensure_smooth_complete(fan)?;
    ensure_matching_divisor(fan, divisor)?;
    if class.entries().len() != fan.rays().len() {
        return Err(Error::ForeignCurveClass);
    }
    Ok(divisor
        .coefficients()
        .iter()
        .zip(class.entries())
        .map(|(a, c)| a * c)
        .sum())
}

/// `-K . C`: the anticanonical degree of a curve class. For the class of a
/// wall this is simply the sum of the relation coefficients.
pub fn anticanonical_degree(fan: &Fan, class: &CurveClass) -> Result<BigInt> {
    let anti = anticanonical_divisor(fan)?;
    intersect(fan, &anti, class)
}
