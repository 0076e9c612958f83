//! Scalars and coordinate vectors shared by the exact and floating paths.
//!
//! Most routines are generic over [`Scalar`], so the same closed forms run on
//! `BigRational` (exact) and `f64` (minimization, derivatives).

use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Field operations needed by the volume and Futaki formulas.
pub trait Scalar:
    Clone
    + PartialOrd
    + fmt::Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    fn from_bigint(n: &BigInt) -> Self;
    fn from_rational(r: &BigRational) -> Self;
    fn to_f64(&self) -> f64;

    fn from_usize(n: usize) -> Self {
        Self::from_bigint(&BigInt::from(n))
    }

    fn powi(&self, e: usize) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc * self.clone();
        }
        acc
    }
}

impl Scalar for BigRational {
    fn from_bigint(n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }
    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    fn from_bigint(n: &BigInt) -> Self {
        ToPrimitive::to_f64(n).unwrap_or(f64::NAN)
    }
    fn from_rational(r: &BigRational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn from_usize(n: usize) -> Self {
        n as f64
    }
    fn powi(&self, e: usize) -> Self {
        libm::pow(*self, e as f64)
    }
}

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// `<a, b>` for an integer covector and a scalar vector.
pub fn pair<T: Scalar>(a: &[BigInt], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc + T::from_bigint(x) * y.clone())
}

pub fn pair_rational<T: Scalar>(a: &[BigRational], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc + T::from_rational(x) * y.clone())
}

/// Exact vector of rationals, e.g. an element of N_Q or M_Q.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalVector(Vec<BigRational>);

impl RationalVector {
    pub fn new(coords: Vec<BigRational>) -> Self {
        RationalVector(coords)
    }

    pub fn from_ints(v: &[i64]) -> Self {
        RationalVector(v.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<BigRational> {
        self.0
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(Scalar::to_f64).collect()
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        RationalVector(self.0.iter().map(|x| x * s).collect())
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|x| x.is_integer())
    }
}

impl From<Vec<BigRational>> for RationalVector {
    fn from(v: Vec<BigRational>) -> Self {
        RationalVector(v)
    }
}

/// A candidate Reeb vector, either exact or floating.
#[derive(Debug, Clone, PartialEq)]
pub enum ReebVector {
    Exact(RationalVector),
    Approx(Vec<f64>),
}

impl ReebVector {
    pub fn exact_ints(v: &[i64]) -> Self {
        ReebVector::Exact(RationalVector::from_ints(v))
    }

    pub fn dim(&self) -> usize {
        match self {
            ReebVector::Exact(v) => v.dim(),
            ReebVector::Approx(v) => v.len(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, ReebVector::Exact(_))
    }

    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            ReebVector::Exact(v) => v.to_f64(),
            ReebVector::Approx(v) => v.clone(),
        }
    }
}

/// Result of an evaluation that is exact whenever its input was.
#[derive(Debug, Clone, PartialEq)]
pub enum Number {
    Exact(BigRational),
    Approx(f64),
}

impl Number {
    pub fn to_f64(&self) -> f64 {
        match self {
            Number::Exact(r) => Scalar::to_f64(r),
            Number::Approx(x) => *x,
        }
    }

    pub fn exact(&self) -> Option<&BigRational> {
        match self {
            Number::Exact(r) => Some(r),
            Number::Approx(_) => None,
        }
    }
}

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}
