//! Toric log Fano cone singularities: validation, log discrepancy,
//! regularity of Reeb vectors and Diophantine rationalization.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::cone::PolyCone;
use crate::error::{Error, Result};
use crate::linalg::{self, to_rational};
use crate::number::{check_dim, pair_rational, Number, RationalVector, ReebVector, Scalar};

/// The pair `(X, D)`: a cone `sigma` in the co-weight lattice together with
/// boundary coefficients `c_i`, one per ray of `sigma` (in `sigma.rays()` order).
#[derive(Debug, Clone, PartialEq)]
pub struct ToricConeData {
    sigma: PolyCone,
    boundary: Vec<BigRational>,
    label: String,
}

/// `gamma` with `<gamma, v_i> = 1 - c_i` for every ray `v_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GorensteinVector {
    pub gamma: RationalVector,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regularity {
    QuasiRegular,
    Irregular,
}

impl ToricConeData {
    /// `boundary[i]` is attached to `rays[i]`. Every ray must be an extreme
    /// ray of the cone it spans.
    pub fn new(
        rank: usize,
        rays: Vec<Vec<BigInt>>,
        boundary: Vec<BigRational>,
        label: impl Into<String>,
    ) -> Result<Self> {
        if boundary.len() != rays.len() {
            return Err(Error::InvalidInput(format!(
                "{} rays but {} boundary coefficients",
                rays.len(),
                boundary.len()
            )));
        }
        if let Some(i) = boundary.iter().position(|c| *c < BigRational::zero()) {
            return Err(Error::InvalidInput(format!("boundary coefficient {i} is negative")));
        }
        let sigma = PolyCone::new(rank, rays.clone())?;
        if sigma.rays().len() != rays.len() {
            return Err(Error::InvalidInput("repeated ray".into()));
        }
        let mut coeffs = alloc::vec![BigRational::zero(); rays.len()];
        for (ray, c) in rays.iter().zip(boundary) {
            let idx = sigma.ray_index(ray).expect("ray of its own cone");
            if !sigma.is_extreme(idx) {
                return Err(Error::InvalidInput(format!("ray {ray:?} is not an extreme ray")));
            }
            coeffs[idx] = c;
        }
        Ok(ToricConeData { sigma, boundary: coeffs, label: label.into() })
    }

    /// No boundary: every coefficient is zero.
    pub fn without_boundary(rank: usize, rays: &[Vec<i64>], label: impl Into<String>) -> Result<Self> {
        let rays: Vec<Vec<BigInt>> = rays.iter().map(|r| crate::number::ints(r)).collect();
        let zeros = alloc::vec![BigRational::zero(); rays.len()];
        Self::new(rank, rays, zeros, label)
    }

    /// Affine space `C^n` with the standard torus action.
    pub fn affine_space(n: usize) -> Self {
        let rays: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
        Self::without_boundary(n, &rays, format!("C^{n}")).expect("orthant is a valid cone")
    }

    /// The ordinary double point `xy = zw`.
    pub fn conifold() -> Self {
        Self::without_boundary(
            3,
            &[alloc::vec![0, 0, 1], alloc::vec![1, 0, 1], alloc::vec![0, 1, 1], alloc::vec![1, 1, 1]],
            "conifold",
        )
        .expect("conifold cone is valid")
    }

    pub fn rank(&self) -> usize {
        self.sigma.rank()
    }

    pub fn sigma(&self) -> &PolyCone {
        &self.sigma
    }

    pub fn boundary(&self) -> &[BigRational] {
        &self.boundary
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Solves the Gorenstein system and certifies klt.
    pub fn validate(&self) -> Result<GorensteinVector> {
        validate(self)
    }
}

pub fn validate(data: &ToricConeData) -> Result<GorensteinVector> {
    for (index, c) in data.boundary.iter().enumerate() {
        if *c >= BigRational::one() {
            return Err(Error::NotKlt { index, value: format!("{c}") });
        }
    }
    let a: Vec<Vec<BigRational>> = data.sigma.rays().iter().map(|r| to_rational(r)).collect();
    let b: Vec<BigRational> = data.boundary.iter().map(|c| BigRational::one() - c).collect();
    let gamma = linalg::solve(&a, &b).ok_or(Error::NotQGorenstein)?;
    // Each ray pairs to 1 - c_i > 0, so gamma is positive on sigma minus the origin.
    Ok(GorensteinVector { gamma: RationalVector::new(gamma) })
}

impl GorensteinVector {
    pub fn coords(&self) -> &[BigRational] {
        self.gamma.coords()
    }

    /// `A(xi) = <gamma, xi>` without a cone membership check.
    pub fn pairing<T: Scalar>(&self, xi: &[T]) -> T {
        pair_rational(self.gamma.coords(), xi)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.gamma.to_f64()
    }
}

/// `A_{(X,D)}(wt_xi) = <gamma, xi>` for `xi` in the Reeb cone.
pub fn log_discrepancy_of<T: Scalar>(data: &ToricConeData, gamma: &GorensteinVector, xi: &[T]) -> Result<T> {
    check_dim(data.rank(), xi.len())?;
    if !data.sigma.contains(xi, true) {
        return Err(Error::NotInReebCone);
    }
    Ok(gamma.pairing(xi))
}

pub fn log_discrepancy(data: &ToricConeData, xi: &ReebVector) -> Result<Number> {
    let gamma = validate(data)?;
    Ok(match xi {
        ReebVector::Exact(v) => Number::Exact(log_discrepancy_of(data, &gamma, v.coords())?),
        ReebVector::Approx(v) => Number::Approx(log_discrepancy_of(data, &gamma, v)?),
    })
}

/// Denominator bound used when only a tolerance is supplied: `floor((10 tol)^(-1/2))`.
pub fn default_denominator_bound(tol: f64) -> u64 {
    let b = libm::floor(1.0 / libm::sqrt(10.0 * tol));
    if b.is_finite() && b >= 1.0 {
        b as u64
    } else {
        1
    }
}

/// Quasi-regular iff `xi` is a positive multiple of a rational vector. Exact
/// inputs are always quasi-regular; floating inputs are tested for a common
/// denominator `q <= floor((10 tol)^(-1/2))`.
pub fn classify_regularity(xi: &ReebVector, tol: f64) -> Regularity {
    classify_regularity_with_bound(xi, tol, default_denominator_bound(tol))
}

/// Floating test: is there `q <= bound` such that every ratio `xi_i / xi_ref`
/// (with `xi_ref` the coordinate of largest magnitude) lies within `tol` of a
/// fraction `p / q`?
pub fn classify_regularity_with_bound(xi: &ReebVector, tol: f64, bound: u64) -> Regularity {
    let v = match xi {
        ReebVector::Exact(_) => return Regularity::QuasiRegular,
        ReebVector::Approx(v) => v,
    };
    let reference = v.iter().copied().fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
    if reference == 0.0 {
        return Regularity::QuasiRegular;
    }
    let ratios: Vec<f64> = v.iter().map(|x| x / reference).collect();
    for q in 1..=bound.max(1) {
        let qf = q as f64;
        let ok = ratios.iter().all(|r| {
            let p = libm::round(r * qf);
            (r - p / qf).abs() <= tol
        });
        if ok {
            return Regularity::QuasiRegular;
        }
    }
    Regularity::Irregular
}

/// Componentwise nearest integer to `k xi`; errors if the result leaves the
/// Reeb cone.
pub fn rationalize(data: &ToricConeData, xi: &ReebVector, k: u64) -> Result<ReebVector> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    check_dim(data.rank(), xi.dim())?;
    let kk = BigRational::from_integer(BigInt::from(k));
    let coords: Vec<BigRational> = match xi {
        ReebVector::Exact(v) => v.coords().iter().map(|x| (x * &kk).round()).collect(),
        ReebVector::Approx(v) => {
            v.iter().map(|x| BigRational::from_integer(BigInt::from(libm::round(x * k as f64) as i64))).collect()
        }
    };
    if !data.sigma.contains(&coords, true) {
        return Err(Error::RoundingExitsCone);
    }
    Ok(ReebVector::Exact(RationalVector::new(coords)))
}
