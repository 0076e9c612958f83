//! Futaki and Berman-Ding invariants of product test configurations.
//!
//! A product configuration of `(X, D, xi0)` is given by a co-weight `eta`
//! of the torus. Its Futaki invariant is the derivative of `vol` at `xi0`
//! along `-T_xi0(eta)`, divided by `vol(xi0)`, where
//! `T_xi0(eta) = (A(xi0) eta - A(eta) xi0) / n`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::number::{check_dim, RationalVector, Scalar};
use crate::singularity::{validate, GorensteinVector, ToricConeData};
use crate::volume::{normalized_volume_gradient, normalized_volume_of, VolumeForm};

#[derive(Debug, Clone, PartialEq)]
pub struct ProductTestConfig<T> {
    pub xi0: Vec<T>,
    pub eta: Vec<T>,
    /// Set once `A(xi0) = n` and `A(eta) = 0` hold.
    pub normalized: bool,
}

impl<T: Scalar> ProductTestConfig<T> {
    pub fn new(xi0: Vec<T>, eta: Vec<T>) -> Self {
        ProductTestConfig { xi0, eta, normalized: false }
    }
}

impl ProductTestConfig<num_rational::BigRational> {
    pub fn exact(xi0: RationalVector, eta: RationalVector) -> Self {
        ProductTestConfig::new(xi0.into_coords(), eta.into_coords())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FutakiMethod {
    AnalyticGradient,
    FiniteDifference,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FutakiReport {
    /// `D_{-T(eta)} vol(xi0) / vol(xi0)`.
    pub fut: f64,
    /// `D_{-eta} hvol(xi0) / (n A(xi0)^(n-1) vol(xi0))`.
    pub fut_hvol: f64,
    pub ding: f64,
    pub t_xi_eta: Vec<f64>,
    pub method: FutakiMethod,
}

/// Exact values of both Futaki formulas.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactFutaki<T> {
    pub fut: T,
    pub fut_hvol: T,
    pub t_xi_eta: Vec<T>,
}

fn check_config<T: Scalar>(data: &ToricConeData, cfg: &ProductTestConfig<T>) -> Result<()> {
    check_dim(data.rank(), cfg.xi0.len())?;
    check_dim(data.rank(), cfg.eta.len())?;
    if !data.sigma().contains(&cfg.xi0, true) {
        return Err(Error::NotInReebCone);
    }
    Ok(())
}

/// Rescales to `(a xi0, b xi0 + eta)` with `a = n / A(xi0)`,
/// `b = -A(eta) / A(xi0)`.
pub fn normalize_config<T: Scalar>(data: &ToricConeData, cfg: &ProductTestConfig<T>) -> Result<ProductTestConfig<T>> {
    check_dim(data.rank(), cfg.xi0.len())?;
    check_dim(data.rank(), cfg.eta.len())?;
    let gamma = validate(data)?;
    let a_xi = gamma.pairing(&cfg.xi0);
    if a_xi <= T::zero() {
        return Err(Error::DegenerateXi);
    }
    let n = T::from_usize(data.rank());
    let a = n / a_xi.clone();
    let b = -gamma.pairing(&cfg.eta) / a_xi;
    Ok(ProductTestConfig {
        xi0: cfg.xi0.iter().map(|x| a.clone() * x.clone()).collect(),
        eta: cfg.xi0.iter().zip(&cfg.eta).map(|(x, e)| b.clone() * x.clone() + e.clone()).collect(),
        normalized: true,
    })
}

fn t_normalize_with<T: Scalar>(gamma: &GorensteinVector, n: usize, xi0: &[T], eta: &[T]) -> Vec<T> {
    let a_xi = gamma.pairing(xi0);
    let a_eta = gamma.pairing(eta);
    let n = T::from_usize(n);
    xi0.iter().zip(eta).map(|(x, e)| (a_xi.clone() * e.clone() - a_eta.clone() * x.clone()) / n.clone()).collect()
}

/// `T_xi0(eta) = (A(xi0) eta - A(eta) xi0) / n`; always satisfies `A(T) = 0`.
pub fn t_normalize<T: Scalar>(data: &ToricConeData, xi0: &[T], eta: &[T]) -> Result<Vec<T>> {
    check_dim(data.rank(), xi0.len())?;
    check_dim(data.rank(), eta.len())?;
    let gamma = validate(data)?;
    Ok(t_normalize_with(&gamma, data.rank(), xi0, eta))
}

fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |s, (x, y)| s + x.clone() * y.clone())
}

/// Both Futaki formulas from the analytic gradient, in any scalar type.
pub fn futaki_exact<T: Scalar>(
    data: &ToricConeData,
    form: &VolumeForm,
    cfg: &ProductTestConfig<T>,
) -> Result<ExactFutaki<T>> {
    check_config(data, cfg)?;
    let gamma = validate(data)?;
    let n = data.rank();
    let xi0 = &cfg.xi0;
    let v = form.eval(xi0)?;
    let t = t_normalize_with(&gamma, n, xi0, &cfg.eta);
    let fut = -dot(&form.gradient(xi0)?, &t) / v.clone();
    let a = gamma.pairing(xi0);
    let denom = T::from_usize(n) * a.powi(n - 1) * v;
    let fut_hvol = -dot(&normalized_volume_gradient(&gamma, form, xi0)?, &cfg.eta) / denom;
    Ok(ExactFutaki { fut, fut_hvol, t_xi_eta: t })
}

pub fn futaki(data: &ToricConeData, form: &VolumeForm, cfg: &ProductTestConfig<f64>) -> Result<FutakiReport> {
    futaki_with(data, form, cfg, FutakiMethod::AnalyticGradient)
}

pub fn futaki_with(
    data: &ToricConeData,
    form: &VolumeForm,
    cfg: &ProductTestConfig<f64>,
    method: FutakiMethod,
) -> Result<FutakiReport> {
    let (fut, fut_hvol, t) = match method {
        FutakiMethod::AnalyticGradient => {
            let e = futaki_exact(data, form, cfg)?;
            (e.fut, e.fut_hvol, e.t_xi_eta)
        }
        FutakiMethod::FiniteDifference => finite_difference(data, form, cfg)?,
    };
    if !fut.is_finite() {
        return Err(Error::NotInReebCone);
    }
    Ok(FutakiReport { fut, fut_hvol, ding: fut, t_xi_eta: t, method })
}

/// Central differences. Each probe moves `xi0` by `1e-5` times its distance
/// to the boundary of the Reeb cone, so the truncation error stays small
/// near a facet.
fn finite_difference(
    data: &ToricConeData,
    form: &VolumeForm,
    cfg: &ProductTestConfig<f64>,
) -> Result<(f64, f64, Vec<f64>)> {
    check_config(data, cfg)?;
    let gamma = validate(data)?;
    let n = data.rank();
    let xi0 = &cfg.xi0;
    let reach = 1e-5 * data.sigma().facet_distance(xi0);
    let t = t_normalize_with(&gamma, n, xi0, &cfg.eta);
    let along = |d: &[f64], s: f64| -> Vec<f64> { xi0.iter().zip(d).map(|(x, y)| x - s * y).collect() };
    // d/ds g(xi0 - s d) at s = 0.
    let derivative = |d: &[f64], g: &dyn Fn(&[f64]) -> Result<f64>| -> Result<f64> {
        let len = libm::sqrt(dot(d, d));
        if len == 0.0 {
            return Ok(0.0);
        }
        let h = reach / len;
        Ok((g(&along(d, h))? - g(&along(d, -h))?) / (2.0 * h))
    };

    let v = form.eval(xi0.as_slice())?;
    let dv = derivative(&t, &|x| form.eval(x))?;
    let dh = derivative(&cfg.eta, &|x| normalized_volume_of(&gamma, form, x))?;
    let a = gamma.pairing(xi0.as_slice());
    Ok((dv / v, dh / (n as f64 * Scalar::powi(&a, n - 1) * v), t))
}

/// Berman-Ding invariant. Product configurations are weakly special, so the
/// lct correction vanishes and this equals the Futaki invariant.
pub fn ding_product(data: &ToricConeData, form: &VolumeForm, cfg: &ProductTestConfig<f64>) -> Result<f64> {
    Ok(futaki(data, form, cfg)?.fut)
}
