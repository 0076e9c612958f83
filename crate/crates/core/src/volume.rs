//! Closed-form volume of Reeb vectors, normalized volume and its
//! minimization over the Reeb cone.
//!
//! For a toric cone every weight space is one-dimensional, so `vol(xi)` is
//! `n!` times the Euclidean volume of `{alpha in sigma^dual : <alpha, xi> <= 1}`.
//! Triangulating `sigma^dual` into simplicial cones with generators
//! `u_1..u_n` gives
//!
//! ```text
//! vol(xi) = sum_s |det(u_s)| / prod_j <u_{s,j}, xi>
//! ```
//!
//! The minimization runs on the slice `{A(xi) = n}`, where the normalized
//! volume equals `n^n vol(xi)` and is strictly convex.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_rational::BigRational;

use crate::cone::{dual_cone, triangulate, PolyCone, SimplicialDecomposition};
use crate::error::{Error, Result};
use crate::number::{check_dim, pair, Number, ReebVector, Scalar};
use crate::singularity::{validate, GorensteinVector, ToricConeData};

/// One simplicial cone of the triangulated dual cone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VolumeTerm {
    pub det: BigRational,
    pub factors: Vec<Vec<BigInt>>,
}

/// `xi -> vol(xi)` as a sum of reciprocal products of linear forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VolumeForm {
    rank: usize,
    sigma: PolyCone,
    dual: PolyCone,
    decomposition: SimplicialDecomposition,
    terms: Vec<VolumeTerm>,
}

pub fn build_volume_form(data: &ToricConeData) -> Result<VolumeForm> {
    let dual = dual_cone(data.sigma())?;
    let decomposition = triangulate(&dual)?;
    Ok(VolumeForm::from_decomposition(data.sigma().clone(), dual, decomposition))
}

impl VolumeForm {
    /// Assembles the form from any triangulation of `dual`.
    pub fn from_decomposition(sigma: PolyCone, dual: PolyCone, decomposition: SimplicialDecomposition) -> Self {
        let terms = decomposition
            .simplices
            .iter()
            .zip(&decomposition.det_values)
            .map(|(s, d)| VolumeTerm { det: d.clone(), factors: s.iter().map(|&i| dual.rays()[i].clone()).collect() })
            .collect();
        VolumeForm { rank: sigma.rank(), sigma, dual, decomposition, terms }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn terms(&self) -> &[VolumeTerm] {
        &self.terms
    }

    pub fn decomposition(&self) -> &SimplicialDecomposition {
        &self.decomposition
    }

    /// The cone of weights, `sigma^dual`.
    pub fn dual(&self) -> &PolyCone {
        &self.dual
    }

    pub fn sigma(&self) -> &PolyCone {
        &self.sigma
    }

    /// Per-term values `<u_{s,j}, xi>`, all required to be positive.
    fn pairings<T: Scalar>(&self, xi: &[T]) -> Result<Vec<Vec<T>>> {
        check_dim(self.rank, xi.len())?;
        let mut out = Vec::with_capacity(self.terms.len());
        for term in &self.terms {
            let mut row = Vec::with_capacity(self.rank);
            for u in &term.factors {
                let l = pair(u, xi);
                if l <= T::zero() {
                    return Err(Error::NotInReebCone);
                }
                row.push(l);
            }
            out.push(row);
        }
        Ok(out)
    }

    fn term_values<T: Scalar>(&self, pairings: &[Vec<T>]) -> Vec<T> {
        self.terms
            .iter()
            .zip(pairings)
            .map(|(term, ls)| {
                let denom = ls.iter().cloned().fold(T::one(), |a, b| a * b);
                T::from_rational(&term.det) / denom
            })
            .collect()
    }

    pub fn eval<T: Scalar>(&self, xi: &[T]) -> Result<T> {
        let ls = self.pairings(xi)?;
        Ok(self.term_values(&ls).into_iter().fold(T::zero(), |a, b| a + b))
    }

    /// `d vol / d xi_k = -sum_s v_s sum_j u_{s,j,k} / <u_{s,j}, xi>`.
    pub fn gradient<T: Scalar>(&self, xi: &[T]) -> Result<Vec<T>> {
        let ls = self.pairings(xi)?;
        let vals = self.term_values(&ls);
        let mut g = vec![T::zero(); self.rank];
        for ((term, l), v) in self.terms.iter().zip(&ls).zip(vals) {
            let w = self.log_gradient(term, l);
            for k in 0..self.rank {
                g[k] = g[k].clone() - v.clone() * w[k].clone();
            }
        }
        Ok(g)
    }

    /// Hessian: `sum_s v_s (w_k w_l + sum_j u_jk u_jl / L_j^2)` with
    /// `w = sum_j u_j / L_j`.
    pub fn hessian<T: Scalar>(&self, xi: &[T]) -> Result<Vec<Vec<T>>> {
        let ls = self.pairings(xi)?;
        let vals = self.term_values(&ls);
        let n = self.rank;
        let mut h = vec![vec![T::zero(); n]; n];
        for ((term, l), v) in self.terms.iter().zip(&ls).zip(vals) {
            let w = self.log_gradient(term, l);
            for a in 0..n {
                for b in 0..n {
                    let mut s = w[a].clone() * w[b].clone();
                    for (u, lj) in term.factors.iter().zip(l) {
                        s = s + T::from_bigint(&u[a]) * T::from_bigint(&u[b]) / (lj.clone() * lj.clone());
                    }
                    h[a][b] = h[a][b].clone() + v.clone() * s;
                }
            }
        }
        Ok(h)
    }

    fn log_gradient<T: Scalar>(&self, term: &VolumeTerm, l: &[T]) -> Vec<T> {
        let mut w = vec![T::zero(); self.rank];
        for (u, lj) in term.factors.iter().zip(l) {
            for k in 0..self.rank {
                w[k] = w[k].clone() + T::from_bigint(&u[k]) / lj.clone();
            }
        }
        w
    }
}

pub fn vol(form: &VolumeForm, xi: &ReebVector) -> Result<Number> {
    Ok(match xi {
        ReebVector::Exact(v) => Number::Exact(form.eval(v.coords())?),
        ReebVector::Approx(v) => Number::Approx(form.eval(v.as_slice())?),
    })
}

pub fn grad_vol(form: &VolumeForm, xi: &[f64]) -> Result<Vec<f64>> {
    form.gradient(xi)
}

pub fn hess_vol(form: &VolumeForm, xi: &[f64]) -> Result<Vec<Vec<f64>>> {
    form.hessian(xi)
}

/// `A(xi)^n vol(xi)`.
pub fn normalized_volume_of<T: Scalar>(gamma: &GorensteinVector, form: &VolumeForm, xi: &[T]) -> Result<T> {
    let v = form.eval(xi)?;
    let a = gamma.pairing(xi);
    Ok(a.powi(form.rank) * v)
}

/// Gradient of `A(xi)^n vol(xi)`: `n A^(n-1) vol gamma + A^n grad vol`.
pub fn normalized_volume_gradient<T: Scalar>(gamma: &GorensteinVector, form: &VolumeForm, xi: &[T]) -> Result<Vec<T>> {
    let n = form.rank;
    let v = form.eval(xi)?;
    let g = form.gradient(xi)?;
    let a = gamma.pairing(xi);
    let an1 = a.powi(n - 1);
    let an = an1.clone() * a;
    Ok(gamma
        .coords()
        .iter()
        .zip(g)
        .map(|(c, gk)| T::from_usize(n) * an1.clone() * v.clone() * T::from_rational(c) + an.clone() * gk)
        .collect())
}

pub fn normalized_volume(data: &ToricConeData, form: &VolumeForm, xi: &ReebVector) -> Result<Number> {
    let gamma = validate(data)?;
    Ok(match xi {
        ReebVector::Exact(v) => Number::Exact(normalized_volume_of(&gamma, form, v.coords())?),
        ReebVector::Approx(v) => Number::Approx(normalized_volume_of(&gamma, form, v.as_slice())?),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimizeOptions {
    /// Bound on the slice-projected gradient of `log vol`.
    pub tol: f64,
    pub max_iters: usize,
    pub armijo: f64,
    pub shrink: f64,
    /// Iterates closer than this to a facet hyperplane abort the run.
    pub barrier_margin: f64,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        MinimizeOptions { tol: 1e-10, max_iters: 200, armijo: 1e-4, shrink: 0.5, barrier_margin: 1e-9 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certificate {
    Converged,
    MaxIters,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinimizationResult {
    pub minimizer: Vec<f64>,
    pub min_hvol: f64,
    /// Slice-projected gradient norm of `vol`, divided by `vol`.
    pub grad_norm: f64,
    pub newton_iters: usize,
    /// The slice is `{A(xi) = slice_value}` with `slice_value = n`.
    pub slice_value: BigRational,
    pub certificate: Certificate,
    /// Smallest eigenvalue of the slice-restricted Hessian of `vol` at the
    /// minimizer; `None` when the slice is a point (rank 1).
    pub slice_hessian_min_eig: Option<f64>,
}

/// Orthonormal basis of the hyperplane `gamma^perp`, as columns.
fn slice_basis(gamma: &[f64]) -> DMatrix<f64> {
    let n = gamma.len();
    let gnorm = libm::sqrt(gamma.iter().map(|x| x * x).sum());
    let ghat: Vec<f64> = gamma.iter().map(|x| x / gnorm).collect();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    // Start from the coordinate vectors least aligned with gamma.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| ghat[a].abs().total_cmp(&ghat[b].abs()));
    for &i in &order {
        if basis.len() == n - 1 {
            break;
        }
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        for q in core::iter::once(&ghat).chain(basis.iter()) {
            let d: f64 = v.iter().zip(q).map(|(a, b)| a * b).sum();
            for (x, y) in v.iter_mut().zip(q) {
                *x -= d * y;
            }
        }
        let norm = libm::sqrt(v.iter().map(|x| x * x).sum());
        if norm > 1e-8 {
            basis.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    DMatrix::from_fn(n, basis.len(), |r, c| basis[c][r])
}

fn to_dmatrix(h: &[Vec<f64>]) -> DMatrix<f64> {
    let n = h.len();
    DMatrix::from_fn(n, n, |r, c| h[r][c])
}

/// Starting point: the sum of the rays of `sigma`, scaled onto the slice.
pub fn initial_point(data: &ToricConeData, gamma: &GorensteinVector) -> Vec<f64> {
    let n = data.rank();
    let mut s = vec![0.0; n];
    for r in data.sigma().rays() {
        for (x, y) in s.iter_mut().zip(r) {
            *x += f64::from_bigint(y);
        }
    }
    let a = gamma.pairing(&s);
    s.into_iter().map(|x| x * n as f64 / a).collect()
}

/// Minimizes the normalized volume over the Reeb cone by damped Newton on
/// the slice `{A(xi) = n}`.
pub fn minimize(data: &ToricConeData, form: &VolumeForm, opts: &MinimizeOptions) -> Result<MinimizationResult> {
    let gamma = validate(data)?;
    let start = initial_point(data, &gamma);
    minimize_from(data, form, &start, opts)
}

/// As [`minimize`], from a chosen interior start (rescaled onto the slice).
pub fn minimize_from(
    data: &ToricConeData,
    form: &VolumeForm,
    start: &[f64],
    opts: &MinimizeOptions,
) -> Result<MinimizationResult> {
    let n = data.rank();
    check_dim(n, start.len())?;
    let gamma = validate(data)?;
    let gamma_f = gamma.to_f64();
    if !data.sigma().contains(start, true) {
        return Err(Error::NotInReebCone);
    }
    let a0 = gamma.pairing(start);
    let mut xi: Vec<f64> = start.iter().map(|x| x * n as f64 / a0).collect();
    let z = slice_basis(&gamma_f);
    let eps = f64::EPSILON;

    let mut iters = 0;
    loop {
        if data.sigma().facet_distance(&xi) < opts.barrier_margin {
            return Err(Error::BoundaryEscape);
        }
        let f = form.eval(xi.as_slice())?;
        let g = DVector::from_vec(form.gradient(xi.as_slice())?);
        let gs = z.transpose() * &g;
        let grad_norm = gs.norm() / f;
        let hs = z.transpose() * to_dmatrix(&form.hessian(xi.as_slice())?) * &z;

        let converged = grad_norm <= opts.tol;
        if converged || iters >= opts.max_iters {
            let min_eig = if hs.nrows() == 0 { None } else { Some(hs.clone().symmetric_eigenvalues().min()) };
            return Ok(MinimizationResult {
                min_hvol: libm::pow(n as f64, n as f64) * f,
                minimizer: xi,
                grad_norm,
                newton_iters: iters,
                slice_value: BigRational::from_integer(BigInt::from(n)),
                certificate: if converged { Certificate::Converged } else { Certificate::MaxIters },
                slice_hessian_min_eig: min_eig,
            });
        }
        iters += 1;

        let dir = match hs.clone().cholesky() {
            Some(ch) => -ch.solve(&gs),
            None => -gs.clone(),
        };
        let step = &z * dir;
        let slope = g.dot(&step);

        let mut alpha = 1.0;
        let mut accepted = None;
        let mut hit_boundary = false;
        while alpha > 1e-30 {
            let trial: Vec<f64> = xi.iter().zip(step.iter()).map(|(x, s)| x + alpha * s).collect();
            if data.sigma().facet_distance(&trial) < opts.barrier_margin {
                hit_boundary = true;
                alpha *= opts.shrink;
                continue;
            }
            hit_boundary = false;
            let ft = form.eval(trial.as_slice())?;
            // Slack of a few ulps keeps steps alive once f has converged to rounding.
            if ft <= f + opts.armijo * alpha * slope + 4.0 * eps * f.abs() {
                accepted = Some(trial);
                break;
            }
            alpha *= opts.shrink;
        }
        match accepted {
            Some(next) => xi = next,
            None if hit_boundary => return Err(Error::BoundaryEscape),
            None => {
                // No decrease possible at working precision.
                let min_eig = if hs.nrows() == 0 { None } else { Some(hs.symmetric_eigenvalues().min()) };
                return Ok(MinimizationResult {
                    min_hvol: libm::pow(n as f64, n as f64) * f,
                    minimizer: xi,
                    grad_norm,
                    newton_iters: iters,
                    slice_value: BigRational::from_integer(BigInt::from(n)),
                    certificate: Certificate::MaxIters,
                    slice_hessian_min_eig: min_eig,
                });
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Yes,
    /// `witness` is `xi0 - xi*` on the slice; its product configuration has
    /// negative Futaki invariant.
    No {
        witness: Vec<f64>,
    },
}

/// K-semistability of `(X, D, xi0)`: `wt_xi0` must minimize the normalized
/// volume, i.e. `|xi0 / A(xi0) - xi* / A(xi*)| <= tol`.
pub fn is_ksemistable(
    data: &ToricConeData,
    form: &VolumeForm,
    xi0: &[f64],
    tol: f64,
    opts: &MinimizeOptions,
) -> Result<Verdict> {
    let n = data.rank();
    check_dim(n, xi0.len())?;
    let gamma = validate(data)?;
    if !data.sigma().contains(xi0, true) {
        return Err(Error::NotInReebCone);
    }
    let res = minimize(data, form, opts)?;
    if res.certificate != Certificate::Converged {
        return Err(Error::NotConverged { iters: res.newton_iters });
    }
    let a0 = gamma.pairing(xi0);
    let nf = n as f64;
    let dist = libm::sqrt(
        xi0.iter()
            .zip(&res.minimizer)
            .map(|(x, m)| {
                let d = x / a0 - m / nf;
                d * d
            })
            .sum(),
    );
    if dist <= tol {
        Ok(Verdict::Yes)
    } else {
        let witness = xi0.iter().zip(&res.minimizer).map(|(x, m)| x * nf / a0 - m).collect();
        Ok(Verdict::No { witness })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::{ints, rat, RationalVector};

    fn exact(v: &[i64]) -> Vec<BigRational> {
        RationalVector::from_ints(v).into_coords()
    }

    #[test]
    fn affine_space_form_is_single_unimodular_term() {
        let f = build_volume_form(&ToricConeData::affine_space(3)).unwrap();
        assert_eq!(f.terms().len(), 1);
        assert_eq!(f.terms()[0].det, rat(1, 1));
        let mut factors = f.terms()[0].factors.clone();
        factors.sort();
        assert_eq!(factors, vec![ints(&[0, 0, 1]), ints(&[0, 1, 0]), ints(&[1, 0, 0])]);
    }

    #[test]
    fn closed_form_values() {
        let c2 = build_volume_form(&ToricConeData::affine_space(2)).unwrap();
        assert_eq!(c2.eval(&exact(&[1, 1])).unwrap(), rat(1, 1));
        assert_eq!(c2.eval(&exact(&[1, 2])).unwrap(), rat(1, 2));
        let c3 = build_volume_form(&ToricConeData::affine_space(3)).unwrap();
        assert_eq!(c3.eval(&exact(&[1, 1, 1])).unwrap(), rat(1, 1));
        let c1 = build_volume_form(&ToricConeData::affine_space(1)).unwrap();
        assert_eq!(c1.eval(&[rat(3, 1)]).unwrap(), rat(1, 3));
        let cf = build_volume_form(&ToricConeData::conifold()).unwrap();
        assert_eq!(cf.terms().len(), 2);
        assert!(cf.terms().iter().all(|t| t.det == rat(1, 1)));
        // c / (a b (c - a)(c - b)) at (1/2, 1/2, 3/2).
        let xi = vec![rat(1, 2), rat(1, 2), rat(3, 2)];
        assert_eq!(cf.eval(&xi).unwrap(), rat(6, 1));
    }

    #[test]
    fn gradients_of_affine_plane() {
        let c2 = build_volume_form(&ToricConeData::affine_space(2)).unwrap();
        assert_eq!(c2.gradient(&exact(&[1, 1])).unwrap(), vec![rat(-1, 1), rat(-1, 1)]);
        assert_eq!(c2.gradient(&exact(&[1, 2])).unwrap(), vec![rat(-1, 2), rat(-1, 4)]);
        // d^2/dx^2 1/(xy) = 2/(x^3 y), d^2/dxdy = 1/(x^2 y^2).
        assert_eq!(c2.hessian(&exact(&[1, 2])).unwrap(), vec![vec![rat(1, 1), rat(1, 4)], vec![rat(1, 4), rat(1, 4)]]);
    }

    #[test]
    fn outside_reeb_cone() {
        let c2 = build_volume_form(&ToricConeData::affine_space(2)).unwrap();
        assert_eq!(c2.eval(&exact(&[1, 0])), Err(Error::NotInReebCone));
        assert_eq!(c2.eval(&[1.0, -0.5]), Err(Error::NotInReebCone));
    }

    #[test]
    fn normalized_volume_values() {
        let d = ToricConeData::affine_space(2);
        let f = build_volume_form(&d).unwrap();
        let h = |v: &[i64]| normalized_volume(&d, &f, &ReebVector::exact_ints(v)).unwrap();
        assert_eq!(h(&[1, 1]), Number::Exact(rat(4, 1)));
        assert_eq!(h(&[1, 2]), Number::Exact(rat(9, 2)));
        assert_eq!(h(&[2, 2]), h(&[1, 1]));
    }

    #[test]
    fn minimize_affine_spaces() {
        for n in 1..=4 {
            let d = ToricConeData::affine_space(n);
            let f = build_volume_form(&d).unwrap();
            let r = minimize(&d, &f, &MinimizeOptions::default()).unwrap();
            assert_eq!(r.certificate, Certificate::Converged);
            let nn = libm::pow(n as f64, n as f64);
            assert!((r.min_hvol - nn).abs() <= 1e-9 * nn, "n={n}: {}", r.min_hvol);
            assert!(r.minimizer.iter().all(|x| (x - 1.0).abs() < 1e-8));
            assert!(r.grad_norm < 1e-10);
        }
    }

    #[test]
    fn minimize_with_boundary() {
        let d = ToricConeData::new(2, vec![ints(&[1, 0]), ints(&[0, 1])], vec![rat(1, 2), rat(0, 1)], "").unwrap();
        let f = build_volume_form(&d).unwrap();
        let r = minimize(&d, &f, &MinimizeOptions::default()).unwrap();
        assert!((r.min_hvol - 2.0).abs() < 1e-9);
        assert!((r.minimizer[0] / r.minimizer[1] - 2.0).abs() < 1e-8);
    }

    #[test]
    fn max_iters_is_reported() {
        let d = ToricConeData::conifold();
        let f = build_volume_form(&d).unwrap();
        let opts = MinimizeOptions { max_iters: 0, ..Default::default() };
        let r = minimize_from(&d, &f, &[0.3, 2.0, 3.0], &opts).unwrap();
        assert_eq!(r.certificate, Certificate::MaxIters);
    }

    #[test]
    fn verdicts_on_affine_plane() {
        let d = ToricConeData::affine_space(2);
        let f = build_volume_form(&d).unwrap();
        let o = MinimizeOptions::default();
        assert_eq!(is_ksemistable(&d, &f, &[1.0, 1.0], 1e-8, &o).unwrap(), Verdict::Yes);
        match is_ksemistable(&d, &f, &[1.0, 2.0], 1e-8, &o).unwrap() {
            Verdict::No { witness } => {
                assert!((witness[0] + 1.0 / 3.0).abs() < 1e-9);
                assert!((witness[1] - 1.0 / 3.0).abs() < 1e-9);
            }
            Verdict::Yes => panic!("(1,2) is not the minimizer"),
        }
    }
}
