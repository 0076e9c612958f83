//! Independent oracles and random instance generators shared by the
//! integration tests and the acceptance gate.
#![allow(dead_code)]

use fanocone_core::cone::{dual_cone, PolyCone};
use fanocone_core::degeneration::WeightedPoint;
use fanocone_core::ideal::MonomialIdeal;
use fanocone_core::ToricConeData;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn q(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

fn dot_big(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// A random klt cone of the given rank. Rays are `(x, h)` with `h >= 1`, and
/// the boundary is chosen so that `gamma = w / K` for `w` the sum of the rays
/// of the dual cone and `K = max <w, v_i>`.
pub fn random_klt_cone(rng: &mut ChaCha8Rng, rank: usize) -> ToricConeData {
    if rank == 1 {
        return ToricConeData::affine_space(1);
    }
    loop {
        let k = rng.gen_range(rank..=rank + 2);
        let gens: Vec<Vec<BigInt>> = (0..k)
            .map(|_| {
                let mut v: Vec<i64> = (0..rank - 1).map(|_| rng.gen_range(-2..=2)).collect();
                v.push(rng.gen_range(1..=3));
                big(&v)
            })
            .collect();
        let Ok(cone) = PolyCone::new(rank, gens) else { continue };
        let rays = cone.extreme_rays();
        let cone = PolyCone::new(rank, rays.clone()).expect("extreme rays span the same cone");
        let dual = dual_cone(&cone).expect("dual of a full pointed cone");
        let mut w = vec![BigInt::zero(); rank];
        for u in dual.rays() {
            for (x, y) in w.iter_mut().zip(u) {
                *x += y;
            }
        }
        let pairings: Vec<BigInt> = rays.iter().map(|v| dot_big(&w, v)).collect();
        let kmax = pairings.iter().max().unwrap().clone();
        let boundary: Vec<BigRational> = pairings
            .iter()
            .map(|p| BigRational::from_integer(1.into()) - BigRational::new(p.clone(), kmax.clone()))
            .collect();
        if let Ok(d) = ToricConeData::new(rank, rays, boundary, "random") {
            return d;
        }
    }
}

/// A random point of the Reeb cone: a positive rational combination of the
/// rays of sigma.
pub fn random_reeb_rational(rng: &mut ChaCha8Rng, data: &ToricConeData) -> Vec<BigRational> {
    let n = data.rank();
    let mut xi = vec![BigRational::zero(); n];
    for r in data.sigma().rays() {
        let c = q(rng.gen_range(1..=20), rng.gen_range(1..=7));
        for (x, y) in xi.iter_mut().zip(r) {
            *x += &c * BigRational::from_integer(y.clone());
        }
    }
    xi
}

pub fn random_reeb(rng: &mut ChaCha8Rng, data: &ToricConeData) -> Vec<f64> {
    let n = data.rank();
    let mut xi = vec![0.0; n];
    for r in data.sigma().rays() {
        let c: f64 = rng.gen_range(0.2..2.0);
        for (x, y) in xi.iter_mut().zip(r) {
            *x += c * y.to_f64().unwrap();
        }
    }
    xi
}

pub fn to_f64(v: &[BigRational]) -> Vec<f64> {
    v.iter().map(|x| x.to_f64().unwrap()).collect()
}

/// `vol(a, b, c) = c / (a b (c - a)(c - b))` for the conifold cone with rays
/// `(0,0,1), (1,0,1), (0,1,1), (1,1,1)`, derived by hand from the two
/// unimodular cones of its dual.
pub fn conifold_vol(x: &[f64]) -> f64 {
    let (a, b, c) = (x[0], x[1], x[2]);
    c / (a * b * (c - a) * (c - b))
}

/// Minimum of `conifold_vol` over the slice `c = 3` (where `A = c`), by a
/// `1e-3` grid followed by golden-section refinement in each coordinate.
/// Returns `(a, b, min hvol)`.
pub fn conifold_grid_minimum() -> (f64, f64, f64) {
    let f = |a: f64, b: f64| 27.0 * conifold_vol(&[a, b, 3.0]);
    let step = 1e-3;
    let mut best = (f64::INFINITY, 0.0, 0.0);
    let mut a = step;
    while a < 3.0 {
        let mut b = step;
        while b < 3.0 {
            let v = f(a, b);
            if v < best.0 {
                best = (v, a, b);
            }
            b += step;
        }
        a += step;
    }
    let (_, mut a, mut b) = best;
    for _ in 0..4 {
        a = golden(|t| f(t, b), a - step, a + step);
        b = golden(|t| f(a, t), b - step, b + step);
    }
    (a, b, f(a, b))
}

pub fn golden(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        }
    }
    (lo + hi) / 2.0
}

/// `n! vol{alpha in sigma^dual : <alpha, xi> <= 1}` for a rank-3 cone, as a
/// pyramid over the planar polygon cut by `<alpha, xi> = 1`: `2 area / |xi|`.
pub fn rank3_pyramid_vol(data: &ToricConeData, xi: &[f64]) -> f64 {
    let dual = dual_cone(data.sigma()).unwrap();
    let pts: Vec<[f64; 3]> = dual
        .extreme_rays()
        .iter()
        .map(|u| {
            let u: Vec<f64> = u.iter().map(|x| x.to_f64().unwrap()).collect();
            let l: f64 = u.iter().zip(xi).map(|(a, b)| a * b).sum();
            [u[0] / l, u[1] / l, u[2] / l]
        })
        .collect();
    let m = pts.len() as f64;
    let c = [0, 1, 2].map(|i| pts.iter().map(|p| p[i]).sum::<f64>() / m);
    let norm = (xi.iter().map(|x| x * x).sum::<f64>()).sqrt();
    let nrm = [xi[0] / norm, xi[1] / norm, xi[2] / norm];
    // An in-plane frame.
    let e1 = {
        let d = [pts[0][0] - c[0], pts[0][1] - c[1], pts[0][2] - c[2]];
        let l = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
        [d[0] / l, d[1] / l, d[2] / l]
    };
    let e2 = [nrm[1] * e1[2] - nrm[2] * e1[1], nrm[2] * e1[0] - nrm[0] * e1[2], nrm[0] * e1[1] - nrm[1] * e1[0]];
    let mut planar: Vec<(f64, f64)> = pts
        .iter()
        .map(|p| {
            let d = [p[0] - c[0], p[1] - c[1], p[2] - c[2]];
            (d[0] * e1[0] + d[1] * e1[1] + d[2] * e1[2], d[0] * e2[0] + d[1] * e2[1] + d[2] * e2[2])
        })
        .collect();
    planar.sort_by(|a, b| a.1.atan2(a.0).total_cmp(&b.1.atan2(b.0)));
    let mut area = 0.0;
    for i in 0..planar.len() {
        let (x0, y0) = planar[i];
        let (x1, y1) = planar[(i + 1) % planar.len()];
        area += x0 * y1 - x1 * y0;
    }
    2.0 * (area.abs() / 2.0) / norm
}

/// `n! R^-n #{alpha in sigma^dual ∩ M : <alpha, xi> <= R}` by scanning a
/// box; converges to `vol(xi)` as `R` grows. Intended for small ranks.
pub fn lattice_count_vol(data: &ToricConeData, xi: &[f64], r: f64) -> f64 {
    let n = data.rank();
    let dual = dual_cone(data.sigma()).unwrap();
    let facets: Vec<Vec<f64>> =
        data.sigma().extreme_rays().iter().map(|v| v.iter().map(|x| x.to_f64().unwrap()).collect()).collect();
    // Every point of the region is a combination of dual rays u/<u, xi> with
    // coefficients summing to at most R, so this box contains it.
    let mut lim = vec![0.0f64; n];
    for u in dual.extreme_rays() {
        let u: Vec<f64> = u.iter().map(|x| x.to_f64().unwrap()).collect();
        let l: f64 = u.iter().zip(xi).map(|(a, b)| a * b).sum();
        for (m, x) in lim.iter_mut().zip(&u) {
            *m = m.max((x / l * r).abs());
        }
    }
    let lim: Vec<i64> = lim.iter().map(|x| x.ceil() as i64).collect();
    // Scan the first n - 1 coordinates; the last one ranges over an interval
    // cut out by the facet inequalities and <alpha, xi> <= R.
    let mut rows: Vec<(Vec<f64>, f64)> = facets.iter().map(|v| (v.clone(), 0.0)).collect();
    rows.push((xi.iter().map(|x| -x).collect(), -r));
    let mut count: u64 = 0;
    let mut p = vec![0i64; n - 1];
    for (x, l) in p.iter_mut().zip(&lim) {
        *x = -l;
    }
    loop {
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        for (a, b) in &rows {
            // a . (p, z) >= b.
            let rest: f64 = a[..n - 1].iter().zip(&p).map(|(x, &y)| x * y as f64).sum();
            let an = a[n - 1];
            if an > 0.0 {
                lo = lo.max((b - rest) / an);
            } else if an < 0.0 {
                hi = hi.min((b - rest) / an);
            } else if rest < *b - 1e-9 {
                hi = f64::NEG_INFINITY;
            }
        }
        let (lo, hi) = ((lo - 1e-9).ceil(), (hi + 1e-9).floor());
        if hi >= lo {
            count += (hi - lo) as u64 + 1;
        }
        let mut j = 0;
        loop {
            if j == n - 1 {
                let fact: f64 = (1..=n).map(|i| i as f64).product();
                return fact * count as f64 / r.powi(n as i32);
            }
            p[j] += 1;
            if p[j] <= lim[j] {
                break;
            }
            p[j] = -lim[j];
            j += 1;
        }
    }
}

/// `sum exp(-t <alpha, xi>)` over every lattice point of `sigma^dual` in a
/// box, keeping those with `<alpha, xi> <= cutoff`.
pub fn brute_force_character(data: &ToricConeData, xi: &[f64], t: f64, cutoff: f64, half_width: i64) -> f64 {
    let n = data.rank();
    let facets: Vec<Vec<f64>> =
        data.sigma().extreme_rays().iter().map(|v| v.iter().map(|x| x.to_f64().unwrap()).collect()).collect();
    let mut p = vec![-half_width; n];
    let mut s = 0.0;
    loop {
        let pf: Vec<f64> = p.iter().map(|&x| x as f64).collect();
        let h: f64 = pf.iter().zip(xi).map(|(a, b)| a * b).sum();
        if h <= cutoff && facets.iter().all(|v| v.iter().zip(&pf).map(|(a, b)| a * b).sum::<f64>() >= -1e-12) {
            s += (-t * h).exp();
        }
        let mut j = 0;
        loop {
            if j == n {
                return s;
            }
            p[j] += 1;
            if p[j] <= half_width {
                break;
            }
            p[j] = -half_width;
            j += 1;
        }
    }
}

/// A random primary monomial ideal in `n` variables.
pub fn random_primary_ideal(rng: &mut ChaCha8Rng, n: usize) -> MonomialIdeal {
    let mut gens: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut g = vec![0; n];
            g[i] = rng.gen_range(1..=6);
            g
        })
        .collect();
    let extra = rng.gen_range(0..=4);
    for _ in 0..extra {
        gens.push((0..n).map(|_| rng.gen_range(0..=3)).collect());
    }
    gens.retain(|g| g.iter().any(|&x| x != 0));
    MonomialIdeal::from_i64(n, &gens).unwrap()
}

/// Two-dimensional oracle: lower convex hull of the generators, then the
/// shoelace area under it. Returns `(2 covolume, lct)`.
pub fn plane_ideal_oracle(gens: &[(i64, i64)]) -> (BigRational, BigRational) {
    let mut pts: Vec<(i64, i64)> = gens.to_vec();
    pts.sort();
    // Keep the staircase of points not dominated by another one.
    let mut chain: Vec<(i64, i64)> = Vec::new();
    for &p in &pts {
        if chain.iter().any(|c| c.0 <= p.0 && c.1 <= p.1) {
            continue;
        }
        while chain.len() >= 2 {
            let a = chain[chain.len() - 2];
            let b = chain[chain.len() - 1];
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            if cross <= 0 {
                chain.pop();
            } else {
                break;
            }
        }
        chain.push(p);
    }
    let mut twice = 0i64;
    for w in chain.windows(2) {
        twice += (w[0].0 * w[1].1 - w[1].0 * w[0].1).abs();
    }
    // lct: the diagonal (t, t) meets the chain on some edge.
    let mut lct: Option<BigRational> = None;
    for w in chain.windows(2) {
        let (a, b) = (w[0], w[1]);
        // Line through a, b: (b.1 - a.1) x - (b.0 - a.0) y = (b.1 - a.1) a.0 - (b.0 - a.0) a.1.
        let nx = b.1 - a.1;
        let ny = -(b.0 - a.0);
        let off = nx * a.0 + ny * a.1;
        let c = q(-(nx + ny), -off);
        let l = lct.get_or_insert(c.clone());
        if c < *l {
            *l = c;
        }
    }
    (BigRational::from_integer(twice.into()), lct.unwrap())
}

/// A random support of at most six distinct weight pairs in `[-10, 10]^2`.
pub fn random_support(rng: &mut ChaCha8Rng) -> WeightedPoint {
    let size = rng.gen_range(1..=6);
    let mut w: Vec<(i64, i64)> = Vec::new();
    while w.len() < size {
        let p = (rng.gen_range(-10..=10), rng.gen_range(-10..=10));
        if !w.contains(&p) {
            w.push(p);
        }
    }
    WeightedPoint::from_weights(&w).unwrap()
}

/// Least `k_0` in `1..=limit` with equality of limits for every `k` in
/// `k_0..=limit`, by direct scan.
pub fn brute_force_min_k(p: &WeightedPoint, limit: i64) -> i64 {
    use fanocone_core::degeneration::{limit as lim, two_step_limit};
    let target = two_step_limit(p);
    let mut k0 = limit + 1;
    for k in (1..=limit).rev() {
        if lim(p, (k, 1)).unwrap() == target {
            k0 = k;
        } else {
            break;
        }
    }
    k0
}
