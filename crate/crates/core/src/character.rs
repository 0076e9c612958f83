//! The index character `F(xi, t) = sum_{alpha in sigma^dual ∩ M} exp(-t <alpha, xi>)`
//! and its leading Laurent coefficient.
//!
//! Two evaluations are provided. [`index_character`] enumerates lattice
//! points in order of `<alpha, xi>` up to a cutoff. [`CharacterFormula`]
//! sums the exact generating function over the relative interiors of the
//! faces of a triangulation of `sigma^dual`, which stays cheap as `t -> 0`.

use alloc::collections::{BTreeSet, BinaryHeap};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg;
use crate::number::{check_dim, ReebVector};
use crate::singularity::ToricConeData;
use crate::volume::VolumeForm;

/// Largest number of candidate points scanned per parallelepiped.
const MAX_BOX_SCAN: u64 = 20_000_000;
/// Largest number of lattice points visited by the enumeration.
pub const MAX_POINTS: usize = 5_000_000;
/// Relative size of the certified tail allowed by [`index_character`].
pub const TAIL_TOLERANCE: f64 = 1e-12;

/// One open face of the triangulation: its lattice points are
/// `p + sum_j m_j u_j` for `p` in `box_points` and `m_j >= 0`.
#[derive(Debug, Clone, PartialEq)]
struct OpenFace {
    generators: Vec<Vec<f64>>,
    box_points: Vec<Vec<f64>>,
}

/// Exact generating function of `sigma^dual ∩ M`.
#[derive(Debug, Clone, PartialEq)]
pub struct CharacterFormula {
    rank: usize,
    faces: Vec<OpenFace>,
}

fn to_i64(v: &[BigInt]) -> Result<Vec<i64>> {
    v.iter().map(|x| x.to_i64().ok_or_else(|| Error::TooLarge(format!("coordinate {x} exceeds i64")))).collect()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Lattice points `sum_j lambda_j u_j` with `lambda in (0, 1]^k`, for
/// linearly independent integer vectors `u`.
pub fn open_parallelepiped_points(u: &[Vec<BigInt>]) -> Result<Vec<Vec<BigInt>>> {
    parallelepiped(u, true)
}

/// Lattice points `sum_j lambda_j u_j` with `lambda in [0, 1)^k`.
pub fn half_open_parallelepiped_points(u: &[Vec<BigInt>]) -> Result<Vec<Vec<BigInt>>> {
    parallelepiped(u, false)
}

fn parallelepiped(u: &[Vec<BigInt>], open: bool) -> Result<Vec<Vec<BigInt>>> {
    let k = u.len();
    let n = u.first().map_or(0, Vec::len);
    if k == 0 {
        return Ok(if open { vec![] } else { vec![vec![]] });
    }
    // lambda = U_I^{-1} p_I for any nonsingular k x k row selection I, so
    // every lambda lies in (1/D) Z^k with D the common denominator of U_I^{-1}.
    let mut best: Option<BigInt> = None;
    for rows in subsets(n, k) {
        let m: Vec<Vec<BigRational>> =
            rows.iter().map(|&r| u.iter().map(|col| BigRational::from_integer(col[r].clone())).collect()).collect();
        if let Some(inv) = linalg::inverse(&m) {
            let d = inv.iter().flatten().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
            if best.as_ref().is_none_or(|b| d < *b) {
                best = Some(d);
            }
        }
    }
    let d = best.ok_or_else(|| Error::InvalidInput("face generators are dependent".into()))?;
    let d = d.to_u64().ok_or_else(|| Error::TooLarge("parallelepiped denominator".into()))?;
    let scan = libm::pow(d as f64, k as f64);
    if scan > MAX_BOX_SCAN as f64 {
        return Err(Error::TooLarge(format!("parallelepiped scan of {scan} candidates")));
    }
    let ui: Vec<Vec<i128>> =
        u.iter().map(|c| to_i64(c).map(|v| v.iter().map(|&x| x as i128).collect())).collect::<Result<_>>()?;
    let di = d as i128;
    let mut m = vec![0u64; k];
    let mut out = Vec::new();
    loop {
        let mut q = vec![0i128; n];
        for (mj, col) in m.iter().zip(&ui) {
            for (x, c) in q.iter_mut().zip(col) {
                *x += *mj as i128 * c;
            }
        }
        if q.iter().all(|x| x % di == 0) {
            // Move lambda_j = 0 to lambda_j = 1 to land in the open box.
            for (mj, col) in m.iter().zip(&ui) {
                if open && *mj == 0 {
                    for (x, c) in q.iter_mut().zip(col) {
                        *x += di * c;
                    }
                }
            }
            out.push(q.iter().map(|x| BigInt::from(x / di)).collect());
        }
        let mut j = 0;
        loop {
            if j == k {
                return Ok(out);
            }
            m[j] += 1;
            if m[j] < d {
                break;
            }
            m[j] = 0;
            j += 1;
        }
    }
}

fn to_f64_vec(v: &[BigInt]) -> Vec<f64> {
    v.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()
}

fn dot_f(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `1 / (1 - exp(-x))`, accurate for small `x`.
fn geometric(x: f64) -> f64 {
    -1.0 / libm::expm1(-x)
}

impl CharacterFormula {
    pub fn new(form: &VolumeForm) -> Result<Self> {
        let rays = form.dual().rays();
        let mut faces: BTreeSet<Vec<usize>> = BTreeSet::new();
        for s in &form.decomposition().simplices {
            for k in 1..=s.len() {
                for idx in subsets(s.len(), k) {
                    faces.insert(idx.iter().map(|&i| s[i]).collect());
                }
            }
        }
        let mut out = Vec::with_capacity(faces.len());
        for f in faces {
            let u: Vec<Vec<BigInt>> = f.iter().map(|&i| rays[i].clone()).collect();
            let pts = open_parallelepiped_points(&u)?;
            out.push(OpenFace {
                generators: u.iter().map(|g| to_f64_vec(g)).collect(),
                box_points: pts.iter().map(|p| to_f64_vec(p)).collect(),
            });
        }
        Ok(CharacterFormula { rank: form.rank(), faces: out })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `F(xi, t)`; `xi` must lie in the Reeb cone and `t > 0`.
    pub fn eval(&self, xi: &[f64], t: f64) -> Result<f64> {
        check_dim(self.rank, xi.len())?;
        if !(t > 0.0) {
            return Err(Error::InvalidInput(format!("t = {t} must be positive")));
        }
        let mut total = 1.0;
        for face in &self.faces {
            let mut denom = 1.0;
            for g in &face.generators {
                let l = dot_f(g, xi);
                if !(l > 0.0) {
                    return Err(Error::NotInReebCone);
                }
                denom *= geometric(t * l);
            }
            let num: f64 = face.box_points.iter().map(|p| libm::exp(-t * dot_f(p, xi))).sum();
            total += num * denom;
        }
        Ok(total)
    }
}

/// Result of the truncated enumeration.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedCharacter {
    /// Sum over lattice points with `<alpha, xi> <= bound`.
    pub value: f64,
    pub bound: f64,
    /// Certified upper bound on the omitted tail.
    pub tail_bound: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Key(f64);

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    // Reversed, so the max-heap pops the smallest pairing first.
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0)
    }
}

/// Generators of the semigroup `sigma^dual ∩ M`: the rays of `sigma^dual`
/// and the parallelepiped points of each full simplex.
fn semigroup_generators(form: &VolumeForm) -> Result<Vec<Vec<i64>>> {
    let rays = form.dual().rays();
    let mut gens: BTreeSet<Vec<BigInt>> = rays.iter().cloned().collect();
    for s in &form.decomposition().simplices {
        let u: Vec<Vec<BigInt>> = s.iter().map(|&i| rays[i].clone()).collect();
        for p in half_open_parallelepiped_points(&u)? {
            if !p.iter().all(Zero::is_zero) {
                gens.insert(p);
            }
        }
    }
    gens.iter().map(|g| to_i64(g)).collect()
}

/// Sum of `exp(-t <alpha, xi>)` over lattice points of `sigma^dual` with
/// `<alpha, xi> <= bound`, visited in increasing order of `<alpha, xi>`.
///
/// The tail beyond the bound is at most `exp(-t bound / 2) F(xi, t / 2)`;
/// an error is returned unless that is below `1e-12` of the partial sum.
pub fn index_character(form: &VolumeForm, xi: &[f64], t: f64, bound: f64) -> Result<TruncatedCharacter> {
    check_dim(form.rank(), xi.len())?;
    if !(t > 0.0) || !(bound >= 0.0) {
        return Err(Error::InvalidInput(format!("need t > 0 and bound >= 0, got t = {t}, bound = {bound}")));
    }
    if !form.sigma().contains(xi, true) {
        return Err(Error::NotInReebCone);
    }
    let formula = CharacterFormula::new(form)?;
    let tail_bound = libm::exp(-t * bound / 2.0) * formula.eval(xi, t / 2.0)?;

    let gens = semigroup_generators(form)?;
    let gens_f: Vec<Vec<f64>> = gens.iter().map(|g| g.iter().map(|&x| x as f64).collect()).collect();
    let n = form.rank();
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut heap: BinaryHeap<(Key, Vec<i64>)> = BinaryHeap::new();
    let origin = vec![0i64; n];
    seen.insert(origin.clone());
    heap.push((Key(0.0), origin));
    let mut value = 0.0;
    let mut points = 0;
    while let Some((Key(h), alpha)) = heap.pop() {
        value += libm::exp(-t * h);
        points += 1;
        if points > MAX_POINTS {
            return Err(Error::TooLarge(format!("more than {MAX_POINTS} lattice points below the bound")));
        }
        for (g, gf) in gens.iter().zip(&gens_f) {
            let hn = h + dot_f(gf, xi);
            if hn > bound {
                continue;
            }
            let next: Vec<i64> = alpha.iter().zip(g).map(|(a, b)| a + b).collect();
            if seen.insert(next.clone()) {
                heap.push((Key(hn), next));
            }
        }
    }
    if tail_bound > TAIL_TOLERANCE * value {
        return Err(Error::TruncationTooSmall { bound, tail: tail_bound });
    }
    Ok(TruncatedCharacter { value, bound, tail_bound, points })
}

/// A cutoff for which [`index_character`] certifies its tail. The partial
/// sum is at least `F(xi, t) (1 - 1e-12)` once the tail is certified.
pub fn sufficient_bound(form: &VolumeForm, xi: &[f64], t: f64) -> Result<f64> {
    let formula = CharacterFormula::new(form)?;
    let half = formula.eval(xi, t / 2.0)?;
    let full = formula.eval(xi, t)?;
    let need = 2.0 / t * libm::log(half / (TAIL_TOLERANCE * full * (1.0 - TAIL_TOLERANCE)));
    Ok(need.max(0.0) * (1.0 + 1e-9) + 1e-9)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CharacterSample {
    pub xi: ReebVector,
    pub t_values: Vec<f64>,
    pub f_values: Vec<f64>,
    /// Enumeration cutoff, when the values come from truncated sums.
    pub truncation_bound: Option<f64>,
    pub a0_estimate: f64,
    pub a0_error: f64,
    pub vol: f64,
}

impl CharacterSample {
    /// `(t, t^n F(xi, t))` pairs.
    pub fn scaled(&self) -> Vec<(f64, f64)> {
        let n = self.xi.dim() as f64;
        self.t_values.iter().zip(&self.f_values).map(|(t, f)| (*t, libm::pow(*t, n) * f)).collect()
    }
}

pub const RICHARDSON_LEVELS: core::ops::RangeInclusive<i32> = 3..=10;
/// Relative agreement required between the extrapolated coefficient and `vol`.
pub const LEADING_TOLERANCE: f64 = 1e-3;

/// Richardson extrapolation to `t = 0` of values sampled at `t_j = 2^-j`
/// (consecutive `j`), assuming an expansion in integer powers of `t`.
/// Returns the estimate and the difference between the last two columns.
pub fn richardson(values: &[f64]) -> (f64, f64) {
    let m = values.len();
    let mut table: Vec<Vec<f64>> = vec![values.to_vec()];
    for k in 1..m {
        let prev = &table[k - 1];
        let f = libm::pow(2.0, k as f64);
        let col: Vec<f64> = (1..prev.len()).map(|j| (f * prev[j] - prev[j - 1]) / (f - 1.0)).collect();
        table.push(col);
    }
    let last = table[m - 1][0];
    let err = if m > 1 { (last - table[m - 2][1]).abs() } else { f64::INFINITY };
    (last, err)
}

/// Estimates `lim_{t -> 0} t^n F(xi, t)` and checks it against `vol(xi)`.
pub fn leading_coefficient(data: &ToricConeData, form: &VolumeForm, xi: &[f64]) -> Result<CharacterSample> {
    check_dim(data.rank(), xi.len())?;
    if !data.sigma().contains(xi, true) {
        return Err(Error::NotInReebCone);
    }
    let formula = CharacterFormula::new(form)?;
    let n = form.rank() as f64;
    let t_values: Vec<f64> = RICHARDSON_LEVELS.map(|j| libm::pow(2.0, -(j as f64))).collect();
    let f_values: Vec<f64> = t_values.iter().map(|&t| formula.eval(xi, t)).collect::<Result<_>>()?;
    let scaled: Vec<f64> = t_values.iter().zip(&f_values).map(|(t, f)| libm::pow(*t, n) * f).collect();
    // Smallest t last.
    let (a0, err) = richardson(&scaled);
    let v = form.eval(xi)?;
    if !a0.is_finite() || a0 <= 0.0 || !(err <= LEADING_TOLERANCE * a0) {
        return Err(Error::ExtrapolationDiverged);
    }
    if (a0 - v).abs() > LEADING_TOLERANCE * v {
        return Err(Error::VolumeMismatch { estimate: a0, vol: v });
    }
    Ok(CharacterSample {
        xi: ReebVector::Approx(xi.to_vec()),
        t_values,
        f_values,
        truncation_bound: None,
        a0_estimate: a0,
        a0_error: err,
        vol: v,
    })
}
