//! Rational polyhedral cones: duality by double description, placing
//! triangulations and membership tests.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, dot, primitive, primitive_from_rational, to_rational};
use crate::number::{pair, Scalar};

/// Largest ambient rank handled by the double-description routine.
pub const MAX_RANK: usize = 6;
/// Largest number of generators handled by the double-description routine.
pub const MAX_RAYS: usize = 64;

/// A pointed, full-dimensional cone given by primitive integer generators.
///
/// Generators are kept as given (made primitive, deduplicated and sorted
/// lexicographically), so they may include non-extreme rays; facets are the
/// primitive inner normals, also sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyCone {
    rank: usize,
    rays: Vec<Vec<BigInt>>,
    facets: Vec<Vec<BigInt>>,
}

impl PolyCone {
    /// Builds the cone generated by `generators`.
    pub fn new(rank: usize, generators: Vec<Vec<BigInt>>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidInput("rank must be positive".into()));
        }
        if rank > MAX_RANK || generators.len() > MAX_RAYS {
            return Err(Error::TooLarge(format!(
                "rank {} with {} generators (limits {MAX_RANK}, {MAX_RAYS})",
                rank,
                generators.len()
            )));
        }
        let mut gens: Vec<Vec<BigInt>> = Vec::with_capacity(generators.len());
        for g in generators {
            if g.len() != rank {
                return Err(Error::DimensionMismatch { expected: rank, got: g.len() });
            }
            if g.iter().all(Zero::is_zero) {
                return Err(Error::InvalidInput("zero generator".into()));
            }
            let p = primitive(&g);
            if !gens.contains(&p) {
                gens.push(p);
            }
        }
        gens.sort();
        let span = linalg::rank(&gens);
        if span < rank {
            return Err(Error::NotFullDim { rank, span });
        }
        let mut facets = double_description(rank, &gens)?;
        if linalg::rank(&facets) < rank {
            return Err(Error::NotPointed);
        }
        facets.sort();
        Ok(PolyCone { rank, rays: gens, facets })
    }

    pub fn from_i64(rank: usize, generators: &[Vec<i64>]) -> Result<Self> {
        PolyCone::new(rank, generators.iter().map(|g| crate::number::ints(g)).collect())
    }

    /// The nonnegative orthant of rank `n`.
    pub fn orthant(n: usize) -> Self {
        let rays: Vec<Vec<BigInt>> =
            (0..n).rev().map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect()).collect();
        PolyCone { rank: n, facets: rays.clone(), rays }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[Vec<BigInt>] {
        &self.rays
    }

    pub fn facets(&self) -> &[Vec<BigInt>] {
        &self.facets
    }

    /// Generators that span a one-dimensional face.
    pub fn extreme_rays(&self) -> Vec<Vec<BigInt>> {
        self.rays.iter().filter(|g| is_extreme(self.rank, g, &self.facets)).cloned().collect()
    }

    pub fn is_extreme(&self, ray: usize) -> bool {
        is_extreme(self.rank, &self.rays[ray], &self.facets)
    }

    pub fn is_simplicial(&self) -> bool {
        self.extreme_rays().len() == self.rank
    }

    /// Membership test; `strict` asks for the interior.
    pub fn contains<T: Scalar>(&self, v: &[T], strict: bool) -> bool {
        if v.len() != self.rank {
            return false;
        }
        self.facets.iter().all(|f| {
            let s = pair(f, v);
            if strict {
                s > T::zero()
            } else {
                s >= T::zero()
            }
        })
    }

    /// Minimum Euclidean distance from `v` to the facet hyperplanes.
    pub fn facet_distance(&self, v: &[f64]) -> f64 {
        self.facets
            .iter()
            .map(|f| {
                let norm = libm::sqrt(f.iter().map(|x| f64::from_bigint(x).powi(2)).sum());
                pair(f, v) / norm
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Index of `ray` among the (sorted) rays, after making it primitive.
    pub fn ray_index(&self, ray: &[BigInt]) -> Option<usize> {
        let p = primitive(ray);
        self.rays.iter().position(|r| *r == p)
    }
}

/// The dual cone `{y : <y, r> >= 0 for every ray r}`.
pub fn dual_cone(c: &PolyCone) -> Result<PolyCone> {
    PolyCone::new(c.rank, c.facets.clone())
}

pub fn contains(c: &PolyCone, v: &[BigRational], strict: bool) -> bool {
    c.contains(v, strict)
}

fn is_extreme(rank: usize, g: &[BigInt], facets: &[Vec<BigInt>]) -> bool {
    let tight: Vec<Vec<BigInt>> = facets.iter().filter(|f| dot(f, g).is_zero()).cloned().collect();
    linalg::rank(&tight) == rank - 1
}

struct DdRay {
    v: Vec<BigInt>,
    zeros: Vec<usize>,
}

/// Extreme rays of `{y : <c, y> >= 0 for all c in constraints}`, assuming the
/// constraints have full rank.
fn double_description(rank: usize, constraints: &[Vec<BigInt>]) -> Result<Vec<Vec<BigInt>>> {
    // Initial basis: the first `rank` independent constraints.
    let mut basis: Vec<usize> = Vec::new();
    for (i, _) in constraints.iter().enumerate() {
        let mut trial: Vec<Vec<BigInt>> = basis.iter().map(|&j| constraints[j].clone()).collect();
        trial.push(constraints[i].clone());
        if linalg::rank(&trial) == trial.len() {
            basis.push(i);
            if basis.len() == rank {
                break;
            }
        }
    }
    let m: Vec<Vec<BigRational>> = basis.iter().map(|&j| to_rational(&constraints[j])).collect();
    let inv = linalg::inverse(&m).ok_or(Error::NotFullDim { rank, span: basis.len() })?;

    let mut rays: Vec<DdRay> = (0..rank)
        .map(|j| {
            let col: Vec<BigRational> = inv.iter().map(|row| row[j].clone()).collect();
            let v = primitive_from_rational(&col);
            let zeros = basis.iter().copied().filter(|&k| k != basis[j]).collect();
            DdRay { v, zeros }
        })
        .collect();

    for (i, c) in constraints.iter().enumerate() {
        if basis.contains(&i) {
            continue;
        }
        let vals: Vec<BigInt> = rays.iter().map(|r| dot(c, &r.v)).collect();
        let mut next: Vec<DdRay> = Vec::new();
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_negative()).collect();
        for &p in &pos {
            for &q in &neg {
                let common: Vec<usize> = rays[p].zeros.iter().copied().filter(|z| rays[q].zeros.contains(z)).collect();
                if rank < 2 || common.len() < rank - 2 {
                    continue;
                }
                let rows: Vec<Vec<BigInt>> = common.iter().map(|&z| constraints[z].clone()).collect();
                if linalg::rank(&rows) != rank - 2 {
                    continue;
                }
                let a = &vals[p];
                let b = -&vals[q];
                let v: Vec<BigInt> = rays[q].v.iter().zip(&rays[p].v).map(|(x, y)| a * x + &b * y).collect();
                let v = primitive(&v);
                let mut zeros = common;
                zeros.push(i);
                next.push(DdRay { v, zeros });
            }
        }
        for (k, mut r) in rays.into_iter().enumerate() {
            if vals[k].is_zero() {
                r.zeros.push(i);
                next.push(r);
            } else if vals[k].is_positive() {
                next.push(r);
            }
        }
        rays = next;
        if rays.len() > 4096 {
            return Err(Error::TooLarge("double description produced too many rays".into()));
        }
    }

    let mut out: Vec<Vec<BigInt>> = Vec::new();
    for r in rays {
        if !out.contains(&r.v) {
            out.push(r.v);
        }
    }
    Ok(out)
}

/// A triangulation of a cone into simplicial cones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialDecomposition {
    /// Each simplex lists indices into the generator list, sorted ascending.
    pub simplices: Vec<Vec<usize>>,
    /// `|det|` of each simplex's generators.
    pub det_values: Vec<BigRational>,
}

/// Placing triangulation of `c` in lexicographic ray order.
pub fn triangulate(c: &PolyCone) -> Result<SimplicialDecomposition> {
    let order: Vec<usize> = (0..c.rays.len()).collect();
    triangulate_with_order(c, &order)
}

/// Placing triangulation of `c`, inserting rays in the given order.
pub fn triangulate_with_order(c: &PolyCone, order: &[usize]) -> Result<SimplicialDecomposition> {
    let simplices = triangulate_vectors(c.rank, &c.rays, order)?;
    let det_values = simplices
        .iter()
        .map(|s| {
            let m: Vec<Vec<BigInt>> = s.iter().map(|&i| c.rays[i].clone()).collect();
            BigRational::from_integer(linalg::abs_det(&m))
        })
        .collect();
    Ok(SimplicialDecomposition { simplices, det_values })
}

/// Placing triangulation of the cone spanned by `vectors` (assumed pointed),
/// using only the given vectors as generators. Vectors that fall inside the
/// cone built so far are skipped.
pub fn triangulate_vectors(rank: usize, vectors: &[Vec<BigInt>], order: &[usize]) -> Result<Vec<Vec<usize>>> {
    let mut basis: Vec<usize> = Vec::new();
    // Coordinates of every inserted vector in the current basis.
    let mut coords: BTreeMap<usize, Vec<BigRational>> = BTreeMap::new();
    let mut simplices: Vec<Vec<usize>> = Vec::new();

    for &i in order {
        let v = vectors.get(i).ok_or_else(|| Error::InvalidInput(format!("order index {i} out of range")))?;
        if v.len() != rank {
            return Err(Error::DimensionMismatch { expected: rank, got: v.len() });
        }
        let a: Vec<Vec<BigRational>> = (0..rank)
            .map(|row| basis.iter().map(|&b| BigRational::from_integer(vectors[b][row].clone())).collect())
            .collect();
        let b = to_rational(v);
        let in_span = if basis.is_empty() { None } else { linalg::solve(&a, &b) };
        match in_span {
            None => {
                for c in coords.values_mut() {
                    c.push(BigRational::zero());
                }
                let mut e = alloc::vec![BigRational::zero(); basis.len() + 1];
                e[basis.len()] = BigRational::from_integer(1.into());
                coords.insert(i, e);
                basis.push(i);
                if simplices.is_empty() {
                    simplices.push(alloc::vec![i]);
                } else {
                    for s in simplices.iter_mut() {
                        s.push(i);
                        s.sort_unstable();
                    }
                }
            }
            Some(cv) => {
                let mut facet_count: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
                for s in &simplices {
                    for skip in 0..s.len() {
                        let f: Vec<usize> = s.iter().enumerate().filter(|&(k, _)| k != skip).map(|(_, &x)| x).collect();
                        *facet_count.entry(f).or_insert(0) += 1;
                    }
                }
                let mut added: Vec<Vec<usize>> = Vec::new();
                for s in &simplices {
                    for skip in 0..s.len() {
                        let f: Vec<usize> = s.iter().enumerate().filter(|&(k, _)| k != skip).map(|(_, &x)| x).collect();
                        if facet_count[&f] != 1 {
                            continue;
                        }
                        let mut with_new: Vec<Vec<BigRational>> = f.iter().map(|k| coords[k].clone()).collect();
                        let mut with_apex = with_new.clone();
                        with_new.push(cv.clone());
                        with_apex.push(coords[&s[skip]].clone());
                        let side_new = linalg::det_rational(&with_new);
                        let side_apex = linalg::det_rational(&with_apex);
                        if (side_new.is_positive() && side_apex.is_negative())
                            || (side_new.is_negative() && side_apex.is_positive())
                        {
                            let mut t = f.clone();
                            t.push(i);
                            t.sort_unstable();
                            added.push(t);
                        }
                    }
                }
                if !added.is_empty() {
                    coords.insert(i, cv);
                    simplices.extend(added);
                }
            }
        }
    }
    if basis.len() < rank {
        return Err(Error::NotFullDim { rank, span: basis.len() });
    }
    simplices.sort();
    Ok(simplices)
}
