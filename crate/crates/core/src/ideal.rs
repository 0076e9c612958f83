//! Monomial ideals primary to the maximal ideal of `C^n`: Newton polyhedra,
//! multiplicities and log canonical thresholds.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::cone::{triangulate_vectors, PolyCone};
use crate::error::{Error, Result};
use crate::linalg::{abs_det, dot};

/// A compact facet `<a, x> = b` (`b > 0`) of the Newton polyhedron.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompactFacet {
    pub normal: Vec<BigInt>,
    pub offset: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialIdeal {
    n: usize,
    generators: Vec<Vec<BigInt>>,
    facets: Vec<CompactFacet>,
}

fn divides(a: &[BigInt], b: &[BigInt]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Drops generators divisible by another generator.
fn minimal(mut gens: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    gens.sort();
    gens.dedup();
    let keep: Vec<bool> =
        gens.iter().enumerate().map(|(i, g)| !gens.iter().enumerate().any(|(j, h)| j != i && divides(h, g))).collect();
    gens.into_iter().zip(keep).filter_map(|(g, k)| k.then_some(g)).collect()
}

impl MonomialIdeal {
    pub fn new(n: usize, generators: Vec<Vec<BigInt>>) -> Result<Self> {
        if n == 0 || generators.is_empty() {
            return Err(Error::NotPrimary("no generators".into()));
        }
        for g in &generators {
            if g.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: g.len() });
            }
            if g.iter().any(Signed::is_negative) {
                return Err(Error::InvalidInput(format!("negative exponent in {g:?}")));
            }
            if g.iter().all(Zero::is_zero) {
                return Err(Error::NotPrimary("the unit monomial generates the whole ring".into()));
            }
        }
        for i in 0..n {
            let pure = generators.iter().any(|g| g.iter().enumerate().all(|(j, x)| (j == i) != x.is_zero()));
            if !pure {
                return Err(Error::NotPrimary(format!("no pure power of x{}", i + 1)));
            }
        }
        let generators = minimal(generators);
        let facets = newton_facets(n, &generators)?;
        Ok(MonomialIdeal { n, generators, facets })
    }

    pub fn from_i64(n: usize, generators: &[Vec<i64>]) -> Result<Self> {
        MonomialIdeal::new(n, generators.iter().map(|g| crate::number::ints(g)).collect())
    }

    /// The maximal ideal `(x_1, ..., x_n)`.
    pub fn maximal(n: usize) -> Self {
        let gens = (0..n).map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect()).collect();
        MonomialIdeal::new(n, gens).expect("maximal ideal is primary")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Minimal generators, sorted.
    pub fn generators(&self) -> &[Vec<BigInt>] {
        &self.generators
    }

    pub fn compact_facets(&self) -> &[CompactFacet] {
        &self.facets
    }

    /// Whether `x` lies in the Newton polyhedron.
    pub fn newton_contains(&self, x: &[BigRational]) -> bool {
        x.iter().all(|c| !c.is_negative())
            && self.facets.iter().all(|f| {
                let s: BigRational =
                    f.normal.iter().zip(x).map(|(a, c)| BigRational::from_integer(a.clone()) * c).sum();
                s >= BigRational::from_integer(f.offset.clone())
            })
    }

    /// `n!` times the covolume of the Newton polyhedron: the sum over compact
    /// facets `F` of `n! vol(conv(0, F))`.
    pub fn multiplicity(&self) -> BigInt {
        let mut total = BigInt::zero();
        for f in &self.facets {
            let on: Vec<Vec<BigInt>> =
                self.generators.iter().filter(|g| dot(&f.normal, g) == f.offset).cloned().collect();
            let order: Vec<usize> = (0..on.len()).collect();
            let simplices = triangulate_vectors(self.n, &on, &order).expect("facet points span a simplicial fan");
            for s in simplices {
                let m: Vec<Vec<BigInt>> = s.iter().map(|&i| on[i].clone()).collect();
                total += abs_det(&m);
            }
        }
        total
    }

    /// `max { c : (1, ..., 1) in c P }`, the minimum over compact facets of
    /// `sum(a) / b`.
    pub fn lct(&self) -> BigRational {
        self.facets
            .iter()
            .map(|f| BigRational::new(f.normal.iter().sum(), f.offset.clone()))
            .min()
            .expect("primary ideals have a compact facet")
    }

    /// `mult(a) lct(a)^n`.
    pub fn normalized_multiplicity(&self) -> BigRational {
        let l = self.lct();
        let mut p = BigRational::one();
        for _ in 0..self.n {
            p *= &l;
        }
        BigRational::from_integer(self.multiplicity()) * p
    }

    /// `n^n`, the lower bound for [`Self::normalized_multiplicity`].
    pub fn smooth_bound(&self) -> BigInt {
        num_traits::pow(BigInt::from(self.n), self.n)
    }

    /// The ideal generated by all `k`-fold products of generators.
    pub fn power(&self, k: usize) -> Result<MonomialIdeal> {
        if k == 0 {
            return Err(Error::InvalidInput("power must be positive".into()));
        }
        let mut cur = self.generators.clone();
        for _ in 1..k {
            let mut next = Vec::with_capacity(cur.len() * self.generators.len());
            for a in &cur {
                for g in &self.generators {
                    next.push(a.iter().zip(g).map(|(x, y)| x + y).collect());
                }
            }
            cur = minimal(next);
        }
        MonomialIdeal::new(self.n, cur)
    }

    /// The ideal with `extra` added as a generator.
    pub fn with_generator(&self, extra: Vec<BigInt>) -> Result<MonomialIdeal> {
        let mut gens = self.generators.clone();
        gens.push(extra);
        MonomialIdeal::new(self.n, gens)
    }
}

/// Facets of `conv(gens) + R^n_{>=0}` with positive offset, read off the
/// cone over the polyhedron in `R^{n+1}` spanned by `(g, 1)` and `(e_i, 0)`.
fn newton_facets(n: usize, gens: &[Vec<BigInt>]) -> Result<Vec<CompactFacet>> {
    let mut rays: Vec<Vec<BigInt>> = gens
        .iter()
        .map(|g| {
            let mut v = g.clone();
            v.push(BigInt::one());
            v
        })
        .collect();
    for i in 0..n {
        rays.push((0..=n).map(|j| BigInt::from((i == j) as i64)).collect());
    }
    let cone = PolyCone::new(n + 1, rays)?;
    Ok(cone
        .facets()
        .iter()
        .filter(|f| f[n].is_negative())
        .map(|f| CompactFacet { normal: f[..n].to_vec(), offset: -f[n].clone() })
        .collect())
}
