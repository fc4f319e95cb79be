//! Exponent vectors in `Z^n`, rational polyhedral cones and conic decompositions.

mod cone;
mod decomposition;
pub(crate) mod linalg;

use std::fmt;
use std::ops::{Add, Neg, Sub};

use smallvec::SmallVec;

pub use cone::Cone;
pub use decomposition::{
    build_decomposition, validate_decomposition, ConeReport, ConicDecomposition,
    DecompositionKind, DecompositionReport, PairReport,
};

/// A lattice point of `Z^n`; the derived order is lexicographic.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ExponentVec(pub SmallVec<[i64; 4]>);

impl ExponentVec {
    pub fn zero(n: usize) -> Self {
        ExponentVec(SmallVec::from_elem(0, n))
    }

    pub fn unit(n: usize, k: usize) -> Self {
        let mut v = Self::zero(n);
        v.0[k] = 1;
        v
    }

    pub fn from_slice(c: &[i64]) -> Self {
        ExponentVec(SmallVec::from_slice(c))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn dot(&self, h: &[i64]) -> i64 {
        self.0.iter().zip(h).map(|(a, b)| a * b).sum()
    }

    pub fn scale(&self, k: i64) -> Self {
        ExponentVec(self.0.iter().map(|c| c * k).collect())
    }

    pub fn norm_inf(&self) -> i64 {
        self.0.iter().map(|c| c.abs()).max().unwrap_or(0)
    }

    pub fn norm_l1(&self) -> i64 {
        self.0.iter().map(|c| c.abs()).sum()
    }

    pub fn sup(&self, other: &Self) -> Self {
        ExponentVec(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn inf(&self, other: &Self) -> Self {
        ExponentVec(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }
}

impl<'a> Add<&'a ExponentVec> for &'a ExponentVec {
    type Output = ExponentVec;
    fn add(self, o: &ExponentVec) -> ExponentVec {
        debug_assert_eq!(self.dim(), o.dim());
        ExponentVec(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl<'a> Sub<&'a ExponentVec> for &'a ExponentVec {
    type Output = ExponentVec;
    fn sub(self, o: &ExponentVec) -> ExponentVec {
        debug_assert_eq!(self.dim(), o.dim());
        ExponentVec(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &ExponentVec {
    type Output = ExponentVec;
    fn neg(self) -> ExponentVec {
        ExponentVec(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Debug for ExponentVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for ExponentVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Shorthand constructor.
pub fn ev(c: &[i64]) -> ExponentVec {
    ExponentVec::from_slice(c)
}

/// All points of `[-r, r]^n` in lexicographic order.
pub fn box_points(n: usize, r: i64) -> Vec<ExponentVec> {
    let lo = vec![-r; n];
    let hi = vec![r; n];
    range_points(&lo, &hi)
}

/// All points of the box `lo ≤ x ≤ hi` in lexicographic order.
pub fn range_points(lo: &[i64], hi: &[i64]) -> Vec<ExponentVec> {
    let n = lo.len();
    if lo.iter().zip(hi).any(|(a, b)| a > b) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur: SmallVec<[i64; 4]> = SmallVec::from_slice(lo);
    loop {
        out.push(ExponentVec(cur.clone()));
        let mut k = n;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if cur[k] < hi[k] {
                cur[k] += 1;
                for j in k + 1..n {
                    cur[j] = lo[j];
                }
                break;
            }
        }
    }
}

/// Box points ordered by L1 norm, then lexicographically; smallest witnesses come first.
pub fn box_points_by_norm(n: usize, r: i64) -> Vec<ExponentVec> {
    let mut pts = box_points(n, r);
    pts.sort_by(|a, b| a.norm_l1().cmp(&b.norm_l1()).then_with(|| a.cmp(b)));
    pts
}
