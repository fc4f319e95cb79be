use super::linalg;
use super::{box_points, Cone, ExponentVec};
use crate::error::{usage, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DecompositionKind {
    /// `n + 1` cones: the nonnegative orthant and, for each `j`, the points whose
    /// `j`-th coordinate is non-positive and minimal.
    Standard,
    /// The `2^n` sign orthants.
    Orthant,
    /// Cones adapted to the vertices of a polytope.
    Refined,
    Custom,
}

/// An indexed family of cones covering `Z^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConicDecomposition {
    pub kind: DecompositionKind,
    n: usize,
    cones: Vec<Cone>,
}

impl ConicDecomposition {
    pub fn new(kind: DecompositionKind, cones: Vec<Cone>) -> Result<Self> {
        let n = cones.first().map_or(0, |c| c.dim());
        if n == 0 || cones.iter().any(|c| c.dim() != n) {
            return Err(usage("cones must share a positive dimension"));
        }
        let cones = cones
            .into_iter()
            .enumerate()
            .map(|(i, mut c)| {
                c.id = i;
                c
            })
            .collect();
        Ok(ConicDecomposition { kind, n, cones })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    pub fn cone(&self, i: usize) -> &Cone {
        &self.cones[i]
    }

    pub fn len(&self) -> usize {
        self.cones.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cones.is_empty()
    }

    /// Index of the first cone containing `x`.
    pub fn locate(&self, x: &ExponentVec) -> Option<usize> {
        self.cones.iter().position(|c| c.contains(x))
    }
}

/// Builds the standard (`n + 1` cones) or orthant (`2^n` cones) decomposition.
pub fn build_decomposition(kind: DecompositionKind, n: usize) -> Result<ConicDecomposition> {
    if n == 0 {
        return Err(usage("decomposition dimension must be positive"));
    }
    let cones = match kind {
        DecompositionKind::Standard => {
            let mut cones = Vec::with_capacity(n + 1);
            let orthant: Vec<ExponentVec> = (0..n).map(|k| ExponentVec::unit(n, k)).collect();
            let hs: Vec<Vec<i64>> = (0..n).map(|k| ExponentVec::unit(n, k).0.to_vec()).collect();
            cones.push(Cone::with_halfspaces(0, orthant, hs)?);
            let all_neg = ExponentVec(smallvec::smallvec![-1; n]);
            for j in 0..n {
                let mut rays: Vec<ExponentVec> = (0..n)
                    .filter(|&k| k != j)
                    .map(|k| ExponentVec::unit(n, k))
                    .collect();
                rays.push(all_neg.clone());
                // x_j ≤ 0, then x_j ≤ x_k for k ≠ j.
                let mut hs = vec![(-&ExponentVec::unit(n, j)).0.to_vec()];
                for k in (0..n).filter(|&k| k != j) {
                    hs.push((&ExponentVec::unit(n, k) - &ExponentVec::unit(n, j)).0.to_vec());
                }
                cones.push(Cone::with_halfspaces(j + 1, rays, hs)?);
            }
            cones
        }
        DecompositionKind::Orthant => {
            let mut cones = Vec::with_capacity(1 << n);
            for mask in 0..(1usize << n) {
                let rays: Vec<ExponentVec> = (0..n)
                    .map(|k| {
                        let e = ExponentVec::unit(n, k);
                        if mask >> k & 1 == 1 {
                            -&e
                        } else {
                            e
                        }
                    })
                    .collect();
                let hs = rays.iter().map(|r| r.0.to_vec()).collect();
                cones.push(Cone::with_halfspaces(mask, rays, hs)?);
            }
            cones
        }
        DecompositionKind::Refined | DecompositionKind::Custom => {
            return Err(usage("only standard and orthant decompositions are built by dimension"))
        }
    };
    ConicDecomposition::new(kind, cones)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeReport {
    pub id: usize,
    pub pointed: bool,
    pub group_generating: bool,
}

/// Result of checking `gr⟨T_i ∩ T_j⟩ ∩ T_i = T_i ∩ T_j` on a box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairReport {
    pub i: usize,
    pub j: usize,
    pub witness: Option<ExponentVec>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionReport {
    pub cones: Vec<ConeReport>,
    pub pairs: Vec<PairReport>,
    pub uncovered: Option<ExponentVec>,
}

impl DecompositionReport {
    pub fn cones_ok(&self) -> bool {
        self.cones.iter().all(|c| c.pointed && c.group_generating)
    }

    pub fn pairs_ok(&self) -> bool {
        self.pairs.iter().all(|p| p.witness.is_none())
    }

    pub fn covered(&self) -> bool {
        self.uncovered.is_none()
    }

    pub fn passed(&self) -> bool {
        self.cones_ok() && self.pairs_ok() && self.covered()
    }
}

fn in_span(basis: &[Vec<i128>], x: &ExponentVec) -> bool {
    let r = linalg::rank(basis);
    let mut ext = basis.to_vec();
    ext.push(x.coords().iter().map(|&c| c as i128).collect());
    linalg::rank(&ext) == r
}

/// Checks cone validity, the pairwise face condition and coverage on `[-radius, radius]^n`.
pub fn validate_decomposition(d: &ConicDecomposition, radius: i64) -> DecompositionReport {
    let pts = box_points(d.dim(), radius);
    let cones = d
        .cones()
        .iter()
        .map(|c| ConeReport {
            id: c.id,
            pointed: c.is_pointed(),
            group_generating: c.generates_group(),
        })
        .collect();
    let mut pairs = Vec::new();
    for (i, ci) in d.cones().iter().enumerate() {
        for (j, cj) in d.cones().iter().enumerate() {
            if i == j {
                continue;
            }
            let common: Vec<Vec<i128>> = pts
                .iter()
                .filter(|x| ci.contains(x) && cj.contains(x))
                .map(|x| x.coords().iter().map(|&c| c as i128).collect())
                .collect();
            // Reduce to a spanning subset before the per-point rank tests.
            let mut basis: Vec<Vec<i128>> = Vec::new();
            for v in common {
                let mut ext = basis.clone();
                ext.push(v.clone());
                if linalg::rank(&ext) > basis.len() {
                    basis = ext;
                }
            }
            let witness = pts
                .iter()
                .find(|x| ci.contains(x) && !cj.contains(x) && in_span(&basis, x))
                .cloned();
            pairs.push(PairReport { i, j, witness });
        }
    }
    let uncovered = pts.iter().find(|x| d.locate(x).is_none()).cloned();
    DecompositionReport {
        cones,
        pairs,
        uncovered,
    }
}
