//! Valuations `val_r` and `val_P`, the term orders `≤_r` and `≤_P`, and division and
//! Buchberger's algorithm on series truncated at a precision cap.
//!
//! A weight `r` values a term as `val_r(c·X^u) = val(c) − r·u`. Vertex weights are kept
//! scaled by a common denominator so that all comparisons run on integers.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::coeffs::{ExtRational, Field, Value};
use crate::error::{usage, Error, Result};
use crate::gmo::{GeneralizedOrder, ScoreFunction, ZeroSet};
use crate::groebner::{buchberger, GBConfig, GBResult};
use crate::laurent::{ti_generators, search_module, LaurentPoly, Term, DEFAULT_SEARCH_RADIUS};
use crate::lattice::{
    box_points, linalg, validate_decomposition, Cone, ConicDecomposition, DecompositionKind,
    DecompositionReport, ExponentVec,
};
use crate::reduction::{leading_term, truncate, Division, Reducer, TermOrder};

/// Precision cap used when none is given.
pub const DEFAULT_CAP: i64 = 20;
/// Largest ambient dimension for polytopes with more than one vertex.
pub const MAX_POLYTOPE_DIM: usize = 3;
pub const MAX_VERTICES: usize = 8;

fn lcm_of_denominators<'a>(qs: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
    qs.into_iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

fn to_i64(x: &BigInt) -> Result<i64> {
    x.to_i64()
        .ok_or_else(|| Error::Resource(format!("weight entry {x} does not fit in 64 bits")))
}

fn scale_weights(r: &[BigRational], den: &BigInt) -> Result<Vec<i64>> {
    r.iter()
        .map(|q| to_i64(&(q * BigRational::from_integer(den.clone())).to_integer()))
        .collect()
}

fn dot(a: &[i64], u: &ExponentVec) -> i128 {
    a.iter()
        .zip(u.coords())
        .map(|(x, y)| *x as i128 * *y as i128)
        .sum()
}

fn ratio(num: i128, den: i64) -> ExtRational {
    ExtRational::Finite(BigRational::new(BigInt::from(num), BigInt::from(den)))
}

fn coeff_val(field: &Field, c: &Value) -> i128 {
    field.valuation_int(c).expect("stored coefficients are nonzero") as i128
}

fn ceil_scaled(cap: &BigRational, den: i64) -> Result<i128> {
    let x = (cap * BigRational::from_integer(den.into())).ceil().to_integer();
    x.to_i128()
        .ok_or_else(|| Error::Resource(format!("precision cap {cap} is too large")))
}

/// A weight vector `r ∈ Q^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightContext {
    r: Vec<BigRational>,
    den: i64,
    scaled: Vec<i64>,
}

impl WeightContext {
    pub fn new(r: Vec<BigRational>) -> Result<Self> {
        if r.is_empty() {
            return Err(usage("weight vector must be nonempty"));
        }
        let den = lcm_of_denominators(&r);
        let scaled = scale_weights(&r, &den)?;
        Ok(WeightContext {
            r,
            den: to_i64(&den)?,
            scaled,
        })
    }

    pub fn from_ints(r: &[i64]) -> Self {
        Self::new(r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
            .expect("integer weights")
    }

    pub fn dim(&self) -> usize {
        self.r.len()
    }

    pub fn weight(&self) -> &[BigRational] {
        &self.r
    }

    /// `den · val_r(c·X^u)`.
    fn scaled_term(&self, field: &Field, c: &Value, u: &ExponentVec) -> i128 {
        self.den as i128 * coeff_val(field, c) - dot(&self.scaled, u)
    }

    pub fn term_value(&self, field: &Field, c: &Value, u: &ExponentVec) -> ExtRational {
        if field.is_zero(c) {
            return ExtRational::Infinity;
        }
        ratio(self.scaled_term(field, c, u), self.den)
    }

    fn min_scaled(&self, f: &LaurentPoly) -> Option<i128> {
        let field = f.field();
        f.terms().map(|(u, c)| self.scaled_term(field, c, u)).min()
    }

    /// `in_r(f)`: the terms of minimal valuation.
    pub fn initial(&self, f: &LaurentPoly) -> LaurentPoly {
        match self.min_scaled(f) {
            None => f.clone(),
            Some(m) => {
                let field = f.field().clone();
                f.filter(|u, c| self.scaled_term(&field, c, u) == m)
            }
        }
    }
}

impl fmt::Display for WeightContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.r.iter().map(|q| q.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `(val_r(f), in_r(f))`; `(+∞, 0)` at zero.
pub fn val_weight(ctx: &WeightContext, f: &LaurentPoly) -> Result<(ExtRational, LaurentPoly)> {
    if f.dim() != ctx.dim() {
        return Err(Error::ContextMismatch);
    }
    Ok(match ctx.min_scaled(f) {
        None => (ExtRational::Infinity, f.clone()),
        Some(m) => (ratio(m, ctx.den), ctx.initial(f)),
    })
}

/// `≤_r` on terms: smaller valuation is greater, then `≤_ω` on the monomials.
pub fn compare_weight(ctx: &WeightContext, o: &GeneralizedOrder, s: &Term, t: &Term) -> Ordering {
    let vs = ctx.scaled_term(&s.coeff.field, &s.coeff.value, &s.exp);
    let vt = ctx.scaled_term(&t.coeff.field, &t.coeff.value, &t.exp);
    vt.cmp(&vs).then_with(|| o.compare(&s.exp, &t.exp))
}

/// Ordered vertices `r_1, …, r_t` of a polytope `P`; indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolytopeContext {
    vertices: Vec<Vec<BigRational>>,
    den: i64,
    scaled: Vec<Vec<i64>>,
}

impl PolytopeContext {
    /// Rejects empty lists, duplicates, mixed dimensions and points that are not
    /// vertices of the convex hull.
    pub fn new(vertices: Vec<Vec<BigRational>>) -> Result<Self> {
        let n = vertices.first().map_or(0, |v| v.len());
        if n == 0 {
            return Err(usage("a polytope needs at least one vertex of positive dimension"));
        }
        if vertices.iter().any(|v| v.len() != n) {
            return Err(usage("polytope vertices have different dimensions"));
        }
        if vertices.len() > 1 && (n > MAX_POLYTOPE_DIM || vertices.len() > MAX_VERTICES) {
            return Err(usage(format!(
                "polytopes are supported up to dimension {MAX_POLYTOPE_DIM} with at most {MAX_VERTICES} vertices"
            )));
        }
        for i in 0..vertices.len() {
            for j in 0..i {
                if vertices[i] == vertices[j] {
                    return Err(usage(format!("vertex {} repeats vertex {}", i + 1, j + 1)));
                }
            }
        }
        for i in 0..vertices.len() {
            let others: Vec<&Vec<BigRational>> = vertices
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, v)| v)
                .collect();
            if in_convex_hull(&vertices[i], &others) {
                return Err(Error::Degenerate(format!(
                    "point {} lies in the convex hull of the others",
                    i + 1
                )));
            }
        }
        let den = lcm_of_denominators(vertices.iter().flatten());
        let scaled = vertices
            .iter()
            .map(|v| scale_weights(v, &den))
            .collect::<Result<_>>()?;
        Ok(PolytopeContext {
            den: to_i64(&den)?,
            vertices,
            scaled,
        })
    }

    pub fn from_ints(vertices: &[&[i64]]) -> Result<Self> {
        Self::new(
            vertices
                .iter()
                .map(|v| v.iter().map(|&x| BigRational::from_integer(x.into())).collect())
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].len()
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Vec<BigRational>] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> WeightContext {
        WeightContext::new(self.vertices[i].clone()).expect("validated vertex")
    }

    /// Affine hull is all of `R^n`.
    pub fn is_full_dimensional(&self) -> bool {
        let rows: Vec<Vec<i128>> = self.scaled[1..]
            .iter()
            .map(|v| {
                v.iter()
                    .zip(&self.scaled[0])
                    .map(|(a, b)| (*a - *b) as i128)
                    .collect()
            })
            .collect();
        linalg::rank(&rows) == self.dim()
    }

    /// `den · val_{r_j}(c·X^u)` for every vertex.
    fn scaled_values(&self, field: &Field, c: &Value, u: &ExponentVec) -> Vec<i128> {
        let vc = self.den as i128 * coeff_val(field, c);
        self.scaled.iter().map(|r| vc - dot(r, u)).collect()
    }

    /// `(den · val_P, min I_P)` of a nonzero term.
    fn key(&self, field: &Field, c: &Value, u: &ExponentVec) -> (i128, usize) {
        let vals = self.scaled_values(field, c, u);
        let m = *vals.iter().min().expect("nonempty");
        (m, vals.iter().position(|&v| v == m).expect("minimum is attained"))
    }

    pub fn term_value(&self, field: &Field, c: &Value, u: &ExponentVec) -> ExtRational {
        if field.is_zero(c) {
            return ExtRational::Infinity;
        }
        ratio(self.key(field, c, u).0, self.den)
    }

    /// `I_P(X^u)`.
    pub fn attained(&self, u: &ExponentVec) -> Vec<usize> {
        let vals: Vec<i128> = self.scaled.iter().map(|r| -dot(r, u)).collect();
        let m = *vals.iter().min().expect("nonempty");
        (0..vals.len()).filter(|&j| vals[j] == m).collect()
    }

    /// `X^u ∈ V_i`, i.e. `r_i·u ≥ r_j·u` for all `j`.
    pub fn in_v(&self, i: usize, u: &ExponentVec) -> bool {
        let ri = dot(&self.scaled[i], u);
        self.scaled.iter().all(|r| ri >= dot(r, u))
    }

    /// `X^u ∈ V_{i,<}`: as [`Self::in_v`], strictly against earlier vertices.
    pub fn in_v_strict(&self, i: usize, u: &ExponentVec) -> bool {
        let ri = dot(&self.scaled[i], u);
        self.scaled.iter().enumerate().all(|(j, r)| {
            let rj = dot(r, u);
            if j < i {
                ri > rj
            } else {
                ri >= rj
            }
        })
    }

    /// Normals `h` with `C_i = {α : h·α ≥ 0}`, one per other vertex.
    pub fn normal_halfspaces(&self, i: usize) -> Vec<Vec<i64>> {
        (0..self.len())
            .filter(|&j| j != i)
            .map(|j| {
                let h: Vec<i128> = self.scaled[i]
                    .iter()
                    .zip(&self.scaled[j])
                    .map(|(a, b)| (*a - *b) as i128)
                    .collect();
                linalg::primitive(&h).iter().map(|&x| x as i64).collect()
            })
            .collect()
    }

    /// `in_{r_i}(f)`.
    pub fn initial(&self, i: usize, f: &LaurentPoly) -> LaurentPoly {
        let field = f.field().clone();
        let vals: Vec<i128> = f
            .terms()
            .map(|(u, c)| self.scaled_values(&field, c, u)[i])
            .collect();
        match vals.iter().min() {
            None => f.clone(),
            Some(&m) => {
                let mut it = vals.into_iter();
                f.filter(|_, _| it.next() == Some(m))
            }
        }
    }
}

impl fmt::Display for PolytopeContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .vertices
            .iter()
            .map(|v| {
                let c: Vec<String> = v.iter().map(|q| q.to_string()).collect();
                format!("({})", c.join(","))
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Exact solution of `A λ = b` when `A` has full column rank.
fn solve_full_rank(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let p = (r..rows).find(|&i| !a[i][c].is_zero())?;
        a.swap(r, p);
        b.swap(r, p);
        let inv = a[r][c].recip();
        for j in 0..cols {
            a[r][j] = &a[r][j] * &inv;
        }
        b[r] = &b[r] * &inv;
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let m = a[i][c].clone();
                for j in 0..cols {
                    let d = &m * &a[r][j];
                    a[i][j] -= d;
                }
                let d = &m * &b[r];
                b[i] -= d;
            }
        }
        r += 1;
    }
    if b[r..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    Some(b[..cols].to_vec())
}

/// Carathéodory: `p` is a convex combination of at most `n + 1` affinely independent points.
fn in_convex_hull(p: &[BigRational], pts: &[&Vec<BigRational>]) -> bool {
    let n = p.len();
    let m = pts.len();
    for mask in 1u32..(1 << m) {
        let sel: Vec<&Vec<BigRational>> = (0..m)
            .filter(|k| mask >> k & 1 == 1)
            .map(|k| pts[k])
            .collect();
        if sel.len() > n + 1 {
            continue;
        }
        let mut a: Vec<Vec<BigRational>> = (0..n)
            .map(|d| sel.iter().map(|q| q[d].clone()).collect())
            .collect();
        a.push(vec![BigRational::one(); sel.len()]);
        let mut b: Vec<BigRational> = p.to_vec();
        b.push(BigRational::one());
        if let Some(l) = solve_full_rank(a, b) {
            if l.iter().all(|x| !x.is_negative()) {
                return true;
            }
        }
    }
    false
}

/// Extreme rays of the pointed cone `{x : h·x ≥ 0 for h in hs}`, for `n ≤ 3`.
fn extreme_rays(hs: &[Vec<i64>], n: usize) -> Vec<ExponentVec> {
    let mut cands: Vec<Vec<i128>> = Vec::new();
    match n {
        1 => cands.extend([vec![1], vec![-1]]),
        2 => {
            for h in hs {
                cands.push(vec![-(h[1] as i128), h[0] as i128]);
                cands.push(vec![h[1] as i128, -(h[0] as i128)]);
            }
        }
        _ => {
            for a in 0..hs.len() {
                for b in a + 1..hs.len() {
                    let rows: Vec<Vec<i128>> = [&hs[a], &hs[b]]
                        .iter()
                        .map(|h| h.iter().map(|&x| x as i128).collect())
                        .collect();
                    let c = linalg::cross(&rows, 3);
                    cands.push(c.iter().map(|x| -x).collect());
                    cands.push(c);
                }
            }
        }
    }
    let mut rays: Vec<ExponentVec> = Vec::new();
    for c in cands {
        if c.iter().all(|x| *x == 0) {
            continue;
        }
        let ok = hs
            .iter()
            .all(|h| h.iter().zip(&c).map(|(a, b)| *a as i128 * b).sum::<i128>() >= 0);
        if !ok {
            continue;
        }
        let p = ExponentVec(linalg::primitive(&c).iter().map(|&x| x as i64).collect());
        if !rays.contains(&p) {
            rays.push(p);
        }
    }
    rays.sort();
    rays
}

fn det3(a: &ExponentVec, b: &ExponentVec, c: &ExponentVec) -> i128 {
    let m: Vec<Vec<i128>> = [a, b, c]
        .iter()
        .map(|v| v.coords().iter().map(|&x| x as i128).collect())
        .collect();
    linalg::det(&m)
}

/// Splits a pointed full-dimensional cone into simplicial cones (a fan from one ray in 3D).
fn triangulate(rays: Vec<ExponentVec>, n: usize) -> Vec<Vec<ExponentVec>> {
    if rays.len() == n {
        return vec![rays];
    }
    debug_assert_eq!(n, 3);
    let axis = rays.iter().fold(ExponentVec::zero(n), |acc, r| &acc + r);
    let r0 = rays[0].clone();
    // Angular sectors around the axis, starting at r0.
    let sector = |r: &ExponentVec| match det3(&axis, &r0, r).signum() {
        1 => 1,
        -1 => 3,
        _ => {
            if *r == r0 {
                0
            } else {
                2
            }
        }
    };
    let mut rest: Vec<ExponentVec> = rays[1..].to_vec();
    rest.sort_by(|p, q| {
        sector(p).cmp(&sector(q)).then_with(|| {
            if sector(p) == sector(q) {
                0.cmp(&det3(&axis, p, q).signum())
            } else {
                Ordering::Equal
            }
        })
    });
    rest.windows(2)
        .map(|w| vec![r0.clone(), w[0].clone(), w[1].clone()])
        .collect()
}

/// `Cone ⊆ C_i`, witnessed by the values `h·ray ≥ 0` of every normal on every ray.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContainmentCertificate {
    pub vertex: usize,
    /// `values[k][m]` is the `m`-th normal of `C_i` evaluated on ray `k`.
    pub values: Vec<Vec<i64>>,
}

impl ContainmentCertificate {
    fn issue(ctx: &PolytopeContext, i: usize, cone: &Cone) -> Self {
        let hs = ctx.normal_halfspaces(i);
        ContainmentCertificate {
            vertex: i,
            values: cone
                .rays()
                .iter()
                .map(|r| hs.iter().map(|h| r.dot(h)).collect())
                .collect(),
        }
    }

    /// Recomputes the values and checks their signs.
    pub fn verify(&self, ctx: &PolytopeContext, cone: &Cone) -> bool {
        *self == Self::issue(ctx, self.vertex, cone)
            && self.values.iter().flatten().all(|&v| v >= 0)
    }
}

/// Cones `T_{i,j}`, each inside one `V_i`.
#[derive(Clone, Debug)]
pub struct RefinedDecomposition {
    decomposition: Arc<ConicDecomposition>,
    labels: Vec<(usize, usize)>,
    certificates: Vec<ContainmentCertificate>,
    /// Every `C_i` is pointed and used as a single cone (before triangulation).
    verbatim: bool,
}

impl RefinedDecomposition {
    pub fn decomposition(&self) -> &Arc<ConicDecomposition> {
        &self.decomposition
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// `(i, j)` of cone `k`, both 0-based.
    pub fn label(&self, k: usize) -> (usize, usize) {
        self.labels[k]
    }

    pub fn labels(&self) -> &[(usize, usize)] {
        &self.labels
    }

    pub fn certificates(&self) -> &[ContainmentCertificate] {
        &self.certificates
    }

    pub fn is_verbatim(&self) -> bool {
        self.verbatim
    }

    /// Indices of the cones inside `V_i`.
    pub fn cones_of(&self, i: usize) -> Vec<usize> {
        (0..self.len()).filter(|&k| self.labels[k].0 == i).collect()
    }
}

/// Cones adapted to the `V_i`: `C_i` itself when pointed, else `C_i` cut by each base cone.
///
/// A single vertex returns the base unchanged. Pieces with more than `n` rays are
/// triangulated.
pub fn build_refined_decomposition(
    ctx: &PolytopeContext,
    base: &Arc<ConicDecomposition>,
) -> Result<RefinedDecomposition> {
    let n = ctx.dim();
    if base.dim() != n {
        return Err(Error::ContextMismatch);
    }
    if ctx.len() == 1 {
        let labels = (0..base.len()).map(|k| (0, k)).collect();
        let certificates = base
            .cones()
            .iter()
            .map(|c| ContainmentCertificate::issue(ctx, 0, c))
            .collect();
        return Ok(RefinedDecomposition {
            decomposition: base.clone(),
            labels,
            certificates,
            verbatim: false,
        });
    }
    let verbatim = ctx.is_full_dimensional();
    let mut cones = Vec::new();
    let mut labels = Vec::new();
    for i in 0..ctx.len() {
        let normals = ctx.normal_halfspaces(i);
        let pieces: Vec<Vec<Vec<i64>>> = if verbatim {
            vec![normals.clone()]
        } else {
            base.cones()
                .iter()
                .map(|b| {
                    let mut hs = normals.clone();
                    hs.extend(b.halfspaces().iter().cloned());
                    hs
                })
                .collect()
        };
        let mut j = 0;
        for hs in pieces {
            let rays = extreme_rays(&hs, n);
            let rows: Vec<Vec<i128>> = rays
                .iter()
                .map(|r| r.coords().iter().map(|&x| x as i128).collect())
                .collect();
            if linalg::rank(&rows) < n {
                continue;
            }
            for simplex in triangulate(rays, n) {
                cones.push(Cone::simplicial(0, simplex)?);
                labels.push((i, j));
                j += 1;
            }
        }
        if j == 0 {
            return Err(Error::Degenerate(format!(
                "the cone of vertex {} has empty interior",
                i + 1
            )));
        }
    }
    let d = ConicDecomposition::new(DecompositionKind::Refined, cones)?;
    let certificates = d
        .cones()
        .iter()
        .zip(&labels)
        .map(|(c, (i, _))| ContainmentCertificate::issue(ctx, *i, c))
        .collect();
    Ok(RefinedDecomposition {
        decomposition: Arc::new(d),
        labels,
        certificates,
        verbatim,
    })
}

#[derive(Clone, Debug)]
pub struct RefinedReport {
    pub decomposition: DecompositionReport,
    /// Cones whose certificate does not verify.
    pub containment_failures: Vec<usize>,
    /// A box point of some `V_i` outside every cone labelled `i`.
    pub vertex_gap: Option<(usize, ExponentVec)>,
}

impl RefinedReport {
    pub fn passed(&self) -> bool {
        self.decomposition.passed() && self.containment_failures.is_empty() && self.vertex_gap.is_none()
    }
}

/// Cone validity, coverage of `[-radius, radius]^n`, containment, and that the cones
/// labelled `i` cover `V_i` on the box.
pub fn validate_refined(ctx: &PolytopeContext, rd: &RefinedDecomposition, radius: i64) -> RefinedReport {
    let d = rd.decomposition();
    let containment_failures = (0..rd.len())
        .filter(|&k| !rd.certificates[k].verify(ctx, d.cone(k)))
        .collect();
    let mut vertex_gap = None;
    'outer: for x in box_points(ctx.dim(), radius) {
        for i in 0..ctx.len() {
            if ctx.in_v(i, &x) && !rd.cones_of(i).iter().any(|&k| d.cone(k).contains(&x)) {
                vertex_gap = Some((i, x));
                break 'outer;
            }
        }
    }
    RefinedReport {
        decomposition: validate_decomposition(d, radius),
        containment_failures,
        vertex_gap,
    }
}

/// The tie-break order on a refined decomposition.
///
/// The score is `max_j (r_j − c)·α` for the centroid `c`, scaled to integers; it is
/// linear on each `C_i`. For a lower-dimensional `P` it vanishes on a line, so the base
/// score is added. A single vertex keeps the base order.
pub fn refined_order(
    ctx: &PolytopeContext,
    rd: &RefinedDecomposition,
    base: &GeneralizedOrder,
) -> Result<GeneralizedOrder> {
    if ctx.len() == 1 {
        return Ok(base.clone());
    }
    let t = ctx.len() as i64;
    let n = ctx.dim();
    let sum: Vec<i64> = (0..n).map(|d| ctx.scaled.iter().map(|r| r[d]).sum()).collect();
    let forms: Vec<Vec<i64>> = ctx
        .scaled
        .iter()
        .map(|r| (0..n).map(|d| t * r[d] - sum[d]).collect())
        .collect();
    let score = if rd.is_verbatim() {
        ScoreFunction::Support {
            forms,
            base: None,
            weight: 0,
            zero_set: ZeroSet::Identity,
        }
    } else {
        if base.score().zero_set() != ZeroSet::Identity {
            return Err(usage(format!(
                "order `{}` cannot refine a lower-dimensional polytope; use degmin",
                base.score().name()
            )));
        }
        ScoreFunction::Support {
            forms,
            base: Some(Box::new(base.score().clone())),
            weight: 1,
            zero_set: ZeroSet::Identity,
        }
    };
    let o = GeneralizedOrder::new(rd.decomposition().clone(), score, Some(base.tiebreak().to_vec()))?;
    if let Some(k) = (0..o.num_cones()).find(|&k| o.linear_form(k).is_none()) {
        return Err(Error::Internal(format!("refined score is not linear on cone {k}")));
    }
    Ok(o)
}

/// Orders that carry a precision cap.
pub trait Capped {
    fn cap(&self) -> Option<&BigRational>;
}

impl Capped for GeneralizedOrder {
    fn cap(&self) -> Option<&BigRational> {
        None
    }
}

/// `≤_r` with its tie-break order and an optional cap.
#[derive(Clone, Debug)]
pub struct WeightOrder {
    ctx: WeightContext,
    omega: GeneralizedOrder,
    field: Field,
    cap: Option<BigRational>,
    cap_scaled: Option<i128>,
}

impl WeightOrder {
    /// `field` supplies the valuation of the coefficients.
    pub fn new(
        ctx: WeightContext,
        omega: GeneralizedOrder,
        field: Field,
        cap: Option<BigRational>,
    ) -> Result<Self> {
        if ctx.dim() != omega.dim() {
            return Err(Error::ContextMismatch);
        }
        let cap_scaled = cap.as_ref().map(|c| ceil_scaled(c, ctx.den)).transpose()?;
        Ok(WeightOrder {
            ctx,
            omega,
            field,
            cap,
            cap_scaled,
        })
    }

    pub fn context(&self) -> &WeightContext {
        &self.ctx
    }

    pub fn omega(&self) -> &GeneralizedOrder {
        &self.omega
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    fn check(&self, f: &LaurentPoly) -> Result<()> {
        if f.dim() != self.ctx.dim() || *f.field() != self.field {
            return Err(Error::ContextMismatch);
        }
        Ok(())
    }
}

impl Capped for WeightOrder {
    fn cap(&self) -> Option<&BigRational> {
        self.cap.as_ref()
    }
}

impl TermOrder for WeightOrder {
    fn dim(&self) -> usize {
        self.ctx.dim()
    }

    fn cmp_terms(&self, a: (&Value, &ExponentVec), b: (&Value, &ExponentVec)) -> Ordering {
        let va = self.ctx.scaled_term(&self.field, a.0, a.1);
        let vb = self.ctx.scaled_term(&self.field, b.0, b.1);
        vb.cmp(&va).then_with(|| self.omega.compare(a.1, b.1))
    }

    fn num_cones(&self) -> usize {
        self.omega.num_cones()
    }

    fn cone(&self, k: usize) -> &Cone {
        self.omega.decomposition().cone(k)
    }

    fn cone_leading(&self, f: &LaurentPoly, k: usize) -> Result<(ExponentVec, Value)> {
        self.check(f)?;
        let lm = self.ctx.initial(f).cone_lm(&self.omega, k)?;
        let c = f.coeff(&lm).expect("in support").clone();
        Ok((lm, c))
    }

    fn cone_module(&self, f: &LaurentPoly, k: usize) -> Result<Vec<ExponentVec>> {
        self.check(f)?;
        ti_generators(&self.ctx.initial(f), &self.omega, k)
    }

    fn negligible(&self, c: &Value, u: &ExponentVec) -> bool {
        self.cap_scaled
            .is_some_and(|cap| self.ctx.scaled_term(&self.field, c, u) >= cap)
    }
}

/// `≤_P` on a refined decomposition, with an optional cap.
#[derive(Clone, Debug)]
pub struct PolytopeOrder {
    ctx: PolytopeContext,
    refined: RefinedDecomposition,
    omega: GeneralizedOrder,
    field: Field,
    cap: Option<BigRational>,
    cap_scaled: Option<i128>,
    search_radius: i64,
}

/// `(lm, lc, lt, in_P)` of a nonzero series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolytopeLeading {
    pub lm: ExponentVec,
    pub lc: Value,
    pub lt: Term,
    /// `k = min I_P(lm)`.
    pub index: usize,
    pub initial: LaurentPoly,
}

impl PolytopeOrder {
    /// Builds the refined decomposition of `base`'s cones and the tie-break order on it.
    pub fn new(
        ctx: PolytopeContext,
        base: &GeneralizedOrder,
        field: Field,
        cap: Option<BigRational>,
    ) -> Result<Self> {
        if ctx.dim() != base.dim() {
            return Err(Error::ContextMismatch);
        }
        let refined = build_refined_decomposition(&ctx, base.decomposition_arc())?;
        let omega = refined_order(&ctx, &refined, base)?;
        let cap_scaled = cap.as_ref().map(|c| ceil_scaled(c, ctx.den)).transpose()?;
        Ok(PolytopeOrder {
            ctx,
            refined,
            omega,
            field,
            cap,
            cap_scaled,
            search_radius: DEFAULT_SEARCH_RADIUS,
        })
    }

    pub fn with_search_radius(mut self, r: i64) -> Self {
        self.search_radius = r;
        self
    }

    pub fn context(&self) -> &PolytopeContext {
        &self.ctx
    }

    pub fn refined(&self) -> &RefinedDecomposition {
        &self.refined
    }

    pub fn omega(&self) -> &GeneralizedOrder {
        &self.omega
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    fn check(&self, f: &LaurentPoly) -> Result<()> {
        if f.dim() != self.ctx.dim() || *f.field() != self.field {
            return Err(Error::ContextMismatch);
        }
        Ok(())
    }

    /// Greatest exponent of `X^t·f`.
    pub fn lm_shifted(&self, f: &LaurentPoly, t: &ExponentVec) -> Result<ExponentVec> {
        self.check(f)?;
        f.terms()
            .map(|(u, c)| (t + u, c))
            .max_by(|a, b| self.cmp_terms((a.1, &a.0), (b.1, &b.0)))
            .map(|(u, _)| u)
            .ok_or(Error::ZeroPolynomial)
    }

    pub fn leading(&self, f: &LaurentPoly) -> Result<PolytopeLeading> {
        self.check(f)?;
        let (lm, lc) = leading_term(self, f).ok_or(Error::ZeroPolynomial)?;
        let index = self.ctx.key(&self.field, &lc, &lm).1;
        Ok(PolytopeLeading {
            lt: Term {
                coeff: self.field.coeff(lc.clone()),
                exp: lm.clone(),
            },
            lm,
            lc,
            index,
            initial: self.ctx.initial(index, f),
        })
    }

    /// `t ∈ T_{i,j}(f)`: `lm(X^t·f) ∈ T_{i,j} ∩ V_{i,<}` for cone `k = (i, j)`.
    pub fn in_tij(&self, f: &LaurentPoly, k: usize, t: &ExponentVec) -> Result<bool> {
        let u = self.lm_shifted(f, t)?;
        let (i, _) = self.refined.label(k);
        Ok(self.omega.decomposition().cone(k).contains(&u) && self.ctx.in_v_strict(i, &u))
    }

    /// Generators of `T_{i,j}(f)` for cone `k`.
    ///
    /// With one vertex this is `T_k(in_r(f))`. Otherwise the minimal elements of
    /// `−lm_{i,j}(f) + T_{i,j}` that pass the direct membership test are searched up
    /// to `max_radius`, starting from a member found along an interior ray.
    pub fn tij_generators(&self, f: &LaurentPoly, k: usize, max_radius: i64) -> Result<Vec<ExponentVec>> {
        self.check(f)?;
        if f.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if k >= self.refined.len() {
            return Err(usage(format!("cone index {k} out of range")));
        }
        let (i, _) = self.refined.label(k);
        let init = self.ctx.initial(i, f);
        if self.ctx.len() == 1 {
            return ti_generators(&init, &self.omega, k);
        }
        self.search_tij(f, k, max_radius)
    }

    fn search_tij(&self, f: &LaurentPoly, k: usize, max_radius: i64) -> Result<Vec<ExponentVec>> {
        let (i, _) = self.refined.label(k);
        let init = self.ctx.initial(i, f);
        let lead = init.cone_lm(&self.omega, k)?;
        let cone = self.omega.decomposition().cone(k);
        let member = |t: &ExponentVec| self.in_tij(f, k, t).unwrap_or(false);
        let w = self.omega.witness(k, init.support());
        let p = cone.interior_point();
        let mut m = 0i64;
        let start = loop {
            let t = &w + &p.scale(m);
            if member(&t) {
                break t;
            }
            if m > 1 << 20 {
                return Err(Error::IncompleteSearch { radius: m });
            }
            m = if m == 0 { 1 } else { 2 * m };
        };
        let r0 = cone.height(&(&start + &lead)) / cone.determinant() + 2;
        let gens = search_module(cone, &-&lead, member, r0, max_radius.max(r0))?;
        for g in &gens {
            if !self.in_tij(f, k, g)? || self.lm_shifted(f, g)? != g + &lead {
                return Err(Error::Internal(format!(
                    "generator {g} of T_{}(f) fails the direct check",
                    self.cone_label(k)
                )));
            }
        }
        Ok(gens)
    }
}

impl Capped for PolytopeOrder {
    fn cap(&self) -> Option<&BigRational> {
        self.cap.as_ref()
    }
}

impl TermOrder for PolytopeOrder {
    fn dim(&self) -> usize {
        self.ctx.dim()
    }

    fn cmp_terms(&self, a: (&Value, &ExponentVec), b: (&Value, &ExponentVec)) -> Ordering {
        let (va, ia) = self.ctx.key(&self.field, a.0, a.1);
        let (vb, ib) = self.ctx.key(&self.field, b.0, b.1);
        vb.cmp(&va)
            .then_with(|| ib.cmp(&ia))
            .then_with(|| self.omega.compare(a.1, b.1))
    }

    fn num_cones(&self) -> usize {
        self.refined.len()
    }

    fn cone(&self, k: usize) -> &Cone {
        self.omega.decomposition().cone(k)
    }

    fn cone_label(&self, k: usize) -> String {
        let (i, j) = self.refined.label(k);
        format!("({},{})", i + 1, j + 1)
    }

    fn cone_leading(&self, f: &LaurentPoly, k: usize) -> Result<(ExponentVec, Value)> {
        self.check(f)?;
        let (i, _) = self.refined.label(k);
        let lm = self.ctx.initial(i, f).cone_lm(&self.omega, k)?;
        let c = f.coeff(&lm).expect("in support").clone();
        Ok((lm, c))
    }

    fn cone_module(&self, f: &LaurentPoly, k: usize) -> Result<Vec<ExponentVec>> {
        self.tij_generators(f, k, self.search_radius)
    }

    fn negligible(&self, c: &Value, u: &ExponentVec) -> bool {
        self.cap_scaled
            .is_some_and(|cap| self.ctx.key(&self.field, c, u).0 >= cap)
    }
}

/// `(val_P(f), I_P(f))`; `(+∞, [])` at zero.
pub fn val_polytope(ctx: &PolytopeContext, f: &LaurentPoly) -> Result<(ExtRational, Vec<usize>)> {
    if f.dim() != ctx.dim() {
        return Err(Error::ContextMismatch);
    }
    let field = f.field();
    let mut best: Option<Vec<i128>> = None;
    for (u, c) in f.terms() {
        let v = ctx.scaled_values(field, c, u);
        best = Some(match best {
            None => v,
            Some(b) => b.iter().zip(&v).map(|(x, y)| *x.min(y)).collect(),
        });
    }
    Ok(match best {
        None => (ExtRational::Infinity, Vec::new()),
        Some(per_vertex) => {
            let m = *per_vertex.iter().min().expect("nonempty");
            let idx = (0..per_vertex.len()).filter(|&j| per_vertex[j] == m).collect();
            (ratio(m, ctx.den), idx)
        }
    })
}

/// `≤_P` on terms: `val_P`, then the first attaining vertex, then `≤_ω`.
pub fn compare_polytope(o: &PolytopeOrder, s: &Term, t: &Term) -> Ordering {
    o.cmp_terms((&s.coeff.value, &s.exp), (&t.coeff.value, &t.exp))
}

pub fn lm_polytope(o: &PolytopeOrder, f: &LaurentPoly) -> Result<PolytopeLeading> {
    o.leading(f)
}

pub fn tij_generators(o: &PolytopeOrder, f: &LaurentPoly, k: usize, search_radius: i64) -> Result<Vec<ExponentVec>> {
    o.tij_generators(f, k, search_radius)
}

/// A series known up to its cap: terms of valuation at least the cap are dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CappedSeries {
    body: LaurentPoly,
    cap: BigRational,
}

impl CappedSeries {
    pub fn new<O: TermOrder + Capped>(o: &O, f: &LaurentPoly) -> Result<Self> {
        let cap = o
            .cap()
            .ok_or_else(|| usage("the order has no precision cap"))?
            .clone();
        if f.dim() != o.dim() {
            return Err(Error::ContextMismatch);
        }
        Ok(CappedSeries {
            body: truncate(o, f),
            cap,
        })
    }

    pub fn body(&self) -> &LaurentPoly {
        &self.body
    }

    pub fn cap(&self) -> &BigRational {
        &self.cap
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_zero()
    }
}

fn bodies<O: TermOrder + Capped>(o: &O, gs: &[CappedSeries]) -> Result<Vec<LaurentPoly>> {
    let cap = o.cap().ok_or_else(|| usage("the order has no precision cap"))?;
    gs.iter()
        .map(|g| {
            if g.cap() == cap {
                Ok(g.body().clone())
            } else {
                Err(usage(format!("series capped at {} under an order capped at {cap}", g.cap())))
            }
        })
        .collect()
}

/// Division at the cap: `f = Σ q_j g_j + r` up to terms of valuation at least the cap.
pub fn reduce_series<O: TermOrder + Capped>(o: &O, f: &CappedSeries, g: &[CappedSeries]) -> Result<Division> {
    let f = bodies(o, std::slice::from_ref(f))?.pop().expect("one series");
    Reducer::new(o, &bodies(o, g)?)?.divide(&f)
}

/// Buchberger's algorithm at the cap.
pub fn buchberger_series<O: TermOrder + Capped>(
    o: &O,
    gens: &[CappedSeries],
    cfg: &GBConfig,
) -> Result<GBResult> {
    let gens = bodies(o, gens)?;
    if let Some(g) = gens.iter().find(|g| g.is_zero()) {
        return Err(usage(format!("generator {g} vanishes at the working precision")));
    }
    buchberger(o, &gens, cfg)
}
