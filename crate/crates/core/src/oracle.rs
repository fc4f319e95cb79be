//! Brute-force and classical references for testing.
//!
//! Laurent membership is decided in `K[x_1, …, x_n, s]` modulo `x_1⋯x_n·s − 1` with a
//! textbook lex Buchberger; `T_i(f)` and `val_P` are evaluated from their definitions.
//! Nothing here calls the division or Buchberger code of the engine.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::affinoid::{val_polytope, PolytopeContext};
use crate::coeffs::{ExtRational, Field, Value};
use crate::error::{usage, Error, Result};
use crate::gmo::GeneralizedOrder;
use crate::lattice::{box_points, ExponentVec};
use crate::laurent::LaurentPoly;

/// Largest basis the oracle builds before giving up.
pub const ORACLE_MAX_BASIS: usize = 400;

// Keys compare lexicographically with the first variable most significant; the last
// entry of the map is the leading term.
type Mono = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq)]
struct Poly {
    terms: BTreeMap<Mono, Value>,
}

fn divides(a: &Mono, b: &Mono) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm(a: &Mono, b: &Mono) -> Mono {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn quotient(b: &Mono, a: &Mono) -> Mono {
    b.iter().zip(a).map(|(y, x)| y - x).collect()
}

impl Poly {
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn lead(&self) -> Option<(&Mono, &Value)> {
        self.terms.iter().next_back()
    }

    /// `self − c·X^m·q`.
    fn sub_mul(&mut self, field: &Field, c: &Value, m: &Mono, q: &Poly) {
        for (u, d) in &q.terms {
            let w: Mono = u.iter().zip(m).map(|(a, b)| a + b).collect();
            let prod = field.mul(c, d);
            let new = match self.terms.get(&w) {
                Some(old) => field.sub(old, &prod),
                None => field.neg(&prod),
            };
            if field.is_zero(&new) {
                self.terms.remove(&w);
            } else {
                self.terms.insert(w, new);
            }
        }
    }

    fn monic(&self, field: &Field) -> Result<Poly> {
        let Some((_, c)) = self.lead() else {
            return Ok(self.clone());
        };
        let inv = field.inv(c)?;
        Ok(Poly {
            terms: self
                .terms
                .iter()
                .map(|(u, d)| (u.clone(), field.mul(d, &inv)))
                .collect(),
        })
    }
}

/// Full reduction: every term is reduced, not only the leading one.
fn reduce(field: &Field, f: &Poly, g: &[Poly]) -> Result<Poly> {
    let mut p = f.clone();
    let mut rem = Poly {
        terms: BTreeMap::new(),
    };
    while let Some((u, c)) = p.lead().map(|(u, c)| (u.clone(), c.clone())) {
        match g.iter().find(|h| divides(h.lead().unwrap().0, &u)) {
            Some(h) => {
                let (hu, hc) = h.lead().unwrap();
                let q = field.div(&c, hc)?;
                p.sub_mul(field, &q, &quotient(&u, hu), h);
            }
            None => {
                p.terms.remove(&u);
                rem.terms.insert(u, c);
            }
        }
    }
    Ok(rem)
}

fn s_poly(field: &Field, f: &Poly, g: &Poly) -> Result<Poly> {
    let (fu, fc) = f.lead().unwrap();
    let (gu, gc) = g.lead().unwrap();
    let l = lcm(fu, gu);
    let mut s = Poly {
        terms: BTreeMap::new(),
    };
    s.sub_mul(field, &field.neg(&field.inv(fc)?), &quotient(&l, fu), f);
    s.sub_mul(field, &field.inv(gc)?, &quotient(&l, gu), g);
    Ok(s)
}

/// Reduced lex Gröbner basis; pairs with coprime leading monomials are skipped.
fn groebner(field: &Field, gens: Vec<Poly>, max_basis: usize) -> Result<Vec<Poly>> {
    let mut g: Vec<Poly> = Vec::new();
    for p in gens {
        if !p.is_zero() {
            g.push(p.monic(field)?);
        }
    }
    let mut pairs: Vec<(usize, usize)> = (0..g.len())
        .flat_map(|j| (0..j).map(move |i| (i, j)))
        .collect();
    while let Some((i, j)) = pairs.pop() {
        let (a, b) = (g[i].lead().unwrap().0, g[j].lead().unwrap().0);
        if a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0) {
            continue;
        }
        let r = reduce(field, &s_poly(field, &g[i], &g[j])?, &g)?;
        if !r.is_zero() {
            if g.len() >= max_basis {
                return Err(Error::Resource(format!("oracle basis exceeded {max_basis} elements")));
            }
            g.push(r.monic(field)?);
            let k = g.len() - 1;
            pairs.extend((0..k).map(|i| (i, k)));
        }
    }
    // Minimalize and interreduce.
    let mut out: Vec<Poly> = Vec::new();
    for (k, p) in g.iter().enumerate() {
        let u = p.lead().unwrap().0;
        let redundant = g.iter().enumerate().any(|(m, q)| {
            let v = q.lead().unwrap().0;
            m != k && divides(v, u) && (v != u || m < k)
        });
        if !redundant {
            out.push(p.clone());
        }
    }
    let snapshot = out.clone();
    for k in 0..out.len() {
        let others: Vec<Poly> = snapshot
            .iter()
            .enumerate()
            .filter(|(m, _)| *m != k)
            .map(|(_, q)| q.clone())
            .collect();
        out[k] = reduce(field, &snapshot[k], &others)?.monic(field)?;
    }
    out.sort_by(|a, b| a.lead().unwrap().0.cmp(b.lead().unwrap().0));
    Ok(out)
}

/// Textbook criterion: every S-polynomial reduces to zero.
fn satisfies_criterion(field: &Field, g: &[Poly]) -> Result<bool> {
    for j in 0..g.len() {
        for i in 0..j {
            if !reduce(field, &s_poly(field, &g[i], &g[j])?, g)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `X^{−m}·f` as an ordinary polynomial in `n + 1` variables, `m` the coordinatewise minimum.
fn clear(f: &LaurentPoly) -> Poly {
    let n = f.dim();
    let mut lo = vec![0i64; n];
    for u in f.support() {
        for d in 0..n {
            lo[d] = lo[d].min(u.coords()[d]);
        }
    }
    Poly {
        terms: f
            .terms()
            .map(|(u, c)| {
                let mut m: Mono = (0..n).map(|d| (u.coords()[d] - lo[d]) as u32).collect();
                m.push(0);
                (m, c.clone())
            })
            .collect(),
    }
}

/// `f ∈ ⟨gens⟩` in `K[X^{±1}]`, via `K[X, s]/(X_1⋯X_n·s − 1)`.
///
/// Fails with [`Error::Internal`] if the ordinary basis does not pass the textbook
/// criterion.
pub fn laurent_membership_oracle(f: &LaurentPoly, gens: &[LaurentPoly]) -> Result<bool> {
    if gens.iter().any(|g| !g.same_ring(f)) {
        return Err(Error::ContextMismatch);
    }
    let field = f.field().clone();
    let n = f.dim();
    let mut polys: Vec<Poly> = gens.iter().filter(|g| !g.is_zero()).map(clear).collect();
    let mut rel = Poly {
        terms: BTreeMap::new(),
    };
    rel.terms.insert(vec![1; n + 1], field.one());
    rel.terms.insert(vec![0; n + 1], field.neg(&field.one()));
    polys.push(rel);
    let g = groebner(&field, polys, ORACLE_MAX_BASIS)?;
    if !satisfies_criterion(&field, &g)? {
        return Err(Error::Internal("oracle basis fails the Buchberger criterion".into()));
    }
    if f.is_zero() {
        return Ok(true);
    }
    Ok(reduce(&field, &clear(f), &g)?.is_zero())
}

/// All `t` in `[-radius, radius]^n` with `lm(X^t·f)` in cone `i`, by direct evaluation.
pub fn brute_ti(
    f: &LaurentPoly,
    o: &GeneralizedOrder,
    i: usize,
    radius: i64,
) -> Result<BTreeSet<ExponentVec>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.dim() != o.dim() {
        return Err(Error::ContextMismatch);
    }
    if i >= o.num_cones() {
        return Err(usage(format!("cone index {i} out of range")));
    }
    let cone = o.decomposition().cone(i);
    let support: Vec<&ExponentVec> = f.support().collect();
    Ok(box_points(f.dim(), radius)
        .into_iter()
        .filter(|t| {
            let mut best = t + support[0];
            for u in &support[1..] {
                let s = t + *u;
                if o.compare(&s, &best).is_gt() {
                    best = s;
                }
            }
            cone.contains(&best)
        })
        .collect())
}

/// `min` over vertices and terms of `val(c) − r·u`, in rational arithmetic.
pub fn brute_valp(ctx: &PolytopeContext, f: &LaurentPoly) -> ExtRational {
    let field = f.field();
    let mut best: Option<BigRational> = None;
    for r in ctx.vertices() {
        for (u, c) in f.terms() {
            let mut v = match field.valuation(c) {
                ExtRational::Finite(q) => q,
                ExtRational::Infinity => continue,
            };
            for (rk, uk) in r.iter().zip(u.coords()) {
                v -= rk * BigRational::from_integer(BigInt::from(*uk));
            }
            if best.as_ref().is_none_or(|b| v < *b) {
                best = Some(v);
            }
        }
    }
    best.map_or(ExtRational::Infinity, ExtRational::Finite)
}

/// One line of the self-test table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelftestRow {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
}

impl SelftestRow {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Random Laurent polynomial with small integer coefficients.
pub fn random_poly(
    ring: &std::sync::Arc<crate::laurent::Ring>,
    rng: &mut impl Rng,
    terms: usize,
    radius: i64,
) -> LaurentPoly {
    let field = ring.field();
    let mut p = LaurentPoly::zero(ring);
    while p.len() < terms {
        let u = ExponentVec((0..ring.dim()).map(|_| rng.gen_range(-radius..=radius)).collect());
        let mut c = 0;
        while c == 0 {
            c = rng.gen_range(-3..=3);
        }
        let v = field.from_i64(c);
        if !field.is_zero(&v) && p.coeff(&u).is_none() {
            p.add_term(&v, &u);
        }
    }
    p
}

/// Oracle agreement suites used by `lgb selftest`.
pub fn selftest(seed: u64) -> Result<Vec<SelftestRow>> {
    use crate::groebner::{buchberger, ideal_membership, GBConfig};
    use crate::laurent::{ti_set_general, Ring};

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    let names = |n: usize| ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect();

    let mut row = SelftestRow {
        name: "T_i(f): search vs box scan".into(),
        cases: 0,
        failures: 0,
    };
    for field in [Field::rational(), Field::prime(7)?] {
        let ring = Ring::new(field, names(2))?;
        for o in [GeneralizedOrder::degmin(2), GeneralizedOrder::min(2)] {
            for _ in 0..5 {
                let f = random_poly(&ring, &mut rng, 3, 2);
                for i in 0..o.num_cones() {
                    row.cases += 1;
                    let gens = ti_set_general(&f, &o, i, 64)?;
                    let cone = o.decomposition().cone(i);
                    let fast: BTreeSet<ExponentVec> = box_points(2, 6)
                        .into_iter()
                        .filter(|t| cone.covered(&gens, t))
                        .collect();
                    if fast != brute_ti(&f, &o, i, 6)? {
                        row.failures += 1;
                    }
                }
            }
        }
    }
    rows.push(row);

    let mut row = SelftestRow {
        name: "membership: criterion vs saturation".into(),
        cases: 0,
        failures: 0,
    };
    let ring = Ring::new(Field::rational(), names(2))?;
    let o = GeneralizedOrder::degmin(2);
    for _ in 0..8 {
        let gens: Vec<LaurentPoly> = (0..2).map(|_| random_poly(&ring, &mut rng, 2, 2)).collect();
        let gb = buchberger(&o, &gens, &GBConfig::default())?;
        let member = &(&gens[0] * &random_poly(&ring, &mut rng, 2, 1))
            + &(&gens[1] * &random_poly(&ring, &mut rng, 1, 1));
        for probe in [member, random_poly(&ring, &mut rng, 2, 2)] {
            row.cases += 1;
            if ideal_membership(&o, &probe, &gb.basis, false)? != laurent_membership_oracle(&probe, &gens)? {
                row.failures += 1;
            }
        }
    }
    rows.push(row);

    let mut row = SelftestRow {
        name: "val_P: vertexwise minimum".into(),
        cases: 0,
        failures: 0,
    };
    let ring = Ring::new(Field::padic(2)?, names(2))?;
    for p in [
        PolytopeContext::from_ints(&[&[1, 1], &[0, 1]])?,
        PolytopeContext::from_ints(&[&[-2, 2], &[1, 2], &[2, -2], &[-1, -1]])?,
    ] {
        for _ in 0..50 {
            let mut f = random_poly(&ring, &mut rng, 3, 3);
            f = f.scale(&ring.field().from_i64(1 << rng.gen_range(0..4)));
            row.cases += 1;
            if val_polytope(&p, &f)?.0 != brute_valp(&p, &f) {
                row.failures += 1;
            }
        }
    }
    rows.push(row);
    Ok(rows)
}
