//! Laurent polynomials `K[X^±1]` and their leading data under a generalized monomial order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::coeffs::{Coefficient, Field, FieldKind, Value};
use crate::error::{usage, Error, Result};
use crate::gmo::GeneralizedOrder;
use crate::lattice::{Cone, DecompositionKind, ExponentVec};

/// Largest search radius used when module generators are searched for.
pub const DEFAULT_SEARCH_RADIUS: i64 = 64;

/// Coefficient field and variable names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ring {
    field: Field,
    vars: Vec<String>,
}

impl Ring {
    pub fn new(field: Field, vars: Vec<String>) -> Result<Arc<Ring>> {
        if vars.is_empty() {
            return Err(usage("at least one variable is required"));
        }
        for (k, v) in vars.iter().enumerate() {
            let ok = v.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok {
                return Err(usage(format!("invalid variable name `{v}`")));
            }
            if vars[..k].contains(v) {
                return Err(usage(format!("variable `{v}` declared twice")));
            }
            if v == "a" && matches!(field.kind(), FieldKind::Extension { .. }) {
                return Err(usage("`a` names the field generator"));
            }
        }
        Ok(Arc::new(Ring { field, vars }))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }
}

/// `coeff · X^exp` with `coeff ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: Coefficient,
    pub exp: ExponentVec,
}

/// A finitely supported sum of terms; zero coefficients are never stored.
#[derive(Clone)]
pub struct LaurentPoly {
    ring: Arc<Ring>,
    terms: BTreeMap<ExponentVec, Value>,
}

impl PartialEq for LaurentPoly {
    fn eq(&self, o: &Self) -> bool {
        (Arc::ptr_eq(&self.ring, &o.ring) || self.ring == o.ring) && self.terms == o.terms
    }
}
impl Eq for LaurentPoly {}

impl LaurentPoly {
    pub fn zero(ring: &Arc<Ring>) -> Self {
        LaurentPoly {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Arc<Ring>) -> Self {
        Self::constant(ring, ring.field.one())
    }

    pub fn constant(ring: &Arc<Ring>, c: Value) -> Self {
        Self::monomial(ring, c, ExponentVec::zero(ring.dim()))
    }

    pub fn monomial(ring: &Arc<Ring>, c: Value, u: ExponentVec) -> Self {
        let mut f = Self::zero(ring);
        f.add_term(&c, &u);
        f
    }

    /// The variable `X_k`.
    pub fn var(ring: &Arc<Ring>, k: usize) -> Self {
        Self::monomial(ring, ring.field.one(), ExponentVec::unit(ring.dim(), k))
    }

    /// Sums repeated exponents; checks dimensions and coefficients.
    pub fn from_terms(
        ring: &Arc<Ring>,
        terms: impl IntoIterator<Item = (ExponentVec, Value)>,
    ) -> Result<Self> {
        let mut f = Self::zero(ring);
        for (u, c) in terms {
            if u.dim() != ring.dim() {
                return Err(Error::ContextMismatch);
            }
            ring.field.check(&c)?;
            f.add_term(&c, &u);
        }
        Ok(f)
    }

    /// Integer coefficients, for tests and fixtures.
    pub fn from_ints(ring: &Arc<Ring>, terms: &[(i64, &[i64])]) -> Self {
        let field = ring.field();
        Self::from_terms(
            ring,
            terms
                .iter()
                .map(|(c, u)| (ExponentVec::from_slice(u), field.from_i64(*c))),
        )
        .expect("well-formed terms")
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn field(&self) -> &Field {
        &self.ring.field
    }

    pub fn dim(&self) -> usize {
        self.ring.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in lexicographic exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ExponentVec, &Value)> + '_ {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &ExponentVec> + '_ {
        self.terms.keys()
    }

    pub fn coeff(&self, u: &ExponentVec) -> Option<&Value> {
        self.terms.get(u)
    }

    pub fn term(&self, u: &ExponentVec) -> Option<Term> {
        self.terms.get(u).map(|c| Term {
            coeff: self.field().coeff(c.clone()),
            exp: u.clone(),
        })
    }

    pub fn same_ring(&self, o: &LaurentPoly) -> bool {
        Arc::ptr_eq(&self.ring, &o.ring) || self.ring == o.ring
    }

    fn check_ring(&self, o: &LaurentPoly) -> Result<()> {
        if self.same_ring(o) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    /// `self += c·X^u`.
    pub fn add_term(&mut self, c: &Value, u: &ExponentVec) {
        let field = self.ring.field.clone();
        if field.is_zero(c) {
            return;
        }
        match self.terms.get_mut(u) {
            Some(v) => {
                let s = field.add(v, c);
                if field.is_zero(&s) {
                    self.terms.remove(u);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(u.clone(), c.clone());
            }
        }
    }

    /// Removes and returns the coefficient at `u`.
    pub fn take_term(&mut self, u: &ExponentVec) -> Option<Value> {
        self.terms.remove(u)
    }

    /// `self −= c·X^t·g`.
    pub fn sub_scaled_shifted(&mut self, c: &Value, t: &ExponentVec, g: &LaurentPoly) {
        let field = self.ring.field.clone();
        let nc = field.neg(c);
        for (u, v) in &g.terms {
            self.add_term(&field.mul(&nc, v), &(t + u));
        }
    }

    pub fn checked_add(&self, o: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_ring(o)?;
        let mut out = self.clone();
        for (u, c) in &o.terms {
            out.add_term(c, u);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, o: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_ring(o)?;
        let mut out = self.clone();
        let field = self.field().clone();
        for (u, c) in &o.terms {
            out.add_term(&field.neg(c), u);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, o: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_ring(o)?;
        let field = self.field();
        let mut out = LaurentPoly::zero(&self.ring);
        for (u, c) in &self.terms {
            for (v, d) in &o.terms {
                out.add_term(&field.mul(c, d), &(u + v));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Value) -> LaurentPoly {
        self.mul_term(c, &ExponentVec::zero(self.dim()))
    }

    /// `c·X^t·self`.
    pub fn mul_term(&self, c: &Value, t: &ExponentVec) -> LaurentPoly {
        let field = self.field();
        if field.is_zero(c) {
            return LaurentPoly::zero(&self.ring);
        }
        LaurentPoly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(u, v)| (t + u, field.mul(c, v)))
                .collect(),
        }
    }

    pub fn shift(&self, t: &ExponentVec) -> LaurentPoly {
        LaurentPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(u, v)| (t + u, v.clone())).collect(),
        }
    }

    /// Nonnegative power.
    pub fn pow(&self, e: u32) -> LaurentPoly {
        let mut out = LaurentPoly::one(&self.ring);
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Divides by the coefficient at `u`, which must be nonzero.
    pub fn normalize_at(&self, u: &ExponentVec) -> Result<LaurentPoly> {
        let c = self.coeff(u).ok_or(Error::DivisionByZero)?;
        Ok(self.scale(&self.field().inv(c)?))
    }

    /// Sub-polynomial of the terms accepted by `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&ExponentVec, &Value) -> bool) -> LaurentPoly {
        LaurentPoly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(u, c)| keep(u, c))
                .map(|(u, c)| (u.clone(), c.clone()))
                .collect(),
        }
    }

    fn check_order(&self, o: &GeneralizedOrder) -> Result<()> {
        if o.dim() == self.dim() {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    /// Greatest exponent of `t·self` under `o`.
    pub fn lm_shifted(&self, o: &GeneralizedOrder, t: &ExponentVec) -> Result<ExponentVec> {
        self.check_order(o)?;
        self.terms
            .keys()
            .map(|u| t + u)
            .max_by(|a, b| o.compare(a, b))
            .ok_or(Error::ZeroPolynomial)
    }

    pub fn lm(&self, o: &GeneralizedOrder) -> Result<ExponentVec> {
        self.lm_shifted(o, &ExponentVec::zero(self.dim()))
    }

    /// `(lm, lc, lt)`.
    pub fn leading_data(&self, o: &GeneralizedOrder) -> Result<(ExponentVec, Coefficient, Term)> {
        let lm = self.lm(o)?;
        let t = self.term(&lm).expect("leading monomial is in the support");
        Ok((lm, t.coeff.clone(), t))
    }

    /// `lm_i = lm(t·self) − t` for a `t` that moves the support into cone `i`.
    pub fn cone_lm(&self, o: &GeneralizedOrder, i: usize) -> Result<ExponentVec> {
        self.check_order(o)?;
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if i >= o.num_cones() {
            return Err(usage(format!("cone index {i} out of range")));
        }
        let t = o.witness(i, self.support());
        Ok(&self.lm_shifted(o, &t)? - &t)
    }

    /// `(lm_i, lc_i, lt_i)`.
    pub fn cone_leading_data(
        &self,
        o: &GeneralizedOrder,
        i: usize,
    ) -> Result<(ExponentVec, Coefficient, Term)> {
        let lm = self.cone_lm(o, i)?;
        let t = self.term(&lm).expect("cone leading monomial is in the support");
        Ok((lm, t.coeff.clone(), t))
    }

    /// Terms sorted descending by `cmp`, printed as `c*x^2*y^-1 + …`.
    pub fn format_by(&self, mut cmp: impl FnMut(&ExponentVec, &ExponentVec) -> Ordering) -> String {
        self.format_terms_by(|a, b| cmp(a.1, b.1))
    }

    /// Like [`format_by`](Self::format_by) for orders that also look at coefficients.
    pub fn format_terms_by(
        &self,
        mut cmp: impl FnMut((&Value, &ExponentVec), (&Value, &ExponentVec)) -> Ordering,
    ) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut keys: Vec<&ExponentVec> = self.terms.keys().collect();
        keys.sort_by(|a, b| cmp((&self.terms[*b], b), (&self.terms[*a], a)));
        let mut out = String::new();
        for (k, u) in keys.into_iter().enumerate() {
            let s = self.format_term(&self.terms[u], u);
            match (k, s.strip_prefix('-')) {
                (0, _) => out.push_str(&s),
                (_, Some(rest)) => {
                    out.push_str(" - ");
                    out.push_str(rest);
                }
                (_, None) => {
                    out.push_str(" + ");
                    out.push_str(&s);
                }
            }
        }
        out
    }

    pub fn format_with(&self, o: &GeneralizedOrder) -> String {
        self.format_by(|a, b| o.compare(a, b))
    }

    fn format_term(&self, c: &Value, u: &ExponentVec) -> String {
        let field = self.field();
        let mono: Vec<String> = u
            .coords()
            .iter()
            .zip(&self.ring.vars)
            .filter(|(e, _)| **e != 0)
            .map(|(e, v)| if *e == 1 { v.clone() } else { format!("{v}^{e}") })
            .collect();
        let mono = mono.join("*");
        let mut cs = field.fmt_value(c);
        if cs.contains(' ') {
            cs = format!("({cs})");
        }
        if mono.is_empty() {
            return cs;
        }
        if field.is_one(c) {
            mono
        } else if field.is_one(&field.neg(c)) && !cs.starts_with('(') {
            format!("-{mono}")
        } else {
            format!("{cs}*{mono}")
        }
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format_by(|a, b| a.cmp(b)))
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    /// Panics on ring mismatch; see [`LaurentPoly::checked_add`].
    fn add(self, o: &LaurentPoly) -> LaurentPoly {
        self.checked_add(o).expect("ring mismatch")
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: &LaurentPoly) -> LaurentPoly {
        self.checked_sub(o).expect("ring mismatch")
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: &LaurentPoly) -> LaurentPoly {
        self.checked_mul(o).expect("ring mismatch")
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        let field = self.field();
        self.scale(&field.neg(&field.one()))
    }
}

/// `lm(t·f)` lies in cone `i`.
pub fn in_ti(f: &LaurentPoly, o: &GeneralizedOrder, i: usize, t: &ExponentVec) -> Result<bool> {
    Ok(o.decomposition().cone(i).contains(&f.lm_shifted(o, t)?))
}

/// The generator `g` with `T_i(f) = g + T_i`, for the standard decomposition.
///
/// Starts from a witness pushing `supp(f)` into `T_i` and walks down each ray while
/// membership holds. Other decompositions go through [`ti_set_general`] and must
/// produce a single generator.
pub fn ti_generator(f: &LaurentPoly, o: &GeneralizedOrder, i: usize) -> Result<ExponentVec> {
    f.check_order(o)?;
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if i >= o.num_cones() {
        return Err(usage(format!("cone index {i} out of range")));
    }
    let cone = o.decomposition().cone(i);
    if o.decomposition().kind != DecompositionKind::Standard || !cone.is_unimodular() {
        let gens = ti_set_general(f, o, i, DEFAULT_SEARCH_RADIUS)?;
        return match gens.as_slice() {
            [g] => Ok(g.clone()),
            _ => Err(Error::UnsupportedCone(format!(
                "T_{i}(f) needs {} generators",
                gens.len()
            ))),
        };
    }
    let member = |t: &ExponentVec| cone.contains(&f.lm_shifted(o, t).unwrap());
    let mut t = o.witness(i, f.support());
    debug_assert!(member(&t));
    loop {
        let mut moved = false;
        for h in cone.generators() {
            let mut step = 1i64;
            while member(&(&t - &h.scale(step))) {
                t = &t - &h.scale(step);
                step *= 2;
                moved = true;
            }
            while step > 1 {
                step /= 2;
                if member(&(&t - &h.scale(step))) {
                    t = &t - &h.scale(step);
                }
            }
        }
        if !moved {
            return Ok(t);
        }
    }
}

/// Minimal points of `{x ∈ base + C : member(x)}`, assumed to be a `C`-module.
///
/// Points up to height `2R` are enumerated; the minimal ones up to height `R` must
/// cover all of them, otherwise `R` doubles. Fails past `max_radius`.
pub fn search_module(
    cone: &Cone,
    base: &ExponentVec,
    mut member: impl FnMut(&ExponentVec) -> bool,
    start_radius: i64,
    max_radius: i64,
) -> Result<Vec<ExponentVec>> {
    let det = cone.determinant();
    let max_radius = max_radius.max(start_radius);
    let mut r = start_radius.max(1);
    loop {
        let members: Vec<ExponentVec> = cone
            .points_up_to_height(2 * r * det)
            .into_iter()
            .filter(|c| member(&(base + c)))
            .collect();
        let inner: Vec<ExponentVec> = members
            .iter()
            .filter(|c| cone.height(c) <= r * det)
            .cloned()
            .collect();
        let gens = cone.minimal_elements(inner);
        if !gens.is_empty() && members.iter().all(|c| cone.covered(&gens, c)) {
            return Ok(gens.iter().map(|g| base + g).collect());
        }
        if r >= max_radius {
            return Err(Error::IncompleteSearch { radius: r });
        }
        r = (2 * r).min(max_radius);
    }
}

/// Generators of `T_i(f)` from its description as
/// `A_i ∩ ⋂_j (A_jᶜ ∪ Δ_ij)`, with `A_j = −lm_j(f) + T_j` and `Δ_ij` the half-space where
/// `t·lm_i(f)` beats `t·lm_j(f)`; needs `φ` linear on every cone.
pub fn ti_set_general(
    f: &LaurentPoly,
    o: &GeneralizedOrder,
    i: usize,
    search_radius: i64,
) -> Result<Vec<ExponentVec>> {
    f.check_order(o)?;
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let d = o.decomposition();
    if i >= d.len() {
        return Err(usage(format!("cone index {i} out of range")));
    }
    let leads: Vec<ExponentVec> = (0..d.len())
        .map(|j| f.cone_lm(o, j))
        .collect::<Result<_>>()?;
    let forms: Vec<_> = (0..d.len())
        .map(|j| {
            o.linear_form(j).cloned().ok_or_else(|| {
                Error::UnsupportedCone(format!("score is not linear on cone {j}"))
            })
        })
        .collect::<Result<_>>()?;
    // The tie case of Δ_ij does not depend on t.
    let tie: Vec<bool> = (0..d.len())
        .map(|j| o.lex_cmp(&leads[i], &leads[j]) != Ordering::Less)
        .collect();
    let member = |t: &ExponentVec| {
        let pi = t + &leads[i];
        if !d.cone(i).contains(&pi) {
            return false;
        }
        (0..d.len()).filter(|&j| j != i).all(|j| {
            let pj = t + &leads[j];
            if !d.cone(j).contains(&pj) {
                return true;
            }
            let si = forms[i].eval_scaled(&pi, forms[j].den);
            let sj = forms[j].eval_scaled(&pj, forms[i].den);
            match si.cmp(&sj) {
                Ordering::Greater => true,
                Ordering::Less => false,
                Ordering::Equal => tie[j],
            }
        })
    };
    let cone = d.cone(i);
    let base = -&leads[i];
    let w = o.witness(i, f.support());
    let start = cone.height(&(&w + &leads[i])) / cone.determinant() + 2;
    let gens = search_module(cone, &base, member, start, search_radius)?;
    for g in &gens {
        if !in_ti(f, o, i, g)? {
            return Err(Error::UnsupportedCone(format!(
                "generator {g} fails the direct check lm(gf) ∈ T_{i}"
            )));
        }
    }
    Ok(gens)
}

/// Generators of `T_i(f)`: the single Alg 3 generator for standard cones, else the search.
pub fn ti_generators(f: &LaurentPoly, o: &GeneralizedOrder, i: usize) -> Result<Vec<ExponentVec>> {
    if o.decomposition().kind == DecompositionKind::Standard {
        Ok(vec![ti_generator(f, o, i)?])
    } else {
        ti_set_general(f, o, i, DEFAULT_SEARCH_RADIUS)
    }
}

/// Minimal points of `⋃_{a,b} (a + C) ∩ (b + C)`.
pub fn collisions(cone: &Cone, fa: &[ExponentVec], gb: &[ExponentVec]) -> Vec<ExponentVec> {
    let mut pts = Vec::new();
    for a in fa {
        for b in gb {
            pts.extend(cone.shifted_meet(a, b));
        }
    }
    cone.minimal_elements(pts)
}

/// Generators of `lm_i(f)T_i(f) ∩ lm_i(g)T_i(g)` as a `T_i`-module.
pub fn u_intersection(
    f: &LaurentPoly,
    g: &LaurentPoly,
    o: &GeneralizedOrder,
    i: usize,
) -> Result<Vec<ExponentVec>> {
    let shifted = |h: &LaurentPoly| -> Result<Vec<ExponentVec>> {
        let lm = h.cone_lm(o, i)?;
        Ok(ti_generators(h, o, i)?.iter().map(|t| t + &lm).collect())
    };
    let cone = o.decomposition().cone(i);
    Ok(collisions(cone, &shifted(f)?, &shifted(g)?))
}
