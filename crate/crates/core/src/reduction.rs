//! Multivariate division with cone-wise leading data.
//!
//! The loop is written once against [`TermOrder`]; Laurent polynomials under a
//! generalized monomial order, the weighted order `≤_r` and the polytopal order `≤_P`
//! all implement it.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::coeffs::Value;
use crate::error::{usage, Error, Result};
use crate::gmo::GeneralizedOrder;
use crate::laurent::{ti_generators, LaurentPoly};
use crate::lattice::{Cone, ExponentVec};

/// A term order on `K^×·X^Z^n` together with the cones it is built on.
pub trait TermOrder {
    fn dim(&self) -> usize;

    /// Compares `c·X^u` with `d·X^v`.
    fn cmp_terms(&self, a: (&Value, &ExponentVec), b: (&Value, &ExponentVec)) -> Ordering;

    fn num_cones(&self) -> usize;

    fn cone(&self, k: usize) -> &Cone;

    fn cone_label(&self, k: usize) -> String {
        k.to_string()
    }

    /// `(lm_k(f), lc_k(f))`.
    fn cone_leading(&self, f: &LaurentPoly, k: usize) -> Result<(ExponentVec, Value)>;

    /// Generators of the module `T_k(f)`.
    fn cone_module(&self, f: &LaurentPoly, k: usize) -> Result<Vec<ExponentVec>>;

    /// Terms absorbed by a precision cap; never for plain polynomials.
    fn negligible(&self, _c: &Value, _u: &ExponentVec) -> bool {
        false
    }
}

impl TermOrder for GeneralizedOrder {
    fn dim(&self) -> usize {
        GeneralizedOrder::dim(self)
    }

    fn cmp_terms(&self, a: (&Value, &ExponentVec), b: (&Value, &ExponentVec)) -> Ordering {
        self.compare(a.1, b.1)
    }

    fn num_cones(&self) -> usize {
        GeneralizedOrder::num_cones(self)
    }

    fn cone(&self, k: usize) -> &Cone {
        self.decomposition().cone(k)
    }

    fn cone_leading(&self, f: &LaurentPoly, k: usize) -> Result<(ExponentVec, Value)> {
        let lm = f.cone_lm(self, k)?;
        let c = f.coeff(&lm).expect("in support").clone();
        Ok((lm, c))
    }

    fn cone_module(&self, f: &LaurentPoly, k: usize) -> Result<Vec<ExponentVec>> {
        ti_generators(f, self, k)
    }
}

/// Greatest term of `f`.
pub fn leading_term<O: TermOrder + ?Sized>(o: &O, f: &LaurentPoly) -> Option<(ExponentVec, Value)> {
    f.terms()
        .max_by(|a, b| o.cmp_terms((a.1, a.0), (b.1, b.0)))
        .map(|(u, c)| (u.clone(), c.clone()))
}

/// Exponent of the greatest term of `X^t·g`.
pub fn leading_shifted<O: TermOrder + ?Sized>(
    o: &O,
    g: &LaurentPoly,
    t: &ExponentVec,
) -> Option<ExponentVec> {
    g.terms()
        .map(|(u, c)| (t + u, c))
        .max_by(|a, b| o.cmp_terms((a.1, &a.0), (b.1, &b.0)))
        .map(|(u, _)| u)
}

/// Drops the terms absorbed by the cap.
pub fn truncate<O: TermOrder + ?Sized>(o: &O, f: &LaurentPoly) -> LaurentPoly {
    f.filter(|u, c| !o.negligible(c, u))
}

/// A term ranked by the order, for the division work queue.
struct Ranked<'o, O: TermOrder + ?Sized> {
    order: &'o O,
    c: Value,
    u: ExponentVec,
}

impl<'o, O: TermOrder + ?Sized> Ranked<'o, O> {
    fn new(order: &'o O, c: &Value, u: &ExponentVec) -> Self {
        Ranked {
            order,
            c: c.clone(),
            u: u.clone(),
        }
    }
}

impl<O: TermOrder + ?Sized> PartialEq for Ranked<'_, O> {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}

impl<O: TermOrder + ?Sized> Eq for Ranked<'_, O> {}

impl<O: TermOrder + ?Sized> PartialOrd for Ranked<'_, O> {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl<O: TermOrder + ?Sized> Ord for Ranked<'_, O> {
    fn cmp(&self, o: &Self) -> Ordering {
        self.order
            .cmp_terms((&self.c, &self.u), (&o.c, &o.u))
            .then_with(|| self.u.cmp(&o.u))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Division {
    pub quotients: Vec<LaurentPoly>,
    pub remainder: LaurentPoly,
    /// Number of reduction steps that fired.
    pub steps: usize,
}

/// A list of divisors with their cone-wise leading data cached.
#[derive(Clone, Debug)]
pub struct Reducer<'o, O: TermOrder + ?Sized> {
    order: &'o O,
    divisors: Vec<LaurentPoly>,
    // leads[j][k] = (lm_k, lc_k) of divisor j
    leads: Vec<Vec<(ExponentVec, Value)>>,
}

impl<'o, O: TermOrder + ?Sized> Reducer<'o, O> {
    pub fn new(order: &'o O, divisors: &[LaurentPoly]) -> Result<Self> {
        let mut r = Reducer {
            order,
            divisors: Vec::new(),
            leads: Vec::new(),
        };
        for g in divisors {
            r.push(g.clone())?;
        }
        Ok(r)
    }

    pub fn push(&mut self, g: LaurentPoly) -> Result<()> {
        if g.is_zero() {
            return Err(usage("divisors must be nonzero"));
        }
        if g.dim() != self.order.dim() {
            return Err(Error::ContextMismatch);
        }
        if let Some(h) = self.divisors.first() {
            if !h.same_ring(&g) {
                return Err(Error::ContextMismatch);
            }
        }
        let leads = (0..self.order.num_cones())
            .map(|k| self.order.cone_leading(&g, k))
            .collect::<Result<_>>()?;
        self.leads.push(leads);
        self.divisors.push(g);
        Ok(())
    }

    pub fn divisors(&self) -> &[LaurentPoly] {
        &self.divisors
    }

    /// First `(k, j)` in cone-major order whose shifted divisor leads at `u`.
    fn find_reducer(&self, u: &ExponentVec) -> Option<(usize, ExponentVec)> {
        for k in 0..self.order.num_cones() {
            for (j, g) in self.divisors.iter().enumerate() {
                let t = u - &self.leads[j][k].0;
                if leading_shifted(self.order, g, &t).as_ref() == Some(u) {
                    return Some((j, t));
                }
            }
        }
        None
    }

    fn run(&self, f: &LaurentPoly, mut quotients: Option<&mut Vec<LaurentPoly>>) -> Result<(LaurentPoly, usize)> {
        if f.dim() != self.order.dim()
            || self.divisors.first().is_some_and(|g| !g.same_ring(f))
        {
            return Err(Error::ContextMismatch);
        }
        let field = f.field().clone();
        let mut work = truncate(self.order, f);
        let mut rem = LaurentPoly::zero(f.ring());
        let mut steps = 0usize;
        let mut heap: BinaryHeap<Ranked<'_, O>> = work
            .terms()
            .map(|(u, c)| Ranked::new(self.order, c, u))
            .collect();
        while let Some(Ranked { c, u, .. }) = heap.pop() {
            // Entries go stale when their coefficient changes; the live one is elsewhere.
            if work.coeff(&u) != Some(&c) {
                continue;
            }
            match self.find_reducer(&u) {
                Some((j, t)) => {
                    let g = &self.divisors[j];
                    let k_lc = g.coeff(&(&u - &t)).expect("leading term in support");
                    let q = field.div(&c, k_lc)?;
                    let nq = field.neg(&q);
                    for (v, d) in g.terms() {
                        let w = &t + v;
                        let m = field.mul(&nq, d);
                        if w == u || !self.order.negligible(&m, &w) {
                            work.add_term(&m, &w);
                            if w != u {
                                if let Some(e) = work.coeff(&w) {
                                    heap.push(Ranked::new(self.order, e, &w));
                                }
                            }
                        }
                    }
                    if work.coeff(&u).is_some() {
                        return Err(Error::Internal(format!("leading term at {u} not cancelled")));
                    }
                    if let Some(qs) = quotients.as_deref_mut() {
                        qs[j].add_term(&q, &t);
                    }
                    steps += 1;
                }
                None => {
                    work.take_term(&u);
                    rem.add_term(&c, &u);
                }
            }
        }
        Ok((rem, steps))
    }

    /// Remainder only.
    pub fn remainder(&self, f: &LaurentPoly) -> Result<LaurentPoly> {
        Ok(self.run(f, None)?.0)
    }

    /// Quotients and remainder; `f = Σ q_j g_j + s` is re-verified (up to the cap).
    pub fn divide(&self, f: &LaurentPoly) -> Result<Division> {
        let mut qs = vec![LaurentPoly::zero(f.ring()); self.divisors.len()];
        let (remainder, steps) = self.run(f, Some(&mut qs))?;
        let mut residual = f - &remainder;
        for (q, g) in qs.iter().zip(&self.divisors) {
            residual = &residual - &(q * g);
        }
        if let Some((u, _)) = residual.terms().find(|(u, c)| !self.order.negligible(c, u)) {
            return Err(Error::Internal(format!(
                "division identity fails at monomial {u}"
            )));
        }
        Ok(Division {
            quotients: qs,
            remainder,
            steps,
        })
    }
}

/// Divides `f` by the ordered list `g`.
pub fn reduce<O: TermOrder + ?Sized>(o: &O, f: &LaurentPoly, g: &[LaurentPoly]) -> Result<Division> {
    Reducer::new(o, g)?.divide(f)
}
