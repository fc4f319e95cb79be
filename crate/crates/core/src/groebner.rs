//! S-pairs, the Buchberger criterion and Buchberger's algorithm over cone-wise leading data.

use std::collections::VecDeque;

use crate::coeffs::Value;
use crate::error::{usage, Error, Result};
use crate::laurent::{collisions, LaurentPoly};
use crate::lattice::ExponentVec;
use crate::reduction::{leading_term, truncate, Reducer, TermOrder};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GBConfig {
    /// Scale output elements to leading coefficient 1.
    pub normalize: bool,
    pub max_basis: usize,
    /// Record every basis element as a combination of the inputs.
    pub track_provenance: bool,
}

impl Default for GBConfig {
    fn default() -> Self {
        GBConfig {
            normalize: false,
            max_basis: 500,
            track_provenance: false,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GBStats {
    pub pairs_processed: usize,
    pub spairs_reduced: usize,
    pub zero_reductions: usize,
}

#[derive(Clone, Debug)]
pub struct GBResult {
    pub basis: Vec<LaurentPoly>,
    pub stats: GBStats,
    /// `provenance[h][j]` is the cofactor of input `j` in basis element `h`.
    pub provenance: Option<Vec<Vec<LaurentPoly>>>,
}

/// Cone-wise data of one polynomial: `(lm_k, lc_k)` and the points `lm_k + T_k(f)` generators.
#[derive(Clone, Debug)]
struct ConeInfo {
    lead: Vec<(ExponentVec, Value)>,
    shifted_gens: Vec<Vec<ExponentVec>>,
}

fn cone_info<O: TermOrder + ?Sized>(o: &O, f: &LaurentPoly) -> Result<ConeInfo> {
    let mut lead = Vec::new();
    let mut shifted_gens = Vec::new();
    for k in 0..o.num_cones() {
        let (lm, lc) = o.cone_leading(f, k)?;
        let gens = o.cone_module(f, k)?;
        shifted_gens.push(gens.iter().map(|t| t + &lm).collect());
        lead.push((lm, lc));
    }
    Ok(ConeInfo { lead, shifted_gens })
}

fn spair_raw(
    f: &LaurentPoly,
    fi: &(ExponentVec, Value),
    g: &LaurentPoly,
    gi: &(ExponentVec, Value),
    v: &ExponentVec,
) -> LaurentPoly {
    let a = f.mul_term(&gi.1, &(v - &fi.0));
    let b = g.mul_term(&fi.1, &(v - &gi.0));
    &a - &b
}

/// `S(k, f, g, v) = lc_k(g)·X^{v−lm_k(f)}·f − lc_k(f)·X^{v−lm_k(g)}·g`.
///
/// `v` must lie in `lm_k(f)T_k(f) ∩ lm_k(g)T_k(g)`.
pub fn spair<O: TermOrder + ?Sized>(
    o: &O,
    k: usize,
    f: &LaurentPoly,
    g: &LaurentPoly,
    v: &ExponentVec,
) -> Result<LaurentPoly> {
    if k >= o.num_cones() {
        return Err(usage(format!("cone index {k} out of range")));
    }
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let cone = o.cone(k);
    let fi = o.cone_leading(f, k)?;
    let gi = o.cone_leading(g, k)?;
    for (h, hi) in [(f, &fi), (g, &gi)] {
        let gens = o.cone_module(h, k)?;
        if !cone.covered(&gens, &(v - &hi.0)) {
            return Err(usage(format!(
                "{v} is not in lm_{k}·T_{k} of {}",
                h
            )));
        }
    }
    Ok(spair_raw(f, &fi, g, &gi, v))
}

/// Checks `lt(S) < lc_k(f)·lc_k(g)·X^v`.
fn check_spair_bound<O: TermOrder + ?Sized>(
    o: &O,
    s: &LaurentPoly,
    fi: &(ExponentVec, Value),
    gi: &(ExponentVec, Value),
    v: &ExponentVec,
) -> Result<()> {
    if let Some((u, c)) = leading_term(o, s) {
        let field = s.field();
        let top = field.mul(&fi.1, &gi.1);
        if o.cmp_terms((&c, &u), (&top, v)) != std::cmp::Ordering::Less {
            return Err(Error::Internal(format!(
                "S-pair leading term at {u} is not below the collision {v}"
            )));
        }
    }
    Ok(())
}

/// Buchberger's algorithm with a FIFO pair queue.
pub fn buchberger<O: TermOrder + ?Sized>(
    o: &O,
    gens: &[LaurentPoly],
    cfg: &GBConfig,
) -> Result<GBResult> {
    if cfg.max_basis == 0 {
        return Err(usage("basis size guard must be positive"));
    }
    let mut reducer = Reducer::new(o, &[])?;
    let mut infos: Vec<ConeInfo> = Vec::new();
    let mut prov: Vec<Vec<LaurentPoly>> = Vec::new();
    let mut queue: VecDeque<(usize, usize)> = VecDeque::new();
    let mut stats = GBStats::default();
    for (j, g) in gens.iter().enumerate() {
        if g.is_zero() {
            return Err(usage("generators must be nonzero"));
        }
        if reducer.divisors().contains(g) {
            continue;
        }
        let idx = reducer.divisors().len();
        reducer.push(g.clone())?;
        infos.push(cone_info(o, g)?);
        if cfg.track_provenance {
            let mut row = vec![LaurentPoly::zero(g.ring()); gens.len()];
            row[j] = LaurentPoly::one(g.ring());
            prov.push(row);
        }
        for h in 0..idx {
            queue.push_back((h, idx));
        }
    }
    while let Some((a, b)) = queue.pop_front() {
        stats.pairs_processed += 1;
        for k in 0..o.num_cones() {
            let cone = o.cone(k);
            let vs = collisions(cone, &infos[a].shifted_gens[k], &infos[b].shifted_gens[k]);
            for v in vs {
                let (f, g) = (&reducer.divisors()[a], &reducer.divisors()[b]);
                let (fi, gi) = (&infos[a].lead[k], &infos[b].lead[k]);
                let s = truncate(o, &spair_raw(f, fi, g, gi, &v));
                check_spair_bound(o, &s, fi, gi, &v)?;
                stats.spairs_reduced += 1;
                let (rem, row) = if cfg.track_provenance {
                    let d = reducer.divide(&s)?;
                    let ring = f.ring();
                    let mut row = vec![LaurentPoly::zero(ring); gens.len()];
                    let ta = &v - &fi.0;
                    let tb = &v - &gi.0;
                    for j in 0..gens.len() {
                        let mut c = prov[a][j].mul_term(&gi.1, &ta);
                        c = &c - &prov[b][j].mul_term(&fi.1, &tb);
                        for (h, q) in d.quotients.iter().enumerate() {
                            c = &c - &(q * &prov[h][j]);
                        }
                        row[j] = truncate(o, &c);
                    }
                    (d.remainder, Some(row))
                } else {
                    (reducer.remainder(&s)?, None)
                };
                if rem.is_zero() {
                    stats.zero_reductions += 1;
                    continue;
                }
                let idx = reducer.divisors().len();
                if idx >= cfg.max_basis {
                    return Err(Error::Resource(format!(
                        "basis grew beyond {} elements",
                        cfg.max_basis
                    )));
                }
                infos.push(cone_info(o, &rem)?);
                reducer.push(rem)?;
                if let Some(row) = row {
                    prov.push(row);
                }
                for h in 0..idx {
                    queue.push_back((h, idx));
                }
            }
        }
    }
    let mut basis = reducer.divisors().to_vec();
    if cfg.normalize {
        for (h, p) in basis.iter_mut().enumerate() {
            let (u, c) = leading_term(o, p).expect("nonzero");
            let inv = p.field().inv(&c)?;
            *p = p.normalize_at(&u)?;
            if cfg.track_provenance {
                for c in prov[h].iter_mut() {
                    *c = c.scale(&inv);
                }
            }
        }
    }
    let provenance = if cfg.track_provenance {
        for (h, row) in prov.iter().enumerate() {
            let mut combo = LaurentPoly::zero(basis[h].ring());
            for (c, g) in row.iter().zip(gens) {
                combo = &combo + &(c * g);
            }
            let diff = &combo - &basis[h];
            if diff.terms().any(|(u, c)| !o.negligible(c, u)) {
                return Err(Error::Internal(format!(
                    "recorded combination of basis element {h} does not match"
                )));
            }
        }
        Some(prov)
    } else {
        None
    };
    Ok(GBResult {
        basis,
        stats,
        provenance,
    })
}

/// The first S-pair of the criterion with a nonzero remainder.
#[derive(Clone, Debug)]
pub struct CriterionFailure {
    pub cone: usize,
    pub f: usize,
    pub g: usize,
    pub v: ExponentVec,
    pub remainder: LaurentPoly,
}

#[derive(Clone, Debug)]
pub struct GroebnerCertificate {
    pub pairs_checked: usize,
    pub failure: Option<CriterionFailure>,
}

impl GroebnerCertificate {
    pub fn is_groebner(&self) -> bool {
        self.failure.is_none()
    }
}

/// Whether every criterion S-pair of `h` reduces to zero modulo `h`.
pub fn is_groebner<O: TermOrder + ?Sized>(o: &O, h: &[LaurentPoly]) -> Result<GroebnerCertificate> {
    let reducer = Reducer::new(o, h)?;
    let infos: Vec<ConeInfo> = h.iter().map(|f| cone_info(o, f)).collect::<Result<_>>()?;
    let mut checked = 0;
    for b in 0..h.len() {
        for a in 0..b {
            for k in 0..o.num_cones() {
                let vs = collisions(o.cone(k), &infos[a].shifted_gens[k], &infos[b].shifted_gens[k]);
                for v in vs {
                    checked += 1;
                    let s = spair_raw(&h[a], &infos[a].lead[k], &h[b], &infos[b].lead[k], &v);
                    let rem = reducer.remainder(&truncate(o, &s))?;
                    if !rem.is_zero() {
                        return Ok(GroebnerCertificate {
                            pairs_checked: checked,
                            failure: Some(CriterionFailure {
                                cone: k,
                                f: a,
                                g: b,
                                v,
                                remainder: rem,
                            }),
                        });
                    }
                }
            }
        }
    }
    Ok(GroebnerCertificate {
        pairs_checked: checked,
        failure: None,
    })
}

/// `f ∈ ⟨G⟩` by a zero remainder; `strict` first certifies that `G` is a Gröbner basis.
pub fn ideal_membership<O: TermOrder + ?Sized>(
    o: &O,
    f: &LaurentPoly,
    g: &[LaurentPoly],
    strict: bool,
) -> Result<bool> {
    if strict && !is_groebner(o, g)?.is_groebner() {
        return Err(usage("the given basis is not a Gröbner basis"));
    }
    Ok(Reducer::new(o, g)?.remainder(f)?.is_zero())
}

/// Every element of `a` reduces to zero modulo `b`.
pub fn reduces_to_zero<O: TermOrder + ?Sized>(
    o: &O,
    a: &[LaurentPoly],
    b: &[LaurentPoly],
) -> Result<bool> {
    let r = Reducer::new(o, b)?;
    for f in a {
        if !r.remainder(f)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::Field;
    use crate::gmo::GeneralizedOrder;
    use crate::laurent::Ring;
    use crate::lattice::ev;
    use std::sync::Arc;

    fn ring(n: usize) -> Arc<Ring> {
        let names = ["x", "y", "z"];
        Ring::new(
            Field::rational(),
            names[..n].iter().map(|s| s.to_string()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn test_spair() {
        let r = ring(2);
        let o = GeneralizedOrder::degmin(2);
        let f = LaurentPoly::from_ints(&r, &[(1, &[1, 0]), (1, &[0, 1])]);
        let g = LaurentPoly::from_ints(&r, &[(1, &[2, 0]), (1, &[0, 1])]);
        let v = ev(&[2, 0]);
        let s = spair(&o, 0, &f, &g, &v).unwrap();
        assert_eq!(s, LaurentPoly::from_ints(&r, &[(1, &[1, 1]), (-1, &[0, 1])]));
        assert_eq!(spair(&o, 0, &g, &f, &v).unwrap(), -&s);
        assert!(spair(&o, 0, &f, &f, &ev(&[1, 0])).unwrap().is_zero());
        assert!(spair(&o, 0, &f, &g, &ev(&[1, 0])).is_err());
    }

    #[test]
    fn test_three_variable_ideal() {
        let r = ring(3);
        let o = GeneralizedOrder::degmin(3);
        let gens = vec![
            LaurentPoly::from_ints(&r, &[(1, &[-3, -4, 0]), (1, &[1, 1, 1])]),
            LaurentPoly::from_ints(&r, &[(1, &[3, -2, 0]), (1, &[0, -1, 1])]),
        ];
        assert!(!is_groebner(&o, &gens).unwrap().is_groebner());
        let cfg = GBConfig {
            track_provenance: true,
            ..GBConfig::default()
        };
        let res = buchberger(&o, &gens, &cfg).unwrap();
        assert_eq!(res.basis.len(), 3);
        // On the torus the ideal forces z = −x^-4*y^-5 and x^7*y^4 = 1, where the new
        // element x^-1*y^-2*z^-1 − y^4*z vanishes.
        let new = LaurentPoly::from_ints(&r, &[(1, &[-1, -2, -1]), (-1, &[0, 4, 1])]);
        assert_eq!(res.basis[2], new);
        assert!(res.provenance.is_some());
        assert!(is_groebner(&o, &res.basis).unwrap().is_groebner());
        assert!(reduces_to_zero(&o, &gens, &res.basis).unwrap());
    }

    #[test]
    fn test_singletons_and_membership() {
        let r = ring(2);
        let o = GeneralizedOrder::degmin(2);
        let f = LaurentPoly::from_ints(&r, &[(1, &[1, 0]), (1, &[0, 1])]);
        let res = buchberger(&o, std::slice::from_ref(&f), &GBConfig::default()).unwrap();
        assert_eq!(res.basis, vec![f.clone()]);
        assert!(is_groebner(&o, &[f.clone()]).unwrap().is_groebner());

        let g = LaurentPoly::from_ints(&r, &[(1, &[-1, 1]), (1, &[0, -1])]);
        let gb = buchberger(&o, &[f.clone(), g.clone()], &GBConfig::default()).unwrap();
        let probe = LaurentPoly::from_ints(&r, &[(1, &[0, 1]), (-1, &[2, -2])]);
        assert!(ideal_membership(&o, &probe, &gb.basis, true).unwrap());
        assert!(ideal_membership(&o, &f, &gb.basis, true).unwrap());

        let r1 = ring(1);
        let o1 = GeneralizedOrder::degmin(1);
        let x1 = LaurentPoly::from_ints(&r1, &[(1, &[1]), (-1, &[0])]);
        let gb = buchberger(&o1, &[x1], &GBConfig::default()).unwrap();
        assert!(!ideal_membership(&o1, &LaurentPoly::one(&r1), &gb.basis, true).unwrap());
    }
}
