//! Acceptance run: one PASS/FAIL line per criterion; exits nonzero if any fails.

use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lgb::affinoid::{
    buchberger_series, build_refined_decomposition, compare_polytope, compare_weight,
    lm_polytope, reduce_series, val_polytope, val_weight, CappedSeries, PolytopeContext,
    PolytopeOrder, WeightContext, WeightOrder, validate_refined,
};
use lgb::coeffs::{ExtRational, Field};
use lgb::gmo::{GeneralizedOrder, ScoreFunction, ZeroSet};
use lgb::groebner::{buchberger, ideal_membership, is_groebner, reduces_to_zero, GBConfig};
use lgb::laurent::{ti_generator, ti_set_general, LaurentPoly, Ring, Term};
use lgb::lattice::{box_points, build_decomposition, ev, DecompositionKind, ExponentVec};
use lgb::oracle::{brute_ti, brute_valp, laurent_membership_oracle};
use lgb::reduction::reduce;
use lgb::text::parse_poly;

type Check = Result<String, String>;

fn ring(field: Field, n: usize) -> Arc<Ring> {
    Ring::new(field, ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect()).unwrap()
}

fn polys(r: &Arc<Ring>, src: &[&str]) -> Vec<LaurentPoly> {
    src.iter().map(|s| parse_poly(r, s).unwrap()).collect()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {elapsed:?}, limit {limit:?}"))
}

/// Random Laurent polynomial; coefficients are `±(1..=3)·2^k` so 2-adic valuations vary.
fn random_poly(r: &Arc<Ring>, rng: &mut ChaCha8Rng, terms: usize, lo: i64, hi: i64) -> LaurentPoly {
    let field = r.field();
    let mut f = LaurentPoly::zero(r);
    while f.len() < terms {
        let u = ExponentVec((0..r.dim()).map(|_| rng.gen_range(lo..=hi)).collect());
        if f.coeff(&u).is_some() {
            continue;
        }
        let mut c = rng.gen_range(1..=3) * (1 << rng.gen_range(0..3));
        if rng.gen_bool(0.5) {
            c = -c;
        }
        let v = field.from_i64(c);
        if !field.is_zero(&v) {
            f.add_term(&v, &u);
        }
    }
    f
}

fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn c1_orders() -> Check {
    let o = GeneralizedOrder::degmin(2);
    let t = Instant::now();
    let a = o.greatest(&[ev(&[-2, 3]), ev(&[1, 2])]).map_err(|e| e.to_string())?;
    let b = o
        .greatest_for_cone(2, &[ev(&[1, 3]), ev(&[-1, 2]), ev(&[-4, -3])])
        .map_err(|e| e.to_string())?;
    let dt = t.elapsed();
    ensure(a == ev(&[-2, 3]), || format!("greatest_tuple gave {a}"))?;
    ensure(b == ev(&[-4, -3]), || format!("greatest_tuple_for_cone gave {b}"))?;
    within(dt, Duration::from_millis(1))?;
    Ok(format!("{a} and {b} in {dt:?}"))
}

fn c2_leading_data() -> Check {
    let r = ring(Field::rational(), 2);
    let o = GeneralizedOrder::degmin(2);
    let f = parse_poly(&r, "2*x^2*y^-1 + x^-3*y - 3*y^-5").unwrap();
    let t = Instant::now();
    let lm = f.lm(&o).map_err(|e| e.to_string())?;
    let lm1 = f.cone_lm(&o, 1).map_err(|e| e.to_string())?;
    let g2 = ti_generator(&f, &o, 2).map_err(|e| e.to_string())?;
    let dt = t.elapsed();
    ensure(lm == ev(&[0, -5]), || format!("lm = {lm}"))?;
    ensure(lm1 == ev(&[-3, 1]), || format!("lm_1 = {lm1}"))?;
    ensure(g2 == ev(&[1, 2]), || format!("T_2 generator = {g2}"))?;
    within(dt, Duration::from_millis(1))?;
    Ok(format!("lm y^-5, lm_1 x^-3*y, T_2 = x*y^2 T_2 in {dt:?}"))
}

fn c3_division() -> Check {
    let r = ring(Field::rational(), 2);
    let o = GeneralizedOrder::degmin(2);
    let f = parse_poly(&r, "2*x^2*y^-1 + x^-3*y - 3*y^-5").unwrap();
    let g = polys(&r, &["x^-2*y^-1 + x*y", "x^-2*y + x^2*y^-1"]);
    let t = Instant::now();
    let d = reduce(&o, &f, &g).map_err(|e| e.to_string())?;
    let dt = t.elapsed();
    let rem = parse_poly(&r, "-y^3 + 2*x^2*y^-1 - 3*x^-1*y^-1").unwrap();
    let qs = polys(&r, &["x^-1*y^2 + 3*x^-2*y^-2", "-3*x^-2*y^-4"]);
    ensure(d.remainder == rem, || format!("remainder {}", d.remainder))?;
    ensure(d.quotients == qs, || format!("quotients {:?}", d.quotients.iter().map(|q| q.to_string()).collect::<Vec<_>>()))?;
    let mut back = d.remainder.clone();
    for (q, gj) in d.quotients.iter().zip(&g) {
        back = &back + &(q * gj);
    }
    ensure(back == f, || "f ≠ Σ q g + r".into())?;
    within(dt, Duration::from_millis(10))?;
    Ok(format!("{} steps in {dt:?}", d.steps))
}

struct Fixture {
    name: &'static str,
    field: Field,
    n: usize,
    order: GeneralizedOrder,
    gens: &'static [&'static str],
    expected: &'static [&'static str],
}

fn c4_buchberger() -> Check {
    let fixtures = [
        Fixture {
            name: "degmin/Q 3-var",
            field: Field::rational(),
            n: 3,
            order: GeneralizedOrder::degmin(3),
            gens: &["x^-3*y^-4 + x*y*z", "x^3*y^-2 + y^-1*z"],
            expected: &["x^3*y^-4 + x*y*z", "x^3*y^-2 + y^-1*z", "-y^-4 + x^-1*y^-2*z^-1"],
        },
        Fixture {
            name: "min/Q 3-var",
            field: Field::rational(),
            n: 3,
            order: GeneralizedOrder::min(3),
            gens: &["1/2*x^-1*y + 3*y^-4*z^2 + y", "2*x^2*y^3*z^-1 - 1/3*x^-1*y^3*z^-6"],
            expected: &[
                "y + 1/2*x^-1*y + 3*y^-4*z^2",
                "2*x^2*y^3*z^-1 - 1/3*x^-1*y^3*z^-6",
                "1/4*y^5*z^5 - 3*x^2*z^7 + 3/2*x*z^7 + 1/3*y^5 + z^2",
                "1/4*y^10*z^5 - 3/4*y^5*z^7 + 1/3*y^10 - 9/2*x*z^9 + 2*y^5*z^2 + 3*z^4",
                "1/4*y^15*z^5 + 1/3*y^15 + 3*y^10*z^2 + 9*y^5*z^4 + 9*z^6",
                "6*x^2*y^4*z^4 + 3*x*y^4*z^4 + 3*x^-1*y^-1*z",
            ],
        },
        Fixture {
            name: "degmin/Q 3-var (second ideal)",
            field: Field::rational(),
            n: 3,
            order: GeneralizedOrder::degmin(3),
            gens: &["1/2*x^-1*y + 3*y^-4*z^2 + y", "2*x^2*y^3*z^-1 - 1/3*x^-1*y^3*z^-6"],
            expected: &[
                "y + 1/2*x^-1*y + 3*y^-4*z^2",
                "2*x^2*y^3*z^-1 - 1/3*x^-1*y^3*z^-6",
                "y^5*z^3 + 1/3*x^-2*y^5*z^-2 + x^-2",
                "-1/16*y^5*z^6 - 1/12*y^5*z - 1/4*z^3 + 1/8*x^-1*z^3 - 1/16*x^-2*z^3",
                "-1/6*x*y^3*z^-1 + 1/24*x^-1*y^3*z^-1 - 1/12*x^-2*y^-2*z^-4 + 1/24*x^-3*y^-2*z^-4",
                "-1/36*y^3*z^-1 - 1/72*x^-1*y^3*z^-1 - 1/72*x^-3*y^-2*z^-4",
            ],
        },
        Fixture {
            name: "degmin/GF(9) 2-var",
            field: Field::gf(9).unwrap(),
            n: 2,
            order: GeneralizedOrder::degmin(2),
            gens: &["x^2*y + y^-6", "x^3*y^-2 + x^-6*y", "x^-2*y + x^-1*y^-2"],
            expected: &[
                "x^2*y + y^-6",
                "x^3*y^-2 + x^-6*y",
                "x^-2*y + x^-1*y^-2",
                "-x*y + x^-2*y^-3",
                "x^2*y + x^-2",
                "y^-1 + x^-1",
                "-y^2 + x^-1",
                "x^-1*y^-1 + x^-2*y^-2",
            ],
        },
    ];
    let mut notes = Vec::new();
    let mut failures = Vec::new();
    for fx in &fixtures {
        let r = ring(fx.field.clone(), fx.n);
        let gens = polys(&r, fx.gens);
        let expected = polys(&r, fx.expected);
        let t = Instant::now();
        let res = buchberger(&fx.order, &gens, &GBConfig::default()).map_err(|e| format!("{}: {e}", fx.name))?;
        let dt = t.elapsed();
        let o = &fx.order;
        let gb = is_groebner(o, &res.basis).map_err(|e| e.to_string())?.is_groebner();
        let inputs = reduces_to_zero(o, &gens, &res.basis).map_err(|e| e.to_string())?;
        let fwd: Vec<&str> = expected
            .iter()
            .zip(fx.expected)
            .filter(|(p, _)| !reduces_to_zero(o, std::slice::from_ref(*p), &res.basis).unwrap())
            .map(|(_, s)| *s)
            .collect();
        // Reduction by the expected list decides membership only if it is a Gröbner basis
        // for this order, so the reverse inclusion goes through a basis of the expected list.
        let expected_gb = is_groebner(o, &expected).map_err(|e| e.to_string())?.is_groebner();
        let expected_basis = buchberger(o, &expected, &GBConfig::default()).map_err(|e| e.to_string())?.basis;
        let back = reduces_to_zero(o, &res.basis, &expected_basis).map_err(|e| e.to_string())?;
        notes.push(format!(
            "{}: {} elements in {dt:?}{}",
            fx.name,
            res.basis.len(),
            if expected_gb { "" } else { " (expected list is not a Gröbner basis here)" }
        ));
        let mut why = Vec::new();
        if !gb {
            why.push("computed basis fails the criterion".to_string());
        }
        if !inputs {
            why.push("an input does not reduce to 0".into());
        }
        if !fwd.is_empty() {
            why.push(format!("expected elements not in the ideal: {}", fwd.join("; ")));
        }
        if !back {
            why.push("computed basis is not in the ideal of the expected basis".into());
        }
        if dt >= Duration::from_secs(10) {
            why.push(format!("took {dt:?}"));
        }
        if !why.is_empty() {
            failures.push(format!("{}: {}", fx.name, why.join(", ")));
        }
    }
    if failures.is_empty() {
        Ok(notes.join("; "))
    } else {
        Err(failures.join(" | "))
    }
}

fn c5_ti_equivalence() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let t = Instant::now();
    let mut compared = 0;
    let setups = [
        (Field::rational(), GeneralizedOrder::degmin(2)),
        (Field::rational(), GeneralizedOrder::min(2)),
        (Field::prime(7).unwrap(), GeneralizedOrder::degmin(2)),
        (Field::prime(7).unwrap(), GeneralizedOrder::min(2)),
    ];
    for k in 0..50 {
        let (field, o) = &setups[k % setups.len()];
        let r = ring(field.clone(), 2);
        let terms = rng.gen_range(1..=4);
        let f = random_poly(&r, &mut rng, terms, -3, 3);
        for i in 0..o.num_cones() {
            let gens = ti_set_general(&f, o, i, 64).map_err(|e| e.to_string())?;
            let cone = o.decomposition().cone(i);
            let fast: std::collections::BTreeSet<ExponentVec> =
                box_points(2, 6).into_iter().filter(|t| cone.covered(&gens, t)).collect();
            let brute = brute_ti(&f, o, i, 6).map_err(|e| e.to_string())?;
            ensure(fast == brute, || format!("mismatch for f = {f}, cone {i}"))?;
            compared += 1;
        }
    }
    let dt = t.elapsed();
    within(dt, Duration::from_secs(60))?;
    Ok(format!("{compared} (f, i) pairs agree on the radius-6 box in {dt:?}"))
}

fn c6_monogenous() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for k in 0..100 {
        let n = 2 + k % 2;
        let o = if k % 4 < 2 { GeneralizedOrder::degmin(n) } else { GeneralizedOrder::min(n) };
        let r = ring(Field::rational(), n);
        let terms = rng.gen_range(1..=4);
        let f = random_poly(&r, &mut rng, terms, -3, 3);
        let mut gens = Vec::new();
        for i in 0..o.num_cones() {
            let g = ti_set_general(&f, &o, i, 64).map_err(|e| e.to_string())?;
            ensure(g.len() == 1, || format!("T_{i}({f}) has {} generators", g.len()))?;
            let fast = ti_generator(&f, &o, i).map_err(|e| e.to_string())?;
            ensure(g[0] == fast, || format!("T_{i}({f}): {} vs {fast}", g[0]))?;
            gens.push(fast);
        }
        for a in &gens {
            for b in &gens {
                ensure((a - b).norm_inf() <= 1, || format!("{f}: generators {a} and {b}"))?;
            }
        }
    }
    Ok("100 polynomials, every T_i monogenous, generators within distance 1".into())
}

fn c7_membership() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let r = ring(Field::rational(), 2);
    let t = Instant::now();
    let (mut members, mut probes) = (0, 0);
    for k in 0..50 {
        let o = if k % 2 == 0 { GeneralizedOrder::degmin(2) } else { GeneralizedOrder::min(2) };
        let count = 1 + k % 2;
        let gens: Vec<LaurentPoly> = (0..count).map(|_| random_poly(&r, &mut rng, 2, -2, 2)).collect();
        let basis = buchberger(&o, &gens, &GBConfig::default()).map_err(|e| e.to_string())?.basis;
        let mut combo = LaurentPoly::zero(&r);
        for g in &gens {
            combo = &combo + &(g * &random_poly(&r, &mut rng, 2, -1, 1));
        }
        let noise = random_poly(&r, &mut rng, 1, -2, 2);
        for p in [combo.clone(), &combo + &noise, random_poly(&r, &mut rng, 3, -2, 2)] {
            let ours = ideal_membership(&o, &p, &basis, false).map_err(|e| e.to_string())?;
            let theirs = laurent_membership_oracle(&p, &gens).map_err(|e| e.to_string())?;
            ensure(ours == theirs, || format!("disagreement on {p} in ⟨{gens:?}⟩"))?;
            probes += 1;
            members += ours as usize;
        }
    }
    let dt = t.elapsed();
    within(dt, Duration::from_secs(120))?;
    Ok(format!("{probes} probes agree ({members} members) in {dt:?}"))
}

fn c8_gmo_axioms() -> Check {
    for n in 1..=4 {
        for o in [GeneralizedOrder::min(n), GeneralizedOrder::degmin(n)] {
            let radius = if n == 4 { 2 } else { 4 };
            let rep = o.validate(radius, 2000, n as u64);
            ensure(rep.passed(), || format!("{} at n = {n}: {rep:?}", o.score().name()))?;
        }
    }
    let d = Arc::new(build_decomposition(DecompositionKind::Standard, 2).unwrap());
    let bad = GeneralizedOrder::new(
        d,
        ScoreFunction::PerCone {
            rows: vec![vec![1, 1]; 3],
            zero_set: ZeroSet::Identity,
        },
        None,
    )
    .map_err(|e| e.to_string())?;
    let rep = bad.validate(3, 500, 1);
    let witness = rep.positivity.clone().ok_or("constructed score was not rejected")?;
    Ok(format!("min and degmin valid for n ≤ 4; score x+y rejected, witness {witness}"))
}

fn c9_valuations() -> Check {
    let q2 = Field::padic(2).unwrap();
    let r = ring(q2.clone(), 2);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..500 {
        let w = WeightContext::new(vec![rational(rng.gen_range(-4..=4), rng.gen_range(1..=3)), rational(rng.gen_range(-4..=4), rng.gen_range(1..=3))])
            .map_err(|e| e.to_string())?;
        let f = random_poly(&r, &mut rng, 3, -3, 3);
        let g = random_poly(&r, &mut rng, 3, -3, 3);
        let v = |h: &LaurentPoly| val_weight(&w, h).unwrap().0;
        ensure(v(&(&f * &g)) == v(&f).add(&v(&g)), || format!("val_{w} not multiplicative on {f}, {g}"))?;
    }
    let polytopes = fixture_polytopes();
    for p in &polytopes {
        for _ in 0..500 / polytopes.len() + 1 {
            let f = random_poly(&r, &mut rng, 3, -3, 3);
            let g = random_poly(&r, &mut rng, 3, -3, 3);
            let v = |h: &LaurentPoly| val_polytope(p, h).unwrap().0;
            ensure(v(&(&f * &g)) >= v(&f).add(&v(&g)), || format!("val_P super-multiplicative on {f}, {g}"))?;
        }
    }
    let seg = PolytopeContext::from_ints(&[&[1, 1], &[0, 1]]).unwrap();
    let f = parse_poly(&r, "2*x + y").unwrap();
    let o = PolytopeOrder::new(seg.clone(), &GeneralizedOrder::degmin(2), q2, None).map_err(|e| e.to_string())?;
    let init = lm_polytope(&o, &f).map_err(|e| e.to_string())?.initial;
    ensure(init == parse_poly(&r, "y").unwrap(), || format!("in_P(2*x + y) = {init}"))?;
    let a = parse_poly(&r, "x^-1*y^-1").unwrap();
    let v = |h: &LaurentPoly| val_polytope(&seg, h).unwrap().0;
    let (va, vf, vaf) = (v(&a), v(&f), v(&(&a * &f)));
    ensure(vaf > va.add(&vf), || {
        let g = parse_poly(&r, "2*x").unwrap();
        format!(
            "in_P(2*x + y) = y holds, but the pair a = x^-1*y^-1, f = 2*x + y is not strict: \
             val_P(af) = {vaf} = {va} + {vf}; with f = 2*x instead, val_P(af) = {} > {} + {}",
            v(&(&a * &g)),
            va,
            v(&g)
        )
    })?;
    Ok(format!("val_P(af) = {vaf} > {va} + {vf}"))
}

fn c10_degeneration() -> Check {
    let q2 = Field::padic(2).unwrap();
    let r = ring(q2.clone(), 2);
    let cap = Some(BigRational::from_integer(BigInt::from(50)));
    let base = GeneralizedOrder::degmin(2);
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let t = Instant::now();
    let mut compared = 0;
    for _ in 0..20 {
        // r ≤ 0 makes val_r grow with the degree, so polynomial ideals stay small at the cap.
        let rv = vec![rational(-rng.gen_range(0..=3), rng.gen_range(1..=2)), rational(-rng.gen_range(0..=3), rng.gen_range(1..=2))];
        let w = WeightOrder::new(WeightContext::new(rv.clone()).unwrap(), base.clone(), q2.clone(), cap.clone())
            .map_err(|e| e.to_string())?;
        let p = PolytopeOrder::new(PolytopeContext::new(vec![rv]).unwrap(), &base, q2.clone(), cap.clone())
            .map_err(|e| e.to_string())?;
        let gens: Vec<LaurentPoly> = (0..2).map(|_| random_poly(&r, &mut rng, 3, 0, 2)).collect();
        for _ in 0..20 {
            let a = random_poly(&r, &mut rng, 1, -3, 3);
            let b = random_poly(&r, &mut rng, 1, -3, 3);
            let term = |f: &LaurentPoly| f.term(f.support().next().unwrap()).unwrap();
            let (s, u): (Term, Term) = (term(&a), term(&b));
            let x = compare_weight(w.context(), w.omega(), &s, &u);
            let y = compare_polytope(&p, &s, &u);
            ensure(x == y, || format!("{a} vs {b}: {x:?} under ≤_r, {y:?} under ≤_P"))?;
        }
        let sw: Vec<CappedSeries> = gens.iter().map(|g| CappedSeries::new(&w, g).unwrap()).collect();
        let sp: Vec<CappedSeries> = gens.iter().map(|g| CappedSeries::new(&p, g).unwrap()).collect();
        let probe = random_poly(&r, &mut rng, 4, 0, 3);
        let dw = reduce_series(&w, &CappedSeries::new(&w, &probe).unwrap(), &sw).map_err(|e| e.to_string())?;
        let dp = reduce_series(&p, &CappedSeries::new(&p, &probe).unwrap(), &sp).map_err(|e| e.to_string())?;
        ensure(dw == dp, || format!("divisions differ for {probe} by {gens:?}"))?;
        let cfg = GBConfig::default();
        let bw = buchberger_series(&w, &sw, &cfg).map_err(|e| e.to_string())?;
        let bp = buchberger_series(&p, &sp, &cfg).map_err(|e| e.to_string())?;
        ensure(bw.basis == bp.basis && bw.stats == bp.stats, || format!("bases differ for {gens:?}"))?;
        compared += 1;
    }
    Ok(format!("{compared} ideals identical at cap 50 in {:?}", t.elapsed()))
}

fn sample_polytopes() -> Vec<PolytopeContext> {
    vec![
        PolytopeContext::from_ints(&[&[0, 0]]).unwrap(),
        PolytopeContext::from_ints(&[&[1, 1], &[-2, -1]]).unwrap(),
        PolytopeContext::from_ints(&[&[-2, 2], &[1, 2], &[2, -2], &[-1, -1]]).unwrap(),
    ]
}

fn fixture_polytopes() -> Vec<PolytopeContext> {
    let mut v = sample_polytopes();
    v.push(PolytopeContext::from_ints(&[&[1, 1], &[0, 1]]).unwrap());
    v
}

fn c11_refined() -> Check {
    let base = Arc::new(build_decomposition(DecompositionKind::Standard, 2).unwrap());
    let mut counts = Vec::new();
    for p in sample_polytopes() {
        let rd = build_refined_decomposition(&p, &base).map_err(|e| e.to_string())?;
        let rep = validate_refined(&p, &rd, 5);
        ensure(rep.passed(), || format!("{p}: {rep:?}"))?;
        counts.push(rd.len());
    }
    let quad = &sample_polytopes()[2];
    let rd = build_refined_decomposition(quad, &base).unwrap();
    ensure(rd.len() == 4, || format!("quadrilateral gave {} cones", rd.len()))?;
    for k in 0..4 {
        let (i, _) = rd.label(k);
        for x in box_points(2, 6) {
            ensure(rd.decomposition().cone(k).contains(&x) == quad.in_v(i, &x), || format!("cone {k} differs from V_{} at {x}", i + 1))?;
        }
    }
    Ok(format!("cone counts {counts:?}; quadrilateral cones equal its V_i"))
}

fn c12_valp() -> Check {
    let r = ring(Field::padic(2).unwrap(), 2);
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let polytopes = fixture_polytopes();
    for p in &polytopes {
        for k in 0..500 {
            let f = if k == 0 {
                LaurentPoly::zero(&r)
            } else {
                let terms = rng.gen_range(1..=5);
                random_poly(&r, &mut rng, terms, -4, 4)
            };
            let a = val_polytope(p, &f).map_err(|e| e.to_string())?.0;
            let b = brute_valp(p, &f);
            ensure(a == b, || format!("{p}: {f} gives {a} vs {b}"))?;
        }
    }
    ensure(brute_valp(&polytopes[0], &LaurentPoly::zero(&r)) == ExtRational::Infinity, || "val_P(0) finite".into())?;
    Ok(format!("{} inputs, zero mismatches", 500 * polytopes.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 12] = [
        ("orders: greatest tuples", c1_orders),
        ("leading data of the division example", c2_leading_data),
        ("division example", c3_division),
        ("Buchberger fixtures", c4_buchberger),
        ("T_i(f) = brute force on a box", c5_ti_equivalence),
        ("monogenous T_i and generator proximity", c6_monogenous),
        ("membership vs saturation oracle", c7_membership),
        ("g.m.o. axioms", c8_gmo_axioms),
        ("valuation laws", c9_valuations),
        ("single-vertex degeneration", c10_degeneration),
        ("refined decompositions of the sample polytopes", c11_refined),
        ("val_P vs brute force", c12_valp),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let res = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let dt = t.elapsed();
        match res {
            Ok(note) => println!("PASS {:>2} {name} [{dt:.2?}]: {note}", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} [{dt:.2?}]: {why}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
