//! Problem files and the `lgb` command surface.
//!
//! ```text
//! # comment
//! ring Qp 2            # Q | Qp p | GF q [modulus c0 c1 … ck]
//! vars x y
//! order degmin         # min | degmin
//! tiebreak y x         # optional
//! polytope (1,1) (0,1) # or: weight (1/2,1)
//! precision 20
//! gens:
//! 2*x + y
//! ```

use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::affinoid::{
    buchberger_series, reduce_series, val_polytope, val_weight, Capped, CappedSeries,
    PolytopeContext, PolytopeOrder, WeightContext, WeightOrder, DEFAULT_CAP,
};
use crate::coeffs::Field;
use crate::error::{usage, Error, Result};
use crate::gmo::{GeneralizedOrder, ScoreFunction};
use crate::groebner::{buchberger, ideal_membership, is_groebner, GBConfig, GBResult};
use crate::laurent::{LaurentPoly, Ring};
use crate::lattice::ExponentVec;
use crate::oracle;
use crate::reduction::{leading_term, reduce, truncate, Division, TermOrder};
use crate::text::parse_poly_at;

/// Exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_MATH: i32 = 2;
pub const EXIT_NOT_MEMBER: i32 = 3;

#[derive(Clone, Debug)]
pub enum Geometry {
    Plain,
    Weight(WeightContext),
    Polytope(PolytopeContext),
}

#[derive(Clone, Debug)]
pub struct ProblemFile {
    pub ring: Arc<Ring>,
    pub score: ScoreFunction,
    /// Variable indices in tie-break priority.
    pub tiebreak: Option<Vec<usize>>,
    pub geometry: Geometry,
    pub precision: Option<BigRational>,
    pub gens: Vec<LaurentPoly>,
}

fn perr(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        col,
        msg: msg.into(),
    }
}

/// Whitespace-separated words of `s` with their 1-based columns.
fn words(s: &str, col0: usize) -> Vec<(String, usize)> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut start = 0;
    for (k, c) in s.chars().enumerate() {
        if c.is_whitespace() {
            if !cur.is_empty() {
                out.push((std::mem::take(&mut cur), start));
            }
        } else {
            if cur.is_empty() {
                start = col0 + k + 1;
            }
            cur.push(c);
        }
    }
    if !cur.is_empty() {
        out.push((cur, start));
    }
    out
}

fn parse_rational(s: &str, line: usize, col: usize) -> Result<BigRational> {
    BigRational::from_str(s.trim()).map_err(|_| perr(line, col, format!("expected a rational number, found `{}`", s.trim())))
}

fn parse_u64(s: &str, line: usize, col: usize) -> Result<u64> {
    s.parse().map_err(|_| perr(line, col, format!("expected a positive integer, found `{s}`")))
}

/// `(a,b) (c,d) …` with rational entries.
fn parse_tuples(s: &str, line: usize, col0: usize) -> Result<Vec<Vec<BigRational>>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        if chars[i].is_whitespace() {
            i += 1;
            continue;
        }
        if chars[i] != '(' {
            return Err(perr(line, col0 + i + 1, "expected `(`"));
        }
        let open = i;
        let close = (i..chars.len())
            .find(|&k| chars[k] == ')')
            .ok_or_else(|| perr(line, col0 + open + 1, "unclosed `(`"))?;
        let inner: String = chars[open + 1..close].iter().collect();
        let mut entries = Vec::new();
        let mut offset = open + 1;
        for part in inner.split(',') {
            entries.push(parse_rational(part, line, col0 + offset + 1)?);
            offset += part.chars().count() + 1;
        }
        out.push(entries);
        i = close + 1;
    }
    if out.is_empty() {
        return Err(perr(line, col0 + 1, "expected at least one tuple"));
    }
    Ok(out)
}

fn parse_ring(args: &[(String, usize)], line: usize, col: usize) -> Result<Field> {
    let field = match args.first().map(|(w, _)| w.as_str()) {
        Some("Q") if args.len() == 1 => Ok(Field::rational()),
        Some("Qp") if args.len() == 2 => Field::padic(parse_u64(&args[1].0, line, args[1].1)?),
        Some("GF") if args.len() == 2 => Field::gf(parse_u64(&args[1].0, line, args[1].1)?),
        Some("GF") if args.len() > 3 && args[2].0 == "modulus" => {
            let q = parse_u64(&args[1].0, line, args[1].1)?;
            let m = args[3..]
                .iter()
                .map(|(w, c)| parse_u64(w, line, *c))
                .collect::<Result<_>>()?;
            Field::gf_with_modulus(q, m)
        }
        _ => return Err(perr(line, col, "expected `ring Q`, `ring Qp p` or `ring GF q [modulus …]`")),
    };
    field.map_err(|e| perr(line, col, e.to_string()))
}

/// Parses a problem file; every failure is an [`Error::Parse`] with a position.
pub fn parse_problem(text: &str) -> Result<ProblemFile> {
    let mut field: Option<Field> = None;
    let mut vars: Option<Vec<String>> = None;
    let mut score: Option<ScoreFunction> = None;
    let mut tiebreak: Option<(Vec<String>, usize, usize)> = None;
    let mut weight: Option<(Vec<BigRational>, usize)> = None;
    let mut polytope: Option<(Vec<Vec<BigRational>>, usize)> = None;
    let mut precision: Option<BigRational> = None;
    let mut gen_lines: Option<Vec<(usize, usize, String)>> = None;
    let mut last_line = 1;

    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let indent = content.chars().take_while(|c| c.is_whitespace()).count();
        if let Some(gens) = gen_lines.as_mut() {
            gens.push((line, indent, content.chars().skip(indent).collect()));
            continue;
        }
        let ws = words(content, 0);
        let (key, col) = (ws[0].0.as_str(), ws[0].1);
        let args = &ws[1..];
        let rest_col = col + key.chars().count();
        let rest: String = content.chars().skip(rest_col - 1).collect();
        let once = |seen: bool| {
            if seen {
                Err(perr(line, col, format!("duplicate `{key}` directive")))
            } else {
                Ok(())
            }
        };
        match key {
            "ring" => {
                once(field.is_some())?;
                field = Some(parse_ring(args, line, col)?);
            }
            "vars" => {
                once(vars.is_some())?;
                if args.is_empty() {
                    return Err(perr(line, col, "expected variable names"));
                }
                let mut names: Vec<String> = Vec::new();
                for (w, c) in args {
                    let ok = w.chars().next().is_some_and(|ch| ch.is_ascii_alphabetic() || ch == '_')
                        && w.chars().all(|ch| ch.is_ascii_alphanumeric() || ch == '_');
                    if !ok || names.contains(w) {
                        return Err(perr(line, *c, format!("bad or repeated variable name `{w}`")));
                    }
                    names.push(w.clone());
                }
                vars = Some(names);
            }
            "order" => {
                once(score.is_some())?;
                score = Some(match args {
                    [(w, _)] if w == "degmin" => ScoreFunction::DegMin,
                    [(w, _)] if w == "min" => ScoreFunction::Min,
                    _ => return Err(perr(line, col, "expected `order min` or `order degmin`")),
                });
            }
            "tiebreak" => {
                once(tiebreak.is_some())?;
                tiebreak = Some((args.iter().map(|(w, _)| w.clone()).collect(), line, col));
            }
            "weight" => {
                once(weight.is_some())?;
                if polytope.is_some() {
                    return Err(perr(line, col, "`weight` and `polytope` are mutually exclusive"));
                }
                let mut t = parse_tuples(&rest, line, rest_col - 1)?;
                if t.len() != 1 {
                    return Err(perr(line, col, "`weight` takes a single tuple"));
                }
                weight = Some((t.remove(0), line));
            }
            "polytope" => {
                once(polytope.is_some())?;
                if weight.is_some() {
                    return Err(perr(line, col, "`weight` and `polytope` are mutually exclusive"));
                }
                polytope = Some((parse_tuples(&rest, line, rest_col - 1)?, line));
            }
            "precision" => {
                once(precision.is_some())?;
                match args {
                    [(w, c)] => precision = Some(parse_rational(w, line, *c)?),
                    _ => return Err(perr(line, col, "expected `precision N`")),
                }
            }
            "gens:" => {
                if !args.is_empty() {
                    return Err(perr(line, args[0].1, "generators go on the following lines"));
                }
                gen_lines = Some(Vec::new());
            }
            _ => return Err(perr(line, col, format!("unknown directive `{key}`"))),
        }
    }

    let missing = |what: &str| perr(last_line, 1, format!("missing `{what}` directive"));
    let field = field.ok_or_else(|| missing("ring"))?;
    let vars = vars.ok_or_else(|| missing("vars"))?;
    let score = score.ok_or_else(|| missing("order"))?;
    let gen_lines = gen_lines.ok_or_else(|| missing("gens:"))?;
    let n = vars.len();

    let tiebreak = match tiebreak {
        None => None,
        Some((names, line, col)) => {
            let mut perm = Vec::new();
            for name in &names {
                match vars.iter().position(|v| v == name) {
                    Some(k) if !perm.contains(&k) => perm.push(k),
                    _ => return Err(perr(line, col, format!("bad tiebreak variable `{name}`"))),
                }
            }
            if perm.len() != n {
                return Err(perr(line, col, "tiebreak must list every variable once"));
            }
            Some(perm)
        }
    };

    let geometry = match (weight, polytope) {
        (Some((r, line)), None) => {
            if r.len() != n {
                return Err(perr(line, 1, format!("weight needs {n} entries")));
            }
            Geometry::Weight(WeightContext::new(r).map_err(|e| perr(line, 1, e.to_string()))?)
        }
        (None, Some((vs, line))) => {
            if vs.iter().any(|v| v.len() != n) {
                return Err(perr(line, 1, format!("every vertex needs {n} entries")));
            }
            Geometry::Polytope(PolytopeContext::new(vs).map_err(|e| perr(line, 1, e.to_string()))?)
        }
        _ => {
            if precision.is_some() {
                return Err(perr(last_line, 1, "`precision` needs a `weight` or `polytope` directive"));
            }
            Geometry::Plain
        }
    };
    if matches!(field.kind(), crate::coeffs::FieldKind::Rational) && !matches!(geometry, Geometry::Plain) {
        return Err(perr(last_line, 1, "`weight` and `polytope` need a valued field such as `Qp p`"));
    }

    let ring = Ring::new(field, vars).map_err(|e| perr(1, 1, e.to_string()))?;
    let gens = gen_lines
        .iter()
        .map(|(line, col0, src)| parse_poly_at(&ring, src, *line, *col0))
        .collect::<Result<_>>()?;
    Ok(ProblemFile {
        ring,
        score,
        tiebreak,
        geometry,
        precision,
        gens,
    })
}

/// The order a problem file asks for.
#[derive(Clone, Debug)]
pub enum ActiveOrder {
    Plain(GeneralizedOrder),
    Weight(WeightOrder),
    Polytope(PolytopeOrder),
}

impl ProblemFile {
    pub fn base_order(&self) -> Result<GeneralizedOrder> {
        let n = self.ring.dim();
        let d = crate::lattice::build_decomposition(crate::lattice::DecompositionKind::Standard, n)?;
        GeneralizedOrder::new(Arc::new(d), self.score.clone(), self.tiebreak.clone())
    }

    /// `precision` overrides the file's cap.
    pub fn order(&self, precision: Option<&BigRational>) -> Result<ActiveOrder> {
        let base = self.base_order()?;
        let cap = precision
            .or(self.precision.as_ref())
            .cloned()
            .unwrap_or_else(|| BigRational::from_integer(BigInt::from(DEFAULT_CAP)));
        let field = self.ring.field().clone();
        Ok(match &self.geometry {
            Geometry::Plain => {
                if precision.is_some() {
                    return Err(usage("--precision needs a `weight` or `polytope` directive"));
                }
                ActiveOrder::Plain(base)
            }
            Geometry::Weight(ctx) => ActiveOrder::Weight(WeightOrder::new(ctx.clone(), base, field, Some(cap))?),
            Geometry::Polytope(ctx) => ActiveOrder::Polytope(PolytopeOrder::new(ctx.clone(), &base, field, Some(cap))?),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verb {
    Gb,
    Reduce,
    Member,
    Check,
    Info,
    Selftest,
}

#[derive(Clone, Debug, Default)]
pub struct Flags {
    pub poly: Option<String>,
    pub normalize: bool,
    pub precision: Option<String>,
    pub max_basis: Option<usize>,
    pub strict: bool,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn fmt_poly<O: TermOrder + ?Sized>(o: &O, f: &LaurentPoly) -> String {
    f.format_terms_by(|a, b| o.cmp_terms(a, b))
}

fn fmt_mono(ring: &Arc<Ring>, u: &ExponentVec) -> String {
    LaurentPoly::monomial(ring, ring.field().one(), u.clone()).to_string()
}

struct Ctx<'a> {
    problem: &'a ProblemFile,
    flags: &'a Flags,
    cfg: GBConfig,
    poly: Option<LaurentPoly>,
}

impl Ctx<'_> {
    fn poly(&self) -> Result<&LaurentPoly> {
        self.poly.as_ref().ok_or_else(|| usage("this command needs --poly"))
    }
}

/// Series-aware wrappers: with a cap everything goes through [`CappedSeries`].
fn basis_of<O: TermOrder + Capped>(o: &O, gens: &[LaurentPoly], cfg: &GBConfig) -> Result<GBResult> {
    if o.cap().is_some() {
        let s = gens.iter().map(|g| CappedSeries::new(o, g)).collect::<Result<Vec<_>>>()?;
        buchberger_series(o, &s, cfg)
    } else {
        buchberger(o, gens, cfg)
    }
}

fn divide_by<O: TermOrder + Capped>(o: &O, f: &LaurentPoly, gens: &[LaurentPoly]) -> Result<Division> {
    if o.cap().is_some() {
        let s = gens.iter().map(|g| CappedSeries::new(o, g)).collect::<Result<Vec<_>>>()?;
        reduce_series(o, &CappedSeries::new(o, f)?, &s)
    } else {
        reduce(o, f, gens)
    }
}

fn run_verb<O: TermOrder + Capped>(o: &O, verb: Verb, cx: &Ctx<'_>, out: &mut String) -> Result<i32> {
    let ring = &cx.problem.ring;
    let gens: Vec<LaurentPoly> = cx.problem.gens.iter().map(|g| truncate(o, g)).collect();
    match verb {
        Verb::Gb => {
            for g in basis_of(o, &gens, &cx.cfg)?.basis {
                out.push_str(&fmt_poly(o, &g));
                out.push('\n');
            }
        }
        Verb::Reduce => {
            let d = divide_by(o, cx.poly()?, &gens)?;
            out.push_str(&fmt_poly(o, &d.remainder));
            out.push('\n');
            for q in &d.quotients {
                out.push_str(&fmt_poly(o, q));
                out.push('\n');
            }
        }
        Verb::Member => {
            let f = truncate(o, cx.poly()?);
            let member = if cx.flags.strict {
                ideal_membership(o, &f, &gens, true)?
            } else {
                let basis = basis_of(o, &gens, &cx.cfg)?.basis;
                divide_by(o, &f, &basis)?.remainder.is_zero()
            };
            out.push_str(if member { "true\n" } else { "false\n" });
            if !member {
                return Ok(EXIT_NOT_MEMBER);
            }
        }
        Verb::Check => {
            let cert = is_groebner(o, &gens)?;
            match cert.failure {
                None => out.push_str(&format!("true\npairs checked: {}\n", cert.pairs_checked)),
                Some(fail) => out.push_str(&format!(
                    "false\nS-pair of generators {} and {} in cone {} at {} leaves {}\n",
                    fail.f + 1,
                    fail.g + 1,
                    o.cone_label(fail.cone),
                    fmt_mono(ring, &fail.v),
                    fmt_poly(o, &fail.remainder)
                )),
            }
        }
        Verb::Info => match &cx.poly {
            None => {
                out.push_str(&format!("ring: {}\n", ring.field().describe()));
                out.push_str(&format!("vars: {}\n", ring.vars().join(" ")));
                out.push_str(&format!("order: {}\n", cx.problem.score.name()));
                out.push_str(&format!("cones: {}\n", o.num_cones()));
                for k in 0..o.num_cones() {
                    let rays: Vec<String> = o.cone(k).rays().iter().map(|r| r.to_string()).collect();
                    out.push_str(&format!("T_{}: rays {}\n", o.cone_label(k), rays.join(" ")));
                }
                out.push_str(&format!("gens: {}\n", gens.len()));
            }
            Some(f) => {
                let f = truncate(o, f);
                let (lm, lc) = leading_term(o, &f).ok_or(Error::ZeroPolynomial)?;
                out.push_str(&format!("lm: {}\n", fmt_mono(ring, &lm)));
                out.push_str(&format!("lc: {}\n", ring.field().fmt_value(&lc)));
                for k in 0..o.num_cones() {
                    let (lmk, _) = o.cone_leading(&f, k)?;
                    out.push_str(&format!("lm_{}: {}\n", o.cone_label(k), fmt_mono(ring, &lmk)));
                }
                for k in 0..o.num_cones() {
                    let gs: Vec<String> = o.cone_module(&f, k)?.iter().map(|t| fmt_mono(ring, t)).collect();
                    out.push_str(&format!("T_{}: {}\n", o.cone_label(k), gs.join(", ")));
                }
            }
        },
        Verb::Selftest => unreachable!("handled without a problem file"),
    }
    Ok(EXIT_OK)
}

fn valuation_lines(problem: &ProblemFile, f: &LaurentPoly, o: &dyn TermOrder) -> Result<String> {
    Ok(match &problem.geometry {
        Geometry::Plain => String::new(),
        Geometry::Weight(ctx) => {
            let (v, init) = val_weight(ctx, f)?;
            format!("val_r: {v}\nin_r: {}\n", fmt_poly(o, &init))
        }
        Geometry::Polytope(ctx) => {
            let (v, idx) = val_polytope(ctx, f)?;
            let idx: Vec<String> = idx.iter().map(|i| (i + 1).to_string()).collect();
            let mut s = format!("val_P: {v}\nI_P: {}\n", idx.join(" "));
            if !f.is_zero() {
                if let ActiveOrder::Polytope(po) = problem.order(None)? {
                    s.push_str(&format!("in_P: {}\n", fmt_poly(o, &po.leading(f)?.initial)));
                }
            }
            s
        }
    })
}

fn execute(verb: Verb, text: &str, flags: &Flags) -> Result<(i32, String)> {
    let problem = parse_problem(text)?;
    let poly = flags
        .poly
        .as_deref()
        .map(|src| parse_poly_at(&problem.ring, src, 0, 0))
        .transpose()?;
    let precision = flags
        .precision
        .as_deref()
        .map(|s| parse_rational(s, 0, 1))
        .transpose()?;
    let mut cfg = GBConfig {
        normalize: flags.normalize,
        ..GBConfig::default()
    };
    if let Some(m) = flags.max_basis {
        cfg.max_basis = m;
    }
    let cx = Ctx {
        problem: &problem,
        flags,
        cfg,
        poly,
    };
    let mut out = String::new();
    let order = problem.order(precision.as_ref())?;
    if verb == Verb::Info {
        if let Some(f) = &cx.poly {
            let o: &dyn TermOrder = match &order {
                ActiveOrder::Plain(o) => o,
                ActiveOrder::Weight(o) => o,
                ActiveOrder::Polytope(o) => o,
            };
            out.push_str(&valuation_lines(&problem, f, o)?);
        }
    }
    let code = match &order {
        ActiveOrder::Plain(o) => run_verb(o, verb, &cx, &mut out)?,
        ActiveOrder::Weight(o) => run_verb(o, verb, &cx, &mut out)?,
        ActiveOrder::Polytope(o) => run_verb(o, verb, &cx, &mut out)?,
    };
    Ok((code, out))
}

fn selftest(seed: u64) -> Result<(i32, String)> {
    let rows = oracle::selftest(seed)?;
    let mut out = String::new();
    for r in &rows {
        out.push_str(&format!(
            "{}  {:<40} {:>4} cases, {} failures\n",
            if r.passed() { "PASS" } else { "FAIL" },
            r.name,
            r.cases,
            r.failures
        ));
    }
    let code = if rows.iter().all(|r| r.passed()) { EXIT_OK } else { EXIT_MATH };
    Ok((code, out))
}

/// Runs one verb on the text of a problem file; `text` is ignored by `selftest`.
pub fn run_command(verb: Verb, text: &str, flags: &Flags) -> Outcome {
    let res = if verb == Verb::Selftest {
        selftest(flags.seed)
    } else {
        execute(verb, text, flags)
    };
    match res {
        Ok((code, stdout)) => Outcome {
            code,
            stdout,
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: if matches!(e, Error::Parse { .. }) { EXIT_PARSE } else { EXIT_MATH },
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}
