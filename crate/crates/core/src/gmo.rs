//! Generalized monomial orders: a score `φ` compared first, lex on `Z^n` to break ties.

use std::cmp::Ordering;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{usage, Result};
use crate::lattice::{
    box_points, box_points_by_norm, build_decomposition, ConicDecomposition, DecompositionKind,
    ExponentVec,
};

/// Where `φ` is allowed to vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ZeroSet {
    Identity,
    Cone(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScoreFunction {
    /// `−min(0, x_1, …, x_n)`.
    Min,
    /// `Σ x_k − (n+1)·min(0, x_1, …, x_n)`.
    DegMin,
    /// `rows[k]·x` on the first cone `k` containing `x`.
    PerCone { rows: Vec<Vec<i64>>, zero_set: ZeroSet },
    /// `max_j forms[j]·x + weight·base(x)`.
    Support {
        forms: Vec<Vec<i64>>,
        base: Option<Box<ScoreFunction>>,
        weight: i64,
        zero_set: ZeroSet,
    },
}

impl ScoreFunction {
    pub fn name(&self) -> &'static str {
        match self {
            ScoreFunction::Min => "min",
            ScoreFunction::DegMin => "degmin",
            ScoreFunction::PerCone { .. } => "custom",
            ScoreFunction::Support { .. } => "support",
        }
    }

    pub fn zero_set(&self) -> ZeroSet {
        match self {
            ScoreFunction::Min => ZeroSet::Cone(0),
            ScoreFunction::DegMin => ZeroSet::Identity,
            ScoreFunction::PerCone { zero_set, .. } | ScoreFunction::Support { zero_set, .. } => {
                zero_set.clone()
            }
        }
    }

    fn eval(&self, x: &ExponentVec, d: &ConicDecomposition) -> i64 {
        let c = x.coords();
        match self {
            ScoreFunction::Min => -c.iter().copied().fold(0, i64::min),
            ScoreFunction::DegMin => {
                let m = c.iter().copied().fold(0, i64::min);
                c.iter().sum::<i64>() - (c.len() as i64 + 1) * m
            }
            ScoreFunction::PerCone { rows, .. } => match d.locate(x) {
                Some(k) => x.dot(&rows[k]),
                None => 0,
            },
            ScoreFunction::Support {
                forms, base, weight, ..
            } => {
                let s = forms.iter().map(|f| x.dot(f)).max().unwrap_or(0);
                s + base.as_ref().map_or(0, |b| weight * b.eval(x, d))
            }
        }
    }
}

/// `φ(x) = num·x / den` on one cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearForm {
    pub num: Vec<i64>,
    pub den: i64,
}

impl LinearForm {
    /// `den_other · num·x`, for cross-multiplied comparisons.
    pub fn eval_scaled(&self, x: &ExponentVec, den_other: i64) -> i128 {
        x.dot(&self.num) as i128 * den_other as i128
    }
}

/// A total order on `Z^n` compatible with a conic decomposition.
#[derive(Clone, Debug)]
pub struct GeneralizedOrder {
    decomposition: Arc<ConicDecomposition>,
    score: ScoreFunction,
    perm: Vec<usize>,
    forms: Vec<Option<LinearForm>>,
}

impl PartialEq for GeneralizedOrder {
    fn eq(&self, o: &Self) -> bool {
        (Arc::ptr_eq(&self.decomposition, &o.decomposition) || self.decomposition == o.decomposition)
            && self.score == o.score
            && self.perm == o.perm
    }
}
impl Eq for GeneralizedOrder {}

impl GeneralizedOrder {
    /// `perm` lists variable indices in tie-break priority; `None` means `0, 1, …, n−1`.
    pub fn new(
        decomposition: Arc<ConicDecomposition>,
        score: ScoreFunction,
        perm: Option<Vec<usize>>,
    ) -> Result<Self> {
        let n = decomposition.dim();
        let perm = perm.unwrap_or_else(|| (0..n).collect());
        let mut seen = perm.clone();
        seen.sort_unstable();
        if seen != (0..n).collect::<Vec<_>>() {
            return Err(usage(format!("{perm:?} is not a permutation of 0..{n}")));
        }
        if let ScoreFunction::PerCone { rows, .. } = &score {
            if rows.len() != decomposition.len() || rows.iter().any(|r| r.len() != n) {
                return Err(usage("one score row of length n is needed per cone"));
            }
        }
        let mut o = GeneralizedOrder {
            decomposition,
            score,
            perm,
            forms: Vec::new(),
        };
        o.forms = (0..o.decomposition.len()).map(|k| o.derive_form(k)).collect();
        Ok(o)
    }

    /// Score on the standard decomposition with the natural lex tie-break.
    pub fn standard(n: usize, score: ScoreFunction) -> Result<Self> {
        let d = build_decomposition(DecompositionKind::Standard, n)?;
        GeneralizedOrder::new(Arc::new(d), score, None)
    }

    pub fn degmin(n: usize) -> Self {
        Self::standard(n, ScoreFunction::DegMin).expect("n > 0")
    }

    pub fn min(n: usize) -> Self {
        Self::standard(n, ScoreFunction::Min).expect("n > 0")
    }

    pub fn dim(&self) -> usize {
        self.decomposition.dim()
    }

    pub fn decomposition(&self) -> &ConicDecomposition {
        &self.decomposition
    }

    pub fn decomposition_arc(&self) -> &Arc<ConicDecomposition> {
        &self.decomposition
    }

    pub fn score(&self) -> &ScoreFunction {
        &self.score
    }

    pub fn tiebreak(&self) -> &[usize] {
        &self.perm
    }

    pub fn num_cones(&self) -> usize {
        self.decomposition.len()
    }

    pub fn phi(&self, x: &ExponentVec) -> i64 {
        self.score.eval(x, &self.decomposition)
    }

    pub fn lex_cmp(&self, u: &ExponentVec, v: &ExponentVec) -> Ordering {
        for &k in &self.perm {
            match u.coords()[k].cmp(&v.coords()[k]) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }

    pub fn compare(&self, u: &ExponentVec, v: &ExponentVec) -> Ordering {
        self.phi(u)
            .cmp(&self.phi(v))
            .then_with(|| self.lex_cmp(u, v))
    }

    /// Maximum under the order.
    pub fn greatest(&self, tuples: &[ExponentVec]) -> Result<ExponentVec> {
        tuples
            .iter()
            .max_by(|a, b| self.compare(a, b))
            .cloned()
            .ok_or_else(|| usage("greatest of an empty list"))
    }

    /// A translation placing every point of `support` in cone `i`.
    pub fn witness<'a>(
        &self,
        i: usize,
        support: impl IntoIterator<Item = &'a ExponentVec>,
    ) -> ExponentVec {
        let cone = self.decomposition.cone(i);
        support
            .into_iter()
            .fold(ExponentVec::zero(self.dim()), |acc, s| &acc + &cone.shift_into(s))
    }

    /// The element of `tuples` that is greatest once all are translated into cone `i`.
    pub fn greatest_for_cone(&self, i: usize, tuples: &[ExponentVec]) -> Result<ExponentVec> {
        if tuples.is_empty() {
            return Err(usage("greatest of an empty list"));
        }
        if i >= self.num_cones() {
            return Err(usage(format!("cone index {i} out of range")));
        }
        let t = self.witness(i, tuples);
        Ok(tuples
            .iter()
            .max_by(|a, b| self.compare(&(&t + *a), &(&t + *b)))
            .unwrap()
            .clone())
    }

    /// `φ` restricted to cone `k` as a linear form, if it is linear there.
    pub fn linear_form(&self, k: usize) -> Option<&LinearForm> {
        self.forms[k].as_ref()
    }

    fn derive_form(&self, k: usize) -> Option<LinearForm> {
        let cone = self.decomposition.cone(k);
        let n = self.dim();
        let mut num = vec![0i64; n];
        for (ray, row) in cone.rays().iter().zip(cone.coordinate_forms()) {
            let v = self.phi(ray);
            for d in 0..n {
                num[d] += v * row[d];
            }
        }
        let den = cone.determinant();
        let g = num.iter().fold(den, |g, &c| num_integer::gcd(g, c));
        let form = LinearForm {
            num: num.iter().map(|c| c / g).collect(),
            den: den / g,
        };
        let sample = cone.points_up_to_height(6 * cone.determinant());
        sample
            .iter()
            .all(|x| self.phi(x) * form.den == x.dot(&form.num))
            .then_some(form)
    }

    /// Checks the construction conditions on `φ` and the order axioms on samples.
    pub fn validate(&self, radius: i64, samples: usize, seed: u64) -> GmoReport {
        let n = self.dim();
        let d = &self.decomposition;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let zero = ExponentVec::zero(n);
        let zero_set = self.score.zero_set();
        let in_e = |x: &ExponentVec| match &zero_set {
            ZeroSet::Identity => x.is_zero(),
            ZeroSet::Cone(k) => d.cone(*k).contains(x),
        };
        let mut report = GmoReport::default();

        report.positivity = box_points_by_norm(n, radius).into_iter().find(|x| {
            let v = self.phi(x);
            v < 0 || (v == 0 && !in_e(x))
        });

        let rand_pt = |rng: &mut ChaCha8Rng| {
            ExponentVec((0..n).map(|_| rng.gen_range(-radius..=radius)).collect())
        };
        let rand_in_cone = |rng: &mut ChaCha8Rng, k: usize| {
            let cone = d.cone(k);
            cone.generators().iter().fold(zero.clone(), |acc, g| {
                &acc + &g.scale(rng.gen_range(0..=radius.max(1)))
            })
        };

        for _ in 0..samples {
            let s = rand_pt(&mut rng);
            let t = rand_pt(&mut rng);
            if self.phi(&(&s + &t)) > self.phi(&s) + self.phi(&t) {
                report.subadditivity = Some((s, t));
                break;
            }
        }

        'add: for k in 0..d.len() {
            for _ in 0..samples / d.len() + 1 {
                let a = rand_in_cone(&mut rng, k);
                let b = rand_in_cone(&mut rng, k);
                if self.phi(&(&a + &b)) != self.phi(&a) + self.phi(&b) {
                    report.additivity = Some((k, a, b));
                    break 'add;
                }
            }
        }

        report.identity_least = box_points(n, radius)
            .into_iter()
            .find(|t| self.compare(&zero, t) == Ordering::Greater);

        for _ in 0..samples {
            let i = rng.gen_range(0..d.len());
            let s = rand_in_cone(&mut rng, i);
            let t = rand_in_cone(&mut rng, i);
            let r = rand_pt(&mut rng);
            if self.compare(&r, &s) == Ordering::Less
                && self.compare(&(&r + &t), &(&s + &t)) != Ordering::Less
            {
                report.compatibility = Some((r, s, t, i));
                break;
            }
        }
        report
    }
}

/// Witnesses of violated conditions; all `None` means the checks passed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GmoReport {
    /// `φ(t) ≤ 0` off the zero set, or `φ(t) < 0`.
    pub positivity: Option<ExponentVec>,
    /// `φ(s+t) > φ(s) + φ(t)`.
    pub subadditivity: Option<(ExponentVec, ExponentVec)>,
    /// `φ(a+b) ≠ φ(a) + φ(b)` for `a, b` in the cone.
    pub additivity: Option<(usize, ExponentVec, ExponentVec)>,
    /// `t < 1`.
    pub identity_least: Option<ExponentVec>,
    /// `r < s` but not `r+t < s+t`, with `s, t` in the cone.
    pub compatibility: Option<(ExponentVec, ExponentVec, ExponentVec, usize)>,
}

impl GmoReport {
    pub fn passed(&self) -> bool {
        self.positivity.is_none()
            && self.subadditivity.is_none()
            && self.additivity.is_none()
            && self.identity_least.is_none()
            && self.compatibility.is_none()
    }
}
