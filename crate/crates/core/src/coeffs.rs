//! Coefficient fields with a valuation into `Q ∪ {+∞}`.
//!
//! Rationals carry either the trivial or a p-adic valuation; finite fields
//! `F_{p^k}` are stored as coefficient vectors modulo a monic irreducible
//! polynomial and have trivial valuation.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Largest `p^k` for which the defining polynomial is checked by exhaustive factor search.
pub const BRUTE_FORCE_LIMIT: u64 = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldKind {
    /// `Q` with the p-adic valuation.
    PadicRational { p: u64 },
    /// `Q` with the trivial valuation.
    Rational,
    /// `F_p`.
    Prime { p: u64 },
    /// `F_{p^k}`; `modulus` is monic of degree `k`, low degree first.
    Extension { p: u64, k: usize, modulus: Vec<u64> },
}

/// A validated field description, shared by reference.
#[derive(Clone, Debug)]
pub struct Field(Arc<FieldKind>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}
impl Eq for Field {}

/// Raw field element; its meaning depends on the owning [`Field`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Value {
    Rat(BigRational),
    /// Residues mod p, low degree first, length `k`.
    Ff(SmallVec<[u32; 2]>),
}

/// Rational number or `+∞`; `Finite(_) < Infinity`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtRational {
    Finite(BigRational),
    Infinity,
}

impl ExtRational {
    pub fn int(v: i64) -> Self {
        ExtRational::Finite(BigRational::from_integer(v.into()))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtRational::Infinity)
    }

    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            ExtRational::Finite(q) => Some(q),
            ExtRational::Infinity => None,
        }
    }

    pub fn add(&self, other: &ExtRational) -> ExtRational {
        match (self, other) {
            (ExtRational::Finite(a), ExtRational::Finite(b)) => ExtRational::Finite(a + b),
            _ => ExtRational::Infinity,
        }
    }
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRational::Finite(q) => write!(f, "{}", q),
            ExtRational::Infinity => write!(f, "+inf"),
        }
    }
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// p-adic valuation of a nonzero integer.
pub fn int_valuation(n: &BigInt, p: u64) -> i64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

// Polynomials over F_p, low degree first, used for extension arithmetic.
fn poly_trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = mod_inv(m[dm], p).expect("nonzero leading coefficient");
    while r.len() > dm {
        let d = r.len() - 1;
        let c = r[d] * lead_inv % p;
        if c != 0 {
            for (j, mj) in m.iter().enumerate() {
                let idx = d - dm + j;
                r[idx] = (r[idx] + p - c * mj % p) % p;
            }
        }
        poly_trim(&mut r);
    }
    r
}

fn mod_inv(a: u64, p: u64) -> Option<u64> {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, (a % p) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    if r != 1 {
        return None;
    }
    Some(t.rem_euclid(p as i128) as u64)
}

fn is_irreducible(modulus: &[u64], p: u64) -> Result<bool> {
    let k = modulus.len() - 1;
    if k <= 1 {
        return Ok(true);
    }
    let q = (p as f64).powi(k as i32);
    if q > BRUTE_FORCE_LIMIT as f64 {
        return Err(Error::InvalidField(format!(
            "cannot verify irreducibility for p^k = {p}^{k} above {BRUTE_FORCE_LIMIT}"
        )));
    }
    // Trial division by every monic polynomial of degree 1..=k/2.
    for d in 1..=k / 2 {
        let count = p.pow(d as u32);
        for idx in 0..count {
            let mut cand = Vec::with_capacity(d + 1);
            let mut x = idx;
            for _ in 0..d {
                cand.push(x % p);
                x /= p;
            }
            cand.push(1);
            if poly_rem(modulus, &cand, p).is_empty() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn builtin_modulus(p: u64, k: usize) -> Option<Vec<u64>> {
    match (p, k) {
        (2, 2) => Some(vec![1, 1, 1]),
        (2, 3) => Some(vec![1, 1, 0, 1]),
        (3, 2) => Some(vec![2, 1, 1]),
        (5, 2) => Some(vec![2, 1, 1]),
        (3, 3) => Some(vec![1, 2, 0, 1]),
        _ => None,
    }
}

impl Field {
    pub fn new(kind: FieldKind) -> Result<Field> {
        match &kind {
            FieldKind::PadicRational { p } | FieldKind::Prime { p } => {
                if !is_prime(*p) || *p > u32::MAX as u64 {
                    return Err(Error::InvalidField(format!("{p} is not a supported prime")));
                }
            }
            FieldKind::Rational => {}
            FieldKind::Extension { p, k, modulus } => {
                if !is_prime(*p) || *p > u32::MAX as u64 {
                    return Err(Error::InvalidField(format!("{p} is not a supported prime")));
                }
                if *k < 1 || modulus.len() != k + 1 {
                    return Err(Error::InvalidField(format!(
                        "defining polynomial must have degree {k}"
                    )));
                }
                if modulus[*k] != 1 || modulus.iter().any(|c| c >= p) {
                    return Err(Error::InvalidField(
                        "defining polynomial must be monic with coefficients in [0, p)".into(),
                    ));
                }
                if !is_irreducible(modulus, *p)? {
                    return Err(Error::InvalidField(format!(
                        "defining polynomial {modulus:?} is reducible over F_{p}"
                    )));
                }
            }
        }
        Ok(Field(Arc::new(kind)))
    }

    pub fn rational() -> Field {
        Field(Arc::new(FieldKind::Rational))
    }

    pub fn padic(p: u64) -> Result<Field> {
        Field::new(FieldKind::PadicRational { p })
    }

    pub fn prime(p: u64) -> Result<Field> {
        Field::new(FieldKind::Prime { p })
    }

    /// `F_q` with the built-in defining polynomial (or the first irreducible one found).
    pub fn gf(q: u64) -> Result<Field> {
        if is_prime(q) {
            return Field::prime(q);
        }
        let (p, k) = prime_power(q).ok_or_else(|| {
            Error::InvalidField(format!("{q} is not a prime power"))
        })?;
        let modulus = match builtin_modulus(p, k) {
            Some(m) => m,
            None => first_irreducible(p, k)?,
        };
        Field::new(FieldKind::Extension { p, k, modulus })
    }

    pub fn gf_with_modulus(q: u64, modulus: Vec<u64>) -> Result<Field> {
        let (p, k) = prime_power(q)
            .ok_or_else(|| Error::InvalidField(format!("{q} is not a prime power")))?;
        if k == 1 {
            return Field::prime(p);
        }
        Field::new(FieldKind::Extension { p, k, modulus })
    }

    pub fn kind(&self) -> &FieldKind {
        &self.0
    }

    /// Field characteristic (0 for the rationals).
    pub fn characteristic(&self) -> u64 {
        match self.kind() {
            FieldKind::PadicRational { .. } | FieldKind::Rational => 0,
            FieldKind::Prime { p } | FieldKind::Extension { p, .. } => *p,
        }
    }

    /// Number of residues in an element vector (0 for rationals).
    fn degree(&self) -> usize {
        match self.kind() {
            FieldKind::PadicRational { .. } | FieldKind::Rational => 0,
            FieldKind::Prime { .. } => 1,
            FieldKind::Extension { k, .. } => *k,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.degree() == 0
    }

    pub fn describe(&self) -> String {
        match self.kind() {
            FieldKind::PadicRational { p } => format!("Q (val_{p})"),
            FieldKind::Rational => "Q".into(),
            FieldKind::Prime { p } => format!("GF({p})"),
            FieldKind::Extension { p, k, modulus } => {
                format!("GF({}) mod {:?}", p.pow(*k as u32), modulus)
            }
        }
    }

    pub fn zero(&self) -> Value {
        match self.degree() {
            0 => Value::Rat(BigRational::zero()),
            k => Value::Ff(SmallVec::from_elem(0, k)),
        }
    }

    pub fn one(&self) -> Value {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Value {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> Value {
        match self.degree() {
            0 => Value::Rat(BigRational::from_integer(n.clone())),
            k => {
                let p = self.characteristic();
                let r = n.mod_floor(&BigInt::from(p)).to_u64().unwrap() as u32;
                let mut v = SmallVec::from_elem(0, k);
                v[0] = r;
                Value::Ff(v)
            }
        }
    }

    /// Maps a rational into the field; fails when the denominator vanishes mod p.
    pub fn from_rational(&self, q: &BigRational) -> Result<Value> {
        match self.degree() {
            0 => Ok(Value::Rat(q.clone())),
            _ => {
                let num = self.from_bigint(q.numer());
                let den = self.from_bigint(q.denom());
                self.div(&num, &den)
            }
        }
    }

    /// The class of `t` in `F_p[t]/(modulus)`; the field generator `a`.
    pub fn generator(&self) -> Option<Value> {
        match self.kind() {
            FieldKind::Extension { k, .. } if *k >= 2 => {
                let mut v = SmallVec::from_elem(0, *k);
                v[1] = 1;
                Some(Value::Ff(v))
            }
            _ => None,
        }
    }

    /// Whether `v` is a well-formed element of this field.
    pub fn check(&self, v: &Value) -> Result<()> {
        let ok = match (v, self.degree()) {
            (Value::Rat(_), 0) => true,
            (Value::Ff(x), k) if k > 0 => {
                x.len() == k && x.iter().all(|&c| (c as u64) < self.characteristic())
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.describe(), format!("{v:?}")))
        }
    }

    pub fn is_zero(&self, v: &Value) -> bool {
        match v {
            Value::Rat(q) => q.is_zero(),
            Value::Ff(x) => x.iter().all(|&c| c == 0),
        }
    }

    pub fn is_one(&self, v: &Value) -> bool {
        match v {
            Value::Rat(q) => q.is_one(),
            Value::Ff(x) => x[0] == 1 && x[1..].iter().all(|&c| c == 0),
        }
    }

    pub fn add(&self, a: &Value, b: &Value) -> Value {
        match (a, b) {
            (Value::Rat(x), Value::Rat(y)) => Value::Rat(x + y),
            (Value::Ff(x), Value::Ff(y)) => {
                let p = self.characteristic();
                Value::Ff(
                    x.iter()
                        .zip(y)
                        .map(|(&u, &v)| ((u as u64 + v as u64) % p) as u32)
                        .collect(),
                )
            }
            _ => panic!("mixed coefficient representations"),
        }
    }

    pub fn neg(&self, a: &Value) -> Value {
        match a {
            Value::Rat(x) => Value::Rat(-x),
            Value::Ff(x) => {
                let p = self.characteristic();
                Value::Ff(x.iter().map(|&u| ((p - u as u64) % p) as u32).collect())
            }
        }
    }

    pub fn sub(&self, a: &Value, b: &Value) -> Value {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Value, b: &Value) -> Value {
        match (a, b) {
            (Value::Rat(x), Value::Rat(y)) => Value::Rat(x * y),
            (Value::Ff(x), Value::Ff(y)) => {
                let p = self.characteristic();
                match self.kind() {
                    FieldKind::Prime { .. } => {
                        Value::Ff(SmallVec::from_elem(((x[0] as u64 * y[0] as u64) % p) as u32, 1))
                    }
                    FieldKind::Extension { k, modulus, .. } => {
                        let mut prod = vec![0u64; 2 * k - 1];
                        for (i, &u) in x.iter().enumerate() {
                            if u == 0 {
                                continue;
                            }
                            for (j, &v) in y.iter().enumerate() {
                                prod[i + j] = (prod[i + j] + u as u64 * v as u64) % p;
                            }
                        }
                        let r = poly_rem(&prod, modulus, p);
                        let mut out: SmallVec<[u32; 2]> = SmallVec::from_elem(0, *k);
                        for (i, c) in r.into_iter().enumerate() {
                            out[i] = c as u32;
                        }
                        Value::Ff(out)
                    }
                    _ => unreachable!(),
                }
            }
            _ => panic!("mixed coefficient representations"),
        }
    }

    pub fn inv(&self, a: &Value) -> Result<Value> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        match a {
            Value::Rat(x) => Ok(Value::Rat(x.recip())),
            Value::Ff(x) => match self.kind() {
                FieldKind::Prime { p } => {
                    Ok(Value::Ff(SmallVec::from_elem(mod_inv(x[0] as u64, *p).unwrap() as u32, 1)))
                }
                FieldKind::Extension { p, k, .. } => {
                    // a^(q-2) = a^(-1) in F_q^×.
                    let q = p.pow(*k as u32);
                    Ok(self.pow(a, q - 2))
                }
                _ => unreachable!(),
            },
        }
    }

    pub fn div(&self, a: &Value, b: &Value) -> Result<Value> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &Value, mut e: u64) -> Value {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// `val(a)`; `+∞` at zero.
    pub fn valuation(&self, a: &Value) -> ExtRational {
        match self.valuation_int(a) {
            Some(v) => ExtRational::int(v),
            None => ExtRational::Infinity,
        }
    }

    /// Integer valuation (all supported fields are discretely valued with value group Z).
    pub fn valuation_int(&self, a: &Value) -> Option<i64> {
        if self.is_zero(a) {
            return None;
        }
        match (self.kind(), a) {
            (FieldKind::PadicRational { p }, Value::Rat(q)) => {
                Some(int_valuation(q.numer(), *p) - int_valuation(q.denom(), *p))
            }
            _ => Some(0),
        }
    }

    pub fn fmt_value(&self, v: &Value) -> String {
        match v {
            Value::Rat(q) => format!("{}", q),
            Value::Ff(x) => {
                if x.len() == 1 {
                    return x[0].to_string();
                }
                let mut parts = Vec::new();
                for (i, &c) in x.iter().enumerate().rev() {
                    if c == 0 {
                        continue;
                    }
                    let mon = match i {
                        0 => String::new(),
                        1 => "a".into(),
                        _ => format!("a^{i}"),
                    };
                    parts.push(match (c, i) {
                        (_, 0) => c.to_string(),
                        (1, _) => mon,
                        _ => format!("{c}*{mon}"),
                    });
                }
                if parts.is_empty() {
                    "0".into()
                } else {
                    parts.join(" + ")
                }
            }
        }
    }

    pub fn coeff(&self, v: Value) -> Coefficient {
        Coefficient { field: self.clone(), value: v }
    }
}

fn prime_power(q: u64) -> Option<(u64, usize)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while q % p != 0 {
        p += 1;
    }
    let mut k = 0;
    let mut r = q;
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p, k))
}

fn first_irreducible(p: u64, k: usize) -> Result<Vec<u64>> {
    let count = p.checked_pow(k as u32).unwrap_or(u64::MAX);
    for idx in 0..count {
        let mut m = Vec::with_capacity(k + 1);
        let mut x = idx;
        for _ in 0..k {
            m.push(x % p);
            x /= p;
        }
        m.push(1);
        if m[0] != 0 && is_irreducible(&m, p)? {
            return Ok(m);
        }
    }
    Err(Error::InvalidField(format!("no irreducible polynomial of degree {k} over F_{p}")))
}

/// A field element bundled with its field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coefficient {
    pub field: Field,
    pub value: Value,
}

impl Coefficient {
    fn same_field(&self, other: &Coefficient) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.field.describe(), other.field.describe()))
        }
    }

    pub fn is_zero(&self) -> bool {
        self.field.is_zero(&self.value)
    }

    pub fn checked_add(&self, o: &Coefficient) -> Result<Coefficient> {
        self.same_field(o)?;
        Ok(self.field.coeff(self.field.add(&self.value, &o.value)))
    }

    pub fn checked_sub(&self, o: &Coefficient) -> Result<Coefficient> {
        self.same_field(o)?;
        Ok(self.field.coeff(self.field.sub(&self.value, &o.value)))
    }

    pub fn checked_mul(&self, o: &Coefficient) -> Result<Coefficient> {
        self.same_field(o)?;
        Ok(self.field.coeff(self.field.mul(&self.value, &o.value)))
    }

    pub fn checked_div(&self, o: &Coefficient) -> Result<Coefficient> {
        self.same_field(o)?;
        Ok(self.field.coeff(self.field.div(&self.value, &o.value)?))
    }

    pub fn neg(&self) -> Coefficient {
        self.field.coeff(self.field.neg(&self.value))
    }

    pub fn inv(&self) -> Result<Coefficient> {
        Ok(self.field.coeff(self.field.inv(&self.value)?))
    }

    pub fn valuation(&self) -> ExtRational {
        self.field.valuation(&self.value)
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.fmt_value(&self.value))
    }
}
