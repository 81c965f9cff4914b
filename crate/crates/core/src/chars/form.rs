//! Quadratic forms on F2^{2g}, i.e. theta characteristics modulo 2.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::bits::{bit_string, check_genus, dot, mask, pack, same_genus, F2Vector};
use crate::error::{Error, Result};

/// The quadratic form `q(w) = ε·λ + ε′·μ + λ·μ`, written `[ε; ε′]`.
///
/// `ε_i = q(e_i)` and `ε′_i = q(f_i)`; bit `i` stores coordinate `i + 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadForm {
    g: usize,
    eps: u32,
    eps_prime: u32,
}

impl QuadForm {
    pub fn new(g: usize, eps: u32, eps_prime: u32) -> Result<Self> {
        check_genus(g)?;
        if eps & !mask(g) != 0 || eps_prime & !mask(g) != 0 {
            return Err(Error::Precondition(format!(
                "characteristic exceeds {g} bits"
            )));
        }
        Ok(Self { g, eps, eps_prime })
    }

    pub(crate) fn new_unchecked(g: usize, eps: u32, eps_prime: u32) -> Self {
        debug_assert!(eps & !mask(g) == 0 && eps_prime & !mask(g) == 0);
        Self { g, eps, eps_prime }
    }

    pub fn from_bits(eps: &[u8], eps_prime: &[u8]) -> Result<Self> {
        if eps.len() != eps_prime.len() {
            return Err(Error::Parse(format!(
                "halves have different lengths {} and {}",
                eps.len(),
                eps_prime.len()
            )));
        }
        Self::new(eps.len(), pack(eps)?, pack(eps_prime)?)
    }

    /// `q₀ = [0; 0]`, the form `λ·μ`.
    pub fn zero(g: usize) -> Self {
        Self {
            g,
            eps: 0,
            eps_prime: 0,
        }
    }

    /// Index in `0..4^g`: `ε` in the low `g` bits, `ε′` above.
    pub fn index(&self) -> usize {
        self.eps as usize | (self.eps_prime as usize) << self.g
    }

    pub fn from_index(g: usize, index: usize) -> Self {
        let m = mask(g) as usize;
        Self::new_unchecked(g, (index & m) as u32, ((index >> g) & m) as u32)
    }

    /// All `4^g` forms in index order.
    pub fn all(g: usize) -> impl Iterator<Item = QuadForm> {
        (0..1usize << (2 * g)).map(move |i| Self::from_index(g, i))
    }

    pub fn all_even(g: usize) -> impl Iterator<Item = QuadForm> {
        Self::all(g).filter(|q| q.is_even())
    }

    pub fn all_odd(g: usize) -> impl Iterator<Item = QuadForm> {
        Self::all(g).filter(|q| q.is_odd())
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn eps(&self) -> u32 {
        self.eps
    }

    pub fn eps_prime(&self) -> u32 {
        self.eps_prime
    }

    pub fn eps_bits(&self) -> Vec<u8> {
        (0..self.g).map(|i| (self.eps >> i & 1) as u8).collect()
    }

    pub fn eps_prime_bits(&self) -> Vec<u8> {
        (0..self.g)
            .map(|i| (self.eps_prime >> i & 1) as u8)
            .collect()
    }

    pub fn evaluate(&self, w: &F2Vector) -> Result<u8> {
        same_genus(self.g, w.genus())?;
        Ok(self.evaluate_unchecked(w))
    }

    #[inline]
    pub(crate) fn evaluate_unchecked(&self, w: &F2Vector) -> u8 {
        dot(self.eps, w.lambda()) ^ dot(self.eps_prime, w.mu()) ^ dot(w.lambda(), w.mu())
    }

    /// Arf invariant `ε·ε′`.
    pub fn arf(&self) -> u8 {
        dot(self.eps, self.eps_prime)
    }

    pub fn is_odd(&self) -> bool {
        self.arf() == 1
    }

    pub fn is_even(&self) -> bool {
        self.arf() == 0
    }

    /// `[ε; ε′] + (λ, μ) = [ε + μ; ε′ + λ]`.
    pub fn add_vector(&self, v: &F2Vector) -> Result<Self> {
        same_genus(self.g, v.genus())?;
        Ok(self.add_vector_unchecked(v))
    }

    #[inline]
    pub(crate) fn add_vector_unchecked(&self, v: &F2Vector) -> Self {
        Self::new_unchecked(self.g, self.eps ^ v.mu(), self.eps_prime ^ v.lambda())
    }

    /// The unique `v` with `self + v = other`.
    pub fn diff(&self, other: &Self) -> Result<F2Vector> {
        same_genus(self.g, other.g)?;
        Ok(self.diff_unchecked(other))
    }

    #[inline]
    pub(crate) fn diff_unchecked(&self, other: &Self) -> F2Vector {
        F2Vector::new_unchecked(
            self.g,
            self.eps_prime ^ other.eps_prime,
            self.eps ^ other.eps,
        )
    }

    /// Sum of three forms, again a form.
    pub fn sum3(a: &Self, b: &Self, c: &Self) -> Result<Self> {
        same_genus(a.g, b.g)?;
        same_genus(a.g, c.g)?;
        Ok(Self::sum3_unchecked(a, b, c))
    }

    #[inline]
    pub(crate) fn sum3_unchecked(a: &Self, b: &Self, c: &Self) -> Self {
        Self::new_unchecked(
            a.g,
            a.eps ^ b.eps ^ c.eps,
            a.eps_prime ^ b.eps_prime ^ c.eps_prime,
        )
    }

    /// Sum of an odd number of forms.
    pub fn sum_odd(forms: &[Self]) -> Result<Self> {
        let first = forms
            .first()
            .ok_or_else(|| Error::Precondition("empty sum".into()))?;
        if forms.len().is_multiple_of(2) {
            return Err(Error::Precondition(
                "a sum of an even number of forms is a vector".into(),
            ));
        }
        let mut acc = *first;
        for q in &forms[1..] {
            same_genus(acc.g, q.g)?;
            acc.eps ^= q.eps;
            acc.eps_prime ^= q.eps_prime;
        }
        Ok(acc)
    }
}

impl Ord for QuadForm {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.g, self.index()).cmp(&(other.g, other.index()))
    }
}

impl PartialOrd for QuadForm {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

pub fn evaluate_form(q: &QuadForm, w: &F2Vector) -> Result<u8> {
    q.evaluate(w)
}

pub fn arf(q: &QuadForm) -> u8 {
    q.arf()
}

pub fn add_vector(q: &QuadForm, v: &F2Vector) -> Result<QuadForm> {
    q.add_vector(v)
}

pub fn diff_forms(q: &QuadForm, q2: &QuadForm) -> Result<F2Vector> {
    q.diff(q2)
}

pub fn sum3(q1: &QuadForm, q2: &QuadForm, q3: &QuadForm) -> Result<QuadForm> {
    QuadForm::sum3(q1, q2, q3)
}

/// `a(q + q′ + q″)` computed as `a(q) + a(q′) + a(q″) + ⟨q + q′, q + q″⟩`.
pub fn arf_sum3(q: &QuadForm, q1: &QuadForm, q2: &QuadForm) -> Result<u8> {
    same_genus(q.g, q1.g)?;
    same_genus(q.g, q2.g)?;
    let cross = q
        .diff_unchecked(q1)
        .pairing_unchecked(&q.diff_unchecked(q2));
    Ok(q.arf() ^ q1.arf() ^ q2.arf() ^ cross)
}

/// `q(q′ + q″)` computed as `a(q + q′ + q″) + a(q)`.
pub fn eval_at_formsum(q: &QuadForm, q1: &QuadForm, q2: &QuadForm) -> Result<u8> {
    Ok(arf_sum3(q, q1, q2)? ^ q.arf())
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let half = |x: u32| {
            (0..self.g)
                .map(|i| if x >> i & 1 == 1 { "1" } else { "0" })
                .collect::<Vec<_>>()
                .join(" ")
        };
        write!(f, "[{}; {}]", half(self.eps), half(self.eps_prime))
    }
}

impl fmt::Debug for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}/{}",
            bit_string(self.eps, self.g),
            bit_string(self.eps_prime, self.g)
        )
    }
}

fn parse_bits(s: &str, compact: bool) -> Result<Vec<u8>> {
    let parse_one = |c: &str| match c {
        "0" => Ok(0),
        "1" => Ok(1),
        other => Err(Error::Parse(format!("invalid bit {other:?}"))),
    };
    if compact {
        s.trim()
            .chars()
            .map(|c| parse_one(c.encode_utf8(&mut [0; 4])))
            .collect()
    } else {
        s.split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(parse_one)
            .collect()
    }
}

impl FromStr for QuadForm {
    type Err = Error;

    /// Accepts `[1 0 0; 1 0 0]` and the compact `100/100`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (top, bottom, compact) =
            if let Some(inner) = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
                let (a, b) = inner
                    .split_once(';')
                    .ok_or_else(|| Error::Parse(format!("missing ';' in {s:?}")))?;
                (a, b, false)
            } else if let Some((a, b)) = s.split_once('/') {
                (a, b, true)
            } else {
                return Err(Error::Parse(format!("unrecognised characteristic {s:?}")));
            };
        let eps = parse_bits(top, compact)?;
        let eps_prime = parse_bits(bottom, compact)?;
        if eps.is_empty() {
            return Err(Error::Parse(format!("empty characteristic {s:?}")));
        }
        Self::from_bits(&eps, &eps_prime)
    }
}

impl Serialize for QuadForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for QuadForm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
