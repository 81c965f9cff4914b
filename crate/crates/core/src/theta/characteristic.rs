use std::fmt;
use std::str::FromStr;

use crate::chars::QuadForm;
use crate::error::{Error, Result};

/// An integer characteristic `[ε; ε′] ∈ Z^g ⊕ Z^g`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntCharacteristic {
    eps: Vec<i64>,
    eps_prime: Vec<i64>,
}

impl IntCharacteristic {
    pub fn new(eps: Vec<i64>, eps_prime: Vec<i64>) -> Result<Self> {
        if eps.is_empty() || eps.len() != eps_prime.len() {
            return Err(Error::Precondition(format!(
                "characteristic halves have lengths {} and {}",
                eps.len(),
                eps_prime.len()
            )));
        }
        Ok(Self { eps, eps_prime })
    }

    pub fn zero(g: usize) -> Self {
        Self {
            eps: vec![0; g],
            eps_prime: vec![0; g],
        }
    }

    /// The lift with entries in `{0, 1}`.
    pub fn canonical(q: &QuadForm) -> Self {
        let conv = |bits: Vec<u8>| bits.into_iter().map(i64::from).collect();
        Self {
            eps: conv(q.eps_bits()),
            eps_prime: conv(q.eps_prime_bits()),
        }
    }

    pub fn genus(&self) -> usize {
        self.eps.len()
    }

    pub fn eps(&self) -> &[i64] {
        &self.eps
    }

    pub fn eps_prime(&self) -> &[i64] {
        &self.eps_prime
    }

    pub fn reduce(&self) -> QuadForm {
        let bits = |v: &[i64]| -> Vec<u8> { v.iter().map(|x| x.rem_euclid(2) as u8).collect() };
        QuadForm::from_bits(&bits(&self.eps), &bits(&self.eps_prime))
            .expect("reduction of a valid characteristic")
    }

    /// Parity `ε·ε′ mod 2` of the function `z ↦ θ[ε; ε′](z, τ)`.
    pub fn arf(&self) -> u8 {
        self.reduce().arf()
    }

    pub fn is_odd(&self) -> bool {
        self.arf() == 1
    }

    /// `[ε; ε′] + (λ, μ) = [ε + μ; ε′ + λ]` for an integer half-period `(λ, μ)`.
    pub fn shift(&self, lambda: &[i64], mu: &[i64]) -> Result<Self> {
        let g = self.genus();
        if lambda.len() != g || mu.len() != g {
            return Err(Error::GenusMismatch {
                left: g,
                right: lambda.len().max(mu.len()),
            });
        }
        Ok(Self {
            eps: self.eps.iter().zip(mu).map(|(a, b)| a + b).collect(),
            eps_prime: self
                .eps_prime
                .iter()
                .zip(lambda)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// `[ε + 2m; ε′ + 2n]`.
    pub fn translate_even(&self, m: &[i64], n: &[i64]) -> Result<Self> {
        let twice: Vec<i64> = m.iter().map(|x| 2 * x).collect();
        let twice_n: Vec<i64> = n.iter().map(|x| 2 * x).collect();
        self.shift(&twice_n, &twice)
    }
}

impl fmt::Display for IntCharacteristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[i64]| v.iter().map(i64::to_string).collect::<Vec<_>>().join(" ");
        write!(f, "[{}; {}]", join(&self.eps), join(&self.eps_prime))
    }
}

impl fmt::Debug for IntCharacteristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for IntCharacteristic {
    type Err = Error;

    /// `[e1 e2 ..; e1' e2' ..]` with arbitrary integers.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("expected [..; ..], got {s:?}")))?;
        let (a, b) = inner
            .split_once(';')
            .ok_or_else(|| Error::Parse(format!("missing ';' in {s:?}")))?;
        let nums = |t: &str| -> Result<Vec<i64>> {
            t.split(|c: char| c.is_whitespace() || c == ',')
                .filter(|x| !x.is_empty())
                .map(|x| {
                    x.parse()
                        .map_err(|_| Error::Parse(format!("bad integer {x:?}")))
                })
                .collect()
        };
        Self::new(nums(a)?, nums(b)?)
    }
}
