//! Packed bit vectors and small matrices over F2.

use std::fmt;

use crate::error::{Error, Result};

/// Largest genus supported by the packed representation (2g bits must fit a `u32`).
pub const MAX_GENUS: usize = 16;

pub(crate) fn check_genus(g: usize) -> Result<()> {
    if g == 0 || g > MAX_GENUS {
        return Err(Error::UnsupportedGenus {
            genus: g,
            reason: "genus must lie in 1..=16",
        });
    }
    Ok(())
}

pub(crate) fn same_genus(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::GenusMismatch { left: a, right: b });
    }
    Ok(())
}

#[inline]
pub(crate) fn mask(g: usize) -> u32 {
    if g >= 32 {
        u32::MAX
    } else {
        (1u32 << g) - 1
    }
}

#[inline]
pub(crate) fn dot(x: u32, y: u32) -> u8 {
    ((x & y).count_ones() & 1) as u8
}

/// A vector `w = (λ, μ)` of F2^{2g} in the fixed symplectic basis `(e_1..e_g, f_1..f_g)`.
///
/// Bit `i` of `lambda` is the coefficient of `e_{i+1}`, bit `i` of `mu` that of `f_{i+1}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct F2Vector {
    g: usize,
    lambda: u32,
    mu: u32,
}

impl F2Vector {
    pub fn new(g: usize, lambda: u32, mu: u32) -> Result<Self> {
        check_genus(g)?;
        if lambda & !mask(g) != 0 || mu & !mask(g) != 0 {
            return Err(Error::Precondition(format!("coordinates exceed {g} bits")));
        }
        Ok(Self { g, lambda, mu })
    }

    pub(crate) fn new_unchecked(g: usize, lambda: u32, mu: u32) -> Self {
        debug_assert!(lambda & !mask(g) == 0 && mu & !mask(g) == 0);
        Self { g, lambda, mu }
    }

    pub fn from_bits(g: usize, lambda: &[u8], mu: &[u8]) -> Result<Self> {
        if lambda.len() != g || mu.len() != g {
            return Err(Error::Precondition(format!(
                "expected {g} coordinates in each half"
            )));
        }
        Self::new(g, pack(lambda)?, pack(mu)?)
    }

    pub fn zero(g: usize) -> Self {
        Self {
            g,
            lambda: 0,
            mu: 0,
        }
    }

    /// The basis vector `e_i`, 1-based.
    pub fn e(g: usize, i: usize) -> Self {
        assert!((1..=g).contains(&i));
        Self::new_unchecked(g, 1 << (i - 1), 0)
    }

    /// The basis vector `f_i`, 1-based.
    pub fn f(g: usize, i: usize) -> Self {
        assert!((1..=g).contains(&i));
        Self::new_unchecked(g, 0, 1 << (i - 1))
    }

    /// All `2^{2g}` vectors ordered by packed index.
    pub fn all(g: usize) -> impl Iterator<Item = F2Vector> {
        (0u64..1u64 << (2 * g)).map(move |x| Self::from_packed(g, x))
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn lambda(&self) -> u32 {
        self.lambda
    }

    pub fn mu(&self) -> u32 {
        self.mu
    }

    pub fn is_zero(&self) -> bool {
        self.lambda == 0 && self.mu == 0
    }

    /// `λ` in the low `g` bits, `μ` in the next `g`.
    pub fn packed(&self) -> u64 {
        self.lambda as u64 | (self.mu as u64) << self.g
    }

    pub fn from_packed(g: usize, x: u64) -> Self {
        let m = mask(g) as u64;
        Self::new_unchecked(g, (x & m) as u32, ((x >> g) & m) as u32)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        same_genus(self.g, other.g)?;
        Ok(Self::new_unchecked(
            self.g,
            self.lambda ^ other.lambda,
            self.mu ^ other.mu,
        ))
    }

    /// The standard symplectic pairing `λ_u·μ_v + μ_u·λ_v`.
    pub fn pairing(&self, other: &Self) -> Result<u8> {
        same_genus(self.g, other.g)?;
        Ok(self.pairing_unchecked(other))
    }

    #[inline]
    pub(crate) fn pairing_unchecked(&self, other: &Self) -> u8 {
        dot(self.lambda, other.mu) ^ dot(self.mu, other.lambda)
    }
}

pub fn pairing(u: &F2Vector, v: &F2Vector) -> Result<u8> {
    u.pairing(v)
}

impl fmt::Debug for F2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {})",
            bit_string(self.lambda, self.g),
            bit_string(self.mu, self.g)
        )
    }
}

pub(crate) fn bit_string(x: u32, g: usize) -> String {
    (0..g)
        .map(|i| if x >> i & 1 == 1 { '1' } else { '0' })
        .collect()
}

pub(crate) fn pack(bits: &[u8]) -> Result<u32> {
    let mut x = 0u32;
    for (i, &b) in bits.iter().enumerate() {
        match b {
            0 => {}
            1 => x |= 1 << i,
            _ => return Err(Error::Parse(format!("bit value {b} is not 0 or 1"))),
        }
    }
    Ok(x)
}

/// A dense matrix over F2 with at most 64 columns; row `i` is a bit mask of its columns.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: Vec<u64>,
    cols: usize,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(cols <= 64);
        Self {
            rows: vec![0; rows],
            cols,
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.rows[i] = 1 << i;
        }
        m
    }

    pub fn from_rows(rows: Vec<u64>, cols: usize) -> Self {
        assert!(cols <= 64);
        let m = if cols == 64 {
            u64::MAX
        } else {
            (1u64 << cols) - 1
        };
        assert!(rows.iter().all(|r| r & !m == 0), "row exceeds column count");
        Self { rows, cols }
    }

    /// Builds a matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(columns: &[u64], rows: usize) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, &c) in columns.iter().enumerate() {
            for i in 0..rows {
                if c >> i & 1 == 1 {
                    m.rows[i] |= 1 << j;
                }
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> u64 {
        self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        (self.rows[i] >> j & 1) as u8
    }

    pub fn set(&mut self, i: usize, j: usize, v: u8) {
        if v & 1 == 1 {
            self.rows[i] |= 1 << j;
        } else {
            self.rows[i] &= !(1 << j);
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.nrows());
        for (i, &r) in self.rows.iter().enumerate() {
            for j in 0..self.cols {
                if r >> j & 1 == 1 {
                    t.rows[j] |= 1 << i;
                }
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.nrows());
        let rows = self
            .rows
            .iter()
            .map(|&r| {
                let mut acc = 0u64;
                let mut bits = r;
                while bits != 0 {
                    let k = bits.trailing_zeros() as usize;
                    acc ^= other.rows[k];
                    bits &= bits - 1;
                }
                acc
            })
            .collect();
        Self {
            rows,
            cols: other.cols,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        assert_eq!(self.nrows(), other.nrows());
        Self {
            rows: self
                .rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| a ^ b)
                .collect(),
            cols: self.cols,
        }
    }

    /// Matrix times column vector, both packed.
    pub fn mul_vec(&self, v: u64) -> u64 {
        self.rows.iter().enumerate().fold(0, |acc, (i, &r)| {
            acc | (((r & v).count_ones() as u64) & 1) << i
        })
    }

    /// The diagonal as a packed column vector.
    pub fn diag(&self) -> u64 {
        self.rows
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &r)| acc | (r >> i & 1) << i)
    }

    pub fn is_symmetric(&self) -> bool {
        self.nrows() == self.cols && *self == self.transpose()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.nrows())
    }

    /// Gauss-Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.nrows();
        assert_eq!(n, self.cols);
        let mut a = self.rows.clone();
        let mut inv = Self::identity(n).rows;
        for col in 0..n {
            let pivot = (col..n).find(|&r| a[r] >> col & 1 == 1)?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            for r in 0..n {
                if r != col && a[r] >> col & 1 == 1 {
                    a[r] ^= a[col];
                    inv[r] ^= inv[col];
                }
            }
        }
        Some(Self { rows: inv, cols: n })
    }

    /// Copies `self` into the block of `dst` starting at `(r0, c0)`.
    pub(crate) fn write_block(&self, dst: &mut Self, r0: usize, c0: usize) {
        for (i, &r) in self.rows.iter().enumerate() {
            dst.rows[r0 + i] |= r << c0;
        }
    }

    pub(crate) fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        let m = (1u64 << cols) - 1;
        Self {
            rows: (0..rows).map(|i| (self.rows[r0 + i] >> c0) & m).collect(),
            cols,
        }
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.nrows(), self.cols)?;
        for &r in &self.rows {
            let s: String = (0..self.cols)
                .map(|j| if r >> j & 1 == 1 { '1' } else { '0' })
                .collect();
            writeln!(f, "  {s}")?;
        }
        write!(f, "]")
    }
}
