//! Integer symplectic matrices acting on integer characteristics.

use nalgebra::DMatrix;
use num_rational::Ratio;
use rand::Rng;

use super::characteristic::IntCharacteristic;
use crate::chars::{BitMatrix, SymplecticMapF2};
use crate::error::{Error, Result};

type IMat = DMatrix<i64>;

/// `σ = [[a, b], [c, d]] ∈ Sp_{2g}(Z)`: `ᵗa c`, `ᵗb d` symmetric and `ᵗa d - ᵗc b = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticMapZ {
    a: IMat,
    b: IMat,
    c: IMat,
    d: IMat,
}

pub fn is_symplectic_z(a: &IMat, b: &IMat, c: &IMat, d: &IMat) -> bool {
    let g = a.nrows();
    let shapes = [a, b, c, d]
        .iter()
        .all(|m| m.nrows() == g && m.ncols() == g);
    if !shapes {
        return false;
    }
    let ac = a.transpose() * c;
    let bd = b.transpose() * d;
    ac == ac.transpose()
        && bd == bd.transpose()
        && a.transpose() * d - c.transpose() * b == IMat::identity(g, g)
}

fn reduce_mat(m: &IMat) -> BitMatrix {
    let mut out = BitMatrix::zeros(m.nrows(), m.ncols());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out.set(i, j, m[(i, j)].rem_euclid(2) as u8);
        }
    }
    out
}

fn lift_mat(m: &BitMatrix) -> IMat {
    IMat::from_fn(m.nrows(), m.ncols(), |i, j| m.get(i, j) as i64)
}

fn diag(m: &IMat) -> Vec<i64> {
    (0..m.nrows()).map(|i| m[(i, i)]).collect()
}

fn mat_vec(m: &IMat, v: &[i64]) -> Vec<i64> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)] * v[j]).sum())
        .collect()
}

fn dot(u: &[i64], v: &[i64]) -> i128 {
    u.iter().zip(v).map(|(&x, &y)| x as i128 * y as i128).sum()
}

/// `u ᵗm v` for row vectors `u`, `v`.
fn bilinear(u: &[i64], m: &IMat, v: &[i64]) -> i128 {
    (0..m.nrows())
        .map(|i| {
            let row: i128 = (0..m.ncols())
                .map(|j| m[(i, j)] as i128 * v[j] as i128)
                .sum();
            u[i] as i128 * row
        })
        .sum()
}

impl SymplecticMapZ {
    pub fn from_blocks(a: IMat, b: IMat, c: IMat, d: IMat) -> Result<Self> {
        if a.nrows() == 0 || !is_symplectic_z(&a, &b, &c, &d) {
            return Err(Error::NotSymplectic);
        }
        Ok(Self { a, b, c, d })
    }

    pub fn identity(g: usize) -> Self {
        Self {
            a: IMat::identity(g, g),
            b: IMat::zeros(g, g),
            c: IMat::zeros(g, g),
            d: IMat::identity(g, g),
        }
    }

    /// `[[1, s], [0, 1]]`, `s` symmetric.
    pub fn upper(s: IMat) -> Result<Self> {
        let g = s.nrows();
        Self::from_blocks(
            IMat::identity(g, g),
            s,
            IMat::zeros(g, g),
            IMat::identity(g, g),
        )
    }

    /// `[[1, 0], [s, 1]]`, `s` symmetric.
    pub fn lower(s: IMat) -> Result<Self> {
        let g = s.nrows();
        Self::from_blocks(
            IMat::identity(g, g),
            IMat::zeros(g, g),
            s,
            IMat::identity(g, g),
        )
    }

    /// `[[m, 0], [0, ᵗm⁻¹]]` given `m` and its integer inverse.
    fn block_diagonal(m: IMat, m_inv: IMat) -> Result<Self> {
        let g = m.nrows();
        Self::from_blocks(m, IMat::zeros(g, g), IMat::zeros(g, g), m_inv.transpose())
    }

    /// A product of `steps` random unipotent generators with entries in `{-1, 0, 1}`.
    pub fn random<R: Rng + ?Sized>(g: usize, steps: usize, rng: &mut R) -> Self {
        let mut acc = Self::identity(g);
        for k in 0..steps {
            let mut s = IMat::zeros(g, g);
            for i in 0..g {
                for j in i..g {
                    let v = rng.gen_range(-1..=1);
                    s[(i, j)] = v;
                    s[(j, i)] = v;
                }
            }
            let gen = if k % 2 == 0 {
                Self::upper(s)
            } else {
                Self::lower(s)
            }
            .expect("unipotent generators are symplectic");
            acc = acc.compose(&gen);
        }
        acc
    }

    pub fn genus(&self) -> usize {
        self.a.nrows()
    }

    pub fn a(&self) -> &IMat {
        &self.a
    }

    pub fn b(&self) -> &IMat {
        &self.b
    }

    pub fn c(&self) -> &IMat {
        &self.c
    }

    pub fn d(&self) -> &IMat {
        &self.d
    }

    /// `self ∘ other`.
    pub fn compose(&self, o: &Self) -> Self {
        Self {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    pub fn reduce(&self) -> SymplecticMapF2 {
        SymplecticMapF2::from_blocks(
            reduce_mat(&self.a),
            reduce_mat(&self.b),
            reduce_mat(&self.c),
            reduce_mat(&self.d),
        )
        .expect("reduction of an integer symplectic matrix is symplectic")
    }

    /// `σ·[q] = [[d, -c], [-b, a]] (ᵗε, ᵗε′) + ((c ᵗd)₀, (a ᵗb)₀)`.
    pub fn act(&self, q: &IntCharacteristic) -> Result<IntCharacteristic> {
        let g = self.genus();
        if q.genus() != g {
            return Err(Error::GenusMismatch {
                left: q.genus(),
                right: g,
            });
        }
        let shift_top = diag(&(&self.c * self.d.transpose()));
        let shift_bottom = diag(&(&self.a * self.b.transpose()));
        let (de, ce) = (mat_vec(&self.d, q.eps()), mat_vec(&self.c, q.eps_prime()));
        let (be, ae) = (mat_vec(&self.b, q.eps()), mat_vec(&self.a, q.eps_prime()));
        let top = (0..g).map(|i| de[i] - ce[i] + shift_top[i]).collect();
        let bottom = (0..g).map(|i| -be[i] + ae[i] + shift_bottom[i]).collect();
        IntCharacteristic::new(top, bottom)
    }

    /// `8·φ_[q](σ)`, an integer:
    /// `-(ε ᵗb d ᵗε - 2 ε ᵗb c ᵗε′ + ε′ ᵗa c ᵗε′ - 2 ᵗ(a ᵗb)₀ (d ᵗε - c ᵗε′))`.
    pub fn phi_times_eight(&self, q: &IntCharacteristic) -> Result<i128> {
        let g = self.genus();
        if q.genus() != g {
            return Err(Error::GenusMismatch {
                left: q.genus(),
                right: g,
            });
        }
        let (e, ep) = (q.eps(), q.eps_prime());
        let bt = self.b.transpose();
        let at = self.a.transpose();
        let t1 = bilinear(e, &(&bt * &self.d), e);
        let t2 = bilinear(e, &(&bt * &self.c), ep);
        let t3 = bilinear(ep, &(&at * &self.c), ep);
        let shift = diag(&(&self.a * &bt));
        let de = mat_vec(&self.d, e);
        let ce = mat_vec(&self.c, ep);
        let lin: Vec<i64> = de.iter().zip(&ce).map(|(x, y)| x - y).collect();
        let t4 = dot(&shift, &lin);
        Ok(-(t1 - 2 * t2 + t3 - 2 * t4))
    }

    /// `φ_[q](σ)` as an exact rational with denominator dividing 8.
    pub fn phi(&self, q: &IntCharacteristic) -> Result<Ratio<i128>> {
        Ok(Ratio::new(self.phi_times_eight(q)?, 8))
    }
}

pub fn act_z(sigma: &SymplecticMapZ, q: &IntCharacteristic) -> Result<IntCharacteristic> {
    sigma.act(q)
}

pub fn phi(q: &IntCharacteristic, sigma: &SymplecticMapZ) -> Result<Ratio<i128>> {
    sigma.phi(q)
}

/// Row operations `row[target] += row[source]` reducing an invertible F2 matrix to the
/// identity, in the order applied.
fn reduce_to_identity(m: &BitMatrix) -> Option<Vec<(usize, usize)>> {
    let n = m.nrows();
    let mut rows: Vec<u64> = (0..n).map(|i| m.row(i)).collect();
    let mut ops = Vec::new();
    for col in 0..n {
        if rows[col] >> col & 1 == 0 {
            let src = (col + 1..n).find(|&r| rows[r] >> col & 1 == 1)?;
            rows[col] ^= rows[src];
            ops.push((col, src));
        }
        for r in 0..n {
            if r != col && rows[r] >> col & 1 == 1 {
                rows[r] ^= rows[col];
                ops.push((r, col));
            }
        }
    }
    Some(ops)
}

/// An integer lift of an invertible F2 matrix with determinant 1, and its inverse.
fn lift_gl(m: &BitMatrix) -> Result<(IMat, IMat)> {
    let g = m.nrows();
    let ops = reduce_to_identity(m).ok_or_else(|| Error::Internal("block is singular".into()))?;
    // E_k..E_1 m = 1 over F2, so m = E_1..E_k; each E = 1 + e_ts lifts to a unimodular
    // matrix with inverse 1 - e_ts.
    let mut lift = IMat::identity(g, g);
    let mut inv = IMat::identity(g, g);
    for &(t, s) in &ops {
        let mut e = IMat::identity(g, g);
        e[(t, s)] = 1;
        lift *= e;
        let mut e_inv = IMat::identity(g, g);
        e_inv[(t, s)] = -1;
        inv = e_inv * inv;
    }
    Ok((lift, inv))
}

fn symmetric_candidates(g: usize) -> Box<dyn Iterator<Item = BitMatrix>> {
    let pairs: Vec<(usize, usize)> = (0..g).flat_map(|i| (i..g).map(move |j| (i, j))).collect();
    let build = move |bits: u64, pairs: &[(usize, usize)]| {
        let mut s = BitMatrix::zeros(g, g);
        for (k, &(i, j)) in pairs.iter().enumerate() {
            let v = (bits >> k & 1) as u8;
            s.set(i, j, v);
            s.set(j, i, v);
        }
        s
    };
    if pairs.len() <= 16 {
        let mut masks: Vec<u64> = (0..1u64 << pairs.len()).collect();
        masks.sort_by_key(|m| (m.count_ones(), *m));
        Box::new(masks.into_iter().map(move |m| build(m, &pairs)))
    } else {
        // Diagonal choices only.
        let diag_pairs: Vec<(usize, usize)> = (0..g).map(|i| (i, i)).collect();
        Box::new((0..1u64 << g).map(move |m| build(m, &diag_pairs)))
    }
}

/// Lifts `σ̄ ∈ Sp_{2g}(F2)` to `Sp_{2g}(Z)`.
///
/// Over F2, `L(t)·σ̄·L(s)·U(u) = diag(m, ᵗm⁻¹)` for suitable symmetric `s, t, u`, where
/// `U(x) = [[1, x], [0, 1]]` and `L(x) = [[1, 0], [x, 1]]` are involutions. Each factor of
/// `σ̄ = L(t)·diag(m, ᵗm⁻¹)·U(u)·L(s)` is lifted to an integer symplectic matrix and the
/// product is checked before returning.
pub fn lift_sp(sigma: &SymplecticMapF2) -> Result<SymplecticMapZ> {
    let g = sigma.genus();
    let (a, b, c, d) = (sigma.a(), sigma.b(), sigma.c(), sigma.d());
    let (s, a1) = symmetric_candidates(g)
        .find_map(|s| {
            let a1 = a.add(&b.mul(&s));
            a1.inverse().map(|inv| (s, (a1, inv)))
        })
        .ok_or_else(|| Error::Internal("no symmetric s makes a + b s invertible".into()))?;
    let (a1, a1_inv) = a1;
    let c1 = c.add(&d.mul(&s));
    let t = c1.mul(&a1_inv);
    let u = a1_inv.mul(b);
    if !t.is_symmetric() || !u.is_symmetric() {
        return Err(Error::Internal("Bruhat factors are not symmetric".into()));
    }
    let (m, m_inv) = lift_gl(&a1)?;
    let lifted = SymplecticMapZ::lower(lift_mat(&t))?
        .compose(&SymplecticMapZ::block_diagonal(m, m_inv)?)
        .compose(&SymplecticMapZ::upper(lift_mat(&u))?)
        .compose(&SymplecticMapZ::lower(lift_mat(&s))?);
    if !is_symplectic_z(&lifted.a, &lifted.b, &lifted.c, &lifted.d) {
        return Err(Error::Internal("lift is not symplectic over Z".into()));
    }
    if lifted.reduce() != *sigma {
        return Err(Error::Internal("lift does not reduce to the input".into()));
    }
    Ok(lifted)
}
