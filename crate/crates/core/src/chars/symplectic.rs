//! The symplectic group Sp_{2g}(F2) acting on vectors and quadratic forms.

use rand::Rng;

use super::bits::{check_genus, same_genus, BitMatrix, F2Vector};
use super::form::QuadForm;
use crate::error::{Error, Result};

/// A symplectic matrix `[[a, b], [c, d]]` over F2.
///
/// It sends `w = (λ, μ)` to `(aλ + bμ, cλ + dμ)` and a form `q` to the form
/// `σ·q` with `(σ·q)(σw) = q(w)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SymplecticMapF2 {
    g: usize,
    a: BitMatrix,
    b: BitMatrix,
    c: BitMatrix,
    d: BitMatrix,
    full: BitMatrix,
    /// `(c ᵗd)₀` and `(a ᵗb)₀`.
    shift: (u32, u32),
}

/// Checks `ᵗa d + ᵗc b = 1` with `ᵗa c`, `ᵗb d` symmetric, over F2.
pub fn is_symplectic_f2(a: &BitMatrix, b: &BitMatrix, c: &BitMatrix, d: &BitMatrix) -> bool {
    let (at, bt, ct) = (a.transpose(), b.transpose(), c.transpose());
    at.mul(d).add(&ct.mul(b)).is_identity() && at.mul(c).is_symmetric() && bt.mul(d).is_symmetric()
}

impl SymplecticMapF2 {
    pub fn from_blocks(a: BitMatrix, b: BitMatrix, c: BitMatrix, d: BitMatrix) -> Result<Self> {
        let g = a.nrows();
        check_genus(g)?;
        for m in [&a, &b, &c, &d] {
            if m.nrows() != g || m.ncols() != g {
                return Err(Error::Precondition("blocks must be g x g".into()));
            }
        }
        if !is_symplectic_f2(&a, &b, &c, &d) {
            return Err(Error::NotSymplectic);
        }
        Ok(Self::assemble(a, b, c, d))
    }

    fn assemble(a: BitMatrix, b: BitMatrix, c: BitMatrix, d: BitMatrix) -> Self {
        let g = a.nrows();
        let mut full = BitMatrix::zeros(2 * g, 2 * g);
        a.write_block(&mut full, 0, 0);
        b.write_block(&mut full, 0, g);
        c.write_block(&mut full, g, 0);
        d.write_block(&mut full, g, g);
        let shift = (
            c.mul(&d.transpose()).diag() as u32,
            a.mul(&b.transpose()).diag() as u32,
        );
        Self {
            g,
            a,
            b,
            c,
            d,
            full,
            shift,
        }
    }

    /// From the `2g x 2g` matrix acting on packed `(λ | μ)` columns.
    pub fn from_full(full: &BitMatrix) -> Result<Self> {
        let n = full.nrows();
        if !n.is_multiple_of(2) || full.ncols() != n {
            return Err(Error::Precondition("matrix must be 2g x 2g".into()));
        }
        let g = n / 2;
        Self::from_blocks(
            full.block(0, 0, g, g),
            full.block(0, g, g, g),
            full.block(g, 0, g, g),
            full.block(g, g, g, g),
        )
    }

    pub fn identity(g: usize) -> Self {
        let i = BitMatrix::identity(g);
        let z = BitMatrix::zeros(g, g);
        Self::assemble(i.clone(), z.clone(), z, i)
    }

    /// `[[1, s], [0, 1]]` for symmetric `s`.
    pub fn upper(s: &BitMatrix) -> Result<Self> {
        let g = s.nrows();
        Self::from_blocks(
            BitMatrix::identity(g),
            s.clone(),
            BitMatrix::zeros(g, g),
            BitMatrix::identity(g),
        )
    }

    /// `[[1, 0], [s, 1]]` for symmetric `s`.
    pub fn lower(s: &BitMatrix) -> Result<Self> {
        let g = s.nrows();
        Self::from_blocks(
            BitMatrix::identity(g),
            BitMatrix::zeros(g, g),
            s.clone(),
            BitMatrix::identity(g),
        )
    }

    /// `[[m, 0], [0, ᵗm⁻¹]]` for invertible `m`.
    pub fn block_diagonal(m: &BitMatrix) -> Result<Self> {
        let inv = m
            .inverse()
            .ok_or_else(|| Error::Precondition("block is singular".into()))?;
        let g = m.nrows();
        Self::from_blocks(
            m.clone(),
            BitMatrix::zeros(g, g),
            BitMatrix::zeros(g, g),
            inv.transpose(),
        )
    }

    /// A random element, as a product of random upper and lower unipotent generators.
    pub fn random<R: Rng + ?Sized>(g: usize, rng: &mut R) -> Self {
        let mut acc = Self::identity(g);
        for k in 0..4 * g + 4 {
            let s = random_symmetric(g, rng);
            let gen = if k % 2 == 0 {
                Self::upper(&s)
            } else {
                Self::lower(&s)
            }
            .expect("unipotent generators are symplectic");
            acc = acc.compose(&gen);
        }
        acc
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn a(&self) -> &BitMatrix {
        &self.a
    }

    pub fn b(&self) -> &BitMatrix {
        &self.b
    }

    pub fn c(&self) -> &BitMatrix {
        &self.c
    }

    pub fn d(&self) -> &BitMatrix {
        &self.d
    }

    pub fn full(&self) -> &BitMatrix {
        &self.full
    }

    pub fn is_identity(&self) -> bool {
        self.full.is_identity()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.g, other.g);
        let g = self.g;
        let m = self.full.mul(&other.full);
        Self::assemble(
            m.block(0, 0, g, g),
            m.block(0, g, g, g),
            m.block(g, 0, g, g),
            m.block(g, g, g, g),
        )
    }

    pub fn inverse(&self) -> Self {
        Self::assemble(
            self.d.transpose(),
            self.b.transpose(),
            self.c.transpose(),
            self.a.transpose(),
        )
    }

    pub fn act_vec(&self, v: &F2Vector) -> Result<F2Vector> {
        same_genus(self.g, v.genus())?;
        Ok(self.act_vec_unchecked(v))
    }

    pub(crate) fn act_vec_unchecked(&self, v: &F2Vector) -> F2Vector {
        F2Vector::from_packed(self.g, self.full.mul_vec(v.packed()))
    }

    /// `[ν; ν′]` with `ν = dε + cε′ + (c ᵗd)₀`, `ν′ = bε + aε′ + (a ᵗb)₀`.
    pub fn act_form(&self, q: &QuadForm) -> Result<QuadForm> {
        same_genus(self.g, q.genus())?;
        Ok(self.act_form_unchecked(q))
    }

    pub(crate) fn act_form_unchecked(&self, q: &QuadForm) -> QuadForm {
        let (e, ep) = (q.eps() as u64, q.eps_prime() as u64);
        let nu = self.d.mul_vec(e) ^ self.c.mul_vec(ep) ^ self.shift.0 as u64;
        let nu_p = self.b.mul_vec(e) ^ self.a.mul_vec(ep) ^ self.shift.1 as u64;
        QuadForm::new_unchecked(self.g, nu as u32, nu_p as u32)
    }
}

pub fn act_f2(sigma: &SymplecticMapF2, q: &QuadForm) -> Result<QuadForm> {
    sigma.act_form(q)
}

pub fn act_f2_vec(sigma: &SymplecticMapF2, v: &F2Vector) -> Result<F2Vector> {
    sigma.act_vec(v)
}

pub(crate) fn random_symmetric<R: Rng + ?Sized>(g: usize, rng: &mut R) -> BitMatrix {
    let mut s = BitMatrix::zeros(g, g);
    for i in 0..g {
        for j in i..g {
            let bit = rng.gen_range(0..2u8);
            s.set(i, j, bit);
            s.set(j, i, bit);
        }
    }
    s
}

impl std::fmt::Debug for SymplecticMapF2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SymplecticMapF2 {:?}", self.full)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_fixes_everything() {
        let id = SymplecticMapF2::identity(3);
        for q in QuadForm::all(3) {
            assert_eq!(act_f2(&id, &q).unwrap(), q);
        }
        for v in F2Vector::all(3) {
            assert_eq!(act_f2_vec(&id, &v).unwrap(), v);
        }
    }

    #[test]
    fn rejects_non_symplectic() {
        let g = 2;
        let r = SymplecticMapF2::from_blocks(
            BitMatrix::identity(g),
            BitMatrix::identity(g),
            BitMatrix::identity(g),
            BitMatrix::identity(g),
        );
        assert!(matches!(r, Err(Error::NotSymplectic)));
        let asym = BitMatrix::from_rows(vec![0b10, 0b00], 2);
        assert!(SymplecticMapF2::upper(&asym).is_err());
    }

    #[test]
    fn random_maps_preserve_pairing_and_arf() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let s = SymplecticMapF2::random(3, &mut rng);
            assert!(is_symplectic_f2(s.a(), s.b(), s.c(), s.d()));
            let vs: Vec<_> = F2Vector::all(3).collect();
            for q in QuadForm::all(3) {
                let sq = s.act_form(&q).unwrap();
                assert_eq!(sq.arf(), q.arf());
                for v in &vs {
                    let sv = s.act_vec(v).unwrap();
                    // pullback: (σ·q)(σv) = q(v)
                    assert_eq!(sq.evaluate(&sv).unwrap(), q.evaluate(v).unwrap());
                    // σ·(q + v) = σ·q + σ(v)
                    assert_eq!(
                        s.act_form(&q.add_vector(v).unwrap()).unwrap(),
                        sq.add_vector(&sv).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn inverse_and_compose() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let s = SymplecticMapF2::random(3, &mut rng);
            let t = SymplecticMapF2::random(3, &mut rng);
            assert!(s.compose(&s.inverse()).is_identity());
            let st = s.compose(&t);
            for q in QuadForm::all(3) {
                assert_eq!(
                    st.act_form(&q).unwrap(),
                    s.act_form(&t.act_form(&q).unwrap()).unwrap()
                );
            }
        }
    }

    #[test]
    fn from_full_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = SymplecticMapF2::random(4, &mut rng);
        assert_eq!(SymplecticMapF2::from_full(s.full()).unwrap(), s);
        let m = BitMatrix::from_rows(vec![0b011, 0b010, 0b100], 3);
        let bd = SymplecticMapF2::block_diagonal(&m).unwrap();
        assert_eq!(bd.a(), &m);
    }
}
