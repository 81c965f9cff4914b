//! Coefficient vectors of the 28 bitangents, read off from theta gradients.

use nalgebra::{DMatrix, Matrix3, RowVector3};
use num_complex::Complex64;

use super::table::ThetaTable;
use crate::chars::QuadForm;
use crate::error::{Error, Result};
use crate::theta::RiemannMatrix;

/// Gradients below this norm are treated as zero.
const ZERO_GRADIENT: f64 = 1e-12;

/// `β[q] = ∇θ[q](0, τ)·Ω₁⁻¹` for every odd `q`, each up to its own nonzero scale.
#[derive(Clone, Debug)]
pub struct BitangentFrame {
    tau: RiemannMatrix,
    omega1: Matrix3<Complex64>,
    beta: Vec<Option<RowVector3<Complex64>>>,
}

impl BitangentFrame {
    /// The frame with `Ω₁ = 1`.
    pub fn new(table: &ThetaTable) -> Result<Self> {
        Self::with_omega1(table, &Matrix3::identity())
    }

    pub fn with_omega1(table: &ThetaTable, omega1: &Matrix3<Complex64>) -> Result<Self> {
        if table.genus() != 3 {
            return Err(Error::UnsupportedGenus {
                genus: table.genus(),
                reason: "bitangent frames exist in genus 3",
            });
        }
        let inv = omega1
            .try_inverse()
            .filter(|m| m.iter().all(|z| z.re.is_finite() && z.im.is_finite()))
            .ok_or_else(|| Error::Precondition("omega1 is singular".into()))?;
        let mut beta = vec![None; 64];
        for q in QuadForm::all_odd(3) {
            let grad = table.grad(&q)?;
            let row = RowVector3::new(grad[0], grad[1], grad[2]);
            if row.norm() < ZERO_GRADIENT {
                return Err(Error::Verification(format!(
                    "gradient of theta[{q}] vanishes at z = 0"
                )));
            }
            beta[q.index()] = Some(row * inv);
        }
        Ok(Self {
            tau: table.tau().clone(),
            omega1: *omega1,
            beta,
        })
    }

    pub fn tau(&self) -> &RiemannMatrix {
        &self.tau
    }

    pub fn omega1(&self) -> &Matrix3<Complex64> {
        &self.omega1
    }

    pub fn beta(&self, q: &QuadForm) -> Result<RowVector3<Complex64>> {
        if q.genus() != 3 {
            return Err(Error::GenusMismatch {
                left: q.genus(),
                right: 3,
            });
        }
        self.beta[q.index()].ok_or(Error::WrongParity(*q))
    }

    /// Multiplies `β[q]` by a nonzero constant.
    pub fn rescale(&mut self, q: &QuadForm, factor: Complex64) -> Result<()> {
        if factor.norm() == 0.0 || !factor.re.is_finite() || !factor.im.is_finite() {
            return Err(Error::Precondition(
                "scale factor must be finite and nonzero".into(),
            ));
        }
        let b = self.beta(q)?;
        self.beta[q.index()] = Some(b * factor);
        Ok(())
    }

    /// The coefficient matrix with rows `β[q]` for the given forms.
    pub fn rows(&self, forms: &[QuadForm]) -> Result<DMatrix<Complex64>> {
        let mut m = DMatrix::zeros(forms.len(), 3);
        for (i, q) in forms.iter().enumerate() {
            m.row_mut(i).copy_from(&self.beta(q)?);
        }
        Ok(m)
    }
}

/// `det` of three coefficient rows; exactly zero when two rows coincide.
pub fn det_rows(
    a: &RowVector3<Complex64>,
    b: &RowVector3<Complex64>,
    c: &RowVector3<Complex64>,
) -> Complex64 {
    if a == b || a == c || b == c {
        return Complex64::new(0.0, 0.0);
    }
    Matrix3::from_rows(&[*a, *b, *c]).determinant()
}

/// `[β_a, β_b, β_c]` for three distinct odd forms.
pub fn det3(frame: &BitangentFrame, a: &QuadForm, b: &QuadForm, c: &QuadForm) -> Result<Complex64> {
    if a == b || a == c {
        return Err(Error::Repeated(*a));
    }
    if b == c {
        return Err(Error::Repeated(*b));
    }
    Ok(det_rows(&frame.beta(a)?, &frame.beta(b)?, &frame.beta(c)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theta::{jacobian_nullwert, IntCharacteristic, ThetaEvalConfig};
    use crate::weber::table::random_valid_tau;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn q(s: &str) -> QuadForm {
        s.parse().unwrap()
    }

    fn setup() -> (ThetaTable, BitangentFrame) {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let (_, table) = random_valid_tau(&mut rng, &ThetaEvalConfig::default()).unwrap();
        let frame = BitangentFrame::new(&table).unwrap();
        (table, frame)
    }

    #[test]
    fn identity_omega_gives_gradients() {
        let (table, frame) = setup();
        for f in QuadForm::all_odd(3) {
            let g = table.grad(&f).unwrap();
            let b = frame.beta(&f).unwrap();
            assert!((0..3).all(|i| b[i] == g[i]));
            assert!(b.norm() > 0.0);
        }
        assert!(frame.beta(&QuadForm::zero(3)).is_err());
    }

    #[test]
    fn det3_properties() {
        let (table, frame) = setup();
        let (a, b, c) = (q("100/100"), q("010/110"), q("001/111"));
        let d = det3(&frame, &a, &b, &c).unwrap();
        assert!((det3(&frame, &b, &a, &c).unwrap() + d).norm() < 1e-12 * d.norm());
        assert!(matches!(det3(&frame, &a, &a, &c), Err(Error::Repeated(_))));
        assert!(matches!(
            det3(&frame, &a, &b, &QuadForm::zero(3)),
            Err(Error::WrongParity(_))
        ));
        let ba = frame.beta(&a).unwrap();
        assert_eq!(
            det_rows(&ba, &ba, &frame.beta(&c).unwrap()),
            Complex64::new(0.0, 0.0)
        );
        let lifts: Vec<_> = [a, b, c].iter().map(IntCharacteristic::canonical).collect();
        // The columns of the gradient matrix are the rows of the frame; det is transpose-invariant.
        let j = jacobian_nullwert(&lifts, table.tau(), table.config()).unwrap();
        assert!((d - j * PI.powi(3)).norm() < 1e-10 * d.norm());
    }

    #[test]
    fn singular_omega_rejected() {
        let (table, _) = setup();
        assert!(BitangentFrame::with_omega1(&table, &Matrix3::zeros()).is_err());
    }

    #[test]
    fn rescale_multiplies_one_row() {
        let (_, mut frame) = setup();
        let f = q("100/100");
        let before = frame.beta(&f).unwrap();
        frame.rescale(&f, Complex64::new(0.0, 2.0)).unwrap();
        assert_eq!(frame.beta(&f).unwrap(), before * Complex64::new(0.0, 2.0));
        assert!(frame.rescale(&f, Complex64::new(0.0, 0.0)).is_err());
    }
}
