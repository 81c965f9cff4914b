//! Theta constants of all characteristics at one `τ`, computed once and shared.

use num_complex::Complex64;
use rand::Rng;

use crate::chars::QuadForm;
use crate::error::{Error, Result};
use crate::theta::{theta_grad, theta_null, IntCharacteristic, RiemannMatrix, ThetaEvalConfig};

/// Even theta nulls below this modulus reject a Riemann matrix.
pub const DEFAULT_NULL_THRESHOLD: f64 = 1e-6;

/// Largest genus for which a full table is built (`4^g` characteristics).
pub const MAX_TABLE_GENUS: usize = 5;

/// Thetanullwerte of the even forms and gradients at `z = 0` of the odd forms, all with
/// `{0, 1}` lifts.
#[derive(Clone, Debug)]
pub struct ThetaTable {
    tau: RiemannMatrix,
    cfg: ThetaEvalConfig,
    nulls: Vec<Option<Complex64>>,
    grads: Vec<Option<Vec<Complex64>>>,
}

impl ThetaTable {
    pub fn new(tau: &RiemannMatrix, cfg: &ThetaEvalConfig) -> Result<Self> {
        let g = tau.genus();
        if g > MAX_TABLE_GENUS {
            return Err(Error::UnsupportedGenus {
                genus: g,
                reason: "theta tables are built for genus at most 5",
            });
        }
        let n = 1usize << (2 * g);
        let mut nulls = vec![None; n];
        let mut grads = vec![None; n];
        for q in QuadForm::all(g) {
            let lift = IntCharacteristic::canonical(&q);
            if q.is_even() {
                nulls[q.index()] = Some(theta_null(&lift, tau, cfg)?);
            } else {
                grads[q.index()] = Some(theta_grad(&lift, tau, cfg)?);
            }
        }
        Ok(Self {
            tau: tau.clone(),
            cfg: *cfg,
            nulls,
            grads,
        })
    }

    pub fn tau(&self) -> &RiemannMatrix {
        &self.tau
    }

    pub fn config(&self) -> &ThetaEvalConfig {
        &self.cfg
    }

    pub fn genus(&self) -> usize {
        self.tau.genus()
    }

    fn check(&self, q: &QuadForm) -> Result<()> {
        if q.genus() != self.genus() {
            return Err(Error::GenusMismatch {
                left: q.genus(),
                right: self.genus(),
            });
        }
        Ok(())
    }

    /// `θ[q](0, τ)` for even `q`.
    pub fn null(&self, q: &QuadForm) -> Result<Complex64> {
        self.check(q)?;
        self.nulls[q.index()].ok_or(Error::WrongParity(*q))
    }

    /// `∇θ[q](0, τ)` for odd `q`.
    pub fn grad(&self, q: &QuadForm) -> Result<&[Complex64]> {
        self.check(q)?;
        self.grads[q.index()]
            .as_deref()
            .ok_or(Error::WrongParity(*q))
    }

    /// The even form with the smallest theta null, and that modulus.
    pub fn smallest_null(&self) -> (QuadForm, f64) {
        QuadForm::all_even(self.genus())
            .map(|q| (q, self.nulls[q.index()].map_or(0.0, |z| z.norm())))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("every genus has even forms")
    }

    /// Rejects `τ` when some even theta null has modulus at most `threshold`.
    pub fn validate(&self, threshold: f64) -> Result<()> {
        let (form, modulus) = self.smallest_null();
        if modulus <= threshold {
            return Err(Error::TauRejected { form, modulus });
        }
        Ok(())
    }
}

/// Checks that `τ` has genus 3 and all 36 even theta nulls above `threshold`.
pub fn validate_tau(
    tau: &RiemannMatrix,
    cfg: &ThetaEvalConfig,
    threshold: f64,
) -> Result<ThetaTable> {
    if tau.genus() != 3 {
        return Err(Error::UnsupportedGenus {
            genus: tau.genus(),
            reason: "the verifier works with genus-3 Riemann matrices",
        });
    }
    let table = ThetaTable::new(tau, cfg)?;
    table.validate(threshold)?;
    Ok(table)
}

/// `i·I₃ + 0.1·S` with random complex symmetric `S`, resampled until it validates.
pub fn random_valid_tau<R: Rng + ?Sized>(
    rng: &mut R,
    cfg: &ThetaEvalConfig,
) -> Result<(RiemannMatrix, ThetaTable)> {
    for _ in 0..100 {
        let tau = RiemannMatrix::random_near_identity(3, 0.1, rng);
        match validate_tau(&tau, cfg, DEFAULT_NULL_THRESHOLD) {
            Ok(table) => return Ok((tau, table)),
            Err(Error::TauRejected { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Internal("no valid tau after 100 samples".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn diagonal_tau_is_rejected() {
        let tau = RiemannMatrix::diagonal(&[Complex64::i(); 3]).unwrap();
        match validate_tau(&tau, &Default::default(), DEFAULT_NULL_THRESHOLD) {
            Err(Error::TauRejected { form, modulus }) => {
                assert!(form.is_even());
                assert!(modulus < 1e-15);
                // Some genus-1 slice of the rejected form is odd.
                let odd_slice =
                    (0..3).any(|i| (form.eps() >> i) & (form.eps_prime() >> i) & 1 == 1);
                assert!(odd_slice);
            }
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn random_tau_validates() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let (_, table) = random_valid_tau(&mut rng, &Default::default()).unwrap();
        assert!(table.smallest_null().1 > DEFAULT_NULL_THRESHOLD);
        let q: QuadForm = "100/100".parse().unwrap();
        assert!(table.null(&q).is_err());
        assert_eq!(table.grad(&q).unwrap().len(), 3);
    }

    #[test]
    fn near_decomposable_tau_is_rejected() {
        // τ_t = i·I + t·S tends to the decomposable point i·I as t → 0, where nulls with
        // an odd genus-1 slice vanish linearly in t.
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let (tau, _) = random_valid_tau(&mut rng, &Default::default()).unwrap();
        let t = 1e-6;
        let scaled = DMatrix::from_fn(3, 3, |i, j| {
            let base = if i == j {
                Complex64::i()
            } else {
                Complex64::new(0.0, 0.0)
            };
            base + (tau.get(i, j) - base) * t
        });
        let near = RiemannMatrix::new(scaled).unwrap();
        assert!(matches!(
            validate_tau(&near, &Default::default(), DEFAULT_NULL_THRESHOLD),
            Err(Error::TauRejected { .. })
        ));
    }

    #[test]
    fn wrong_genus_is_refused() {
        let tau = RiemannMatrix::diagonal(&[Complex64::i(); 2]).unwrap();
        assert!(matches!(
            validate_tau(&tau, &Default::default(), DEFAULT_NULL_THRESHOLD),
            Err(Error::UnsupportedGenus { .. })
        ));
    }
}
