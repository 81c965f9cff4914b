//! Truncated lattice sums for `θ[ε; ε′](z, τ)` and its gradient in `z`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::characteristic::IntCharacteristic;
use super::tau::RiemannMatrix;
use crate::error::{Error, Result};

/// Lattice truncation settings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThetaEvalConfig {
    /// Summation box `[-R, R]^g`; `None` picks the smallest radius meeting `target_tail`.
    pub radius: Option<usize>,
    pub target_tail: f64,
    /// Fail instead of warning when an explicit radius is below the required one.
    pub strict: bool,
}

impl Default for ThetaEvalConfig {
    fn default() -> Self {
        Self {
            radius: None,
            target_tail: 1e-16,
            strict: false,
        }
    }
}

impl ThetaEvalConfig {
    pub fn with_radius(radius: usize) -> Self {
        Self {
            radius: Some(radius),
            ..Self::default()
        }
    }

    /// The radius actually used for `tau`.
    pub fn resolve_radius(&self, tau: &RiemannMatrix) -> Result<usize> {
        if !(self.target_tail > 0.0) {
            return Err(Error::Precondition("target tail must be positive".into()));
        }
        let required = required_radius(tau.y_min(), tau.genus(), self.target_tail);
        match self.radius {
            None => Ok(required),
            Some(0) => Err(Error::Precondition("radius must be at least 1".into())),
            Some(r) if r < required => {
                if self.strict {
                    Err(Error::InsufficientRadius {
                        radius: r,
                        required,
                        tail: self.target_tail,
                    })
                } else {
                    log::warn!(
                        "radius {r} is below the {required} needed for tail {:e}",
                        self.target_tail
                    );
                    Ok(r)
                }
            }
            Some(r) => Ok(r),
        }
    }
}

/// Smallest `R ≥ 1` with `exp(-π y_min (R-1)²)·(2R+1)^g < tail`.
pub fn required_radius(y_min: f64, g: usize, tail: f64) -> usize {
    let bound = |r: usize| {
        let r1 = (r - 1) as f64;
        (-PI * y_min * r1 * r1).exp() * ((2 * r + 1) as f64).powi(g as i32)
    };
    let mut r = 1;
    while bound(r) >= tail {
        r += 1;
    }
    r
}

/// Neumaier-compensated complex accumulator.
#[derive(Clone, Copy, Default)]
struct CompensatedSum {
    sum: Complex64,
    comp: Complex64,
}

impl CompensatedSum {
    #[inline]
    fn add(&mut self, x: Complex64) {
        let (s_re, c_re) = two_sum(self.sum.re, x.re);
        let (s_im, c_im) = two_sum(self.sum.im, x.im);
        self.sum = Complex64::new(s_re, s_im);
        self.comp += Complex64::new(c_re, c_im);
    }

    fn value(&self) -> Complex64 {
        self.sum + self.comp
    }
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let c = if a.abs() >= b.abs() {
        (a - s) + b
    } else {
        (b - s) + a
    };
    (s, c)
}

/// Sums the series (and, if asked, its gradient) over `[-R, R]^g` in lexicographic order.
fn lattice_sum(
    q: &IntCharacteristic,
    z: &[Complex64],
    tau: &RiemannMatrix,
    radius: usize,
    with_grad: bool,
) -> (Complex64, Vec<Complex64>) {
    let g = tau.genus();
    let r = radius as i64;
    let t = tau.entries();
    let half_eps: Vec<f64> = q.eps().iter().map(|&e| e as f64 / 2.0).collect();
    let shifted_z: Vec<Complex64> = z
        .iter()
        .zip(q.eps_prime())
        .map(|(zi, &e)| zi + e as f64 / 2.0)
        .collect();
    let mut n = vec![-r; g];
    let mut x = vec![0.0; g];
    let mut value = CompensatedSum::default();
    let mut grad = vec![CompensatedSum::default(); if with_grad { g } else { 0 }];
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    loop {
        for i in 0..g {
            x[i] = n[i] as f64 + half_eps[i];
        }
        let mut quad = Complex64::new(0.0, 0.0);
        for i in 0..g {
            let mut row = t[(i, i)] * x[i];
            for j in i + 1..g {
                row += t[(i, j)] * (2.0 * x[j]);
            }
            quad += row * x[i];
        }
        let mut lin = Complex64::new(0.0, 0.0);
        for i in 0..g {
            lin += shifted_z[i] * x[i];
        }
        let term = (Complex64::new(0.0, PI) * quad + two_pi_i * lin).exp();
        value.add(term);
        for (i, acc) in grad.iter_mut().enumerate() {
            acc.add(two_pi_i * x[i] * term);
        }
        // odometer
        let mut k = 0;
        loop {
            if k == g {
                return (
                    value.value(),
                    grad.iter().map(CompensatedSum::value).collect(),
                );
            }
            if n[k] < r {
                n[k] += 1;
                break;
            }
            n[k] = -r;
            k += 1;
        }
    }
}

fn check_dims(q: &IntCharacteristic, z: &[Complex64], tau: &RiemannMatrix) -> Result<()> {
    let g = tau.genus();
    if q.genus() != g {
        return Err(Error::GenusMismatch {
            left: q.genus(),
            right: g,
        });
    }
    if z.len() != g {
        return Err(Error::GenusMismatch {
            left: z.len(),
            right: g,
        });
    }
    Ok(())
}

/// `θ[q](z, τ) = Σ_n e(½ (n + ε/2) τ ᵗ(n + ε/2) + (n + ε/2) ᵗ(z + ε′/2))`.
pub fn theta(
    q: &IntCharacteristic,
    z: &[Complex64],
    tau: &RiemannMatrix,
    cfg: &ThetaEvalConfig,
) -> Result<Complex64> {
    check_dims(q, z, tau)?;
    let r = cfg.resolve_radius(tau)?;
    Ok(lattice_sum(q, z, tau, r, false).0)
}

/// The Thetanullwert `θ[q](0, τ)` of an even characteristic.
pub fn theta_null(
    q: &IntCharacteristic,
    tau: &RiemannMatrix,
    cfg: &ThetaEvalConfig,
) -> Result<Complex64> {
    if q.is_odd() {
        return Err(Error::WrongParity(q.reduce()));
    }
    theta(q, &vec![Complex64::new(0.0, 0.0); tau.genus()], tau, cfg)
}

/// `θ[q](z, τ)` together with `∂θ[q]/∂z_i`, by term-wise differentiation.
pub fn theta_with_grad(
    q: &IntCharacteristic,
    z: &[Complex64],
    tau: &RiemannMatrix,
    cfg: &ThetaEvalConfig,
) -> Result<(Complex64, Vec<Complex64>)> {
    check_dims(q, z, tau)?;
    let r = cfg.resolve_radius(tau)?;
    Ok(lattice_sum(q, z, tau, r, true))
}

/// The gradient `(∂θ[q]/∂z_i)(0, τ)`; zero up to the tail bound for even `q`.
pub fn theta_grad(
    q: &IntCharacteristic,
    tau: &RiemannMatrix,
    cfg: &ThetaEvalConfig,
) -> Result<Vec<Complex64>> {
    let zero = vec![Complex64::new(0.0, 0.0); tau.genus()];
    Ok(theta_with_grad(q, &zero, tau, cfg)?.1)
}

/// `π^{-g} det(∂θ[q_j]/∂z_i (0, τ))` for `g` odd characteristics.
pub fn jacobian_nullwert(
    qs: &[IntCharacteristic],
    tau: &RiemannMatrix,
    cfg: &ThetaEvalConfig,
) -> Result<Complex64> {
    let g = tau.genus();
    if qs.len() != g {
        return Err(Error::WrongCount {
            expected: g,
            got: qs.len(),
        });
    }
    if let Some(q) = qs.iter().find(|q| !q.is_odd()) {
        return Err(Error::WrongParity(q.reduce()));
    }
    let cols = qs
        .iter()
        .map(|q| theta_grad(q, tau, cfg))
        .collect::<Result<Vec<_>>>()?;
    Ok(scaled_determinant(&cols))
}

/// `π^{-g}` times the determinant of the matrix with the given columns.
pub(crate) fn scaled_determinant(cols: &[Vec<Complex64>]) -> Complex64 {
    let g = cols.len();
    let m = DMatrix::from_fn(g, g, |i, j| cols[j][i]);
    m.determinant() / PI.powi(g as i32)
}
