//! The quotient `S([P], τ)` of a fundamental system and the sign `ι`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::table::ThetaTable;
use crate::chars::{find_sigma, n0, partner_system, FundamentalSystem, WeberFamily};
use crate::error::{Error, Result};
use crate::theta::{lift_sp, IntCharacteristic};

/// `S([P], τ)` with the nearest sign and its distance from it.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobiCheckResult {
    pub system: FundamentalSystem,
    pub s_value: Complex64,
    pub sign: i8,
    pub residual: f64,
}

/// JSON layout of a [`JacobiCheckResult`].
#[derive(Clone, Debug, Serialize)]
pub struct JacobiRecord {
    pub system: Vec<String>,
    pub s_re: f64,
    pub s_im: f64,
    pub sign: i8,
    pub residual: f64,
}

impl From<&JacobiCheckResult> for JacobiRecord {
    fn from(r: &JacobiCheckResult) -> Self {
        Self {
            system: r.system.forms().iter().map(|q| q.to_string()).collect(),
            s_re: r.s_value.re,
            s_im: r.s_value.im,
            sign: r.sign,
            residual: r.residual,
        }
    }
}

fn nearest_sign(z: Complex64) -> (i8, f64) {
    let sign: i8 = if z.re >= 0.0 { 1 } else { -1 };
    (sign, (z - f64::from(sign)).norm())
}

/// `π^{-g} det(∇θ[p_1], …, ∇θ[p_g]) / ∏_{i > g} θ[p_i]` with `{0, 1}` lifts.
pub fn s_value(p: &FundamentalSystem, table: &ThetaTable) -> Result<Complex64> {
    let g = p.genus();
    if g != table.genus() {
        return Err(Error::GenusMismatch {
            left: g,
            right: table.genus(),
        });
    }
    let mut m = DMatrix::zeros(g, g);
    for (j, q) in p.odd_part().iter().enumerate() {
        for (i, v) in table.grad(q)?.iter().enumerate() {
            m[(i, j)] = *v;
        }
    }
    let jac = m.determinant() / PI.powi(g as i32);
    let mut den = Complex64::new(1.0, 0.0);
    for q in p.even_part() {
        den *= table.null(q)?;
    }
    Ok(jac / den)
}

/// Evaluates `S([P], τ)` without judging the residual.
pub fn jacobi_eval(p: &FundamentalSystem, table: &ThetaTable) -> Result<JacobiCheckResult> {
    let s = s_value(p, table)?;
    let (sign, residual) = nearest_sign(s);
    Ok(JacobiCheckResult {
        system: p.clone(),
        s_value: s,
        sign,
        residual,
    })
}

/// `S([P], τ) = ±1` to within `tol`.
pub fn jacobi_check(
    p: &FundamentalSystem,
    table: &ThetaTable,
    tol: f64,
) -> Result<JacobiCheckResult> {
    let r = jacobi_eval(p, table)?;
    if !(r.residual < tol) {
        return Err(Error::Verification(format!(
            "S({}) = {} is {:e} away from {}",
            forms_label(p),
            r.s_value,
            r.residual,
            r.sign
        )));
    }
    Ok(r)
}

fn forms_label(p: &FundamentalSystem) -> String {
    p.forms()
        .iter()
        .map(|q| format!("{q:?}"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// `ι = ∏_{i=0}^{3} S([P_i], τ) / S([P′_i], τ)` with its nearest sign.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IotaResult {
    pub value: Complex64,
    pub sign: i8,
    pub residual: f64,
}

pub fn iota_eval(family: &WeberFamily, table: &ThetaTable) -> Result<IotaResult> {
    let mut value = Complex64::new(1.0, 0.0);
    for (p, pp) in family.numerator.iter().zip(&family.denominator) {
        value *= s_value(p, table)? / s_value(pp, table)?;
    }
    let (sign, residual) = nearest_sign(value);
    Ok(IotaResult {
        value,
        sign,
        residual,
    })
}

pub fn iota(family: &WeberFamily, table: &ThetaTable, tol: f64) -> Result<IotaResult> {
    let r = iota_eval(family, table)?;
    if !(r.residual < tol) {
        return Err(Error::Verification(format!(
            "iota = {} is {:e} away from {}",
            r.value, r.residual, r.sign
        )));
    }
    Ok(r)
}

/// `8φ_{[n′]}(σ) − 8φ_{[n]}(σ)` for `σ` an integer lift of the map `N₀ → P₀`, where `n` and
/// `n′` are the last members of `N₀` and of its partner.
pub fn transport_exponent(p0: &FundamentalSystem) -> Result<i128> {
    let base = n0();
    let sigma = lift_sp(&find_sigma(&base, p0)?)?;
    let n8 = IntCharacteristic::canonical(&base.last());
    let n8p = IntCharacteristic::canonical(&partner_system(&base)?.last());
    Ok(sigma.phi_times_eight(&n8p)? - sigma.phi_times_eight(&n8)?)
}

/// `ι(P₀)` predicted from `ι(N₀) = 1` by the parity of [`transport_exponent`].
pub fn transported_sign(p0: &FundamentalSystem) -> Result<i8> {
    Ok(if transport_exponent(p0)?.rem_euclid(2) == 0 {
        1
    } else {
        -1
    })
}
