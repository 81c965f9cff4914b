//! Weber's expression of `(θ[q_S]/θ[q_T])⁴` through 3×3 bitangent determinants.

use num_complex::Complex64;
use serde::Serialize;

use super::frame::{det3, BitangentFrame};
use super::table::ThetaTable;
use crate::chars::{aronhold_sets_g3, AronholdBasis, QuadForm};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct WeberResult {
    pub q_s: QuadForm,
    pub q_t: QuadForm,
    pub basis: AronholdBasis,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub sign: i8,
    pub relative_error: f64,
}

/// JSON layout of a [`WeberResult`].
#[derive(Clone, Debug, Serialize)]
pub struct WeberRecord {
    #[serde(rename = "qS")]
    pub q_s: String,
    #[serde(rename = "qT")]
    pub q_t: String,
    pub lhs_re: f64,
    pub lhs_im: f64,
    pub rhs_re: f64,
    pub rhs_im: f64,
    pub sign: i8,
    pub relative_error: f64,
}

impl From<&WeberResult> for WeberRecord {
    fn from(r: &WeberResult) -> Self {
        Self {
            q_s: r.q_s.to_string(),
            q_t: r.q_t.to_string(),
            lhs_re: r.lhs.re,
            lhs_im: r.lhs.im,
            rhs_re: r.rhs.re,
            rhs_im: r.rhs.im,
            sign: r.sign,
            relative_error: r.relative_error,
        }
    }
}

fn check_pair(q_s: &QuadForm, q_t: &QuadForm) -> Result<()> {
    for q in [q_s, q_t] {
        if q.genus() != 3 {
            return Err(Error::UnsupportedGenus {
                genus: q.genus(),
                reason: "Weber's formula is a genus-3 identity",
            });
        }
        if !q.is_even() {
            return Err(Error::WrongParity(*q));
        }
    }
    if q_s == q_t {
        return Err(Error::Repeated(*q_s));
    }
    Ok(())
}

/// `(-1)^{a(q₀ + q_S + q_T)}` with `q₀ = [0; 0]`.
pub fn weber_sign(q_s: &QuadForm, q_t: &QuadForm) -> Result<i8> {
    check_pair(q_s, q_t)?;
    let q = QuadForm::sum3(&QuadForm::zero(3), q_s, q_t)?;
    Ok(if q.is_odd() { -1 } else { 1 })
}

/// The first enumerated Aronhold basis with sum `q_S`, ordered so that `q_1 + q_2 + q_3 = q_T`.
pub fn basis_for(q_s: &QuadForm, q_t: &QuadForm) -> Result<AronholdBasis> {
    check_pair(q_s, q_t)?;
    aronhold_sets_g3()
        .iter()
        .filter(|s| s.sum() == *q_s)
        .find_map(|s| s.ordered_for(q_t))
        .ok_or_else(|| Error::Internal(format!("no Aronhold basis for {q_s} ordered by {q_t}")))
}

/// The determinant quotient
/// `[β1 β2 β3][β1 β12 β13][β12 β2 β23][β13 β23 β3] / [β23 β13 β12][β23 β3 β2][β3 β13 β1][β2 β1 β12]`
/// with `β_ij = β[q_S + q_i + q_j]`, unsigned.
pub fn determinant_quotient(frame: &BitangentFrame, basis: &AronholdBasis) -> Result<Complex64> {
    let b = |i: usize| basis.q(i);
    let bb = |i: usize, j: usize| basis.q_pair(i, j);
    let num = det3(frame, &b(1), &b(2), &b(3))?
        * det3(frame, &b(1), &bb(1, 2), &bb(1, 3))?
        * det3(frame, &bb(1, 2), &b(2), &bb(2, 3))?
        * det3(frame, &bb(1, 3), &bb(2, 3), &b(3))?;
    let den = det3(frame, &bb(2, 3), &bb(1, 3), &bb(1, 2))?
        * det3(frame, &bb(2, 3), &b(3), &b(2))?
        * det3(frame, &b(3), &bb(1, 3), &b(1))?
        * det3(frame, &b(2), &b(1), &bb(1, 2))?;
    Ok(num / den)
}

/// Both sides of Weber's formula for an explicit basis with sum `q_S` and
/// `q_1 + q_2 + q_3 = q_T`. No tolerance is applied.
pub fn weber_eval_with_basis(
    basis: &AronholdBasis,
    frame: &BitangentFrame,
    table: &ThetaTable,
) -> Result<WeberResult> {
    if basis.genus() != 3 {
        return Err(Error::UnsupportedGenus {
            genus: basis.genus(),
            reason: "Weber's formula is a genus-3 identity",
        });
    }
    let q_s = basis.sum();
    let q_t = basis.q_triple(1, 2, 3);
    let sign = weber_sign(&q_s, &q_t)?;
    let lhs = (table.null(&q_s)? / table.null(&q_t)?).powi(4);
    let rhs = determinant_quotient(frame, basis)? * f64::from(sign);
    Ok(WeberResult {
        q_s,
        q_t,
        basis: basis.clone(),
        lhs,
        rhs,
        sign,
        relative_error: (lhs - rhs).norm() / lhs.norm(),
    })
}

pub fn weber_eval(
    q_s: &QuadForm,
    q_t: &QuadForm,
    frame: &BitangentFrame,
    table: &ThetaTable,
) -> Result<WeberResult> {
    weber_eval_with_basis(&basis_for(q_s, q_t)?, frame, table)
}

/// Weber's formula for `(q_S, q_T)`, failing when the relative error reaches `tol`.
pub fn weber_verify(
    q_s: &QuadForm,
    q_t: &QuadForm,
    frame: &BitangentFrame,
    table: &ThetaTable,
    tol: f64,
) -> Result<WeberResult> {
    let r = weber_eval(q_s, q_t, frame, table)?;
    if !(r.relative_error < tol) {
        return Err(Error::Verification(format!(
            "Weber formula for ({q_s}, {q_t}): relative error {:e}",
            r.relative_error
        )));
    }
    Ok(r)
}
