//! Numerical verification of the Riemann-Jacobi formula and Weber's formula in genus 3.

pub mod formula;
pub mod frame;
pub mod jacobi;
pub mod table;

pub use formula::{
    basis_for, determinant_quotient, weber_eval, weber_eval_with_basis, weber_sign, weber_verify,
    WeberRecord, WeberResult,
};
pub use frame::{det3, det_rows, BitangentFrame};
pub use jacobi::{
    iota, iota_eval, jacobi_check, jacobi_eval, s_value, transport_exponent, transported_sign,
    IotaResult, JacobiCheckResult, JacobiRecord,
};
pub use table::{random_valid_tau, validate_tau, ThetaTable, DEFAULT_NULL_THRESHOLD};
