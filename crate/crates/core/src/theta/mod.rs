//! Riemann theta functions with integer characteristics and the integer symplectic group.

pub mod characteristic;
pub mod series;
pub mod sp_z;
pub mod tau;

pub use characteristic::IntCharacteristic;
pub use series::{
    jacobian_nullwert, required_radius, theta, theta_grad, theta_null, theta_with_grad,
    ThetaEvalConfig,
};
pub use sp_z::{act_z, is_symplectic_z, lift_sp, phi, SymplecticMapZ};
pub use tau::{RiemannMatrix, TauFile};
