//! Exact combinatorics of theta characteristics modulo 2.

pub mod aronhold;
pub mod bits;
pub mod form;
pub mod fundamental;
pub mod symplectic;

pub use aronhold::{
    aronhold_conjugate, aronhold_sets_g3, enumerate_aronhold_sets, is_aronhold, is_azygetic,
    load_aronhold_cache, load_or_enumerate, save_aronhold_cache, AronholdBasis,
};
pub use bits::{pairing, BitMatrix, F2Vector, MAX_GENUS};
pub use form::{
    add_vector, arf, arf_sum3, diff_forms, eval_at_formsum, evaluate_form, sum3, QuadForm,
};
pub use fundamental::{
    aronhold_to_fundamental, find_sigma, is_fundamental, n0, partner_system, shift_system,
    weber_systems, FundamentalSystem, WeberFamily,
};
pub use symplectic::{act_f2, act_f2_vec, is_symplectic_f2, SymplecticMapF2};

/// Numbers of even and odd forms in genus `g`: `2^{g-1}(2^g + 1)` and `2^{g-1}(2^g - 1)`.
pub fn parity_counts(g: usize) -> (usize, usize) {
    let half = 1usize << (g - 1);
    (half * ((1 << g) + 1), half * ((1 << g) - 1))
}
