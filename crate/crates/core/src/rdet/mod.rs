//! The cycle-weighted determinant `det_r`, the r-characteristic polynomial
//! `chi_r`, mixed determinants and the identities relating them.

mod chi;
mod derivative;
mod identities;
mod macmahon;
mod mixed;
mod perm;

pub use chi::{chi_r, chi_r_interpolated, chi_r_real};
pub use derivative::{det_r_derivative, MAX_DERIVATIVE_N, MAX_DERIVATIVE_R};
pub(crate) use identities::det_z_minus_a;
pub use identities::{
    defect_k_residual, koteljanskii_residual, multilinearization_residual, pd_det_residual, thompson_residual,
    vere_jones_vanishing, Sides,
};
pub use macmahon::{chi_r_macmahon, det_r_macmahon, MAX_MACMAHON_N};
pub use mixed::mixed_determinant;
pub use perm::{cycle_count, det_r_perm, MAX_PERM_N};

use serde::{Deserialize, Serialize};

/// Which algorithm produced a `det_r` value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RDetMethod {
    PermCycle,
    Derivative,
    Macmahon,
}

impl RDetMethod {
    pub fn name(self) -> &'static str {
        match self {
            RDetMethod::PermCycle => "perm-cycle",
            RDetMethod::Derivative => "derivative",
            RDetMethod::Macmahon => "macmahon",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RDetResult<S> {
    pub value: S,
    pub method: RDetMethod,
    pub r: S,
    pub n: usize,
}
