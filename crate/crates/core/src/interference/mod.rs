//! PSD-based and demodulator-aware estimates of inter-user interference.

mod montecarlo;
mod psd;
mod table;

pub(crate) use montecarlo::{draw_tau, tau_span, Placement};
pub use montecarlo::{
    mc_injected_power, mc_interference_table, mc_interference_table_with, McTableOptions, DEFAULT_TABLE_SYMBOLS,
};
pub use psd::{phydyas_response, psd_cpofdm, psd_phydyas, psd_table, PsdModel};
pub use table::{gaussian_approx, total_injected, GaussianApprox, InterferenceTable, TableLabel};
