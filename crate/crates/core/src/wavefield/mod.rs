//! Random wave fields: the amplitude table, the controlling processes
//! `u_n^M`, `y_n^M`, `U_N^M`, the shared force coefficients and spectrum
//! diagnostics.

mod diagnostics;
mod pairing;
mod realization;
mod spectrum;
pub mod trigsum;

pub use diagnostics::{diagnostics, overlap_pair, SpectrumDiagnostics};
pub use pairing::{fourier_coefficients, pairing, pairing_with};
pub use realization::{exp_integral, Control, ControlPath, ControlSampler, FieldRealization, ForceSampler};
pub use spectrum::{PathGrid, SigmaScheme, SpectrumConfig, DEFAULT_MODE_CAP};
