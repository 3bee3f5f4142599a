//! Random-phase wave fields, particle drift in them, and the statistics used
//! to compare both against their Brownian limits.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod ensembles;
pub mod error;
pub mod oracle;
pub mod quadrature;
pub mod seed;
pub mod stats;
pub mod wavefield;

pub use dynamics::{ParticleState, TrajectoryEnsemble};
pub use ensembles::{AmplitudeLaw, ComplexAmplitude, EnsembleKind, EnsembleSpec, PhaseLaw, SeedKey};
pub use error::{Error, Result};
pub use stats::{StatReport, TestFunction};
pub use wavefield::{FieldRealization, PathGrid, SigmaScheme, SpectrumConfig, SpectrumDiagnostics};
