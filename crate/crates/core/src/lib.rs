//! Reduced dynamics of qubits coupled to zero-temperature bosonic reservoirs,
//! and trace-distance (BLP) non-Markovianity measures computed directly from
//! the excited-state amplitude `b(t)`.
//!
//! The pipeline is:
//!
//! 1. describe the reservoir with a [`SpectralModel`] and sample its
//!    correlation function ([`reservoir::correlation`]);
//! 2. obtain the amplitude trajectory `b(t)`, either in closed form for the
//!    resonant Lorentzian or by solving the Volterra equation
//!    ([`amplitude::solve_volterra`]);
//! 3. map `b(t)` onto states, distances, populations and concurrences
//!    ([`dynamics`]);
//! 4. locate extrema and sum the information backflow ([`measure`]).

pub mod amplitude;
pub mod dynamics;
pub mod error;
pub mod export;
pub mod linalg;
pub mod measure;
pub mod reservoir;
pub mod tolerances;

pub use amplitude::{AmplitudeTrajectory, SolverConfig, SolverMethod};
pub use dynamics::{QubitInitialState, ScalarTrajectory, StatePair};
pub use error::{Error, Result};
pub use linalg::{CMatrix, DensityMatrix};
pub use measure::{
    BruteForceResult, ExtremaList, Extremum, MeasureBundle, MeasureOptions, NonMarkovianityReport, TheoremReport,
    VerifyOptions,
};
pub use num_complex::Complex64;
pub use reservoir::{CorrelationSamples, Regime, SpectralModel};
