//! Discrete-time quantum walks with a decaying coin angle.
//!
//! One walker on a line or two interacting walkers on the plane, optional
//! spatial or temporal phase disorder, entanglement and spreading
//! observables, dispersion and transfer-matrix analysis, and a parallel
//! ensemble runner.

pub mod coin;
pub mod ensemble;
pub mod error;
pub mod evolution;
pub mod experiment;
pub mod lattice;
pub mod observables;
pub mod spectral;

pub use coin::{
    coin2, coin2_with_phase, coin4, coin4_with_phase, theta_at, AngleSchedule, CoinSchedule,
    PhaseAngle,
};
pub use ensemble::{run_ensemble, EnsembleSpec, EnsembleSummary};
pub use error::{Error, Result};
pub use evolution::{
    run, run_with_schedule, sample_landscape, DisorderKind, DisorderSpec, Observable,
    PhaseLandscape, WalkRecord, WalkSpec, WalkState,
};
pub use lattice::{Confinement, InitialState, SpinorField1P, TwoParticleField};
pub use observables::{Distribution, Distribution1D, Distribution2D, NegativityMethod};
