//! Homogeneous equilibria of incompressible neo-Hookean and Mooney-Rivlin
//! cubes under equitriaxial dead loads, their stability, and the probability
//! distributions of observed states when the material coefficients are
//! random.
//!
//! The crate is organized around the pipeline:
//!
//! * [`constitutive`] — material models, strain energy, principal stresses,
//!   Baker-Ericksen admissibility, coefficient-regime classification;
//! * [`equilibria`] — enumeration of all homogeneous triaxial equilibria at
//!   a given dead load, branch dead-load maps, critical loads;
//! * [`stability`] — local-minimum tests of the reduced load potential plus
//!   closed-form criteria;
//! * [`randvars`] — Gamma/Beta laws for the random shear modulus and
//!   coefficient ratio, with deterministic counter-based sampling ([`rng`]);
//! * [`stochastic`] — analytic state-count probabilities and seeded Monte
//!   Carlo ensembles producing stochastic bifurcation histograms.
//!
//! Monte Carlo ensembles run data-parallel under the `parallel` feature
//! (enabled by default); the sequential fallback produces bit-identical
//! results.

pub mod constitutive;
pub mod equilibria;
mod error;
pub mod randvars;
pub mod rng;
pub mod special;
pub mod stability;
pub mod stochastic;

pub use constitutive::{classify_regime, MaterialModel, Regime, StretchTriple};
pub use equilibria::{
    critical_loads, solve_equilibria, BranchKind, CriticalLoads, Equilibrium,
};
pub use error::{Error, Result};
pub use randvars::{BetaParams, CoefficientMoments, GammaParams, ShiftMode};
pub use rng::RngStream;
pub use stability::{classify_equilibrium, StabilityClass};
pub use stochastic::{
    BifurcationHistogram, CountProbabilities, EnsembleLaw, ObservedState, SelectionPolicy, TauGrid,
};
