//! Bound states of one-dimensional quantum mechanics with a minimal length.
//!
//! The deformed algebra `[x, p] = iħ(1 + βp²)` is realised in a momentum
//! representation where `p` ranges over `(−π/(2√β), π/(2√β))` and the
//! kinetic energy is `tan²(√βp)/(2mβ)`. Three potentials are solved in
//! closed form ([`analytic`]) and cross-checked by a Nyström discretisation
//! of the momentum-space Schrödinger equation ([`oracle`]).

pub mod analytic;
pub mod error;
pub mod kinematics;
pub mod numerics;
pub mod oracle;
pub mod potentials;
pub mod state;
pub mod validation;

pub use error::{Error, Result};
pub use kinematics::{
    deformed_kinetic, momentum_domain, Deformation, MomentumDomain, PhysicalParams,
};
pub use potentials::{kernel, Extension, PotentialSpec};
pub use state::{BoundState, GridFunction, Sample, StateLabel, Wavefunction};
