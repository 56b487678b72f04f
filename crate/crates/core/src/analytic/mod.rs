//! Closed-form solutions of the three bound-state problems.

pub mod coulomb;
pub mod delta;
pub mod double_delta;
pub mod gfunc;
pub mod inverse_x;

pub use coulomb::{
    coulomb_closed_form_energy_check, solve_coulomb, CoulombSolution, EnergyDiscrepancy,
};
pub use delta::{delta_energy_expansion, delta_q, solve_delta, DeltaSolution};
pub use double_delta::{solve_double_delta, DoubleDeltaSolution, DoubleDeltaState};
pub use gfunc::{g_function, g_function_closed, g_function_numeric};
pub use inverse_x::{apply_inverse_x, apply_x};
