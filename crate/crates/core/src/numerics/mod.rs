//! Numerical machinery shared by the analytic solvers and the oracle.

pub mod calculus;
pub mod fit;
pub mod linalg;
pub mod quadrature;
pub mod roots;

pub use calculus::{cumulative_integral, derivative, Cumulative};
pub use fit::polyfit;
pub use linalg::{eigh, eigvalsh, lowest_eigenpairs, Eigen, HermitianMatrix};
pub use quadrature::{integrate_adaptive, legendre_rule, GridMap, Integral, QuadratureGrid};
pub use roots::{find_root_bracketed, ROOT_TOL};
