//! Elliptic ℘ solutions of the 3+1 dimensional isentropic Euler equations.
//!
//! The crate is layered: `elliptic` and `modular` evaluate ℘, its periods and
//! zeros; `flow` holds the system and its characteristic geometry; `families`
//! builds the closed-form profiles and implicit rank-1/rank-3 solutions on top
//! of `solver`; `verify` checks all of it numerically.

pub mod complex;
pub mod elliptic;
pub mod fd;
pub mod modular;
pub mod quad;
pub mod flow;
pub mod solver;
pub mod families;
pub mod verify;

pub use complex::ComplexValue;
pub use elliptic::{periods_from_invariants, CubicRoots, Invariants, KernelError, Lattice, Weierstrass};
pub use families::{rank3_eval, Family, FamilyError, G3Convention, Rank3Config, Table3Params, Table3Profile};
pub use flow::{EntropicTriad, FlowError, FlowState, MediumParams, Vec3};
pub use modular::{wp_zeros_physical, PhysicalZeros, ZeroError, ZeroMethod};
pub use solver::{SolveConfig, SolveResult, SolverError};
pub use verify::{boundedness_scan, pde_residual, GridSpec, ResidualReport, ScanReport, VerifyError};
