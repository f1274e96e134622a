//! Solvers for unconstrained set optimization problems whose objective is a
//! finite family of vector-valued functions ordered by a polyhedral cone.
//!
//! The library provides:
//!
//! * [`cone`] — polyhedral cone orders, the Gerstewitz scalarization in
//!   closed form, set order relations and the merit scalar;
//! * [`problem`] — objective families with analytic value/Jacobian/Hessian
//!   oracles, checked against finite differences;
//! * [`instances`] — the built-in test problems `ex5_1` .. `ex5_7`;
//! * [`minimal`] — minimal and weakly minimal elements of finite value sets,
//!   value classes and the partition set;
//! * [`direction`] — the piecewise-quadratic direction subproblem, solved by
//!   a certified dual scheme with a derivative-free cross-check;
//! * [`solver`] — cone-ordered Armijo backtracking, the Newton and
//!   steepest-descent outer loops, descent audits and rate diagnostics;
//! * [`bench`] & [`stats`] — random-restart benchmarking with summary
//!   statistics;
//! * [`report`] — CSV and JSON emission of traces and benchmark tables.
//!
//! Built with the `parallel` feature (default), benchmark starts and
//! independent direction subproblems run on rayon; results are reduced in
//! enumeration order so output is identical to the sequential build.

pub mod bench;
pub mod cone;
pub mod direction;
pub mod instances;
pub mod minimal;
pub mod nelder_mead;
pub mod problem;
pub mod report;
pub mod solver;
pub mod stats;

pub use bench::{bench, bench_serial, Algorithm, BenchOutput, BenchStats};
pub use cone::{Cone, ConeError};
pub use direction::{DirectionError, DirectionOutcome, InnerOpts, QuadraticPiece};
pub use instances::{list_examples, make_example, ExampleOverrides};
pub use minimal::{decompose, minimal_indices, weakly_minimal_indices, MinimalDecomposition, MinimalError};
pub use problem::{FdReport, ProblemError, ProblemInstance};
pub use solver::{
    armijo_step, convergence_order, descent_audit, solve_newton, solve_sd, AuditReport,
    IterateRecord, RunRecord, SolveStatus, SolverConfig,
};
pub use stats::{summarize, Summary};
