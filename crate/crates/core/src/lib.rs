//! Time-optimal cooling of Markovian quantum systems with fast unitary control.
//!
//! The full bilinear control system on density matrices is reduced to a
//! control system on the eigenvalue simplex, λ̇ = −L_U λ, where the unitary
//! control U enters through the rate matrix J(U). On top of that reduction
//! the crate provides:
//!
//! - [`quantum`] and [`evolution`]: GKS–Lindblad generator and RK4 solver for
//!   the full system, used as the reference oracle throughout.
//! - [`reduced`]: J(U), induced generators, Haar sampling of achievable
//!   derivatives, reduced trajectories and lifting back to full controls.
//! - [`coolability`]: the common-eigenvector test for asymptotic coolability.
//! - [`majorization`], [`hull`], [`lp`]: majorization orders, Schur-convex
//!   costs, small convex hulls and the optimal-vertex filter.
//! - [`qubit`]: closed-form optimal cooling of rank-one qubit systems.
//! - [`systems`]: the Λ-, V- and spin-spin model systems with their optimal
//!   schedules, bound polytopes and the conjecture harness.

pub mod config;
pub mod coolability;
pub mod error;
pub mod evolution;
pub mod haar;
pub mod hull;
pub mod linalg;
pub mod lp;
pub mod majorization;
pub mod quantum;
pub mod qubit;
pub mod reduced;
pub mod simplex;
pub mod systems;

pub use error::{Error, Result};
pub use linalg::{CMatrix, CVector};
pub use quantum::{DensityMatrix, LindbladSystem};
pub use simplex::{SimplexPoint, TangentVector};
