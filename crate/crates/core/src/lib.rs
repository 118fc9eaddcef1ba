//! Kernels, limit laws and samplers for fermionic block-projection point processes.
//!
//! `N` free fermions in a harmonic trap occupying a set of oscillator levels `J`
//! form a determinantal point process with the projection kernel
//! `K_J(x, y) = Σ_{k∈J} ψ_k(x) ψ_k(y)`. When `J` is a union of blocks of the form
//! `[a²M, (a+w)²M)`, the bulk scaling limit of the process is governed by
//! `sinc × cos` kernels whose correlations converge weakly, as the block offsets
//! grow, to α-determinantal correlations with `α = -1/m`.
//!
//! The crate is `no_std` (it needs `alloc`) and is organised bottom-up:
//!
//! * [`numerics`]: adaptive Gauss–Legendre quadrature, Airy functions, small dense
//!   linear algebra.
//! * [`fermion`]: Hermite wavefunctions, level sets and the finite-`M` kernels.
//! * [`asymptotics`]: closed-form `M → ∞` densities and limit kernels.
//! * [`alpha_det`]: α-determinants (enumeration and cycle DP) and α-correlations.
//! * [`statistics`]: correlation functions, structure factor, number variance and
//!   weak-convergence diagnostics.
//! * [`sampler`]: exact sequential sampling of projection processes on the line
//!   and circle, superpositions, the power map and empirical estimators.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod alpha_det;
pub mod asymptotics;
mod error;
pub mod fermion;
pub mod numerics;
pub mod sampler;
pub mod statistics;

pub use error::{Error, Result};
