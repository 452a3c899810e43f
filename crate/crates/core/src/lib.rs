//! Exact computation of Saito-Kurokawa lifts and of the local Hecke data
//! that characterizes them.
//!
//! The lift chain runs elliptic cusp form → Kohnen plus space → Jacobi form
//! of index one → Siegel cusp form of degree two, entirely on exact Fourier
//! coefficients. On the Siegel side the crate applies Hecke operators built
//! from explicit coset decompositions, extracts eigenvalues, and classifies
//! eigenvalue records through their Satake parameters.

pub mod characterize;
pub mod elliptic;
pub mod error;
pub mod jacobi;
pub mod kohnen;
pub mod numeric;
pub mod pipeline;
pub mod qseries;
pub mod siegel;

pub use error::{Error, Result};
