//! Density-matrix simulation and optimization kernels for an
//! entanglement-swapping Bell game whose score separates complex from real
//! quantum theory.
//!
//! The crate is layered bottom-up:
//!
//! * linear algebra: [`mat`], [`eigen`], [`scalar`]
//! * states and channels: [`quantum`], [`gates`], [`noise`], [`measure`], [`tomo`]
//! * the game itself: [`game`], [`estimate`], [`constants`]
//! * real-versus-complex machinery: [`embed`], [`seesaw`]
//!
//! `no_std` with `alloc`: all simulation and optimization runs without an OS.
//! File formats, CLI, and threading live in the companion `realgame` crate.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

mod error;

pub mod constants;
pub mod eigen;
pub mod embed;
pub mod estimate;
pub mod game;
pub mod gates;
pub mod mat;
pub mod measure;
pub mod noise;
pub mod quantum;
pub mod scalar;
pub mod seesaw;
pub mod tomo;

pub use error::{Error, Result};
pub use mat::{CMatrix, Matrix, RMatrix};
pub use quantum::{DensityMatrix, Ket};
