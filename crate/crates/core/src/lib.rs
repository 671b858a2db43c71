//! Crack front wave dispersion relations for a dynamically propagating
//! crack: in-plane Mode-I waves, out-of-plane corrugation waves, and the
//! coupled in-plane/out-of-plane system under mixed Mode I–III loading.
//!
//! The crate is organised bottom-up:
//!
//! * [`elastodyn`] closed-form functions of crack speed and material;
//! * [`kernels`] providers of the Fourier symbols `Q̄ᵢⱼ(ω, k₂)`;
//! * [`dispersion`] the dispersion functions assembled from both;
//! * [`rootfind`] complex Newton iteration, grid scans and winding counts;
//! * [`survey`] level-curve grids, attenuation sweeps and critical speeds;
//! * [`frontsynth`] modal synthesis of the perturbed front motion;
//! * [`output`] the CSV/JSON formats written by the command-line driver.
//!
//! Time dependence is `e^{i(k₂x₂ − ωt)}` throughout, so `Im ω < 0`
//! (equivalently `Im η < 0`) is a wave that decays in time.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dispersion;
pub mod elastodyn;
pub mod error;
pub mod frontsynth;
pub mod kernels;
pub mod output;
pub mod rootfind;
pub mod survey;

pub use error::{Error, Result};
pub use num_complex::Complex64;
