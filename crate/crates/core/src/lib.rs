//! Energy-dependent delta-shell pseudopotentials for arbitrary partial waves.
//!
//! The crate is organised bottom-up:
//!
//! * [`specfun`]: gamma, spherical Bessel and confluent hypergeometric kernels.
//! * [`freescatter`]: phase shifts, the energy-dependent scattering length and its
//!   continuation to negative energy for a spherical step well.
//! * [`trapsolver`]: the trapped-pair spectrum of the pseudopotential, both at fixed
//!   and at self-consistent scattering length, plus wave functions and diagnostics.
//! * [`exactref`]: exact step-well-plus-trap spectra by Kummer matching and by a
//!   Numerov shooting solver.
//! * [`cli`]: the command-line front end used to regenerate figure data.
//!
//! Units throughout: reduced mass and ħ equal one, lengths in oscillator lengths
//! `z0 = sqrt(ħ/μω)` and energies in `ħω`.

// `!(x < y)` is used on purpose so that NaN falls into the rejecting branch
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod exactref;
pub mod freescatter;
pub mod quad;
pub mod roots;
pub mod specfun;
pub mod trapsolver;

pub use error::{Error, Result};
pub use freescatter::{ProjectivePair, ScatteringPoint, StepWell};
pub use trapsolver::{SelfConsistentLevel, TrapLevel, WaveFunctionSample};
