//! Triple-domain CT metal artifact reduction at desk scale.
//!
//! The crate is organized around the stages of the pipeline:
//!
//! * [`tensor`] — dense f64 tensors with reverse-mode automatic differentiation,
//!   enough to train every learnable component of the model.
//! * [`projection`] — parallel-beam Radon transform, its matched adjoint,
//!   filtered back-projection and metal-trace computation.
//! * [`synthesis`] — phantom generation, metal-mask insertion and polychromatic
//!   beam-hardening simulation producing training/test tuples.
//! * [`baselines`] — classical sinogram-domain corrections (BHC, LI, NMAR).
//! * [`net`] — the unrolled T-stage triple-domain solver (Prior-Net, S-Net,
//!   E-Net with learnable tight frame and threshold network, X-Net).
//! * [`training`] — loss assembly, Adam, learning-rate schedule and the
//!   training loop with resumable checkpoints.
//! * [`evaluation`] — PSNR/SSIM metrics, per-mask-size reports and the
//!   ablation harness.
//! * [`plot`] — deterministic PNG emission for comparison grids and bar charts.

pub mod baselines;
pub mod config;
pub mod dataset;
pub mod error;
pub mod evaluation;
pub mod net;
pub mod plot;
pub mod png;
pub mod projection;
pub mod synthesis;
pub mod tensor;
pub mod training;
pub mod util;

pub use error::{Error, Result};
