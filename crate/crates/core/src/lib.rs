//! Online linear regression on ℓ¹-balls against arbitrary bounded sequences.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only the algorithmic
//! pieces: forecasters that follow the online protocol (predict on `x_t`, then
//! observe `y_t`), an offline comparator solver certifying
//! `min_{‖u‖₁ ≤ U} Σ loss_t(u)`, and closed-form evaluators for the regret
//! guarantees those forecasters enjoy.
//!
//! Forecasters:
//!
//! * [`adaptive_eg::AdaptiveEgSquare`]: exponentiated gradient over the `2d`
//!   signed vertices of `B₁(U)` with a self-confident learning rate.
//! * [`leg::Leg`]: the same engine run on Lipschitzified α-losses with
//!   clipped predictions.
//! * [`ewa::Ewa`]: exponentially weighted average of clipped expert forecasts,
//!   used by [`maurey::MaureyForecaster`] and [`scaling::Scaling`].
//! * [`scaling::FullyAdaptive`]: aggregation over a growing dyadic grid of
//!   radii, needing no prior knowledge of `U`, `X`, `Y` or `T`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod math;

pub mod adaptive_eg;
pub mod bounds;
pub mod comparator;
pub mod error;
pub mod ewa;
pub mod forecaster;
pub mod leg;
pub mod lipschitz;
pub mod loss;
pub mod maurey;
pub mod scaling;
pub mod sequences;
pub mod trace;
pub mod types;

pub use error::{Error, ProtocolError, Result};
pub use forecaster::{Forecaster, NullForecaster};
pub use loss::{alpha_loss, clip, square_loss_gradient};
pub use trace::{compute_regret, run_forecaster, RegretTrace};
pub use types::{LossSpec, Round, StreamBounds};
