//! Core algorithms for zero-shot object-goal navigation on a grid world.
//!
//! The crate is organized around the pipeline an episode flows through:
//!
//! * [`embed`] — word-embedding table and cosine semantic similarity,
//! * [`sim`] — deterministic grid simulator: scenes, the six-action agent,
//!   ground-truth detections, reward, and a shortest-path oracle,
//! * [`encoder`] — the class-independent 20x5 state matrix built from
//!   detections ranked by similarity to the navigation target,
//! * [`net`] — GCN + LSTM + actor-critic network with analytic backward
//!   pass and a finite-difference gradient checker,
//! * [`a2c`] — n-step returns, the advantage actor-critic loss, gradient
//!   clipping, and the Adam optimizer,
//! * [`eval`] — episode rollouts and SR / SPL metrics,
//! * [`scenario`] — procedural scene generation and train/test splits.
//!
//! Everything here is pure computation over `alloc` types; file formats,
//! the parallel training loop, and the CLI live in the companion crate.
//!
//! The crate is `no_std`-compatible: build with `--no-default-features
//! --features libm` to drop the standard library (alloc is required).

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

#[cfg(not(any(feature = "std", feature = "libm")))]
compile_error!("cirn-core requires either the `std` or the `libm` feature");

pub mod a2c;
pub mod embed;
pub mod encoder;
pub mod eval;
mod math;
pub mod net;
pub mod scenario;
pub mod sim;

pub use embed::{cosine_similarity, EmbeddingTable, TargetSimilarities};
pub use encoder::{encode, StateMatrix};
pub use sim::{Action, AgentPose, Detection, Scene, SceneObject, Simulator, StepResult};
