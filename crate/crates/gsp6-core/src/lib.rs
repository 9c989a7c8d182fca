//! Exact computations around `GSp6` and its subgroup `H = GL2 x_det GL2 x_det GL2`.
//!
//! The crate is `no_std` (with `alloc`). It covers four areas:
//!
//! * [`weights`] and [`branching`]: dimension formulas, characters and the
//!   restriction of `Sp6` representations to `Sp4 x SL2` and to `H`;
//! * [`tensor`], [`lie`] and [`explicit`]: sparse tensors over the standard
//!   module `<e1,e2,e3,f3,f2,f1>`, Lie and group actions, and the explicit
//!   highest weight vectors together with their torus gradings;
//! * [`levels`], [`sigma`] and [`centralizer`]: congruence level groups
//!   over `Z/p^N` and the coset representatives built from the `u`-conjugate
//!   of `H`;
//! * [`cosets`]: breadth-first coset enumeration and Hecke index counts.
#![cfg_attr(not(feature = "std"), no_std)]
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod sigma;
pub mod branching;
pub mod centralizer;
pub mod cosets;
pub mod explicit;
pub mod levels;
pub mod lie;
pub mod matrix;
pub mod report;
pub mod tensor;
pub mod weights;
pub mod zp;

pub use matrix::{GMatrix, HPoint, Mat6};
pub use report::{Report, Witness, WitnessData};
pub use weights::{DominantWeight, FormalCharacter, Series};
pub use zp::Zpn;
