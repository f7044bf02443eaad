// SPDX-License-Identifier: MIT OR Apache-2.0

//! Domain types and forward simulation of the indicator regression model.

mod design;
mod noise;
mod rng;
mod sample;
mod segment;

pub use design::{generate_design, regular_grid, DesignKind, DesignSpec};
pub use noise::{NoiseFamily, NoiseSpec};
pub use rng::{SimRng, StreamKey};
pub use sample::{simulate, Sample};
pub use segment::{sym_diff_measure, Segment};
