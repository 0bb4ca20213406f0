//! DCT-domain steganography with chaotic, key-driven embedding positions.
//!
//! The pipeline splits an image into 8×8 tiles, transforms and quantizes
//! them, gathers the first eight AC coefficients of every tile and hides
//! message bits in their least significant magnitude bits. Where each bit
//! lands inside a 64-coefficient window is decided by a 128-bit key together
//! with a discrete fractional chaotic map.
//!
//! This crate is `no_std` and needs only `alloc`. File formats and the
//! command-line tool live in the `fracsteg` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod chaos;
pub mod codec;
pub mod error;
pub mod image;
pub mod keyschedule;
pub mod metrics;
pub mod transform;

pub use chaos::{FractionalMapParams, PositionList};
pub use codec::{embed, extract, Capacity, EmbedConfig, MessageBits, Mode, QuantGrid, Stego};
pub use error::{Error, Result};
pub use image::{BlockGrid, Image};
pub use keyschedule::{KeyMaterial, SecretKey};
pub use metrics::{BoxplotSummary, MetricsReport};
pub use transform::{QuantTable, Quality};
