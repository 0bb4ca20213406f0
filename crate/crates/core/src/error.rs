use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Everything that can go wrong inside the core pipeline.
///
/// Secret material (key bytes, map parameters) is never carried in a variant.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimensions must be multiples of 8 (got {width}x{height})")]
    Dimensions { width: usize, height: usize },

    #[error("unsupported channel count {0} (expected 1 or 3)")]
    Channels(usize),

    #[error("sample buffer holds {actual} values, geometry needs {expected}")]
    SampleCount { expected: usize, actual: usize },

    #[error("block count {actual} does not match geometry ({expected} expected)")]
    Geometry { expected: usize, actual: usize },

    #[error("images differ in geometry")]
    GeometryMismatch,

    #[error("quality factor must lie in the open interval (50, 100)")]
    Quality,

    #[error("invalid map parameter: {0}")]
    MapParams(&'static str),

    #[error("fractional map produced a non-finite value at step {index}")]
    NonFinite { index: usize },

    #[error("map failed to yield {order} distinct indices within {iterations} steps")]
    DegenerateMap { order: usize, iterations: usize },

    #[error("key must be exactly 128 bits")]
    KeyLength,

    #[error("key must be 32 hexadecimal characters")]
    KeyHex,

    #[error("key chunk must hold exactly 64 bits (got {0})")]
    ChunkLength(usize),

    #[error("message needs {requested} bits but the cover holds {capacity}")]
    Capacity { requested: usize, capacity: usize },

    #[error("header announces {announced} payload bits but only {available} are available")]
    Header { announced: usize, available: usize },

    #[error("cover image is entirely zero")]
    ZeroCover,

    #[error("metric needs at least {0} samples")]
    TooFewSamples(usize),

    #[error("input contains a non-finite value")]
    NonFiniteInput,
}
