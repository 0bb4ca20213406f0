//! `SCQ1` quantized-coefficient record.
//!
//! ```text
//! offset  size      field
//! 0       4         magic "SCQ1"
//! 4       k         quality factor, ASCII decimal, shortest form that
//!                   parses back to the same f64
//! 4+k     1         0x0A
//! 5+k     4         width, u32 little-endian
//! 9+k     4         height, u32 little-endian
//! 13+k    4         channels, u32 little-endian (1 or 3)
//! 17+k    128·B     B = (width/8)·(height/8)·channels blocks in image
//!                   order; each block is 64 i16 little-endian values in
//!                   zigzag order, DC first
//! ```
//!
//! Nothing follows the last block.

use fracsteg_core::image::BLOCK_LEN;
use fracsteg_core::transform::{inverse_zigzag, zigzag, QuantBlock, ZigzagVector};
use fracsteg_core::{Error as CoreError, QuantGrid, Quality};

pub const MAGIC: &[u8] = b"SCQ1";
const MAX_QUALITY_LEN: usize = 32;

#[derive(Debug, thiserror::Error)]
pub enum RecordError {
    #[error("not an SCQ1 record")]
    Magic,
    #[error("record is truncated")]
    Truncated,
    #[error("malformed quality field")]
    QualityField,
    #[error("record holds {actual} bytes, header implies {expected}")]
    Length { expected: usize, actual: usize },
    #[error("coefficient {value} does not fit in 16 bits")]
    Overflow { value: i32 },
    #[error(transparent)]
    Grid(#[from] CoreError),
}

pub fn encode(grid: &QuantGrid) -> Result<Vec<u8>, RecordError> {
    let quality = format!("{}", grid.quality().get());
    let mut out = Vec::with_capacity(17 + quality.len() + grid.blocks().len() * 2 * BLOCK_LEN);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(quality.as_bytes());
    out.push(b'\n');
    for dim in [grid.width(), grid.height(), grid.channels()] {
        out.extend_from_slice(&(dim as u32).to_le_bytes());
    }
    for block in grid.blocks() {
        for &v in zigzag(block).0.iter() {
            let v16 = i16::try_from(v).map_err(|_| RecordError::Overflow { value: v })?;
            out.extend_from_slice(&v16.to_le_bytes());
        }
    }
    Ok(out)
}

pub fn decode(bytes: &[u8]) -> Result<QuantGrid, RecordError> {
    let rest = bytes.strip_prefix(MAGIC).ok_or(RecordError::Magic)?;
    let newline = rest
        .iter()
        .take(MAX_QUALITY_LEN + 1)
        .position(|&b| b == b'\n')
        .ok_or(RecordError::QualityField)?;
    let text = std::str::from_utf8(&rest[..newline]).map_err(|_| RecordError::QualityField)?;
    if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit() || b == b'.') {
        return Err(RecordError::QualityField);
    }
    let mu: f64 = text.parse().map_err(|_| RecordError::QualityField)?;
    let quality = Quality::new(mu)?;

    let rest = &rest[newline + 1..];
    if rest.len() < 12 {
        return Err(RecordError::Truncated);
    }
    let dim = |i: usize| u32::from_le_bytes(rest[4 * i..4 * i + 4].try_into().unwrap()) as usize;
    let (width, height, channels) = (dim(0), dim(1), dim(2));
    let body = &rest[12..];

    let blocks = (width / 8)
        .checked_mul(height / 8)
        .and_then(|n| n.checked_mul(channels))
        .ok_or(RecordError::Truncated)?;
    let expected = blocks
        .checked_mul(2 * BLOCK_LEN)
        .ok_or(RecordError::Truncated)?;
    if body.len() != expected {
        return Err(RecordError::Length {
            expected: bytes.len() - body.len() + expected,
            actual: bytes.len(),
        });
    }

    let blocks: Vec<QuantBlock> = body
        .chunks_exact(2 * BLOCK_LEN)
        .map(|raw| {
            let mut v = ZigzagVector::default();
            for (dst, pair) in v.0.iter_mut().zip(raw.chunks_exact(2)) {
                *dst = i32::from(i16::from_le_bytes([pair[0], pair[1]]));
            }
            inverse_zigzag(&v)
        })
        .collect();
    Ok(QuantGrid::from_parts(width, height, channels, quality, blocks)?)
}
