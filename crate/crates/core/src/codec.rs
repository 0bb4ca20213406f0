//! Embedding and extraction of a framed bit stream in quantized AC
//! coefficients.
//!
//! Each 8×8 tile contributes the first eight AC coefficients of its zigzag
//! scan to the array ω. ω is cut into windows of 64 coefficients; window `i`
//! is paired with key chunk `i` and the chaotic position list derived from
//! it, and message bits replace the least significant bit of the magnitude of
//! the coefficients in position-list order. The message is framed with a
//! 32-bit big-endian bit count so extraction knows where to stop.

use alloc::borrow::Cow;
use alloc::vec::Vec;

use crate::chaos::{FractionalMapParams, PositionGenerator, PositionList};
use crate::error::{Error, Result};
use crate::image::{block_count, check_geometry, partition_blocks, Block, BlockGrid, Image, BLOCK_LEN};
use crate::keyschedule::{KeyMaterial, SecretKey, CHUNKS_PER_DIGEST, CHUNK_BITS};
use crate::transform::{
    dequantize, inverse_zigzag, quantize, round_half_away, zigzag, Dct8, QuantBlock, QuantTable,
    Quality,
};

/// AC coefficients taken from each tile (zigzag indices 1..=8).
pub const AC_PER_BLOCK: usize = 8;
/// Length of the payload-size header.
pub const HEADER_BITS: usize = 32;

/// Replaces the least significant bit of `x`.
pub fn lsb_replace(x: u32, bit: bool) -> u32 {
    (x & !1) | u32::from(bit)
}

pub fn lsb_extract(x: u32) -> bool {
    x & 1 == 1
}

/// Writes `bit` into the magnitude of `c`, keeping its sign.
pub fn embed_coefficient(c: i32, bit: bool) -> i32 {
    if c < 0 {
        -(lsb_replace(c.unsigned_abs(), bit) as i32)
    } else {
        lsb_replace(c as u32, bit) as i32
    }
}

pub fn extract_coefficient(c: i32) -> bool {
    lsb_extract(c.unsigned_abs())
}

/// How many bits a cover can carry.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Capacity {
    /// Coefficient slots inside complete 64-coefficient windows.
    pub slots: usize,
    /// Largest payload once the header is accounted for.
    pub payload: usize,
}

impl Capacity {
    pub fn for_blocks(blocks: usize) -> Self {
        let slots = (blocks * AC_PER_BLOCK / CHUNK_BITS) * CHUNK_BITS;
        Self {
            slots,
            payload: slots.saturating_sub(HEADER_BITS),
        }
    }

    pub fn for_image(img: &Image) -> Self {
        Self::for_blocks(img.block_count())
    }
}

/// Quantized coefficients of every tile of an image.
#[derive(Clone, PartialEq, Debug)]
pub struct QuantGrid {
    width: usize,
    height: usize,
    channels: usize,
    quality: Quality,
    blocks: Vec<QuantBlock>,
}

impl QuantGrid {
    /// Partition, transform and quantize.
    pub fn from_image(img: &Image, quality: Quality) -> Self {
        let table = QuantTable::new(quality);
        let dct = Dct8::new();
        let blocks = partition_blocks(img)
            .blocks()
            .iter()
            .map(|b| quantize(&dct.forward(b), &table))
            .collect();
        Self {
            width: img.width(),
            height: img.height(),
            channels: img.channels(),
            quality,
            blocks,
        }
    }

    pub fn from_parts(
        width: usize,
        height: usize,
        channels: usize,
        quality: Quality,
        blocks: Vec<QuantBlock>,
    ) -> Result<Self> {
        check_geometry(width, height, channels)?;
        let expected = block_count(width, height, channels);
        if blocks.len() != expected {
            return Err(Error::Geometry {
                expected,
                actual: blocks.len(),
            });
        }
        Ok(Self {
            width,
            height,
            channels,
            quality,
            blocks,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn quality(&self) -> Quality {
        self.quality
    }

    pub fn blocks(&self) -> &[QuantBlock] {
        &self.blocks
    }

    pub fn blocks_mut(&mut self) -> &mut [QuantBlock] {
        &mut self.blocks
    }

    pub fn capacity(&self) -> Capacity {
        Capacity::for_blocks(self.blocks.len())
    }

    /// Dequantize, inverse transform, round and clamp back to pixels.
    pub fn reconstruct(&self) -> Image {
        let table = QuantTable::new(self.quality);
        let dct = Dct8::new();
        let tiles: Vec<Block> = self
            .blocks
            .iter()
            .map(|q| {
                let pixels = dct.inverse(&dequantize(q, &table));
                let mut tile = [0i32; BLOCK_LEN];
                for (t, &p) in tile.iter_mut().zip(pixels.iter()) {
                    *t = round_half_away(p) as i32;
                }
                tile
            })
            .collect();
        BlockGrid::from_blocks(self.width, self.height, self.channels, tiles)
            .expect("geometry validated on construction")
            .assemble()
    }
}

/// The collected AC coefficients ω, eight per tile in tile order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoeffArray(Vec<i32>);

impl CoeffArray {
    pub fn values(&self) -> &[i32] {
        &self.0
    }

    pub fn values_mut(&mut self) -> &mut [i32] {
        &mut self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Complete 64-coefficient windows; a trailing partial window is left out.
    pub fn chunks(&self) -> core::slice::ChunksExact<'_, i32> {
        self.0.chunks_exact(CHUNK_BITS)
    }
}

pub fn collect_ac(blocks: &[QuantBlock]) -> CoeffArray {
    let mut out = Vec::with_capacity(blocks.len() * AC_PER_BLOCK);
    for b in blocks {
        out.extend_from_slice(&zigzag(b).0[1..=AC_PER_BLOCK]);
    }
    CoeffArray(out)
}

/// Writes ω back into the zigzag slots it was collected from.
pub fn scatter_ac(blocks: &mut [QuantBlock], coeffs: &CoeffArray) {
    assert_eq!(coeffs.len(), blocks.len() * AC_PER_BLOCK, "ω length mismatch");
    for (b, ac) in blocks.iter_mut().zip(coeffs.0.chunks_exact(AC_PER_BLOCK)) {
        let mut v = zigzag(b);
        v.0[1..=AC_PER_BLOCK].copy_from_slice(ac);
        *b = inverse_zigzag(&v);
    }
}

/// Embeds up to 64 bits into one window at the first `bits.len()` positions.
pub fn embed_chunk(chunk: &mut [i32], positions: &PositionList, bits: &[bool]) {
    assert_eq!(chunk.len(), CHUNK_BITS, "window must hold 64 coefficients");
    assert!(bits.len() <= CHUNK_BITS, "at most 64 bits per window");
    for (psi, &bit) in positions.iter().zip(bits) {
        chunk[psi] = embed_coefficient(chunk[psi], bit);
    }
}

/// Reads `count` bits from one window in position order.
pub fn extract_chunk(chunk: &[i32], positions: &PositionList, count: usize) -> Vec<bool> {
    positions
        .iter()
        .take(count)
        .map(|psi| extract_coefficient(chunk[psi]))
        .collect()
}

/// A payload as individual bits.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct MessageBits(Vec<bool>);

impl MessageBits {
    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self(bits)
    }

    /// Bits of each byte, most significant first.
    pub fn from_bytes(bytes: &[u8]) -> Self {
        Self(
            bytes
                .iter()
                .flat_map(|&b| (0..8).rev().map(move |k| (b >> k) & 1 == 1))
                .collect(),
        )
    }

    /// Packs MSB-first; a trailing partial byte is zero-padded.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.0
            .chunks(8)
            .map(|c| {
                c.iter()
                    .enumerate()
                    .fold(0u8, |acc, (k, &b)| acc | (u8::from(b) << (7 - k)))
            })
            .collect()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn into_bits(self) -> Vec<bool> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Header (bit count, big-endian) followed by the payload.
    pub fn framed(&self) -> Result<Vec<bool>> {
        let len = u32::try_from(self.0.len()).map_err(|_| Error::Capacity {
            requested: self.0.len(),
            capacity: u32::MAX as usize,
        })?;
        let mut out = Vec::with_capacity(HEADER_BITS + self.0.len());
        out.extend((0..HEADER_BITS).rev().map(|k| (len >> k) & 1 == 1));
        out.extend_from_slice(&self.0);
        Ok(out)
    }
}

/// What the stego artefact is.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Mode {
    /// Reconstructed pixels; extraction re-transforms and re-quantizes.
    #[default]
    Pixel,
    /// The quantized coefficients themselves; lossless.
    Coefficient,
}

#[derive(Clone, Debug)]
pub struct EmbedConfig {
    pub key: KeyMaterial,
    pub map: FractionalMapParams,
    pub quality: Quality,
    pub mode: Mode,
}

impl EmbedConfig {
    pub fn new(key: SecretKey, map: FractionalMapParams, quality: Quality, mode: Mode) -> Self {
        Self {
            key: KeyMaterial::new(key),
            map,
            quality,
            mode,
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub enum Stego {
    Pixels(Image),
    Coefficients(QuantGrid),
}

impl Stego {
    /// Pixel view of the artefact.
    pub fn to_image(&self) -> Cow<'_, Image> {
        match self {
            Stego::Pixels(img) => Cow::Borrowed(img),
            Stego::Coefficients(grid) => Cow::Owned(grid.reconstruct()),
        }
    }
}

/// Per-window position lists. The expanded key repeats every 16 windows, so
/// at most 16 lists are ever derived.
struct Schedule<'a> {
    key: &'a KeyMaterial,
    generator: PositionGenerator,
    lists: Vec<PositionList>,
}

impl<'a> Schedule<'a> {
    fn new(cfg: &'a EmbedConfig) -> Result<Self> {
        Ok(Self {
            key: &cfg.key,
            generator: PositionGenerator::new(cfg.map)?,
            lists: Vec::new(),
        })
    }

    fn window(&mut self, i: usize) -> Result<PositionList> {
        let slot = i % CHUNKS_PER_DIGEST;
        while self.lists.len() <= slot {
            let chunk = self.key.digest().chunk(self.lists.len());
            let list = self.generator.positions(chunk)?;
            self.lists.push(list);
        }
        Ok(self.lists[slot])
    }
}

/// Embeds `message` into an already quantized grid in place.
pub fn embed_into_grid(grid: &mut QuantGrid, message: &MessageBits, cfg: &EmbedConfig) -> Result<()> {
    let capacity = grid.capacity();
    if message.len() > capacity.payload {
        return Err(Error::Capacity {
            requested: message.len(),
            capacity: capacity.payload,
        });
    }
    let framed = message.framed()?;
    let mut omega = collect_ac(grid.blocks());
    let mut schedule = Schedule::new(cfg)?;
    for (i, (window, bits)) in omega
        .0
        .chunks_exact_mut(CHUNK_BITS)
        .zip(framed.chunks(CHUNK_BITS))
        .enumerate()
    {
        embed_chunk(window, &schedule.window(i)?, bits);
    }
    scatter_ac(grid.blocks_mut(), &omega);
    Ok(())
}

pub fn embed(cover: &Image, message: &MessageBits, cfg: &EmbedConfig) -> Result<Stego> {
    let mut grid = QuantGrid::from_image(cover, cfg.quality);
    embed_into_grid(&mut grid, message, cfg)?;
    Ok(match cfg.mode {
        Mode::Pixel => Stego::Pixels(grid.reconstruct()),
        Mode::Coefficient => Stego::Coefficients(grid),
    })
}

fn stego_grid<'s>(stego: &'s Stego, cfg: &EmbedConfig) -> Cow<'s, QuantGrid> {
    match stego {
        Stego::Pixels(img) => Cow::Owned(QuantGrid::from_image(img, cfg.quality)),
        Stego::Coefficients(grid) => Cow::Borrowed(grid),
    }
}

/// Sequential reader over the embedded bit stream.
struct BitStream<'a> {
    omega: CoeffArray,
    schedule: Schedule<'a>,
    next: usize,
    limit: usize,
}

impl<'a> BitStream<'a> {
    fn new(grid: &QuantGrid, cfg: &'a EmbedConfig) -> Result<Self> {
        Ok(Self {
            omega: collect_ac(grid.blocks()),
            schedule: Schedule::new(cfg)?,
            next: 0,
            limit: grid.capacity().slots,
        })
    }

    fn read(&mut self, count: usize) -> Result<Vec<bool>> {
        assert!(self.next + count <= self.limit, "read past capacity");
        let mut out = Vec::with_capacity(count);
        while out.len() < count {
            let window = self.next / CHUNK_BITS;
            let offset = self.next % CHUNK_BITS;
            let take = (CHUNK_BITS - offset).min(count - out.len());
            let positions = self.schedule.window(window)?;
            let coeffs = &self.omega.0[window * CHUNK_BITS..(window + 1) * CHUNK_BITS];
            out.extend(
                positions
                    .iter()
                    .skip(offset)
                    .take(take)
                    .map(|psi| extract_coefficient(coeffs[psi])),
            );
            self.next += take;
        }
        Ok(out)
    }
}

/// Recovers the framed payload.
pub fn extract(stego: &Stego, cfg: &EmbedConfig) -> Result<MessageBits> {
    let grid = stego_grid(stego, cfg);
    let capacity = grid.capacity();
    if capacity.slots < HEADER_BITS {
        return Err(Error::Header {
            announced: 0,
            available: 0,
        });
    }
    let mut stream = BitStream::new(&grid, cfg)?;
    let announced = stream
        .read(HEADER_BITS)?
        .iter()
        .fold(0usize, |acc, &b| (acc << 1) | usize::from(b));
    if announced > capacity.payload {
        return Err(Error::Header {
            announced,
            available: capacity.payload,
        });
    }
    Ok(MessageBits(stream.read(announced)?))
}

/// The first `count` raw bits of the embedded stream, header included.
/// Used to measure bit errors without trusting the header.
pub fn read_embedded_bits(stego: &Stego, cfg: &EmbedConfig, count: usize) -> Result<Vec<bool>> {
    let grid = stego_grid(stego, cfg);
    let slots = grid.capacity().slots;
    if count > slots {
        return Err(Error::Capacity {
            requested: count,
            capacity: slots,
        });
    }
    BitStream::new(&grid, cfg)?.read(count)
}
