//! Planar 8-bit images and their decomposition into 8×8 tiles.
//!
//! Samples are stored channel-separated (all of R, then G, then B), each
//! plane row-major. Tiles are ordered channel-major and row-major within a
//! channel, which is the order every later stage walks.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Side length of a square tile.
pub const BLOCK_SIDE: usize = 8;
/// Samples per tile.
pub const BLOCK_LEN: usize = BLOCK_SIDE * BLOCK_SIDE;

/// One 8×8 tile, row-major. Values are plain integers so that reconstructed
/// tiles can overshoot the 8-bit range before clamping.
pub type Block = [i32; BLOCK_LEN];

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Image {
    width: usize,
    height: usize,
    channels: usize,
    samples: Vec<u8>,
}

impl Image {
    /// Wraps a planar sample buffer after checking the geometry.
    pub fn new(width: usize, height: usize, channels: usize, samples: Vec<u8>) -> Result<Self> {
        check_geometry(width, height, channels)?;
        let expected = width * height * channels;
        if samples.len() != expected {
            return Err(Error::SampleCount {
                expected,
                actual: samples.len(),
            });
        }
        Ok(Self {
            width,
            height,
            channels,
            samples,
        })
    }

    /// Builds an image from a generator called as `f(channel, row, col)`.
    pub fn from_fn(
        width: usize,
        height: usize,
        channels: usize,
        mut f: impl FnMut(usize, usize, usize) -> u8,
    ) -> Result<Self> {
        check_geometry(width, height, channels)?;
        let mut samples = Vec::with_capacity(width * height * channels);
        for c in 0..channels {
            for y in 0..height {
                for x in 0..width {
                    samples.push(f(c, y, x));
                }
            }
        }
        Self::new(width, height, channels, samples)
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

    pub fn samples(&self) -> &[u8] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [u8] {
        &mut self.samples
    }

    pub fn into_samples(self) -> Vec<u8> {
        self.samples
    }

    /// One channel plane, row-major.
    pub fn plane(&self, channel: usize) -> &[u8] {
        let len = self.width * self.height;
        &self.samples[channel * len..(channel + 1) * len]
    }

    pub fn sample(&self, channel: usize, row: usize, col: usize) -> u8 {
        self.samples[(channel * self.height + row) * self.width + col]
    }

    pub fn same_geometry(&self, other: &Image) -> bool {
        self.width == other.width && self.height == other.height && self.channels == other.channels
    }

    /// Total number of 8×8 tiles across all channels.
    pub fn block_count(&self) -> usize {
        block_count(self.width, self.height, self.channels)
    }
}

pub(crate) fn check_geometry(width: usize, height: usize, channels: usize) -> Result<()> {
    if channels != 1 && channels != 3 {
        return Err(Error::Channels(channels));
    }
    if width == 0 || height == 0 || !width.is_multiple_of(BLOCK_SIDE) || !height.is_multiple_of(BLOCK_SIDE) {
        return Err(Error::Dimensions { width, height });
    }
    Ok(())
}

pub(crate) fn block_count(width: usize, height: usize, channels: usize) -> usize {
    (width / BLOCK_SIDE) * (height / BLOCK_SIDE) * channels
}

/// Where a tile sits in its source image.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct BlockLocation {
    pub channel: usize,
    pub block_row: usize,
    pub block_col: usize,
}

/// Ordered tiles of an image together with the geometry needed to put them
/// back.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BlockGrid {
    width: usize,
    height: usize,
    channels: usize,
    blocks: Vec<Block>,
}

impl BlockGrid {
    pub fn from_blocks(
        width: usize,
        height: usize,
        channels: usize,
        blocks: Vec<Block>,
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

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn blocks_mut(&mut self) -> &mut [Block] {
        &mut self.blocks
    }

    pub fn into_blocks(self) -> Vec<Block> {
        self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn location(&self, index: usize) -> BlockLocation {
        let across = self.width / BLOCK_SIDE;
        let per_channel = across * (self.height / BLOCK_SIDE);
        let within = index % per_channel;
        BlockLocation {
            channel: index / per_channel,
            block_row: within / across,
            block_col: within % across,
        }
    }

    pub fn assemble(&self) -> Image {
        assemble_unchecked(&self.blocks, self.width, self.height, self.channels)
    }
}

/// Splits every channel into non-overlapping 8×8 tiles.
pub fn partition_blocks(img: &Image) -> BlockGrid {
    let across = img.width / BLOCK_SIDE;
    let down = img.height / BLOCK_SIDE;
    let mut blocks = Vec::with_capacity(img.block_count());
    for c in 0..img.channels {
        let plane = img.plane(c);
        for br in 0..down {
            for bc in 0..across {
                let mut tile = [0i32; BLOCK_LEN];
                for i in 0..BLOCK_SIDE {
                    let row = &plane[(br * BLOCK_SIDE + i) * img.width + bc * BLOCK_SIDE..];
                    for j in 0..BLOCK_SIDE {
                        tile[i * BLOCK_SIDE + j] = i32::from(row[j]);
                    }
                }
                blocks.push(tile);
            }
        }
    }
    BlockGrid {
        width: img.width,
        height: img.height,
        channels: img.channels,
        blocks,
    }
}

/// Inverse of [`partition_blocks`]; tile values are clamped to `[0, 255]`.
pub fn assemble_image(
    blocks: &[Block],
    width: usize,
    height: usize,
    channels: usize,
) -> Result<Image> {
    check_geometry(width, height, channels)?;
    let expected = block_count(width, height, channels);
    if blocks.len() != expected {
        return Err(Error::Geometry {
            expected,
            actual: blocks.len(),
        });
    }
    Ok(assemble_unchecked(blocks, width, height, channels))
}

fn assemble_unchecked(blocks: &[Block], width: usize, height: usize, channels: usize) -> Image {
    let across = width / BLOCK_SIDE;
    let down = height / BLOCK_SIDE;
    let mut samples = alloc::vec![0u8; width * height * channels];
    let mut tiles = blocks.iter();
    for c in 0..channels {
        let plane = &mut samples[c * width * height..(c + 1) * width * height];
        for br in 0..down {
            for bc in 0..across {
                let tile = tiles.next().expect("block count checked");
                for i in 0..BLOCK_SIDE {
                    let start = (br * BLOCK_SIDE + i) * width + bc * BLOCK_SIDE;
                    for (j, out) in plane[start..start + BLOCK_SIDE].iter_mut().enumerate() {
                        *out = tile[i * BLOCK_SIDE + j].clamp(0, 255) as u8;
                    }
                }
            }
        }
    }
    Image {
        width,
        height,
        channels,
        samples,
    }
}
