//! Uncompressed BMP, 24-bit and 8-bit palettized.
//!
//! An 8-bit file whose palette entries are all gray loads as one channel
//! holding the gray levels; any other palette is expanded to RGB. Both
//! bottom-up and top-down (negative height) row orders are accepted.

use fracsteg_core::{Error as CoreError, Image};

const FILE_HEADER: usize = 14;
const INFO_HEADER: usize = 40;
const BI_RGB: u32 = 0;
const PIXELS_PER_METRE: u32 = 2835;

#[derive(Debug, thiserror::Error)]
pub enum BmpError {
    #[error("not a BMP file")]
    Magic,
    #[error("file is truncated")]
    Truncated,
    #[error("unsupported BMP: {0}")]
    Unsupported(&'static str),
    #[error("palette index {0} out of range")]
    PaletteIndex(u8),
    #[error(transparent)]
    Image(#[from] CoreError),
}

fn u16_at(b: &[u8], at: usize) -> u16 {
    u16::from_le_bytes([b[at], b[at + 1]])
}

fn u32_at(b: &[u8], at: usize) -> u32 {
    u32::from_le_bytes([b[at], b[at + 1], b[at + 2], b[at + 3]])
}

fn stride(width: usize, bits: usize) -> usize {
    (width * bits).div_ceil(32) * 4
}

pub fn decode(bytes: &[u8]) -> Result<Image, BmpError> {
    if bytes.len() < 2 || &bytes[..2] != b"BM" {
        return Err(BmpError::Magic);
    }
    if bytes.len() < FILE_HEADER + INFO_HEADER {
        return Err(BmpError::Truncated);
    }
    let data_offset = u32_at(bytes, 10) as usize;
    let header_size = u32_at(bytes, 14) as usize;
    if header_size < INFO_HEADER {
        return Err(BmpError::Unsupported("core headers are not supported"));
    }
    let raw_width = u32_at(bytes, 18) as i32;
    let raw_height = u32_at(bytes, 22) as i32;
    let planes = u16_at(bytes, 26);
    let bits = u16_at(bytes, 28);
    let compression = u32_at(bytes, 30);
    let colors_used = u32_at(bytes, 46) as usize;

    if planes != 1 {
        return Err(BmpError::Unsupported("plane count must be 1"));
    }
    if compression != BI_RGB {
        return Err(BmpError::Unsupported("compressed pixel data"));
    }
    if bits != 8 && bits != 24 {
        return Err(BmpError::Unsupported("only 8-bit and 24-bit images"));
    }
    if raw_width <= 0 || raw_height == 0 {
        return Err(BmpError::Unsupported("empty or negative width"));
    }
    let width = raw_width as usize;
    let height = raw_height.unsigned_abs() as usize;
    let top_down = raw_height < 0;
    let row_len = stride(width, usize::from(bits));

    let end = row_len
        .checked_mul(height)
        .and_then(|n| n.checked_add(data_offset))
        .ok_or(BmpError::Truncated)?;
    if end > bytes.len() {
        return Err(BmpError::Truncated);
    }

    let row = |y: usize| {
        let stored = if top_down { y } else { height - 1 - y };
        let start = data_offset + stored * row_len;
        &bytes[start..start + row_len]
    };

    if bits == 24 {
        let img = Image::from_fn(width, height, 3, |c, y, x| row(y)[3 * x + 2 - c]);
        return Ok(img?);
    }

    let entries = if colors_used == 0 { 256 } else { colors_used };
    if entries > 256 {
        return Err(BmpError::Unsupported("palette larger than 256 entries"));
    }
    let palette_start = FILE_HEADER + header_size;
    let palette_end = palette_start + 4 * entries;
    if palette_end > data_offset || palette_end > bytes.len() {
        return Err(BmpError::Truncated);
    }
    // stored as B, G, R, reserved
    let palette: Vec<[u8; 3]> = bytes[palette_start..palette_end]
        .chunks_exact(4)
        .map(|e| [e[2], e[1], e[0]])
        .collect();
    for y in 0..height {
        if let Some(&bad) = row(y)[..width].iter().find(|&&i| usize::from(i) >= entries) {
            return Err(BmpError::PaletteIndex(bad));
        }
    }
    let gray = palette.iter().all(|[r, g, b]| r == g && g == b);
    let channels = if gray { 1 } else { 3 };
    let img = Image::from_fn(width, height, channels, |c, y, x| {
        palette[usize::from(row(y)[x])][c]
    });
    Ok(img?)
}

pub fn encode(img: &Image) -> Vec<u8> {
    let (width, height) = (img.width(), img.height());
    let gray = img.channels() == 1;
    let bits = if gray { 8 } else { 24 };
    let palette_len = if gray { 256 * 4 } else { 0 };
    let row_len = stride(width, bits);
    let data_offset = FILE_HEADER + INFO_HEADER + palette_len;
    let file_len = data_offset + row_len * height;

    let mut out = Vec::with_capacity(file_len);
    out.extend_from_slice(b"BM");
    out.extend_from_slice(&(file_len as u32).to_le_bytes());
    out.extend_from_slice(&[0; 4]);
    out.extend_from_slice(&(data_offset as u32).to_le_bytes());

    out.extend_from_slice(&(INFO_HEADER as u32).to_le_bytes());
    out.extend_from_slice(&(width as i32).to_le_bytes());
    out.extend_from_slice(&(height as i32).to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes());
    out.extend_from_slice(&(bits as u16).to_le_bytes());
    out.extend_from_slice(&BI_RGB.to_le_bytes());
    out.extend_from_slice(&((row_len * height) as u32).to_le_bytes());
    out.extend_from_slice(&PIXELS_PER_METRE.to_le_bytes());
    out.extend_from_slice(&PIXELS_PER_METRE.to_le_bytes());
    let colors: u32 = if gray { 256 } else { 0 };
    out.extend_from_slice(&colors.to_le_bytes());
    out.extend_from_slice(&0u32.to_le_bytes());

    if gray {
        for v in 0..=255u8 {
            out.extend_from_slice(&[v, v, v, 0]);
        }
    }

    let pad = row_len - width * bits / 8;
    for y in (0..height).rev() {
        for x in 0..width {
            if gray {
                out.push(img.sample(0, y, x));
            } else {
                out.extend_from_slice(&[img.sample(2, y, x), img.sample(1, y, x), img.sample(0, y, x)]);
            }
        }
        out.extend(std::iter::repeat_n(0u8, pad));
    }
    out
}
