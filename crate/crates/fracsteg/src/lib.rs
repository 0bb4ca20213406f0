//! File formats, reports and the command-line surface for `fracsteg-core`.
//!
//! Pixel stegos are stored as uncompressed BMP. Coefficient stegos use the
//! `SCQ1` record described in [`record`].

pub mod bench;
pub mod bmp;
pub mod cli;
pub mod error;
pub mod record;
pub mod report;

use std::fs;
use std::path::Path;

use fracsteg_core::{Image, QuantGrid, Stego};

pub use error::{Category, Error, Result};

pub(crate) fn read_file(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub(crate) fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Reads a BMP file.
pub fn load_image(path: &Path) -> Result<Image> {
    let bytes = read_file(path)?;
    bmp::decode(&bytes).map_err(|source| Error::Bmp {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes `img` as BMP: 24-bit for colour, 8-bit gray-palette for one channel.
pub fn save_image(img: &Image, path: &Path) -> Result<()> {
    write_file(path, &bmp::encode(img))
}

pub fn load_record(path: &Path) -> Result<QuantGrid> {
    let bytes = read_file(path)?;
    record::decode(&bytes).map_err(|source| Error::Record {
        path: path.to_path_buf(),
        source,
    })
}

pub fn save_record(grid: &QuantGrid, path: &Path) -> Result<()> {
    let bytes = record::encode(grid).map_err(|source| Error::Record {
        path: path.to_path_buf(),
        source,
    })?;
    write_file(path, &bytes)
}

/// Loads either artefact kind, telling them apart by their magic bytes.
pub fn load_stego(path: &Path) -> Result<Stego> {
    let bytes = read_file(path)?;
    if bytes.starts_with(record::MAGIC) {
        record::decode(&bytes)
            .map(Stego::Coefficients)
            .map_err(|source| Error::Record {
                path: path.to_path_buf(),
                source,
            })
    } else {
        bmp::decode(&bytes)
            .map(Stego::Pixels)
            .map_err(|source| Error::Bmp {
                path: path.to_path_buf(),
                source,
            })
    }
}

pub fn save_stego(stego: &Stego, path: &Path) -> Result<()> {
    match stego {
        Stego::Pixels(img) => save_image(img, path),
        Stego::Coefficients(grid) => save_record(grid, path),
    }
}
