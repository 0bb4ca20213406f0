use std::path::Path;

use fracsteg::bmp::{self, BmpError};
use fracsteg::{load_image, load_stego, record, save_image, save_record, Error};
use fracsteg_core::{Error as CoreError, Image, QuantGrid, Quality, Stego};
use proptest::prelude::*;

fn fixture(name: &str) -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn pattern(w: usize, h: usize, c: usize) -> Image {
    Image::from_fn(w, h, c, |ch, y, x| (ch * 85 + y * 7 + x * 3) as u8).unwrap()
}

fn le32(b: &[u8], at: usize) -> u32 {
    u32::from_le_bytes(b[at..at + 4].try_into().unwrap())
}

/// Minimal BMP writer used to build inputs the encoder never produces.
fn raw_bmp(width: i32, height: i32, bits: u16, palette: &[[u8; 4]], rows: &[Vec<u8>]) -> Vec<u8> {
    let offset = 54 + 4 * palette.len();
    let data: Vec<u8> = rows.concat();
    let mut b = Vec::new();
    b.extend_from_slice(b"BM");
    b.extend_from_slice(&((offset + data.len()) as u32).to_le_bytes());
    b.extend_from_slice(&[0; 4]);
    b.extend_from_slice(&(offset as u32).to_le_bytes());
    b.extend_from_slice(&40u32.to_le_bytes());
    b.extend_from_slice(&width.to_le_bytes());
    b.extend_from_slice(&height.to_le_bytes());
    b.extend_from_slice(&1u16.to_le_bytes());
    b.extend_from_slice(&bits.to_le_bytes());
    b.extend_from_slice(&[0; 4]);
    b.extend_from_slice(&(data.len() as u32).to_le_bytes());
    b.extend_from_slice(&[0; 8]);
    b.extend_from_slice(&(palette.len() as u32).to_le_bytes());
    b.extend_from_slice(&[0; 4]);
    for e in palette {
        b.extend_from_slice(e);
    }
    b.extend_from_slice(&data);
    b
}

#[test]
fn fixtures_load_as_colour_512() {
    for name in ["astronaut.bmp", "immunohistochemistry.bmp", "grace_hopper.bmp", "retina.bmp"] {
        let img = load_image(&fixture(name)).unwrap();
        assert_eq!((img.width(), img.height(), img.channels()), (512, 512, 3), "{name}");
    }
}

#[test]
fn colour_file_size_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.bmp");
    let img = pattern(512, 512, 3);
    save_image(&img, &path).unwrap();
    let bytes = std::fs::read(&path).unwrap();
    assert_eq!(bytes.len(), 54 + 512 * 512 * 3);
    assert_eq!(le32(&bytes, 2) as usize, bytes.len());
    assert_eq!(le32(&bytes, 10), 54);
    assert_eq!(load_image(&path).unwrap(), img);
}

#[test]
fn bottom_up_bgr_layout() {
    let img = Image::from_fn(8, 8, 3, |c, y, x| [10, 20, 30][c] + (y * 8 + x) as u8).unwrap();
    let bytes = bmp::encode(&img);
    // first stored row is the bottom one, pixels as B, G, R
    assert_eq!(&bytes[54..57], &[30 + 56, 20 + 56, 10 + 56]);
    let last_row = 54 + 7 * 24;
    assert_eq!(&bytes[last_row..last_row + 3], &[30, 20, 10]);
}

#[test]
fn top_down_is_accepted() {
    let img = pattern(16, 8, 3);
    let mut rows: Vec<Vec<u8>> = Vec::new();
    for y in 0..8 {
        let mut row = Vec::new();
        for x in 0..16 {
            row.extend_from_slice(&[img.sample(2, y, x), img.sample(1, y, x), img.sample(0, y, x)]);
        }
        rows.push(row);
    }
    let bytes = raw_bmp(16, -8, 24, &[], &rows);
    assert_eq!(bmp::decode(&bytes).unwrap(), img);
}

#[test]
fn gray_constant_128() {
    let gray: Vec<[u8; 4]> = (0..=255u8).map(|v| [v, v, v, 0]).collect();
    let rows = vec![vec![128u8; 8]; 8];
    let img = bmp::decode(&raw_bmp(8, 8, 8, &gray, &rows)).unwrap();
    assert_eq!(img.channels(), 1);
    assert_eq!(img.samples(), &[128u8; 64][..]);
}

#[test]
fn gray_round_trip_and_size() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.bmp");
    let img = pattern(24, 16, 1);
    save_image(&img, &path).unwrap();
    assert_eq!(std::fs::metadata(&path).unwrap().len(), 54 + 1024 + 24 * 16);
    assert_eq!(load_image(&path).unwrap(), img);
}

#[test]
fn colour_palette_expands_to_rgb() {
    let palette = [[0, 0, 255, 0], [0, 255, 0, 0]];
    let rows: Vec<Vec<u8>> = (0..8).map(|y| vec![(y % 2) as u8; 8]).collect();
    let img = bmp::decode(&raw_bmp(8, 8, 8, &palette, &rows)).unwrap();
    assert_eq!(img.channels(), 3);
    // bottom stored row (index 0 → red) is image row 7
    assert_eq!((img.sample(0, 7, 0), img.sample(1, 7, 0), img.sample(2, 7, 0)), (255, 0, 0));
    assert_eq!((img.sample(0, 6, 0), img.sample(1, 6, 0), img.sample(2, 6, 0)), (0, 255, 0));

    let bad: Vec<Vec<u8>> = vec![vec![2u8; 8]; 8];
    assert!(matches!(
        bmp::decode(&raw_bmp(8, 8, 8, &palette, &bad)),
        Err(BmpError::PaletteIndex(2))
    ));
}

#[test]
fn width_510_is_rejected() {
    // 510·3 = 1530 bytes, padded to 1532
    let rows = vec![vec![0u8; 1532]; 512];
    let err = bmp::decode(&raw_bmp(510, 512, 24, &[], &rows)).unwrap_err();
    assert!(matches!(err, BmpError::Image(CoreError::Dimensions { width: 510, height: 512 })));
    assert!(err.to_string().contains("dimensions must be multiples of 8"));
}

#[test]
fn unsupported_depth_and_compression() {
    let mut b = raw_bmp(8, 8, 32, &[], &vec![vec![0u8; 32]; 8]);
    assert!(matches!(bmp::decode(&b), Err(BmpError::Unsupported(_))));
    b[28] = 24;
    b[30] = 1;
    assert!(matches!(bmp::decode(&b), Err(BmpError::Unsupported(_))));
}

#[test]
fn unwritable_path_is_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("x.bmp");
    let err = save_image(&pattern(8, 8, 1), &path).unwrap_err();
    assert!(matches!(err, Error::Io { .. }));
    assert_eq!(err.exit_code(), 4);
}

#[test]
fn record_round_trip_and_sniffing() {
    let dir = tempfile::tempdir().unwrap();
    let img = pattern(32, 16, 3);
    let grid = QuantGrid::from_image(&img, Quality::new(90.0).unwrap());
    let rec = dir.path().join("s.scq");
    save_record(&grid, &rec).unwrap();
    assert_eq!(
        std::fs::metadata(&rec).unwrap().len() as usize,
        4 + 3 + 12 + grid.blocks().len() * 128
    );
    assert_eq!(load_stego(&rec).unwrap(), Stego::Coefficients(grid.clone()));

    let pix = dir.path().join("s.bmp");
    save_image(&img, &pix).unwrap();
    assert_eq!(load_stego(&pix).unwrap(), Stego::Pixels(img));

    let bytes = std::fs::read(&rec).unwrap();
    assert_eq!(&bytes[..7], b"SCQ190\n");
    // DC of block 0 in zigzag slot 0, little-endian
    let dc = i16::from_le_bytes([bytes[19], bytes[20]]);
    assert_eq!(i32::from(dc), grid.blocks()[0].0[0]);
    // zigzag slot 2 holds row-major index 8
    let z2 = i16::from_le_bytes([bytes[23], bytes[24]]);
    assert_eq!(i32::from(z2), grid.blocks()[0].0[8]);
    assert_eq!(record::decode(&bytes).unwrap(), grid);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bmp_round_trip(bw in 1usize..6, bh in 1usize..6, colour in any::<bool>(), seed in any::<u64>()) {
        let c = if colour { 3 } else { 1 };
        let mut s = seed;
        let img = Image::from_fn(bw * 8, bh * 8, c, |_, _, _| {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1);
            (s >> 56) as u8
        }).unwrap();
        prop_assert_eq!(bmp::decode(&bmp::encode(&img)).unwrap(), img);
    }

    #[test]
    fn record_round_trip(bw in 1usize..5, bh in 1usize..5, mu in 51.0f64..99.0, seed in any::<u64>()) {
        let mut s = seed;
        let img = Image::from_fn(bw * 8, bh * 8, 3, |_, _, _| {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1);
            (s >> 56) as u8
        }).unwrap();
        let grid = QuantGrid::from_image(&img, Quality::new(mu).unwrap());
        prop_assert_eq!(record::decode(&record::encode(&grid).unwrap()).unwrap(), grid);
    }
}
