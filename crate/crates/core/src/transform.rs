//! 8×8 DCT, JPEG-style quantization and zigzag ordering.
//!
//! The transform is the orthonormal DCT-II on raw pixel values (no level
//! shift). All arithmetic is `f64`; `libm` supplies the transcendental and
//! rounding functions so results are identical on every target.

use core::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{Error, Result};
use crate::image::{Block, BLOCK_LEN, BLOCK_SIDE};

/// Real-valued DCT coefficients, row-major by `(u, v)`.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct CoeffBlock(pub [f64; BLOCK_LEN]);

/// Quantized integer coefficients, row-major by `(u, v)`. Index 0 is DC.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct QuantBlock(pub [i32; BLOCK_LEN]);

impl Default for QuantBlock {
    fn default() -> Self {
        Self([0; BLOCK_LEN])
    }
}

/// Coefficients laid out in zigzag scan order. Index 0 is DC and indices
/// 1..=8 are the first eight AC coefficients.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ZigzagVector(pub [i32; BLOCK_LEN]);

impl Default for ZigzagVector {
    fn default() -> Self {
        Self([0; BLOCK_LEN])
    }
}

/// Row-major position visited at each step of the zigzag scan.
pub const ZIGZAG: [usize; BLOCK_LEN] = [
    0, 1, 8, 16, 9, 2, 3, 10, 17, 24, 32, 25, 18, 11, 4, 5, 12, 19, 26, 33, 40, 48, 41, 34, 27,
    20, 13, 6, 7, 14, 21, 28, 35, 42, 49, 56, 57, 50, 43, 36, 29, 22, 15, 23, 30, 37, 44, 51, 58,
    59, 52, 45, 38, 31, 39, 46, 53, 60, 61, 54, 47, 55, 62, 63,
];

/// Luminance base matrix scaled by the quality factor.
pub const BASE_QUANT_TABLE: [u16; BLOCK_LEN] = [
    16, 11, 10, 16, 24, 40, 51, 61, //
    12, 12, 14, 19, 26, 58, 60, 55, //
    14, 13, 16, 24, 40, 57, 69, 56, //
    14, 17, 22, 29, 51, 87, 80, 62, //
    18, 22, 37, 56, 68, 109, 103, 77, //
    24, 35, 55, 64, 81, 104, 113, 92, //
    49, 64, 78, 87, 103, 121, 120, 101, //
    72, 92, 95, 98, 112, 100, 103, 99,
];

/// Compression quality factor, strictly between 50 and 100.
#[derive(Clone, Copy, PartialEq, PartialOrd, Debug)]
pub struct Quality(f64);

impl Quality {
    pub const DEFAULT: Quality = Quality(75.0);

    pub fn new(mu: f64) -> Result<Self> {
        if mu.is_finite() && mu > 50.0 && mu < 100.0 {
            Ok(Self(mu))
        } else {
            Err(Error::Quality)
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }

    /// Table scale `(100 - mu) / 50`.
    pub fn scale(self) -> f64 {
        (100.0 - self.0) / 50.0
    }
}

impl Default for Quality {
    fn default() -> Self {
        Self::DEFAULT
    }
}

#[derive(Clone, Copy, PartialEq, Debug)]
pub struct QuantTable {
    quality: Quality,
    entries: [f64; BLOCK_LEN],
}

impl QuantTable {
    pub fn new(quality: Quality) -> Self {
        let scale = quality.scale();
        let mut entries = [0.0; BLOCK_LEN];
        for (e, &base) in entries.iter_mut().zip(BASE_QUANT_TABLE.iter()) {
            *e = f64::max(1.0, scale * f64::from(base));
        }
        Self { quality, entries }
    }

    pub fn quality(&self) -> Quality {
        self.quality
    }

    pub fn entries(&self) -> &[f64; BLOCK_LEN] {
        &self.entries
    }

    pub fn entry(&self, u: usize, v: usize) -> f64 {
        self.entries[u * BLOCK_SIDE + v]
    }
}

/// Builds the quantization table for a raw quality factor.
pub fn build_quant_table(mu: f64) -> Result<QuantTable> {
    Quality::new(mu).map(QuantTable::new)
}

/// Separable 8-point DCT with a precomputed basis.
///
/// `basis[u][i] = σ(u)/2 · cos(π u (2i + 1) / 16)`, so the 2-D kernel is the
/// product of two rows and carries the overall factor 1/4.
#[derive(Clone, Debug)]
pub struct Dct8 {
    basis: [[f64; BLOCK_SIDE]; BLOCK_SIDE],
}

impl Default for Dct8 {
    fn default() -> Self {
        Self::new()
    }
}

impl Dct8 {
    pub fn new() -> Self {
        let mut basis = [[0.0; BLOCK_SIDE]; BLOCK_SIDE];
        for (u, row) in basis.iter_mut().enumerate() {
            let sigma = if u == 0 { FRAC_1_SQRT_2 } else { 1.0 };
            for (i, b) in row.iter_mut().enumerate() {
                let angle = PI * (u * (2 * i + 1)) as f64 / 16.0;
                *b = 0.5 * sigma * libm::cos(angle);
            }
        }
        Self { basis }
    }

    pub fn forward(&self, block: &Block) -> CoeffBlock {
        // rows first: tmp[u][j] = Σ_i basis[u][i] · B[i][j]
        let mut tmp = [0.0f64; BLOCK_LEN];
        for u in 0..BLOCK_SIDE {
            for j in 0..BLOCK_SIDE {
                let mut acc = 0.0;
                for i in 0..BLOCK_SIDE {
                    acc += self.basis[u][i] * f64::from(block[i * BLOCK_SIDE + j]);
                }
                tmp[u * BLOCK_SIDE + j] = acc;
            }
        }
        let mut out = [0.0f64; BLOCK_LEN];
        for u in 0..BLOCK_SIDE {
            for v in 0..BLOCK_SIDE {
                let mut acc = 0.0;
                for j in 0..BLOCK_SIDE {
                    acc += tmp[u * BLOCK_SIDE + j] * self.basis[v][j];
                }
                out[u * BLOCK_SIDE + v] = acc;
            }
        }
        CoeffBlock(out)
    }

    pub fn inverse(&self, coeffs: &CoeffBlock) -> [f64; BLOCK_LEN] {
        // tmp[i][v] = Σ_u basis[u][i] · C[u][v]
        let mut tmp = [0.0f64; BLOCK_LEN];
        for i in 0..BLOCK_SIDE {
            for v in 0..BLOCK_SIDE {
                let mut acc = 0.0;
                for u in 0..BLOCK_SIDE {
                    acc += self.basis[u][i] * coeffs.0[u * BLOCK_SIDE + v];
                }
                tmp[i * BLOCK_SIDE + v] = acc;
            }
        }
        let mut out = [0.0f64; BLOCK_LEN];
        for i in 0..BLOCK_SIDE {
            for j in 0..BLOCK_SIDE {
                let mut acc = 0.0;
                for v in 0..BLOCK_SIDE {
                    acc += tmp[i * BLOCK_SIDE + v] * self.basis[v][j];
                }
                out[i * BLOCK_SIDE + j] = acc;
            }
        }
        out
    }
}

pub fn dct_forward(block: &Block) -> CoeffBlock {
    Dct8::new().forward(block)
}

pub fn dct_inverse(coeffs: &CoeffBlock) -> [f64; BLOCK_LEN] {
    Dct8::new().inverse(coeffs)
}

/// Rounds to nearest, ties away from zero.
#[inline]
pub fn round_half_away(x: f64) -> f64 {
    libm::round(x)
}

pub fn quantize(coeffs: &CoeffBlock, table: &QuantTable) -> QuantBlock {
    let mut out = [0i32; BLOCK_LEN];
    for ((o, &c), &q) in out.iter_mut().zip(coeffs.0.iter()).zip(table.entries.iter()) {
        *o = round_half_away(c / q) as i32;
    }
    QuantBlock(out)
}

/// Dequantization rounds the product back to an integer.
pub fn dequantize(block: &QuantBlock, table: &QuantTable) -> CoeffBlock {
    let mut out = [0.0f64; BLOCK_LEN];
    for ((o, &t), &q) in out.iter_mut().zip(block.0.iter()).zip(table.entries.iter()) {
        *o = round_half_away(f64::from(t) * q);
    }
    CoeffBlock(out)
}

pub fn zigzag(block: &QuantBlock) -> ZigzagVector {
    let mut out = [0i32; BLOCK_LEN];
    for (o, &pos) in out.iter_mut().zip(ZIGZAG.iter()) {
        *o = block.0[pos];
    }
    ZigzagVector(out)
}

pub fn inverse_zigzag(vector: &ZigzagVector) -> QuantBlock {
    let mut out = [0i32; BLOCK_LEN];
    for (&v, &pos) in vector.0.iter().zip(ZIGZAG.iter()) {
        out[pos] = v;
    }
    QuantBlock(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Direct double sum with every cosine evaluated in place.
    fn oracle_forward(block: &Block) -> [f64; 64] {
        let sigma = |x: usize| if x == 0 { (0.5f64).sqrt() } else { 1.0 };
        let mut out = [0.0; 64];
        for u in 0..8 {
            for v in 0..8 {
                let mut acc = 0.0;
                for i in 0..8 {
                    for j in 0..8 {
                        acc += f64::from(block[i * 8 + j])
                            * (core::f64::consts::PI * (u * (2 * i + 1)) as f64 / 16.0).cos()
                            * (core::f64::consts::PI * (v * (2 * j + 1)) as f64 / 16.0).cos();
                    }
                }
                out[u * 8 + v] = 0.25 * sigma(u) * sigma(v) * acc;
            }
        }
        out
    }

    fn oracle_inverse(coeffs: &[f64; 64]) -> [f64; 64] {
        let sigma = |x: usize| if x == 0 { (0.5f64).sqrt() } else { 1.0 };
        let mut out = [0.0; 64];
        for i in 0..8 {
            for j in 0..8 {
                let mut acc = 0.0;
                for u in 0..8 {
                    for v in 0..8 {
                        acc += sigma(u)
                            * sigma(v)
                            * coeffs[u * 8 + v]
                            * (core::f64::consts::PI * (u * (2 * i + 1)) as f64 / 16.0).cos()
                            * (core::f64::consts::PI * (v * (2 * j + 1)) as f64 / 16.0).cos();
                    }
                }
                out[i * 8 + j] = 0.25 * acc;
            }
        }
        out
    }

    /// Walks anti-diagonals, alternating direction, starting rightwards.
    fn oracle_zigzag_order() -> Vec<(usize, usize)> {
        let mut order = Vec::new();
        for s in 0..15usize {
            let lo = s.saturating_sub(7);
            let hi = s.min(7);
            let rows: Vec<usize> = if s % 2 == 1 {
                (lo..=hi).collect()
            } else {
                (lo..=hi).rev().collect()
            };
            for r in rows {
                order.push((r, s - r));
            }
        }
        order
    }

    fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn constant_block() {
        let c = dct_forward(&[128; 64]);
        assert!((c.0[0] - 1024.0).abs() < 1e-9);
        assert!(c.0[1..].iter().all(|v| v.abs() < 1e-9));

        let mut dc = [0.0; 64];
        dc[0] = 1024.0;
        let back = dct_inverse(&CoeffBlock(dc));
        assert!(back.iter().all(|v| (v - 128.0).abs() < 1e-9));
    }

    #[test]
    fn zero_block() {
        assert!(dct_forward(&[0; 64]).0.iter().all(|&v| v == 0.0));
        assert!(dct_inverse(&CoeffBlock([0.0; 64])).iter().all(|&v| v == 0.0));
    }

    #[test]
    fn matches_direct_double_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let dct = Dct8::new();
        for _ in 0..200 {
            let mut block = [0i32; 64];
            block.iter_mut().for_each(|v| *v = rng.gen_range(0..=255));
            let fast = dct.forward(&block);
            assert!(max_abs_diff(&fast.0, &oracle_forward(&block)) < 1e-9);
            assert!(max_abs_diff(&dct.inverse(&fast), &oracle_inverse(&fast.0)) < 1e-9);
        }
    }

    #[test]
    fn quant_table_values() {
        let t = build_quant_table(75.0).unwrap();
        assert_eq!(t.entry(0, 0), 8.0);
        let t = build_quant_table(99.0).unwrap();
        assert_eq!(t.entry(0, 2), 1.0);
        assert!(build_quant_table(50.0).is_err());
        assert!(build_quant_table(100.0).is_err());
        assert!(build_quant_table(f64::NAN).is_err());
    }

    #[test]
    fn quantize_rounding() {
        let table = build_quant_table(75.0).unwrap(); // entry (0,0) = 8
        let q = |x: f64| {
            let mut c = [0.0; 64];
            c[0] = x;
            quantize(&CoeffBlock(c), &table).0[0]
        };
        assert_eq!(q(17.4), 2);
        assert_eq!(q(-12.6), -2);
        assert_eq!(q(4.0), 1);
        assert_eq!(q(-4.0), -1);
    }

    #[test]
    fn dequantize_rounding() {
        let table = build_quant_table(75.0).unwrap();
        let mut b = QuantBlock::default();
        b.0[0] = 2;
        assert_eq!(dequantize(&b, &table).0[0], 16.0);
        b.0[0] = 0;
        assert_eq!(dequantize(&b, &table).0[0], 0.0);
        assert_eq!(round_half_away(-3.0 * 8.5), -26.0);
        assert_eq!(round_half_away(25.5), 26.0);
    }

    #[test]
    fn zigzag_matches_diagonal_walk() {
        let order = oracle_zigzag_order();
        assert_eq!(&order[..6], &[(0, 0), (0, 1), (1, 0), (2, 0), (1, 1), (0, 2)]);
        for (k, &(r, c)) in order.iter().enumerate() {
            assert_eq!(ZIGZAG[k], r * 8 + c, "step {k}");
        }
        let mut m = QuantBlock::default();
        m.0[1] = 5;
        assert_eq!(zigzag(&m).0[1], 5);
    }

    proptest! {
        #[test]
        fn dct_round_trip(values in proptest::array::uniform32(0i32..=255), tail in proptest::array::uniform32(0i32..=255)) {
            let mut block = [0i32; 64];
            block[..32].copy_from_slice(&values);
            block[32..].copy_from_slice(&tail);
            let dct = Dct8::new();
            let back = dct.inverse(&dct.forward(&block));
            for (b, &o) in back.iter().zip(block.iter()) {
                prop_assert!((b - f64::from(o)).abs() < 1e-9);
            }
        }

        #[test]
        fn zigzag_bijection(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut m = QuantBlock::default();
            m.0.iter_mut().for_each(|v| *v = rng.gen_range(-2048..2048));
            prop_assert_eq!(inverse_zigzag(&zigzag(&m)), m);
        }

        #[test]
        fn quantize_error_bound(c in -2040.0f64..2040.0, mu in 50.001f64..99.999) {
            let table = build_quant_table(mu).unwrap();
            let mut coeffs = [0.0; 64];
            coeffs.iter_mut().for_each(|v| *v = c);
            let back = dequantize(&quantize(&CoeffBlock(coeffs), &table), &table);
            for (k, &q) in table.entries().iter().enumerate() {
                prop_assert!(q >= 1.0);
                prop_assert!((back.0[k] - c).abs() <= q / 2.0 + 0.5 + 1e-9);
            }
        }
    }
}
