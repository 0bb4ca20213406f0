//! Cover/stego comparison metrics and box-plot statistics.
//!
//! The pixel metrics pool every sample of every channel. Sums are
//! accumulated in exact integer arithmetic and only the final ratios are
//! taken in floating point.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::image::Image;

/// Floor applied to empty stego histogram bins in the relative entropy.
pub const ENTROPY_FLOOR: f64 = 1e-10;

#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Psnr {
    /// Decibels; `f64::INFINITY` when the images are identical.
    pub psnr: f64,
    pub mse: f64,
    /// Peak value: the largest sample found in either image.
    pub peak: u8,
}

#[derive(Clone, Copy, PartialEq, Debug)]
pub struct MetricsReport {
    pub psnr: f64,
    pub mse: f64,
    pub peak: u8,
    pub uiqi: f64,
    pub image_fidelity: f64,
    pub relative_entropy: f64,
}

fn paired<'a>(cover: &'a Image, stego: &'a Image) -> Result<(&'a [u8], &'a [u8])> {
    if !cover.same_geometry(stego) {
        return Err(Error::GeometryMismatch);
    }
    Ok((cover.samples(), stego.samples()))
}

fn squared_error(c: &[u8], s: &[u8]) -> u64 {
    c.iter()
        .zip(s)
        .map(|(&a, &b)| {
            let d = u64::from(a.abs_diff(b));
            d * d
        })
        .sum()
}

/// PSNR with the peak taken from the data rather than fixed at 255.
pub fn psnr(cover: &Image, stego: &Image) -> Result<Psnr> {
    let (c, s) = paired(cover, stego)?;
    let peak = c.iter().chain(s).copied().max().unwrap_or(0);
    let sse = squared_error(c, s);
    let mse = sse as f64 / c.len() as f64;
    let psnr = if sse == 0 {
        f64::INFINITY
    } else {
        let peak = f64::from(peak);
        10.0 * libm::log10(peak * peak / mse)
    };
    Ok(Psnr { psnr, mse, peak })
}

/// Global universal image quality index with `N - 1` normalisation.
///
/// Two constant images with equal means score 1; any other zero
/// denominator scores 0.
pub fn uiqi(cover: &Image, stego: &Image) -> Result<f64> {
    let (c, s) = paired(cover, stego)?;
    let n = c.len() as i128;
    if n < 2 {
        return Err(Error::TooFewSamples(2));
    }
    let (mut sc, mut ss, mut scc, mut sss, mut scs) = (0i128, 0i128, 0i128, 0i128, 0i128);
    for (&a, &b) in c.iter().zip(s) {
        let (a, b) = (i128::from(a), i128::from(b));
        sc += a;
        ss += b;
        scc += a * a;
        sss += b * b;
        scs += a * b;
    }
    // Each of these is the corresponding (co)variance times N(N - 1).
    let var_c = n * scc - sc * sc;
    let var_s = n * sss - ss * ss;
    let cov = n * scs - sc * ss;
    if var_c + var_s == 0 {
        return Ok(if sc == ss { 1.0 } else { 0.0 });
    }
    let mean_den = sc * sc + ss * ss;
    if mean_den == 0 {
        return Ok(0.0);
    }
    let structure = 4.0 * cov as f64 / (var_c + var_s) as f64;
    let luminance = (sc * ss) as f64 / mean_den as f64;
    Ok((structure * luminance).clamp(-1.0, 1.0))
}

/// `1 - Σ(C - S)² / ΣC²`.
pub fn image_fidelity(cover: &Image, stego: &Image) -> Result<f64> {
    let (c, s) = paired(cover, stego)?;
    let energy: u64 = c.iter().map(|&a| u64::from(a) * u64::from(a)).sum();
    if energy == 0 {
        return Err(Error::ZeroCover);
    }
    Ok(1.0 - squared_error(c, s) as f64 / energy as f64)
}

fn histogram(samples: &[u8]) -> [u64; 256] {
    let mut h = [0u64; 256];
    for &v in samples {
        h[usize::from(v)] += 1;
    }
    h
}

/// Relative entropy between the pooled 256-bin histograms, in nats.
pub fn relative_entropy(cover: &Image, stego: &Image) -> Result<f64> {
    let (c, s) = paired(cover, stego)?;
    let (hc, hs) = (histogram(c), histogram(s));
    let n = c.len() as f64;
    let mut total = 0.0;
    for (&a, &b) in hc.iter().zip(hs.iter()) {
        if a == 0 {
            continue;
        }
        let pc = a as f64 / n;
        let ps = if b == 0 { ENTROPY_FLOOR } else { b as f64 / n };
        total += pc * libm::fabs(libm::log(pc / ps));
    }
    Ok(total)
}

pub fn evaluate(cover: &Image, stego: &Image) -> Result<MetricsReport> {
    let p = psnr(cover, stego)?;
    Ok(MetricsReport {
        psnr: p.psnr,
        mse: p.mse,
        peak: p.peak,
        uiqi: uiqi(cover, stego)?,
        image_fidelity: image_fidelity(cover, stego)?,
        relative_entropy: relative_entropy(cover, stego)?,
    })
}

#[derive(Clone, PartialEq, Debug)]
pub struct BoxplotSummary {
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub iqr: f64,
    pub lower_fence: f64,
    pub upper_fence: f64,
    /// Values strictly outside the fences, ascending.
    pub outliers: Vec<f64>,
}

/// Quantile at `p` by linear interpolation between order statistics at
/// position `p·(n-1)`. `nth(k)` must return the k-th smallest value.
fn interpolated(len: usize, p: f64, mut nth: impl FnMut(usize) -> f64) -> f64 {
    let pos = p * (len - 1) as f64;
    let lo = libm::floor(pos) as usize;
    let low = nth(lo);
    if lo + 1 >= len {
        return low;
    }
    let high = nth(lo + 1);
    low + (high - low) * (pos - lo as f64)
}

pub fn boxplot_summary(values: &[f64]) -> Result<BoxplotSummary> {
    if values.is_empty() {
        return Err(Error::TooFewSamples(1));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteInput);
    }
    let mut scratch = values.to_vec();
    let mut nth = |k: usize| *scratch.select_nth_unstable_by(k, f64::total_cmp).1;
    let q1 = interpolated(values.len(), 0.25, &mut nth);
    let median = interpolated(values.len(), 0.5, &mut nth);
    let q3 = interpolated(values.len(), 0.75, &mut nth);
    let iqr = q3 - q1;
    let lower_fence = q1 - 1.5 * iqr;
    let upper_fence = q3 + 1.5 * iqr;
    let mut outliers: Vec<f64> = values
        .iter()
        .copied()
        .filter(|&v| v < lower_fence || v > upper_fence)
        .collect();
    outliers.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    Ok(BoxplotSummary {
        q1,
        median,
        q3,
        iqr,
        lower_fence,
        upper_fence,
        outliers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn constant(w: usize, h: usize, c: usize, v: u8) -> Image {
        Image::new(w, h, c, vec![v; w * h * c]).unwrap()
    }

    #[test]
    fn identical_images() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let img = Image::from_fn(16, 16, 3, |_, _, _| rng.gen()).unwrap();
        let r = evaluate(&img, &img).unwrap();
        assert_eq!(r.psnr, f64::INFINITY);
        assert_eq!(r.mse, 0.0);
        assert_eq!(r.uiqi, 1.0);
        assert_eq!(r.image_fidelity, 1.0);
        assert_eq!(r.relative_entropy, 0.0);
    }

    #[test]
    fn psnr_single_sample() {
        let cover = constant(512, 512, 3, 0);
        let mut stego = cover.clone();
        stego.samples_mut()[1234] = 1;
        let p = psnr(&cover, &stego).unwrap();
        assert_eq!(p.peak, 1);
        assert_eq!(p.mse, 1.0 / 786432.0);
        assert!((p.psnr - 58.95661).abs() < 1e-4);
        assert_eq!(psnr(&stego, &cover).unwrap(), p);
    }

    #[test]
    fn geometry_mismatch() {
        let a = constant(8, 8, 1, 3);
        let b = constant(16, 8, 1, 3);
        assert_eq!(psnr(&a, &b).unwrap_err(), Error::GeometryMismatch);
        assert_eq!(uiqi(&a, &b).unwrap_err(), Error::GeometryMismatch);
        assert_eq!(relative_entropy(&a, &b).unwrap_err(), Error::GeometryMismatch);
        assert_eq!(image_fidelity(&a, &b).unwrap_err(), Error::GeometryMismatch);
    }

    #[test]
    fn uiqi_degenerate_cases() {
        let a = constant(8, 8, 1, 10);
        assert_eq!(uiqi(&a, &a).unwrap(), 1.0);
        assert_eq!(uiqi(&a, &constant(8, 8, 1, 11)).unwrap(), 0.0);
        let z = constant(8, 8, 1, 0);
        assert_eq!(uiqi(&z, &z).unwrap(), 1.0);
    }

    #[test]
    fn fidelity_cases() {
        let ones = constant(8, 8, 3, 1);
        let zeros = constant(8, 8, 3, 0);
        assert_eq!(image_fidelity(&ones, &zeros).unwrap(), 0.0);
        assert_eq!(image_fidelity(&zeros, &ones).unwrap_err(), Error::ZeroCover);
    }

    #[test]
    fn entropy_disjoint_support() {
        let re = relative_entropy(&constant(8, 8, 1, 0), &constant(8, 8, 1, 1)).unwrap();
        assert!((re - 23.025850929940457).abs() < 1e-9);
    }

    #[test]
    fn boxplot_examples() {
        let b = boxplot_summary(&[1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        assert_eq!((b.q1, b.median, b.q3, b.iqr), (2.0, 3.0, 4.0, 2.0));
        assert_eq!((b.lower_fence, b.upper_fence), (-1.0, 7.0));
        assert!(b.outliers.is_empty());

        let b = boxplot_summary(&[1.0, 1.0, 100.0, 1.0, 1.0]).unwrap();
        assert_eq!(b.outliers, vec![100.0]);

        let b = boxplot_summary(&[4.5]).unwrap();
        assert_eq!((b.q1, b.median, b.q3), (4.5, 4.5, 4.5));
        assert!(b.outliers.is_empty());

        assert_eq!(boxplot_summary(&[]).unwrap_err(), Error::TooFewSamples(1));
        assert_eq!(boxplot_summary(&[1.0, f64::NAN]).unwrap_err(), Error::NonFiniteInput);
    }

    #[test]
    fn boxplot_permutation_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let n = rng.gen_range(1..40);
            let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-50.0..50.0)).collect();
            let a = boxplot_summary(&v).unwrap();
            v.reverse();
            v.rotate_left(n / 3);
            assert_eq!(boxplot_summary(&v).unwrap(), a);
        }
    }

    #[test]
    fn bounds_hold_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let a = Image::from_fn(8, 8, 1, |_, _, _| rng.gen()).unwrap();
            let b = Image::from_fn(8, 8, 1, |_, _, _| rng.gen()).unwrap();
            let q = uiqi(&a, &b).unwrap();
            assert!((-1.0..=1.0).contains(&q));
            assert!(relative_entropy(&a, &b).unwrap() >= 0.0);
            assert!(psnr(&a, &b).unwrap().mse >= 0.0);
        }
    }
}
