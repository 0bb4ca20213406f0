//! Batch run over a directory of covers: embed, measure, summarise.
//!
//! The CSV starts with a `#` version line, then one `image` row per
//! processed cover (sorted by file name) and one `boxplot` row per metric.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use fracsteg_core::codec::{read_embedded_bits, HEADER_BITS};
use fracsteg_core::metrics::{boxplot_summary, evaluate};
use fracsteg_core::{embed, BoxplotSummary, Capacity, EmbedConfig, Image, MessageBits, MetricsReport, Mode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::report::format_psnr;

pub const CSV_VERSION: &str = "fracsteg-bench v1";
pub const DEFAULT_SEED: u64 = 42;

pub struct BenchSettings {
    pub config: EmbedConfig,
    /// `None` fills each cover to capacity.
    pub payload_bits: Option<usize>,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct BenchRow {
    pub file: String,
    pub width: usize,
    pub height: usize,
    pub channels: usize,
    pub payload_bits: usize,
    pub metrics: MetricsReport,
    pub bit_errors: usize,
}

impl BenchRow {
    /// Payload bit-error rate; 0 for an empty payload.
    pub fn ber(&self) -> f64 {
        if self.payload_bits == 0 {
            0.0
        } else {
            self.bit_errors as f64 / self.payload_bits as f64
        }
    }
}

#[derive(Clone, Debug)]
pub struct BenchRun {
    pub dataset: PathBuf,
    pub rows: Vec<BenchRow>,
    /// `(metric, summary)`; the summary is `None` when no finite values exist.
    pub summaries: Vec<(&'static str, Option<BoxplotSummary>)>,
    /// `(file, reason)` for covers that could not be processed.
    pub skipped: Vec<(String, String)>,
}

pub fn payload(seed: u64, bits: usize) -> MessageBits {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    MessageBits::from_bits((0..bits).map(|_| rng.gen()).collect())
}

/// Embeds the seeded payload into one cover and measures the result.
/// Returns the metrics, the payload length and the payload bit errors.
pub fn bench_image(cover: &Image, settings: &BenchSettings) -> Result<(MetricsReport, usize, usize)> {
    let capacity = Capacity::for_image(cover).payload;
    let bits = settings.payload_bits.unwrap_or(capacity);
    let message = payload(settings.seed, bits);
    let stego = embed(cover, &message, &settings.config)?;
    let metrics = evaluate(cover, &stego.to_image())?;
    let read = read_embedded_bits(&stego, &settings.config, HEADER_BITS + bits)?;
    let bit_errors = read[HEADER_BITS..]
        .iter()
        .zip(message.bits())
        .filter(|(a, b)| a != b)
        .count();
    Ok((metrics, bits, bit_errors))
}

fn dataset_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let io_err = |source| Error::Io {
        path: dir.to_path_buf(),
        source,
    };
    let mut files = Vec::new();
    for entry in fs::read_dir(dir).map_err(io_err)? {
        let entry = entry.map_err(io_err)?;
        if entry.file_type().map_err(io_err)?.is_file() {
            files.push(entry.path());
        }
    }
    files.sort();
    Ok(files)
}

fn file_name(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default()
}

pub fn run_bench(dataset: &Path, settings: &BenchSettings) -> Result<BenchRun> {
    let files = dataset_files(dataset)?;
    let outcomes: Vec<Result<BenchRow>> = files
        .par_iter()
        .map(|path| {
            let cover = crate::load_image(path)?;
            let (metrics, payload_bits, bit_errors) = bench_image(&cover, settings)?;
            Ok(BenchRow {
                file: file_name(path),
                width: cover.width(),
                height: cover.height(),
                channels: cover.channels(),
                payload_bits,
                metrics,
                bit_errors,
            })
        })
        .collect();

    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for (path, outcome) in files.iter().zip(outcomes) {
        match outcome {
            Ok(row) => rows.push(row),
            Err(e) => skipped.push((file_name(path), e.to_string())),
        }
    }
    if rows.is_empty() {
        return Err(Error::EmptyDataset(dataset.to_path_buf()));
    }
    let summaries = summarise(&rows);
    Ok(BenchRun {
        dataset: dataset.to_path_buf(),
        rows,
        summaries,
        skipped,
    })
}

type Column = (&'static str, fn(&BenchRow) -> f64);

const SUMMARISED: [Column; 6] = [
    ("psnr_db", |r| r.metrics.psnr),
    ("mse", |r| r.metrics.mse),
    ("uiqi", |r| r.metrics.uiqi),
    ("image_fidelity", |r| r.metrics.image_fidelity),
    ("relative_entropy", |r| r.metrics.relative_entropy),
    ("ber", BenchRow::ber),
];

fn summarise(rows: &[BenchRow]) -> Vec<(&'static str, Option<BoxplotSummary>)> {
    SUMMARISED
        .iter()
        .map(|&(name, get)| {
            // an identical stego gives infinite PSNR; it cannot sit on a box plot
            let values: Vec<f64> = rows.iter().map(get).filter(|v| v.is_finite()).collect();
            (name, boxplot_summary(&values).ok())
        })
        .collect()
}

fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Pixel => "pixel",
        Mode::Coefficient => "coefficient",
    }
}

/// Writes the CSV. Only public configuration is echoed.
pub fn write_csv<W: Write>(run: &BenchRun, settings: &BenchSettings, mut out: W) -> Result<()> {
    let payload = match settings.payload_bits {
        Some(bits) => bits.to_string(),
        None => "max".to_owned(),
    };
    writeln!(
        out,
        "# {CSV_VERSION} mu={} mode={} payload_bits={payload} seed={}",
        settings.config.quality.get(),
        mode_name(settings.config.mode),
        settings.seed,
    )?;

    let mut csv = csv::WriterBuilder::new().flexible(true).from_writer(out);
    csv.write_record([
        "section",
        "file",
        "width",
        "height",
        "channels",
        "payload_bits",
        "psnr_db",
        "mse",
        "xi",
        "uiqi",
        "image_fidelity",
        "relative_entropy",
        "bit_errors",
        "ber",
    ])?;
    for r in &run.rows {
        let m = &r.metrics;
        csv.write_record([
            "image".to_owned(),
            r.file.clone(),
            r.width.to_string(),
            r.height.to_string(),
            r.channels.to_string(),
            r.payload_bits.to_string(),
            format_psnr(m.psnr),
            m.mse.to_string(),
            m.peak.to_string(),
            m.uiqi.to_string(),
            m.image_fidelity.to_string(),
            m.relative_entropy.to_string(),
            r.bit_errors.to_string(),
            r.ber().to_string(),
        ])?;
    }

    csv.write_record([
        "section",
        "metric",
        "q1",
        "median",
        "q3",
        "iqr",
        "lower_fence",
        "upper_fence",
        "outliers",
    ])?;
    for (name, summary) in &run.summaries {
        let mut record = vec!["boxplot".to_owned(), (*name).to_owned()];
        match summary {
            Some(s) => record.extend(
                [s.q1, s.median, s.q3, s.iqr, s.lower_fence, s.upper_fence]
                    .iter()
                    .map(f64::to_string)
                    .chain([s.outliers.len().to_string()]),
            ),
            None => record.extend(std::iter::repeat_n(String::new(), 7)),
        }
        csv.write_record(&record)?;
    }
    csv.flush()?;
    Ok(())
}
