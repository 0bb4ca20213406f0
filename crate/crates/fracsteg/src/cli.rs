//! Argument parsing and the four subcommands.
//!
//! Secret values are taken as raw strings and parsed here, so a malformed
//! value is reported without being echoed back.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fracsteg_core::metrics::{evaluate, psnr};
use fracsteg_core::{
    embed, extract, Capacity, EmbedConfig, FractionalMapParams, MessageBits, Mode, Quality,
    SecretKey, Stego,
};

use crate::bench::{run_bench, write_csv, BenchSettings, DEFAULT_SEED};
use crate::error::{Error, Result};
use crate::report::{format_psnr, to_json, to_text};

#[derive(Parser)]
#[command(name = "fracsteg", version, about = "Hide bits in quantized DCT coefficients")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Embed a message file into a cover image.
    Embed(EmbedArgs),
    /// Recover the message from a stego artefact.
    Extract(ExtractArgs),
    /// Compare a cover with a stego image.
    Metrics(MetricsArgs),
    /// Embed a seeded payload into every image of a directory and write CSV.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, ValueEnum)]
pub enum ModeArg {
    #[default]
    Pixel,
    Coefficient,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Pixel => Mode::Pixel,
            ModeArg::Coefficient => Mode::Coefficient,
        }
    }
}

#[derive(Args)]
pub struct SecretArgs {
    /// 128-bit key as 32 hex characters.
    #[arg(long, env = "STEGO_KEY", hide_env_values = true, value_name = "HEX")]
    key: String,
    /// Initial condition of the map, in (0, 1).
    #[arg(long, env = "STEGO_X0", hide_env_values = true, allow_hyphen_values = true)]
    x0: String,
    /// Fractional order, in (0, 1].
    #[arg(long, env = "STEGO_NU", hide_env_values = true, allow_hyphen_values = true)]
    nu: String,
    /// Map gain, in (0, 4]. Defaults to 3.9.
    #[arg(long, env = "STEGO_GAIN", hide_env_values = true, allow_hyphen_values = true)]
    gain: Option<String>,
}

#[derive(Args)]
pub struct CodecArgs {
    #[command(flatten)]
    secrets: SecretArgs,
    /// Quality factor, strictly between 50 and 100.
    #[arg(long, default_value_t = 75.0)]
    mu: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::Pixel)]
    mode: ModeArg,
}

#[derive(Args)]
pub struct EmbedArgs {
    #[arg(long)]
    cover: PathBuf,
    #[arg(long)]
    message: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    codec: CodecArgs,
}

#[derive(Args)]
pub struct ExtractArgs {
    #[arg(long)]
    stego: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    codec: CodecArgs,
}

#[derive(Args)]
pub struct MetricsArgs {
    #[arg(long)]
    cover: PathBuf,
    /// BMP image or SCQ1 record.
    #[arg(long)]
    stego: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
pub struct BenchArgs {
    #[arg(long)]
    dataset: PathBuf,
    /// CSV destination; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Payload size per image; each cover is filled to capacity when omitted.
    #[arg(long)]
    payload_bits: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[command(flatten)]
    codec: CodecArgs,
}

fn secret_number(flag: &str, text: &str) -> Result<f64> {
    text.trim()
        .parse()
        .map_err(|_| Error::Params(format!("--{flag} is not a number")))
}

impl CodecArgs {
    pub fn config(&self) -> Result<EmbedConfig> {
        let s = &self.secrets;
        let key = SecretKey::from_hex(s.key.trim())?;
        let x0 = secret_number("x0", &s.x0)?;
        let nu = secret_number("nu", &s.nu)?;
        let map = match &s.gain {
            Some(g) => FractionalMapParams::new(x0, nu, secret_number("gain", g)?)?,
            None => FractionalMapParams::with_default_gain(x0, nu)?,
        };
        let quality = Quality::new(self.mu)?;
        Ok(EmbedConfig::new(key, map, quality, self.mode.into()))
    }
}

pub fn run(cli: Cli, out: &mut dyn Write, log: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Embed(a) => cmd_embed(&a, out),
        Command::Extract(a) => cmd_extract(&a, out),
        Command::Metrics(a) => cmd_metrics(&a, out),
        Command::Bench(a) => cmd_bench(&a, out, log),
    }
}

pub fn cmd_embed(args: &EmbedArgs, out: &mut dyn Write) -> Result<()> {
    let cfg = args.codec.config()?;
    let cover = crate::load_image(&args.cover)?;
    let message = MessageBits::from_bytes(&crate::read_file(&args.message)?);
    let capacity = Capacity::for_image(&cover);
    let stego = embed(&cover, &message, &cfg)?;
    crate::save_stego(&stego, &args.out)?;
    writeln!(out, "capacity_bits: {}", capacity.payload)?;
    writeln!(out, "payload_bits: {}", message.len())?;
    if let Stego::Pixels(img) = &stego {
        writeln!(out, "psnr_db: {}", format_psnr(psnr(&cover, img)?.psnr))?;
    }
    Ok(())
}

pub fn cmd_extract(args: &ExtractArgs, out: &mut dyn Write) -> Result<()> {
    let cfg = args.codec.config()?;
    let stego = match cfg.mode {
        Mode::Pixel => Stego::Pixels(crate::load_image(&args.stego)?),
        Mode::Coefficient => Stego::Coefficients(crate::load_record(&args.stego)?),
    };
    let message = extract(&stego, &cfg)?;
    crate::write_file(&args.out, &message.to_bytes())?;
    writeln!(out, "payload_bits: {}", message.len())?;
    Ok(())
}

pub fn cmd_metrics(args: &MetricsArgs, out: &mut dyn Write) -> Result<()> {
    let cover = crate::load_image(&args.cover)?;
    let stego = crate::load_stego(&args.stego)?;
    let report = evaluate(&cover, &stego.to_image())?;
    if args.json {
        writeln!(out, "{}", to_json(&report))?;
    } else {
        write!(out, "{}", to_text(&report))?;
    }
    Ok(())
}

pub fn cmd_bench(args: &BenchArgs, out: &mut dyn Write, log: &mut dyn Write) -> Result<()> {
    let settings = BenchSettings {
        config: args.codec.config()?,
        payload_bits: args.payload_bits,
        seed: args.seed,
    };
    writeln!(log, "payload seed: {}", settings.seed)?;
    let run = run_bench(&args.dataset, &settings)?;
    for (file, reason) in &run.skipped {
        writeln!(log, "skipped {file}: {reason}")?;
    }
    let mut csv = Vec::new();
    write_csv(&run, &settings, &mut csv)?;
    match &args.out {
        Some(path) => crate::write_file(path, &csv)?,
        None => out.write_all(&csv)?,
    }
    writeln!(log, "processed {} of {} files", run.rows.len(), run.rows.len() + run.skipped.len())?;
    Ok(())
}
