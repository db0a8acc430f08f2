//! Monte-Carlo BLER estimation over BPSK/AWGN.
//!
//! Frame `i` of SNR point `s` draws everything (payload and noise) from a
//! ChaCha8 stream seeded with a SplitMix64 mix of `(seed, s, i)`, so results
//! do not depend on how frames are scheduled over worker threads. Frames are
//! decoded in fixed-size batches; the error counters are then scanned in
//! frame order and the point ends at the exact frame that reaches
//! `min_errors` (or at `max_frames`).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::{classify, ClassifyOptions};
use crate::codec::{polar_transform, FKernel};
use crate::construction::{CodeDescriptor, PolarCode};
use crate::crc::CrcSpec;
use crate::error::{param, Result};
use crate::fast::{FastListDecoder, FastScDecoder};
use crate::list::ListDecoder;
use crate::sc::ScDecoder;
use crate::scalar::Llr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    /// Full-tree SC.
    Sc,
    /// SC stopping at special nodes.
    Fastssc,
    /// Full-tree SCL.
    Scl,
    /// SCL stopping at special nodes.
    Ssclspc,
}

impl Algorithm {
    pub fn is_list(self) -> bool {
        matches!(self, Algorithm::Scl | Algorithm::Ssclspc)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CrcChoice {
    #[default]
    None,
    Crc8,
    Crc16,
}

impl CrcChoice {
    pub fn spec(self) -> Option<CrcSpec> {
        match self {
            CrcChoice::None => None,
            CrcChoice::Crc8 => Some(CrcSpec::CRC8),
            CrcChoice::Crc16 => Some(CrcSpec::CRC16),
        }
    }

    pub fn width(self) -> usize {
        self.spec().map_or(0, |s| s.width())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SnrUnit {
    /// Eb/N0 in dB, rate-compensated with the payload rate.
    #[default]
    Ebn0,
    /// Es/N0 in dB (per channel symbol).
    Esn0,
}

fn default_list_size() -> usize {
    4
}
fn default_min_errors() -> u64 {
    100
}
fn default_max_frames() -> u64 {
    1_000_000
}
fn default_batch() -> u64 {
    256
}
fn default_kernel() -> FKernel {
    FKernel::MinSum
}
fn default_true() -> bool {
    true
}

/// One simulation series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    /// Series name used in plot data; defaults to a summary of the setup.
    #[serde(default)]
    pub label: Option<String>,
    /// Path to a code descriptor (relative paths resolve against the
    /// config file's directory when loaded with [`load_configs`]).
    #[serde(default)]
    pub code: Option<PathBuf>,
    /// Inline code descriptor, used when `code` is absent.
    #[serde(default)]
    pub descriptor: Option<CodeDescriptor>,
    pub decoder: Algorithm,
    #[serde(default)]
    pub nodes: ClassifyOptions,
    #[serde(default = "default_list_size")]
    pub list_size: usize,
    #[serde(default)]
    pub crc: CrcChoice,
    pub snr_db: Vec<f64>,
    #[serde(default)]
    pub snr_unit: SnrUnit,
    #[serde(default = "default_min_errors")]
    pub min_errors: u64,
    #[serde(default = "default_max_frames")]
    pub max_frames: u64,
    #[serde(default)]
    pub seed: u64,
    /// Worker threads; 0 uses every available core.
    #[serde(default)]
    pub workers: usize,
    /// Frames decoded per parallel batch.
    #[serde(default = "default_batch")]
    pub batch: u64,
    #[serde(default = "default_kernel")]
    pub kernel: FKernel,
    /// When false the `seconds` column is written as 0 so that repeated runs
    /// produce identical output.
    #[serde(default = "default_true")]
    pub record_timing: bool,
}

impl SimConfig {
    /// A config with default stop rule and options for `code`.
    pub fn new(code: &PolarCode, decoder: Algorithm, snr_db: Vec<f64>) -> Self {
        Self {
            label: None,
            code: None,
            descriptor: Some(code.to_descriptor()),
            decoder,
            nodes: ClassifyOptions::default(),
            list_size: default_list_size(),
            crc: CrcChoice::None,
            snr_db,
            snr_unit: SnrUnit::Ebn0,
            min_errors: default_min_errors(),
            max_frames: default_max_frames(),
            seed: 0,
            workers: 0,
            batch: default_batch(),
            kernel: default_kernel(),
            record_timing: true,
        }
    }

    pub fn load_code(&self) -> Result<PolarCode> {
        match (&self.code, &self.descriptor) {
            (Some(path), _) => PolarCode::load(path),
            (None, Some(desc)) => PolarCode::from_descriptor(desc),
            (None, None) => Err(param("config names no code")),
        }
    }

    pub fn validate(&self, code: &PolarCode) -> Result<()> {
        if self.snr_db.is_empty() {
            return Err(param("SNR grid is empty"));
        }
        if self.snr_db.iter().any(|s| !s.is_finite()) {
            return Err(param("SNR grid has non-finite values"));
        }
        if self.snr_db.windows(2).any(|w| w[1] <= w[0]) {
            return Err(param("SNR grid must be strictly increasing"));
        }
        if self.min_errors == 0 {
            return Err(param("min_errors must be at least 1"));
        }
        if self.max_frames == 0 || self.batch == 0 {
            return Err(param("max_frames and batch must be at least 1"));
        }
        if self.decoder.is_list() && self.list_size == 0 {
            return Err(param("list size must be at least 1"));
        }
        if self.crc.width() > code.k() {
            return Err(param(format!(
                "CRC of width {} does not fit in {} unfrozen bits",
                self.crc.width(),
                code.k()
            )));
        }
        if self.snr_unit == SnrUnit::Ebn0 && code.k() == self.crc.width() {
            return Err(param("Eb/N0 is undefined for a code without payload bits"));
        }
        Ok(())
    }

    pub fn display_label(&self) -> String {
        if let Some(l) = &self.label {
            return l.clone();
        }
        let mut s = format!("{:?}", self.decoder).to_lowercase();
        if matches!(self.decoder, Algorithm::Fastssc | Algorithm::Ssclspc) {
            let o = &self.nodes;
            if o.enable_grep {
                s.push_str("+grep");
            }
            if o.enable_gpc {
                s.push_str("+gpc");
            }
            if o.max_af > 0 {
                let _ = write!(s, "+rgpc{}af", o.max_af);
            }
        }
        if self.decoder.is_list() {
            let _ = write!(s, " L={}", self.list_size);
        }
        if self.crc != CrcChoice::None {
            let _ = write!(s, " {:?}", self.crc);
            s = s.to_lowercase();
        }
        s
    }
}

/// Reads a JSON file holding either one config object or an array of them.
/// Relative `code` paths are resolved against the file's directory.
pub fn load_configs(path: impl AsRef<Path>) -> Result<Vec<SimConfig>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    let mut configs: Vec<SimConfig> = match value {
        serde_json::Value::Array(_) => serde_json::from_value(value)?,
        other => vec![serde_json::from_value(other)?],
    };
    let base = path.parent().unwrap_or(Path::new("."));
    for cfg in &mut configs {
        if let Some(code) = &cfg.code {
            if code.is_relative() {
                cfg.code = Some(base.join(code));
            }
        }
    }
    Ok(configs)
}

/// Statistics of one SNR point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnrPoint {
    pub snr_db: f64,
    pub sigma: f64,
    pub frames: u64,
    pub frame_errors: u64,
    pub bit_errors: u64,
    pub bler: f64,
    pub bler_ci_lo: f64,
    pub bler_ci_hi: f64,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub label: String,
    /// Payload bits per channel use, used for Eb/N0 conversion.
    pub effective_rate: f64,
    pub snr_unit: SnrUnit,
    pub points: Vec<SnrPoint>,
}

pub const CSV_HEADER: &str =
    "snr_db,frames,frame_errors,bit_errors,bler,bler_ci_lo,bler_ci_hi,seconds";

fn csv_row(out: &mut String, p: &SnrPoint) {
    let _ = writeln!(
        out,
        "{},{},{},{},{:.6e},{:.6e},{:.6e},{:.3}",
        p.snr_db, p.frames, p.frame_errors, p.bit_errors, p.bler, p.bler_ci_lo, p.bler_ci_hi, p.seconds
    );
}

impl SimResult {
    pub fn to_csv(&self) -> String {
        let mut out = format!("{CSV_HEADER}\n");
        for p in &self.points {
            csv_row(&mut out, p);
        }
        out
    }
}

/// CSV of several series; a leading `series` column is added when there is
/// more than one.
pub fn results_to_csv(results: &[SimResult]) -> String {
    match results {
        [single] => single.to_csv(),
        _ => {
            let mut out = format!("series,{CSV_HEADER}\n");
            for r in results {
                for p in &r.points {
                    let mut row = String::new();
                    csv_row(&mut row, p);
                    let _ = write!(out, "{},{row}", csv_field(&r.label));
                }
            }
            out
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// One JSON object per series with parallel arrays, for external plotting.
pub fn plot_data(results: &[SimResult]) -> serde_json::Value {
    let series: Vec<serde_json::Value> = results
        .iter()
        .map(|r| {
            let col = |f: fn(&SnrPoint) -> f64| r.points.iter().map(f).collect::<Vec<f64>>();
            serde_json::json!({
                "label": r.label,
                "snr_unit": r.snr_unit,
                "snr_db": col(|p| p.snr_db),
                "bler": col(|p| p.bler),
                "bler_ci_lo": col(|p| p.bler_ci_lo),
                "bler_ci_hi": col(|p| p.bler_ci_hi),
                "frames": r.points.iter().map(|p| p.frames).collect::<Vec<_>>(),
            })
        })
        .collect();
    serde_json::json!({ "series": series })
}

/// Wilson score interval at 95% confidence.
pub fn wilson_interval(errors: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    const Z: f64 = 1.959_963_984_540_054;
    let n = trials as f64;
    let p = errors as f64 / n;
    let z2 = Z * Z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if errors == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if errors == trials { 1.0 } else { (center + half).min(1.0) };
    (lo, hi)
}

/// Noise standard deviation for an SNR in dB. `rate` is only used for Eb/N0.
pub fn snr_to_sigma(snr_db: f64, unit: SnrUnit, rate: f64) -> f64 {
    let lin = 10f64.powf(snr_db / 10.0);
    let es = match unit {
        SnrUnit::Ebn0 => rate * lin,
        SnrUnit::Esn0 => lin,
    };
    (1.0 / (2.0 * es)).sqrt()
}

/// BPSK (`b -> 1 - 2b`) over AWGN, returning channel LLRs `2y/σ²`.
pub fn awgn_bpsk_llrs<T: Llr, R: Rng + ?Sized>(x: &[u8], sigma: f64, rng: &mut R) -> Vec<T> {
    assert!(sigma > 0.0, "sigma must be positive");
    let scale = 2.0 / (sigma * sigma);
    x.iter()
        .map(|&b| {
            let n: f64 = rng.sample(StandardNormal);
            let y = 1.0 - 2.0 * f64::from(b) + sigma * n;
            T::from_f64_lossy(scale * y)
        })
        .collect()
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the RNG stream used by frame `frame` of SNR point `snr_index`.
pub fn frame_seed(seed: u64, snr_index: usize, frame: u64) -> u64 {
    let a = splitmix64(seed);
    let b = splitmix64(a ^ snr_index as u64);
    splitmix64(b ^ frame)
}

/// A decoder selected by [`Algorithm`], holding its own scratch state.
#[derive(Debug, Clone)]
pub enum SimDecoder {
    Sc(ScDecoder<f64>),
    FastSc(FastScDecoder<f64>),
    List(ListDecoder<f64>),
    FastList(FastListDecoder<f64>),
}

impl SimDecoder {
    pub fn new(code: &PolarCode, cfg: &SimConfig) -> Self {
        let crc = cfg.crc.spec();
        match cfg.decoder {
            Algorithm::Sc => SimDecoder::Sc(ScDecoder::new(code, cfg.kernel)),
            Algorithm::Fastssc => {
                SimDecoder::FastSc(FastScDecoder::new(code, classify(code, &cfg.nodes), cfg.kernel))
            }
            Algorithm::Scl => {
                SimDecoder::List(ListDecoder::new(code, cfg.list_size, crc, cfg.kernel))
            }
            Algorithm::Ssclspc => SimDecoder::FastList(FastListDecoder::new(
                code,
                classify(code, &cfg.nodes),
                cfg.list_size,
                crc,
                cfg.kernel,
            )),
        }
    }

    /// Returns `û`.
    pub fn decode(&mut self, llrs: &[f64]) -> Vec<u8> {
        match self {
            SimDecoder::Sc(d) => d.decode_in_place(llrs).to_vec(),
            SimDecoder::FastSc(d) => d.decode_in_place(llrs).to_vec(),
            SimDecoder::List(d) => d.decode(llrs).u_hat,
            SimDecoder::FastList(d) => d.decode(llrs).u_hat,
        }
    }
}

/// Outcome of a single simulated frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrameOutcome {
    pub frame_error: bool,
    pub bit_errors: u64,
}

struct FrameContext {
    code: PolarCode,
    info: Vec<usize>,
    crc: Option<CrcSpec>,
    payload_len: usize,
}

impl FrameContext {
    fn new(code: PolarCode, crc: Option<CrcSpec>) -> Self {
        let info = code.info_indices();
        let payload_len = info.len() - crc.map_or(0, |c| c.width());
        Self {
            code,
            info,
            crc,
            payload_len,
        }
    }

    fn run(&self, dec: &mut SimDecoder, sigma: f64, seed: u64) -> FrameOutcome {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let payload: Vec<u8> = (0..self.payload_len).map(|_| rng.gen_range(0..=1u8)).collect();
        let message = match &self.crc {
            Some(c) => c.attach(&payload),
            None => payload.clone(),
        };
        let mut x = vec![0u8; self.code.len()];
        for (&i, &b) in self.info.iter().zip(&message) {
            x[i] = b;
        }
        polar_transform(&mut x);
        let llrs: Vec<f64> = awgn_bpsk_llrs(&x, sigma, &mut rng);
        let u_hat = dec.decode(&llrs);
        let bit_errors = self
            .info
            .iter()
            .zip(&payload)
            .filter(|(&i, &b)| u_hat[i] != b)
            .count() as u64;
        FrameOutcome {
            frame_error: bit_errors > 0,
            bit_errors,
        }
    }
}

/// Simulates frames `frames` of SNR point `snr_index` and returns their
/// outcomes in order. Used to compare decoders frame by frame.
pub fn simulate_frames(
    cfg: &SimConfig,
    snr_index: usize,
    frames: std::ops::Range<u64>,
) -> Result<Vec<FrameOutcome>> {
    let code = cfg.load_code()?;
    cfg.validate(&code)?;
    let rate = payload_rate(&code, cfg);
    let sigma = snr_to_sigma(cfg.snr_db[snr_index], cfg.snr_unit, rate);
    let dec = SimDecoder::new(&code, cfg);
    let ctx = FrameContext::new(code, cfg.crc.spec());
    let pool = build_pool(cfg.workers)?;
    Ok(pool.install(|| {
        frames
            .into_par_iter()
            .map_init(|| dec.clone(), |d, f| ctx.run(d, sigma, frame_seed(cfg.seed, snr_index, f)))
            .collect()
    }))
}

fn payload_rate(code: &PolarCode, cfg: &SimConfig) -> f64 {
    (code.k() - cfg.crc.width()) as f64 / code.len() as f64
}

fn build_pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| param(format!("cannot start worker pool: {e}")))
}

/// Runs every SNR point of `cfg`.
pub fn run_bler(cfg: &SimConfig) -> Result<SimResult> {
    let code = cfg.load_code()?;
    cfg.validate(&code)?;
    let rate = payload_rate(&code, cfg);
    let dec = SimDecoder::new(&code, cfg);
    let ctx = FrameContext::new(code, cfg.crc.spec());
    let pool = build_pool(cfg.workers)?;
    let mut points = Vec::with_capacity(cfg.snr_db.len());
    for (s, &snr) in cfg.snr_db.iter().enumerate() {
        let sigma = snr_to_sigma(snr, cfg.snr_unit, rate);
        let start = Instant::now();
        let (mut frames, mut frame_errors, mut bit_errors) = (0u64, 0u64, 0u64);
        'point: while frames < cfg.max_frames {
            let end = (frames + cfg.batch).min(cfg.max_frames);
            let outcomes: Vec<FrameOutcome> = pool.install(|| {
                (frames..end)
                    .into_par_iter()
                    .map_init(|| dec.clone(), |d, f| ctx.run(d, sigma, frame_seed(cfg.seed, s, f)))
                    .collect()
            });
            for o in outcomes {
                frames += 1;
                bit_errors += o.bit_errors;
                if o.frame_error {
                    frame_errors += 1;
                    if frame_errors >= cfg.min_errors {
                        break 'point;
                    }
                }
            }
        }
        let (lo, hi) = wilson_interval(frame_errors, frames);
        points.push(SnrPoint {
            snr_db: snr,
            sigma,
            frames,
            frame_errors,
            bit_errors,
            bler: frame_errors as f64 / frames as f64,
            bler_ci_lo: lo,
            bler_ci_hi: hi,
            seconds: if cfg.record_timing {
                start.elapsed().as_secs_f64()
            } else {
                0.0
            },
        });
    }
    Ok(SimResult {
        label: cfg.display_label(),
        effective_rate: rate,
        snr_unit: cfg.snr_unit,
        points,
    })
}
