//! Monte-Carlo word-error-rate estimation on the unconstrained AWGN channel.
//!
//! A trial draws uniform messages, encodes a lattice point, adds Gaussian
//! noise and runs the multistage decoder on `y mod 2^L`. The `2^L Z^n` level
//! is charged analytically by default, so the reported total is
//! `wer_coded + pe_uncoded`.

mod rates;

pub use rates::{code_wer, design_rates, LevelFit, RateDesign, RateDesignConfig};

use std::io::Write;
use std::time::Instant;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{Beta, ContinuousCDF};

use crate::codec::{decode_uncoded_level, reduce_mod, LatticeCodec};
use crate::error::{Error, Result};
use crate::lattice::{sigma_for_vnr_db, vnr_db, LatticeCodeword};
use crate::rng::stream;

/// Upper tail of the standard normal.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

/// Error probability of rounding to `q Z^n`: `1 - (1 - 2 Q(q / 2 sigma))^n`.
pub fn pe_uncoded(q: f64, n: usize, sigma: f64) -> f64 {
    let p = 2.0 * q_function(q / (2.0 * sigma));
    -(n as f64 * (-p).ln_1p()).exp_m1()
}

/// Two-sided Clopper-Pearson interval for `k` successes in `n` trials.
pub fn clopper_pearson(k: u64, n: u64, confidence: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let alpha = 1.0 - confidence;
    let (k, nf) = (k as f64, n as f64);
    let lo = if k == 0.0 {
        0.0
    } else {
        Beta::new(k, nf - k + 1.0).unwrap().inverse_cdf(alpha / 2.0)
    };
    let hi = if k == nf {
        1.0
    } else {
        Beta::new(k + 1.0, nf - k).unwrap().inverse_cdf(1.0 - alpha / 2.0)
    };
    (lo, hi)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StopRule {
    pub min_errors: u64,
    /// Accepted once the running WER is below `deep_wer`.
    pub min_errors_deep: u64,
    pub deep_wer: f64,
    pub max_trials: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        StopRule {
            min_errors: 100,
            min_errors_deep: 50,
            deep_wer: 1e-6,
            max_trials: 10_000_000,
        }
    }
}

impl StopRule {
    pub fn satisfied(&self, errors: u64, trials: u64) -> bool {
        errors >= self.min_errors
            || (errors >= self.min_errors_deep
                && trials > 0
                && (errors as f64) < self.deep_wer * trials as f64)
    }

    fn validate(&self) -> Result<()> {
        if self.min_errors == 0 || self.min_errors_deep == 0 || self.max_trials == 0 {
            return Err(Error::InvalidArgument(
                "stop rule needs at least one error and one trial".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Multistage decoding with decided levels fed forward.
    #[default]
    Full,
    /// Every level decoded with the true lower levels.
    Genie,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UncodedMode {
    #[default]
    Analytic,
    Simulated,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatingPoint {
    Sigma(f64),
    VnrDb(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub points: Vec<OperatingPoint>,
    pub stop: StopRule,
    pub seed: u64,
    pub mode: Mode,
    pub uncoded: UncodedMode,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            points: Vec::new(),
            stop: StopRule::default(),
            seed: 0,
            mode: Mode::Full,
            uncoded: UncodedMode::Analytic,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WerPoint {
    pub sigma: f64,
    pub vnr_db: f64,
    pub trials: u64,
    pub errors: Vec<u64>,
    pub wer: Vec<f64>,
    pub errors_coded: u64,
    pub wer_coded: f64,
    /// 95% interval on `wer_coded`.
    pub wer_coded_ci: (f64, f64),
    pub pe_uncoded: f64,
    /// Word errors including the simulated `2^L Z^n` level, if simulated.
    pub errors_total: Option<u64>,
    pub wer_total: f64,
    /// The trial budget ran out before the stop rule was met.
    pub low_confidence: bool,
    pub wall_time_s: f64,
}

#[derive(Default)]
struct Tally {
    trials: u64,
    levels: Vec<u64>,
    coded: u64,
    total: u64,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        if self.levels.len() < other.levels.len() {
            self.levels.resize(other.levels.len(), 0);
        }
        for (a, b) in self.levels.iter_mut().zip(&other.levels) {
            *a += b;
        }
        self.trials += other.trials;
        self.coded += other.coded;
        self.total += other.total;
        self
    }
}

fn random_messages(codec: &LatticeCodec, rng: &mut impl Rng) -> Vec<Vec<u8>> {
    let spec = codec.spec();
    (0..spec.levels())
        .map(|l| (0..spec.k(l)).map(|_| rng.random_range(0..2u8)).collect())
        .collect()
}

fn run_trial(codec: &LatticeCodec, cfg: &SimConfig, sigma: f64, idx: u64) -> Result<Tally> {
    let mut rng = stream(cfg.seed, "trial", idx);
    let levels = codec.spec().levels();
    let cw = codec.encode(&random_messages(codec, &mut rng))?;
    let y: Vec<f64> = cw
        .composed
        .iter()
        .map(|&x| x as f64 + sigma * rng.sample::<f64, _>(StandardNormal))
        .collect();
    let r = reduce_mod(&y, levels);
    let out = match cfg.mode {
        Mode::Full => codec.decode(&r, sigma)?,
        Mode::Genie => codec.decode_genie(&r, sigma, &cw.levels)?,
    };
    let wrong: Vec<u64> = out
        .levels
        .iter()
        .zip(&cw.levels)
        .map(|(a, b)| (a != b) as u64)
        .collect();
    let coded = wrong.contains(&1);
    let total = coded
        || (cfg.uncoded == UncodedMode::Simulated && {
            let decided = match cfg.mode {
                Mode::Full => out.composed(),
                Mode::Genie => cw.composed.clone(),
            };
            let resid: Vec<f64> = y.iter().zip(&decided).map(|(v, &c)| v - c as f64).collect();
            decode_uncoded_level(&resid, levels).iter().any(|&p| p != 0)
        });
    Ok(Tally {
        trials: 1,
        levels: wrong,
        coded: coded as u64,
        total: total as u64,
    })
}

// Batches grow geometrically so the stop rule is checked often at high WER
// without losing parallelism at low WER. The schedule depends only on the
// counts, which keeps results independent of the worker count.
const FIRST_BATCH: u64 = 32;
const MAX_BATCH: u64 = 4096;

/// Simulates one noise level until the stop rule or the trial budget.
pub fn simulate_point(codec: &LatticeCodec, cfg: &SimConfig, sigma: f64) -> Result<WerPoint> {
    cfg.stop.validate()?;
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidArgument(format!("noise level {sigma} must be positive")));
    }
    let spec = codec.spec();
    let levels = spec.levels();
    let start = Instant::now();
    let mut tally = Tally {
        levels: vec![0; levels],
        ..Default::default()
    };
    let mut batch = FIRST_BATCH;
    let counted = |t: &Tally| match cfg.uncoded {
        UncodedMode::Analytic => t.coded,
        UncodedMode::Simulated => t.total,
    };
    while !cfg.stop.satisfied(counted(&tally), tally.trials) && tally.trials < cfg.stop.max_trials {
        let size = batch.min(cfg.stop.max_trials - tally.trials);
        let first = tally.trials;
        let part = (first..first + size)
            .into_par_iter()
            .map(|i| run_trial(codec, cfg, sigma, i))
            .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?;
        tally = tally.merge(part);
        batch = (batch * 2).min(MAX_BATCH);
    }
    let low_confidence = !cfg.stop.satisfied(counted(&tally), tally.trials);
    let trials = tally.trials;
    let frac = |k: u64| k as f64 / trials as f64;
    let pe = pe_uncoded((1u64 << levels) as f64, spec.n(), sigma);
    let wer_coded = frac(tally.coded);
    let (errors_total, wer_total) = match cfg.uncoded {
        UncodedMode::Analytic => (None, (wer_coded + pe).min(1.0)),
        UncodedMode::Simulated => (Some(tally.total), frac(tally.total)),
    };
    Ok(WerPoint {
        sigma,
        vnr_db: vnr_db(levels, spec.rate(), sigma),
        trials,
        wer: tally.levels.iter().map(|&e| frac(e)).collect(),
        errors: tally.levels,
        errors_coded: tally.coded,
        wer_coded,
        wer_coded_ci: clopper_pearson(tally.coded, trials, 0.95),
        pe_uncoded: pe,
        errors_total,
        wer_total,
        low_confidence,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sweep {
    pub points: Vec<WerPoint>,
    /// Adjacent points whose coded WER rises with VNR beyond their intervals.
    pub warnings: Vec<String>,
}

pub fn resolve_sigma(codec: &LatticeCodec, point: OperatingPoint) -> f64 {
    match point {
        OperatingPoint::Sigma(s) => s,
        OperatingPoint::VnrDb(db) => {
            let spec = codec.spec();
            sigma_for_vnr_db(spec.levels(), spec.rate(), db)
        }
    }
}

pub fn sweep(codec: &LatticeCodec, cfg: &SimConfig) -> Result<Sweep> {
    let mut points = Vec::with_capacity(cfg.points.len());
    for &p in &cfg.points {
        let sigma = resolve_sigma(codec, p);
        let pt = simulate_point(codec, cfg, sigma)?;
        log::info!(
            "sigma {:.5} ({:.3} dB): {} trials, wer_coded {:.3e}, wer_total {:.3e}",
            pt.sigma,
            pt.vnr_db,
            pt.trials,
            pt.wer_coded,
            pt.wer_total
        );
        points.push(pt);
    }
    let warnings = monotonicity_warnings(&points);
    for w in &warnings {
        log::warn!("{w}");
    }
    Ok(Sweep { points, warnings })
}

pub fn monotonicity_warnings(points: &[WerPoint]) -> Vec<String> {
    let mut order: Vec<&WerPoint> = points.iter().collect();
    order.sort_by(|a, b| a.vnr_db.total_cmp(&b.vnr_db));
    order
        .windows(2)
        .filter(|w| w[1].wer_coded_ci.0 > w[0].wer_coded_ci.1)
        .map(|w| {
            format!(
                "coded WER rises from {:.3e} at {:.3} dB to {:.3e} at {:.3} dB",
                w[0].wer_coded, w[0].vnr_db, w[1].wer_coded, w[1].vnr_db
            )
        })
        .collect()
}

pub fn csv_header(levels: usize) -> String {
    let mut cols = vec!["sigma".to_string(), "vnr_db".into(), "trials".into()];
    cols.extend((0..levels).map(|l| format!("errors_l{l}")));
    cols.extend((0..levels).map(|l| format!("wer_l{l}")));
    cols.extend(["wer_coded", "pe_uncoded", "wer_total"].map(String::from));
    cols.join(",")
}

pub fn write_csv(points: &[WerPoint], levels: usize, mut w: impl Write) -> std::io::Result<()> {
    writeln!(w, "{}", csv_header(levels))?;
    for p in points {
        let mut row = vec![format!("{}", p.sigma), format!("{}", p.vnr_db), p.trials.to_string()];
        row.extend(p.errors.iter().map(|e| e.to_string()));
        row.extend(p.wer.iter().map(|e| format!("{e:e}")));
        row.extend([p.wer_coded, p.pe_uncoded, p.wer_total].map(|e| format!("{e:e}")));
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

/// Reads a two-column `(vnr_db, wer)` reference curve. Blank lines, `#`
/// comments and a non-numeric header line are skipped.
pub fn read_reference_csv(text: &str) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() < 2 {
            return Err(Error::parse(i + 1, "expected two columns"));
        }
        match (fields[0].parse::<f64>(), fields[1].parse::<f64>()) {
            (Ok(x), Ok(y)) => out.push((x, y)),
            _ if out.is_empty() && i == first_content_line(text) => continue,
            _ => return Err(Error::parse(i + 1, format!("non-numeric row `{line}`"))),
        }
    }
    Ok(out)
}

fn first_content_line(text: &str) -> usize {
    text.lines()
        .position(|l| !l.trim().is_empty() && !l.trim().starts_with('#'))
        .unwrap_or(0)
}

/// Encodes and exposes the noise of one trial; used to replay a trial.
pub fn trial_observation(
    codec: &LatticeCodec,
    seed: u64,
    sigma: f64,
    idx: u64,
) -> Result<(LatticeCodeword, Vec<f64>)> {
    let mut rng = stream(seed, "trial", idx);
    let cw = codec.encode(&random_messages(codec, &mut rng))?;
    let y = cw
        .composed
        .iter()
        .map(|&x| x as f64 + sigma * rng.sample::<f64, _>(StandardNormal))
        .collect();
    Ok((cw, y))
}
