//! Rate design: choose `(R_0, .., R_{L-1}, sigma)` maximising
//! `sum R_l + log2 sigma` subject to
//! `sum_l f_l(R_l, sigma / 2^l) + pe_uncoded(2^L, n, sigma) <= Pe`.
//!
//! `f` is measured on a small `(R, sigma)` grid per level and interpolated by
//! a weighted least-squares fit of `log10 f` affine in `R` and `sigma` in dB.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{pe_uncoded, StopRule};
use crate::codec::{channel_llr, BpConfig, BpDecoder};
use crate::design::{peg_construct, DesignOptions};
use crate::error::{Error, Result};
use crate::gf2::SparseMatrix;
use crate::lattice::vnr_db;
use crate::rng::{derive_seed, stream};

/// `(errors, trials)` of `h` on the mod-2 AWGN channel at noise `sigma`.
///
/// The all-zero word is sent; coset BP is symmetric under coset shifts, so
/// this is the error rate of every coset.
pub fn code_wer(h: &SparseMatrix, sigma: f64, bp: &BpConfig, stop: &StopRule, seed: u64) -> (u64, u64) {
    let dec = BpDecoder::new(h);
    let s = vec![0u8; h.nrows()];
    let n = h.ncols();
    let (mut errors, mut trials, mut batch) = (0u64, 0u64, 32u64);
    while !stop.satisfied(errors, trials) && trials < stop.max_trials {
        let size = batch.min(stop.max_trials - trials);
        errors += (trials..trials + size)
            .into_par_iter()
            .map(|i| {
                let mut rng = stream(seed, "code-trial", i);
                let r: Vec<f64> = (0..n)
                    .map(|_| (sigma * rng.sample::<f64, _>(StandardNormal)).rem_euclid(2.0))
                    .collect();
                let out = dec.decode(&s, &channel_llr(&r, sigma), bp);
                out.bits.iter().any(|&b| b != 0) as u64
            })
            .sum::<u64>();
        trials += size;
        batch = (batch * 2).min(4096);
    }
    (errors, trials)
}

fn db(sigma: f64) -> f64 {
    20.0 * sigma.log10()
}

/// `log10 f(R, sigma) ~ a + b R + c sigma_dB`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelFit {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub samples: usize,
}

impl LevelFit {
    pub fn log10_wer(&self, rate: f64, sigma: f64) -> f64 {
        self.a + self.b * rate + self.c * db(sigma)
    }

    /// Largest rate whose predicted WER is at most `budget`.
    pub fn max_rate(&self, budget: f64, sigma: f64) -> f64 {
        (budget.log10() - self.a - self.c * db(sigma)) / self.b
    }

    // (rate, sigma, errors, trials)
    fn fit(samples: &[(f64, f64, u64, u64)], min_errors: u64) -> Option<LevelFit> {
        let used: Vec<_> = samples
            .iter()
            .filter(|s| s.2 >= min_errors && (s.2 as f64) < 0.8 * s.3 as f64)
            .collect();
        // weighted normal equations, weight ~ inverse variance of log f
        let mut ata = [[0.0f64; 3]; 3];
        let mut atb = [0.0f64; 3];
        for &&(r, s, e, t) in &used {
            let x = [1.0, r, db(s)];
            let y = (e as f64 / t as f64).log10();
            let w = e as f64;
            for i in 0..3 {
                for j in 0..3 {
                    ata[i][j] += w * x[i] * x[j];
                }
                atb[i] += w * x[i] * y;
            }
        }
        let sol = solve3(ata, atb)?;
        // more rate or more noise must mean more errors
        (used.len() >= 3 && sol[1] > 0.0 && sol[2] > 0.0).then_some(LevelFit {
            a: sol[0],
            b: sol[1],
            c: sol[2],
            samples: used.len(),
        })
    }
}

fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in 0..3 {
            if row != col {
                let f = a[row][col] / a[col][col];
                for k in 0..3 {
                    a[row][k] -= f * a[col][k];
                }
                b[row] -= f * b[col];
            }
        }
    }
    Some([b[0] / a[0][0], b[1] / a[1][1], b[2] / a[2][2]])
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateDesignConfig {
    pub n: usize,
    pub dv: usize,
    pub target_pe: f64,
    /// Search box for each level's rate; its length is the number of levels.
    pub rate_boxes: Vec<(f64, f64)>,
    /// Search box for the lattice noise level (level `l` sees `sigma / 2^l`).
    pub sigma_box: (f64, f64),
    /// Grid points per axis.
    pub grid: usize,
    pub stop: StopRule,
    /// Grid points with fewer errors are left out of the fit.
    pub min_fit_errors: u64,
    pub seed: u64,
    pub bp: BpConfig,
}

impl RateDesignConfig {
    /// Two levels at length `n` with the search region used for designs
    /// around `Pe = 1e-2`.
    pub fn two_level(n: usize, target_pe: f64) -> Self {
        RateDesignConfig {
            n,
            dv: 3,
            target_pe,
            rate_boxes: vec![(0.35, 0.65), (0.93, 0.995)],
            sigma_box: (0.25, 0.34),
            grid: 5,
            stop: StopRule {
                min_errors: 60,
                min_errors_deep: 60,
                deep_wer: 0.0,
                max_trials: 6000,
            },
            min_fit_errors: 4,
            seed: 0,
            bp: BpConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateDesign {
    pub rates: Vec<f64>,
    /// Check counts `round(n (1 - R_l))`.
    pub m: Vec<usize>,
    pub sigma: f64,
    pub vnr_db: f64,
    pub objective: f64,
    /// Fitted per-level WERs at the design point.
    pub predicted_wer: Vec<f64>,
    pub pe_uncoded: f64,
    pub fits: Vec<LevelFit>,
}

fn linspace(lo: f64, hi: f64, k: usize) -> Vec<f64> {
    if k <= 1 {
        return vec![0.5 * (lo + hi)];
    }
    (0..k).map(|i| lo + (hi - lo) * i as f64 / (k - 1) as f64).collect()
}

fn checks_for(n: usize, rate: f64) -> usize {
    ((n as f64) * (1.0 - rate)).round() as usize
}

// budget splits on the simplex with `res` steps, all parts positive
fn splits(levels: usize, res: usize) -> Vec<Vec<f64>> {
    fn go(left: usize, parts: usize, res: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<f64>>) {
        if parts == 1 {
            if left > 0 {
                cur.push(left);
                out.push(cur.iter().map(|&c| c as f64 / res as f64).collect());
                cur.pop();
            }
            return;
        }
        for c in 1..left {
            cur.push(c);
            go(left - c, parts - 1, res, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(res, levels, res, &mut Vec::new(), &mut out);
    out
}

struct Region {
    rates: Vec<(f64, f64)>,
    sigma: (f64, f64),
}

fn measure(
    cfg: &RateDesignConfig,
    family: &(dyn Fn(usize, usize) -> Result<SparseMatrix> + Sync),
    region: &Region,
    round: u64,
) -> Result<Vec<LevelFit>> {
    let sigmas = linspace(region.sigma.0, region.sigma.1, cfg.grid);
    let mut fits = Vec::with_capacity(cfg.rate_boxes.len());
    for (l, &(lo, hi)) in region.rates.iter().enumerate() {
        let scale = (1u64 << l) as f64;
        let mut samples = Vec::new();
        let mut built = std::collections::BTreeSet::new();
        for r in linspace(lo, hi, cfg.grid) {
            let m = checks_for(cfg.n, r).clamp(cfg.dv, cfg.n - 1);
            if !built.insert(m) {
                continue;
            }
            let h = family(cfg.n, m)?;
            let rate = 1.0 - m as f64 / cfg.n as f64;
            for (j, &s) in sigmas.iter().enumerate() {
                let seed = derive_seed(cfg.seed, "rate-grid", (round << 32) | ((l as u64) << 16) | (m as u64) << 4 | j as u64);
                let (e, t) = code_wer(&h, s / scale, &cfg.bp, &cfg.stop, seed);
                log::debug!("level {l} R {rate:.4} sigma {:.4}: {e}/{t}", s / scale);
                samples.push((rate, s / scale, e, t));
            }
        }
        let fit = LevelFit::fit(&samples, cfg.min_fit_errors).ok_or_else(|| {
            Error::Infeasible(format!(
                "level {l}: too few grid points with measurable error rates to fit"
            ))
        })?;
        log::info!("level {l} fit: log10 f = {:.3} + {:.3} R + {:.3} sigma_dB ({} samples)", fit.a, fit.b, fit.c, fit.samples);
        fits.push(fit);
    }
    Ok(fits)
}

fn optimize(cfg: &RateDesignConfig, fits: &[LevelFit], region: &Region) -> Option<RateDesign> {
    let levels = fits.len();
    let q = (1u64 << levels) as f64;
    let parts = splits(levels, if levels <= 2 { 200 } else { 20 });
    let mut best: Option<RateDesign> = None;
    for sigma in linspace(region.sigma.0, region.sigma.1, 181) {
        let pe_u = pe_uncoded(q, cfg.n, sigma);
        let budget = cfg.target_pe - pe_u;
        if budget <= 0.0 {
            continue;
        }
        for w in &parts {
            let mut rates = Vec::with_capacity(levels);
            let mut pred = Vec::with_capacity(levels);
            for (l, fit) in fits.iter().enumerate() {
                let s = sigma / (1u64 << l) as f64;
                let (lo, hi) = region.rates[l];
                let r = fit.max_rate(w[l] * budget, s).min(hi);
                rates.push(r);
                pred.push(10f64.powf(fit.log10_wer(r, s)));
                if r < lo {
                    rates.clear();
                    break;
                }
            }
            if rates.is_empty() {
                continue;
            }
            let objective = rates.iter().sum::<f64>() + sigma.log2();
            if best.as_ref().is_none_or(|b| objective > b.objective) {
                best = Some(RateDesign {
                    m: rates.iter().map(|&r| checks_for(cfg.n, r)).collect(),
                    vnr_db: vnr_db(levels, rates.iter().sum(), sigma),
                    rates,
                    sigma,
                    objective,
                    predicted_wer: pred,
                    pe_uncoded: pe_u,
                    fits: fits.to_vec(),
                });
            }
        }
    }
    best
}

/// Rate design over the PEG family of column weight `cfg.dv`.
pub fn design_rates(cfg: &RateDesignConfig) -> Result<RateDesign> {
    let dv = cfg.dv;
    let seed = cfg.seed;
    let family = move |n: usize, m: usize| -> Result<SparseMatrix> {
        Ok(peg_construct(n, m, dv, &DesignOptions::seeded(derive_seed(seed, "rate-family", m as u64)))?.matrix)
    };
    design_rates_with(cfg, &family)
}

/// Rate design over an arbitrary family `(n, m) -> H`.
pub fn design_rates_with(
    cfg: &RateDesignConfig,
    family: &(dyn Fn(usize, usize) -> Result<SparseMatrix> + Sync),
) -> Result<RateDesign> {
    if cfg.rate_boxes.is_empty() || cfg.grid < 2 || !(cfg.target_pe > 0.0) {
        return Err(Error::InvalidArgument("rate design needs levels, a grid and a positive target".into()));
    }
    let full = Region {
        rates: cfg.rate_boxes.clone(),
        sigma: cfg.sigma_box,
    };
    if cfg.target_pe >= 1.0 {
        // the constraint is vacuous
        let sigma = full.sigma.1;
        let rates: Vec<f64> = full.rates.iter().map(|b| b.1).collect();
        let levels = rates.len();
        return Ok(RateDesign {
            m: rates.iter().map(|&r| checks_for(cfg.n, r)).collect(),
            vnr_db: vnr_db(levels, rates.iter().sum(), sigma),
            objective: rates.iter().sum::<f64>() + sigma.log2(),
            predicted_wer: vec![f64::NAN; levels],
            pe_uncoded: pe_uncoded((1u64 << levels) as f64, cfg.n, sigma),
            rates,
            sigma,
            fits: Vec::new(),
        });
    }
    let fits = measure(cfg, family, &full, 0)?;
    let first = optimize(cfg, &fits, &full)
        .ok_or_else(|| Error::Infeasible(format!("no rates in the search region reach Pe = {:e}", cfg.target_pe)))?;
    log::info!("first pass: rates {:?} sigma {:.4}", first.rates, first.sigma);

    let shrink = |(lo, hi): (f64, f64), at: f64| {
        let half = 0.25 * (hi - lo);
        ((at - half).max(lo), (at + half).min(hi))
    };
    let refined = Region {
        rates: full.rates.iter().zip(&first.rates).map(|(&b, &r)| shrink(b, r)).collect(),
        sigma: shrink(full.sigma, first.sigma),
    };
    let fits = measure(cfg, family, &refined, 1)?;
    Ok(optimize(cfg, &fits, &refined).unwrap_or(first))
}
