/// Saturation used for channel LLRs and BP messages; stands in for infinity.
pub const LLR_MAX: f64 = 64.0;

// ln sum_k N(d_k; 0, sigma^2) up to the common normalisation, terms summed
// from smallest to largest so mirrored alias sets give identical results
fn log_alias_sum(exps: &mut [f64]) -> f64 {
    exps.sort_by(f64::total_cmp);
    let max = *exps.last().expect("at least three aliases");
    max + exps.iter().map(|&e| (e - max).exp()).sum::<f64>().ln()
}

/// Log-likelihood ratios `ln p(r|0) / p(r|1)` of the mod-2 channel
/// `r = c + z (mod 2)` with `z ~ N(0, sigma^2)`.
///
/// The wrapped density sums the aliases `b + 2k` within `max(8 sigma, 3)` of
/// `r`, which always covers the nearest three of each parity. Results
/// saturate at `+-LLR_MAX`.
pub fn channel_llr(r: &[f64], sigma: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(r.len());
    llr_into(r, sigma, &mut out);
    out
}

pub(crate) fn llr_into(r: &[f64], sigma: f64, out: &mut Vec<f64>) {
    assert!(sigma > 0.0, "noise level must be positive");
    // a distance window (rather than a k range) keeps r and 2 - r symmetric
    let reach = (8.0 * sigma).max(3.0);
    let kmax = (reach / 2.0).ceil() as i64 + 2;
    let inv = 1.0 / (2.0 * sigma * sigma);
    let mut e0 = Vec::new();
    let mut e1 = Vec::new();
    out.clear();
    for &x in r {
        let x = x.rem_euclid(2.0);
        e0.clear();
        e1.clear();
        for k in -kmax..=kmax {
            let shift = 2.0 * k as f64;
            let d0 = x - shift;
            let d1 = x - 1.0 - shift;
            if d0.abs() <= reach {
                e0.push(-d0 * d0 * inv);
            }
            if d1.abs() <= reach {
                e1.push(-d1 * d1 * inv);
            }
        }
        let llr = log_alias_sum(&mut e0) - log_alias_sum(&mut e1);
        out.push(llr.clamp(-LLR_MAX, LLR_MAX));
    }
}
