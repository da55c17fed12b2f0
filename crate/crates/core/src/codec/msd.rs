use super::alt::SpecEncoder;
use super::bp::{BpConfig, BpDecoder};
use super::llr::llr_into;
use crate::error::{Error, Result};
use crate::lattice::{LatticeCodeword, LatticeSpec};

/// Per-level hard decisions of a multistage decoder.
#[derive(Clone, Debug, PartialEq)]
pub struct MsdOutput {
    pub levels: Vec<Vec<u8>>,
    pub converged: Vec<bool>,
    pub iterations: Vec<usize>,
}

impl MsdOutput {
    pub fn all_converged(&self) -> bool {
        self.converged.iter().all(|&c| c)
    }

    /// `sum_l 2^l c_l`.
    pub fn composed(&self) -> Vec<i64> {
        LatticeCodeword::compose(&self.levels)
    }
}

/// `y mod 2^levels`, componentwise into `[0, 2^levels)`.
pub fn reduce_mod(y: &[f64], levels: usize) -> Vec<f64> {
    let q = (1u64 << levels) as f64;
    y.iter().map(|v| v.rem_euclid(q)).collect()
}

/// Nearest point of `2^levels Z^n`, ties towards the even multiple.
pub fn decode_uncoded_level(y_residual: &[f64], levels: usize) -> Vec<i64> {
    let q = (1u64 << levels) as f64;
    y_residual
        .iter()
        .map(|v| ((v / q).round_ties_even() * q) as i64)
        .collect()
}

/// Encoder and decoder for every level of a lattice; immutable and shareable
/// between threads.
#[derive(Clone, Debug)]
pub struct LatticeCodec {
    spec: LatticeSpec,
    encoder: SpecEncoder,
    decoders: Vec<BpDecoder>,
    bp: BpConfig,
}

enum Prior<'a> {
    Decided,
    Genie(&'a [Vec<u8>]),
}

impl LatticeCodec {
    pub fn new(spec: LatticeSpec, bp: BpConfig) -> Result<Self> {
        let encoder = SpecEncoder::new(&spec)?;
        let decoders = spec.matrices().iter().map(BpDecoder::new).collect();
        Ok(LatticeCodec {
            spec,
            encoder,
            decoders,
            bp,
        })
    }

    pub fn spec(&self) -> &LatticeSpec {
        &self.spec
    }

    pub fn encoder(&self) -> &SpecEncoder {
        &self.encoder
    }

    pub fn bp_config(&self) -> &BpConfig {
        &self.bp
    }

    pub fn encode(&self, messages: &[Vec<u8>]) -> Result<LatticeCodeword> {
        self.spec.sequential_encode(&self.encoder, messages)
    }

    /// Message bits carried by level decisions (the systematic positions).
    pub fn messages(&self, levels: &[Vec<u8>]) -> Vec<Vec<u8>> {
        levels
            .iter()
            .enumerate()
            .map(|(l, c)| self.encoder.level(l).info_cols().iter().map(|&j| c[j]).collect())
            .collect()
    }

    fn check_input(&self, r: &[f64]) -> Result<()> {
        if r.len() != self.spec.n() {
            return Err(Error::DimensionMismatch(format!(
                "received {} symbols, lattice dimension is {}",
                r.len(),
                self.spec.n()
            )));
        }
        Ok(())
    }

    fn run(&self, r: &[f64], sigma: f64, prior: Prior<'_>, reencode: bool) -> MsdOutput {
        let levels = self.spec.levels();
        let n = self.spec.n();
        let mut residual = r.to_vec();
        let mut out = MsdOutput {
            levels: Vec::with_capacity(levels),
            converged: Vec::with_capacity(levels),
            iterations: Vec::with_capacity(levels),
        };
        let mut rl = vec![0.0; n];
        let mut llr = Vec::with_capacity(n);
        for l in 0..levels {
            let scale = (1u64 << l) as f64;
            let known: &[Vec<u8>] = match prior {
                Prior::Decided => &out.levels,
                Prior::Genie(truth) => &truth[..l],
            };
            let s = self
                .spec
                .syndrome(l, known)
                .unwrap_or_else(|_| self.spec.syndrome_lossy(l, known));
            for (x, &v) in rl.iter_mut().zip(&residual) {
                *x = (v / scale).rem_euclid(2.0);
            }
            let shift = if reencode {
                let zeros = vec![0u8; self.spec.k(l)];
                let v = self.encoder.level(l).encode(&zeros, &s).expect("syndrome has level shape");
                for (x, &b) in rl.iter_mut().zip(&v) {
                    *x = (*x - b as f64).rem_euclid(2.0);
                }
                Some(v)
            } else {
                None
            };
            llr_into(&rl, sigma / scale, &mut llr);
            let target = match shift {
                Some(_) => vec![0u8; s.len()],
                None => s,
            };
            let mut dec = self.decoders[l].decode(&target, &llr, &self.bp);
            if let Some(v) = shift {
                dec.bits.iter_mut().zip(&v).for_each(|(b, &x)| *b ^= x);
            }
            let used = match prior {
                Prior::Decided => &dec.bits,
                Prior::Genie(truth) => &truth[l],
            };
            for (x, &b) in residual.iter_mut().zip(used) {
                *x -= scale * b as f64;
            }
            out.levels.push(dec.bits);
            out.converged.push(dec.converged);
            out.iterations.push(dec.iterations);
        }
        out
    }

    /// Multistage decoding of a mod-`2^L` channel output `r`: level `l`
    /// sees `(r - sum_{i<l} 2^i c_i) / 2^l mod 2` at noise `sigma / 2^l`.
    pub fn decode(&self, r: &[f64], sigma: f64) -> Result<MsdOutput> {
        self.check_input(r)?;
        Ok(self.run(r, sigma, Prior::Decided, false))
    }

    /// Each level decoded with the true lower levels substituted for the
    /// decisions, i.e. without error propagation.
    pub fn decode_genie(&self, r: &[f64], sigma: f64, truth: &[Vec<u8>]) -> Result<MsdOutput> {
        self.check_input(r)?;
        if truth.len() != self.spec.levels() || truth.iter().any(|c| c.len() != self.spec.n()) {
            return Err(Error::DimensionMismatch("genie levels do not match the spec".into()));
        }
        Ok(self.run(r, sigma, Prior::Genie(truth), false))
    }

    /// Multistage decoding where each level decodes the linear code after
    /// shifting by the coset leader `enc(0, s_l)`.
    pub fn reencode_shift_decode(&self, r: &[f64], sigma: f64) -> Result<MsdOutput> {
        self.check_input(r)?;
        Ok(self.run(r, sigma, Prior::Decided, true))
    }

    /// Full lattice decision for an unreduced observation `y`: coded levels
    /// by multistage decoding, then the `2^L Z^n` component by rounding.
    pub fn decode_point(&self, y: &[f64], sigma: f64) -> Result<(MsdOutput, Vec<i64>)> {
        let levels = self.spec.levels();
        let out = self.decode(&reduce_mod(y, levels), sigma)?;
        let c = out.composed();
        let resid: Vec<f64> = y.iter().zip(&c).map(|(v, &x)| v - x as f64).collect();
        let point = decode_uncoded_level(&resid, levels)
            .iter()
            .zip(&c)
            .map(|(a, b)| a + b)
            .collect();
        Ok((out, point))
    }
}
