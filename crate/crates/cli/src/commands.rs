use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use ldpc_lattice::bundle::{load_spec, read_text, save_spec, write_text};
use ldpc_lattice::codec::{BpConfig, LatticeCodec};
use ldpc_lattice::design::{
    peg_check_split, peg_construct, peg_construct_triangular, triangular_peg_check_split, DesignOptions,
    DesignRecord,
};
use ldpc_lattice::gf2::SparseMatrix;
use ldpc_lattice::kv::KvConfig;
use ldpc_lattice::lattice::LatticeSpec;
use ldpc_lattice::rng::derive_seed;
use ldpc_lattice::sim::{
    design_rates, read_reference_csv, sweep, write_csv, Mode, OperatingPoint, RateDesignConfig, SimConfig,
    StopRule, UncodedMode,
};
use ldpc_lattice::Error;

use crate::files::{bits, format_codeword, join, parse_messages, parse_reals, Table};
use crate::manifest::{resolve_config, RunManifest};
use crate::{Common, Failure, ModeArg};

type Res<T> = std::result::Result<T, Failure>;

/// Maps library errors on data and artifacts to exit codes.
fn lib(e: Error) -> Failure {
    match e {
        Error::RankDeficient { .. } | Error::InfeasibleMapping(_) | Error::Construction(_) | Error::Infeasible(_) => {
            Failure::design(e)
        }
        Error::MissingKey(_) | Error::InvalidArgument(_) | Error::TooLarge(_) => Failure::config(e),
        Error::Io { .. } | Error::Parse { .. } | Error::DimensionMismatch(_) | Error::Divisibility { .. } => {
            Failure::io(e)
        }
    }
}

/// Configuration lookups that remember every resolved value for the manifest.
struct Settings {
    raw: KvConfig,
    resolved: KvConfig,
}

impl Settings {
    fn load(common: &Common) -> Res<Self> {
        let raw = match &common.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| Failure::config(format!("cannot read config {}: {e}", path.display())))?;
                let kv = KvConfig::parse(&text).map_err(|e| Failure::config(format!("{}: {e}", path.display())))?;
                resolve_config(kv)
            }
            None => KvConfig::new(),
        };
        let mut s = Settings {
            raw,
            resolved: KvConfig::new(),
        };
        if let Some(seed) = common.seed {
            s.raw.set("seed", seed);
        }
        if let Some(mode) = common.mode {
            s.raw.set("mode", match mode {
                ModeArg::Full => "full",
                ModeArg::Genie => "genie",
            });
        }
        Ok(s)
    }

    fn override_with(&mut self, key: &str, value: Option<impl Display>) {
        if let Some(v) = value {
            self.raw.set(key, v);
        }
    }

    fn get<T: FromStr + Display>(&mut self, key: &str) -> Res<Option<T>> {
        let v: Option<T> = self.raw.get(key).map_err(Failure::config)?;
        if let Some(v) = &v {
            self.resolved.set(key, v);
        }
        Ok(v)
    }

    fn get_or<T: FromStr + Display>(&mut self, key: &str, default: T) -> Res<T> {
        let v = self.get(key)?.unwrap_or(default);
        self.resolved.set(key, &v);
        Ok(v)
    }

    fn require<T: FromStr + Display>(&mut self, key: &str) -> Res<T> {
        self.get(key)?.ok_or_else(|| Failure::config(Error::MissingKey(key.to_string())))
    }

    fn list<T: FromStr + Display>(&mut self, key: &str) -> Res<Option<Vec<T>>> {
        let v: Option<Vec<T>> = self.raw.get_list(key).map_err(Failure::config)?;
        if let Some(v) = &v {
            self.resolved.set(key, v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "));
        }
        Ok(v)
    }

    fn path(&mut self, key: &str) -> Res<PathBuf> {
        self.require::<String>(key).map(PathBuf::from)
    }

    fn choice(&mut self, key: &str, default: &str, allowed: &[&str]) -> Res<String> {
        let v = self.get_or(key, default.to_string())?;
        if !allowed.contains(&v.as_str()) {
            return Err(Failure::config(format!("`{key}` must be one of {}, got `{v}`", allowed.join("|"))));
        }
        Ok(v)
    }

    fn bp(&mut self) -> Res<BpConfig> {
        let d = BpConfig::default();
        Ok(BpConfig {
            max_iter: self.get_or("bp.max_iter", d.max_iter)?,
            early_exit: self.get_or("bp.early_exit", d.early_exit)?,
            ..d
        })
    }
}

fn out_dir(common: &Common) -> Res<PathBuf> {
    let dir = common.out_dir.clone().unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir).map_err(|e| Failure::io(format!("cannot create {}: {e}", dir.display())))?;
    Ok(dir)
}

fn finish(manifest: &RunManifest, dir: &Path) -> Res<()> {
    let path = manifest.write(dir).map_err(lib)?;
    log::info!("manifest written to {}", path.display());
    Ok(())
}

fn write_out(manifest: &mut RunManifest, name: &str, path: PathBuf, text: &str) -> Res<()> {
    write_text(&path, text).map_err(lib)?;
    manifest.output(name, &path);
    Ok(())
}

fn load_codec(s: &mut Settings) -> Res<LatticeCodec> {
    let dir = s.path("bundle")?;
    let spec = load_spec(&dir).map_err(lib)?;
    let bp = s.bp()?;
    LatticeCodec::new(spec, bp).map_err(lib)
}

pub fn design(common: &Common) -> Res<()> {
    let mut s = Settings::load(common)?;
    let n: usize = s.require("n")?;
    let m: Vec<usize> = match s.list("m")? {
        Some(m) => m,
        None => {
            let levels: usize = s.require("levels")?;
            (0..levels).map(|l| s.require(&format!("level{l}.m"))).collect::<Res<_>>()?
        }
    };
    let levels = s.get_or("levels", m.len())?;
    if levels == 0 || levels != m.len() {
        return Err(Failure::config(format!("{} check counts given for {levels} levels", m.len())));
    }
    if m.windows(2).any(|w| w[0] < w[1]) {
        return Err(Failure::config("check counts must be non-increasing with the level"));
    }
    let dv: usize = s.get_or("dv", 3)?;
    let gap: Option<usize> = s.get("gap")?;
    let tie = s.choice("tie_break", "lowest", &["lowest", "seeded"])?;
    let seed: u64 = s.get_or("seed", 0)?;
    let opts = |level: usize| match tie.as_str() {
        "seeded" => DesignOptions::seeded(derive_seed(seed, "design", level as u64)),
        _ => DesignOptions::default(),
    };

    let top = levels - 1;
    let built = match gap {
        Some(g) => peg_construct_triangular(n, m[top], dv, g, &opts(top)),
        None => peg_construct(n, m[top], dv, &opts(top)),
    }
    .map_err(lib)?;
    let mut records = vec![(top, built.tie_break, built.retries)];
    let mut h: Vec<SparseMatrix> = vec![built.matrix];
    let mut f: Vec<SparseMatrix> = Vec::new();
    for l in (0..top).rev() {
        let parent = h.last().expect("upper level built");
        let split = match gap {
            Some(g) => triangular_peg_check_split(parent, g, m[l], &opts(l)),
            None => peg_check_split(parent, m[l], &opts(l)),
        }
        .map_err(lib)?;
        records.push((l, split.tie_break, split.retries));
        h.push(split.h);
        f.push(split.f);
    }
    h.reverse();
    f.reverse();
    records.reverse();
    let spec = LatticeSpec::with_gaps(h, Some(f), vec![gap; levels]).map_err(lib)?;

    let dir = out_dir(common)?;
    let mut manifest = RunManifest::new("design", &s.resolved);
    save_spec(&spec, &dir).map_err(lib)?;
    manifest.output("bundle", &dir);
    let report: String = records
        .iter()
        .map(|&(l, t, r)| DesignRecord::describe(l, spec.h(l), spec.gap(l), t, r).to_json_line() + "\n")
        .collect();
    write_out(&mut manifest, "report", dir.join("design.jsonl"), &report)?;

    let check = load_spec(&dir).map_err(lib)?.validate();
    if !check.is_valid() {
        return Err(Failure::design(format!("designed spec does not validate:\n{check}")));
    }
    log::info!("designed n = {n}, m = {m:?}, rate {:.4}\n{check}", spec.rate());
    finish(&manifest, &dir)
}

pub fn encode(common: &Common, bundle: Option<PathBuf>, input: Option<PathBuf>) -> Res<()> {
    let mut s = Settings::load(common)?;
    s.override_with("bundle", bundle.map(|p| p.display().to_string()));
    s.override_with("input", input.map(|p| p.display().to_string()));
    let codec = load_codec(&mut s)?;
    let input = s.path("input")?;
    let msgs = parse_messages(&read_text(&input).map_err(lib)?).map_err(lib)?;
    let cw = codec.encode(&msgs).map_err(lib)?;

    let dir = out_dir(common)?;
    let mut manifest = RunManifest::new("encode", &s.resolved);
    let text = format_codeword(&cw.composed, &cw.levels, &cw.syndromes);
    write_out(&mut manifest, "codeword", dir.join("codeword.txt"), &text)?;
    finish(&manifest, &dir)
}

pub fn decode(common: &Common, bundle: Option<PathBuf>, input: Option<PathBuf>, sigma: Option<f64>) -> Res<()> {
    let mut s = Settings::load(common)?;
    s.override_with("bundle", bundle.map(|p| p.display().to_string()));
    s.override_with("input", input.map(|p| p.display().to_string()));
    s.override_with("sigma", sigma);
    let codec = load_codec(&mut s)?;
    let sigma: f64 = s.require("sigma")?;
    if !(sigma > 0.0) {
        return Err(Failure::config("`sigma` must be positive"));
    }
    let input = s.path("input")?;
    let y = parse_reals(&read_text(&input).map_err(lib)?).map_err(lib)?;
    let (out, point) = codec.decode_point(&y, sigma).map_err(lib)?;

    let mut kv = KvConfig::new();
    kv.set("converged", join(&out.converged));
    kv.set("iterations", join(&out.iterations));
    for (l, (c, msg)) in out.levels.iter().zip(codec.messages(&out.levels)).enumerate() {
        kv.set(&format!("level{l}"), bits(c));
        kv.set(&format!("message{l}"), bits(&msg));
    }
    kv.set("composed", join(&out.composed()));
    kv.set("point", join(&point));
    kv.set("member", codec.spec().is_lattice_point(&point));

    let dir = out_dir(common)?;
    let mut manifest = RunManifest::new("decode", &s.resolved);
    write_out(&mut manifest, "decision", dir.join("decision.kv"), &kv.to_string())?;
    finish(&manifest, &dir)
}

pub fn simulate(common: &Common, bundle: Option<PathBuf>) -> Res<()> {
    let mut s = Settings::load(common)?;
    s.override_with("bundle", bundle.map(|p| p.display().to_string()));
    let codec = load_codec(&mut s)?;
    let mut points: Vec<OperatingPoint> = Vec::new();
    if let Some(v) = s.list::<f64>("sigma")? {
        points.extend(v.into_iter().map(OperatingPoint::Sigma));
    }
    if let Some(v) = s.list::<f64>("vnr_db")? {
        points.extend(v.into_iter().map(OperatingPoint::VnrDb));
    }
    if points.iter().any(|p| matches!(p, OperatingPoint::Sigma(x) if !(*x > 0.0))) {
        return Err(Failure::config("noise levels must be positive"));
    }
    let d = StopRule::default();
    let mode = s.choice("mode", "full", &["full", "genie"])?;
    let uncoded = s.choice("uncoded", "analytic", &["analytic", "simulated"])?;
    let cfg = SimConfig {
        points,
        stop: StopRule {
            min_errors: s.get_or("min_errors", d.min_errors)?,
            min_errors_deep: s.get_or("min_errors_deep", d.min_errors_deep)?,
            deep_wer: s.get_or("deep_wer", d.deep_wer)?,
            max_trials: s.get_or("max_trials", d.max_trials)?,
        },
        seed: s.get_or("seed", 0)?,
        mode: if mode == "genie" { Mode::Genie } else { Mode::Full },
        uncoded: if uncoded == "simulated" { UncodedMode::Simulated } else { UncodedMode::Analytic },
    };
    let result = sweep(&codec, &cfg).map_err(lib)?;

    let mut csv = Vec::new();
    write_csv(&result.points, codec.spec().levels(), &mut csv).expect("writing to memory");
    let dir = out_dir(common)?;
    let mut manifest = RunManifest::new("simulate", &s.resolved);
    write_out(&mut manifest, "csv", dir.join("wer.csv"), &String::from_utf8(csv).expect("ascii csv"))?;
    let low: Vec<String> = result
        .points
        .iter()
        .filter(|p| p.low_confidence)
        .map(|p| format!("{:.4} dB", p.vnr_db))
        .collect();
    if !low.is_empty() {
        log::warn!("trial budget exhausted before the stop rule at {}", low.join(", "));
    }
    finish(&manifest, &dir)
}

pub fn rates(common: &Common) -> Res<()> {
    let mut s = Settings::load(common)?;
    let n: usize = s.require("n")?;
    let target: f64 = s.get_or("target_pe", 1e-2)?;
    let mut cfg = RateDesignConfig::two_level(n, target);
    let levels: usize = s.get_or("levels", 2)?;
    let default_box = |l: usize| cfg.rate_boxes.get(l).copied().unwrap_or((0.9, 0.999));
    let boxes = (0..levels)
        .map(|l| {
            let (lo, hi) = default_box(l);
            Ok((s.get_or(&format!("level{l}.rate_min"), lo)?, s.get_or(&format!("level{l}.rate_max"), hi)?))
        })
        .collect::<Res<Vec<_>>>()?;
    cfg.rate_boxes = boxes;
    cfg.dv = s.get_or("dv", cfg.dv)?;
    cfg.sigma_box = (s.get_or("sigma_min", cfg.sigma_box.0)?, s.get_or("sigma_max", cfg.sigma_box.1)?);
    cfg.grid = s.get_or("grid", cfg.grid)?;
    cfg.stop.min_errors = s.get_or("min_errors", cfg.stop.min_errors)?;
    cfg.stop.min_errors_deep = cfg.stop.min_errors;
    cfg.stop.max_trials = s.get_or("max_trials", cfg.stop.max_trials)?;
    cfg.min_fit_errors = s.get_or("min_fit_errors", cfg.min_fit_errors)?;
    cfg.seed = s.get_or("seed", 0)?;
    cfg.bp = s.bp()?;
    let d = design_rates(&cfg).map_err(lib)?;

    let mut kv = KvConfig::new();
    for (l, (&r, &m)) in d.rates.iter().zip(&d.m).enumerate() {
        kv.set(&format!("level{l}.rate"), format!("{r:.6}"));
        kv.set(&format!("level{l}.m"), m);
        if let Some(p) = d.predicted_wer.get(l) {
            kv.set(&format!("level{l}.predicted_wer"), format!("{p:e}"));
        }
    }
    kv.set("sigma", format!("{:.6}", d.sigma));
    kv.set("vnr_db", format!("{:.4}", d.vnr_db));
    kv.set("objective", format!("{:.6}", d.objective));
    kv.set("pe_uncoded", format!("{:e}", d.pe_uncoded));
    log::info!("rates {:?}, sigma {:.4}, VNR {:.3} dB", d.rates, d.sigma, d.vnr_db);

    let dir = out_dir(common)?;
    let mut manifest = RunManifest::new("rates", &s.resolved);
    write_out(&mut manifest, "rates", dir.join("rates.kv"), &kv.to_string())?;
    finish(&manifest, &dir)
}

pub fn report(common: &Common, input: Option<PathBuf>, references: Vec<PathBuf>) -> Res<()> {
    let mut s = Settings::load(common)?;
    s.override_with("input", input.map(|p| p.display().to_string()));
    if !references.is_empty() {
        let joined: Vec<String> = references.iter().map(|p| p.display().to_string()).collect();
        s.override_with("references", Some(joined.join(", ")));
    }
    let input = s.path("input")?;
    let refs: Vec<String> = s.list("references")?.unwrap_or_default();
    let table = Table::parse(&read_text(&input).map_err(lib)?).map_err(lib)?;
    let col = |name: &str| {
        table
            .column(name)
            .ok_or_else(|| Failure::io(format!("{} has no `{name}` column", input.display())))
    };
    let mut cols = vec![("vnr_db".to_string(), col("vnr_db")?), ("wer_total".into(), col("wer_total")?), ("wer_coded".into(), col("wer_coded")?)];
    for (i, h) in table.header.iter().enumerate() {
        if h.starts_with("wer_l") {
            cols.push((h.clone(), i));
        }
    }

    let dir = out_dir(common)?;
    let mut manifest = RunManifest::new("report", &s.resolved);
    let mut dat = format!("# {}\n", cols.iter().map(|c| c.0.as_str()).collect::<Vec<_>>().join(" "));
    let mut rows = table.rows.clone();
    rows.sort_by(|a, b| a[cols[0].1].total_cmp(&b[cols[0].1]));
    for row in &rows {
        dat.push_str(&join(&cols.iter().map(|c| row[c.1]).collect::<Vec<_>>()));
        dat.push('\n');
    }
    write_out(&mut manifest, "data", dir.join("wer.dat"), &dat)?;

    let mut plot = String::from(
        "set logscale y\nset format y '10^{%L}'\nset xlabel 'VNR (dB)'\nset ylabel 'WER'\nset grid\nplot ",
    );
    let mut curves = vec![format!("'wer.dat' using 1:2 with linespoints title 'lattice'")];
    for (i, name) in cols.iter().enumerate().skip(3) {
        curves.push(format!("'wer.dat' using 1:{} with lines dashtype 2 title '{}'", i + 1, name.0.replace('_', " ")));
    }
    for (k, r) in refs.iter().enumerate() {
        let path = PathBuf::from(r);
        let points = read_reference_csv(&read_text(&path).map_err(lib)?).map_err(lib)?;
        let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| format!("ref{k}"));
        let name = format!("ref_{stem}.dat");
        let text: String = points.iter().map(|(x, y)| format!("{x} {y}\n")).collect();
        write_out(&mut manifest, &format!("reference{k}"), dir.join(&name), &text)?;
        curves.push(format!("'{name}' using 1:2 with linespoints title '{stem}'"));
    }
    plot.push_str(&curves.join(", \\\n     "));
    plot.push('\n');
    write_out(&mut manifest, "plot", dir.join("plot.gp"), &plot)?;
    finish(&manifest, &dir)
}
