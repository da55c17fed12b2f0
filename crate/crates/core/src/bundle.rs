//! On-disk lattice specifications.
//!
//! A bundle is a directory holding `spec.kv` (dimension, level count and
//! per-level gaps), `h<l>.alist` for every level and `f<l>.alist` for every
//! coupling matrix.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::gf2::{read_alist_file, write_alist_file};
use crate::kv::KvConfig;
use crate::lattice::LatticeSpec;

pub const SPEC_FILE: &str = "spec.kv";

pub fn h_file(level: usize) -> String {
    format!("h{level}.alist")
}

pub fn f_file(level: usize) -> String {
    format!("f{level}.alist")
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn save_spec(spec: &LatticeSpec, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut kv = KvConfig::new();
    kv.set("n", spec.n());
    kv.set("levels", spec.levels());
    for l in 0..spec.levels() {
        kv.set(&format!("level{l}.m"), spec.m(l));
        if let Some(g) = spec.gap(l) {
            kv.set(&format!("level{l}.gap"), g);
        }
        write_alist_file(spec.h(l), &dir.join(h_file(l)))?;
    }
    for (i, f) in spec.couplings().unwrap_or_default().iter().enumerate() {
        write_alist_file(f, &dir.join(f_file(i + 1)))?;
    }
    kv.set("coupling", spec.couplings().is_some());
    write_text(&dir.join(SPEC_FILE), &kv.to_string())
}

pub fn load_spec(dir: &Path) -> Result<LatticeSpec> {
    let kv = KvConfig::parse(&read_text(&dir.join(SPEC_FILE))?)?;
    let n: usize = kv.require("n")?;
    let levels: usize = kv.require("levels")?;
    if levels == 0 || levels > 30 {
        return Err(Error::InvalidArgument(format!("bundle has {levels} levels")));
    }
    let coupled: bool = kv.get_or("coupling", false)?;
    let mut h = Vec::with_capacity(levels);
    let mut f = Vec::new();
    let mut gaps = Vec::with_capacity(levels);
    for l in 0..levels {
        let m = read_alist_file(&dir.join(h_file(l)))?;
        if m.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "{} has {} columns, bundle dimension is {n}",
                h_file(l),
                m.ncols()
            )));
        }
        h.push(m);
        if coupled && l > 0 {
            f.push(read_alist_file(&dir.join(f_file(l)))?);
        }
        gaps.push(kv.get(&format!("level{l}.gap"))?);
    }
    LatticeSpec::with_gaps(h, coupled.then_some(f), gaps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::{peg_construct_triangular, triangular_peg_check_split, DesignOptions};
    use crate::gf2::{int_matmul_mod, SparseMatrix};

    #[test]
    fn round_trip_with_gaps_and_integer_couplings() {
        let o = DesignOptions::default();
        let h1 = peg_construct_triangular(64, 8, 3, 2, &o).unwrap().matrix;
        let split = triangular_peg_check_split(&h1, 2, 32, &o).unwrap();
        let spec = LatticeSpec::with_gaps(vec![split.h, h1], Some(vec![split.f]), vec![Some(2), Some(2)]).unwrap();
        let dir = tempfile::tempdir().unwrap();
        save_spec(&spec, dir.path()).unwrap();
        let back = load_spec(dir.path()).unwrap();
        assert_eq!(back.matrices(), spec.matrices());
        assert_eq!(back.couplings(), spec.couplings());
        assert_eq!(back.gap(1), Some(2));

        let h0 = SparseMatrix::from_dense(&[vec![1, 1, 1, 1], vec![1, 0, 1, 0], vec![1, 1, 0, 0]], Some(2)).unwrap();
        let f1 = SparseMatrix::from_dense(&[vec![2, 7, 4], vec![11, 9, 6]], None).unwrap();
        let h1 = int_matmul_mod(&f1, &h0, Some(4)).unwrap();
        let spec = LatticeSpec::new(vec![h0, h1], Some(vec![f1])).unwrap();
        save_spec(&spec, dir.path()).unwrap();
        let back = load_spec(dir.path()).unwrap();
        assert_eq!(back.couplings(), spec.couplings());
        assert!(back.validate().is_valid());
    }

    #[test]
    fn missing_files_are_io_errors() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(load_spec(dir.path()), Err(Error::Io { .. })));
        write_text(&dir.path().join(SPEC_FILE), "n = 4\n").unwrap();
        assert!(matches!(load_spec(dir.path()), Err(Error::MissingKey(k)) if k == "levels"));
    }
}
