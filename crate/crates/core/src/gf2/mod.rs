//! Sparse integer matrices with GF(2) semantics and Tanner-graph queries.

pub mod alist;
mod dense;
mod graph;
mod matrix;

pub use alist::{read_alist, read_alist_file, write_alist, write_alist_file};
pub use dense::{gf2_rank, BitMatrix};
pub use graph::{check_variable_distance, girth, Distance, TannerDistanceOracle};
pub use matrix::{int_matmul_mod, SparseMatrix};
