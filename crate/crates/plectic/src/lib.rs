//! Exact Cartan calculus for n-plectic structures with polynomial coefficients:
//! graded multivector fields and differential forms over the rationals, the
//! fundamental equation `i_x omega = df` and its Poisson constraint
//! `i_y omega = f` as exact linear problems, and the homotopy Poisson-n
//! operations (k-ary brackets, Leibniz operators, structure equations) with
//! verified witnesses.

pub mod comb;
pub mod graded;
pub mod homotopy;
pub mod nplectic;
pub mod parse;
pub mod pinfty;
pub mod poly;
pub mod suites;

pub use graded::{contract_left, contract_right, de_rham, lie_derivative, natural_pairing, schouten, Cotensor, Tensor};
pub use nplectic::{NPlecticStructure, PoissonCotensor, SolveReport, SolveStatus};
pub use poly::{Polynomial, Rat};
