//! n-plectic structures and the fundamental equation `i_x omega = df` /
//! Poisson constraint `i_y omega = f` as bounded-degree exact linear problems.
//!
//! The solver expands the unknown tensor over all ascending wedge monomials of
//! the required degree with polynomial coefficients of total degree at most
//! `degree_bound`, matches coefficients against the target and eliminates the
//! resulting sparse system exactly (fraction-free over the integers, one
//! connected component at a time).

use crate::graded::{contract_right, de_rham, Cotensor, Tensor, Wedge};
use crate::poly::{Monomial, Polynomial, Rat};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StructureError {
    #[error("omega must be homogeneous of form degree n+1 = {expected}, found degrees {found:?}")]
    OmegaDegree { expected: usize, found: Vec<usize> },
    #[error("omega is not closed: d(omega) != 0")]
    OmegaNotClosed,
    #[error("variable-count mismatch: structure has {0} variables, value has {1}")]
    VarMismatch(usize, usize),
}

#[derive(Debug, Error, PartialEq, Eq, Clone, Copy)]
pub enum WitnessEquation {
    #[error("fundamental equation i_x omega = df")]
    Fundamental,
    #[error("Poisson constraint i_y omega = f")]
    Constraint,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PoissonError {
    #[error("not Poisson within degree bound: {0} has no solution")]
    NotPoissonWithinBound(WitnessEquation),
    #[error("witness does not verify: {0}")]
    WitnessInvalid(WitnessEquation),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SolveStatus {
    Found,
    NoSolutionWithinBound,
}

/// Outcome of one contraction solve, with the kernel of `z -> i_z omega`
/// restricted to the same ansatz.
#[derive(Clone, Debug)]
pub struct SolveReport {
    pub solution: Option<Tensor>,
    pub kernel_basis: Vec<Tensor>,
    pub status: SolveStatus,
}

#[derive(Clone, Debug)]
pub struct NPlecticStructure {
    n_vars: usize,
    n: usize,
    omega: Cotensor,
    degree_bound: u32,
}

impl NPlecticStructure {
    pub fn new(n_vars: usize, n: usize, omega: Cotensor, degree_bound: u32) -> Result<Self, StructureError> {
        if omega.n_vars() != n_vars {
            return Err(StructureError::VarMismatch(n_vars, omega.n_vars()));
        }
        if !omega.is_zero() && omega.homogeneous_degree() != Some(n + 1) {
            return Err(StructureError::OmegaDegree {
                expected: n + 1,
                found: omega.0.degrees(),
            });
        }
        if !de_rham(&omega).is_zero() {
            return Err(StructureError::OmegaNotClosed);
        }
        Ok(NPlecticStructure { n_vars, n, omega, degree_bound })
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn plectic_degree(&self) -> usize {
        self.n
    }

    pub fn omega(&self) -> &Cotensor {
        &self.omega
    }

    pub fn degree_bound(&self) -> u32 {
        self.degree_bound
    }

    pub fn with_degree_bound(&self, bound: u32) -> Self {
        let mut s = self.clone();
        s.degree_bound = bound;
        s
    }

    /// True iff `d omega = 0` (validated at construction; cheap to re-check).
    pub fn verify_cocycle(&self) -> bool {
        de_rham(&self.omega).is_zero()
    }

    pub fn verify_hamilton(&self, f: &Cotensor, x: &Tensor) -> bool {
        contract_right(x, &self.omega) == de_rham(f)
    }

    pub fn verify_constraint(&self, f: &Cotensor, y: &Tensor) -> bool {
        contract_right(y, &self.omega) == *f
    }

    /// Tensor degree a Hamilton witness of a form-degree-`p` cotensor must have.
    pub fn hamilton_degree(&self, form_degree: usize) -> i64 {
        self.n as i64 - form_degree as i64
    }

    pub fn constraint_degree(&self, form_degree: usize) -> i64 {
        self.hamilton_degree(form_degree) + 1
    }

    /// Solve `i_x omega = df`.
    pub fn solve_hamilton(&self, f: &Cotensor) -> SolveReport {
        self.solve_contraction(&de_rham(f), true)
    }

    /// Solve `i_y omega = f`.
    pub fn solve_constraint(&self, f: &Cotensor) -> SolveReport {
        self.solve_contraction(f, true)
    }

    /// Solve without materializing the kernel basis (used by witness fallbacks).
    pub fn solve_particular(&self, target: &Cotensor) -> Option<Tensor> {
        self.solve_contraction(target, false).solution
    }

    /// Kernel basis of `z -> i_z omega` on tensors of degree `q` with
    /// coefficient degree at most `coeff_bound`.
    pub fn kernel_basis(&self, q: usize, coeff_bound: u32) -> Vec<Tensor> {
        if q > self.n_vars {
            return Vec::new();
        }
        let sys = ContractionSystem::new(self, q, coeff_bound);
        sys.solve_with_kernel(&Cotensor::zero(self.n_vars))
            .map(|(_, k)| k)
            .unwrap_or_default()
    }

    /// Solve `i_z omega = target` degree part by degree part.
    pub fn solve_contraction(&self, target: &Cotensor, with_kernel: bool) -> SolveReport {
        let mut solution = Tensor::zero(self.n_vars);
        let mut kernel = Vec::new();
        if target.is_zero() {
            return SolveReport { solution: Some(solution), kernel_basis: kernel, status: SolveStatus::Found };
        }
        for (m, part) in target.parts() {
            // i_z omega has form degree (n+1) - |z|
            let Some(q) = (self.n + 1).checked_sub(m) else {
                return SolveReport {
                    solution: None,
                    kernel_basis: Vec::new(),
                    status: SolveStatus::NoSolutionWithinBound,
                };
            };
            if q > self.n_vars {
                return SolveReport {
                    solution: None,
                    kernel_basis: Vec::new(),
                    status: SolveStatus::NoSolutionWithinBound,
                };
            }
            let sys = ContractionSystem::new(self, q, self.degree_bound);
            match sys.solve_with_kernel(&part) {
                Some((z, k)) => {
                    solution = solution.add(&z);
                    if with_kernel {
                        kernel.extend(k);
                    }
                }
                None => {
                    return SolveReport {
                        solution: None,
                        kernel_basis: Vec::new(),
                        status: SolveStatus::NoSolutionWithinBound,
                    };
                }
            }
        }
        debug_assert!(contract_right(&solution, &self.omega) == *target);
        SolveReport { solution: Some(solution), kernel_basis: kernel, status: SolveStatus::Found }
    }

    /// The kernel property `ker(omega) subset ker(f)` for a verified bundle,
    /// checked on computed kernel basis elements (at most `samples` per tensor
    /// degree, constant and linear coefficients).
    pub fn kernel_property_check(&self, p: &PoissonCotensor, samples: usize) -> bool {
        for q in 1..=(self.n + 1).min(self.n_vars) {
            for z in self.kernel_basis(q, 1).into_iter().take(samples) {
                if !contract_right(&z, &p.f).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// Bundle both solves into a verified Poisson cotensor.
    pub fn make_poisson(&self, f: &Cotensor) -> Result<PoissonCotensor, PoissonError> {
        let ham = self.solve_hamilton(f);
        let Some(x) = ham.solution else {
            return Err(PoissonError::NotPoissonWithinBound(WitnessEquation::Fundamental));
        };
        let cons = self.solve_constraint(f);
        let Some(y) = cons.solution else {
            return Err(PoissonError::NotPoissonWithinBound(WitnessEquation::Constraint));
        };
        PoissonCotensor::from_witnesses(self, f.clone(), x, y)
    }
}

/// A cotensor bundled with verified Hamilton and constraint witnesses.
///
/// `form_degree` is carried explicitly so the zero cotensor keeps its degree
/// bookkeeping (the sign exponents of every bracket formula depend on it).
#[derive(Clone, Debug)]
pub struct PoissonCotensor {
    pub f: Cotensor,
    pub x: Tensor,
    pub y: Tensor,
    form_degree: usize,
}

impl PoissonCotensor {
    pub fn from_witnesses(
        structure: &NPlecticStructure,
        f: Cotensor,
        x: Tensor,
        y: Tensor,
    ) -> Result<Self, PoissonError> {
        let form_degree = f.homogeneous_degree().unwrap_or(0);
        Self::from_witnesses_with_degree(structure, f, x, y, form_degree)
    }

    pub fn from_witnesses_with_degree(
        structure: &NPlecticStructure,
        f: Cotensor,
        x: Tensor,
        y: Tensor,
        form_degree: usize,
    ) -> Result<Self, PoissonError> {
        if !structure.verify_hamilton(&f, &x) {
            return Err(PoissonError::WitnessInvalid(WitnessEquation::Fundamental));
        }
        if !structure.verify_constraint(&f, &y) {
            return Err(PoissonError::WitnessInvalid(WitnessEquation::Constraint));
        }
        Ok(PoissonCotensor { f, x, y, form_degree })
    }

    pub fn zero(structure: &NPlecticStructure, form_degree: usize) -> Self {
        PoissonCotensor {
            f: Cotensor::zero(structure.n_vars()),
            x: Tensor::zero(structure.n_vars()),
            y: Tensor::zero(structure.n_vars()),
            form_degree,
        }
    }

    pub fn form_degree(&self) -> usize {
        self.form_degree
    }

    /// Tensor degree of the cotensor: `-p`.
    pub fn f_degree(&self) -> i64 {
        -(self.form_degree as i64)
    }

    /// Tensor degree of the Hamilton witness: `|f| + n`.
    pub fn x_degree(&self, structure: &NPlecticStructure) -> i64 {
        self.f_degree() + structure.plectic_degree() as i64
    }

    pub fn y_degree(&self, structure: &NPlecticStructure) -> i64 {
        self.x_degree(structure) + 1
    }

    /// Scale the bundle; the witness identities are linear, so they persist.
    pub(crate) fn scaled(p: &PoissonCotensor, c: &Rat) -> PoissonCotensor {
        PoissonCotensor {
            f: p.f.scale(c),
            x: p.x.scale(c),
            y: p.y.scale(c),
            form_degree: p.form_degree,
        }
    }
}

// ---- exact sparse linear solver -------------------------------------------

type RowKey = (Wedge, Monomial);
/// Sparse vectors over solver columns: (column id, coefficient) pairs.
type SparseVec = Vec<(usize, Rat)>;

struct ContractionSystem {
    n_vars: usize,
    /// column id -> (wedge index tuple, coefficient monomial)
    cols: Vec<(Vec<u32>, Monomial)>,
    /// row key -> sparse entries (column id, rational coefficient)
    rows: BTreeMap<RowKey, Vec<(usize, Rat)>>,
}

impl ContractionSystem {
    fn new(structure: &NPlecticStructure, q: usize, coeff_bound: u32) -> Self {
        let n_vars = structure.n_vars;
        let wedges = ascending_tuples(n_vars, q);
        let monomials = monomials_up_to(n_vars, coeff_bound);
        let mut cols = Vec::new();
        let mut rows: BTreeMap<RowKey, Vec<(usize, Rat)>> = BTreeMap::new();
        for w in &wedges {
            let basis = Tensor::term(n_vars, w, Polynomial::one(n_vars));
            let image = contract_right(&basis, structure.omega());
            for m in &monomials {
                let col_id = cols.len();
                cols.push((w.clone(), m.clone()));
                for (u, p) in image.terms() {
                    for (mp, c) in p.terms() {
                        let row = (u.clone(), m.mul(mp));
                        rows.entry(row).or_default().push((col_id, c.clone()));
                    }
                }
            }
        }
        ContractionSystem { n_vars, cols, rows }
    }

    /// Particular solution plus kernel basis, or `None` when inconsistent.
    fn solve_with_kernel(&self, target: &Cotensor) -> Option<(Tensor, Vec<Tensor>)> {
        let mut rhs: BTreeMap<RowKey, Rat> = BTreeMap::new();
        for (w, p) in target.terms() {
            for (m, c) in p.terms() {
                rhs.insert((w.clone(), m.clone()), c.clone());
            }
        }
        for key in rhs.keys() {
            if !self.rows.contains_key(key) {
                return None; // target outside the reachable span
            }
        }
        // connected components of the column graph (columns joined by rows)
        let mut uf = UnionFind::new(self.cols.len());
        for entries in self.rows.values() {
            for pair in entries.windows(2) {
                uf.union(pair[0].0, pair[1].0);
            }
        }
        let mut comp_rows: BTreeMap<usize, Vec<&RowKey>> = BTreeMap::new();
        for (key, entries) in &self.rows {
            let root = uf.find(entries[0].0);
            comp_rows.entry(root).or_default().push(key);
        }
        let mut comp_cols: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for c in 0..self.cols.len() {
            comp_cols.entry(uf.find(c)).or_default().push(c);
        }
        let mut solution = Vec::new();
        let mut kernel: Vec<SparseVec> = Vec::new();
        for (root, cols) in comp_cols {
            let rows = comp_rows.remove(&root).unwrap_or_default();
            if rows.is_empty() {
                // columns with no constraints are pure kernel directions
                for &c in &cols {
                    kernel.push(vec![(c, Rat::one())]);
                }
                continue;
            }
            let (part, null) = eliminate(&rows, &cols, &self.rows, &rhs)?;
            solution.extend(part);
            kernel.extend(null);
        }
        let to_tensor = |coeffs: &[(usize, Rat)]| {
            let mut t = Tensor::zero(self.n_vars);
            for (c, v) in coeffs {
                if v.is_zero() {
                    continue;
                }
                let (w, m) = &self.cols[*c];
                let p = Polynomial::from_terms(self.n_vars, [(m.clone(), v.clone())]);
                t = t.add(&Tensor::term(self.n_vars, w, p));
            }
            t
        };
        let solution = to_tensor(&solution);
        let kernel = kernel.iter().map(|v| to_tensor(v)).collect();
        Some((solution, kernel))
    }
}

/// Fraction-free Gaussian elimination (Bareiss) of one dense component.
/// Returns a particular solution (free variables zero) and the kernel basis.
fn eliminate(
    row_keys: &[&RowKey],
    cols: &[usize],
    all_rows: &BTreeMap<RowKey, Vec<(usize, Rat)>>,
    rhs: &BTreeMap<RowKey, Rat>,
) -> Option<(SparseVec, Vec<SparseVec>)> {
    let ncols = cols.len();
    let col_pos: BTreeMap<usize, usize> = cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    // assemble an integer matrix, clearing denominators row by row
    let mut mat: Vec<Vec<BigInt>> = Vec::with_capacity(row_keys.len());
    for key in row_keys {
        let mut row = vec![Rat::zero(); ncols + 1];
        for (c, v) in &all_rows[*key] {
            row[col_pos[c]] = row[col_pos[c]].clone() + v.clone();
        }
        if let Some(v) = rhs.get(*key) {
            row[ncols] = v.clone();
        }
        let mut lcm = BigInt::one();
        for v in &row {
            if !v.is_zero() {
                lcm = num_integer::lcm(lcm, v.denom().clone());
            }
        }
        mat.push(row.into_iter().map(|v| v.numer() * (&lcm / v.denom())).collect());
    }
    let nrows = mat.len();
    // Bareiss with full cross-elimination: pivot rows end up determining their
    // variable directly, exact integer divisions throughout
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0usize;
    for c in 0..ncols {
        let Some(p) = (r..nrows).find(|&i| !mat[i][c].is_zero()) else {
            continue;
        };
        mat.swap(r, p);
        for i in 0..nrows {
            if i == r || mat[i][c].is_zero() {
                continue;
            }
            for j in 0..=ncols {
                if j == c {
                    continue;
                }
                let v = (&mat[r][c] * &mat[i][j] - &mat[i][c] * &mat[r][j]) / &prev;
                mat[i][j] = v;
            }
            mat[i][c] = BigInt::zero();
        }
        prev = mat[r][c].clone();
        pivots.push((r, c));
        r += 1;
        if r == nrows {
            break;
        }
    }
    for row in mat.iter().skip(r) {
        if !row[ncols].is_zero() {
            return None;
        }
    }
    let pivot_col: BTreeMap<usize, usize> = pivots.iter().map(|&(row, c)| (c, row)).collect();
    // rows beyond the pivot count have all-zero coefficient parts by
    // construction of the cross-elimination; checked above for consistency
    let mut particular = Vec::new();
    for (&c, &row) in &pivot_col {
        let v = Rat::new(mat[row][ncols].clone(), mat[row][c].clone());
        if !v.is_zero() {
            particular.push((cols[c], v));
        }
    }
    let mut kernel = Vec::new();
    for fc in (0..ncols).filter(|c| !pivot_col.contains_key(c)) {
        let mut vec = vec![(cols[fc], Rat::one())];
        for (&c, &row) in &pivot_col {
            if mat[row][fc].is_zero() {
                continue;
            }
            vec.push((cols[c], -Rat::new(mat[row][fc].clone(), mat[row][c].clone())));
        }
        kernel.push(vec);
    }
    Some((particular, kernel))
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut a: usize) -> usize {
        while self.parent[a] != a {
            self.parent[a] = self.parent[self.parent[a]];
            a = self.parent[a];
        }
        a
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

pub(crate) fn ascending_tuples(n_vars: usize, q: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    fn rec(start: u32, q: usize, n: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if q == 0 {
            out.push(cur.clone());
            return;
        }
        for v in start..=n {
            cur.push(v);
            rec(v + 1, q - 1, n, cur, out);
            cur.pop();
        }
    }
    rec(1, q, n_vars as u32, &mut Vec::new(), &mut out);
    out
}

pub(crate) fn monomials_up_to(n_vars: usize, bound: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    fn rec(pos: usize, n: usize, left: u32, cur: &mut Vec<u16>, out: &mut Vec<Monomial>) {
        if pos == n {
            out.push(Monomial(cur.clone()));
            return;
        }
        for e in 0..=left {
            cur.push(e as u16);
            rec(pos + 1, n, left - e, cur, out);
            cur.pop();
        }
    }
    rec(0, n_vars, bound, &mut Vec::new(), &mut out);
    out
}
