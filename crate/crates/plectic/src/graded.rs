//! Exterior tensor and cotensor algebras over the polynomial Lie-Rinehart pair,
//! with the natural pairing, contractions, de Rham differential, Lie derivative
//! and Schouten-Nijenhuis bracket.
//!
//! Grading ledger: a q-vector tensor has tensor degree `+q`, a p-form cotensor
//! has tensor degree `-p`. Every sign exponent in the bracket formulas consumes
//! tensor degrees; form degrees are used only for storage and solver sizing.
//! The contraction conventions are the adjointness-defined ones:
//! `<i_x f, y> = <f, x ^ y>` (so `i_{x^y} = i_y . i_x`) and
//! `<g, j_f x> = <g ^ f, x>` (so `j_{f^g} = j_f . j_g`).

use crate::comb::neg_one_pow;
use crate::poly::{Polynomial, Rat};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GradedError {
    #[error("variable-count mismatch: {0} vs {1}")]
    VarMismatch(usize, usize),
    #[error("operation requires a homogeneous argument, got degrees {0:?}")]
    Inhomogeneous(Vec<usize>),
}

/// Ascending basis index tuple `i_1 < ... < i_k` (1-based variable indices).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Wedge(pub Vec<u32>);

impl Wedge {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Sort an arbitrary index tuple, returning the canonical wedge and the
    /// permutation sign, or `None` when an index repeats.
    pub fn sort_with_sign(indices: &[u32]) -> Option<(Wedge, i8)> {
        let mut arr = indices.to_vec();
        let mut sign = 1i8;
        for i in 0..arr.len() {
            for j in 0..arr.len().saturating_sub(i + 1) {
                if arr[j] > arr[j + 1] {
                    arr.swap(j, j + 1);
                    sign = -sign;
                }
            }
        }
        if arr.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some((Wedge(arr), sign))
    }
}

/// Shared sparse storage for both algebras: ascending wedge -> coefficient.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Graded {
    n_vars: usize,
    terms: BTreeMap<Wedge, Polynomial>,
}

impl Graded {
    pub fn zero(n_vars: usize) -> Self {
        Graded { n_vars, terms: BTreeMap::new() }
    }

    pub fn scalar(p: Polynomial) -> Self {
        let mut g = Graded::zero(p.n_vars());
        g.add_term(&[], p);
        g
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Wedge, &Polynomial)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, w: &Wedge) -> Polynomial {
        self.terms.get(w).cloned().unwrap_or_else(|| Polynomial::zero(self.n_vars))
    }

    /// Insert `p * e_{indices}`, canonicalizing the index order.
    pub fn add_term(&mut self, indices: &[u32], p: Polynomial) {
        if p.is_zero() {
            return;
        }
        let Some((w, sign)) = Wedge::sort_with_sign(indices) else {
            return;
        };
        let p = if sign < 0 { p.neg() } else { p };
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(p);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&p);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Graded) -> Graded {
        assert_eq!(self.n_vars, other.n_vars, "variable-count mismatch");
        let mut r = self.clone();
        for (w, p) in &other.terms {
            r.add_term(&w.0, p.clone());
        }
        r
    }

    pub fn neg(&self) -> Graded {
        Graded {
            n_vars: self.n_vars,
            terms: self.terms.iter().map(|(w, p)| (w.clone(), p.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Graded) -> Graded {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rat) -> Graded {
        use num_traits::Zero;
        if c.is_zero() {
            return Graded::zero(self.n_vars);
        }
        Graded {
            n_vars: self.n_vars,
            terms: self.terms.iter().map(|(w, p)| (w.clone(), p.scale(c))).collect(),
        }
    }

    pub fn scale_sign(&self, s: i8) -> Graded {
        if s >= 0 {
            self.clone()
        } else {
            self.neg()
        }
    }

    pub fn scale_poly(&self, c: &Polynomial) -> Graded {
        let mut r = Graded::zero(self.n_vars);
        for (w, p) in &self.terms {
            r.add_term(&w.0, p.mul(c));
        }
        r
    }

    pub fn wedge(&self, other: &Graded) -> Graded {
        assert_eq!(self.n_vars, other.n_vars, "variable-count mismatch");
        let mut r = Graded::zero(self.n_vars);
        for (wa, pa) in &self.terms {
            for (wb, pb) in &other.terms {
                let mut idx = wa.0.clone();
                idx.extend_from_slice(&wb.0);
                r.add_term(&idx, pa.mul(pb));
            }
        }
        r
    }

    /// Distinct wedge lengths present.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.terms.keys().map(Wedge::len).collect();
        d.dedup();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degrees().len() <= 1
    }

    /// The common wedge length, when nonzero and homogeneous.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let d = self.degrees();
        if d.len() == 1 {
            Some(d[0])
        } else {
            None
        }
    }

    /// Split into homogeneous parts by wedge length.
    pub fn parts(&self) -> Vec<(usize, Graded)> {
        let mut map: BTreeMap<usize, Graded> = BTreeMap::new();
        for (w, p) in &self.terms {
            map.entry(w.len()).or_insert_with(|| Graded::zero(self.n_vars)).add_term(&w.0, p.clone());
        }
        map.into_iter().collect()
    }
}

macro_rules! graded_wrapper {
    ($name:ident, $sym:literal) => {
        #[derive(Clone, PartialEq, Eq, Debug)]
        pub struct $name(pub Graded);

        impl $name {
            pub fn zero(n_vars: usize) -> Self {
                $name(Graded::zero(n_vars))
            }

            pub fn scalar(p: Polynomial) -> Self {
                $name(Graded::scalar(p))
            }

            pub fn term(n_vars: usize, indices: &[u32], p: Polynomial) -> Self {
                let mut g = Graded::zero(n_vars);
                g.add_term(indices, p);
                $name(g)
            }

            pub fn n_vars(&self) -> usize {
                self.0.n_vars()
            }

            pub fn is_zero(&self) -> bool {
                self.0.is_zero()
            }

            pub fn add(&self, other: &Self) -> Self {
                $name(self.0.add(&other.0))
            }

            pub fn sub(&self, other: &Self) -> Self {
                $name(self.0.sub(&other.0))
            }

            pub fn neg(&self) -> Self {
                $name(self.0.neg())
            }

            pub fn scale(&self, c: &Rat) -> Self {
                $name(self.0.scale(c))
            }

            pub fn scale_sign(&self, s: i8) -> Self {
                $name(self.0.scale_sign(s))
            }

            pub fn scale_poly(&self, p: &Polynomial) -> Self {
                $name(self.0.scale_poly(p))
            }

            pub fn wedge(&self, other: &Self) -> Self {
                $name(self.0.wedge(&other.0))
            }

            pub fn is_homogeneous(&self) -> bool {
                self.0.is_homogeneous()
            }

            pub fn homogeneous_degree(&self) -> Option<usize> {
                self.0.homogeneous_degree()
            }

            pub fn parts(&self) -> Vec<(usize, Self)> {
                self.0.parts().into_iter().map(|(d, g)| (d, $name(g))).collect()
            }

            pub fn terms(&self) -> impl Iterator<Item = (&Wedge, &Polynomial)> {
                self.0.terms()
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                if self.0.is_zero() {
                    return write!(f, "0");
                }
                for (i, (w, p)) in self.0.terms().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    if w.is_empty() {
                        write!(f, "({p})")?;
                    } else {
                        if !p.is_one() {
                            write!(f, "({p}) ")?;
                        }
                        for (j, idx) in w.0.iter().enumerate() {
                            if j > 0 {
                                write!(f, "^")?;
                            }
                            write!(f, concat!($sym, "{}"), idx)?;
                        }
                    }
                }
                Ok(())
            }
        }
    };
}

graded_wrapper!(Tensor, "d");
graded_wrapper!(Cotensor, "dx");

impl Tensor {
    /// Tensor degree of a homogeneous q-vector is `+q`; `None` when mixed or zero.
    pub fn tensor_degree(&self) -> Option<i64> {
        self.homogeneous_degree().map(|d| d as i64)
    }
}

impl Cotensor {
    /// Tensor degree of a homogeneous p-form is `-p`; `None` when mixed or zero.
    pub fn tensor_degree(&self) -> Option<i64> {
        self.homogeneous_degree().map(|d| -(d as i64))
    }
}

/// `<f, x>`: determinant pairing, zero unless the degrees cancel.
pub fn natural_pairing(f: &Cotensor, x: &Tensor) -> Polynomial {
    assert_eq!(f.n_vars(), x.n_vars(), "variable-count mismatch");
    let mut out = Polynomial::zero(f.n_vars());
    for (wf, pf) in f.terms() {
        if let Some(px) = x.0.terms.get(wf) {
            out = out.add(&pf.mul(px));
        }
    }
    out
}

fn contract_single_vector(j: u32, f: &Graded) -> Graded {
    let mut out = Graded::zero(f.n_vars());
    for (w, p) in f.terms() {
        if let Some(pos) = w.0.iter().position(|&i| i == j) {
            let mut idx = w.0.clone();
            idx.remove(pos);
            let p = if pos % 2 == 0 { p.clone() } else { p.neg() };
            out.add_term(&idx, p);
        }
    }
    out
}

/// `i_x f`. For a basis wedge `d_{j_1} ^ ... ^ d_{j_q}` the first factor
/// contracts innermost, realizing `i_{x^y} = i_y . i_x`.
pub fn contract_right(x: &Tensor, f: &Cotensor) -> Cotensor {
    assert_eq!(x.n_vars(), f.n_vars(), "variable-count mismatch");
    let mut out = Graded::zero(f.n_vars());
    for (wx, px) in x.terms() {
        let mut cur = f.0.clone();
        for &j in &wx.0 {
            cur = contract_single_vector(j, &cur);
            if cur.is_zero() {
                break;
            }
        }
        if !cur.is_zero() {
            out = out.add(&cur.scale_poly(px));
        }
    }
    Cotensor(out)
}

fn contract_single_covector(c: u32, x: &Graded) -> Graded {
    let mut out = Graded::zero(x.n_vars());
    for (w, p) in x.terms() {
        if let Some(pos) = w.0.iter().position(|&i| i == c) {
            let mut idx = w.0.clone();
            idx.remove(pos);
            let s = neg_one_pow((w.len() - 1 - pos) as i64);
            let p = if s > 0 { p.clone() } else { p.neg() };
            out.add_term(&idx, p);
        }
    }
    out
}

/// `j_f x`. For a basis wedge `dx_{c_1} ^ ... ^ dx_{c_m}` the last factor
/// contracts innermost, realizing `j_{f^g} = j_f . j_g`.
pub fn contract_left(f: &Cotensor, x: &Tensor) -> Tensor {
    assert_eq!(x.n_vars(), f.n_vars(), "variable-count mismatch");
    let mut out = Graded::zero(x.n_vars());
    for (wf, pf) in f.terms() {
        let mut cur = x.0.clone();
        for &c in wf.0.iter().rev() {
            cur = contract_single_covector(c, &cur);
            if cur.is_zero() {
                break;
            }
        }
        if !cur.is_zero() {
            out = out.add(&cur.scale_poly(pf));
        }
    }
    Tensor(out)
}

/// The de Rham differential; on the coordinate frame `d(a dx^I) = da ^ dx^I`.
pub fn de_rham(f: &Cotensor) -> Cotensor {
    let n = f.n_vars();
    let mut out = Graded::zero(n);
    for (w, p) in f.terms() {
        for i in 1..=n {
            let dp = p.partial(i);
            if dp.is_zero() {
                continue;
            }
            let mut idx = Vec::with_capacity(w.len() + 1);
            idx.push(i as u32);
            idx.extend_from_slice(&w.0);
            out.add_term(&idx, dp);
        }
    }
    Cotensor(out)
}

/// Cartan's graded homotopy formula `L_x f = d i_x f - (-1)^{|x|} i_x df`
/// for homogeneous `x`.
pub fn lie_derivative(x: &Tensor, f: &Cotensor) -> Result<Cotensor, GradedError> {
    if x.is_zero() {
        return Ok(Cotensor::zero(f.n_vars()));
    }
    let Some(q) = x.homogeneous_degree() else {
        return Err(GradedError::Inhomogeneous(x.0.degrees()));
    };
    let a = de_rham(&contract_right(x, f));
    let b = contract_right(x, &de_rham(f)).scale_sign(neg_one_pow(q as i64));
    Ok(a.sub(&b))
}

/// Lie derivative of a possibly inhomogeneous tensor, summed over its parts.
pub fn lie_derivative_mixed(x: &Tensor, f: &Cotensor) -> Cotensor {
    let mut out = Cotensor::zero(f.n_vars());
    for (_, part) in x.parts() {
        out = out.add(&lie_derivative(&part, f).expect("parts are homogeneous"));
    }
    out
}

/// Schouten-Nijenhuis bracket. On vectors it is the commutator of derivations;
/// the extension to exterior powers is the graded biderivation one, computed
/// termwise over the coordinate frame (where vector-vector brackets vanish and
/// only coefficient derivatives survive).
pub fn schouten(x: &Tensor, y: &Tensor) -> Tensor {
    assert_eq!(x.n_vars(), y.n_vars(), "variable-count mismatch");
    let n = x.n_vars();
    let mut out = Graded::zero(n);
    for (wx, px) in x.terms() {
        let p = wx.len();
        for (wy, py) in y.terms() {
            let q = wy.len();
            // vectors of x acting on the coefficient of y
            for (s, &i) in wx.0.iter().enumerate() {
                let c = px.mul(&py.partial(i as usize));
                if c.is_zero() {
                    continue;
                }
                let mut idx: Vec<u32> = Vec::with_capacity(p + q - 1);
                idx.extend(wx.0.iter().enumerate().filter(|&(t, _)| t != s).map(|(_, &v)| v));
                idx.extend_from_slice(&wy.0);
                let sign = neg_one_pow((p - 1 - s) as i64);
                out.add_term(&idx, if sign > 0 { c } else { c.neg() });
            }
            // vectors of y acting on the coefficient of x, with the
            // graded-antisymmetry sign -(-1)^{(p-1)(q-1)}
            for (t, &j) in wy.0.iter().enumerate() {
                let c = py.mul(&px.partial(j as usize));
                if c.is_zero() {
                    continue;
                }
                let mut idx: Vec<u32> = Vec::with_capacity(p + q - 1);
                idx.extend(wy.0.iter().enumerate().filter(|&(u, _)| u != t).map(|(_, &v)| v));
                idx.extend_from_slice(&wx.0);
                let sign = -neg_one_pow(((p as i64 - 1) * (q as i64 - 1)) + (q as i64 - 1 - t as i64));
                out.add_term(&idx, if sign > 0 { c } else { c.neg() });
            }
        }
    }
    Tensor(out)
}
