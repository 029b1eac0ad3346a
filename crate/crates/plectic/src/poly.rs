//! Exact-rational sparse multivariate polynomials, the coefficient algebra.
//!
//! Terms are stored canonically: a map from exponent vectors to nonzero
//! `BigRational` coefficients, ordered by total degree then lexicographically.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

pub type Rat = BigRational;

/// Exponent vector of a single term; one entry per variable.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u16>);

impl Monomial {
    pub fn constant(n_vars: usize) -> Self {
        Monomial(vec![0; n_vars])
    }

    pub fn var(n_vars: usize, idx: usize) -> Self {
        debug_assert!(idx >= 1 && idx <= n_vars);
        let mut e = vec![0; n_vars];
        e[idx - 1] = 1;
        Monomial(e)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| u32::from(e)).sum()
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

// Total degree first, then lexicographic; this is the canonical term order
// used for printing and for deterministic iteration.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

/// Sparse polynomial over the rationals in a fixed number of variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polynomial {
    n_vars: usize,
    terms: BTreeMap<Monomial, Rat>,
}

impl Polynomial {
    pub fn zero(n_vars: usize) -> Self {
        Polynomial { n_vars, terms: BTreeMap::new() }
    }

    pub fn one(n_vars: usize) -> Self {
        Self::constant(n_vars, Rat::one())
    }

    pub fn constant(n_vars: usize, c: Rat) -> Self {
        let mut p = Self::zero(n_vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::constant(n_vars), c);
        }
        p
    }

    pub fn from_int(n_vars: usize, c: i64) -> Self {
        Self::constant(n_vars, Rat::from_integer(c.into()))
    }

    /// The variable `x_idx` (1-based).
    pub fn var(n_vars: usize, idx: usize) -> Self {
        assert!(idx >= 1 && idx <= n_vars, "variable index {idx} out of range 1..={n_vars}");
        let mut p = Self::zero(n_vars);
        p.terms.insert(Monomial::var(n_vars, idx), Rat::one());
        p
    }

    pub fn from_terms(n_vars: usize, it: impl IntoIterator<Item = (Monomial, Rat)>) -> Self {
        let mut p = Self::zero(n_vars);
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().next().is_some_and(|(m, c)| m.is_constant() && c.is_one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::total_degree).max()
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rat) {
        debug_assert_eq!(m.0.len(), self.n_vars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().clone() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn check_compatible(&self, other: &Polynomial) {
        assert_eq!(
            self.n_vars, other.n_vars,
            "polynomial variable-count mismatch: {} vs {}",
            self.n_vars, other.n_vars
        );
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        self.check_compatible(other);
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            n_vars: self.n_vars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        self.check_compatible(other);
        let mut r = Polynomial::zero(self.n_vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                r.add_term(ma.mul(mb), ca * cb);
            }
        }
        r
    }

    pub fn scale(&self, c: &Rat) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.n_vars);
        }
        Polynomial {
            n_vars: self.n_vars,
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn scale_int(&self, c: i64) -> Polynomial {
        self.scale(&Rat::from_integer(c.into()))
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut r = Polynomial::one(self.n_vars);
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// Formal partial derivative with respect to `x_idx` (1-based).
    pub fn partial(&self, idx: usize) -> Polynomial {
        assert!(idx >= 1 && idx <= self.n_vars, "variable index {idx} out of range 1..={}", self.n_vars);
        let mut r = Polynomial::zero(self.n_vars);
        for (m, c) in &self.terms {
            let e = m.0[idx - 1];
            if e == 0 {
                continue;
            }
            let mut me = m.clone();
            me.0[idx - 1] -= 1;
            r.add_term(me, c * Rat::from_integer(i64::from(e).into()));
        }
        r
    }
}

fn write_rat(f: &mut fmt::Formatter<'_>, c: &Rat) -> fmt::Result {
    if c.denom().is_one() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // descending canonical order reads naturally: leading term first
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut wrote = false;
            if !abs.is_one() || m.is_constant() {
                write_rat(f, &abs)?;
                wrote = true;
            }
            for (v, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if wrote {
                    write!(f, "*")?;
                }
                write!(f, "x{}", v + 1)?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
                wrote = true;
            }
        }
        Ok(())
    }
}
