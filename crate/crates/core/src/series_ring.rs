//! Multivariate power series over exact rationals, truncated at a total degree.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Rational = BigRational;

/// Exponent vector `(a_1, ..., a_m)` of the monomial `t_1^a_1 ... t_m^a_m`.
pub type Exponent = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("series live in different rings: {left} vs {right} variables")]
    VariableMismatch { left: usize, right: usize },
    #[error("series with zero constant term is not invertible")]
    NotInvertible,
    #[error("assignment covers {got} variables, expected {expected}")]
    BadAssignment { expected: usize, got: usize },
    #[error("point has {got} coordinates, expected {expected}")]
    BadPoint { expected: usize, got: usize },
}

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn integer(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn total_degree(e: &[u32]) -> u32 {
    e.iter().sum()
}

/// Formats a rational exactly: `3`, `-3/2`.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// All exponent vectors in `nvars` variables with total degree `degree`,
/// in descending lexicographic order.
pub fn exponents_of_degree(nvars: usize, degree: u32) -> Vec<Exponent> {
    fn rec(nvars: usize, degree: u32, prefix: &mut Exponent, out: &mut Vec<Exponent>) {
        if prefix.len() + 1 == nvars {
            prefix.push(degree);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for a in (0..=degree).rev() {
            prefix.push(a);
            rec(nvars, degree - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if degree == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(nvars, degree, &mut Vec::with_capacity(nvars), &mut out);
    out
}

/// A power series in `t_1..t_m` known exactly up to total degree `bound`.
///
/// Invariant: no stored term has degree above `bound`, and no stored
/// coefficient is zero.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    nvars: usize,
    bound: u32,
    terms: BTreeMap<Exponent, Rational>,
}

impl TruncatedSeries {
    pub fn zero(nvars: usize, bound: u32) -> Self {
        TruncatedSeries {
            nvars,
            bound,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize, bound: u32) -> Self {
        Self::constant(nvars, bound, Rational::one())
    }

    pub fn constant(nvars: usize, bound: u32, c: Rational) -> Self {
        let mut s = Self::zero(nvars, bound);
        s.add_term(vec![0; nvars], c);
        s
    }

    /// The variable `t_{index+1}`.
    pub fn variable(nvars: usize, bound: u32, index: usize) -> Self {
        let mut e = vec![0; nvars];
        e[index] = 1;
        Self::monomial(nvars, bound, e, Rational::one())
    }

    pub fn monomial(nvars: usize, bound: u32, exponent: Exponent, coeff: Rational) -> Self {
        let mut s = Self::zero(nvars, bound);
        s.add_term(exponent, coeff);
        s
    }

    pub fn from_terms<I>(nvars: usize, bound: u32, terms: I) -> Self
    where
        I: IntoIterator<Item = (Exponent, Rational)>,
    {
        let mut s = Self::zero(nvars, bound);
        for (e, c) in terms {
            s.add_term(e, c);
        }
        s
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exponent: &[u32]) -> Rational {
        self.terms
            .get(exponent)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&vec![0; self.nvars])
    }

    /// Adds `coeff * t^exponent` in place; terms above the bound are dropped.
    pub fn add_term(&mut self, exponent: Exponent, coeff: Rational) {
        debug_assert_eq!(exponent.len(), self.nvars);
        if coeff.is_zero() || total_degree(&exponent) > self.bound {
            return;
        }
        match self.terms.entry(exponent) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_same_ring(&self, other: &Self) -> Result<(), SeriesError> {
        if self.nvars != other.nvars {
            return Err(SeriesError::VariableMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        Ok(())
    }

    /// Drops every term above `bound` (which must not exceed the current bound).
    pub fn truncate(&self, bound: u32) -> Self {
        let bound = bound.min(self.bound);
        TruncatedSeries {
            nvars: self.nvars,
            bound,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| total_degree(e) <= bound)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_same_ring(other)?;
        let mut out = self.truncate(self.bound.min(other.bound));
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars, self.bound);
        }
        TruncatedSeries {
            nvars: self.nvars,
            bound: self.bound,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_same_ring(other)?;
        let bound = self.bound.min(other.bound);
        let mut out = Self::zero(self.nvars, bound);
        for (ea, ca) in &self.terms {
            let da = total_degree(ea);
            if da > bound {
                continue;
            }
            for (eb, cb) in &other.terms {
                if da + total_degree(eb) > bound {
                    continue;
                }
                let e: Exponent = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        Ok(out)
    }

    /// Multiplicative inverse up to the bound.
    pub fn invert(&self) -> Result<Self, SeriesError> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(SeriesError::NotInvertible);
        }
        let inv_c0 = c0.recip();
        let higher: Vec<(&Exponent, &Rational)> = self
            .terms
            .iter()
            .filter(|(e, _)| total_degree(e) > 0)
            .collect();
        let mut out = Self::constant(self.nvars, self.bound, inv_c0.clone());
        // b_e = -(1/c0) * sum_{f != 0} a_f b_{e-f}, graded by total degree.
        for d in 1..=self.bound {
            for e in exponents_of_degree(self.nvars, d) {
                let mut acc = Rational::zero();
                for (f, af) in &higher {
                    if f.iter().zip(&e).any(|(x, y)| x > y) {
                        continue;
                    }
                    let rest: Exponent = e.iter().zip(f.iter()).map(|(x, y)| x - y).collect();
                    if let Some(b) = out.terms.get(&rest) {
                        acc += *af * b;
                    }
                }
                if !acc.is_zero() {
                    out.terms.insert(e, -(acc * &inv_c0));
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.nvars, self.bound);
        for _ in 0..k {
            out = out.try_mul(self).expect("same ring");
        }
        out
    }

    /// Substitution `t_i -> t'_{assignment[i]}` into a ring with `target_nvars` variables.
    pub fn collapse_variables(
        &self,
        assignment: &[usize],
        target_nvars: usize,
    ) -> Result<Self, SeriesError> {
        if assignment.len() != self.nvars {
            return Err(SeriesError::BadAssignment {
                expected: self.nvars,
                got: assignment.len(),
            });
        }
        if let Some(&bad) = assignment.iter().find(|&&j| j >= target_nvars) {
            return Err(SeriesError::BadAssignment {
                expected: target_nvars,
                got: bad + 1,
            });
        }
        let mut out = Self::zero(target_nvars, self.bound);
        for (e, c) in &self.terms {
            let mut f = vec![0; target_nvars];
            for (i, &a) in e.iter().enumerate() {
                f[assignment[i]] += a;
            }
            out.add_term(f, c.clone());
        }
        Ok(out)
    }

    /// Evaluates the stored polynomial exactly at a rational point.
    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational, SeriesError> {
        if point.len() != self.nvars {
            return Err(SeriesError::BadPoint {
                expected: self.nvars,
                got: point.len(),
            });
        }
        let mut total = Rational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (x, &a) in point.iter().zip(e) {
                term *= num_traits::pow(x.clone(), a as usize);
            }
            total += term;
        }
        Ok(total)
    }

    /// Sum of coefficients of each total degree `0..=bound`.
    pub fn graded_sums(&self) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.bound as usize + 1];
        for (e, c) in &self.terms {
            out[total_degree(e) as usize] += c;
        }
        out
    }

    /// Terms in canonical order: total degree ascending, then exponent
    /// vectors in descending lexicographic order (so `t1` precedes `t2`).
    pub fn canonical_terms(&self) -> Vec<(&Exponent, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| total_degree(a).cmp(&total_degree(b)).then_with(|| b.cmp(a)));
        v
    }

    /// First exponent (in canonical order) where the two series differ.
    pub fn first_difference(&self, other: &Self) -> Option<Exponent> {
        let diff = self.try_sub(other).ok()?;
        diff.canonical_terms().first().map(|(e, _)| (*e).clone())
    }
}

pub fn render_monomial(e: &[u32]) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &a)| a > 0)
        .map(|(i, &a)| {
            if a == 1 {
                format!("t{}", i + 1)
            } else {
                format!("t{}^{}", i + 1, a)
            }
        })
        .collect();
    parts.join("·")
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.canonical_terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in terms.into_iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mono = render_monomial(e);
            if mono.is_empty() {
                write!(f, "{}", format_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{}·{}", format_rational(&abs), mono)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} vars, N={}] {}", self.nvars, self.bound, self)
    }
}
