//! Representations of the Iwahori-Hecke algebra of an affine Weyl group and
//! the truncated generalized Poincaré series `L(t, r) = Σ_w r(e_w) t^{l(w)}`.
//!
//! The Hecke parameter is always `q = q_o²`; public entry points take `q_o`.
//!
//! Two "trivial" objects are kept apart on purpose:
//! - the trivial Hecke character `e_s -> q`, a genuine representation;
//! - the counting character `e_w -> 1`, which is not a representation but is
//!   what turns `L(t, r)` into the multi-variable Poincaré series `W(t)`.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::cartan_data::AffineCoxeterSystem;
use crate::series_ring::{integer, Rational, TruncatedSeries};
use crate::weyl_engine::{Ball, GroupElement};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HeckeError {
    #[error("sign vector entries must be -1 or +1, got {0:?}")]
    BadSign(Vec<i8>),
    #[error("sign vector is empty")]
    EmptySigns,
    #[error("cannot parse sign vector {0:?}; expected e.g. \"[-1,1]\"")]
    Parse(String),
    #[error("sign vector has {got} entries but the system has {expected} generator classes")]
    WrongLength { expected: usize, got: usize },
    #[error("q_o must be at least 2, got {0}")]
    BadQo(u64),
    #[error("requested degree {requested} exceeds the ball radius {radius}")]
    BallTooSmall { requested: u32, radius: u32 },
}

/// A degree-1 Hecke character given by one sign per generator class:
/// `r(e_s) = -1` when the sign is `-1` and `r(e_s) = q` when it is `+1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SignCharacter(Vec<i8>);

impl SignCharacter {
    pub fn new(signs: Vec<i8>) -> Result<Self, HeckeError> {
        if signs.is_empty() {
            return Err(HeckeError::EmptySigns);
        }
        if signs.iter().any(|&e| e != 1 && e != -1) {
            return Err(HeckeError::BadSign(signs));
        }
        Ok(SignCharacter(signs))
    }

    /// The Steinberg character: every generator acts by `-1`.
    pub fn steinberg(m: usize) -> Self {
        SignCharacter(vec![-1; m])
    }

    pub fn signs(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_steinberg(&self) -> bool {
        self.0.iter().all(|&e| e == -1)
    }

    /// `ε q_o^{ε+1}`: the value of `r(e_s)` for `s` in class `i`.
    pub fn generator_value(&self, class: usize, q_o: u64) -> Rational {
        if self.0[class] == 1 {
            integer(q_o as i64).pow(2)
        } else {
            -Rational::one()
        }
    }

    /// Reorders the signs: entry `i` of the result is entry `perm[i]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> SignCharacter {
        SignCharacter(perm.iter().map(|&j| self.0[j]).collect())
    }
}

impl fmt::Display for SignCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|e| e.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for SignCharacter {
    type Err = HeckeError;

    /// Accepts `[-1,1]`, `(-1,1)` or `-1,1`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s
            .trim()
            .trim_start_matches(['[', '('])
            .trim_end_matches([']', ')']);
        let signs: Result<Vec<i8>, _> = inner.split(',').map(|p| p.trim().parse::<i8>()).collect();
        match signs {
            Ok(v) => SignCharacter::new(v),
            Err(_) => Err(HeckeError::Parse(s.to_string())),
        }
    }
}

fn check_qo(q_o: u64) -> Result<(), HeckeError> {
    if q_o < 2 {
        return Err(HeckeError::BadQo(q_o));
    }
    Ok(())
}

/// `r(e_w) = Π_i (ε_i q_o^{ε_i+1})^{l_i(w)}` for a sign character.
pub fn char_value_e_w(eps: &SignCharacter, multilength: &[u32], q_o: u64) -> Rational {
    let mut value = Rational::one();
    for (i, &l) in multilength.iter().enumerate() {
        value *= eps.generator_value(i, q_o).pow(l as i32);
    }
    value
}

/// Square matrix over exact rationals, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    dim: usize,
    entries: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zero(dim: usize) -> Self {
        RationalMatrix {
            dim,
            entries: vec![Rational::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::scalar(dim, Rational::one())
    }

    pub fn scalar(dim: usize, c: Rational) -> Self {
        let mut m = Self::zero(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = c.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "matrix must be square");
        RationalMatrix {
            dim,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.dim;
        let mut out = Self::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self.entries[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other.entries[k * n + j];
                    if !b.is_zero() {
                        out.entries[i * n + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        RationalMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn add_scalar(&self, c: &Rational) -> Self {
        self.add(&Self::scalar(self.dim, c.clone()))
    }

    /// Rank by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let n = self.dim;
        let mut m = self.entries.clone();
        let mut rank = 0;
        for col in 0..n {
            let Some(pivot) = (rank..n).find(|&r| !m[r * n + col].is_zero()) else {
                continue;
            };
            for c in 0..n {
                m.swap(rank * n + c, pivot * n + c);
            }
            let p = m[rank * n + col].clone();
            for r in 0..n {
                if r != rank && !m[r * n + col].is_zero() {
                    let f = &m[r * n + col] / &p;
                    for c in 0..n {
                        let v = &m[rank * n + c] * &f;
                        m[r * n + c] -= v;
                    }
                }
            }
            rank += 1;
        }
        rank
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .entries
            .chunks(self.dim.max(1))
            .map(|r| {
                let cells: Vec<String> = r.iter().map(|c| c.to_string()).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

/// Candidate Hecke algebra representation: one matrix per generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixRep {
    q: Rational,
    generators: Vec<RationalMatrix>,
}

impl MatrixRep {
    /// Representation with Hecke parameter `q = q_o²`.
    pub fn new(q_o: u64, generators: Vec<RationalMatrix>) -> Self {
        MatrixRep {
            q: integer(q_o as i64).pow(2),
            generators,
        }
    }

    pub fn with_parameter(q: Rational, generators: Vec<RationalMatrix>) -> Self {
        MatrixRep { q, generators }
    }

    /// The 1×1 representation attached to a sign character (signs in class order).
    pub fn from_sign_character(
        system: &AffineCoxeterSystem,
        eps: &SignCharacter,
        q_o: u64,
    ) -> Self {
        let generators = (0..system.generator_count())
            .map(|s| RationalMatrix::scalar(1, eps.generator_value(system.class_of(s), q_o)))
            .collect();
        Self::new(q_o, generators)
    }

    /// The trivial Hecke character `e_s -> q`.
    pub fn trivial(system: &AffineCoxeterSystem, q_o: u64) -> Self {
        Self::from_sign_character(system, &SignCharacter(vec![1; system.class_count()]), q_o)
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }

    pub fn dim(&self) -> usize {
        self.generators.first().map_or(0, |m| m.dim())
    }

    pub fn generator(&self, s: usize) -> &RationalMatrix {
        &self.generators[s]
    }

    /// Checks every relation, returning the wrapped representation on success.
    pub fn validate(self, system: &AffineCoxeterSystem) -> Result<ValidatedRep, ValidationReport> {
        let report = validate_rep(&self, system);
        if report.passes() {
            Ok(ValidatedRep(self))
        } else {
            Err(report)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum RelationViolation {
    /// Wrong number of generator matrices.
    GeneratorCount { expected: usize, got: usize },
    /// Matrices of different sizes, or dimension zero.
    Dimension { generator: usize },
    /// `(ρ_s + 1)(ρ_s - q) ≠ 0`.
    Quadratic { generator: usize },
    /// Alternating products of length `m(s,t)` disagree.
    Braid { s: usize, t: usize, m: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<RelationViolation>,
}

impl ValidationReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

fn alternating_product(rep: &MatrixRep, first: usize, second: usize, len: u32) -> RationalMatrix {
    let mut p = RationalMatrix::identity(rep.dim());
    for k in 0..len {
        let s = if k % 2 == 0 { first } else { second };
        p = p.mul(&rep.generators[s]);
    }
    p
}

/// Checks the quadratic relations and the braid relations.
pub fn validate_rep(rep: &MatrixRep, system: &AffineCoxeterSystem) -> ValidationReport {
    let mut violations = Vec::new();
    let n = system.generator_count();
    if rep.generators.len() != n {
        violations.push(RelationViolation::GeneratorCount {
            expected: n,
            got: rep.generators.len(),
        });
        return ValidationReport { violations };
    }
    let d = rep.dim();
    for (s, m) in rep.generators.iter().enumerate() {
        if d == 0 || m.dim() != d {
            violations.push(RelationViolation::Dimension { generator: s });
        }
    }
    if !violations.is_empty() {
        return ValidationReport { violations };
    }
    let one = Rational::one();
    for (s, m) in rep.generators.iter().enumerate() {
        let lhs = m.add_scalar(&one).mul(&m.add_scalar(&-rep.q.clone()));
        if !lhs.is_zero() {
            violations.push(RelationViolation::Quadratic { generator: s });
        }
    }
    for s in 0..n {
        for t in (s + 1)..n {
            if let Some(m) = system.coxeter_matrix().get(s, t) {
                if alternating_product(rep, s, t, m) != alternating_product(rep, t, s, m) {
                    violations.push(RelationViolation::Braid { s, t, m });
                }
            }
        }
    }
    ValidationReport { violations }
}

/// A representation that passed [`validate_rep`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidatedRep(MatrixRep);

impl ValidatedRep {
    pub fn rep(&self) -> &MatrixRep {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    /// Ordered product of generator matrices along a word.
    pub fn eval_word(&self, word: &[usize]) -> RationalMatrix {
        word.iter()
            .fold(RationalMatrix::identity(self.dim()), |acc, &s| {
                acc.mul(&self.0.generators[s])
            })
    }
}

/// `r(e_w)`: the product of generator matrices along the element's reduced word.
pub fn eval_rep_on_element(rep: &ValidatedRep, element: &GroupElement) -> RationalMatrix {
    rep.eval_word(element.geodesic())
}

/// Which coefficient `r(e_w)` a scalar Gyoja series uses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScalarCharacter {
    /// `e_w -> 1`; yields the Poincaré series `W(t)`.
    Counting,
    /// Degree-1 Hecke character, signs in class order.
    Sign { eps: SignCharacter, q_o: u64 },
}

impl ScalarCharacter {
    fn value(&self, element: &GroupElement) -> Rational {
        match self {
            ScalarCharacter::Counting => Rational::one(),
            ScalarCharacter::Sign { eps, q_o } => char_value_e_w(eps, element.multilength(), *q_o),
        }
    }

    fn check(&self, classes: usize) -> Result<(), HeckeError> {
        if let ScalarCharacter::Sign { eps, q_o } = self {
            check_qo(*q_o)?;
            if eps.len() != classes {
                return Err(HeckeError::WrongLength {
                    expected: classes,
                    got: eps.len(),
                });
            }
        }
        Ok(())
    }
}

fn check_degree(ball: &Ball, degree: u32) -> Result<(), HeckeError> {
    if degree > ball.radius() {
        return Err(HeckeError::BallTooSmall {
            requested: degree,
            radius: ball.radius(),
        });
    }
    Ok(())
}

/// `Σ_{l(w) ≤ N} r(e_w) t_1^{l_1(w)} ... t_m^{l_m(w)}`, variables in class order.
pub fn gyoja_series_truncated(
    ball: &Ball,
    character: &ScalarCharacter,
    degree: u32,
) -> Result<TruncatedSeries, HeckeError> {
    check_degree(ball, degree)?;
    character.check(ball.class_count())?;
    let mut series = TruncatedSeries::zero(ball.class_count(), degree);
    for k in 0..=degree {
        for e in ball.layer(k) {
            series.add_term(e.multilength().to_vec(), character.value(e));
        }
    }
    Ok(series)
}

/// The multi-variable Poincaré series `W(t)` read off a ball.
pub fn counting_series(ball: &Ball, degree: u32) -> Result<TruncatedSeries, HeckeError> {
    gyoja_series_truncated(ball, &ScalarCharacter::Counting, degree)
}

/// Matrix-valued Gyoja series; entry `(i, j)` is a truncated series.
pub fn matrix_gyoja_series(
    ball: &Ball,
    rep: &ValidatedRep,
    degree: u32,
) -> Result<Vec<Vec<TruncatedSeries>>, HeckeError> {
    check_degree(ball, degree)?;
    let d = rep.dim();
    let m = ball.class_count();
    let mut out = vec![vec![TruncatedSeries::zero(m, degree); d]; d];
    for k in 0..=degree {
        for e in ball.layer(k) {
            let value = eval_rep_on_element(rep, e);
            for (i, row) in out.iter_mut().enumerate() {
                for (j, cell) in row.iter_mut().enumerate() {
                    cell.add_term(e.multilength().to_vec(), value.get(i, j).clone());
                }
            }
        }
    }
    Ok(out)
}

/// Partial sums `Σ_{l(w) ≤ k} r(e_w) q_o^{-l(w)}` for `k = 0..=degree`.
pub fn partial_sums_at_point(
    ball: &Ball,
    eps: &SignCharacter,
    q_o: u64,
    degree: u32,
) -> Result<Vec<Rational>, HeckeError> {
    check_qo(q_o)?;
    check_degree(ball, degree)?;
    if eps.len() != ball.class_count() {
        return Err(HeckeError::WrongLength {
            expected: ball.class_count(),
            got: eps.len(),
        });
    }
    let inv_qo = integer(q_o as i64).recip();
    let mut sums = Vec::with_capacity(degree as usize + 1);
    let mut acc = Rational::zero();
    for k in 0..=degree {
        let weight = inv_qo.pow(k as i32);
        for e in ball.layer(k) {
            acc += char_value_e_w(eps, e.multilength(), q_o) * &weight;
        }
        sums.push(acc.clone());
    }
    Ok(sums)
}
