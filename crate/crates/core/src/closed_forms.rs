//! Closed product formulas for the Poincaré series `W(t)` of affine Weyl groups.
//!
//! A [`ClosedForm`] is a scalar times a quotient of two multisets of
//! [`Factor`]s, each an integer polynomial with constant term `±1`. Bott's
//! single-variable product covers the one-class types (A_n with n ≥ 2, D_n,
//! E_6, E_7, E_8); Macdonald's multi-variable products cover A_1, B_n, G_2,
//! F_4 (two classes) and C_n (three classes).
//!
//! The formulas are written in variables `t_1, ..., t_m` whose meaning is
//! fixed by the formula itself; [`calibrate_indexing`] finds which generator
//! class each variable stands for by matching against enumerated balls.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::cartan_data::{build_affine_system, exponents, CartanType, Family};
use crate::hecke_module::{counting_series, HeckeError};
use crate::series_ring::{integer, total_degree, Exponent, Rational, SeriesError, TruncatedSeries};
use crate::weyl_engine::{enumerate_ball, Ball, EngineError};

#[derive(Debug, Error)]
pub enum FormError {
    #[error("Bott's formula only applies to one-class types; {0} has {1} classes")]
    NotSingleClass(CartanType, usize),
    #[error("no multi-variable product formula for {0} (it has one generator class; use Bott's formula)")]
    NoMultiVariableFormula(CartanType),
    #[error("factor must have constant term ±1 and at least one non-constant term")]
    BadFactor,
    #[error("denominator factor {0} has no unit constant term")]
    NonUnitDenominator(String),
    #[error("point has {got} coordinates, expected {expected}")]
    BadPoint { expected: usize, got: usize },
    #[error("evaluation point is a pole: denominator factor {factor} vanishes")]
    Pole { factor: String },
    #[error("no class-to-variable binding matches the closed form for {cartan_type} up to degree {degree}; first mismatch at {first_difference:?}")]
    NoMatchingBinding {
        cartan_type: CartanType,
        degree: u32,
        first_difference: Option<Exponent>,
    },
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Hecke(#[from] HeckeError),
}

/// A polynomial `±1 + Σ c_k t^{a_k}` with integer coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Factor {
    nvars: usize,
    /// Nonzero terms sorted by exponent; always contains the zero exponent.
    terms: Vec<(Exponent, i64)>,
}

impl Factor {
    pub fn new(nvars: usize, terms: Vec<(Exponent, i64)>) -> Result<Self, FormError> {
        let mut acc: BTreeMap<Exponent, i64> = BTreeMap::new();
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(FormError::BadFactor);
            }
            *acc.entry(e).or_insert(0) += c;
        }
        acc.retain(|_, c| *c != 0);
        let constant = acc.get(&vec![0; nvars]).copied();
        if !matches!(constant, Some(1) | Some(-1)) || acc.len() < 2 {
            return Err(FormError::BadFactor);
        }
        Ok(Factor {
            nvars,
            terms: acc.into_iter().collect(),
        })
    }

    /// `1 + sign * t^exponent`.
    pub fn binomial(exponent: Exponent, sign: i64) -> Self {
        let nvars = exponent.len();
        Factor::new(nvars, vec![(vec![0; nvars], 1), (exponent, sign)]).expect("valid binomial")
    }

    pub fn one_minus(exponent: Exponent) -> Self {
        Self::binomial(exponent, -1)
    }

    pub fn one_plus(exponent: Exponent) -> Self {
        Self::binomial(exponent, 1)
    }

    /// `1 + t^e + t^{2e} + ... + t^{ke}`.
    pub fn geometric(exponent: &[u32], k: u32) -> Self {
        let terms = (0..=k)
            .map(|j| (exponent.iter().map(|a| a * j).collect(), 1))
            .collect();
        Factor::new(exponent.len(), terms).expect("valid geometric factor")
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Exponent, i64)] {
        &self.terms
    }

    pub fn constant(&self) -> i64 {
        self.terms[0].1
    }

    pub fn to_series(&self, bound: u32) -> TruncatedSeries {
        TruncatedSeries::from_terms(
            self.nvars,
            bound,
            self.terms.iter().map(|(e, c)| (e.clone(), integer(*c))),
        )
    }

    pub fn evaluate(&self, point: &[Rational]) -> Rational {
        let mut total = Rational::zero();
        for (e, c) in &self.terms {
            let mut term = integer(*c);
            for (x, &a) in point.iter().zip(e) {
                if a > 0 {
                    term *= x.pow(a as i32);
                }
            }
            total += term;
        }
        total
    }

    /// Applies a variable permutation: variable `i` becomes variable `perm[i]`.
    pub fn rename(&self, perm: &[usize]) -> Factor {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut f = vec![0; self.nvars];
                for (i, &a) in e.iter().enumerate() {
                    f[perm[i]] += a;
                }
                (f, *c)
            })
            .collect();
        Factor::new(self.nvars, terms).expect("renaming keeps the factor valid")
    }

    fn sort_key(&self) -> (u32, Vec<(u32, Exponent, i64)>) {
        let max_deg = self
            .terms
            .iter()
            .map(|(e, _)| total_degree(e))
            .max()
            .unwrap_or(0);
        let mut key: Vec<(u32, Exponent, i64)> = self
            .terms
            .iter()
            .map(|(e, c)| {
                (
                    total_degree(e),
                    e.iter().map(|a| u32::MAX - a).collect(),
                    *c,
                )
            })
            .collect();
        key.sort();
        (max_deg, key)
    }
}

impl Ord for Factor {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for Factor {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.to_series(u32::MAX);
        write!(f, "({s})")
    }
}

impl fmt::Debug for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `scalar · Π numerator / Π denominator`, factors kept as multisets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedForm {
    nvars: usize,
    scalar: Rational,
    numerator: Vec<Factor>,
    denominator: Vec<Factor>,
}

/// Result of an exact evaluation. A zero value always carries the factor
/// that vanishes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    pub value: Rational,
    pub zero_witness: Option<Factor>,
}

impl ClosedForm {
    pub fn new(nvars: usize, numerator: Vec<Factor>, denominator: Vec<Factor>) -> Self {
        ClosedForm {
            nvars,
            scalar: Rational::one(),
            numerator,
            denominator,
        }
    }

    pub fn with_scalar(mut self, scalar: Rational) -> Self {
        self.scalar = scalar;
        self
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn scalar(&self) -> &Rational {
        &self.scalar
    }

    pub fn numerator(&self) -> &[Factor] {
        &self.numerator
    }

    pub fn denominator(&self) -> &[Factor] {
        &self.denominator
    }

    /// Removes factors common to numerator and denominator (as multisets).
    pub fn cancel(&self) -> ClosedForm {
        let mut den = self.denominator.clone();
        let mut num = Vec::with_capacity(self.numerator.len());
        for f in &self.numerator {
            if let Some(pos) = den.iter().position(|g| g == f) {
                den.swap_remove(pos);
            } else {
                num.push(f.clone());
            }
        }
        num.sort();
        den.sort();
        ClosedForm {
            nvars: self.nvars,
            scalar: self.scalar.clone(),
            numerator: num,
            denominator: den,
        }
    }

    /// Renames variables: `t_i` becomes `t_{perm[i]}`.
    pub fn rename(&self, perm: &[usize]) -> ClosedForm {
        ClosedForm {
            nvars: self.nvars,
            scalar: self.scalar.clone(),
            numerator: self.numerator.iter().map(|f| f.rename(perm)).collect(),
            denominator: self.denominator.iter().map(|f| f.rename(perm)).collect(),
        }
    }
}

fn render_product(factors: &[Factor]) -> String {
    let mut sorted = factors.to_vec();
    sorted.sort();
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        if j - i == 1 {
            parts.push(sorted[i].to_string());
        } else {
            parts.push(format!("{}^{}", sorted[i], j - i));
        }
        i = j;
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("·")
    }
}

/// Canonical text: sorted factors, repeated factors as powers.
impl fmt::Display for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.scalar.is_one() {
            write!(f, "{}·", crate::series_ring::format_rational(&self.scalar))?;
        }
        write!(f, "{}", render_product(&self.numerator))?;
        if !self.denominator.is_empty() {
            write!(f, " / {}", render_product(&self.denominator))?;
        }
        Ok(())
    }
}

fn mono(exps: &[u32]) -> Exponent {
    exps.to_vec()
}

/// Bott's product `Π_i (1 - t^{m_i+1}) / ((1 - t)(1 - t^{m_i}))` over the exponents.
pub fn bott_closed_form(ty: CartanType) -> Result<ClosedForm, FormError> {
    if ty.class_count() != 1 {
        return Err(FormError::NotSingleClass(ty, ty.class_count()));
    }
    Ok(bott_product(ty))
}

/// Bott's product for any type, in one variable. For multi-class types this
/// is the ordinary Poincaré series with all variables identified.
pub fn bott_product(ty: CartanType) -> ClosedForm {
    let mut num = Vec::new();
    let mut den = Vec::new();
    for &m in &exponents(ty).0 {
        num.push(Factor::one_minus(mono(&[m + 1])));
        den.push(Factor::one_minus(mono(&[1])));
        den.push(Factor::one_minus(mono(&[m])));
    }
    ClosedForm::new(1, num, den)
}

/// Macdonald's multi-variable product for the two- and three-class types.
pub fn macdonald_closed_form(ty: CartanType) -> Result<ClosedForm, FormError> {
    let n = ty.rank() as u32;
    let form = match ty.family() {
        Family::A if n == 1 => ClosedForm::new(
            2,
            vec![
                Factor::one_plus(mono(&[1, 0])),
                Factor::one_plus(mono(&[0, 1])),
            ],
            vec![Factor::one_minus(mono(&[1, 1]))],
        ),
        Family::B => {
            let mut num = vec![Factor::one_minus(mono(&[n, 0]))];
            let mut den = vec![Factor::one_minus(mono(&[1, 0])); n as usize];
            for i in 1..n {
                num.push(Factor::one_minus(mono(&[2 * i, 0])));
            }
            for i in 0..n {
                num.push(Factor::one_plus(mono(&[i, 1])));
                den.push(Factor::one_minus(mono(&[n - 1 + i, 1])));
            }
            ClosedForm::new(2, num, den)
        }
        Family::G => ClosedForm::new(
            2,
            vec![
                Factor::one_plus(mono(&[1, 0])),
                Factor::geometric(&[1, 0], 2),
                Factor::one_plus(mono(&[0, 1])),
                Factor::geometric(&[1, 1], 2),
            ],
            vec![
                Factor::one_minus(mono(&[2, 1])),
                Factor::one_minus(mono(&[3, 2])),
            ],
        ),
        Family::F => {
            let mut num = Vec::new();
            let mut den = Vec::new();
            for i in 1..=3 {
                num.push(Factor::one_minus(mono(&[i + 1, 0])));
                num.push(Factor::one_plus(mono(&[i, 1])));
                num.push(Factor::one_minus(mono(&[0, i])));
                den.push(Factor::one_minus(mono(&[1, 0])));
                den.push(Factor::one_minus(mono(&[0, 1])));
            }
            num.push(Factor::one_plus(mono(&[1, 2])));
            num.push(Factor::one_plus(mono(&[2, 2])));
            num.push(Factor::one_plus(mono(&[3, 3])));
            for e in [[3, 2], [4, 3], [5, 3], [6, 5]] {
                den.push(Factor::one_minus(mono(&e)));
            }
            ClosedForm::new(2, num, den)
        }
        Family::C => {
            let mut num = Vec::new();
            let mut den = Vec::new();
            for i in 0..n {
                num.push(Factor::one_minus(mono(&[i + 1, 0, 0])));
                num.push(Factor::one_plus(mono(&[i, 1, 0])));
                num.push(Factor::one_plus(mono(&[i, 0, 1])));
                den.push(Factor::one_minus(mono(&[1, 0, 0])));
                den.push(Factor::one_minus(mono(&[n - 1 + i, 1, 1])));
            }
            ClosedForm::new(3, num, den)
        }
        _ => return Err(FormError::NoMultiVariableFormula(ty)),
    };
    Ok(form)
}

/// The closed form appropriate to the type: Bott for one class, Macdonald otherwise.
pub fn closed_form(ty: CartanType) -> ClosedForm {
    if ty.class_count() == 1 {
        bott_product(ty)
    } else {
        macdonald_closed_form(ty).expect("every multi-class type has a formula")
    }
}

/// Power-series expansion up to total degree `degree`.
pub fn expand(form: &ClosedForm, degree: u32) -> Result<TruncatedSeries, FormError> {
    let mut acc = TruncatedSeries::constant(form.nvars, degree, form.scalar.clone());
    for f in &form.numerator {
        acc = acc.try_mul(&f.to_series(degree))?;
    }
    for f in &form.denominator {
        if f.constant().abs() != 1 {
            return Err(FormError::NonUnitDenominator(f.to_string()));
        }
        acc = acc.try_mul(&f.to_series(degree).invert()?)?;
    }
    Ok(acc)
}

/// Exact value at a rational point, after cancelling common factors.
///
/// A vanishing denominator factor is a pole error; otherwise a vanishing
/// numerator factor gives an exact zero together with that factor.
pub fn evaluate(form: &ClosedForm, point: &[Rational]) -> Result<Evaluation, FormError> {
    if point.len() != form.nvars {
        return Err(FormError::BadPoint {
            expected: form.nvars,
            got: point.len(),
        });
    }
    let reduced = form.cancel();
    let mut den = Rational::one();
    for f in &reduced.denominator {
        let v = f.evaluate(point);
        if v.is_zero() {
            return Err(FormError::Pole {
                factor: f.to_string(),
            });
        }
        den *= v;
    }
    let mut num = reduced.scalar.clone();
    for f in &reduced.numerator {
        let v = f.evaluate(point);
        if v.is_zero() {
            return Ok(Evaluation {
                value: Rational::zero(),
                zero_witness: Some(f.clone()),
            });
        }
        num *= v;
    }
    Ok(Evaluation {
        value: num / den,
        zero_witness: None,
    })
}

/// Binding of generator classes to closed-form variables: class `i` is
/// represented by variable `t_{binding[i] + 1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexBinding(Vec<usize>);

impl IndexBinding {
    pub fn identity(m: usize) -> Self {
        IndexBinding((0..m).collect())
    }

    pub fn from_vec(v: Vec<usize>) -> Option<Self> {
        let mut sorted = v.clone();
        sorted.sort_unstable();
        if sorted != (0..v.len()).collect::<Vec<_>>() {
            return None;
        }
        Some(IndexBinding(v))
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Variable index for class `i`.
    pub fn variable_of(&self, class: usize) -> usize {
        self.0[class]
    }

    /// Class index for variable `j`.
    pub fn class_of(&self, variable: usize) -> usize {
        self.0
            .iter()
            .position(|&v| v == variable)
            .expect("binding is a bijection")
    }

    /// All bijections of `m` elements, in lexicographic order.
    pub fn all(m: usize) -> Vec<IndexBinding> {
        fn rec(prefix: &mut Vec<usize>, m: usize, out: &mut Vec<IndexBinding>) {
            if prefix.len() == m {
                out.push(IndexBinding(prefix.clone()));
                return;
            }
            for v in 0..m {
                if !prefix.contains(&v) {
                    prefix.push(v);
                    rec(prefix, m, out);
                    prefix.pop();
                }
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::new(), m, &mut out);
        out
    }
}

impl fmt::Display for IndexBinding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .map(|(i, v)| format!("S{}->t{}", i + 1, v + 1))
            .collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// Outcome of matching an enumerated series against a closed form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Calibration {
    pub cartan_type: CartanType,
    pub degree: u32,
    /// The chosen binding (first matching binding in lexicographic order).
    pub binding: IndexBinding,
    /// Every binding under which the series agree.
    pub matching: Vec<IndexBinding>,
}

impl Calibration {
    /// Identity binding for one-class types, which need no search.
    pub fn trivial(ty: CartanType) -> Self {
        Calibration {
            cartan_type: ty,
            degree: 0,
            binding: IndexBinding::identity(1),
            matching: vec![IndexBinding::identity(1)],
        }
    }
}

/// Finds the class-to-variable bindings under which the ball's counting
/// series equals the expansion of `form`, up to `degree`.
pub fn calibrate_against(
    ball: &Ball,
    form: &ClosedForm,
    degree: u32,
) -> Result<Calibration, FormError> {
    let ty = ball.cartan_type();
    let m = ball.class_count();
    let series = counting_series(ball, degree)?;
    let expansion = expand(form, degree)?;
    let mut matching = Vec::new();
    let mut first_difference = None;
    for binding in IndexBinding::all(m) {
        let renamed = series.collapse_variables(binding.as_slice(), m)?;
        if renamed == expansion {
            matching.push(binding);
        } else if first_difference.is_none() {
            first_difference = renamed.first_difference(&expansion);
        }
    }
    match matching.first() {
        Some(b) => Ok(Calibration {
            cartan_type: ty,
            degree,
            binding: b.clone(),
            matching,
        }),
        None => Err(FormError::NoMatchingBinding {
            cartan_type: ty,
            degree,
            first_difference,
        }),
    }
}

/// Default search depth for [`calibrate_indexing`].
pub const DEFAULT_CALIBRATION_DEGREE: u32 = 6;

/// Enumerates a ball of radius `degree` and calibrates the variable binding.
pub fn calibrate_indexing(ty: CartanType, degree: u32) -> Result<Calibration, FormError> {
    if ty.class_count() == 1 {
        return Ok(Calibration::trivial(ty));
    }
    let system = build_affine_system(ty);
    let ball = enumerate_ball(&system, degree)?;
    calibrate_against(&ball, &closed_form(ty), degree)
}
