//! Distinction of degree-1 Iwahori-spherical discrete series.
//!
//! For a sign character ε the relevant quantity is the value of the
//! Poincaré series `W` at the point whose coordinate for class `i` is
//! `ε_i q_o^{ε_i}`, i.e. `-1/q_o` for a `-1` sign and `q_o` for a `+1` sign.
//! The representation is distinguished exactly when that value is nonzero,
//! and the multiplicity lies in `[rank, dim M] = [0 or 1, 1]`.

use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::cartan_data::{borel_discrete_series_list, CartanType, Family};
use crate::closed_forms::{
    calibrate_indexing, closed_form, evaluate, Calibration, FormError, IndexBinding,
    DEFAULT_CALIBRATION_DEGREE,
};
use crate::hecke_module::{char_value_e_w, SignCharacter};
use crate::series_ring::{format_rational, integer, Rational};
use crate::weyl_engine::GroupElement;

#[derive(Debug, Error)]
pub enum DistinctionError {
    #[error("q_o must be at least 2, got {0}")]
    BadQo(u64),
    #[error(
        "{cartan_type} has {expected} generator classes but the sign vector has {got} entries"
    )]
    WrongLength {
        cartan_type: CartanType,
        expected: usize,
        got: usize,
    },
    #[error("calibration is for {calibrated}, not {requested}")]
    Uncalibrated {
        requested: CartanType,
        calibrated: CartanType,
    },
    #[error("{eps} is not one of the degree-1 discrete series of {cartan_type}; use formal evaluation to evaluate anyway")]
    NotDiscreteSeries {
        cartan_type: CartanType,
        eps: SignCharacter,
    },
    #[error("verdict for {eps} on {cartan_type} depends on the class-to-variable binding")]
    BindingDependent {
        cartan_type: CartanType,
        eps: SignCharacter,
    },
    #[error(transparent)]
    Form(#[from] FormError),
}

fn check_qo(q_o: u64) -> Result<(), DistinctionError> {
    if q_o < 2 {
        return Err(DistinctionError::BadQo(q_o));
    }
    Ok(())
}

/// `ε q_o^ε` for one sign.
pub fn coordinate(sign: i8, q_o: u64) -> Rational {
    let q = integer(q_o as i64);
    if sign == 1 {
        q
    } else {
        -q.recip()
    }
}

/// The point at which `W` is evaluated, in closed-form variable order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvaluationPoint(pub Vec<Rational>);

impl EvaluationPoint {
    /// `eps_vars[j]` is the sign attached to variable `t_{j+1}`.
    pub fn new(eps_vars: &SignCharacter, q_o: u64) -> Self {
        EvaluationPoint(
            eps_vars
                .signs()
                .iter()
                .map(|&e| coordinate(e, q_o))
                .collect(),
        )
    }
}

/// Moves a class-ordered sign vector to variable order.
pub fn to_variable_order(eps_classes: &SignCharacter, binding: &IndexBinding) -> SignCharacter {
    let perm: Vec<usize> = (0..binding.len()).map(|j| binding.class_of(j)).collect();
    eps_classes.permuted(&perm)
}

/// Moves a variable-ordered sign vector to class order.
pub fn to_class_order(eps_vars: &SignCharacter, binding: &IndexBinding) -> SignCharacter {
    eps_vars.permuted(binding.as_slice())
}

/// Exact value of `L(t_o, r)` together with the vanishing factor when it is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistinctionValue {
    pub value: Rational,
    pub zero_witness: Option<String>,
    /// False when the character is outside the discrete-series list and the
    /// value is only the formal value of the rational function.
    pub discrete_series: bool,
}

fn check_shape(
    ty: CartanType,
    eps: &SignCharacter,
    calibration: &Calibration,
) -> Result<(), DistinctionError> {
    if calibration.cartan_type != ty {
        return Err(DistinctionError::Uncalibrated {
            requested: ty,
            calibrated: calibration.cartan_type,
        });
    }
    if eps.len() != ty.class_count() {
        return Err(DistinctionError::WrongLength {
            cartan_type: ty,
            expected: ty.class_count(),
            got: eps.len(),
        });
    }
    Ok(())
}

fn is_discrete_series(ty: CartanType, eps_vars: &SignCharacter) -> bool {
    borel_discrete_series_list(ty).contains(eps_vars)
}

fn value_at(
    ty: CartanType,
    eps_vars: &SignCharacter,
    q_o: u64,
) -> Result<DistinctionValue, DistinctionError> {
    let point = EvaluationPoint::new(eps_vars, q_o);
    let eval = evaluate(&closed_form(ty), &point.0)?;
    Ok(DistinctionValue {
        value: eval.value,
        zero_witness: eval.zero_witness.map(|f| f.to_string()),
        discrete_series: is_discrete_series(ty, eps_vars),
    })
}

/// `W(ε_1 q_o^{ε_1}, ..., ε_m q_o^{ε_m})` for a discrete-series character
/// given in class order.
pub fn distinction_value(
    ty: CartanType,
    eps: &SignCharacter,
    q_o: u64,
    calibration: &Calibration,
) -> Result<DistinctionValue, DistinctionError> {
    check_qo(q_o)?;
    check_shape(ty, eps, calibration)?;
    let eps_vars = to_variable_order(eps, &calibration.binding);
    if !is_discrete_series(ty, &eps_vars) {
        return Err(DistinctionError::NotDiscreteSeries {
            cartan_type: ty,
            eps: eps.clone(),
        });
    }
    value_at(ty, &eps_vars, q_o)
}

/// Same as [`distinction_value`] but accepts any sign vector. The result is
/// the value of the rational function only; outside the discrete-series list
/// the defining series need not converge.
pub fn formal_distinction_value(
    ty: CartanType,
    eps: &SignCharacter,
    q_o: u64,
    calibration: &Calibration,
) -> Result<DistinctionValue, DistinctionError> {
    check_qo(q_o)?;
    check_shape(ty, eps, calibration)?;
    value_at(ty, &to_variable_order(eps, &calibration.binding), q_o)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistinctionVerdict {
    pub cartan_type: CartanType,
    /// Signs indexed by closed-form variable.
    pub epsilon: SignCharacter,
    /// The same signs in generator-class order.
    pub epsilon_classes: SignCharacter,
    pub q_o: u64,
    pub value: Rational,
    pub distinguished: bool,
    pub zero_witness: Option<String>,
    /// Lower bound: rank of the 1×1 endomorphism `L(t_o, r)`.
    pub multiplicity_lower: u32,
    /// Upper bound: `dim M = 1`.
    pub multiplicity_upper: u32,
    pub is_steinberg: bool,
}

/// The known classification: distinguished iff Steinberg, or `G2` with signs `(-1, 1)`.
pub fn expected_distinguished(ty: CartanType, eps_vars: &SignCharacter) -> bool {
    eps_vars.is_steinberg() || (ty.family() == Family::G && eps_vars.signs() == [-1, 1])
}

impl DistinctionVerdict {
    pub fn matches_known_classification(&self) -> bool {
        self.distinguished == expected_distinguished(self.cartan_type, &self.epsilon)
    }
}

/// One verdict per discrete-series character of the type.
pub fn classify(
    ty: CartanType,
    q_o: u64,
    calibration: &Calibration,
) -> Result<Vec<DistinctionVerdict>, DistinctionError> {
    check_qo(q_o)?;
    let mut out = Vec::new();
    for eps_vars in borel_discrete_series_list(ty) {
        let eps_classes = to_class_order(&eps_vars, &calibration.binding);
        let v = distinction_value(ty, &eps_classes, q_o, calibration)?;
        let distinguished = !v.value.is_zero();
        out.push(DistinctionVerdict {
            cartan_type: ty,
            is_steinberg: eps_vars.is_steinberg(),
            epsilon: eps_vars,
            epsilon_classes: eps_classes,
            q_o,
            distinguished,
            multiplicity_lower: u32::from(distinguished),
            multiplicity_upper: 1,
            value: v.value,
            zero_witness: v.zero_witness,
        });
    }
    Ok(out)
}

/// Calibrates once and classifies at each `q_o`.
pub fn classify_type(
    ty: CartanType,
    q_os: &[u64],
) -> Result<Vec<DistinctionVerdict>, DistinctionError> {
    let calibration = calibrate_indexing(ty, DEFAULT_CALIBRATION_DEGREE)?;
    let mut out = Vec::new();
    for &q_o in q_os {
        out.extend(classify(ty, q_o, &calibration)?);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BindingOutcome {
    Value {
        value: Rational,
        zero_witness: Option<String>,
    },
    Pole {
        factor: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RobustnessEntry {
    /// Variable assigned to sign `i` of the input vector.
    pub binding: IndexBinding,
    pub q_o: u64,
    pub outcome: BindingOutcome,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RobustnessReport {
    pub cartan_type: CartanType,
    pub epsilon: SignCharacter,
    pub distinguished: bool,
    pub entries: Vec<RobustnessEntry>,
}

impl RobustnessReport {
    pub fn defined_count(&self) -> usize {
        self.entries
            .iter()
            .filter(|e| matches!(e.outcome, BindingOutcome::Value { .. }))
            .count()
    }
}

/// Evaluates a variable-ordered sign vector under every bijection between
/// its entries and the closed-form variables, at each `q_o`, and checks that
/// the zero/nonzero verdict never changes. Bindings that land on a pole are
/// recorded and skipped; the identity binding must be defined.
pub fn robustness_check(
    ty: CartanType,
    eps_vars: &SignCharacter,
    q_os: &[u64],
) -> Result<RobustnessReport, DistinctionError> {
    let m = ty.class_count();
    if eps_vars.len() != m {
        return Err(DistinctionError::WrongLength {
            cartan_type: ty,
            expected: m,
            got: eps_vars.len(),
        });
    }
    let form = closed_form(ty);
    let mut entries = Vec::new();
    let mut verdict: Option<bool> = None;
    for &q_o in q_os {
        check_qo(q_o)?;
        for binding in IndexBinding::all(m) {
            // sign i goes to variable binding[i]
            let mut point = vec![Rational::zero(); m];
            for (i, &e) in eps_vars.signs().iter().enumerate() {
                point[binding.variable_of(i)] = coordinate(e, q_o);
            }
            let outcome = match evaluate(&form, &point) {
                Ok(ev) => {
                    let nonzero = !ev.value.is_zero();
                    if *verdict.get_or_insert(nonzero) != nonzero {
                        return Err(DistinctionError::BindingDependent {
                            cartan_type: ty,
                            eps: eps_vars.clone(),
                        });
                    }
                    BindingOutcome::Value {
                        value: ev.value,
                        zero_witness: ev.zero_witness.map(|f| f.to_string()),
                    }
                }
                Err(FormError::Pole { factor }) if binding != IndexBinding::identity(m) => {
                    BindingOutcome::Pole { factor }
                }
                Err(e) => return Err(e.into()),
            };
            entries.push(RobustnessEntry {
                binding,
                q_o,
                outcome,
            });
        }
    }
    Ok(RobustnessReport {
        cartan_type: ty,
        epsilon: eps_vars.clone(),
        distinguished: verdict.unwrap_or(false),
        entries,
    })
}

/// Contribution of the double coset of `w` to the distinction integral:
/// `ν(JwJ) / q^{l(w)} · r(e_w)` with `ν(JwJ) = q_o^{l(w)}` and `q = q_o²`,
/// i.e. `r(e_w) q_o^{-l(w)}`. Signs are in class order.
pub fn coefficient_value_on_cell(
    eps: &SignCharacter,
    element: &GroupElement,
    q_o: u64,
) -> Rational {
    let l = element.length() as i32;
    let qo = integer(q_o as i64);
    let volume = qo.pow(l);
    let q_power = qo.pow(2 * l);
    volume / q_power * char_value_e_w(eps, element.multilength(), q_o)
}

pub const VERDICT_SCHEMA_VERSION: u32 = 1;

/// JSON form of a verdict.
#[derive(Debug, Clone, Serialize)]
pub struct VerdictRecord {
    #[serde(rename = "type")]
    pub cartan_type: String,
    pub rank: usize,
    pub epsilon: Vec<i8>,
    pub epsilon_classes: Vec<i8>,
    pub q_o: u64,
    pub value: String,
    pub distinguished: bool,
    pub steinberg: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zero_witness: Option<String>,
    pub multiplicity: [u32; 2],
}

impl From<&DistinctionVerdict> for VerdictRecord {
    fn from(v: &DistinctionVerdict) -> Self {
        VerdictRecord {
            cartan_type: v.cartan_type.to_string(),
            rank: v.cartan_type.rank(),
            epsilon: v.epsilon.signs().to_vec(),
            epsilon_classes: v.epsilon_classes.signs().to_vec(),
            q_o: v.q_o,
            value: format_rational(&v.value),
            distinguished: v.distinguished,
            steinberg: v.is_steinberg,
            zero_witness: v.zero_witness.clone(),
            multiplicity: [v.multiplicity_lower, v.multiplicity_upper],
        }
    }
}

/// Markdown table with one row per verdict.
pub fn render_markdown(verdicts: &[DistinctionVerdict]) -> String {
    let mut out = String::new();
    out.push_str("| type | ε | q_o | L(t_o, r) | distinguished | multiplicity | zero witness |\n");
    out.push_str("|---|---|---|---|---|---|---|\n");
    for v in verdicts {
        let name = if v.is_steinberg {
            format!("{} (Steinberg)", v.epsilon)
        } else {
            v.epsilon.to_string()
        };
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} | [{}, {}] | {} |",
            v.cartan_type,
            name,
            v.q_o,
            format_rational(&v.value),
            if v.distinguished { "yes" } else { "no" },
            v.multiplicity_lower,
            v.multiplicity_upper,
            v.zero_witness.as_deref().unwrap_or("")
        );
    }
    out
}

/// Plain-text rendering, one line per verdict.
pub fn render_text(verdicts: &[DistinctionVerdict]) -> String {
    let mut out = String::new();
    for v in verdicts {
        let _ = write!(
            out,
            "{} eps={} q_o={} value={} {} multiplicity=[{},{}]",
            v.cartan_type,
            v.epsilon,
            v.q_o,
            format_rational(&v.value),
            if v.distinguished {
                "distinguished"
            } else {
                "not-distinguished"
            },
            v.multiplicity_lower,
            v.multiplicity_upper,
        );
        if v.is_steinberg {
            out.push_str(" steinberg");
        }
        if let Some(w) = &v.zero_witness {
            let _ = write!(out, " witness={w}");
        }
        out.push('\n');
    }
    out
}

/// CSV rendering with a header row.
pub fn render_csv(verdicts: &[DistinctionVerdict]) -> String {
    let mut out = String::from(
        "type,epsilon,q_o,value,distinguished,multiplicity_lo,multiplicity_hi,zero_witness\n",
    );
    for v in verdicts {
        let eps: Vec<String> = v.epsilon.signs().iter().map(|e| e.to_string()).collect();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},\"{}\"",
            v.cartan_type,
            eps.join(" "),
            v.q_o,
            format_rational(&v.value),
            v.distinguished,
            v.multiplicity_lower,
            v.multiplicity_upper,
            v.zero_witness.as_deref().unwrap_or("")
        );
    }
    out
}

/// `|a - b|`, used by convergence diagnostics.
pub fn distance(a: &Rational, b: &Rational) -> Rational {
    (a - b).abs()
}

/// True when the value is the exact Steinberg value `(q_o - 1)/(q_o + 1)` of type A1.
pub fn a1_steinberg_value(q_o: u64) -> Rational {
    let q = integer(q_o as i64);
    (q.clone() - Rational::one()) / (q + Rational::one())
}
