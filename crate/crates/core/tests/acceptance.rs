//! Acceptance suite. Runs without the libtest harness so that one PASS/FAIL
//! line per criterion is always printed; exits nonzero if any criterion fails.

mod common;

use std::collections::{BTreeMap, HashMap};
use std::process::ExitCode;
use std::time::Instant;

use num_traits::{Signed, Zero};
use poincare_core::affine_map::AffineMap;
use poincare_core::cartan_data::{build_affine_system, AffineCoxeterSystem, CartanType};
use poincare_core::closed_forms::{
    calibrate_against, calibrate_indexing, closed_form, DEFAULT_CALIBRATION_DEGREE,
};
use poincare_core::distinction::{
    classify_type, distinction_value, robustness_check, DistinctionVerdict,
};
use poincare_core::hecke_module::{
    counting_series, eval_rep_on_element, partial_sums_at_point, validate_rep, MatrixRep,
    RationalMatrix, SignCharacter, ValidatedRep,
};
use poincare_core::series_ring::TruncatedSeries;
use poincare_core::weyl_engine::enumerate_ball;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;

type Outcome = Result<String, String>;
type Criterion<'a> = Box<dyn Fn() -> Outcome + 'a>;

fn ty(s: &str) -> CartanType {
    s.parse().unwrap()
}

fn signs(v: &[i8]) -> SignCharacter {
    SignCharacter::new(v.to_vec()).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn same_series(lib: &TruncatedSeries, oracle: &IntSeries) -> Result<(), String> {
    for (e, c) in lib.terms() {
        let o = oracle.coefficient(e);
        ensure(*c == q(o as i64, 1), || {
            format!("coefficient of {e:?}: library {c}, oracle {o}")
        })?;
    }
    for (e, &o) in &oracle.coeffs {
        ensure(lib.coefficient(e) == q(o as i64, 1), || {
            format!("oracle term {e:?} = {o} missing")
        })?;
    }
    Ok(())
}

/// Exponents of the finite Weyl groups used by the single-class cases.
fn bott_exponents(label: &str) -> Vec<u32> {
    match label {
        "A2" => vec![1, 2],
        other => panic!("no exponents recorded for {other}"),
    }
}

fn criterion_1() -> Outcome {
    let cases = [
        ("A1", 10),
        ("A2", 10),
        ("C2", 10),
        ("C3", 10),
        ("B3", 10),
        ("G2", 10),
        ("F4", 8),
    ];
    let mut sizes = Vec::new();
    for (label, degree) in cases {
        let t = ty(label);
        let system = build_affine_system(t);
        let ball = enumerate_ball(&system, degree).map_err(|e| e.to_string())?;
        let calibration = calibrate_against(&ball, &closed_form(t), degree)
            .map_err(|e| format!("{label}: {e}"))?;
        let series = counting_series(&ball, degree).map_err(|e| e.to_string())?;
        let renamed = series
            .collapse_variables(calibration.binding.as_slice(), t.class_count())
            .map_err(|e| e.to_string())?;
        let oracle = if t.class_count() == 1 {
            bott_formula(&bott_exponents(label), degree)
        } else {
            product_formula(label, degree)
        };
        same_series(&renamed, &oracle).map_err(|e| format!("{label}: {e}"))?;
        sizes.push(format!("{label}:{}", ball.len()));
    }
    Ok(format!("exact agreement, ball sizes {}", sizes.join(" ")))
}

/// The Borel list, written out independently of the library.
fn expected_borel(label: &str) -> Vec<Vec<i8>> {
    let t = ty(label);
    let m = t.class_count();
    let mut list = vec![vec![-1; m]];
    match &label[..1] {
        "B" | "F" | "G" => list.push(vec![-1, 1]),
        "C" => {
            list.push(vec![-1, -1, 1]);
            list.push(vec![-1, 1, -1]);
            if t.rank() >= 4 {
                list.push(vec![-1, 1, 1]);
            }
        }
        _ => {}
    }
    list
}

const SWEEP_TYPES: [&str; 12] = [
    "A1", "A2", "A3", "B3", "B4", "C2", "C3", "C4", "D4", "F4", "G2", "E6",
];
const SWEEP_QOS: [u64; 5] = [2, 3, 4, 5, 7];

fn sweep() -> Result<Vec<DistinctionVerdict>, String> {
    let mut all = Vec::new();
    for label in SWEEP_TYPES {
        all.extend(classify_type(ty(label), &SWEEP_QOS).map_err(|e| format!("{label}: {e}"))?);
    }
    Ok(all)
}

fn criterion_2(verdicts: &[DistinctionVerdict]) -> Outcome {
    let mut zeros = 0;
    for label in SWEEP_TYPES {
        let of_type: Vec<_> = verdicts
            .iter()
            .filter(|v| v.cartan_type == ty(label))
            .collect();
        let listed: Vec<Vec<i8>> = of_type
            .iter()
            .filter(|v| v.q_o == 2)
            .map(|v| v.epsilon.signs().to_vec())
            .collect();
        ensure(listed == expected_borel(label), || {
            format!("{label}: listed {listed:?}")
        })?;
        for v in of_type {
            let eps = v.epsilon.signs();
            let steinberg = eps.iter().all(|&e| e == -1);
            let expected = steinberg || (label == "G2" && eps == [-1, 1]);
            ensure(v.distinguished == expected, || {
                format!("{label} {eps:?} q_o={}: value {}", v.q_o, v.value)
            })?;
            if expected {
                continue;
            }
            ensure(v.value.is_zero(), || {
                format!("{label} {eps:?}: nonzero value {}", v.value)
            })?;
            // Witness must be (1 + t1·tj) and t1·tj must equal -1 at the point.
            let witness = v
                .zero_witness
                .as_deref()
                .ok_or_else(|| format!("{label} {eps:?}: no witness"))?;
            let j = match witness {
                "(1 + t1·t2)" => 1,
                "(1 + t1·t3)" => 2,
                other => return Err(format!("{label} {eps:?}: unexpected witness {other}")),
            };
            let coord = |s: i8| {
                if s == 1 {
                    q(v.q_o as i64, 1)
                } else {
                    q(-1, v.q_o as i64)
                }
            };
            ensure(coord(eps[0]) * coord(eps[j]) == q(-1, 1), || {
                format!("{label} {eps:?}: witness does not vanish")
            })?;
            zeros += 1;
        }
    }
    Ok(format!(
        "{} verdicts, {zeros} zeros each with a vanishing witness",
        verdicts.len()
    ))
}

fn criterion_3() -> Outcome {
    let a1 = calibrate_indexing(ty("A1"), DEFAULT_CALIBRATION_DEGREE).map_err(|e| e.to_string())?;
    for q_o in [2u64, 3, 5] {
        let v =
            distinction_value(ty("A1"), &signs(&[-1, -1]), q_o, &a1).map_err(|e| e.to_string())?;
        let qo = q(q_o as i64, 1);
        let expected = (&qo - q(1, 1)) / (&qo + q(1, 1));
        let t = q(-1, q_o as i64);
        ensure(v.value == expected && a1_value(&t, &t) == expected, || {
            format!("A1 q_o={q_o}: {}", v.value)
        })?;
    }
    let g2 = calibrate_indexing(ty("G2"), DEFAULT_CALIBRATION_DEGREE).map_err(|e| e.to_string())?;
    let eps_classes = signs(&[-1, 1]).permuted(g2.binding.as_slice());
    let v = distinction_value(ty("G2"), &eps_classes, 2, &g2).map_err(|e| e.to_string())?;
    let oracle = g2_value(&q(-1, 2), &q(2, 1));
    ensure(v.value == q(3, 2) && oracle == q(3, 2), || {
        format!("G2: library {}, oracle {oracle}", v.value)
    })?;
    Ok("A1 Steinberg (q_o-1)/(q_o+1) for q_o=2,3,5; G2 (-1,1) at q_o=2 is 3/2".into())
}

fn criterion_4() -> Outcome {
    let system = build_affine_system(ty("A1"));
    let ball = enumerate_ball(&system, 14).map_err(|e| e.to_string())?;
    let sums = partial_sums_at_point(&ball, &signs(&[-1, -1]), 2, 14).map_err(|e| e.to_string())?;
    // Oracle: 1 + 2 Σ_{k=1}^{N} (-1/2)^k.
    let mut acc = q(1, 1);
    let mut term = q(1, 1);
    for (k, s) in sums.iter().enumerate().skip(1) {
        term *= q(-1, 2);
        acc += q(2, 1) * &term;
        ensure(*s == acc, || format!("partial sum {k}: {s} vs {acc}"))?;
    }
    let gap = (&sums[14] - q(1, 3)).abs();
    ensure(gap < q(1, 500), || format!("gap {gap}"))?;
    Ok(format!("|S_14 - 1/3| = {gap}"))
}

fn multilength_of(system: &AffineCoxeterSystem, word: &[usize]) -> Vec<u32> {
    let mut ml = vec![0; system.class_count()];
    for &s in word {
        ml[system.class_of(s)] += 1;
    }
    ml
}

struct Trie {
    children: BTreeMap<usize, Trie>,
    element: Option<AffineMap>,
}

fn build_trie(words: &HashMap<AffineMap, Vec<Vec<usize>>>) -> Trie {
    let mut root = Trie {
        children: BTreeMap::new(),
        element: None,
    };
    for (map, ws) in words {
        for w in ws {
            let mut node = &mut root;
            for &s in w {
                node = node.children.entry(s).or_insert_with(|| Trie {
                    children: BTreeMap::new(),
                    element: None,
                });
            }
            node.element = Some(map.clone());
        }
    }
    root
}

/// Walks every reduced word; all words of one element must give the same
/// product, which must equal the library's evaluation on that element.
fn check_rep(
    node: &Trie,
    product: &RationalMatrix,
    rep: &ValidatedRep,
    seen: &mut HashMap<AffineMap, RationalMatrix>,
) -> Result<(), String> {
    if let Some(map) = &node.element {
        match seen.get(map) {
            Some(prev) => ensure(prev == product, || "reduced words disagree".into())?,
            None => {
                seen.insert(map.clone(), product.clone());
            }
        }
    }
    for (&s, child) in &node.children {
        check_rep(child, &product.mul(rep.rep().generator(s)), rep, seen)?;
    }
    Ok(())
}

fn criterion_5() -> Outcome {
    let mut report = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for label in ["C2", "G2"] {
        let system = build_affine_system(ty(label));
        let words = reduced_words(&system, 6);
        let ball = enumerate_ball(&system, 6).map_err(|e| e.to_string())?;
        ensure(words.len() == ball.len(), || {
            format!("{label}: {} elements vs ball {}", words.len(), ball.len())
        })?;
        let mut word_count = 0;
        for (map, ws) in &words {
            let element = ball
                .lookup(map)
                .ok_or_else(|| format!("{label}: element missing from ball"))?;
            for w in ws {
                word_count += 1;
                ensure(multilength_of(&system, w) == element.multilength(), || {
                    format!("{label}: multilength of {w:?}")
                })?;
            }
        }
        let trie = build_trie(&words);
        let mut validated = 0;
        let mut dims = [0usize; 4];
        while validated < 1000 {
            let q_o = [2u64, 3][validated % 2];
            let base = match validated % 5 {
                0 => random_character(&system, q_o, &mut rng),
                1 => direct_sum(
                    &random_character(&system, q_o, &mut rng),
                    &random_character(&system, q_o, &mut rng),
                ),
                2 => direct_sum(
                    &direct_sum(
                        &random_character(&system, q_o, &mut rng),
                        &random_character(&system, q_o, &mut rng),
                    ),
                    &random_character(&system, q_o, &mut rng),
                ),
                _ => reflection_generators(&system, q_o, &mut rng),
            };
            let rep = MatrixRep::new(q_o, random_conjugate(&base, &mut rng));
            if !validate_rep(&rep, &system).passes() {
                return Err(format!(
                    "{label}: generated representation fails the relations"
                ));
            }
            let rep = rep
                .validate(&system)
                .map_err(|_| "validation disagrees".to_string())?;
            let mut seen = HashMap::new();
            check_rep(&trie, &RationalMatrix::identity(rep.dim()), &rep, &mut seen)?;
            for element in ball.elements() {
                ensure(
                    seen[element.map()] == eval_rep_on_element(&rep, element),
                    || format!("{label}: eval_rep_on_element differs"),
                )?;
            }
            dims[rep.dim()] += 1;
            validated += 1;
        }
        report.push(format!(
            "{label}: {} elements, {word_count} reduced words, 1000 reps (dims 1/2/3: {}/{}/{})",
            words.len(),
            dims[1],
            dims[2],
            dims[3]
        ));
    }
    Ok(report.join("; "))
}

fn criterion_6(verdicts: &[DistinctionVerdict]) -> Outcome {
    for v in verdicts {
        let interval = (v.multiplicity_lower, v.multiplicity_upper);
        let expected = if v.distinguished { (1, 1) } else { (0, 1) };
        ensure(interval == expected, || {
            format!("{} {}: {interval:?}", v.cartan_type, v.epsilon)
        })?;
    }
    Ok(format!("{} verdicts", verdicts.len()))
}

fn criterion_7() -> Outcome {
    let mut checked = 0;
    let mut poles = 0;
    for t in CartanType::catalogue()
        .into_iter()
        .filter(|t| matches!(t.class_count(), 2 | 3))
    {
        for eps in expected_borel(&t.to_string()) {
            let report = robustness_check(t, &signs(&eps), &SWEEP_QOS)
                .map_err(|e| format!("{t} {eps:?}: {e}"))?;
            let expected =
                eps.iter().all(|&e| e == -1) || (t.to_string() == "G2" && eps == [-1, 1]);
            ensure(report.distinguished == expected, || {
                format!("{t} {eps:?}: verdict {}", report.distinguished)
            })?;
            poles += report.entries.len() - report.defined_count();
            checked += 1;
        }
    }
    Ok(format!(
        "{checked} characters under all bindings; {poles} pole bindings skipped"
    ))
}

fn main() -> ExitCode {
    let verdicts = sweep();
    let v = |f: fn(&[DistinctionVerdict]) -> Outcome| -> Outcome {
        match &verdicts {
            Ok(vs) => f(vs),
            Err(e) => Err(e.clone()),
        }
    };
    let mut failures = 0;
    let runs: Vec<(&str, Criterion)> = vec![
        ("1 series identities", Box::new(criterion_1)),
        ("2 classification", Box::new(|| v(criterion_2))),
        ("3 spot values", Box::new(criterion_3)),
        ("4 convergence", Box::new(criterion_4)),
        ("5 well-definedness", Box::new(criterion_5)),
        ("6 multiplicity", Box::new(|| v(criterion_6))),
        ("7 indexing robustness", Box::new(criterion_7)),
    ];
    for (name, run) in runs {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {name} ({secs:.1}s): {detail}"),
            Err(detail) => {
                failures += 1;
                println!("FAIL criterion {name} ({secs:.1}s): {detail}");
            }
        }
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
