//! `poincare`: command-line front end for the Poincaré series and
//! distinction computations.
//!
//! Exit codes: 0 success, 1 usage or invalid input, 2 resource limit or I/O
//! failure, 3 series identity mismatch, 4 deviation from the known
//! classification under `--expect-paper`.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use poincare_core::cartan_data::{
    borel_discrete_series_list, build_affine_system, tables_document, AffineCoxeterSystem,
    CartanType,
};
use poincare_core::closed_forms::{
    calibrate_against, closed_form, expand, Calibration, FormError, DEFAULT_CALIBRATION_DEGREE,
};
use poincare_core::distinction::{
    classify, distance, distinction_value, formal_distinction_value, render_csv, render_markdown,
    render_text, robustness_check, to_class_order, BindingOutcome, DistinctionError,
    DistinctionVerdict, VerdictRecord, VERDICT_SCHEMA_VERSION,
};
use poincare_core::hecke_module::{
    gyoja_series_truncated, partial_sums_at_point, ScalarCharacter, SignCharacter,
};
use poincare_core::series_ring::{format_rational, render_monomial, Rational, TruncatedSeries};
use poincare_core::weyl_engine::{enumerate_ball_capped, Ball, EngineError, DEFAULT_ELEMENT_CAP};
use serde_json::{json, Value};

const EXIT_USAGE: u8 = 1;
const EXIT_RESOURCES: u8 = 2;
const EXIT_MISMATCH: u8 = 3;
const EXIT_DEVIATION: u8 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "poincare",
    version,
    about = "Exact Poincaré series of affine Weyl groups and distinction of degree-1 discrete series"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate all elements of length ≤ N with lengths, multilengths and geodesic words.
    Enumerate(TypeDegree),
    /// Print the multilength series read off the enumerated ball.
    Series(SeriesArgs),
    /// Print the expansion of the closed-form product to total degree N.
    Expand(ExpandArgs),
    /// Compare the enumerated series with the closed form coefficient by coefficient.
    Check(TypeDegree),
    /// Distinction verdicts for the degree-1 discrete series.
    Classify(ClassifyArgs),
    /// Coxeter matrices, generator classes, exponents and discrete-series lists.
    Tables(TablesArgs),
    /// Evaluate each discrete-series character under every class-to-variable binding.
    Robustness(RobustnessArgs),
    /// Partial sums of the cell contributions against the closed-form value.
    PartialSums(PartialSumsArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
    Markdown,
}

#[derive(Args, Debug)]
struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write output to this file instead of standard output.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Maximum number of group elements to store.
    #[arg(long, env = "POINCARE_MAX_ELEMENTS", default_value_t = DEFAULT_ELEMENT_CAP)]
    max_elements: usize,
}

#[derive(Args, Debug)]
struct TypeDegree {
    /// Affine type label such as A1, C3 or G2.
    #[arg(long = "type", short = 't', value_parser = parse_type)]
    cartan_type: CartanType,
    /// Maximal length / total degree N.
    #[arg(long, short = 'n')]
    degree: u32,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct SeriesArgs {
    #[command(flatten)]
    base: TypeDegree,
    /// Rename class variables to the closed-form variables (calibrated binding).
    #[arg(long)]
    calibrated: bool,
    /// Weight by the sign character with these signs (class order) instead of counting.
    #[arg(long, allow_hyphen_values = true, requires = "qo")]
    signs: Option<String>,
    /// Residue field parameter q_o for --signs.
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    qo: Option<u64>,
}

#[derive(Args, Debug)]
struct ExpandArgs {
    #[command(flatten)]
    base: TypeDegree,
    /// Also print the product itself.
    #[arg(long)]
    show_form: bool,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[arg(long = "type", short = 't', value_parser = parse_type, required_unless_present = "all_types", conflicts_with = "all_types")]
    cartan_type: Option<CartanType>,
    /// Sweep every supported type.
    #[arg(long)]
    all_types: bool,
    /// Comma-separated values of q_o.
    #[arg(long, value_delimiter = ',', default_value = "2", value_parser = clap::value_parser!(u64).range(2..))]
    qo: Vec<u64>,
    /// Exit with status 4 if any verdict deviates from the known classification.
    #[arg(long)]
    expect_paper: bool,
    /// Evaluate a single sign vector (closed-form variable order) instead of the whole list.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "all_types")]
    signs: Option<String>,
    /// Allow --signs outside the discrete-series list; the result is only the formal value.
    #[arg(long, requires = "signs")]
    formal: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct TablesArgs {
    /// Restrict to one type; default is every supported type.
    #[arg(long = "type", short = 't', value_parser = parse_type)]
    cartan_type: Option<CartanType>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct RobustnessArgs {
    #[arg(long = "type", short = 't', value_parser = parse_type)]
    cartan_type: CartanType,
    #[arg(long, value_delimiter = ',', default_value = "2,3,4,5,7", value_parser = clap::value_parser!(u64).range(2..))]
    qo: Vec<u64>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct PartialSumsArgs {
    #[command(flatten)]
    base: TypeDegree,
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    qo: u64,
    /// Sign vector in closed-form variable order; default is Steinberg.
    #[arg(long, allow_hyphen_values = true)]
    signs: Option<String>,
}

fn parse_type(s: &str) -> Result<CartanType, String> {
    s.parse::<CartanType>().map_err(|e| e.to_string())
}

/// Error carrying an explicit exit status.
#[derive(Debug)]
struct Exit(u8, String);

impl std::fmt::Display for Exit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.1)
    }
}

impl std::error::Error for Exit {}

fn is_cap(e: &EngineError) -> bool {
    matches!(e, EngineError::CapExceeded { .. })
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(Exit(code, _)) = cause.downcast_ref::<Exit>() {
            return *code;
        }
        if cause.downcast_ref::<io::Error>().is_some() {
            return EXIT_RESOURCES;
        }
        let resource = cause.downcast_ref::<EngineError>().is_some_and(is_cap)
            || matches!(cause.downcast_ref::<FormError>(), Some(FormError::Engine(e)) if is_cap(e))
            || matches!(
                cause.downcast_ref::<DistinctionError>(),
                Some(DistinctionError::Form(FormError::Engine(e))) if is_cap(e)
            );
        if resource {
            return EXIT_RESOURCES;
        }
    }
    EXIT_USAGE
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Enumerate(a) => cmd_enumerate(a),
        Command::Series(a) => cmd_series(a),
        Command::Expand(a) => cmd_expand(a),
        Command::Check(a) => cmd_check(a),
        Command::Classify(a) => cmd_classify(a),
        Command::Tables(a) => cmd_tables(a),
        Command::Robustness(a) => cmd_robustness(a),
        Command::PartialSums(a) => cmd_partial_sums(a),
    }
}

fn sink(common: &Common) -> Result<Box<dyn Write>> {
    Ok(match &common.output {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit(common: &Common, text: &str) -> Result<()> {
    let mut out = sink(common)?;
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

fn emit_json(common: &Common, value: &Value) -> Result<()> {
    emit(
        common,
        &format!("{}\n", serde_json::to_string_pretty(value)?),
    )
}

fn ball(system: &AffineCoxeterSystem, radius: u32, cap: usize) -> Result<Ball> {
    enumerate_ball_capped(system, radius, cap).with_context(|| {
        format!(
            "enumerating {} to length {radius} (raise POINCARE_MAX_ELEMENTS or --max-elements)",
            system.cartan_type()
        )
    })
}

fn calibration_for(ty: CartanType, cap: usize) -> Result<Calibration> {
    if ty.class_count() == 1 {
        return Ok(Calibration::trivial(ty));
    }
    let system = build_affine_system(ty);
    let b = ball(&system, DEFAULT_CALIBRATION_DEGREE, cap)?;
    Ok(calibrate_against(
        &b,
        &closed_form(ty),
        DEFAULT_CALIBRATION_DEGREE,
    )?)
}

fn parse_signs(text: &str) -> Result<SignCharacter> {
    text.parse::<SignCharacter>()
        .map_err(|e| anyhow::Error::new(Exit(EXIT_USAGE, format!("bad sign vector {text:?}: {e}"))))
}

fn join<T: ToString>(items: &[T], sep: &str) -> String {
    items
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(sep)
}

fn cmd_enumerate(a: TypeDegree) -> Result<u8> {
    let system = build_affine_system(a.cartan_type);
    let b = ball(&system, a.degree, a.common.max_elements)?;
    let counts = b.counts_by_length();
    let summary = json!({
        "summary": {
            "type": a.cartan_type.to_string(),
            "radius": a.degree,
            "elements": b.len(),
            "counts_by_length": counts,
        }
    });
    match a.common.format {
        Format::Json => {
            let mut out = sink(&a.common)?;
            b.write_jsonl(&mut out)?;
            writeln!(out, "{summary}")?;
            out.flush()?;
        }
        Format::Text => emit(
            &a.common,
            &format!(
                "type {} radius {} elements {}\ncounts by length: {}\n",
                a.cartan_type,
                a.degree,
                b.len(),
                join(&counts, ",")
            ),
        )?,
        Format::Csv => {
            let mut s = String::from("length,count\n");
            for (k, c) in counts.iter().enumerate() {
                let _ = writeln!(s, "{k},{c}");
            }
            emit(&a.common, &s)?;
        }
        Format::Markdown => {
            let mut s = String::from("| length | count |\n|---|---|\n");
            for (k, c) in counts.iter().enumerate() {
                let _ = writeln!(s, "| {k} | {c} |");
            }
            emit(&a.common, &s)?;
        }
    }
    Ok(0)
}

fn series_output(common: &Common, header: Value, series: &TruncatedSeries) -> Result<()> {
    match common.format {
        Format::Text => emit(common, &format!("{series}\n")),
        Format::Json => {
            let mut value = header;
            let terms: Vec<Value> = series
                .canonical_terms()
                .into_iter()
                .map(|(e, c)| json!({"exponent": e, "coefficient": format_rational(c)}))
                .collect();
            value["text"] = json!(series.to_string());
            value["terms"] = json!(terms);
            emit_json(common, &value)
        }
        Format::Csv => {
            let vars: Vec<String> = (1..=series.nvars()).map(|i| format!("e{i}")).collect();
            let mut s = format!("{},coefficient\n", vars.join(","));
            for (e, c) in series.canonical_terms() {
                let _ = writeln!(s, "{},{}", join(e, ","), format_rational(c));
            }
            emit(common, &s)
        }
        Format::Markdown => {
            let mut s = String::from("| monomial | coefficient |\n|---|---|\n");
            for (e, c) in series.canonical_terms() {
                let m = render_monomial(e);
                let m = if m.is_empty() { "1".to_string() } else { m };
                let _ = writeln!(s, "| {m} | {} |", format_rational(c));
            }
            emit(common, &s)
        }
    }
}

fn cmd_series(a: SeriesArgs) -> Result<u8> {
    let ty = a.base.cartan_type;
    let cap = a.base.common.max_elements;
    let system = build_affine_system(ty);
    let b = ball(&system, a.base.degree, cap)?;
    let character = match (&a.signs, a.qo) {
        (Some(text), Some(q_o)) => ScalarCharacter::Sign {
            eps: parse_signs(text)?,
            q_o,
        },
        _ => ScalarCharacter::Counting,
    };
    let mut series = gyoja_series_truncated(&b, &character, a.base.degree)?;
    let mut binding = None;
    if a.calibrated {
        let calibration = calibration_for(ty, cap)?;
        series = series.collapse_variables(calibration.binding.as_slice(), ty.class_count())?;
        binding = Some(calibration.binding.to_string());
    }
    let header = json!({
        "type": ty.to_string(),
        "degree": a.base.degree,
        "variables": if a.calibrated { "closed-form" } else { "classes" },
        "binding": binding,
    });
    series_output(&a.base.common, header, &series)?;
    Ok(0)
}

fn cmd_expand(a: ExpandArgs) -> Result<u8> {
    let ty = a.base.cartan_type;
    let form = closed_form(ty);
    let series = expand(&form, a.base.degree)?;
    if a.show_form && a.base.common.format == Format::Text {
        emit(&a.base.common, &format!("W = {form}\n{series}\n"))?;
        return Ok(0);
    }
    let header = json!({
        "type": ty.to_string(),
        "degree": a.base.degree,
        "form": form.to_string(),
    });
    series_output(&a.base.common, header, &series)?;
    Ok(0)
}

fn cmd_check(a: TypeDegree) -> Result<u8> {
    let ty = a.cartan_type;
    let system = build_affine_system(ty);
    let b = ball(&system, a.degree, a.common.max_elements)?;
    let form = closed_form(ty);
    let outcome = calibrate_against(&b, &form, a.degree);
    let (code, report) = match outcome {
        Ok(c) => (
            0,
            json!({
                "type": ty.to_string(),
                "degree": a.degree,
                "elements": b.len(),
                "identical": true,
                "binding": c.binding.to_string(),
                "matching_bindings": c.matching.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
            }),
        ),
        Err(FormError::NoMatchingBinding {
            first_difference, ..
        }) => (
            EXIT_MISMATCH,
            json!({
                "type": ty.to_string(),
                "degree": a.degree,
                "elements": b.len(),
                "identical": false,
                "first_difference": first_difference,
            }),
        ),
        Err(e) => return Err(e.into()),
    };
    match a.common.format {
        Format::Json => emit_json(&a.common, &report)?,
        _ => {
            let text = if code == 0 {
                format!(
                    "{ty} degree {}: identical ({} elements; binding {}; {} matching binding(s))\n",
                    a.degree,
                    b.len(),
                    report["binding"].as_str().unwrap_or_default(),
                    report["matching_bindings"].as_array().map_or(0, Vec::len)
                )
            } else {
                format!(
                    "{ty} degree {}: MISMATCH, first differing exponent {}\n",
                    a.degree, report["first_difference"]
                )
            };
            emit(&a.common, &text)?;
        }
    }
    Ok(code)
}

fn verdict_output(common: &Common, verdicts: &[DistinctionVerdict]) -> Result<()> {
    match common.format {
        Format::Text => emit(common, &render_text(verdicts)),
        Format::Markdown => emit(common, &render_markdown(verdicts)),
        Format::Csv => emit(common, &render_csv(verdicts)),
        Format::Json => {
            let records: Vec<VerdictRecord> = verdicts.iter().map(VerdictRecord::from).collect();
            emit_json(
                common,
                &json!({"schema_version": VERDICT_SCHEMA_VERSION, "verdicts": records}),
            )
        }
    }
}

fn cmd_classify(a: ClassifyArgs) -> Result<u8> {
    let types = if a.all_types {
        CartanType::catalogue()
    } else {
        vec![a.cartan_type.expect("clap enforces --type or --all-types")]
    };
    let cap = a.common.max_elements;
    if let Some(text) = &a.signs {
        return classify_single(&a, types[0], parse_signs(text)?);
    }
    let mut verdicts = Vec::new();
    for ty in types {
        let calibration = calibration_for(ty, cap)?;
        for &q_o in &a.qo {
            verdicts.extend(classify(ty, q_o, &calibration)?);
        }
    }
    verdict_output(&a.common, &verdicts)?;
    if a.expect_paper {
        let deviations: Vec<_> = verdicts
            .iter()
            .filter(|v| !v.matches_known_classification())
            .collect();
        if !deviations.is_empty() {
            for v in deviations {
                eprintln!(
                    "deviation: {} {} at q_o={} gives value {}",
                    v.cartan_type,
                    v.epsilon,
                    v.q_o,
                    format_rational(&v.value)
                );
            }
            return Ok(EXIT_DEVIATION);
        }
    }
    Ok(0)
}

fn classify_single(a: &ClassifyArgs, ty: CartanType, eps_vars: SignCharacter) -> Result<u8> {
    if eps_vars.len() != ty.class_count() {
        bail!(Exit(
            EXIT_USAGE,
            format!(
                "{ty} needs {} signs, got {}",
                ty.class_count(),
                eps_vars.len()
            )
        ));
    }
    let listed = borel_discrete_series_list(ty).contains(&eps_vars);
    if !listed && !a.formal {
        bail!(Exit(
            EXIT_USAGE,
            format!("{eps_vars} is not a discrete series of {ty}; pass --formal to evaluate the rational function anyway")
        ));
    }
    if !listed {
        eprintln!("warning: {eps_vars} is not a discrete series of {ty}; the value is formal and has no distinction meaning");
    }
    let calibration = calibration_for(ty, a.common.max_elements)?;
    let eps = to_class_order(&eps_vars, &calibration.binding);
    let mut rows = Vec::new();
    for &q_o in &a.qo {
        let v = if listed {
            distinction_value(ty, &eps, q_o, &calibration)?
        } else {
            formal_distinction_value(ty, &eps, q_o, &calibration)?
        };
        rows.push(json!({
            "type": ty.to_string(),
            "epsilon": eps_vars.signs(),
            "q_o": q_o,
            "value": format_rational(&v.value),
            "discrete_series": v.discrete_series,
            "zero_witness": v.zero_witness,
        }));
    }
    match a.common.format {
        Format::Json => emit_json(&a.common, &json!(rows))?,
        _ => {
            let mut s = String::new();
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{ty} eps={eps_vars} q_o={} value={}{}",
                    r["q_o"],
                    r["value"].as_str().unwrap_or_default(),
                    if listed { "" } else { " (formal)" }
                );
            }
            emit(&a.common, &s)?;
        }
    }
    Ok(0)
}

fn cmd_tables(a: TablesArgs) -> Result<u8> {
    let types = match a.cartan_type {
        Some(t) => vec![t],
        None => CartanType::catalogue(),
    };
    let doc = tables_document(&types);
    match a.common.format {
        Format::Json => emit_json(&a.common, &serde_json::to_value(&doc)?)?,
        Format::Text | Format::Markdown | Format::Csv => {
            let mut s = match a.common.format {
                Format::Csv => String::from("type,rank,m,classes,exponents,borel_list\n"),
                Format::Markdown => String::from(
                    "| type | rank | m | classes | exponents | discrete series |\n|---|---|---|---|---|---|\n",
                ),
                _ => String::new(),
            };
            for t in &doc.types {
                let classes = t
                    .classes
                    .iter()
                    .map(|c| format!("{{{}}}", join(c, ",")))
                    .collect::<Vec<_>>()
                    .join(" ");
                let borel = t
                    .borel_list
                    .iter()
                    .map(|e| format!("({})", join(e, ",")))
                    .collect::<Vec<_>>()
                    .join(" ");
                let exps = join(&t.exponents, ",");
                let _ = match a.common.format {
                    Format::Csv => writeln!(s, "{},{},{},{classes},\"{exps}\",{borel}", t.cartan_type, t.rank, t.m),
                    Format::Markdown => writeln!(
                        s,
                        "| {} | {} | {} | {classes} | {exps} | {borel} |",
                        t.cartan_type, t.rank, t.m
                    ),
                    _ => writeln!(
                        s,
                        "{}: rank {}, m {}, classes {classes}, exponents {exps}, discrete series {borel}",
                        t.cartan_type, t.rank, t.m
                    ),
                };
            }
            emit(&a.common, &s)?;
        }
    }
    Ok(0)
}

fn cmd_robustness(a: RobustnessArgs) -> Result<u8> {
    let ty = a.cartan_type;
    if !(2..=3).contains(&ty.class_count()) {
        bail!(Exit(
            EXIT_USAGE,
            format!(
                "{ty} has {} generator class(es); robustness applies to 2 or 3",
                ty.class_count()
            )
        ));
    }
    let mut text = String::new();
    let mut reports = Vec::new();
    for eps in borel_discrete_series_list(ty) {
        let r = robustness_check(ty, &eps, &a.qo)?;
        let _ = writeln!(
            text,
            "{ty} eps={eps}: {} under every binding ({} evaluations, {} poles skipped)",
            if r.distinguished { "nonzero" } else { "zero" },
            r.defined_count(),
            r.entries.len() - r.defined_count()
        );
        let entries: Vec<Value> = r
            .entries
            .iter()
            .map(|e| match &e.outcome {
                BindingOutcome::Value {
                    value,
                    zero_witness,
                } => json!({
                    "binding": e.binding.as_slice(),
                    "q_o": e.q_o,
                    "value": format_rational(value),
                    "zero_witness": zero_witness,
                }),
                BindingOutcome::Pole { factor } => json!({
                    "binding": e.binding.as_slice(),
                    "q_o": e.q_o,
                    "pole": factor,
                }),
            })
            .collect();
        reports.push(json!({
            "type": ty.to_string(),
            "epsilon": eps.signs(),
            "distinguished": r.distinguished,
            "entries": entries,
        }));
    }
    match a.common.format {
        Format::Json => emit_json(&a.common, &json!(reports))?,
        _ => emit(&a.common, &text)?,
    }
    Ok(0)
}

fn cmd_partial_sums(a: PartialSumsArgs) -> Result<u8> {
    let ty = a.base.cartan_type;
    let cap = a.base.common.max_elements;
    let eps_vars = match &a.signs {
        Some(text) => parse_signs(text)?,
        None => SignCharacter::steinberg(ty.class_count()),
    };
    let calibration = calibration_for(ty, cap)?;
    let eps = to_class_order(&eps_vars, &calibration.binding);
    let value = distinction_value(ty, &eps, a.qo, &calibration)?.value;
    let system = build_affine_system(ty);
    let b = ball(&system, a.base.degree, cap)?;
    let sums = partial_sums_at_point(&b, &eps, a.qo, a.base.degree)?;
    let gap = |s: &Rational| distance(s, &value);
    let common = &a.base.common;
    match common.format {
        Format::Json => {
            let rows: Vec<Value> = sums
                .iter()
                .enumerate()
                .map(|(k, s)| json!({"radius": k, "partial_sum": format_rational(s), "gap": format_rational(&gap(s))}))
                .collect();
            emit_json(
                common,
                &json!({
                    "type": ty.to_string(),
                    "epsilon": eps_vars.signs(),
                    "q_o": a.qo,
                    "value": format_rational(&value),
                    "partial_sums": rows,
                }),
            )?
        }
        Format::Csv => {
            let mut s = String::from("radius,partial_sum,gap\n");
            for (k, p) in sums.iter().enumerate() {
                let _ = writeln!(s, "{k},{},{}", format_rational(p), format_rational(&gap(p)));
            }
            emit(common, &s)?
        }
        Format::Markdown => {
            let mut s = String::from("| radius | partial sum | gap |\n|---|---|---|\n");
            for (k, p) in sums.iter().enumerate() {
                let _ = writeln!(
                    s,
                    "| {k} | {} | {} |",
                    format_rational(p),
                    format_rational(&gap(p))
                );
            }
            emit(common, &s)?
        }
        Format::Text => {
            let mut s = format!(
                "{ty} eps={eps_vars} q_o={} value={}\n",
                a.qo,
                format_rational(&value)
            );
            for (k, p) in sums.iter().enumerate() {
                let _ = writeln!(
                    s,
                    "{k} {} gap={}",
                    format_rational(p),
                    format_rational(&gap(p))
                );
            }
            emit(common, &s)?
        }
    }
    Ok(0)
}
