//! Command-line front end behind the `esd` binary.
//!
//! Every command produces one artifact, written atomically to `--out` or
//! printed to stdout. Numbers carry six significant digits.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::analysis::{pend_curve, sweep_slice, sweep_surface, EsdOutcome, SurfaceCell};
use crate::analytic::{
    boundaries_inner_x, boundaries_outer_x, Boundary, BoundarySet, MainParams, NotVariant,
};
use crate::channels::{evolve_scenario, Qubit, Scenario, ScenarioKind};
use crate::dilation::{evolve_dilated, trace_out_reservoir};
use crate::error::EsdError;
use crate::state::{DecayProbability, DensityMatrix4, InnerXParams, OuterXParams};
use crate::validation::{run_all, INNER_X_STATED_P0};

/// Dilated and Kraus states must agree to this for `dilation-check` to pass.
pub const DILATION_TOL: f64 = 1e-12;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("validation failed: {0}")]
    Validation(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Params(_) => 1,
            CliError::Io(_) => 2,
            CliError::Validation(_) => 3,
        }
    }
}

impl From<EsdError> for CliError {
    fn from(e: EsdError) -> Self {
        CliError::Params(e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "esd",
    version,
    about = "Entanglement sudden death under amplitude damping"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Negativity and purity over the two damping stages.
    Surface {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_enum, default_value_t = ScenarioArg::None)]
        scenario: ScenarioArg,
        /// Pin the first stage (the NOT point) and sweep only p′.
        #[arg(long)]
        pn: Option<f64>,
        #[arg(long, default_value_t = 101)]
        res: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// p0 and the NOT boundaries pA, pB.
    Boundaries {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// End of entanglement as a function of the NOT point.
    PendCurve {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_enum, default_value_t = VariantArg::Double)]
        variant: VariantArg,
        #[arg(long, default_value_t = 101)]
        points: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Runs the property suite.
    Validate {
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Compares the optical dilation with the Kraus pipeline on a grid.
    DilationCheck {
        #[arg(long, default_value_t = 0.2)]
        alpha2: f64,
        #[arg(long, default_value_t = 0.0)]
        delta: f64,
        #[arg(long, value_enum, default_value_t = ScenarioArg::None)]
        scenario: ScenarioArg,
        #[arg(long, default_value_t = 5)]
        res: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyKind {
    /// `|α||HH⟩ + |β|e^{iδ}|VV⟩` with `|α|² = alpha2`.
    Pure,
    /// Populations `u, b, c, x` on `gg, eg, ge, ee`, coherence `|v|e^{iδ}` on `gg-ee`.
    OuterX,
    /// Excited-first outer coherence `a, b, c, d, z`.
    #[value(name = "appendix-b")]
    ExcitedFirst,
    /// Inner coherence `a, b, c, d, z`.
    #[value(name = "appendix-c")]
    InnerX,
}

#[derive(Args, Debug, Clone)]
pub struct FamilyArgs {
    #[arg(long, value_enum, default_value_t = FamilyKind::Pure)]
    pub family: FamilyKind,
    #[arg(long)]
    pub alpha2: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub delta: f64,
    #[arg(long)]
    pub u: Option<f64>,
    #[arg(long)]
    pub x: Option<f64>,
    #[arg(long)]
    pub v: Option<f64>,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub b: Option<f64>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub d: Option<f64>,
    #[arg(long)]
    pub z: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ScenarioArg {
    None,
    Single,
    SingleTwo,
    Double,
}

impl From<ScenarioArg> for ScenarioKind {
    fn from(s: ScenarioArg) -> Self {
        match s {
            ScenarioArg::None => ScenarioKind::NoNot,
            ScenarioArg::Single => ScenarioKind::SingleNot(Qubit::One),
            ScenarioArg::SingleTwo => ScenarioKind::SingleNot(Qubit::Two),
            ScenarioArg::Double => ScenarioKind::DoubleNot,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Double,
    Single,
}

impl From<VariantArg> for NotVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Double => NotVariant::Double,
            VariantArg::Single => NotVariant::Single,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

/// A validated initial state.
#[derive(Clone, Debug, PartialEq)]
pub enum StateSpec {
    Pure {
        alpha2: f64,
        delta: f64,
    },
    OuterX(OuterXParams),
    ExcitedFirst(OuterXParams),
    /// Kept even when unphysical so the closed forms can be inspected.
    InnerX(InnerXParams),
}

fn need(value: Option<f64>, name: &str, family: &str) -> Result<f64, CliError> {
    value.ok_or_else(|| CliError::Params(format!("--{name} is required for --family {family}")))
}

impl FamilyArgs {
    pub fn resolve(&self) -> Result<StateSpec, CliError> {
        let delta = self.delta;
        if !delta.is_finite() {
            return Err(CliError::Params("--delta must be finite".into()));
        }
        Ok(match self.family {
            FamilyKind::Pure => {
                let alpha2 = need(self.alpha2, "alpha2", "pure")?;
                if !(0.0..=1.0).contains(&alpha2) {
                    return Err(CliError::Params(format!(
                        "--alpha2 {alpha2} is outside [0, 1]"
                    )));
                }
                StateSpec::Pure { alpha2, delta }
            }
            FamilyKind::OuterX => {
                let u = need(self.u, "u", "outer-x")?;
                let x = need(self.x, "x", "outer-x")?;
                let v = need(self.v, "v", "outer-x")?;
                let p = OuterXParams::new(
                    u,
                    x,
                    self.b.unwrap_or(0.0),
                    self.c.unwrap_or(0.0),
                    Complex64::from_polar(v, delta),
                )?;
                DensityMatrix4::from_outer_x(&p)?;
                StateSpec::OuterX(p)
            }
            FamilyKind::ExcitedFirst => {
                let f = "appendix-b";
                let p = OuterXParams::from_excited_first(
                    need(self.a, "a", f)?,
                    need(self.b, "b", f)?,
                    need(self.c, "c", f)?,
                    need(self.d, "d", f)?,
                    Complex64::from_polar(need(self.z, "z", f)?, delta),
                )?;
                DensityMatrix4::from_outer_x(&p)?;
                StateSpec::ExcitedFirst(p)
            }
            FamilyKind::InnerX => {
                let f = "appendix-c";
                StateSpec::InnerX(InnerXParams::new(
                    need(self.a, "a", f)?,
                    need(self.b, "b", f)?,
                    need(self.c, "c", f)?,
                    need(self.d, "d", f)?,
                    Complex64::from_polar(need(self.z, "z", f)?, delta),
                )?)
            }
        })
    }
}

impl StateSpec {
    pub fn family_name(&self) -> &'static str {
        match self {
            StateSpec::Pure { .. } => "pure",
            StateSpec::OuterX(_) => "outer-x",
            StateSpec::ExcitedFirst(_) => "appendix-b",
            StateSpec::InnerX(_) => "appendix-c",
        }
    }

    /// Initial density matrix. Inner-coherence states must be physical here.
    pub fn density(&self) -> Result<DensityMatrix4, CliError> {
        Ok(match self {
            StateSpec::Pure { alpha2, delta } => {
                DensityMatrix4::from_pure(alpha2.sqrt(), (1.0 - alpha2).sqrt(), *delta)?
            }
            StateSpec::OuterX(p) | StateSpec::ExcitedFirst(p) => DensityMatrix4::from_outer_x(p)?,
            StateSpec::InnerX(p) => DensityMatrix4::from_inner_x(p)?,
        })
    }

    /// Two-population parameters, when the state belongs to that family.
    pub fn main_params(&self) -> Result<MainParams, CliError> {
        match self {
            StateSpec::Pure { alpha2, .. } => Ok(MainParams::pure(*alpha2)?),
            StateSpec::OuterX(p) | StateSpec::ExcitedFirst(p) => Ok(MainParams::from_outer(p)?),
            StateSpec::InnerX(_) => Err(CliError::Params(
                "pend-curve needs a state with populations only on gg and ee".into(),
            )),
        }
    }
}

/// `printf("%#.6g")`: six significant digits, trailing zeros kept.
pub fn fmt_sig6(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0.00000".into();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let s = if !(-4..6).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else if exp == 5 {
        format!("{x:.0}.")
    } else {
        format!("{:.*}", (5 - exp) as usize, x)
    };
    match s.strip_prefix('-') {
        Some(rest) if rest.parse::<f64>() == Ok(0.0) => rest.to_string(),
        _ => s,
    }
}

/// Rounds to six significant digits for JSON output; non-finite becomes null.
pub fn json_num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let rounded: f64 = format!("{x:.5e}").parse().expect("round trip");
    let rounded = if rounded == 0.0 { 0.0 } else { rounded };
    json!(rounded)
}

fn json_opt(x: Option<f64>) -> Value {
    x.map_or(Value::Null, json_num)
}

fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, content: &str) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(content.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn emit(output: &OutputArgs, content: &str) -> Result<(), CliError> {
    match &output.out {
        Some(path) => write_atomic(path, content),
        None => std::io::stdout()
            .write_all(content.as_bytes())
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

fn prob(p: f64, name: &str) -> Result<DecayProbability, CliError> {
    DecayProbability::new(p)
        .map_err(|_| CliError::Params(format!("--{name} {p} is outside [0, 1]")))
}

/// Surface rows as CSV or JSON.
pub fn render_surface(cells: &[SurfaceCell], format: Format) -> String {
    match format {
        Format::Csv => {
            let mut s = String::from("p,p_prime,negativity,purity\n");
            for c in cells {
                let row = [c.p, c.p_prime, c.negativity, c.purity]
                    .map(fmt_sig6)
                    .join(",");
                s.push_str(&row);
                s.push('\n');
            }
            s
        }
        Format::Json => render_json(&Value::Array(
            cells
                .iter()
                .map(|c| {
                    json!({
                        "p": json_num(c.p),
                        "p_prime": json_num(c.p_prime),
                        "negativity": json_num(c.negativity),
                        "purity": json_num(c.purity),
                    })
                })
                .collect(),
        )),
    }
}

pub fn cmd_surface(
    family: &FamilyArgs,
    scenario: ScenarioArg,
    pn: Option<f64>,
    res: usize,
    output: &OutputArgs,
) -> Result<(), CliError> {
    let rho0 = family.resolve()?.density()?;
    let kind = ScenarioKind::from(scenario);
    let cells = match pn {
        Some(pn) => sweep_slice(&rho0, kind, prob(pn, "pn")?, res)?,
        None => sweep_surface(&rho0, kind, res)?.cells,
    };
    emit(
        output,
        &render_surface(&cells, output.format.unwrap_or_default()),
    )
}

fn boundary_fields(map: &mut Map<String, Value>, key: &str, b: Boundary) {
    map.insert(key.into(), json_opt(b.value()));
    map.insert(format!("{key}_raw"), json_opt(b.raw));
    map.insert(format!("{key}_in_domain"), json!(b.in_domain));
}

fn boundary_set_fields(map: &mut Map<String, Value>, set: &BoundarySet) {
    boundary_fields(map, "p0", set.p0);
    boundary_fields(map, "pA_double", set.pa_double);
    boundary_fields(map, "pB_double", set.pb_double);
    boundary_fields(map, "pA_single", set.pa_single);
    boundary_fields(map, "pB_single", set.pb_single);
}

/// Flat boundary report. Out-of-domain values are null, with the raw value alongside.
pub fn boundaries_report(spec: &StateSpec) -> Map<String, Value> {
    let mut map = Map::new();
    map.insert("family".into(), json!(spec.family_name()));
    match spec {
        StateSpec::Pure { alpha2, .. } => {
            let m = MainParams::pure(*alpha2).expect("alpha2 checked on resolve");
            boundary_set_fields(&mut map, &m.not_boundaries());
        }
        StateSpec::OuterX(p) | StateSpec::ExcitedFirst(p) => {
            boundary_set_fields(&mut map, &boundaries_outer_x(p));
        }
        StateSpec::InnerX(p) => {
            let r = boundaries_inner_x(p);
            boundary_set_fields(&mut map, &r.formula);
            let (outcome, numeric) = match r.numeric_p0.outcome {
                EsdOutcome::Dies { p_prime, .. } => ("dies", Some(p_prime)),
                EsdOutcome::BornSeparable { .. } => ("born_separable", Some(0.0)),
                EsdOutcome::Avoided => ("avoided", None),
            };
            map.insert("p0_formula".into(), json_opt(r.formula.p0.raw));
            map.insert("p0_numeric".into(), json_opt(numeric));
            map.insert("numeric_outcome".into(), json!(outcome));
            if is_reference_inner_example(p) {
                map.insert("p0_stated".into(), json_num(INNER_X_STATED_P0));
            }
            map.insert("physical".into(), json!(r.physical));
            map.insert("min_eigenvalue".into(), json_num(r.min_eigenvalue));
            map.insert("discrepancy".into(), json!(r.discrepancy));
        }
    }
    map
}

fn is_reference_inner_example(p: &InnerXParams) -> bool {
    let close = |a: f64, b: f64| (a - b).abs() < 1e-12;
    close(p.a, 0.4)
        && close(p.b, 0.2)
        && close(p.c, 0.2)
        && close(p.d, 0.2)
        && close(p.z.norm(), 0.25)
}

fn render_report(map: Map<String, Value>, format: Format) -> String {
    match format {
        Format::Json => render_json(&Value::Object(map)),
        Format::Csv => {
            let mut s = String::from("field,value\n");
            for (k, v) in map {
                let cell = match v {
                    Value::Number(n) => fmt_sig6(n.as_f64().expect("finite")),
                    Value::String(t) => t,
                    other => other.to_string(),
                };
                s.push_str(&format!("{k},{cell}\n"));
            }
            s
        }
    }
}

pub fn cmd_boundaries(family: &FamilyArgs, output: &OutputArgs) -> Result<(), CliError> {
    let spec = family.resolve()?;
    let format = output.format.unwrap_or(Format::Json);
    emit(output, &render_report(boundaries_report(&spec), format))
}

pub fn cmd_pend_curve(
    family: &FamilyArgs,
    variant: VariantArg,
    points: usize,
    output: &OutputArgs,
) -> Result<(), CliError> {
    let params = family.resolve()?.main_params()?;
    let curve = pend_curve(&params, variant.into(), points)?;
    let content = match output.format.unwrap_or_default() {
        Format::Csv => {
            let mut s = String::from("pn,pend_analytic,pend_numeric,regime\n");
            for pt in &curve.points {
                s.push_str(&format!(
                    "{},{},{},{}\n",
                    fmt_sig6(pt.pn),
                    fmt_sig6(pt.analytic.capped),
                    fmt_sig6(pt.numeric.p_end_capped()),
                    pt.regime.label()
                ));
            }
            s
        }
        Format::Json => render_json(&Value::Array(
            curve
                .points
                .iter()
                .map(|pt| {
                    json!({
                        "pn": json_num(pt.pn),
                        "pend_analytic": json_num(pt.analytic.capped),
                        "pend_numeric": json_num(pt.numeric.p_end_capped()),
                        "regime": pt.regime.label(),
                    })
                })
                .collect(),
        )),
    };
    emit(output, &content)?;
    eprintln!(
        "max |analytic - numeric| = {:e} over {} points ({} avoidance mismatches)",
        curve.max_abs_diff(),
        curve.points.len(),
        curve.avoidance_mismatches()
    );
    Ok(())
}

pub fn cmd_validate(output: &OutputArgs) -> Result<(), CliError> {
    let summary = run_all();
    let content = match output.format.unwrap_or(Format::Json) {
        Format::Json => render_json(&serde_json::to_value(&summary).expect("serializable")),
        Format::Csv => {
            let mut s = String::from("name,passed,max_abs_diff,tolerance\n");
            for p in &summary.properties {
                s.push_str(&format!(
                    "{},{},{},{}\n",
                    p.name,
                    p.passed,
                    fmt_sig6(p.max_abs_diff),
                    fmt_sig6(p.tolerance)
                ));
            }
            s
        }
    };
    emit(output, &content)?;
    if summary.all_passed {
        Ok(())
    } else {
        let failed: Vec<_> = summary
            .properties
            .iter()
            .filter(|p| !p.passed)
            .map(|p| p.name)
            .collect();
        Err(CliError::Validation(failed.join(", ")))
    }
}

pub fn cmd_dilation_check(
    alpha2: f64,
    delta: f64,
    scenario: ScenarioArg,
    res: usize,
    output: &OutputArgs,
) -> Result<(), CliError> {
    if !(0.0..=1.0).contains(&alpha2) || !delta.is_finite() {
        return Err(CliError::Params(format!(
            "--alpha2 {alpha2} is outside [0, 1]"
        )));
    }
    if res < 2 {
        return Err(CliError::Params(format!(
            "--res must be at least 2, got {res}"
        )));
    }
    let (a, b) = (alpha2.sqrt(), (1.0 - alpha2).sqrt());
    let rho0 = DensityMatrix4::from_pure(a, b, delta)?;
    let kind = ScenarioKind::from(scenario);
    let last = (res - 1) as f64;
    let mut rows = Vec::new();
    for i in 0..res {
        for j in 0..res {
            let p = prob(i as f64 / last, "p")?;
            let pp = prob(j as f64 / last, "p_prime")?;
            let s = Scenario { kind, p_n: p };
            let dilated = trace_out_reservoir(&evolve_dilated(a, b, delta, &s, p, pp)?);
            let kraus = evolve_scenario(&rho0, &s, p, pp)?;
            rows.push((
                p.value(),
                pp.value(),
                dilated.matrix().max_abs_diff(kraus.matrix()),
            ));
        }
    }
    let worst = rows.iter().map(|r| r.2).fold(0.0, f64::max);
    let passed = worst <= DILATION_TOL;
    let content = match output.format.unwrap_or(Format::Json) {
        Format::Csv => {
            let mut s = String::from("p,p_prime,max_abs_diff\n");
            for (p, pp, d) in &rows {
                s.push_str(&format!(
                    "{},{},{}\n",
                    fmt_sig6(*p),
                    fmt_sig6(*pp),
                    fmt_sig6(*d)
                ));
            }
            s
        }
        Format::Json => render_json(&json!({
            "scenario": kind.label(),
            "resolution": res,
            "max_abs_diff": json_num(worst),
            "tolerance": DILATION_TOL,
            "passed": passed,
        })),
    };
    emit(output, &content)?;
    if passed {
        Ok(())
    } else {
        Err(CliError::Validation(format!("max |Δ| = {worst:e}")))
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Surface {
            family,
            scenario,
            pn,
            res,
            output,
        } => cmd_surface(&family, scenario, pn, res, &output),
        Command::Boundaries { family, output } => cmd_boundaries(&family, &output),
        Command::PendCurve {
            family,
            variant,
            points,
            output,
        } => cmd_pend_curve(&family, variant, points, &output),
        Command::Validate { output } => cmd_validate(&output),
        Command::DilationCheck {
            alpha2,
            delta,
            scenario,
            res,
            output,
        } => cmd_dilation_check(alpha2, delta, scenario, res, &output),
    }
}

/// Parses `args`, runs the command and maps the outcome to an exit code.
pub fn main_from<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("esd: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
