//! Command-line front-end. [`run`] does all the work and returns the exit
//! code and both output streams, so it can be driven from tests.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::classify::{classify, classify_subsystem, ClassificationReport, IrreducibleComponent};
use crate::config::{fmt_vec, SignSpec, VectorConfiguration};
use crate::error::Error;
use crate::fan::{
    fan_roots, reflection_partition, symmetry_report, Fan, PartitionReport, SymmetryReportJson,
};
use crate::roots::{compute_roots, compute_signed_roots, dual, oracle_roots, RootSystem};

#[derive(Debug, Parser)]
#[command(
    name = "torus-roots",
    version,
    about = "Root systems of integer vector configurations and smooth complete fans"
)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Debug, Subcommand)]
enum Verb {
    /// Enumerate the roots of a configuration or fan
    Roots(Input),
    /// Split the roots into irreducible components and name each one
    Classify(Input),
    /// Coroots 2α/(α,α) and their classification
    Dual(Input),
    /// Cross-check the roots against a brute-force search
    Oracle(Input),
    /// Check that a fan is smooth and complete
    FanValidate(Input),
    /// Roots of a fan, optionally signed
    FanRoots(Input),
    /// Partition of the rays into reflection orbits
    FanPartition(Input),
    /// Roots, classification, orbits and consistency checks of a fan
    FanReport(Input),
}

#[derive(Debug, Args)]
struct Input {
    /// JSON file, or a catalog name such as cp2 or pentagon
    input: Option<String>,
    /// Use a built-in fan
    #[arg(long, value_name = "NAME", conflicts_with = "input")]
    catalog: Option<String>,
    /// Sign assignment: "+,-,+" or "q=2" (first q signs +, the rest −)
    #[arg(long, value_name = "SIGNS")]
    signed: Option<SignSpec>,
    /// Emit JSON instead of a table
    #[arg(long)]
    json: bool,
    /// JSON array of functionals forming a closed subsystem to classify
    #[arg(long, value_name = "FILE")]
    subset: Option<PathBuf>,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }
}

enum Failure {
    /// Invalid input data or a failed invariant.
    Domain(String),
    /// Bad command line, unreadable file, malformed JSON.
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Output::ok(text)
            };
        }
    };
    match dispatch(cli.verb) {
        Ok(out) => out,
        Err(Failure::Domain(msg)) => Output {
            code: 1,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
        Err(Failure::Usage(msg)) => Output {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
    }
}

enum Loaded {
    Configuration(VectorConfiguration),
    Fan(Fan),
}

impl Loaded {
    fn configuration(&self) -> VectorConfiguration {
        match self {
            Loaded::Configuration(c) => c.clone(),
            Loaded::Fan(f) => f.configuration(),
        }
    }

    fn fan(self, verb: &str) -> CliResult<Fan> {
        match self {
            Loaded::Fan(f) => Ok(f),
            Loaded::Configuration(_) => Err(Failure::Usage(format!(
                "{verb} needs a fan (JSON with \"rays\" and \"max_cones\")"
            ))),
        }
    }
}

// Shapes only; validation happens in the library so that its errors map to
// exit code 1.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    rank: usize,
    vectors: Vec<Vec<i64>>,
    #[serde(default)]
    labels: Option<Vec<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FanFile {
    rank: usize,
    rays: Vec<Vec<i64>>,
    max_cones: Vec<Vec<usize>>,
}

fn read_json(path: &Path) -> CliResult<serde_json::Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::Usage(format!("malformed JSON in {}: {e}", path.display())))
}

fn shape<T: for<'de> Deserialize<'de>>(value: serde_json::Value, path: &Path) -> CliResult<T> {
    serde_json::from_value(value)
        .map_err(|e| Failure::Usage(format!("unexpected JSON layout in {}: {e}", path.display())))
}

fn load(input: &Input) -> CliResult<Loaded> {
    let name = match (&input.catalog, &input.input) {
        (Some(name), _) => {
            return Fan::catalog(name)
                .map(Loaded::Fan)
                .ok_or_else(|| unknown_catalog(name))
        }
        (None, Some(name)) => name,
        (None, None) => return Err(Failure::Usage("no input given".into())),
    };
    let path = Path::new(name);
    if !path.exists() {
        if let Some(f) = Fan::catalog(name) {
            return Ok(Loaded::Fan(f));
        }
    }
    let value = read_json(path)?;
    let is_fan = value.get("rays").is_some();
    if is_fan {
        let f: FanFile = shape(value, path)?;
        Ok(Loaded::Fan(Fan::from_one_based(
            f.rank,
            f.rays,
            f.max_cones,
        )?))
    } else if value.get("vectors").is_some() {
        let c: ConfigFile = shape(value, path)?;
        let mut cfg = VectorConfiguration::new(c.rank, c.vectors)?;
        if let Some(labels) = c.labels {
            cfg = cfg.with_labels(labels)?;
        }
        Ok(Loaded::Configuration(cfg))
    } else {
        Err(Failure::Usage(format!(
            "{} is neither a configuration (\"vectors\") nor a fan (\"rays\")",
            path.display()
        )))
    }
}

fn unknown_catalog(name: &str) -> Failure {
    Failure::Usage(format!(
        "unknown catalog name {name:?}; available: {}",
        Fan::catalog_names().join(", ")
    ))
}

fn reject(input: &Input, verb: &str, signed: bool, subset: bool) -> CliResult<()> {
    if !signed && input.signed.is_some() {
        return Err(Failure::Usage(format!("{verb} does not take --signed")));
    }
    if !subset && input.subset.is_some() {
        return Err(Failure::Usage(format!("{verb} does not take --subset")));
    }
    Ok(())
}

fn roots_of(input: &Input, loaded: &Loaded) -> CliResult<RootSystem> {
    let cfg = loaded.configuration();
    Ok(match &input.signed {
        None => compute_roots(&cfg)?,
        Some(spec) => compute_signed_roots(&cfg, &spec.resolve(cfg.len())?)?,
    })
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

fn dispatch(verb: Verb) -> CliResult<Output> {
    match verb {
        Verb::Roots(input) => {
            reject(&input, "roots", true, false)?;
            let system = roots_of(&input, &load(&input)?)?;
            let components = classify(&system)?;
            Ok(Output::ok(if input.json {
                to_json(&system)
            } else {
                roots_table(&system, &components)
            }))
        }
        Verb::Classify(input) => {
            reject(&input, "classify", true, true)?;
            let system = roots_of(&input, &load(&input)?)?;
            let components = match &input.subset {
                None => classify(&system)?,
                Some(path) => {
                    let alphas: Vec<Vec<i64>> = shape(read_json(path)?, path)?;
                    let subset = RootSystem::from_alphas(system.configuration(), alphas)?;
                    classify_subsystem(&system, &subset)?
                }
            };
            Ok(Output::ok(if input.json {
                to_json(&ClassificationReport::new(&components))
            } else {
                classification_table(&components)
            }))
        }
        Verb::Dual(input) => {
            reject(&input, "dual", true, false)?;
            let system = dual(&roots_of(&input, &load(&input)?)?)?;
            let components = classify(&system)?;
            Ok(Output::ok(if input.json {
                to_json(&system)
            } else {
                roots_table(&system, &components)
            }))
        }
        Verb::Oracle(input) => {
            reject(&input, "oracle", false, false)?;
            let cfg = load(&input)?.configuration();
            oracle(&cfg, input.json)
        }
        Verb::FanValidate(input) => {
            reject(&input, "fan-validate", false, false)?;
            let fan = load(&input)?.fan("fan-validate")?;
            Ok(Output::ok(if input.json {
                to_json(&FanValidation {
                    valid: true,
                    fan: fan.clone(),
                })
            } else {
                format!(
                    "valid: rank {}, {} rays, {} maximal cones; primitive, non-singular, complete\n",
                    fan.rank(),
                    fan.ray_count(),
                    fan.max_cones().len()
                )
            }))
        }
        Verb::FanRoots(input) => {
            reject(&input, "fan-roots", true, false)?;
            let fan = load(&input)?.fan("fan-roots")?;
            let signs = input
                .signed
                .as_ref()
                .map(|s| s.resolve(fan.ray_count()))
                .transpose()?;
            let system = fan_roots(&fan, signs.as_ref())?;
            let components = classify(&system)?;
            Ok(Output::ok(if input.json {
                to_json(&system)
            } else {
                roots_table(&system, &components)
            }))
        }
        Verb::FanPartition(input) => {
            reject(&input, "fan-partition", false, false)?;
            let fan = load(&input)?.fan("fan-partition")?;
            let p = reflection_partition(&fan)?;
            Ok(Output::ok(if input.json {
                to_json(&p)
            } else {
                partition_table(&p)
            }))
        }
        Verb::FanReport(input) => {
            reject(&input, "fan-report", true, false)?;
            let fan = load(&input)?.fan("fan-report")?;
            let signs = input
                .signed
                .as_ref()
                .map(|s| s.resolve(fan.ray_count()))
                .transpose()?;
            let report = symmetry_report(&fan, signs.as_ref())?;
            let json = SymmetryReportJson::new(&fan, &report);
            let text = if input.json {
                to_json(&json)
            } else {
                report_table(&json, &report.components)
            };
            Ok(if json.consistent {
                Output::ok(text)
            } else {
                Output {
                    code: 1,
                    stdout: text,
                    stderr: "error: invariant violation: fan report checks failed\n".into(),
                }
            })
        }
    }
}

#[derive(Serialize)]
struct FanValidation {
    valid: bool,
    fan: Fan,
}

#[derive(Serialize)]
struct OracleJson {
    agrees: bool,
    roots: usize,
    missing: Vec<Vec<i64>>,
    extra: Vec<Vec<i64>>,
}

fn oracle(cfg: &VectorConfiguration, json: bool) -> CliResult<Output> {
    let fast = compute_roots(cfg)?.alphas();
    let slow = oracle_roots(cfg)?.alphas();
    // missing: found by brute force only; extra: found by enumeration only
    let missing: Vec<Vec<i64>> = slow.iter().filter(|a| !fast.contains(a)).cloned().collect();
    let extra: Vec<Vec<i64>> = fast.iter().filter(|a| !slow.contains(a)).cloned().collect();
    let agrees = missing.is_empty() && extra.is_empty();
    let text = if json {
        to_json(&OracleJson {
            agrees,
            roots: fast.len(),
            missing,
            extra,
        })
    } else if agrees {
        format!("oracle agrees: {} roots\n", fast.len())
    } else {
        let list = |v: &[Vec<i64>]| v.iter().map(|a| fmt_vec(a)).collect::<Vec<_>>().join(" ");
        format!(
            "oracle mismatch: enumeration found {}, brute force found {}\n  missing: {}\n  extra: {}\n",
            fast.len(),
            slow.len(),
            list(&missing),
            list(&extra)
        )
    };
    Ok(if agrees {
        Output::ok(text)
    } else {
        Output {
            code: 1,
            stdout: text,
            stderr: "error: invariant violation: oracle mismatch\n".into(),
        }
    })
}

fn component_header(c: &IrreducibleComponent) -> String {
    let mut s = format!("{} ({} roots)", c.label, c.roots.len());
    if let Some(note) = &c.note {
        let _ = write!(s, " — {note}");
    }
    s
}

fn roots_table(system: &RootSystem, components: &[IrreducibleComponent]) -> String {
    let cfg = system.configuration();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "configuration: rank {}, {} vectors {}",
        cfg.rank(),
        cfg.len(),
        cfg
    );
    if system.is_dual() {
        let _ = writeln!(out, "coroots: {}", system.len());
    } else {
        let _ = writeln!(out, "roots: {}", system.len());
    }
    let labels: Vec<String> = components.iter().map(|c| c.label.to_string()).collect();
    let _ = writeln!(
        out,
        "type: {}",
        if labels.is_empty() {
            "empty".to_string()
        } else {
            labels.join(" x ")
        }
    );
    let width = system
        .roots()
        .iter()
        .map(|r| r.to_string().len())
        .max()
        .unwrap_or(0)
        .max("alpha".len());
    for (k, c) in components.iter().enumerate() {
        let _ = writeln!(out, "\ncomponent {}: {}", k + 1, component_header(c));
        let _ = writeln!(out, "  {:<width$}  type  pairing", "alpha");
        for r in c.roots.roots() {
            let _ = writeln!(
                out,
                "  {:<width$}  {:<4}  {}",
                r.to_string(),
                r.kind().as_u8(),
                fmt_vec(r.pairing())
            );
        }
    }
    out
}

fn classification_table(components: &[IrreducibleComponent]) -> String {
    let mut out = String::new();
    if components.is_empty() {
        out.push_str("empty root system\n");
    }
    for (k, c) in components.iter().enumerate() {
        let _ = writeln!(out, "component {}: {}", k + 1, component_header(c));
        let simple: Vec<String> = c.simple_roots.iter().map(|r| r.to_string()).collect();
        let _ = writeln!(out, "  simple roots: {}", simple.join(" "));
        let _ = writeln!(out, "  cartan matrix:");
        for row in &c.cartan {
            let cells: Vec<String> = row.iter().map(|x| format!("{x:>3}")).collect();
            let _ = writeln!(out, "   {}", cells.join(""));
        }
    }
    out
}

fn partition_table(p: &PartitionReport) -> String {
    let mut out = String::new();
    for (class, rank) in p.classes.iter().zip(p.factor_ranks()) {
        let members: Vec<String> = class.iter().map(|i| (i + 1).to_string()).collect();
        let factor = if rank == 0 {
            "trivial".to_string()
        } else {
            format!("A{rank}")
        };
        let _ = writeln!(out, "{{{}}}  {factor}", members.join(","));
    }
    out
}

fn report_table(json: &SymmetryReportJson, components: &[IrreducibleComponent]) -> String {
    let mut out = String::new();
    let fan = &json.fan;
    let _ = writeln!(
        out,
        "fan: rank {}, {} rays, {} maximal cones",
        fan.rank(),
        fan.ray_count(),
        fan.max_cones().len()
    );
    let _ = writeln!(out, "signs: {}", json.signs);
    let _ = writeln!(out, "roots: {}", json.roots.len());
    let labels: Vec<String> = components.iter().map(component_header).collect();
    let _ = writeln!(
        out,
        "components: {}",
        if labels.is_empty() {
            "none".to_string()
        } else {
            labels.join(", ")
        }
    );
    let nonfaces: Vec<String> = json
        .minimal_nonfaces
        .iter()
        .map(|s| {
            format!(
                "{{{}}}",
                s.iter()
                    .map(|i| i.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            )
        })
        .collect();
    let _ = writeln!(out, "minimal non-faces: {}", nonfaces.join(" "));
    out.push_str("partition:\n");
    for line in partition_table(&json.partition).lines() {
        let _ = writeln!(out, "  {line}");
    }
    out.push_str("checks:\n");
    for c in &json.checks {
        let _ = write!(
            out,
            "  [{}] {}",
            if c.passed { "ok" } else { "FAIL" },
            c.name
        );
        if !c.detail.is_empty() {
            let _ = write!(out, ": {}", c.detail);
        }
        out.push('\n');
    }
    let _ = writeln!(
        out,
        "consistent: {}",
        if json.consistent { "yes" } else { "no" }
    );
    out
}
