//! Command-line entry point tying the exact and numeric modules into
//! reproducible, certificate-emitting runs.
//!
//! Every subcommand prints one JSON document (schema field `1`) with the
//! run configuration echoed, so identical inputs, seed, and version give
//! byte-identical output. Exit codes: 0 success, 2 verification failure,
//! 3 invalid input, 4 numeric failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cubics_core::arith::{parse_rat, rat_from_i64, rat_to_string};
use cubics_core::invariants::{
    base_locus_forward, i100, inverse_map, salmon_invariants, INVERSE_ORDER_NOTE,
    WEIGHT_40_READING_NOTE,
};
use cubics_core::lines::{cross_validate, eckardt_numeric, track_all};
use cubics_core::pentahedron::{
    classify_family, eckardt_vertices, geometry_facts, stabilizer, to_cubic_p3,
};
use cubics_core::singular::verification_certificate;
use cubics_core::{Error as CoreError, ModuliPoint, Rat, SylvesterPoint, TrackerConfig};

const EXIT_VERIFICATION: u8 = 2;
const EXIT_INVALID: u8 = 3;
const EXIT_NUMERIC: u8 = 4;

#[derive(Parser)]
#[command(
    name = "cubics",
    version,
    about = "Exact and numeric toolkit for cubic surfaces in Sylvester form",
    long_about = "Exact and numeric toolkit for cubic surfaces in Sylvester form: Salmon \
                  invariants and the weighted moduli map, verification certificates for the \
                  singular locus of the degree-100 hypersurface, and Eckardt-point reports \
                  backed by exact vertex criteria and homotopy-continuation line tracking.\n\n\
                  Coefficient input is either an inline comma-separated list of rationals \
                  (\"1,2,-3/4,4,5\") or a path to a JSON file holding an array (or an object \
                  with a \"coefficients\" array) of rational strings or integers."
)]
struct Cli {
    /// Seed driving all randomness; echoed into the output.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Numeric tolerance for intersection events and clustering.
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol: f64,
    /// Homotopy start paths; the total-degree system has exactly 81.
    #[arg(long, global = true, default_value_t = 81)]
    paths: usize,
    /// Write the JSON document to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Salmon invariants, the degree-100 invariant, and base-locus flags.
    Invariants {
        /// Five coefficients, inline or as a JSON file path.
        #[arg(allow_hyphen_values = true)]
        input: String,
    },
    /// Singular-locus verification.
    #[command(subcommand)]
    Sing(SingCommand),
    /// Eckardt-point reports: exact vertex criterion, numeric clustering
    /// of tracked lines, or a cross-validation of both.
    Eckardt {
        /// Five coefficients, inline or as a JSON file path.
        #[arg(allow_hyphen_values = true)]
        input: String,
        /// Which detector(s) to run.
        #[arg(long, value_enum, default_value_t = EckardtMode::Exact)]
        mode: EckardtMode,
    },
    /// The weighted moduli map: forward evaluation, exact inverse, or a
    /// round-trip identity check.
    Moduli {
        /// Coefficients (forward/round-trip) or an invariant tuple
        /// (inverse), inline or as a JSON file path.
        #[arg(allow_hyphen_values = true)]
        input: String,
        /// Apply the map and then its inverse, and verify the result is
        /// weighted-equal to the start.
        #[arg(long, conflicts_with = "inverse")]
        roundtrip: bool,
        /// Treat the input as an invariant tuple and invert the map.
        #[arg(long)]
        inverse: bool,
    },
}

#[derive(Subcommand)]
enum SingCommand {
    /// Emit a certificate covering the 30 singular-locus components, the
    /// independent component oracle, smoothness sampling, and curve
    /// endpoint limits. Exit code 0 exactly when every check passes.
    Verify {
        /// Also sample multiplicity reports on each component family.
        #[arg(long)]
        sample_multiplicities: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EckardtMode {
    Exact,
    Numeric,
    Cross,
}

impl EckardtMode {
    fn as_str(self) -> &'static str {
        match self {
            EckardtMode::Exact => "exact",
            EckardtMode::Numeric => "numeric",
            EckardtMode::Cross => "cross",
        }
    }
}

/// The knobs shared by every subcommand, echoed into each document.
struct RunConfig {
    seed: u64,
    tol: f64,
    paths: usize,
    out: Option<PathBuf>,
}

impl RunConfig {
    fn to_json(&self) -> Value {
        json!({
            "seed": self.seed,
            "tol": self.tol,
            "paths": self.paths,
        })
    }

    fn tracker(&self) -> TrackerConfig {
        let mut cfg = TrackerConfig::from_seed(self.seed);
        cfg.paths = self.paths;
        cfg
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(EXIT_INVALID);
        }
    };
    let run = RunConfig {
        seed: cli.seed,
        tol: cli.tol,
        paths: cli.paths,
        out: cli.out.clone(),
    };

    let (doc, code) = dispatch(&cli.command, &run);
    let mut text = serde_json::to_string_pretty(&doc).expect("JSON documents serialize");
    text.push('\n');
    match &run.out {
        Some(path) => {
            if let Err(e) = fs::write(path, &text) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_INVALID);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(code)
}

fn dispatch(command: &Command, run: &RunConfig) -> (Value, u8) {
    match command {
        Command::Invariants { input } => cmd_invariants(run, input),
        Command::Sing(SingCommand::Verify {
            sample_multiplicities,
        }) => cmd_sing_verify(run, *sample_multiplicities),
        Command::Eckardt { input, mode } => cmd_eckardt(run, input, *mode),
        Command::Moduli {
            input,
            roundtrip,
            inverse,
        } => cmd_moduli(run, input, *roundtrip, *inverse),
    }
}

/// Shell of every output document: schema, version, command, config.
fn document(command: &str, run: &RunConfig) -> Value {
    json!({
        "schema": 1,
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "seed": run.seed,
        "config": run.to_json(),
    })
}

fn error_exit_code(err: &CoreError) -> u8 {
    match err {
        CoreError::TrackingFailure { .. } | CoreError::SurfaceMaySingular(_) => EXIT_NUMERIC,
        _ => EXIT_INVALID,
    }
}

fn error_document(command: &str, run: &RunConfig, err: &CoreError) -> (Value, u8) {
    let code = error_exit_code(err);
    let mut doc = document(command, run);
    doc["error"] = json!({
        "exit_code": code,
        "message": err.to_string(),
    });
    (doc, code)
}

fn rat_strings(values: &[Rat]) -> Vec<String> {
    values.iter().map(rat_to_string).collect()
}

/// Coefficient input: an inline comma-separated rational list, or a path
/// to a JSON file holding an array (or `{"coefficients": [...]}`) of
/// rational strings or integers.
fn parse_input(raw: &str) -> Result<Vec<Rat>, CoreError> {
    if Path::new(raw).is_file() {
        let text = fs::read_to_string(raw)
            .map_err(|e| CoreError::InvalidInput(format!("cannot read {raw}: {e}")))?;
        let value: Value = serde_json::from_str(&text)
            .map_err(|e| CoreError::InvalidInput(format!("{raw} is not JSON: {e}")))?;
        let entries = value
            .as_array()
            .or_else(|| value.get("coefficients").and_then(Value::as_array))
            .ok_or_else(|| {
                CoreError::InvalidInput(format!(
                    "{raw} must hold an array or an object with a \"coefficients\" array"
                ))
            })?;
        entries
            .iter()
            .map(|entry| match entry {
                Value::String(s) => parse_rat(s),
                Value::Number(n) => n.as_i64().map(rat_from_i64).ok_or_else(|| {
                    CoreError::InvalidInput(format!(
                        "numeric entry {n} is not an integer; pass rationals as strings"
                    ))
                }),
                other => Err(CoreError::InvalidInput(format!(
                    "entry {other} is neither a rational string nor an integer"
                ))),
            })
            .collect()
    } else {
        raw.split(',').map(parse_rat).collect()
    }
}

fn parse_sylvester(raw: &str) -> Result<SylvesterPoint, CoreError> {
    SylvesterPoint::new(parse_input(raw)?)
}

fn cmd_invariants(run: &RunConfig, input: &str) -> (Value, u8) {
    let s = match parse_sylvester(input) {
        Ok(s) => s,
        Err(e) => return error_document("invariants", run, &e),
    };
    let sigma = s.sigma();
    let i100_value = i100(&s);
    let mut doc = document("invariants", run);
    doc["input"] = s.to_json();
    doc["family"] = json!(classify_family(&s).as_str());
    doc["degenerate"] = json!(s.is_degenerate());
    doc["sigma"] = json!(rat_strings(&sigma));
    doc["base_locus"] = json!(base_locus_forward(&s));
    doc["i100"] = json!(rat_to_string(&i100_value));
    doc["on_eckardt_hypersurface"] = json!(i100_value == rat_from_i64(0));
    match salmon_invariants(&s) {
        Ok(moduli) => {
            let [i8v, i16v, i24v, i32v, i40v] = moduli.coords();
            doc["invariants"] = json!({
                "I8": rat_to_string(i8v),
                "I16": rat_to_string(i16v),
                "I24": rat_to_string(i24v),
                "I32": rat_to_string(i32v),
                "I40": rat_to_string(i40v),
            });
            doc["moduli_point"] = moduli.to_json();
            doc["weighted_equal_q"] = json!(moduli.is_q());
        }
        Err(CoreError::BaseLocusPoint) => {
            doc["invariants"] = Value::Null;
            doc["moduli_point"] = Value::Null;
            doc["weighted_equal_q"] = Value::Null;
        }
        Err(e) => return error_document("invariants", run, &e),
    }
    doc["notes"] = json!([WEIGHT_40_READING_NOTE]);
    (doc, 0)
}

fn cmd_sing_verify(run: &RunConfig, sample_multiplicities: bool) -> (Value, u8) {
    let (certificate, ok) = verification_certificate(run.seed, sample_multiplicities);
    let mut doc = document("sing verify", run);
    if let (Value::Object(target), Value::Object(body)) = (&mut doc, certificate) {
        for (k, v) in body {
            target.entry(k).or_insert(v);
        }
    }
    if !ok {
        doc["first_failing"] = json!(first_failing_check(&doc));
    }
    (doc, if ok { 0 } else { EXIT_VERIFICATION })
}

/// Names the first failing entry of a certificate so a red run points
/// somewhere concrete.
fn first_failing_check(doc: &Value) -> String {
    if doc["oracle_set_equal"] == json!(false) {
        return "component oracle set differs from the claimed set".into();
    }
    if let Some(components) = doc["components"].as_array() {
        for c in components {
            if c["in_singular_locus"] == json!(false) {
                return format!("component {} not verified in singular locus", c["label"]);
            }
            if c["image_family_sampled_ok"] == json!(false) {
                return format!("component {} image family sampling failed", c["label"]);
            }
        }
    }
    if doc["smoothness_sampling"]["all_passed"] == json!(false) {
        return "smoothness sampling failed".into();
    }
    if doc["curve_endpoints"]["clebsch_on_both"] == json!(false) {
        return "curve endpoint limits failed".into();
    }
    if let Some(samples) = doc["multiplicity_samples"].as_array() {
        for sample in samples {
            if sample["oracle_agrees"] == json!(false) {
                return format!("multiplicity oracles disagree at {}", sample["label"]);
            }
        }
    }
    "unknown check".into()
}

fn cmd_eckardt(run: &RunConfig, input: &str, mode: EckardtMode) -> (Value, u8) {
    let s = match parse_sylvester(input) {
        Ok(s) => s,
        Err(e) => return error_document("eckardt", run, &e),
    };
    let family = classify_family(&s);
    let mut doc = document("eckardt", run);
    doc["input"] = s.to_json();
    doc["mode"] = json!(mode.as_str());
    doc["family"] = json!(family.as_str());
    doc["expected_count"] = json!(family.expected_eckardt_count());
    let mut ok = true;

    if mode == EckardtMode::Exact || mode == EckardtMode::Cross {
        let vertices = match eckardt_vertices(&s) {
            Ok(v) => v,
            Err(e) => return error_document("eckardt", run, &e),
        };
        let facts = match geometry_facts(&s) {
            Ok(f) => f,
            Err(e) => return error_document("eckardt", run, &e),
        };
        ok &= family.expected_eckardt_count() == Some(vertices.len());
        ok &= facts.iter().all(|f| f.as_expected());
        doc["exact"] = json!({
            "count": vertices.len(),
            "vertices": vertices.iter().map(|v| v.to_json()).collect::<Vec<_>>(),
            "geometry_facts": facts.iter().map(|f| f.to_json()).collect::<Vec<_>>(),
            "stabilizer": stabilizer(&s).to_json(),
        });
    }

    match mode {
        EckardtMode::Exact => {}
        EckardtMode::Numeric => {
            let cfg = run.tracker();
            let lines = match track_all(&to_cubic_p3(&s), &cfg) {
                Ok(l) => l,
                Err(e) => return error_document("eckardt", run, &e),
            };
            let clusters = match eckardt_numeric(&lines, run.tol) {
                Ok(c) => c,
                Err(e) => return error_document("eckardt", run, &e),
            };
            doc["numeric"] = json!({
                "line_count": lines.len(),
                "lines": lines.iter().map(|l| l.to_json()).collect::<Vec<_>>(),
                "cluster_count": clusters.len(),
                "clusters": clusters.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
                "tracker": cfg.to_json(),
            });
        }
        EckardtMode::Cross => {
            let cfg = run.tracker();
            let report = match cross_validate(&s, &cfg, run.tol) {
                Ok(r) => r,
                Err(e) => return error_document("eckardt", run, &e),
            };
            ok &= report.ok();
            doc["cross"] = report.to_json();
            doc["cross"]["tracker"] = cfg.to_json();
        }
    }

    doc["ok"] = json!(ok);
    (doc, if ok { 0 } else { EXIT_VERIFICATION })
}

fn cmd_moduli(run: &RunConfig, input: &str, roundtrip: bool, inverse: bool) -> (Value, u8) {
    let coeffs = match parse_input(input) {
        Ok(c) => c,
        Err(e) => return error_document("moduli", run, &e),
    };
    let mut doc = document("moduli", run);

    if inverse {
        doc["mode"] = json!("inverse");
        let point = match ModuliPoint::new(coeffs) {
            Ok(p) => p,
            Err(e) => return error_document("moduli", run, &e),
        };
        doc["input"] = point.to_json();
        let sigma_rep = match inverse_map(&point) {
            Ok(s) => s,
            Err(e) => return error_document("moduli", run, &e),
        };
        doc["sigma_representative"] = sigma_rep.to_json();
        doc["notes"] = json!([INVERSE_ORDER_NOTE]);
        return (doc, 0);
    }

    let s = match SylvesterPoint::new(coeffs) {
        Ok(s) => s,
        Err(e) => return error_document("moduli", run, &e),
    };
    doc["input"] = s.to_json();
    doc["mode"] = json!(if roundtrip { "roundtrip" } else { "forward" });
    let sigma = s.sigma();
    doc["diagnostics"] = json!({
        "sigma4": rat_to_string(&sigma[3]),
        "sigma5": rat_to_string(&sigma[4]),
        "base_locus": base_locus_forward(&s),
        "degenerate": s.is_degenerate(),
    });

    let forward = match salmon_invariants(&s) {
        Ok(m) => m,
        Err(e) => return error_document("moduli", run, &e),
    };
    doc["forward"] = forward.to_json();
    doc["forward_is_q"] = json!(forward.is_q());

    if !roundtrip {
        doc["notes"] = json!([WEIGHT_40_READING_NOTE]);
        return (doc, 0);
    }

    let recovered = match inverse_map(&forward) {
        Ok(r) => r,
        Err(e) => return error_document("moduli", run, &e),
    };
    let expected = s.sigma_point();
    let equal = recovered.weighted_equal(&expected);
    doc["sigma_point"] = expected.to_json();
    doc["recovered"] = recovered.to_json();
    doc["weighted_equal"] = json!(equal);
    doc["notes"] = json!([WEIGHT_40_READING_NOTE, INVERSE_ORDER_NOTE]);
    (doc, if equal { 0 } else { EXIT_VERIFICATION })
}
