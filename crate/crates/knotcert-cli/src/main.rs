//! knotcert: exact knot invariants and certificate checking from the
//! command line.
//!
//! Every command prints one machine-readable JSON object on stdout,
//! `{"status": ..., "payload": ...}`, with human diagnostics on stderr.
//! Exit codes: 0 when the status is ok, 1 for a verification reject, 2 for
//! any error. Identical inputs and flags produce byte-identical stdout.

use clap::{Parser, Subcommand};
use knotcert::diagram::KnotDiagram;
use knotcert::homology::{self, CocycleCheck};
use knotcert::invariants;
use knotcert::normal::{self, NormalVector};
use knotcert::repcert::{
    self, PolySystemJson, Presentation, PresentationCertificate, UncenteredCertificate, Verdict,
};
use knotcert::torus::identify_torus;
use knotcert::triangulation::Triangulation;
use serde::Serialize;
use serde_json::{json, Value};
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "knotcert",
    about = "Exact-arithmetic knot invariants, torus-knot identification, and certificates",
    version
)]
struct Cli {
    /// Suppress human diagnostics on stderr
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Alexander polynomial, signature, and determinant of a diagram
    Invariants { diagram: PathBuf },
    /// The unique torus knot matching the diagram's invariants, if any
    Identify { diagram: PathBuf },
    /// Verify a certificate
    Verify {
        #[command(subcommand)]
        kind: VerifyKind,
    },
    /// Search for an uncentered certificate over small primes
    Search {
        diagram: PathBuf,
        /// Largest prime modulus to try
        #[arg(long, default_value_t = 100)]
        max_prime: u64,
        /// Worker threads for the search (default: KNOTCERT_THREADS or all cores)
        #[arg(long)]
        jobs: Option<usize>,
        /// Also write the found certificate to a file
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Emit the polynomial system whose mod-p solutions are certificates
    EmitSystem {
        diagram: PathBuf,
        /// Peripheral exponent m with |m| < 3n
        #[arg(long, allow_hyphen_values = true)]
        exponent: i64,
    },
    /// Full normal-coordinate report for a vector on a triangulation
    NormalCheck {
        triangulation: PathBuf,
        vector: PathBuf,
    },
    /// Generate a primitive bounded 1-cocycle on a triangulation
    Cocycle { triangulation: PathBuf },
}

#[derive(Subcommand)]
enum VerifyKind {
    /// Uncentered certificate against a diagram
    Uncentered {
        diagram: PathBuf,
        certificate: PathBuf,
    },
    /// Nonabelian-image certificate against a finite presentation
    Nonabelian {
        presentation: PathBuf,
        certificate: PathBuf,
    },
    /// Normal-coordinate vector against a triangulation
    Normal {
        triangulation: PathBuf,
        vector: PathBuf,
    },
    /// 1-cocycle primitivity and norm bound
    Cocycle {
        triangulation: PathBuf,
        cocycle: PathBuf,
    },
}

enum Outcome {
    Ok(Value),
    Reject(Value),
    Error(String),
}

#[derive(Serialize)]
struct Output<'a> {
    status: &'a str,
    payload: &'a Value,
}

fn main() {
    let cli = Cli::parse();
    let quiet = cli.quiet;
    let outcome = run(cli.command, quiet);
    let (status, payload, code) = match outcome {
        Outcome::Ok(p) => ("ok", p, 0),
        Outcome::Reject(p) => ("reject", p, 1),
        Outcome::Error(message) => ("error", json!({ "message": message }), 2),
    };
    let line = serde_json::to_string(&Output {
        status,
        payload: &payload,
    })
    .expect("output is serializable");
    use std::io::Write;
    let _ = writeln!(std::io::stdout(), "{}", line); // EPIPE is fine
    std::process::exit(code);
}

fn note(quiet: bool, message: &str) {
    if !quiet {
        eprintln!("{}", message);
    }
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {}", path.display(), e))
}

fn load_diagram(path: &Path) -> Result<KnotDiagram, String> {
    KnotDiagram::parse(&read(path)?).map_err(|e| e.to_string())
}

fn load_triangulation(path: &Path) -> Result<Triangulation, String> {
    Triangulation::from_json(&read(path)?).map_err(|e| e.to_string())
}

fn run(command: Command, quiet: bool) -> Outcome {
    match run_inner(command, quiet) {
        Ok(outcome) => outcome,
        Err(message) => Outcome::Error(message),
    }
}

fn run_inner(command: Command, quiet: bool) -> Result<Outcome, String> {
    match command {
        Command::Invariants { diagram } => {
            let d = load_diagram(&diagram)?;
            let delta = invariants::alexander(&d).map_err(|e| e.to_string())?;
            let sigma = invariants::signature(&d).map_err(|e| e.to_string())?;
            let det = delta.eval_neg_one().magnitude().to_string();
            note(
                quiet,
                &format!("{} crossings, signature {}", d.crossing_count(), sigma),
            );
            Ok(Outcome::Ok(json!({
                "alexander": serde_json::to_value(&delta).unwrap(),
                "signature": sigma,
                "determinant": det,
            })))
        }
        Command::Identify { diagram } => {
            let d = load_diagram(&diagram)?;
            let torus = identify(&d)?;
            Ok(Outcome::Ok(
                json!({ "torus": torus.map(|t| vec![t.r, t.s]) }),
            ))
        }
        Command::Verify { kind } => run_verify(kind, quiet),
        Command::Search {
            diagram,
            max_prime,
            jobs,
            output,
        } => {
            let d = load_diagram(&diagram)?;
            let threads = jobs.or_else(|| {
                std::env::var("KNOTCERT_THREADS")
                    .ok()
                    .and_then(|v| v.parse().ok())
            });
            let search = || repcert::search_uncentered(&d, max_prime);
            let found = match threads {
                Some(n) => rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| e.to_string())?
                    .install(search),
                None => search(),
            }
            .map_err(|e| e.to_string())?;
            match &found {
                Some(cert) if cert.torus.is_none() => note(
                    quiet,
                    "diagram matches no torus knot; the empty certificate suffices",
                ),
                Some(cert) => note(
                    quiet,
                    &format!("certificate found with p = {}", cert.p.as_ref().unwrap()),
                ),
                None => note(
                    quiet,
                    &format!(
                        "exhausted all odd primes <= {} without finding a certificate",
                        max_prime
                    ),
                ),
            }
            let cert_json = found
                .as_ref()
                .map(|c| serde_json::to_value(c).unwrap())
                .unwrap_or(Value::Null);
            if let (Some(path), Some(cert)) = (&output, &found) {
                std::fs::write(path, serde_json::to_string(cert).unwrap())
                    .map_err(|e| format!("cannot write {}: {}", path.display(), e))?;
            }
            Ok(Outcome::Ok(json!({
                "certificate": cert_json,
                "max_prime": max_prime,
            })))
        }
        Command::EmitSystem { diagram, exponent } => {
            let d = load_diagram(&diagram)?;
            let system =
                repcert::emit_variety_system(&d, exponent).map_err(|e| e.to_string())?;
            note(
                quiet,
                &format!(
                    "{} variables, {} polynomials, max degree {}",
                    system.variables,
                    system.polynomials.len(),
                    system.max_degree()
                ),
            );
            Ok(Outcome::Ok(
                serde_json::to_value(PolySystemJson::from(&system)).unwrap(),
            ))
        }
        Command::NormalCheck {
            triangulation,
            vector,
        } => {
            let tri = load_triangulation(&triangulation)?;
            let v = NormalVector::from_json(&read(&vector)?).map_err(|e| e.to_string())?;
            let report = normal::validate_normal(&tri, &v).map_err(|e| e.to_string())?;
            let violations: Vec<String> =
                report.violations.iter().map(|x| format!("{:?}", x)).collect();
            let mut payload = json!({
                "valid": report.valid(),
                "violations": violations,
                "not_checked": report.not_checked,
                "weight": normal::weight(&v).to_string(),
                "coordinate_bounds_ok": normal::check_bounds(&tri, &v),
            });
            if report.valid() {
                let chi = normal::euler_char(&tri, &v).map_err(|e| e.to_string())?;
                payload["euler_characteristic"] = json!(chi.to_string());
                payload["edge_weight"] =
                    json!(normal::edge_weight(&tri, &v).map_err(|e| e.to_string())?.to_string());
                if let Ok(curves) = normal::boundary_curve(&tri, &v) {
                    payload["boundary_curve"] = json!(curves[0]
                        .counts
                        .iter()
                        .map(|c| c.to_string())
                        .collect::<Vec<_>>());
                }
                Ok(Outcome::Ok(payload))
            } else {
                note(quiet, &format!("{} violations", report.violations.len()));
                Ok(Outcome::Reject(payload))
            }
        }
        Command::Cocycle { triangulation } => {
            let tri = load_triangulation(&triangulation)?;
            let phi = homology::generating_cocycle(&tri).map_err(|e| e.to_string())?;
            note(quiet, &format!("cocycle over {} edge classes", phi.len()));
            Ok(Outcome::Ok(json!({
                "phi": phi.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            })))
        }
    }
}

fn identify(d: &KnotDiagram) -> Result<Option<knotcert::TorusParams>, String> {
    if d.is_small_unknot() {
        return Ok(None);
    }
    let delta = invariants::alexander(d).map_err(|e| e.to_string())?;
    let sigma = invariants::signature(d).map_err(|e| e.to_string())?;
    Ok(identify_torus(&delta, sigma, d.crossing_count()))
}

fn run_verify(kind: VerifyKind, quiet: bool) -> Result<Outcome, String> {
    match kind {
        VerifyKind::Uncentered {
            diagram,
            certificate,
        } => {
            let d = load_diagram(&diagram)?;
            let cert: UncenteredCertificate =
                serde_json::from_str(&read(&certificate)?).map_err(|e| e.to_string())?;
            let verdict = repcert::verify_uncentered(&d, &cert).map_err(|e| e.to_string())?;
            Ok(verdict_outcome(verdict, "uncentered", quiet))
        }
        VerifyKind::Nonabelian {
            presentation,
            certificate,
        } => {
            let pres: Presentation =
                serde_json::from_str(&read(&presentation)?).map_err(|e| e.to_string())?;
            let cert: PresentationCertificate =
                serde_json::from_str(&read(&certificate)?).map_err(|e| e.to_string())?;
            let verdict = repcert::verify_nonabelian(&pres, &cert).map_err(|e| e.to_string())?;
            Ok(verdict_outcome(verdict, "nonabelian", quiet))
        }
        VerifyKind::Normal {
            triangulation,
            vector,
        } => {
            let tri = load_triangulation(&triangulation)?;
            let v = NormalVector::from_json(&read(&vector)?).map_err(|e| e.to_string())?;
            let report = normal::validate_normal(&tri, &v).map_err(|e| e.to_string())?;
            if report.valid() {
                Ok(Outcome::Ok(json!({
                    "accepted": true,
                    "kind": "normal",
                    "not_checked": report.not_checked,
                })))
            } else {
                Ok(Outcome::Reject(json!({
                    "step": 1,
                    "reason": format!("{} normal-surface conditions violated", report.violations.len()),
                    "violations": report.violations.iter().map(|x| format!("{:?}", x)).collect::<Vec<_>>(),
                })))
            }
        }
        VerifyKind::Cocycle {
            triangulation,
            cocycle,
        } => {
            let tri = load_triangulation(&triangulation)?;
            let phi =
                homology::cocycle_from_json(&read(&cocycle)?).map_err(|e| e.to_string())?;
            let check = homology::verify_cocycle(&tri, &phi).map_err(|e| e.to_string())?;
            if check.verified() {
                Ok(Outcome::Ok(json!({ "accepted": true, "kind": "cocycle" })))
            } else {
                let CocycleCheck {
                    is_cocycle,
                    class_gcd,
                    primitive,
                    norm_within_bound,
                } = check;
                let (step, reason) = if !is_cocycle {
                    (1, "delta^1 phi != 0".to_string())
                } else if !primitive {
                    (2, format!("class gcd {} != 1", class_gcd))
                } else {
                    (3, "L1 norm exceeds the certificate bound".to_string())
                };
                let _ = norm_within_bound;
                Ok(Outcome::Reject(json!({ "step": step, "reason": reason })))
            }
        }
    }
}

fn verdict_outcome(verdict: Verdict, kind: &str, quiet: bool) -> Outcome {
    match verdict {
        Verdict::Accept => {
            note(quiet, "certificate accepted");
            Outcome::Ok(json!({ "accepted": true, "kind": kind }))
        }
        Verdict::Reject { step, reason } => {
            note(quiet, &format!("rejected at step {}: {}", step, reason));
            Outcome::Reject(json!({ "step": step, "reason": reason }))
        }
    }
}
