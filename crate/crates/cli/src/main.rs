mod render;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use oddtorsion::classify::audit::{audit_instance, AuditReport};
use oddtorsion::classify::matrix::{render_markdown, rule_hits};
use oddtorsion::classify::{global_rep, mult_type, ClassifyError};
use oddtorsion::families::{self, build_curve, validate_params, FamilyError, TorsionStructure};
use oddtorsion::numtheory::{self, NumTheoryError};
use oddtorsion::tate::{self, TateError};
use oddtorsion::weierstrass::WeierstrassModel;

const EXIT_INPUT: u8 = 2;
const EXIT_DISCREPANCY: u8 = 3;
const EXIT_INCOMPLETE: u8 = 4;

#[derive(Parser)]
#[command(
    name = "oddtorsion",
    version,
    about = "Reduction types and local representations for the odd-torsion families"
)]
#[command(allow_negative_numbers = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Classify one family member at every bad prime.
    Classify {
        /// C3, C3_0, C5, C6, C7, C9, C10, C12 or C2xC6.
        #[arg(long)]
        torsion: String,
        #[arg(long, allow_negative_numbers = true)]
        a: BigInt,
        /// Ignored for C3_0.
        #[arg(long, default_value = "0", allow_negative_numbers = true)]
        b: BigInt,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the tables with Tate's algorithm over a parameter box.
    Verify {
        #[arg(long, default_value_t = 20)]
        bound: i64,
        /// Repeatable; all families when absent.
        #[arg(long)]
        torsion: Vec<String>,
        /// Worker threads; 0 uses every core.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run Tate's algorithm on an integral Weierstrass model.
    Tate {
        #[arg(long, default_value = "0", allow_negative_numbers = true)]
        a1: BigInt,
        #[arg(long, default_value = "0", allow_negative_numbers = true)]
        a2: BigInt,
        #[arg(long, default_value = "0", allow_negative_numbers = true)]
        a3: BigInt,
        #[arg(long, default_value = "0", allow_negative_numbers = true)]
        a4: BigInt,
        #[arg(long, default_value = "0", allow_negative_numbers = true)]
        a6: BigInt,
        /// Only this prime; every bad prime when absent.
        #[arg(long)]
        p: Option<BigInt>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the rule traceability matrix as markdown.
    Matrix {
        #[arg(long, default_value_t = 20)]
        bound: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

fn incomplete(e: &NumTheoryError) -> bool {
    matches!(e, NumTheoryError::IncompleteFactorization { .. })
}

impl From<FamilyError> for Failure {
    fn from(e: FamilyError) -> Self {
        match &e {
            FamilyError::NumTheory(nt) if incomplete(nt) => Failure::new(EXIT_INCOMPLETE, e.to_string()),
            FamilyError::Internal(_) => Failure::new(EXIT_DISCREPANCY, e.to_string()),
            _ => Failure::new(EXIT_INPUT, e.to_string()),
        }
    }
}

impl From<ClassifyError> for Failure {
    fn from(e: ClassifyError) -> Self {
        match e {
            ClassifyError::Family(f) => f.into(),
            ClassifyError::NumTheory(ref nt) if incomplete(nt) => Failure::new(EXIT_INCOMPLETE, e.to_string()),
            _ => Failure::new(EXIT_DISCREPANCY, e.to_string()),
        }
    }
}

impl From<TateError> for Failure {
    fn from(e: TateError) -> Self {
        match &e {
            TateError::NumTheory(nt) if incomplete(nt) => Failure::new(EXIT_INCOMPLETE, e.to_string()),
            TateError::Singular | TateError::NotIntegral(_) => Failure::new(EXIT_INPUT, e.to_string()),
            _ => Failure::new(EXIT_DISCREPANCY, e.to_string()),
        }
    }
}

fn parse_torsion(s: &str) -> Result<TorsionStructure, Failure> {
    s.parse::<TorsionStructure>()
        .map_err(|e| Failure::new(EXIT_INPUT, e.to_string()))
}

fn emit(body: String, out: Option<&PathBuf>) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, body).map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn json_body(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn cmd_classify(torsion: &str, a: &BigInt, b: &BigInt, format: Format, out: Option<&PathBuf>) -> Result<(), Failure> {
    let t = parse_torsion(torsion)?;
    let b = if t.is_single_parameter() {
        BigInt::zero()
    } else {
        b.clone()
    };
    let params = validate_params(t, a, &b)?;
    let md = families::minimal_discriminant(&params)?;
    let report = global_rep(&params)?;

    // Cross-check against the oracle before emitting anything.
    let curve = build_curve(&params);
    let oracle = report
        .locals
        .iter()
        .map(|l| tate::tate(&curve, &l.p))
        .collect::<Result<Vec<_>, _>>()?;
    let oracle_n = tate::global_conductor(&curve)?;
    if oracle_n != report.conductor {
        return Err(Failure::new(
            EXIT_DISCREPANCY,
            format!(
                "discrepancy: table conductor {} but the oracle gives {oracle_n}",
                report.conductor
            ),
        ));
    }
    let mut mults = Vec::new();
    for (l, d) in report.locals.iter().zip(&oracle) {
        if l.f_p != d.f_p {
            return Err(Failure::new(
                EXIT_DISCREPANCY,
                format!("discrepancy at p = {}: table f = {}, oracle f = {}", l.p, l.f_p, d.f_p),
            ));
        }
        mults.push(if d.kodaira.is_multiplicative() {
            Some(mult_type(&params, &l.p)?)
        } else {
            None
        });
    }
    let views: Vec<render::LocalView<'_>> = report
        .locals
        .iter()
        .zip(&oracle)
        .zip(&mults)
        .map(|((rep, oracle), mult)| render::LocalView {
            rep,
            oracle,
            mult: mult.as_ref(),
        })
        .collect();
    let body = match format {
        Format::Json => json_body(&render::classify(&report, &md, &views)),
        Format::Text => render::classify_text(&report, &md, &views),
    };
    emit(body, out)
}

fn cmd_verify(
    bound: i64,
    torsion: &[String],
    jobs: usize,
    format: Format,
    out: Option<&PathBuf>,
) -> Result<(), Failure> {
    if bound < 1 {
        return Err(Failure::new(EXIT_INPUT, "bound must be at least 1"));
    }
    let selected = if torsion.is_empty() {
        TorsionStructure::ALL.to_vec()
    } else {
        let mut ts = torsion
            .iter()
            .map(|s| parse_torsion(s))
            .collect::<Result<Vec<_>, _>>()?;
        ts.sort();
        ts.dedup();
        ts
    };
    let instances: Vec<_> = selected.iter().flat_map(|&t| families::sweep(t, bound)).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Failure::new(EXIT_INPUT, e.to_string()))?;
    // par_iter().map().collect() keeps input order, so the report is deterministic.
    let audits: Vec<_> = pool.install(|| instances.par_iter().map(audit_instance).collect());
    let mut report = AuditReport {
        bound,
        ..Default::default()
    };
    for (params, audit) in instances.iter().zip(audits) {
        report.absorb(params, audit);
    }
    let tags: Vec<&str> = selected.iter().map(|t| t.tag()).collect();
    let body = match format {
        Format::Json => json_body(&render::verify(&report, &tags)),
        Format::Text => render::verify_text(&report, &tags),
    };
    emit(body, out)?;
    if !report.discrepancies.is_empty() {
        return Err(Failure::new(
            EXIT_DISCREPANCY,
            format!("{} discrepancies", report.discrepancies.len()),
        ));
    }
    if !report.incomplete.is_empty() {
        return Err(Failure::new(
            EXIT_INCOMPLETE,
            format!("{} instances with incomplete factorization", report.incomplete.len()),
        ));
    }
    Ok(())
}

fn cmd_tate(coeffs: [BigInt; 5], p: Option<&BigInt>, format: Format, out: Option<&PathBuf>) -> Result<(), Failure> {
    let m = WeierstrassModel::from_integers(coeffs.clone());
    if m.is_singular() {
        return Err(Failure::new(EXIT_INPUT, "singular model: the discriminant is zero"));
    }
    let disc = m.discriminant().to_integer();
    let (locals, conductor) = match p {
        Some(p) => {
            if p < &BigInt::from(2) || !numtheory::is_probable_prime(p) {
                return Err(Failure::new(EXIT_INPUT, format!("{p} is not a prime")));
            }
            (vec![tate::tate(&m, p)?], None)
        }
        None => (tate::all_local_data(&m)?, Some(tate::global_conductor(&m)?)),
    };
    let body = match format {
        Format::Json => json_body(&render::tate(&coeffs, &disc, conductor.as_ref(), &locals)),
        Format::Text => render::tate_text(&coeffs, &disc, conductor.as_ref(), &locals),
    };
    emit(body, out)
}

fn cmd_matrix(bound: i64, out: Option<&PathBuf>) -> Result<(), Failure> {
    if bound < 1 {
        return Err(Failure::new(EXIT_INPUT, "bound must be at least 1"));
    }
    let hits = rule_hits(&TorsionStructure::ALL, bound);
    emit(render_markdown(&hits), out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Classify {
            torsion,
            a,
            b,
            format,
            out,
        } => cmd_classify(torsion, a, b, *format, out.as_ref()),
        Command::Verify {
            bound,
            torsion,
            jobs,
            format,
            out,
        } => cmd_verify(*bound, torsion, *jobs, *format, out.as_ref()),
        Command::Tate {
            a1,
            a2,
            a3,
            a4,
            a6,
            p,
            format,
            out,
        } => cmd_tate(
            [a1.clone(), a2.clone(), a3.clone(), a4.clone(), a6.clone()],
            p.as_ref(),
            *format,
            out.as_ref(),
        ),
        Command::Matrix { bound, out } => cmd_matrix(*bound, out.as_ref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
