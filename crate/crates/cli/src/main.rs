//! `waring`: exact Waring ranks and typical-rank witnesses for binary forms.
//!
//! Exit status: 0 success, 1 verification failure, 2 usage or parse error,
//! 3 rigor shortfall under `--exact-only`.

use std::collections::BTreeMap;
use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use waring_core::decompose::{decompose, describe_residual};
use waring_core::doc::{form_from_text, verify_document, CertificateDocument, FormDocument, Payload};
use waring_core::rank::{
    perturbation_stability_test, rational_witness, real_rank_search, EvidencePayload, RankCertificate, Rigor,
};
use waring_core::rat::{int, parse_rat};
use waring_core::verify::verify_decomposition;
use waring_core::witness::{admissible_pairs, atlas, witness, CertificateChain};
use waring_core::{BinaryForm, Error};

const SEED_ENV: &str = "WARING_SEED";

#[derive(Parser)]
#[command(name = "waring", version, about = "Exact real Waring ranks of binary forms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// A form given as a file (JSON form document, certificate document or
/// expression; `-` for stdin) or inline with `--expr`.
#[derive(Args)]
#[group(required = true, multiple = false)]
struct FormSource {
    input: Option<PathBuf>,
    #[arg(short = 'e', long)]
    expr: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Certified real Waring rank.
    Rank {
        #[command(flatten)]
        source: FormSource,
        /// Exit 3 unless every piece of evidence is EXACT.
        #[arg(long)]
        exact_only: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// A form of degree D and typical rank M with its certificate chain.
    Witness {
        #[arg(short = 'd')]
        degree: usize,
        #[arg(short = 'm')]
        rank: usize,
        #[arg(long, env = SEED_ENV, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replays a certificate document.
    Certify { input: PathBuf },
    /// Power-sum decomposition from a hyperbolic apolar form.
    Decompose {
        #[command(flatten)]
        source: FormSource,
        /// Hyperbolic form in the apolar ideal, as a file or an expression; defaults to the rank witness.
        #[arg(long)]
        apolar_witness: Option<String>,
        /// Residual target `2^-bits` when the witness has irrational roots.
        #[arg(long, default_value_t = 128)]
        precision: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Witnesses for every admissible (d, m) with d <= DMAX.
    Atlas {
        #[arg(long)]
        dmax: usize,
        #[arg(long, env = SEED_ENV, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Ranks of seeded rational perturbations.
    Perturb {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(short = 'e', long, conflicts_with = "input", required_unless_present = "input")]
        expr: Option<String>,
        /// Sup-norm bound on the coefficient change, e.g. `1/1000`.
        #[arg(long, default_value = "1/1000")]
        radius: String,
        #[arg(long, default_value_t = 25)]
        trials: usize,
        #[arg(long, env = SEED_ENV, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Verify(String),
    Usage(String),
    Rigor(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verify(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Rigor(_) => 3,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Verification(_) | Error::Internal(_) | Error::BudgetExhausted(_) => Failure::Verify(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn read_text(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Usage(format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

/// Form documents, certificate documents (their subject) and expressions.
fn form_from_input(text: &str) -> Result<BinaryForm, Failure> {
    if text.contains("\"schema_version\"") {
        let doc = CertificateDocument::from_json(text)?;
        return Ok(doc.subject.to_form()?);
    }
    Ok(form_from_text(text)?)
}

fn load_form(path: Option<&PathBuf>, expr: Option<&String>) -> Result<BinaryForm, Failure> {
    let f = match (path, expr) {
        (_, Some(e)) => form_from_text(e)?,
        (Some(p), None) => form_from_input(&read_text(p)?)?,
        (None, None) => return Err(Failure::Usage("no form given".into())),
    };
    if f.is_zero() {
        return Err(Error::ZeroForm.into());
    }
    Ok(f)
}

fn emit(doc: &CertificateDocument, out: Option<&PathBuf>) -> Outcome {
    let text = doc.to_json();
    match out {
        Some(p) => fs::write(p, text + "\n").map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn evidence_line(e: &waring_core::rank::LowerBoundEvidence) -> String {
    let how = match &e.payload {
        EvidencePayload::EmptyPiece => "empty piece".to_string(),
        EvidencePayload::SingleForm { .. } => "single non-hyperbolic form".to_string(),
        EvidencePayload::Pencil { .. } => "pencil without hyperbolic members".to_string(),
        EvidencePayload::Fact { fact, .. } => format!("fact {fact}"),
        EvidencePayload::Search { report } => format!("search, {} forms tested", report.tested.total()),
        EvidencePayload::Inherited { ancestor, .. } => format!("inherited from {ancestor}"),
    };
    format!("  degree {:>2}  dim {:>2}  {:<14} {how}", e.degree, e.dimension, e.rigor.to_string())
}

fn describe(cert: &RankCertificate) {
    eprintln!("form      {}", cert.form);
    eprintln!(
        "rank      {} ({}), generators in degrees {:?}",
        cert.rank, cert.rigor, cert.generator_degrees
    );
    eprintln!("witness   {} (EXACT)", cert.witness);
    for e in &cert.lower_bounds {
        eprintln!("{}", evidence_line(e));
    }
}

fn describe_chain(c: &CertificateChain) {
    eprintln!(
        "chain     base {:?} at degree {} (attempt {}), {} induction step(s)",
        c.base.kind,
        c.base.degree(),
        c.base.attempt,
        c.steps.len()
    );
    describe(&c.certificate);
    eprintln!("typical   {}", c.typicality.typical);
}

fn cmd_rank(source: FormSource, exact_only: bool, out: Option<PathBuf>) -> Outcome {
    let f = load_form(source.input.as_ref(), source.expr.as_ref())?;
    let cert = real_rank_search(&f)?;
    describe(&cert);
    let rigor = cert.rigor;
    emit(
        &CertificateDocument::seal(FormDocument::new(&f, None), Payload::Rank(cert)),
        out.as_ref(),
    )?;
    if exact_only && rigor != Rigor::Exact {
        return Err(Failure::Rigor(format!("certificate rigor is {rigor}, not EXACT")));
    }
    Ok(())
}

fn chain_document(c: CertificateChain) -> CertificateDocument {
    CertificateDocument::seal(FormDocument::new(c.form(), Some(c.seed)), Payload::Chain(Box::new(c)))
}

fn cmd_witness(d: usize, m: usize, seed: u64, out: Option<PathBuf>) -> Outcome {
    let chain = witness(d, m, seed)?;
    describe_chain(&chain);
    emit(&chain_document(chain), out.as_ref())
}

fn cmd_certify(input: PathBuf) -> Outcome {
    let doc = CertificateDocument::from_json(&read_text(&input)?)?;
    verify_document(&doc).map_err(|e| Failure::Verify(e.to_string()))?;
    println!("ok: {} certificate for {} verified", doc.payload.kind(), doc.subject.to_form()?);
    Ok(())
}

fn cmd_decompose(source: FormSource, apolar_witness: Option<String>, precision: u32, out: Option<PathBuf>) -> Outcome {
    let f = load_form(source.input.as_ref(), source.expr.as_ref())?;
    let s = match apolar_witness {
        // an existing path is read as a document, anything else as an expression
        Some(w) if Path::new(&w).is_file() => form_from_input(&read_text(Path::new(&w))?)?,
        Some(w) => form_from_text(&w)?,
        None => {
            // prefer a witness with rational roots: it decomposes exactly
            let cert = real_rank_search(&f)?;
            rational_witness(&f, cert.rank, 500)?.unwrap_or(cert.witness)
        }
    };
    let dec = decompose(&s, &f, precision)?;
    verify_decomposition(&f, &s, &dec)?;
    eprintln!("{}", dec.summary());
    eprintln!(
        "{} terms, {}, residual {}; re-summation checked",
        dec.terms.len(),
        if dec.exact { "exact" } else { "numeric" },
        describe_residual(&dec)
    );
    emit(
        &CertificateDocument::seal(
            FormDocument::new(&f, None),
            Payload::Decomposition { witness: s, decomposition: dec },
        ),
        out.as_ref(),
    )
}

fn cmd_atlas(dmax: usize, seed: u64, out: PathBuf) -> Outcome {
    if admissible_pairs(dmax).is_empty() {
        return Err(Failure::Usage(format!("no admissible pairs with d <= {dmax}")));
    }
    fs::create_dir_all(&out).map_err(|e| Failure::Usage(format!("{}: {e}", out.display())))?;
    let chains = atlas(dmax, seed)?;
    let mut by_rigor: BTreeMap<String, usize> = BTreeMap::new();
    let mut rows = Vec::new();
    println!("{:>3} {:>3}  {:<14} {:<13} {:>5}  file", "d", "m", "rigor", "base", "steps");
    for c in chains {
        let name = format!("d{:02}_m{:02}.json", c.degree, c.rank);
        let base = format!("{:?}", c.base.kind);
        println!(
            "{:>3} {:>3}  {:<14} {:<13} {:>5}  {name}",
            c.degree,
            c.rank,
            c.rigor().to_string(),
            base,
            c.steps.len()
        );
        *by_rigor.entry(c.rigor().to_string()).or_insert(0) += 1;
        rows.push(serde_json::json!({
            "degree": c.degree,
            "rank": c.rank,
            "rigor": c.rigor(),
            "base": c.base.kind,
            "steps": c.steps.len(),
            "file": name,
        }));
        emit(&chain_document(c), Some(&out.join(&name)))?;
    }
    let counts = by_rigor
        .iter()
        .map(|(k, v)| format!("{k} {v}"))
        .collect::<Vec<_>>()
        .join(", ");
    println!("{} certificates: {counts}", rows.len());
    let summary = serde_json::json!({ "dmax": dmax, "seed": seed, "by_rigor": by_rigor, "entries": rows });
    let path = out.join("summary.json");
    fs::write(&path, format!("{summary:#}\n")).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn cmd_perturb(
    input: Option<PathBuf>,
    expr: Option<String>,
    radius: String,
    trials: usize,
    seed: u64,
    out: Option<PathBuf>,
) -> Outcome {
    let f = load_form(input.as_ref(), expr.as_ref())?;
    let radius = parse_rat(&radius)?;
    if radius < int(0) {
        return Err(Failure::Usage("radius must be nonnegative".into()));
    }
    let report = perturbation_stability_test(&f, &radius, trials, seed)?;
    println!("{}", report.summary());
    let doc = CertificateDocument::seal(FormDocument::new(&f, Some(seed)), Payload::Perturbation(report));
    match out {
        Some(p) => emit(&doc, Some(&p)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Rank { source, exact_only, out } => cmd_rank(source, exact_only, out),
        Command::Witness { degree, rank, seed, out } => cmd_witness(degree, rank, seed, out),
        Command::Certify { input } => cmd_certify(input),
        Command::Decompose {
            source,
            apolar_witness,
            precision,
            out,
        } => cmd_decompose(source, apolar_witness, precision, out),
        Command::Atlas { dmax, seed, out } => cmd_atlas(dmax, seed, out),
        Command::Perturb {
            input,
            expr,
            radius,
            trials,
            seed,
            out,
        } => cmd_perturb(input, expr, radius, trials, seed, out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (Failure::Verify(m) | Failure::Usage(m) | Failure::Rigor(m)) = &f;
            eprintln!("error: {m}");
            ExitCode::from(f.code())
        }
    }
}
