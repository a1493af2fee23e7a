//! Command-line front end. [`run`] parses arguments, writes a human report
//! (or JSON with `--out`), and returns the process exit code.

pub mod formats;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Parser, Subcommand};
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::coverarith::{compose_abelian_plan, feasibility_report, pushforward_summands, riemann_hurwitz, Feasibility};
use crate::ellmodel::{
    decompose_ell, globally_generated, multmap_image_ell, pole_basis, EllError, FunctionElement, WeierstrassCurve,
};
use crate::exactfield::CycloField;
use crate::gradedgeom::{decompose_in_image, is_surjective, BaseVariety, GeomError};
use crate::matfac::{
    clifford_root, determinant_check, double_cover_root, ulrich_certificate, verify_root_seeded, MatfacError,
    MatrixRoot, UlrichOptions,
};
use crate::polyring::PolyRing;
use formats::{
    parse_root_and_decomposition, BaseJson, CertificateJson, CoverSpecJson, DecompositionJson, FormatError, RootJson,
    FORMAT_VERSION,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;
pub const EXIT_NOT_IN_IMAGE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "ulrich", version, about = "Matrix factorizations and Ulrich bundles on cyclic covers")]
struct Cli {
    /// Seed for all sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the JSON result here instead of printing a report.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dimension of the image of the m-fold multiplication map.
    CheckMultmap {
        #[arg(long)]
        base: String,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
    },
    /// Write a branch form as a sum of d-fold products.
    Decompose {
        #[arg(long)]
        base: String,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u32,
        #[arg(long, allow_hyphen_values = true)]
        branch: String,
    },
    /// Build a matrix root from a decomposition file.
    BuildRoot {
        #[arg(long)]
        cert: PathBuf,
        #[arg(long)]
        no_specialize: bool,
    },
    /// Check a matrix root (or a certificate containing one).
    VerifyRoot {
        path: PathBuf,
        #[arg(long)]
        det_samples: Option<usize>,
    },
    /// Full pipeline from a branch form to a verified root.
    Ulrich {
        #[arg(long)]
        base: String,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u32,
        #[arg(long, allow_hyphen_values = true)]
        branch: String,
        #[arg(long)]
        no_specialize: bool,
        /// Keep one term per monomial product instead of merging terms.
        #[arg(long)]
        no_compact: bool,
        #[arg(long, default_value_t = 5)]
        det_samples: usize,
    },
    /// Pushforward summands and rank plan of an abelian cover.
    CoverInfo {
        #[arg(long)]
        spec: String,
        /// Number of decomposition terms per stage.
        #[arg(long, value_delimiter = ',')]
        terms: Option<Vec<usize>>,
        #[arg(long)]
        no_specialize: bool,
    },
    /// Degree and h0 obstructions for a cyclic cover of a curve.
    #[command(group(ArgGroup::new("branch").required(true).args(["m_deg", "etale"])))]
    Feasibility {
        #[arg(long)]
        genus_base: u32,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        m_deg: Option<u32>,
        #[arg(long)]
        etale: bool,
        #[arg(long, default_value_t = 1)]
        rank: u32,
    },
    /// The degree-two bundle on an elliptic curve.
    EllipticDemo {
        #[arg(long = "A", allow_hyphen_values = true)]
        a: String,
        #[arg(long = "B", allow_hyphen_values = true)]
        b: String,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure::usage(e.to_string())
    }
}

impl From<GeomError> for Failure {
    fn from(e: GeomError) -> Self {
        let code = if e == GeomError::NotInImage { EXIT_NOT_IN_IMAGE } else { EXIT_USAGE };
        Failure { code, message: e.to_string() }
    }
}

impl From<MatfacError> for Failure {
    fn from(e: MatfacError) -> Self {
        let code = match &e {
            MatfacError::Geom(GeomError::NotInImage) => EXIT_NOT_IN_IMAGE,
            MatfacError::VerificationFailed(_) | MatfacError::AllSamplesSingular => EXIT_VERIFY,
            _ => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

struct Outcome {
    code: i32,
    text: String,
    json: serde_json::Value,
}

impl Outcome {
    fn ok(text: String, json: serde_json::Value) -> Self {
        Outcome { code: EXIT_OK, text, json }
    }
}

/// Runs the command line `args` (including the program name), writing
/// reports to `stdout` and errors to `stderr`.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK {
                stdout.write_all(rendered.as_bytes())
            } else {
                stderr.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(outcome) => {
            if let Some(path) = &cli.out {
                let mut doc = outcome.json;
                if let Some(obj) = doc.as_object_mut() {
                    obj.entry("format_version").or_insert(json!(FORMAT_VERSION));
                }
                let body = serde_json::to_string_pretty(&doc).expect("serializable") + "\n";
                if let Err(e) = std::fs::write(path, body) {
                    let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                    return EXIT_USAGE;
                }
                let _ = writeln!(stdout, "wrote {}", path.display());
            } else {
                let _ = stdout.write_all(outcome.text.as_bytes());
            }
            outcome.code
        }
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

/// [`run_with`] on the process's standard streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

// Inline JSON, or a path to a JSON file.
fn json_arg(arg: &str) -> Result<String, Failure> {
    if arg.trim_start().starts_with('{') {
        Ok(arg.to_string())
    } else {
        read_file(Path::new(arg))
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))
}

fn describe_base(v: &BaseVariety) -> String {
    match v.forms() {
        [] => format!("P^{}", v.ambient_dim()),
        forms => format!(
            "V({}) in P^{}",
            forms.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "),
            v.ambient_dim()
        ),
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::CheckMultmap { base, n, m } => check_multmap(base, *n, *m),
        Command::Decompose { base, n, d, branch } => decompose(base, *n, *d, branch),
        Command::BuildRoot { cert, no_specialize } => build_root(cert, !no_specialize, cli.seed),
        Command::VerifyRoot { path, det_samples } => verify(path, *det_samples, cli.seed),
        Command::Ulrich { base, n, d, branch, no_specialize, no_compact, det_samples } => {
            let opts = UlrichOptions {
                specialize: !no_specialize,
                compact: !no_compact,
                det_samples: *det_samples,
                seed: cli.seed,
            };
            ulrich(base, *n, *d, branch, &opts)
        }
        Command::CoverInfo { spec, terms, no_specialize } => cover_info(spec, terms.as_deref(), !no_specialize),
        Command::Feasibility { genus_base, d, m_deg, etale, rank } => {
            let branch_degree = if *etale { 0 } else { d * m_deg.unwrap_or(0) };
            feasibility(*genus_base, *d, branch_degree, *rank)
        }
        Command::EllipticDemo { a, b } => elliptic_demo(a, b),
    }
}

fn check_multmap(base: &str, n: u32, m: u32) -> Result<Outcome, Failure> {
    if m == 0 {
        return Err(Failure::usage("--m must be at least 1"));
    }
    let v = formats::parse_base(&json_arg(base)?)?;
    let r = is_surjective(&v, n, m);
    let text = format!(
        "base: {}\nmultiplication map: degree {n}, {m}-fold\nimage dimension: {}\ntarget dimension: {}\nsurjective: {}\n",
        describe_base(&v),
        r.image_dim,
        r.target_dim,
        r.surjective()
    );
    let json = json!({
        "base": BaseJson::from_variety(&v),
        "n": n,
        "m": m,
        "image_dim": r.image_dim,
        "target_dim": r.target_dim,
        "surjective": r.surjective(),
    });
    Ok(Outcome::ok(text, json))
}

fn parse_branch(v: &BaseVariety, d: u32, n: u32, branch: &str) -> Result<crate::polyring::MultiPoly, Failure> {
    let field = CycloField::new(d).map_err(|e| Failure::usage(e.to_string()))?;
    let ring = PolyRing::new(field, v.num_vars());
    ring.parse_homogeneous(branch, Some(d * n)).map_err(|e| Failure::usage(format!("branch: {e}")))
}

fn decompose(base: &str, n: u32, d: u32, branch: &str) -> Result<Outcome, Failure> {
    if d == 0 {
        return Err(Failure::usage("--d must be at least 1"));
    }
    let v = formats::parse_base(&json_arg(base)?)?;
    let s = parse_branch(&v, d, n, branch)?;
    let dec = decompose_in_image(&v, n, d, &s)?;
    let mut text = format!("base: {}\nbranch: {s}\nterms: {}\n", describe_base(&v), dec.terms.len());
    for term in &dec.terms {
        let factors: Vec<String> = term.iter().map(|a| format!("({a})")).collect();
        let _ = writeln!(text, "  {}", factors.join(" * "));
    }
    let json = serde_json::to_value(DecompositionJson::from_decomposition(&dec, Some(&v))).expect("serializable");
    Ok(Outcome::ok(text, json))
}

fn root_summary(root: &MatrixRoot) -> String {
    format!(
        "target: {}\nd: {}\nsize: {}\nterms: {}\nrank: {}\n",
        root.target,
        root.d,
        root.size(),
        root.term_count,
        root.ulrich_rank()
    )
}

fn build_root(path: &Path, specialize: bool, seed: u64) -> Result<Outcome, Failure> {
    let doc: DecompositionJson =
        serde_json::from_str(&read_file(path)?).map_err(|e| Failure::from(FormatError::from(e)))?;
    let (dec, _) = doc.to_decomposition()?;
    let root =
        if specialize && dec.d == 2 && dec.terms.len() == 1 { double_cover_root(&dec)? } else { clifford_root(&dec)? };
    let report = verify_root_seeded(&root, seed);
    let mut text = root_summary(&root);
    let _ = writeln!(text, "verified: {}", report.passed());
    let code = if report.passed() { EXIT_OK } else { EXIT_VERIFY };
    Ok(Outcome { code, text, json: serde_json::to_value(RootJson::from_root(&root)).expect("serializable") })
}

fn verify(path: &Path, det_samples: Option<usize>, seed: u64) -> Result<Outcome, Failure> {
    let (root, dec) = parse_root_and_decomposition(&read_file(path)?)?;
    let report = verify_root_seeded(&root, seed);
    let mut text = root_summary(&root);
    let mut code = report.exit_code();
    let dec_matches = dec.as_ref().map(|dec| decomposition_matches(dec, &root));
    if dec_matches == Some(false) {
        let _ = writeln!(text, "decomposition does not expand to the branch of the root");
        if code == EXIT_OK {
            code = EXIT_VERIFY;
        }
    }
    for line in &report.log {
        let _ = writeln!(text, "{line}");
    }
    for issue in &report.target_issues {
        let _ = writeln!(text, "target issue: {issue}");
    }
    for v in &report.shape_violations {
        let _ = writeln!(text, "shape violation at {}: {}", v.pos, v.entry);
    }
    let shown = report.identity_violations.len().min(20);
    for (i, j) in &report.identity_violations[..shown] {
        let _ = writeln!(text, "identity violation at product[{i}][{j}]");
    }
    if report.identity_violations.len() > shown {
        let _ = writeln!(text, "... {} more identity violations", report.identity_violations.len() - shown);
    }
    for s in &report.suspects {
        let _ = writeln!(text, "suspect entry {s}");
    }
    let mut det_json = serde_json::Value::Null;
    if let (Some(k), EXIT_OK) = (det_samples, code) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        match determinant_check(&root, k, &mut rng) {
            Ok(det) => {
                let ratio = det.ratio.as_ref().map(ToString::to_string);
                let _ = writeln!(
                    text,
                    "determinant: exponent {}, {} samples, ratio {}, symbolic {}",
                    det.exponent,
                    det.samples_used,
                    ratio.as_deref().unwrap_or("inconsistent"),
                    det.symbolic.map_or("skipped".to_string(), |b| b.to_string())
                );
                if !det.passed() {
                    code = EXIT_VERIFY;
                }
                det_json = json!({
                    "exponent": det.exponent,
                    "samples": det.samples_used,
                    "ratio": ratio,
                    "symbolic": det.symbolic,
                    "passed": det.passed(),
                });
            }
            Err(e) => {
                let _ = writeln!(text, "determinant: {e}");
                code = EXIT_VERIFY;
            }
        }
    }
    let _ = writeln!(text, "result: {}", if code == EXIT_OK { "pass" } else { "fail" });
    let pos = |p: &crate::matfac::EntryPos| json!({"factor": p.factor, "row": p.row, "col": p.col});
    let json = json!({
        "passed": code == EXIT_OK,
        "identity_violations": report.identity_violations.iter().map(|(i, j)| json!([i, j])).collect::<Vec<_>>(),
        "shape_violations": report.shape_violations.iter().map(|v| json!({"pos": pos(&v.pos), "entry": v.entry})).collect::<Vec<_>>(),
        "target_issues": report.target_issues,
        "suspects": report.suspects.iter().map(pos).collect::<Vec<_>>(),
        "degenerate": report.degenerate,
        "decomposition_matches": dec_matches,
        "determinant": det_json,
        "log": report.log,
    });
    Ok(Outcome { code, text, json })
}

fn decomposition_matches(dec: &crate::gradedgeom::ProductDecomposition, root: &MatrixRoot) -> bool {
    let Some(ring) = dec.ring() else {
        return false;
    };
    let branch = root.ring().t().pow(root.d) - root.target.clone();
    match dec.expand_in(ring).embed(root.ring().field()) {
        Ok(s) => dec.d == root.d && s.with_t(root.n) == branch,
        Err(_) => false,
    }
}

fn ulrich(base: &str, n: u32, d: u32, branch: &str, opts: &UlrichOptions) -> Result<Outcome, Failure> {
    if d == 0 {
        return Err(Failure::usage("--d must be at least 1"));
    }
    let v = formats::parse_base(&json_arg(base)?)?;
    let s = parse_branch(&v, d, n, branch)?;
    let cert = ulrich_certificate(&v, n, d, &s, opts)?;
    let mut text = format!("base: {}\nbranch: {s}\n", describe_base(&v));
    text.push_str(&root_summary(&cert.root));
    let _ = writeln!(text, "verified: {}", cert.verified);
    for line in &cert.log {
        let _ = writeln!(text, "  {line}");
    }
    let json = serde_json::to_value(CertificateJson::from_certificate(&cert)).expect("serializable");
    Ok(Outcome::ok(text, json))
}

fn cover_info(spec: &str, terms: Option<&[usize]>, specialize: bool) -> Result<Outcome, Failure> {
    let doc: CoverSpecJson = serde_json::from_str(&json_arg(spec)?).map_err(|e| Failure::from(FormatError::from(e)))?;
    let spec = doc.to_spec()?;
    let summands = pushforward_summands(&spec);
    let ds: Vec<String> = spec.stages().iter().map(|s| s.d.to_string()).collect();
    let mut text =
        format!("stages: ({})\ntotal degree: {}\nsummands: {}\n", ds.join(", "), spec.total_degree(), summands.len());
    let describe = |k: &Vec<i64>| {
        let parts: Vec<String> =
            k.iter().enumerate().filter(|(_, &e)| e != 0).map(|(i, e)| format!("M{}^{e}", i + 1)).collect();
        if parts.is_empty() {
            "O".to_string()
        } else {
            parts.join(" (x) ")
        }
    };
    for k in &summands {
        let _ = writeln!(text, "  {}", describe(k));
    }
    let mut json = json!({
        "stages": doc.stages,
        "total_degree": spec.total_degree(),
        "summands": summands,
    });
    if let Some(terms) = terms {
        let plan = compose_abelian_plan(&spec, terms, specialize).map_err(|e| Failure::usage(e.to_string()))?;
        for s in &plan.stages {
            let _ = writeln!(
                text,
                "stage {}: d = {}, {} terms, rank {}{}",
                s.index + 1,
                s.d,
                s.terms,
                s.rank,
                if s.specialized { " (double cover pair)" } else { "" }
            );
        }
        let _ = writeln!(text, "total rank: {}", plan.total_rank);
        json["plan"] = json!({
            "stages": plan.stages.iter().map(|s| json!({
                "d": s.d, "m_deg": s.m_deg, "terms": s.terms, "rank": s.rank, "specialized": s.specialized,
            })).collect::<Vec<_>>(),
            "total_rank": plan.total_rank,
        });
    }
    Ok(Outcome::ok(text, json))
}

fn feasibility(g_base: u32, d: u32, branch_degree: u32, rank: u32) -> Result<Outcome, Failure> {
    if rank == 0 {
        return Err(Failure::usage("--rank must be at least 1"));
    }
    let arith = riemann_hurwitz(g_base, d, branch_degree).map_err(|e| Failure::usage(e.to_string()))?;
    let rep = feasibility_report(&arith, rank);
    let text = rep.narrative.clone() + "\n";
    let json = json!({
        "g_base": arith.g_base,
        "d": arith.d,
        "branch_degree": arith.branch_degree,
        "g_top": arith.g_top,
        "ramification_degree": arith.ramification_degree,
        "rank": rep.rank,
        "forced_degree": rep.forced_degree,
        "required_h0": rep.required_h0,
        "h0_upper_bound": rep.h0_upper_bound,
        "verdict": rep.verdict.name(),
        "narrative": rep.narrative,
    });
    let code = if rep.verdict == Feasibility::Feasible { EXIT_OK } else { EXIT_NOT_IN_IMAGE };
    Ok(Outcome { code, text, json })
}

fn parse_rational(s: &str) -> Result<BigRational, Failure> {
    s.trim().parse::<BigRational>().map_err(|_| Failure::usage(format!("not a rational number: {s:?}")))
}

fn elliptic_demo(a: &str, b: &str) -> Result<Outcome, Failure> {
    let curve =
        WeierstrassCurve::new(parse_rational(a)?, parse_rational(b)?).map_err(|e| Failure::usage(e.to_string()))?;
    let show = |ms: &[crate::ellmodel::PoleMonomial]| ms.iter().map(ToString::to_string).collect::<Vec<_>>();
    let k2 = pole_basis(&curve, 2);
    let k4 = pole_basis(&curve, 4);
    let report = multmap_image_ell(&curve, 2, 2);
    let branch = FunctionElement::y();
    let verdict = match decompose_ell(&curve, 2, 2, &branch) {
        Err(EllError::NotInImage) => "NotInImage",
        Ok(_) => "InImage",
        Err(_) => "error",
    };
    let mut text = format!("curve: {curve}\n");
    let _ = writeln!(text, "H0(L) basis (pole order <= 2): {}", show(&k2).join(", "));
    let _ = writeln!(text, "H0(L^2) basis (pole order <= 4): {}", show(&k4).join(", "));
    let _ = writeln!(text, "L globally generated: {}", globally_generated(&curve, 2));
    let image: Vec<String> = report.image_basis.iter().map(ToString::to_string).collect();
    let _ = writeln!(
        text,
        "image of H0(L) (x) H0(L): span{{{}}}, dim {} of {}",
        image.join(", "),
        report.image_dim,
        report.target_dim()
    );
    let _ = writeln!(text, "cokernel: {}", show(&report.cokernel).join(", "));
    let _ = writeln!(text, "branch y: {verdict}");
    let json = json!({
        "A": curve.a().to_string(),
        "B": curve.b().to_string(),
        "basis_k2": show(&k2),
        "basis_k4": show(&k4),
        "globally_generated": globally_generated(&curve, 2),
        "image_basis": image,
        "image_dim": report.image_dim,
        "target_dim": report.target_dim(),
        "cokernel": show(&report.cokernel),
        "branch": branch.to_string(),
        "verdict": verdict,
    });
    Ok(Outcome::ok(text, json))
}
