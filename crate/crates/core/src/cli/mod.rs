//! The `monadkit` command-line front end.
//!
//! Exit status: 0 when the verdict is positive, 1 when it is negative or
//! inconclusive (the report is still written), 2 on input errors.

pub mod docs;
pub mod instance;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::certify::{SimplicityVerdict, StabilityVerdict, TwistConstraint};
use crate::cohomology::{h_sum, LineBundleSum};
use crate::error::{Error, Result};
use crate::monad::MonadVerdict;
use crate::space::{MultiDegree, ProductSpace};
use docs::{build_doc, recheck, simplicity_doc, stability_doc, verify_doc, Document};
pub use instance::{CustomMonad, Family, InstanceSpec};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "MONADKIT_OUT_DIR";

#[derive(Parser, Debug)]
#[command(name = "monadkit", version, about = "Exact construction and certification of monads on products of projective spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a monad and print its terms, ranks and existence conditions.
    Build(InstanceArgs),
    /// Verify g.f = 0 and maximal rank of both maps.
    Verify(InstanceArgs),
    /// Certify stability of the kernel bundle T = ker g.
    CertifyStability(InstanceArgs),
    /// Certify simplicity of the cohomology bundle E.
    CertifySimplicity(InstanceArgs),
    /// Cohomology dimensions of a sum of line bundles.
    Cohom(CohomArgs),
    /// Run the oracle suites.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Recompute a stored document and check every recorded sub-result.
    Recheck { file: PathBuf },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FamilyArg {
    Section3,
    Section4,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ConstraintArg {
    PerGroupNegative,
    TotalNegative,
}

#[derive(Args, Debug)]
struct InstanceArgs {
    /// Instance file (JSON). Family flags are ignored when given.
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    /// section3: copies of P^1, P^3, P^5, ...
    #[arg(long, value_delimiter = ',')]
    copies: Option<Vec<u32>>,
    /// section3: explicit odd factor dimensions.
    #[arg(long, value_delimiter = ',')]
    factors: Option<Vec<usize>>,
    /// Rank k of the outer terms.
    #[arg(long)]
    k: Option<usize>,
    /// section4: dimension of the first pair of factors.
    #[arg(long)]
    n: Option<usize>,
    /// section4: dimension of the second pair.
    #[arg(long)]
    m: Option<usize>,
    /// section4: dimension of the third pair.
    #[arg(long)]
    l: Option<usize>,
    /// section4: twist on the first pair.
    #[arg(long)]
    alpha: Option<u32>,
    /// section4: twist on the second pair.
    #[arg(long)]
    beta: Option<u32>,
    /// section4: twist on the third pair.
    #[arg(long)]
    gamma: Option<u32>,
    /// Polarization degree, e.g. 1,1; defaults depend on the family.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    polarization: Option<Vec<i64>>,
    #[arg(long, value_enum)]
    constraint: Option<ConstraintArg>,
    /// Prime for the randomized rank evidence.
    #[arg(long)]
    prime: Option<u64>,
    /// Number of random points.
    #[arg(long)]
    trials: Option<usize>,
    /// Seed for the random points (default 0).
    #[arg(long)]
    seed: Option<u64>,
    /// Directory for the JSON document.
    #[arg(long, env = OUT_DIR_ENV)]
    out: Option<PathBuf>,
    /// Print the JSON document instead of the summary.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct CohomArgs {
    /// Factor dimensions, e.g. 1,3.
    #[arg(long, value_delimiter = ',')]
    space: Vec<usize>,
    /// A summand degree, e.g. -2,0; repeat for a direct sum.
    #[arg(long, allow_hyphen_values = true, required = true)]
    degree: Vec<String>,
    /// Only this cohomological degree.
    #[arg(long)]
    p: Option<usize>,
}

fn need<T>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| Error::InvalidInput(format!("--{flag} is required")))
}

fn parse_degree(s: &str) -> Result<MultiDegree> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<i64>()
                .map_err(|_| Error::Parse(format!("bad degree component {p:?} in {s:?}")))
        })
        .collect::<Result<Vec<_>>>()
        .map(MultiDegree::new)
}

impl InstanceArgs {
    fn instance(&self) -> Result<InstanceSpec> {
        let mut inst = match (&self.spec, self.family) {
            (Some(path), _) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
                InstanceSpec::from_json(&text)
                    .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?
            }
            (None, Some(FamilyArg::Section3)) => InstanceSpec::new(Family::Section3 {
                copies: self.copies.clone(),
                factors: self.factors.clone(),
                k: need(self.k, "k")?,
            }),
            (None, Some(FamilyArg::Section4)) => InstanceSpec::section4(
                need(self.n, "n")?,
                need(self.m, "m")?,
                need(self.l, "l")?,
                need(self.alpha, "alpha")?,
                need(self.beta, "beta")?,
                need(self.gamma, "gamma")?,
                need(self.k, "k")?,
            ),
            (None, None) => return Err(Error::InvalidInput("give --spec FILE or --family".into())),
        };
        if let Some(p) = &self.polarization {
            inst.polarization = Some(MultiDegree::new(p.clone()));
        }
        if let Some(c) = self.constraint {
            inst.constraint = Some(match c {
                ConstraintArg::PerGroupNegative => TwistConstraint::PerGroupNegative,
                ConstraintArg::TotalNegative => TwistConstraint::TotalNegative,
            });
        }
        if let Some(p) = self.prime {
            inst.prime = p;
        }
        if let Some(t) = self.trials {
            inst.trials = t;
        }
        if let Some(s) = self.seed {
            inst.seed = s;
        }
        Ok(inst)
    }
}

/// A short human-readable account of a document.
/// The serialized name of a unit enum variant.
fn tag<T: serde::Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(serde_json::Value::String(s)) => s,
        _ => String::new(),
    }
}

pub fn summarize(doc: &Document) -> String {
    let mut s = String::new();
    let inst = doc.instance();
    let _ = writeln!(s, "instance: {}", inst.id());
    match doc {
        Document::MonadSpec(d) => {
            let _ = writeln!(s, "A = {}", d.term_a);
            let _ = writeln!(s, "M = {}", d.term_m);
            let _ = writeln!(s, "C = {}", d.term_c);
            let f = &d.floystad;
            let _ = writeln!(s, "existence conditions (a,b,c,N) = ({},{},{},{}): {}", f.a, f.b, f.c, f.n, tag(&f.condition));
            let _ = writeln!(s, "T: rank {} c1 {}", d.display.kernel.rank, d.display.kernel.c1);
            let _ = writeln!(s, "E: rank {} c1 {}", d.display.cohomology.rank, d.display.cohomology.c1);
            let _ = writeln!(s, "Q: rank {} c1 {}", d.display.cokernel.rank, d.display.cokernel.c1);
        }
        Document::MonadReport(d) => {
            let r = &d.report;
            let _ = writeln!(s, "composite zero: {}", r.composite_zero);
            for (name, m) in [("f", &r.map_f), ("g", &r.map_g)] {
                let _ = writeln!(
                    s,
                    "map {name}: {}x{}, rank {} {} ({} witnesses), sampled ranks max {}",
                    m.rows,
                    m.cols,
                    m.target_rank,
                    if m.maximal_rank_proved { "proved everywhere" } else { "not proved" },
                    m.witnesses.len(),
                    m.evidence.max_rank_seen
                );
            }
            let _ = writeln!(s, "grading consistent: {}", r.grading_consistent);
            let _ = writeln!(s, "verdict: {}", if r.verdict == MonadVerdict::Valid { "valid" } else { "invalid" });
        }
        Document::StabilityCertificate(d) => {
            let c = &d.certificate;
            let _ = writeln!(s, "monad: {}", tag(&d.monad.verdict));
            let _ = writeln!(s, "T: rank {} c1 {} deg {} slope {} k_E {}", c.rank_t, c.c1_t, c.deg_t, c.slope_t, c.k_e);
            let _ = writeln!(s, "twists: {}", c.twist_family);
            let passed = c.results.iter().filter(|r| r.pass).count();
            let _ = writeln!(s, "q checked: {} of {} pass", passed, c.results.len());
            for r in c.results.iter().filter(|r| !r.pass) {
                if let Some(w) = &r.witness {
                    let _ = writeln!(s, "q={}: witness B = {} (t_S = {}, h0 = {})", r.q, w.b, w.t_s, w.h0);
                }
            }
            let v = match c.verdict {
                StabilityVerdict::Stable => "stable",
                StabilityVerdict::Fail => "FAIL",
                StabilityVerdict::NormalizationRequired => "normalization required (unsupported)",
            };
            let _ = writeln!(s, "verdict: {v}");
        }
        Document::SimplicityCertificate(d) => {
            let c = &d.certificate;
            let _ = writeln!(s, "monad: {}, kernel stability: {}", tag(&d.monad.verdict), tag(&d.stability.verdict));
            for chk in &c.checks {
                for step in [&chk.h0, &chk.h1] {
                    let _ = writeln!(
                        s,
                        "H^{}(T^*{}): h^{}(M) = {}, h^{}(C) = {} -> {}",
                        step.p,
                        chk.twist,
                        step.p,
                        step.h_p_middle,
                        step.p + 1,
                        step.h_p1_left,
                        if step.forced_zero { "forced zero" } else { "undetermined" }
                    );
                }
            }
            match c.verdict {
                SimplicityVerdict::Simple => {
                    let _ = writeln!(s, "verdict: h^0(E x E^*) = 1");
                }
                SimplicityVerdict::Inconclusive => {
                    let _ = writeln!(s, "verdict: inconclusive ({})", c.reason.as_deref().unwrap_or(""));
                }
            }
        }
    }
    s
}

fn emit(doc: &Document, args: &InstanceArgs) -> Result<i32> {
    if args.json {
        print!("{}", doc.to_json());
    } else {
        print!("{}", summarize(doc));
    }
    if let Some(dir) = &args.out {
        let path = write_document(doc, dir)?;
        if !args.json {
            println!("wrote {}", path.display());
        }
    }
    Ok(if doc.positive() { 0 } else { 1 })
}

/// Writes `<kind>-<instance id>.json` under `dir`.
pub fn write_document(doc: &Document, dir: &Path) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| Error::InvalidInput(format!("{}: {e}", dir.display())))?;
    let path = dir.join(format!("{}-{}.json", doc.kind(), doc.instance().id()));
    fs::write(&path, doc.to_json()).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    Ok(path)
}

fn cohom(args: &CohomArgs) -> Result<i32> {
    let x = ProductSpace::new(args.space.clone())?;
    let degrees = args.degree.iter().map(|d| parse_degree(d)).collect::<Result<Vec<_>>>()?;
    for d in &degrees {
        x.check_degree(d)?;
    }
    let g = LineBundleSum::from_summands(degrees.into_iter().map(|d| (d, 1)))?;
    match args.p {
        Some(p) => println!("{}", h_sum(&x, &g, p)?),
        None => {
            for p in 0..=x.dim() {
                println!("h^{p} = {}", h_sum(&x, &g, p)?);
            }
        }
    }
    Ok(0)
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Build(a) => emit(&build_doc(&a.instance()?)?, &a),
        Command::Verify(a) => emit(&verify_doc(&a.instance()?)?, &a),
        Command::CertifyStability(a) => emit(&stability_doc(&a.instance()?)?, &a),
        Command::CertifySimplicity(a) => emit(&simplicity_doc(&a.instance()?)?, &a),
        Command::Cohom(a) => cohom(&a),
        Command::Selftest { seed } => {
            let results = crate::selftest::run_all(seed);
            let mut ok = true;
            for r in &results {
                ok &= r.passed();
                println!(
                    "{} {} ({} cases){}",
                    if r.passed() { "PASS" } else { "FAIL" },
                    r.name,
                    r.cases,
                    r.first_failure.as_ref().map(|f| format!(": {f}")).unwrap_or_default()
                );
            }
            Ok(if ok { 0 } else { 1 })
        }
        Command::Recheck { file } => {
            let text = fs::read_to_string(&file)
                .map_err(|e| Error::InvalidInput(format!("{}: {e}", file.display())))?;
            let r = recheck(&text).map_err(|e| Error::Parse(format!("{}: {e}", file.display())))?;
            println!("{}: {}", r.kind, if r.reproduced { "reproduced byte for byte" } else { "NOT reproduced" });
            for (name, ok) in &r.checks {
                println!("{} {name}", if *ok { "ok  " } else { "FAIL" });
            }
            Ok(if r.ok() { 0 } else { 1 })
        }
    }
}

/// Runs the tool on `args` (including the program name) and returns the
/// exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
