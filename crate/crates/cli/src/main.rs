use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};

use solvext::catalog::{self, parse_assignment, parse_catalog, print_catalog, CatalogEntry, FieldScope};
use solvext::extension::assemble;
use solvext::isomorphism::{
    builtin_certificate, check_equivalence_claims, first_violation, search_isomorphism, CertificateTemplate, IsoVerdict,
};
use solvext::poly::Factorable;
use solvext::report::verify_catalog;
use solvext::{LieAlgebra, Matrix, Scalar, Q, QI};

#[derive(Parser)]
#[command(name = "solvext", version, about = "Exact checks for 7-dimensional solvable Lie algebras with 5-dimensional nilradicals")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Field {
    #[value(name = "R", alias = "r")]
    R,
    #[value(name = "C", alias = "c")]
    C,
}

impl Field {
    fn scope(self) -> FieldScope {
        match self {
            Field::R => FieldScope::R,
            Field::C => FieldScope::C,
        }
    }
}

#[derive(clap::Args)]
struct Common {
    /// Ground field
    #[arg(long, value_enum, default_value = "R")]
    field: Field,
    /// Catalog file; the builtin tables when omitted
    #[arg(long)]
    catalog: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the verification suite over a catalog
    Verify {
        #[command(flatten)]
        common: Common,
        /// Parameter points per entry
        #[arg(long, default_value_t = 5)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the JSON report here
        #[arg(long)]
        json: Option<PathBuf>,
        /// Record per-sample milliseconds in the JSON report
        #[arg(long)]
        timings: bool,
        /// Also check the declared equivalences
        #[arg(long)]
        equivalences: bool,
        /// Search budget for equivalences without a certificate
        #[arg(long, default_value_t = solvext::isomorphism::DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Print the invariants of an algebra
    Fingerprint {
        /// `NAME[@p=v,...]`, a nilradical id such as `g52`, or `abelianN`
        algebra: String,
        #[command(flatten)]
        common: Common,
    },
    /// Decide whether two algebras are isomorphic
    Iso {
        left: String,
        right: String,
        #[command(flatten)]
        common: Common,
        /// Expanded-node budget for the search
        #[arg(long, default_value_t = solvext::isomorphism::DEFAULT_BUDGET)]
        budget: usize,
        /// Check this certificate file instead of searching
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Parse a catalog and print it in canonical form
    Parse {
        /// Catalog file, or `builtin`
        path: String,
    },
}

/// Failure that maps to exit code 2.
#[derive(Debug)]
struct InputError(String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

fn input_err(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(InputError(msg.into()))
}

fn load_catalog(path: Option<&Path>) -> anyhow::Result<Vec<CatalogEntry>> {
    match path {
        None => Ok(catalog::builtin_tables()),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| input_err(format!("{}: {e}", p.display())))?;
            parse_catalog(&text).map_err(|e| input_err(format!("{}: {e}", p.display())))
        }
    }
}

/// Certificate text by file name: next to the catalog first, then builtin.
fn cert_loader(catalog: Option<&Path>) -> impl Fn(&str) -> Option<String> + '_ {
    move |file: &str| {
        catalog
            .and_then(|c| std::fs::read_to_string(c.parent().unwrap_or(Path::new(".")).join(file)).ok())
            .or_else(|| builtin_certificate(file))
    }
}

fn resolve<F: Scalar>(reference: &str, entries: &[CatalogEntry], field: FieldScope) -> anyhow::Result<LieAlgebra<F>> {
    if let Some(n) = reference.strip_prefix("abelian") {
        let n: usize = n.parse().map_err(|_| input_err(format!("bad dimension in '{reference}'")))?;
        return Ok(LieAlgebra::abelian(n, reference));
    }
    if let Some(n) = catalog::builtin_nilradical::<F>(reference) {
        return Ok(n);
    }
    let (name, params) = reference.split_once('@').unwrap_or((reference, ""));
    let entry = entries.iter().find(|e| e.name == name).ok_or_else(|| input_err(format!("unknown algebra '{name}'")))?;
    if !entry.field.includes(field) {
        return Err(input_err(format!("{name} is not defined over {}", field.as_str())));
    }
    let env = parse_assignment::<F>(params).map_err(|e| input_err(format!("{reference}: {e}")))?;
    for p in &entry.params {
        if !env.contains_key(p) {
            return Err(input_err(format!("{reference}: parameter '{p}' has no value")));
        }
    }
    let spec = match entry.instantiate(&env, field) {
        Ok(s) => s,
        Err(solvext::Error::Constraint(c)) => {
            eprintln!("note: {reference} lies outside the normalized range ({c})");
            entry.instantiate_unchecked(&env)?
        }
        Err(e) => return Err(input_err(format!("{reference}: {e}"))),
    };
    Ok(assemble(&spec)?.with_label(entry.point_label(&env)))
}

fn params_of<F: Scalar>(reference: &str) -> anyhow::Result<catalog::ParamAssignment<F>> {
    let params = reference.split_once('@').map_or("", |(_, p)| p);
    parse_assignment::<F>(params).map_err(|e| input_err(format!("{reference}: {e}")))
}

fn cmd_verify<F: Factorable>(
    common: &Common,
    samples: usize,
    seed: u64,
    json: Option<&Path>,
    timings: bool,
    equivalences: bool,
    budget: usize,
) -> anyhow::Result<bool> {
    let entries = load_catalog(common.catalog.as_deref())?;
    let field = common.field.scope();
    let report = verify_catalog(&entries, field, samples, seed, timings);
    for section in &report.nilradicals {
        let c = &section.counts;
        println!(
            "{}: {} entries, {}/{} samples passed",
            catalog::nilradical_label(&section.id).unwrap_or(&section.id),
            c.entries,
            c.passed_samples,
            c.samples
        );
        for e in &section.entries {
            for s in e.samples.iter().filter(|s| !s.passed()) {
                let at = if s.params.is_empty() { String::new() } else { format!("@{}", s.params) };
                println!("  FAIL {}{at}: {}", e.name, s.failures.join("; "));
            }
        }
    }
    if let Some(path) = json {
        std::fs::write(path, report.to_json() + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    let mut ok = report.passed();
    if equivalences {
        let load = cert_loader(common.catalog.as_deref());
        for e in entries.iter().filter(|e| e.field.includes(field) && !e.equivs.is_empty()) {
            let r = check_equivalence_claims::<F>(e, samples, seed, budget, &load)?;
            for c in &r.results {
                println!("  {} {}: {} -> {}: {}", e.name, c.claim, c.source, c.target, c.outcome);
            }
            ok &= r.passed();
        }
    }
    println!("{}", if ok { "all checks passed" } else { "some checks failed" });
    Ok(ok)
}

fn cmd_fingerprint<F: Scalar>(common: &Common, reference: &str) -> anyhow::Result<bool> {
    let entries = load_catalog(common.catalog.as_deref())?;
    let l = resolve::<F>(reference, &entries, common.field.scope())?;
    println!("{}", l.label());
    println!("{}", l.fingerprint());
    println!("nilradical lower central series dims: {:?}", l.nilradical_lower_central_dims());
    Ok(true)
}

fn cmd_iso<F: Factorable>(
    common: &Common,
    left: &str,
    right: &str,
    budget: usize,
    certificate: Option<&Path>,
) -> anyhow::Result<bool> {
    let entries = load_catalog(common.catalog.as_deref())?;
    let field = common.field.scope();
    let l1 = resolve::<F>(left, &entries, field)?;
    let l2 = resolve::<F>(right, &entries, field)?;
    if l1.dim() != l2.dim() {
        println!("refuted: dimension {} vs {}", l1.dim(), l2.dim());
        return Ok(false);
    }
    if let Some(path) = certificate {
        let text = std::fs::read_to_string(path).map_err(|e| input_err(format!("{}: {e}", path.display())))?;
        let t = CertificateTemplate::parse(&text).map_err(|e| input_err(format!("{}: {e}", path.display())))?;
        return check_certificate(&t, &l1, &l2, left, right);
    }
    let verdict = search_isomorphism(&l1, &l2, budget);
    println!("{verdict}");
    if let IsoVerdict::Isomorphic(c) = &verdict {
        print!("{}", c.to_text());
    }
    Ok(verdict.is_isomorphic())
}

/// The rows are evaluated at the parameters of either side; a matrix that
/// maps the right algebra onto the left one also proves isomorphism.
fn check_certificate<F: Scalar>(
    t: &CertificateTemplate,
    l1: &LieAlgebra<F>,
    l2: &LieAlgebra<F>,
    left: &str,
    right: &str,
) -> anyhow::Result<bool> {
    let mut first_failure = None;
    for (env_ref, env) in [(left, params_of::<F>(left)?), (right, params_of::<F>(right)?)] {
        let g: Matrix<F> = match t.matrix(&env) {
            Ok(g) => g,
            Err(_) => continue,
        };
        if g.rows() != l1.dim() || g.cols() != l1.dim() {
            return Err(input_err(format!("certificate is {}x{}, algebras have dim {}", g.rows(), g.cols(), l1.dim())));
        }
        if g.det().is_zero() {
            first_failure.get_or_insert_with(|| format!("matrix is singular at the parameters of {env_ref}"));
            continue;
        }
        for (src, dst, s, d) in [(l1, l2, left, right), (l2, l1, right, left)] {
            match first_violation(src, dst, &g) {
                None => {
                    println!("isomorphic (certificate verified)");
                    println!("certificate evaluated at the parameters of {env_ref}, maps {s} -> {d}");
                    return Ok(true);
                }
                Some((i, j)) => {
                    let names = src.names();
                    first_failure.get_or_insert_with(|| format!("G[{}, {}] != [G{}, G{}] for {s} -> {d}", names[i], names[j], names[i], names[j]));
                }
            }
        }
    }
    match first_failure {
        Some(f) => println!("certificate failed: {f}"),
        None => println!("certificate failed: rows could not be evaluated"),
    }
    Ok(false)
}

fn cmd_parse(path: &str) -> anyhow::Result<bool> {
    let entries = if path == "builtin" { catalog::builtin_tables() } else { load_catalog(Some(Path::new(path)))? };
    print!("{}", print_catalog(&entries));
    Ok(true)
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.cmd {
        Cmd::Verify { common, samples, seed, json, timings, equivalences, budget } => match common.field {
            Field::R => cmd_verify::<Q>(&common, samples, seed, json.as_deref(), timings, equivalences, budget),
            Field::C => cmd_verify::<QI>(&common, samples, seed, json.as_deref(), timings, equivalences, budget),
        },
        Cmd::Fingerprint { algebra, common } => match common.field {
            Field::R => cmd_fingerprint::<Q>(&common, &algebra),
            Field::C => cmd_fingerprint::<QI>(&common, &algebra),
        },
        Cmd::Iso { left, right, common, budget, certificate } => match common.field {
            Field::R => cmd_iso::<Q>(&common, &left, &right, budget, certificate.as_deref()),
            Field::C => cmd_iso::<QI>(&common, &left, &right, budget, certificate.as_deref()),
        },
        Cmd::Parse { path } => cmd_parse(&path),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) if e.is::<InputError>() => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
