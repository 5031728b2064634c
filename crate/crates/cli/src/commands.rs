use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sigforge_core::cyclo::{format_rational, parse_root_of_unity};
use sigforge_core::cylinders::{
    density_sample, evaluate_combination, independence_witness, rho_n, KnotSpec,
};
use sigforge_core::freegroup::{fox_derivative, fox_table, generator_name, parse_word, W, X, Y, Z};
use sigforge_core::knotsig::{alexander_polynomial, rho0, signature_arcs};
use sigforge_core::twistfamily::{
    defect_bound, defect_scan, independence_certificate, matrix_a, matrix_c, omega_k,
    rho_dehn_power, TwistFamilySpec,
};
use sigforge_core::{BigRational, CyclotomicNumber, HermitianMatrix, Inertia};

use crate::error::{CliError, CliResult};
use crate::input;
use crate::record::{Grid, ResultRecord};

#[derive(Parser, Debug)]
#[command(name = "sigforge", version, about = "Exact signature and rho-invariant computations")]
pub struct Cli {
    /// Print the result as JSON.
    #[arg(long, global = true, conflicts_with = "csv")]
    pub json: bool,
    /// Print grid results as CSV.
    #[arg(long, global = true)]
    pub csv: bool,
    /// Leave out the timestamp so that output is byte-for-byte reproducible.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Inertia and signature of a Hermitian matrix.
    Sig(SigArgs),
    /// Rho invariants.
    #[command(subcommand)]
    Rho(RhoCommand),
    /// Finite certificates: defect scans, independence witnesses, Fox tables.
    #[command(subcommand)]
    Certify(CertifyCommand),
    /// Fox derivatives of a word in x, y, z, w.
    Fox(FoxArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "verbatim")]
pub enum Family {
    #[value(alias = "a")]
    A,
    #[value(alias = "c")]
    C,
}

#[derive(Args, Debug)]
pub struct SigArgs {
    /// Build the matrix from a family instead of reading it from a file.
    #[arg(long, conflicts_with = "file")]
    pub family: Option<Family>,
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long = "N")]
    pub big_n: Option<u32>,
    /// Character value, `zeta(m)^p`.
    #[arg(long)]
    pub omega: Option<String>,
    /// JSON array of rows of cyclotomic literals or integers.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum RhoCommand {
    /// rho of D_alpha o D_beta(m, n) to the power N + 1.
    Twist(TwistArgs),
    /// rho of a power of a single Dehn twist about a bounding curve.
    Dehn(DehnArgs),
    /// Circle average of the Levine-Tristram signature of a knot.
    #[command(name = "knot-rho0")]
    KnotRho0(KnotArgs),
    /// rho_i of a homology cylinder given by an infection script.
    Cylinder(CylinderArgs),
}

#[derive(Args, Debug)]
pub struct TwistArgs {
    #[arg(long)]
    pub m: u32,
    #[arg(long)]
    pub n: u32,
    #[arg(long = "N", conflicts_with = "n0", required_unless_present = "n0")]
    pub big_n: Option<u32>,
    /// Use `N = 2 N0`.
    #[arg(long = "N0")]
    pub n0: Option<u32>,
    #[arg(long, conflicts_with = "k", required_unless_present = "k")]
    pub omega: Option<String>,
    /// Use `omega = zeta(4^k)`.
    #[arg(long)]
    pub k: Option<u32>,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct DehnArgs {
    #[arg(long = "M")]
    pub power: i64,
    #[arg(long, default_value = "zeta(2)")]
    pub omega: String,
}

#[derive(Args, Debug)]
pub struct KnotArgs {
    /// Name of a shipped knot.
    #[arg(long, conflicts_with = "file", required_unless_present = "file")]
    pub knot: Option<String>,
    /// JSON integer Seifert matrix.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct CylinderArgs {
    /// JSON script `{genus, records: [{depth, knot, copies?}]}`.
    #[arg(long)]
    pub script: PathBuf,
    #[arg(long)]
    pub index: i64,
}

#[derive(Subcommand, Debug)]
pub enum CertifyCommand {
    /// Scan the cocycle defect of h^a, h^b against the universal bound.
    #[command(name = "defect-bound")]
    DefectBound(DefectArgs),
    /// Witness that a combination of rho invariants is unbounded.
    Independence(IndependenceArgs),
    /// The eight Fox derivatives of alpha and beta(m, n).
    #[command(name = "fox-table")]
    FoxTable(FoxTableArgs),
    /// A script whose rho value approximates a target.
    Density(DensityArgs),
}

#[derive(Args, Debug)]
pub struct DefectArgs {
    #[arg(long)]
    pub m: u32,
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub omega: String,
    /// Largest power a, b scanned.
    #[arg(long)]
    pub max: u32,
    #[arg(long, default_value_t = 2)]
    pub genus: u32,
    #[arg(long, default_value_t = 1)]
    pub rep_dim: u32,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct IndependenceArgs {
    /// Twist-family invariants rho_k, k >= 1.
    #[arg(long, value_delimiter = ',', conflicts_with = "depths", required_unless_present = "depths")]
    pub ks: Vec<u32>,
    /// Cylinder invariants rho_n, n >= 2.
    #[arg(long, value_delimiter = ',')]
    pub depths: Vec<i64>,
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    pub coeffs: Vec<String>,
    #[arg(long)]
    pub bound: String,
}

#[derive(Args, Debug)]
pub struct FoxTableArgs {
    #[arg(long)]
    pub m: u32,
    #[arg(long)]
    pub n: u32,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct DensityArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub target: String,
    #[arg(long)]
    pub tolerance: String,
    #[arg(long, default_value_t = 2)]
    pub depth: i64,
}

#[derive(Args, Debug)]
pub struct FoxArgs {
    #[arg(long)]
    pub word: String,
    /// Also evaluate each derivative with every generator sent to omega.
    #[arg(long)]
    pub omega: Option<String>,
}

fn omega(s: &str) -> CliResult<CyclotomicNumber> {
    Ok(parse_root_of_unity(s)?)
}

fn need<T: Copy>(v: Option<T>, flag: &str, what: &str) -> CliResult<T> {
    v.ok_or_else(|| CliError::Usage(format!("{what} requires {flag}")))
}

fn rational_list(items: &[String]) -> CliResult<Vec<BigRational>> {
    items.iter().map(|s| input::rational(s)).collect()
}

fn inertia_record(rec: ResultRecord, i: &Inertia) -> ResultRecord {
    rec.output("n_plus", i.positive)
        .output("n_minus", i.negative)
        .output("n_zero", i.zero)
        .output("signature", i.signature())
}

pub fn execute(command: &Command) -> CliResult<ResultRecord> {
    match command {
        Command::Sig(a) => sig(a),
        Command::Rho(RhoCommand::Twist(a)) => rho_twist(a),
        Command::Rho(RhoCommand::Dehn(a)) => rho_dehn(a),
        Command::Rho(RhoCommand::KnotRho0(a)) => knot_rho0(a),
        Command::Rho(RhoCommand::Cylinder(a)) => cylinder(a),
        Command::Certify(CertifyCommand::DefectBound(a)) => certify_defect(a),
        Command::Certify(CertifyCommand::Independence(a)) => certify_independence(a),
        Command::Certify(CertifyCommand::FoxTable(a)) => certify_fox_table(a),
        Command::Certify(CertifyCommand::Density(a)) => certify_density(a),
        Command::Fox(a) => fox(a),
    }
}

fn sig(a: &SigArgs) -> CliResult<ResultRecord> {
    let (rec, h): (ResultRecord, HermitianMatrix) = match (a.family, &a.file) {
        (Some(Family::A), _) => {
            let big_n = need(a.big_n, "--N", "family A")?;
            let rec = ResultRecord::new(
                "sig",
                "congruence diagonalization of A_N, tridiagonal with 2 on the diagonal and -1 beside it",
            )
            .input("family", "A")
            .input("N", big_n);
            (rec, matrix_a(big_n))
        }
        (Some(Family::C), _) => {
            let m = need(a.m, "--m", "family C")?;
            let n = need(a.n, "--n", "family C")?;
            let big_n = need(a.big_n, "--N", "family C")?;
            let w = a
                .omega
                .as_deref()
                .ok_or_else(|| CliError::Usage("family C requires --omega".into()))?;
            let w = omega(w)?;
            let spec = TwistFamilySpec::new(m, n, big_n, w.clone())?;
            let rec = ResultRecord::new(
                "sig",
                "congruence diagonalization of C = [[A, conj(G) B^T], [G B, A]], G = (omega^(n-1) - 1)(omega^-(m+1) - 1)",
            )
            .input("family", "C")
            .input("m", m)
            .input("n", n)
            .input("N", big_n)
            .input("omega", w.to_string());
            (rec, matrix_c(&spec)?)
        }
        (None, Some(path)) => {
            let rec = ResultRecord::new("sig", "congruence diagonalization of the matrix read from file")
                .input("file", path.display().to_string());
            (rec, input::hermitian_file(path)?)
        }
        (None, None) => return Err(CliError::Usage("sig requires --family or --file".into())),
    };
    Ok(inertia_record(rec.output("dim", h.dim()), &h.signature()))
}

fn rho_twist(a: &TwistArgs) -> CliResult<ResultRecord> {
    let big_n = match (a.big_n, a.n0) {
        (Some(n), _) => n,
        (None, Some(n0)) => 2 * n0,
        (None, None) => return Err(CliError::Usage("rho twist requires --N or --N0".into())),
    };
    let w = match (&a.omega, a.k) {
        (Some(s), _) => omega(s)?,
        (None, Some(k)) => {
            if k == 0 {
                return Err(sigforge_core::Error::TrivialCharacter.into());
            }
            omega_k(k)
        }
        (None, None) => return Err(CliError::Usage("rho twist requires --omega or --k".into())),
    };
    let spec = TwistFamilySpec::new(a.m, a.n, big_n, w.clone())?;
    let inertia = sigforge_core::twistfamily::twist_inertia(&spec)?;
    let mut rec = ResultRecord::new(
        "rho twist",
        "rho(h^(N+1)) = sig C_(m,n,N)(omega) - 2(N+1), h = D_alpha o D_beta(m,n)",
    )
    .input("m", a.m)
    .input("n", a.n)
    .input("N", big_n);
    if let Some(n0) = a.n0 {
        rec = rec.input("N0", n0);
    }
    if let Some(k) = a.k {
        rec = rec.input("k", k);
    }
    Ok(rec
        .input("omega", w.to_string())
        .output("signature", inertia.signature())
        .output("rho", inertia.signature() - 2 * (big_n as i64 + 1)))
}

fn rho_dehn(a: &DehnArgs) -> CliResult<ResultRecord> {
    let w = omega(&a.omega)?;
    let rho = rho_dehn_power(a.power, &w)?;
    Ok(ResultRecord::new("rho dehn", "rho(D^M) = sig A_(M-1) - M, extended oddly to M < 0")
        .input("M", a.power)
        .input("omega", w.to_string())
        .output("rho", rho))
}

fn knot_rho0(a: &KnotArgs) -> CliResult<ResultRecord> {
    let (rec, v) = match (&a.knot, &a.file) {
        (Some(name), _) => {
            let spec = KnotSpec::named(name)?;
            (ResultRecord::new("rho knot-rho0", "").input("knot", name.as_str()), spec.seifert())
        }
        (None, Some(path)) => (
            ResultRecord::new("rho knot-rho0", "").input("file", path.display().to_string()),
            input::seifert_file(path)?,
        ),
        (None, None) => return Err(CliError::Usage("knot-rho0 requires --knot or --file".into())),
    };
    let arcs = signature_arcs(&v)?;
    let rho0 = rho0(&v)?;
    let delta: Vec<String> = alexander_polynomial(&v).iter().map(|c| c.to_string()).collect();
    let grid = Grid {
        header: vec!["start".into(), "end".into(), "sample".into(), "signature".into()],
        rows: arcs
            .iter()
            .map(|arc| {
                vec![
                    format_rational(&arc.start),
                    format_rational(&arc.end),
                    format!("{}/{}", arc.sample.0, arc.sample.1),
                    arc.signature.to_string(),
                ]
            })
            .collect(),
    };
    let mut rec = rec
        .output("alexander", delta)
        .output("arcs", serde_json::to_value(&arcs).map_err(|e| CliError::Output(e.to_string()))?)
        .output("rho0", format_rational(&rho0))
        .with_grid(grid);
    rec.provenance =
        "rho0 = sum over arcs between unit roots of Delta of arc length times the signature of (1-w)V + (1-conj w)V^T".into();
    Ok(rec)
}

fn cylinder(a: &CylinderArgs) -> CliResult<ResultRecord> {
    let script = input::script_file(&a.script)?;
    let rho = rho_n(&script, a.index)?;
    let ledger: serde_json::Map<String, Value> = script
        .ledger()?
        .iter()
        .map(|(d, v)| (d.to_string(), Value::from(format_rational(v))))
        .collect();
    Ok(ResultRecord::new(
        "rho cylinder",
        "rho_i = sum of copies * rho0(knot) over infections of depth at most i",
    )
    .input("script", a.script.display().to_string())
    .input("index", a.index)
    .output("ledger", Value::Object(ledger))
    .output("rho", format_rational(&rho)))
}

fn certify_defect(a: &DefectArgs) -> CliResult<ResultRecord> {
    let w = omega(&a.omega)?;
    let scan = defect_scan(a.m, a.n, &w, a.max)?;
    let bound = defect_bound(a.genus, a.rep_dim);
    let grid = Grid {
        header: vec!["a".into(), "b".into(), "defect".into()],
        rows: scan
            .cells
            .iter()
            .map(|c| vec![c.a.to_string(), c.b.to_string(), c.defect.to_string()])
            .collect(),
    };
    Ok(ResultRecord::new(
        "certify defect-bound",
        "defect(a, b) = rho(h^a) + rho(h^b) - rho(h^(a+b)) against 2 dim 2g",
    )
    .input("m", a.m)
    .input("n", a.n)
    .input("omega", w.to_string())
    .input("max", a.max)
    .input("genus", a.genus)
    .input("rep_dim", a.rep_dim)
    .output("bound", bound)
    .output("max_abs_defect", scan.max_abs_defect)
    .output("within_bound", scan.max_abs_defect <= bound)
    .output("rho", scan.rho.clone())
    .output(
        "cells",
        scan.cells
            .iter()
            .map(|c| json!({"a": c.a, "b": c.b, "defect": c.defect}))
            .collect::<Vec<_>>(),
    )
    .with_grid(grid))
}

fn certify_independence(a: &IndependenceArgs) -> CliResult<ResultRecord> {
    let coeffs = rational_list(&a.coeffs)?;
    let bound = input::rational(&a.bound)?;
    let coeff_text: Vec<String> = coeffs.iter().map(format_rational).collect();
    if !a.ks.is_empty() {
        let witness = independence_certificate(&a.ks, &coeffs, &bound)?;
        return Ok(ResultRecord::new(
            "certify independence",
            "first N0 with |sum a_i rho_(k_i)(f_(4^j-1, 4^j+1, 2 N0))| > bound, j = max k - 1",
        )
        .input("ks", a.ks.clone())
        .input("coeffs", coeff_text)
        .input("bound", format_rational(&bound))
        .output("j", witness.j)
        .output("N0", witness.n0)
        .output("m", witness.m)
        .output("n", witness.n)
        .output("N", witness.big_n)
        .output("rho_values", witness.rho_values.clone())
        .output("combination", format_rational(&witness.combination)));
    }
    let script = independence_witness(&a.depths, &coeffs, &bound)?;
    let value = evaluate_combination(&script, &a.depths, &coeffs)?;
    Ok(ResultRecord::new(
        "certify independence",
        "single infection at the deepest index by copies of the right-handed trefoil",
    )
    .input("depths", a.depths.clone())
    .input("coeffs", coeff_text)
    .input("bound", format_rational(&bound))
    .output("script", serde_json::to_value(&script).map_err(|e| CliError::Output(e.to_string()))?)
    .output("combination", format_rational(&value)))
}

fn certify_fox_table(a: &FoxTableArgs) -> CliResult<ResultRecord> {
    let entries = fox_table(a.m, a.n);
    let rows: Vec<Vec<String>> = entries
        .iter()
        .map(|e| {
            vec![
                e.curve.to_string(),
                generator_name(4, e.generator),
                e.derivative.to_string(),
            ]
        })
        .collect();
    let listing: Vec<Value> = rows
        .iter()
        .map(|r| json!({"curve": r[0], "generator": r[1], "derivative": r[2]}))
        .collect();
    Ok(ResultRecord::new(
        "certify fox-table",
        "Fox derivatives of alpha = z^-1 [z,w] z and beta(m, n) = [y, x^-1] [(y x^m)^-1, z^n w^-1]",
    )
    .input("m", a.m)
    .input("n", a.n)
    .output("entries", listing)
    .with_grid(Grid {
        header: vec!["curve".into(), "generator".into(), "derivative".into()],
        rows,
    }))
}

fn certify_density(a: &DensityArgs) -> CliResult<ResultRecord> {
    let target = input::rational(&a.target)?;
    let tolerance = input::rational(&a.tolerance)?;
    let script = density_sample(&target, &tolerance, a.depth)?;
    let achieved = rho_n(&script, a.depth)?;
    Ok(ResultRecord::new(
        "certify density",
        "nearest point of the lattice generated by rho0 of the shipped knots",
    )
    .input("target", format_rational(&target))
    .input("tolerance", format_rational(&tolerance))
    .input("depth", a.depth)
    .output("script", serde_json::to_value(&script).map_err(|e| CliError::Output(e.to_string()))?)
    .output("achieved", format_rational(&achieved)))
}

fn fox(a: &FoxArgs) -> CliResult<ResultRecord> {
    let word = parse_word(&a.word)?;
    let w = a.omega.as_deref().map(omega).transpose()?;
    let mut rows = Vec::new();
    let mut listing = Vec::new();
    for g in [X, Y, Z, W] {
        let d = fox_derivative(&word, g);
        let mut row = vec![generator_name(4, g), d.to_string()];
        let mut entry = json!({"generator": row[0], "derivative": row[1]});
        if let Some(w) = &w {
            let value = d.evaluate_diagonal(w)?.to_string();
            entry["value"] = Value::from(value.clone());
            row.push(value);
        }
        rows.push(row);
        listing.push(entry);
    }
    let mut header = vec!["generator".to_string(), "derivative".to_string()];
    let mut rec = ResultRecord::new("fox", "Fox derivatives d(uv) = du + u dv").input("word", a.word.as_str());
    if let Some(w) = &w {
        header.push("value".into());
        rec = rec.input("omega", w.to_string());
    }
    Ok(rec
        .output("reduced", word.to_string())
        .output("derivatives", listing)
        .with_grid(Grid { header, rows }))
}
