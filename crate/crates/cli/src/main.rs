use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::json;

use zetaforge::exactalg::{parse_poly, MPoly, Var};
use zetaforge::flagcomb::{self, FlagType};
use zetaforge::fpgeom::{self, SkewForm, DEFAULT_BUDGET};
use zetaforge::grouppres::{self, Presentation};
use zetaforge::oracle;
use zetaforge::zetacore::{self, LocalZeta, PointCount};
use zetaforge::{Error, Result};

#[derive(Parser)]
#[command(name = "zetaforge", version, about = "Local normal zeta functions of class-2 nilpotent groups")]
struct Cli {
    /// Worker threads for parallel enumeration (a hint).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Enumeration budget.
    #[arg(long, global = true, env = "ZETAFORGE_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Flag varieties, Schubert cells and the flag function.
    #[command(subcommand)]
    Flags(FlagsCmd),
    /// Presentations and their Pfaffians.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Closed forms of local zeta functions.
    #[command(subcommand)]
    Zeta(ZetaCmd),
    /// Hypersurfaces and pencils over prime fields.
    #[command(subcommand)]
    Geom(GeomCmd),
    /// Brute-force counts.
    #[command(subcommand)]
    Oracle(OracleCmd),
}

#[derive(Subcommand)]
enum FlagsCmd {
    /// Print F_n(q, X) and optionally check its functional equation.
    Fn {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        check_funeq: bool,
    },
    /// Print c_I(q), or verify the Schubert symmetries when no type is given.
    Schubert {
        #[arg(long)]
        n: u32,
        #[arg(long = "type")]
        ty: Option<String>,
    },
    /// Print b_I(q), evaluated at --prime if given.
    Count {
        #[arg(long)]
        n: u32,
        #[arg(long = "type")]
        ty: String,
        #[arg(long)]
        prime: Option<u64>,
    },
}

#[derive(Subcommand)]
enum GroupCmd {
    /// Invariants and, with --prime, the hypothesis report.
    Check {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        prime: Option<u64>,
        #[arg(long)]
        assert_irreducible: bool,
    },
    /// Print the Pfaffian of M(y).
    Pfaffian {
        #[command(flatten)]
        src: Source,
    },
}

#[derive(Subcommand)]
enum ZetaCmd {
    /// Closed form for a presentation.
    Compute {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        opts: ZetaOpts,
        /// n_P as a polynomial in p; defaults to the count at --prime, else symbolic.
        #[arg(long)]
        n_poly: Option<String>,
    },
    /// Closed form for Grenham's group G_n.
    Grenham {
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        opts: ZetaOpts,
    },
    /// Functional equation report as JSON.
    Funeq {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        n_poly: Option<String>,
    },
    /// Closed form of G × Z^r.
    Shift {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        n_poly: Option<String>,
        #[arg(long)]
        prime: Option<u64>,
        #[arg(long)]
        terms: Option<u32>,
    },
}

#[derive(Args)]
struct ZetaOpts {
    #[arg(long)]
    prime: Option<u64>,
    #[arg(long)]
    terms: Option<u32>,
    #[arg(long)]
    check_funeq: bool,
}

#[derive(Subcommand)]
enum GeomCmd {
    /// Number of F_p-points.
    Points {
        #[command(flatten)]
        hyp: Hypersurface,
    },
    /// Smoothness mod p.
    Smooth {
        #[command(flatten)]
        hyp: Hypersurface,
    },
    /// A line on the hypersurface, if any.
    Lines {
        #[command(flatten)]
        hyp: Hypersurface,
    },
    /// Number of projective k-planes on the hypersurface.
    Fano {
        #[command(flatten)]
        hyp: Hypersurface,
        #[arg(long)]
        k: usize,
    },
    /// Common isotropic subspace of the pencil of a presentation with d' = 2.
    Isotropic {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        prime: u64,
        /// Target dimension; defaults to d/2 + 1 for degenerate pencils and ⌊(d+1)/2⌋ otherwise.
        #[arg(long)]
        k: Option<usize>,
    },
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Ideal counts a_0..a_N.
    Count {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        terms: u32,
    },
    /// Ideal counts against the closed form and the lattice sum.
    Compare {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        terms: u32,
    },
    /// Lattice type counts: formula against enumeration.
    Types {
        /// Rank d' of the lattice.
        #[arg(long)]
        n: u32,
        #[arg(long)]
        prime: u64,
        #[arg(long = "type")]
        ty: Option<String>,
        #[arg(long)]
        r: Option<String>,
        /// Largest index exponent when listing all types.
        #[arg(long, default_value_t = 4)]
        k: u32,
    },
}

#[derive(Args)]
struct Source {
    /// Presentation file.
    #[arg(long, conflicts_with = "n")]
    file: Option<PathBuf>,
    /// Grenham's G_n instead of a file.
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Args)]
struct Hypersurface {
    /// Presentation file; its Pfaffian is used.
    #[arg(long, conflicts_with = "poly")]
    file: Option<PathBuf>,
    /// Homogeneous polynomial in y1, y2, ...
    #[arg(long)]
    poly: Option<String>,
    /// Number of variables; defaults to the largest index in --poly.
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    prime: u64,
}

enum Failure {
    Domain(Error),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Outcome = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        // A pool can only be configured once; later failures are harmless.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match run(cli.command, cli.budget) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cmd: Command, budget: u64) -> Outcome {
    match cmd {
        Command::Flags(c) => flags(c),
        Command::Group(c) => group(c, budget),
        Command::Zeta(c) => zeta(c, budget),
        Command::Geom(c) => geom(c, budget),
        Command::Oracle(c) => oracle_cmd(c, budget),
    }
}

fn flags(cmd: FlagsCmd) -> Outcome {
    match cmd {
        FlagsCmd::Fn { n, check_funeq } => {
            println!("{}", flagcomb::flag_fn(n)?);
            if check_funeq {
                let ok = flagcomb::check_flag_funeq(n)?;
                println!("funeq: {}", if ok { "holds" } else { "fails" });
                if !ok {
                    return Err(Failure::Verification(format!("flag functional equation for n = {n}")));
                }
            }
        }
        FlagsCmd::Schubert { n, ty: Some(ty) } => {
            let ft = FlagType::new(n, &parse_set(&ty)?)?;
            println!("{}", flagcomb::schubert_c(&ft)?);
        }
        FlagsCmd::Schubert { n, ty: None } => {
            let report = flagcomb::verify_schubert_symmetry(n)?;
            print_json(&json!({
                "n": report.n,
                "palindromic": report.palindromic,
                "bijection": report.bijection,
                "mobius": report.mobius,
                "cells_match": report.cells_match,
                "permutations_checked": report.permutations_checked,
                "holds": report.holds(),
            }));
            if !report.holds() {
                return Err(Failure::Verification(format!("Schubert symmetry for n = {n}")));
            }
        }
        FlagsCmd::Count { n, ty, prime } => {
            let ft = FlagType::new(n, &parse_set(&ty)?)?;
            let b = flagcomb::flag_count(&ft);
            match prime {
                Some(p) => println!("{}", evaluate(&b, Var::Q, p)),
                None => println!("{b}"),
            }
        }
    }
    Ok(())
}

fn group(cmd: GroupCmd, budget: u64) -> Outcome {
    match cmd {
        GroupCmd::Check {
            src,
            prime,
            assert_irreducible,
        } => {
            let pres = src.load()?;
            let inv = grouppres::invariants(&pres);
            let hyp = prime
                .map(|p| grouppres::hypothesis_report(&pres, p, assert_irreducible, budget))
                .transpose()?;
            print_json(&json!({
                "d": inv.d,
                "dprime": inv.dprime,
                "pfaffian": inv.pfaffian.as_ref().map(ToString::to_string),
                "pfaffian_degree": inv.pfaffian_degree,
                "warnings": inv.warnings,
                "hypotheses": hyp,
            }));
        }
        GroupCmd::Pfaffian { src } => {
            println!("{}", grouppres::pfaffian(&src.load()?));
        }
    }
    Ok(())
}

fn zeta(cmd: ZetaCmd, budget: u64) -> Outcome {
    match cmd {
        ZetaCmd::Compute { src, opts, n_poly } => {
            let z = closed_form(&src, n_poly.as_deref(), opts.prime, budget)?;
            print_zeta(&z, &opts)
        }
        ZetaCmd::Grenham { n, opts } => print_zeta(&zetacore::grenham_zeta(n)?, &opts),
        ZetaCmd::Funeq { src, n_poly } => {
            let z = closed_form(&src, n_poly.as_deref(), None, budget)?;
            let report = zetacore::verify_funeq(&z)?;
            print_json(&z.metadata(Some(&report)));
            if report.holds {
                Ok(())
            } else {
                Err(Failure::Verification("functional equation".into()))
            }
        }
        ZetaCmd::Shift {
            src,
            r,
            n_poly,
            prime,
            terms,
        } => {
            let z = closed_form(&src, n_poly.as_deref(), prime, budget)?;
            let value = zetacore::direct_product_shift(&z.value, z.d + z.dprime, r)?;
            println!("{value}");
            if let (Some(p), Some(n)) = (prime, terms) {
                println!("series: {}", format_series(&oracle::integer_series(&value, p, n)?));
            }
            Ok(())
        }
    }
}

fn closed_form(src: &Source, n_poly: Option<&str>, prime: Option<u64>, budget: u64) -> Result<LocalZeta> {
    if let Some(n) = src.n {
        return zetacore::grenham_zeta(n as u32);
    }
    let pres = src.load()?;
    let d = pres.d();
    if d == pres.dprime() + 1 && Presentation::grenham(d).is_ok_and(|g| g == pres) && n_poly.is_none() {
        return zetacore::grenham_zeta(d as u32);
    }
    let n_p = match (n_poly, prime) {
        (Some(text), _) => PointCount::parse(text)?,
        (None, Some(p)) => {
            let count = fpgeom::count_points(&grouppres::pfaffian(&pres), pres.dprime(), p, budget)?;
            PointCount::constant(count as i64)
        }
        (None, None) => PointCount::Symbolic,
    };
    zetacore::normal_zeta_smooth(&pres, n_p)
}

fn print_zeta(z: &LocalZeta, opts: &ZetaOpts) -> Outcome {
    println!("{z}");
    if let Some(n) = opts.terms {
        let p = opts
            .prime
            .ok_or_else(|| Error::InvalidArgument("--terms needs --prime".into()))?;
        println!("series: {}", format_series(&z.series(p as i64, n as usize)?));
    }
    if opts.check_funeq {
        let report = zetacore::verify_funeq(z)?;
        let observed = report
            .observed
            .map_or_else(|| "none".to_string(), |s| s.to_string());
        let status = match (report.holds, report.conditional) {
            (true, false) => "holds",
            (true, true) => "holds (components)",
            (false, _) => "fails",
        };
        println!("funeq: {status} expected {} observed {observed}", report.expected);
        if !report.holds {
            return Err(Failure::Verification("functional equation".into()));
        }
    }
    Ok(())
}

fn geom(cmd: GeomCmd, budget: u64) -> Outcome {
    match cmd {
        GeomCmd::Points { hyp } => {
            let (f, m) = hyp.load()?;
            println!("{}", fpgeom::count_points(&f, m, hyp.prime, budget)?);
        }
        GeomCmd::Smooth { hyp } => {
            let (f, m) = hyp.load()?;
            println!("{}", fpgeom::is_smooth_mod_p(&f, m, hyp.prime, budget)?);
        }
        GeomCmd::Lines { hyp } => {
            let (f, m) = hyp.load()?;
            match fpgeom::find_line(&f, m, hyp.prime, budget)? {
                Some([a, b]) => println!("{}", json!([a, b])),
                None => println!("none"),
            }
        }
        GeomCmd::Fano { hyp, k } => {
            let (f, m) = hyp.load()?;
            println!("{}", fpgeom::fano_count(&f, m, hyp.prime, k, budget)?);
        }
        GeomCmd::Isotropic { file, prime, k } => {
            let pres = load_presentation(&file)?;
            if pres.dprime() != 2 {
                return Err(Error::InvalidArgument("isotropic needs a presentation with d' = 2".into()).into());
            }
            let d = pres.d();
            let coefficient = |c: usize| -> Result<SkewForm> {
                let m = (0..d)
                    .map(|i| (0..d).map(|j| pres.form(i, j)[c]).collect())
                    .collect();
                SkewForm::new(prime, m)
            };
            let (phi, psi) = (coefficient(0)?, coefficient(1)?);
            let degenerate = fpgeom::pencil_all_degenerate(&phi, &psi)?;
            let target = k.unwrap_or(if degenerate && d % 2 == 0 { d / 2 + 1 } else { (d + 1) / 2 });
            let basis = fpgeom::common_isotropic_subspace(&phi, &psi, target, budget)?;
            print_json(&json!({
                "prime": prime,
                "dim": d,
                "all_degenerate": degenerate,
                "target": target,
                "basis": basis,
            }));
        }
    }
    Ok(())
}

fn oracle_cmd(cmd: OracleCmd, budget: u64) -> Outcome {
    match cmd {
        OracleCmd::Count { src, prime, terms } => {
            let counts = oracle::ideal_counts(&src.load()?, prime, terms, budget)?;
            print_json(&json!({
                "prime": prime,
                "N": terms,
                "coefficients": counts.iter().map(big).collect::<Vec<_>>(),
            }));
        }
        OracleCmd::Compare { src, prime, terms } => {
            let report = oracle::compare_report(&src.load()?, prime, terms, budget)?;
            print_json(&report);
            if report.verdict == "mismatch" {
                return Err(Failure::Verification("closed form disagrees with the counts".into()));
            }
        }
        OracleCmd::Types { n, prime, ty, r, k } => {
            let types = match (ty, r) {
                (Some(ty), Some(r)) => vec![(FlagType::new(n, &parse_set(&ty)?)?, parse_list(&r)?)],
                (None, None) => oracle::types_up_to(n, k),
                _ => return Err(Error::InvalidArgument("--type and --r go together".into()).into()),
            };
            let counts = types
                .iter()
                .map(|(ft, r)| oracle::count_lattices_of_type(ft, r, prime, budget))
                .collect::<Result<Vec<_>>>()?;
            let all_agree = counts.iter().all(oracle::TypeCount::agrees);
            print_json(&json!({ "counts": counts, "agree": all_agree }));
            if !all_agree {
                return Err(Failure::Verification("type counts disagree".into()));
            }
        }
    }
    Ok(())
}

impl Source {
    fn load(&self) -> Result<Presentation> {
        match (&self.file, self.n) {
            (Some(path), _) => load_presentation(path),
            (None, Some(n)) => Presentation::grenham(n),
            (None, None) => Err(Error::InvalidArgument("give --file or --n".into())),
        }
    }
}

impl Hypersurface {
    fn load(&self) -> Result<(MPoly, usize)> {
        match (&self.file, &self.poly) {
            (Some(path), _) => {
                let pres = load_presentation(path)?;
                Ok((grouppres::pfaffian(&pres), self.m.unwrap_or(pres.dprime())))
            }
            (None, Some(text)) => {
                let f = parse_poly(text)?;
                let mut m = 0;
                for v in f.vars() {
                    match v {
                        Var::Coord(k) => m = m.max(*k as usize),
                        other => {
                            return Err(Error::UnexpectedVariable(other.to_string()));
                        }
                    }
                }
                Ok((f, self.m.unwrap_or(m).max(m)))
            }
            (None, None) => Err(Error::InvalidArgument("give --file or --poly".into())),
        }
    }
}

fn load_presentation(path: &PathBuf) -> Result<Presentation> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
    Presentation::from_json(&text)
}

/// Accepts `1,3`, `I=1,3` and the empty set.
fn parse_set(text: &str) -> Result<Vec<u32>> {
    let body = text.trim();
    let body = body.strip_prefix("I=").unwrap_or(body);
    parse_list(body)
}

fn parse_list(text: &str) -> Result<Vec<u32>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse()
                .map_err(|_| Error::Parse(format!("expected a nonnegative integer, got `{s}`")))
        })
        .collect()
}

fn evaluate(f: &MPoly, v: Var, x: u64) -> String {
    f.eval_var(v, &BigRational::from_integer(x.into()))
        .constant_value()
        .to_string()
}

fn big(x: &BigInt) -> serde_json::Value {
    serde_json::Value::Number(x.to_string().parse().expect("integer literal"))
}

fn format_series(coeffs: &[BigInt]) -> String {
    let parts: Vec<String> = coeffs.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(", "))
}

fn print_json(value: &impl serde::Serialize) {
    println!("{}", serde_json::to_string_pretty(value).expect("report serializes"));
}
