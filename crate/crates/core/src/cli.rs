//! Command-line surface: verify certificate documents, generate the
//! instance families, run oracle measurements, evaluate Helly bounds, and
//! decide split covers.
//!
//! Exit codes: 0 accept, 1 reject (or cap exceeded / no cover), 2 usage or
//! parse errors. Output bytes are deterministic for fixed inputs.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::bctree::{check, tree_size, BCTree, Disjunction};
use crate::error::{Error, Result};
use crate::instances::{
    self, gen_box, gen_critical_instance, gen_lifted, gen_simplex_validity, helly_bound,
    helly_number_mixed, lattice_octagon, lattice_square, read_bundle, write_bundle,
};
use crate::rational::{RVec, Rational};
use crate::search::{complexity_report, family_for, MoveFamily};
use crate::splitcover::{covers, min_split_cover, CoverOutcome, GSplit, Region};

#[derive(Parser, Debug)]
#[command(
    name = "hellycert",
    about = "Branch-and-cut certificates for integer points in rational polyhedra",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Verify a certificate document and print verdict, size, and work.
    Check {
        /// Certificate JSON file (context, system, goal, root).
        file: PathBuf,
    },
    /// Generate an instance bundle: box, simplex, lifted, or critical.
    Gen {
        /// Family name: box | simplex | lifted | critical.
        name: String,
        /// Family parameter n.
        #[arg(long)]
        n: usize,
        /// Output directory for the bundle.
        #[arg(long)]
        out: PathBuf,
        /// Base polygon for the lifted family: square | octagon.
        #[arg(long, default_value = "octagon")]
        base: String,
    },
    /// Measure family-relative complexities of a bundle directory.
    Measure {
        /// Bundle directory written by `gen`.
        bundle: PathBuf,
        /// Extra split-disjunction coefficients up to this magnitude.
        #[arg(long, default_value_t = 1)]
        family_alpha_max: i64,
        /// Lowest split offset for explicitly ranged families.
        #[arg(long, allow_negative_numbers = true)]
        family_beta_min: Option<i64>,
        /// Highest split offset for explicitly ranged families.
        #[arg(long, allow_negative_numbers = true)]
        family_beta_max: Option<i64>,
        #[arg(long, default_value_t = 9)]
        size_cap: u64,
        #[arg(long)]
        depth_cap: Option<usize>,
        /// Drop all branching moves (pure cutting plane proofs).
        #[arg(long, default_value_t = false)]
        pure_cuts: bool,
        /// Write the report JSON here as well as summarizing to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a certificate-size lower bound from Helly numbers.
    Bound {
        /// Critical family size t (used with --h).
        #[arg(long)]
        t: Option<u64>,
        /// Helly number h' of the relaxation system (used with --t).
        #[arg(long)]
        h: Option<u64>,
        /// Lattice dimensions of a mixed system (used with --n2).
        #[arg(long)]
        n1: Option<u32>,
        /// Continuous dimensions of a mixed system (used with --n1).
        #[arg(long)]
        n2: Option<u64>,
    },
    /// Decide a split cover for a region file and print the cover number
    /// or a witness point.
    Cover {
        /// Region JSON file: {"outer": polyhedron, "inner": polyhedron}.
        region: PathBuf,
        #[arg(long, default_value_t = 1)]
        family_alpha_max: i64,
        #[arg(long, default_value_t = -2, allow_negative_numbers = true)]
        family_beta_min: i64,
        #[arg(long, default_value_t = 5, allow_negative_numbers = true)]
        family_beta_max: i64,
    },
}

/// Caps rayon's pool from HELLYCERT_THREADS; later calls are no-ops.
pub fn configure_threads_from_env() {
    if let Ok(v) = std::env::var("HELLYCERT_THREADS") {
        if let Ok(k) = v.trim().parse::<usize>() {
            if k >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
            }
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// All coprime integer vectors with entries in `[-alpha_max, alpha_max]`,
/// one representative per ± pair (first nonzero entry positive).
fn coprime_normals(dim: usize, alpha_max: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut current = vec![0i64; dim];
    fn rec(dim: usize, alpha_max: i64, i: usize, current: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if i == dim {
            let gcd = current.iter().fold(BigInt::zero(), |g, &v| g.gcd(&BigInt::from(v)));
            if gcd == BigInt::from(1) {
                if let Some(first) = current.iter().find(|&&v| v != 0) {
                    if *first > 0 {
                        out.push(current.clone());
                    }
                }
            }
            return;
        }
        for v in -alpha_max..=alpha_max {
            current[i] = v;
            rec(dim, alpha_max, i + 1, current, out);
        }
        current[i] = 0;
    }
    rec(dim, alpha_max, 0, &mut current, &mut out);
    out
}

fn split_family(dim: usize, alpha_max: i64, beta_min: i64, beta_max: i64) -> Vec<GSplit> {
    let mut out = Vec::new();
    for normal in coprime_normals(dim, alpha_max) {
        for beta in beta_min..=beta_max {
            out.push(GSplit {
                alpha: RVec::from_ints(&normal),
                beta: Rational::from_int(beta),
            });
        }
    }
    out
}

fn cmd_check(file: &Path) -> Result<i32> {
    let tree: BCTree = read_json(file)?;
    let v = check(&tree);
    let size = tree_size(&tree);
    if v.accepted {
        println!("verdict=accepted size={size} work={}", v.work);
        Ok(0)
    } else {
        println!("verdict=rejected size={size} work={} reason={}", v.work, v.reason);
        Ok(1)
    }
}

fn cmd_gen(name: &str, n: usize, out: &Path, base: &str) -> Result<i32> {
    let bundle = match name {
        "box" => gen_box(n)?,
        "simplex" => gen_simplex_validity(n)?,
        "critical" => gen_critical_instance(n)?,
        "lifted" => {
            let base = match base {
                "square" => lattice_square(),
                "octagon" => lattice_octagon(),
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "unknown base polygon {other:?} (expected square or octagon)"
                    )))
                }
            };
            gen_lifted(&base, n)?
        }
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown example {other:?} (expected box, simplex, lifted, or critical)"
            )))
        }
    };
    write_bundle(&bundle, out)?;
    for (tree, claim) in bundle.certificates.iter().zip(&bundle.claimed_sizes) {
        println!("verified goal={} size={}", tree.goal.kind_name(), claim.size);
    }
    println!("wrote {} certificates to {}", bundle.certificates.len(), out.display());
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_measure(
    bundle_dir: &Path,
    alpha_max: i64,
    beta_min: Option<i64>,
    beta_max: Option<i64>,
    size_cap: u64,
    depth_cap: Option<usize>,
    pure_cuts: bool,
    out: Option<&Path>,
) -> Result<i32> {
    let bundle = read_bundle(bundle_dir)?;
    let mut targets = bundle.hull_target.rows.clone();
    for claim in &bundle.claimed_sizes {
        if let crate::bctree::Goal::Validity { target } = &claim.goal {
            targets.push(target.clone());
        }
    }
    let mut family: MoveFamily = family_for(&bundle.system, &targets, size_cap)?;
    if let (Some(lo), Some(hi)) = (beta_min, beta_max) {
        family.disjunctions = Vec::new();
        for i in 0..bundle.system.dim {
            for beta in lo..=hi {
                family.disjunctions.push(Disjunction::variable(i, beta));
            }
        }
    }
    if alpha_max > 1 {
        let (lo, hi) = (beta_min.unwrap_or(-2), beta_max.unwrap_or(5));
        for s in split_family(bundle.system.dim, alpha_max, lo, hi) {
            let axis = s.alpha.iter().filter(|e| !e.is_zero()).count() == 1;
            if !axis {
                family.disjunctions.push(Disjunction::Split { alpha: s.alpha, beta: s.beta });
            }
        }
    }
    if let Some(d) = depth_cap {
        family.depth_cap = d;
    }
    if pure_cuts {
        family = family.pure_cuts();
    }
    let witnesses = instances::membership_witnesses(&bundle.system, &bundle.hull_target)?;
    let report = complexity_report(&bundle, &family, &witnesses)?;

    println!(
        "instance={} facet={} hull={} membership={} cap_exceeded={}",
        report.instance,
        report.facet.map_or("-".into(), |v| v.to_string()),
        report.hull.map_or("-".into(), |v| v.to_string()),
        report.membership.map_or("-".into(), |v| v.to_string()),
        report.cap_exceeded
    );
    for (h, s) in &report.validity {
        println!("validity target={{{} <= {}}} size={s}", h.normal, h.rhs);
    }
    for (h, s) in &report.reverse {
        println!("reverse target={{{} <= {}}} size={s}", h.normal, h.rhs);
    }
    if let Some(path) = out {
        std::fs::write(
            path,
            serde_json::to_string_pretty(&report).map_err(|e| Error::Io(e.to_string()))? + "\n",
        )?;
    }
    Ok(if report.cap_exceeded { 1 } else { 0 })
}

fn cmd_bound(t: Option<u64>, h: Option<u64>, n1: Option<u32>, n2: Option<u64>) -> Result<i32> {
    match (t, h, n1, n2) {
        (Some(t), Some(h), None, None) => {
            println!("{}", helly_bound(t, h)?);
            Ok(0)
        }
        (None, None, Some(n1), Some(n2)) => {
            println!("{}", helly_number_mixed(n1, n2)?);
            Ok(0)
        }
        _ => Err(Error::InvalidArgument(
            "bound expects either --t with --h, or --n1 with --n2".into(),
        )),
    }
}

fn cmd_cover(region_file: &Path, alpha_max: i64, beta_min: i64, beta_max: i64) -> Result<i32> {
    let region: Region = read_json(region_file)?;
    let region = Region::new(region.outer, region.inner)?;
    let family = split_family(region.dim(), alpha_max, beta_min, beta_max);
    match min_split_cover(&region, &family)? {
        Some(k) => {
            println!("cover={k}");
            Ok(0)
        }
        None => {
            match covers(&region, &family)? {
                CoverOutcome::Witness(w) => println!("cover=none witness={w}"),
                CoverOutcome::Covered => unreachable!("full family covers"),
            }
            Ok(1)
        }
    }
}

/// Parses `argv` and runs one command, returning the process exit code.
pub fn run<I>(argv: I) -> i32
where
    I: IntoIterator<Item = String>,
{
    configure_threads_from_env();
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own help/usage text
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let outcome = match &cli.command {
        Command::Check { file } => cmd_check(file),
        Command::Gen { name, n, out, base } => cmd_gen(name, *n, out, base),
        Command::Measure {
            bundle,
            family_alpha_max,
            family_beta_min,
            family_beta_max,
            size_cap,
            depth_cap,
            pure_cuts,
            out,
        } => cmd_measure(
            bundle,
            *family_alpha_max,
            *family_beta_min,
            *family_beta_max,
            *size_cap,
            *depth_cap,
            *pure_cuts,
            out.as_deref(),
        ),
        Command::Bound { t, h, n1, n2 } => cmd_bound(*t, *h, *n1, *n2),
        Command::Cover { region, family_alpha_max, family_beta_min, family_beta_max } => {
            cmd_cover(region, *family_alpha_max, *family_beta_min, *family_beta_max)
        }
    };
    match outcome {
        Ok(code) => code,
        Err(Error::Parse(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(Error::InvalidArgument(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
