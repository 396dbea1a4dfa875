//! Command-line front end: bound-curve emission, figure reproduction,
//! exact search, constructions, and certificate verification with stable
//! text/CSV outputs.
//!
//! Exit status: 0 when all requested checks pass, 1 on computation errors
//! or failed checks, 2 on usage errors.

use clap::{Args, Parser, Subcommand, ValueEnum};
use cyclecodes::bounds::{self, BoundCurve, CurveId, CurveKind};
use cyclecodes::codes::{self, Code, ExtDist};
use cyclecodes::fourier;
use cyclecodes::kraw::{self, Scheme};
use cyclecodes::report::CheckItem;
use cyclecodes::{certs, CycleParams};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "cyclecodes",
    version,
    about = "Bounds, search and certificates for codes on cycle graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Units {
    Nats,
    Bits,
}

impl Units {
    fn scale(self) -> f64 {
        match self {
            Units::Nats => 1.0,
            Units::Bits => std::f64::consts::LN_2,
        }
    }
}

#[derive(Args)]
struct GridArgs {
    /// Smallest delta on the grid
    #[arg(long = "delta-min", default_value_t = 0.0)]
    delta_min: f64,
    /// Largest delta on the grid
    #[arg(long = "delta-max", default_value_t = 1.0)]
    delta_max: f64,
    /// Number of evenly spaced grid points
    #[arg(long, default_value_t = 201)]
    steps: usize,
    /// Output unit for rates
    #[arg(long, value_enum, default_value_t = Units::Nats)]
    units: Units,
}

#[derive(Subcommand)]
enum Command {
    /// Emit one bound curve as CSV
    Bound {
        #[arg(long)]
        q: u32,
        /// Curve identifier (for example upper-main or lower-gv-pentagon)
        #[arg(long, value_parser = parse_curve_id)]
        curve: CurveId,
        #[command(flatten)]
        grid: GridArgs,
        /// Write to this file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit the full curve family of a figure as CSV files
    Figure {
        /// Which figure: pentagon or ninegon
        #[arg(value_parser = parse_figure)]
        name: String,
        #[command(flatten)]
        grid: GridArgs,
        /// Output directory (default `figure-<name>`)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact maximum code size with a witness
    Search {
        #[arg(long)]
        q: u16,
        #[arg(long)]
        n: usize,
        /// Minimum distance, an integer or `inf`
        #[arg(long, value_parser = parse_ext_dist)]
        d: ExtDist,
        /// Vertex budget for the exact search
        #[arg(long, default_value_t = codes::default_budget())]
        budget: u64,
        /// Write the witness code to this file
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build one of the lower-bound codes and write it to a file
    Construct {
        #[command(subcommand)]
        family: ConstructFamily,
    },
    /// Re-check a code file or a certificate file
    Verify {
        #[command(subcommand)]
        what: VerifyWhat,
    },
    /// Solve the scheme linear program and print the certified rate
    Lp {
        /// Odd cycle order
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: usize,
        /// Target distance, an integer or `inf`
        #[arg(long, value_parser = parse_ext_dist)]
        d: ExtDist,
        /// Write the certificate to this file
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the transform/assignment/positivity battery
    Cert {
        /// Odd cycle order
        #[arg(long)]
        q: u16,
        #[arg(long)]
        n: usize,
        /// Target distance for the assembled assignment
        #[arg(long, default_value_t = 2)]
        d: usize,
        /// Override the positive-semidefiniteness tolerance
        #[arg(long)]
        tol: Option<f64>,
    },
}

#[derive(Subcommand)]
enum ConstructFamily {
    /// Pentagon coset code of length 2k with finite distance d
    Pentagon {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Coset code for q = 2^r + 1 of length r*k with finite distance d
    TwoROne {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Even-cycle lift of a greedy binary code of length n and distance d
    Even {
        #[arg(long)]
        q: u16,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum VerifyWhat {
    /// Recompute the minimum distance of a code file
    Code {
        path: PathBuf,
        /// Expected minimum distance, an integer or `inf`
        #[arg(long, value_parser = parse_ext_dist)]
        d: Option<ExtDist>,
    },
    /// Re-check a certificate file
    Cert {
        path: PathBuf,
        /// Odd cycle order, to also print the certified rate
        #[arg(long)]
        q: Option<u32>,
    },
}

fn parse_ext_dist(s: &str) -> Result<ExtDist, String> {
    if s == "inf" {
        return Ok(ExtDist::Infinite);
    }
    s.parse::<u64>()
        .map(ExtDist::Finite)
        .map_err(|_| format!("distance must be a positive integer or `inf`, got `{s}`"))
}

fn parse_curve_id(s: &str) -> Result<CurveId, String> {
    CurveId::parse(s).ok_or_else(|| {
        format!(
            "unknown curve `{s}`; known: {}",
            CurveId::ALL.map(|c| c.label()).join(", ")
        )
    })
}

fn parse_figure(s: &str) -> Result<String, String> {
    if figure_family(s).is_some() {
        Ok(s.to_string())
    } else {
        Err(format!("unknown figure `{s}`; known: pentagon, ninegon"))
    }
}

/// 12 significant digits, fixed scientific form; keeps every emitted file
/// byte-identical across runs.
fn fmt12(x: f64) -> String {
    format!("{:.11e}", x)
}

fn curve_csv(curve: &BoundCurve, units: Units) -> String {
    let mut out = String::from("delta,rate,curve\n");
    for p in &curve.points {
        out.push_str(&fmt12(p.delta));
        out.push(',');
        out.push_str(&fmt12(p.rate / units.scale()));
        out.push(',');
        out.push_str(&curve.label);
        out.push('\n');
    }
    out
}

fn figure_family(name: &str) -> Option<(u32, Vec<CurveId>)> {
    match name {
        "pentagon" => Some((
            5,
            vec![
                CurveId::UpperMain,
                CurveId::UpperProp2Lp2,
                CurveId::LowerGvPentagon,
            ],
        )),
        "ninegon" => Some((
            9,
            vec![
                CurveId::UpperMain,
                CurveId::UpperProp2Lp2,
                CurveId::LowerProp2Gv,
                CurveId::Lower2r1Gv,
                CurveId::Lower9Cycle,
            ],
        )),
        _ => None,
    }
}

fn print_checks(checks: &[CheckItem]) -> bool {
    let mut ok = true;
    for c in checks {
        println!("{c}");
        ok &= c.pass;
    }
    ok
}

fn write_code_file(path: &Path, code: &Code) -> Result<(), String> {
    let mut buf = Vec::new();
    codes::write_code(&mut buf, code).map_err(|e| e.to_string())?;
    fs::write(path, buf).map_err(|e| format!("{}: {e}", path.display()))
}

fn odd_params(q: u32) -> Result<(f64, f64), String> {
    let p: CycleParams = bounds::cycle_params(q).map_err(|e| e.to_string())?;
    p.odd().map_err(|e| e.to_string())
}

fn run(cli: Cli) -> Result<bool, String> {
    match cli.command {
        Command::Bound {
            q,
            curve,
            grid,
            out,
        } => {
            let deltas = bounds::delta_grid(grid.delta_min, grid.delta_max, grid.steps);
            let c = bounds::build_curve(q, curve, &deltas).map_err(|e| e.to_string())?;
            let csv = curve_csv(&c, grid.units);
            match out {
                Some(path) => {
                    fs::write(&path, csv).map_err(|e| format!("{}: {e}", path.display()))?
                }
                None => print!("{csv}"),
            }
            Ok(true)
        }
        Command::Figure { name, grid, out } => {
            let (q, family) = figure_family(&name)
                .ok_or_else(|| format!("unknown figure `{name}`; known: pentagon, ninegon"))?;
            let dir = out.unwrap_or_else(|| PathBuf::from(format!("figure-{name}")));
            fs::create_dir_all(&dir).map_err(|e| format!("{}: {e}", dir.display()))?;
            let deltas = bounds::delta_grid(grid.delta_min, grid.delta_max, grid.steps);
            let mut uppers = Vec::new();
            let mut lowers = Vec::new();
            for id in &family {
                let c = bounds::build_curve(q, *id, &deltas).map_err(|e| e.to_string())?;
                let path = dir.join(format!("{}.csv", id.label()));
                fs::write(&path, curve_csv(&c, grid.units))
                    .map_err(|e| format!("{}: {e}", path.display()))?;
                println!("wrote {}", path.display());
                match c.kind {
                    CurveKind::Upper => uppers.push(c),
                    CurveKind::Lower => lowers.push(c),
                }
            }
            for (curves, kind) in [(&uppers, CurveKind::Upper), (&lowers, CurveKind::Lower)] {
                let env = bounds::envelope(curves, kind).map_err(|e| e.to_string())?;
                let path = dir.join(format!("{}.csv", env.label));
                fs::write(&path, curve_csv(&env, grid.units))
                    .map_err(|e| format!("{}: {e}", path.display()))?;
                println!("wrote {}", path.display());
            }
            Ok(true)
        }
        Command::Search {
            q,
            n,
            d,
            budget,
            out,
        } => {
            let (m, witness) = codes::alpha_search(q, n, d, budget).map_err(|e| e.to_string())?;
            println!("M = {m}");
            if let Some(path) = out {
                write_code_file(&path, &witness)?;
                println!("wrote {}", path.display());
            }
            Ok(true)
        }
        Command::Construct { family } => {
            let (code, path) = match family {
                ConstructFamily::Pentagon { k, d, out } => (
                    codes::construct_pentagon(k, d).map_err(|e| e.to_string())?,
                    out,
                ),
                ConstructFamily::TwoROne { r, k, d, out } => (
                    codes::construct_2r1(r, k, d).map_err(|e| e.to_string())?,
                    out,
                ),
                ConstructFamily::Even { q, n, d, out } => {
                    if d > n as u64 {
                        return Err(format!("need d <= n, got d = {d}, n = {n}"));
                    }
                    let binary = codes::greedy_gv_factor(&codes::WeightTable::hamming(2), n, d)
                        .map_err(|e| e.to_string())?;
                    let inner = Code::new(2, n, binary).map_err(|e| e.to_string())?;
                    (
                        codes::construct_even(q, &inner).map_err(|e| e.to_string())?,
                        out,
                    )
                }
            };
            write_code_file(&path, &code)?;
            println!("q = {} n = {} words = {}", code.q(), code.n(), code.len());
            println!("dmin = {}", codes::dmin(&code));
            println!("wrote {}", path.display());
            Ok(true)
        }
        Command::Verify { what } => match what {
            VerifyWhat::Code { path, d } => {
                let file = fs::File::open(&path).map_err(|e| format!("{}: {e}", path.display()))?;
                let code =
                    codes::read_code(std::io::BufReader::new(file)).map_err(|e| e.to_string())?;
                let dmin = codes::dmin(&code);
                println!("q = {} n = {} words = {}", code.q(), code.n(), code.len());
                println!("dmin = {dmin}");
                match d {
                    None => Ok(true),
                    Some(expect) => {
                        let pass = dmin >= expect;
                        println!("CHECK dmin {} {}", if pass { "PASS" } else { "FAIL" }, dmin);
                        Ok(pass)
                    }
                }
            }
            VerifyWhat::Cert { path, q } => {
                let file = fs::File::open(&path).map_err(|e| format!("{}: {e}", path.display()))?;
                let cert = kraw::read_certificate(std::io::BufReader::new(file))
                    .map_err(|e| e.to_string())?;
                let report = kraw::certificate_check(&cert);
                let ok = print_checks(&report.checks);
                println!("certified value = {}", report.certified_value);
                if let Some(q) = q {
                    let (q_prime, theta_l) = odd_params(q)?;
                    if (q_prime - cert.scheme.q_prime).abs() > 1e-9 * q_prime {
                        return Err(format!(
                            "certificate parameter {} does not match q'({q}) = {q_prime}",
                            cert.scheme.q_prime
                        ));
                    }
                    let r = kraw::bound_result(report.certified_value, cert.scheme.n, theta_l);
                    println!("certified rate = {} nats", r.rate);
                }
                Ok(ok && report.feasible)
            }
        },
        Command::Lp { q, n, d, out } => {
            let d = match d {
                ExtDist::Infinite => n + 1,
                ExtDist::Finite(v) => v as usize,
            };
            let (cert, report, result) =
                kraw::certified_bound(q, n, d).map_err(|e| e.to_string())?;
            let ok = print_checks(&report.checks);
            println!("value = {}", result.value);
            println!("log bound = {}", result.log_bound);
            println!("rate = {} nats", result.rate);
            if let Some(path) = out {
                let mut buf = Vec::new();
                kraw::write_certificate(&mut buf, &cert).map_err(|e| e.to_string())?;
                fs::write(&path, buf).map_err(|e| format!("{}: {e}", path.display()))?;
                println!("wrote {}", path.display());
            }
            Ok(ok)
        }
        Command::Cert { q, n, d, tol } => {
            let mut all = true;
            // circulant witness
            let circ = certs::lovasz_circulant(q as u32).map_err(|e| e.to_string())?;
            let spectrum_min = circ
                .eigenvalues_d_minus_j()
                .into_iter()
                .fold(f64::INFINITY, f64::min);
            all &= print_checks(&[CheckItem::new(
                "circulant-spectrum",
                (-spectrum_min).max(0.0),
                1e-10,
            )]);
            // product assignment
            let g = fourier::build_g(q, n).map_err(|e| e.to_string())?;
            let gmax = g.transform().iter().fold(0.0_f64, |a, &v| a.max(v.abs()));
            let gmin = g.transform().iter().fold(f64::INFINITY, |a, &v| a.min(v));
            all &= print_checks(&[CheckItem::new(
                "ghat-nonneg",
                (-gmin).max(0.0),
                1e-12 * gmax.max(1.0),
            )]);
            // sphere transforms
            for ell in 0..=n.min(2) {
                for u in [0usize, 1, n] {
                    if u > n {
                        continue;
                    }
                    let r = fourier::verify_sphere_transform(q, n, ell, u)
                        .map_err(|e| e.to_string())?;
                    all &= print_checks(&[CheckItem::new(
                        format!("sphere-transform-l{ell}-u{u}"),
                        r.max_rel_err,
                        1e-9,
                    )]);
                }
            }
            // scheme LP certificate and the assembled assignment
            let (q_prime, _) = odd_params(q as u32)?;
            let scheme = Scheme::new(n, q_prime).map_err(|e| e.to_string())?;
            let (cert, _) = kraw::lp_solve(scheme, d).map_err(|e| e.to_string())?;
            let report = kraw::certificate_check(&cert);
            all &= print_checks(&report.checks);
            let built = fourier::build_f(q, n, &cert).map_err(|e| e.to_string())?;
            all &= print_checks(&built.checks);
            println!("bound = {}", built.bound);
            // positive-semidefinite witness from the assignment
            let psd_tol = tol.unwrap_or(1e-8 * built.f.len() as f64);
            let mc = certs::cert_from_function(&built.f, ExtDist::Finite(d as u64))
                .map_err(|e| e.to_string())?;
            let checks = mc
                .verify(1e-10 * mc.max_diagonal().max(1.0), psd_tol)
                .map_err(|e| e.to_string())?;
            all &= print_checks(&checks);
            Ok(all)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
