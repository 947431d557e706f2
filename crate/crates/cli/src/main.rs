//! `schemes`: analyze finite association schemes from the command line.
//!
//! Exit codes: 0 for a clean analysis, 1 when an `--expect` assertion fails,
//! 2 for input or usage errors.

use clap::{Parser, Subcommand, ValueEnum};
use scheme_core::classify::classify;
use scheme_core::construct;
use scheme_core::desargues::DesarguesContext;
use scheme_core::faithful::{automorphism_group, schurity};
use scheme_core::format;
use scheme_core::report::{analyze, scheme_sha256};
use scheme_core::saturation::{saturation_bound_holds, SaturationGraph};
use scheme_core::scheme::Scheme;
use scheme_core::separability::{separability_report, SeparabilityOptions};
use std::io::Read;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "schemes",
    version,
    about = "Computing with finite association schemes"
)]
struct Cli {
    /// Cap the worker thread pool (defaults to the core count).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a scheme file and report its basic parameters.
    Validate { file: String },
    /// Summary: rank, valencies, classifier flags, thin structure.
    Info { file: String },
    /// Print the nonzero intersection numbers.
    Tensor { file: String },
    /// Build a scheme and print it in the scheme file format.
    Construct {
        #[command(subcommand)]
        family: Family,
    },
    /// Saturation graph analysis for the valency-k colors.
    Saturation {
        file: String,
        /// Override the vertex valency (defaults to the two-valenced k).
        #[arg(long)]
        k: Option<u32>,
        #[arg(long, value_enum)]
        expect: Option<ExpectSat>,
    },
    /// Search for unlinked initial configurations.
    Desargues {
        file: String,
        /// Print a certificate for every initial configuration.
        #[arg(long)]
        certificates: bool,
        #[arg(long, value_enum)]
        expect: Option<ExpectDes>,
    },
    /// Automorphism group: order and generators.
    Aut {
        file: String,
        #[arg(long)]
        json: bool,
    },
    /// Compare the pair orbits of the automorphism group with the colors.
    Schurian {
        file: String,
        #[arg(long, value_enum)]
        expect: Option<ExpectSchur>,
    },
    /// Realize every algebraic automorphism by a point bijection.
    Separability {
        file: String,
        /// Sweep the constructive extension over faithful two-point seeds
        /// for the first N automorphisms ("all" lifts the cap).
        #[arg(long, default_value = "6")]
        fhat_phis: String,
        /// Per-automorphism seed budget for that sweep ("all" lifts it).
        #[arg(long, default_value = "50000")]
        fhat_seeds: String,
    },
    /// Run every analysis and print a combined report.
    Analyze {
        file: String,
        #[arg(long)]
        json: bool,
        /// Include wall-clock timings (makes JSON output run-dependent).
        #[arg(long)]
        timings: bool,
    },
}

#[derive(Subcommand)]
enum Family {
    /// Scheme of the affine space AG(d, q).
    Affine { d: usize, q: usize },
    /// Cyclotomic scheme on GF(q) for the index-m multiplicative subgroup.
    Cyclotomic { q: usize, m: usize },
    /// Thin scheme of the group with the given Cayley table file.
    Group { file: String },
    /// Orbital scheme of the permutation group in the given file.
    Orbital { file: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum ExpectSat {
    Saturated,
    NotSaturated,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExpectDes {
    Desarguesian,
    NotDesarguesian,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExpectSchur {
    Schurian,
    NotSchurian,
}

enum Failure {
    Input(String),
    Expectation(String),
}

impl From<format::ParseError> for Failure {
    fn from(e: format::ParseError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<construct::ConstructError> for Failure {
    fn from(e: construct::ConstructError) -> Self {
        Failure::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    reset_sigpipe();
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads.max(1))
            .build_global();
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Expectation(msg)) => {
            eprintln!("expectation failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// Restore the default SIGPIPE disposition so piping into `head` and
/// friends terminates the process instead of panicking on a failed print.
#[cfg(unix)]
fn reset_sigpipe() {
    // SAFETY: installing SIG_DFL for SIGPIPE is async-signal-safe and has
    // no preconditions.
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
}

#[cfg(not(unix))]
fn reset_sigpipe() {}

fn read_input(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        Ok(buf)
    } else {
        Ok(std::fs::read_to_string(path)?)
    }
}

fn load_scheme(path: &str) -> Result<Scheme, Failure> {
    Ok(format::parse_scheme(&read_input(path)?)?)
}

fn two_valenced_k(x: &Scheme, k: Option<u32>) -> Result<u32, Failure> {
    if let Some(k) = k {
        return Ok(k);
    }
    classify(x).two_valenced.ok_or_else(|| {
        Failure::Input(format!(
            "scheme is not two-valenced (valencies {:?}); pass --k explicitly",
            x.valencies()
        ))
    })
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Validate { file } => {
            let x = load_scheme(&file)?;
            println!("valid scheme: {} points, rank {}", x.n(), x.rank());
            println!("sha256: {}", scheme_sha256(&x));
            Ok(())
        }
        Command::Info { file } => {
            let x = load_scheme(&file)?;
            print_info(&x);
            Ok(())
        }
        Command::Tensor { file } => {
            let x = load_scheme(&file)?;
            let t = x.tensor();
            println!("# valencies");
            for s in x.colors() {
                println!("n[{s}] = {}  dual {}", x.valency(s), x.dual(s));
            }
            println!("# nonzero intersection numbers c[r,s]^t");
            for r in x.colors() {
                for s in x.colors() {
                    for t_col in x.colors() {
                        let c = t.c(r, s, t_col);
                        if c > 0 {
                            println!("c[{r},{s}]^{t_col} = {c}");
                        }
                    }
                }
            }
            Ok(())
        }
        Command::Construct { family } => {
            let x = match family {
                Family::Affine { d, q } => construct::affine_scheme(d, q)?,
                Family::Cyclotomic { q, m } => construct::cyclotomic_scheme(q, m)?,
                Family::Group { file } => {
                    let table = format::parse_group_table(&read_input(&file)?)?;
                    construct::group_scheme(&table)?
                }
                Family::Orbital { file } => {
                    let spec = format::parse_permutation_group(&read_input(&file)?)?;
                    construct::orbital_scheme(&spec)?
                }
            };
            print!("{}", format::write_scheme(&x));
            Ok(())
        }
        Command::Saturation { file, k, expect } => {
            let x = load_scheme(&file)?;
            let k = two_valenced_k(&x, k)?;
            let g = SaturationGraph::build(&x, k).map_err(|e| Failure::Input(e.to_string()))?;
            let out = g.saturation();
            println!("k = {k}, vertices = {:?}", g.vertices());
            for (i, &v) in g.vertices().iter().enumerate() {
                let row: Vec<usize> = g
                    .vertices()
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| g.adjacent_idx(i, j))
                    .map(|(_, &w)| w)
                    .collect();
                println!("  {v} ~ {row:?}");
            }
            println!("bound |S_k| > 4c(k-1): {}", saturation_bound_holds(&x, k));
            match &out.witness {
                None => println!("saturated: every N(T) with |T| <= 4 is nonempty"),
                Some(w) => println!("NOT saturated: N({w:?}) is empty"),
            }
            check_expect(
                expect.map(|e| matches!(e, ExpectSat::Saturated)),
                out.saturated,
                "saturated",
            )
        }
        Command::Desargues {
            file,
            certificates,
            expect,
        } => {
            let x = load_scheme(&file)?;
            let ctx = DesarguesContext::new(&x).map_err(|e| Failure::Input(e.to_string()))?;
            if certificates {
                for cfg in ctx.initial_configurations() {
                    match ctx.is_linked(&cfg) {
                        Some(c) => println!(
                            "linked   x={} y={} z={} r={} s={} via q={} u={} v={} w={} t={}",
                            c.x, c.y, c.z, c.r, c.s, c.q, c.u, c.v, c.w, c.t
                        ),
                        None => println!(
                            "UNLINKED x={} y={} z={} r={} s={}",
                            cfg.x, cfg.y, cfg.z, cfg.r, cfg.s
                        ),
                    }
                }
            }
            let out = ctx.is_desarguesian();
            println!(
                "triples {} (loop-condition {}, disjoint-neighbor {}), configurations {} ({} searched)",
                out.stats.triples,
                out.stats.l1_triples,
                out.stats.l2_triples,
                out.stats.total_configs,
                out.stats.searched_configs
            );
            match &out.failing {
                None => println!("Desarguesian: every initial configuration is linked"),
                Some(f) => println!(
                    "NOT Desarguesian: first unlinked configuration x={} y={} z={} r={} s={}",
                    f.x, f.y, f.z, f.r, f.s
                ),
            }
            check_expect(
                expect.map(|e| matches!(e, ExpectDes::Desarguesian)),
                out.desarguesian,
                "desarguesian",
            )
        }
        Command::Aut { file, json } => {
            let x = load_scheme(&file)?;
            let g = automorphism_group(&x);
            if json {
                let value = serde_json::json!({
                    "order": g.order.to_string(),
                    "generators": g.generators,
                    "element_count": g.elements.as_ref().map(|e| e.len()),
                });
                println!(
                    "{}",
                    serde_json::to_string_pretty(&value).expect("serializes")
                );
            } else {
                println!("order {}", g.order);
                println!("generators ({}):", g.generators.len());
                for gen in &g.generators {
                    let images: Vec<String> = gen.iter().map(|p| p.to_string()).collect();
                    println!("  {}", images.join(" "));
                }
                if let Some(elements) = &g.elements {
                    println!("elements: {}", elements.len());
                }
            }
            Ok(())
        }
        Command::Schurian { file, expect } => {
            let x = load_scheme(&file)?;
            let report = schurity(&x);
            println!("automorphism group order {}", report.aut_order);
            println!("transitive: {}", report.aut_transitive);
            println!(
                "pair orbits: {} (rank {})",
                report.pair_orbit_count,
                x.rank()
            );
            println!("schurian: {}", report.schurian);
            check_expect(
                expect.map(|e| matches!(e, ExpectSchur::Schurian)),
                report.schurian,
                "schurian",
            )
        }
        Command::Separability {
            file,
            fhat_phis,
            fhat_seeds,
        } => {
            let x = load_scheme(&file)?;
            fn cap<T: std::str::FromStr>(arg: &str, flag: &str) -> Result<Option<T>, Failure> {
                match arg {
                    "all" => Ok(None),
                    n => n.parse::<T>().map(Some).map_err(|_| {
                        Failure::Input(format!("{flag} expects a number or \"all\", got {n:?}"))
                    }),
                }
            }
            let opts = SeparabilityOptions {
                fhat_phi_cap: cap(&fhat_phis, "--fhat-phis")?,
                fhat_seed_cap: cap(&fhat_seeds, "--fhat-seeds")?,
            };
            let report = separability_report(&x, &opts);
            println!("algebraic automorphisms: {}", report.automorphism_count);
            for (i, o) in report.outcomes.iter().enumerate() {
                let mut line = format!(
                    "phi {i}: realized by backtracking: {}",
                    o.realized_by_backtracking
                );
                if let Some(f) = &o.fhat {
                    line.push_str(&format!(
                        "; constructive extension: {}/{} seeds ok ({} faithful seeds in total)",
                        f.seeds - f.failures,
                        f.seeds,
                        f.seeds_total
                    ));
                    if let Some(seed) = f.first_failure {
                        line.push_str(&format!("; first failure {seed:?}"));
                    }
                }
                println!("{line}");
            }
            println!(
                "algebraically-auto-separable: {}",
                if report.auto_separable { "yes" } else { "no" }
            );
            if !report.fhat_applicable {
                println!("constructive extension not applicable (needs a saturated Desarguesian two-valenced scheme)");
            }
            Ok(())
        }
        Command::Analyze {
            file,
            json,
            timings,
        } => {
            let x = load_scheme(&file)?;
            let report = analyze(&x, &SeparabilityOptions::default(), timings);
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report).expect("report serializes")
                );
            } else {
                print_info(&x);
                if let Some(sat) = &report.saturation {
                    println!(
                        "saturated: {} (k = {}, |S_k| = {}, bound: {})",
                        sat.saturated, sat.k, sat.vertex_count, sat.bound_holds
                    );
                }
                if let Some(des) = &report.desargues {
                    println!("desarguesian: {}", des.desarguesian);
                }
                println!(
                    "schurian: {} (|Aut| = {})",
                    report.schurity.schurian, report.schurity.aut_order
                );
                println!(
                    "algebraically-auto-separable: {} ({} automorphisms, {} realized)",
                    report.separability.auto_separable,
                    report.separability.automorphism_count,
                    report.separability.realized_count
                );
                if let Some(t) = &report.timing_ms {
                    println!("timings (ms): {t:?}");
                }
            }
            Ok(())
        }
    }
}

fn print_info(x: &Scheme) {
    println!("points: {}, rank: {}", x.n(), x.rank());
    println!("sha256: {}", scheme_sha256(x));
    let p = classify(x);
    println!("valencies: {:?}", x.valencies());
    println!("valency spectrum: {:?}", p.valency_spectrum);
    println!("two-valenced: {:?}", p.two_valenced);
    println!(
        "quasi-thin: {} (condition n(s*s) != 2: {})",
        p.quasi_thin, p.quasi_thin_condition
    );
    println!("pseudocyclic: {:?}", p.pseudocyclic);
    println!("thin radical: {:?}", p.thin.thin_radical);
    println!("thin residue: {:?}", p.thin.thin_residue);
    match p.thin.profile() {
        Ok(g) => println!(
            "residue group: order {}, exponent {}, abelian {}, elementary rank {:?}",
            g.order, g.exponent, g.abelian, g.elementary_abelian_rank
        ),
        Err(e) => println!("residue group: {e}"),
    }
}

fn check_expect(expected: Option<bool>, actual: bool, what: &str) -> Result<(), Failure> {
    match expected {
        Some(e) if e != actual => Err(Failure::Expectation(format!(
            "expected {what} = {e}, analysis produced {actual}"
        ))),
        _ => Ok(()),
    }
}
