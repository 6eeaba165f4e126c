use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::Context;
use clap::{Parser, Subcommand};
use ratmap::approx::{presentation_matrix, presentation_bounds_check};
use ratmap::cohomology::m_mu_dims;
use ratmap::fibers::{find_one_dim_fibers, find_one_dim_fibers_with, lci_proxy, verify_divisor_bound, FiberInventory};
use ratmap::map::ParameterizedMap;
use ratmap::mapfile::parse_map_file;
use ratmap::report::{run_pipeline, PipelineOptions, ReportDocument, EXIT_HYPOTHESIS, EXIT_INCOMPLETE, EXIT_OK};
use ratmap::Error;

#[derive(Parser)]
#[command(name = "ratmap", version, about = "Fibers, base loci and local cohomology of rational maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every computation and print a summary; optionally write the JSON report.
    Analyze {
        file: PathBuf,
        /// Where to write the JSON report (`-` for stdout).
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        s_max: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Internal degree of the cohomology table; defaults to `-m`.
        #[arg(long, allow_hyphen_values = true)]
        mu: Option<i64>,
        /// Seconds allowed for the cohomology table.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// List the fibers of dimension m-1 and their divisors.
    Fibers {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        s_max: u32,
    },
    /// Dimensions of H^m(I^s) in degree mu + s d.
    Cohomology {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        mu: i64,
        #[arg(long)]
        s_max: u32,
    },
    /// Implicit equations of the image.
    Image { file: PathBuf },
    /// Degree bounds on fibers, the base locus and N.
    Bounds {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        s_max: u32,
    },
}

fn load(path: &Path) -> anyhow::Result<ParameterizedMap> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_map_file(&text).with_context(|| format!("in {}", path.display()))
}

fn print_fibers(inv: &FiberInventory) {
    println!("fibers of dimension m-1: {}", inv.records.len());
    for r in &inv.records {
        let routes: Vec<String> = r.found_by.iter().map(|x| format!("{x:?}").to_lowercase()).collect();
        println!("  y = {}  h_y = {}  deg = {}  [{}]", r.point, r.divisor, r.divisor_degree, routes.join(", "));
    }
    if inv.complete {
        println!("complete: yes ({})", inv.complete_because.join("; "));
    } else {
        println!("complete: not certified");
    }
    for n in &inv.notes {
        println!("note: {n}");
    }
}

fn print_report(doc: &ReportDocument) {
    let h = &doc.hypotheses;
    println!("map of degree {} over {}", doc.input.degree, doc.input.field);
    if !h.gcd_one {
        println!("common factor removed: {}", doc.input.removed_factor);
    }
    println!("image dimension {} (generically finite: {})", h.image_dimension, h.generically_finite);
    println!("base locus: HS numerator {}, dim {}, degree {}", doc.base_locus.hilbert_numerator, doc.base_locus.dimension, doc.base_locus.degree);
    println!("resolution: {}", doc.base_locus.resolution);
    println!("indeg(I^sat) = {} (d = {})", h.indeg_saturation, doc.input.degree);
    if let Some(l) = h.lci_proxy {
        println!("lci proxy: {l}");
    }
    if let Some(inv) = &doc.fibers {
        print_fibers(inv);
    }
    for t in &doc.divisor_bound {
        println!("s = {}: sum deg h_y = {}, indeg = {}, sd = {}: {:?}", t.s, t.divisor_degree_sum, t.nu, t.sd, t.verdict);
    }
    if let Some(c) = &doc.cohomology {
        let vals: Vec<String> = c.table.values.iter().map(|(s, v)| format!("{s}:{v}")).collect();
        println!("N table (mu = {}): {}", c.table.mu, vals.join(" "));
    }
    if let Some(t) = &doc.degree_formula {
        println!("deg N: predicted {}, observed {:?}: {:?}", t.predicted, t.observed, t.verdict);
    }
    if let Some(p) = &doc.presentation {
        println!("presentation: ranks l = {}, {}, n = {}", p.l, p.mrank, p.n);
        println!("cokernel numerator {}, degree {}", p.cokernel_numerator, p.degree);
        println!("Fitting support: {} points, zero-dimensional {}", p.fitting.points.len(), p.fitting.zero_dimensional);
    }
    println!("status: {:?}", doc.status);
}

fn exit_for(inv: &FiberInventory) -> i32 {
    if inv.complete {
        EXIT_OK
    } else {
        EXIT_INCOMPLETE
    }
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    match cli.command {
        Command::Analyze { file, json, s_max, seed, mu, budget } => {
            let map = load(&file)?;
            let options = PipelineOptions { s_max, seed, mu, budget: budget.map(Duration::from_secs), ..Default::default() };
            let doc = run_pipeline(&map, &options)?;
            match json.as_deref() {
                Some(p) if p == Path::new("-") => println!("{}", serde_json::to_string_pretty(&doc)?),
                Some(p) => {
                    std::fs::write(p, serde_json::to_string_pretty(&doc)? + "\n")
                        .with_context(|| format!("writing {}", p.display()))?;
                    print_report(&doc);
                }
                None => print_report(&doc),
            }
            Ok(doc.exit_code)
        }
        Command::Fibers { file, s_max } => {
            let map = load(&file)?;
            let inv = find_one_dim_fibers(&map, s_max)?;
            print_fibers(&inv);
            Ok(exit_for(&inv))
        }
        Command::Cohomology { file, mu, s_max } => {
            let map = load(&file)?;
            let s: Vec<u32> = (1..=s_max).collect();
            let table = m_mu_dims(&map.base_ideal(), map.degree() as i64, mu, &s)?;
            for (s, v) in &table.values {
                println!("s = {s}: {v}");
            }
            match table.stable_value {
                Some(v) => println!("stable value {v}"),
                None => println!("no stable value yet"),
            }
            Ok(EXIT_OK)
        }
        Command::Image { file } => {
            let map = load(&file)?;
            let data = map.rees_data()?;
            println!("image dimension {}", map.image_dimension()?);
            for g in data.image.gens() {
                println!("{g}");
            }
            Ok(EXIT_OK)
        }
        Command::Bounds { file, s_max } => {
            let map = load(&file)?;
            let p = if map.source_dim() == 2 && map.target_dim() == 3 { Some(presentation_matrix(&map)?) } else { None };
            let inv = find_one_dim_fibers_with(&map, s_max, p.as_ref())?;
            for s in 1..=s_max {
                let t = verify_divisor_bound(&map, s, &inv.records)?;
                println!("s = {s}: sum deg h_y = {} <= indeg = {} (sd = {}): {:?}", t.divisor_degree_sum, t.nu, t.sd, t.verdict);
            }
            if let Some(p) = &p {
                let series = map.base_ideal().hilbert_series()?;
                let sat = map.saturated_power(1)?;
                let b = presentation_bounds_check(p, map.degree() as i64, series.degree(), sat.initial_degree(), lci_proxy(&map)?, 2);
                println!("{}", serde_json::to_string_pretty(&b)?);
            }
            Ok(exit_for(&inv))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            let hypothesis = e.chain().any(|c| {
                matches!(c.downcast_ref::<Error>(), Some(Error::NotGenericallyFinite { .. } | Error::Degenerate(_)))
            });
            ExitCode::from(if hypothesis { EXIT_HYPOTHESIS as u8 } else { 1 })
        }
    }
}
