use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use anytw::bench::{bench_dir, write_csv};
use anytw::certificate::verify_certificate;
use anytw::exact::{exact_tw, SIZE_CAP};
use anytw::io::{parse_cert, parse_gr, parse_td, write_cert, write_td};
use anytw::solve::{solve, SolveConfig};
use anytw::{CancelToken, Graph};

#[derive(Parser)]
#[command(name = "anytw", version, about = "Anytime treewidth bounds with checkable witnesses")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute lower and upper bounds until they meet or time runs out.
    Solve {
        graph: PathBuf,
        /// Time budget in seconds.
        #[arg(long, default_value_t = 60.0)]
        timeout: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Run both bounds on one thread (reproducible).
        #[arg(long)]
        serial: bool,
        /// Write the decomposition in PACE `.td` format.
        #[arg(long)]
        td: Option<PathBuf>,
        /// Write the lower-bound certificate.
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Exact treewidth for graphs with at most 64 vertices.
    Exact { graph: PathBuf },
    /// Check a `.td` file against a graph.
    VerifyTd { graph: PathBuf, td: PathBuf },
    /// Check a lower-bound certificate against a graph.
    VerifyCert { graph: PathBuf, cert: PathBuf },
    /// Solve every `.gr` file in a directory and write a CSV table.
    Bench {
        dir: PathBuf,
        #[arg(long, default_value_t = 60.0)]
        timeout: f64,
        /// Output file; standard output if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_graph(path: &Path) -> Result<Graph> {
    parse_gr(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn budget(secs: f64) -> Result<Duration> {
    Duration::try_from_secs_f64(secs).context("timeout must be a non-negative number of seconds")
}

fn run(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::Solve { graph, timeout, seed, serial, td, cert } => {
            let g = load_graph(&graph)?;
            let cfg = SolveConfig { timeout: Some(budget(timeout)?), seed, serial, ..SolveConfig::default() };
            let r = solve(&g, &cfg);
            print!("{}", r.summary());
            for e in &r.events {
                println!("c {:?} {} at {:.3}s", e.kind, e.value, e.at.as_secs_f64());
            }
            if let Some(p) = td {
                fs::write(&p, write_td(&r.td, &g)).with_context(|| format!("writing {}", p.display()))?;
            }
            if let Some(p) = cert {
                fs::write(&p, write_cert(&r.certificate)).with_context(|| format!("writing {}", p.display()))?;
            }
            Ok(true)
        }
        Cmd::Exact { graph } => {
            let g = load_graph(&graph)?;
            if g.n() > SIZE_CAP {
                bail!("exact mode handles at most {SIZE_CAP} vertices, graph has {}", g.n());
            }
            let (k, td) = exact_tw(&g, None, None, &CancelToken::new())?;
            println!("treewidth {k}");
            print!("{}", write_td(&td, &g));
            Ok(true)
        }
        Cmd::VerifyTd { graph, td } => {
            let g = load_graph(&graph)?;
            match parse_td(&read(&td)?, &g) {
                Ok(t) => {
                    println!("valid decomposition of width {}", t.width);
                    Ok(true)
                }
                Err(e) => {
                    println!("invalid: {e}");
                    Ok(false)
                }
            }
        }
        Cmd::VerifyCert { graph, cert } => {
            let g = load_graph(&graph)?;
            let c = parse_cert(&read(&cert)?, g.n()).with_context(|| format!("parsing {}", cert.display()))?;
            match verify_certificate(&g, &c, &CancelToken::new()) {
                Ok(()) => {
                    println!("valid certificate: treewidth >= {} via a minor on {} vertices", c.claimed_k, c.vertex_count());
                    Ok(true)
                }
                Err(e) => {
                    println!("invalid: {e}");
                    Ok(false)
                }
            }
        }
        Cmd::Bench { dir, timeout, out } => {
            let cfg = SolveConfig { timeout: Some(budget(timeout)?), ..SolveConfig::default() };
            let rows = bench_dir(&dir, &cfg).with_context(|| format!("listing {}", dir.display()))?;
            match out {
                Some(p) => write_csv(&rows, fs::File::create(&p).with_context(|| format!("creating {}", p.display()))?)?,
                None => write_csv(&rows, std::io::stdout())?,
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
