use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use mdsx::builder::{build_with, BuildOptions};
use mdsx::cluster::{self, Cluster};
use mdsx::repair::{audit, check_repair_systems, render_audit};
use mdsx::Result;

/// Build, verify and exercise access-optimal MDS storage codes.
#[derive(Parser)]
#[command(name = "mdsx", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an (n, k) code with delta-optimal access and write it as JSON.
    Build {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        delta: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check the MDS property and every repair system of a code.
    Verify {
        #[arg(long)]
        code: PathBuf,
    },
    /// Print the per-node repair plans and their bandwidth.
    Audit {
        #[arg(long)]
        code: PathBuf,
        /// Print row sets 1-indexed.
        #[arg(long)]
        paper_indexing: bool,
        /// One JSON object per line instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Encode a file into a cluster directory.
    Ingest {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        cluster: PathBuf,
    },
    /// Delete one node's shard.
    Kill {
        #[arg(long)]
        cluster: PathBuf,
        #[arg(long)]
        node: usize,
    },
    /// Regenerate a missing shard from k + delta - 1 helpers.
    Repair {
        #[arg(long)]
        cluster: PathBuf,
        #[arg(long)]
        node: usize,
        #[arg(long, value_delimiter = ',')]
        helpers: Option<Vec<usize>>,
        /// Rebuild even if the shard is present.
        #[arg(long)]
        force: bool,
    },
    /// Decode the original file from any k shards.
    Reassemble {
        #[arg(long)]
        cluster: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_delimiter = ',')]
        nodes: Option<Vec<usize>>,
    },
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Build { n, k, delta, out } => {
            let built = build_with(n, k, delta, BuildOptions { keep_intermediates: false })?;
            fs::write(&out, built.to_json()?)?;
            println!(
                "q={} tau={} N={} d={}",
                built.code.field().modulus(),
                built.tau,
                built.code.sub_packetization(),
                built.helpers()
            );
            for plan in &built.plans {
                println!(
                    "node {}: {} symbols per helper, bound {}",
                    plan.node,
                    plan.per_helper(),
                    built.bandwidth_bound()
                );
            }
        }
        Command::Verify { code } => {
            let built = cluster::load_code(&code)?;
            let mds = built.code.is_mds();
            if let Some(w) = &mds.witness {
                println!("FAIL: nodes {w:?} do not determine a codeword");
                return Ok(ExitCode::from(2));
            }
            let systems = check_repair_systems(&built);
            if let Some(msg) = &systems.support_failure {
                println!("FAIL: {msg}");
                return Ok(ExitCode::from(2));
            }
            if let Some((node, excluded)) = &systems.witness {
                println!("FAIL: repair system of node {node} with excluded nodes {excluded:?} is singular");
                return Ok(ExitCode::from(2));
            }
            println!(
                "PASS ({} MDS subsets, {} repair systems)",
                mds.subsets_checked, systems.systems_checked
            );
        }
        Command::Audit { code, paper_indexing, json } => {
            let rows = audit(&cluster::load_code(&code)?);
            if json {
                for row in &rows {
                    println!("{}", serde_json::to_string(row)?);
                }
            } else {
                print!("{}", render_audit(&rows, paper_indexing));
            }
        }
        Command::Ingest { code, input, cluster: dir } => {
            let built = cluster::load_code(&code)?;
            let data = fs::read(&input)?;
            let name = input.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            let c = cluster::ingest(&built, &name, &data, &dir)?;
            println!(
                "ingested {} bytes into {} stripes over {} nodes ({:?} packing)",
                data.len(),
                c.stripes(),
                built.n(),
                c.manifest().packing
            );
        }
        Command::Kill { cluster: dir, node } => {
            Cluster::open(&dir)?.kill(node)?;
            println!("node {node} killed");
        }
        Command::Repair { cluster: dir, node, helpers, force } => {
            let out = Cluster::open(&dir)?.repair(node, helpers.as_deref(), force)?;
            let r = &out.report;
            println!("repaired node {} from helpers {:?}", r.failed, r.helpers);
            println!("stripes: {}", out.stripes);
            println!(
                "per helper: {} downloaded, {} accessed",
                r.downloaded_per_helper, r.accessed_per_helper
            );
            println!("downloaded symbols: {}", r.total_downloaded);
            println!("downloaded bytes: {}", out.bytes_downloaded());
            println!("bytes read from disk: {}", out.bytes_read);
            println!("bound symbols: {} (optimal: {})", r.bound, r.is_optimal());
        }
        Command::Reassemble { cluster: dir, out, nodes } => {
            let data = Cluster::open(&dir)?.reassemble(nodes.as_deref())?;
            fs::write(&out, &data)?;
            println!("wrote {} bytes", data.len());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    // usage errors are validation failures (exit 1), not clap's default 2
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
