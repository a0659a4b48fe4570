//! Command-line front end for the verification pipeline.
//!
//! All stateful commands operate on a workspace directory holding the
//! session description (`session.txt`) and a content-addressed artifact
//! cache (`cache/`). Cache keys include the session hash, so editing the
//! session invalidates every derived artifact automatically.
//!
//! Exit codes: 0 on success (for `verify`, verdict "pass"), 1 when `verify`
//! completes with verdict "fail", 2 on any internal error (bad arguments,
//! locked workspace, exceeded orbit bound, I/O failure).

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use dombi_core::oracle;
use dombi_core::pipeline::{ArtifactCache, Pipeline, DEFAULT_BOUND};
use dombi_core::session::DEFAULT_SESSION;
use dombi_core::verify::{verify_theorem, VerifyLimits};

#[derive(Parser)]
#[command(name = "dombi", version, about = "Exact verification of a strictly increasing representation-count difference")]
struct Cli {
    /// Workspace directory holding session.txt and cached artifacts.
    #[arg(long, global = true, env = "DOMBI_WORKSPACE", default_value = ".dombi")]
    workspace: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every check and print the milestone report.
    Verify {
        /// Check value agreement on [0, N).
        #[arg(long, default_value_t = 10_000)]
        agreement: usize,
        /// Density checkpoints for 1 <= k <= this depth.
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..=13))]
        density_depth: u32,
        /// Abort orbit exploration beyond this many states.
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        orbit_bound: usize,
        /// Also write the report as JSON to this path.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Evaluate a counting target (r3an, r3anm1, r3an4, r3an4m1, f) at n.
    Eval { target: String, n: u64 },
    /// Print an artifact (F, FF, G, M, reps) in text or dot form.
    Export {
        artifact: String,
        format: String,
        /// Abort orbit exploration beyond this many states (artifact M).
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        orbit_bound: usize,
    },
    /// Print exact density checkpoints of the excluded set.
    Density {
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..=13))]
        density_depth: u32,
        /// Also write the checkpoints as JSON to this path.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Print the brute-force oracle table (n, r3, d, f, membership).
    Oracle {
        /// Table rows: 0 <= n < limit.
        #[arg(default_value_t = 348, value_parser = clap::value_parser!(u64).range(1..=100_000_000))]
        limit: u64,
    },
}

/// File-backed artifact store inside the workspace. Writes go through a
/// temporary file so a cancelled run never leaves a torn entry.
struct DiskCache {
    dir: PathBuf,
}

impl ArtifactCache for DiskCache {
    fn get(&self, key: &str) -> Option<String> {
        fs::read_to_string(self.dir.join(format!("{key}.txt"))).ok()
    }

    fn put(&self, key: &str, text: &str) {
        if fs::create_dir_all(&self.dir).is_err() {
            return;
        }
        let tmp = self.dir.join(format!("{key}.tmp"));
        if fs::write(&tmp, text).is_ok() {
            let _ = fs::rename(&tmp, self.dir.join(format!("{key}.txt")));
        }
    }
}

/// Advisory per-workspace lock; holds a `lock` file containing our PID and
/// removes it on drop.
struct WorkspaceLock {
    path: PathBuf,
}

impl WorkspaceLock {
    fn acquire(dir: &Path) -> anyhow::Result<WorkspaceLock> {
        let path = dir.join("lock");
        match fs::OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(mut file) => {
                let _ = write!(file, "{}", std::process::id());
                Ok(WorkspaceLock { path })
            }
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => {
                let holder = fs::read_to_string(&path).unwrap_or_default();
                bail!(
                    "workspace {} is locked by process {} (remove {} if that process is gone)",
                    dir.display(),
                    holder.trim(),
                    path.display()
                );
            }
            Err(e) => Err(e).context(format!("cannot create lock file {}", path.display())),
        }
    }
}

impl Drop for WorkspaceLock {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.path);
    }
}

fn open_workspace(dir: &Path) -> anyhow::Result<(WorkspaceLock, Pipeline)> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create workspace {}", dir.display()))?;
    let lock = WorkspaceLock::acquire(dir)?;
    let session_path = dir.join("session.txt");
    let session = if session_path.exists() {
        fs::read_to_string(&session_path)
            .with_context(|| format!("cannot read {}", session_path.display()))?
    } else {
        fs::write(&session_path, DEFAULT_SESSION)
            .with_context(|| format!("cannot write {}", session_path.display()))?;
        DEFAULT_SESSION.to_string()
    };
    let cache = DiskCache { dir: dir.join("cache") };
    let pipeline = Pipeline::new(&session, Box::new(cache))?;
    Ok((lock, pipeline))
}

fn rational_str(x: &dombi_core::Rational) -> String {
    x.to_string()
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Verify { agreement, density_depth, orbit_bound, json } => {
            let (_lock, pipeline) = open_workspace(&cli.workspace)?;
            let limits = VerifyLimits { agreement, density_depth, orbit_bound };
            let report = verify_theorem(&pipeline, &limits)?;
            print!("{}", report.render_text());
            if let Some(path) = json {
                fs::write(&path, report.to_json())
                    .with_context(|| format!("cannot write {}", path.display()))?;
            }
            Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Eval { target, n } => {
            let (_lock, pipeline) = open_workspace(&cli.workspace)?;
            println!("{}", pipeline.eval(&target, n)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Export { artifact, format, orbit_bound } => {
            let (_lock, pipeline) = open_workspace(&cli.workspace)?;
            let text = match (artifact.as_str(), format.as_str()) {
                ("M", "text") => pipeline.orbit(orbit_bound)?.to_text(),
                ("M", "dot") => pipeline.orbit(orbit_bound)?.to_dot(),
                (_, "text") => pipeline.artifact_text(&artifact)?,
                (_, "dot") => pipeline.artifact_dot(&artifact)?,
                (_, other) => bail!("unknown format {other:?} (expected text or dot)"),
            };
            print!("{text}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Density { density_depth, json } => {
            let report = oracle::density_report(density_depth);
            println!("lower checkpoints: n = 3*4^k, expected (4^k - 1)/(9*4^k)");
            for (k, c) in report.lower.iter().enumerate() {
                println!(
                    "  k={:<2} n={:<9} count={:<9} density={} expected={}",
                    k + 1,
                    c.n,
                    c.count,
                    rational_str(&c.density),
                    rational_str(&c.expected)
                );
            }
            println!("upper checkpoints: n = 4^k, expected (4^k - 1)/(3*4^k)");
            for (k, c) in report.upper.iter().enumerate() {
                println!(
                    "  k={:<2} n={:<9} count={:<9} density={} expected={}",
                    k + 1,
                    c.n,
                    c.count,
                    rational_str(&c.density),
                    rational_str(&c.expected)
                );
            }
            if let Some(path) = json {
                let as_json = |cs: &[oracle::DensityCheckpoint]| {
                    cs.iter()
                        .map(|c| {
                            serde_json::json!({
                                "n": c.n,
                                "count": c.count,
                                "density": rational_str(&c.density),
                                "expected": rational_str(&c.expected),
                            })
                        })
                        .collect::<Vec<_>>()
                };
                let doc = serde_json::json!({
                    "depth": report.depth,
                    "lower": as_json(&report.lower),
                    "upper": as_json(&report.upper),
                });
                fs::write(&path, serde_json::to_string_pretty(&doc).unwrap())
                    .with_context(|| format!("cannot write {}", path.display()))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Oracle { limit } => {
            let limit = limit as usize;
            let table = oracle::oracle_r3(limit);
            let mut out = String::from("n\tr3\td\tf\tin_F\n");
            for n in 0..limit {
                let f = table.d[n] - 4 * table.d[n / 4];
                out.push_str(&format!(
                    "{n}\t{}\t{}\t{f}\t{}\n",
                    table.r3[n],
                    table.d[n],
                    if oracle::member_f(n as u64) { 1 } else { 0 }
                ));
            }
            print!("{out}");
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
