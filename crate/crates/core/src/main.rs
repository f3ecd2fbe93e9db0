use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use stagdg::io::{self, Options, RunConfig};

#[derive(Parser)]
#[command(name = "stagdg", version, about = "Staggered space-time DG solver for 2D elastic waves")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Fixed summation order in all reductions.
    #[arg(long, global = true)]
    reproducible: bool,
    /// Output directory, overriding the configuration.
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the time loop of a configuration.
    Run { config: PathBuf },
    /// Observed convergence orders over a sequence of meshes.
    Convergence {
        config: PathBuf,
        /// Comma-separated mesh files or `square:N` generated meshes.
        #[arg(long, value_delimiter = ',', required = true)]
        meshes: Vec<String>,
    },
    /// Iteration counts with and without sliver elements.
    Slivers { config: PathBuf },
}

fn load(path: &Path) -> stagdg::Result<(RunConfig, PathBuf)> {
    let cfg = RunConfig::load(path)?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok((cfg, base))
}

fn execute(cli: Cli) -> stagdg::Result<()> {
    let opts = Options {
        reproducible: cli.reproducible,
        output_dir: cli.output_dir,
    };
    match cli.command {
        Command::Run { config } => {
            let (cfg, base) = load(&config)?;
            let s = io::run(&cfg, &base, &opts)?;
            println!("steps            {}", s.steps);
            println!("mean iterations  {:.2} (max {})", s.mean_iterations, s.max_iterations);
            println!("initial energy   {:.10e}", s.initial_energy.total());
            println!("final energy     {:.10e}", s.final_energy.total());
            println!("wall time        {:.2} s", s.wall.as_secs_f64());
            println!("output           {}", s.output_dir.display());
        }
        Command::Convergence { config, meshes } => {
            let (cfg, base) = load(&config)?;
            let r = io::convergence(&cfg, &base, &meshes, &opts)?;
            for w in &r.warnings {
                eprintln!("warning: {w}");
            }
            println!(
                "{:>8} {:>9} {:>10} {:>10} {:>10} {:>10} {:>10} {:>6} {:>6} {:>6} {:>6} {:>6} {:>8}",
                "elements", "h", "err u", "err v", "err sxx", "err syy", "err sxy", "O(u)", "O(v)", "O(sxx)", "O(syy)",
                "O(sxy)", "time s"
            );
            for row in &r.rows {
                let e = row.errors.map(|x| format!("{x:10.3e}"));
                let o = row.orders.map(|x| format!("{x:6.2}"));
                println!(
                    "{:>8} {:>9.5} {} {} {:>8.2}",
                    row.elements,
                    row.h,
                    e.join(" "),
                    o.join(" "),
                    row.wall.as_secs_f64()
                );
            }
            println!("output {}", r.output_dir.join("convergence.csv").display());
        }
        Command::Slivers { config } => {
            let (cfg, base) = load(&config)?;
            let r = io::slivers(&cfg, &base, &opts)?;
            println!(
                "{} triangles, {} steps, min incircle ratio {:.2}",
                r.elements,
                r.steps,
                r.min_incircle[0] / r.min_incircle[1]
            );
            println!("{:<14} {:>12} {:>12} {:>8}", "preconditioner", "iter mesh 1", "iter mesh 2", "factor");
            for row in &r.rows {
                println!(
                    "{:<14} {:>12.2} {:>12.2} {:>8.2}",
                    format!("{:?}", row.preconditioner),
                    row.iterations[0],
                    row.iterations[1],
                    row.ratio
                );
            }
            println!("output {}", r.output_dir.join("slivers.csv").display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot configure {n} threads: {e}");
            return ExitCode::FAILURE;
        }
    }
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
