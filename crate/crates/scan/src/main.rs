use std::path::{Path, PathBuf};
use std::process;
use std::time::Instant;

use biorth_scan::commands::cmd_deform_reuse;
use biorth_scan::{
    cmd_deform_verify, cmd_diff, cmd_wilking_scan, cmd_wu_verify, Certificate, DiffTolerances,
    RayonExecutor, ScanConfig, ScanError, Space,
};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "biorth", version, about = "Curvature scans and certificates for S^2 x S^3 and SU(3)/SO(3)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Config file (the `config` object of a certificate).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Main grid resolution of the scan.
    #[arg(long)]
    grid: Option<usize>,
    /// Certificate path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (0: one per core).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Record the wall-clock time in the certificate.
    #[arg(long)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Trace system, infeasibility certificate and positivity on the Wu manifold.
    WuVerify {
        #[command(flatten)]
        common: Common,
    },
    /// Curvature floor and flat locus of Wilking's metric.
    WilkingScan {
        #[command(flatten)]
        common: Common,
        /// Where to write the flat-locus atlas.
        #[arg(long)]
        atlas: Option<PathBuf>,
    },
    /// s_* search and witnesses for the conformal deformation.
    DeformVerify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        theta: Option<f64>,
        /// Verify this deformation scale instead of searching for one.
        #[arg(long)]
        s: Option<f64>,
        /// Atlas written by `wilking-scan`; the scan is rerun when absent.
        #[arg(long)]
        atlas: Option<PathBuf>,
        /// A passing certificate for a smaller theta to certify by containment.
        #[arg(long)]
        reuse: Option<PathBuf>,
    },
    /// Compare two certificates.
    Diff {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = DiffTolerances::default().headline)]
        headline_tol: f64,
        #[arg(long, default_value_t = DiffTolerances::default().witness)]
        witness_tol: f64,
    },
    /// Print the default config of a space.
    DefaultConfig {
        #[arg(value_parser = ["wilking", "wu", "deformed"])]
        space: String,
    },
}

fn read(path: &Path) -> Result<String, ScanError> {
    std::fs::read_to_string(path).map_err(|e| ScanError::Io(path.display().to_string(), e.to_string()))
}

fn path_string(p: &Path) -> String {
    p.display().to_string()
}

fn load_config(common: &Common, space: Space) -> Result<ScanConfig, ScanError> {
    let mut cfg = match &common.config {
        Some(p) => ScanConfig::load(p)?,
        None => ScanConfig::new(space),
    };
    if cfg.space != space {
        return Err(ScanError::Config(format!("config is for {:?}, command needs {:?}", cfg.space, space)));
    }
    if let Some(n) = common.grid {
        cfg.set_grid(n);
    }
    if let Some(p) = &common.out {
        cfg.output = Some(path_string(p));
    }
    Ok(cfg)
}

fn emit(mut cert: Certificate, common: &Common, started: Instant) -> Result<i32, ScanError> {
    let secs = started.elapsed().as_secs_f64();
    eprintln!("{}: {secs:.1} s", cert.command);
    if common.timing {
        cert.wall_clock_seconds = Some(secs);
    }
    for c in cert.failed_checks() {
        eprintln!("FAILED {}: {}", c.name, c.detail);
    }
    match &cert.config.output {
        Some(p) => cert.save(Path::new(p))?,
        None => print!("{}", cert.to_json()),
    }
    Ok(cert.exit_code)
}

fn run(cli: Cli) -> Result<i32, ScanError> {
    let started = Instant::now();
    match cli.command {
        Command::WuVerify { common } => {
            let cfg = load_config(&common, Space::Wu)?;
            let cert = cmd_wu_verify(&cfg, &RayonExecutor::new(common.jobs))?;
            emit(cert, &common, started)
        }
        Command::WilkingScan { common, atlas } => {
            let mut cfg = load_config(&common, Space::Wilking)?;
            if let Some(p) = atlas {
                cfg.atlas = Some(path_string(&p));
            }
            let cert = cmd_wilking_scan(&cfg, &RayonExecutor::new(common.jobs))?;
            emit(cert, &common, started)
        }
        Command::DeformVerify {
            common,
            theta,
            s,
            atlas,
            reuse,
        } => {
            let mut cfg = load_config(&common, Space::Deformed)?;
            if let Some(t) = theta {
                cfg.theta = t;
            }
            if s.is_some() {
                cfg.s = s;
            }
            if let Some(p) = atlas {
                cfg.atlas = Some(path_string(&p));
            }
            let cert = match reuse {
                Some(p) => cmd_deform_reuse(&cfg, &Certificate::load(&p)?)?,
                None => cmd_deform_verify(&cfg, &RayonExecutor::new(common.jobs))?,
            };
            emit(cert, &common, started)
        }
        Command::Diff {
            a,
            b,
            headline_tol,
            witness_tol,
        } => {
            let tol = DiffTolerances {
                headline: headline_tol,
                witness: witness_tol,
            };
            let report = cmd_diff(&read(&a)?, &read(&b)?, &tol)?;
            print!("{}", report.render());
            Ok(report.exit_code() as i32)
        }
        Command::DefaultConfig { space } => {
            let space = match space.as_str() {
                "wilking" => Space::Wilking,
                "wu" => Space::Wu,
                _ => Space::Deformed,
            };
            println!("{}", ScanConfig::new(space).to_json());
            Ok(0)
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code() as i32
        }
    };
    process::exit(code);
}
