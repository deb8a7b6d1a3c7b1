use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use shishkin_core::galerkin::{assemble, default_quad_order};
use shishkin_core::mesh::{build_mesh_2d, build_mesh_2d_clamped};
use shishkin_core::problem::make_manufactured_problem;
use shishkin_core::space::FeSpace;
use shishkin_lab::checks::{run_hier1d, run_identity};
use shishkin_lab::dump::{mesh_table, sample_table, write_band};
use shishkin_lab::study::{run_study, study_table};
use shishkin_lab::{Format, Interpolant, LabResult, Mode, Overrides, StudyConfig};

/// Galerkin FEM on Shishkin meshes: convergence, supercloseness and
/// interpolation studies for a convection-diffusion model problem.
#[derive(Debug, Parser)]
#[command(name = "shishkin", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Galerkin solves: energy error, supercloseness and interpolation columns.
    Study(Common),
    /// Interpolation error rates only (no solve).
    Interp(Common),
    /// Hierarchical-basis identities and the convective bound in 1D.
    Hier1d(Common),
    /// Projection identity between the two interpolants.
    Identity(Common),
    /// Mesh nodes as CSV; optionally a sampled solution or the band matrix.
    MeshDump {
        #[command(flatten)]
        common: Common,
        /// Emit the Galerkin solution on an M x M grid instead of the mesh.
        #[arg(long, value_name = "M")]
        sample: Option<usize>,
        /// Write the assembled band in matrix-market form to this path.
        #[arg(long, value_name = "PATH")]
        band: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct Common {
    /// TOML file with any of the keys below; flags take precedence.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Polynomial degree (odd).
    #[arg(long)]
    p: Option<usize>,
    /// Cell counts per direction, comma separated.
    #[arg(long = "N", value_delimiter = ',')]
    n: Option<Vec<usize>>,
    /// Perturbation parameters, comma separated.
    #[arg(long, value_delimiter = ',')]
    eps: Option<Vec<f64>>,
    /// Transition-point parameter (default p + 3/2).
    #[arg(long)]
    sigma: Option<f64>,
    /// Built-in problem: layer2d or layer1d.
    #[arg(long)]
    problem: Option<String>,
    #[arg(long, value_enum)]
    interpolant: Option<Interpolant>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Output file (default stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Allow sigma < p + 3/2 and clamp the transition point for large eps.
    #[arg(long)]
    force: bool,
    /// Assembly quadrature points per direction (default p + 3).
    #[arg(long)]
    quad_order: Option<usize>,
}

impl Common {
    fn resolve(self, mode: Mode) -> LabResult<StudyConfig> {
        let file = match &self.config {
            Some(path) => Overrides::from_file(path)?,
            None => Overrides::default(),
        };
        let flags = Overrides {
            p: self.p,
            n: self.n,
            eps: self.eps,
            sigma: self.sigma,
            problem: self.problem,
            interpolant: self.interpolant,
            format: self.format,
            out: self.out,
            force: self.force.then_some(true),
            quad_order: self.quad_order,
        };
        StudyConfig::resolve(mode, file.merged_with(flags))
    }
}

fn mesh_dump(cfg: &StudyConfig, sample: Option<usize>, band: Option<PathBuf>) -> LabResult<()> {
    if sample.is_none() && band.is_none() {
        return mesh_table(cfg)?.emit(cfg.format, cfg.out.as_deref());
    }
    let (eps, n) = cfg.cases()[0];
    let prob = make_manufactured_problem(eps, cfg.p);
    let build = if cfg.force {
        build_mesh_2d_clamped
    } else {
        build_mesh_2d
    };
    let space = FeSpace::new(build(n, cfg.sigma, eps, prob.beta1, prob.beta2)?, cfg.p)?;
    let system = assemble(
        &space,
        &prob,
        cfg.quad_order.unwrap_or_else(|| default_quad_order(cfg.p)),
    )?;
    if let Some(path) = band {
        let mut w = BufWriter::new(File::create(path)?);
        write_band(&system.matrix, &mut w)?;
        w.flush()?;
    }
    if let Some(m) = sample {
        let uh = system.solve()?;
        sample_table(&uh, |x, y| prob.exact.value(x, y), m).emit(cfg.format, cfg.out.as_deref())?;
    }
    Ok(())
}

fn execute(cli: Cli) -> LabResult<ExitCode> {
    match cli.command {
        Command::Study(common) => tabulate(common.resolve(Mode::GalerkinSuperclose)?),
        Command::Interp(common) => tabulate(common.resolve(Mode::InterpRates)?),
        Command::Hier1d(common) => {
            let cfg = common.resolve(Mode::Hier1dChecks)?;
            run_hier1d(&cfg)?.emit(cfg.format, cfg.out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Identity(common) => {
            let cfg = common.resolve(Mode::IdentityChecks)?;
            run_identity(&cfg)?.emit(cfg.format, cfg.out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::MeshDump {
            common,
            sample,
            band,
        } => {
            let cfg = common.resolve(Mode::MeshDump)?;
            mesh_dump(&cfg, sample, band)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// Writes the study table; failed rows are reported and give exit code 2.
fn tabulate(cfg: StudyConfig) -> LabResult<ExitCode> {
    let rows = run_study(&cfg);
    study_table(&rows).emit(cfg.format, cfg.out.as_deref())?;
    let failed: Vec<_> = rows.iter().filter(|r| r.failed()).collect();
    for r in &failed {
        eprintln!(
            "N = {}, eps = {:e}: {}",
            r.n,
            r.eps,
            r.failure.as_deref().unwrap_or_default()
        );
    }
    Ok(if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
