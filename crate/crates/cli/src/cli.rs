//! Command-line front end of the `tfd` binary.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use tfd_core::costs::{DEFAULT_TAU, DEFAULT_ZETA};
use tfd_core::{density_of, target_tfd, CostKind, DeConfig, ModelParams};

use crate::config::{parse_cost, Options};
use crate::error::{HarnessError, Result};
use crate::grid::{BetaGrid, GridReading};
use crate::records::{format_sig, load_csv, write_grid_records, write_records, SweepRecord};
use crate::svg::emit_svg;
use crate::sweep::{
    cell_centers, infidelity_ratios, range_values, run_point, sweep_beta, sweep_g, sweep_zeta_tau,
    SweepSettings, TAU_STEP, TAU_WINDOW, ZETA_STEP, ZETA_WINDOW,
};
use crate::validate::validate_oracles;

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_G_VALUES: [f64; 6] = [-0.1, -0.2, -0.5, 1.0, 2.0, 5.0];

#[derive(Debug, Parser)]
#[command(
    name = "tfd",
    version,
    about = "Variational thermofield-double preparation for the two-site transverse-field Ising model",
    long_about = "Variational thermofield-double preparation for the two-site transverse-field Ising model.\n\n\
        All temperatures are given as inverse temperatures beta. The default sweep grid is the 55 values \
        m * 10^e for m = 1..9, e = -3..2, plus 1000, each read as beta. sweep-zeta-tau instead reads them \
        as temperatures and runs at beta = 1/T; --grid-reading overrides either default.\n\n\
        Exit status: 0 on success, 1 when validation fails or a run cannot complete, 2 for invalid arguments."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the ideal TFD density matrix as `row,col,re,im` CSV.
    Target,
    /// Optimise one (cost, g, beta) point and print its record.
    Optimize,
    /// Sweep one cost function over the beta grid.
    SweepBeta {
        /// Also run C0 at the same points and report the relative error
        /// (1 - F_cost) / (1 - F_C0) per beta on stderr. A ratio of 0.2 is
        /// an 80% reduction in relative error.
        #[arg(long)]
        compare_c0: bool,
    },
    /// Score C1 over a (zeta, tau) grid by |Xi| summed over the beta grid.
    SweepZetaTau,
    /// Sweep several cost functions over field strengths and the beta grid.
    SweepG,
    /// Run the oracle suite; exits with status 1 if any check fails.
    Validate {
        /// Sweep CSV files whose records are also checked. Without any, a
        /// free-energy and a C2 sweep at g = 1 are run first.
        #[arg(long = "input", value_name = "CSV", num_args = 1..)]
        inputs: Vec<PathBuf>,
    },
    /// Render sweep CSV files as an SVG line plot.
    Plot {
        #[arg(long = "input", value_name = "CSV", num_args = 1.., required = true)]
        inputs: Vec<PathBuf>,
    },
}

#[derive(Debug, Args, Default)]
pub struct Flags {
    /// Transverse field strength.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub g: Option<f64>,
    /// Inverse temperature beta of a single point.
    #[arg(long, global = true)]
    pub beta: Option<f64>,
    /// Cost function: infidelity, free-energy, c0, c1 or c2.
    #[arg(long, global = true, value_parser = parse_cost_arg)]
    pub cost: Option<CostKind>,
    /// Coefficient of the subsystem coupling in C1.
    #[arg(long, global = true)]
    pub zeta: Option<f64>,
    /// Exponent of the temperature factor in C1.
    #[arg(long, global = true)]
    pub tau: Option<f64>,
    /// Master seed; per-point seeds are derived from it.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Differential Evolution population size.
    #[arg(long, global = true)]
    pub pop: Option<usize>,
    /// Differential Evolution generation limit.
    #[arg(long, global = true)]
    pub max_gen: Option<usize>,
    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// `key = value` file with defaults for any of these flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads for sweeps (default: available parallelism).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Comma-separated beta values replacing the default grid.
    #[arg(long, global = true, value_delimiter = ',')]
    pub betas: Option<Vec<f64>>,
    /// Comma-separated field strengths for sweep-g.
    #[arg(long, global = true, value_delimiter = ',', allow_negative_numbers = true)]
    pub g_values: Option<Vec<f64>>,
    /// Comma-separated cost functions for sweep-g.
    #[arg(long, global = true, value_delimiter = ',', value_parser = parse_cost_arg)]
    pub costs: Option<Vec<CostKind>>,
    /// Lower end of the zeta window (default 1.4)
    #[arg(long, global = true)]
    pub zeta_min: Option<f64>,
    /// Upper end of the zeta window (default 1.9)
    #[arg(long, global = true)]
    pub zeta_max: Option<f64>,
    /// Zeta grid step (default 0.025)
    #[arg(long, global = true)]
    pub zeta_step: Option<f64>,
    /// Lower end of the tau window (default 1.2)
    #[arg(long, global = true)]
    pub tau_min: Option<f64>,
    /// Upper end of the tau window (default 1.7)
    #[arg(long, global = true)]
    pub tau_max: Option<f64>,
    /// Tau grid step (default 0.02)
    #[arg(long, global = true)]
    pub tau_step: Option<f64>,
    /// Evaluate sweep-zeta-tau at the centres of an N x N cell grid over
    /// the window instead of on the stepped grid.
    #[arg(long, global = true)]
    pub coarse: Option<usize>,
    /// Whether the 55 listed grid values are inverse temperatures (`beta`)
    /// or temperatures (`temperature`, swept at beta = 1/T). Defaults to
    /// `temperature` for sweep-zeta-tau and `beta` everywhere else.
    #[arg(long, global = true)]
    pub grid_reading: Option<GridReading>,
}

fn parse_cost_arg(s: &str) -> std::result::Result<CostKind, String> {
    parse_cost(s).map_err(|e| e.to_string())
}

impl Flags {
    fn to_options(&self) -> Options {
        Options {
            g: self.g,
            beta: self.beta,
            cost: self.cost,
            zeta: self.zeta,
            tau: self.tau,
            seed: self.seed,
            pop: self.pop,
            max_gen: self.max_gen,
            out: self.out.clone(),
            workers: self.workers,
            betas: self.betas.clone(),
            g_values: self.g_values.clone(),
            costs: self.costs.clone(),
            zeta_min: self.zeta_min,
            zeta_max: self.zeta_max,
            zeta_step: self.zeta_step,
            tau_min: self.tau_min,
            tau_max: self.tau_max,
            tau_step: self.tau_step,
            coarse: self.coarse,
            grid_reading: self.grid_reading,
        }
    }
}

/// Settings after merging the config file, the flags and the defaults.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub opts: Options,
    pub settings: SweepSettings,
}

impl Resolved {
    pub fn new(flags: &Flags) -> Result<Self> {
        let file = match &flags.config {
            Some(path) => Options::load(path)?,
            None => Options::default(),
        };
        let opts = file.overridden_by(flags.to_options());
        let defaults = DeConfig::default();
        let de = DeConfig {
            population_size: opts.pop.unwrap_or(defaults.population_size),
            max_generations: opts.max_gen.unwrap_or(defaults.max_generations),
            seed: opts.seed.unwrap_or(DEFAULT_SEED),
            ..defaults
        };
        // Catch bad optimiser settings before any work starts.
        de.clone().with_bounds(vec![(0.0, 1.0)]).validate()?;
        Ok(Self {
            settings: SweepSettings {
                de,
                workers: opts.workers,
            },
            opts,
        })
    }

    fn g(&self) -> f64 {
        self.opts.g.unwrap_or(1.0)
    }

    fn require_beta(&self) -> Result<f64> {
        self.opts
            .beta
            .ok_or_else(|| HarnessError::Config("--beta is required".into()))
    }

    /// Applies `--zeta` and `--tau` to C1.
    fn with_exponents(&self, kind: CostKind) -> CostKind {
        match kind {
            CostKind::C1 { .. } => CostKind::C1 {
                zeta: self.opts.zeta.unwrap_or(DEFAULT_ZETA),
                tau: self.opts.tau.unwrap_or(DEFAULT_TAU),
            },
            other => other,
        }
    }

    fn cost(&self) -> Result<CostKind> {
        self.opts
            .cost
            .map(|c| self.with_exponents(c))
            .ok_or_else(|| HarnessError::Config("--cost is required".into()))
    }

    fn grid(&self, default_reading: GridReading) -> Result<BetaGrid> {
        match &self.opts.betas {
            Some(v) => BetaGrid::custom(v.clone())
                .ok_or_else(|| HarnessError::Config("--betas must be positive finite values".into())),
            None => Ok(self.opts.grid_reading.unwrap_or(default_reading).grid()),
        }
    }

    fn output(&self) -> Result<Box<dyn Write>> {
        Ok(match &self.opts.out {
            Some(p) => Box::new(std::fs::File::create(p).map_err(|e| HarnessError::io(p, e))?),
            None => Box::new(std::io::stdout().lock()),
        })
    }
}

/// What a successful command wants the process exit status to be.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    ValidationFailed,
}

pub fn execute(cli: &Cli) -> Result<Outcome> {
    let r = Resolved::new(&cli.flags)?;
    match &cli.command {
        Command::Target => {
            let rho = density_of(&target_tfd(&ModelParams::new(r.g(), r.require_beta()?)?)?);
            let mut out = r.output()?;
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(["row", "col", "re", "im"])?;
            for row in 0..rho.dim() {
                for col in 0..rho.dim() {
                    let z = rho[(row, col)];
                    w.write_record([row.to_string(), col.to_string(), format_sig(z.re), format_sig(z.im)])?;
                }
            }
            w.flush().map_err(csv::Error::from)?;
        }
        Command::Optimize => {
            let beta = r.require_beta()?;
            ModelParams::new(r.g(), beta)?;
            let cost = r.cost()?;
            let seed = r.settings.master_seed();
            let record = run_point(cost, r.g(), beta, seed, &r.settings.de);
            write_records(r.output()?, std::slice::from_ref(&record))?;
        }
        Command::SweepBeta { compare_c0 } => {
            let grid = r.grid(GridReading::InverseTemperature)?;
            let cost = r.cost()?;
            let records = sweep_beta(cost, r.g(), &grid, &r.settings)?;
            if *compare_c0 {
                let baseline = sweep_beta(CostKind::C0, r.g(), &grid, &r.settings)?;
                report_ratios(&records, &baseline);
            }
            write_records(r.output()?, &records)?;
        }
        Command::SweepZetaTau => {
            let (zetas, taus) = match r.opts.coarse {
                Some(0) => return Err(HarnessError::Config("--coarse must be positive".into())),
                Some(n) => (
                    cell_centers(ZETA_WINDOW.0, ZETA_WINDOW.1, n),
                    cell_centers(TAU_WINDOW.0, TAU_WINDOW.1, n),
                ),
                None => (
                    range_values(
                        r.opts.zeta_min.unwrap_or(ZETA_WINDOW.0),
                        r.opts.zeta_max.unwrap_or(ZETA_WINDOW.1),
                        r.opts.zeta_step.unwrap_or(ZETA_STEP),
                    )?,
                    range_values(
                        r.opts.tau_min.unwrap_or(TAU_WINDOW.0),
                        r.opts.tau_max.unwrap_or(TAU_WINDOW.1),
                        r.opts.tau_step.unwrap_or(TAU_STEP),
                    )?,
                ),
            };
            let sweep = sweep_zeta_tau(&zetas, &taus, r.g(), &r.grid(GridReading::Temperature)?, &r.settings)?;
            eprintln!(
                "argmin |Xi| = {} at zeta = {}, tau = {}",
                format_sig(sweep.argmin.xi_abs),
                format_sig(sweep.argmin.zeta),
                format_sig(sweep.argmin.tau)
            );
            write_grid_records(r.output()?, &sweep.records)?;
        }
        Command::SweepG => {
            let costs: Vec<CostKind> = r
                .opts
                .costs
                .clone()
                .unwrap_or_else(|| vec![CostKind::FreeEnergy, CostKind::C0, CostKind::c1_default(), CostKind::C2])
                .into_iter()
                .map(|c| r.with_exponents(c))
                .collect();
            let g_values = r.opts.g_values.clone().unwrap_or_else(|| DEFAULT_G_VALUES.to_vec());
            let records = sweep_g(&costs, &g_values, &r.grid(GridReading::InverseTemperature)?, &r.settings)?;
            write_records(r.output()?, &records)?;
        }
        Command::Validate { inputs } => {
            let records: Vec<SweepRecord> = if inputs.is_empty() {
                let grid = r.grid(GridReading::InverseTemperature)?;
                let mut v = sweep_beta(CostKind::FreeEnergy, 1.0, &grid, &r.settings)?;
                v.extend(sweep_beta(CostKind::C2, 1.0, &grid, &r.settings)?);
                v
            } else {
                let mut v = Vec::new();
                for p in inputs {
                    v.extend(load_csv(p)?);
                }
                v
            };
            let report = validate_oracles(&records);
            let mut out = r.output()?;
            let target = r.opts.out.clone().unwrap_or_else(|| PathBuf::from("<stdout>"));
            writeln!(out, "{report}").map_err(|e| HarnessError::io(&target, e))?;
            if !report.all_passed() {
                return Ok(Outcome::ValidationFailed);
            }
        }
        Command::Plot { inputs } => {
            let mut records = Vec::new();
            for p in inputs {
                records.extend(load_csv(p)?);
            }
            let out = r
                .opts
                .out
                .clone()
                .ok_or_else(|| HarnessError::Config("plot needs --out".into()))?;
            emit_svg(&records, &out)?;
        }
    }
    Ok(Outcome::Success)
}

fn report_ratios(records: &[SweepRecord], baseline: &[SweepRecord]) {
    eprintln!("beta,infidelity_ratio");
    for (beta, ratio) in infidelity_ratios(records, baseline) {
        eprintln!("{},{}", format_sig(beta), format_sig(ratio));
    }
}

/// Exit status for an error: 2 for bad arguments or configuration, 1 otherwise.
pub fn exit_code(err: &HarnessError) -> u8 {
    match err {
        HarnessError::Config(_) | HarnessError::Core(tfd_core::Error::InvalidConfig(_) | tfd_core::Error::InvalidBeta(_)) => 2,
        HarnessError::AtPath { inner, .. } => exit_code(inner),
        _ => 1,
    }
}
