//! Command-line surface and the command implementations.

use std::io::Write;

use alphadpp_core::asymptotics::{blocks_bulk_kernel, blocks_density, LimitKernel};
use alphadpp_core::fermion::{density_finite, BlockKernel, BlockSpec, Parity};
use alphadpp_core::numerics::QuadratureSpec;
use alphadpp_core::sampler::{
    power_map, sample_superposition, Basis, PointSample, ProjectionSampler, RngContract,
};
use alphadpp_core::statistics::{
    number_variance_alpha, number_variance_rescaled, nv_expansion, rho2_limit, structure_factor, Regime,
};
use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use crate::config::{
    build_spec, format_blocks, parse_blocks, Alpha, Format, Grid, LengthList, ParityArg, RunConfig,
    UsageError,
};
use crate::output::{emit, Table};
use crate::parallel::{map_replicates, resolve_threads};
use crate::verify::{self, Mode, Suite};

#[derive(Debug, Parser)]
#[command(
    name = "alphadpp",
    version,
    about = "Fermionic block kernels, alpha-determinantal limits and exact samplers"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Output file; standard output when omitted.
    #[arg(long, short, global = true)]
    pub output: Option<String>,
    #[arg(long, value_enum, default_value = "csv", global = true)]
    pub format: Format,
    /// Omit the timestamp so identical runs give identical bytes.
    #[arg(long, global = true)]
    pub deterministic: bool,
    /// Worker threads (default: ALPHADPP_THREADS, then the number of CPUs).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args, Clone)]
pub struct SpecArgs {
    /// Level blocks as `a:w[,a:w...]`, each covering levels [a²M, (a+w)²M).
    #[arg(long)]
    pub blocks: Option<String>,
    /// Shorthand for a single block `a:1`.
    #[arg(long, conflicts_with = "blocks")]
    pub a: Option<f64>,
    /// Scale parameter M.
    #[arg(long = "M", default_value_t = 20)]
    pub m: u64,
    #[arg(long, value_enum, default_value = "custom")]
    pub parity: ParityArg,
}

impl SpecArgs {
    fn block_string(&self) -> Result<Option<String>, UsageError> {
        match (&self.blocks, self.a) {
            (Some(b), _) => Ok(Some(format_blocks(&parse_blocks(b)?))),
            (None, Some(a)) => Ok(Some(format_blocks(&parse_blocks(&format!("{a}:1"))?))),
            (None, None) => Ok(None),
        }
    }

    fn spec(&self) -> Result<Option<BlockSpec>, UsageError> {
        self.block_string()?
            .map(|b| build_spec(&b, self.m, self.parity))
            .transpose()
    }

    fn record(&self, config: &mut RunConfig) -> Result<(), UsageError> {
        if let Some(b) = self.block_string()? {
            config.blocks = Some(b);
            config.m = Some(self.m);
            config.parity = Some(self.parity);
        }
        Ok(())
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Finite-M one-point density with its large-M asymptote.
    Density {
        #[command(flatten)]
        spec: SpecArgs,
        /// Positions `min:max:count` (default: 1.2 times the support).
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<Grid>,
    },
    /// Two-point function against unit-density separation.
    Corr {
        #[command(flatten)]
        spec: SpecArgs,
        /// Also emit `1 + α sinc²(π|α|s)` for this α.
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<Alpha>,
        /// Separations `min:max:count`.
        #[arg(long, allow_hyphen_values = true, default_value = "0:4:401")]
        grid: Grid,
    },
    /// Number variance of α-processes, optionally against a finite-M system.
    Nv {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, allow_hyphen_values = true, default_value = "-1")]
        alpha: Alpha,
        /// Box lengths `min:max:count` or `min:max:logcount`.
        #[arg(long = "L", default_value = "0.1:100:log50")]
        lengths: LengthList,
    },
    /// Structure factor of the α-process with the scaled sine kernel.
    Sk {
        #[arg(long, allow_hyphen_values = true, default_value = "-1")]
        alpha: Alpha,
        /// Wavenumbers `min:max:count`.
        #[arg(long, allow_hyphen_values = true, default_value = "0:8:401")]
        grid: Grid,
    },
    /// Exact samples, one row per replicate.
    Sample {
        #[command(flatten)]
        spec: SpecArgs,
        /// Sample Haar-unitary eigenphases of this size instead of a Hermite block.
        #[arg(long, conflicts_with_all = ["blocks", "a"])]
        circle: Option<u64>,
        /// Union of this many independent copies.
        #[arg(long, default_value_t = 1)]
        superpose: u64,
        /// Apply θ ↦ mθ to circle samples.
        #[arg(long, default_value_t = 1)]
        power: u64,
        #[arg(long, default_value_t = 100)]
        replicates: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the verification suite; exits 1 if any check fails.
    Verify {
        /// Smaller replicate counts and sweeps.
        #[arg(long)]
        quick: bool,
        /// Comma-separated check ids (default: all).
        #[arg(long, value_delimiter = ',')]
        only: Vec<u32>,
        #[arg(long, default_value_t = 20_241_016)]
        seed: u64,
    },
}

/// Exit status of a successful dispatch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    VerificationFailed,
}

pub fn run(cli: Cli) -> Result<Status> {
    let common = cli.common;
    match cli.command {
        Command::Density { spec, grid } => cmd_density(&common, &spec, grid),
        Command::Corr { spec, alpha, grid } => cmd_corr(&common, &spec, alpha, grid),
        Command::Nv { spec, alpha, lengths } => cmd_nv(&common, &spec, alpha, lengths),
        Command::Sk { alpha, grid } => cmd_sk(&common, alpha, grid),
        Command::Sample {
            spec,
            circle,
            superpose,
            power,
            replicates,
            seed,
        } => cmd_sample(&common, &spec, circle, superpose, power, replicates, seed),
        Command::Verify { quick, only, seed } => cmd_verify(&common, quick, only, seed),
    }
    .map(|()| Status::Ok)
    .or_else(|e| match e.downcast::<VerifyFailed>() {
        Ok(_) => Ok(Status::VerificationFailed),
        Err(e) => Err(e),
    })
}

#[derive(Debug, thiserror::Error)]
#[error("verification failed")]
struct VerifyFailed;

fn base_config(command: &str, common: &Common) -> RunConfig {
    let mut c = RunConfig::new(command, common.format);
    c.output = common.output.clone();
    c
}

fn require_spec(spec: &SpecArgs) -> Result<BlockSpec, UsageError> {
    spec.spec()?
        .ok_or_else(|| UsageError::Invalid("a level set is required: pass --blocks or --a".into()))
}

fn cmd_density(common: &Common, args: &SpecArgs, grid: Option<Grid>) -> Result<()> {
    let spec = require_spec(args)?;
    let reach = 1.2 * spec.support_edge();
    let grid = match grid {
        Some(g) => g,
        None => Grid::new(-reach, reach, 401).map_err(|r| UsageError::Invalid(r.into()))?,
    };
    let mut config = base_config("density", common);
    args.record(&mut config)?;
    config.grid = Some(grid.to_string());
    let mut table = Table::new(["x", "density", "asymptote"]);
    for x in grid.points() {
        table.push(vec![x, density_finite(&spec, x), blocks_density(&spec, x)]);
    }
    emit(&table, &config, common.deterministic)
}

/// Bulk limit kernel of a spec, where a closed form exists.
enum Bulk {
    Kernel(LimitKernel),
    Blocks(BlockSpec),
}

impl Bulk {
    fn of(spec: &BlockSpec) -> Result<Self> {
        if let [b] = spec.blocks() {
            if b.w == 1.0 {
                return Ok(Bulk::Kernel(LimitKernel::single_block(b.a)?));
            }
        }
        match spec.parity() {
            Parity::Even | Parity::Odd => Ok(Bulk::Kernel(LimitKernel::from_blocks(spec)?)),
            Parity::Custom => Ok(Bulk::Blocks(spec.clone())),
        }
    }

    fn eval(&self, s: f64) -> f64 {
        match self {
            Bulk::Kernel(k) => k.eval(s),
            Bulk::Blocks(spec) => blocks_bulk_kernel(spec.blocks(), s),
        }
    }

    fn alpha(&self) -> Option<f64> {
        match self {
            Bulk::Kernel(k) => Some(k.alpha()),
            Bulk::Blocks(_) => None,
        }
    }
}

fn cmd_corr(common: &Common, args: &SpecArgs, alpha: Option<Alpha>, grid: Grid) -> Result<()> {
    let spec = args.spec()?;
    if spec.is_none() && alpha.is_none() {
        return Err(UsageError::Invalid("corr needs --blocks, --a or --alpha".into()).into());
    }
    let mut config = base_config("corr", common);
    args.record(&mut config)?;
    config.grid = Some(grid.to_string());
    let mut columns = vec!["s"];
    let finite = spec
        .as_ref()
        .map(|s| (BlockKernel::new(s), density_finite(s, 0.0)));
    let bulk = spec.as_ref().map(Bulk::of).transpose()?;
    let alpha = alpha.map(|a| a.0).or_else(|| bulk.as_ref().and_then(Bulk::alpha));
    if finite.is_some() {
        columns.extend(["finite", "limit"]);
    }
    if let Some(a) = alpha {
        config.alpha = Some(Alpha(a).to_string());
        columns.push("alpha_limit");
    }
    let mut table = Table::new(columns);
    for s in grid.points() {
        let mut row = vec![s];
        if let (Some((kernel, rho)), Some(bulk)) = (&finite, &bulk) {
            let k = kernel.eval(0.0, s / rho) / rho;
            let l = bulk.eval(s);
            row.extend([1.0 - k * k, 1.0 - l * l]);
        }
        if let Some(a) = alpha {
            row.push(rho2_limit(a, s));
        }
        table.push(row);
    }
    emit(&table, &config, common.deterministic)
}

fn cmd_nv(common: &Common, args: &SpecArgs, alpha: Alpha, lengths: LengthList) -> Result<()> {
    let spec = args.spec()?;
    let mut config = base_config("nv", common);
    args.record(&mut config)?;
    config.alpha = Some(alpha.to_string());
    config.l_list = Some(lengths.to_string());
    let q = QuadratureSpec::default().with_tolerances(1e-8, 1e-12);
    let mut columns = vec!["L", "variance", "small_L", "large_L"];
    if spec.is_some() {
        columns.push("finite");
    }
    let threads = resolve_threads(common.threads)?;
    let ls = lengths.values();
    let rows = map_replicates(ls.len() as u64, threads, |i| {
        let l = ls[i as usize];
        let mut row = vec![
            l,
            number_variance_alpha(alpha.0, l, &q)?,
            nv_expansion(alpha.0, l, Regime::Small),
            nv_expansion(alpha.0, l, Regime::Large),
        ];
        if let Some(spec) = &spec {
            row.push(number_variance_rescaled(spec, l, &q)?);
        }
        Ok(row)
    })?;
    let mut table = Table::new(columns);
    rows.into_iter().for_each(|r| table.push(r));
    emit(&table, &config, common.deterministic)
}

fn cmd_sk(common: &Common, alpha: Alpha, grid: Grid) -> Result<()> {
    let mut config = base_config("sk", common);
    config.alpha = Some(alpha.to_string());
    config.grid = Some(grid.to_string());
    let mut table = Table::new(["k", "S"]);
    for k in grid.points() {
        table.push(vec![k, structure_factor(alpha.0, k)]);
    }
    emit(&table, &config, common.deterministic)
}

fn cmd_sample(
    common: &Common,
    args: &SpecArgs,
    circle: Option<u64>,
    superpose: u64,
    power: u64,
    replicates: u64,
    seed: u64,
) -> Result<()> {
    if superpose == 0 || power == 0 {
        return Err(UsageError::Invalid("--superpose and --power must be at least 1".into()).into());
    }
    let mut config = base_config("sample", common);
    config.replicates = Some(replicates);
    config.seed = Some(seed);
    let basis = match circle {
        Some(n) => {
            config.extra = Some(format!("circle={n}"));
            Basis::fourier_range(n)
        }
        None => {
            args.record(&mut config)?;
            if power != 1 {
                return Err(UsageError::Invalid("--power applies to --circle samples only".into()).into());
            }
            Basis::hermite(&require_spec(args)?)
        }
    };
    if superpose > 1 || power > 1 {
        let extra = format!("superpose={superpose},power={power}");
        config.extra = Some(match config.extra.take() {
            Some(e) => format!("{e},{extra}"),
            None => extra,
        });
    }
    let sampler = ProjectionSampler::new(basis).map_err(|e| UsageError::Invalid(e.to_string()))?;
    let threads = resolve_threads(common.threads)?;
    let samples: Vec<PointSample> = map_replicates(replicates, threads, |i| {
        let rng = RngContract::new(seed, i);
        let s = if superpose > 1 {
            sample_superposition(&sampler, superpose, rng)?
        } else {
            sampler.sample(rng)?
        };
        let s = if power > 1 { power_map(&s, power)? } else { s };
        Ok(s)
    })?;
    let width = samples.first().map_or(0, PointSample::n);
    let mut columns = vec!["replicate_index".to_string()];
    columns.extend((1..=width).map(|i| format!("x{i}")));
    let mut table = Table::new(columns);
    for s in &samples {
        let mut row = vec![s.replicate_index() as f64];
        row.extend_from_slice(s.positions());
        table.push(row);
    }
    emit(&table, &config, common.deterministic)
}

fn cmd_verify(common: &Common, quick: bool, only: Vec<u32>, seed: u64) -> Result<()> {
    let ids = if only.is_empty() {
        verify::ALL.to_vec()
    } else {
        only
    };
    if let Some(bad) = ids.iter().find(|id| !verify::ALL.contains(id)) {
        return Err(UsageError::Invalid(format!("no check with id {bad}; ids run from 1 to 15")).into());
    }
    let suite = Suite {
        mode: if quick { Mode::Quick } else { Mode::Full },
        threads: resolve_threads(common.threads)?,
        seed,
    };
    let mut file = match &common.output {
        Some(path) => Some(std::fs::File::create(path).with_context(|| format!("cannot create {path}"))?),
        None => None,
    };
    let mut failed = false;
    for id in ids {
        let result = verify::run(id, &suite);
        failed |= !result.pass;
        let line = serde_json::to_string(&result)?;
        println!("{line}");
        std::io::stdout().flush()?;
        if let Some(f) = file.as_mut() {
            writeln!(f, "{line}")?;
            f.flush()?;
        }
    }
    if failed {
        return Err(VerifyFailed.into());
    }
    Ok(())
}
