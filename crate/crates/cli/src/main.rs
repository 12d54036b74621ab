use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qcap_core::bench::{
    self, compute, exit_code, fmt_sig, parse_channel, plot_script, render_rows, run_criterion, run_selftest, run_sweep,
    status_name, BoundName, BoundParams, OutputFormat, SweepConfig, SweepParam, CRITERIA, DEFAULT_SEED,
};
use qcap_core::bounds::CodeClass;
use qcap_core::sdp::{SolveStatus, SolverOptions};
use qcap_core::Error;

/// Semidefinite-programming bounds on classical communication over quantum
/// channels.
#[derive(Parser)]
#[command(name = "qcap", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate one bound on one channel.
    Compute {
        #[command(flatten)]
        b: BoundArgs,
        /// Output format; plain `name = value` lines when omitted.
        #[arg(long)]
        format: Option<OutputFormat>,
        #[command(flatten)]
        s: SolverArgs,
    },
    /// Evaluate bounds over a parameter grid.
    Sweep {
        #[command(flatten)]
        b: BoundArgs,
        /// Swept parameter as name:start:stop:step.
        #[arg(long)]
        param: SweepParam,
        /// Output file; stdout when omitted. A plotting script is written next
        /// to CSV files.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "csv")]
        format: OutputFormat,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[command(flatten)]
        s: SolverArgs,
    },
    /// Run the acceptance criteria.
    Selftest {
        /// Run only these criteria (repeatable).
        #[arg(long)]
        criterion: Vec<String>,
        #[command(flatten)]
        s: SolverArgs,
    },
    /// List bound names.
    ListBounds,
}

#[derive(Args)]
struct BoundArgs {
    /// Bound name, or comma-separated names for sweeps (see list-bounds).
    #[arg(long)]
    bound: String,
    /// Channel spec, e.g. ad:0.3, cq:0.9, nalpha:0.39, identity:2, "ad:0.3 x ad:0.3".
    #[arg(long)]
    channel: String,
    #[arg(long, default_value_t = 0.0)]
    eps: f64,
    #[arg(long)]
    m: Option<f64>,
    /// Code class for the short names f, c1 and m0.
    #[arg(long)]
    class: Option<CodeClass>,
    /// Rate r for `decay`.
    #[arg(long)]
    rate: Option<f64>,
    /// Number of channel uses n for `decay`.
    #[arg(long)]
    uses: Option<u32>,
}

impl BoundArgs {
    fn bounds(&self) -> Result<Vec<BoundName>, Error> {
        self.bound.split(',').map(|b| BoundName::resolve(b.trim(), self.class)).collect()
    }

    fn params(&self) -> BoundParams {
        BoundParams { eps: self.eps, m: self.m, rate: self.rate, uses: self.uses }
    }
}

#[derive(Args)]
struct SolverArgs {
    #[arg(long)]
    feas_tol: Option<f64>,
    #[arg(long)]
    gap_tol: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
}

impl SolverArgs {
    /// Flags, then `QCAP_FEAS_TOL` / `QCAP_GAP_TOL`.
    fn options(&self) -> Result<SolverOptions, Error> {
        let mut o = SolverOptions::default();
        if let Some(v) = self.feas_tol {
            o.feas_tol = v;
        }
        if let Some(v) = self.gap_tol {
            o.gap_tol = v;
        }
        if let Some(v) = self.max_iter {
            o.max_iter = v;
        }
        bench::options_from_env(o)
    }
}

fn usage(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(1)
}

fn cmd_compute(b: &BoundArgs, format: Option<OutputFormat>, s: &SolverArgs) -> ExitCode {
    let (bounds, opts, ch) = match (b.bounds(), s.options(), parse_channel(&b.channel)) {
        (Ok(bounds), Ok(opts), Ok(ch)) => (bounds, opts, ch),
        (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => return usage(e),
    };
    let [bound] = bounds[..] else {
        return usage(Error::InvalidInput("compute takes a single bound".into()));
    };
    let r = match compute(bound, &ch, &b.params(), &opts) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e) as u8);
        }
    };
    if let Some(d) = &r.diagnostics {
        eprintln!(
            "status {:?}, iterations {}, primal {} dual {}, gap {:.2e}, pres {:.2e}, dres {:.2e}",
            d.status, d.iterations, d.primal_objective, d.dual_objective, d.gap, d.primal_residual, d.dual_residual
        );
        if d.status != SolveStatus::Optimal {
            eprintln!("warning: solution is {:?}", d.status);
        }
    }
    let log = r.value_log.map(fmt_sig).unwrap_or_default();
    let lin = fmt_sig(r.value_linear);
    match format {
        None => {
            println!("value_log = {log}");
            println!("value_linear = {lin}");
        }
        Some(OutputFormat::Csv) => {
            let status = r.status().map(status_name).unwrap_or("n/a");
            let gap = r.diagnostics.as_ref().map(|d| fmt_sig(d.gap)).unwrap_or_default();
            print!("bound,channel,value_log,value_linear,status,gap\n{},{},{log},{lin},{status},{gap}\n", r.name, r.channel_label);
        }
        Some(OutputFormat::Json) => match serde_json::to_string_pretty(&r) {
            Ok(s) => println!("{s}"),
            Err(e) => return usage(e.into()),
        },
    }
    ExitCode::SUCCESS
}

fn cmd_sweep(b: &BoundArgs, param: SweepParam, out: Option<PathBuf>, format: OutputFormat, jobs: usize, s: &SolverArgs) -> ExitCode {
    let (bounds, opts) = match (b.bounds(), s.options()) {
        (Ok(bounds), Ok(opts)) => (bounds, opts),
        (Err(e), _) | (_, Err(e)) => return usage(e),
    };
    let cfg = SweepConfig { bounds, channel: b.channel.clone(), param, fixed: b.params(), jobs };
    let rows = match run_sweep(&cfg, &opts) {
        Ok(rows) => rows,
        Err(e) => return usage(e),
    };
    let text = render_rows(&rows, format);
    match &out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                return usage(e.into());
            }
            if format == OutputFormat::Csv {
                let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
                let script = path.with_extension("plot.py");
                if let Err(e) = std::fs::write(&script, plot_script(&name, &cfg.param.name)) {
                    return usage(e.into());
                }
            }
        }
        None => print!("{text}"),
    }
    let flagged: Vec<_> = rows.iter().filter(|r| r.flagged()).collect();
    for r in &flagged {
        eprintln!("flagged: {} at {} = {}: {}", r.bound, cfg.param.name, fmt_sig(r.param), r.error.as_deref().unwrap_or(""));
    }
    if flagged.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(3)
    }
}

fn cmd_selftest(ids: &[String], s: &SolverArgs) -> ExitCode {
    let opts = match s.options() {
        Ok(o) => o,
        Err(e) => return usage(e),
    };
    let seed = match bench::seed_from_env(DEFAULT_SEED) {
        Ok(v) => v,
        Err(e) => return usage(e),
    };
    let outcomes = if ids.is_empty() {
        run_selftest(&opts, seed)
    } else {
        let mut v = Vec::new();
        for id in ids {
            match run_criterion(id, &opts, seed) {
                Some(o) => v.push(o),
                None => return usage(Error::InvalidInput(format!("unknown criterion `{id}`"))),
            }
        }
        v
    };
    for o in &outcomes {
        println!("{}", o.line());
        eprintln!("  {} took {:.2}s", o.id, o.seconds);
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!("{} of {} criteria passed", outcomes.len() - failed, outcomes.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn cmd_list_bounds() -> ExitCode {
    for b in BoundName::ALL {
        println!("{:<11} {}", b.as_str(), b.description());
    }
    println!();
    println!("short forms f, c1, m0 take --class ns|nsppt");
    println!("selftest criteria: {}", CRITERIA.iter().map(|c| c.id).collect::<Vec<_>>().join(" "));
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.cmd {
        Cmd::Compute { b, format, s } => cmd_compute(&b, format, &s),
        Cmd::Sweep { b, param, out, format, jobs, s } => cmd_sweep(&b, param, out, format, jobs, &s),
        Cmd::Selftest { criterion, s } => cmd_selftest(&criterion, &s),
        Cmd::ListBounds => cmd_list_bounds(),
    }
}
