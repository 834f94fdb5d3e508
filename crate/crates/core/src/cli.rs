//! Command-line front end. CSV output uses a comma separator, one header row
//! and LF line endings; numbers carry 12 significant digits except in the
//! table commands, which print 4 decimals.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{ConfigValues, RunConfig};
use crate::equivalence;
use crate::error::{Error, Result};
use crate::model::{
    h0_for_biot_number, q0_for_flux_number, temperature_for_stefan_number, BcKind,
    BoundaryCondition, ProblemSpec,
};
use crate::solution::{self, SimilaritySolution};
use crate::solver;
use crate::tables;
use crate::verify;

#[derive(Debug, Parser)]
#[command(
    name = "stefan",
    version,
    about = "Similarity solutions of one-phase Stefan problems with latent heat L = gamma s^beta sdot^delta"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve for the front coefficient and print a summary
    Solve(ProblemArgs),
    /// Temperature on a grid: t,x,eta,u
    Eval(EvalArgs),
    /// Front position and velocity: t,s,sdot
    Front(TimeArgs),
    /// Latent heat along the front: t,L
    Latent(TimeArgs),
    /// Front coefficient over a dimensionless group: param,xi
    Sweep(SweepArgs),
    /// Reference grids of front coefficients
    Table(TableArgs),
    /// Finite-difference residual checks
    Verify(VerifyArgs),
    /// Map between boundary-condition regimes with the same front
    Equiv(EquivArgs),
}

#[derive(Debug, Args)]
struct ProblemArgs {
    /// `key = value` configuration file; flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    delta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    k: Option<f64>,
    /// dirichlet, neumann, robin or general
    #[arg(long)]
    bc: Option<BcKind>,
    #[arg(long, allow_negative_numbers = true)]
    u0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    q0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    h0: Option<f64>,
    #[arg(long = "u-inf", alias = "u_inf", allow_negative_numbers = true)]
    u_inf: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long = "max-iter", alias = "max_iter")]
    max_iter: Option<usize>,
}

impl ProblemArgs {
    fn values(&self) -> Result<ConfigValues> {
        let flags = ConfigValues {
            beta: self.beta,
            delta: self.delta,
            gamma: self.gamma,
            a: self.a,
            k: self.k,
            bc: self.bc,
            u0: self.u0,
            q0: self.q0,
            h0: self.h0,
            u_inf: self.u_inf,
            lambda: self.lambda,
            tol: self.tol,
            max_iter: self.max_iter,
        };
        Ok(match &self.config {
            Some(path) => ConfigValues::from_file(path)?.merged(flags),
            None => flags,
        })
    }

    fn run_config(&self) -> Result<RunConfig> {
        self.values()?.to_run_config()
    }
}

#[derive(Debug, Args)]
struct TimeArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Comma-separated times
    #[arg(long, value_delimiter = ',', required = true)]
    t: Vec<f64>,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[command(flatten)]
    time: TimeArgs,
    /// Comma-separated positions; defaults to `nx` points spanning [0, s(t)]
    #[arg(long, value_delimiter = ',')]
    x: Vec<f64>,
    #[arg(long, default_value_t = 11)]
    nx: usize,
    /// Report u = 0 beyond the front instead of failing
    #[arg(long)]
    zero_extend: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Group {
    #[value(name = "Q", alias = "q")]
    Q,
    #[value(name = "Bi", alias = "bi")]
    Bi,
    #[value(name = "Ste", alias = "ste")]
    Ste,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long)]
    param: Group,
    /// Comma-separated ascending values
    #[arg(long, value_delimiter = ',', required = true)]
    values: Vec<f64>,
}

#[derive(Debug, Args)]
struct TableArgs {
    /// 1: flux numbers, Neumann; 2: Biot numbers at Ste = 0.5, Robin
    #[arg(value_parser = clap::value_parser!(u8).range(1..=2))]
    which: u8,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long, default_value_t = 16)]
    nx: usize,
    #[arg(long, default_value_t = 8)]
    nt: usize,
    #[arg(long, default_value_t = 0.5)]
    t0: f64,
    #[arg(long, default_value_t = 2.0)]
    t1: f64,
    /// Multiplies C1 before checking
    #[arg(long, hide = true)]
    corrupt_c1: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Direction {
    ToDirichlet,
    FromDirichlet,
}

#[derive(Debug, Args)]
struct EquivArgs {
    direction: Direction,
    /// For from-dirichlet, --lambda and --u-inf give the target condition
    #[command(flatten)]
    problem: ProblemArgs,
}

/// Largest ξ gap accepted by `equiv`.
const EQUIV_GAP: f64 = 1e-9;

fn sci(x: f64) -> String {
    format!("{x:.11e}")
}

/// Runs the command line `args` (program name first) and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn io(e: std::io::Error) -> Error {
    Error::Config(format!("write failed: {e}"))
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::Solve(p) => cmd_solve(&p.run_config()?, out),
        Command::Eval(a) => cmd_eval(&a, out),
        Command::Front(a) => cmd_front(&a, out),
        Command::Latent(a) => cmd_latent(&a, out),
        Command::Sweep(a) => cmd_sweep(&a, out),
        Command::Table(a) => cmd_table(a.which, out),
        Command::Verify(a) => cmd_verify(&a, out),
        Command::Equiv(a) => cmd_equiv(&a, out),
    }
}

fn solve_config(run: &RunConfig) -> Result<SimilaritySolution> {
    let root = solver::solve_xi(&run.spec, run.tol, run.max_iter)?;
    solution::assemble(&run.spec, &root)
}

fn cmd_solve(run: &RunConfig, out: &mut dyn Write) -> Result<()> {
    let root = solver::solve_xi(&run.spec, run.tol, run.max_iter)?;
    let sol = solution::assemble(&run.spec, &root)?;
    let groups = run.spec.dimensionless();
    let mut lines = vec![
        format!("bc         = {}", run.spec.bc().kind().name()),
        format!("xi         = {:.12}", root.xi),
        format!("alpha      = {}", run.spec.alpha()),
        format!("C1         = {}", sci(sol.c1())),
        format!("C2         = {}", sci(sol.c2())),
        format!("iterations = {}", root.iterations),
        format!("method     = {}", root.method.name()),
        format!("|F(xi)|    = {:.3e}", root.residual),
    ];
    for (name, value) in [("Q", groups.q), ("Ste", groups.ste), ("Bi", groups.bi)] {
        if let Some(v) = value {
            lines.push(format!("{name:<10} = {v}"));
        }
    }
    for line in lines {
        writeln!(out, "{line}").map_err(io)?;
    }
    Ok(())
}

fn check_times(t: &[f64]) -> Result<()> {
    match t.iter().find(|t| !(**t > 0.0 && t.is_finite())) {
        Some(bad) => Err(Error::Domain(format!("t = {bad} must be positive"))),
        None => Ok(()),
    }
}

fn cmd_eval(args: &EvalArgs, out: &mut dyn Write) -> Result<()> {
    let run = args.time.problem.run_config()?;
    check_times(&args.time.t)?;
    if args.x.is_empty() && args.nx < 2 {
        return Err(Error::Config("nx must be >= 2".into()));
    }
    let sol = solve_config(&run)?;
    let a = run.spec.material().a;
    writeln!(out, "t,x,eta,u").map_err(io)?;
    for &t in &args.time.t {
        let (s, _) = sol.eval_front(t)?;
        let xs: Vec<f64> = if args.x.is_empty() {
            (0..args.nx)
                .map(|i| if i + 1 == args.nx { s } else { s * i as f64 / (args.nx - 1) as f64 })
                .collect()
        } else {
            args.x.clone()
        };
        for x in xs {
            let u = if args.zero_extend {
                sol.eval_u_zero_extended(x, t)?
            } else {
                sol.eval_u(x, t)?
            };
            let eta = x / (2.0 * a * t.sqrt());
            writeln!(out, "{},{},{},{}", sci(t), sci(x), sci(eta), sci(u)).map_err(io)?;
        }
    }
    Ok(())
}

fn cmd_front(args: &TimeArgs, out: &mut dyn Write) -> Result<()> {
    let run = args.problem.run_config()?;
    check_times(&args.t)?;
    let sol = solve_config(&run)?;
    writeln!(out, "t,s,sdot").map_err(io)?;
    for &t in &args.t {
        let (s, sdot) = sol.eval_front(t)?;
        writeln!(out, "{},{},{}", sci(t), sci(s), sci(sdot)).map_err(io)?;
    }
    Ok(())
}

fn cmd_latent(args: &TimeArgs, out: &mut dyn Write) -> Result<()> {
    let run = args.problem.run_config()?;
    check_times(&args.t)?;
    let sol = solve_config(&run)?;
    let rows = args
        .t
        .iter()
        .map(|&t| sol.latent_heat(t).map(|l| (t, l)))
        .collect::<Result<Vec<_>>>()?;
    let first = sol.latent_heat(args.t[0])?;
    writeln!(out, "# p={} regime={}", first.power, first.regime.name()).map_err(io)?;
    writeln!(out, "t,L").map_err(io)?;
    for (t, l) in rows {
        writeln!(out, "{},{}", sci(t), sci(l.value)).map_err(io)?;
    }
    Ok(())
}

fn with_group(spec: &ProblemSpec, group: Group, value: f64) -> Result<ProblemSpec> {
    let m = spec.material();
    let law = spec.law();
    let bc = match (group, *spec.bc()) {
        (Group::Q, BoundaryCondition::Neumann { .. }) => BoundaryCondition::Neumann {
            q0: q0_for_flux_number(m, law, value),
        },
        (Group::Ste, BoundaryCondition::Dirichlet { .. }) => BoundaryCondition::Dirichlet {
            u0: temperature_for_stefan_number(m, law, value),
        },
        (Group::Ste, BoundaryCondition::Robin { h0, .. }) => BoundaryCondition::Robin {
            h0,
            u_inf: temperature_for_stefan_number(m, law, value),
        },
        (Group::Ste, BoundaryCondition::General { h0, lambda, .. }) => BoundaryCondition::General {
            lambda,
            h0,
            u_inf: temperature_for_stefan_number(m, law, value),
        },
        (Group::Bi, BoundaryCondition::Robin { u_inf, .. }) => BoundaryCondition::Robin {
            h0: h0_for_biot_number(m, value),
            u_inf,
        },
        (Group::Bi, BoundaryCondition::General { u_inf, lambda, .. }) => {
            BoundaryCondition::General {
                lambda,
                h0: h0_for_biot_number(m, value),
                u_inf,
            }
        }
        (g, bc) => {
            return Err(Error::Config(format!(
                "cannot sweep {g:?} for a {} condition",
                bc.kind().name()
            )))
        }
    };
    spec.with_bc(bc)
}

/// Boundary data a sweep overrides, filled with placeholders so the base
/// problem validates.
fn sweep_base(values: ConfigValues, group: Group) -> ConfigValues {
    let placeholder = Some(1.0);
    let mut v = values;
    match (group, v.bc) {
        (Group::Q, _) => v.q0 = v.q0.or(placeholder),
        (Group::Ste, Some(BcKind::Dirichlet)) => v.u0 = v.u0.or(placeholder),
        (Group::Ste, _) => v.u_inf = v.u_inf.or(placeholder),
        (Group::Bi, _) => v.h0 = v.h0.or(placeholder),
    }
    v
}

fn cmd_sweep(args: &SweepArgs, out: &mut dyn Write) -> Result<()> {
    let run = sweep_base(args.problem.values()?, args.param).to_run_config()?;
    if args.values.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Config("sweep values must be strictly ascending".into()));
    }
    let xs = args
        .values
        .iter()
        .map(|&v| {
            let spec = with_group(&run.spec, args.param, v)?;
            Ok((v, solver::solve_xi(&spec, run.tol, run.max_iter)?.xi))
        })
        .collect::<Result<Vec<_>>>()?;
    let name = match args.param {
        Group::Q => "Q",
        Group::Bi => "Bi",
        Group::Ste => "Ste",
    };
    writeln!(out, "{name},xi").map_err(io)?;
    for (v, xi) in &xs {
        writeln!(out, "{},{}", sci(*v), sci(*xi)).map_err(io)?;
    }
    if let Some(w) = xs.windows(2).find(|w| !(w[1].1 > w[0].1)) {
        return Err(Error::Verification(format!(
            "xi not increasing between {name} = {} and {name} = {}",
            w[0].0, w[1].0
        )));
    }
    Ok(())
}

fn cmd_table(which: u8, out: &mut dyn Write) -> Result<()> {
    if which == 1 {
        let rows = tables::flux_table()?;
        let header: Vec<String> = tables::FLUX_NUMBERS.iter().map(|q| format!("Q={q}")).collect();
        writeln!(out, "delta,beta,{},flags", header.join(",")).map_err(io)?;
        for r in rows {
            let cells: Vec<String> = r.xi.iter().map(|x| format!("{x:.4}")).collect();
            let flags: Vec<String> = tables::FLUX_NUMBERS
                .iter()
                .zip(r.suspect)
                .filter(|(_, s)| *s)
                .map(|(q, _)| format!("{}:Q={q}", tables::SUSPECT_MARKER))
                .collect();
            writeln!(out, "{},{},{},{}", r.delta, r.beta, cells.join(","), flags.join(";"))
                .map_err(io)?;
        }
    } else {
        let rows = tables::biot_table()?;
        let header: Vec<String> = tables::BIOT_NUMBERS.iter().map(|b| format!("Bi={b}")).collect();
        writeln!(out, "delta,beta,{},xi_D", header.join(",")).map_err(io)?;
        for r in rows {
            let cells: Vec<String> = r.xi_robin.iter().map(|x| format!("{x:.4}")).collect();
            writeln!(out, "{},{},{},{:.4}", r.delta, r.beta, cells.join(","), r.xi_dirichlet)
                .map_err(io)?;
        }
    }
    Ok(())
}

fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<()> {
    let run = args.problem.run_config()?;
    let mut sol = solve_config(&run)?;
    if let Some(f) = args.corrupt_c1 {
        sol = SimilaritySolution::from_parts(run.spec, sol.xi(), sol.c1() * f, sol.c2());
    }
    let r = verify::pde_residual(&sol, args.nx, args.nt, (args.t0, args.t1))?;
    let lines = [
        format!("xi                 = {:.12}", sol.xi()),
        format!("pde_max_rel        = {:.3e}", r.pde_max_rel),
        format!("phase_temp_max_abs = {:.3e}", r.phase_temp_max_abs),
        format!("stefan_max_rel     = {:.3e}", r.stefan_max_rel),
        format!("fixed_face_max_rel = {:.3e}", r.fixed_face_max_rel),
        format!(
            "grid               = {}x{} t=[{}, {}] r=[{}, {}]",
            r.grid.nx, r.grid.nt, r.grid.t_range.0, r.grid.t_range.1, r.grid.x_range.0, r.grid.x_range.1
        ),
        format!("status             = {}", if r.passes() { "pass" } else { "fail" }),
    ];
    for line in lines {
        writeln!(out, "{line}").map_err(io)?;
    }
    r.check()
}

fn cmd_equiv(args: &EquivArgs, out: &mut dyn Write) -> Result<()> {
    let values = args.problem.values()?;
    let rec = match args.direction {
        Direction::ToDirichlet => {
            let run = values.to_run_config()?;
            let rec = equivalence::to_dirichlet(&run.spec)?;
            if let BoundaryCondition::Dirichlet { u0 } = *rec.target_spec.bc() {
                writeln!(out, "u0         = {}", sci(u0)).map_err(io)?;
            }
            rec
        }
        Direction::FromDirichlet => {
            let lambda = values
                .lambda
                .ok_or_else(|| Error::Config("from-dirichlet needs --lambda".into()))?;
            let u_inf = values
                .u_inf
                .ok_or_else(|| Error::Config("from-dirichlet needs --u-inf".into()))?;
            let run = values.to_run_config()?;
            if run.spec.bc().kind() != BcKind::Dirichlet {
                return Err(Error::Config("from-dirichlet needs --bc dirichlet".into()));
            }
            let rec = equivalence::from_dirichlet(&run.spec, lambda, u_inf)?;
            if let BoundaryCondition::General { h0, .. } = *rec.target_spec.bc() {
                writeln!(out, "h0         = {}", sci(h0)).map_err(io)?;
            }
            rec
        }
    };
    writeln!(out, "xi_source  = {:.12}", rec.xi_source).map_err(io)?;
    writeln!(out, "xi_target  = {:.12}", rec.xi_target).map_err(io)?;
    writeln!(out, "gap        = {:.3e}", rec.max_xi_gap).map_err(io)?;
    if rec.max_xi_gap > EQUIV_GAP {
        return Err(Error::Verification(format!(
            "front coefficients differ by {:.3e}",
            rec.max_xi_gap
        )));
    }
    Ok(())
}
