//! Table-producing implementations of each subcommand.

use std::f64::consts::PI;

use rayon::prelude::*;
use zeno_discord::correlations::{
    concurrence, concurrence_wootters, discord_closed_phi, discord_x, CorrelationReport,
};
use zeno_discord::dynamics::{evolve_phi, partition_state};
use zeno_discord::nonhermitian::{discord_under_measurement_with, occupation_probs};
use zeno_discord::qstate::binary_entropy;
use zeno_discord::spinboson::{
    crossover_time, gamma_closed, gamma_closed_half, gamma_closed_or_limit, gamma_derivative, gamma_rate,
    gamma_rate_with, kernel_time, survival,
};
use zeno_discord::{
    CrossoverKind, Error, InitialState, Partition, PrecisionModel, QuadratureConfig, SpinBosonParams, SurvivalPair,
    XState,
};

use crate::error::{CliError, CliResult};
use crate::format::{Cell, Table};
use crate::settings::{Command, Settings};

pub struct Output {
    pub table: Table,
    /// Set when the validation suite has failing checks.
    pub failure: Option<String>,
}

impl From<Table> for Output {
    fn from(table: Table) -> Self {
        Self { table, failure: None }
    }
}

pub fn execute(cmd: Command, s: &Settings) -> CliResult<Output> {
    let threads = s.thread_count()?;
    match cmd {
        Command::Gamma => gamma(s, threads).map(Output::from),
        Command::Crossover => crossover(s).map(Output::from),
        Command::Sweep => sweep(s, threads).map(Output::from),
        Command::NhSweep => nh_sweep(s, threads).map(Output::from),
        Command::Validate => validate(s),
    }
}

/// `steps` evenly spaced points from `min` to `max` inclusive.
pub fn grid(name: &str, min: f64, max: f64, steps: usize) -> CliResult<Vec<f64>> {
    if !min.is_finite() || !max.is_finite() || min >= max || steps < 2 {
        return Err(CliError::InvalidParams(format!(
            "{name} range needs finite min < max and at least 2 steps, got [{min}, {max}] x {steps}"
        )));
    }
    let h = (max - min) / (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| if i == steps - 1 { max } else { min + i as f64 * h })
        .collect())
}

/// Maps `f` over `items` on a pool of `threads` workers (0 = automatic), preserving order.
fn par_map<T, R, F>(threads: usize, items: &[T], f: F) -> CliResult<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::InvalidParams(format!("thread pool: {e}")))?;
    Ok(pool.install(|| items.par_iter().map(f).collect()))
}

fn spin_boson(s: &Settings, bias: f64) -> CliResult<SpinBosonParams> {
    let p = SpinBosonParams {
        delta: s.delta,
        bias,
        eta: s.eta,
        omega_c: s.omega_c,
        beta: s.beta.unwrap_or(f64::INFINITY),
    };
    p.validate()?;
    Ok(p)
}

pub fn gamma(s: &Settings, threads: usize) -> CliResult<Table> {
    let p = spin_boson(s, s.bias)?;
    let taus = grid("tau", s.tau_min, s.tau_max, s.tau_steps)?;
    if s.tau_min < 0.0 {
        return Err(CliError::InvalidParams("tau must be nonnegative".into()));
    }
    let rows = par_map(threads, &taus, |&tau| -> CliResult<Vec<Cell>> {
        let g = gamma_rate(tau, &p)?;
        let dg = 0.5 * p.delta * p.delta * kernel_time(tau, &p);
        Ok(vec![Cell::Num(tau), Cell::Num(g), Cell::Num(dg), Cell::Num((-g * tau).exp())])
    })?;
    let mut table = Table::new(&["tau", "gamma", "dgamma", "survival_u2"]);
    table.rows = rows.into_iter().collect::<CliResult<_>>()?;
    Ok(table)
}

pub fn crossover(s: &Settings) -> CliResult<Table> {
    let p = spin_boson(s, s.bias)?;
    let r = crossover_time(&p);
    let kind = match r.kind {
        CrossoverKind::Unbiased => "unbiased",
        CrossoverKind::Biased => "biased",
        CrossoverKind::None => "none",
    };
    let mut table = Table::new(&["kind", "tau_analytic", "tau_numeric", "mu"]);
    table.rows.push(vec![
        Cell::Text(kind.into()),
        Cell::opt(r.tau_analytic),
        Cell::opt(r.tau_numeric),
        Cell::opt(r.mu),
    ]);
    Ok(table)
}

fn status_text(determinate: bool) -> Cell {
    Cell::Text(if determinate { "determinate" } else { "indeterminate" }.into())
}

fn amplitude_axis(s: &Settings) -> CliResult<Option<Vec<f64>>> {
    match (s.amp_min, s.amp_max, s.amp_steps) {
        (None, None, None) => Ok(None),
        (Some(lo), Some(hi), Some(n)) => {
            if lo < 0.0 || hi > 1.0 {
                return Err(CliError::InvalidParams(format!("amplitude range must lie in [0, 1], got [{lo}, {hi}]")));
            }
            grid("amp", lo, hi, n).map(Some)
        }
        _ => Err(CliError::InvalidParams("amp-min, amp-max and amp-steps must be given together".into())),
    }
}

pub fn sweep(s: &Settings, threads: usize) -> CliResult<Table> {
    let p1 = spin_boson(s, s.bias1.unwrap_or(s.bias))?;
    let p2 = spin_boson(s, s.bias2.unwrap_or(s.bias))?;
    if s.tau_min < 0.0 {
        return Err(CliError::InvalidParams("tau must be nonnegative".into()));
    }
    let taus = grid("tau", s.tau_min, s.tau_max, s.tau_steps)?;
    let axis = amplitude_axis(s)?;
    let amps = axis.clone().unwrap_or_else(|| vec![s.amp]);
    let inits: Vec<InitialState> = amps
        .iter()
        .map(|&a| InitialState::new(s.family, a))
        .collect::<zeno_discord::Result<_>>()?;

    // a negative rate leaves the row without a physical survival pair
    let pairs = par_map(threads, &taus, |&tau| -> CliResult<Option<(SurvivalPair, SurvivalPair)>> {
        match (survival(tau, &p1), survival(tau, &p2)) {
            (Ok(a), Ok(b)) => Ok(Some((a, b))),
            (Err(Error::NegativeRate { .. }), _) | (_, Err(Error::NegativeRate { .. })) => Ok(None),
            (Err(e), _) | (_, Err(e)) => Err(e.into()),
        }
    })?
    .into_iter()
    .collect::<CliResult<Vec<_>>>()?;

    let items: Vec<(usize, usize)> = (0..amps.len()).flat_map(|i| (0..taus.len()).map(move |j| (i, j))).collect();
    let side = s.side;
    let rows = par_map(threads, &items, |&(i, j)| {
        let mut cells = Vec::with_capacity(13);
        if axis.is_some() {
            cells.push(Cell::Num(amps[i]));
        }
        cells.push(Cell::Num(taus[j]));
        let Some((s1, s2)) = pairs[j] else {
            cells.extend(std::iter::repeat_n(Cell::Empty, 10));
            return (cells, false);
        };
        let qq = discord_x(&partition_state(&inits[i], &s1, &s2, Partition::QubitQubit), side);
        let rr = discord_x(&partition_state(&inits[i], &s1, &s2, Partition::ReservoirReservoir), side);
        let determinate = qq.status.is_determinate() && rr.status.is_determinate();
        let pick = |f: fn(&CorrelationReport) -> Option<f64>| [Cell::opt(f(&qq)), Cell::opt(f(&rr))];
        cells.push(Cell::Num(s1.u2()));
        cells.push(Cell::Num(s2.u2()));
        cells.extend(pick(|r| r.concurrence));
        cells.extend(pick(|r| r.discord));
        cells.extend(pick(|r| r.mutual_info));
        cells.extend(pick(|r| r.classical_corr));
        (cells, determinate)
    })?;

    let mut columns = vec!["tau", "u1sq", "u2sq", "C_qq", "C_rr", "D_qq", "D_rr", "I_qq", "I_rr", "CC_qq", "CC_rr"];
    if axis.is_some() {
        columns.insert(0, "a");
    }
    let any_indeterminate = rows.iter().any(|(_, ok)| !ok);
    if any_indeterminate {
        columns.push("status");
    }
    let mut table = Table::new(&columns);
    table.rows = rows
        .into_iter()
        .map(|(mut cells, ok)| {
            if any_indeterminate {
                cells.push(status_text(ok));
            }
            cells
        })
        .collect();
    Ok(table)
}

pub fn precision_model(s: &Settings, r: f64) -> CliResult<PrecisionModel> {
    let m = PrecisionModel {
        e1: 0.0,
        e2: s.delta_e,
        e_target: 0.0,
        e_r: r,
        v0: s.v0,
        omega: s.delta_e,
        tau_meas: s.tau_meas,
    };
    m.validate()?;
    Ok(m)
}

pub fn nh_sweep(s: &Settings, threads: usize) -> CliResult<Table> {
    let rs = grid("r", s.r_min, s.r_max, s.r_steps)?;
    let ts = grid("t", s.t_min, s.t_max, s.t_steps)?;
    if s.t_min < 0.0 || s.t_max > 1.0 {
        return Err(CliError::InvalidParams(format!(
            "normalized time must lie in [0, 1], got [{}, {}]",
            s.t_min, s.t_max
        )));
    }
    let models: Vec<PrecisionModel> = rs.iter().map(|&r| precision_model(s, r)).collect::<CliResult<_>>()?;
    let init = InitialState::new(s.family, s.amp)?;
    let items: Vec<(usize, usize)> = (0..rs.len()).flat_map(|i| (0..ts.len()).map(move |j| (i, j))).collect();
    let (mode, side) = (s.occupation, s.side);
    let rows = par_map(threads, &items, |&(i, j)| -> CliResult<Vec<Cell>> {
        let m = &models[i];
        let time = ts[j] * m.tau_meas;
        let (p11, p10) = occupation_probs(m, time, mode)?;
        let qq = discord_under_measurement_with(m, time, &init, Partition::QubitQubit, mode, side);
        let rr = discord_under_measurement_with(m, time, &init, Partition::ReservoirReservoir, mode, side);
        let determinate = qq.status.is_determinate() && rr.status.is_determinate();
        Ok(vec![
            Cell::Num(rs[i]),
            Cell::Num(ts[j]),
            Cell::Num(p11),
            Cell::Num(p10),
            Cell::opt(qq.discord),
            Cell::opt(rr.discord),
            status_text(determinate),
        ])
    })?;
    let mut table = Table::new(&["r", "t", "P11", "P10", "D_qq", "D_rr", "status"]);
    table.rows = rows.into_iter().collect::<CliResult<_>>()?;
    Ok(table)
}

struct Check {
    name: &'static str,
    max_deviation: Option<f64>,
    tolerance: f64,
    passed: bool,
}

impl Check {
    fn from_deviation(name: &'static str, deviation: Result<f64, String>, tolerance: f64) -> Self {
        match deviation {
            Ok(d) => Check {
                name,
                max_deviation: Some(d),
                tolerance,
                passed: d <= tolerance,
            },
            Err(_) => Check {
                name,
                max_deviation: None,
                tolerance,
                passed: false,
            },
        }
    }
}

fn max_abs(values: impl IntoIterator<Item = Result<f64, String>>) -> Result<f64, String> {
    values.into_iter().try_fold(0.0f64, |acc, v| v.map(|x| if x.is_nan() { f64::INFINITY } else { acc.max(x.abs()) }))
}

/// Deterministic X states from a Weyl sequence.
fn quasi_random_x_states(n: usize) -> Vec<XState> {
    let alphas = [2f64.sqrt(), 3f64.sqrt(), 5f64.sqrt(), 7f64.sqrt(), 11f64.sqrt(), 13f64.sqrt()];
    (1..=n)
        .map(|k| {
            let u: Vec<f64> = alphas.iter().map(|a| (k as f64 * a).fract()).collect();
            let raw = [u[0] + 0.01, u[1] + 0.01, u[2] + 0.01, u[3] + 0.01];
            let total: f64 = raw.iter().sum();
            let d = raw.map(|x| x / total);
            let outer = (2.0 * u[4] - 1.0) * (d[0] * d[3]).sqrt();
            let inner = (2.0 * u[5] - 1.0) * (d[1] * d[2]).sqrt();
            XState::new(d, outer, inner)
        })
        .collect()
}

fn tau_grid() -> Vec<f64> {
    (0..50).map(|i| 0.01 + (10.0 - 0.01) * i as f64 / 49.0).collect()
}

pub fn validate(s: &Settings) -> CliResult<Output> {
    if s.quad_tol.is_nan() || s.quad_tol <= 0.0 {
        return Err(CliError::InvalidParams(format!("quad-tol must be positive, got {}", s.quad_tol)));
    }
    let cfg = QuadratureConfig::with_abs_tol(s.quad_tol);
    let err = |e: Error| e.to_string();
    let mut checks = Vec::new();

    let closed_vs_quad = max_abs([0.05, 0.25, 0.75, 1.0].iter().flat_map(|&eta| {
        let p = SpinBosonParams::normalized(eta, 0.0);
        tau_grid().into_iter().map(move |tau| {
            let numeric = gamma_rate_with(tau, &p, &cfg).map_err(err)?;
            Ok(numeric - gamma_closed(tau, eta).map_err(err)?)
        })
    }));
    checks.push(Check::from_deviation("gamma_closed_vs_quadrature", closed_vs_quad, 1e-8));

    let half = if matches!(gamma_closed(1.0, 0.5), Err(Error::EtaSingular { .. })) {
        let p = SpinBosonParams::normalized(0.5, 0.0);
        max_abs(tau_grid().into_iter().map(|tau| {
            let numeric = gamma_rate_with(tau, &p, &cfg).map_err(err)?;
            Ok(numeric - gamma_closed_half(tau))
        }))
    } else {
        Err("eta = 1/2 not reported as singular".into())
    };
    checks.push(Check::from_deviation("eta_half_limit", half, 1e-8));

    let h = 1e-5;
    let derivative = max_abs([0.05, 0.25, 0.75, 1.0].iter().flat_map(|&eta| {
        tau_grid().into_iter().map(move |tau| {
            let fd = (gamma_closed_or_limit(tau + h, eta) - gamma_closed_or_limit(tau - h, eta)) / (2.0 * h);
            Ok(fd - gamma_derivative(tau, eta, 0.0))
        })
    }));
    checks.push(Check::from_deviation("gamma_derivative", derivative, 1e-6));

    let crossover = max_abs([0.6, 0.75, 1.0].iter().map(|&eta| {
        let r = crossover_time(&SpinBosonParams::normalized(eta, 0.0));
        let tau = r.tau_numeric.ok_or("no unbiased crossover")?;
        Ok(tau - (PI / (4.0 * eta)).tan())
    }));
    checks.push(Check::from_deviation("crossover_unbiased", crossover, 1e-6));

    let wootters = max_abs(
        quasi_random_x_states(200)
            .iter()
            .map(|x| Ok(concurrence_wootters(&x.to_density()).map_err(err)? - concurrence(x))),
    );
    checks.push(Check::from_deviation("concurrence_wootters", wootters, 1e-10));

    let pure = {
        let x = evolve_phi(0.2f64.sqrt(), &SurvivalPair::ideal(1.0)?, &SurvivalPair::ideal(1.0)?);
        let expected = binary_entropy(0.2)?;
        discord_x(&x, s.side)
            .discord
            .map(|d| (d - expected).abs())
            .ok_or_else(|| "indeterminate".to_string())
    };
    checks.push(Check::from_deviation("discord_pure_state", pure, 1e-5));

    let closed = max_abs([0.5f64, 0.8].iter().flat_map(|&b2| {
        [0.2, 0.5, 0.9].into_iter().map(move |u2: f64| {
            let a = (1.0 - b2).sqrt();
            let pair = SurvivalPair::ideal(u2).map_err(err)?;
            let x = evolve_phi(a, &pair, &pair);
            let opt = discord_x(&x, zeno_discord::Subsystem::A).discord.ok_or("indeterminate")?;
            let cf = discord_closed_phi(b2, u2.sqrt(), (1.0 - u2).sqrt()).map_err(err)?;
            Ok(opt - cf)
        })
    }));
    checks.push(Check::from_deviation("discord_closed_form", closed, 1e-4));

    let mut table = Table::new(&["check", "max_deviation", "tolerance", "status"]);
    for c in &checks {
        table.rows.push(vec![
            Cell::Text(c.name.into()),
            Cell::opt(c.max_deviation),
            Cell::Num(c.tolerance),
            Cell::Text(if c.passed { "pass" } else { "fail" }.into()),
        ]);
    }
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
    let failure = (!failed.is_empty()).then(|| failed.join(", "));
    Ok(Output { table, failure })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints() {
        let g = grid("x", 0.0, 1.0, 11).unwrap();
        assert_eq!(g.len(), 11);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[10], 1.0);
        assert!(grid("x", 1.0, 1.0, 5).is_err());
        assert!(grid("x", 0.0, 1.0, 1).is_err());
        assert!(grid("x", 0.0, f64::NAN, 3).is_err());
    }

    #[test]
    fn weyl_states_are_valid() {
        for x in quasi_random_x_states(50) {
            assert!((x.trace() - 1.0).abs() < 1e-12);
            assert!(x.eigenvalues().iter().all(|&v| v >= -1e-12));
        }
    }
}
