use std::path::Path;

use quadcoh::acceptance::{run_all, CriterionReport};
use quadcoh::measures::{
    chi_default_range, chi_entropy_term, coherence_l1, fig1_row, relative_entropy_coherence, xi_from_state,
    ChiWeights, EntropyMethod,
};
use quadcoh::numerics::{default_smooth_grid, differential_entropy};
use quadcoh::states::{parse_state, quadrature_pdf};
use quadcoh::transforms::{beam_split, coherence_two_mode_pure, displace, rotate, squeeze};
use quadcoh::{NumericOptions, StateModel};
use serde::Serialize;

use crate::config::{OutputFormat, RunConfig};
use crate::output::OutputRow;
use crate::{read_file, CliError};

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<OutputRow>,
}

impl Table {
    fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn render(&self, format: OutputFormat) -> Result<String, CliError> {
        crate::output::render(&self.rows, format, &self.header)
    }
}

/// A failed command together with the rows produced before the failure.
#[derive(Debug)]
pub struct Failure {
    pub partial: Option<Table>,
    pub error: CliError,
}

impl<E: Into<CliError>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure {
            partial: None,
            error: e.into(),
        }
    }
}

fn partial(table: Table, error: impl Into<CliError>) -> Failure {
    Failure {
        partial: Some(table),
        error: error.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SweepKind {
    Squeeze,
    Rotate,
    Displace,
    Sigma,
}

pub fn load_state(path: Option<&Path>, flag: &str) -> Result<StateModel, CliError> {
    let path = path.ok_or_else(|| CliError::Input(format!("missing {flag} FILE")))?;
    Ok(parse_state(&read_file(path)?)?)
}

/// Comma-separated reals.
pub fn parse_reals(list: &str) -> Result<Vec<f64>, CliError> {
    list.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::Input(format!("not a finite number: {t:?}")))
        })
        .collect()
}

/// Comma-separated `x0:y0` pairs.
pub fn parse_pairs(list: &str) -> Result<Vec<(f64, f64)>, CliError> {
    list.split(',')
        .map(|t| {
            let (a, b) = t
                .split_once(':')
                .ok_or_else(|| CliError::Input(format!("expected x0:y0, got {t:?}")))?;
            let v = parse_reals(&format!("{a},{b}"))?;
            Ok((v[0], v[1]))
        })
        .collect()
}

pub fn cmd_coherence(state: &StateModel, config: &RunConfig) -> Result<Table, Failure> {
    let opts = config.numeric_options();
    let mut t = Table::new(&["C", "C_err", "C_method", "S_reg", "S_method"]);
    let c = coherence_l1(state, &opts)?;
    let s = relative_entropy_coherence(state, &opts, EntropyMethod::Auto)?;
    t.rows.push(
        OutputRow::new()
            .real("C", c.value)
            .real("C_err", c.error_estimate)
            .text("C_method", c.method.as_str())
            .real("S_reg", s.value)
            .text("S_method", s.method_name()),
    );
    Ok(t)
}

pub fn cmd_fig1(n_max: usize, config: &RunConfig) -> Result<Table, Failure> {
    if n_max < 1 {
        return Err(CliError::Input("--nmax must be at least 1".into()).into());
    }
    let opts = config.numeric_options();
    let mut t = Table::new(&["n", "C_fock", "C_gauss", "ratio"]);
    for n in 0..=n_max {
        match fig1_row(n, config.comparator, &opts) {
            Ok(r) => t.rows.push(
                OutputRow::new()
                    .int("n", n as i64)
                    .real("C_fock", r.c_fock)
                    .real("C_gauss", r.c_gauss)
                    .real("ratio", r.ratio),
            ),
            Err(e) => return Err(partial(t, e)),
        }
    }
    Ok(t)
}

fn measures(state: &StateModel, opts: &NumericOptions) -> quadcoh::Result<(f64, f64)> {
    let c = coherence_l1(state, opts)?.value;
    let s = relative_entropy_coherence(state, opts, EntropyMethod::Auto)?.value;
    Ok((c, s))
}

/// One row per parameter; a failing parameter ends the sweep with the rows
/// computed so far.
pub fn cmd_sweep(kind: SweepKind, state: &StateModel, params: &str, config: &RunConfig) -> Result<Table, Failure> {
    let opts = config.numeric_options();
    match kind {
        SweepKind::Squeeze => {
            let mut t = Table::new(&["lambda", "C", "S_reg", "C_over_lambda", "S_reg_minus_ln_lambda"]);
            for lambda in parse_reals(params)? {
                let row = squeeze(state, lambda).and_then(|s| measures(&s, &opts));
                match row {
                    Ok((c, s)) => t.rows.push(
                        OutputRow::new()
                            .real("lambda", lambda)
                            .real("C", c)
                            .real("S_reg", s)
                            .real("C_over_lambda", c / lambda)
                            .real("S_reg_minus_ln_lambda", s - lambda.ln()),
                    ),
                    Err(e) => return Err(partial(t, e)),
                }
            }
            Ok(t)
        }
        SweepKind::Rotate => {
            let mut t = Table::new(&["tau", "C", "S_reg"]);
            for tau in parse_reals(params)? {
                match rotate(state, tau).and_then(|s| measures(&s, &opts)) {
                    Ok((c, s)) => t.rows.push(OutputRow::new().real("tau", tau).real("C", c).real("S_reg", s)),
                    Err(e) => return Err(partial(t, e)),
                }
            }
            Ok(t)
        }
        SweepKind::Displace => {
            let mut t = Table::new(&["x0", "y0", "C", "S_reg"]);
            for (x0, y0) in parse_pairs(params)? {
                match displace(state, x0, y0).and_then(|s| measures(&s, &opts)) {
                    Ok((c, s)) => t.rows.push(
                        OutputRow::new()
                            .real("x0", x0)
                            .real("y0", y0)
                            .real("C", c)
                            .real("S_reg", s),
                    ),
                    Err(e) => return Err(partial(t, e)),
                }
            }
            Ok(t)
        }
        SweepKind::Sigma => sigma_sweep(state, params, &opts),
    }
}

/// Box-state discretization at width σ next to the smeared-state coherence.
/// `S_sigma = −Σ w ln w − S_vN` diverges like `−ln σ`; adding `ln σ` back
/// approaches `S_reg`.
fn sigma_sweep(state: &StateModel, params: &str, opts: &NumericOptions) -> Result<Table, Failure> {
    let sigmas = parse_reals(params)?;
    let s_reg = relative_entropy_coherence(state, opts, EntropyMethod::Auto)?.value;
    let grid = default_smooth_grid(state.support()?)?;
    quadrature_pdf(state, grid.nodes()[0])?;
    let h = differential_entropy(|x| quadrature_pdf(state, x).unwrap_or(f64::NAN), &grid)?;
    let s_vn = h - s_reg;
    let mut t = Table::new(&["sigma", "C", "S_sigma", "S_sigma_plus_ln_sigma", "S_reg"]);
    for sigma in sigmas {
        let row = (|| -> quadcoh::Result<(f64, f64)> {
            let xi: StateModel = xi_from_state(state, sigma, opts)?.into();
            let c = coherence_l1(&xi, opts)?.value;
            let range = chi_default_range(state, sigma)?;
            let wlnw = chi_entropy_term(state, sigma, range, ChiWeights::BinMass, opts)?;
            Ok((c, -wlnw - s_vn))
        })();
        match row {
            Ok((c, s)) => t.rows.push(
                OutputRow::new()
                    .real("sigma", sigma)
                    .real("C", c)
                    .real("S_sigma", s)
                    .real("S_sigma_plus_ln_sigma", s + sigma.ln())
                    .real("S_reg", s_reg),
            ),
            Err(e) => return Err(partial(t, e)),
        }
    }
    Ok(t)
}

pub fn cmd_beamsplit(s1: &StateModel, s2: &StateModel, theta: f64, config: &RunConfig) -> Result<Table, Failure> {
    let opts = config.numeric_options();
    let split = beam_split(s1, s2, theta)?;
    let before = coherence_l1(&StateModel::product(vec![s1.clone(), s2.clone()])?, &opts)?;
    let after = coherence_two_mode_pure(&split, &opts)?;
    let mut t = Table::new(&["theta", "C_before", "C_after", "C_after_err", "abs_diff"]);
    t.rows.push(
        OutputRow::new()
            .real("theta", theta)
            .real("C_before", before.value)
            .real("C_after", after.value)
            .real("C_after_err", after.error_estimate)
            .real("abs_diff", (after.value - before.value).abs()),
    );
    Ok(t)
}

#[derive(Debug, Serialize)]
struct SelftestReport<'a> {
    pass: bool,
    failed: Vec<u32>,
    criteria: &'a [CriterionReport],
}

/// Runs the acceptance suite; returns the report text and the failed ids.
pub fn cmd_selftest(config: &RunConfig, json: bool) -> (String, Vec<u32>) {
    let reports = run_all(&config.numeric_options());
    let failed: Vec<u32> = reports.iter().filter(|r| !r.pass).map(|r| r.id).collect();
    let text = if json {
        let report = SelftestReport {
            pass: failed.is_empty(),
            failed: failed.clone(),
            criteria: &reports,
        };
        let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
        s.push('\n');
        s
    } else {
        let mut s: String = reports.iter().map(|r| format!("{r}\n")).collect();
        if failed.is_empty() {
            s.push_str(&format!("all {} criteria pass\n", reports.len()));
        } else {
            s.push_str(&format!("failed criteria: {failed:?}\n"));
        }
        s
    };
    (text, failed)
}
