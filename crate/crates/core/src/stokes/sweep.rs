//! Batch driver: random forms and microcubes through every check.

use std::fmt;

use rayon::prelude::*;

use super::random::{random_form, random_point, random_tangents, trial_rng};
use super::verify;
pub use super::random::FieldPool;
use crate::alternating::check_alternating;
use crate::chains::Microcube;
use crate::error::{Error, Result};
use crate::scalar::{Backend, Rational, Scalar, Tolerance};

pub const MAX_DIM: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub dim: usize,
    pub degrees: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub backend: Backend,
    pub pool: FieldPool,
    pub tolerance: Tolerance,
    /// Random probes per form for the skewness check of the boundary functional.
    pub probes: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            dim: 3,
            degrees: vec![0, 1, 2],
            trials: 50,
            seed: 0,
            backend: Backend::Rational,
            pool: FieldPool::Polynomial,
            tolerance: Tolerance::default(),
            probes: 10,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 || self.dim > MAX_DIM {
            return Err(Error::Config(format!("dimension must be in 1..={MAX_DIM}, got {}", self.dim)));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.probes == 0 {
            return Err(Error::Config("probes must be at least 1".into()));
        }
        if self.degrees.is_empty() {
            return Err(Error::Config("no degrees selected".into()));
        }
        if let Some(k) = self.degrees.iter().find(|&&k| k + 1 > self.dim) {
            return Err(Error::Config(format!("degree {k} needs k + 1 <= dim = {}", self.dim)));
        }
        if self.backend == Backend::Rational && self.pool == FieldPool::Transcendental {
            return Err(Error::Config("transcendental fields need the float backend".into()));
        }
        Ok(())
    }
}

/// Aggregated results for one form degree.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeSummary {
    pub degree: usize,
    pub trials: usize,
    pub stokes_failures: usize,
    pub extraction_failures: usize,
    pub alternating_failures: usize,
    pub dd_failures: usize,
    /// `d d omega` is only checked when `k + 2 <= dim`.
    pub dd_checked: usize,
    pub max_top_residual: f64,
    pub max_lower_order: f64,
    pub max_extraction_residual: f64,
    pub max_dd_residual: f64,
    pub first_error: Option<String>,
}

impl DegreeSummary {
    pub fn failures(&self) -> usize {
        self.stokes_failures + self.extraction_failures + self.alternating_failures + self.dd_failures
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSummary {
    pub config: SweepConfig,
    pub degrees: Vec<DegreeSummary>,
}

impl SweepSummary {
    pub fn pass(&self) -> bool {
        self.degrees.iter().all(|d| d.failures() == 0)
    }
}

#[derive(Debug, Default)]
struct TrialOutcome {
    stokes_ok: bool,
    extraction_ok: bool,
    alternating_ok: bool,
    dd_ok: Option<bool>,
    top_residual: f64,
    lower_order: f64,
    extraction_residual: f64,
    dd_residual: f64,
    error: Option<String>,
}

fn run_trial<S: Scalar>(config: &SweepConfig, k: usize, trial: usize) -> TrialOutcome {
    let stream = ((k as u64) << 32) | trial as u64;
    let mut rng = trial_rng(config.seed, stream);
    let n = config.dim;
    let form = random_form(&mut rng, n, k, config.pool);
    let x: Vec<S> = random_point(&mut rng, n, config.pool);
    let tangents: Vec<Vec<S>> = random_tangents(&mut rng, n, k + 1);
    let probe_seed = config.seed ^ stream.rotate_left(17);
    let dd_point: Vec<S> = random_point(&mut rng, n, config.pool);
    let tol = &config.tolerance;

    let mut out = TrialOutcome::default();
    let result: Result<()> = (|| {
        let cube = Microcube::new(&x, tangents, k + 1)?;
        let report = verify(&form, &cube, tol)?;
        out.stokes_ok = report.pass;
        out.top_residual = report.top_residual.magnitude();
        out.lower_order = report.lower_order_max.magnitude();

        let extracted = form.d_extracted(&x, tol)?;
        let formula = form.d()?.at(&x)?;
        out.extraction_ok = extracted.approx_eq(&formula, tol);
        out.extraction_residual = extracted
            .coefficients()
            .iter()
            .zip(formula.coefficients())
            .map(|(a, b)| (a.clone() - b.clone()).magnitude())
            .fold(0.0, f64::max);

        let alt = check_alternating(n, k + 1, config.probes, probe_seed, tol, form.boundary_functional(&x, tol))?;
        out.alternating_ok = alt.pass();

        if k + 2 <= n {
            let dd = form.d()?.d()?.at(&dd_point)?;
            let scale = form.d()?.at(&dd_point)?.coefficients().iter().map(Scalar::magnitude).fold(1.0, f64::max);
            out.dd_residual = dd.coefficients().iter().map(Scalar::magnitude).fold(0.0, f64::max);
            out.dd_ok = Some(dd.coefficients().iter().all(|c| S::within(c, scale, tol)));
        }
        Ok(())
    })();
    if let Err(e) = result {
        out.stokes_ok = false;
        out.error = Some(format!("degree {k}, trial {trial}: {e}"));
    }
    out
}

fn run<S: Scalar>(config: &SweepConfig) -> SweepSummary {
    let jobs: Vec<(usize, usize)> = config
        .degrees
        .iter()
        .flat_map(|&k| (0..config.trials).map(move |t| (k, t)))
        .collect();
    let outcomes: Vec<TrialOutcome> = jobs.par_iter().map(|&(k, t)| run_trial::<S>(config, k, t)).collect();

    let mut degrees = Vec::new();
    for (chunk, &k) in outcomes.chunks(config.trials).zip(&config.degrees) {
        let mut s = DegreeSummary {
            degree: k,
            trials: chunk.len(),
            stokes_failures: 0,
            extraction_failures: 0,
            alternating_failures: 0,
            dd_failures: 0,
            dd_checked: 0,
            max_top_residual: 0.0,
            max_lower_order: 0.0,
            max_extraction_residual: 0.0,
            max_dd_residual: 0.0,
            first_error: None,
        };
        for o in chunk {
            s.stokes_failures += usize::from(!o.stokes_ok);
            s.extraction_failures += usize::from(!o.extraction_ok);
            s.alternating_failures += usize::from(!o.alternating_ok);
            if let Some(ok) = o.dd_ok {
                s.dd_checked += 1;
                s.dd_failures += usize::from(!ok);
            }
            s.max_top_residual = s.max_top_residual.max(o.top_residual);
            s.max_lower_order = s.max_lower_order.max(o.lower_order);
            s.max_extraction_residual = s.max_extraction_residual.max(o.extraction_residual);
            s.max_dd_residual = s.max_dd_residual.max(o.dd_residual);
            if s.first_error.is_none() {
                s.first_error = o.error.clone();
            }
        }
        degrees.push(s);
    }
    SweepSummary { config: config.clone(), degrees }
}

/// Runs every configured trial. Results depend only on the configuration,
/// not on thread scheduling.
pub fn sweep(config: &SweepConfig) -> Result<SweepSummary> {
    config.validate()?;
    Ok(match config.backend {
        Backend::Rational => run::<Rational>(config),
        Backend::Float => run::<f64>(config),
    })
}

impl fmt::Display for SweepSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.config;
        writeln!(
            f,
            "sweep dim={} trials={} seed={} backend={} pool={:?}",
            c.dim, c.trials, c.seed, c.backend, c.pool
        )?;
        for d in &self.degrees {
            writeln!(
                f,
                "k={} trials={} stokes_fail={} extract_fail={} alternating_fail={} dd_fail={}/{} \
                 max_top_residual={:e} max_lower_order={:e} max_extract_residual={:e} max_dd_residual={:e}",
                d.degree,
                d.trials,
                d.stokes_failures,
                d.extraction_failures,
                d.alternating_failures,
                d.dd_failures,
                d.dd_checked,
                d.max_top_residual,
                d.max_lower_order,
                d.max_extraction_residual,
                d.max_dd_residual,
            )?;
            if let Some(e) = &d.first_error {
                writeln!(f, "  first error: {e}")?;
            }
        }
        write!(f, "{}", if self.pass() { "PASS" } else { "FAIL" })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn configuration_errors() {
        let bad = SweepConfig { trials: 0, ..Default::default() };
        assert!(matches!(sweep(&bad), Err(Error::Config(_))));
        let bad = SweepConfig { dim: 7, degrees: vec![0], ..Default::default() };
        assert!(sweep(&bad).is_err());
        let bad = SweepConfig { degrees: vec![3], ..Default::default() };
        assert!(sweep(&bad).is_err());
        let bad = SweepConfig { pool: FieldPool::Transcendental, ..Default::default() };
        assert!(sweep(&bad).is_err());
    }

    #[test]
    fn small_rational_sweep_is_exact() {
        let config = SweepConfig { trials: 5, ..Default::default() };
        let summary = sweep(&config).unwrap();
        assert!(summary.pass(), "{summary}");
        for d in &summary.degrees {
            assert_eq!(d.max_top_residual, 0.0);
            assert_eq!(d.max_lower_order, 0.0);
        }
    }

    #[test]
    fn sweep_is_deterministic() {
        let config = SweepConfig { trials: 4, backend: Backend::Float, pool: FieldPool::Transcendental, seed: 11, ..Default::default() };
        let a = sweep(&config).unwrap().to_string();
        let b = sweep(&config).unwrap().to_string();
        assert_eq!(a, b);
    }
}
