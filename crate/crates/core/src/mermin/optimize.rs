use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use super::nelder_mead::{nelder_mead, SimplexOptions};
use super::plan::YDisplacement;
use super::sweeps::max_over_theta;
use crate::device::DeviceParams;
use crate::fockspace::SystemLayout;
use crate::ghzbuilder::SequenceParams;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OptimizeBounds {
    pub alpha: (f64, f64),
    /// Seconds.
    pub tau: (f64, f64),
}

impl Default for OptimizeBounds {
    fn default() -> Self {
        Self { alpha: (0.5, 3.0), tau: (10e-9, 1e-6) }
    }
}

impl OptimizeBounds {
    pub fn validate(&self) -> Result<()> {
        let (a0, a1) = self.alpha;
        let (t0, t1) = self.tau;
        if !(a0 > 0.0 && a1 > a0 && a1.is_finite()) {
            return Err(Error::InvalidArgument(format!("alpha bounds {:?}", self.alpha)));
        }
        if !(t0 > 0.0 && t1 > t0 && t1.is_finite()) {
            return Err(Error::InvalidArgument(format!("tau bounds {:?}", self.tau)));
        }
        Ok(())
    }

    fn physical(self, u: &[f64]) -> (f64, f64) {
        (self.alpha.0 + u[0] * (self.alpha.1 - self.alpha.0), self.tau.0 + u[1] * (self.tau.1 - self.tau.0))
    }

    fn unit(self, alpha: f64, tau: f64) -> [f64; 2] {
        [(alpha - self.alpha.0) / (self.alpha.1 - self.alpha.0), (tau - self.tau.0) / (self.tau.1 - self.tau.0)]
    }
}

#[derive(Clone, Copy, Debug)]
pub struct OptimizeOptions {
    /// Points per axis of the coarse scan.
    pub grid: usize,
    pub restarts: usize,
    pub simplex: SimplexOptions,
    pub y_form: YDisplacement,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        Self {
            grid: 11,
            restarts: 1,
            simplex: SimplexOptions { step: 0.08, max_evals: 60, f_tol: 1e-6, x_tol: 1e-4 },
            y_form: YDisplacement::Perpendicular,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TracePoint {
    pub stage: &'static str,
    pub alpha: f64,
    /// Seconds.
    pub tau: f64,
    /// Theta-maximised Bell value, NaN where the trial failed.
    pub bell: f64,
    pub theta: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct OptimizeResult {
    pub best: SequenceParams,
    pub bell: f64,
    pub theta: f64,
    pub trace: Vec<TracePoint>,
}

/// Maximises the theta-optimised `<B>` over real `alpha1 = alpha2` and
/// `tau`, with the closing displacements recomputed at every trial and the
/// Kerr mode taken from `init`: an `n x n` scan, then simplex polishing.
pub fn optimize_bell(
    device: &DeviceParams,
    layout: &Arc<SystemLayout>,
    init: &SequenceParams,
    bounds: &OptimizeBounds,
    opts: &OptimizeOptions,
) -> Result<OptimizeResult> {
    bounds.validate()?;
    let mut trace = Vec::new();
    let evaluate = |stage: &'static str, alpha: f64, tau: f64, trace: &mut Vec<TracePoint>| -> f64 {
        let run = SequenceParams::with_closure(device, Complex64::new(alpha, 0.0), Complex64::new(alpha, 0.0), tau, 0.0, init.kerr_mode)
            .and_then(|seq| max_over_theta(device, layout, &seq, opts.y_form));
        let (bell, theta) = match run {
            Ok(m) => (m.bell, m.theta),
            Err(e) => {
                log::info!("skipping alpha = {alpha:.4}, tau = {tau:.4e}: {e}");
                (f64::NAN, f64::NAN)
            }
        };
        trace.push(TracePoint { stage, alpha, tau, bell, theta });
        bell
    };

    evaluate("init", init.alpha1.re, init.tau, &mut trace);
    let n = opts.grid.max(2);
    for i in 0..n {
        for j in 0..n {
            let u = [i as f64 / (n - 1) as f64, j as f64 / (n - 1) as f64];
            let (a, t) = bounds.physical(&u);
            evaluate("grid", a, t, &mut trace);
        }
    }

    let best_of = |trace: &[TracePoint]| -> Option<TracePoint> {
        trace.iter().filter(|p| p.bell.is_finite()).copied().max_by(|a, b| a.bell.total_cmp(&b.bell))
    };
    let mut start = best_of(&trace).ok_or_else(|| Error::NonFinite("no finite objective on the scan grid".into()))?;
    for _ in 0..=opts.restarts {
        let x0 = bounds.unit(start.alpha, start.tau);
        nelder_mead(
            |u: &[f64]| {
                if u.iter().any(|x| !(0.0..=1.0).contains(x)) {
                    return f64::INFINITY;
                }
                let (a, t) = bounds.physical(u);
                -evaluate("simplex", a, t, &mut trace)
            },
            &x0,
            &opts.simplex,
        );
        start = best_of(&trace).expect("scan produced a finite point");
    }

    let best = SequenceParams::with_closure(
        device,
        Complex64::new(start.alpha, 0.0),
        Complex64::new(start.alpha, 0.0),
        start.tau,
        start.theta,
        init.kerr_mode,
    )?;
    Ok(OptimizeResult { best, bell: start.bell, theta: start.theta, trace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ghzbuilder::KerrMode;

    #[test]
    fn bounds_are_checked() {
        assert!(OptimizeBounds { alpha: (1.0, 0.5), tau: (1e-8, 1e-6) }.validate().is_err());
        assert!(OptimizeBounds { alpha: (0.5, 3.0), tau: (0.0, 1e-6) }.validate().is_err());
        assert!(OptimizeBounds::default().validate().is_ok());
        let b = OptimizeBounds::default();
        let u = b.unit(1.7, 4e-7);
        let (a, t) = b.physical(&u);
        assert!((a - 1.7).abs() < 1e-12 && (t - 4e-7).abs() < 1e-18);
    }

    #[test]
    fn never_worse_than_init() {
        let device = DeviceParams::paper_device();
        let layout = SystemLayout::canonical(22).unwrap();
        let init = SequenceParams::from_phi2(&device, 1.4, 4.7, 0.0, KerrMode::Ideal).unwrap();
        let bounds = OptimizeBounds { alpha: (1.2, 1.6), tau: (4.0e-7, 6.0e-7) };
        let opts = OptimizeOptions { grid: 3, restarts: 0, simplex: SimplexOptions { max_evals: 8, ..OptimizeOptions::default().simplex }, ..Default::default() };
        let r = optimize_bell(&device, &layout, &init, &bounds, &opts).unwrap();
        assert_eq!(r.trace[0].stage, "init");
        assert!(r.bell >= r.trace[0].bell);
        assert!(r.trace.iter().filter(|p| p.bell.is_finite()).all(|p| p.bell <= r.bell));
    }
}
