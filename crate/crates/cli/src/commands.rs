use std::f64::consts::TAU;
use std::sync::Arc;

use ghz_core::detection::{as_shot_error_channels, predicted_measured_bell, visibility as visibility_of, ShotErrorChannels};
use ghz_core::device::DeviceParams;
use ghz_core::fockspace::{StateVector, SystemLayout};
use ghz_core::ghzbuilder::{
    analytic_target_state, extract_beta, generate_ghz, phi2_for_beta_magnitude, KerrMode, SequenceParams, PAPER_ALPHA, PAPER_BETA2,
};
use ghz_core::mermin::{
    bell_theta_sweep, fit_sinusoid, ideal_bell_vs_amplitude, measurement_encoding, optimize_bell, sample_bell, sigma_y_single_cavity,
    term_expectations, theta_grid, OptimizeBounds, OptimizeOptions, YDisplacement,
};
use ghz_core::tomography::{conditional_single_wigner, joint_wigner_branches, Condition, GridSpec, QubitLevel, WignerCut};
use ghz_core::Complex64;
use serde::Serialize;

use crate::args::{BellArgs, CavityArg, ConditionArg, CutArg, GenerateArgs, LevelArg, OptimizeArgs, SequenceArgs, VisibilityArgs, WignerArgs, YFormArg};
use crate::output::{num, Failure, Run};

fn sequence(device: &DeviceParams, a: &SequenceArgs) -> Result<SequenceParams, Failure> {
    let mode = if a.kerr { KerrMode::Kerr } else { KerrMode::Ideal };
    let alpha = a.alpha.unwrap_or(PAPER_ALPHA);
    let seq = match a.tau_ns {
        Some(t) => {
            let z = Complex64::new(alpha, 0.0);
            SequenceParams::with_closure(device, z, z, t * 1e-9, a.theta, mode)?
        }
        None => {
            let phi2 = match a.phi2 {
                Some(p) => p,
                None => phi2_for_beta_magnitude(PAPER_ALPHA, PAPER_BETA2.norm())?,
            };
            SequenceParams::from_phi2(device, alpha, phi2, a.theta, mode)?
        }
    };
    seq.validate()?;
    Ok(seq)
}

fn layout(dim: usize) -> Result<Arc<SystemLayout>, Failure> {
    Ok(SystemLayout::canonical(dim)?)
}

fn y_form(arg: YFormArg) -> YDisplacement {
    match arg {
        YFormArg::Perpendicular => YDisplacement::Perpendicular,
        YFormArg::Literal => YDisplacement::Literal,
    }
}

fn qubit_populations(state: &StateVector) -> Vec<(String, f64)> {
    let layout = state.layout();
    let mut pops = [0.0; 8];
    for (i, z) in state.amplitudes().iter().enumerate() {
        let k = layout.digit(i, 0) << 2 | layout.digit(i, 1) << 1 | layout.digit(i, 2);
        pops[k] += z.norm_sqr();
    }
    pops.iter()
        .enumerate()
        .map(|(k, &p)| ((0..3).map(|q| if k >> (2 - q) & 1 == 1 { 'e' } else { 'g' }).collect(), p))
        .collect()
}

#[derive(Serialize)]
struct GenerateSummary {
    kerr_mode: KerrMode,
    alpha: [Complex64; 4],
    tau_s: f64,
    theta: f64,
    beta_predicted: [Complex64; 2],
    beta_extracted: [Option<Complex64>; 2],
    vacuum_overlaps: [f64; 2],
    qubit_populations: Vec<(String, f64)>,
    target_fidelity: f64,
}

pub fn generate(run: &mut Run, a: &GenerateArgs) -> Result<(), Failure> {
    let seq = sequence(&run.device, &a.seq)?;
    let layout = layout(a.common.dim)?;
    let state = generate_ghz(&run.device, &layout, &seq)?;
    let enc = seq.ideal_encoding(&run.device)?;
    let target = analytic_target_state(&layout, &enc, seq.theta)?;
    let extracted = [1, 2].map(|which| match extract_beta(&state, which) {
        Ok(b) => Some(b),
        Err(e) => {
            log::warn!("beta{which} extraction failed: {e}");
            None
        }
    });
    let summary = GenerateSummary {
        kerr_mode: seq.kerr_mode,
        alpha: [seq.alpha1, seq.alpha2, seq.alpha3, seq.alpha4],
        tau_s: seq.tau,
        theta: seq.theta,
        beta_predicted: [enc.beta1, enc.beta2],
        beta_extracted: extracted,
        vacuum_overlaps: enc.vacuum_overlaps(),
        qubit_populations: qubit_populations(&state),
        target_fidelity: state.fidelity(&target)?,
    };
    run.note("target_fidelity", summary.target_fidelity);
    run.write_json(a.common.output.as_deref(), &summary)
}

pub fn wigner(run: &mut Run, a: &WignerArgs) -> Result<(), Failure> {
    let seq = sequence(&run.device, &a.seq)?;
    let layout = layout(a.common.dim)?;
    let state = generate_ghz(&run.device, &layout, &seq)?;
    let enc = measurement_encoding(&run.device, &state, &seq)?;
    let spec = GridSpec { half_width: a.half_width, points_per_axis: a.points };

    if let (Some(cavity), Some(level)) = (a.single, a.project_q3) {
        let (label, beta) = match cavity {
            CavityArg::S1 => ("S1", enc.beta1),
            CavityArg::S2 => ("S2", enc.beta2),
        };
        let level = match level {
            LevelArg::G => QubitLevel::G,
            LevelArg::E => QubitLevel::E,
        };
        let grid = conditional_single_wigner(&state, level, label, beta / 2.0, spec)?;
        let mut rows = Vec::new();
        for i in 0..a.points {
            for j in 0..a.points {
                let z = grid.centers[0] + grid.point(i, j).0;
                rows.push(vec![num(z.re), num(z.im), num(grid.values[(i, j)])]);
            }
        }
        if let Some((i, j, w)) = grid.argmax() {
            let z = grid.centers[0] + grid.point(i, j).0;
            run.note("peak", (z, w));
        }
        return run.write_csv(a.common.output.as_deref(), &["re", "im", "w"], rows);
    }

    let cut = match a.cut {
        Some(CutArg::Rere) => WignerCut::ReRe,
        Some(CutArg::Imim) => WignerCut::ImIm,
        None => return Err(Failure::Usage("choose --cut or --single".into())),
    };
    let branches = joint_wigner_branches(&state, cut, spec, [-enc.beta1 / 2.0, -enc.beta2 / 2.0])?;
    run.note("p_plus", branches.p_plus);
    run.note("p_minus", branches.p_minus);
    let grid = match a.condition {
        ConditionArg::Plus => branches.select(Condition::Plus).1,
        ConditionArg::Minus => branches.select(Condition::Minus).1,
        ConditionArg::All => &branches.unconditional,
    };
    let mut rows = Vec::new();
    for i in 0..a.points {
        for j in 0..a.points {
            let (g1, g2) = grid.point(i, j);
            let (z1, z2) = (grid.centers[0] + g1, grid.centers[1] + g2);
            rows.push(vec![num(z1.re), num(z1.im), num(z2.re), num(z2.im), num(grid.values[(i, j)])]);
        }
    }
    run.write_csv(a.common.output.as_deref(), &["re1", "im1", "re2", "im2", "w"], rows)
}

pub fn bell(run: &mut Run, a: &BellArgs) -> Result<(), Failure> {
    let form = y_form(a.y_form);
    let out = a.common.output.as_deref();

    if a.amplitude_sweep {
        if !(a.beta_step > 0.0) || !(a.beta_max >= a.beta_min) || a.beta_min < 0.0 {
            return Err(Failure::Usage("amplitude sweep needs 0 <= beta-min <= beta-max and beta-step > 0".into()));
        }
        let n = ((a.beta_max - a.beta_min) / a.beta_step + 1e-9).floor() as usize + 1;
        let betas: Vec<f64> = (0..n).map(|i| a.beta_min + a.beta_step * i as f64).collect();
        let points = ideal_bell_vs_amplitude(&betas, a.common.dim, form)?;
        let mut rows = Vec::new();
        for p in &points {
            let sy = if p.beta > 0.0 { sigma_y_single_cavity(p.beta, a.common.dim, form)? } else { f64::NAN };
            rows.push(vec![num(p.beta), num(p.bell), num(sy)]);
        }
        run.note("dims", points.iter().map(|p| p.dim).collect::<Vec<_>>());
        return run.write_csv(out, &["beta", "bell_ideal", "sigma_y"], rows);
    }

    let seq = sequence(&run.device, &a.seq)?;
    let layout = layout(a.common.dim)?;

    if a.theta_sweep {
        let curve = bell_theta_sweep(&run.device, &layout, &seq, &theta_grid(a.points), form)?;
        let max_abs = curve.iter().map(|p| p.1.abs()).fold(0.0, f64::max);
        run.note("max_abs_bell", max_abs);
        if let Ok(fit) = fit_sinusoid(&curve) {
            run.note("fit", fit);
        }
        let rows = curve.iter().map(|&(t, b)| vec![num(t), num(b)]).collect();
        return run.write_csv(out, &["theta_rad", "bell"], rows);
    }

    let state = generate_ghz(&run.device, &layout, &seq)?;
    let enc = measurement_encoding(&run.device, &state, &seq)?;
    run.note("beta", [enc.beta1, enc.beta2]);

    if let Some(shots) = a.shots {
        let channels = if a.with_detection { as_shot_error_channels(&run.device.detection) } else { ShotErrorChannels::NONE };
        run.seed = Some(a.seed);
        let s = sample_bell(&state, &enc, form, shots, &channels, a.seed)?;
        run.note("bell_estimate", s.estimate);
        run.note("bell_std_error", s.std_error);
        let rows = s
            .terms
            .iter()
            .enumerate()
            .map(|(i, (t, c))| vec![(i + 1).to_string(), t.word(), t.sign.to_string(), num(c.estimate), num(c.std_error)])
            .collect();
        return run.write_csv(out, &["term", "letters", "sign", "estimate", "std_error"], rows);
    }

    let terms = term_expectations(&state, &enc, form)?;
    let total: f64 = terms.iter().map(|(t, v)| t.sign as f64 * v).sum();
    run.note("bell", total);
    let rows = terms
        .iter()
        .enumerate()
        .map(|(i, (t, v))| vec![(i + 1).to_string(), t.word(), t.sign.to_string(), num(*v)])
        .collect();
    run.write_csv(out, &["term", "letters", "sign", "value"], rows)
}

#[derive(Serialize)]
struct VisibilityReport {
    #[serde(rename = "P0")]
    p0: f64,
    #[serde(rename = "P1")]
    p1: f64,
    #[serde(rename = "V")]
    v: f64,
    exact_product: f64,
    fidelities: ghz_core::detection::ErrorFidelities,
    predicted_bell: Option<f64>,
    measured_ratio: Option<f64>,
}

pub fn visibility(run: &mut Run, a: &VisibilityArgs) -> Result<(), Failure> {
    let v = visibility_of(&run.device.detection);
    let report = VisibilityReport {
        p0: v.p0,
        p1: v.p1,
        v: v.v,
        exact_product: v.exact_product,
        fidelities: v.fidelities,
        predicted_bell: a.ideal_bell.map(|b| predicted_measured_bell(v.v, b)),
        measured_ratio: a.measured_bell.zip(a.ideal_bell).map(|(m, b)| m / b),
    };
    run.write_json(a.common.output.as_deref(), &report)
}

#[derive(Serialize)]
struct OptimizeReport {
    kerr_mode: KerrMode,
    alpha: f64,
    tau_s: f64,
    theta: f64,
    bell: f64,
    init_bell: f64,
    evaluations: usize,
}

pub fn optimize(run: &mut Run, a: &OptimizeArgs) -> Result<(), Failure> {
    let bounds = OptimizeBounds { alpha: (a.alpha_min, a.alpha_max), tau: (a.tau_min_ns * 1e-9, a.tau_max_ns * 1e-9) };
    bounds.validate()?;
    let mode = if a.ideal { KerrMode::Ideal } else { KerrMode::Kerr };
    let mut init = SequenceParams::paper(&run.device, mode)?;
    if let Some(alpha) = a.init_alpha {
        init.alpha1 = Complex64::new(alpha, 0.0);
    }
    if let Some(t) = a.init_tau_ns {
        init.tau = t * 1e-9;
    }
    let opts = OptimizeOptions { grid: a.grid, y_form: y_form(a.y_form), ..Default::default() };
    let layout = layout(a.common.dim)?;
    let r = optimize_bell(&run.device, &layout, &init, &bounds, &opts)?;
    if let Some(path) = &a.trace {
        let rows = r.trace.iter().map(|p| vec![p.stage.to_string(), num(p.alpha), num(p.tau), num(p.bell), num(p.theta)]).collect();
        run.write_csv(Some(path), &["stage", "alpha", "tau_s", "bell", "theta_rad"], rows)?;
    }
    let report = OptimizeReport {
        kerr_mode: mode,
        alpha: r.best.alpha1.re,
        tau_s: r.best.tau,
        theta: r.theta.rem_euclid(TAU),
        bell: r.bell,
        init_bell: r.trace[0].bell,
        evaluations: r.trace.len(),
    };
    run.note("bell", r.bell);
    run.write_json(a.common.output.as_deref(), &report)
}
