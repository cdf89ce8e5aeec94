use ghz_core::device::DeviceParams;
use ghz_core::fockspace::SystemLayout;
use ghz_core::ghzbuilder::{extract_beta, generate_ghz, KerrMode, SequenceParams};
use ghz_core::mermin::{
    bell_expectation, classical_extremes, enumerate_terms, max_over_theta, sample_bell, term_expectations, YDisplacement,
};
use ghz_core::detection::{as_shot_error_channels, visibility};
use ghz_core::tomography::{conditional_joint_wigner, Condition, GridSpec, WignerCut};

const Y: YDisplacement = YDisplacement::Perpendicular;

#[test]
fn generated_state_carries_predicted_cats() {
    let device = DeviceParams::paper_device();
    let layout = SystemLayout::canonical(31).unwrap();
    let seq = SequenceParams::paper(&device, KerrMode::Ideal).unwrap();
    let state = generate_ghz(&device, &layout, &seq).unwrap();
    let enc = seq.ideal_encoding(&device).unwrap();
    assert!((extract_beta(&state, 1).unwrap() - enc.beta1).norm() < 0.05);
    assert!((extract_beta(&state, 2).unwrap() - enc.beta2).norm() < 0.05);

    let terms = term_expectations(&state, &enc, Y).unwrap();
    assert!(terms.iter().all(|(_, v)| v.abs() < 1.0));
    let b = bell_expectation(&state, &enc, Y).unwrap();
    assert!(b > 8.0 && b < 16.0, "{b}");
}

#[test]
fn kerr_lowers_the_bell_value() {
    let device = DeviceParams::paper_device();
    let layout = SystemLayout::canonical(31).unwrap();
    let ideal = max_over_theta(&device, &layout, &SequenceParams::paper(&device, KerrMode::Ideal).unwrap(), Y).unwrap();
    let kerr = max_over_theta(&device, &layout, &SequenceParams::paper(&device, KerrMode::Kerr).unwrap(), Y).unwrap();
    assert!(kerr.bell < ideal.bell, "{} vs {}", kerr.bell, ideal.bell);
    assert!(kerr.bell > 8.0);
}

#[test]
fn ideal_objective_grows_with_alpha() {
    let device = DeviceParams::paper_device();
    let layout = SystemLayout::canonical(31).unwrap();
    let values: Vec<f64> = [1.0, 1.4, 1.8]
        .iter()
        .map(|&a| {
            let seq = SequenceParams::from_phi2(&device, a, 4.6, 0.0, KerrMode::Ideal).unwrap();
            max_over_theta(&device, &layout, &seq, Y).unwrap().bell
        })
        .collect();
    assert!(values.windows(2).all(|w| w[1] > w[0]), "{values:?}");
}

#[test]
fn conditional_fringes_have_opposite_sign() {
    let device = DeviceParams::paper_device();
    let layout = SystemLayout::canonical(31).unwrap();
    let seq = SequenceParams::paper(&device, KerrMode::Ideal).unwrap();
    let state = generate_ghz(&device, &layout, &seq).unwrap();
    let enc = seq.ideal_encoding(&device).unwrap();
    let spec = GridSpec { half_width: 0.3, points_per_axis: 3 };
    let pre = [-enc.beta1 / 2.0, -enc.beta2 / 2.0];
    let plus = conditional_joint_wigner(&state, Condition::Plus, WignerCut::ReRe, spec, pre).unwrap();
    let minus = conditional_joint_wigner(&state, Condition::Minus, WignerCut::ReRe, spec, pre).unwrap();
    let (p, m) = (plus.values[(1, 1)], minus.values[(1, 1)]);
    assert!(p * m < 0.0, "{p} {m}");
}

#[test]
fn sampled_bell_tracks_visibility_scaling() {
    let device = DeviceParams::paper_device();
    let layout = SystemLayout::canonical(31).unwrap();
    let seq = SequenceParams::paper(&device, KerrMode::Ideal).unwrap();
    let state = generate_ghz(&device, &layout, &seq).unwrap();
    let enc = seq.ideal_encoding(&device).unwrap();
    let exact = bell_expectation(&state, &enc, Y).unwrap();
    let v = visibility(&device.detection);
    let s = sample_bell(&state, &enc, Y, 20_000, &as_shot_error_channels(&device.detection), 3).unwrap();
    assert!((s.estimate - v.exact_product * exact).abs() < 4.0 * s.std_error, "{} vs {}", s.estimate, v.exact_product * exact);
    assert!((v.exact_product - v.v).abs() < 0.01);
}

#[test]
fn dropping_the_all_x_term_changes_the_classical_bound() {
    let terms = enumerate_terms();
    let (lo, hi) = classical_extremes(&terms[1..]);
    assert_ne!((lo, hi), (-4, 4));
    // regression value from exhaustive enumeration
    assert_eq!(hi, 5);
}
