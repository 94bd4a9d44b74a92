use qdarwin_core::experiments::{parse_table, PlotLayout};
use qdarwin_core::*;

fn small_spec(selection: TimeSelection, quantities: Vec<Quantity>) -> SweepSpec {
    SweepSpec {
        tag: "small".into(),
        panels: vec![Panel {
            label: "main".into(),
            scenarios: vec![InitialScenario::CircleLeft, InitialScenario::Amplitude { x0: 0.7 }],
            p: vec![0.0, 1.0],
            omega: vec![0.1],
            gamma: vec![0.1],
            n: vec![3],
        }],
        time_grid: TimeGrid { points: 41, gamma_t_max: std::f64::consts::PI },
        redundancy: RedundancyConfig::default(),
        quantities,
        selection,
    }
}

#[test]
fn series_rows_come_in_point_then_time_order() {
    let spec = small_spec(TimeSelection::Series, vec![Quantity::EntropyS, Quantity::ChiE1, Quantity::AccMiE1]);
    let rows = run_sweep(&spec).unwrap();
    assert_eq!(rows.len(), 4 * 41);
    assert_eq!(rows[0].scenario, "circle-left");
    assert_eq!(rows[0].p, 0.0);
    assert_eq!(rows[41].p, 1.0);
    assert_eq!(rows[82].scenario, "amplitude");
    assert!(rows.windows(2).take(40).all(|w| w[0].time < w[1].time));
    // S = 0 at t = 0: normalisation undefined and flagged, not failed
    assert_eq!(rows[0].chi_e1_normalized, None);
    assert!(rows[0].flag.contains("zero-entropy"));
    for r in rows.iter().filter(|r| r.entropy_s.unwrap() > 1e-3) {
        let acc = r.acc_mi_e1.unwrap();
        assert!(acc <= r.chi_e1.unwrap() + 1e-6);
    }
}

#[test]
fn selected_rows_carry_pointer_and_sbs_columns() {
    let spec = small_spec(
        TimeSelection::MaxRedundancy,
        vec![Quantity::EntropyS, Quantity::ChiE1, Quantity::Redundancy, Quantity::PointerFidelity, Quantity::SbsReport],
    );
    let rows = run_sweep(&spec).unwrap();
    assert_eq!(rows.len(), 4);
    for r in &rows {
        assert_eq!(r.redundancy_defined, Some(true));
        assert!(r.pointer_fidelity.is_some());
        assert!(r.sbs_reconstruction_error.is_some(), "{r:?}");
        assert_eq!(r.meta.threshold_mode, "literal");
    }
    // commuting points: exact pointer basis |0⟩, |1⟩
    assert!((rows[0].pointer_fidelity.unwrap() - 1.0).abs() < 1e-6);
    assert!((rows[2].pointer_fidelity.unwrap() - 1.0).abs() < 1e-6);
}

#[test]
fn table_and_plot_round_trip() {
    let spec = small_spec(TimeSelection::MaxRedundancy, vec![Quantity::EntropyS, Quantity::ChiE1, Quantity::Redundancy]);
    let rows = run_sweep(&spec).unwrap();
    let mut bytes = Vec::new();
    write_table(&rows, &mut bytes).unwrap();
    let back = parse_table(bytes.as_slice()).unwrap();
    let mut again = Vec::new();
    write_table(&back, &mut again).unwrap();
    assert_eq!(bytes, again);
    let svg = experiments::render_svg(&PlotLayout::generic(&back).panels(&back));
    assert!(svg.contains("<circle"));
}

#[test]
fn invalid_spec_names_the_field() {
    let mut spec = small_spec(TimeSelection::Series, vec![Quantity::EntropyS]);
    spec.panels[0].p = vec![0.5, 1.5];
    match run_sweep(&spec) {
        Err(Error::Spec { path, .. }) => assert_eq!(path, "panels[0].p"),
        other => panic!("unexpected {other:?}"),
    }
}
