use polar_core::equilibrium::{prerequisites, stability_extent};
use polar_core::survey::*;
use polar_core::Star;

#[test]
fn default_grid_points_are_stable_orbits() {
    let mut total = 0;
    for spec in default_grid() {
        let points = build_grid(&spec).unwrap();
        total += points.len();
        let extents: Vec<f64> = spec.b_values.iter().map(|&b| stability_extent(spec.star, b).unwrap()).collect();
        for (i, p) in points.iter().enumerate() {
            let a = prerequisites(p.w, p.b).unwrap();
            assert!(a.prereq.exists && a.prereq.stable, "{p:?}");
            assert!(p.distance() < extents[i / spec.w_fractions.len()]);
        }
    }
    assert_eq!(total, 540);
}

#[test]
fn small_survey_is_ordered_and_partitioned() {
    let specs = [
        GridSpec { star: Star::Lighter, b_values: vec![3.0, 1.5], w_fractions: vec![0.5, 0.1] },
        GridSpec { star: Star::Heavier, b_values: vec![3.0], w_fractions: vec![0.2] },
    ];
    let rows = run_survey(&specs, &SurveyConfig::default()).unwrap();
    assert_eq!(rows.len(), 5);
    assert!(rows.windows(2).all(|r| row_order(&r[0], &r[1]).is_lt()));
    let s = summarize(&rows);
    assert_eq!(s.verdicts.total(), 5);
    assert_eq!(s.by_prerequisites.values().map(|c| c.total()).sum::<usize>(), 5);
    assert_eq!((s.lighter.len(), s.heavier.len()), (4, 1));
    for r in &rows {
        let c = r.classification.expect("classified");
        assert!(r.jacobi_drift.unwrap() < 1e-9);
        if c.verdict == Verdict::Planar {
            assert!(c.max_plane_deviation_deg <= PLANE_TOLERANCE_DEG);
            assert!(c.final_energy <= 0.0);
        }
        if c.verdict == Verdict::Unbound {
            assert!(c.final_energy > 0.0);
        }
    }
}

#[test]
fn point_failures_stay_in_the_row() {
    // not an equilibrium: the row records the error instead of a verdict
    let p = GridPoint { star: Star::Lighter, b: 2.0, w: 0.45, fraction: 0.9 };
    let row = evaluate_point(&p, &SurveyConfig::default());
    assert!(row.classification.is_none() && row.error.is_some() && row.aborted());
}

#[test]
fn invalid_integrator_settings_are_rejected() {
    let mut cfg = SurveyConfig::default();
    cfg.integrator.dense_samples = 10;
    assert!(run_survey(&default_grid(), &cfg).is_err());
}
