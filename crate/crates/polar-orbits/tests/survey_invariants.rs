use std::sync::OnceLock;

use polar_core::dynamics::IntegratorConfig;
use polar_core::survey::{default_grid, summarize, SurveyConfig, SurveyRow, Verdict};
use polar_orbits::parallel::run_survey;

fn rows() -> &'static [SurveyRow] {
    static ROWS: OnceLock<Vec<SurveyRow>> = OnceLock::new();
    ROWS.get_or_init(|| run_survey(&default_grid(), &SurveyConfig::default()).unwrap())
}

#[test]
fn every_point_gets_exactly_one_verdict() {
    let s = summarize(rows());
    assert_eq!(s.total, 540);
    assert_eq!(s.verdicts.unclassified, 0);
    assert_eq!(s.verdicts.total(), 540);
    assert_eq!(s.by_prerequisites.values().map(|c| c.total()).sum::<usize>(), 540);
    assert_eq!(s.lighter.len() + s.heavier.len(), 540);
}

#[test]
fn planar_orbits_are_bound() {
    for r in rows() {
        let c = r.classification.unwrap();
        if c.verdict == Verdict::Planar {
            assert!(c.final_energy <= 0.0 && c.max_plane_deviation_deg <= 15.0, "{:?}", r.point);
        }
        if c.verdict == Verdict::Unbound {
            assert!(c.final_energy > 0.0);
        }
    }
}

#[test]
fn rows_are_ordered_by_mass_ratio_then_position() {
    assert!(rows().windows(2).all(|w| (w[0].point.b, w[0].point.w) <= (w[1].point.b, w[1].point.w)));
}

#[test]
fn doubling_the_output_density_flips_no_verdict() {
    let cfg = SurveyConfig {
        integrator: IntegratorConfig { dense_samples: 20_000, ..IntegratorConfig::default() },
        ..SurveyConfig::default()
    };
    let fine = run_survey(&default_grid(), &cfg).unwrap();
    let flips: Vec<_> =
        rows().iter().zip(&fine).filter(|(a, b)| a.verdict() != b.verdict()).map(|(a, _)| a.point).collect();
    assert!(flips.is_empty(), "{flips:?}");
}
