//! Survey driver that spreads grid points over the rayon thread pool.

use rayon::prelude::*;

use polar_core::survey::{build_grid, evaluate_point, row_order, GridPoint, GridSpec, SurveyConfig, SurveyRow};
use polar_core::Result;

/// Expand every grid specification into points.
pub fn expand(specs: &[GridSpec]) -> Result<Vec<GridPoint>> {
    let per_spec: Vec<Vec<GridPoint>> = specs.par_iter().map(build_grid).collect::<Result<_>>()?;
    Ok(per_spec.into_iter().flatten().collect())
}

/// Evaluate `points` concurrently; rows come back sorted by `(b, w)`.
/// `log` is called once per finished point, from worker threads.
pub fn survey_points<F>(points: &[GridPoint], cfg: &SurveyConfig, log: F) -> Result<Vec<SurveyRow>>
where
    F: Fn(&SurveyRow) + Sync,
{
    cfg.integrator.validate()?;
    let mut rows: Vec<SurveyRow> = points
        .par_iter()
        .map(|p| {
            let row = evaluate_point(p, cfg);
            log(&row);
            row
        })
        .collect();
    rows.sort_by(row_order);
    Ok(rows)
}

/// Parallel counterpart of [`polar_core::survey::run_survey`].
pub fn run_survey(specs: &[GridSpec], cfg: &SurveyConfig) -> Result<Vec<SurveyRow>> {
    survey_points(&expand(specs)?, cfg, |_| {})
}

#[cfg(test)]
mod tests {
    use super::*;
    use polar_core::Star;

    #[test]
    fn matches_the_sequential_survey() {
        let specs = [GridSpec { star: Star::Lighter, b_values: vec![4.0, 2.0], w_fractions: vec![0.3, 0.1, 0.6] }];
        let cfg = SurveyConfig::default();
        let par = run_survey(&specs, &cfg).unwrap();
        let seq = polar_core::survey::run_survey(&specs, &cfg).unwrap();
        assert_eq!(par, seq);
    }
}
