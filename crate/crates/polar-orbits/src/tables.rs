//! CSV tables: trajectories, boundary curves, survey results, ansatz series.

use std::io::{Read, Write};

use polar_core::dynamics::Trajectory;
use polar_core::equilibrium::{BoundaryKind, BoundaryPoint};
use polar_core::survey::SurveyRow;
use polar_core::system::rotating_to_inertial;
use polar_core::{Frame, PhaseState, Star, Vec3};

use crate::{fmt_float, fmt_opt};

pub const TRAJECTORY_HEADER: [&str; 13] =
    ["t", "x", "y", "z", "vx", "vy", "vz", "frame", "M", "jacobi", "r_light", "r_heavy", "e_star"];
pub const M_SERIES_HEADER: [&str; 2] = ["t_over_period", "m_over_m0"];
pub const CURVES_HEADER: [&str; 4] = ["kind", "star", "b", "w_boundary"];
pub const RESULTS_HEADER: [&str; 17] = [
    "star",
    "b",
    "w",
    "v0",
    "f_p",
    "freq_ratio",
    "delta_w_amp",
    "delta_v_amp",
    "exists",
    "stable",
    "fast",
    "small_pert",
    "verdict",
    "max_plane_dev_deg",
    "m_sign_changed",
    "min_abs_m_ratio",
    "aborted",
];
/// Optional survey columns appended after the fixed ones.
pub const RESULTS_EXTRA: [&str; 5] = ["phase", "fraction", "jacobi_drift", "torque_residual", "error"];
pub const ANSATZ_HEADER: [&str; 6] = ["t", "M_eq7", "M_eq14", "T1", "T2", "residual"];
pub const FIGURE_HEADER: [&str; 5] = ["b", "w", "distance", "all_prerequisites", "verdict"];

#[derive(Debug)]
pub enum TableError {
    Csv(csv::Error),
    Format(String),
}

impl std::fmt::Display for TableError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TableError::Csv(e) => write!(f, "{e}"),
            TableError::Format(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for TableError {}

impl From<csv::Error> for TableError {
    fn from(e: csv::Error) -> Self {
        TableError::Csv(e)
    }
}

pub type TableResult<T> = Result<T, TableError>;

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w)
}

fn flag(b: bool) -> String {
    if b { "true" } else { "false" }.to_string()
}

/// One row per dense sample. Positions and velocities are given in `frame`;
/// the diagnostic columns are frame-independent except `M`, which is always
/// the rotating-frame axial momentum.
pub fn write_trajectory<W: Write>(out: W, traj: &Trajectory, frame: Frame) -> TableResult<()> {
    let mut w = writer(out);
    w.write_record(TRAJECTORY_HEADER)?;
    for s in &traj.samples {
        let st = match frame {
            Frame::Rotating => s.state,
            Frame::Inertial => rotating_to_inertial(&s.state, traj.cfg.omega_s).expect("samples are rotating"),
        };
        w.write_record([
            fmt_float(st.t),
            fmt_float(st.pos.x),
            fmt_float(st.pos.y),
            fmt_float(st.pos.z),
            fmt_float(st.vel.x),
            fmt_float(st.vel.y),
            fmt_float(st.vel.z),
            frame.name().to_string(),
            fmt_float(s.m),
            fmt_float(s.jacobi),
            fmt_float(s.r_light),
            fmt_float(s.r_heavy),
            fmt_float(s.e_star),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// States read back from a trajectory table.
pub fn read_trajectory<R: Read>(input: R) -> TableResult<Vec<PhaseState>> {
    let mut r = csv::Reader::from_reader(input);
    let headers = r.headers()?.clone();
    let col = |name: &str| {
        headers.iter().position(|h| h == name).ok_or_else(|| TableError::Format(format!("missing column `{name}`")))
    };
    let idx = [col("t")?, col("x")?, col("y")?, col("z")?, col("vx")?, col("vy")?, col("vz")?];
    let frame_col = col("frame")?;
    let mut states = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        let mut v = [0.0; 7];
        for (slot, &i) in v.iter_mut().zip(&idx) {
            let field = rec.get(i).unwrap_or("");
            *slot = field.parse().map_err(|_| TableError::Format(format!("row {}: bad number `{field}`", line + 2)))?;
        }
        let frame = match rec.get(frame_col) {
            Some("rotating") => Frame::Rotating,
            Some("inertial") => Frame::Inertial,
            other => return Err(TableError::Format(format!("row {}: bad frame {other:?}", line + 2))),
        };
        states.push(PhaseState::new(v[0], Vec3::new(v[1], v[2], v[3]), Vec3::new(v[4], v[5], v[6]), frame));
    }
    Ok(states)
}

/// `M(t)/M(0)` against `t/tau_S`.
pub fn write_m_series<W: Write>(out: W, traj: &Trajectory) -> TableResult<()> {
    let mut w = writer(out);
    w.write_record(M_SERIES_HEADER)?;
    let period = traj.cfg.stellar_period();
    let m0 = traj.samples.first().map(|s| s.m).unwrap_or(f64::NAN);
    for s in &traj.samples {
        w.write_record([fmt_float(s.state.t / period), fmt_float(s.m / m0)])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Boundary polyline; `w_boundary` is the distance from `star` and is empty
/// where the predicate never changes.
pub fn write_curve<W: Write>(out: W, kind: BoundaryKind, star: Star, points: &[BoundaryPoint]) -> TableResult<()> {
    let mut w = writer(out);
    w.write_record(CURVES_HEADER)?;
    for p in points {
        w.write_record([kind.name().to_string(), star.name().to_string(), fmt_float(p.b), fmt_opt(p.distance)])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn write_results<W: Write>(out: W, rows: &[SurveyRow]) -> TableResult<()> {
    let mut w = writer(out);
    w.write_record(RESULTS_HEADER.iter().chain(&RESULTS_EXTRA))?;
    for r in rows {
        let o = r.orbit.as_ref();
        let c = r.classification.as_ref();
        let mut rec = vec![
            r.point.star.name().to_string(),
            fmt_float(r.point.b),
            fmt_float(r.point.w),
            fmt_opt(o.map(|o| o.v0)),
            fmt_opt(o.map(|o| o.f_p)),
            fmt_opt(o.map(|o| o.freq_ratio)),
            fmt_opt(o.and_then(|o| o.delta_w_amp)),
            fmt_opt(o.and_then(|o| o.delta_v_amp)),
            flag(r.prereq.exists),
            flag(r.prereq.stable),
            flag(r.prereq.fast),
            flag(r.prereq.small_perturbation),
            c.map(|c| c.verdict.name()).unwrap_or("").to_string(),
            fmt_opt(c.map(|c| c.max_plane_deviation_deg)),
            c.map(|c| flag(c.m_sign_changed)).unwrap_or_default(),
            fmt_opt(c.map(|c| c.min_abs_m_ratio)),
            flag(r.aborted()),
        ];
        rec.extend([
            fmt_float(r.phase),
            fmt_float(r.point.fraction),
            fmt_opt(r.jacobi_drift),
            fmt_opt(r.torque_residual),
            r.error.map(|e| e.to_string()).unwrap_or_default(),
        ]);
        w.write_record(&rec)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Scatter data for one of the two parameter-space figures.
pub fn write_figure<W: Write>(out: W, points: &[polar_core::survey::FigurePoint]) -> TableResult<()> {
    let mut w = writer(out);
    w.write_record(FIGURE_HEADER)?;
    for p in points {
        w.write_record([
            fmt_float(p.b),
            fmt_float(p.w),
            fmt_float(p.distance),
            flag(p.all_prerequisites),
            p.verdict.map(|v| v.name()).unwrap_or("").to_string(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// One row of the ansatz check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnsatzRow {
    pub t: f64,
    pub m_ansatz: f64,
    pub m_solution: f64,
    pub t1: f64,
    pub t2: f64,
    pub residual: f64,
}

pub fn write_ansatz<W: Write>(out: W, rows: &[AnsatzRow]) -> TableResult<()> {
    let mut w = writer(out);
    w.write_record(ANSATZ_HEADER)?;
    for r in rows {
        w.write_record([r.t, r.m_ansatz, r.m_solution, r.t1, r.t2, r.residual].map(fmt_float))?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use polar_core::dynamics::{integrate, IntegratorConfig};

    #[test]
    fn trajectory_round_trip() {
        let cfg = polar_core::SystemConfig::new(2.0).unwrap();
        let s0 = PhaseState::new(0.0, Vec3::new(0.5, 0.2, 0.0), Vec3::new(0.0, 0.0, 1.0), Frame::Rotating);
        let icfg = IntegratorConfig { dense_samples: 1000, ..Default::default() };
        let traj = integrate(&s0, &cfg, &icfg, 0.1).unwrap();
        let mut buf = Vec::new();
        write_trajectory(&mut buf, &traj, Frame::Rotating).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("t,x,y,z,vx,vy,vz,frame,M,jacobi,r_light,r_heavy,e_star\n"));
        assert!(!text.contains('\r'));
        let back = read_trajectory(buf.as_slice()).unwrap();
        assert_eq!(back.len(), 1000);
        for (a, b) in back.iter().zip(traj.states()) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn reader_reports_bad_rows() {
        let text = "t,x,y,z,vx,vy,vz,frame\n0,1,2,3,4,5,6,sideways\n";
        assert!(matches!(read_trajectory(text.as_bytes()), Err(TableError::Format(_))));
        assert!(read_trajectory("t,x\n0,1\n".as_bytes()).is_err());
    }

    #[test]
    fn missing_boundary_is_an_empty_field() {
        let mut buf = Vec::new();
        let pts = [BoundaryPoint { b: 2.0, distance: None }, BoundaryPoint { b: 3.0, distance: Some(0.25) }];
        write_curve(&mut buf, BoundaryKind::Perturbation, Star::Heavier, &pts).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "kind,star,b,w_boundary\nperturbation,heavier,2.0,\nperturbation,heavier,3.0,0.25\n"
        );
    }
}
