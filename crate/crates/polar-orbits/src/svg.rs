//! Bare-bones SVG line plots for looking at single orbits.

use std::fmt::Write as _;

use polar_core::dynamics::Trajectory;
use polar_core::system::rotating_to_inertial;
use polar_core::Vec3;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 56.0;

/// A named polyline; `None` entries break the line.
pub struct Series {
    pub label: String,
    pub color: &'static str,
    pub width: f64,
    pub points: Vec<Option<(f64, f64)>>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub x: (f64, f64),
    pub y: (f64, f64),
}

impl Bounds {
    /// Smallest box holding every point, padded by 5% on each side.
    pub fn fit(series: &[Series]) -> Self {
        let mut b = Bounds { x: (f64::INFINITY, f64::NEG_INFINITY), y: (f64::INFINITY, f64::NEG_INFINITY) };
        for &(x, y) in series.iter().flat_map(|s| s.points.iter().flatten()) {
            b.x = (b.x.0.min(x), b.x.1.max(x));
            b.y = (b.y.0.min(y), b.y.1.max(y));
        }
        if !b.x.0.is_finite() {
            return Bounds { x: (0.0, 1.0), y: (0.0, 1.0) };
        }
        b.pad(0.05)
    }

    fn pad(self, frac: f64) -> Self {
        let grow = |(lo, hi): (f64, f64)| {
            let d = if hi > lo { (hi - lo) * frac } else { lo.abs().max(1.0) * frac };
            (lo - d, hi + d)
        };
        Bounds { x: grow(self.x), y: grow(self.y) }
    }

    fn contains(&self, (x, y): (f64, f64)) -> bool {
        x >= self.x.0 && x <= self.x.1 && y >= self.y.0 && y <= self.y.1
    }
}

fn tidy(x: f64) -> String {
    format!("{:.2}", x)
}

/// Render `series` inside `bounds`; points outside are dropped and break the
/// line they belong to.
pub fn plot(title: &str, x_label: &str, y_label: &str, series: &[Series], bounds: Bounds) -> String {
    let sx = |x: f64| MARGIN + (x - bounds.x.0) / (bounds.x.1 - bounds.x.0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - bounds.y.0) / (bounds.y.1 - bounds.y.0) * (HEIGHT - 2.0 * MARGIN);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ =
        writeln!(s, r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{}</text>"#, WIDTH / 2.0, escape(title));

    // frame and tick labels at the ends of each axis
    let (x0, x1, y0, y1) = (MARGIN, WIDTH - MARGIN, HEIGHT - MARGIN, MARGIN);
    let _ =
        writeln!(s, r#"<rect x="{x0}" y="{y1}" width="{}" height="{}" fill="none" stroke="black"/>"#, x1 - x0, y0 - y1);
    let _ = writeln!(s, r#"<text x="{x0}" y="{}" text-anchor="middle">{}</text>"#, y0 + 16.0, tidy(bounds.x.0));
    let _ = writeln!(s, r#"<text x="{x1}" y="{}" text-anchor="middle">{}</text>"#, y0 + 16.0, tidy(bounds.x.1));
    let _ = writeln!(s, r#"<text x="{}" y="{y0}" text-anchor="end">{}</text>"#, x0 - 4.0, tidy(bounds.y.0));
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#, x0 - 4.0, y1 + 10.0, tidy(bounds.y.1));
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 12.0,
        escape(x_label)
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        escape(y_label)
    );
    if bounds.y.0 < 0.0 && bounds.y.1 > 0.0 {
        let _ = writeln!(s, r##"<line x1="{x0}" y1="{z}" x2="{x1}" y2="{z}" stroke="#bbb"/>"##, z = sy(0.0));
    }

    for (k, ser) in series.iter().enumerate() {
        let mut run: Vec<String> = Vec::new();
        let flush = |run: &mut Vec<String>, s: &mut String| {
            if run.len() > 1 {
                let _ = writeln!(
                    s,
                    r#"<polyline fill="none" stroke="{}" stroke-width="{}" points="{}"/>"#,
                    ser.color,
                    ser.width,
                    run.join(" ")
                );
            }
            run.clear();
        };
        for p in &ser.points {
            match p {
                Some(p) if bounds.contains(*p) => run.push(format!("{:.2},{:.2}", sx(p.0), sy(p.1))),
                _ => flush(&mut run, &mut s),
            }
        }
        flush(&mut run, &mut s);
        let ly = y1 + 16.0 + 16.0 * k as f64;
        let _ = writeln!(s, r#"<text x="{}" y="{ly}" fill="{}">{}</text>"#, x1 - 8.0, ser.color, escape(&ser.label));
    }
    s.push_str("</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Oblique projection used for orbit pictures: the axis direction at `t = 0`
/// points to the lower left, the orbital angular velocity of the binary up.
fn project(p: Vec3) -> (f64, f64) {
    (p.y - 0.5 * p.x, p.z - 0.3 * p.x)
}

/// Planet and companion-star paths in the non-rotating frame centred on the
/// planet's host star. The view is fitted to the planet, so the companion is
/// clipped to the part that passes nearby.
pub fn trajectory_svg(traj: &Trajectory) -> String {
    let cfg = &traj.cfg;
    let host = traj.host;
    let other = match host {
        polar_core::Star::Lighter => polar_core::Star::Heavier,
        polar_core::Star::Heavier => polar_core::Star::Lighter,
    };
    let mut planet = Vec::with_capacity(traj.samples.len());
    let mut companion = Vec::with_capacity(traj.samples.len());
    for s in &traj.samples {
        let t = s.state.t;
        let inertial = rotating_to_inertial(&s.state, cfg.omega_s).expect("samples are rotating");
        let h = cfg.star_inertial(host, t).pos;
        planet.push(Some(project(inertial.pos - h)));
        companion.push(Some(project(cfg.star_inertial(other, t).pos - h)));
    }
    let planet = Series { label: "planet".into(), color: "black", width: 1.0, points: planet };
    let bounds = Bounds::fit(std::slice::from_ref(&planet)).pad(0.25);
    let companion = Series { label: format!("{} star", other.name()), color: "#c03020", width: 2.5, points: companion };
    let e = 0.02 * (bounds.x.1 - bounds.x.0);
    let host_mark = Series {
        label: format!("{} star (centre)", host.name()),
        color: "#3060c0",
        width: 2.0,
        points: vec![Some((-e, 0.0)), Some((e, 0.0)), None, Some((0.0, -e)), Some((0.0, e))],
    };
    plot(
        &format!("orbit near the {} star, b = {}", host.name(), cfg.b),
        "oblique projection, host-centred inertial frame",
        "",
        &[planet, companion, host_mark],
        bounds,
    )
}

/// `M(t)/M(0)` against `t / tau_S`.
pub fn m_svg(traj: &Trajectory) -> String {
    let period = traj.cfg.stellar_period();
    let m0 = traj.samples.first().map(|s| s.m).unwrap_or(1.0);
    let pts = traj.samples.iter().map(|s| Some((s.state.t / period, s.m / m0))).collect();
    let series = [Series { label: "M/M0".into(), color: "black", width: 1.0, points: pts }];
    let bounds = Bounds::fit(&series);
    plot("axial angular momentum", "t / stellar period", "M(t) / M(0)", &series, bounds)
}
