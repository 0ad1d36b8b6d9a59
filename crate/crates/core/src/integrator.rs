//! Dormand–Prince 5(4) integrator with PI step control and dense output.

use alloc::vec::Vec;

/// First-order system `y' = f(t, y)`.
pub trait OdeSystem<const N: usize> {
    type Error: Copy;

    fn derivative(&self, t: f64, y: &[f64; N], dy: &mut [f64; N]) -> Result<(), Self::Error>;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    pub max_steps: usize,
}

impl Default for StepControl {
    fn default() -> Self {
        Self { rel_tol: 1e-10, abs_tol: 1e-12, max_step: f64::INFINITY, max_steps: 20_000_000 }
    }
}

/// Why integration stopped early.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Failure<E> {
    /// The right-hand side refused to evaluate (e.g. a close encounter).
    System(E),
    /// The step size fell below the floating-point resolution of `t`.
    StepUnderflow,
    TooManySteps,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Stats {
    pub evaluations: usize,
    pub accepted: usize,
    pub rejected: usize,
}

/// Samples at uniformly spaced output times, plus the state where the
/// integration ended.
#[derive(Debug, Clone)]
pub struct DenseSolution<const N: usize, E> {
    pub times: Vec<f64>,
    pub states: Vec<[f64; N]>,
    /// Time derivative of the continuous extension at each output time.
    pub rates: Vec<[f64; N]>,
    pub last_t: f64,
    pub last_y: [f64; N],
    pub failure: Option<(f64, Failure<E>)>,
    pub stats: Stats,
}

// Dormand & Prince (1980) coefficients.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
// continuous extension (Shampine 1986, as used in Hairer's DOPRI5)
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const BETA: f64 = 0.04;
const EXPO1: f64 = 0.2 - BETA * 0.75;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;

fn combine<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        *o += h * acc;
    }
    out
}

fn scaled_rms<const N: usize>(v: &[f64; N], y0: &[f64; N], y1: &[f64; N], ctl: &StepControl) -> f64 {
    let mut sum = 0.0;
    for i in 0..N {
        let sk = ctl.abs_tol + ctl.rel_tol * y0[i].abs().max(y1[i].abs());
        let r = v[i] / sk;
        sum += r * r;
    }
    libm::sqrt(sum / N as f64)
}

/// Integrate from `(t0, y0)` to `t_end` (either direction), recording
/// `n_out >= 2` samples uniformly spaced over `[t0, t_end]`, both ends
/// included. Samples between steps come from the 4th-order continuous
/// extension; the final sample is the stepped state at `t_end`.
pub fn solve_dense<S, const N: usize>(
    sys: &S,
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    n_out: usize,
    ctl: &StepControl,
) -> DenseSolution<N, S::Error>
where
    S: OdeSystem<N>,
{
    let n_out = n_out.max(2);
    let span = t_end - t0;
    let dir = if span >= 0.0 { 1.0 } else { -1.0 };
    let out_time = |k: usize| {
        if k + 1 == n_out {
            t_end
        } else {
            t0 + span * (k as f64 / (n_out - 1) as f64)
        }
    };

    let mut sol = DenseSolution {
        times: Vec::with_capacity(n_out),
        states: Vec::with_capacity(n_out),
        rates: Vec::with_capacity(n_out),
        last_t: t0,
        last_y: y0,
        failure: None,
        stats: Stats::default(),
    };
    let mut t = t0;
    let mut y = y0;
    let mut k1 = [0.0; N];
    if let Err(e) = sys.derivative(t, &y, &mut k1) {
        sol.failure = Some((t, Failure::System(e)));
        return sol;
    }
    sol.stats.evaluations += 1;
    sol.times.push(t0);
    sol.states.push(y0);
    sol.rates.push(k1);
    let mut next_out = 1;
    if span == 0.0 {
        return sol;
    }

    let mut h = match initial_step(sys, t, &y, &k1, dir, ctl) {
        Ok(h) => h,
        Err(e) => {
            sol.failure = Some((t, Failure::System(e)));
            return sol;
        }
    };
    sol.stats.evaluations += 1;

    let mut facold: f64 = 1e-4;
    let mut last_rejected = false;
    let (mut k2, mut k3, mut k4, mut k5, mut k6, mut k7) = ([0.0; N], [0.0; N], [0.0; N], [0.0; N], [0.0; N], [0.0; N]);

    loop {
        if sol.stats.accepted + sol.stats.rejected >= ctl.max_steps {
            sol.failure = Some((t, Failure::TooManySteps));
            break;
        }
        let remaining = t_end - t;
        let last = dir * (t + h - t_end) >= 0.0;
        if last {
            h = remaining;
        }
        if h == 0.0 || 0.1 * h.abs() <= f64::EPSILON * t.abs() {
            sol.failure = Some((t, Failure::StepUnderflow));
            break;
        }

        let stages = (|| -> Result<(), S::Error> {
            sys.derivative(t + C2 * h, &combine(&y, h, &[(A21, &k1)]), &mut k2)?;
            sys.derivative(t + C3 * h, &combine(&y, h, &[(A31, &k1), (A32, &k2)]), &mut k3)?;
            sys.derivative(t + C4 * h, &combine(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]), &mut k4)?;
            sys.derivative(t + C5 * h, &combine(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]), &mut k5)?;
            sys.derivative(
                t + h,
                &combine(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
                &mut k6,
            )?;
            Ok(())
        })();
        sol.stats.evaluations += 5;
        if let Err(e) = stages {
            sol.failure = Some((t, Failure::System(e)));
            break;
        }
        let y1 = combine(&y, h, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
        let t1 = if last { t_end } else { t + h };
        if let Err(e) = sys.derivative(t1, &y1, &mut k7) {
            sol.failure = Some((t, Failure::System(e)));
            break;
        }
        sol.stats.evaluations += 1;

        let mut err_vec = [0.0; N];
        for i in 0..N {
            err_vec[i] = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
        }
        let err = scaled_rms(&err_vec, &y, &y1, ctl);
        let fac11 = libm::pow(err, EXPO1);

        if err <= 1.0 {
            sol.stats.accepted += 1;
            let fac = (fac11 / libm::pow(facold, BETA) / SAFETY).clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);
            facold = err.max(1e-4);

            // interpolate every output time inside (t, t1]
            while next_out < n_out {
                let to = out_time(next_out);
                if dir * (to - t1) > 0.0 {
                    break;
                }
                let (state, rate) = if next_out + 1 == n_out && last {
                    (y1, k7)
                } else {
                    interpolate(&y, &y1, h, (to - t) / h, [&k1, &k3, &k4, &k5, &k6, &k7])
                };
                sol.times.push(to);
                sol.states.push(state);
                sol.rates.push(rate);
                next_out += 1;
            }

            t = t1;
            y = y1;
            k1 = k7;
            sol.last_t = t;
            sol.last_y = y;
            if last {
                break;
            }
            let mut h_new = h / fac;
            if last_rejected {
                h_new = dir * h_new.abs().min(h.abs());
            }
            last_rejected = false;
            h = dir * h_new.abs().min(ctl.max_step);
        } else {
            sol.stats.rejected += 1;
            last_rejected = true;
            h /= (fac11 / SAFETY).min(1.0 / FAC_MIN);
        }
    }
    sol
}

/// Continuous extension at `t + theta h` and its time derivative.
fn interpolate<const N: usize>(
    y0: &[f64; N],
    y1: &[f64; N],
    h: f64,
    theta: f64,
    [k1, k3, k4, k5, k6, k7]: [&[f64; N]; 6],
) -> ([f64; N], [f64; N]) {
    let theta1 = 1.0 - theta;
    let mut out = [0.0; N];
    let mut rate = [0.0; N];
    for i in 0..N {
        let ydiff = y1[i] - y0[i];
        let bspl = h * k1[i] - ydiff;
        let r4 = ydiff - h * k7[i] - bspl;
        let r5 = h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
        // y = y0 + theta q, q = ydiff + (1 - theta) p, p = bspl + theta s,
        // s = r4 + (1 - theta) r5
        let s = r4 + theta1 * r5;
        let p = bspl + theta * s;
        let q = ydiff + theta1 * p;
        let ds = -r5;
        let dp = s + theta * ds;
        let dq = -p + theta1 * dp;
        out[i] = y0[i] + theta * q;
        rate[i] = (q + theta * dq) / h;
    }
    (out, rate)
}

fn initial_step<S, const N: usize>(
    sys: &S,
    t: f64,
    y: &[f64; N],
    f0: &[f64; N],
    dir: f64,
    ctl: &StepControl,
) -> Result<f64, S::Error>
where
    S: OdeSystem<N>,
{
    let d0 = scaled_rms(y, y, y, ctl);
    let d1 = scaled_rms(f0, y, y, ctl);
    let mut h0 = if d0 < 1e-10 || d1 < 1e-10 { 1e-6 } else { 0.01 * d0 / d1 };
    h0 = h0.min(ctl.max_step);
    let y1 = combine(y, dir * h0, &[(1.0, f0)]);
    let mut f1 = [0.0; N];
    sys.derivative(t + dir * h0, &y1, &mut f1)?;
    let mut diff = [0.0; N];
    for i in 0..N {
        diff[i] = f1[i] - f0[i];
    }
    let d2 = scaled_rms(&diff, y, y, ctl) / h0;
    let dmax = d1.max(d2);
    let h1 = if dmax <= 1e-15 { (h0 * 1e-3).max(1e-6) } else { libm::pow(0.01 / dmax, 0.2) };
    Ok(dir * (100.0 * h0).min(h1).min(ctl.max_step))
}
