//! Integrators on fixed-size real states: adaptive Dormand–Prince 5(4) and
//! fixed-step three-stage Gauss–Legendre collocation.
//!
//! Gauss–Legendre preserves every quadratic first integral of the flow up to
//! the tolerance of its implicit stage solve.

/// Step-size control settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Upper bound on a single step (infinite by default).
    pub max_step: f64,
    pub max_steps: usize,
}

impl OdeOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            rtol: tol,
            atol: tol,
            max_step: f64::INFINITY,
            max_steps: 5_000_000,
        }
    }

    pub fn max_step(mut self, h: f64) -> Self {
        self.max_step = h;
        self
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OdeStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

/// Where and why an integration stopped early.
#[derive(Debug, Clone, PartialEq)]
pub struct OdeFailure {
    pub t: f64,
    pub reason: String,
    pub stats: OdeStats,
}

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
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// fifth-order minus embedded fourth-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn combo<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
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

/// Integrates `y' = f(t, y)` from `t0` to `t1`.
///
/// `observe` is called with the initial point and after every accepted
/// step; returning `Err` from it or from `f` aborts the run.
pub fn integrate<const N: usize, F, O>(
    mut f: F,
    t0: f64,
    y0: [f64; N],
    t1: f64,
    opts: &OdeOptions,
    mut observe: O,
) -> Result<OdeStats, OdeFailure>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N], String>,
    O: FnMut(f64, &[f64; N]) -> Result<(), String>,
{
    let mut stats = OdeStats::default();
    let fail = |t: f64, reason: String, stats: OdeStats| OdeFailure { t, reason, stats };
    observe(t0, &y0).map_err(|r| fail(t0, r, stats))?;
    if t1 == t0 {
        return Ok(stats);
    }
    let dir = (t1 - t0).signum();
    let span = (t1 - t0).abs();

    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y).map_err(|r| fail(t, r, stats))?;
    stats.evaluations += 1;

    let scale = |y: &[f64; N], i: usize, ynew: f64| opts.atol + opts.rtol * y[i].abs().max(ynew.abs());

    // initial step (Hairer, Nørsett & Wanner II.4)
    let d0 = (0..N).map(|i| (y[i] / scale(&y, i, y[i])).powi(2)).sum::<f64>() / N as f64;
    let d1 = (0..N).map(|i| (k1[i] / scale(&y, i, y[i])).powi(2)).sum::<f64>() / N as f64;
    let mut h = if d0.sqrt() < 1e-5 || d1.sqrt() < 1e-5 {
        1e-6
    } else {
        0.01 * (d0 / d1).sqrt()
    };
    h = h.min(span).min(opts.max_step);

    loop {
        if stats.accepted + stats.rejected >= opts.max_steps {
            return Err(fail(t, format!("step budget of {} exhausted", opts.max_steps), stats));
        }
        let remaining = (t1 - t).abs();
        let last = h >= remaining;
        if last {
            h = remaining;
        }
        let hs = dir * h;

        let k2 = f(t + C2 * hs, &combo(&y, hs, &[(A21, &k1)])).map_err(|r| fail(t, r, stats))?;
        let k3 = f(t + C3 * hs, &combo(&y, hs, &[(A31, &k1), (A32, &k2)]))
            .map_err(|r| fail(t, r, stats))?;
        let k4 = f(
            t + C4 * hs,
            &combo(&y, hs, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
        )
        .map_err(|r| fail(t, r, stats))?;
        let k5 = f(
            t + C5 * hs,
            &combo(&y, hs, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        )
        .map_err(|r| fail(t, r, stats))?;
        let k6 = f(
            t + hs,
            &combo(
                &y,
                hs,
                &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
            ),
        )
        .map_err(|r| fail(t, r, stats))?;
        let ynew = combo(
            &y,
            hs,
            &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)],
        );
        let t_new = if last { t1 } else { t + hs };
        let k7 = f(t_new, &ynew).map_err(|r| fail(t, r, stats))?;
        stats.evaluations += 6;

        let mut err = 0.0;
        for i in 0..N {
            let e = hs * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            err += (e / scale(&y, i, ynew[i])).powi(2);
        }
        let err = (err / N as f64).sqrt();
        if !err.is_finite() || ynew.iter().any(|v| !v.is_finite()) {
            h *= 0.2;
            stats.rejected += 1;
        } else if err <= 1.0 {
            t = t_new;
            y = ynew;
            k1 = k7;
            stats.accepted += 1;
            observe(t, &y).map_err(|r| fail(t, r, stats))?;
            if last {
                return Ok(stats);
            }
            let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h = (h * factor).min(opts.max_step);
        } else {
            stats.rejected += 1;
            h *= (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
        }
        if h <= 1e-14 * t.abs().max(span) {
            return Err(fail(t, format!("step size underflow (h = {h:.3e})"), stats));
        }
    }
}

const SQRT15: f64 = 3.872_983_346_207_417;
const GC: [f64; 3] = [0.5 - SQRT15 / 10.0, 0.5, 0.5 + SQRT15 / 10.0];
const GA: [[f64; 3]; 3] = [
    [5.0 / 36.0, 2.0 / 9.0 - SQRT15 / 15.0, 5.0 / 36.0 - SQRT15 / 30.0],
    [5.0 / 36.0 + SQRT15 / 24.0, 2.0 / 9.0, 5.0 / 36.0 - SQRT15 / 24.0],
    [5.0 / 36.0 + SQRT15 / 30.0, 2.0 / 9.0 + SQRT15 / 15.0, 5.0 / 36.0],
];
const GB: [f64; 3] = [5.0 / 18.0, 4.0 / 9.0, 5.0 / 18.0];

/// Fixed-point iterations allowed per step before the step is halved.
const STAGE_ITERATIONS: usize = 60;

/// Sixth-order Gauss–Legendre collocation with steps no longer than `h_max`.
///
/// The stages are solved by fixed-point iteration down to rounding level; a
/// step whose iteration does not contract is retried with half the size.
/// `observe` sees the initial point and every completed step.
pub fn integrate_gauss<const N: usize, F, O>(
    mut f: F,
    t0: f64,
    y0: [f64; N],
    t1: f64,
    h_max: f64,
    mut observe: O,
) -> Result<OdeStats, OdeFailure>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N], String>,
    O: FnMut(f64, &[f64; N]) -> Result<(), String>,
{
    let mut stats = OdeStats::default();
    let fail = |t: f64, reason: String, stats: OdeStats| OdeFailure { t, reason, stats };
    observe(t0, &y0).map_err(|r| fail(t0, r, stats))?;
    if t1 == t0 {
        return Ok(stats);
    }
    if !(h_max > 0.0) {
        return Err(fail(t0, format!("step bound must be positive, got {h_max}"), stats));
    }
    let span = t1 - t0;
    let n_steps = (span.abs() / h_max).ceil().max(1.0) as usize;
    let h_nominal = span / n_steps as f64;
    let mut y = y0;
    for step in 0..n_steps {
        let t = t0 + step as f64 * h_nominal;
        let t_next = if step + 1 == n_steps { t1 } else { t0 + (step + 1) as f64 * h_nominal };
        // substeps only when the stage iteration fails to contract
        let mut pieces = 1usize;
        'retry: loop {
            let h = (t_next - t) / pieces as f64;
            let mut yt = y;
            for piece in 0..pieces {
                let tp = t + piece as f64 * h;
                match gauss_step(&mut f, tp, &yt, h, &mut stats) {
                    Ok(Some(ynew)) => yt = ynew,
                    Ok(None) if pieces < 1 << 12 => {
                        pieces *= 2;
                        stats.rejected += 1;
                        continue 'retry;
                    }
                    Ok(None) => return Err(fail(tp, "implicit stage iteration does not converge".into(), stats)),
                    Err(r) => return Err(fail(tp, r, stats)),
                }
            }
            y = yt;
            break;
        }
        stats.accepted += 1;
        observe(t_next, &y).map_err(|r| fail(t_next, r, stats))?;
    }
    Ok(stats)
}

fn gauss_step<const N: usize, F>(
    f: &mut F,
    t: f64,
    y: &[f64; N],
    h: f64,
    stats: &mut OdeStats,
) -> Result<Option<[f64; N]>, String>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N], String>,
{
    let k0 = f(t, y)?;
    stats.evaluations += 1;
    let mut k = [k0; 3];
    let scale = y.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let mut prev = f64::INFINITY;
    for iter in 0..STAGE_ITERATIONS {
        let mut next = k;
        for (i, ki) in next.iter_mut().enumerate() {
            let mut yi = *y;
            for (c, v) in yi.iter_mut().enumerate() {
                *v += h * (GA[i][0] * k[0][c] + GA[i][1] * k[1][c] + GA[i][2] * k[2][c]);
            }
            *ki = f(t + GC[i] * h, &yi)?;
        }
        stats.evaluations += 3;
        let change = (0..3)
            .flat_map(|i| (0..N).map(move |c| (i, c)))
            .map(|(i, c)| (h * (next[i][c] - k[i][c])).abs())
            .fold(0.0, f64::max);
        k = next;
        if !change.is_finite() {
            return Ok(None);
        }
        if change <= 4.0 * f64::EPSILON * scale {
            break;
        }
        if iter > 2 && change >= prev {
            // either rounding noise or divergence
            if change <= 1e-13 * scale {
                break;
            }
            return Ok(None);
        }
        if iter + 1 == STAGE_ITERATIONS {
            return Ok(None);
        }
        prev = change;
    }
    let mut out = *y;
    for (c, v) in out.iter_mut().enumerate() {
        *v += h * (GB[0] * k[0][c] + GB[1] * k[1][c] + GB[2] * k[2][c]);
    }
    Ok(Some(out))
}
