//! Dormand–Prince 5(4) with step-size control and continuous (dense) output.
//!
//! Steps advance with the fifth-order solution; the embedded fourth-order
//! solution only drives the error estimate. The interpolant is Hairer's
//! fourth-order continuous extension, so samples between steps cost no
//! extra function evaluations.

use crate::error::{Result, RpodError};

/// Right-hand side of a first-order ODE system with `N` states.
pub trait OdeSystem<const N: usize> {
    fn derivative(&self, t: f64, y: &[f64; N]) -> Result<[f64; N]>;
}

impl<const N: usize, F> OdeSystem<N> for F
where
    F: Fn(f64, &[f64; N]) -> Result<[f64; N]>,
{
    fn derivative(&self, t: f64, y: &[f64; N]) -> Result<[f64; N]> {
        self(t, y)
    }
}

/// Step control settings.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct StepControl {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Smallest step, relative to max(1, |t|), before giving up.
    pub min_step_ratio: f64,
    pub max_steps: usize,
}

impl Default for StepControl {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-12,
            min_step_ratio: 1e-14,
            max_steps: 5_000_000,
        }
    }
}

impl StepControl {
    pub fn with_tolerance(tol: f64) -> Self {
        Self {
            abs_tol: tol,
            rel_tol: tol,
            ..Self::default()
        }
    }
}

// Butcher tableau.
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

// Error coefficients: fifth-order weights minus fourth-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

// Dense output coefficients.
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;

/// Result of an integration: states at each requested output time.
#[derive(Debug, Clone, PartialEq)]
pub struct Integration<const N: usize> {
    pub times: Vec<f64>,
    pub states: Vec<[f64; N]>,
    pub steps: usize,
}

/// Integrate from `t0` to the last entry of `outputs` (sorted, all >= `t0`).
///
/// The final output time is hit exactly by the stepper; intermediate outputs
/// come from the continuous extension.
pub fn integrate<const N: usize, S: OdeSystem<N>>(
    system: &S,
    t0: f64,
    y0: [f64; N],
    outputs: &[f64],
    control: &StepControl,
) -> Result<Integration<N>> {
    let mut result = Integration {
        times: Vec::with_capacity(outputs.len()),
        states: Vec::with_capacity(outputs.len()),
        steps: 0,
    };
    let Some(&t_end) = outputs.last() else {
        return Ok(result);
    };
    if !(t_end >= t0) || outputs.windows(2).any(|w| w[1] < w[0]) || outputs[0] < t0 {
        return Err(RpodError::InvalidConfig(
            "output times must be sorted and not precede the start time".into(),
        ));
    }

    let mut next_out = 0;
    let emit_until = |result: &mut Integration<N>, next_out: &mut usize, t: f64, y: &[f64; N]| {
        while *next_out < outputs.len() && outputs[*next_out] <= t {
            result.times.push(outputs[*next_out]);
            result.states.push(*y);
            *next_out += 1;
        }
    };
    // Outputs sitting exactly at the start.
    emit_until(&mut result, &mut next_out, t0, &y0);
    if t_end == t0 {
        return Ok(result);
    }

    let mut t = t0;
    let mut y = y0;
    let mut k1 = system.derivative(t, &y)?;
    let mut h = initial_step(system, t, &y, &k1, t_end - t0, control)?;
    let mut rejected_last = false;

    while t < t_end {
        if result.steps >= control.max_steps {
            return Err(RpodError::StepSizeUnderflow { t, step: h });
        }
        let remaining = t_end - t;
        let last = h >= remaining * (1.0 - 1e-14);
        if last {
            h = remaining;
        }
        if h < control.min_step_ratio * t.abs().max(1.0) || !h.is_finite() {
            return Err(RpodError::StepSizeUnderflow { t, step: h });
        }

        let step = dopri_step(system, t, &y, &k1, h)?;
        let err = error_norm(&y, &step.y_new, &step.err, control);
        result.steps += 1;

        if err <= 1.0 {
            let t_new = if last { t_end } else { t + h };
            // Dense output for every requested time inside (t, t_new].
            while next_out < outputs.len() && outputs[next_out] <= t_new {
                let to = outputs[next_out];
                let state = if to == t_new {
                    step.y_new
                } else {
                    let theta = (to - t) / h;
                    dense(&y, &step, h, theta)
                };
                result.times.push(to);
                result.states.push(state);
                next_out += 1;
            }
            t = t_new;
            y = step.y_new;
            k1 = step.k7;
            let mut fac = SAFETY * err.powf(-0.2);
            if err == 0.0 {
                fac = FAC_MAX;
            }
            fac = fac.clamp(FAC_MIN, FAC_MAX);
            if rejected_last {
                fac = fac.min(1.0);
            }
            h *= fac;
            rejected_last = false;
        } else {
            let fac = (SAFETY * err.powf(-0.2)).clamp(FAC_MIN, 1.0);
            h *= fac;
            rejected_last = true;
        }
    }
    Ok(result)
}

/// Convenience wrapper returning only the state at `t_end`.
pub fn integrate_to<const N: usize, S: OdeSystem<N>>(
    system: &S,
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    control: &StepControl,
) -> Result<[f64; N]> {
    let out = integrate(system, t0, y0, &[t_end], control)?;
    Ok(out.states[out.states.len() - 1])
}

struct Step<const N: usize> {
    y_new: [f64; N],
    err: [f64; N],
    k1: [f64; N],
    k3: [f64; N],
    k4: [f64; N],
    k5: [f64; N],
    k6: [f64; N],
    k7: [f64; N],
}

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

fn dopri_step<const N: usize, S: OdeSystem<N>>(
    system: &S,
    t: f64,
    y: &[f64; N],
    k1: &[f64; N],
    h: f64,
) -> Result<Step<N>> {
    let k2 = system.derivative(t + C2 * h, &combine(y, h, &[(A21, k1)]))?;
    let k3 = system.derivative(t + C3 * h, &combine(y, h, &[(A31, k1), (A32, &k2)]))?;
    let k4 = system.derivative(
        t + C4 * h,
        &combine(y, h, &[(A41, k1), (A42, &k2), (A43, &k3)]),
    )?;
    let k5 = system.derivative(
        t + C5 * h,
        &combine(y, h, &[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
    )?;
    let k6 = system.derivative(
        t + h,
        &combine(
            y,
            h,
            &[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
        ),
    )?;
    let y_new = combine(
        y,
        h,
        &[(A71, k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
    );
    let k7 = system.derivative(t + h, &y_new)?;

    let mut err = [0.0; N];
    for i in 0..N {
        err[i] = h
            * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
    }
    Ok(Step {
        y_new,
        err,
        k1: *k1,
        k3,
        k4,
        k5,
        k6,
        k7,
    })
}

fn error_norm<const N: usize>(
    y: &[f64; N],
    y_new: &[f64; N],
    err: &[f64; N],
    control: &StepControl,
) -> f64 {
    let mut sum = 0.0;
    for i in 0..N {
        let sc = control.abs_tol + control.rel_tol * y[i].abs().max(y_new[i].abs());
        let r = err[i] / sc;
        sum += r * r;
    }
    (sum / N as f64).sqrt()
}

fn dense<const N: usize>(y: &[f64; N], step: &Step<N>, h: f64, theta: f64) -> [f64; N] {
    let theta1 = 1.0 - theta;
    let mut out = [0.0; N];
    for i in 0..N {
        let ydiff = step.y_new[i] - y[i];
        let bspl = h * step.k1[i] - ydiff;
        let r4 = ydiff - h * step.k7[i] - bspl;
        let r5 = h
            * (D1 * step.k1[i]
                + D3 * step.k3[i]
                + D4 * step.k4[i]
                + D5 * step.k5[i]
                + D6 * step.k6[i]
                + D7 * step.k7[i]);
        out[i] = y[i] + theta * (ydiff + theta1 * (bspl + theta * (r4 + theta1 * r5)));
    }
    out
}

/// Starting step from Hairer & Wanner's heuristic.
fn initial_step<const N: usize, S: OdeSystem<N>>(
    system: &S,
    t: f64,
    y: &[f64; N],
    f0: &[f64; N],
    span: f64,
    control: &StepControl,
) -> Result<f64> {
    let scale = |i: usize| control.abs_tol + control.rel_tol * y[i].abs();
    let rms = |v: &dyn Fn(usize) -> f64| {
        ((0..N).map(|i| (v(i) / scale(i)).powi(2)).sum::<f64>() / N as f64).sqrt()
    };
    let d0 = rms(&|i| y[i]);
    let d1 = rms(&|i| f0[i]);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    let h0 = h0.min(span);
    let y1 = combine(y, h0, &[(1.0, f0)]);
    let f1 = system.derivative(t + h0, &y1)?;
    let d2 = rms(&|i| f1[i] - f0[i]) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    Ok((100.0 * h0).min(h1).min(span))
}
