//! Embedded adaptive Runge-Kutta integration (Dormand-Prince 5(4)) with
//! fourth-order dense output. The solver is generic over the (fixed) state
//! dimension; trajectories keep the per-step interpolation coefficients so
//! callers can sample or root-find without re-integrating.

use alloc::vec::Vec;

use crate::error::{Result, SolError};
use crate::math;

// Dormand-Prince coefficients (FSAL; c = 1/5, 3/10, 4/5, 8/9, 1, 1).
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
const E1: f64 = B1 - 5179.0 / 57600.0;
const E3: f64 = B3 - 7571.0 / 16695.0;
const E4: f64 = B4 - 393.0 / 640.0;
const E5: f64 = B5 + 92097.0 / 339200.0;
const E6: f64 = B6 - 187.0 / 2100.0;
const E7: f64 = -1.0 / 40.0;
// Dense-output weights for the 4th-order interpolant.
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions { rtol: 1e-10, atol: 1e-10, h_max: f64::INFINITY, max_steps: 10_000_000 }
    }
}

impl OdeOptions {
    pub fn with_tol(tol: f64) -> Self {
        OdeOptions { rtol: tol, atol: tol, ..OdeOptions::default() }
    }
}

#[derive(Debug, Clone)]
struct DenseSegment<const N: usize> {
    t0: f64,
    h: f64,
    r: [[f64; N]; 5],
}

impl<const N: usize> DenseSegment<N> {
    fn eval(&self, t: f64) -> [f64; N] {
        let theta = (t - self.t0) / self.h;
        let th1 = 1.0 - theta;
        let mut y = [0.0; N];
        for i in 0..N {
            y[i] = self.r[0][i]
                + theta
                    * (self.r[1][i]
                        + th1 * (self.r[2][i] + theta * (self.r[3][i] + th1 * self.r[4][i])));
        }
        y
    }
}

/// Integration result: accepted step points plus dense interpolants.
#[derive(Debug, Clone)]
pub struct Solution<const N: usize> {
    pub ts: Vec<f64>,
    pub ys: Vec<[f64; N]>,
    segments: Vec<DenseSegment<N>>,
}

impl<const N: usize> Solution<N> {
    pub fn end_time(&self) -> f64 {
        *self.ts.last().expect("solution has at least the initial point")
    }

    pub fn end_state(&self) -> [f64; N] {
        *self.ys.last().expect("solution has at least the initial point")
    }

    /// Dense evaluation anywhere inside the integration span.
    pub fn eval(&self, t: f64) -> [f64; N] {
        if self.segments.is_empty() {
            return self.ys[0];
        }
        let forward = self.segments[0].h > 0.0;
        let mut lo = 0usize;
        let mut hi = self.segments.len() - 1;
        while lo < hi {
            let mid = (lo + hi) / 2;
            let seg_end = self.segments[mid].t0 + self.segments[mid].h;
            let past = if forward { t > seg_end } else { t < seg_end };
            if past {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        self.segments[lo].eval(t)
    }

    /// Refine a root of `f(t, y(t))` inside `[a, b]` by bisection on the
    /// dense interpolant. Assumes a sign change on the bracket.
    pub fn refine_root(&self, mut a: f64, mut b: f64, f: impl Fn(f64, &[f64; N]) -> f64) -> f64 {
        let mut fa = f(a, &self.eval(a));
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            let fm = f(m, &self.eval(m));
            if fm == 0.0 || math::abs(b - a) < 1e-14 * (1.0 + math::abs(m)) {
                return m;
            }
            if (fa > 0.0) == (fm > 0.0) {
                a = m;
                fa = fm;
            } else {
                b = m;
            }
        }
        0.5 * (a + b)
    }
}

fn stage<const N: usize>(y: &[f64; N], h: f64, ks: &[(&[f64; N], f64)]) -> [f64; N] {
    let mut out = *y;
    for (k, a) in ks {
        for i in 0..N {
            out[i] += h * a * k[i];
        }
    }
    out
}

/// Integrate `y' = f(t, y)` from `t0` to `t_end` (either direction).
pub fn integrate<const N: usize>(
    f: impl Fn(f64, &[f64; N]) -> Result<[f64; N]>,
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    opts: &OdeOptions,
) -> Result<Solution<N>> {
    let mut ts = alloc::vec![t0];
    let mut ys = alloc::vec![y0];
    let mut segments = Vec::new();
    if t_end == t0 {
        return Ok(Solution { ts, ys, segments });
    }
    let dir = if t_end > t0 { 1.0 } else { -1.0 };
    let span = math::abs(t_end - t0);

    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y)?;

    // Initial step heuristic.
    let mut ynorm: f64 = 0.0;
    let mut fnorm: f64 = 0.0;
    for i in 0..N {
        ynorm = ynorm.max(math::abs(y[i]));
        fnorm = fnorm.max(math::abs(k1[i]));
    }
    let mut h = dir * (1e-3 * (1.0 + ynorm) / (1.0 + fnorm)).min(span).min(opts.h_max);

    for _ in 0..opts.max_steps {
        if math::abs(h) < 1e-14 * (1.0 + math::abs(t)) {
            return Err(SolError::StiffTrajectory);
        }
        // Clip the final step; the accepted endpoint is forced onto t_end
        // so the loop cannot stall an ulp away from it.
        let mut last = false;
        if (dir > 0.0 && t + h >= t_end) || (dir < 0.0 && t + h <= t_end) {
            h = t_end - t;
            last = true;
        }

        let k2 = f(t + h / 5.0, &stage(&y, h, &[(&k1, A21)]))?;
        let k3 = f(t + 3.0 * h / 10.0, &stage(&y, h, &[(&k1, A31), (&k2, A32)]))?;
        let k4 = f(t + 4.0 * h / 5.0, &stage(&y, h, &[(&k1, A41), (&k2, A42), (&k3, A43)]))?;
        let k5 = f(
            t + 8.0 * h / 9.0,
            &stage(&y, h, &[(&k1, A51), (&k2, A52), (&k3, A53), (&k4, A54)]),
        )?;
        let k6 = f(
            t + h,
            &stage(&y, h, &[(&k1, A61), (&k2, A62), (&k3, A63), (&k4, A64), (&k5, A65)]),
        )?;
        let y1 = stage(&y, h, &[(&k1, B1), (&k3, B3), (&k4, B4), (&k5, B5), (&k6, B6)]);
        let k7 = f(t + h, &y1)?;

        // Error estimate against the embedded 4th-order solution.
        let mut err_sq = 0.0;
        for i in 0..N {
            let e = h
                * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = opts.atol + opts.rtol * math::abs(y[i]).max(math::abs(y1[i]));
            err_sq += (e / sc) * (e / sc);
        }
        let err = math::sqrt(err_sq / N as f64);

        if err <= 1.0 {
            // Accept: store the dense segment.
            let mut r = [[0.0; N]; 5];
            for i in 0..N {
                let ydiff = y1[i] - y[i];
                let bspl = h * k1[i] - ydiff;
                r[0][i] = y[i];
                r[1][i] = ydiff;
                r[2][i] = bspl;
                r[3][i] = ydiff - h * k7[i] - bspl;
                r[4][i] = h
                    * (D1 * k1[i]
                        + D3 * k3[i]
                        + D4 * k4[i]
                        + D5 * k5[i]
                        + D6 * k6[i]
                        + D7 * k7[i]);
            }
            segments.push(DenseSegment { t0: t, h, r });

            t = if last { t_end } else { t + h };
            y = y1;
            k1 = k7; // FSAL
            ts.push(t);
            ys.push(y);
            if last {
                return Ok(Solution { ts, ys, segments });
            }
        }

        let factor = if err == 0.0 {
            10.0
        } else {
            (0.9 * math::powf(err, -0.2)).clamp(0.2, 10.0)
        };
        h = dir * (math::abs(h) * factor).min(opts.h_max);
    }
    Err(SolError::Numerical(alloc::string::String::from("step budget exhausted")))
}
