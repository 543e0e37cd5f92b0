//! Conley-Zehnder / Morse-Bott indices of paths of 2×2 symplectic matrices.
//!
//! The index is computed as a signed count of crossings of
//! `det(M(t) - I) = 0`: at each crossing the quadratic form
//! `Γ(v) = ω(v, Ṁ(t) v)` restricted to `ker(M(t) - I)` contributes its
//! signature, with half weight at the endpoints of the path. The symplectic
//! form is `ω(a, b) = a₁b₂ - a₂b₁`, which normalizes a short positive
//! rotation to index 1 and `diag(e^t, e^{-t})` to index 0.
//!
//! Degenerate families (unipotent blocks) are handled by the δ-recipe: the
//! path is replaced by the solution of `V̇ = (S - δ·I) J V`, `V(0) = I`, and
//! the index is required to be stable under halving δ.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Result, SolError};
use crate::math;

pub type Mat2 = [[f64; 2]; 2];

pub const IDENTITY2: Mat2 = [[1.0, 0.0], [0.0, 1.0]];

/// Counterclockwise rotation generator; `exp(θ J)` has index 1 for
/// `θ ∈ (0, 2π)`.
pub const J_STD: Mat2 = [[0.0, -1.0], [1.0, 0.0]];

/// `ω(a, b) = a₁ b₂ - a₂ b₁`.
#[inline]
pub fn omega(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

pub fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    [
        [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
        [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
    ]
}

pub fn det2(m: &Mat2) -> f64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

fn mat2_apply(m: &Mat2, v: [f64; 2]) -> [f64; 2] {
    [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
}

/// A sampled path of symplectic matrices starting at the identity (or a
/// window of one).
#[derive(Debug, Clone)]
pub struct SymplecticPath {
    pub ts: Vec<f64>,
    pub ms: Vec<Mat2>,
}

impl SymplecticPath {
    /// Build from a closed-form matrix function on `[0, t_end]` with `n + 1`
    /// uniform samples.
    pub fn from_fn(f: impl Fn(f64) -> Mat2, t_end: f64, n: usize) -> Result<SymplecticPath> {
        if n < 8 || !(t_end > 0.0) {
            return Err(SolError::InvalidInput(String::from(
                "path needs t_end > 0 and at least 8 samples",
            )));
        }
        let ts: Vec<f64> = (0..=n).map(|i| t_end * i as f64 / n as f64).collect();
        let ms: Vec<Mat2> = ts.iter().map(|&t| f(t)).collect();
        SymplecticPath::from_samples(ts, ms)
    }

    pub fn from_samples(ts: Vec<f64>, ms: Vec<Mat2>) -> Result<SymplecticPath> {
        if ts.len() != ms.len() || ts.len() < 3 {
            return Err(SolError::InvalidInput(String::from("need at least 3 matched samples")));
        }
        for w in ts.windows(2) {
            if !(w[1] > w[0]) {
                return Err(SolError::InvalidInput(String::from("times must increase strictly")));
            }
        }
        for (i, m) in ms.iter().enumerate() {
            if math::abs(det2(m) - 1.0) > 1e-9 {
                return Err(SolError::InvalidInput(alloc::format!(
                    "sample {i} is not symplectic: det = {}",
                    det2(m)
                )));
            }
        }
        let m0 = &ms[0];
        if math::abs(m0[0][0] - 1.0) > 1e-12
            || math::abs(m0[1][1] - 1.0) > 1e-12
            || math::abs(m0[0][1]) > 1e-12
            || math::abs(m0[1][0]) > 1e-12
        {
            return Err(SolError::InvalidInput(String::from("path must start at the identity")));
        }
        Ok(SymplecticPath { ts, ms })
    }

    /// Standard rotation at angular speed `omega` (counterclockwise for
    /// `omega > 0`).
    pub fn rotation(omega: f64, t_end: f64, n: usize) -> Result<SymplecticPath> {
        SymplecticPath::from_fn(
            |t| {
                let (s, c) = (math::sin(omega * t), math::cos(omega * t));
                [[c, -s], [s, c]]
            },
            t_end,
            n,
        )
    }

    /// Hyperbolic path `diag(e^t, e^{-t})`.
    pub fn hyperbolic(t_end: f64, n: usize) -> Result<SymplecticPath> {
        SymplecticPath::from_fn(|t| [[math::exp(t), 0.0], [0.0, math::exp(-t)]], t_end, n)
    }

    /// The rotation block of the closed-form type-A frame matrix.
    pub fn type_a_rotation_block(t_end: f64, n: usize) -> Result<SymplecticPath> {
        SymplecticPath::from_fn(
            |t| {
                let m = crate::linearized::frame_matrix_a(t);
                [[m[2][2], m[2][3]], [m[3][2], m[3][3]]]
            },
            t_end,
            n,
        )
    }

    /// `exp(t G)` for a (numerically) traceless generator, sampled on
    /// `[0, t_end]`.
    pub fn linear_flow(g: &Mat2, t_end: f64, n: usize) -> Result<SymplecticPath> {
        if math::abs(g[0][0] + g[1][1]) > 1e-12 {
            return Err(SolError::InvalidInput(String::from(
                "linear symplectic flows need a traceless generator",
            )));
        }
        SymplecticPath::from_fn(|t| exp_traceless(g, t), t_end, n)
    }
}

/// `exp(t G)` in closed form for traceless 2×2 `G`.
pub fn exp_traceless(g: &Mat2, t: f64) -> Mat2 {
    let q = -det2(g); // eigenvalues are ±sqrt(q)
    let (alpha, beta) = if q > 1e-300 {
        let w = math::sqrt(q);
        (math::cosh(w * t), math::sinh(w * t) / w)
    } else if q < -1e-300 {
        let w = math::sqrt(-q);
        (math::cos(w * t), math::sin(w * t) / w)
    } else {
        (1.0, t)
    };
    [
        [alpha + beta * g[0][0], beta * g[0][1]],
        [beta * g[1][0], alpha + beta * g[1][1]],
    ]
}

/// One crossing of `det(M(t) - I) = 0` and its signed contribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub t: f64,
    /// Signature of the crossing form on the kernel: ±1 on a simple
    /// crossing, ±2 on a full rotation through the identity. Endpoint
    /// crossings enter the index with half this weight.
    pub sign: i32,
}

/// Index together with the crossing list.
#[derive(Debug, Clone, PartialEq)]
pub struct CzOutcome {
    pub index: i64,
    pub crossings: Vec<Crossing>,
}

fn frob2(m: &Mat2) -> f64 {
    m[0][0] * m[0][0] + m[0][1] * m[0][1] + m[1][0] * m[1][0] + m[1][1] * m[1][1]
}

fn m_minus_i(m: &Mat2) -> Mat2 {
    [[m[0][0] - 1.0, m[0][1]], [m[1][0], m[1][1] - 1.0]]
}

fn det_m_minus_i(m: &Mat2) -> f64 {
    det2(&m_minus_i(m))
}

/// Signature of the symmetrization of `ΩD` (the crossing form on a 2-dim
/// kernel). Errors if an eigenvalue sits at zero within resolution.
fn full_signature(d: &Mat2) -> Result<i32> {
    // sym(Ω D) with Ω = [[0,1],[-1,0]] as a Gram matrix
    let q00 = d[1][0];
    let q11 = -d[0][1];
    let q01 = 0.5 * (d[1][1] - d[0][0]);
    let mean = 0.5 * (q00 + q11);
    let radius = math::hypot(0.5 * (q00 - q11), q01);
    let (l1, l2) = (mean + radius, mean - radius);
    let tol = 1e-8 * (math::abs(l1) + math::abs(l2)).max(1e-300);
    if math::abs(l1) <= tol || math::abs(l2) <= tol {
        return Err(SolError::RefineSampling);
    }
    Ok((l1 > 0.0) as i32 - (l1 < 0.0) as i32 + (l2 > 0.0) as i32 - (l2 < 0.0) as i32)
}

/// Sign of the crossing form on a 1-dimensional kernel of `M - I`.
fn kernel_signature(m: &Mat2, d: &Mat2) -> Result<i32> {
    let n = m_minus_i(m);
    let v1 = [n[0][1], -n[0][0]];
    let v2 = [n[1][1], -n[1][0]];
    let v = if math::hypot(v1[0], v1[1]) >= math::hypot(v2[0], v2[1]) { v1 } else { v2 };
    let vn = math::hypot(v[0], v[1]);
    if vn < 1e-12 {
        return Err(SolError::RefineSampling);
    }
    let v = [v[0] / vn, v[1] / vn];
    let gamma = omega(v, mat2_apply(d, v));
    if math::abs(gamma) <= 1e-9 * (1.0 + frob2(d)) {
        return Err(SolError::RefineSampling);
    }
    Ok(if gamma > 0.0 { 1 } else { -1 })
}

fn interp(path: &SymplecticPath, i: usize, t: f64) -> Mat2 {
    let (t0, t1) = (path.ts[i], path.ts[i + 1]);
    let w = (t - t0) / (t1 - t0);
    let (a, b) = (&path.ms[i], &path.ms[i + 1]);
    let mut m = [[0.0; 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            m[r][c] = (1.0 - w) * a[r][c] + w * b[r][c];
        }
    }
    m
}

fn derivative(path: &SymplecticPath, lo: usize, hi: usize) -> Mat2 {
    let dt = path.ts[hi] - path.ts[lo];
    let (a, b) = (&path.ms[lo], &path.ms[hi]);
    let mut d = [[0.0; 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            d[r][c] = (b[r][c] - a[r][c]) / dt;
        }
    }
    d
}

struct WindowIndex {
    doubled: i64,
    crossings: Vec<Crossing>,
}

/// Crossing count over the sample window `[i0, i1]`; endpoint crossings get
/// half weight. Returns the doubled index so half weights stay integral.
fn window_index(path: &SymplecticPath, i0: usize, i1: usize) -> Result<WindowIndex> {
    let g: Vec<f64> = path.ms.iter().map(det_m_minus_i).collect();
    let scale = g[i0..=i1].iter().fold(1e-300f64, |acc, &v| acc.max(math::abs(v))).max(1e-12);
    let z_tol = 1e-9 * scale;
    let touch_tol = 1e-8 * scale;

    // Coarse-sampling guard: consecutive matrices must stay close.
    for i in i0..i1 {
        let mut step: f64 = 0.0;
        for r in 0..2 {
            for c in 0..2 {
                step = step.max(math::abs(path.ms[i + 1][r][c] - path.ms[i][r][c]));
            }
        }
        if step > 0.5 * (1.0 + math::sqrt(frob2(&path.ms[i]))) {
            return Err(SolError::RefineSampling);
        }
    }

    let mut doubled = 0i64;
    let mut crossings = Vec::new();
    let mut consumed = alloc::vec![false; path.ts.len()];

    // Sample-exact crossings (includes the identity start of a full path).
    // Consecutive sub-threshold samples belong to one crossing and are
    // coalesced into a run represented by its smallest |g| sample.
    let mut i = i0;
    while i <= i1 {
        if math::abs(g[i]) > z_tol {
            i += 1;
            continue;
        }
        let run_start = i;
        while i < i1 && math::abs(g[i + 1]) <= z_tol {
            i += 1;
        }
        let run_end = i;
        i += 1;
        for j in run_start..=run_end {
            consumed[j] = true;
        }
        let rep = (run_start..=run_end)
            .min_by(|&a, &b| math::abs(g[a]).total_cmp(&math::abs(g[b])))
            .expect("nonempty run");
        let d = if run_start == i0 {
            derivative(path, run_end, (run_end + 1).min(i1))
        } else if run_end == i1 {
            derivative(path, run_start - 1, run_start)
        } else {
            derivative(path, run_start - 1, run_end + 1)
        };
        let near_identity =
            frob2(&m_minus_i(&path.ms[rep])) < 1e-12 * (1.0 + frob2(&path.ms[rep]));
        let sign = if near_identity {
            full_signature(&d)?
        } else {
            kernel_signature(&path.ms[rep], &d)?
        };
        let weight = if run_start == i0 || run_end == i1 { 1 } else { 2 };
        doubled += weight * sign as i64;
        crossings.push(Crossing { t: path.ts[rep], sign });
    }

    // Transversal sign changes between samples.
    for i in i0..i1 {
        if consumed[i] || consumed[i + 1] {
            continue;
        }
        if (g[i] > 0.0) == (g[i + 1] > 0.0) {
            continue;
        }
        let t = path.ts[i] + (path.ts[i + 1] - path.ts[i]) * g[i] / (g[i] - g[i + 1]);
        let m = interp(path, i, t);
        let d = derivative(path, i, i + 1);
        let sign = kernel_signature(&m, &d)?;
        doubled += 2 * sign as i64;
        crossings.push(Crossing { t, sign });
    }

    // Tangential touches: local minima of |g| whose parabolic vertex reaches
    // zero without a sign change (full rotations through the identity).
    for i in (i0 + 1)..i1 {
        if consumed[i - 1] || consumed[i] || consumed[i + 1] {
            continue;
        }
        if !(math::abs(g[i]) < math::abs(g[i - 1]) && math::abs(g[i]) <= math::abs(g[i + 1])) {
            continue;
        }
        if (g[i - 1] > 0.0) != (g[i + 1] > 0.0) {
            continue; // transversal, already handled
        }
        let (ta, tb, tc) = (path.ts[i - 1], path.ts[i], path.ts[i + 1]);
        let (ga, gb, gc) = (g[i - 1], g[i], g[i + 1]);
        // Quadratic through the three points.
        let d1 = (gb - ga) / (tb - ta);
        let d2 = (gc - gb) / (tc - tb);
        let a2 = (d2 - d1) / (tc - ta);
        if math::abs(a2) < 1e-300 {
            continue;
        }
        // vertex of g(t) = ga + d1 (t - ta) + a2 (t - ta)(t - tb)
        let tv = (0.5 * (ta + tb) - 0.5 * d1 / a2).clamp(ta, tc);
        let gv = ga + d1 * (tv - ta) + a2 * (tv - ta) * (tv - tb);
        if math::abs(gv) > touch_tol {
            continue;
        }
        let seg = if tv <= tb { i - 1 } else { i };
        let m = interp(path, seg, tv);
        if frob2(&m_minus_i(&m)) > 1e-3 * (1.0 + frob2(&m)) {
            return Err(SolError::RefineSampling);
        }
        let d = derivative(path, i - 1, i + 1);
        let sign = full_signature(&d)?;
        let weight = 2; // touches never sit at window ends: ends are nondegenerate
        doubled += weight * sign as i64;
        crossings.push(Crossing { t: tv, sign });
    }

    crossings.sort_unstable_by(|a, b| a.t.total_cmp(&b.t));
    Ok(WindowIndex { doubled, crossings })
}

fn endpoint_degenerate(path: &SymplecticPath, i: usize) -> bool {
    let m = &path.ms[i];
    math::abs(det_m_minus_i(m)) <= 1e-9 * (1.0 + frob2(&m_minus_i(m)))
}

/// Conley-Zehnder index of a path starting at the identity with a
/// nondegenerate endpoint, with the crossing list attached.
pub fn cz_index_detailed(path: &SymplecticPath) -> Result<CzOutcome> {
    let last = path.ts.len() - 1;
    if endpoint_degenerate(path, last) {
        return Err(SolError::DegenerateEndpoint);
    }
    let w = window_index(path, 0, last)?;
    if w.doubled % 2 != 0 {
        return Err(SolError::RefineSampling);
    }
    Ok(CzOutcome { index: w.doubled / 2, crossings: w.crossings })
}

/// Conley-Zehnder index of a path starting at the identity.
pub fn cz_index_path(path: &SymplecticPath) -> Result<i64> {
    Ok(cz_index_detailed(path)?.index)
}

/// Crossing index of the sub-path between two sample times (half weight on
/// degenerate window ends); additive under catenation at nondegenerate cut
/// points.
pub fn rs_index_segment(path: &SymplecticPath, t_lo: f64, t_hi: f64) -> Result<f64> {
    let find = |t: f64| -> Result<usize> {
        path.ts
            .iter()
            .position(|&s| math::abs(s - t) <= 1e-12 * (1.0 + math::abs(t)))
            .ok_or_else(|| SolError::InvalidInput(String::from("segment ends must be sample times")))
    };
    let i0 = find(t_lo)?;
    let i1 = find(t_hi)?;
    if i0 >= i1 {
        return Err(SolError::InvalidInput(String::from("empty segment")));
    }
    Ok(window_index(path, i0, i1)?.doubled as f64 / 2.0)
}

const BOTT_SAMPLES: usize = 4096;

/// Bott index of the degenerate block generated by a symmetric matrix `S`:
/// the Conley-Zehnder index of `V̇ = (S - δI) J V`, `V(0) = I`, stabilized
/// under halving of δ. `S = 0` leaves the path at the identity, whose index
/// is zero without any perturbation.
pub fn bott_perturbed_index(s: &Mat2, t_end: f64, delta: f64) -> Result<i64> {
    if math::abs(s[0][1] - s[1][0]) > 1e-12 {
        return Err(SolError::InvalidInput(String::from("S must be symmetric")));
    }
    if !(delta > 0.0) || !(t_end > 0.0) {
        return Err(SolError::InvalidInput(String::from("need delta > 0 and t_end > 0")));
    }
    if math::abs(s[0][0]) + math::abs(s[0][1]) + math::abs(s[1][1]) == 0.0 {
        return Ok(0);
    }

    let index_at = |delta: f64| -> Result<i64> {
        let g = [
            [
                (s[0][0] - delta) * J_STD[0][0] + s[0][1] * J_STD[1][0],
                (s[0][0] - delta) * J_STD[0][1] + s[0][1] * J_STD[1][1],
            ],
            [
                s[1][0] * J_STD[0][0] + (s[1][1] - delta) * J_STD[1][0],
                s[1][0] * J_STD[0][1] + (s[1][1] - delta) * J_STD[1][1],
            ],
        ];
        let path = SymplecticPath::linear_flow(&g, t_end, BOTT_SAMPLES)?;
        cz_index_path(&path)
    };

    let mut delta = delta;
    let mut prev: Option<i64> = None;
    for _ in 0..24 {
        match index_at(delta) {
            Ok(idx) => {
                if prev == Some(idx) {
                    return Ok(idx);
                }
                prev = Some(idx);
            }
            // A perturbation landing exactly on a period: shrink further.
            Err(SolError::DegenerateEndpoint) | Err(SolError::RefineSampling) => prev = None,
            Err(e) => return Err(e),
        }
        delta *= 0.5;
    }
    Err(SolError::DeltaTooLarge)
}

/// Morse-Bott index of a closed type-A geodesic of the given length: the
/// crossing count of the rotation block at angular speed `√2` over the
/// length, plus the vanishing Bott index of the unipotent block. Closed
/// form: `1 + 2 ⌊√2 ℓ / 2π⌋`.
pub fn morse_bott_type_a(length: f64) -> Result<i64> {
    if !(length > 0.0) || !length.is_finite() {
        return Err(SolError::InvalidInput(String::from("length must be positive")));
    }
    let theta = core::f64::consts::SQRT_2 * length;
    let two_pi = 2.0 * core::f64::consts::PI;
    let nearest = math::round(theta / two_pi) * two_pi;
    if math::abs(theta - nearest) < 1e-9 {
        return Err(SolError::DegenerateLength);
    }
    Ok(1 + 2 * math::floor(theta / two_pi) as i64)
}
