//! Linearization of the geodesic flow: the analytic 6×6 variational
//! equation, numerically integrated monodromy expressed in the
//! left-invariant frame, the closed-form 4×4 matrices along type-A and
//! type-B geodesics, and finite-difference verification of explicit Jacobi
//! fields.
//!
//! The monodromy acts on variations of `(q, q̇)`; raw coordinate variations
//! are converted to components in the frame `(X, Y, Z, Ẋ, Ẏ, Ż)` at both
//! endpoints. In that trivialization the closed-form spectra hold: along a
//! type-A geodesic the eigenvalues are `{1, 1, 1, 1, e^{±i√2 T}}`, along a
//! vertical type-B geodesic `{1, 1, e^{±T}, e^{±T}}`.

use alloc::string::String;

use crate::error::{Result, SolError};
use crate::flow::{self, ExactGeodesic, PhaseState};
use crate::math;
use crate::ode::{self, OdeOptions};
use crate::sol::{self, SolElement};

pub type Mat6 = [[f64; 6]; 6];
pub type Mat4 = [[f64; 4]; 4];

/// Jacobian of the Hamiltonian right-hand side with respect to
/// `(x, y, z, p_x, p_y, p_z)`. Independent of `x` and `y`.
pub fn variational_jacobian(state: &PhaseState) -> Result<Mat6> {
    let z = state.position.z;
    if math::abs(z) > math::EXP_ARG_LIMIT {
        return Err(SolError::ExponentOverflow);
    }
    let [px, py, _] = state.momentum;
    let e2 = math::exp(2.0 * z);
    let em2 = math::exp(-2.0 * z);
    let mut j = [[0.0; 6]; 6];
    j[0][2] = 2.0 * e2 * px;
    j[0][3] = e2;
    j[1][2] = -2.0 * em2 * py;
    j[1][4] = em2;
    j[2][5] = 1.0;
    j[5][2] = -2.0 * e2 * px * px - 2.0 * em2 * py * py;
    j[5][3] = -2.0 * e2 * px;
    j[5][4] = 2.0 * em2 * py;
    Ok(j)
}

pub fn mat6_mul(a: &Mat6, b: &Mat6) -> Mat6 {
    let mut c = [[0.0; 6]; 6];
    for i in 0..6 {
        for k in 0..6 {
            let aik = a[i][k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..6 {
                c[i][j] += aik * b[k][j];
            }
        }
    }
    c
}

pub fn mat6_transpose(a: &Mat6) -> Mat6 {
    let mut t = [[0.0; 6]; 6];
    for i in 0..6 {
        for j in 0..6 {
            t[i][j] = a[j][i];
        }
    }
    t
}

pub fn mat6_trace(a: &Mat6) -> f64 {
    (0..6).map(|i| a[i][i]).sum()
}

/// Determinant of a 6×6 matrix by Gaussian elimination with partial pivoting.
pub fn det6(a: &Mat6) -> f64 {
    let mut m = *a;
    let mut det = 1.0;
    for col in 0..6 {
        let mut piv = col;
        for r in (col + 1)..6 {
            if math::abs(m[r][col]) > math::abs(m[piv][col]) {
                piv = r;
            }
        }
        if m[piv][col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        det *= m[col][col];
        for r in (col + 1)..6 {
            let f = m[r][col] / m[col][col];
            for c in col..6 {
                m[r][c] -= f * m[col][c];
            }
        }
    }
    det
}

/// `d♭` at a state: tangent-coordinate variations to cotangent-coordinate
/// variations.
fn flat_differential(state: &PhaseState) -> Result<Mat6> {
    let z = state.position.z;
    if math::abs(z) > math::EXP_ARG_LIMIT {
        return Err(SolError::ExponentOverflow);
    }
    let e2 = math::exp(2.0 * z);
    let em2 = math::exp(-2.0 * z);
    let v = state.velocity()?;
    let mut b = [[0.0; 6]; 6];
    for i in 0..3 {
        b[i][i] = 1.0;
    }
    b[3][2] = -2.0 * em2 * v[0];
    b[3][3] = em2;
    b[4][2] = 2.0 * e2 * v[1];
    b[4][4] = e2;
    b[5][5] = 1.0;
    Ok(b)
}

/// Inverse of [`flat_differential`]: `d♯`.
fn sharp_differential(state: &PhaseState) -> Result<Mat6> {
    let z = state.position.z;
    if math::abs(z) > math::EXP_ARG_LIMIT {
        return Err(SolError::ExponentOverflow);
    }
    let e2 = math::exp(2.0 * z);
    let em2 = math::exp(-2.0 * z);
    let [px, py, _] = state.momentum;
    let mut b = [[0.0; 6]; 6];
    for i in 0..3 {
        b[i][i] = 1.0;
    }
    b[3][2] = 2.0 * e2 * px;
    b[3][3] = e2;
    b[4][2] = -2.0 * em2 * py;
    b[4][4] = em2;
    b[5][5] = 1.0;
    Ok(b)
}

/// Coordinate components -> left-invariant frame components on `T(T Sol)`.
fn frame_change(z: f64) -> Result<Mat6> {
    if math::abs(z) > math::EXP_ARG_LIMIT {
        return Err(SolError::ExponentOverflow);
    }
    let e = math::exp(z);
    let ei = math::exp(-z);
    let mut f = [[0.0; 6]; 6];
    f[0][0] = ei;
    f[1][1] = e;
    f[2][2] = 1.0;
    f[3][3] = ei;
    f[4][4] = e;
    f[5][5] = 1.0;
    Ok(f)
}

fn frame_change_inv(z: f64) -> Result<Mat6> {
    frame_change(-z)
}

/// The left-invariant frame of `T(T Sol)` at a state, as coordinate vectors:
/// horizontal `X, Y, Z` then vertical `Ẋ, Ẏ, Ż`.
pub fn frame_basis(state: &PhaseState) -> Result<[[f64; 6]; 6]> {
    let z = state.position.z;
    if math::abs(z) > math::EXP_ARG_LIMIT {
        return Err(SolError::ExponentOverflow);
    }
    let e = math::exp(z);
    let ei = math::exp(-z);
    Ok([
        [e, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, ei, 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, e, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, ei, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
    ])
}

/// Gram matrix of the symplectic form on the left-invariant frame at a state.
pub fn omega_frame(state: &PhaseState) -> Result<Mat6> {
    let basis = frame_basis(state)?;
    let vel = state.velocity()?;
    let mut g = [[0.0; 6]; 6];
    for i in 0..6 {
        for j in 0..6 {
            g[i][j] = sol::symplectic_form_value(state.position, vel, basis[i], basis[j])?;
        }
    }
    Ok(g)
}

/// Monodromy of the linearized geodesic flow over time `T`, expressed in the
/// left-invariant frame at both endpoints.
#[derive(Debug, Clone)]
pub struct Monodromy6 {
    pub matrix: Mat6,
    pub base: PhaseState,
    pub end: PhaseState,
    pub time: f64,
}

impl Monodromy6 {
    pub fn trace(&self) -> f64 {
        mat6_trace(&self.matrix)
    }

    pub fn det(&self) -> f64 {
        det6(&self.matrix)
    }

    /// `‖Mᵀ Ω(end) M - Ω(base)‖_∞`, the symplecticity defect with the form
    /// evaluated through `symplectic_form_value` at the endpoints.
    pub fn symplectic_defect(&self) -> Result<f64> {
        let o_start = omega_frame(&self.base)?;
        let o_end = omega_frame(&self.end)?;
        let mt = mat6_transpose(&self.matrix);
        let pulled = mat6_mul(&mt, &mat6_mul(&o_end, &self.matrix));
        let mut worst: f64 = 0.0;
        for i in 0..6 {
            for j in 0..6 {
                worst = worst.max(math::abs(pulled[i][j] - o_start[i][j]));
            }
        }
        Ok(worst)
    }
}

/// Integrate `Ṁ = DF(φ_t(state)) · M`, `M(0) = I`, alongside the flow and
/// express the result in the left-invariant frame.
pub fn monodromy(state: &PhaseState, t_end: f64, tol: f64) -> Result<Monodromy6> {
    if !state.is_unit(1e-9)? {
        return Err(SolError::NormalizeFirst { energy: state.energy()? });
    }
    let [px, py, pz] = state.momentum;
    let mut y0 = [0.0; 40];
    y0[0] = state.position.x;
    y0[1] = state.position.y;
    y0[2] = state.position.z;
    y0[3] = pz;
    for i in 0..6 {
        y0[4 + 7 * i] = 1.0; // identity in row-major [4 + 6i + j]
    }

    let rhs = |_t: f64, y: &[f64; 40]| -> Result<[f64; 40]> {
        let base = flow::rhs_reduced(px, py, &[y[0], y[1], y[2], y[3]])?;
        let probe = PhaseState::new(SolElement::new(y[0], y[1], y[2]), [px, py, y[3]]);
        let df = variational_jacobian(&probe)?;
        let mut dy = [0.0; 40];
        dy[..4].copy_from_slice(&base);
        for i in 0..6 {
            for j in 0..6 {
                let mut acc = 0.0;
                for k in 0..6 {
                    let dfik = df[i][k];
                    if dfik != 0.0 {
                        acc += dfik * y[4 + 6 * k + j];
                    }
                }
                dy[4 + 6 * i + j] = acc;
            }
        }
        Ok(dy)
    };

    let sol = ode::integrate(rhs, 0.0, y0, t_end, &OdeOptions::with_tol(tol))?;
    let yf = sol.end_state();
    let end = PhaseState::new(SolElement::new(yf[0], yf[1], yf[2]), [px, py, yf[3]]);

    let mut m_cot = [[0.0; 6]; 6];
    for i in 0..6 {
        for j in 0..6 {
            m_cot[i][j] = yf[4 + 6 * i + j];
        }
    }

    // cotangent coordinates -> tangent coordinates -> frame components
    let m_tan = mat6_mul(&sharp_differential(&end)?, &mat6_mul(&m_cot, &flat_differential(state)?));
    let matrix = mat6_mul(
        &frame_change(end.position.z)?,
        &mat6_mul(&m_tan, &frame_change_inv(state.position.z)?),
    );

    Ok(Monodromy6 { matrix, base: *state, end, time: t_end })
}

/// Closed-form linearized flow along a type-A geodesic in the contact frame
/// `(h_1, h_2, h_3, h_4)`: a unipotent block and a rotation block at angular
/// speed `√2`.
pub fn frame_matrix_a(t: f64) -> Mat4 {
    let theta = core::f64::consts::SQRT_2 * t;
    let c = math::cos(theta);
    let s = math::sin(theta);
    [
        [1.0, t, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, c, -s / core::f64::consts::SQRT_2],
        [0.0, 0.0, core::f64::consts::SQRT_2 * s, c],
    ]
}

/// Closed-form linearized flow along a vertical type-B geodesic in the frame
/// `(g_1, g_2, g_3, g_4)`: `diag(e^t, e^{-t}, e^{-t}, e^t)`.
pub fn frame_matrix_b(t: f64) -> Result<Mat4> {
    if math::abs(t) > 700.0 {
        return Err(SolError::ExponentOverflow);
    }
    let e = math::exp(t);
    let ei = math::exp(-t);
    Ok([
        [e, 0.0, 0.0, 0.0],
        [0.0, ei, 0.0, 0.0],
        [0.0, 0.0, ei, 0.0],
        [0.0, 0.0, 0.0, e],
    ])
}

pub fn mat4_mul(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut c = [[0.0; 4]; 4];
    for i in 0..4 {
        for k in 0..4 {
            if a[i][k] == 0.0 {
                continue;
            }
            for j in 0..4 {
                c[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    c
}

/// Standard block pairing `dh_1∧dh_2 + dh_3∧dh_4`.
pub const J0_BLOCK: Mat4 = [
    [0.0, 1.0, 0.0, 0.0],
    [-1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
    [0.0, 0.0, -1.0, 0.0],
];

/// `‖Mᵀ J₀ M - J₀‖_∞` for a 4×4 frame matrix.
pub fn block_symplectic_defect(m: &Mat4) -> f64 {
    let mut mt = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            mt[i][j] = m[j][i];
        }
    }
    let p = mat4_mul(&mt, &mat4_mul(&J0_BLOCK, m));
    let mut worst: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            worst = worst.max(math::abs(p[i][j] - J0_BLOCK[i][j]));
        }
    }
    worst
}

/// Options for [`jacobi_field_check`].
#[derive(Debug, Clone, Copy)]
pub struct JacobiCheckOptions {
    /// Half-width of the central difference through nearby geodesics.
    pub variation_step: f64,
    /// End of the comparison window `[0, t_max]`.
    pub t_max: f64,
    /// Number of comparison points.
    pub samples: usize,
    /// Integrator tolerance.
    pub tol: f64,
}

impl Default for JacobiCheckOptions {
    fn default() -> Self {
        JacobiCheckOptions { variation_step: 1e-4, t_max: 3.0, samples: 60, tol: 1e-12 }
    }
}

/// Verify that a claimed vector field along a closed-form geodesic is a
/// Jacobi field: build the geodesic variation seeded by `(J(0), J'(0))` and
/// return the largest metric-norm deviation between the claimed field and
/// the central-difference transverse derivative on `[0, t_max]`.
///
/// `field(t)` returns coordinate components along `geodesic.position(t)`.
pub fn jacobi_field_check(
    geodesic: &ExactGeodesic,
    field: impl Fn(f64) -> [f64; 3],
    opts: &JacobiCheckOptions,
) -> Result<f64> {
    let s = opts.variation_step;
    let j0 = field(0.0);
    // 4th-order derivative of the field components at t = 0.
    let h = 1e-3;
    let fm2 = field(-2.0 * h);
    let fm1 = field(-h);
    let fp1 = field(h);
    let fp2 = field(2.0 * h);
    let mut jdot0 = [0.0; 3];
    for i in 0..3 {
        jdot0[i] = (-fp2[i] + 8.0 * fp1[i] - 8.0 * fm1[i] + fm2[i]) / (12.0 * h);
    }

    let q0 = geodesic.position(0.0)?;
    let v0 = geodesic.velocity(0.0)?;
    let perturbed = |sign: f64| -> Result<flow::Trajectory> {
        let q = SolElement::new(q0.x + sign * s * j0[0], q0.y + sign * s * j0[1], q0.z + sign * s * j0[2]);
        let v = [v0[0] + sign * s * jdot0[0], v0[1] + sign * s * jdot0[1], v0[2] + sign * s * jdot0[2]];
        let p = sol::flat(sol::TangentVector::new(q, v))?;
        flow::flow(&PhaseState::new(q, p.components), opts.t_max, opts.tol)
    };
    let plus = perturbed(1.0)?;
    let minus = perturbed(-1.0)?;

    let mut worst: f64 = 0.0;
    for k in 0..=opts.samples {
        let t = opts.t_max * k as f64 / opts.samples as f64;
        let qp = plus.state_at(t).position;
        let qm = minus.state_at(t).position;
        let claimed = field(t);
        let diff = [
            (qp.x - qm.x) / (2.0 * s) - claimed[0],
            (qp.y - qm.y) / (2.0 * s) - claimed[1],
            (qp.z - qm.z) / (2.0 * s) - claimed[2],
        ];
        let here = geodesic.position(t)?;
        worst = worst.max(math::sqrt(sol::inner_product(here, diff, diff)?));
    }
    if !worst.is_finite() {
        return Err(SolError::Numerical(String::from("variation left the integrator domain")));
    }
    Ok(worst)
}
