//! The Sol group, its left-invariant metric and frame, the musical
//! isomorphisms, the generating isometries, and the symplectic form pulled
//! back to the tangent bundle.
//!
//! Coordinates are global: as a manifold Sol is `R^3` with group law
//! `(α,β,λ)·(x,y,z) = (e^λ x + α, e^{-λ} y + β, z + λ)`. The left-invariant
//! orthonormal frame is `X = e^z ∂x`, `Y = e^{-z} ∂y`, `Z = ∂z`, so the
//! metric reads `e^{-2z} dx^2 + e^{2z} dy^2 + dz^2`.

use alloc::vec::Vec;

use crate::error::{Result, SolError};
use crate::math;

/// A point of Sol, equivalently a group element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolElement {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// Tangent vector in coordinate components `(ẋ, ẏ, ż)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentVector {
    pub base: SolElement,
    pub components: [f64; 3],
}

/// Cotangent vector in coordinate components `(p_x, p_y, p_z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CotangentVector {
    pub base: SolElement,
    pub components: [f64; 3],
}

impl SolElement {
    pub const IDENTITY: SolElement = SolElement { x: 0.0, y: 0.0, z: 0.0 };

    pub fn new(x: f64, y: f64, z: f64) -> SolElement {
        SolElement { x, y, z }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn coords(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

fn checked_exp(z: f64) -> Result<f64> {
    if math::abs(z) > math::EXP_ARG_LIMIT {
        return Err(SolError::ExponentOverflow);
    }
    Ok(math::exp(z))
}

/// Group multiplication `g · h`.
pub fn sol_mul(g: SolElement, h: SolElement) -> Result<SolElement> {
    let e = checked_exp(g.z)?;
    let ei = checked_exp(-g.z)?;
    Ok(SolElement::new(e * h.x + g.x, ei * h.y + g.y, h.z + g.z))
}

/// Group inverse: `sol_mul(g, sol_inverse(g))` is the identity.
pub fn sol_inverse(g: SolElement) -> Result<SolElement> {
    let e = checked_exp(g.z)?;
    let ei = checked_exp(-g.z)?;
    Ok(SolElement::new(-ei * g.x, -e * g.y, -g.z))
}

/// Commutator `g h g^{-1} h^{-1}`.
pub fn commutator(g: SolElement, h: SolElement) -> Result<SolElement> {
    let gh = sol_mul(g, h)?;
    let gi = sol_inverse(g)?;
    let hi = sol_inverse(h)?;
    sol_mul(sol_mul(gh, gi)?, hi)
}

/// Riemannian inner product of coordinate vectors `u`, `v` at base point `p`.
pub fn inner_product(p: SolElement, u: [f64; 3], v: [f64; 3]) -> Result<f64> {
    let e2 = checked_exp(2.0 * p.z)?;
    let em2 = checked_exp(-2.0 * p.z)?;
    Ok(em2 * u[0] * v[0] + e2 * u[1] * v[1] + u[2] * v[2])
}

/// Differential of left translation by `g`; constant in the coordinates.
pub fn left_translation_differential(g: SolElement) -> Result<[f64; 3]> {
    Ok([checked_exp(g.z)?, checked_exp(-g.z)?, 1.0])
}

/// Musical isomorphism `♭`: `(ẋ, ẏ, ż) ↦ (e^{-2z} ẋ, e^{2z} ẏ, ż)`.
pub fn flat(v: TangentVector) -> Result<CotangentVector> {
    let e2 = checked_exp(2.0 * v.base.z)?;
    let em2 = checked_exp(-2.0 * v.base.z)?;
    Ok(CotangentVector {
        base: v.base,
        components: [em2 * v.components[0], e2 * v.components[1], v.components[2]],
    })
}

/// Musical isomorphism `♯`, inverse to [`flat`].
pub fn sharp(p: CotangentVector) -> Result<TangentVector> {
    let e2 = checked_exp(2.0 * p.base.z)?;
    let em2 = checked_exp(-2.0 * p.base.z)?;
    Ok(TangentVector {
        base: p.base,
        components: [e2 * p.components[0], em2 * p.components[1], p.components[2]],
    })
}

impl TangentVector {
    pub fn new(base: SolElement, components: [f64; 3]) -> TangentVector {
        TangentVector { base, components }
    }

    pub fn norm(&self) -> Result<f64> {
        Ok(math::sqrt(inner_product(self.base, self.components, self.components)?))
    }
}

impl CotangentVector {
    pub fn new(base: SolElement, components: [f64; 3]) -> CotangentVector {
        CotangentVector { base, components }
    }

    /// Norm with respect to the dual metric.
    pub fn norm(&self) -> Result<f64> {
        let v = sharp(*self)?;
        v.norm()
    }
}

/// Left-invariant frame `(X, Y, Z)` at a point, as coordinate vectors.
pub fn frame_at(p: SolElement) -> Result<[[f64; 3]; 3]> {
    let e = checked_exp(p.z)?;
    let ei = checked_exp(-p.z)?;
    Ok([[e, 0.0, 0.0], [0.0, ei, 0.0], [0.0, 0.0, 1.0]])
}

/// `f_1 = (X - Y)/√2` at a point, in coordinates.
pub fn f1_at(p: SolElement) -> Result<[f64; 3]> {
    let fr = frame_at(p)?;
    Ok([
        (fr[0][0] - fr[1][0]) / core::f64::consts::SQRT_2,
        (fr[0][1] - fr[1][1]) / core::f64::consts::SQRT_2,
        (fr[0][2] - fr[1][2]) / core::f64::consts::SQRT_2,
    ])
}

/// `f_2 = (X + Y)/√2` at a point, in coordinates.
pub fn f2_at(p: SolElement) -> Result<[f64; 3]> {
    let fr = frame_at(p)?;
    Ok([
        (fr[0][0] + fr[1][0]) / core::f64::consts::SQRT_2,
        (fr[0][1] + fr[1][1]) / core::f64::consts::SQRT_2,
        (fr[0][2] + fr[1][2]) / core::f64::consts::SQRT_2,
    ])
}

/// Sign carried by a deck transformation axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn from_f64(v: f64) -> Sign {
        if v < 0.0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }
}

/// Generators of the isometries used here: the order-4 rotation `ρ`, the
/// reflection `r_Y`, left translations, and the deck map
/// `(x, y, z) ↦ (ε₁ e^λ x, ε₂ e^{-λ} y, z + λ)` of a suspension lattice.
#[derive(Debug, Clone, PartialEq)]
pub enum IsometryGen {
    Rho,
    RY,
    LeftTranslation(SolElement),
    Deck { lambda: f64, eps1: Sign, eps2: Sign },
}

impl IsometryGen {
    pub fn apply(&self, p: SolElement) -> Result<SolElement> {
        match self {
            IsometryGen::Rho => Ok(SolElement::new(p.y, -p.x, -p.z)),
            IsometryGen::RY => Ok(SolElement::new(-p.x, p.y, p.z)),
            IsometryGen::LeftTranslation(g) => sol_mul(*g, p),
            IsometryGen::Deck { lambda, eps1, eps2 } => {
                let e = checked_exp(*lambda)?;
                let ei = checked_exp(-*lambda)?;
                Ok(SolElement::new(
                    eps1.as_f64() * e * p.x,
                    eps2.as_f64() * ei * p.y,
                    p.z + lambda,
                ))
            }
        }
    }
}

/// An isometry stored as a word in the generators, applied left to right.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Isometry {
    pub word: Vec<IsometryGen>,
}

impl Isometry {
    pub fn identity() -> Isometry {
        Isometry { word: Vec::new() }
    }

    pub fn from_gen(g: IsometryGen) -> Isometry {
        Isometry { word: alloc::vec![g] }
    }

    pub fn rho() -> Isometry {
        Isometry::from_gen(IsometryGen::Rho)
    }

    pub fn r_y() -> Isometry {
        Isometry::from_gen(IsometryGen::RY)
    }

    pub fn left_translation(g: SolElement) -> Isometry {
        Isometry::from_gen(IsometryGen::LeftTranslation(g))
    }

    pub fn deck(lambda: f64, eps1: Sign, eps2: Sign) -> Isometry {
        Isometry::from_gen(IsometryGen::Deck { lambda, eps1, eps2 })
    }

    /// Concatenation: `self` acts first, then `next`.
    pub fn then(mut self, next: Isometry) -> Isometry {
        self.word.extend(next.word);
        self
    }

    pub fn apply(&self, p: SolElement) -> Result<SolElement> {
        let mut q = p;
        for g in &self.word {
            q = g.apply(q)?;
        }
        Ok(q)
    }

    /// Differential at `p` by central finite differences, column `i` being
    /// the image of `∂/∂x_i`.
    pub fn differential(&self, p: SolElement, h: f64) -> Result<[[f64; 3]; 3]> {
        let mut cols = [[0.0; 3]; 3];
        for i in 0..3 {
            let mut plus = p.coords();
            let mut minus = p.coords();
            plus[i] += h;
            minus[i] -= h;
            let fp = self.apply(SolElement::new(plus[0], plus[1], plus[2]))?;
            let fm = self.apply(SolElement::new(minus[0], minus[1], minus[2]))?;
            cols[i] = [
                (fp.x - fm.x) / (2.0 * h),
                (fp.y - fm.y) / (2.0 * h),
                (fp.z - fm.z) / (2.0 * h),
            ];
        }
        Ok(cols)
    }
}

/// Applies an isometry word to a point.
pub fn isometry_apply(iso: &Isometry, g: SolElement) -> Result<SolElement> {
    iso.apply(g)
}

/// The symplectic form `♭*(dp ∧ dq)` on the tangent bundle, evaluated at the
/// state `(x, y, z, ẋ, ẏ, ż)` on a pair of coordinate vectors of `T(T Sol)`.
///
/// In coordinates it reads
/// `(-2 e^{-2z} ẋ dz∧dx + e^{-2z} dẋ∧dx) + (2 e^{2z} ẏ dz∧dy + e^{2z} dẏ∧dy) + dż∧dz`,
/// with the convention `(dα∧dβ)(u, v) = α(u) β(v) - β(u) α(v)`.
pub fn symplectic_form_value(
    base: SolElement,
    velocity: [f64; 3],
    w1: [f64; 6],
    w2: [f64; 6],
) -> Result<f64> {
    let e2 = checked_exp(2.0 * base.z)?;
    let em2 = checked_exp(-2.0 * base.z)?;
    let wedge = |a: usize, b: usize| w1[a] * w2[b] - w1[b] * w2[a];
    // indices: 0 x, 1 y, 2 z, 3 ẋ, 4 ẏ, 5 ż
    Ok(-2.0 * em2 * velocity[0] * wedge(2, 0)
        + em2 * wedge(3, 0)
        + 2.0 * e2 * velocity[1] * wedge(2, 1)
        + e2 * wedge(4, 1)
        + wedge(5, 2))
}

/// Matrix of [`symplectic_form_value`] in the coordinate basis of `T(T Sol)`.
pub fn symplectic_form_matrix(base: SolElement, velocity: [f64; 3]) -> Result<[[f64; 6]; 6]> {
    let mut m = [[0.0; 6]; 6];
    for i in 0..6 {
        for j in (i + 1)..6 {
            let mut wi = [0.0; 6];
            let mut wj = [0.0; 6];
            wi[i] = 1.0;
            wj[j] = 1.0;
            let v = symplectic_form_value(base, velocity, wi, wj)?;
            m[i][j] = v;
            m[j][i] = -v;
        }
    }
    Ok(m)
}

/// The contact frame `(h_1, h_2, h_3, h_4)` along a type-A geodesic directed
/// by `f_2`, expressed as coordinate vectors of `T(T Sol)` at a point of
/// height `z`. Horizontal and vertical lifts are taken in the left-invariant
/// frame, so `h_1` is the `f_1` direction in the base, `ḣ_1` the same
/// direction in the fiber, and so on:
/// `h_1 = f_1`, `h_2 = Z + ḣ_1`, `h_3 = Z + 2ḣ_1`, `h_4 = h_1 - Ż`.
pub fn type_a_contact_frame(base: SolElement) -> Result<[[f64; 6]; 4]> {
    let f1 = f1_at(base)?;
    let u_h = [f1[0], f1[1], f1[2], 0.0, 0.0, 0.0];
    let u_v = [0.0, 0.0, 0.0, f1[0], f1[1], f1[2]];
    let z_h = [0.0, 0.0, 1.0, 0.0, 0.0, 0.0];
    let z_v = [0.0, 0.0, 0.0, 0.0, 0.0, 1.0];
    let add = |a: [f64; 6], b: [f64; 6], s: f64| {
        let mut r = [0.0; 6];
        for i in 0..6 {
            r[i] = a[i] + s * b[i];
        }
        r
    };
    Ok([u_h, add(z_h, u_v, 1.0), add(z_h, u_v, 2.0), add(u_h, z_v, -1.0)])
}
