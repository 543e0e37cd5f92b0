//! Closed Sol manifolds: hyperbolic `GL(2,Z)` monodromies with their
//! eigen-data, suspension lattices, torus-bundle homology via Smith normal
//! form, and sapphire wrappers.
//!
//! A suspension of a hyperbolic `A` is realized as a quotient of Sol by the
//! lattice generated by a rank-2 translation lattice `Λ_0 ⊂ K = {z = 0}`
//! and the deck isometry `(x, y, z) ↦ (ε₁ e^λ x, ε₂ e^{-λ} y, z + λ)`. The
//! generators of `Λ_0` are the columns of `ε · W^{-1}` where `W` holds the
//! unit eigenvectors of `A`; in those generators the deck map acts by `A`
//! itself, which makes the invariance of `Λ_0` automatic.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Result, SolError};
use crate::math;
use crate::snf::{self, Mat2};
use crate::sol::Sign;

/// A hyperbolic element of `GL(2,Z)` with derived eigen-data.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperbolicMonodromy {
    pub a: Mat2,
    pub det: i64,
    pub trace: i64,
    /// `λ > 0` with eigenvalues `ε₁ e^λ` and `ε₂ e^{-λ}`.
    pub lambda: f64,
    pub eps1: Sign,
    pub eps2: Sign,
    /// Columns are the unit eigenvectors for `ε₁ e^λ`, `ε₂ e^{-λ}`, first
    /// nonzero entry positive.
    pub eigenbasis: [[f64; 2]; 2],
}

/// Hyperbolicity test: two real eigenvalues different from ±1. For
/// `det = +1` this is `|tr| > 2`, for `det = -1` it is `tr != 0`.
pub fn is_hyperbolic(a: Mat2) -> Result<bool> {
    let det = snf::det2(a)?;
    if det != 1 && det != -1 {
        return Err(SolError::NotInGl2Z { det });
    }
    let tr = a[0][0] + a[1][1];
    Ok((det == 1 && tr.abs() > 2) || (det == -1 && tr != 0))
}

fn unit_column(mut v: [f64; 2]) -> [f64; 2] {
    let n = math::hypot(v[0], v[1]);
    v[0] /= n;
    v[1] /= n;
    let lead = if math::abs(v[0]) > 1e-12 { v[0] } else { v[1] };
    if lead < 0.0 {
        v[0] = -v[0];
        v[1] = -v[1];
    }
    v
}

fn eigenvector(a: Mat2, mu: f64) -> [f64; 2] {
    // (A - mu) v = 0: v is orthogonal to both rows; take the larger option.
    let r1 = [a[0][1] as f64, mu - a[0][0] as f64];
    let r2 = [mu - a[1][1] as f64, a[1][0] as f64];
    let v = if math::hypot(r1[0], r1[1]) >= math::hypot(r2[0], r2[1]) { r1 } else { r2 };
    unit_column(v)
}

/// Build the eigen-data of a hyperbolic matrix.
pub fn build_monodromy(a: Mat2) -> Result<HyperbolicMonodromy> {
    if !is_hyperbolic(a)? {
        return Err(SolError::NotHyperbolic);
    }
    let det = snf::det2(a)?;
    let trace = a[0][0] + a[1][1];
    let tr = trace as f64;
    let disc = tr * tr - 4.0 * det as f64;
    let sq = math::sqrt(disc);
    let mu_plus = (tr + sq) / 2.0;
    let mu_minus = (tr - sq) / 2.0;
    let (dominant, other) = if math::abs(mu_plus) >= math::abs(mu_minus) {
        (mu_plus, mu_minus)
    } else {
        (mu_minus, mu_plus)
    };
    let lambda = math::ln(math::abs(dominant));
    let eps1 = Sign::from_f64(dominant);
    let eps2 = Sign::from_f64(other);
    let eigenbasis_cols = [eigenvector(a, dominant), eigenvector(a, other)];
    // store column-major as [[w11, w12], [w21, w22]] with columns the vectors
    let eigenbasis = [
        [eigenbasis_cols[0][0], eigenbasis_cols[1][0]],
        [eigenbasis_cols[0][1], eigenbasis_cols[1][1]],
    ];
    Ok(HyperbolicMonodromy { a, det, trace, lambda, eps1, eps2, eigenbasis })
}

impl HyperbolicMonodromy {
    /// Eigenvalues `(ε₁ e^λ, ε₂ e^{-λ})`.
    pub fn eigenvalues(&self) -> (f64, f64) {
        (self.eps1.as_f64() * math::exp(self.lambda), self.eps2.as_f64() * math::exp(-self.lambda))
    }

    /// Residual of `A · W = W · diag(μ₁, μ₂)`, for validation.
    pub fn eigen_residual(&self) -> f64 {
        let (m1, m2) = self.eigenvalues();
        let w = &self.eigenbasis;
        let a = &self.a;
        let mut worst: f64 = 0.0;
        for r in 0..2 {
            let aw1 = a[r][0] as f64 * w[0][0] + a[r][1] as f64 * w[1][0];
            let aw2 = a[r][0] as f64 * w[0][1] + a[r][1] as f64 * w[1][1];
            worst = worst.max(math::abs(aw1 - m1 * w[r][0]));
            worst = worst.max(math::abs(aw2 - m2 * w[r][1]));
        }
        worst
    }

    /// `W^{-1}`: the change of coordinates sending the eigenbasis to the
    /// coordinate axes of `K`.
    pub fn eigenbasis_inverse(&self) -> [[f64; 2]; 2] {
        let w = &self.eigenbasis;
        let det = w[0][0] * w[1][1] - w[0][1] * w[1][0];
        [[w[1][1] / det, -w[0][1] / det], [-w[1][0] / det, w[0][0] / det]]
    }
}

/// Invariant factor lists of the homology groups; `0` denotes a free `Z`
/// summand, an entry `d > 1` a `Z/d` summand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyReport {
    pub h: [Vec<i64>; 4],
}

impl HomologyReport {
    pub fn torsion_order_h1(&self) -> i64 {
        self.h[1].iter().filter(|&&d| d > 1).product()
    }

    /// Render one group as `Z`, `Z + Z/2`, `Z/2`, `0`, ...
    pub fn group_string(&self, i: usize) -> String {
        let parts: Vec<String> = self.h[i]
            .iter()
            .map(|&d| if d == 0 { String::from("Z") } else { alloc::format!("Z/{d}") })
            .collect();
        if parts.is_empty() {
            String::from("0")
        } else {
            parts.join(" + ")
        }
    }
}

/// Homology of the torus bundle with monodromy `A`:
/// `H_0 = Z`, `H_1 = Z ⊕ Z²/(A - I)Z²`, `H_2 = Z` or `Z/2`, `H_3 = Z` or `0`
/// depending on the sign of `det A`.
pub fn homology(m: &HyperbolicMonodromy) -> Result<HomologyReport> {
    let a_minus_i = [[m.a[0][0] - 1, m.a[0][1]], [m.a[1][0], m.a[1][1] - 1]];
    let snf = snf::smith_normal_form(a_minus_i)?;
    let mut h1 = alloc::vec![0i64];
    h1.extend(snf.torsion_factors());
    let (h2, h3) = if m.det > 0 {
        (alloc::vec![0i64], alloc::vec![0i64])
    } else {
        (alloc::vec![2i64], Vec::new())
    };
    Ok(HomologyReport { h: [alloc::vec![0i64], h1, h2, h3] })
}

/// Order of the fiber-translation group `F = (A - I)^{-1}(Λ_0) / Λ_0`,
/// which is `|det(A - I)|`.
pub fn fiber_translation_group_order(m: &HyperbolicMonodromy) -> Result<u64> {
    let a_minus_i = [[m.a[0][0] - 1, m.a[0][1]], [m.a[1][0], m.a[1][1] - 1]];
    Ok(snf::det2(a_minus_i)?.unsigned_abs())
}

/// Requested kind of closed Sol manifold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ManifoldKind {
    Suspension,
    Sapphire,
}

/// A closed Sol manifold: a suspension of a hyperbolic toral map with a
/// lattice scale, or a sapphire wrapper over such a suspension. Sapphires
/// are carried as data only; their quotient invariants are not computed.
#[derive(Debug, Clone, PartialEq)]
pub enum SolManifold {
    Suspension { monodromy: HyperbolicMonodromy, scale: f64 },
    Sapphire { base: HyperbolicMonodromy, scale: f64 },
}

/// Build a manifold record from the integer matrix and lattice scale.
pub fn build_manifold(a: Mat2, scale: f64, kind: ManifoldKind) -> Result<SolManifold> {
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(SolError::InvalidInput(String::from("scale must be positive and finite")));
    }
    let monodromy = build_monodromy(a)?;
    Ok(match kind {
        ManifoldKind::Suspension => SolManifold::Suspension { monodromy, scale },
        ManifoldKind::Sapphire => SolManifold::Sapphire { base: monodromy, scale },
    })
}

impl SolManifold {
    pub fn monodromy(&self) -> &HyperbolicMonodromy {
        match self {
            SolManifold::Suspension { monodromy, .. } => monodromy,
            SolManifold::Sapphire { base, .. } => base,
        }
    }

    pub fn scale(&self) -> f64 {
        match self {
            SolManifold::Suspension { scale, .. } | SolManifold::Sapphire { scale, .. } => *scale,
        }
    }

    pub fn is_suspension(&self) -> bool {
        matches!(self, SolManifold::Suspension { .. })
    }

    /// Generators of `Λ_0` in the `(x, y)` coordinates of `K`: the columns
    /// of `ε · W^{-1}`. The deck map `diag(ε₁ e^λ, ε₂ e^{-λ})` sends
    /// generator `j` to `Σ_i A_ij · (generator i)`.
    pub fn lattice_generators(&self) -> [[f64; 2]; 2] {
        let w_inv = self.monodromy().eigenbasis_inverse();
        let s = self.scale();
        [[s * w_inv[0][0], s * w_inv[0][1]], [s * w_inv[1][0], s * w_inv[1][1]]]
    }

    /// `(x, y)` coordinates of the lattice class `(m, n)`.
    pub fn class_vector(&self, m: i64, n: i64) -> [f64; 2] {
        let g = self.lattice_generators();
        [g[0][0] * m as f64 + g[0][1] * n as f64, g[1][0] * m as f64 + g[1][1] * n as f64]
    }

    /// Homology of the underlying bundle; rejected for sapphires, whose
    /// first homology is torsion but carries no computed formula here.
    pub fn homology(&self) -> Result<HomologyReport> {
        match self {
            SolManifold::Suspension { monodromy, .. } => homology(monodromy),
            SolManifold::Sapphire { .. } => Err(SolError::NotComputed("sapphire homology")),
        }
    }

    /// Deck isometry of the suspension presentation.
    pub fn deck_isometry(&self) -> crate::sol::Isometry {
        let m = self.monodromy();
        crate::sol::Isometry::deck(m.lambda, m.eps1, m.eps2)
    }
}
