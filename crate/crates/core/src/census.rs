//! Closed-geodesic censuses on suspensions.
//!
//! Type-A closed geodesics are quotients of straight `f_1`/`f_2` lines
//! directed by lattice vectors: the class with `(x, y)` coordinates
//! `(a, b)` closes at height `z* = ln|a/b| / 2` with length `√(2|ab|)`.
//! Free-homotopy classes of such loops are orbits of the lattice classes
//! under the monodromy action, so the census enumerates one canonical
//! representative per orbit (the one with `z* ∈ [-λ/2, λ/2)`); every class
//! of bounded length reduces to a representative of bounded Euclidean norm,
//! which makes the enumeration box finite.
//!
//! Type-B closed geodesics correspond to periodic points of the monodromy
//! on the torus; their count at period `n` is `|det(Aⁿ - I)|`.
//!
//! Type-C geodesics enter only through the elliptic-integral length floor
//! `8/(√2 √(1+k²)) (E - K (1-k²)/2) ≥ 4 - π`, which the scale chooser uses
//! to push a finite set of classes below every type-C length.

use alloc::string::String;
use alloc::vec::Vec;

use crate::cz;
use crate::error::{Result, SolError};
use crate::flow::ABranch;
use crate::lattice::SolManifold;
use crate::math;
use crate::snf::{self, Mat2};

/// `4 - π`, the elliptic length floor.
pub const FOUR_MINUS_PI: f64 = 4.0 - core::f64::consts::PI;

/// Census record of a closed type-A geodesic.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedGeodesicA {
    /// Lattice class `(m, n)` (canonical orbit representative).
    pub class: (i64, i64),
    /// `(x, y)` coordinates of the class vector.
    pub eigencoords: [f64; 2],
    pub length: f64,
    /// Closing height `z* = ln|a/b| / 2`.
    pub height: f64,
    pub branch: ABranch,
    pub morse_bott_index: i64,
}

/// Census record of a closed type-B geodesic at period `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedGeodesicB {
    pub period: u32,
    pub base_point: [Rational; 2],
    /// Length in multiples of λ is exactly the period.
    pub length_in_lambda: u32,
}

/// A reduced fraction in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Rational {
    pub num: i64,
    pub den: i64,
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Rational {
    /// Reduce `num/den` into `[0, 1)`.
    pub fn new_mod_one(num: i128, den: i128) -> Result<Rational> {
        if den == 0 {
            return Err(SolError::InvalidInput(String::from("zero denominator")));
        }
        let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
        let num = num.rem_euclid(den);
        let num = i64::try_from(num).map_err(|_| SolError::IntegerOverflow)?;
        let den = i64::try_from(den).map_err(|_| SolError::IntegerOverflow)?;
        let g = gcd(num, den).max(1);
        Ok(Rational { num: num / g, den: den / g })
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl core::ops::Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        Rational::new_mod_one(
            self.num as i128 * rhs.den as i128 + rhs.num as i128 * self.den as i128,
            self.den as i128 * rhs.den as i128,
        )
        .expect("reduced rationals stay in range")
    }
}

/// Length, closing height, and branch of the type-A geodesic directed by a
/// lattice vector with coordinates `(a, b)`.
pub fn type_a_geodesic_data(a: f64, b: f64) -> Result<(f64, f64, ABranch)> {
    let prod = a * b;
    if prod == 0.0 || !prod.is_finite() {
        return Err(SolError::InvalidInput(String::from(
            "type-A classes need both coordinates nonzero",
        )));
    }
    let length = math::sqrt(2.0 * math::abs(prod));
    let height = 0.5 * math::ln(math::abs(a / b));
    let branch = if prod > 0.0 { ABranch::F2 } else { ABranch::F1 };
    Ok((length, height, branch))
}

/// Canonical orbit representative of a class under the monodromy action:
/// the iterate whose closing height lies in `[-λ/2, λ/2)`.
pub fn canonical_class(manifold: &SolManifold, class: (i64, i64)) -> Result<(i64, i64)> {
    if class == (0, 0) {
        return Err(SolError::InvalidInput(String::from("zero class")));
    }
    let m = manifold.monodromy();
    let a_mat = m.a;
    let det = m.det;
    // A^{-1} = adj(A) / det with det = ±1.
    let a_inv = [
        [det * a_mat[1][1], -det * a_mat[0][1]],
        [-det * a_mat[1][0], det * a_mat[0][0]],
    ];
    let half = m.lambda / 2.0;
    let mut mn = class;
    for _ in 0..512 {
        let v = manifold.class_vector(mn.0, mn.1);
        let (_, height, _) = type_a_geodesic_data(v[0], v[1])?;
        if height >= -half && height < half {
            return Ok(mn);
        }
        // The monodromy action shifts the height by +λ.
        let step = if height < -half { a_mat } else { a_inv };
        let next = (
            step[0][0].checked_mul(mn.0).and_then(|p| p.checked_add(step[0][1].checked_mul(mn.1)?)),
            step[1][0].checked_mul(mn.0).and_then(|p| p.checked_add(step[1][1].checked_mul(mn.1)?)),
        );
        match next {
            (Some(a), Some(b)) => mn = (a, b),
            _ => return Err(SolError::IntegerOverflow),
        }
    }
    Err(SolError::Numerical(String::from("orbit reduction did not converge")))
}

/// Search box guaranteed to contain every canonical representative of
/// length at most `cutoff`: `(m_max, n_max)` with `|m| <= m_max`,
/// `|n| <= n_max`.
pub fn census_search_box(manifold: &SolManifold, cutoff: f64) -> Result<(i64, i64)> {
    if !manifold.is_suspension() {
        return Err(SolError::CensusRequiresSuspension);
    }
    if !(cutoff > 0.0) || !cutoff.is_finite() {
        return Err(SolError::InvalidInput(String::from("cutoff must be positive")));
    }
    // Canonical representatives of length <= cutoff satisfy
    // a² + b² = |ab| (|a/b| + |b/a|) <= cutoff² cosh λ; Cramer bounds then
    // cap the coefficients against the shortest the lattice can get.
    let lambda = manifold.monodromy().lambda;
    let rho = cutoff * math::sqrt(math::cosh(lambda));
    let g = manifold.lattice_generators();
    let det_g = g[0][0] * g[1][1] - g[0][1] * g[1][0];
    let m_bound = (rho * math::hypot(g[0][1], g[1][1]) / math::abs(det_g)).min(2e9);
    let n_bound = (rho * math::hypot(g[0][0], g[1][0]) / math::abs(det_g)).min(2e9);
    Ok((math::floor(m_bound) as i64 + 1, math::floor(n_bound) as i64 + 1))
}

/// Census record for one class, or `None` when the class is not a
/// canonical representative of length within the cutoff.
pub fn census_record(
    manifold: &SolManifold,
    cutoff: f64,
    class: (i64, i64),
) -> Result<Option<ClosedGeodesicA>> {
    let (m, n) = class;
    if (m, n) == (0, 0) {
        return Ok(None);
    }
    let half = manifold.monodromy().lambda / 2.0;
    let v = manifold.class_vector(m, n);
    let (length, height, branch) = type_a_geodesic_data(v[0], v[1])?;
    if length > cutoff || height < -half || height >= half {
        return Ok(None);
    }
    Ok(Some(ClosedGeodesicA {
        class: (m, n),
        eigencoords: v,
        length,
        height,
        branch,
        morse_bott_index: cz::morse_bott_type_a(length)?,
    }))
}

pub fn sort_census(records: &mut [ClosedGeodesicA]) {
    records.sort_unstable_by(|p, q| p.length.total_cmp(&q.length).then(p.class.cmp(&q.class)));
}

/// Enumerate the closed type-A geodesics of length at most `cutoff`, one
/// canonical class per free-homotopy class, sorted by length.
pub fn type_a_census(manifold: &SolManifold, cutoff: f64) -> Result<Vec<ClosedGeodesicA>> {
    let (m_max, n_max) = census_search_box(manifold, cutoff)?;
    let mut records = Vec::new();
    for m in -m_max..=m_max {
        for n in -n_max..=n_max {
            if let Some(rec) = census_record(manifold, cutoff, (m, n))? {
                records.push(rec);
            }
        }
    }
    sort_census(&mut records);
    Ok(records)
}

/// Number of closed type-B geodesics at period `n`: the periodic points of
/// the monodromy, counted as `|det(Aⁿ - I)|`.
pub fn type_b_count(a: Mat2, n: u32) -> Result<u64> {
    if !crate::lattice::is_hyperbolic(a)? {
        return Err(SolError::NotHyperbolic);
    }
    if n == 0 {
        return Err(SolError::InvalidInput(String::from("period must be positive")));
    }
    let an = snf::mat2_pow(a, n)?;
    let m = [[an[0][0] - 1, an[0][1]], [an[1][0], an[1][1] - 1]];
    Ok(snf::det2(m)?.unsigned_abs())
}

/// The periodic points of period `n` as exact rational pairs in `[0, 1)²`,
/// obtained by solving `(Aⁿ - I) x ∈ Z²` through the Smith normal form.
pub fn enumerate_periodic_points(a: Mat2, n: u32) -> Result<Vec<[Rational; 2]>> {
    if !crate::lattice::is_hyperbolic(a)? {
        return Err(SolError::NotHyperbolic);
    }
    if n == 0 {
        return Err(SolError::InvalidInput(String::from("period must be positive")));
    }
    let an = snf::mat2_pow(a, n)?;
    let m = [[an[0][0] - 1, an[0][1]], [an[1][0], an[1][1] - 1]];
    let s = snf::smith_normal_form(m)?;
    let (d1, d2) = (s.d1() as i128, s.d2() as i128);
    if d1 == 0 || d2 == 0 {
        return Err(SolError::NotHyperbolic);
    }
    let v = s.v;
    let den = d1 * d2;
    let mut points = Vec::with_capacity((d1 * d2) as usize);
    for i in 0..d1 {
        for j in 0..d2 {
            // V · (i/d1, j/d2) over the common denominator d1 d2.
            let x = v[0][0] as i128 * i * d2 + v[0][1] as i128 * j * d1;
            let y = v[1][0] as i128 * i * d2 + v[1][1] as i128 * j * d1;
            points.push([Rational::new_mod_one(x, den)?, Rational::new_mod_one(y, den)?]);
        }
    }
    points.sort_unstable();
    points.dedup();
    Ok(points)
}

/// Type-B census rows: points of each period up to `n_max` (all points of
/// period dividing `n` included at period `n` traverse the same geodesic
/// set, so each point is listed at its minimal period).
pub fn type_b_census(a: Mat2, n_max: u32) -> Result<Vec<ClosedGeodesicB>> {
    let mut seen: Vec<[Rational; 2]> = Vec::new();
    let mut rows = Vec::new();
    for n in 1..=n_max {
        for p in enumerate_periodic_points(a, n)? {
            if !seen.contains(&p) {
                seen.push(p);
                rows.push(ClosedGeodesicB { period: n, base_point: p, length_in_lambda: n });
            }
        }
    }
    Ok(rows)
}

/// Default quadrature target.
pub const SIMPSON_TOL: f64 = 1e-10;

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

fn adaptive_simpson(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || math::abs(delta) <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
}

fn integrate_0_to_half_pi(f: impl Fn(f64) -> f64, tol: f64) -> f64 {
    let a = 0.0;
    let b = core::f64::consts::FRAC_PI_2;
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = simpson(a, b, fa, fm, fb);
    adaptive_simpson(&f, a, b, fa, fm, fb, whole, tol, 48)
}

/// [`complete_elliptic_k`] at an explicit quadrature target.
pub fn complete_elliptic_k_with_tol(k: f64, tol: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&k) {
        return Err(SolError::InvalidInput(String::from("K(k) requires 0 <= k < 1")));
    }
    let k2 = k * k;
    Ok(integrate_0_to_half_pi(
        |theta| {
            let s = math::sin(theta);
            1.0 / math::sqrt(1.0 - k2 * s * s)
        },
        tol,
    ))
}

/// Complete elliptic integral of the first kind,
/// `K(k) = ∫₀^{π/2} dθ / √(1 - k² sin²θ)`, by adaptive quadrature.
pub fn complete_elliptic_k(k: f64) -> Result<f64> {
    complete_elliptic_k_with_tol(k, SIMPSON_TOL)
}

/// [`complete_elliptic_e`] at an explicit quadrature target.
pub fn complete_elliptic_e_with_tol(k: f64, tol: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&k) {
        return Err(SolError::InvalidInput(String::from("E(k) requires 0 <= k <= 1")));
    }
    let k2 = k * k;
    Ok(integrate_0_to_half_pi(
        |theta| {
            let s = math::sin(theta);
            math::sqrt((1.0 - k2 * s * s).max(0.0))
        },
        tol,
    ))
}

/// Complete elliptic integral of the second kind,
/// `E(k) = ∫₀^{π/2} √(1 - k² sin²θ) dθ`, by adaptive quadrature.
pub fn complete_elliptic_e(k: f64) -> Result<f64> {
    complete_elliptic_e_with_tol(k, SIMPSON_TOL)
}

/// [`elliptic_length`] at an explicit quadrature target.
pub fn elliptic_length_with_tol(k: f64, tol: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&k) {
        return Err(SolError::InvalidInput(String::from("elliptic_length requires 0 <= k <= 1")));
    }
    if k == 1.0 {
        return Ok(4.0);
    }
    let e = complete_elliptic_e_with_tol(k, tol)?;
    let big_k = complete_elliptic_k_with_tol(k, tol)?;
    Ok(8.0 / (core::f64::consts::SQRT_2 * math::sqrt(1.0 + k * k))
        * (e - 0.5 * big_k * (1.0 - k * k)))
}

/// The length quantum of type-A geodesics homotopic to type-C ones:
/// `8/(√2 √(1+k²)) · (E(k) - K(k)(1-k²)/2)` for `k ∈ [0, 1]`, with the
/// `k = 1` endpoint taken as its limit value 4. Bounded below by `4 - π`.
pub fn elliptic_length(k: f64) -> Result<f64> {
    elliptic_length_with_tol(k, SIMPSON_TOL)
}

/// Largest scale putting a maximal base length at `4 - π`.
pub fn scale_for_max_length(max_base_length: f64) -> Result<f64> {
    if !(max_base_length > 0.0) || !max_base_length.is_finite() {
        return Err(SolError::InvalidInput(String::from("lengths must be positive")));
    }
    Ok(FOUR_MINUS_PI / max_base_length)
}

/// The largest `ε` such that every listed class, realized as a closed
/// type-A geodesic of the rescaled lattice, has length at most `4 - π` —
/// hence shorter than every type-C geodesic and of Morse-Bott index 1.
/// Lengths are measured against the manifold's unit-scale lattice; the
/// returned `ε` is meant to replace the manifold's scale.
pub fn choose_scale(manifold: &SolManifold, classes: &[(i64, i64)]) -> Result<f64> {
    if classes.is_empty() {
        return Err(SolError::EmptyClasses);
    }
    let w_inv = manifold.monodromy().eigenbasis_inverse();
    let mut max_len: f64 = 0.0;
    for &(m, n) in classes {
        if (m, n) == (0, 0) {
            return Err(SolError::InvalidInput(String::from("classes must be nonzero")));
        }
        let a = w_inv[0][0] * m as f64 + w_inv[0][1] * n as f64;
        let b = w_inv[1][0] * m as f64 + w_inv[1][1] * n as f64;
        let (len, _, _) = type_a_geodesic_data(a, b)?;
        max_len = max_len.max(len);
    }
    scale_for_max_length(max_len)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_manifold, ManifoldKind};
    use approx::assert_relative_eq;

    const CAT: Mat2 = [[2, 1], [1, 1]];
    const FIB: Mat2 = [[1, 1], [1, 0]];

    fn cat_manifold(scale: f64) -> SolManifold {
        build_manifold(CAT, scale, ManifoldKind::Suspension).unwrap()
    }

    #[test]
    fn geodesic_data_formulas() {
        let (len, height, branch) = type_a_geodesic_data(1.0, 1.0).unwrap();
        assert_relative_eq!(len, core::f64::consts::SQRT_2, max_relative = 1e-15);
        assert_eq!(height, 0.0);
        assert_eq!(branch, ABranch::F2);
        let (len2, _, branch2) = type_a_geodesic_data(2.0, -2.0).unwrap();
        assert_relative_eq!(len2, 2.0 * core::f64::consts::SQRT_2, max_relative = 1e-15);
        assert_eq!(branch2, ABranch::F1);
        let (_, h3, _) = type_a_geodesic_data(4.0, 1.0).unwrap();
        assert_relative_eq!(h3, 4.0f64.ln() / 2.0, max_relative = 1e-15);
        assert!(type_a_geodesic_data(0.0, 1.0).is_err());
    }

    #[test]
    fn census_rejects_sapphires() {
        let sap = build_manifold(CAT, 1.0, ManifoldKind::Sapphire).unwrap();
        assert_eq!(type_a_census(&sap, 3.0).unwrap_err(), SolError::CensusRequiresSuspension);
    }

    #[test]
    fn cat_census_basic_structure() {
        let man = cat_manifold(1.0);
        let census = type_a_census(&man, 6.0).unwrap();
        assert!(!census.is_empty());
        // sorted by length
        for w in census.windows(2) {
            assert!(w[0].length <= w[1].length + 1e-15);
        }
        // symmetric under negation of the class
        for rec in &census {
            let neg = census
                .iter()
                .find(|r| r.class == (-rec.class.0, -rec.class.1))
                .expect("negated class present");
            assert_relative_eq!(neg.length, rec.length, max_relative = 1e-12);
        }
        // doubling a class doubles the length
        for rec in &census {
            if let Some(double) =
                census.iter().find(|r| r.class == (2 * rec.class.0, 2 * rec.class.1))
            {
                assert_relative_eq!(double.length, 2.0 * rec.length, max_relative = 1e-12);
            }
        }
        // heights sit in the canonical window
        let half = man.monodromy().lambda / 2.0;
        for rec in &census {
            assert!(rec.height >= -half - 1e-12 && rec.height < half + 1e-12);
        }
    }

    #[test]
    fn census_is_complete_over_a_brute_force_box() {
        let man = cat_manifold(1.0);
        let cutoff = 4.0;
        let census = type_a_census(&man, cutoff).unwrap();
        for m in -12i64..=12 {
            for n in -12i64..=12 {
                if (m, n) == (0, 0) {
                    continue;
                }
                let v = man.class_vector(m, n);
                let (len, _, _) = type_a_geodesic_data(v[0], v[1]).unwrap();
                if len > cutoff {
                    continue;
                }
                let canon = canonical_class(&man, (m, n)).unwrap();
                assert!(
                    census.iter().any(|r| r.class == canon),
                    "class ({m},{n}) of length {len} missing (canonical {canon:?})"
                );
            }
        }
    }

    #[test]
    fn canonical_classes_are_fixed_points() {
        let man = cat_manifold(1.0);
        let census = type_a_census(&man, 5.0).unwrap();
        for rec in &census {
            assert_eq!(canonical_class(&man, rec.class).unwrap(), rec.class);
        }
        // Orbit mates reduce to the same representative with equal length.
        let v = canonical_class(&man, (1, 0)).unwrap();
        let a = man.monodromy().a;
        // the orbit mate A·(1,0) is the first column of A
        let mate = (a[0][0], a[1][0]);
        assert_eq!(canonical_class(&man, mate).unwrap(), v);
    }

    #[test]
    fn periodic_point_counts() {
        assert_eq!(type_b_count(CAT, 1).unwrap(), 1);
        assert_eq!(type_b_count(CAT, 2).unwrap(), 5);
        assert_eq!(type_b_count(FIB, 1).unwrap(), 1);
        let pts = enumerate_periodic_points(CAT, 2).unwrap();
        assert_eq!(pts.len(), 5);
        assert!(pts.contains(&[Rational { num: 0, den: 1 }, Rational { num: 0, den: 1 }]));
        let pts1 = enumerate_periodic_points(CAT, 1).unwrap();
        assert_eq!(pts1, alloc::vec![[Rational { num: 0, den: 1 }, Rational { num: 0, den: 1 }]]);
    }

    #[test]
    fn periodic_points_match_det_on_a_scan() {
        for a in -3..=3i64 {
            for b in -3..=3i64 {
                for c in -3..=3i64 {
                    for d in -3..=3i64 {
                        let m = [[a, b], [c, d]];
                        match crate::lattice::is_hyperbolic(m) {
                            Ok(true) => {}
                            _ => continue,
                        }
                        for n in 1..=4u32 {
                            let count = type_b_count(m, n).unwrap();
                            let pts = enumerate_periodic_points(m, n).unwrap();
                            assert_eq!(pts.len() as u64, count, "matrix {m:?}, n = {n}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn periodic_points_form_a_group() {
        let pts = enumerate_periodic_points(CAT, 3).unwrap();
        for p in &pts {
            for q in &pts {
                let sum = [p[0] + q[0], p[1] + q[1]];
                assert!(pts.contains(&sum), "not closed under addition: {p:?} + {q:?}");
            }
        }
    }

    #[test]
    fn verified_against_fixed_point_equation() {
        // Each enumerated point satisfies Aⁿ x ≡ x (mod Z²) exactly.
        for n in 1..=4u32 {
            let an = snf::mat2_pow(CAT, n).unwrap();
            for p in enumerate_periodic_points(CAT, n).unwrap() {
                let den = (p[0].den as i128) * (p[1].den as i128);
                let x = p[0].num as i128 * p[1].den as i128;
                let y = p[1].num as i128 * p[0].den as i128;
                let ax = an[0][0] as i128 * x + an[0][1] as i128 * y - x;
                let ay = an[1][0] as i128 * x + an[1][1] as i128 * y - y;
                assert_eq!(ax.rem_euclid(den), 0);
                assert_eq!(ay.rem_euclid(den), 0);
            }
        }
    }

    #[test]
    fn type_b_census_lists_minimal_periods() {
        let rows = type_b_census(CAT, 2).unwrap();
        // period 1: only the origin; period 2: the remaining 4 points.
        assert_eq!(rows.iter().filter(|r| r.period == 1).count(), 1);
        assert_eq!(rows.iter().filter(|r| r.period == 2).count(), 4);
    }

    #[test]
    fn elliptic_basics() {
        let half_pi = core::f64::consts::FRAC_PI_2;
        assert_relative_eq!(complete_elliptic_k(0.0).unwrap(), half_pi, epsilon = 1e-12);
        assert_relative_eq!(complete_elliptic_e(0.0).unwrap(), half_pi, epsilon = 1e-12);
        assert_relative_eq!(
            elliptic_length(0.0).unwrap(),
            core::f64::consts::PI * core::f64::consts::SQRT_2,
            epsilon = 1e-10
        );
        assert!((elliptic_length(0.9999).unwrap() - 4.0).abs() < 0.01);
        assert_eq!(elliptic_length(1.0).unwrap(), 4.0);
        assert!(complete_elliptic_k(1.0).is_err());
        assert!(elliptic_length(1.5).is_err());
    }

    /// AGM oracle for K and E.
    fn agm_k_e(k: f64) -> (f64, f64) {
        let mut a = 1.0f64;
        let mut b = (1.0 - k * k).sqrt();
        let mut c = k;
        let mut sum = 0.5 * c * c;
        let mut pow = 1.0;
        for _ in 0..64 {
            let an = 0.5 * (a + b);
            let bn = (a * b).sqrt();
            c = 0.5 * (a - b);
            a = an;
            b = bn;
            pow *= 2.0;
            sum += 0.5 * pow * c * c;
            if c.abs() < 1e-17 {
                break;
            }
        }
        let big_k = core::f64::consts::FRAC_PI_2 / a;
        let e = big_k * (1.0 - sum);
        (big_k, e)
    }

    #[test]
    fn quadrature_matches_agm() {
        for i in 0..40 {
            let k = i as f64 / 40.0;
            let (k_agm, e_agm) = agm_k_e(k);
            assert_relative_eq!(complete_elliptic_k(k).unwrap(), k_agm, max_relative = 1e-9);
            assert_relative_eq!(complete_elliptic_e(k).unwrap(), e_agm, max_relative = 1e-9);
        }
    }

    #[test]
    fn elliptic_floor_on_a_coarse_grid() {
        for i in 0..500 {
            let k = i as f64 / 500.0;
            let e = complete_elliptic_e(k).unwrap();
            let kk = complete_elliptic_k(k).unwrap();
            assert!(e >= 1.0);
            assert!(kk * (1.0 - k * k).sqrt() <= core::f64::consts::FRAC_PI_2 + 1e-9);
            let v = elliptic_length(k).unwrap();
            assert!(v >= FOUR_MINUS_PI);
            assert!(v <= core::f64::consts::PI * core::f64::consts::SQRT_2 + 1e-12);
        }
    }

    #[test]
    fn scale_chooser() {
        assert_relative_eq!(scale_for_max_length(1.0).unwrap(), FOUR_MINUS_PI, epsilon = 1e-15);
        assert_relative_eq!(scale_for_max_length(1.0).unwrap(), 0.858407, max_relative = 1e-5);

        let man = cat_manifold(1.0);
        let classes = [(1i64, 0i64), (0, 1), (1, 1), (2, -1)];
        let eps = choose_scale(&man, &classes).unwrap();
        // doubling every class halves the scale
        let doubled: Vec<(i64, i64)> = classes.iter().map(|&(m, n)| (2 * m, 2 * n)).collect();
        assert_relative_eq!(choose_scale(&man, &doubled).unwrap(), eps / 2.0, epsilon = 1e-15);

        // post-scale lengths obey the bound and all indices are 1
        let rescaled = cat_manifold(eps);
        let mut realized_max: f64 = 0.0;
        for &(m, n) in &classes {
            let v = rescaled.class_vector(m, n);
            let (len, _, _) = type_a_geodesic_data(v[0], v[1]).unwrap();
            realized_max = realized_max.max(len);
            assert!(len <= FOUR_MINUS_PI + 1e-12);
            assert_eq!(cz::morse_bott_type_a(len).unwrap(), 1);
        }
        assert_relative_eq!(realized_max, FOUR_MINUS_PI, epsilon = 1e-12);
        assert_eq!(choose_scale(&man, &[]).unwrap_err(), SolError::EmptyClasses);
    }
}
