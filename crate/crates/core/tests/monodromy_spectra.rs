//! Eigenvalue multisets of the numerically integrated monodromy must match
//! the closed-form frame matrices along both closed-form geodesic families.

use nalgebra::{Complex, DMatrix};
use solgeo_core::flow::PhaseState;
use solgeo_core::linearized::monodromy;
use solgeo_core::sol::SolElement;

const SQRT_2: f64 = std::f64::consts::SQRT_2;

fn spectrum(m: &[[f64; 6]; 6]) -> Vec<Complex<f64>> {
    let flat: Vec<f64> = m.iter().flat_map(|row| row.iter().copied()).collect();
    let mat = DMatrix::from_row_slice(6, 6, &flat);
    let mut eig: Vec<Complex<f64>> = mat.complex_eigenvalues().iter().copied().collect();
    eig.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    eig
}

fn assert_multiset_close(actual: &[Complex<f64>], expected: &[Complex<f64>], tol: f64) {
    assert_eq!(actual.len(), expected.len());
    let mut used = vec![false; expected.len()];
    for a in actual {
        let mut best: Option<(usize, f64)> = None;
        for (i, e) in expected.iter().enumerate() {
            if used[i] {
                continue;
            }
            let d = (a - e).norm();
            if best.map_or(true, |(_, bd)| d < bd) {
                best = Some((i, d));
            }
        }
        let (i, d) = best.expect("expected value available");
        assert!(d <= tol, "eigenvalue {a} missed its partner {} by {d}", expected[i]);
        used[i] = true;
    }
}

#[test]
fn type_a_spectra_match_frame_matrix() {
    let state = PhaseState::new(SolElement::IDENTITY, [1.0 / SQRT_2, 1.0 / SQRT_2, 0.0]);
    for k in 0..10 {
        let t = 0.1 + 4.9 * k as f64 / 9.0;
        let m = monodromy(&state, t, 1e-11).unwrap();
        let theta = SQRT_2 * t;
        let expected = vec![
            Complex::new(1.0, 0.0),
            Complex::new(1.0, 0.0),
            Complex::new(1.0, 0.0),
            Complex::new(1.0, 0.0),
            Complex::new(theta.cos(), theta.sin()),
            Complex::new(theta.cos(), -theta.sin()),
        ];
        assert_multiset_close(&spectrum(&m.matrix), &expected, 1e-5);
        assert!((m.trace() - (4.0 + 2.0 * theta.cos())).abs() < 1e-6);
    }
}

#[test]
fn type_b_spectra_match_frame_matrix() {
    let state = PhaseState::new(SolElement::IDENTITY, [0.0, 0.0, 1.0]);
    for k in 0..10 {
        let t = 0.1 + 4.9 * k as f64 / 9.0;
        let m = monodromy(&state, t, 1e-11).unwrap();
        let expected = vec![
            Complex::new(1.0, 0.0),
            Complex::new(1.0, 0.0),
            Complex::new(t.exp(), 0.0),
            Complex::new(t.exp(), 0.0),
            Complex::new((-t).exp(), 0.0),
            Complex::new((-t).exp(), 0.0),
        ];
        assert_multiset_close(&spectrum(&m.matrix), &expected, 1e-5 * t.exp());
        assert!((m.trace() - (2.0 + 4.0 * t.cosh())).abs() < 1e-5 * t.exp());
    }
}
