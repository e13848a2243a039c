//! Independent check of the second-order weak-interaction gap coefficients.
//!
//! For a box with zero potential the level `k` has energy
//! `λ_k + (β/2)∫φ_k⁴ + β² E₂(k) + O(β³)` with
//! `E₂(k) = -Σ_{m≠k} (∫φ_k³ φ_m)² / (λ_m - λ_k)`. The overlaps are computed
//! here by composite Simpson quadrature of separable sine products, with no
//! use of their closed forms, and the gap coefficient is `E₂(2,1,..) - E₂(1,1,..)`.

use std::f64::consts::PI;

use gpegap_core::asymptotics::{box_gap_weak_secondorder, BoxConstants};

const MODES: usize = 12;
const PANELS: usize = 4096;

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let h = (b - a) / PANELS as f64;
    let mut s = f(a) + f(b);
    for i in 1..PANELS {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(a + h * i as f64);
    }
    s * h / 3.0
}

fn mode(l: f64, k: usize, x: f64) -> f64 {
    (2.0 / l).sqrt() * (k as f64 * PI * x / l).sin()
}

/// `∫_0^L φ_k³ φ_m` for `m = 1..=MODES` (index 0 unused).
fn overlaps(l: f64, k: usize) -> Vec<f64> {
    (0..=MODES).map(|m| if m == 0 { 0.0 } else { simpson(|x| mode(l, k, x).powi(3) * mode(l, m, x), 0.0, l) }).collect()
}

fn second_order_energy(lengths: &[f64], k: &[usize]) -> f64 {
    let tables: Vec<Vec<f64>> = lengths.iter().zip(k).map(|(&l, &kj)| overlaps(l, kj)).collect();
    let lambda =
        |m: &[usize]| -> f64 { lengths.iter().zip(m).map(|(l, &mj)| 0.5 * (mj as f64 * PI / l).powi(2)).sum() };
    let lk = lambda(k);
    let d = lengths.len();
    let mut total = 0.0;
    let mut m = vec![1usize; d];
    loop {
        if m != k {
            let a: f64 = (0..d).map(|j| tables[j][m[j]]).product();
            if a != 0.0 {
                total -= a * a / (lambda(&m) - lk);
            }
        }
        let mut j = 0;
        while j < d {
            m[j] += 1;
            if m[j] <= MODES {
                break;
            }
            m[j] = 1;
            j += 1;
        }
        if j == d {
            return total;
        }
    }
}

fn oracle_gap_coefficient(lengths: &[f64]) -> f64 {
    let ground = vec![1; lengths.len()];
    let mut excited = ground.clone();
    excited[0] = 2;
    second_order_energy(lengths, &excited) - second_order_energy(lengths, &ground)
}

fn assert_rel(got: f64, want: f64, rel: f64, what: &str) {
    assert!((got - want).abs() <= rel * want.abs(), "{what}: got {got:.15e}, want {want:.15e}");
}

#[test]
fn one_dimensional_coefficient_is_length_independent() {
    for l in [0.5, 1.0, 2.0, 7.3] {
        let oracle = oracle_gap_coefficient(&[l]);
        let (g1, g2) = BoxConstants::new(&[l]).unwrap().g().unwrap();
        assert_rel(g1, oracle, 1e-10, "G1 (1D)");
        assert_rel(g2, 3.0 * oracle, 1e-10, "G2 (1D)");
    }
}

#[test]
fn two_dimensional_coefficient_matches_quadrature() {
    for lengths in [[2.0, 1.0], [1.5, 1.0], [3.0, 0.7]] {
        let oracle = oracle_gap_coefficient(&lengths);
        let (g1, _) = BoxConstants::new(&lengths).unwrap().g().unwrap();
        assert_rel(g1, oracle, 1e-10, "G1 (2D)");
    }
}

#[test]
fn three_dimensional_coefficient_matches_quadrature() {
    for lengths in [[2.0, 1.5, 1.0], [3.0, 1.0, 1.0], [1.3, 1.2, 1.1]] {
        let oracle = oracle_gap_coefficient(&lengths);
        let (g1, _) = BoxConstants::new(&lengths).unwrap().g().unwrap();
        assert_rel(g1, oracle, 1e-10, "G1 (3D)");
    }
}

#[test]
fn three_dimensional_constants_match_level_corrections() {
    let lengths = [2.0, 1.5, 1.0];
    let c = BoxConstants::new(&lengths).unwrap();
    for k in [[1usize, 1, 1], [2, 1, 1]] {
        let kf = k.map(|v| v as f64);
        let oracle = second_order_energy(&lengths, &k);
        assert_rel(-c.c(kf).unwrap() / (256.0 * PI * PI), oracle, 1e-10, "C_k");
    }
}

/// Frozen oracle values (Simpson, 4096 panels, 12 modes per axis).
#[test]
fn frozen_oracle_values() {
    let cases: [(&[f64], f64); 3] =
        [(&[1.0], 4.749430483234574e-3), (&[2.0, 1.0], 1.080495434935863e-2), (&[2.0, 1.5, 1.0], 1.110884330760233e-2)];
    for (lengths, frozen) in cases {
        let oracle = oracle_gap_coefficient(lengths);
        assert_rel(oracle, frozen, 1e-12, "frozen");
        let gaps = box_gap_weak_secondorder(lengths, 0.1).unwrap();
        let base = 1.5 * PI * PI / (lengths[0] * lengths[0]);
        assert_rel(gaps.delta_e.value - base, frozen * 0.01, 1e-9, "weak second-order gap");
    }
}
