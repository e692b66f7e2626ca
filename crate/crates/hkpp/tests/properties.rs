//! Property-based invariants: the parabolic comparison principle, the
//! dichotomy sign identity, drift identities, equilibria, and the
//! H2* ⇒ H2 implication for sampled reaction certificates.

use hkpp::evolve::{
    init_from_datum, run, Grid1D, LeftBc, RightBc, Scheme, SolverConfig,
};
use hkpp::geometry::{drift_gap, drift_h1, SymmetryClass};
use hkpp::reaction::{speeds, validate_kpp, ReactionFn};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CLASSES: [SymmetryClass; 3] = [
    SymmetryClass::Elliptic,
    SymmetryClass::Hyperbolic,
    SymmetryClass::Parabolic,
];

fn cfg_for(class: SymmetryClass) -> SolverConfig {
    SolverConfig {
        dt: 0.01,
        scheme: Scheme::ImexCn,
        left_bc: if class == SymmetryClass::Elliptic {
            LeftBc::Neumann0
        } else {
            LeftBc::Dirichlet0
        },
        right_bc: RightBc::Dirichlet0,
        window: None,
    }
}

/// Smooth random field in [0, cap]: a sum of Gaussian bumps, clamped.
fn random_bumps(rng: &mut ChaCha8Rng, cap: f64) -> impl Fn(f64) -> f64 {
    let bumps: Vec<(f64, f64, f64)> = (0..4)
        .map(|_| {
            (
                rng.gen_range(0.0..1.0),   // height
                rng.gen_range(2.0..18.0),  // center
                rng.gen_range(0.5..3.0),   // width
            )
        })
        .collect();
    move |rho: f64| {
        let s: f64 = bumps
            .iter()
            .map(|&(h, c, w)| h * (-((rho - c) / w).powi(2)).exp())
            .sum();
        s.min(cap).max(0.0)
    }
}

/// Ordered initial data stay ordered under the flow (comparison principle),
/// across classes, dimensions, and 100 seeded random pairs.
#[test]
fn comparison_principle_random_pairs() {
    let f = ReactionFn::logistic(1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for pair in 0..100u64 {
        let class = CLASSES[(pair % 3) as usize];
        let d = 2 + (pair % 4) as u32;
        let grid = Grid1D::new(
            if class == SymmetryClass::Elliptic { 0.0 } else { -5.0 },
            20.0,
            201,
        )
        .unwrap();
        let lower = random_bumps(&mut rng, 0.45);
        let bump = random_bumps(&mut rng, 0.45);
        let upper = |rho: f64| (lower(rho) + bump(rho)).min(1.0);
        let u0 = init_from_datum(class, grid, &lower).unwrap();
        let v0 = init_from_datum(class, grid, &upper).unwrap();
        let cfg = cfg_for(class);
        let u = run(&f, class, d, &u0, &cfg, 0.5, &[0.5]).unwrap();
        let v = run(&f, class, d, &v0, &cfg, 0.5, &[0.5]).unwrap();
        let us = &u.snapshots.last().unwrap().values;
        let vs = &v.snapshots.last().unwrap().values;
        for j in 0..grid.n {
            assert!(
                us[j] <= vs[j] + 1e-8,
                "ordering violated at pair {pair}, node {j}: {} > {}",
                us[j],
                vs[j]
            );
        }
    }
}

/// The equilibria u ≡ 0 and u ≡ 1 are fixed points of the flow for every
/// class and dimension.
#[test]
fn equilibria_are_fixed() {
    let f = ReactionFn::logistic(2.0).unwrap();
    for &class in &CLASSES {
        for d in [2u32, 3, 5] {
            let grid = Grid1D::new(
                if class == SymmetryClass::Elliptic { 0.0 } else { -5.0 },
                15.0,
                161,
            )
            .unwrap();
            for equil in [0.0f64, 1.0] {
                let mut cfg = cfg_for(class);
                // keep the constant state compatible with the boundary rows
                cfg.left_bc = if equil == 1.0 {
                    if class == SymmetryClass::Elliptic {
                        LeftBc::Neumann0
                    } else {
                        LeftBc::Dirichlet1
                    }
                } else {
                    cfg.left_bc
                };
                cfg.right_bc = if equil == 1.0 { RightBc::Neumann0 } else { cfg.right_bc };
                let state = init_from_datum(class, grid, &|_| equil).unwrap();
                let out = run(&f, class, d, &state, &cfg, 1.0, &[1.0]).unwrap();
                for &v in &out.snapshots.last().unwrap().values {
                    assert!(
                        (v - equil).abs() < 1e-12,
                        "equilibrium {equil} drifted to {v} ({class:?}, d={d})"
                    );
                }
            }
        }
    }
}

proptest! {
    /// sign(f′(0) − λ₁) = sign(c₀ − (d−1)): the linear dichotomy threshold
    /// and the spreading-speed sign always agree.
    #[test]
    fn dichotomy_sign_identity(a in 0.01f64..25.0, d in 2u32..9) {
        let f = ReactionFn::logistic(a).unwrap();
        let s = speeds(&f, d).unwrap();
        let lhs = f.fprime0() - s.lambda1;
        let rhs = s.c0 - (d - 1) as f64;
        prop_assert!(
            lhs * rhs > 0.0 || (lhs.abs() < 1e-12 && rhs.abs() < 1e-12),
            "sign mismatch: f'(0)-lambda1 = {lhs}, c0-(d-1) = {rhs}"
        );
        // and c* matches the same gap
        prop_assert!((s.c_star - rhs).abs() < 1e-14);
    }

    /// drift_gap agrees with |h₁(ρ) − 1| wherever the naive difference still
    /// has significant digits, and the gap signs match the class ordering
    /// coth ≥ 1 ≥ tanh.
    #[test]
    fn drift_gap_matches_drift(rho in 0.1f64..30.0) {
        for &class in &CLASSES {
            let h1 = drift_h1(class, rho).unwrap();
            let gap = drift_gap(class, rho).unwrap();
            prop_assert!(
                ((h1 - 1.0).abs() - gap).abs() < 1e-13,
                "{class:?} at rho={rho}: |h1-1|={} vs gap={gap}",
                (h1 - 1.0).abs()
            );
        }
        let he = drift_h1(SymmetryClass::Elliptic, rho).unwrap();
        let hh = drift_h1(SymmetryClass::Hyperbolic, rho).unwrap();
        let hp = drift_h1(SymmetryClass::Parabolic, rho).unwrap();
        prop_assert!(he >= hp && hp >= hh);
    }

    /// H2* (f′ ≤ f′(0)) implies H2 (f ≤ f′(0)u) on every sampled
    /// certificate, over a two-parameter family a·u(1−u)e^{−bu}.
    #[test]
    fn h2star_implies_h2(a in 0.1f64..5.0, b in 0.0f64..5.0) {
        let f = ReactionFn::from_fns(
            Box::new(move |u| a * u * (1.0 - u) * (-b * u).exp()),
            Box::new(move |u| a * (-b * u).exp() * ((1.0 - 2.0 * u) - b * u * (1.0 - u))),
            a,
        )
        .unwrap();
        if let Ok(cert) = validate_kpp(&f, 400) {
            prop_assert!(
                !(cert.satisfies_h2star && !cert.satisfies_h2),
                "H2* held but H2 failed (a={a}, b={b})"
            );
            // the logistic sub-family (b = 0) satisfies both
            if b == 0.0 {
                prop_assert!(cert.satisfies_h2 && cert.satisfies_h2star);
            }
        }
    }
}
