use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64 as C64;

use kirbycalc::category::{kirby_colour, EvalOptions, Label};
use kirbycalc::engine::{hopf_diagram, invariant, EngineOptions, InvariantRequest, Theory};
use kirbycalc::group::{count_flat_connections, FiniteGroup};
use kirbycalc::kirby::{GroupPresentation, PlanarCode};
use kirbycalc::library;
use kirbycalc::templieb::jw::jones_wenzl;
use kirbycalc::templieb::{loop_value, TemperleyLieb};
use kirbycalc::Error;

/// `#Hom(Z × π, G) = Σ_{ρ: π → G} |C_G(ρ)|`, by brute force over generator images.
fn burnside(p: &GroupPresentation, g: &FiniteGroup) -> u128 {
    let n = g.order();
    let k = p.generators.len();
    let index: BTreeMap<&str, usize> = p.generators.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let mut total = 0u128;
    for code in 0..n.pow(k as u32) {
        let vals: Vec<usize> = (0..k).map(|i| code / n.pow(i as u32) % n).collect();
        let ok = p.relators.iter().all(|r| {
            r.iter().fold(0, |acc, l| {
                let v = vals[index[l.generator.as_str()]];
                g.mul(acc, if l.sign > 0 { v } else { g.inv(v) })
            }) == 0
        });
        if ok {
            total += (0..n).filter(|&c| vals.iter().all(|&v| g.mul(c, v) == g.mul(v, c))).count() as u128;
        }
    }
    total
}

#[test]
fn products_with_a_circle_match_burnside() {
    let groups = [FiniteGroup::s3(), FiniteGroup::d4(), FiniteGroup::q8(), FiniteGroup::cyclic(4)];
    let mut seen = 0;
    for e in library::all() {
        let Some(p) = &e.product_of_s1 else { continue };
        for g in &groups {
            assert_eq!(count_flat_connections(&e.diagram, g), burnside(p, g), "{} with {}", e.name, g.name());
        }
        seen += 1;
    }
    assert!(seen >= 2);
}

#[test]
fn stored_characteristics_are_recomputed() {
    let table = library::table();
    for e in library::all() {
        let d = &e.diagram;
        assert_eq!((d.euler_characteristic(), d.signature()), table[e.name], "{}", e.name);
        assert_eq!(d.euler_characteristic(), 2 - d.h1() as i64 + d.h2() as i64 - d.h3() as i64);
    }
}

#[test]
fn s1xs1xs2_at_a_larger_cap() {
    let tl = Arc::new(TemperleyLieb::new(4).unwrap());
    let t = Theory::Functor(Arc::new(tl.integer_spin_inclusion().unwrap()));
    let d = library::get("S1xS1xS2").unwrap().diagram;
    let low = invariant(&InvariantRequest::new(t.clone(), d.clone()));
    assert!(matches!(low, Err(Error::ResourceLimit { needed: 32, cap: 24 })));
    let opts = EngineOptions { skein_cap: 32, ..Default::default() };
    let v = invariant(&InvariantRequest::new(t, d).with_options(opts)).unwrap().value;
    assert!((v - C64::new(4.0, 0.0)).norm() < 1e-6, "{v}");
}

fn quantum_integer(n: usize, r: usize) -> f64 {
    (n as f64 * PI / r as f64).sin() / (PI / r as f64).sin()
}

#[test]
fn projector_closures_are_quantum_integers() {
    for r in [4usize, 5, 7] {
        let delta = loop_value(C64::from_polar(1.0, PI / (2 * r) as f64));
        for m in 1..=r - 2 {
            let p = jones_wenzl(m, delta).unwrap();
            let want = if m % 2 == 0 { 1.0 } else { -1.0 } * quantum_integer(m + 1, r);
            assert!((p.trace(delta) - C64::new(want, 0.0)).norm() < 1e-9, "r={r} m={m}");
            assert!(p.compose(&p, delta).approx_eq(&p, 1e-9));
        }
    }
}

#[test]
fn kirby_colour_kills_what_it_should() {
    // Σ_Y d_Y ⟨Hopf(X, Y)⟩ is dimΩ·d_X for transparent X and 0 otherwise
    let tl = Arc::new(TemperleyLieb::new(4).unwrap());
    let cat = tl.category_data();
    let ev = cat.evaluator().unwrap();
    let omega = kirby_colour(&cat);
    let dim: C64 = omega.iter().map(|(y, d)| d * cat.dim(y)).sum();
    for x in cat.labels() {
        let encircled: C64 = omega
            .iter()
            .map(|(y, d)| d * ev.evaluate(&hopf_diagram(), &[x, y], &EvalOptions::default()).unwrap())
            .sum();
        let want = if x == Label(0) { dim } else { C64::new(0.0, 0.0) };
        assert!((encircled - want).norm() < 1e-9, "spin {x:?}: {encircled}");
    }
}

#[test]
fn bracket_of_a_trefoil() {
    // ⟨right trefoil⟩ = −A⁵ − A⁻³ + A⁻⁷ times δ, up to the writhe convention
    let pd = PlanarCode::from_braid(&["k", "k"], &[1, 1, 1]).unwrap();
    let a = C64::from_polar(1.0, 0.31);
    let b = kirbycalc::templieb::bracket_of_planar_code(&pd, a);
    let (p, m) = (a.powi(-5) * -1.0 - a.powi(3) + a.powi(7), a.powi(5) * -1.0 - a.powi(-3) + a.powi(-7));
    let delta = loop_value(a);
    assert!((b - p * delta).norm() < 1e-9 || (b - m * delta).norm() < 1e-9, "{b}");
}
