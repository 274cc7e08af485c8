//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines are always printed; exits nonzero if any line fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_complex::Complex64 as C64;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use kirbycalc::category::{kirby_colour, validate_target_category, EvalOptions, Label, PivotalFunctorData};
use kirbycalc::engine::{
    cp2_value, ground_state_dimension, hopf_diagram, invariant, predict_simply_connected, EngineOptions,
    InvariantRequest, Theory,
};
use kirbycalc::group::{count_flat_connections, hom_invariant, FiniteGroup, GroupHom};
use kirbycalc::kirby::{KirbyDiagram, PlanarCode};
use kirbycalc::library;
use kirbycalc::pointed::{kirby_direct_invariant, PointedCategory};
use kirbycalc::templieb::jw::jones_wenzl;
use kirbycalc::templieb::{bracket_of_planar_code, loop_value, TemperleyLieb};
use kirbycalc::{movesuite, Error};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok { Ok(()) } else { Err(msg()) }
}

fn close(a: C64, b: C64, tol: f64) -> bool {
    (a - b).norm() <= tol * b.norm().max(1.0)
}

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn value(theory: &Theory, d: &KirbyDiagram, opts: EngineOptions) -> Result<C64, String> {
    invariant(&InvariantRequest::new(theory.clone(), d.clone()).with_options(opts))
        .map(|r| r.value)
        .map_err(|e| format!("{}: {e}", d.name()))
}

fn exact(theory: &Theory, d: &KirbyDiagram) -> Result<Ratio<i128>, String> {
    invariant(&InvariantRequest::new(theory.clone(), d.clone()))
        .map_err(|e| format!("{}: {e}", d.name()))?
        .exact
        .ok_or_else(|| format!("{}: no exact value", d.name()))
}

fn lib(name: &str) -> KirbyDiagram {
    library::get(name).expect("library entry").diagram
}

fn identity_on(cat: PointedCategory) -> Theory {
    let c = Arc::new(cat);
    Theory::Functor(Arc::new(PivotalFunctorData::identity(Arc::new(c.category_data()))))
}

fn tl_theory() -> Theory {
    let tl = Arc::new(TemperleyLieb::new(4).expect("r = 4"));
    Theory::Functor(Arc::new(tl.integer_spin_inclusion().expect("integer spins")))
}

fn c1_dijkgraaf_witten() -> Outcome {
    let dw = Theory::DijkgraafWitten(FiniteGroup::s3());
    for (name, want) in [("S1xS3", 6), ("S1xS1xS2", 18), ("S1xS3#S1xS3#S2xS2", 36), ("S4", 1)] {
        let got = exact(&dw, &lib(name))?;
        ensure(got == Ratio::from_integer(want), || format!("{name}: {got} != {want}"))?;
    }
    Ok("S1xS3=6 S1xS1xS2=18 S1xS3#S1xS3#S2xS2=36 S4=1".into())
}

fn c2_hom_reduction() -> Outcome {
    let mut n = 0;
    for phi in [GroupHom::sign_s3(), GroupHom::z4_mod2()] {
        let image = phi.image().map_err(|e| e.to_string())?;
        for e in library::all() {
            let lhs = hom_invariant(&e.diagram, &phi);
            let rhs = Ratio::from_integer(count_flat_connections(&e.diagram, &image) as i128);
            ensure(lhs == rhs, || format!("{} on {}: {lhs} != {rhs}", phi.name, e.name))?;
            n += 1;
        }
    }
    Ok(format!("{n} diagram/hom pairs agree exactly"))
}

fn c3_pointed_z5() -> Outcome {
    let t = identity_on(PointedCategory::anyonic(vec![5]).unwrap());
    let o = EngineOptions::default();
    for (name, want) in [("S4", 1.0), ("S1xS3", 5.0), ("S1xS1xS2", 5.0), ("S2xS2", 0.2)] {
        let got = value(&t, &lib(name), o)?;
        ensure(close(got, re(want), 1e-9), || format!("{name}: {got} != {want}"))?;
    }
    let g = cp2_value(&t).map_err(|e| e.to_string())?;
    ensure((g.norm_sqr() - 0.2).abs() < 1e-9, || format!("|cp2|^2 = {}", g.norm_sqr()))?;
    for name in ["CP2", "CP2bar", "S2xS2", "S4"] {
        let d = lib(name);
        let direct = value(&t, &d, o)?;
        let predicted =
            predict_simply_connected(&t, d.euler_characteristic(), d.signature()).map_err(|e| e.to_string())?;
        ensure(close(direct, predicted, 1e-9), || format!("{name}: direct {direct} vs predicted {predicted}"))?;
    }
    Ok("S4=1 S1xS3=5 S1xS1xS2=5 S2xS2=1/5 |cp2|^2=1/5, prediction matches".into())
}

fn c4_pointed_z4() -> Outcome {
    let o = EngineOptions::default();
    let id = identity_on(PointedCategory::anyonic(vec![4]).unwrap());
    let z4 = Arc::new(PointedCategory::trivial(vec![4]).unwrap());
    let z8 = Arc::new(PointedCategory::cyclic_with_form(8, 16).unwrap());
    let embed = Theory::Functor(Arc::new(PointedCategory::hom_functor("embed", &z4, &z8, &[2]).unwrap()));
    for t in [&id, &embed] {
        let got = value(t, &lib("S2xS2"), o)?;
        ensure(close(got, re(0.5), 1e-9), || format!("S2xS2 under {}: {got}", t.describe()))?;
    }
    let got = value(&embed, &lib("S1xS1xS2"), o)?;
    ensure(close(got, re(8.0), 1e-9), || format!("S1xS1xS2: {got} != 8"))?;
    for n in [2, 6] {
        let cat = Arc::new(PointedCategory::anyonic(vec![n]).unwrap());
        let report = validate_target_category(&cat.category_data());
        ensure(!report.is_valid(), || format!("Z{n} anyonic accepted"))?;
        ensure(report.violations.iter().any(|v| v.contains("transparent")), || {
            format!("Z{n} rejected for the wrong reason: {:?}", report.violations)
        })?;
    }
    Ok("S2xS2=1/2, S1xS1xS2=8 (Z4 in Z8, q=k^2/16), Z2 and Z6 anyonic rejected".into())
}

fn c5_killing() -> Outcome {
    let mut n_checked = 0;
    for n in 3..=8u64 {
        let cat = PointedCategory::anyonic(vec![n]).unwrap();
        for a in 0..n {
            // b(k, a) = 2ka/n, trivial for all k exactly when n | 2a
            let want = if (2 * a) % n == 0 { n as i64 } else { 0 };
            let got = cat.killing_sum_exact(a as usize);
            ensure(got == want, || format!("Z{n}, a={a}: {got} != {want}"))?;
            n_checked += 1;
        }
    }
    Ok(format!("{n_checked} labels of Z3..Z8, deviation 0"))
}

fn c6_moves() -> Outcome {
    let start = Instant::now();
    let o = EngineOptions::default();
    let pointed = movesuite::run(&identity_on(PointedCategory::anyonic(vec![5]).unwrap()), 100, 0, &o)
        .map_err(|e| e.to_string())?;
    let group = movesuite::run(&Theory::DijkgraafWitten(FiniteGroup::s3()), 100, 0, &o).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(pointed.worst() < 1e-9, || format!("pointed deviation {:e}: {:?}", pointed.worst(), pointed.max_deviation))?;
    ensure(group.worst() == 0.0, || format!("group deviation {:e}: {:?}", group.worst(), group.max_deviation))?;
    ensure(elapsed < Duration::from_secs(30), || format!("took {elapsed:?}"))?;
    let checks: usize = pointed.checks.values().sum::<usize>() + group.checks.values().sum::<usize>();
    Ok(format!("{checks} move checks, pointed max {:.1e}, group max 0, {:.1} s", pointed.worst(), elapsed.as_secs_f64()))
}

fn c7_cut_strands() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in [5u64, 7] {
        let target = Arc::new(PointedCategory::anyonic(vec![n]).unwrap());
        let f = PivotalFunctorData::identity(Arc::new(target.category_data()));
        let t = Theory::Functor(Arc::new(f.clone()));
        for e in library::all() {
            let omega = value(&t, &e.diagram, EngineOptions::default())?;
            let direct = kirby_direct_invariant(&target, &f, &e.diagram).map_err(|e| e.to_string())?;
            ensure(close(direct, omega, 1e-9), || format!("Z{n} {}: {direct} vs {omega}", e.name))?;
            worst = worst.max((direct - omega).norm());
        }
    }
    Ok(format!("Z5 and Z7 on all entries, max deviation {worst:.1e}"))
}

fn c8_templieb() -> Outcome {
    let t = tl_theory();
    let o = EngineOptions { skein_cap: 24, tolerance: 1e-6 };
    let start = Instant::now();
    let mut failures = Vec::new();
    for (name, want) in [("S1xS3", 2.0), ("S4", 1.0), ("S1xS1xS2", 4.0)] {
        match invariant(&InvariantRequest::new(t.clone(), lib(name)).with_options(o)) {
            Ok(r) if close(r.value, re(want), 1e-6) => {}
            Ok(r) => failures.push(format!("{name}: {} != {want}", r.value)),
            Err(Error::ResourceLimit { needed, cap }) => {
                failures.push(format!("{name}: ResourceLimit, needs {needed} cabled crossings, cap {cap}"))
            }
            Err(e) => failures.push(format!("{name}: {e}")),
        }
    }
    let tl = TemperleyLieb::new(4).unwrap();
    let target = Arc::new(Arc::new(tl).category_data());
    let ev = target.evaluator().expect("evaluator");
    let killed: C64 = kirby_colour(&target)
        .iter()
        .map(|(y, d)| d * ev.evaluate(&hopf_diagram(), &[Label(1), y], &EvalOptions { skein_cap: 24 }).unwrap())
        .sum();
    if killed.norm() > 1e-6 {
        failures.push(format!("encircled spin 1/2: {killed}"));
    }
    ensure(start.elapsed() < Duration::from_secs(60), || format!("took {:?}", start.elapsed()))?;
    if failures.is_empty() {
        Ok("S1xS3=2 S4=1 S1xS1xS2=4, encircled spin 1/2 = 0".into())
    } else {
        Err(failures.join("; "))
    }
}

/// Closure of a random braid, at most 8 crossings, one name per cycle.
fn random_braid(rng: &mut ChaCha8Rng) -> PlanarCode {
    let strands = rng.gen_range(2..=4usize);
    let len = rng.gen_range(1..=8usize);
    let word: Vec<i32> = (0..len)
        .map(|_| {
            let i = rng.gen_range(1..strands as i32);
            if rng.gen_bool(0.5) { i } else { -i }
        })
        .collect();
    let mut perm: Vec<usize> = (0..strands).collect();
    for &g in &word {
        let i = g.unsigned_abs() as usize - 1;
        perm.swap(i, i + 1);
    }
    // perm[p] = strand ending at position p; the closure joins end p to start p
    let mut names = vec![String::new(); strands];
    let mut k = 0;
    for s in 0..strands {
        if names[s].is_empty() {
            let mut p = s;
            while names[p].is_empty() {
                names[p] = format!("k{k}");
                p = perm.iter().position(|&x| x == p).unwrap();
            }
            k += 1;
        }
    }
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    PlanarCode::from_braid(&refs, &word).expect("braid closure")
}

/// Exhaustive state sum: A-smoothing joins ports (0,1),(2,3), the other (0,3),(1,2).
fn naive_bracket(pd: &PlanarCode, a: C64) -> C64 {
    let delta = loop_value(a);
    let n = pd.crossings.len();
    let arcs: Vec<u32> = pd.arcs.keys().copied().collect();
    let index: BTreeMap<u32, usize> = arcs.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let mut total = C64::new(0.0, 0.0);
    for state in 0..(1u32 << n) {
        let mut parent: Vec<usize> = (0..arcs.len()).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        let mut power = 0i32;
        for (i, c) in pd.crossings.iter().enumerate() {
            let pairs = if state >> i & 1 == 0 {
                power += 1;
                [(0, 1), (2, 3)]
            } else {
                power -= 1;
                [(0, 3), (1, 2)]
            };
            for (p, q) in pairs {
                let (x, y) = (find(&mut parent, index[&c.arcs[p]]), find(&mut parent, index[&c.arcs[q]]));
                parent[x] = y;
            }
        }
        let loops = (0..arcs.len()).filter(|&i| find(&mut parent, i) == i).count() + pd.crossingless.len();
        total += a.powi(power) * delta.powi(loops as i32);
    }
    total
}

fn c9_skein() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let a = C64::from_polar(1.0, 0.7123);
    let mut worst: f64 = 0.0;
    for trial in 0..50 {
        let pd = random_braid(&mut rng);
        let (memo, naive) = (bracket_of_planar_code(&pd, a), naive_bracket(&pd, a));
        ensure(close(memo, naive, 1e-9), || format!("trial {trial}: {memo} vs {naive}"))?;
        worst = worst.max((memo - naive).norm());
    }
    for r in [5usize, 7] {
        let delta = loop_value(C64::from_polar(1.0, std::f64::consts::PI / (2 * r) as f64));
        for m in 1..=r - 2 {
            let p = jones_wenzl(m, delta).ok_or_else(|| format!("JW_{m} missing at r={r}"))?;
            ensure(p.compose(&p, delta).approx_eq(&p, 1e-9), || format!("JW_{m} at r={r} not idempotent"))?;
        }
    }
    Ok(format!("50 braid closures, max deviation {worst:.1e}; JW idempotent at r=5,7"))
}

fn pairs() -> Vec<(&'static str, &'static str)> {
    let names = library::list();
    let mut out = Vec::new();
    for (i, &a) in names.iter().enumerate() {
        for &b in &names[i..] {
            out.push((a, b));
        }
    }
    out
}

fn c10_multiplicativity() -> Outcome {
    let all = pairs();
    let group = Theory::DijkgraafWitten(FiniteGroup::s3());
    for &(a, b) in all.iter().step_by(all.len() / 20).take(20) {
        let (da, db) = (lib(a), lib(b));
        let whole = exact(&group, &da.connected_sum(&db))?;
        ensure(whole == exact(&group, &da)? * exact(&group, &db)?, || format!("group {a} # {b}"))?;
    }
    let pointed = identity_on(PointedCategory::anyonic(vec![5]).unwrap());
    let o = EngineOptions::default();
    for &(a, b) in all.iter().step_by(all.len() / 20).take(20) {
        let (da, db) = (lib(a), lib(b));
        let (w, p) = (value(&pointed, &da.connected_sum(&db), o)?, value(&pointed, &da, o)? * value(&pointed, &db, o)?);
        ensure(close(w, p, 1e-9), || format!("pointed {a} # {b}: {w} vs {p}"))?;
    }
    let tl = tl_theory();
    let with_pd = ["S4", "CP2", "CP2bar", "S2xS2", "S1xS3"];
    let mut n = 0;
    for a in with_pd {
        for b in with_pd {
            if n == 20 {
                break;
            }
            let (da, db) = (lib(a), lib(b));
            let (w, p) = (value(&tl, &da.connected_sum(&db), o)?, value(&tl, &da, o)? * value(&tl, &db, o)?);
            ensure(close(w, p, 1e-9), || format!("templieb {a} # {b}: {w} vs {p}"))?;
            n += 1;
        }
    }
    Ok("20 pairs each for group (exact), pointed Z5 and templieb r=4".into())
}

/// Number of conjugacy classes by brute force from the multiplication table.
fn burnside_classes(g: &FiniteGroup) -> usize {
    let n = g.order();
    let commuting = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).filter(|&(a, b)| g.mul(a, b) == g.mul(b, a)).count();
    commuting / n
}

fn c11_ground_states() -> Outcome {
    let s3 = FiniteGroup::s3();
    let want = burnside_classes(&s3) as f64;
    let d = lib("S1xS1xS2");
    let g = ground_state_dimension(&InvariantRequest::new(Theory::DijkgraafWitten(s3), d.clone()))
        .map_err(|e| e.to_string())?;
    ensure(close(g, re(want), 0.0), || format!("Rep(S3): {g} != {want}"))?;
    let o = EngineOptions { skein_cap: 32, ..Default::default() };
    let t = ground_state_dimension(&InvariantRequest::new(tl_theory(), d).with_options(o)).map_err(|e| e.to_string())?;
    ensure(close(t, re(2.0), 1e-6), || format!("templieb: {t} != 2"))?;
    Ok(format!("Rep(S3) = {want} (Burnside), templieb r=4 = 2 (cap 32)"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("dijkgraaf-witten table", c1_dijkgraaf_witten),
        ("homomorphism reduction", c2_hom_reduction),
        ("pointed Z5", c3_pointed_z5),
        ("pointed Z4", c4_pointed_z4),
        ("killing sums", c5_killing),
        ("move invariance", c6_moves),
        ("cut strands", c7_cut_strands),
        ("templieb r=4 integer spins", c8_templieb),
        ("skein oracle", c9_skein),
        ("multiplicativity", c10_multiplicativity),
        ("ground-state dimensions", c11_ground_states),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.2} s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} [{secs:.2} s]", i + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
