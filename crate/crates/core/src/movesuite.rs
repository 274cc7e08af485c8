//! Seeded randomized handle-move checks of the invariant.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::engine::{cp2_value, cp2bar_value, invariant, EngineOptions, InvariantRequest, Theory};
use crate::kirby::KirbyDiagram;
use crate::scalar::C64;
use crate::Result;

/// Bounds for random diagrams.
#[derive(Clone, Copy, Debug)]
pub struct DiagramShape {
    pub max_one_handles: usize,
    pub max_two_handles: usize,
    pub max_entry: i64,
    pub max_word: usize,
}

impl Default for DiagramShape {
    fn default() -> Self {
        DiagramShape { max_one_handles: 2, max_two_handles: 4, max_entry: 3, max_word: 4 }
    }
}

/// A random diagram on the word and linking layer only.
pub fn random_diagram(rng: &mut ChaCha8Rng, shape: &DiagramShape) -> KirbyDiagram {
    let h1 = rng.gen_range(0..=shape.max_one_handles);
    let h2 = rng.gen_range(0..=shape.max_two_handles);
    let gens: Vec<String> = (0..h1).map(|i| format!("g{i}")).collect();
    let ids: Vec<String> = (0..h2).map(|i| format!("a{i}")).collect();
    let e = shape.max_entry;
    let mut two = Vec::new();
    for id in &ids {
        let len = if h1 == 0 { 0 } else { rng.gen_range(0..=shape.max_word) };
        let word: Vec<(String, i8)> = (0..len)
            .map(|_| (gens.choose(rng).expect("generator").clone(), if rng.gen_bool(0.5) { 1 } else { -1 }))
            .collect();
        two.push((id.clone(), rng.gen_range(-e..=e), word));
    }
    let mut linking = Vec::new();
    for i in 0..h2 {
        for j in i + 1..h2 {
            linking.push((ids[i].clone(), ids[j].clone(), rng.gen_range(-e..=e)));
        }
    }
    let gens_ref: Vec<&str> = gens.iter().map(String::as_str).collect();
    let words: Vec<Vec<(&str, i8)>> =
        two.iter().map(|(_, _, w)| w.iter().map(|(g, s)| (g.as_str(), *s)).collect()).collect();
    let two_ref: Vec<(&str, i64, &[(&str, i8)])> =
        two.iter().zip(&words).map(|((id, f, _), w)| (id.as_str(), *f, w.as_slice())).collect();
    let link_ref: Vec<(&str, &str, i64)> = linking.iter().map(|(a, b, v)| (a.as_str(), b.as_str(), *v)).collect();
    KirbyDiagram::build("random", &gens_ref, &two_ref, &link_ref, None).expect("random diagram is valid")
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct MoveReport {
    pub trials: usize,
    pub checks: BTreeMap<String, usize>,
    pub max_deviation: BTreeMap<String, f64>,
}

impl MoveReport {
    fn record(&mut self, mv: &str, a: C64, b: C64) {
        *self.checks.entry(mv.to_string()).or_default() += 1;
        let d = (a - b).norm();
        let e = self.max_deviation.entry(mv.to_string()).or_insert(0.0);
        if d > *e {
            *e = d;
        }
    }

    pub fn worst(&self) -> f64 {
        self.max_deviation.values().fold(0.0, |a, &b| a.max(b))
    }
}

fn value(theory: &Theory, d: &KirbyDiagram, opts: &EngineOptions) -> Result<C64> {
    Ok(invariant(&InvariantRequest::new(theory.clone(), d.clone()).with_options(*opts))?.value)
}

/// Compares the invariant before and after each move on `trials` random diagrams.
pub fn run(theory: &Theory, trials: usize, seed: u64, opts: &EngineOptions) -> Result<MoveReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shape = DiagramShape::default();
    let mut report = MoveReport { trials, ..Default::default() };
    let (ip, im) = (cp2_value(theory)?, cp2bar_value(theory)?);
    for _ in 0..trials {
        let d = random_diagram(&mut rng, &shape);
        let base = value(theory, &d, opts)?;
        let ids: Vec<String> = d.two_handles().iter().map(|t| t.id.clone()).collect();
        if ids.len() >= 2 {
            let pick: Vec<&String> = ids.choose_multiple(&mut rng, 2).collect();
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            let slid = d.slide_22(pick[0], pick[1], sign)?;
            report.record("slide_22", base, value(theory, &slid, opts)?);
        }
        // a cancelling 1/2 pair, possibly with a nonzero framing
        let f = rng.gen_range(-3..=3);
        let s = if rng.gen_bool(0.5) { 1 } else { -1 };
        let pair = KirbyDiagram::build("pair", &["x"], &[("y", f, &[("x", s)])], &[], None)?;
        let with_pair = d.connected_sum(&pair);
        let x = with_pair.one_handles().last().expect("pair 1-handle").id.clone();
        let y = with_pair.two_handles().last().expect("pair 2-handle").id.clone();
        report.record("cancel_12", value(theory, &with_pair, opts)?, value(theory, &with_pair.cancel_12(&x, &y)?, opts)?);
        let zero = KirbyDiagram::build("zero", &[], &[("z", 0, &[])], &[], None)?;
        let with_zero = d.connected_sum(&zero);
        let z = with_zero.two_handles().last().expect("unknot").id.clone();
        report.record("cancel_23", value(theory, &with_zero, opts)?, value(theory, &with_zero.cancel_23(&z)?, opts)?);
        report.record("blow_up(+1)", value(theory, &d.blow_up(1), opts)?, base * ip);
        report.record("blow_up(-1)", value(theory, &d.blow_up(-1), opts)?, base * im);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_diagrams_respect_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let d = random_diagram(&mut rng, &DiagramShape::default());
            assert!(d.h1() <= 2 && d.h2() <= 4);
            assert!(d.linking_matrix().iter().flatten().all(|x| x.abs() <= 3));
            assert!(d.two_handles().iter().all(|t| t.word.len() <= 4));
        }
    }

    #[test]
    fn same_seed_same_diagrams() {
        let a: Vec<_> = {
            let mut r = ChaCha8Rng::seed_from_u64(3);
            (0..5).map(|_| random_diagram(&mut r, &DiagramShape::default())).collect()
        };
        let mut r = ChaCha8Rng::seed_from_u64(3);
        for d in a {
            assert_eq!(d, random_diagram(&mut r, &DiagramShape::default()));
        }
    }
}
