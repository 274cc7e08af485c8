//! Temperley-Lieb algebra on `m` strands and Jones-Wenzl projectors.
//!
//! A basis diagram is a perfect matching of `2m` points: inputs `0..m` along
//! the bottom and outputs `m..2m` along the top, both left to right.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::skein::Matching;
use crate::scalar::{powi, C64};

#[derive(Clone, Debug, PartialEq)]
pub struct TlElement {
    pub strands: usize,
    pub terms: BTreeMap<Matching, C64>,
}

impl TlElement {
    pub fn identity(m: usize) -> Self {
        let mut d = vec![0u8; 2 * m];
        for i in 0..m {
            d[i] = (m + i) as u8;
            d[m + i] = i as u8;
        }
        TlElement { strands: m, terms: [(d, C64::one())].into() }
    }

    /// `e_k` for `1 <= k < m`: a cap and a cup joining strands `k-1` and `k`.
    pub fn generator(m: usize, k: usize) -> Self {
        assert!(k >= 1 && k < m);
        let mut d = Self::identity(m).terms.into_keys().next().expect("identity");
        let (i, j) = (k - 1, k);
        d[i] = j as u8;
        d[j] = i as u8;
        d[m + i] = (m + j) as u8;
        d[m + j] = (m + i) as u8;
        TlElement { strands: m, terms: [(d, C64::one())].into() }
    }

    fn add_term(&mut self, d: Matching, c: C64) {
        let e = self.terms.entry(d.clone()).or_insert_with(C64::zero);
        *e += c;
        if *e == C64::zero() {
            self.terms.remove(&d);
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        TlElement { strands: self.strands, terms: self.terms.iter().map(|(d, c)| (d.clone(), c * s)).collect() }
    }

    pub fn add(&self, other: &TlElement) -> Self {
        let mut out = self.clone();
        for (d, c) in &other.terms {
            out.add_term(d.clone(), *c);
        }
        out
    }

    /// `self ∘ other`: `other` below, `self` on top.
    pub fn compose(&self, other: &TlElement, delta: C64) -> Self {
        let m = self.strands;
        assert_eq!(m, other.strands);
        let mut out = TlElement { strands: m, terms: BTreeMap::new() };
        for (top, x) in &self.terms {
            for (bottom, y) in &other.terms {
                let (d, loops) = stack(bottom, top, m);
                out.add_term(d, x * y * powi(delta, loops as i64));
            }
        }
        out
    }

    /// `x ⊗ 1`: one more strand on the right.
    pub fn extend(&self) -> Self {
        let m = self.strands;
        let mv = |p: u8| -> u8 { if (p as usize) < m { p } else { p + 1 } };
        let mut out = TlElement { strands: m + 1, terms: BTreeMap::new() };
        for (d, c) in &self.terms {
            let mut e = vec![0u8; 2 * m + 2];
            for (p, &q) in d.iter().enumerate() {
                e[mv(p as u8) as usize] = mv(q);
            }
            e[m] = (2 * m + 1) as u8;
            e[2 * m + 1] = m as u8;
            out.add_term(e, *c);
        }
        out
    }

    /// Closing output `i` to input `i` for every `i`.
    pub fn trace(&self, delta: C64) -> C64 {
        let m = self.strands;
        self.terms
            .iter()
            .map(|(d, c)| {
                let mut seen = vec![false; 2 * m];
                let mut loops = 0;
                for s in 0..2 * m {
                    if seen[s] {
                        continue;
                    }
                    loops += 1;
                    let mut p = s;
                    while !seen[p] {
                        seen[p] = true;
                        let q = d[p] as usize;
                        seen[q] = true;
                        p = if q < m { q + m } else { q - m };
                    }
                }
                c * powi(delta, loops)
            })
            .sum()
    }

    pub fn approx_eq(&self, other: &TlElement, tol: f64) -> bool {
        let keys: Vec<&Matching> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter().all(|k| {
            let a = self.terms.get(k).copied().unwrap_or_else(C64::zero);
            let b = other.terms.get(k).copied().unwrap_or_else(C64::zero);
            (a - b).norm() <= tol
        })
    }
}

/// Stacks `top` on `bottom` and counts closed loops in the middle.
fn stack(bottom: &Matching, top: &Matching, m: usize) -> (Matching, usize) {
    // nodes: bottom diagram ports 0..2m, top diagram ports 2m..4m;
    // bottom output m+i is glued to top input i
    let glue = |x: usize| -> Option<usize> {
        if x < 2 * m {
            (x >= m).then(|| 2 * m + (x - m))
        } else {
            (x - 2 * m < m).then(|| m + (x - 2 * m))
        }
    };
    let inner = |x: usize| -> usize { if x < 2 * m { bottom[x] as usize } else { 2 * m + top[x - 2 * m] as usize } };
    let external = |x: usize| -> Option<u8> {
        if x < m {
            Some(x as u8)
        } else if x >= 3 * m {
            Some((x - 2 * m) as u8)
        } else {
            None
        }
    };
    let mut d = vec![0u8; 2 * m];
    let mut seen = vec![false; 4 * m];
    for start in (0..m).chain(3 * m..4 * m) {
        if seen[start] {
            continue;
        }
        let mut x = start;
        seen[x] = true;
        loop {
            let y = inner(x);
            seen[y] = true;
            match glue(y) {
                Some(z) => {
                    seen[z] = true;
                    x = z;
                }
                None => {
                    let (a, b) = (external(start).unwrap(), external(y).unwrap());
                    d[a as usize] = b;
                    d[b as usize] = a;
                    break;
                }
            }
        }
    }
    let mut loops = 0;
    for s in m..3 * m {
        if seen[s] {
            continue;
        }
        loops += 1;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            let y = inner(x);
            seen[y] = true;
            x = glue(y).expect("interior node");
        }
    }
    (d, loops)
}

/// `Δ_n`: `Δ_0 = 1`, `Δ_1 = δ`, `Δ_{n+1} = δΔ_n − Δ_{n−1}`.
pub fn chebyshev(n: usize, delta: C64) -> C64 {
    let (mut a, mut b) = (C64::one(), delta);
    if n == 0 {
        return a;
    }
    for _ in 1..n {
        let c = delta * b - a;
        a = b;
        b = c;
    }
    b
}

/// Jones-Wenzl projector `JW_m` by the Wenzl recursion. `None` when a
/// denominator vanishes.
pub fn jones_wenzl(m: usize, delta: C64) -> Option<TlElement> {
    if m == 0 {
        return Some(TlElement { strands: 0, terms: [(Vec::new(), C64::one())].into() });
    }
    let mut p = TlElement::identity(1);
    for k in 1..m {
        let den = chebyshev(k, delta);
        if den.norm() < 1e-12 {
            return None;
        }
        let coeff = chebyshev(k - 1, delta) / den;
        let ext = p.extend();
        let e = TlElement::generator(k + 1, k);
        let sandwich = ext.compose(&e, delta).compose(&ext, delta);
        p = ext.add(&sandwich.scale(-coeff));
    }
    Some(p)
}
