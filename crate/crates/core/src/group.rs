//! Finite groups as multiplication tables, and the Dijkgraaf-Witten count
//! of flat connections (homomorphisms from the fundamental group).

use std::collections::BTreeSet;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::kirby::{GroupPresentation, KirbyDiagram};
use crate::{Error, Result};

/// Element `0` is the identity; `table[a][b] = a·b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupDoc {
    order: usize,
    table: Vec<Vec<usize>>,
}

impl FiniteGroup {
    pub fn from_table(name: impl Into<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let name = name.into();
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        for (a, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidGroup(format!("row {a} has length {}", row.len())));
            }
            if let Some(&x) = row.iter().find(|&&x| x >= n) {
                return Err(Error::InvalidGroup(format!("entry {x} out of range")));
            }
        }
        for a in 0..n {
            if table[0][a] != a || table[a][0] != a {
                return Err(Error::InvalidGroup("element 0 is not the identity".into()));
            }
        }
        let mut inverse = vec![0; n];
        for a in 0..n {
            match (0..n).find(|&b| table[a][b] == 0) {
                Some(b) if table[b][a] == 0 => inverse[a] = b,
                _ => return Err(Error::InvalidGroup(format!("element {a} has no two-sided inverse"))),
            }
        }
        let assoc = |a: usize, b: usize, c: usize| table[table[a][b]][c] == table[a][table[b][c]];
        if n <= 128 {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if !assoc(a, b, c) {
                            return Err(Error::InvalidGroup(format!("not associative at ({a}, {b}, {c})")));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            for _ in 0..10_000 {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if !assoc(a, b, c) {
                    return Err(Error::InvalidGroup(format!("not associative at ({a}, {b}, {c})")));
                }
            }
        }
        Ok(FiniteGroup { name, table, inverse })
    }

    pub fn from_json(name: &str, text: &str) -> Result<Self> {
        let doc: GroupDoc = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        if doc.order != doc.table.len() {
            return Err(Error::InvalidGroup(format!("order {} but {} rows", doc.order, doc.table.len())));
        }
        Self::from_table(name, doc.table)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&GroupDoc { order: self.order(), table: self.table.clone() }).expect("serializable")
    }

    /// Group of permutations given as images of `0..k`, closed under composition.
    fn from_permutations(name: &str, generators: &[Vec<usize>]) -> Self {
        let k = generators[0].len();
        let id: Vec<usize> = (0..k).collect();
        let mut elems = vec![id];
        let mut i = 0;
        while i < elems.len() {
            for g in generators {
                let p: Vec<usize> = (0..k).map(|x| g[elems[i][x]]).collect();
                if !elems.contains(&p) {
                    elems.push(p);
                }
            }
            i += 1;
        }
        let table = elems
            .iter()
            .map(|a| {
                elems
                    .iter()
                    .map(|b| {
                        // (a·b)(x) = a(b(x))
                        let p: Vec<usize> = (0..k).map(|x| a[b[x]]).collect();
                        elems.iter().position(|e| *e == p).expect("closed")
                    })
                    .collect()
            })
            .collect();
        Self::from_table(name, table).expect("permutation group")
    }

    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(format!("Z{n}"), table).expect("cyclic group")
    }

    pub fn s3() -> Self {
        Self::from_permutations("S3", &[vec![1, 0, 2], vec![1, 2, 0]])
    }

    /// Symmetries of the square.
    pub fn d4() -> Self {
        Self::from_permutations("D4", &[vec![1, 2, 3, 0], vec![3, 2, 1, 0]])
    }

    /// Quaternions, as permutations of `{±1, ±i, ±j, ±k}` by left multiplication.
    pub fn q8() -> Self {
        // order: 1, i, j, k, -1, -i, -j, -k
        let li = vec![1, 4, 3, 6, 5, 0, 7, 2];
        let lj = vec![2, 7, 4, 1, 6, 3, 0, 5];
        Self::from_permutations("Q8", &[li, lj])
    }

    pub fn builtin(name: &str) -> Result<Self> {
        let lower = name.to_ascii_lowercase();
        match lower.as_str() {
            "s3" => Ok(Self::s3()),
            "d4" => Ok(Self::d4()),
            "q8" => Ok(Self::q8()),
            _ => match lower.strip_prefix('z').and_then(|n| n.parse::<usize>().ok()) {
                Some(n) if n >= 1 => Ok(Self::cyclic(n)),
                _ => Err(Error::InvalidGroup(format!("unknown built-in group '{name}'"))),
            },
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn conjugacy_classes(&self) -> Vec<BTreeSet<usize>> {
        let n = self.order();
        let mut seen = vec![false; n];
        let mut classes = Vec::new();
        for a in 0..n {
            if seen[a] {
                continue;
            }
            let class: BTreeSet<usize> = (0..n).map(|g| self.mul(self.mul(g, a), self.inv(g))).collect();
            for &x in &class {
                seen[x] = true;
            }
            classes.push(class);
        }
        classes
    }

    /// The subgroup on `elements` (which must contain 0 and be closed),
    /// reindexed in increasing order.
    pub fn subgroup(&self, elements: &BTreeSet<usize>) -> Result<FiniteGroup> {
        let list: Vec<usize> = elements.iter().copied().collect();
        let pos = |x: usize| list.iter().position(|&y| y == x);
        let mut table = Vec::new();
        for &a in &list {
            let mut row = Vec::new();
            for &b in &list {
                row.push(pos(self.mul(a, b)).ok_or_else(|| Error::InvalidGroup("subset is not closed".into()))?);
            }
            table.push(row);
        }
        FiniteGroup::from_table(format!("{}<{}>", self.name, list.len()), table)
    }

    /// Value of a word under an assignment of generators.
    pub fn evaluate_word(&self, word: &[(usize, i8)], values: &[usize]) -> usize {
        word.iter().fold(0, |acc, &(g, s)| {
            let v = if s > 0 { values[g] } else { self.inv(values[g]) };
            self.mul(acc, v)
        })
    }
}

/// A homomorphism `φ: P -> G` given elementwise.
#[derive(Clone, Debug)]
pub struct GroupHom {
    pub name: String,
    pub source: FiniteGroup,
    pub target: FiniteGroup,
    pub map: Vec<usize>,
}

impl GroupHom {
    pub fn new(name: impl Into<String>, source: FiniteGroup, target: FiniteGroup, map: Vec<usize>) -> Result<Self> {
        let name = name.into();
        if map.len() != source.order() || map.iter().any(|&x| x >= target.order()) {
            return Err(Error::InvalidHom(format!("{name}: map has the wrong shape")));
        }
        if map[0] != 0 {
            return Err(Error::InvalidHom(format!("{name}: identity not preserved")));
        }
        for a in 0..source.order() {
            for b in 0..source.order() {
                if map[source.mul(a, b)] != target.mul(map[a], map[b]) {
                    return Err(Error::InvalidHom(format!("{name}: not multiplicative at ({a}, {b})")));
                }
            }
        }
        Ok(GroupHom { name, source, target, map })
    }

    pub fn identity(g: FiniteGroup) -> Self {
        let map = (0..g.order()).collect();
        GroupHom { name: "id".into(), source: g.clone(), target: g, map }
    }

    /// Sign of a permutation, `S3 -> Z2`.
    pub fn sign_s3() -> Self {
        let s3 = FiniteGroup::s3();
        let z2 = FiniteGroup::cyclic(2);
        // elements of order 2 are the transpositions
        let map = (0..6).map(|a| if a != 0 && s3.mul(a, a) == 0 { 1 } else { 0 }).collect();
        GroupHom::new("sign", s3, z2, map).expect("sign homomorphism")
    }

    /// Reduction mod 2, `Z4 -> Z2`.
    pub fn z4_mod2() -> Self {
        GroupHom::new("mod2", FiniteGroup::cyclic(4), FiniteGroup::cyclic(2), vec![0, 1, 0, 1]).expect("mod 2")
    }

    pub fn kernel_order(&self) -> usize {
        self.map.iter().filter(|&&x| x == 0).count()
    }

    pub fn image(&self) -> Result<FiniteGroup> {
        self.target.subgroup(&self.map.iter().copied().collect())
    }
}

/// Counts assignments of source elements to generators such that every
/// relator maps to the identity of `target` under `phi`. Backtracks over
/// generators in order, checking each relator as soon as its generators are set.
fn count_assignments(p: &GroupPresentation, source: &FiniteGroup, target: &FiniteGroup, phi: &[usize]) -> u128 {
    let rels = p.indexed_relators();
    let h1 = p.generators.len();
    // relators to check once generator i is assigned
    let mut ready: Vec<Vec<usize>> = vec![Vec::new(); h1.max(1)];
    for (k, r) in rels.iter().enumerate() {
        // an empty relator is always satisfied
        if let Some(g) = r.iter().map(|&(g, _)| g).max() {
            ready[g].push(k);
        }
    }
    if h1 == 0 {
        return 1;
    }
    let check = |vals: &[usize], i: usize| -> bool {
        ready[i].iter().all(|&k| {
            let w = rels[k].iter().fold(0, |acc, &(g, s)| {
                let v = phi[vals[g]];
                target.mul(acc, if s > 0 { v } else { target.inv(v) })
            });
            w == 0
        })
    };
    fn go(vals: &mut Vec<usize>, i: usize, h1: usize, n: usize, check: &dyn Fn(&[usize], usize) -> bool) -> u128 {
        if i == h1 {
            return 1;
        }
        let mut total = 0;
        for x in 0..n {
            vals[i] = x;
            if check(vals, i) {
                total += go(vals, i + 1, h1, n, check);
            }
        }
        total
    }
    let n = source.order();
    (0..n)
        .into_par_iter()
        .map(|x| {
            let mut vals = vec![0; h1];
            vals[0] = x;
            if check(&vals, 0) { go(&mut vals, 1, h1, n, &check) } else { 0 }
        })
        .collect::<Vec<u128>>()
        .into_iter()
        .sum()
}

/// `|Hom(π₁, G)|` for the presentation read off the diagram.
pub fn count_flat_connections(diagram: &KirbyDiagram, g: &FiniteGroup) -> u128 {
    count_homs(&diagram.fundamental_group(), g)
}

pub fn count_homs(p: &GroupPresentation, g: &FiniteGroup) -> u128 {
    let id: Vec<usize> = (0..g.order()).collect();
    count_assignments(p, g, g, &id)
}

/// `|Ker φ|^{−h1} · #{p ∈ P^{h1} : φ(r_k(p)) = 1 for all k}`.
pub fn hom_invariant(diagram: &KirbyDiagram, phi: &GroupHom) -> Ratio<i128> {
    let p = diagram.fundamental_group();
    let count = count_assignments(&p, &phi.source, &phi.target, &phi.map);
    let ker = (phi.kernel_order() as i128).pow(p.generators.len() as u32);
    Ratio::new(count as i128, ker)
}

/// Count divided by `|G|`.
pub fn normalized_partition_function(diagram: &KirbyDiagram, g: &FiniteGroup) -> Ratio<i128> {
    Ratio::new(count_flat_connections(diagram, g) as i128, g.order() as i128)
}
