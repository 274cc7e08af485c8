//! Planar diagram codes for framed links.
//!
//! A crossing `X[a, b, c, d]` lists its four arcs counterclockwise starting
//! at the incoming under-strand, so the under-strand runs `a -> c`. The
//! over-strand runs `d -> b` at a positive crossing and `b -> d` at a
//! negative one. With both strands pointing up, a positive crossing has its
//! over-strand going from lower left to upper right.

use std::collections::{BTreeMap, BTreeSet};

use crate::{Error, Result};

pub type Arc = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Crossing {
    pub arcs: [Arc; 4],
    pub sign: i8,
}

impl Crossing {
    pub fn new(arcs: [Arc; 4], sign: i8) -> Self {
        Crossing { arcs, sign }
    }

    /// Ports where an arc arrives at this crossing.
    pub fn head_ports(&self) -> [usize; 2] {
        if self.sign > 0 { [0, 3] } else { [0, 1] }
    }

    /// Ports where an arc leaves this crossing.
    pub fn tail_ports(&self) -> [usize; 2] {
        if self.sign > 0 { [2, 1] } else { [2, 3] }
    }

    /// The outgoing port paired with an incoming one.
    pub fn through(&self, port: usize) -> usize {
        match (port, self.sign > 0) {
            (0, _) => 2,
            (3, true) => 1,
            (1, false) => 3,
            _ => unreachable!("port {port} is not incoming"),
        }
    }

    pub fn under(&self) -> Arc {
        self.arcs[0]
    }

    /// Incoming arc of the over-strand.
    pub fn over_in(&self) -> Arc {
        if self.sign > 0 { self.arcs[3] } else { self.arcs[1] }
    }
}

/// A planar diagram of a link whose components are named by handle ids.
#[derive(Clone, Debug, PartialEq)]
pub struct PlanarCode {
    pub crossings: Vec<Crossing>,
    pub arcs: BTreeMap<Arc, String>,
    pub crossingless: Vec<String>,
}

/// `(crossing, port)`.
pub type Dart = (usize, usize);

impl PlanarCode {
    pub fn empty() -> Self {
        PlanarCode { crossings: Vec::new(), arcs: BTreeMap::new(), crossingless: Vec::new() }
    }

    /// All component names, crossingless ones included.
    pub fn components(&self) -> BTreeSet<String> {
        self.arcs.values().cloned().chain(self.crossingless.iter().cloned()).collect()
    }

    pub fn max_arc(&self) -> Arc {
        self.arcs.keys().copied().max().unwrap_or(0)
    }

    /// Both occurrences of every arc.
    pub fn arc_ends(&self) -> BTreeMap<Arc, Vec<Dart>> {
        let mut ends: BTreeMap<Arc, Vec<Dart>> = BTreeMap::new();
        for (x, c) in self.crossings.iter().enumerate() {
            for (p, &a) in c.arcs.iter().enumerate() {
                ends.entry(a).or_default().push((x, p));
            }
        }
        ends
    }

    fn component_of(&self, a: Arc) -> Result<&str> {
        self.arcs
            .get(&a)
            .map(String::as_str)
            .ok_or_else(|| Error::Schema(format!("arc {a} has no component")))
    }

    /// Structural checks: arcs occur twice, orientations are coherent, each
    /// component is a single cycle of arcs and the diagram is planar.
    pub fn validate(&self) -> Result<()> {
        let ends = self.arc_ends();
        for (a, e) in &ends {
            if e.len() != 2 {
                return Err(Error::Schema(format!("arc {a} occurs {} times", e.len())));
            }
            self.component_of(*a)?;
        }
        for a in self.arcs.keys() {
            if !ends.contains_key(a) {
                return Err(Error::Schema(format!("arc {a} is declared but used by no crossing")));
            }
        }
        for c in &self.crossings {
            if c.sign != 1 && c.sign != -1 {
                return Err(Error::Schema(format!("crossing sign {} is not ±1", c.sign)));
            }
        }
        for name in &self.crossingless {
            if self.arcs.values().any(|v| v == name) {
                return Err(Error::Schema(format!("component {name} is both crossingless and has arcs")));
            }
        }
        let uniq: BTreeSet<&String> = self.crossingless.iter().collect();
        if uniq.len() != self.crossingless.len() {
            return Err(Error::Schema("duplicate crossingless component".into()));
        }
        // orientation: each arc has one head and one tail
        let mut heads: BTreeMap<Arc, usize> = BTreeMap::new();
        let mut tails: BTreeMap<Arc, usize> = BTreeMap::new();
        for c in &self.crossings {
            for p in c.head_ports() {
                *heads.entry(c.arcs[p]).or_default() += 1;
            }
            for p in c.tail_ports() {
                *tails.entry(c.arcs[p]).or_default() += 1;
            }
        }
        for a in ends.keys() {
            if heads.get(a) != Some(&1) || tails.get(a) != Some(&1) {
                return Err(Error::Schema(format!("arc {a} is not coherently oriented")));
            }
        }
        // strands keep their component through crossings, and components are single cycles
        let succ = self.successors();
        for (&a, &b) in &succ {
            if self.component_of(a)? != self.component_of(b)? {
                return Err(Error::Schema(format!("arcs {a} and {b} continue each other but lie on different components")));
            }
        }
        let mut seen: BTreeSet<Arc> = BTreeSet::new();
        let mut cycles: BTreeMap<&str, usize> = BTreeMap::new();
        for &start in ends.keys() {
            if seen.contains(&start) {
                continue;
            }
            *cycles.entry(self.component_of(start)?).or_default() += 1;
            let mut a = start;
            while seen.insert(a) {
                a = succ[&a];
            }
        }
        if let Some((name, _)) = cycles.iter().find(|(_, &n)| n > 1) {
            return Err(Error::Schema(format!("component {name} is not a single closed curve")));
        }
        self.check_planar()
    }

    /// Next arc along the orientation, for every arc that ends at a crossing.
    pub fn successors(&self) -> BTreeMap<Arc, Arc> {
        let mut succ = BTreeMap::new();
        for c in &self.crossings {
            for p in c.head_ports() {
                succ.insert(c.arcs[p], c.arcs[c.through(p)]);
            }
        }
        succ
    }

    fn check_planar(&self) -> Result<()> {
        let n = self.crossings.len();
        if n == 0 {
            return Ok(());
        }
        let ends = self.arc_ends();
        let other = |x: usize, p: usize| -> Dart {
            let e = &ends[&self.crossings[x].arcs[p]];
            if e[0] == (x, p) { e[1] } else { e[0] }
        };
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], i: usize) -> usize {
            let mut r = i;
            while parent[r] != r {
                r = parent[r];
            }
            parent[i] = r;
            r
        }
        for e in ends.values() {
            let (a, b) = (find(&mut parent, e[0].0), find(&mut parent, e[1].0));
            parent[a] = b;
        }
        let pieces = (0..n).filter(|&i| find(&mut parent, i) == i).count();
        let mut visited = vec![[false; 4]; n];
        let mut faces = 0;
        for x in 0..n {
            for p in 0..4 {
                if visited[x][p] {
                    continue;
                }
                faces += 1;
                let (mut y, mut q) = (x, p);
                while !visited[y][q] {
                    visited[y][q] = true;
                    let (z, r) = other(y, q);
                    y = z;
                    q = (r + 1) % 4;
                }
            }
        }
        if faces != n + 2 * pieces {
            return Err(Error::Schema(format!(
                "diagram is not planar ({faces} faces for {n} crossings in {pieces} pieces)"
            )));
        }
        Ok(())
    }

    /// Signed self-crossings per component.
    pub fn writhe(&self, component: &str) -> i64 {
        self.crossings
            .iter()
            .filter(|c| self.arcs[&c.under()] == component && self.arcs[&c.over_in()] == component)
            .map(|c| c.sign as i64)
            .sum()
    }

    /// Linking number of two distinct components: half the signed count of
    /// crossings between them.
    pub fn linking(&self, x: &str, y: &str) -> i64 {
        let twice: i64 = self
            .crossings
            .iter()
            .filter(|c| {
                let (u, o) = (&self.arcs[&c.under()], &self.arcs[&c.over_in()]);
                (u == x && o == y) || (u == y && o == x)
            })
            .map(|c| c.sign as i64)
            .sum();
        twice / 2
    }

    /// Crossings on which `component` appears as under or over strand.
    pub fn crossings_of(&self, component: &str) -> usize {
        self.crossings
            .iter()
            .filter(|c| self.arcs[&c.under()] == component || self.arcs[&c.over_in()] == component)
            .count()
    }

    /// Deletes components. Kept strands passing through a deleted crossing are
    /// joined; kept components left without crossings become crossingless.
    pub fn remove_components(&self, drop: &BTreeSet<String>) -> PlanarCode {
        let mut parent: BTreeMap<Arc, Arc> = self.arcs.keys().map(|&a| (a, a)).collect();
        fn find(parent: &mut BTreeMap<Arc, Arc>, a: Arc) -> Arc {
            let mut r = a;
            while parent[&r] != r {
                r = parent[&r];
            }
            parent.insert(a, r);
            r
        }
        let mut kept = Vec::new();
        for c in &self.crossings {
            let under_drop = drop.contains(&self.arcs[&c.under()]);
            let over_drop = drop.contains(&self.arcs[&c.over_in()]);
            match (under_drop, over_drop) {
                (false, false) => kept.push(*c),
                (true, true) => {}
                (true, false) => {
                    let (i, o) = if c.sign > 0 { (c.arcs[3], c.arcs[1]) } else { (c.arcs[1], c.arcs[3]) };
                    let (ri, ro) = (find(&mut parent, i), find(&mut parent, o));
                    parent.insert(ri, ro);
                }
                (false, true) => {
                    let (ri, ro) = (find(&mut parent, c.arcs[0]), find(&mut parent, c.arcs[2]));
                    parent.insert(ri, ro);
                }
            }
        }
        let crossings: Vec<Crossing> = kept
            .iter()
            .map(|c| Crossing::new(c.arcs.map(|a| find(&mut parent, a)), c.sign))
            .collect();
        let used: BTreeSet<Arc> = crossings.iter().flat_map(|c| c.arcs).collect();
        let arcs: BTreeMap<Arc, String> =
            used.iter().map(|a| (*a, self.arcs[a].clone())).collect();
        let with_arcs: BTreeSet<&String> = arcs.values().collect();
        let mut crossingless: Vec<String> =
            self.crossingless.iter().filter(|n| !drop.contains(*n)).cloned().collect();
        for name in self.arcs.values().collect::<BTreeSet<_>>() {
            if !drop.contains(name) && !with_arcs.contains(name) {
                crossingless.push(name.clone());
            }
        }
        PlanarCode { crossings, arcs, crossingless }.renumbered()
    }

    /// Arc ids renumbered as `1..=n` in order of first appearance.
    pub fn renumbered(&self) -> PlanarCode {
        let mut map: BTreeMap<Arc, Arc> = BTreeMap::new();
        for c in &self.crossings {
            for a in c.arcs {
                let next = map.len() as Arc + 1;
                map.entry(a).or_insert(next);
            }
        }
        PlanarCode {
            crossings: self.crossings.iter().map(|c| Crossing::new(c.arcs.map(|a| map[&a]), c.sign)).collect(),
            arcs: self.arcs.iter().map(|(a, n)| (map[a], n.clone())).collect(),
            crossingless: self.crossingless.clone(),
        }
    }

    /// Adds `offset` to every arc id.
    pub fn shifted(&self, offset: Arc) -> PlanarCode {
        PlanarCode {
            crossings: self.crossings.iter().map(|c| Crossing::new(c.arcs.map(|a| a + offset), c.sign)).collect(),
            arcs: self.arcs.iter().map(|(a, n)| (a + offset, n.clone())).collect(),
            crossingless: self.crossingless.clone(),
        }
    }

    pub fn renamed(&self, rename: &BTreeMap<String, String>) -> PlanarCode {
        let r = |n: &String| rename.get(n).cloned().unwrap_or_else(|| n.clone());
        PlanarCode {
            crossings: self.crossings.clone(),
            arcs: self.arcs.iter().map(|(a, n)| (*a, r(n))).collect(),
            crossingless: self.crossingless.iter().map(r).collect(),
        }
    }

    pub fn disjoint_union(&self, other: &PlanarCode) -> PlanarCode {
        let o = other.shifted(self.max_arc());
        let mut out = self.clone();
        out.crossings.extend(o.crossings);
        out.arcs.extend(o.arcs);
        out.crossingless.extend(o.crossingless);
        out
    }

    /// A single component drawn with `|framing|` kinks of the framing's sign.
    pub fn kinked_unknot(name: &str, framing: i64) -> PlanarCode {
        let n = framing.unsigned_abs() as Arc;
        if n == 0 {
            return PlanarCode { crossings: vec![], arcs: BTreeMap::new(), crossingless: vec![name.to_string()] };
        }
        let mut crossings = Vec::new();
        for k in 0..n {
            // arcs 2k+1 (loop) and 2k+2 (exit); exit of the last kink feeds the first
            let lp = 2 * k + 1;
            let prev = if k == 0 { 2 * n } else { 2 * k };
            let arcs = if framing > 0 { [lp, lp, lp + 1, prev] } else { [lp, prev, lp + 1, lp] };
            crossings.push(Crossing::new(arcs, if framing > 0 { 1 } else { -1 }));
        }
        let arcs = (1..=2 * n).map(|a| (a, name.to_string())).collect();
        PlanarCode { crossings, arcs, crossingless: vec![] }
    }

    /// Closure of a braid on `names.len()` upward strands. Letter `±i`
    /// (1-based) is the generator `σ_i^{±1}`; `names[p]` names the component
    /// through bottom position `p`, and must be constant on each cycle of the
    /// braid permutation.
    pub fn from_braid(names: &[&str], word: &[i32]) -> Result<PlanarCode> {
        let n = names.len();
        let mut next: Arc = n as Arc;
        let mut cur: Vec<Arc> = (0..n as Arc).collect();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        let mut crossings = Vec::new();
        let mut arc_pos: BTreeMap<Arc, usize> = (0..n).map(|p| (p as Arc, p)).collect();
        for &g in word {
            let i = g.unsigned_abs() as usize;
            if i == 0 || i >= n {
                return Err(Error::Schema(format!("braid letter {g} out of range for {n} strands")));
            }
            let (p, q) = (i - 1, i);
            let (in_l, in_r) = (cur[p], cur[q]);
            let (out_l, out_r) = (next, next + 1);
            next += 2;
            let c = if g > 0 {
                Crossing::new([in_r, out_r, out_l, in_l], 1)
            } else {
                Crossing::new([in_l, in_r, out_r, out_l], -1)
            };
            crossings.push(c);
            // origin of the strand now at each position
            arc_pos.insert(out_l, arc_pos[&in_r]);
            arc_pos.insert(out_r, arc_pos[&in_l]);
            cur[p] = out_l;
            cur[q] = out_r;
            perm.swap(p, q);
            touched[p] = true;
            touched[q] = true;
        }
        // close: the final arc at position p is the initial arc at position p
        let mut ident: BTreeMap<Arc, Arc> = BTreeMap::new();
        for (p, &a) in cur.iter().enumerate() {
            ident.insert(a, p as Arc);
        }
        let close = |a: Arc| *ident.get(&a).unwrap_or(&a);
        let crossings: Vec<Crossing> = crossings.iter().map(|c| Crossing::new(c.arcs.map(close), c.sign)).collect();
        let mut arcs = BTreeMap::new();
        for c in &crossings {
            for a in c.arcs {
                let origin = arc_pos[&a];
                arcs.insert(a, names[origin].to_string());
            }
        }
        // positions of one cycle share a name
        for p in 0..n {
            if names[perm[p]] != names[p] {
                return Err(Error::Schema(format!(
                    "braid closure joins positions named {} and {}",
                    names[p], names[perm[p]]
                )));
            }
        }
        let mut crossingless = Vec::new();
        for p in 0..n {
            if !touched[p] && !crossingless.contains(&names[p].to_string()) {
                crossingless.push(names[p].to_string());
            }
        }
        let pd = PlanarCode { crossings, arcs, crossingless }.renumbered();
        pd.validate()?;
        Ok(pd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> BTreeSet<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn hopf_link_from_braid() {
        let pd = PlanarCode::from_braid(&["x", "y"], &[1, 1]).unwrap();
        assert_eq!(pd.crossings.len(), 2);
        assert_eq!(pd.linking("x", "y"), 1);
        assert_eq!(pd.writhe("x"), 0);
        let neg = PlanarCode::from_braid(&["x", "y"], &[-1, -1]).unwrap();
        assert_eq!(neg.linking("x", "y"), -1);
    }

    #[test]
    fn borromean_rings_are_pairwise_unlinked() {
        let pd = PlanarCode::from_braid(&["g", "h", "a"], &[1, -2, 1, -2, 1, -2]).unwrap();
        assert_eq!(pd.linking("g", "h"), 0);
        assert_eq!(pd.linking("g", "a"), 0);
        assert_eq!(pd.linking("h", "a"), 0);
        assert_eq!(pd.components(), names(&["a", "g", "h"]));
    }

    #[test]
    fn kinks() {
        for f in [-3, -1, 1, 2] {
            let pd = PlanarCode::kinked_unknot("k", f);
            pd.validate().unwrap();
            assert_eq!(pd.writhe("k"), f);
        }
        assert_eq!(PlanarCode::kinked_unknot("k", 1).crossings[0], Crossing::new([1, 1, 2, 2], 1));
        assert_eq!(PlanarCode::kinked_unknot("k", -1).crossings[0], Crossing::new([1, 2, 2, 1], -1));
    }

    #[test]
    fn nonplanar_code_rejected() {
        // a trefoil-like code with one crossing's ports permuted
        let mut pd = PlanarCode::from_braid(&["k", "k"], &[1, 1, 1]).unwrap();
        assert!(pd.validate().is_ok());
        let c = pd.crossings[0];
        pd.crossings[0] = Crossing::new([c.arcs[0], c.arcs[3], c.arcs[2], c.arcs[1]], -c.sign);
        assert!(pd.validate().is_err());
    }

    #[test]
    fn incoherent_orientation_rejected() {
        let mut pd = PlanarCode::kinked_unknot("k", 1);
        pd.crossings[0].sign = -1;
        assert!(pd.validate().is_err());
    }

    #[test]
    fn removing_a_component_unlinks() {
        let pd = PlanarCode::from_braid(&["g", "h", "a"], &[1, -2, 1, -2, 1, -2]).unwrap();
        let rest = pd.remove_components(&names(&["a"]));
        rest.validate().unwrap();
        assert_eq!(rest.components(), names(&["g", "h"]));
        assert_eq!(rest.linking("g", "h"), 0);
        let one = pd.remove_components(&names(&["g", "h"]));
        assert_eq!(one.crossingless, vec!["a".to_string()]);
        assert!(one.crossings.is_empty());
    }

    #[test]
    fn braid_component_names_must_match_cycles() {
        assert!(PlanarCode::from_braid(&["x", "y"], &[1]).is_err());
        assert!(PlanarCode::from_braid(&["x", "x"], &[1]).is_ok());
    }
}
