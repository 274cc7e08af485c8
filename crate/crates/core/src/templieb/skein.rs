//! Kauffman bracket evaluation of planar networks.
//!
//! A network is a set of vertices, each a linear combination of perfect
//! matchings of its ports (crossings have two such terms, Jones-Wenzl boxes
//! one per Temperley-Lieb basis diagram), plus wires pairing up all ports.
//! Choosing a term at every vertex leaves a set of closed loops, each worth
//! `δ`. Since the network is drawn in the plane, summing over choices gives
//! the bracket.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::scalar::{powi, C64};

/// A perfect matching on local ports: `m[p]` is the partner of `p`.
pub type Matching = Vec<u8>;

#[derive(Clone, Debug)]
pub struct Vertex {
    pub ports: usize,
    pub terms: Vec<(Matching, C64)>,
}

impl Vertex {
    /// Crossing with ports bottom, right, top, left (counterclockwise from the
    /// incoming under-strand).
    pub fn crossing(a: C64) -> Vertex {
        Vertex { ports: 4, terms: vec![(vec![1, 0, 3, 2], a), (vec![3, 2, 1, 0], a.inv())] }
    }
}

/// Global port id: `(vertex, local port)`.
pub type Port = (usize, usize);

#[derive(Clone, Debug, Default)]
pub struct Network {
    pub vertices: Vec<Vertex>,
    wires: BTreeMap<Port, Port>,
    /// Closed loops not touching any vertex.
    pub free_loops: usize,
}

impl Network {
    pub fn new() -> Self {
        Network::default()
    }

    pub fn add_vertex(&mut self, v: Vertex) -> usize {
        self.vertices.push(v);
        self.vertices.len() - 1
    }

    pub fn wire(&mut self, p: Port, q: Port) {
        assert!(!self.wires.contains_key(&p) && !self.wires.contains_key(&q), "port wired twice");
        self.wires.insert(p, q);
        self.wires.insert(q, p);
    }

    pub fn partner(&self, p: Port) -> Port {
        self.wires[&p]
    }

    pub fn crossing_count(&self) -> usize {
        self.vertices.iter().filter(|v| v.ports == 4 && v.terms.len() == 2).count()
    }

    /// Panics unless every port is wired.
    pub fn check_complete(&self) {
        for (i, v) in self.vertices.iter().enumerate() {
            for p in 0..v.ports {
                assert!(self.wires.contains_key(&(i, p)), "port {p} of vertex {i} is unwired");
            }
        }
    }

    /// Memoized contraction, vertex by vertex, keeping the sum over all
    /// frontier matchings seen so far.
    pub fn evaluate(&self, delta: C64) -> C64 {
        self.check_complete();
        let n = self.vertices.len();
        let mut done = vec![false; n];
        let mut frontier: Vec<Port> = Vec::new();
        let mut states: BTreeMap<Matching, C64> = BTreeMap::new();
        states.insert(Vec::new(), C64::one());
        for _ in 0..n {
            let v = self.next_vertex(&done);
            done[v] = true;
            let (new_frontier, next) = self.absorb(v, &frontier, &states, &done, delta);
            frontier = new_frontier;
            states = next;
        }
        debug_assert!(frontier.is_empty());
        let total = states.get(&Vec::new()).copied().unwrap_or_else(C64::zero);
        total * powi(delta, self.free_loops as i64)
    }

    fn next_vertex(&self, done: &[bool]) -> usize {
        let mut best = None;
        let mut best_score = (0usize, 0usize);
        for (i, v) in self.vertices.iter().enumerate() {
            if done[i] {
                continue;
            }
            let links = (0..v.ports).filter(|&p| done[self.wires[&(i, p)].0]).count();
            // prefer many links to the processed part, then few new open ports
            let opens = (0..v.ports).filter(|&p| !done[self.wires[&(i, p)].0] && self.wires[&(i, p)].0 != i).count();
            let score = (links, usize::MAX - opens);
            if best.is_none() || score > best_score {
                best = Some(i);
                best_score = score;
            }
        }
        best.expect("an unprocessed vertex")
    }

    fn absorb(
        &self,
        v: usize,
        frontier: &[Port],
        states: &BTreeMap<Matching, C64>,
        done: &[bool],
        delta: C64,
    ) -> (Vec<Port>, BTreeMap<Matching, C64>) {
        let k = self.vertices[v].ports;
        let f = frontier.len();
        // local nodes: 0..f frontier ports, f..f+k ports of v
        let index_of_frontier: BTreeMap<Port, usize> = frontier.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        let mut wire_nb: Vec<Option<usize>> = vec![None; f + k];
        for p in 0..k {
            let q = self.wires[&(v, p)];
            if q.0 == v {
                wire_nb[f + p] = Some(f + q.1);
            } else if let Some(&i) = index_of_frontier.get(&q) {
                wire_nb[f + p] = Some(i);
                wire_nb[i] = Some(f + p);
            }
        }
        // the new frontier: old frontier ports not wired to v, then open ports of v
        let mut new_frontier = Vec::new();
        let mut endpoint_slot: Vec<Option<usize>> = vec![None; f + k];
        for (i, port) in frontier.iter().enumerate() {
            if wire_nb[i].is_none() {
                endpoint_slot[i] = Some(new_frontier.len());
                new_frontier.push(*port);
            }
        }
        for p in 0..k {
            let q = self.wires[&(v, p)];
            if q.0 != v && !done[q.0] {
                endpoint_slot[f + p] = Some(new_frontier.len());
                new_frontier.push((v, p));
            }
        }
        let mut out: BTreeMap<Matching, C64> = BTreeMap::new();
        let mut visited = vec![false; f + k];
        for (m, &c) in states {
            for (t, w) in &self.vertices[v].terms {
                let inner = |x: usize| -> usize { if x < f { m[x] as usize } else { f + t[x - f] as usize } };
                visited.iter_mut().for_each(|b| *b = false);
                let mut key = vec![0u8; new_frontier.len()];
                for start in 0..f + k {
                    if visited[start] || endpoint_slot[start].is_none() {
                        continue;
                    }
                    // walk from an endpoint along inner, wire, inner, ... edges
                    let mut x = start;
                    visited[x] = true;
                    loop {
                        let y = inner(x);
                        visited[y] = true;
                        match wire_nb[y] {
                            Some(z) => {
                                visited[z] = true;
                                x = z;
                            }
                            None => {
                                let (a, b) = (endpoint_slot[start].unwrap(), endpoint_slot[y].unwrap());
                                key[a] = b as u8;
                                key[b] = a as u8;
                                break;
                            }
                        }
                    }
                }
                let mut loops = 0;
                for start in 0..f + k {
                    if visited[start] {
                        continue;
                    }
                    loops += 1;
                    let mut x = start;
                    while !visited[x] {
                        visited[x] = true;
                        let y = inner(x);
                        visited[y] = true;
                        x = wire_nb[y].expect("closed loop");
                    }
                }
                let val = c * w * powi(delta, loops);
                *out.entry(key).or_insert_with(C64::zero) += val;
            }
        }
        (new_frontier, out)
    }

    /// Exhaustive state sum over every choice of term, for testing.
    pub fn evaluate_naive(&self, delta: C64) -> C64 {
        self.check_complete();
        let n = self.vertices.len();
        let mut choice = vec![0usize; n];
        let mut total = C64::zero();
        loop {
            let mut coeff = C64::one();
            for (i, &c) in choice.iter().enumerate() {
                coeff *= self.vertices[i].terms[c].1;
            }
            let mut visited: BTreeMap<Port, bool> = BTreeMap::new();
            let mut loops = 0i64;
            for (i, v) in self.vertices.iter().enumerate() {
                for p in 0..v.ports {
                    if visited.contains_key(&(i, p)) {
                        continue;
                    }
                    loops += 1;
                    let mut x = (i, p);
                    while !visited.contains_key(&x) {
                        visited.insert(x, true);
                        let y = (x.0, self.vertices[x.0].terms[choice[x.0]].0[x.1] as usize);
                        visited.insert(y, true);
                        x = self.wires[&y];
                    }
                }
            }
            total += coeff * powi(delta, loops);
            // next choice
            let mut i = 0;
            loop {
                if i == n {
                    return total * powi(delta, self.free_loops as i64);
                }
                choice[i] += 1;
                if choice[i] < self.vertices[i].terms.len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::approx_eq;

    fn delta(a: C64) -> C64 {
        -a * a - a.inv() * a.inv()
    }

    #[test]
    fn positive_kink() {
        let a = C64::from_polar(1.0, 0.3);
        let mut net = Network::new();
        let x = net.add_vertex(Vertex::crossing(a));
        // X[1,1,2,2]
        net.wire((x, 0), (x, 1));
        net.wire((x, 2), (x, 3));
        let want = -a * a * a * delta(a);
        assert!(approx_eq(net.evaluate(delta(a)), want, 1e-12));
        assert!(approx_eq(net.evaluate_naive(delta(a)), want, 1e-12));
    }

    #[test]
    fn free_loops_only() {
        let mut net = Network::new();
        net.free_loops = 2;
        let d = C64::new(-1.5, 0.2);
        assert!(approx_eq(net.evaluate(d), d * d, 1e-12));
    }
}
