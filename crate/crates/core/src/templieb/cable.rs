//! Cabling a planar diagram: each component of width `w` becomes `w`
//! parallel strands (blackboard framing) with one Jones-Wenzl box.

use std::collections::BTreeMap;

use super::jw::TlElement;
use super::skein::{Network, Port, Vertex};
use crate::kirby::{Arc, PlanarCode};
use crate::scalar::C64;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum End {
    Head,
    Tail,
}

/// Crossings after cabling.
pub fn cabled_crossings(pd: &PlanarCode, widths: &BTreeMap<String, usize>) -> usize {
    pd.crossings
        .iter()
        .map(|c| widths[&pd.arcs[&c.under()]] * widths[&pd.arcs[&c.over_in()]])
        .sum()
}

/// Builds the cabled network. Every component must have width at least 1
/// and `projectors[w]` must hold `JW_w` for each width used.
pub fn cable(pd: &PlanarCode, widths: &BTreeMap<String, usize>, projectors: &[TlElement], a: C64) -> Network {
    let mut net = Network::new();
    let mut slots: BTreeMap<(Arc, End, usize), Port> = BTreeMap::new();
    for c in &pd.crossings {
        let wu = widths[&pd.arcs[&c.under()]];
        let wo = widths[&pd.arcs[&c.over_in()]];
        assert!(wu > 0 && wo > 0, "zero-width component in cabling");
        // grid node (x, l): x west to east, l north to south
        let base = net.vertices.len();
        for _ in 0..wu * wo {
            net.add_vertex(Vertex::crossing(a));
        }
        let node = |x: usize, l: usize| base + x * wo + l;
        for x in 0..wu {
            for l in 0..wo {
                if l + 1 < wo {
                    net.wire((node(x, l), 0), (node(x, l + 1), 2));
                }
                if x + 1 < wu {
                    net.wire((node(x, l), 1), (node(x + 1, l), 3));
                }
            }
        }
        let [pa, pb, pc, pd_] = c.arcs;
        for x in 0..wu {
            slots.insert((pa, End::Head, x), (node(x, wo - 1), 0));
            slots.insert((pc, End::Tail, x), (node(x, 0), 2));
        }
        for s in 0..wo {
            if c.sign > 0 {
                slots.insert((pd_, End::Head, s), (node(0, s), 3));
                slots.insert((pb, End::Tail, s), (node(wu - 1, s), 1));
            } else {
                let l = wo - 1 - s;
                slots.insert((pb, End::Head, s), (node(wu - 1, l), 1));
                slots.insert((pd_, End::Tail, s), (node(0, l), 3));
            }
        }
    }
    let mut first_arc: BTreeMap<&str, Arc> = BTreeMap::new();
    for (a, name) in &pd.arcs {
        first_arc.entry(name.as_str()).or_insert(*a);
    }
    for (arc, name) in &pd.arcs {
        let w = widths[name];
        if first_arc[name.as_str()] == *arc && w >= 2 {
            let jw = net.add_vertex(projector_vertex(&projectors[w]));
            for s in 0..w {
                net.wire(slots[&(*arc, End::Tail, s)], (jw, s));
                net.wire((jw, w + s), slots[&(*arc, End::Head, s)]);
            }
        } else {
            for s in 0..w {
                net.wire(slots[&(*arc, End::Tail, s)], slots[&(*arc, End::Head, s)]);
            }
        }
    }
    for name in &pd.crossingless {
        let w = widths[name];
        if w == 1 {
            net.free_loops += 1;
        } else if w >= 2 {
            let jw = net.add_vertex(projector_vertex(&projectors[w]));
            for s in 0..w {
                net.wire((jw, w + s), (jw, s));
            }
        }
    }
    net
}

pub fn projector_vertex(p: &TlElement) -> Vertex {
    Vertex { ports: 2 * p.strands, terms: p.terms.iter().map(|(d, c)| (d.clone(), *c)).collect() }
}
