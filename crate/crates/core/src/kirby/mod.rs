//! Kirby diagrams in dotted-circle notation: special framed links whose
//! dotted components are 1-handles and whose other components are 2-handles.

mod pd;

pub use pd::{Arc, Crossing, Dart, PlanarCode};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::One;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::linalg;
use crate::scalar::{approx_eq, powi, C64};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OneHandle {
    pub id: String,
}

/// One pass of a 2-handle through a dotted circle.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub generator: String,
    pub sign: i8,
}

impl Letter {
    pub fn new(generator: impl Into<String>, sign: i8) -> Self {
        Letter { generator: generator.into(), sign }
    }

    pub fn inverse(&self) -> Letter {
        Letter { generator: self.generator.clone(), sign: -self.sign }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoHandle {
    pub id: String,
    pub framing: i64,
    pub word: Vec<Letter>,
}

impl TwoHandle {
    pub fn new(id: impl Into<String>, framing: i64, word: Vec<Letter>) -> Self {
        TwoHandle { id: id.into(), framing, word }
    }

    /// Signed number of passes through `generator`.
    pub fn letter_sum(&self, generator: &str) -> i64 {
        self.word.iter().filter(|l| l.generator == generator).map(|l| l.sign as i64).sum()
    }
}

/// A group presentation with one generator per 1-handle and one relator per 2-handle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPresentation {
    pub generators: Vec<String>,
    pub relators: Vec<Vec<Letter>>,
}

impl GroupPresentation {
    /// Relators as `(generator index, sign)` pairs.
    pub fn indexed_relators(&self) -> Vec<Vec<(usize, i8)>> {
        self.relators
            .iter()
            .map(|r| {
                r.iter()
                    .map(|l| (self.generators.iter().position(|g| *g == l.generator).expect("declared generator"), l.sign))
                    .collect()
            })
            .collect()
    }

    /// Free product: generators and relators concatenate.
    pub fn free_product(&self, other: &GroupPresentation) -> GroupPresentation {
        let mut out = self.clone();
        out.generators.extend(other.generators.iter().cloned());
        out.relators.extend(other.relators.iter().cloned());
        out
    }
}

impl fmt::Display for GroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self
            .relators
            .iter()
            .map(|r| {
                if r.is_empty() {
                    "1".to_string()
                } else {
                    r.iter()
                        .map(|l| if l.sign > 0 { l.generator.clone() } else { format!("{}^-1", l.generator) })
                        .collect::<Vec<_>>()
                        .join(" ")
                }
            })
            .collect();
        write!(f, "< {} | {} >", self.generators.join(", "), rels.join(", "))
    }
}

/// A special framed link with optional planar diagram.
#[derive(Clone, Debug, PartialEq)]
pub struct KirbyDiagram {
    name: String,
    one_handles: Vec<OneHandle>,
    two_handles: Vec<TwoHandle>,
    linking: Vec<Vec<i64>>,
    pd: Option<PlanarCode>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawKdf {
    #[serde(default)]
    name: String,
    #[serde(default)]
    one_handles: Vec<String>,
    #[serde(default)]
    two_handles: Vec<RawTwoHandle>,
    #[serde(default)]
    linking: BTreeMap<String, i64>,
    #[serde(default)]
    pd: Option<RawPd>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTwoHandle {
    id: String,
    framing: i64,
    #[serde(default)]
    word: Vec<(String, i64)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPd {
    #[serde(default)]
    crossings: Vec<[i64; 5]>,
    #[serde(default)]
    arcs: BTreeMap<String, String>,
    #[serde(default)]
    crossingless: Vec<String>,
}

/// Reads a KDF document.
pub fn parse_kdf(document: &str) -> Result<KirbyDiagram> {
    if document.trim().is_empty() {
        return KirbyDiagram::new("", vec![], vec![], BTreeMap::new(), None);
    }
    let raw: RawKdf = serde_json::from_str(document).map_err(|e| Error::Schema(e.to_string()))?;
    let mut two = Vec::new();
    for t in raw.two_handles {
        let mut word = Vec::new();
        for (g, s) in t.word {
            if s != 1 && s != -1 {
                return Err(Error::Schema(format!("letter sign {s} in word of {} is not ±1", t.id)));
            }
            word.push(Letter::new(g, s as i8));
        }
        two.push(TwoHandle::new(t.id, t.framing, word));
    }
    let mut linking = BTreeMap::new();
    for (key, v) in raw.linking {
        let (a, b) = key
            .split_once(',')
            .ok_or_else(|| Error::Schema(format!("linking key '{key}' is not 'idA,idB'")))?;
        let (a, b) = (a.trim().to_string(), b.trim().to_string());
        let k = if a <= b { (a, b) } else { (b, a) };
        if let Some(old) = linking.insert(k.clone(), v) {
            if old != v {
                return Err(Error::Schema(format!("conflicting linking entries for {},{}", k.0, k.1)));
            }
        }
    }
    let pd = match raw.pd {
        None => None,
        Some(p) => {
            let mut crossings = Vec::new();
            for c in p.crossings {
                if c[..4].iter().any(|&a| a < 0 || a > u32::MAX as i64) {
                    return Err(Error::Schema(format!("crossing {c:?} has an invalid arc id")));
                }
                if c[4] != 1 && c[4] != -1 {
                    return Err(Error::Schema(format!("crossing {c:?} has sign other than ±1")));
                }
                crossings.push(Crossing::new([c[0] as Arc, c[1] as Arc, c[2] as Arc, c[3] as Arc], c[4] as i8));
            }
            let mut arcs = BTreeMap::new();
            for (k, comp) in p.arcs {
                let a: Arc = k.trim().parse().map_err(|_| Error::Schema(format!("arc key '{k}' is not an integer")))?;
                arcs.insert(a, comp);
            }
            Some(PlanarCode { crossings, arcs, crossingless: p.crossingless })
        }
    };
    let one = raw.one_handles.into_iter().map(|id| OneHandle { id }).collect();
    KirbyDiagram::new(raw.name, one, two, linking, pd)
}

impl KirbyDiagram {
    /// Builds and validates a diagram. `linking` holds off-diagonal entries
    /// keyed by unordered id pairs; absent pairs are 0.
    pub fn new(
        name: impl Into<String>,
        one_handles: Vec<OneHandle>,
        two_handles: Vec<TwoHandle>,
        linking: BTreeMap<(String, String), i64>,
        pd: Option<PlanarCode>,
    ) -> Result<Self> {
        let mut ids = BTreeSet::new();
        for id in one_handles.iter().map(|h| &h.id).chain(two_handles.iter().map(|h| &h.id)) {
            if id.is_empty() || id.contains(',') {
                return Err(Error::Schema(format!("invalid handle id '{id}'")));
            }
            if !ids.insert(id.clone()) {
                return Err(Error::Schema(format!("duplicate handle id '{id}'")));
            }
        }
        let dotted: BTreeSet<&String> = one_handles.iter().map(|h| &h.id).collect();
        for t in &two_handles {
            if let Some(l) = t.word.iter().find(|l| !dotted.contains(&l.generator)) {
                return Err(Error::Schema(format!("word of {} uses undeclared 1-handle '{}'", t.id, l.generator)));
            }
        }
        let idx: BTreeMap<&String, usize> = two_handles.iter().enumerate().map(|(i, t)| (&t.id, i)).collect();
        let n = two_handles.len();
        let mut m = vec![vec![0i64; n]; n];
        for (i, t) in two_handles.iter().enumerate() {
            m[i][i] = t.framing;
        }
        for ((a, b), &v) in &linking {
            if a == b {
                return Err(Error::Schema(format!("linking entry {a},{b} is diagonal; use the framing")));
            }
            match (idx.get(a), idx.get(b)) {
                (Some(&i), Some(&j)) => {
                    m[i][j] = v;
                    m[j][i] = v;
                }
                _ => {
                    // a dotted circle: must agree with the word
                    let (g, t) = if dotted.contains(a) { (a, b) } else { (b, a) };
                    let ti = idx.get(t).filter(|_| dotted.contains(g));
                    match ti {
                        Some(&ti) if two_handles[ti].letter_sum(g) == v => {}
                        Some(_) => {
                            return Err(Error::Consistency(format!(
                                "linking {a},{b} = {v} contradicts the word of {t}"
                            )))
                        }
                        None if dotted.contains(a) && dotted.contains(b) && v == 0 => {}
                        None => return Err(Error::Schema(format!("linking entry {a},{b} names unknown or dotted handles"))),
                    }
                }
            }
        }
        let d = KirbyDiagram { name: name.into(), one_handles, two_handles, linking: m, pd };
        if let Some(pd) = &d.pd {
            d.check_pd(pd)?;
        }
        Ok(d)
    }

    fn check_pd(&self, pd: &PlanarCode) -> Result<()> {
        pd.validate()?;
        let handles: BTreeSet<String> = self.components().into_iter().map(String::from).collect();
        if pd.components() != handles {
            return Err(Error::Schema(format!(
                "planar code components {:?} differ from handles {:?}",
                pd.components(),
                handles
            )));
        }
        for (i, t) in self.two_handles.iter().enumerate() {
            let w = pd.writhe(&t.id);
            if w != t.framing {
                return Err(Error::Consistency(format!("{} has framing {} but writhe {w}", t.id, t.framing)));
            }
            for (j, u) in self.two_handles.iter().enumerate().skip(i + 1) {
                let lk = pd.linking(&t.id, &u.id);
                if lk != self.linking[i][j] {
                    return Err(Error::Consistency(format!(
                        "lk({}, {}) is {} in the planar code but {} in the linking data",
                        t.id, u.id, lk, self.linking[i][j]
                    )));
                }
            }
            for g in &self.one_handles {
                let lk = pd.linking(&t.id, &g.id);
                if lk != t.letter_sum(&g.id) {
                    return Err(Error::Consistency(format!(
                        "{} links dotted {} {} times in the planar code but its word sums to {}",
                        t.id,
                        g.id,
                        lk,
                        t.letter_sum(&g.id)
                    )));
                }
            }
        }
        self.check_dotted_unlink(pd)
    }

    /// Dotted components must form a 0-framed unlink. Writhes and pairwise
    /// linkings are checked exactly; unknottedness and unlinkedness by
    /// comparing the Kauffman bracket with that of the unlink at generic `A`.
    fn check_dotted_unlink(&self, pd: &PlanarCode) -> Result<()> {
        let dotted: Vec<&str> = self.one_handles.iter().map(|h| h.id.as_str()).collect();
        for (i, g) in dotted.iter().enumerate() {
            if pd.writhe(g) != 0 {
                return Err(Error::DottedLink(format!("dotted circle {g} has writhe {}", pd.writhe(g))));
            }
            for h in &dotted[i + 1..] {
                if pd.linking(g, h) != 0 {
                    return Err(Error::DottedLink(format!("dotted circles {g} and {h} are linked")));
                }
            }
        }
        if dotted.is_empty() {
            return Ok(());
        }
        let drop: BTreeSet<String> = self.two_handles.iter().map(|t| t.id.clone()).collect();
        let sub = pd.remove_components(&drop);
        if sub.crossings.is_empty() {
            return Ok(());
        }
        let w: i64 = sub.crossings.iter().map(|c| c.sign as i64).sum();
        for a in [C64::from_polar(1.0, 0.7123), C64::new(0.83, 0.41)] {
            let delta = -a * a - powi(a, -2);
            let expected = powi(-a * a * a, w) * powi(delta, dotted.len() as i64);
            let got = crate::templieb::bracket_of_planar_code(&sub, a);
            if !approx_eq(got, expected, 1e-8) {
                return Err(Error::DottedLink("dotted circles do not form an unlink".into()));
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn one_handles(&self) -> &[OneHandle] {
        &self.one_handles
    }

    pub fn two_handles(&self) -> &[TwoHandle] {
        &self.two_handles
    }

    pub fn pd(&self) -> Option<&PlanarCode> {
        self.pd.as_ref()
    }

    /// Drops the planar code, keeping the word and linking layer.
    pub fn without_pd(&self) -> KirbyDiagram {
        KirbyDiagram { pd: None, ..self.clone() }
    }

    pub fn h1(&self) -> usize {
        self.one_handles.len()
    }

    pub fn h2(&self) -> usize {
        self.two_handles.len()
    }

    /// Component ids, dotted circles first, in declaration order.
    pub fn components(&self) -> Vec<&str> {
        self.one_handles
            .iter()
            .map(|h| h.id.as_str())
            .chain(self.two_handles.iter().map(|t| t.id.as_str()))
            .collect()
    }

    /// Linking matrix of the 2-handles, framings on the diagonal.
    pub fn linking_matrix(&self) -> &[Vec<i64>] {
        &self.linking
    }

    /// Linking matrix of all components in [`Self::components`] order: dotted
    /// circles are 0-framed, unlinked from each other, and link each 2-handle
    /// by the letter sum of its word.
    pub fn full_linking_matrix(&self) -> Vec<Vec<i64>> {
        let (h1, h2) = (self.h1(), self.h2());
        let mut m = vec![vec![0i64; h1 + h2]; h1 + h2];
        for (j, t) in self.two_handles.iter().enumerate() {
            for (i, g) in self.one_handles.iter().enumerate() {
                let s = t.letter_sum(&g.id);
                m[i][h1 + j] = s;
                m[h1 + j][i] = s;
            }
            for k in 0..h2 {
                m[h1 + j][h1 + k] = self.linking[j][k];
            }
        }
        m
    }

    pub fn h3(&self) -> usize {
        linalg::nullity(&self.full_linking_matrix())
    }

    pub fn euler_characteristic(&self) -> i64 {
        2 - self.h1() as i64 + self.h2() as i64 - self.h3() as i64
    }

    pub fn signature(&self) -> i64 {
        linalg::signature(&self.full_linking_matrix())
    }

    pub fn fundamental_group(&self) -> GroupPresentation {
        GroupPresentation {
            generators: self.one_handles.iter().map(|h| h.id.clone()).collect(),
            relators: self.two_handles.iter().map(|t| t.word.clone()).collect(),
        }
    }

    fn two_index(&self, id: &str) -> Result<usize> {
        self.two_handles
            .iter()
            .position(|t| t.id == id)
            .ok_or_else(|| Error::PreconditionFailed(format!("no 2-handle named {id}")))
    }

    fn linking_map(&self) -> BTreeMap<(String, String), i64> {
        let mut out = BTreeMap::new();
        for (i, t) in self.two_handles.iter().enumerate() {
            for (j, u) in self.two_handles.iter().enumerate().skip(i + 1) {
                if self.linking[i][j] != 0 {
                    out.insert((t.id.clone(), u.id.clone()), self.linking[i][j]);
                }
            }
        }
        out
    }

    /// Disjoint union; ids of `b` that collide with ids of `a` get a `_b` suffix.
    pub fn connected_sum(&self, b: &KirbyDiagram) -> KirbyDiagram {
        let mut taken: BTreeSet<String> = self.components().into_iter().map(String::from).collect();
        let mut rename = BTreeMap::new();
        for id in b.components() {
            let mut new = id.to_string();
            while taken.contains(&new) {
                new.push_str("_b");
            }
            taken.insert(new.clone());
            rename.insert(id.to_string(), new);
        }
        let r = |s: &str| rename[s].clone();
        let mut one = self.one_handles.clone();
        one.extend(b.one_handles.iter().map(|h| OneHandle { id: r(&h.id) }));
        let mut two = self.two_handles.clone();
        two.extend(b.two_handles.iter().map(|t| {
            TwoHandle::new(r(&t.id), t.framing, t.word.iter().map(|l| Letter::new(r(&l.generator), l.sign)).collect())
        }));
        let n = two.len();
        let na = self.h2();
        let mut m = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                if i < na && j < na {
                    m[i][j] = self.linking[i][j];
                } else if i >= na && j >= na {
                    m[i][j] = b.linking[i - na][j - na];
                }
            }
        }
        let a_empty = self.components().is_empty();
        let b_empty = b.components().is_empty();
        let pd = match (&self.pd, &b.pd) {
            (Some(p), Some(q)) => Some(p.disjoint_union(&q.renamed(&rename))),
            (Some(p), None) if b_empty => Some(p.clone()),
            (None, Some(q)) if a_empty => Some(q.renamed(&rename)),
            _ => None,
        };
        let name = match (self.name.is_empty(), b.name.is_empty()) {
            (true, _) => b.name.clone(),
            (_, true) => self.name.clone(),
            _ => format!("{}#{}", self.name, b.name),
        };
        KirbyDiagram { name, one_handles: one, two_handles: two, linking: m, pd }
    }

    /// Removes a 1-handle together with the 2-handle passing over it once.
    pub fn cancel_12(&self, one_id: &str, two_id: &str) -> Result<KirbyDiagram> {
        let gi = self
            .one_handles
            .iter()
            .position(|h| h.id == one_id)
            .ok_or_else(|| Error::PreconditionFailed(format!("no 1-handle named {one_id}")))?;
        let ti = self.two_index(two_id)?;
        let t = &self.two_handles[ti];
        if t.word.len() != 1 || t.word[0].generator != one_id {
            return Err(Error::PreconditionFailed(format!(
                "word of {two_id} is not a single letter {one_id}^±1 (length {})",
                t.word.len()
            )));
        }
        if let Some(u) = self.two_handles.iter().find(|u| u.id != two_id && u.word.iter().any(|l| l.generator == one_id)) {
            return Err(Error::PreconditionFailed(format!("1-handle {one_id} also occurs in the word of {}", u.id)));
        }
        if let Some(j) = (0..self.h2()).find(|&j| j != ti && self.linking[ti][j] != 0) {
            return Err(Error::PreconditionFailed(format!(
                "{two_id} links {} (linking {})",
                self.two_handles[j].id, self.linking[ti][j]
            )));
        }
        let mut out = self.clone();
        out.one_handles.remove(gi);
        out.remove_two(ti);
        if let Some(pd) = &self.pd {
            let drop: BTreeSet<String> = [one_id.to_string(), two_id.to_string()].into();
            out.pd = Some(pd.remove_components(&drop));
        }
        Ok(out)
    }

    fn remove_two(&mut self, ti: usize) {
        self.two_handles.remove(ti);
        self.linking.remove(ti);
        for row in self.linking.iter_mut() {
            row.remove(ti);
        }
    }

    /// Removes an unknotted, unlinked, 0-framed 2-handle.
    pub fn cancel_23(&self, two_id: &str) -> Result<KirbyDiagram> {
        let ti = self.two_index(two_id)?;
        let t = &self.two_handles[ti];
        if !t.word.is_empty() {
            return Err(Error::PreconditionFailed(format!("{two_id} passes through 1-handles")));
        }
        if t.framing != 0 {
            return Err(Error::PreconditionFailed(format!("{two_id} has framing {}", t.framing)));
        }
        if let Some(j) = (0..self.h2()).find(|&j| j != ti && self.linking[ti][j] != 0) {
            return Err(Error::PreconditionFailed(format!("{two_id} links {}", self.two_handles[j].id)));
        }
        if let Some(pd) = &self.pd {
            if pd.crossings_of(two_id) > 0 {
                return Err(Error::PreconditionFailed(format!("{two_id} has crossings in the planar code")));
            }
        }
        let mut out = self.clone();
        out.remove_two(ti);
        if let Some(pd) = &mut out.pd {
            pd.crossingless.retain(|c| c != two_id);
        }
        Ok(out)
    }

    /// Connected sum with a `±1`-framed unknot.
    pub fn blow_up(&self, sign: i8) -> KirbyDiagram {
        let f = if sign > 0 { 1 } else { -1 };
        let pd = (self.pd.is_some() || self.components().is_empty()).then(|| PlanarCode::kinked_unknot("e", f));
        let e = KirbyDiagram {
            name: String::new(),
            one_handles: vec![],
            two_handles: vec![TwoHandle::new("e", f, vec![])],
            linking: vec![vec![f]],
            pd,
        };
        self.connected_sum(&e)
    }

    /// Slides 2-handle `a` over `b`. Only the word and linking layer is
    /// rewritten, so diagrams with a planar code are refused.
    pub fn slide_22(&self, a: &str, b: &str, sign: i8) -> Result<KirbyDiagram> {
        if self.pd.is_some() {
            return Err(Error::PdPresent);
        }
        if a == b {
            return Err(Error::PreconditionFailed("cannot slide a handle over itself".into()));
        }
        let (ia, ib) = (self.two_index(a)?, self.two_index(b)?);
        let s: i64 = if sign > 0 { 1 } else { -1 };
        let mut out = self.clone();
        let wb = &self.two_handles[ib].word;
        let extra: Vec<Letter> = if s > 0 { wb.clone() } else { wb.iter().rev().map(Letter::inverse).collect() };
        out.two_handles[ia].word.extend(extra);
        let m = &self.linking;
        let n = self.h2();
        let new_diag = m[ia][ia] + m[ib][ib] + 2 * s * m[ia][ib];
        for j in 0..n {
            if j != ia {
                let v = m[ia][j] + s * m[ib][j];
                out.linking[ia][j] = v;
                out.linking[j][ia] = v;
            }
        }
        out.linking[ia][ia] = new_diag;
        out.two_handles[ia].framing = new_diag;
        Ok(out)
    }

    /// KDF document with lexicographically sorted keys.
    pub fn to_kdf_value(&self) -> Value {
        let mut linking = serde_json::Map::new();
        for ((a, b), v) in self.linking_map() {
            let (x, y) = if a <= b { (a, b) } else { (b, a) };
            linking.insert(format!("{x},{y}"), json!(v));
        }
        let two: Vec<Value> = self
            .two_handles
            .iter()
            .map(|t| {
                json!({
                    "framing": t.framing,
                    "id": t.id,
                    "word": t.word.iter().map(|l| json!([l.generator, l.sign])).collect::<Vec<_>>(),
                })
            })
            .collect();
        let mut doc = json!({
            "linking": linking,
            "name": self.name,
            "one_handles": self.one_handles.iter().map(|h| h.id.clone()).collect::<Vec<_>>(),
            "two_handles": two,
        });
        if let Some(pd) = &self.pd {
            let arcs: serde_json::Map<String, Value> =
                pd.arcs.iter().map(|(a, n)| (a.to_string(), json!(n))).collect();
            doc["pd"] = json!({
                "arcs": arcs,
                "crossingless": pd.crossingless,
                "crossings": pd.crossings.iter().map(|c| {
                    json!([c.arcs[0], c.arcs[1], c.arcs[2], c.arcs[3], c.sign])
                }).collect::<Vec<_>>(),
            });
        }
        doc
    }

    pub fn to_kdf(&self) -> String {
        serde_json::to_string_pretty(&self.to_kdf_value()).expect("serializable")
    }

    /// Builder used by the library and tests.
    pub fn build(
        name: &str,
        dotted: &[&str],
        two: &[(&str, i64, &[(&str, i8)])],
        linking: &[(&str, &str, i64)],
        pd: Option<PlanarCode>,
    ) -> Result<KirbyDiagram> {
        let one = dotted.iter().map(|d| OneHandle { id: d.to_string() }).collect();
        let two = two
            .iter()
            .map(|(id, f, w)| TwoHandle::new(*id, *f, w.iter().map(|(g, s)| Letter::new(*g, *s)).collect()))
            .collect();
        let linking = linking.iter().map(|(a, b, v)| ((a.to_string(), b.to_string()), *v)).collect();
        KirbyDiagram::new(name, one, two, linking, pd)
    }

    /// The empty diagram (S⁴).
    pub fn empty() -> KirbyDiagram {
        KirbyDiagram { name: String::new(), one_handles: vec![], two_handles: vec![], linking: vec![], pd: Some(PlanarCode::empty()) }
    }

    /// Whether the determinant of the 2-handle linking matrix is ±1.
    pub fn unimodular(&self) -> bool {
        let d = linalg::determinant(&self.linking);
        d.is_one() || (-d).is_one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hopf() -> KirbyDiagram {
        KirbyDiagram::build("S2xS2", &[], &[("a", 0, &[]), ("b", 0, &[])], &[("a", "b", 1)], None).unwrap()
    }

    #[test]
    fn parse_examples() {
        let d = parse_kdf(r#"{"name":"S1xS3","one_handles":["g"],"two_handles":[]}"#).unwrap();
        assert_eq!((d.h1(), d.h2()), (1, 0));
        assert_eq!(d.euler_characteristic(), 0);
        let d = parse_kdf(
            r#"{"two_handles":[{"id":"a","framing":0,"word":[]},{"id":"b","framing":0,"word":[]}],"linking":{"a,b":1}}"#,
        )
        .unwrap();
        assert_eq!(d.euler_characteristic(), 4);
        assert_eq!(d.signature(), 0);
        let e = parse_kdf("").unwrap();
        assert_eq!((e.h1(), e.h2(), e.euler_characteristic()), (0, 0, 2));
        assert_eq!(parse_kdf("{}").unwrap().components().len(), 0);
    }

    #[test]
    fn schema_errors() {
        assert!(matches!(parse_kdf("[1,2]"), Err(Error::Schema(_))));
        assert!(matches!(
            parse_kdf(r#"{"two_handles":[{"id":"a","framing":0,"word":[["g",1]]}]}"#),
            Err(Error::Schema(_))
        ));
        assert!(matches!(
            parse_kdf(r#"{"one_handles":["g"],"two_handles":[{"id":"a","framing":0,"word":[["g",2]]}]}"#),
            Err(Error::Schema(_))
        ));
    }

    #[test]
    fn pd_consistency_enforced() {
        // framing 0 declared, but drawn with one positive kink
        let doc = r#"{"two_handles":[{"id":"a","framing":0}],
            "pd":{"crossings":[[1,1,2,2,1]],"arcs":{"1":"a","2":"a"}}}"#;
        assert!(matches!(parse_kdf(doc), Err(Error::Consistency(_))));
        let ok = doc.replace("\"framing\":0", "\"framing\":1");
        assert_eq!(parse_kdf(&ok).unwrap().euler_characteristic(), 3);
    }

    #[test]
    fn knotted_dotted_circle_rejected() {
        // Borromean rings: pairwise unlinked but not an unlink
        let pd = PlanarCode::from_braid(&["g", "h", "k"], &[1, -2, 1, -2, 1, -2]).unwrap();
        let rest = pd.remove_components(&["k".to_string()].into());
        assert!(KirbyDiagram::build("unlink", &["g", "h"], &[], &[], Some(rest)).is_ok());
        let d = KirbyDiagram::build("borromean", &["g", "h", "k"], &[], &[], Some(pd));
        assert!(matches!(d, Err(Error::DottedLink(_))));
    }

    #[test]
    fn presentation() {
        let d = KirbyDiagram::build("IxRP3", &["g"], &[("a", 0, &[("g", 1), ("g", 1)])], &[], None).unwrap();
        assert_eq!(d.fundamental_group().to_string(), "< g | g g >");
        assert!(matches!(d.cancel_12("g", "a"), Err(Error::PreconditionFailed(_))));
    }

    #[test]
    fn connected_sums() {
        let s1s3 = KirbyDiagram::build("S1xS3", &["g"], &[], &[], None).unwrap();
        let two = s1s3.connected_sum(&s1s3);
        assert_eq!((two.h1(), two.h2()), (2, 0));
        assert_eq!(two.components(), vec!["g", "g_b"]);
        let cp2 = KirbyDiagram::empty().blow_up(1);
        let mixed = cp2.connected_sum(&KirbyDiagram::empty().blow_up(-1));
        assert_eq!(mixed.linking_matrix(), &[vec![1, 0], vec![0, -1]]);
        assert_eq!(mixed.signature(), 0);
        assert_eq!(mixed.euler_characteristic(), 4);
        assert_eq!(hopf().connected_sum(&KirbyDiagram::empty()).linking_matrix(), hopf().linking_matrix());
    }

    #[test]
    fn slides() {
        let d = hopf().slide_22("a", "b", 1).unwrap();
        assert_eq!(d.linking_matrix(), &[vec![2, 1], vec![1, 0]]);
        assert_eq!(linalg::determinant(d.linking_matrix()), linalg::determinant(hopf().linking_matrix()));
        let back = d.slide_22("a", "b", -1).unwrap();
        assert_eq!(back.linking_matrix(), hopf().linking_matrix());
        let cp2 = KirbyDiagram::empty().blow_up(1);
        assert!(matches!(cp2.connected_sum(&cp2).slide_22("e", "e_b", 1), Err(Error::PdPresent)));
    }

    #[test]
    fn cancellations() {
        let s1s3 = KirbyDiagram::build("S1xS3", &["g"], &[], &[], None).unwrap();
        let pair = KirbyDiagram::build("pair", &["x"], &[("y", 7, &[("x", 1)])], &[], None).unwrap();
        let x = s1s3.connected_sum(&pair);
        let back = x.cancel_12("x", "y").unwrap();
        assert_eq!(back.components(), vec!["g"]);
        let z = KirbyDiagram::build("z", &[], &[("u", 0, &[])], &[], Some(PlanarCode::kinked_unknot("u", 0))).unwrap();
        assert_eq!(z.cancel_23("u").unwrap().components().len(), 0);
        assert!(hopf().cancel_23("a").is_err());
        assert!(KirbyDiagram::empty().blow_up(1).cancel_23("e").is_err());
    }

    #[test]
    fn kdf_output_is_sorted_and_round_trips() {
        let d = KirbyDiagram::empty().blow_up(1).connected_sum(&hopf().without_pd());
        let text = d.to_kdf();
        let again = parse_kdf(&text).unwrap();
        assert_eq!(again, d);
        let at = |k: &str| text.find(&format!("\"{k}\"")).unwrap();
        assert!(at("linking") < at("name") && at("name") < at("one_handles"));
        assert!(at("one_handles") < at("two_handles"));
        let cp2 = KirbyDiagram::empty().blow_up(1).to_kdf();
        let at = |k: &str| cp2.find(&format!("\"{k}\"")).unwrap();
        assert!(at("one_handles") < at("pd") && at("pd") < at("two_handles"));
        assert!(at("arcs") < at("crossingless") && at("crossingless") < at("crossings"));
    }
}
