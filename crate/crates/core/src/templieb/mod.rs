//! Temperley-Lieb categories at `q = exp(iπ/r)`, `A = exp(iπ/2r)`.
//!
//! Labels are spins `j = 0, 1/2, ..., (r-2)/2`, indexed by `2j`. Dimensions,
//! twists and Hopf-link values are all computed by the skein evaluator, so
//! every sign convention is the bracket's own.

pub mod cable;
pub mod jw;
pub mod skein;

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;
use std::sync::Arc;


use crate::category::{
    BackendKind, CategoryData, Colour, EvalOptions, FusionTable, Label, LinkEvaluator, PivotalFunctorData,
};
use crate::kirby::{KirbyDiagram, PlanarCode};
use crate::scalar::{approx_eq, powi, C64};
use crate::{Error, Result};

use jw::TlElement;

pub const DEFAULT_SKEIN_CAP: usize = 24;

/// Kauffman bracket of an uncoloured planar diagram at `A`, with the
/// crossingless unknot worth `δ = −A² − A⁻²`.
pub fn bracket_of_planar_code(pd: &PlanarCode, a: C64) -> C64 {
    let widths: BTreeMap<String, usize> = pd.components().into_iter().map(|c| (c, 1)).collect();
    let net = cable::cable(pd, &widths, &[], a);
    net.evaluate(loop_value(a))
}

pub fn loop_value(a: C64) -> C64 {
    -a * a - powi(a, -2)
}

fn spin_name(twice: usize) -> String {
    if twice % 2 == 0 { (twice / 2).to_string() } else { format!("{twice}/2") }
}

/// The Temperley-Lieb category at level `r`.
#[derive(Clone, Debug)]
pub struct TemperleyLieb {
    r: usize,
    a: C64,
    projectors: Vec<TlElement>,
    dims: Vec<C64>,
    twists: Vec<C64>,
    transparent: Vec<bool>,
}

impl TemperleyLieb {
    pub fn new(r: usize) -> Result<Self> {
        if r < 3 {
            return Err(Error::InvalidCategory(format!("Temperley-Lieb level r = {r} must be at least 3")));
        }
        let a = C64::from_polar(1.0, PI / (2 * r) as f64);
        let delta = loop_value(a);
        let projectors: Vec<TlElement> = (0..=r - 2)
            .map(|m| jw::jones_wenzl(m, delta).expect("JW_m exists for m <= r-2"))
            .collect();
        let mut tl = TemperleyLieb { r, a, projectors, dims: vec![], twists: vec![], transparent: vec![] };
        let unknot = PlanarCode::kinked_unknot("k", 0);
        let kink = PlanarCode::kinked_unknot("k", 1);
        for w in 0..=r - 2 {
            let d = tl.bracket(&unknot, &[("k", w)]);
            if d.norm() < 1e-12 {
                return Err(Error::ZeroDimension(spin_name(w)));
            }
            tl.dims.push(d);
            tl.twists.push(tl.bracket(&kink, &[("k", w)]) / d);
        }
        let n = tl.rank();
        tl.transparent = (0..n)
            .map(|j| (0..n).all(|k| approx_eq(tl.hopf(j, k), tl.dims[j] * tl.dims[k], 1e-9)))
            .collect();
        Ok(tl)
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn a(&self) -> C64 {
        self.a
    }

    pub fn delta(&self) -> C64 {
        loop_value(self.a)
    }

    /// Number of spins.
    pub fn rank(&self) -> usize {
        self.r - 1
    }

    pub fn projector(&self, m: usize) -> &TlElement {
        &self.projectors[m]
    }

    /// `d_j`, indexed by `2j`.
    pub fn spin_dimensions(&self) -> &[C64] {
        &self.dims
    }

    /// `θ_j`, indexed by `2j`.
    pub fn spin_twists(&self) -> &[C64] {
        &self.twists
    }

    pub fn is_transparent(&self, twice_j: usize) -> bool {
        self.transparent[twice_j]
    }

    fn bracket(&self, pd: &PlanarCode, widths: &[(&str, usize)]) -> C64 {
        let w: BTreeMap<String, usize> = widths.iter().map(|(n, w)| (n.to_string(), *w)).collect();
        self.bracket_with_widths(pd, &w)
    }

    /// Bracket of the cabled diagram, without the framing correction.
    /// Zero-width components are deleted first.
    pub fn bracket_with_widths(&self, pd: &PlanarCode, widths: &BTreeMap<String, usize>) -> C64 {
        let zero: BTreeSet<String> = widths.iter().filter(|(_, &w)| w == 0).map(|(n, _)| n.clone()).collect();
        let pd = if zero.is_empty() { pd.clone() } else { pd.remove_components(&zero) };
        cable::cable(&pd, widths, &self.projectors, self.a).evaluate(self.delta())
    }

    /// Crossings after cabling `pd` with the given widths.
    pub fn cabled_crossings(&self, pd: &PlanarCode, widths: &BTreeMap<String, usize>) -> usize {
        let zero: BTreeSet<String> = widths.iter().filter(|(_, &w)| w == 0).map(|(n, _)| n.clone()).collect();
        let pd = if zero.is_empty() { pd.clone() } else { pd.remove_components(&zero) };
        cable::cabled_crossings(&pd, widths)
    }

    /// Positive Hopf link coloured by spins `2j`, `2k`.
    pub fn hopf(&self, twice_j: usize, twice_k: usize) -> C64 {
        let pd = PlanarCode::from_braid(&["x", "y"], &[1, 1]).expect("Hopf link");
        self.bracket(&pd, &[("x", twice_j), ("y", twice_k)])
    }

    /// Coloured framed-link value of a Kirby diagram; `widths` follows
    /// [`KirbyDiagram::components`].
    pub fn evaluate_link_tl(&self, diagram: &KirbyDiagram, widths: &[usize], cap: usize) -> Result<C64> {
        let pd = diagram.pd().ok_or(Error::MissingPd)?;
        let comps = diagram.components();
        if widths.len() != comps.len() {
            return Err(Error::Unsupported(format!("{} labels for {} components", widths.len(), comps.len())));
        }
        if let Some(&w) = widths.iter().find(|&&w| w > self.r - 2) {
            return Err(Error::Unsupported(format!("spin {} is not a label at r = {}", spin_name(w), self.r)));
        }
        let map: BTreeMap<String, usize> = comps.iter().map(|c| c.to_string()).zip(widths.iter().copied()).collect();
        let needed = self.cabled_crossings(pd, &map);
        if needed > cap {
            return Err(Error::ResourceLimit { needed, cap });
        }
        let mut value = self.bracket_with_widths(pd, &map);
        for (i, t) in diagram.two_handles().iter().enumerate() {
            let extra = t.framing - pd.writhe(&t.id);
            if extra != 0 {
                value *= powi(self.twists[widths[diagram.h1() + i]], extra);
            }
        }
        Ok(value)
    }

    fn fusion(&self, twice: &[usize]) -> FusionTable {
        let top = self.r - 2;
        let pos: BTreeMap<usize, usize> = twice.iter().enumerate().map(|(i, &w)| (w, i)).collect();
        let products = twice
            .iter()
            .map(|&a| {
                twice
                    .iter()
                    .map(|&b| {
                        let lo = a.abs_diff(b);
                        let hi = (a + b).min(2 * top - a - b);
                        (lo..=hi)
                            .step_by(2)
                            .filter_map(|c| pos.get(&c).map(|&i| (Label(i), 1)))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        FusionTable::new(products)
    }

    fn category_over(self: &Arc<Self>, name: String, twice: Vec<usize>) -> CategoryData {
        let transparent = twice
            .iter()
            .map(|&j| twice.iter().all(|&k| approx_eq(self.hopf(j, k), self.dims[j] * self.dims[k], 1e-9)))
            .collect();
        let fusion = self.fusion(&twice);
        CategoryData::new(
            name,
            BackendKind::Templieb,
            twice.iter().map(|&w| spin_name(w)).collect(),
            twice.iter().map(|&w| self.dims[w]).collect(),
            twice.iter().map(|&w| self.twists[w]).collect(),
            (0..twice.len()).map(Label).collect(),
            transparent,
        )
        .expect("consistent spin data")
        .with_fusion(fusion)
        .with_evaluator(Arc::new(TlEvaluator { tl: self.clone(), widths: twice }))
    }

    /// All spins.
    pub fn category_data(self: &Arc<Self>) -> CategoryData {
        self.category_over(format!("TL(r={})", self.r), (0..=self.r - 2).collect())
    }

    /// The full subcategory of integer spins.
    pub fn integer_spins(self: &Arc<Self>) -> CategoryData {
        self.category_over(format!("TL(r={})_int", self.r), (0..=self.r - 2).step_by(2).collect())
    }

    /// Inclusion of the integer spins into all spins.
    pub fn integer_spin_inclusion(self: &Arc<Self>) -> Result<PivotalFunctorData> {
        let source = Arc::new(self.integer_spins());
        let target = Arc::new(self.category_data());
        let image = (0..source.rank()).map(|i| Colour::simple(Label(2 * i))).collect();
        PivotalFunctorData::new("integer-spins", source, target, image)
    }
}

/// Link evaluator for a set of spins of a [`TemperleyLieb`] category.
pub struct TlEvaluator {
    tl: Arc<TemperleyLieb>,
    widths: Vec<usize>,
}

impl TlEvaluator {
    fn widths(&self, labels: &[Label]) -> Vec<usize> {
        labels.iter().map(|l| self.widths[l.0]).collect()
    }
}

impl LinkEvaluator for TlEvaluator {
    fn evaluate(&self, diagram: &KirbyDiagram, labels: &[Label], opts: &EvalOptions) -> Result<C64> {
        self.tl.evaluate_link_tl(diagram, &self.widths(labels), opts.skein_cap)
    }

    fn cabled_crossings(&self, diagram: &KirbyDiagram, labels: &[Label]) -> Result<Option<usize>> {
        let pd = diagram.pd().ok_or(Error::MissingPd)?;
        let map = diagram.components().iter().map(|c| c.to_string()).zip(self.widths(labels)).collect();
        Ok(Some(self.tl.cabled_crossings(pd, &map)))
    }
}

/// Bracket of the unknot with `n` positive kinks, a convenience for tests.
pub fn kinked_unknot_bracket(a: C64, kinks: i64) -> C64 {
    bracket_of_planar_code(&PlanarCode::kinked_unknot("k", kinks), a)
}

/// `(−A³)^w δ`: the bracket of an unknot diagram of writhe `w`.
pub fn unknot_with_writhe(a: C64, w: i64) -> C64 {
    powi(-a * a * a, w) * loop_value(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c64;
    use num_traits::One;

    #[test]
    fn level_four_constants() {
        let tl = TemperleyLieb::new(4).unwrap();
        let s2 = 2f64.sqrt();
        let d = tl.spin_dimensions();
        assert!(approx_eq(d[0], C64::one(), 1e-9));
        assert!(approx_eq(d[1], c64(-s2, 0.0), 1e-9));
        assert!(approx_eq(d[2], C64::one(), 1e-9));
        let t = tl.spin_twists();
        assert!(approx_eq(t[2], c64(-1.0, 0.0), 1e-9));
        let a = tl.a();
        assert!(approx_eq(t[1], -a * a * a, 1e-9));
        assert!(approx_eq(tl.hopf(1, 1), C64::new(0.0, 0.0), 1e-9));
        assert!(approx_eq(tl.hopf(2, 2), C64::one(), 1e-9));
        assert!(approx_eq(tl.hopf(2, 1), c64(s2, 0.0), 1e-9));
        assert_eq!((0..3).map(|j| tl.is_transparent(j)).collect::<Vec<_>>(), vec![true, false, false]);
    }

    #[test]
    fn dimensions_at_other_levels() {
        let tl3 = TemperleyLieb::new(3).unwrap();
        assert!(approx_eq(tl3.spin_dimensions()[1], c64(-1.0, 0.0), 1e-9));
        let tl5 = TemperleyLieb::new(5).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!(approx_eq(tl5.spin_dimensions()[2], c64(phi, 0.0), 1e-9));
        for tl in [&tl3, &tl5] {
            assert!(tl.spin_twists().iter().all(|t| (t.norm() - 1.0).abs() < 1e-9));
        }
    }

    #[test]
    fn integer_spin_subcategory() {
        let tl = Arc::new(TemperleyLieb::new(4).unwrap());
        let c = tl.integer_spins();
        assert_eq!(c.rank(), 2);
        assert!(c.is_transparent(Label(1)));
        let f = tl.integer_spin_inclusion().unwrap();
        let img = f.image_of_kirby_colour();
        assert_eq!(img.support(), vec![Label(0), Label(2)]);
        assert!(f.target().is_modular());
    }

    #[test]
    fn kinks_and_writhe() {
        let a = C64::from_polar(1.0, 0.41);
        for k in -2..=3 {
            assert!(approx_eq(kinked_unknot_bracket(a, k), unknot_with_writhe(a, k), 1e-9));
        }
    }

    #[test]
    fn resource_cap() {
        let tl = TemperleyLieb::new(4).unwrap();
        let pd = PlanarCode::from_braid(&["a", "b"], &[1, 1]).unwrap();
        let d = KirbyDiagram::build("hopf", &[], &[("a", 0, &[]), ("b", 0, &[])], &[("a", "b", 1)], Some(pd)).unwrap();
        assert!(tl.evaluate_link_tl(&d, &[2, 2], 8).is_ok());
        assert!(matches!(tl.evaluate_link_tl(&d, &[2, 2], 7), Err(Error::ResourceLimit { needed: 8, cap: 7 })));
        assert!(matches!(tl.evaluate_link_tl(&d.without_pd(), &[1, 1], 24), Err(Error::MissingPd)));
    }
}
