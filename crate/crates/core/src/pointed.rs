//! Pointed braided categories: a finite abelian group of invertible simple
//! objects with a quadratic form `q`, twist `exp(2πi q)` and double-braiding
//! phase `b(a, a') = q(a + a') − q(a) − q(a')`. Phases are exact in `Q/Z`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::category::{
    BackendKind, CategoryData, Colour, EvalOptions, FusionTable, Label, LinkEvaluator, PivotalFunctorData,
    PreparedLink,
};
use crate::kirby::KirbyDiagram;
use crate::scalar::{powi, Phase, C64};
use crate::{Error, Result};

/// `Z_{n_1} × ... × Z_{n_r}`; element indices are mixed-radix with the first
/// factor most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianGroup {
    factors: Vec<u64>,
}

impl AbelianGroup {
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        if factors.iter().any(|&n| n == 0) {
            return Err(Error::InvalidCategory("cyclic factor of order 0".into()));
        }
        let order: u64 = factors.iter().product();
        if order > 1 << 20 {
            return Err(Error::InvalidCategory(format!("group of order {order} is too large")));
        }
        Ok(AbelianGroup { factors })
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        Self::new(vec![n])
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> usize {
        self.factors.iter().product::<u64>() as usize
    }

    pub fn tuple(&self, mut a: usize) -> Vec<u64> {
        let mut t = vec![0; self.factors.len()];
        for (i, &n) in self.factors.iter().enumerate().rev() {
            t[i] = a as u64 % n;
            a /= n as usize;
        }
        t
    }

    pub fn index(&self, t: &[u64]) -> usize {
        t.iter().zip(&self.factors).fold(0usize, |acc, (&x, &n)| acc * n as usize + (x % n) as usize)
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let (x, y) = (self.tuple(a), self.tuple(b));
        let s: Vec<u64> = x.iter().zip(&y).map(|(p, q)| p + q).collect();
        self.index(&s)
    }

    pub fn neg(&self, a: usize) -> usize {
        let t: Vec<u64> = self.tuple(a).iter().zip(&self.factors).map(|(&x, &n)| (n - x) % n).collect();
        self.index(&t)
    }

    /// `k·a`.
    pub fn mul(&self, k: i64, a: usize) -> usize {
        let t: Vec<u64> = self
            .tuple(a)
            .iter()
            .zip(&self.factors)
            .map(|(&x, &n)| (k.rem_euclid(n as i64) as u64 * x) % n)
            .collect();
        self.index(&t)
    }

    pub fn name(&self, a: usize) -> String {
        self.tuple(a).iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
    }

    pub fn parse(&self, s: &str) -> Result<usize> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != self.factors.len() {
            return Err(Error::Schema(format!("label '{s}' does not have {} components", self.factors.len())));
        }
        let mut t = Vec::new();
        for (p, &n) in parts.iter().zip(&self.factors) {
            let x: i64 = p.parse().map_err(|_| Error::Schema(format!("bad label '{s}'")))?;
            t.push(x.rem_euclid(n as i64) as u64);
        }
        Ok(self.index(&t))
    }
}

#[derive(Clone, Debug)]
pub struct PointedCategory {
    name: String,
    group: AbelianGroup,
    q: Vec<Phase>,
    /// Common denominator of all values of `q`.
    den: i64,
    /// `q` and, for small groups, `b` as numerators over `den`.
    qn: Vec<i64>,
    bn: Option<Vec<i64>>,
}

impl PointedCategory {
    /// Validates `q(0) = 0`, `q(−a) = q(a)` and biadditivity of `b`.
    pub fn new(name: impl Into<String>, group: AbelianGroup, q: Vec<Phase>) -> Result<Self> {
        let name = name.into();
        if q.len() != group.order() {
            return Err(Error::InvalidCategory(format!("q has {} values for a group of order {}", q.len(), group.order())));
        }
        let den = q.iter().fold(1i64, |acc, p| num_integer::lcm(acc, p.denom()));
        let qn: Vec<i64> = q.iter().map(|p| p.ratio().numer() * (den / p.denom())).collect();
        let mut cat = PointedCategory { name, group, q, den, qn, bn: None };
        let n = cat.group.order();
        if n <= 2048 {
            let mut bn = vec![0i64; n * n];
            for a in 0..n {
                for a2 in 0..n {
                    bn[a * n + a2] = (cat.qn[cat.group.add(a, a2)] - cat.qn[a] - cat.qn[a2]).rem_euclid(den);
                }
            }
            cat.bn = Some(bn);
        }
        if !cat.q[0].is_zero() {
            return Err(Error::InvalidCategory("q(0) must be 0".into()));
        }
        for a in 0..n {
            if cat.q[cat.group.neg(a)] != cat.q[a] {
                return Err(Error::InvalidCategory(format!("q(-a) != q(a) at a = {}", cat.group.name(a))));
            }
        }
        for a in 0..n {
            for a2 in 0..n {
                let s = cat.group.add(a, a2);
                for c in 0..n {
                    if cat.bilinear(s, c) != cat.bilinear(a, c) + cat.bilinear(a2, c) {
                        return Err(Error::InvalidCategory(format!(
                            "b is not biadditive at ({}, {}, {})",
                            cat.group.name(a),
                            cat.group.name(a2),
                            cat.group.name(c)
                        )));
                    }
                }
            }
        }
        Ok(cat)
    }

    /// `q(k) = Σ k_i² / n_i`, the anyonic braiding on each cyclic factor.
    pub fn anyonic(factors: Vec<u64>) -> Result<Self> {
        let group = AbelianGroup::new(factors)?;
        let q = (0..group.order())
            .map(|a| {
                group
                    .tuple(a)
                    .iter()
                    .zip(group.factors())
                    .fold(Phase::zero(), |acc, (&k, &n)| acc + Phase::new((k * k) as i64, n as i64))
            })
            .collect();
        let name = format!("Z{}(anyonic)", group.factors().iter().map(|n| n.to_string()).collect::<Vec<_>>().join("xZ"));
        Self::new(name, group, q)
    }

    /// `Z_n` with `q(k) = k² / den`, which must be well defined mod `n`.
    pub fn cyclic_with_form(n: u64, den: u64) -> Result<Self> {
        let (n_, d_) = (n as i64, den as i64);
        if den == 0 || (2 * n_) % d_ != 0 || (n_ * n_) % d_ != 0 {
            return Err(Error::InvalidCategory(format!("k^2/{den} is not well defined on Z{n}")));
        }
        let group = AbelianGroup::cyclic(n)?;
        let q = (0..n_).map(|k| Phase::new(k * k, d_)).collect();
        Self::new(format!("Z{n}(q=k^2/{den})"), group, q)
    }

    /// All twists trivial: the symmetric category `Vec_A`.
    pub fn trivial(factors: Vec<u64>) -> Result<Self> {
        let group = AbelianGroup::new(factors)?;
        let q = vec![Phase::zero(); group.order()];
        let name = format!("Vec(Z{})", group.factors().iter().map(|n| n.to_string()).collect::<Vec<_>>().join("xZ"));
        Self::new(name, group, q)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn q(&self, a: usize) -> Phase {
        self.q[a]
    }

    pub fn bilinear(&self, a: usize, a2: usize) -> Phase {
        Phase::new(self.bilinear_numer(a, a2), self.den)
    }

    fn bilinear_numer(&self, a: usize, a2: usize) -> i64 {
        match &self.bn {
            Some(t) => t[a * self.order() + a2],
            None => (self.qn[self.group.add(a, a2)] - self.qn[a] - self.qn[a2]).rem_euclid(self.den),
        }
    }

    pub fn twist(&self, a: usize) -> C64 {
        self.q[a].to_complex()
    }

    pub fn is_transparent(&self, a: usize) -> bool {
        (0..self.order()).all(|k| self.bilinear(a, k).is_zero())
    }

    pub fn is_modular(&self) -> bool {
        (1..self.order()).all(|a| !self.is_transparent(a))
    }

    /// `Σ_i q(a_i) f_i + Σ_{i<j} b(a_i, a_j) lk_ij` over all components,
    /// dotted circles included as 0-framed.
    pub fn link_phase(&self, diagram: &KirbyDiagram, labels: &[usize]) -> Phase {
        self.phase_from_matrix(&diagram.full_linking_matrix(), labels)
    }

    fn phase_from_matrix(&self, m: &[Vec<i64>], labels: &[usize]) -> Phase {
        let d = self.den as i128;
        let mut acc: i128 = 0;
        for i in 0..labels.len() {
            acc += self.qn[labels[i]] as i128 * m[i][i] as i128;
            for j in i + 1..labels.len() {
                if m[i][j] != 0 {
                    acc += self.bilinear_numer(labels[i], labels[j]) as i128 * m[i][j] as i128;
                }
            }
            acc = acc.rem_euclid(d);
        }
        Phase::new(acc as i64, self.den)
    }

    pub fn evaluate_link_pointed(&self, diagram: &KirbyDiagram, labels: &[usize]) -> C64 {
        self.link_phase(diagram, labels).to_complex()
    }

    /// `Σ_k exp(2πi b(k, a))`, decided exactly: the character `b(·, a)` takes
    /// each value of its cyclic image equally often, so the sum is `|A|` if
    /// the image is trivial and `0` otherwise.
    pub fn killing_sum_exact(&self, a: usize) -> i64 {
        let mut hist: BTreeMap<Phase, usize> = BTreeMap::new();
        for k in 0..self.order() {
            *hist.entry(self.bilinear(k, a)).or_default() += 1;
        }
        let m = hist.len();
        let uniform = hist.values().all(|&c| c * m == self.order());
        let cyclic = hist.keys().all(|p| (p.denom() as usize) <= m && m % p.denom() as usize == 0);
        assert!(uniform && cyclic, "character image is not a uniformly covered cyclic group");
        if m == 1 { self.order() as i64 } else { 0 }
    }

    /// The same sum in floating point.
    pub fn killing_sum(&self, a: usize) -> C64 {
        (0..self.order()).map(|k| self.bilinear(k, a).to_complex()).sum()
    }

    pub fn category_data(self: &Arc<Self>) -> CategoryData {
        let n = self.order();
        let g = &self.group;
        let fusion =
            FusionTable::new((0..n).map(|a| (0..n).map(|b| vec![(Label(g.add(a, b)), 1)]).collect()).collect());
        CategoryData::new(
            self.name.clone(),
            BackendKind::Pointed,
            (0..n).map(|a| g.name(a)).collect(),
            vec![C64::one(); n],
            (0..n).map(|a| self.twist(a)).collect(),
            (0..n).map(|a| Label(g.neg(a))).collect(),
            (0..n).map(|a| self.is_transparent(a)).collect(),
        )
        .expect("consistent pointed data")
        .with_fusion(fusion)
        .with_evaluator(Arc::new(PointedEvaluator { cat: self.clone() }))
    }

    /// The functor `Vec_P -> self` (or between two pointed categories) given
    /// by a group homomorphism on labels, presented by generator images.
    pub fn hom_functor(
        name: &str,
        source: &Arc<PointedCategory>,
        target: &Arc<PointedCategory>,
        generator_images: &[usize],
    ) -> Result<PivotalFunctorData> {
        let sg = source.group();
        if generator_images.len() != sg.factors().len() {
            return Err(Error::InvalidFunctor(format!(
                "{} generator images for {} cyclic factors",
                generator_images.len(),
                sg.factors().len()
            )));
        }
        for (i, (&img, &n)) in generator_images.iter().zip(sg.factors()).enumerate() {
            if target.group().mul(n as i64, img) != 0 {
                return Err(Error::InvalidFunctor(format!(
                    "image of generator {i} has order not dividing {n}"
                )));
            }
        }
        let map: Vec<usize> = (0..sg.order())
            .map(|a| {
                sg.tuple(a)
                    .iter()
                    .zip(generator_images)
                    .fold(0, |acc, (&k, &img)| target.group().add(acc, target.group().mul(k as i64, img)))
            })
            .collect();
        let image = map.iter().map(|&b| Colour::simple(Label(b))).collect();
        PivotalFunctorData::new(name, Arc::new(source.category_data()), Arc::new(target.category_data()), image)
    }
}

pub struct PointedEvaluator {
    cat: Arc<PointedCategory>,
}

impl LinkEvaluator for PointedEvaluator {
    fn evaluate(&self, diagram: &KirbyDiagram, labels: &[Label], _opts: &EvalOptions) -> Result<C64> {
        let l: Vec<usize> = labels.iter().map(|l| l.0).collect();
        Ok(self.cat.evaluate_link_pointed(diagram, &l))
    }

    fn prepare<'a>(&'a self, diagram: &'a KirbyDiagram, _opts: &EvalOptions) -> Box<dyn PreparedLink + 'a> {
        Box::new(PreparedPointed { cat: &self.cat, matrix: diagram.full_linking_matrix() })
    }
}

struct PreparedPointed<'a> {
    cat: &'a PointedCategory,
    matrix: Vec<Vec<i64>>,
}

impl PreparedLink for PreparedPointed<'_> {
    fn evaluate(&self, labels: &[Label]) -> Result<C64> {
        let l: Vec<usize> = labels.iter().map(|l| l.0).collect();
        Ok(self.cat.phase_from_matrix(&self.matrix, &l).to_complex())
    }
}

/// Sum over 2-handle labellings in the support of `FΩ_C` whose signed label
/// sum through every dotted circle vanishes. Requires a modular target.
pub fn kirby_direct_pointed(target: &PointedCategory, f: &PivotalFunctorData, diagram: &KirbyDiagram) -> Result<C64> {
    if !target.is_modular() {
        return Err(Error::NotModular);
    }
    let colour = f.image_of_kirby_colour();
    let support: Vec<(usize, C64)> = colour.iter().map(|(l, c)| (l.0, c)).collect();
    let (h1, h2) = (diagram.h1(), diagram.h2());
    if h2 == 0 {
        return Ok(C64::one());
    }
    let full = diagram.full_linking_matrix();
    let g = target.group();
    let term = |choice: &[usize]| -> C64 {
        let labels: Vec<usize> = choice.iter().map(|&i| support[i].0).collect();
        for d in 0..h1 {
            let mut s = 0;
            for (a, &x) in labels.iter().enumerate() {
                s = g.add(s, g.mul(full[d][h1 + a], x));
            }
            if s != 0 {
                return C64::zero();
            }
        }
        let mut phase = Phase::zero();
        for a in 0..h2 {
            phase = phase + target.q(labels[a]).scale(full[h1 + a][h1 + a]);
            for b in a + 1..h2 {
                if full[h1 + a][h1 + b] != 0 {
                    phase = phase + target.bilinear(labels[a], labels[b]).scale(full[h1 + a][h1 + b]);
                }
            }
        }
        let coeff: C64 = choice.iter().map(|&i| support[i].1).product();
        coeff * phase.to_complex()
    };
    let k = support.len();
    let partials: Vec<C64> = (0..k)
        .into_par_iter()
        .map(|first| {
            let mut choice = vec![0usize; h2];
            choice[0] = first;
            let mut acc = C64::zero();
            loop {
                acc += term(&choice);
                let mut i = 1;
                loop {
                    if i == h2 {
                        return acc;
                    }
                    choice[i] += 1;
                    if choice[i] < k {
                        break;
                    }
                    choice[i] = 0;
                    i += 1;
                }
            }
        })
        .collect();
    Ok(partials.into_iter().sum())
}

/// The invariant from the direct sum: `K / (qdimΩ_C^{h2−h1} · n^{h1})` with
/// `n` the multiplicity of the unit in `FΩ_C`.
pub fn kirby_direct_invariant(target: &PointedCategory, f: &PivotalFunctorData, diagram: &KirbyDiagram) -> Result<C64> {
    let k = kirby_direct_pointed(target, f, diagram)?;
    let dim_c = crate::category::global_dimension(f.source())?;
    let n = f.image_of_kirby_colour().coeff(Label::UNIT);
    let (h1, h2) = (diagram.h1() as i64, diagram.h2() as i64);
    Ok(k / (powi(dim_c, h2 - h1) * powi(n, h1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::{kirby_colour, transparent_part, validate_target_category};
    use crate::scalar::approx_eq;

    #[test]
    fn transparency_in_cyclic_anyons() {
        let z5 = PointedCategory::anyonic(vec![5]).unwrap();
        assert!(z5.is_modular());
        let z4 = PointedCategory::anyonic(vec![4]).unwrap();
        assert_eq!((0..4).filter(|&a| z4.is_transparent(a)).collect::<Vec<_>>(), vec![0, 2]);
        let z6 = PointedCategory::anyonic(vec![6]).unwrap();
        assert_eq!((0..6).filter(|&a| z6.is_transparent(a)).collect::<Vec<_>>(), vec![0, 3]);
        assert_eq!(z6.q(3), Phase::new(1, 2));
    }

    #[test]
    fn target_validation() {
        for (n, ok) in [(2, false), (4, true), (5, true), (6, false)] {
            let c = Arc::new(PointedCategory::anyonic(vec![n]).unwrap());
            assert_eq!(validate_target_category(&c.category_data()).is_valid(), ok, "Z{n}");
        }
    }

    #[test]
    fn kirby_and_transparent_colours() {
        let z4 = Arc::new(PointedCategory::anyonic(vec![4]).unwrap()).category_data();
        let omega = kirby_colour(&z4);
        assert_eq!(omega.support().len(), 4);
        assert_eq!(transparent_part(&z4, &omega).support(), vec![Label(0), Label(2)]);
    }

    #[test]
    fn link_values() {
        let z5 = PointedCategory::anyonic(vec![5]).unwrap();
        let hopf = KirbyDiagram::build("h", &[], &[("a", 0, &[]), ("b", 0, &[])], &[("a", "b", 1)], None).unwrap();
        assert_eq!(z5.link_phase(&hopf, &[1, 1]), Phase::new(2, 5));
        assert_eq!(z5.link_phase(&hopf, &[0, 0]), Phase::zero());
        let u = KirbyDiagram::build("u", &[], &[("a", 1, &[])], &[], None).unwrap();
        for k in 0..5 {
            assert_eq!(z5.link_phase(&u, &[k]), Phase::new((k * k) as i64, 5));
        }
    }

    #[test]
    fn killing_sums() {
        for n in 3..=8 {
            let c = PointedCategory::anyonic(vec![n]).unwrap();
            for a in 0..c.order() {
                let exact = c.killing_sum_exact(a);
                assert_eq!(exact, if c.is_transparent(a) { n as i64 } else { 0 });
                assert!(approx_eq(c.killing_sum(a), C64::new(exact as f64, 0.0), 1e-9));
            }
        }
    }

    #[test]
    fn forms_and_products() {
        assert!(PointedCategory::cyclic_with_form(8, 16).unwrap().is_modular());
        assert!(PointedCategory::cyclic_with_form(4, 16).is_err());
        let p = PointedCategory::anyonic(vec![2, 3]).unwrap();
        assert_eq!(p.order(), 6);
        assert_eq!(p.group().name(5), "1,2");
        assert_eq!(p.group().parse("1,2").unwrap(), 5);
        let bad = PointedCategory::new("bad", AbelianGroup::cyclic(3).unwrap(), vec![Phase::zero(), Phase::new(1, 3), Phase::zero()]);
        assert!(bad.is_err());
    }

    #[test]
    fn functor_by_generator_images() {
        let z3 = Arc::new(PointedCategory::trivial(vec![3]).unwrap());
        let z6 = Arc::new(PointedCategory::anyonic(vec![6]).unwrap());
        let f = PointedCategory::hom_functor("2k", &z3, &z6, &[2]).unwrap();
        assert_eq!(f.image_of_kirby_colour().support(), vec![Label(0), Label(2), Label(4)]);
        assert!(f.is_injective_label_map());
        assert!(PointedCategory::hom_functor("bad", &z3, &z6, &[1]).is_err());
    }
}
