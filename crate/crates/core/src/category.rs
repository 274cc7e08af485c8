//! Premodular category data shared by all backends: simple labels, dimensions,
//! twists, duality, transparency, colours and pivotal functors.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::kirby::KirbyDiagram;
use crate::scalar::{approx_eq, format_complex, C64, TOLERANCE};
use crate::{Error, Result};

/// Index of a simple object within its category. Label 0 is always the unit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Label(pub usize);

impl Label {
    pub const UNIT: Label = Label(0);
}

/// Options forwarded to link evaluators.
#[derive(Clone, Copy, Debug)]
pub struct EvalOptions {
    /// Maximum number of crossings after cabling (skein backends only).
    pub skein_cap: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { skein_cap: crate::templieb::DEFAULT_SKEIN_CAP }
    }
}

/// Capability to evaluate a labelled framed link.
///
/// `labels` has one entry per component of `diagram`, dotted components first
/// (see [`KirbyDiagram::components`]).
pub trait LinkEvaluator: Send + Sync {
    fn evaluate(&self, diagram: &KirbyDiagram, labels: &[Label], opts: &EvalOptions) -> Result<C64>;

    /// Crossings after cabling for this labelling, when that is what bounds the cost.
    fn cabled_crossings(&self, _diagram: &KirbyDiagram, _labels: &[Label]) -> Result<Option<usize>> {
        Ok(None)
    }

    /// Evaluation specialised to one diagram, for repeated labellings.
    fn prepare<'a>(&'a self, diagram: &'a KirbyDiagram, opts: &EvalOptions) -> Box<dyn PreparedLink + 'a> {
        Box::new(Unprepared { evaluator: self, diagram, opts: *opts })
    }
}

pub trait PreparedLink: Send + Sync {
    fn evaluate(&self, labels: &[Label]) -> Result<C64>;
}

struct Unprepared<'a, E: ?Sized> {
    evaluator: &'a E,
    diagram: &'a KirbyDiagram,
    opts: EvalOptions,
}

impl<E: LinkEvaluator + ?Sized> PreparedLink for Unprepared<'_, E> {
    fn evaluate(&self, labels: &[Label]) -> Result<C64> {
        self.evaluator.evaluate(self.diagram, labels, &self.opts)
    }
}

/// Fusion multiplicities `N_ab^c`.
#[derive(Clone, Debug, PartialEq)]
pub struct FusionTable {
    products: Vec<Vec<Vec<(Label, u32)>>>,
}

impl FusionTable {
    pub fn new(products: Vec<Vec<Vec<(Label, u32)>>>) -> Self {
        FusionTable { products }
    }

    pub fn fuse(&self, a: Label, b: Label) -> &[(Label, u32)] {
        &self.products[a.0][b.0]
    }
}

/// A formal complex-linear combination of simple labels.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Colour {
    coeffs: BTreeMap<Label, C64>,
}

impl Colour {
    pub fn zero() -> Self {
        Colour::default()
    }

    pub fn simple(label: Label) -> Self {
        let mut c = Colour::zero();
        c.add_term(label, C64::one());
        c
    }

    pub fn from_terms<I: IntoIterator<Item = (Label, C64)>>(terms: I) -> Self {
        let mut c = Colour::zero();
        for (l, z) in terms {
            c.add_term(l, z);
        }
        c
    }

    pub fn add_term(&mut self, label: Label, coeff: C64) {
        let entry = self.coeffs.entry(label).or_insert_with(C64::zero);
        *entry += coeff;
        if *entry == C64::zero() {
            self.coeffs.remove(&label);
        }
    }

    pub fn coeff(&self, label: Label) -> C64 {
        self.coeffs.get(&label).copied().unwrap_or_else(C64::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Label, C64)> + '_ {
        self.coeffs.iter().map(|(l, z)| (*l, *z))
    }

    pub fn support(&self) -> Vec<Label> {
        self.coeffs.keys().copied().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, s: C64) -> Colour {
        Colour::from_terms(self.iter().map(|(l, z)| (l, z * s)))
    }

    pub fn add(&self, other: &Colour) -> Colour {
        let mut c = self.clone();
        for (l, z) in other.iter() {
            c.add_term(l, z);
        }
        c
    }

    /// Drops coefficients smaller than `tol` in modulus.
    pub fn pruned(&self, tol: f64) -> Colour {
        Colour::from_terms(self.iter().filter(|(_, z)| z.norm() > tol))
    }

    pub fn approx_eq(&self, other: &Colour, tol: f64) -> bool {
        let mut labels: Vec<Label> = self.support();
        labels.extend(other.support());
        labels.into_iter().all(|l| approx_eq(self.coeff(l), other.coeff(l), tol))
    }

    /// `Σ coeff·dim`.
    pub fn dimension(&self, cat: &CategoryData) -> C64 {
        self.iter().map(|(l, z)| z * cat.dim(l)).sum()
    }

    /// Bilinear fusion product, when the category supplies fusion rules.
    pub fn product(&self, other: &Colour, cat: &CategoryData) -> Option<Colour> {
        let table = cat.fusion.as_ref()?;
        let mut out = Colour::zero();
        for (a, x) in self.iter() {
            for (b, y) in other.iter() {
                for &(c, n) in table.fuse(a, b) {
                    out.add_term(c, x * y * n as f64);
                }
            }
        }
        Some(out)
    }

    pub fn display(&self, cat: &CategoryData) -> String {
        let parts: Vec<String> = self
            .iter()
            .map(|(l, z)| format!("{}: {}", cat.label_name(l), format_complex(z)))
            .collect();
        format!("{{{}}}", parts.join(", "))
    }
}

/// Which backend produced a category.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendKind {
    Group,
    Pointed,
    Templieb,
}

impl fmt::Display for BackendKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BackendKind::Group => "group",
            BackendKind::Pointed => "pointed",
            BackendKind::Templieb => "templieb",
        })
    }
}

/// A premodular (or, as a functor source, spherical) category presented by
/// its simple labels and their numerical data.
#[derive(Clone)]
pub struct CategoryData {
    name: String,
    backend: BackendKind,
    labels: Vec<String>,
    dims: Vec<C64>,
    twists: Vec<C64>,
    duals: Vec<Label>,
    transparent: Vec<bool>,
    fusion: Option<FusionTable>,
    evaluator: Option<Arc<dyn LinkEvaluator>>,
}

impl fmt::Debug for CategoryData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CategoryData")
            .field("name", &self.name)
            .field("backend", &self.backend)
            .field("labels", &self.labels)
            .field("has_evaluator", &self.evaluator.is_some())
            .finish()
    }
}

impl CategoryData {
    pub fn new(
        name: impl Into<String>,
        backend: BackendKind,
        labels: Vec<String>,
        dims: Vec<C64>,
        twists: Vec<C64>,
        duals: Vec<Label>,
        transparent: Vec<bool>,
    ) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::InvalidCategory("no simple labels".into()));
        }
        if dims.len() != n || twists.len() != n || duals.len() != n || transparent.len() != n {
            return Err(Error::InvalidCategory("label data of unequal lengths".into()));
        }
        if let Some(d) = duals.iter().find(|d| d.0 >= n) {
            return Err(Error::InvalidCategory(format!("dual label {} out of range", d.0)));
        }
        Ok(CategoryData {
            name: name.into(),
            backend,
            labels,
            dims,
            twists,
            duals,
            transparent,
            fusion: None,
            evaluator: None,
        })
    }

    pub fn with_fusion(mut self, fusion: FusionTable) -> Self {
        self.fusion = Some(fusion);
        self
    }

    pub fn with_evaluator(mut self, evaluator: Arc<dyn LinkEvaluator>) -> Self {
        self.evaluator = Some(evaluator);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn backend(&self) -> BackendKind {
        self.backend
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> {
        (0..self.labels.len()).map(Label)
    }

    pub fn unit(&self) -> Label {
        Label::UNIT
    }

    pub fn label_name(&self, l: Label) -> &str {
        &self.labels[l.0]
    }

    pub fn label_by_name(&self, name: &str) -> Option<Label> {
        self.labels.iter().position(|n| n == name).map(Label)
    }

    pub fn dim(&self, l: Label) -> C64 {
        self.dims[l.0]
    }

    pub fn twist(&self, l: Label) -> C64 {
        self.twists[l.0]
    }

    pub fn dual(&self, l: Label) -> Label {
        self.duals[l.0]
    }

    pub fn is_transparent(&self, l: Label) -> bool {
        self.transparent[l.0]
    }

    pub fn fusion(&self) -> Option<&FusionTable> {
        self.fusion.as_ref()
    }

    pub fn evaluator(&self) -> Option<&Arc<dyn LinkEvaluator>> {
        self.evaluator.as_ref()
    }

    pub fn is_modular(&self) -> bool {
        self.labels().all(|l| l == Label::UNIT || !self.is_transparent(l))
    }
}

/// `Σ_X dim(X)·X`.
pub fn kirby_colour(cat: &CategoryData) -> Colour {
    Colour::from_terms(cat.labels().map(|l| (l, cat.dim(l))))
}

/// `Σ_X dim(X)²`, required to be a positive real.
pub fn global_dimension(cat: &CategoryData) -> Result<C64> {
    let g: C64 = cat.labels().map(|l| cat.dim(l) * cat.dim(l)).sum();
    if g.re <= 0.0 || g.im.abs() > TOLERANCE * (1.0 + g.re.abs()) {
        return Err(Error::NonPositiveGlobalDimension(format_complex(g)));
    }
    Ok(g)
}

/// Restriction of a colour to the transparent labels.
pub fn transparent_part(cat: &CategoryData, c: &Colour) -> Colour {
    Colour::from_terms(c.iter().filter(|(l, _)| cat.is_transparent(*l)))
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ValidationReport {
    pub category: String,
    pub violations: Vec<String>,
    pub modular: bool,
    pub transparent: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the axioms the invariant needs from a target category.
pub fn validate_target_category(cat: &CategoryData) -> ValidationReport {
    let mut v = Vec::new();
    let tol = TOLERANCE;
    let unit = cat.unit();
    if !approx_eq(cat.dim(unit), C64::one(), tol) {
        v.push(format!("dim(unit) = {}", format_complex(cat.dim(unit))));
    }
    if !approx_eq(cat.twist(unit), C64::one(), tol) {
        v.push(format!("twist(unit) = {}", format_complex(cat.twist(unit))));
    }
    for l in cat.labels() {
        let name = cat.label_name(l);
        let d = cat.dual(l);
        if cat.dual(d) != l {
            v.push(format!("dual is not an involution at {name}"));
        }
        if !approx_eq(cat.dim(d), cat.dim(l), tol) {
            v.push(format!("dim(dual({name})) != dim({name})"));
        }
        if !approx_eq(cat.twist(d), cat.twist(l), tol) {
            v.push(format!("twist(dual({name})) != twist({name})"));
        }
        if (cat.twist(l).norm() - 1.0).abs() > tol {
            v.push(format!("twist({name}) is not of unit modulus"));
        }
        if cat.is_transparent(l) && !approx_eq(cat.twist(l), C64::one(), tol) {
            v.push(format!(
                "transparent label {name} has nontrivial twist {}",
                format_complex(cat.twist(l))
            ));
        }
    }
    if let Err(e) = global_dimension(cat) {
        v.push(e.to_string());
    }
    ValidationReport {
        category: cat.name().to_string(),
        violations: v,
        modular: cat.is_modular(),
        transparent: cat
            .labels()
            .filter(|&l| cat.is_transparent(l))
            .map(|l| cat.label_name(l).to_string())
            .collect(),
    }
}

/// A pivotal functor presented by its action on simple labels.
#[derive(Clone, Debug)]
pub struct PivotalFunctorData {
    name: String,
    source: Arc<CategoryData>,
    target: Arc<CategoryData>,
    image: Vec<Colour>,
}

impl PivotalFunctorData {
    /// Builds and validates a functor. Image coefficients must be nonnegative
    /// integers, the unit must map to the unit, and dimensions are preserved.
    pub fn new(
        name: impl Into<String>,
        source: Arc<CategoryData>,
        target: Arc<CategoryData>,
        image: Vec<Colour>,
    ) -> Result<Self> {
        let name = name.into();
        if image.len() != source.rank() {
            return Err(Error::InvalidFunctor(format!(
                "{name}: image has {} entries, source has {} labels",
                image.len(),
                source.rank()
            )));
        }
        for (x, c) in image.iter().enumerate() {
            for (y, z) in c.iter() {
                if y.0 >= target.rank() {
                    return Err(Error::InvalidFunctor(format!("{name}: target label {} out of range", y.0)));
                }
                if z.im.abs() > TOLERANCE || z.re < -TOLERANCE || (z.re - z.re.round()).abs() > TOLERANCE {
                    return Err(Error::InvalidFunctor(format!(
                        "{name}: multiplicity {} of {} in F({}) is not a nonnegative integer",
                        format_complex(z),
                        target.label_name(y),
                        source.label_name(Label(x))
                    )));
                }
            }
            if c.is_zero() {
                return Err(Error::InvalidFunctor(format!(
                    "{name}: F({}) is zero",
                    source.label_name(Label(x))
                )));
            }
        }
        let unit_image = &image[source.unit().0];
        if unit_image.support() != vec![target.unit()]
            || !approx_eq(unit_image.coeff(target.unit()), C64::one(), TOLERANCE)
        {
            return Err(Error::InvalidFunctor(format!("{name}: unit does not map to unit")));
        }
        let f = PivotalFunctorData { name, source, target, image };
        for x in f.source.labels() {
            let d_img = f.image[x.0].dimension(&f.target);
            if !approx_eq(d_img, f.source.dim(x), 1e-9) {
                return Err(Error::InvalidFunctor(format!(
                    "{}: dim F({}) = {} but dim {} = {}",
                    f.name,
                    f.source.label_name(x),
                    format_complex(d_img),
                    f.source.label_name(x),
                    format_complex(f.source.dim(x))
                )));
            }
        }
        if f.source.fusion().is_some() && f.target.fusion().is_some() {
            for a in f.source.labels() {
                for b in f.source.labels() {
                    let lhs = f.image[a.0].product(&f.image[b.0], &f.target).expect("fusion");
                    let ab = Colour::simple(a).product(&Colour::simple(b), &f.source).expect("fusion");
                    let rhs = f.apply(&ab);
                    if !lhs.approx_eq(&rhs, 1e-9) {
                        return Err(Error::InvalidFunctor(format!(
                            "{}: not multiplicative on {} ⊗ {}",
                            f.name,
                            f.source.label_name(a),
                            f.source.label_name(b)
                        )));
                    }
                }
            }
        }
        Ok(f)
    }

    pub fn identity(cat: Arc<CategoryData>) -> Self {
        let image = cat.labels().map(Colour::simple).collect();
        PivotalFunctorData { name: "id".into(), source: cat.clone(), target: cat, image }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &Arc<CategoryData> {
        &self.source
    }

    pub fn target(&self) -> &Arc<CategoryData> {
        &self.target
    }

    pub fn image(&self, x: Label) -> &Colour {
        &self.image[x.0]
    }

    /// Linear extension of the label map.
    pub fn apply(&self, c: &Colour) -> Colour {
        let mut out = Colour::zero();
        for (x, z) in c.iter() {
            for (y, m) in self.image[x.0].iter() {
                out.add_term(y, z * m);
            }
        }
        out
    }

    /// `FΩ_C`.
    pub fn image_of_kirby_colour(&self) -> Colour {
        self.apply(&kirby_colour(&self.source))
    }

    /// The target label of each source label, when every image is a single
    /// simple object with multiplicity one.
    pub fn simple_label_map(&self) -> Option<Vec<Label>> {
        self.image
            .iter()
            .map(|c| {
                let s = c.support();
                (s.len() == 1 && approx_eq(c.coeff(s[0]), C64::one(), TOLERANCE)).then_some(s[0])
            })
            .collect()
    }

    /// Injective on simple labels with simple images: the decidable part of fullness.
    pub fn is_injective_label_map(&self) -> bool {
        match self.simple_label_map() {
            Some(map) => {
                let mut sorted = map.clone();
                sorted.sort();
                sorted.dedup();
                sorted.len() == map.len()
            }
            None => false,
        }
    }
}

/// `apply_functor` as a free function.
pub fn apply_functor(f: &PivotalFunctorData, c: &Colour) -> Colour {
    f.apply(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c64;

    fn trivial() -> CategoryData {
        CategoryData::new(
            "Vec",
            BackendKind::Pointed,
            vec!["0".into()],
            vec![C64::one()],
            vec![C64::one()],
            vec![Label(0)],
            vec![true],
        )
        .unwrap()
    }

    #[test]
    fn trivial_category_kirby_colour() {
        let cat = trivial();
        let omega = kirby_colour(&cat);
        assert_eq!(omega.support(), vec![Label(0)]);
        assert_eq!(omega.coeff(Label(0)), C64::one());
        assert_eq!(global_dimension(&cat).unwrap(), C64::one());
    }

    #[test]
    fn symmetric_category_transparent_part_is_identity() {
        let cat = trivial();
        let c = Colour::simple(Label(0)).scale(c64(2.0, 1.0));
        assert_eq!(transparent_part(&cat, &c), c);
    }

    #[test]
    fn negative_global_dimension_rejected() {
        let cat = CategoryData::new(
            "bad",
            BackendKind::Pointed,
            vec!["0".into(), "x".into()],
            vec![C64::one(), c64(0.0, 2.0)],
            vec![C64::one(), C64::one()],
            vec![Label(0), Label(1)],
            vec![true, false],
        )
        .unwrap();
        assert!(matches!(global_dimension(&cat), Err(Error::NonPositiveGlobalDimension(_))));
        assert!(!validate_target_category(&cat).is_valid());
    }

    #[test]
    fn colour_arithmetic_cancels() {
        let mut c = Colour::simple(Label(1));
        c.add_term(Label(1), -C64::one());
        assert!(c.is_zero());
    }
}
