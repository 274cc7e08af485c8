//! The generalised dichromatic invariant
//!
//! `I_F(L) = ⟨L(Ω_D, FΩ_C)⟩ / (dimΩ_C^{h2−h1} · (dimΩ_D · dim(FΩ_C)')^{h1})`
//!
//! and the quantities derived from it.

use std::sync::Arc;

use num_rational::Ratio;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::category::{
    global_dimension, kirby_colour, transparent_part, validate_target_category, BackendKind, EvalOptions,
    Label, PivotalFunctorData,
};
use crate::group::{count_flat_connections, hom_invariant, FiniteGroup, GroupHom};
use crate::kirby::{KirbyDiagram, PlanarCode};
use crate::library::CategoryConstants;
use crate::scalar::{approx_eq, format_complex, powi, C64, TOLERANCE};
use crate::templieb::DEFAULT_SKEIN_CAP;
use crate::{Error, Result};

/// What is being computed.
#[derive(Clone, Debug)]
pub enum Theory {
    /// A pivotal functor into a premodular category with a link evaluator.
    Functor(Arc<PivotalFunctorData>),
    /// `Rep(G)` with trivial braiding, by counting flat connections.
    DijkgraafWitten(FiniteGroup),
    /// The homomorphism generalisation `φ: P -> G`.
    GroupPullback(GroupHom),
}

impl Theory {
    pub fn backend(&self) -> String {
        match self {
            Theory::Functor(f) => f.target().backend().to_string(),
            _ => BackendKind::Group.to_string(),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Theory::Functor(f) => format!("{}: {} -> {}", f.name(), f.source().name(), f.target().name()),
            Theory::DijkgraafWitten(g) => format!("Rep({})", g.name()),
            Theory::GroupPullback(phi) => format!("{}: {} -> {}", phi.name, phi.source.name(), phi.target.name()),
        }
    }

    /// `dimΩ_C`.
    pub fn source_dimension(&self) -> Result<C64> {
        match self {
            Theory::Functor(f) => global_dimension(f.source()),
            Theory::DijkgraafWitten(g) => Ok(C64::new(g.order() as f64, 0.0)),
            Theory::GroupPullback(phi) => Ok(C64::new(phi.image()?.order() as f64, 0.0)),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct EngineOptions {
    pub tolerance: f64,
    pub skein_cap: usize,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions { tolerance: TOLERANCE, skein_cap: DEFAULT_SKEIN_CAP }
    }
}

#[derive(Clone, Debug)]
pub struct InvariantRequest {
    pub theory: Theory,
    pub diagram: KirbyDiagram,
    pub options: EngineOptions,
}

impl InvariantRequest {
    pub fn new(theory: Theory, diagram: KirbyDiagram) -> Self {
        InvariantRequest { theory, diagram, options: EngineOptions::default() }
    }

    pub fn functor(f: &Arc<PivotalFunctorData>, diagram: &KirbyDiagram) -> Self {
        Self::new(Theory::Functor(f.clone()), diagram.clone())
    }

    pub fn with_options(mut self, options: EngineOptions) -> Self {
        self.options = options;
        self
    }
}

#[derive(Clone, Debug)]
pub struct InvariantResult {
    pub value: C64,
    pub numerator: C64,
    pub normalization: C64,
    /// Exact value, for the group backends.
    pub exact: Option<Ratio<i128>>,
    pub h1: usize,
    pub h2: usize,
    pub chi: i64,
    pub sigma: i64,
    pub backend: String,
    pub functor: String,
    pub diagram: String,
    pub provenance: Vec<String>,
}

impl InvariantResult {
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "value": [self.value.re, self.value.im],
            "numerator": [self.numerator.re, self.numerator.im],
            "normalization": [self.normalization.re, self.normalization.im],
            "h1": self.h1,
            "h2": self.h2,
            "chi": self.chi,
            "sigma": self.sigma,
            "backend": self.backend,
            "functor": self.functor,
            "diagram": self.diagram,
            "provenance": self.provenance,
        });
        if let Some(e) = &self.exact {
            v["exact"] = json!(e.to_string());
        }
        v
    }

    pub fn value_string(&self) -> String {
        match &self.exact {
            Some(e) => e.to_string(),
            None => format_complex(self.value),
        }
    }
}

/// Labelling choices: dotted circles range over `Ω_D`, 2-handles over `FΩ_C`.
fn choices(f: &PivotalFunctorData, diagram: &KirbyDiagram) -> Vec<Vec<(Label, C64)>> {
    let omega_d: Vec<(Label, C64)> = kirby_colour(f.target()).iter().collect();
    let f_omega: Vec<(Label, C64)> = f.image_of_kirby_colour().iter().collect();
    (0..diagram.h1()).map(|_| omega_d.clone()).chain((0..diagram.h2()).map(|_| f_omega.clone())).collect()
}

fn for_each_labelling<F: FnMut(&[usize])>(sizes: &[usize], first: usize, mut visit: F) {
    let n = sizes.len();
    let mut idx = vec![0usize; n];
    idx[0] = first;
    loop {
        visit(&idx);
        let mut i = 1;
        loop {
            if i >= n {
                return;
            }
            idx[i] += 1;
            if idx[i] < sizes[i] {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

/// `⟨L(Ω_D, FΩ_C)⟩` by multilinear expansion over simple labellings.
pub fn numerator(f: &PivotalFunctorData, diagram: &KirbyDiagram, options: &EngineOptions) -> Result<C64> {
    let evaluator = f
        .target()
        .evaluator()
        .ok_or_else(|| Error::Unsupported(format!("{} has no link evaluator", f.target().name())))?
        .clone();
    let opts = EvalOptions { skein_cap: options.skein_cap };
    let ch = choices(f, diagram);
    if ch.is_empty() {
        return evaluator.evaluate(diagram, &[], &opts);
    }
    let sizes: Vec<usize> = ch.iter().map(Vec::len).collect();
    let labels_of = |idx: &[usize]| -> Vec<Label> { idx.iter().enumerate().map(|(i, &k)| ch[i][k].0).collect() };
    // refuse up front if some labelling exceeds the cost cap
    let mut worst = 0;
    for first in 0..sizes[0] {
        let mut err = None;
        for_each_labelling(&sizes, first, |idx| {
            if err.is_none() {
                match evaluator.cabled_crossings(diagram, &labels_of(idx)) {
                    Ok(Some(n)) => worst = worst.max(n),
                    Ok(None) => {}
                    Err(e) => err = Some(e),
                }
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
    }
    if worst > options.skein_cap {
        return Err(Error::ResourceLimit { needed: worst, cap: options.skein_cap });
    }
    let prepared = evaluator.prepare(diagram, &opts);
    let partials: Vec<Result<C64>> = (0..sizes[0])
        .into_par_iter()
        .map(|first| {
            let mut acc = C64::zero();
            let mut err = None;
            for_each_labelling(&sizes, first, |idx| {
                if err.is_some() {
                    return;
                }
                let coeff: C64 = idx.iter().enumerate().map(|(i, &k)| ch[i][k].1).product();
                match prepared.evaluate(&labels_of(idx)) {
                    Ok(v) => acc += coeff * v,
                    Err(e) => err = Some(e),
                }
            });
            match err {
                Some(e) => Err(e),
                None => Ok(acc),
            }
        })
        .collect();
    let mut total = C64::zero();
    for p in partials {
        total += p?;
    }
    Ok(total)
}

/// `dimΩ_C^{h2−h1} · (dimΩ_D · dim(FΩ_C)')^{h1}`.
pub fn normalization(f: &PivotalFunctorData, h1: usize, h2: usize) -> Result<C64> {
    let dim_c = global_dimension(f.source())?;
    let dim_d = global_dimension(f.target())?;
    let prime = transparent_part(f.target(), &f.image_of_kirby_colour()).dimension(f.target());
    Ok(powi(dim_c, h2 as i64 - h1 as i64) * powi(dim_d * prime, h1 as i64))
}

fn check_target(f: &PivotalFunctorData) -> Result<()> {
    let report = validate_target_category(f.target());
    if !report.is_valid() {
        return Err(Error::InvalidTarget(report.violations.join("; ")));
    }
    Ok(())
}

pub fn invariant(req: &InvariantRequest) -> Result<InvariantResult> {
    let d = &req.diagram;
    let (h1, h2) = (d.h1(), d.h2());
    let mut provenance = Vec::new();
    let (value, numerator_v, norm, exact) = match &req.theory {
        Theory::Functor(f) => {
            check_target(f)?;
            let num = numerator(f, d, &req.options)?;
            let norm = normalization(f, h1, h2)?;
            provenance.push(format!("link values from the {} evaluator", f.target().backend()));
            (num / norm, num, norm, None)
        }
        Theory::DijkgraafWitten(g) => {
            let count = count_flat_connections(d, g);
            provenance.push(format!("counted homomorphisms pi1 -> {}", g.name()));
            let norm = powi(C64::new(g.order() as f64, 0.0), h2 as i64 - h1 as i64);
            let value = C64::new(count as f64, 0.0);
            (value, value * norm, norm, Some(Ratio::from_integer(count as i128)))
        }
        Theory::GroupPullback(phi) => {
            let v = hom_invariant(d, phi);
            provenance.push(format!("counted assignments in {} through {}", phi.source.name(), phi.name));
            let img = phi.image()?.order();
            let norm = powi(C64::new(img as f64, 0.0), h2 as i64 - h1 as i64);
            let value = C64::new(*v.numer() as f64 / *v.denom() as f64, 0.0);
            (value, value * norm, norm, Some(v))
        }
    };
    Ok(InvariantResult {
        value,
        numerator: numerator_v,
        normalization: norm,
        exact,
        h1,
        h2,
        chi: d.euler_characteristic(),
        sigma: d.signature(),
        backend: req.theory.backend(),
        functor: req.theory.describe(),
        diagram: d.name().to_string(),
        provenance,
    })
}

/// `tr(θ_{FX}) = Σ_Y mult · d_Y · θ_Y^{±1}`.
fn twist_trace(f: &PivotalFunctorData, x: Label, conjugate: bool) -> C64 {
    f.image(x)
        .iter()
        .map(|(y, m)| {
            let t = f.target().twist(y);
            m * f.target().dim(y) * if conjugate { t.conj() } else { t }
        })
        .sum()
}

fn gauss(theory: &Theory, conjugate: bool) -> Result<C64> {
    match theory {
        Theory::Functor(f) => {
            let c = f.source();
            let s: C64 = c.labels().map(|x| c.dim(x) * twist_trace(f, x, conjugate)).sum();
            Ok(s / global_dimension(c)?)
        }
        _ => Ok(C64::one()),
    }
}

/// `I(CP²) = Σ_X d_X tr(θ_{FX}) / dimΩ_C`.
pub fn cp2_value(theory: &Theory) -> Result<C64> {
    gauss(theory, false)
}

pub fn cp2bar_value(theory: &Theory) -> Result<C64> {
    gauss(theory, true)
}

/// `I₊^{b⁺} · I₋^{b⁻}` with `b± = (χ ± σ)/2 − 1`.
pub fn predict_simply_connected(theory: &Theory, chi: i64, sigma: i64) -> Result<C64> {
    let (ip, im) = (cp2_value(theory)?, cp2bar_value(theory)?);
    if ip.norm() < TOLERANCE || im.norm() < TOLERANCE {
        return Err(Error::NonInvertibleCp2);
    }
    if (chi + sigma) % 2 != 0 {
        return Err(Error::PreconditionFailed(format!("chi = {chi} and sigma = {sigma} differ in parity")));
    }
    let bp = (chi + sigma) / 2 - 1;
    let bm = (chi - sigma) / 2 - 1;
    Ok(powi(ip, bp) * powi(im, bm))
}

/// `√(dimΩ_D · dim(FΩ_C)') / dimΩ_C`, the per-unit-χ factor between the two
/// normalizations.
fn petit_factor(theory: &Theory) -> Result<C64> {
    match theory {
        Theory::Functor(f) => {
            let dim_c = global_dimension(f.source())?;
            let dim_d = global_dimension(f.target())?;
            let prime = transparent_part(f.target(), &f.image_of_kirby_colour()).dimension(f.target());
            Ok((dim_d * prime).sqrt() / dim_c)
        }
        _ => Ok(C64::one()),
    }
}

/// The invariant in the `I₀` normalization, `I / factor^{χ−2}`.
pub fn petit_i0(req: &InvariantRequest) -> Result<C64> {
    let r = invariant(req)?;
    Ok(r.value / powi(petit_factor(&req.theory)?, r.chi - 2))
}

/// `CY = I / dimΩ_C^{1−χ}`; the functor must be a full inclusion, which is
/// checked for pointed targets and recorded as assumed otherwise.
pub fn crane_yetter_statesum_value(req: &InvariantRequest) -> Result<(C64, Vec<String>)> {
    let mut notes = Vec::new();
    if let Theory::Functor(f) = &req.theory {
        if f.target().backend() == BackendKind::Pointed {
            if !f.is_injective_label_map() {
                return Err(Error::NotInjectiveLabelMap);
            }
            notes.push("full inclusion checked by label-map injectivity".to_string());
        } else {
            notes.push("full inclusion assumed".to_string());
        }
    }
    let r = invariant(req)?;
    let dim_c = req.theory.source_dimension()?;
    Ok((r.value / powi(dim_c, 1 - r.chi), notes))
}

/// `dim Z(M) = I(S¹×M) / dimΩ_C`, for a diagram of `S¹×M`.
pub fn ground_state_dimension(req: &InvariantRequest) -> Result<C64> {
    let r = invariant(req)?;
    Ok(r.value / req.theory.source_dimension()?)
}

/// Data of the symmetric centre `C'` of the image of a functor whose labels
/// map to distinct simple objects: a label is in `C'` when its positive Hopf
/// link with every label of `C` evaluates to the product of dimensions.
#[derive(Clone, Debug)]
pub struct CentreData {
    pub labels: Vec<Label>,
    pub dimension: C64,
    /// `Σ_{X ∈ C'} d_X² θ_{FX}`; equals `dimension` when the twist is trivial on `C'`.
    pub gauss: C64,
}

pub fn hopf_diagram() -> KirbyDiagram {
    let pd = PlanarCode::from_braid(&["x", "y"], &[1, 1]).expect("Hopf link");
    KirbyDiagram::build("hopf", &[], &[("x", 0, &[]), ("y", 0, &[])], &[("x", "y", 1)], Some(pd)).expect("Hopf diagram")
}

pub fn symmetric_centre(f: &PivotalFunctorData, options: &EngineOptions) -> Result<CentreData> {
    let map = f
        .simple_label_map()
        .ok_or_else(|| Error::Unsupported("symmetric centre needs a functor with simple images".into()))?;
    let ev = f
        .target()
        .evaluator()
        .ok_or_else(|| Error::Unsupported(format!("{} has no link evaluator", f.target().name())))?;
    let hopf = hopf_diagram();
    let opts = EvalOptions { skein_cap: options.skein_cap };
    let t = f.target();
    let mut labels = Vec::new();
    for x in f.source().labels() {
        let mut central = true;
        for z in f.source().labels() {
            let (fx, fz) = (map[x.0], map[z.0]);
            let v = ev.evaluate(&hopf, &[fx, fz], &opts)?;
            if !approx_eq(v, t.dim(fx) * t.dim(fz), 1e-9) {
                central = false;
                break;
            }
        }
        if central {
            labels.push(x);
        }
    }
    let dimension = labels.iter().map(|&x| f.source().dim(x) * f.source().dim(x)).sum();
    let gauss = labels.iter().map(|&x| f.source().dim(x) * f.source().dim(x) * t.twist(map[x.0])).sum();
    Ok(CentreData { labels, dimension, gauss })
}

/// Constants entering the library's closed forms. Group theories are
/// `Rep(G)` of the (image) group: symmetric, untwisted, rank the number of
/// conjugacy classes.
pub fn category_constants(theory: &Theory, options: &EngineOptions) -> Result<CategoryConstants> {
    let (gauss_plus, gauss_minus) = (cp2_value(theory)?, cp2bar_value(theory)?);
    let dim = theory.source_dimension()?;
    let (centre_dim, centre_rank, centre_gauss) = match theory {
        Theory::Functor(f) => {
            let c = symmetric_centre(f, options)?;
            (c.dimension, c.labels.len(), c.gauss)
        }
        Theory::DijkgraafWitten(g) => (dim, g.conjugacy_classes().len(), dim),
        Theory::GroupPullback(phi) => (dim, phi.image()?.conjugacy_classes().len(), dim),
    };
    Ok(CategoryConstants { dim, centre_dim, centre_rank, centre_gauss, gauss_plus, gauss_minus })
}
