//! Built-in Kirby diagrams with their expected invariant values.

use std::collections::BTreeMap;

use crate::kirby::{GroupPresentation, KirbyDiagram, PlanarCode};
use crate::scalar::{powi, C64};
use crate::{Error, Result};

/// Closed-form value of the invariant for a full inclusion `C ⊂ D` into a
/// modular category, in terms of the constants of `C`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosedForm {
    One,
    /// `Σ d_X² θ_X / dimΩ_C`.
    GaussPlus,
    GaussMinus,
    /// `dimΩ_C' / dimΩ_C`.
    CentreRatio,
    /// `Σ_{X ∈ C'} d_X² θ_X / dimΩ_C`, the same as `CentreRatio` unless `C'`
    /// has a fermion.
    CentreGauss,
    /// `dimΩ_C`.
    Dim,
    /// `dimΩ_C · |Λ_C'|`.
    DimTimesCentreRank,
    /// `dimΩ_C · dimΩ_C'`.
    DimTimesCentreDim,
}

/// Constants of `C` entering the closed forms.
#[derive(Clone, Copy, Debug)]
pub struct CategoryConstants {
    pub dim: C64,
    pub centre_dim: C64,
    pub centre_rank: usize,
    pub centre_gauss: C64,
    pub gauss_plus: C64,
    pub gauss_minus: C64,
}

impl ClosedForm {
    pub fn evaluate(&self, k: &CategoryConstants) -> C64 {
        match self {
            ClosedForm::One => C64::new(1.0, 0.0),
            ClosedForm::GaussPlus => k.gauss_plus,
            ClosedForm::GaussMinus => k.gauss_minus,
            ClosedForm::CentreRatio => k.centre_dim / k.dim,
            ClosedForm::CentreGauss => k.centre_gauss / k.dim,
            ClosedForm::Dim => k.dim,
            ClosedForm::DimTimesCentreRank => k.dim * k.centre_rank as f64,
            ClosedForm::DimTimesCentreDim => k.dim * k.centre_dim,
        }
    }

    pub fn formula(&self) -> &'static str {
        match self {
            ClosedForm::One => "1",
            ClosedForm::GaussPlus => "sum d_X^2 theta_X / dim(Omega_C)",
            ClosedForm::GaussMinus => "sum d_X^2 theta_X^-1 / dim(Omega_C)",
            ClosedForm::CentreRatio => "dim(Omega_C') / dim(Omega_C)",
            ClosedForm::CentreGauss => "sum_{X in C'} d_X^2 theta_X / dim(Omega_C)",
            ClosedForm::Dim => "dim(Omega_C)",
            ClosedForm::DimTimesCentreRank => "dim(Omega_C) * |Lambda_C'|",
            ClosedForm::DimTimesCentreDim => "dim(Omega_C) * dim(Omega_C')",
        }
    }
}

#[derive(Clone, Debug)]
pub struct LibraryEntry {
    pub name: &'static str,
    pub diagram: KirbyDiagram,
    pub chi: i64,
    pub sigma: i64,
    pub pi1: &'static str,
    pub simply_connected: bool,
    /// For `S¹×M`, a presentation of `π₁(M)`.
    pub product_of_s1: Option<GroupPresentation>,
    pub expected: Option<ClosedForm>,
}

const NAMES: [&str; 11] = [
    "S4",
    "CP2",
    "CP2bar",
    "S2xS2",
    "S2twistS2",
    "CP2#CP2bar",
    "S1xS3",
    "S1xS1xS2",
    "IxRP3",
    "S1xS3#S1xS3",
    "S1xS3#S1xS3#S2xS2",
];

pub fn list() -> Vec<&'static str> {
    NAMES.to_vec()
}

fn unknot(f: i64) -> KirbyDiagram {
    KirbyDiagram::build("", &[], &[("a", f, &[])], &[], Some(PlanarCode::kinked_unknot("a", f))).expect("unknot")
}

fn s2xs2() -> KirbyDiagram {
    let pd = PlanarCode::from_braid(&["a", "b"], &[1, 1]).expect("Hopf link");
    KirbyDiagram::build("S2xS2", &[], &[("a", 0, &[]), ("b", 0, &[])], &[("a", "b", 1)], Some(pd)).expect("S2xS2")
}

fn s1xs3() -> KirbyDiagram {
    KirbyDiagram::build("S1xS3", &["g"], &[], &[], Some(PlanarCode::kinked_unknot("g", 0))).expect("S1xS3")
}

/// Borromean rings with two dotted components, plus a 0-framed meridian of
/// the third.
fn s1xs1xs2() -> KirbyDiagram {
    let pd = PlanarCode::from_braid(&["g", "h", "a", "c"], &[1, -2, 1, -2, 1, -2, 3, 3]).expect("braid closure");
    KirbyDiagram::build(
        "S1xS1xS2",
        &["g", "h"],
        &[("a", 0, &[("g", 1), ("h", 1), ("g", -1), ("h", -1)]), ("c", 0, &[])],
        &[("a", "c", 1)],
        Some(pd),
    )
    .expect("S1xS1xS2")
}

fn presentation(gens: &[&str]) -> GroupPresentation {
    GroupPresentation { generators: gens.iter().map(|g| g.to_string()).collect(), relators: vec![] }
}

pub fn get(name: &str) -> Result<LibraryEntry> {
    let (name, diagram, pi1, product, expected): (&'static str, KirbyDiagram, &'static str, Option<GroupPresentation>, Option<ClosedForm>) =
        match name {
            "S4" => ("S4", KirbyDiagram::empty(), "1", None, Some(ClosedForm::One)),
            "CP2" => ("CP2", unknot(1), "1", None, Some(ClosedForm::GaussPlus)),
            "CP2bar" => ("CP2bar", unknot(-1), "1", None, Some(ClosedForm::GaussMinus)),
            "S2xS2" => ("S2xS2", s2xs2(), "1", None, Some(ClosedForm::CentreRatio)),
            "S2twistS2" => (
                "S2twistS2",
                KirbyDiagram::build("", &[], &[("a", 1, &[]), ("b", 0, &[])], &[("a", "b", 1)], None)?,
                "1",
                None,
                Some(ClosedForm::CentreGauss),
            ),
            "CP2#CP2bar" => ("CP2#CP2bar", unknot(1).connected_sum(&unknot(-1)), "1", None, Some(ClosedForm::CentreGauss)),
            "S1xS3" => ("S1xS3", s1xs3(), "Z", Some(presentation(&[])), Some(ClosedForm::Dim)),
            "S1xS1xS2" => ("S1xS1xS2", s1xs1xs2(), "Z+Z", Some(presentation(&["t"])), Some(ClosedForm::DimTimesCentreRank)),
            "IxRP3" => (
                "IxRP3",
                KirbyDiagram::build("", &["g"], &[("a", 0, &[("g", 1), ("g", 1)])], &[], None)?,
                "Z/2",
                None,
                None,
            ),
            "S1xS3#S1xS3" => ("S1xS3#S1xS3", s1xs3().connected_sum(&s1xs3()), "Z*Z", None, None),
            "S1xS3#S1xS3#S2xS2" => (
                "S1xS3#S1xS3#S2xS2",
                s1xs3().connected_sum(&s1xs3()).connected_sum(&s2xs2()),
                "Z*Z",
                None,
                Some(ClosedForm::DimTimesCentreDim),
            ),
            other => return Err(Error::UnknownManifold(other.to_string())),
        };
    let diagram = diagram.with_name(name);
    Ok(LibraryEntry {
        name,
        chi: diagram.euler_characteristic(),
        sigma: diagram.signature(),
        simply_connected: pi1 == "1",
        diagram,
        pi1,
        product_of_s1: product,
        expected,
    })
}

pub fn all() -> Vec<LibraryEntry> {
    NAMES.iter().map(|n| get(n).expect("registered")).collect()
}

/// KDF text of an entry.
pub fn export(name: &str) -> Result<String> {
    Ok(get(name)?.diagram.to_kdf())
}

/// Stored `(χ, σ)` per entry.
pub fn table() -> BTreeMap<&'static str, (i64, i64)> {
    [
        ("S4", (2, 0)),
        ("CP2", (3, 1)),
        ("CP2bar", (3, -1)),
        ("S2xS2", (4, 0)),
        ("S2twistS2", (4, 0)),
        ("CP2#CP2bar", (4, 0)),
        ("S1xS3", (0, 0)),
        ("S1xS1xS2", (0, 0)),
        ("IxRP3", (2, 0)),
        ("S1xS3#S1xS3", (-2, 0)),
        ("S1xS3#S1xS3#S2xS2", (0, 0)),
    ]
    .into_iter()
    .collect()
}

/// `(I₊I₋)^{−1+χ/2}(I₊/I₋)^{σ/2}` written with integer exponents.
pub fn simply_connected_form(gauss_plus: C64, gauss_minus: C64, chi: i64, sigma: i64) -> C64 {
    powi(gauss_plus, (chi + sigma) / 2 - 1) * powi(gauss_minus, (chi - sigma) / 2 - 1)
}
