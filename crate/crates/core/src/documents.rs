//! JSON documents describing categories and functors.
//!
//! ```text
//! {"backend": "pointed", "factors": [4], "q": {"0": "0", "1": "1/4", "2": "0", "3": "1/4"}}
//! {"backend": "pointed", "factors": [5], "anyonic": true}
//! {"backend": "templieb", "r": 4, "spins": "integer"}
//! {"backend": "group", "order": 2, "table": [[0, 1], [1, 0]]}
//! {"source": {...}, "target": {...}, "map": {"1": {"2": 1}}}
//! ```

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Deserialize;
use serde_json::Value;

use crate::category::{CategoryData, Colour, Label, PivotalFunctorData};
use crate::group::FiniteGroup;
use crate::pointed::PointedCategory;
use crate::scalar::{Phase, C64};
use crate::templieb::TemperleyLieb;
use crate::{Error, Result};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PointedDoc {
    #[allow(dead_code)]
    backend: Option<String>,
    factors: Vec<u64>,
    #[serde(default)]
    anyonic: bool,
    #[serde(default)]
    q: BTreeMap<String, String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TemplieDoc {
    #[allow(dead_code)]
    backend: Option<String>,
    r: usize,
    #[serde(default)]
    spins: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupDoc {
    #[allow(dead_code)]
    backend: Option<String>,
    #[serde(default)]
    builtin: Option<String>,
    #[serde(default)]
    order: Option<usize>,
    #[serde(default)]
    table: Option<Vec<Vec<usize>>>,
}

#[derive(Clone, Debug)]
pub enum CategoryDocument {
    Pointed(Arc<PointedCategory>),
    Templieb { tl: Arc<TemperleyLieb>, integer_spins: bool },
    Group(FiniteGroup),
}

impl CategoryDocument {
    /// Category data for the pointed and Temperley-Lieb backends; groups are
    /// handled by counting and have none.
    pub fn category_data(&self) -> Result<CategoryData> {
        match self {
            CategoryDocument::Pointed(p) => Ok(p.category_data()),
            CategoryDocument::Templieb { tl, integer_spins: true } => Ok(tl.integer_spins()),
            CategoryDocument::Templieb { tl, integer_spins: false } => Ok(tl.category_data()),
            CategoryDocument::Group(g) => {
                Err(Error::Unsupported(format!("{} is handled by the counting backend", g.name())))
            }
        }
    }
}

fn schema<T: for<'de> Deserialize<'de>>(v: &Value) -> Result<T> {
    serde_json::from_value(v.clone()).map_err(|e| Error::Schema(e.to_string()))
}

pub fn parse_category_value(v: &Value) -> Result<CategoryDocument> {
    let backend = v.get("backend").and_then(Value::as_str).unwrap_or(if v.get("factors").is_some() {
        "pointed"
    } else if v.get("r").is_some() {
        "templieb"
    } else {
        "group"
    });
    match backend {
        "pointed" => {
            let d: PointedDoc = schema(v)?;
            if d.anyonic {
                if !d.q.is_empty() {
                    return Err(Error::Schema("give either \"anyonic\" or \"q\", not both".into()));
                }
                return Ok(CategoryDocument::Pointed(Arc::new(PointedCategory::anyonic(d.factors)?)));
            }
            let group = crate::pointed::AbelianGroup::new(d.factors)?;
            let mut q = vec![None; group.order()];
            for (label, value) in &d.q {
                let a = group.parse(label)?;
                let p: Phase = value.parse().map_err(Error::Schema)?;
                q[a] = Some(p);
            }
            let q: Vec<Phase> = q
                .into_iter()
                .enumerate()
                .map(|(a, p)| p.ok_or_else(|| Error::Schema(format!("q is missing label {}", group.name(a)))))
                .collect::<Result<_>>()?;
            Ok(CategoryDocument::Pointed(Arc::new(PointedCategory::new("pointed", group, q)?)))
        }
        "templieb" => {
            let d: TemplieDoc = schema(v)?;
            let integer_spins = match d.spins.as_deref() {
                None | Some("all") => false,
                Some("integer") => true,
                Some(other) => return Err(Error::Schema(format!("unknown spin set '{other}'"))),
            };
            Ok(CategoryDocument::Templieb { tl: Arc::new(TemperleyLieb::new(d.r)?), integer_spins })
        }
        "group" => {
            let d: GroupDoc = schema(v)?;
            match (d.builtin, d.order, d.table) {
                (Some(name), None, None) => Ok(CategoryDocument::Group(FiniteGroup::builtin(&name)?)),
                (None, Some(order), Some(table)) => {
                    if order != table.len() {
                        return Err(Error::InvalidGroup(format!("order {order} but {} rows", table.len())));
                    }
                    Ok(CategoryDocument::Group(FiniteGroup::from_table("G", table)?))
                }
                _ => Err(Error::Schema("group needs either \"builtin\" or \"order\" and \"table\"".into())),
            }
        }
        other => Err(Error::Schema(format!("unknown backend '{other}'"))),
    }
}

pub fn parse_category(text: &str) -> Result<CategoryDocument> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    parse_category_value(&v)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FunctorDoc {
    #[serde(default)]
    name: Option<String>,
    source: Value,
    target: Value,
    map: BTreeMap<String, BTreeMap<String, u32>>,
}

/// A functor document. Source labels absent from `map` are an error.
pub fn parse_functor(text: &str) -> Result<PivotalFunctorData> {
    let d: FunctorDoc = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    let source = Arc::new(parse_category_value(&d.source)?.category_data()?);
    let target = Arc::new(parse_category_value(&d.target)?.category_data()?);
    let mut image = vec![None; source.rank()];
    for (x, row) in &d.map {
        let xl = source
            .label_by_name(x)
            .ok_or_else(|| Error::InvalidFunctor(format!("unknown source label '{x}'")))?;
        let mut c = Colour::zero();
        for (y, &m) in row {
            let yl = target
                .label_by_name(y)
                .ok_or_else(|| Error::InvalidFunctor(format!("unknown target label '{y}'")))?;
            c.add_term(yl, C64::new(m as f64, 0.0));
        }
        image[xl.0] = Some(c);
    }
    let image: Vec<Colour> = image
        .into_iter()
        .enumerate()
        .map(|(i, c)| c.ok_or_else(|| Error::InvalidFunctor(format!("no image for {}", source.label_name(Label(i))))))
        .collect::<Result<_>>()?;
    PivotalFunctorData::new(d.name.unwrap_or_else(|| "F".into()), source, target, image)
}
