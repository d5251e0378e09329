//! JSON file formats.
//!
//! Three formats come with the library; all rationals are strings (`"3/2"`,
//! `"1"`, `"inf"`) or bare integers.
//!
//! Poset (also used for cones, which must additionally be lattices):
//!
//! ```json
//! {"elements": ["bot","a","b","top"],
//!  "covers": [["bot","a"],["bot","b"],["a","top"],["b","top"]]}
//! ```
//!
//! Valuation — `poset` is an inline poset object or a path to one,
//! resolved relative to the referring file; omitted elements weigh `0`:
//!
//! ```json
//! {"poset": "m2.json", "weights": {"a": "1", "b": "3/2", "top": "inf"}}
//! ```
//!
//! Nested valuation:
//!
//! ```json
//! {"poset": "m2.json",
//!  "outer": [{"coeff": "1/2", "inner": {"weights": {"a": "1"}}}]}
//! ```
//!
//! Two more formats exist for command-line input of open-set tables and
//! integrands: a table file lists `{"upset": [names], "value": r}` entries
//! (one per upset), and a function file gives per-element `values`.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::monad::NestedValuation;
use crate::poset::{ElemSet, FinitePoset, UpSet};
use crate::rational::ExtRat;
use crate::valuation::{MonotoneFn, Valuation, ValuationTable};

#[derive(Deserialize)]
struct PosetDoc {
    elements: Vec<String>,
    #[serde(default)]
    covers: Vec<(String, String)>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PosetRef {
    Path(String),
    Inline(PosetDoc),
}

#[derive(Deserialize)]
struct ValuationDoc {
    #[serde(default)]
    poset: Option<PosetRef>,
    weights: BTreeMap<String, ExtRat>,
}

#[derive(Deserialize)]
struct InnerValuationDoc {
    weights: BTreeMap<String, ExtRat>,
}

#[derive(Deserialize)]
struct NestedTermDoc {
    coeff: ExtRat,
    inner: InnerValuationDoc,
}

#[derive(Deserialize)]
struct NestedDoc {
    #[serde(default)]
    poset: Option<PosetRef>,
    outer: Vec<NestedTermDoc>,
}

#[derive(Deserialize)]
struct TableEntryDoc {
    upset: Vec<String>,
    value: ExtRat,
}

#[derive(Deserialize)]
struct TableDoc {
    #[serde(default)]
    poset: Option<PosetRef>,
    table: Vec<TableEntryDoc>,
}

#[derive(Deserialize)]
struct FunctionDoc {
    #[serde(default)]
    poset: Option<PosetRef>,
    values: BTreeMap<String, ExtRat>,
}

fn parse_error(file: &str, message: impl ToString) -> Error {
    Error::Parse {
        file: file.to_string(),
        message: message.to_string(),
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| parse_error(&path.display().to_string(), e))
}

fn from_json<'a, T: Deserialize<'a>>(text: &'a str, file: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| parse_error(file, e))
}

fn build_poset(doc: PosetDoc) -> Result<FinitePoset> {
    let names: Vec<&str> = doc.elements.iter().map(|s| s.as_str()).collect();
    let covers: Vec<(&str, &str)> = doc
        .covers
        .iter()
        .map(|(a, b)| (a.as_str(), b.as_str()))
        .collect();
    FinitePoset::from_covers(&names, &covers)
}

/// Resolves a `poset` field: inline documents parse in place, strings load
/// relative to `base`. When the field is absent, `ambient` is used; when
/// both are present they must agree.
fn resolve_poset(
    reference: Option<PosetRef>,
    base: Option<&Path>,
    ambient: Option<&Arc<FinitePoset>>,
    file: &str,
) -> Result<Arc<FinitePoset>> {
    let loaded = match reference {
        None => None,
        Some(PosetRef::Inline(doc)) => Some(Arc::new(build_poset(doc)?)),
        Some(PosetRef::Path(rel)) => {
            let path = match base {
                Some(dir) => dir.join(&rel),
                None => std::path::PathBuf::from(&rel),
            };
            Some(load_poset(&path)?)
        }
    };
    match (loaded, ambient) {
        (Some(p), Some(q)) => {
            if p.as_ref() == q.as_ref() {
                Ok(p)
            } else {
                Err(parse_error(
                    file,
                    "the file's poset does not match the poset it is used with",
                ))
            }
        }
        (Some(p), None) => Ok(p),
        (None, Some(q)) => Ok(q.clone()),
        (None, None) => Err(parse_error(file, "no poset given and none in scope")),
    }
}

fn weights_for(
    poset: &Arc<FinitePoset>,
    weights: &BTreeMap<String, ExtRat>,
    file: &str,
) -> Result<Valuation> {
    let mut values = vec![ExtRat::zero(); poset.len()];
    for (name, value) in weights {
        let x = poset
            .index_of(name)
            .map_err(|e| parse_error(file, e))?;
        values[x] = value.clone();
    }
    Ok(Valuation::from_weights(poset.clone(), values))
}

/// Parses a poset document.
pub fn parse_poset(text: &str, file: &str) -> Result<FinitePoset> {
    build_poset(from_json(text, file)?)
}

/// Loads a poset file.
pub fn load_poset(path: &Path) -> Result<Arc<FinitePoset>> {
    let text = read(path)?;
    Ok(Arc::new(parse_poset(&text, &path.display().to_string())?))
}

/// Parses a valuation document against an optional ambient poset.
pub fn parse_valuation(
    text: &str,
    file: &str,
    base: Option<&Path>,
    ambient: Option<&Arc<FinitePoset>>,
) -> Result<Valuation> {
    let doc: ValuationDoc = from_json(text, file)?;
    let poset = resolve_poset(doc.poset, base, ambient, file)?;
    weights_for(&poset, &doc.weights, file)
}

/// Loads a valuation file, resolving a poset path relative to it.
pub fn load_valuation(path: &Path, ambient: Option<&Arc<FinitePoset>>) -> Result<Valuation> {
    let text = read(path)?;
    parse_valuation(
        &text,
        &path.display().to_string(),
        path.parent(),
        ambient,
    )
}

/// Parses a nested valuation document.
pub fn parse_nested(
    text: &str,
    file: &str,
    base: Option<&Path>,
    ambient: Option<&Arc<FinitePoset>>,
) -> Result<NestedValuation> {
    let doc: NestedDoc = from_json(text, file)?;
    let poset = resolve_poset(doc.poset, base, ambient, file)?;
    let mut terms = Vec::with_capacity(doc.outer.len());
    for term in doc.outer {
        let inner = weights_for(&poset, &term.inner.weights, file)?;
        terms.push((term.coeff, inner));
    }
    Ok(NestedValuation::new(poset, terms))
}

/// Loads a nested valuation file.
pub fn load_nested(path: &Path, ambient: Option<&Arc<FinitePoset>>) -> Result<NestedValuation> {
    let text = read(path)?;
    parse_nested(&text, &path.display().to_string(), path.parent(), ambient)
}

/// Parses an open-set table document into a [`ValuationTable`]. Every upset
/// of the poset must be listed exactly once.
pub fn parse_table(
    text: &str,
    file: &str,
    base: Option<&Path>,
    ambient: Option<&Arc<FinitePoset>>,
) -> Result<ValuationTable> {
    let doc: TableDoc = from_json(text, file)?;
    let poset = resolve_poset(doc.poset, base, ambient, file)?;
    let mut entries: Vec<(UpSet, ExtRat)> = Vec::with_capacity(doc.table.len());
    for entry in doc.table {
        let mut set = ElemSet::EMPTY;
        for name in &entry.upset {
            set.insert(poset.index_of(name).map_err(|e| parse_error(file, e))?);
        }
        let upset = poset.upset(set).map_err(|e| parse_error(file, e))?;
        if entries.iter().any(|(u, _)| *u == upset) {
            return Err(parse_error(
                file,
                format!("upset {} is listed twice", poset.set_to_string(set)),
            ));
        }
        entries.push((upset, entry.value));
    }
    let all = poset.enumerate_upsets()?;
    if let Some(missing) = all.iter().find(|u| entries.iter().all(|(v, _)| v != *u)) {
        return Err(parse_error(
            file,
            format!(
                "no value for the upset {}",
                poset.set_to_string(missing.members())
            ),
        ));
    }
    ValuationTable::from_fn(poset, |u| {
        entries
            .iter()
            .find(|(v, _)| *v == u)
            .map(|(_, value)| value.clone())
            .expect("all upsets are covered")
    })
}

/// Loads a table file.
pub fn load_table(path: &Path, ambient: Option<&Arc<FinitePoset>>) -> Result<ValuationTable> {
    let text = read(path)?;
    parse_table(&text, &path.display().to_string(), path.parent(), ambient)
}

/// Parses a function document into a [`MonotoneFn`]; omitted elements map
/// to `0`.
pub fn parse_function(
    text: &str,
    file: &str,
    base: Option<&Path>,
    ambient: Option<&Arc<FinitePoset>>,
) -> Result<MonotoneFn> {
    let doc: FunctionDoc = from_json(text, file)?;
    let poset = resolve_poset(doc.poset, base, ambient, file)?;
    let mut values = vec![ExtRat::zero(); poset.len()];
    for (name, value) in &doc.values {
        let x = poset.index_of(name).map_err(|e| parse_error(file, e))?;
        values[x] = value.clone();
    }
    MonotoneFn::new(poset, values)
}

/// Loads a function file.
pub fn load_function(path: &Path, ambient: Option<&Arc<FinitePoset>>) -> Result<MonotoneFn> {
    let text = read(path)?;
    parse_function(&text, &path.display().to_string(), path.parent(), ambient)
}

/// Renders a poset in the poset file format.
pub fn poset_to_json(poset: &FinitePoset) -> serde_json::Value {
    let covers: Vec<serde_json::Value> = poset
        .covers()
        .into_iter()
        .map(|(x, y)| serde_json::json!([poset.name(x), poset.name(y)]))
        .collect();
    serde_json::json!({
        "elements": poset.names(),
        "covers": covers,
    })
}

/// Renders a valuation's weights (zero weights omitted).
pub fn valuation_to_json(v: &Valuation) -> serde_json::Value {
    let mut map = serde_json::Map::new();
    for x in v.poset().elements() {
        if v.weight(x).is_positive() {
            map.insert(
                v.poset().name(x).to_string(),
                serde_json::Value::String(v.weight(x).to_string()),
            );
        }
    }
    serde_json::json!({
        "poset": poset_to_json(v.poset()),
        "weights": map,
    })
}
