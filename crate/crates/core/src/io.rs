//! JSON descriptions of spaces, divisors, groups, stack models and maps,
//! plus the short preset names accepted on the command line.
//!
//! Every reader takes an [`Input`]: either text (a preset name, inline
//! JSON, or `@file`) or an already-parsed JSON value from a scene file.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::Value;

use crate::classes::BundleData;
use crate::csm::{Arrangement, ArrangementFunction, DivisorSubset};
use crate::error::{Error, Result};
use crate::groups::{AbelianGroupSpec, FiniteGroup, DEFAULT_MAX_ORDER};
use crate::ring::{parse_rational, GradedElement, Rational};
use crate::spaces::{
    equivariant_projective_space, equivariant_projective_space_truncated, hypersurface, point, product,
    projective_space, DivisorSet, EquivariantSpace, Space,
};
use crate::stacks::{ConstructibleFunction, Level, StratifiedMap, StratifiedStackModel, Stratum};

/// Environment variable that overrides [`DEFAULT_MAX_ORDER`].
pub const MAX_GROUP_ORDER_VAR: &str = "CSM_MAX_GROUP_ORDER";

#[derive(Clone, Debug, PartialEq)]
pub enum Input {
    Text(String),
    Json(Value),
}

impl From<&str> for Input {
    fn from(s: &str) -> Self {
        Input::Text(s.to_string())
    }
}

/// A name to look up, or a JSON value to decode.
enum Resolved {
    Name(String),
    Json(Doc),
}

/// A JSON value, with its source text when it came from text so that
/// decoding errors can point at a line and column.
struct Doc {
    value: Value,
    text: Option<String>,
}

impl Doc {
    fn decode<T: DeserializeOwned>(self, what: &str) -> Result<T> {
        match self.text {
            Some(t) => parse_json(what, &t),
            None => decode(what, self.value),
        }
    }
}

fn resolve(input: &Input, what: &str) -> Result<Resolved> {
    match input {
        Input::Json(Value::String(s)) => Ok(Resolved::Name(s.clone())),
        Input::Json(v) => Ok(Resolved::Json(Doc {
            value: v.clone(),
            text: None,
        })),
        Input::Text(t) => {
            let t = t.trim();
            let text = if let Some(path) = t.strip_prefix('@') {
                std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{what}: cannot read `{path}`: {e}")))?
            } else if t.starts_with('{') || t.starts_with('[') {
                t.to_string()
            } else if t.ends_with(".json") {
                std::fs::read_to_string(t).map_err(|e| Error::Parse(format!("{what}: cannot read `{t}`: {e}")))?
            } else {
                return Ok(Resolved::Name(t.to_string()));
            };
            Ok(Resolved::Json(Doc {
                value: parse_json(what, &text)?,
                text: Some(text),
            }))
        }
    }
}

/// Parses JSON text; errors carry the line and column.
pub fn parse_json<T: DeserializeOwned>(what: &str, text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

fn decode<T: DeserializeOwned>(what: &str, v: Value) -> Result<T> {
    serde_json::from_value(v).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

/// The group-order cap, honouring [`MAX_GROUP_ORDER_VAR`].
pub fn max_group_order() -> Result<usize> {
    match std::env::var(MAX_GROUP_ORDER_VAR) {
        Err(_) => Ok(DEFAULT_MAX_ORDER),
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("{MAX_GROUP_ORDER_VAR}: `{v}` is not a positive integer"))),
    }
}

/// A JSON number or a `"p/q"` string.
#[derive(Deserialize)]
#[serde(untagged)]
enum RationalJson {
    Int(i64),
    Text(String),
}

impl RationalJson {
    fn value(self) -> Result<Rational> {
        match self {
            RationalJson::Int(n) => Ok(Rational::from_integer(n.into())),
            RationalJson::Text(s) => parse_rational(&s),
        }
    }
}

// ---- spaces ----

// One struct per `type`; each repeats the tag so the whole object can be
// decoded from text with positions intact.

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ProjectiveJson {
    #[serde(rename = "type")]
    _kind: String,
    n: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ProductJson {
    #[serde(rename = "type")]
    _kind: String,
    factors: Vec<Value>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HypersurfaceJson {
    #[serde(rename = "type")]
    _kind: String,
    n: usize,
    d: u32,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PointJson {
    #[serde(rename = "type")]
    _kind: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EquivariantJson {
    #[serde(rename = "type")]
    _kind: String,
    weights: Vec<i64>,
    #[serde(default)]
    truncation: Option<u32>,
}

/// A catalog space or an equivariant projective space.
#[derive(Clone, Debug)]
pub enum AnySpace {
    Plain(Space),
    Equivariant(EquivariantSpace),
}

/// Preset names: `P<n>`, `point`, `line`, `conic`, `cubic`, `V<d>inP<n>`
/// and products such as `P1xP1`.
pub fn space_preset(name: &str) -> Result<Space> {
    let s = name.trim();
    if s.contains('x') {
        let mut factors = s.split('x').map(space_preset);
        let first = factors.next().expect("split yields at least one part")?;
        return factors.try_fold(first, |acc, f| product(&acc, &f?));
    }
    match s {
        "point" | "pt" | "P0" => return Ok(point()),
        "line" => return hypersurface(2, 1),
        "conic" => return hypersurface(2, 2),
        "cubic" => return hypersurface(2, 3),
        _ => {}
    }
    let unknown = || Error::Parse(format!("unknown space `{name}`"));
    if let Some(rest) = s.strip_prefix('V') {
        let (d, n) = rest.split_once("inP").ok_or_else(unknown)?;
        return hypersurface(n.parse().map_err(|_| unknown())?, d.parse().map_err(|_| unknown())?);
    }
    let n: usize = s
        .strip_prefix('P')
        .ok_or_else(unknown)?
        .parse()
        .map_err(|_| unknown())?;
    if n > 12 {
        return Err(Error::Unsupported(format!("P{n} is larger than the catalog supports")));
    }
    Ok(projective_space(n))
}

fn space_from_value(v: Value, what: &str) -> Result<AnySpace> {
    space_from_doc(Doc { value: v, text: None }, what)
}

fn space_from_doc(doc: Doc, what: &str) -> Result<AnySpace> {
    if let Value::String(s) = &doc.value {
        return Ok(AnySpace::Plain(space_preset(s)?));
    }
    let kind = doc.value.get("type").and_then(Value::as_str).map(str::to_string);
    match kind.as_deref() {
        Some("projective") => {
            let n = doc.decode::<ProjectiveJson>(what)?.n;
            Ok(AnySpace::Plain(space_preset(&format!("P{n}"))?))
        }
        Some("point") => {
            doc.decode::<PointJson>(what)?;
            Ok(AnySpace::Plain(point()))
        }
        Some("hypersurface") => {
            let h: HypersurfaceJson = doc.decode(what)?;
            Ok(AnySpace::Plain(hypersurface(h.n, h.d)?))
        }
        Some("product") => {
            let mut acc = point();
            for f in doc.decode::<ProductJson>(what)?.factors {
                match space_from_value(f, what)? {
                    AnySpace::Plain(x) => acc = product(&acc, &x)?,
                    AnySpace::Equivariant(_) => {
                        return Err(Error::Parse(format!("{what}: products of equivariant spaces are not supported")))
                    }
                }
            }
            Ok(AnySpace::Plain(acc))
        }
        Some("equivariant_projective") => {
            let e: EquivariantJson = doc.decode(what)?;
            Ok(AnySpace::Equivariant(match e.truncation {
                Some(t) => equivariant_projective_space_truncated(&e.weights, t)?,
                None => equivariant_projective_space(&e.weights)?,
            }))
        }
        Some(other) => Err(Error::Parse(format!(
            "{what}: unknown space type `{other}`, expected one of projective, product, hypersurface, point, equivariant_projective"
        ))),
        None => Err(Error::Parse(format!("{what}: a space object needs a string field `type`"))),
    }
}

pub fn read_any_space(input: &Input) -> Result<AnySpace> {
    match resolve(input, "--space")? {
        Resolved::Name(n) => Ok(AnySpace::Plain(space_preset(&n)?)),
        Resolved::Json(d) => space_from_doc(d, "--space"),
    }
}

pub fn read_space(input: &Input) -> Result<Space> {
    match read_any_space(input)? {
        AnySpace::Plain(x) => Ok(x),
        AnySpace::Equivariant(_) => Err(Error::Parse(
            "--space: an equivariant space is only accepted by `borel`".into(),
        )),
    }
}

// ---- divisors, functions, bundles ----

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DivisorJson {
    class: String,
}

/// Divisors as JSON `[{"class":"h"}, ...]` or the shorthand `h,h,2*h`.
pub fn read_arrangement(space: &Space, input: &Input, normal_crossings: bool) -> Result<Arrangement> {
    let classes: Vec<String> = match resolve(input, "--divisors")? {
        Resolved::Name(s) => s
            .split(',')
            .map(str::trim)
            .filter(|c| !c.is_empty())
            .map(String::from)
            .collect(),
        Resolved::Json(d) => d
            .decode::<Vec<DivisorJson>>("--divisors")?
            .into_iter()
            .map(|d| d.class)
            .collect(),
    };
    let elements = classes
        .iter()
        .map(|c| {
            space
                .element(c)
                .map_err(|e| Error::Parse(format!("--divisors: `{c}`: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Arrangement::new(space.clone(), DivisorSet::new(elements, normal_crossings)?)
}

/// `{"{}": 1, "{1}": "2/3"}`.
pub fn read_arrangement_function(input: &Input) -> Result<ArrangementFunction> {
    let doc = match resolve(input, "--function")? {
        Resolved::Json(d) => d,
        Resolved::Name(n) => return Err(Error::Parse(format!("--function: expected a JSON object, got `{n}`"))),
    };
    let raw: BTreeMap<String, RationalJson> = doc.decode("--function")?;
    let mut f = ArrangementFunction::new();
    for (k, v) in raw {
        let key: DivisorSubset = k.parse().map_err(|e| Error::Parse(format!("--function: {e}")))?;
        f.set(key, v.value()?);
    }
    Ok(f)
}

/// A bundle given by its total Chern class, e.g. `1 + h` for `O(1)`; the
/// rank defaults to the top degree present.
pub fn read_bundle(space: &Space, text: &str, rank: Option<usize>) -> Result<BundleData> {
    let c: GradedElement = space
        .element(text)
        .map_err(|e| Error::Parse(format!("--bundle: {e}")))?;
    let rank = rank.unwrap_or_else(|| c.max_degree().unwrap_or(0) as usize);
    BundleData::new(c, rank)
}

// ---- groups ----

/// `{"permutations": [...]}`, `{"table": [...]}`, `{"preset": "S3"}` or a
/// preset name.
pub fn read_group(input: &Input) -> Result<FiniteGroup> {
    match resolve(input, "--group")? {
        Resolved::Name(n) => group_preset(&n),
        Resolved::Json(d) => group_from_value(d.value, "--group"),
    }
}

fn group_preset(name: &str) -> Result<FiniteGroup> {
    if matches!(name.trim(), "Gm" | "C*" | "GL1" | "T") {
        return Err(Error::InvalidModel(format!(
            "`{name}` has positive dimension; only finite groups are supported"
        )));
    }
    FiniteGroup::preset_bounded(name, max_group_order()?)
}

fn group_from_value(v: Value, what: &str) -> Result<FiniteGroup> {
    let obj = match v {
        Value::String(s) => return group_preset(&s),
        Value::Object(o) => o,
        _ => return Err(Error::Parse(format!("{what}: a group is an object or a preset name"))),
    };
    if obj.len() != 1 {
        return Err(Error::Parse(format!(
            "{what}: a group has exactly one of `permutations`, `table`, `preset`"
        )));
    }
    let (key, body) = obj.into_iter().next().expect("one entry");
    let bound = max_group_order()?;
    let at = format!("{what}.{key}");
    match key.as_str() {
        "permutations" => FiniteGroup::from_permutations_bounded(&decode::<Vec<Vec<usize>>>(&at, body)?, bound),
        "table" => FiniteGroup::from_table_bounded(decode(&at, body)?, bound),
        "preset" => group_preset(&decode::<String>(&at, body)?),
        other => Err(Error::Parse(format!(
            "{what}: unknown field `{other}`, expected one of `permutations`, `table`, `preset`"
        ))),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AbelianJson {
    free_rank: usize,
    #[serde(default)]
    torsion: Vec<u64>,
}

/// `Z^2+Z/3` or `{"free_rank":2,"torsion":[3]}`.
pub fn read_abelian(input: &Input) -> Result<AbelianGroupSpec> {
    match resolve(input, "--A")? {
        Resolved::Name(n) => n.parse().map_err(|e| Error::Parse(format!("--A: {e}"))),
        Resolved::Json(d) => {
            let a: AbelianJson = d.decode("--A")?;
            AbelianGroupSpec::new(a.free_rank, a.torsion).map_err(|e| Error::Parse(format!("--A: {e}")))
        }
    }
}

// ---- stack models and maps ----

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelJson {
    #[serde(default)]
    label: Option<String>,
    strata: Vec<StratumJson>,
    #[serde(default)]
    group_order: usize,
    #[serde(default)]
    ambient: Option<AmbientJson>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StratumJson {
    label: String,
    chi: i64,
    stabilizer: Value,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AmbientJson {
    space: Value,
    divisors: Vec<DivisorJson>,
    strata: Vec<String>,
    #[serde(default = "yes")]
    normal_crossings: bool,
}

fn yes() -> bool {
    true
}

/// Model presets: `P1/Z2`, `point` (with `group` as stabilizer, trivial if
/// absent) and `pt/<group>`.
pub fn model_preset(name: &str, group: Option<&FiniteGroup>) -> Result<StratifiedStackModel> {
    let s = name.trim().trim_start_matches('[').trim_end_matches(']');
    match s {
        "P1/Z2" => Ok(StratifiedStackModel::projective_line_mod_involution()),
        "point" | "pt" => Ok(StratifiedStackModel::point(
            group.cloned().unwrap_or_else(FiniteGroup::trivial),
        )),
        _ => match s.strip_prefix("pt/").or_else(|| s.strip_prefix("point/")) {
            Some(g) => Ok(StratifiedStackModel::point(group_preset(g)?)),
            None => Err(Error::Parse(format!("unknown model `{name}`"))),
        },
    }
}

fn model_from_value(v: Value, what: &str, group: Option<&FiniteGroup>) -> Result<StratifiedStackModel> {
    model_from_doc(Doc { value: v, text: None }, what, group)
}

fn model_from_doc(doc: Doc, what: &str, group: Option<&FiniteGroup>) -> Result<StratifiedStackModel> {
    if let Value::String(s) = &doc.value {
        return model_preset(s, group);
    }
    let m: ModelJson = doc.decode(what)?;
    let strata = m
        .strata
        .into_iter()
        .map(|s| {
            let g = group_from_value(s.stabilizer, &format!("{what}: stratum `{}` stabilizer", s.label))?;
            Ok(Stratum::new(s.label, s.chi, g))
        })
        .collect::<Result<Vec<_>>>()?;
    let model = StratifiedStackModel::new(m.label.unwrap_or_else(|| "model".into()), strata, m.group_order)?;
    let Some(amb) = m.ambient else {
        return Ok(model);
    };
    let space = match space_from_value(amb.space, &format!("{what}.ambient.space"))? {
        AnySpace::Plain(x) => x,
        AnySpace::Equivariant(_) => return Err(Error::Parse(format!("{what}.ambient.space: must be a plain space"))),
    };
    let classes: Vec<String> = amb.divisors.into_iter().map(|d| d.class).collect();
    let elements = classes.iter().map(|c| space.element(c)).collect::<Result<Vec<_>>>()?;
    let arr = Arrangement::new(space, DivisorSet::new(elements, amb.normal_crossings)?)?;
    let subsets = amb
        .strata
        .iter()
        .map(|s| s.parse())
        .collect::<Result<Vec<DivisorSubset>>>()?;
    model.with_link(arr, subsets)
}

pub fn read_model(input: &Input, group: Option<&FiniteGroup>) -> Result<StratifiedStackModel> {
    match resolve(input, "--model")? {
        Resolved::Name(n) => model_preset(&n, group),
        Resolved::Json(d) => model_from_doc(d, "--model", group),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MapJson {
    source: Value,
    #[serde(default)]
    target: Option<Value>,
    #[serde(default)]
    fiber: Option<Vec<Vec<i64>>>,
}

/// `{"source": model, "target": model, "fiber": [[...]]}`. Without a target
/// the map goes to `[pt/trivial]`.
pub fn read_map(input: &Input, group: Option<&FiniteGroup>) -> Result<StratifiedMap> {
    let doc = match resolve(input, "--map")? {
        Resolved::Json(d) => d,
        Resolved::Name(n) => {
            // `<model>->pt`
            let source = n
                .strip_suffix("->pt")
                .ok_or_else(|| Error::Parse(format!("--map: unknown map `{n}`")))?;
            return Ok(StratifiedMap::to_point(&Arc::new(model_preset(source, group)?)));
        }
    };
    let m: MapJson = doc.decode("--map")?;
    let source = Arc::new(model_from_value(m.source, "--map.source", group)?);
    match (m.target, m.fiber) {
        (None, None) => Ok(StratifiedMap::to_point(&source)),
        (Some(t), Some(fiber)) => {
            let target = Arc::new(model_from_value(t, "--map.target", group)?);
            StratifiedMap::new(&source, &target, fiber)
        }
        _ => Err(Error::Parse("--map: `target` and `fiber` go together".into())),
    }
}

/// Stratum values as a JSON array or as an object keyed by stratum label.
/// Missing labels are zero.
pub fn read_stack_function(
    input: &Input,
    model: &Arc<StratifiedStackModel>,
    level: Level,
) -> Result<ConstructibleFunction> {
    let doc = match resolve(input, "--function")? {
        Resolved::Json(d) => d,
        Resolved::Name(n) if n == "one" || n == "1" => {
            return Ok(ConstructibleFunction::constant(model, Rational::from_integer(1.into())).to_level(level))
        }
        Resolved::Name(n) => return Err(Error::Parse(format!("--function: expected JSON, got `{n}`"))),
    };
    let values = match &doc.value {
        Value::Array(_) => doc
            .decode::<Vec<RationalJson>>("--function")?
            .into_iter()
            .map(RationalJson::value)
            .collect::<Result<Vec<_>>>()?,
        Value::Object(_) => {
            let raw: BTreeMap<String, RationalJson> = doc.decode("--function")?;
            let mut values = vec![Rational::from_integer(0.into()); model.len()];
            for (label, x) in raw {
                let j = model
                    .stratum_index(&label)
                    .ok_or_else(|| Error::Parse(format!("--function: no stratum named `{label}`")))?;
                values[j] = x.value()?;
            }
            values
        }
        _ => return Err(Error::Parse("--function: expected an array or an object".into())),
    };
    if values.len() != model.len() {
        return Err(Error::Parse(format!(
            "--function: {} values for {} strata",
            values.len(),
            model.len()
        )));
    }
    ConstructibleFunction::new(model, values, level)
}

// ---- scenes ----

/// A JSON file bundling the inputs of one command. Keys mirror the flags.
#[derive(Deserialize, Default, Debug)]
#[serde(deny_unknown_fields)]
pub struct Scene {
    pub space: Option<Value>,
    pub divisors: Option<Value>,
    pub function: Option<Value>,
    pub group: Option<Value>,
    #[serde(rename = "A")]
    pub a: Option<Value>,
    pub model: Option<Value>,
    pub map: Option<Value>,
    pub bundle: Option<String>,
    pub normal_crossings: Option<bool>,
}

pub fn read_scene(path: &str) -> Result<Scene> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("--scene: cannot read `{path}`: {e}")))?;
    parse_json("--scene", &text)
}
