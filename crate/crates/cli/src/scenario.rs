//! Scenario files: JSON with top-level keys `curves`, `ab_model`, `atoms`,
//! `inputs`, `checks` and `seed`.

use std::collections::BTreeMap;
use std::path::Path;

use chowsym_core::cycles::{AExpr, ProductPoint, ZeroCycle};
use chowsym_core::filtration::{DatumRow, SymbolDatum};
use chowsym_core::models::{
    validate_models, AbGenerator, AbKind, AbModel, AbValue, CurveModel, Divisor, GroupSpec, LevelMaps, PointName,
    Relation, Setting,
};
use chowsym_core::symbols::SymbolSum;
use chowsym_core::ExtLevel;
use serde::{Deserialize, Serialize};

use crate::checks::CheckSpec;
use crate::expr;

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("{origin}:{line}:{column}: {message}")]
    Parse { origin: String, line: usize, column: usize, message: String },
    #[error("invalid scenario:\n  {}", .0.join("\n  "))]
    Invalid(Vec<String>),
    #[error("cannot read {path}")]
    Io { path: String, source: std::io::Error },
}

impl ScenarioError {
    fn invalid(msg: impl Into<String>) -> Self {
        ScenarioError::Invalid(vec![msg.into()])
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub curves: Vec<CurveSpec>,
    pub ab_model: AbSpec,
    #[serde(default)]
    pub atoms: Vec<AtomSpec>,
    #[serde(default)]
    pub inputs: Vec<InputSpec>,
    #[serde(default)]
    pub checks: Vec<CheckSpec>,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSpec {
    pub id: String,
    #[serde(default = "one")]
    pub level: u64,
}

fn one() -> u64 {
    1
}

/// A divisor or generator combination written as `{name: coefficient}`.
pub type Combination = BTreeMap<String, i64>;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationSpec {
    #[serde(default = "one")]
    pub level: u64,
    pub divisor: Combination,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    pub name: String,
    pub points: Vec<PointSpec>,
    pub base_point: String,
    #[serde(default)]
    pub relations: Vec<RelationSpec>,
    #[serde(default)]
    pub involution: Option<BTreeMap<String, String>>,
    #[serde(default)]
    pub weierstrass: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupEntry {
    pub level: u64,
    #[serde(default)]
    pub torsion: Vec<u64>,
    #[serde(default)]
    pub rank: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapEntry {
    pub lower: u64,
    pub upper: u64,
    pub res: Vec<Vec<i64>>,
    pub tr: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AbSpec {
    Constant {
        #[serde(default)]
        torsion: Vec<u64>,
        #[serde(default)]
        rank: usize,
        dimension: u32,
    },
    Table {
        dimension: u32,
        groups: Vec<GroupEntry>,
        #[serde(default)]
        maps: Vec<MapEntry>,
    },
    Jacobian {
        dimension: u32,
        curve: CurveSpec,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSpec {
    pub name: String,
    #[serde(default = "one")]
    pub level: u64,
    /// Coordinates, for constant and table models.
    #[serde(default)]
    pub value: Option<Vec<i64>>,
    /// A degree-zero divisor, for Jacobian models.
    #[serde(default)]
    pub class: Option<Combination>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RowSpec {
    /// One divisor per curve; missing trailing entries are zero.
    #[serde(default)]
    pub z: Vec<Combination>,
    #[serde(default)]
    pub a: Combination,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    #[serde(default = "one_i")]
    pub coeff: i64,
    pub points: Vec<String>,
    #[serde(default)]
    pub a: Combination,
}

fn one_i() -> i64 {
    1
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InputSpec {
    Datum {
        name: String,
        #[serde(default = "one")]
        level: u64,
        rows: Vec<RowSpec>,
    },
    Cycle {
        name: String,
        #[serde(default = "one")]
        base: u64,
        terms: Vec<TermSpec>,
    },
    Symbol {
        name: String,
        expr: String,
    },
}

impl InputSpec {
    pub fn name(&self) -> &str {
        match self {
            InputSpec::Datum { name, .. } | InputSpec::Cycle { name, .. } | InputSpec::Symbol { name, .. } => name,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Input {
    Datum(SymbolDatum),
    Cycle(ZeroCycle),
    Symbol(SymbolSum),
}

/// A parsed and validated scenario.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub setting: Setting,
    pub inputs: BTreeMap<String, Input>,
    pub checks: Vec<CheckSpec>,
    pub seed: u64,
}

fn level(n: u64) -> Result<ExtLevel, ScenarioError> {
    ExtLevel::new(n).map_err(|e| ScenarioError::invalid(e.to_string()))
}

fn build_curve(spec: &CurveSpec) -> Result<CurveModel, ScenarioError> {
    let catalog = spec
        .points
        .iter()
        .map(|p| Ok(PointName { id: p.id.clone(), min_level: level(p.level)? }))
        .collect::<Result<Vec<_>, ScenarioError>>()?;
    let index = |id: &str| {
        catalog
            .iter()
            .position(|p| p.id == id)
            .map(|i| i as u32)
            .ok_or_else(|| ScenarioError::invalid(format!("curve `{}`: unknown point `{id}`", spec.name)))
    };
    let base_point = index(&spec.base_point)?;
    let mut relations = Vec::new();
    for r in &spec.relations {
        let l = level(r.level)?;
        let terms = r.divisor.iter().map(|(p, c)| Ok((index(p)?, *c))).collect::<Result<Vec<_>, ScenarioError>>()?;
        relations.push(Relation { level: l, divisor: Divisor::from_terms(l, terms) });
    }
    let involution = match &spec.involution {
        None => None,
        Some(map) => {
            let mut inv: Vec<u32> = (0..catalog.len() as u32).collect();
            for (from, to) in map {
                inv[index(from)? as usize] = index(to)?;
            }
            Some(inv)
        }
    };
    let weierstrass = spec.weierstrass.as_deref().map(index).transpose()?;
    CurveModel::new(spec.name.clone(), catalog, base_point, relations, involution, weierstrass)
        .map_err(|e| ScenarioError::invalid(format!("curve `{}`: {e}", spec.name)))
}

fn build_ab(spec: &AbSpec) -> Result<AbModel, ScenarioError> {
    Ok(match spec {
        AbSpec::Constant { torsion, rank, dimension } => AbModel::constant(torsion.clone(), *rank, *dimension),
        AbSpec::Table { dimension, groups, maps } => {
            let mut g = BTreeMap::new();
            for e in groups {
                g.insert(level(e.level)?, GroupSpec { torsion: e.torsion.clone(), rank: e.rank });
            }
            let mut m = BTreeMap::new();
            for e in maps {
                m.insert((level(e.lower)?, level(e.upper)?), LevelMaps { res: e.res.clone(), tr: e.tr.clone() });
            }
            AbModel { kind: AbKind::Table { groups: g, maps: m }, dimension: *dimension }
        }
        AbSpec::Jacobian { dimension, curve } => {
            AbModel { kind: AbKind::Jacobian(build_curve(curve)?), dimension: *dimension }
        }
    })
}

fn build_atom(ab: &AbModel, spec: &AtomSpec) -> Result<AbGenerator, ScenarioError> {
    let l = level(spec.level)?;
    let value = match (&ab.kind, &spec.value, &spec.class) {
        (AbKind::Jacobian(c), None, Some(class)) => {
            let mut terms = Vec::new();
            for (p, k) in class {
                let i = c
                    .point_index(p)
                    .map_err(|_| ScenarioError::invalid(format!("atom `{}`: unknown point `{p}`", spec.name)))?;
                terms.push((i, *k));
            }
            AbValue::Class(Divisor::from_terms(l, terms))
        }
        (AbKind::Jacobian(_), _, _) => {
            return Err(ScenarioError::invalid(format!(
                "atom `{}`: a Jacobian model needs a `class` value",
                spec.name
            )))
        }
        (_, Some(v), None) => AbValue::Vector(v.clone()),
        _ => {
            return Err(ScenarioError::invalid(format!(
                "atom `{}`: a coordinate model needs a `value` vector",
                spec.name
            )))
        }
    };
    Ok(AbGenerator { name: spec.name.clone(), level: l, value })
}

/// Looks up `name` as a point of curve `i`.
pub fn point_id(s: &Setting, i: usize, name: &str) -> Result<u32, ScenarioError> {
    let c = s.curve(i).map_err(|e| ScenarioError::invalid(e.to_string()))?;
    c.point_index(name)
        .map_err(|_| ScenarioError::invalid(format!("curve `{}` has no point `{name}`", c.name)))
}

pub fn aexpr(s: &Setting, combo: &Combination) -> Result<AExpr, ScenarioError> {
    let mut out = AExpr::zero();
    for (g, c) in combo {
        let i = s.generator_index(g).map_err(|_| ScenarioError::invalid(format!("unknown atom `{g}`")))?;
        out = out.add(&AExpr::generator(i).scale(*c));
    }
    Ok(out)
}

pub fn divisor(s: &Setting, i: usize, base: ExtLevel, combo: &Combination) -> Result<Divisor, ScenarioError> {
    let terms = combo.iter().map(|(p, c)| Ok((point_id(s, i, p)?, *c))).collect::<Result<Vec<_>, ScenarioError>>()?;
    Ok(Divisor::from_terms(base, terms))
}

fn build_input(s: &Setting, spec: &InputSpec) -> Result<Input, ScenarioError> {
    let ctx = |e: ScenarioError| match e {
        ScenarioError::Invalid(v) => {
            ScenarioError::Invalid(v.into_iter().map(|m| format!("input `{}`: {m}", spec.name())).collect())
        }
        other => other,
    };
    match spec {
        InputSpec::Datum { level: l, rows, .. } => {
            let l = level(*l)?;
            let mut out = Vec::new();
            for row in rows {
                if row.z.len() > s.d() {
                    return Err(ctx(ScenarioError::invalid("row has more divisors than curves")));
                }
                let mut z = Vec::with_capacity(s.d());
                for i in 0..s.d() {
                    match row.z.get(i) {
                        Some(c) => z.push(divisor(s, i, l, c).map_err(ctx)?),
                        None => z.push(Divisor::zero(l)),
                    }
                }
                out.push(DatumRow { z, a: aexpr(s, &row.a).map_err(ctx)? });
            }
            let datum = SymbolDatum { level: l, rows: out };
            datum.validate(s).map_err(|e| ctx(ScenarioError::invalid(e.to_string())))?;
            Ok(Input::Datum(datum))
        }
        InputSpec::Cycle { base, terms, .. } => {
            let b = level(*base)?;
            let mut z = ZeroCycle::zero(b);
            for t in terms {
                if t.points.len() != s.d() {
                    return Err(ctx(ScenarioError::invalid(format!(
                        "term lists {} points, expected {}",
                        t.points.len(),
                        s.d()
                    ))));
                }
                let pts = t
                    .points
                    .iter()
                    .enumerate()
                    .map(|(i, p)| point_id(s, i, p))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(ctx)?;
                z.terms.add_term(ProductPoint::new(pts, aexpr(s, &t.a).map_err(ctx)?), t.coeff);
            }
            Ok(Input::Cycle(z))
        }
        InputSpec::Symbol { expr: text, .. } => {
            expr::parse_symbol(s, text).map(Input::Symbol).map_err(|e| ctx(ScenarioError::invalid(e.to_string())))
        }
    }
}

/// All towers `(m, n)`, `m | n`, `m != n`, among the given levels.
pub fn towers(levels: &[ExtLevel]) -> Vec<(ExtLevel, ExtLevel)> {
    let mut out = Vec::new();
    for m in levels {
        for n in levels {
            if m != n && m.divides(*n) {
                out.push((*m, *n));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Levels mentioned by the models, always including the ground.
pub fn declared_levels(s: &Setting) -> Vec<ExtLevel> {
    let mut out = vec![ExtLevel::GROUND];
    for c in &s.curves {
        out.extend(c.catalog.iter().map(|p| p.min_level));
        out.extend(c.relations.iter().map(|r| r.level));
    }
    out.extend(s.generators.iter().map(|g| g.level));
    // every compositum of declared levels is reachable through closed points
    let mut closed = out.clone();
    for a in &out {
        for b in &out {
            closed.push(a.compositum(*b));
        }
    }
    closed.sort();
    closed.dedup();
    closed
}

/// Level pairs on which `Tr∘res` is checked: those configured by a table
/// model, otherwise every tower among the declared levels.
pub fn law_pairs(s: &Setting) -> Vec<(ExtLevel, ExtLevel)> {
    match &s.ab.kind {
        AbKind::Table { .. } => s.ab.configured_pairs(),
        _ => towers(&declared_levels(s)),
    }
}

fn parse_error(origin: &str, e: serde_json::Error) -> ScenarioError {
    ScenarioError::Parse { origin: origin.into(), line: e.line(), column: e.column(), message: e.to_string() }
}

impl Scenario {
    pub fn from_str(name: &str, text: &str) -> Result<Scenario, ScenarioError> {
        let file: ScenarioFile = serde_json::from_str(text).map_err(|e| parse_error(name, e))?;
        Scenario::from_file(name, file)
    }

    pub fn load(path: &Path) -> Result<Scenario, ScenarioError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ScenarioError::Io { path: path.display().to_string(), source })?;
        let mut sc = Scenario::from_str(&path.display().to_string(), &text)?;
        if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
            sc.name = stem.to_string();
        }
        Ok(sc)
    }

    pub fn from_file(name: &str, file: ScenarioFile) -> Result<Scenario, ScenarioError> {
        let curves = file.curves.iter().map(build_curve).collect::<Result<Vec<_>, _>>()?;
        let ab = build_ab(&file.ab_model)?;
        let generators = file.atoms.iter().map(|a| build_atom(&ab, a)).collect::<Result<Vec<_>, _>>()?;
        for (i, g) in generators.iter().enumerate() {
            if generators[..i].iter().any(|h| h.name == g.name) {
                return Err(ScenarioError::invalid(format!("duplicate atom name `{}`", g.name)));
            }
        }
        let setting = Setting { curves, ab, generators };
        let extra = match &setting.ab.kind {
            AbKind::Table { .. } => Vec::new(),
            _ => towers(&declared_levels(&setting)),
        };
        let violations = validate_models(&setting.curves, &setting.ab, &setting.generators, &extra);
        if !violations.is_empty() {
            return Err(ScenarioError::Invalid(violations.iter().map(|v| v.to_string()).collect()));
        }
        let mut inputs = BTreeMap::new();
        for spec in &file.inputs {
            let input = build_input(&setting, spec)?;
            if inputs.insert(spec.name().to_string(), input).is_some() {
                return Err(ScenarioError::invalid(format!("duplicate input name `{}`", spec.name())));
            }
        }
        for c in &file.checks {
            c.resolve(&inputs).map_err(ScenarioError::invalid)?;
        }
        Ok(Scenario { name: name.into(), setting, inputs, checks: file.checks, seed: file.seed })
    }

    /// The same models restricted to the first `d` curves.
    pub fn setting_with_curves(&self, d: usize) -> Option<Setting> {
        (d <= self.setting.d()).then(|| Setting {
            curves: self.setting.curves[..d].to_vec(),
            ab: self.setting.ab.clone(),
            generators: self.setting.generators.clone(),
        })
    }
}

pub const ROUNDTRIP_RANDOM: &str = include_str!("../scenarios/roundtrip_random.json");
pub const GENUS2: &str = include_str!("../scenarios/genus2.json");
pub const ELLIPTIC: &str = include_str!("../scenarios/elliptic.json");
pub const TWO_ROW: &str = include_str!("../scenarios/two_row.json");

/// The scenarios shipped with the binary, by name.
pub fn bundled(name: &str) -> Option<Scenario> {
    let text = match name {
        "roundtrip_random" => ROUNDTRIP_RANDOM,
        "genus2" => GENUS2,
        "elliptic" => ELLIPTIC,
        "two_row" => TWO_ROW,
        _ => return None,
    };
    Some(Scenario::from_str(name, text).expect("bundled scenario is valid"))
}

pub const BUNDLED: [&str; 4] = ["roundtrip_random", "genus2", "elliptic", "two_row"];
