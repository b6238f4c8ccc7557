//! Presented curves, their Picard groups, and abelian-variety point functors.
//!
//! A curve is given by a catalog of closed points (each with the level of its
//! residue field), a rational base point, and a list of principal divisors
//! declared at given levels. `Pic^0` at level `L` is the free group on the
//! catalog modulo the relations declared at levels dividing `L`, restricted to
//! `L`. Nothing is derived from equations.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::formal::{cadd, cmul, ucoeff, Coeff, FormalSum};
use crate::hnf::Lattice;
use crate::lattice::{rel_degree, res_multiplicity, tr_multiplicity, ExtLevel};
use crate::{Error, Result};

/// Index of a point in its curve's catalog.
pub type PointId = u32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointName {
    pub id: String,
    pub min_level: ExtLevel,
}

/// Formal combination of catalog points over a base level. A term `c [y]`
/// stands for `c` times the closed point of `C_base` lying over `y`, which
/// has level `lcm(min_level(y), base)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Divisor {
    pub base: ExtLevel,
    pub terms: FormalSum<PointId>,
}

impl Divisor {
    pub fn zero(base: ExtLevel) -> Self {
        Divisor { base, terms: FormalSum::zero() }
    }

    pub fn point(base: ExtLevel, pt: PointId, coeff: Coeff) -> Self {
        Divisor { base, terms: FormalSum::singleton(pt, coeff) }
    }

    pub fn from_terms(base: ExtLevel, terms: impl IntoIterator<Item = (PointId, Coeff)>) -> Self {
        Divisor { base, terms: terms.into_iter().collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn add(&self, other: &Divisor) -> Result<Divisor> {
        if self.base != other.base {
            return Err(Error::BaseMismatch { left: self.base.degree(), right: other.base.degree() });
        }
        Ok(Divisor { base: self.base, terms: &self.terms + &other.terms })
    }

    pub fn sub(&self, other: &Divisor) -> Result<Divisor> {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, k: Coeff) -> Divisor {
        Divisor { base: self.base, terms: self.terms.scale(k) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    /// Minimal level at which the divisor is principal; also its base.
    pub level: ExtLevel,
    pub divisor: Divisor,
}

/// A canonical element of `Pic^0` at a level: coordinates over the catalog,
/// reduced modulo the relation lattice.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pic0Class {
    pub level: ExtLevel,
    pub coords: Vec<i64>,
}

impl Pic0Class {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| *c == 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveModel {
    pub name: String,
    pub catalog: Vec<PointName>,
    pub base_point: PointId,
    pub relations: Vec<Relation>,
    pub involution: Option<Vec<PointId>>,
    pub weierstrass: Option<PointId>,
}

impl CurveModel {
    /// Structural checks only (indices in range, unique names); the model
    /// laws are checked by [`validate_models`].
    pub fn new(
        name: impl Into<String>,
        catalog: Vec<PointName>,
        base_point: PointId,
        relations: Vec<Relation>,
        involution: Option<Vec<PointId>>,
        weierstrass: Option<PointId>,
    ) -> Result<Self> {
        let n = catalog.len();
        for (i, p) in catalog.iter().enumerate() {
            if catalog[..i].iter().any(|q| q.id == p.id) {
                return Err(Error::Shape(format!("duplicate point name `{}`", p.id)));
            }
        }
        let in_range = |p: PointId| (p as usize) < n;
        if !in_range(base_point) {
            return Err(Error::Shape(format!("base point index {base_point} out of range")));
        }
        for rel in &relations {
            if rel.divisor.base != rel.level {
                return Err(Error::Shape("relation divisor must live over its declared level".into()));
            }
            if let Some(bad) = rel.divisor.terms.keys().find(|p| !in_range(**p)) {
                return Err(Error::Shape(format!("relation mentions point index {bad} out of range")));
            }
        }
        if let Some(inv) = &involution {
            if inv.len() != n || inv.iter().any(|p| !in_range(*p)) {
                return Err(Error::Shape("involution must map every catalog point into the catalog".into()));
            }
        }
        if let Some(w) = weierstrass {
            if !in_range(w) {
                return Err(Error::Shape(format!("Weierstrass point index {w} out of range")));
            }
        }
        Ok(CurveModel { name: name.into(), catalog, base_point, relations, involution, weierstrass })
    }

    pub fn point_index(&self, id: &str) -> Result<PointId> {
        self.catalog
            .iter()
            .position(|p| p.id == id)
            .map(|i| i as PointId)
            .ok_or_else(|| Error::UnknownPoint(id.into()))
    }

    pub fn min_level(&self, pt: PointId) -> ExtLevel {
        self.catalog[pt as usize].min_level
    }

    pub fn point_name(&self, pt: PointId) -> &str {
        &self.catalog[pt as usize].id
    }

    fn check_point(&self, pt: PointId) -> Result<()> {
        if (pt as usize) < self.catalog.len() {
            Ok(())
        } else {
            Err(Error::UnknownPoint(format!("#{pt} on {}", self.name)))
        }
    }

    /// Level of the closed point of `C_base` over `pt`.
    pub fn canonical_level(&self, pt: PointId, base: ExtLevel) -> ExtLevel {
        self.min_level(pt).compositum(base)
    }

    pub fn degree(&self, d: &Divisor) -> Coeff {
        d.terms.weighted_sum(|pt| ucoeff(self.canonical_level(*pt, d.base).degree() / d.base.degree()))
    }

    pub fn div_res(&self, d: &Divisor, to: ExtLevel) -> Result<Divisor> {
        rel_degree(to, d.base)?;
        let mut out = Divisor::zero(to);
        for (pt, c) in d.terms.iter() {
            self.check_point(*pt)?;
            let k = res_multiplicity(self.min_level(*pt), d.base, to)?;
            out.terms.add_term(*pt, cmul(c, ucoeff(k)));
        }
        Ok(out)
    }

    pub fn div_tr(&self, d: &Divisor, to: ExtLevel) -> Result<Divisor> {
        rel_degree(d.base, to)?;
        let mut out = Divisor::zero(to);
        for (pt, c) in d.terms.iter() {
            self.check_point(*pt)?;
            let k = tr_multiplicity(self.min_level(*pt), d.base, to)?;
            out.terms.add_term(*pt, cmul(c, ucoeff(k)));
        }
        Ok(out)
    }

    /// The relation lattice of `Pic^0` at `level`, in catalog coordinates.
    pub fn relation_lattice(&self, level: ExtLevel) -> Result<Lattice> {
        let rows = self
            .relations
            .iter()
            .filter(|r| r.level.divides(level))
            .map(|r| self.div_res(&r.divisor, level).map(|d| self.coords(&d)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Lattice::from_rows(self.catalog.len(), &rows))
    }

    fn coords(&self, d: &Divisor) -> Vec<i64> {
        let mut v = alloc::vec![0; self.catalog.len()];
        for (pt, c) in d.terms.iter() {
            v[*pt as usize] = cadd(v[*pt as usize], c);
        }
        v
    }

    /// Canonical class of a degree-zero divisor in `Pic^0` at `level`. The
    /// divisor is first restricted from its base to `level`.
    pub fn pic0_reduce(&self, d: &Divisor, level: ExtLevel) -> Result<Pic0Class> {
        let deg = self.degree(d);
        if deg != 0 {
            return Err(Error::NonZeroDegree { degree: deg });
        }
        let d = self.div_res(d, level)?;
        let lat = self.relation_lattice(level)?;
        Ok(Pic0Class { level, coords: lat.reduce(&self.coords(&d)) })
    }

    pub fn pic0_equal(&self, a: &Divisor, b: &Divisor, level: ExtLevel) -> Result<bool> {
        let a = self.div_res(a, level)?;
        let b = self.div_res(b, level)?;
        Ok(self.pic0_reduce(&a.sub(&b)?, level)?.is_zero())
    }

    /// `[pt] - [p]` over `level`, where `p` is the base point.
    pub fn iota_divisor(&self, pt: PointId, level: ExtLevel) -> Result<Divisor> {
        self.check_point(pt)?;
        let ml = self.min_level(pt);
        if !ml.divides(level) {
            return Err(Error::LevelMismatch {
                what: format!("point `{}`", self.point_name(pt)),
                level: level.degree(),
                required: ml.degree(),
            });
        }
        let mut d = Divisor::point(level, pt, 1);
        d.terms.add_term(self.base_point, -1);
        Ok(d)
    }

    /// `[y] - deg(y) [p]` over `base`: the degree-zero divisor attached to the
    /// closed point of `C_base` over `pt`. It equals the trace of
    /// [`CurveModel::iota_divisor`] from the point's own level.
    pub fn point_class_divisor(&self, pt: PointId, base: ExtLevel) -> Result<Divisor> {
        self.check_point(pt)?;
        let deg = self.canonical_level(pt, base).degree() / base.degree();
        let mut d = Divisor::point(base, pt, 1);
        d.terms.add_term(self.base_point, -ucoeff(deg));
        Ok(d)
    }

    pub fn iota(&self, pt: PointId, level: ExtLevel) -> Result<Pic0Class> {
        let d = self.iota_divisor(pt, level)?;
        self.pic0_reduce(&d, level)
    }

    /// The divisor `d` with every point replaced by its image under the
    /// involution.
    pub fn apply_involution(&self, d: &Divisor) -> Result<Divisor> {
        let inv = self
            .involution
            .as_ref()
            .ok_or_else(|| Error::Shape(format!("curve `{}` has no involution", self.name)))?;
        Ok(Divisor { base: d.base, terms: d.terms.map_keys(|p| inv[*p as usize]) })
    }
}

/// `⊕ Z/n_i ⊕ Z^rank`, coordinates ordered torsion first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    pub torsion: Vec<u64>,
    pub rank: usize,
}

impl GroupSpec {
    pub fn dim(&self) -> usize {
        self.torsion.len() + self.rank
    }

    pub fn reduce(&self, v: &[i64]) -> Result<Vec<i64>> {
        if v.len() != self.dim() {
            return Err(Error::Shape(format!("expected {} coordinates, got {}", self.dim(), v.len())));
        }
        Ok(v.iter()
            .enumerate()
            .map(|(i, x)| match self.torsion.get(i) {
                Some(&n) => x.rem_euclid(n as i64),
                None => *x,
            })
            .collect())
    }

    fn unit_vectors(&self) -> Vec<Vec<i64>> {
        (0..self.dim())
            .map(|i| {
                let mut v = alloc::vec![0; self.dim()];
                v[i] = 1;
                v
            })
            .collect()
    }
}

/// Restriction `A(m) -> A(n)` and trace `A(n) -> A(m)` for a pair `m | n`, as
/// integer matrices acting on coordinate columns (`out = M * in`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelMaps {
    pub res: Vec<Vec<i64>>,
    pub tr: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AbKind {
    /// `A(n) = G` for every level, restriction the identity, trace
    /// multiplication by the relative degree.
    Constant(GroupSpec),
    /// Explicit groups per level and explicit maps keyed by `(m, n)`, `m | n`.
    Table {
        groups: BTreeMap<ExtLevel, GroupSpec>,
        maps: BTreeMap<(ExtLevel, ExtLevel), LevelMaps>,
    },
    /// The Jacobian of a presented curve, values being degree-zero divisors.
    Jacobian(CurveModel),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AbValue {
    Vector(Vec<i64>),
    Class(Divisor),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbModel {
    pub kind: AbKind,
    pub dimension: u32,
}

impl AbModel {
    pub fn constant(torsion: Vec<u64>, rank: usize, dimension: u32) -> Self {
        AbModel { kind: AbKind::Constant(GroupSpec { torsion, rank }), dimension }
    }

    fn group(&self, level: ExtLevel) -> Result<&GroupSpec> {
        match &self.kind {
            AbKind::Constant(g) => Ok(g),
            AbKind::Table { groups, .. } => groups
                .get(&level)
                .ok_or(Error::MissingMap { from: level.degree(), to: level.degree() }),
            AbKind::Jacobian(_) => Err(Error::Shape("Jacobian model has no coordinate group".into())),
        }
    }

    fn vector<'a>(&self, v: &'a AbValue) -> Result<&'a [i64]> {
        match v {
            AbValue::Vector(x) => Ok(x),
            AbValue::Class(_) => Err(Error::Shape("expected a coordinate vector value".into())),
        }
    }

    fn class<'a>(&self, v: &'a AbValue) -> Result<&'a Divisor> {
        match v {
            AbValue::Class(d) => Ok(d),
            AbValue::Vector(_) => Err(Error::Shape("expected a divisor-class value".into())),
        }
    }

    pub fn zero(&self, level: ExtLevel) -> Result<AbValue> {
        match &self.kind {
            AbKind::Jacobian(_) => Ok(AbValue::Class(Divisor::zero(level))),
            _ => Ok(AbValue::Vector(alloc::vec![0; self.group(level)?.dim()])),
        }
    }

    /// Canonical coordinates of `v` as an element of `A(level)`.
    pub fn canonical(&self, v: &AbValue, level: ExtLevel) -> Result<Vec<i64>> {
        match &self.kind {
            AbKind::Jacobian(c) => Ok(c.pic0_reduce(self.class(v)?, level)?.coords),
            _ => self.group(level)?.reduce(self.vector(v)?),
        }
    }

    pub fn equal(&self, a: &AbValue, b: &AbValue, level: ExtLevel) -> Result<bool> {
        let diff = self.combine(&[(a, 1), (b, -1)], level)?;
        Ok(self.canonical(&diff, level)?.iter().all(|x| *x == 0))
    }

    /// `sum k_i v_i` in `A(level)`; every value must already live there.
    pub fn combine(&self, terms: &[(&AbValue, Coeff)], level: ExtLevel) -> Result<AbValue> {
        let mut acc = self.zero(level)?;
        for (v, k) in terms {
            acc = match (&acc, *v) {
                (AbValue::Vector(a), AbValue::Vector(b)) => {
                    if a.len() != b.len() {
                        return Err(Error::Shape("value has the wrong number of coordinates".into()));
                    }
                    AbValue::Vector(a.iter().zip(b).map(|(x, y)| cadd(*x, cmul(*y, *k))).collect())
                }
                (AbValue::Class(a), AbValue::Class(b)) => {
                    let c = self.jacobian()?;
                    let b = c.div_res(b, level)?;
                    AbValue::Class(a.add(&b.scale(*k))?)
                }
                _ => return Err(Error::Shape("mixed value kinds".into())),
            };
        }
        Ok(acc)
    }

    fn jacobian(&self) -> Result<&CurveModel> {
        match &self.kind {
            AbKind::Jacobian(c) => Ok(c),
            _ => Err(Error::Shape("not a Jacobian model".into())),
        }
    }

    fn apply(m: &[Vec<i64>], v: &[i64]) -> Result<Vec<i64>> {
        m.iter()
            .map(|row| {
                if row.len() != v.len() {
                    return Err(Error::Shape("map matrix does not match the source group".into()));
                }
                Ok(row.iter().zip(v).fold(0, |acc, (a, b)| cadd(acc, cmul(*a, *b))))
            })
            .collect()
    }

    pub fn res(&self, v: &AbValue, from: ExtLevel, to: ExtLevel) -> Result<AbValue> {
        let k = rel_degree(to, from)?;
        match &self.kind {
            AbKind::Constant(_) => Ok(v.clone()),
            AbKind::Jacobian(c) => Ok(AbValue::Class(c.div_res(self.class(v)?, to)?)),
            AbKind::Table { maps, .. } => {
                if k == 1 {
                    return Ok(v.clone());
                }
                let m = maps
                    .get(&(from, to))
                    .ok_or(Error::MissingMap { from: from.degree(), to: to.degree() })?;
                Ok(AbValue::Vector(Self::apply(&m.res, self.vector(v)?)?))
            }
        }
    }

    pub fn tr(&self, v: &AbValue, from: ExtLevel, to: ExtLevel) -> Result<AbValue> {
        let k = rel_degree(from, to)?;
        match &self.kind {
            AbKind::Constant(_) => {
                Ok(AbValue::Vector(self.vector(v)?.iter().map(|x| cmul(*x, ucoeff(k))).collect()))
            }
            AbKind::Jacobian(c) => Ok(AbValue::Class(c.div_tr(self.class(v)?, to)?)),
            AbKind::Table { maps, .. } => {
                if k == 1 {
                    return Ok(v.clone());
                }
                let m = maps
                    .get(&(to, from))
                    .ok_or(Error::MissingMap { from: from.degree(), to: to.degree() })?;
                Ok(AbValue::Vector(Self::apply(&m.tr, self.vector(v)?)?))
            }
        }
    }

    /// Generators of `A(level)`.
    pub fn generators(&self, level: ExtLevel) -> Result<Vec<AbValue>> {
        match &self.kind {
            AbKind::Jacobian(c) => (0..c.catalog.len() as PointId)
                .filter(|p| *p != c.base_point)
                .map(|p| c.point_class_divisor(p, level).map(AbValue::Class))
                .collect(),
            _ => Ok(self.group(level)?.unit_vectors().into_iter().map(AbValue::Vector).collect()),
        }
    }

    /// The level pairs `(m, n)` on which the functor laws can be checked
    /// without outside input.
    pub fn configured_pairs(&self) -> Vec<(ExtLevel, ExtLevel)> {
        match &self.kind {
            AbKind::Table { maps, .. } => maps.keys().copied().collect(),
            _ => Vec::new(),
        }
    }
}

/// A named abelian-variety point used as a generator in symbols and cycles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbGenerator {
    pub name: String,
    pub level: ExtLevel,
    pub value: AbValue,
}

/// Everything needed to interpret cycles on `C_1 x ... x C_d x A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Setting {
    pub curves: Vec<CurveModel>,
    pub ab: AbModel,
    pub generators: Vec<AbGenerator>,
}

impl Setting {
    pub fn d(&self) -> usize {
        self.curves.len()
    }

    pub fn curve(&self, i: usize) -> Result<&CurveModel> {
        self.curves.get(i).ok_or(Error::UnknownCurve(i))
    }

    pub fn generator_index(&self, name: &str) -> Result<u32> {
        self.generators
            .iter()
            .position(|g| g.name == name)
            .map(|i| i as u32)
            .ok_or_else(|| Error::UnknownAtom(name.into()))
    }

    pub fn generator(&self, i: u32) -> &AbGenerator {
        &self.generators[i as usize]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// `Tr_{n/m}(res_{n/m}(g)) != [n:m] g` for generator number `generator` of `A(m)`.
    TraceRestriction { upper: u64, lower: u64, generator: usize },
    MissingLevelMap { upper: u64, lower: u64 },
    BasePointNotRational { curve: String },
    RelationDegree { curve: String, relation: usize, degree: i64 },
    /// The trace of a relation to a lower level is not a combination of the
    /// relations available there.
    RelationNotTraceStable { curve: String, relation: usize, to: u64 },
    InvolutionNotInvolutive { curve: String, point: String },
    InvolutionChangesLevel { curve: String, point: String },
    WeierstrassNotFixed { curve: String },
    GeneratorLevel { generator: String, detail: String },
    Malformed { detail: String },
}

impl core::fmt::Display for Violation {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Violation::TraceRestriction { upper, lower, generator } => write!(
                f,
                "Tr∘res != [{upper}:{lower}] on generator {generator} (n = {upper}, m = {lower})"
            ),
            Violation::MissingLevelMap { upper, lower } => {
                write!(f, "no maps configured between levels {lower} and {upper}")
            }
            Violation::BasePointNotRational { curve } => write!(f, "{curve}: base point is not rational"),
            Violation::RelationDegree { curve, relation, degree } => {
                write!(f, "{curve}: relation {relation} has degree {degree}")
            }
            Violation::RelationNotTraceStable { curve, relation, to } => {
                write!(f, "{curve}: trace of relation {relation} to level {to} is not principal there")
            }
            Violation::InvolutionNotInvolutive { curve, point } => {
                write!(f, "{curve}: involution is not an involution at `{point}`")
            }
            Violation::InvolutionChangesLevel { curve, point } => {
                write!(f, "{curve}: involution changes the level of `{point}`")
            }
            Violation::WeierstrassNotFixed { curve } => {
                write!(f, "{curve}: Weierstrass point is not fixed by the involution")
            }
            Violation::GeneratorLevel { generator, detail } => write!(f, "generator `{generator}`: {detail}"),
            Violation::Malformed { detail } => f.write_str(detail),
        }
    }
}

fn divisors_of(n: u64) -> impl Iterator<Item = u64> {
    (1..=n).filter(move |m| n % m == 0)
}

fn check_trace_restriction(
    ab: &AbModel,
    lower: ExtLevel,
    upper: ExtLevel,
    out: &mut Vec<Violation>,
) {
    let gens = match ab.generators(lower) {
        Ok(g) => g,
        Err(_) => {
            out.push(Violation::MissingLevelMap { upper: upper.degree(), lower: lower.degree() });
            return;
        }
    };
    let k = ucoeff(upper.degree() / lower.degree());
    for (i, g) in gens.iter().enumerate() {
        let ok = ab
            .res(g, lower, upper)
            .and_then(|r| ab.tr(&r, upper, lower))
            .and_then(|back| {
                let target = ab.combine(&[(g, k)], lower)?;
                ab.equal(&back, &target, lower)
            });
        match ok {
            Ok(true) => {}
            Ok(false) => out.push(Violation::TraceRestriction {
                upper: upper.degree(),
                lower: lower.degree(),
                generator: i,
            }),
            Err(_) => {
                out.push(Violation::MissingLevelMap { upper: upper.degree(), lower: lower.degree() })
            }
        }
    }
}

fn check_curve(c: &CurveModel, out: &mut Vec<Violation>) {
    let name = || c.name.clone();
    if !c.min_level(c.base_point).is_ground() {
        out.push(Violation::BasePointNotRational { curve: name() });
    }
    for (i, rel) in c.relations.iter().enumerate() {
        let deg = c.degree(&rel.divisor);
        if deg != 0 {
            out.push(Violation::RelationDegree { curve: name(), relation: i, degree: deg });
            continue;
        }
        for m in divisors_of(rel.level.degree()).filter(|m| *m != rel.level.degree()) {
            let m = ExtLevel(m);
            let stable = c
                .div_tr(&rel.divisor, m)
                .and_then(|t| c.pic0_reduce(&t, m))
                .map(|cls| cls.is_zero())
                .unwrap_or(false);
            if !stable {
                out.push(Violation::RelationNotTraceStable { curve: name(), relation: i, to: m.degree() });
            }
        }
    }
    if let Some(inv) = &c.involution {
        for (p, &q) in inv.iter().enumerate() {
            let pname = || c.catalog[p].id.clone();
            if inv[q as usize] as usize != p {
                out.push(Violation::InvolutionNotInvolutive { curve: name(), point: pname() });
            }
            if c.catalog[q as usize].min_level != c.catalog[p].min_level {
                out.push(Violation::InvolutionChangesLevel { curve: name(), point: pname() });
            }
        }
        if let Some(w) = c.weierstrass {
            if inv[w as usize] != w {
                out.push(Violation::WeierstrassNotFixed { curve: name() });
            }
        }
    } else if c.weierstrass.is_some() {
        out.push(Violation::Malformed {
            detail: format!("{}: Weierstrass point declared without an involution", c.name),
        });
    }
}

/// Checks every model law that can be decided from the presentation and
/// returns all violations found. `level_pairs` lists extra `(m, n)` pairs,
/// `m | n`, on which `Tr∘res = [n:m]` is checked in addition to the pairs the
/// abelian model configures itself.
pub fn validate_models(
    curves: &[CurveModel],
    ab: &AbModel,
    generators: &[AbGenerator],
    level_pairs: &[(ExtLevel, ExtLevel)],
) -> Vec<Violation> {
    let mut out = Vec::new();
    for c in curves {
        check_curve(c, &mut out);
    }
    if let AbKind::Jacobian(c) = &ab.kind {
        check_curve(c, &mut out);
    }
    if let AbKind::Table { groups, maps } = &ab.kind {
        for ((m, n), lm) in maps {
            if !m.divides(*n) {
                out.push(Violation::Malformed { detail: format!("map key ({m}, {n}) is not a tower") });
                continue;
            }
            let (Some(gm), Some(gn)) = (groups.get(m), groups.get(n)) else {
                out.push(Violation::MissingLevelMap { upper: n.degree(), lower: m.degree() });
                continue;
            };
            let shape_ok = lm.res.len() == gn.dim()
                && lm.res.iter().all(|r| r.len() == gm.dim())
                && lm.tr.len() == gm.dim()
                && lm.tr.iter().all(|r| r.len() == gn.dim());
            if !shape_ok {
                out.push(Violation::Malformed {
                    detail: format!("maps between levels {m} and {n} have the wrong shape"),
                });
            }
        }
    }
    let mut pairs: Vec<(ExtLevel, ExtLevel)> = ab.configured_pairs();
    pairs.extend(level_pairs.iter().copied());
    pairs.sort();
    pairs.dedup();
    for (m, n) in pairs {
        if !m.divides(n) {
            out.push(Violation::Malformed { detail: format!("level pair ({m}, {n}) is not a tower") });
            continue;
        }
        check_trace_restriction(ab, m, n, &mut out);
    }
    for g in generators {
        let ok = match (&ab.kind, &g.value) {
            (AbKind::Jacobian(c), AbValue::Class(d)) => {
                d.base == g.level && c.degree(d) == 0
            }
            (AbKind::Jacobian(_), _) => false,
            (_, AbValue::Vector(v)) => ab.group(g.level).map(|gs| gs.dim() == v.len()).unwrap_or(false),
            _ => false,
        };
        if !ok {
            out.push(Violation::GeneratorLevel {
                generator: g.name.clone(),
                detail: format!("value is not an element of A({})", g.level),
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn lv(n: u64) -> ExtLevel {
        ExtLevel::new(n).unwrap()
    }

    fn pts(spec: &[(&str, u64)]) -> Vec<PointName> {
        spec.iter().map(|(n, l)| PointName { id: (*n).into(), min_level: lv(*l) }).collect()
    }

    fn free_curve() -> CurveModel {
        CurveModel::new("C", pts(&[("p", 1), ("y", 1), ("q2", 2), ("q4", 4), ("q6", 6)]), 0, vec![], None, None)
            .unwrap()
    }

    fn genus2() -> CurveModel {
        let names = pts(&[("p1", 1), ("y1", 1), ("sy1", 1)]);
        let rel = Relation {
            level: lv(1),
            divisor: Divisor::from_terms(lv(1), [(1, 1), (2, 1), (0, -2)]),
        };
        CurveModel::new("C", names, 0, vec![rel], Some(vec![0, 2, 1]), Some(0)).unwrap()
    }

    #[test]
    fn restriction_examples() {
        let c = free_curve();
        let d = Divisor::point(lv(1), 1, 1);
        let r = c.div_res(&d, lv(2)).unwrap();
        assert_eq!(r, Divisor::point(lv(2), 1, 1));
        assert_eq!(c.degree(&r), 1);
        // a degree-2 point splits into two rational points
        let r = c.div_res(&Divisor::point(lv(1), 2, 1), lv(2)).unwrap();
        assert_eq!(r, Divisor::point(lv(2), 2, 2));
        assert_eq!(c.degree(&r), 2);
        let d = Divisor::from_terms(lv(1), [(1, 1), (0, -1)]);
        let r = c.div_res(&d, lv(3)).unwrap();
        assert_eq!(r.terms, d.terms);
        assert_eq!(c.degree(&r), 0);
        assert!(c.div_res(&d.clone(), lv(1)).is_ok());
        assert_eq!(
            c.div_res(&Divisor::zero(lv(2)), lv(3)),
            Err(Error::NotATower { upper: 3, lower: 2 })
        );
    }

    #[test]
    fn trace_examples() {
        let c = free_curve();
        let t = c.div_tr(&Divisor::point(lv(2), 1, 1), lv(1)).unwrap();
        assert_eq!(t, Divisor::point(lv(1), 1, 2));
        let t = c.div_tr(&Divisor::point(lv(4), 3, 1), lv(2)).unwrap();
        assert_eq!(t, Divisor::point(lv(2), 3, 1));
        assert_eq!(c.degree(&t), 2);
    }

    #[test]
    fn pic0_examples() {
        let c = free_curve();
        assert!(c.pic0_reduce(&Divisor::zero(lv(1)), lv(1)).unwrap().is_zero());
        let d = Divisor::from_terms(lv(1), [(1, 1), (0, -1)]);
        assert_eq!(c.pic0_reduce(&d, lv(1)).unwrap().coords, vec![-1, 1, 0, 0, 0]);
        assert_eq!(
            c.pic0_reduce(&Divisor::point(lv(1), 1, 1), lv(1)),
            Err(Error::NonZeroDegree { degree: 1 })
        );
        assert!(c.iota(0, lv(1)).unwrap().is_zero());
        assert!(!c.iota(1, lv(1)).unwrap().is_zero());
        assert!(c.iota(2, lv(1)).is_err());

        let g = genus2();
        let a = g.iota_divisor(2, lv(1)).unwrap();
        let b = g.iota_divisor(1, lv(1)).unwrap().scale(-1);
        assert!(g.pic0_equal(&a, &b, lv(1)).unwrap());
        assert_eq!(g.iota(2, lv(1)).unwrap(), g.pic0_reduce(&b, lv(1)).unwrap());
        assert!(g.pic0_equal(&a, &b, lv(3)).unwrap());
    }

    #[test]
    fn trace_of_restriction_on_classes() {
        let c = genus2();
        let d = c.iota_divisor(1, lv(1)).unwrap();
        for l in [2u64, 3, 6] {
            let back = c.div_tr(&c.div_res(&d, lv(l)).unwrap(), lv(1)).unwrap();
            assert!(c.pic0_equal(&back, &d.scale(l as i64), lv(1)).unwrap());
        }
    }

    #[test]
    fn validation_catches_bad_tables() {
        let g = GroupSpec { torsion: vec![5], rank: 0 };
        let mut groups = BTreeMap::new();
        groups.insert(lv(1), g.clone());
        groups.insert(lv(2), g.clone());
        let mut maps = BTreeMap::new();
        maps.insert((lv(1), lv(2)), LevelMaps { res: vec![vec![1]], tr: vec![vec![2]] });
        let good = AbModel { kind: AbKind::Table { groups: groups.clone(), maps: maps.clone() }, dimension: 1 };
        assert!(validate_models(&[], &good, &[], &[]).is_empty());
        maps.insert((lv(1), lv(2)), LevelMaps { res: vec![vec![1]], tr: vec![vec![3]] });
        let bad = AbModel { kind: AbKind::Table { groups, maps }, dimension: 1 };
        assert_eq!(
            validate_models(&[], &bad, &[], &[]),
            vec![Violation::TraceRestriction { upper: 2, lower: 1, generator: 0 }]
        );
        let constant = AbModel::constant(vec![5], 0, 1);
        assert!(validate_models(&[], &constant, &[], &[(lv(1), lv(6)), (lv(2), lv(4))]).is_empty());
    }

    #[test]
    fn validation_of_curves() {
        assert!(validate_models(&[genus2()], &AbModel::constant(vec![], 1, 1), &[], &[]).is_empty());
        let mut bad = genus2();
        bad.relations.push(Relation { level: lv(1), divisor: Divisor::point(lv(1), 1, 1) });
        bad.involution = Some(vec![0, 2, 2]);
        bad.weierstrass = Some(1);
        let v = validate_models(&[bad], &AbModel::constant(vec![], 1, 1), &[], &[]);
        assert!(v.contains(&Violation::RelationDegree { curve: "C".into(), relation: 1, degree: 1 }));
        assert!(v.iter().any(|x| matches!(x, Violation::InvolutionNotInvolutive { .. })));
        assert!(v.iter().any(|x| matches!(x, Violation::WeierstrassNotFixed { .. })));
    }

    #[test]
    fn relation_trace_stability() {
        // a relation declared only at level 2 whose trace is not principal at level 1
        let names = pts(&[("p", 1), ("y", 1), ("w", 1)]);
        let rel = Relation { level: lv(2), divisor: Divisor::from_terms(lv(2), [(1, 1), (0, -1)]) };
        let c = CurveModel::new("E", names.clone(), 0, vec![rel.clone()], None, None).unwrap();
        let v = validate_models(&[c], &AbModel::constant(vec![], 1, 1), &[], &[]);
        assert_eq!(v, vec![Violation::RelationNotTraceStable { curve: "E".into(), relation: 0, to: 1 }]);
        let base_rel = Relation { level: lv(1), divisor: Divisor::from_terms(lv(1), [(1, 2), (0, -2)]) };
        let c = CurveModel::new("E", names, 0, vec![rel, base_rel], None, None).unwrap();
        assert!(validate_models(&[c], &AbModel::constant(vec![], 1, 1), &[], &[]).is_empty());
    }
}
