#![allow(dead_code)]

use chowsym_core::cycles::{AExpr, ProductPoint, ZeroCycle};
use chowsym_core::filtration::{DatumRow, SymbolDatum};
use chowsym_core::models::{AbGenerator, AbModel, AbValue, CurveModel, Divisor, PointName, Relation, Setting};
use chowsym_core::ExtLevel;
use proptest::prelude::*;

pub const LEVELS: [u64; 5] = [1, 2, 3, 4, 6];

pub fn lv(n: u64) -> ExtLevel {
    ExtLevel::new(n).unwrap()
}

fn curve(name: &str, spec: &[(&str, u64)], relations: Vec<Relation>) -> CurveModel {
    let catalog = spec.iter().map(|(id, l)| PointName { id: (*id).into(), min_level: lv(*l) }).collect();
    CurveModel::new(name, catalog, 0, relations, None, None).unwrap()
}

/// Three curves with points at every level in [`LEVELS`], and a constant
/// abelian model `Z/4 x Z` with generators at levels 1, 2, 3 and 6.
pub fn setting(d: usize) -> Setting {
    let c1 = curve("C1", &[("p", 1), ("y", 1), ("q2", 2), ("q3", 3), ("q4", 4), ("q6", 6)], vec![]);
    let rel = Relation { level: lv(1), divisor: Divisor::from_terms(lv(1), [(1, 3), (0, -3)]) };
    let c2 = curve("C2", &[("p", 1), ("u", 1), ("r2", 2), ("r6", 6)], vec![rel]);
    let c3 = curve("C3", &[("p", 1), ("v", 1), ("s3", 3), ("s4", 4)], vec![]);
    let gen = |name: &str, l: u64, v: [i64; 2]| AbGenerator { name: name.into(), level: lv(l), value: AbValue::Vector(v.to_vec()) };
    Setting {
        curves: [c1, c2, c3].into_iter().take(d).collect(),
        ab: AbModel::constant(vec![4], 1, 1),
        generators: vec![gen("a", 1, [1, 0]), gen("b", 1, [0, 1]), gen("e2", 2, [1, 1]), gen("e3", 3, [3, 2]), gen("e6", 6, [2, 5])],
    }
}

/// Raw choices for one row: per curve up to two (point, coefficient) pairs,
/// and up to two (generator, coefficient) pairs.
pub type RowChoice = (Vec<Vec<(usize, i64)>>, Vec<(usize, i64)>);

fn coeff() -> impl Strategy<Value = i64> {
    prop_oneof![Just(-2i64), Just(-1), Just(1), Just(2)]
}

pub fn row_choice(d: usize) -> impl Strategy<Value = RowChoice> {
    (
        prop::collection::vec(prop::collection::vec((0usize..16, coeff()), 0..=2), d),
        prop::collection::vec((0usize..16, coeff()), 0..=2),
    )
}

/// A degree-zero divisor from (point, coefficient) choices, completed with the base point.
pub fn divisor_from(s: &Setting, i: usize, base: ExtLevel, picks: &[(usize, i64)]) -> Divisor {
    let c = &s.curves[i];
    let n = c.catalog.len();
    let mut d = Divisor::zero(base);
    for (p, k) in picks {
        let p = 1 + (p % (n - 1)) as u32;
        d.terms.add_term(p, *k);
    }
    let deg = c.degree(&d);
    d.terms.add_term(c.base_point, -deg);
    d
}

pub fn aexpr_from(s: &Setting, level: ExtLevel, picks: &[(usize, i64)]) -> AExpr {
    let pool: Vec<u32> = (0..s.generators.len() as u32).filter(|g| s.generator(*g).level.divides(level)).collect();
    let mut a = AExpr::zero();
    for (g, k) in picks {
        a = a.add(&AExpr::generator(pool[g % pool.len()]).scale(*k));
    }
    a
}

pub fn row_from(s: &Setting, level: ExtLevel, choice: &RowChoice) -> DatumRow {
    DatumRow {
        z: (0..s.d()).map(|i| divisor_from(s, i, level, &choice.0[i])).collect(),
        a: aexpr_from(s, level, &choice.1),
    }
}

pub fn datum_from(s: &Setting, level: ExtLevel, rows: &[RowChoice]) -> SymbolDatum {
    SymbolDatum { level, rows: rows.iter().map(|c| row_from(s, level, c)).collect() }
}

pub fn level() -> impl Strategy<Value = ExtLevel> {
    prop::sample::select(LEVELS.to_vec()).prop_map(lv)
}

/// `(d, level, rows)` with `d` curves and `r` rows.
pub fn datum_parts(max_d: usize, max_r: usize) -> impl Strategy<Value = (usize, ExtLevel, Vec<RowChoice>)> {
    (1..=max_d, 1..=max_r, level()).prop_flat_map(|(d, r, l)| (Just(d), Just(l), prop::collection::vec(row_choice(d), r)))
}

/// A cycle over `base` from (points, generators, coefficient) choices.
pub fn cycle_from(s: &Setting, base: ExtLevel, terms: &[(Vec<usize>, Vec<(usize, i64)>, i64)]) -> ZeroCycle {
    let mut z = ZeroCycle::zero(base);
    for (pts, gens, k) in terms {
        let points = (0..s.d()).map(|i| (pts[i] % s.curves[i].catalog.len()) as u32).collect();
        let a = aexpr_from(s, lv(6), gens);
        z.terms.add_term(ProductPoint::new(points, a), *k);
    }
    z
}

pub fn cycle_terms(d: usize) -> impl Strategy<Value = Vec<(Vec<usize>, Vec<(usize, i64)>, i64)>> {
    prop::collection::vec(
        (prop::collection::vec(0usize..16, d), prop::collection::vec((0usize..16, coeff()), 0..=2), coeff()),
        1..=4,
    )
}
