//! Seeded random data drawn from a scenario's catalogs and generator pool.

use chowsym_core::cycles::{AExpr, ProductPoint, ZeroCycle};
use chowsym_core::filtration::{DatumRow, SymbolDatum};
use chowsym_core::models::{Divisor, Setting};
use chowsym_core::symbols::{Atom, SlotEntry};
use chowsym_core::{Coeff, ExtLevel};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const LEVELS: [u64; 5] = [1, 2, 3, 4, 6];

/// Towers `E | L` with `[L:E] >= 2` among [`LEVELS`].
pub const TOWERS: [(u64, u64); 7] = [(1, 2), (1, 3), (1, 4), (1, 6), (2, 4), (2, 6), (3, 6)];

/// Most atoms a single row may contribute to its slot.
pub const MAX_ATOMS_PER_SLOT: usize = 4;

pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

pub fn lv(n: u64) -> ExtLevel {
    ExtLevel::new(n).expect("positive level")
}

fn small_coeff(rng: &mut impl Rng) -> Coeff {
    let c = rng.gen_range(1..=2);
    if rng.gen_bool(0.5) { c } else { -c }
}

/// A degree-zero divisor over `base` with at most `max_points` points besides
/// the base point.
pub fn divisor(rng: &mut impl Rng, s: &Setting, curve: usize, base: ExtLevel, max_points: usize) -> Divisor {
    let c = &s.curves[curve];
    let others: Vec<u32> = (0..c.catalog.len() as u32).filter(|p| *p != c.base_point).collect();
    let n = rng.gen_range(0..=max_points.min(others.len()));
    let mut d = Divisor::zero(base);
    for p in others.choose_multiple(rng, n) {
        let k = small_coeff(rng);
        d.terms.add_term(*p, k);
    }
    let deg = c.degree(&d);
    d.terms.add_term(c.base_point, -deg);
    d
}

/// A combination of at most `max_atoms` generators defined over `level`.
pub fn aexpr(rng: &mut impl Rng, s: &Setting, level: ExtLevel, max_atoms: usize) -> AExpr {
    let pool: Vec<u32> =
        (0..s.generators.len() as u32).filter(|g| s.generator(*g).level.divides(level)).collect();
    let n = rng.gen_range(0..=max_atoms.min(pool.len()));
    let mut a = AExpr::zero();
    for g in pool.choose_multiple(rng, n) {
        a = a.add(&AExpr::generator(*g).scale(small_coeff(rng)));
    }
    a
}

/// A datum row whose slot has at most [`MAX_ATOMS_PER_SLOT`] atoms.
pub fn row(rng: &mut impl Rng, s: &Setting, level: ExtLevel) -> DatumRow {
    let mut budget = MAX_ATOMS_PER_SLOT;
    let mut z = Vec::with_capacity(s.d());
    let mut order: Vec<usize> = (0..s.d()).collect();
    order.shuffle(rng);
    let mut divs = vec![Divisor::zero(level); s.d()];
    for i in order {
        let d = divisor(rng, s, i, level, budget.min(2));
        budget -= d.terms.keys().filter(|p| **p != s.curves[i].base_point).count();
        divs[i] = d;
    }
    z.extend(divs);
    let a = aexpr(rng, s, level, budget.min(2));
    DatumRow { z, a }
}

pub fn datum(rng: &mut impl Rng, s: &Setting, r: usize) -> SymbolDatum {
    let level = lv(*LEVELS.choose(rng).unwrap());
    datum_at(rng, s, r, level)
}

pub fn datum_at(rng: &mut impl Rng, s: &Setting, r: usize, level: ExtLevel) -> SymbolDatum {
    SymbolDatum { level, rows: (0..r).map(|_| row(rng, s, level)).collect() }
}

/// A datum whose rows have zero divisors: only abelian coordinates.
pub fn pure_a_datum(rng: &mut impl Rng, s: &Setting, r: usize, level: ExtLevel) -> SymbolDatum {
    let rows = (0..r)
        .map(|_| DatumRow { z: vec![Divisor::zero(level); s.d()], a: aexpr(rng, s, level, 2) })
        .collect();
    SymbolDatum { level, rows }
}

/// A cycle over `base` with up to four terms.
pub fn cycle(rng: &mut impl Rng, s: &Setting, base: ExtLevel) -> ZeroCycle {
    let mut z = ZeroCycle::zero(base);
    for _ in 0..rng.gen_range(1..=4) {
        let pts = s.curves.iter().map(|c| rng.gen_range(0..c.catalog.len() as u32)).collect();
        let a_level = lv(*LEVELS.choose(rng).unwrap());
        let a = aexpr(rng, s, a_level, 2);
        let k = rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 };
        z.terms.add_term(ProductPoint::new(pts, a), k);
    }
    z
}

/// Slot entries over `level` for a random symbol; at most two atoms each.
pub fn slots(rng: &mut impl Rng, s: &Setting, rank: usize, level: ExtLevel) -> Vec<SlotEntry> {
    (0..rank)
        .map(|_| {
            let mut e = SlotEntry::zero();
            for _ in 0..rng.gen_range(1..=2) {
                let atom = if s.d() > 0 && (s.generators.is_empty() || rng.gen_bool(0.5)) {
                    let i = rng.gen_range(0..s.d());
                    let c = &s.curves[i];
                    Atom::jac(i, rng.gen_range(0..c.catalog.len() as u32))
                } else if !s.generators.is_empty() {
                    Atom::ab(rng.gen_range(0..s.generators.len() as u32))
                } else {
                    continue;
                };
                if atom.level(s).divides(level) || matches!(atom.factor, chowsym_core::symbols::Factor::Jac(_)) {
                    e.add_term(atom, small_coeff(rng));
                }
            }
            e
        })
        .collect()
}
