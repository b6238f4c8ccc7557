//! Normal forms for symmetric symbol groups of `J_1 x ... x J_d x A`.
//!
//! A slot entry is a formal combination of atoms. An atom is either the class
//! `iota(y) = [y] - [p_i]` of a catalog point on curve `i`, or a named
//! generator of `A`; each atom lives over its own minimal level. Inside a slot
//! entry at level `E`, an atom whose level does not divide `E` stands for its
//! trace from `lcm(E, level)` down to `E`.
//!
//! Expansion applies multilinearity, the symmetric-group coinvariants (slots
//! are sorted), and two consequences of the projection formula that need no
//! search: a symbol at level `L` whose atoms all live over a subfield `L0`
//! containing the base equals `[L : L0]` times the symbol at `L0`, and traced
//! atoms are pulled out by splitting the tensor product of their fields. A
//! pure symbol is therefore stored as a sorted atom list only; its level is
//! `lcm(base, atom levels)`.

use alloc::vec::Vec;

use crate::formal::{cmul, ucoeff, Coeff, FormalSum};
use crate::lattice::{product_multiplicity, rel_degree, res_multiplicity, tr_multiplicity, ExtLevel};
use crate::models::{AbValue, Divisor, PointId, Setting};
use crate::{Error, Result};

/// Which factor of `J_1 x ... x J_d x A` an atom belongs to. Jacobians sort
/// before `A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Factor {
    Jac(u16),
    Ab,
}

/// `Jac(i)` atoms index the catalog of curve `i`; `Ab` atoms index the
/// setting's generator list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub factor: Factor,
    pub gen: u32,
}

impl Atom {
    pub fn jac(curve: usize, pt: PointId) -> Atom {
        Atom { factor: Factor::Jac(curve as u16), gen: pt }
    }

    pub fn ab(gen: u32) -> Atom {
        Atom { factor: Factor::Ab, gen }
    }

    pub fn level(&self, s: &Setting) -> ExtLevel {
        match self.factor {
            Factor::Jac(i) => s.curves[i as usize].min_level(self.gen),
            Factor::Ab => s.generator(self.gen).level,
        }
    }

    pub fn check(&self, s: &Setting) -> Result<()> {
        match self.factor {
            Factor::Jac(i) => {
                let c = s.curve(i as usize)?;
                if (self.gen as usize) < c.catalog.len() {
                    Ok(())
                } else {
                    Err(Error::UnknownAtom(alloc::format!("point #{} on curve {i}", self.gen)))
                }
            }
            Factor::Ab => {
                if (self.gen as usize) < s.generators.len() {
                    Ok(())
                } else {
                    Err(Error::UnknownAtom(alloc::format!("generator #{}", self.gen)))
                }
            }
        }
    }

    /// True for `iota(p_i)`, which is zero.
    pub fn is_base_point(&self, s: &Setting) -> bool {
        match self.factor {
            Factor::Jac(i) => s.curves[i as usize].base_point == self.gen,
            Factor::Ab => false,
        }
    }
}

pub type SlotEntry = FormalSum<Atom>;

/// Level of the pure symbol with these atoms over `base`.
pub fn atoms_level(s: &Setting, atoms: &[Atom]) -> ExtLevel {
    atoms.iter().fold(ExtLevel::GROUND, |l, a| l.compositum(a.level(s)))
}

/// A formal combination of pure symbols of a fixed rank over a base level.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymbolSum {
    pub base: ExtLevel,
    pub rank: usize,
    pub terms: FormalSum<Vec<Atom>>,
}

impl SymbolSum {
    pub fn zero(base: ExtLevel, rank: usize) -> Self {
        SymbolSum { base, rank, terms: FormalSum::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn scale(&self, k: Coeff) -> SymbolSum {
        SymbolSum { base: self.base, rank: self.rank, terms: self.terms.scale(k) }
    }

    fn compatible(&self, other: &SymbolSum) -> Result<()> {
        if self.base != other.base {
            return Err(Error::BaseMismatch { left: self.base.degree(), right: other.base.degree() });
        }
        if self.rank != other.rank {
            return Err(Error::Shape(alloc::format!("ranks differ: {} vs {}", self.rank, other.rank)));
        }
        Ok(())
    }

    pub fn add(&self, other: &SymbolSum) -> Result<SymbolSum> {
        self.compatible(other)?;
        Ok(SymbolSum { base: self.base, rank: self.rank, terms: &self.terms + &other.terms })
    }

    pub fn sub(&self, other: &SymbolSum) -> Result<SymbolSum> {
        self.add(&other.scale(-1))
    }

    pub fn add_scaled(&mut self, other: &SymbolSum, k: Coeff) -> Result<()> {
        self.compatible(other)?;
        self.terms.add_scaled(&other.terms, k);
        Ok(())
    }

    /// Adds `c` times the symbol with atoms `atoms` (any order) living at
    /// `level`, a multiple of `lcm(base, atom levels)`.
    pub(crate) fn add_descended(&mut self, s: &Setting, mut atoms: Vec<Atom>, level: ExtLevel, c: Coeff) {
        atoms.sort_unstable();
        let canon = atoms_level(s, &atoms).compositum(self.base);
        let k = level.degree() / canon.degree();
        debug_assert_eq!(k * canon.degree(), level.degree());
        self.terms.add_term(atoms, cmul(c, ucoeff(k)));
    }
}

/// Multilinear expansion of `{e_1, ..., e_r}_{level/base}`.
pub fn sym_normalize(s: &Setting, base: ExtLevel, level: ExtLevel, slots: &[SlotEntry]) -> Result<SymbolSum> {
    rel_degree(level, base)?;
    for e in slots {
        for a in e.keys() {
            a.check(s)?;
        }
    }
    let lists: Vec<Vec<(Atom, Coeff)>> = slots
        .iter()
        .map(|e| e.iter().filter(|(a, _)| !a.is_base_point(s)).map(|(a, c)| (*a, c)).collect())
        .collect();
    let mut out = SymbolSum::zero(base, slots.len());
    let mut chosen: Vec<Atom> = Vec::with_capacity(slots.len());
    expand_rec(s, level, &lists, 0, 1, &mut chosen, &mut out)?;
    Ok(out)
}

fn expand_rec(
    s: &Setting,
    level: ExtLevel,
    lists: &[Vec<(Atom, Coeff)>],
    depth: usize,
    coeff: Coeff,
    chosen: &mut Vec<Atom>,
    out: &mut SymbolSum,
) -> Result<()> {
    if depth == lists.len() {
        // traced atoms: the symbol lives at the compositum of their fields,
        // with the splitting multiplicity of the tensor product
        let lifted: Vec<ExtLevel> = chosen.iter().map(|a| a.level(s).compositum(level)).collect();
        let (mu, top) = product_multiplicity(level, &lifted)?;
        out.add_descended(s, chosen.clone(), top, cmul(coeff, ucoeff(mu)));
        return Ok(());
    }
    for (a, c) in &lists[depth] {
        chosen.push(*a);
        expand_rec(s, level, lists, depth + 1, cmul(coeff, *c), chosen, out)?;
        chosen.pop();
    }
    Ok(())
}

/// True when some Jacobian factor occurs twice.
pub fn repeats_jacobian(atoms: &[Atom]) -> bool {
    atoms.windows(2).any(|w| matches!(w[0].factor, Factor::Jac(_)) && w[0].factor == w[1].factor)
}

/// Projection onto the summands with at most one copy of each Jacobian.
pub fn underline_quotient(x: &SymbolSum) -> SymbolSum {
    SymbolSum {
        base: x.base,
        rank: x.rank,
        terms: x.terms.iter().filter(|(k, _)| !repeats_jacobian(k)).map(|(k, c)| (k.clone(), c)).collect(),
    }
}

/// Trace from the current base down to `to`.
pub fn sym_trace(s: &Setting, x: &SymbolSum, to: ExtLevel) -> Result<SymbolSum> {
    rel_degree(x.base, to)?;
    let mut out = SymbolSum::zero(to, x.rank);
    for (atoms, c) in x.terms.iter() {
        let k = tr_multiplicity(atoms_level(s, atoms), x.base, to)?;
        out.terms.add_term(atoms.clone(), cmul(c, ucoeff(k)));
    }
    Ok(out)
}

/// Restriction from the current base up to `to`.
pub fn sym_res(s: &Setting, x: &SymbolSum, to: ExtLevel) -> Result<SymbolSum> {
    rel_degree(to, x.base)?;
    let mut out = SymbolSum::zero(to, x.rank);
    for (atoms, c) in x.terms.iter() {
        let k = res_multiplicity(atoms_level(s, atoms), x.base, to)?;
        out.terms.add_term(atoms.clone(), cmul(c, ucoeff(k)));
    }
    Ok(out)
}

/// The slot entry of `iota` applied to a degree-zero divisor on curve `i`:
/// each point contributes the trace of its own `iota` class.
pub fn divisor_entry(s: &Setting, curve: usize, d: &Divisor) -> Result<SlotEntry> {
    let c = s.curve(curve)?;
    let deg = c.degree(d);
    if deg != 0 {
        return Err(Error::NonZeroDegree { degree: deg });
    }
    let mut e = SlotEntry::zero();
    for (p, k) in d.terms.iter() {
        if *p != c.base_point {
            e.add_term(Atom::jac(curve, *p), k);
        }
    }
    Ok(e)
}

pub fn aexpr_entry(a: &crate::cycles::AExpr) -> SlotEntry {
    a.0.iter().map(|(g, c)| (Atom::ab(*g), c)).collect()
}

/// One place of a Weil relation: the residue level, `ord_v(f)`, and the
/// specialized slot entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WrRow {
    pub residue_level: ExtLevel,
    pub ord: Coeff,
    pub slots: Vec<SlotEntry>,
}

/// `sum_v ord_v(f) {s_v(x_1), ..., s_v(x_r)}_{k(v)/k}`, an element that is zero
/// in the true K-group. The rows must come from a principal divisor, so
/// `sum ord_v [k(v):k]` has to vanish.
pub fn wr_element(s: &Setting, rank: usize, rows: &[WrRow]) -> Result<SymbolSum> {
    let deg = rows
        .iter()
        .fold(0 as Coeff, |acc, r| acc + cmul(r.ord, ucoeff(r.residue_level.degree())));
    if deg != 0 {
        return Err(Error::DegreeCheckFailed { degree: deg });
    }
    let mut out = SymbolSum::zero(ExtLevel::GROUND, rank);
    for r in rows {
        if r.slots.len() != rank {
            return Err(Error::Shape(alloc::format!(
                "Weil relation row has {} slots, expected {rank}",
                r.slots.len()
            )));
        }
        let x = sym_normalize(s, ExtLevel::GROUND, r.residue_level, &r.slots)?;
        out.add_scaled(&x, r.ord)?;
    }
    Ok(out)
}

/// Replacement of an atom by an equal combination of atoms of the same
/// factor, used to feed group-level identities such as `iota(σy) = -iota(y)`
/// into symbol computations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomRewrite {
    pub from: Atom,
    pub to: SlotEntry,
}

fn atom_value(s: &Setting, a: Atom, level: ExtLevel) -> Result<AtomValue> {
    match a.factor {
        Factor::Jac(i) => {
            let c = s.curve(i as usize)?;
            Ok(AtomValue::Jac(c.div_res(&c.iota_divisor(a.gen, c.min_level(a.gen))?, level)?))
        }
        Factor::Ab => {
            let g = s.generator(a.gen);
            Ok(AtomValue::Ab(s.ab.res(&g.value, g.level, level)?))
        }
    }
}

enum AtomValue {
    Jac(Divisor),
    Ab(AbValue),
}

/// Checks that `rw.to` equals `rw.from` in the group of its factor, at the
/// level of `rw.from`. Every target atom must be defined there.
pub fn verify_rewrite(s: &Setting, rw: &AtomRewrite) -> Result<bool> {
    rw.from.check(s)?;
    let level = rw.from.level(s);
    for (a, _) in rw.to.iter() {
        a.check(s)?;
        if a.factor != rw.from.factor {
            return Err(Error::Shape("rewrite mixes factors".into()));
        }
        if !a.level(s).divides(level) {
            return Err(Error::LevelMismatch {
                what: "rewrite target".into(),
                level: level.degree(),
                required: a.level(s).degree(),
            });
        }
    }
    match rw.from.factor {
        Factor::Jac(i) => {
            let c = s.curve(i as usize)?;
            let AtomValue::Jac(lhs) = atom_value(s, rw.from, level)? else { unreachable!() };
            let mut rhs = Divisor::zero(level);
            for (a, k) in rw.to.iter() {
                let AtomValue::Jac(d) = atom_value(s, *a, level)? else { unreachable!() };
                rhs = rhs.add(&d.scale(k))?;
            }
            c.pic0_equal(&lhs, &rhs, level)
        }
        Factor::Ab => {
            let AtomValue::Ab(lhs) = atom_value(s, rw.from, level)? else { unreachable!() };
            let mut parts = Vec::new();
            for (a, k) in rw.to.iter() {
                let AtomValue::Ab(v) = atom_value(s, *a, level)? else { unreachable!() };
                parts.push((v, k));
            }
            let refs: Vec<(&AbValue, Coeff)> = parts.iter().map(|(v, k)| (v, *k)).collect();
            let rhs = s.ab.combine(&refs, level)?;
            s.ab.equal(&lhs, &rhs, level)
        }
    }
}

/// Substitutes verified rewrites into every pure symbol and re-expands.
/// Fails if any rewrite does not hold in the models.
pub fn apply_rewrites(s: &Setting, x: &SymbolSum, rewrites: &[AtomRewrite]) -> Result<SymbolSum> {
    for rw in rewrites {
        if !verify_rewrite(s, rw)? {
            return Err(Error::Shape("rewrite does not hold in the model".into()));
        }
    }
    let mut out = SymbolSum::zero(x.base, x.rank);
    for (atoms, c) in x.terms.iter() {
        let level = atoms_level(s, atoms).compositum(x.base);
        let slots: Vec<SlotEntry> = atoms
            .iter()
            .map(|a| match rewrites.iter().find(|rw| rw.from == *a) {
                Some(rw) => rw.to.clone(),
                None => SlotEntry::singleton(*a, 1),
            })
            .collect();
        out.add_scaled(&sym_normalize(s, x.base, level, &slots)?, c)?;
    }
    Ok(out)
}
