//! The genus-2 example: `X = C x J` for a genus-2 curve `C` with a
//! Weierstrass base point `p1`, `J` its Jacobian, and points `y1, y2, y3`
//! with hyperelliptic conjugates `sy1, sy2, sy3`.
//!
//! Four steps, each reported separately:
//! (a) the `F^3` generator `Psi'_3{(iota y1, 0), (0, a2), (0, a3)}` is the
//!     eight-term alternating cycle;
//! (b) the pure-`J` generator gives a triple Pontryagin product of degree-zero
//!     cycles, which vanishes because `dim J = 2` (cited, not computed);
//! (c) with `y2 = y1`, the Weil relation of the function with divisor
//!     `[y1] + [sy1] - 2[p1]` equals twice the symbol, so the symbol is
//!     2-torsion;
//! (d) the two `F^2` generator shapes, and the diagonal cycle whose `Phi_2`
//!     image is twice a symbol that the same Weil relation kills.

use std::collections::BTreeMap;

use chowsym_core::cycles::{pontryagin, product_cycle, degree_zero_factor, pushforward_base, AExpr, ProductPoint, ZeroCycle};
use chowsym_core::filtration::{
    certify_membership, phi_r, psi_blocks, psi_closed, psi_product, vanishing_structural_check, BlockClass,
    CertificateStatus, DatumRow, SymbolDatum,
};
use chowsym_core::models::{Divisor, Setting};
use chowsym_core::symbols::{apply_rewrites, wr_element, Atom, AtomRewrite, SlotEntry, SymbolSum, WrRow};
use chowsym_core::ExtLevel;

use crate::checks::CheckSpec;
use crate::expr::{format_cycle, format_symbol, parse_symbol};
use crate::report::{CheckResult, Status};
use crate::scenario::Scenario;

type Step = Result<(Status, String), (String, String)>;

struct Names<'a> {
    s: &'a Setting,
}

impl<'a> Names<'a> {
    fn pt(&self, name: &str) -> Result<u32, (String, String)> {
        self.s.curves[0].point_index(name).map_err(|e| ("scenario lacks a point".into(), e.to_string()))
    }

    fn gen(&self, name: &str) -> Result<u32, (String, String)> {
        self.s.generator_index(name).map_err(|e| ("scenario lacks an atom".into(), e.to_string()))
    }

    fn a(&self, names: &[&str]) -> Result<AExpr, (String, String)> {
        let mut out = AExpr::zero();
        for n in names {
            out = out.add(&AExpr::generator(self.gen(n)?));
        }
        Ok(out)
    }

    fn iota(&self, name: &str) -> Result<Divisor, (String, String)> {
        let p = self.s.curves[0].base_point;
        Ok(Divisor::from_terms(ExtLevel::GROUND, [(self.pt(name)?, 1), (p, -1)]))
    }

    fn cycle(&self, terms: &[(i64, &str, &[&str])]) -> Result<ZeroCycle, (String, String)> {
        let mut z = ZeroCycle::zero(ExtLevel::GROUND);
        for (c, y, a) in terms {
            z.terms.add_term(ProductPoint::new(vec![self.pt(y)?], self.a(a)?), *c);
        }
        Ok(z)
    }

    fn row(&self, z: Option<&str>, a: &[&str]) -> Result<DatumRow, (String, String)> {
        let z = match z {
            Some(y) => self.iota(y)?,
            None => Divisor::zero(ExtLevel::GROUND),
        };
        Ok(DatumRow { z: vec![z], a: self.a(a)? })
    }

    fn datum(&self, rows: &[(Option<&str>, &[&str])]) -> Result<SymbolDatum, (String, String)> {
        let rows = rows.iter().map(|(z, a)| self.row(*z, a)).collect::<Result<_, _>>()?;
        Ok(SymbolDatum { level: ExtLevel::GROUND, rows })
    }

    fn symbol(&self, text: &str) -> Result<SymbolSum, (String, String)> {
        parse_symbol(self.s, text).map_err(|e| ("bad symbol".into(), e.to_string()))
    }
}

fn core<T>(r: chowsym_core::Result<T>) -> Result<T, (String, String)> {
    r.map_err(|e| ("evaluation error".into(), e.to_string()))
}

fn step_a(n: &Names) -> Step {
    let s = n.s;
    let datum = n.datum(&[(Some("y1"), &[]), (None, &["a_y2"]), (None, &["a_y3"])])?;
    let z = core(psi_closed(s, &datum))?;
    let expected = n.cycle(&[
        (1, "y1", &["a_y2", "a_y3"]),
        (-1, "y1", &["a_y2"]),
        (-1, "y1", &["a_y3"]),
        (1, "y1", &[]),
        (-1, "p1", &["a_y2", "a_y3"]),
        (1, "p1", &["a_y2"]),
        (1, "p1", &["a_y3"]),
        (-1, "p1", &[]),
    ])?;
    if z != expected {
        return Err(("generator differs from the eight-term shape".into(), format_cycle(s, &z)));
    }
    if core(psi_product(s, &datum))? != z {
        return Err(("product construction disagrees".into(), format_cycle(s, &z)));
    }
    let cert = core(certify_membership(s, &z, 3))?;
    if cert.status != CertificateStatus::Certified {
        return Err(("generator not certified in F^3".into(), format_cycle(s, &z)));
    }
    let top = core(phi_r(s, &z, 3))?;
    let want = n.symbol("6{(y1,0),(0,a_y2),(0,a_y3)}")?;
    if top != want {
        return Err(("Phi_3 is not 3! times the symbol".into(), format_symbol(s, &top)));
    }
    Ok((Status::Pass, format!("{} (certified in F^3, Phi_3 = {})", format_cycle(s, &z), format_symbol(s, &top))))
}

fn step_b(n: &Names) -> Step {
    let s = n.s;
    let datum = n.datum(&[(None, &["a_y1"]), (None, &["a_y2"]), (None, &["a_y3"])])?;
    // the witness: ([a1] - [0]) ⊙ ([a2] - [0]) ⊙ ([a3] - [0]) placed over p1
    let g = ExtLevel::GROUND;
    let mut prod = ZeroCycle::point(g, ProductPoint::on_a(AExpr::zero()), 1);
    for a in ["a_y1", "a_y2", "a_y3"] {
        prod = core(pontryagin(s, &prod, &degree_zero_factor(g, &n.a(&[a])?)))?;
    }
    let placed = core(product_cycle(s, &BTreeMap::new(), &prod, g).and_then(|w| pushforward_base(s, &w, g)))?;
    let blocks = core(psi_blocks(s, &datum))?;
    let report = core(vanishing_structural_check(s, &datum, s.ab.dimension))?;
    let mut witnessed = 0;
    for (b, c) in blocks.iter().zip(&report.blocks) {
        match &c.class {
            BlockClass::FormallyZero => {}
            BlockClass::PontryaginNilpotent { factors, .. } => {
                if *factors < s.ab.dimension as usize + 1 || b.cycle != placed {
                    return Err(("pure-J summand lacks a Pontryagin witness".into(), format_cycle(s, &b.cycle)));
                }
                witnessed += 1;
            }
            BlockClass::Unclassified => {
                return Err(("unclassified summand".into(), format_cycle(s, &b.cycle)));
            }
        }
    }
    if witnessed != 1 || core(psi_closed(s, &datum))? != placed {
        return Err(("Psi'_3 is not the triple product".into(), format_cycle(s, &placed)));
    }
    Ok((
        Status::AxiomCited,
        format!(
            "Psi'_3 = ([a_y1]-[0]) ⊙ ([a_y2]-[0]) ⊙ ([a_y3]-[0]) = {}; 3 factors > dim J = {}, zero in CH_0(J) by Pontryagin nilpotence",
            format_cycle(s, &placed),
            s.ab.dimension
        ),
    ))
}

fn entry(atoms: &[(Atom, i64)]) -> SlotEntry {
    atoms.iter().copied().collect()
}

/// Weil relation of `f` with divisor `[y1] + [sy1] - 2[p1]` against the maps
/// `iota x 0`, `0 x iota` and, when `third` is set, the constant map to `third`.
fn weil_relation(n: &Names, third: Option<&str>) -> Result<SymbolSum, (String, String)> {
    let s = n.s;
    let c = &s.curves[0];
    let f = Divisor::from_terms(ExtLevel::GROUND, [(n.pt("y1")?, 1), (n.pt("sy1")?, 1), (c.base_point, -2)]);
    if !core(c.pic0_reduce(&f, ExtLevel::GROUND))?.is_zero() {
        return Err(("the divisor of f is not principal in the model".into(), format!("{:?}", f.terms)));
    }
    let rank = if third.is_some() { 3 } else { 2 };
    let mut rows = Vec::new();
    for (place, ord, image) in [("y1", 1, Some("a_y1")), ("sy1", 1, Some("a_sy1")), ("p1", -2, None)] {
        let pt = n.pt(place)?;
        let jac = if pt == c.base_point { SlotEntry::zero() } else { entry(&[(Atom::jac(0, pt), 1)]) };
        let ab = match image {
            Some(g) => entry(&[(Atom::ab(n.gen(g)?), 1)]),
            None => SlotEntry::zero(),
        };
        let mut slots = vec![jac, ab];
        if let Some(t) = third {
            slots.push(entry(&[(Atom::ab(n.gen(t)?), 1)]));
        }
        rows.push(WrRow { residue_level: ExtLevel::GROUND, ord, slots });
    }
    core(wr_element(s, rank, &rows))
}

/// `iota(sy1) = -iota(y1)` in both factors.
fn conjugate_rewrites(n: &Names) -> Result<Vec<AtomRewrite>, (String, String)> {
    let jac = AtomRewrite { from: Atom::jac(0, n.pt("sy1")?), to: entry(&[(Atom::jac(0, n.pt("y1")?), -1)]) };
    let ab = AtomRewrite { from: Atom::ab(n.gen("a_sy1")?), to: entry(&[(Atom::ab(n.gen("a_y1")?), -1)]) };
    Ok(vec![jac, ab])
}

fn step_c(n: &Names) -> Step {
    let s = n.s;
    let c = &s.curves[0];
    let g = ExtLevel::GROUND;
    if !core(c.pic0_equal(&n.iota("sy1")?, &n.iota("y1")?.scale(-1), g))? {
        return Err(("iota(sy1) != -iota(y1)".into(), "Pic^0 check".into()));
    }
    let plain = n.symbol("{(y1,0),(0,a_y1),(0,a_y3)}")?;
    if n.symbol("{(-y1,0),(0,-a_y1),(0,a_y3)}")? != plain {
        return Err(("{-a, -b, c} != {a, b, c}".into(), format_symbol(s, &plain)));
    }
    let wr = weil_relation(n, Some("a_y3"))?;
    let rewritten = core(apply_rewrites(s, &wr, &conjugate_rewrites(n)?))?;
    if rewritten != plain.scale(2) {
        return Err(("Weil relation is not twice the symbol".into(), format_symbol(s, &rewritten)));
    }
    Ok((
        Status::Pass,
        format!(
            "iota(sy1) = -iota(y1); Weil relation {} = {}, so the symbol is 2-torsion and vanishes after inverting 3!",
            format_symbol(s, &wr),
            format_symbol(s, &rewritten)
        ),
    ))
}

fn step_d(n: &Names) -> Step {
    let s = n.s;
    let mixed = core(psi_closed(s, &n.datum(&[(Some("y1"), &[]), (None, &["a_y2"])])?))?;
    let mixed_want = n.cycle(&[(1, "y1", &["a_y2"]), (-1, "y1", &[]), (-1, "p1", &["a_y2"]), (1, "p1", &[])])?;
    if mixed != mixed_want {
        return Err(("mixed F^2 generator has the wrong shape".into(), format_cycle(s, &mixed)));
    }
    let pure = core(psi_closed(s, &n.datum(&[(None, &["a_y1"]), (None, &["a_y2"])])?))?;
    let pure_want = n.cycle(&[
        (1, "p1", &["a_y1", "a_y2"]),
        (-1, "p1", &["a_y1"]),
        (-1, "p1", &["a_y2"]),
        (1, "p1", &[]),
    ])?;
    if pure != pure_want {
        return Err(("pure F^2 generator has the wrong shape".into(), format_cycle(s, &pure)));
    }
    let diagonal = n.cycle(&[(1, "y1", &["a_y1"]), (-1, "y1", &[]), (-1, "p1", &["a_y1"]), (1, "p1", &[])])?;
    for t in 0..2 {
        if !core(phi_r(s, &diagonal, t))?.is_zero() {
            return Err((format!("Phi_{t} of the diagonal cycle is nonzero"), format_cycle(s, &diagonal)));
        }
    }
    let phi2 = core(phi_r(s, &diagonal, 2))?;
    let want = n.symbol("2{(y1,0),(0,a_y1)}")?;
    if phi2 != want {
        return Err(("Phi_2 of the diagonal cycle".into(), format_symbol(s, &phi2)));
    }
    let wr = core(apply_rewrites(s, &weil_relation(n, None)?, &conjugate_rewrites(n)?))?;
    if wr != phi2 {
        return Err(("Phi_2 image is not the Weil relation".into(), format_symbol(s, &wr)));
    }
    Ok((
        Status::Pass,
        format!(
            "{}; {}; diagonal {} has Phi_0 = Phi_1 = 0 and Phi_2 = {}, equal to a Weil relation",
            format_cycle(s, &mixed),
            format_cycle(s, &pure),
            format_cycle(s, &diagonal),
            format_symbol(s, &phi2)
        ),
    ))
}

pub fn steps(sc: &Scenario, name: &str, spec: &CheckSpec) -> Vec<CheckResult> {
    let n = Names { s: &sc.setting };
    let steps: [(&str, fn(&Names) -> Step); 4] = [
        ("a:f3-generator", step_a),
        ("b:pontryagin-witness", step_b),
        ("c:two-torsion", step_c),
        ("d:f2-generators-and-diagonal", step_d),
    ];
    steps
        .iter()
        .map(|(label, f)| {
            let r = CheckResult::new(format!("{name}:{label}"), spec);
            match f(&n) {
                Ok((status, detail)) => r.with_status(status, detail),
                Err((detail, witness)) => r.fail(detail, witness),
            }
        })
        .collect()
}
