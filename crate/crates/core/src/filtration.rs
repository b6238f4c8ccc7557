//! The maps `Phi_r: CH_0(X) -> S_r` and `Psi'_r: data -> CH_0(X)`, the
//! Albanese map, filtration certificates and round-trip checks.
//!
//! `Phi_r` sends a closed point `z` to `{phi(z), ..., phi(z)}_{k(z)}` with
//! `phi = iota_1 x ... x iota_d x id_A`, followed by the projection that keeps
//! at most one copy of each Jacobian. `Psi'_r` builds, for every subset of
//! curves and every injection of it into the rows, the product of the
//! selected divisors with the Pontryagin product of `[a_j] - [0]` over the
//! remaining rows, pushed down to the ground level.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::cycles::{degree_zero_factor, modeled_chow_a, pontryagin, product_cycle, pushforward_base, AExpr, ProductPoint, ZeroCycle};
use crate::formal::{cmul, ucoeff, Coeff};
use crate::lattice::{product_multiplicity, rel_degree, tr_multiplicity, ExtLevel};
use crate::models::{AbValue, Divisor, PointId, Setting};
use crate::symbols::{aexpr_entry, divisor_entry, sym_normalize, sym_trace, underline_quotient, Atom, SlotEntry, SymbolSum};
use crate::{Error, Result};

/// One row `(z_1, ..., z_d, a)` of a symbol datum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DatumRow {
    pub z: Vec<Divisor>,
    pub a: AExpr,
}

/// The raw input of `Psi'_r`: `r` rows over a common level `k'`. No relation
/// of the symbol group is applied to it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolDatum {
    pub level: ExtLevel,
    pub rows: Vec<DatumRow>,
}

impl SymbolDatum {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn validate(&self, s: &Setting) -> Result<()> {
        for row in &self.rows {
            if row.z.len() != s.d() {
                return Err(Error::Shape(alloc::format!(
                    "row has {} curve entries, expected {}",
                    row.z.len(),
                    s.d()
                )));
            }
            for (i, z) in row.z.iter().enumerate() {
                if z.base != self.level {
                    return Err(Error::BaseMismatch { left: z.base.degree(), right: self.level.degree() });
                }
                let deg = s.curve(i)?.degree(z);
                if deg != 0 {
                    return Err(Error::NonZeroDegree { degree: deg });
                }
            }
            let al = row.a.level(s);
            if !al.divides(self.level) {
                return Err(Error::LevelMismatch {
                    what: "abelian coordinate".into(),
                    level: self.level.degree(),
                    required: al.degree(),
                });
            }
        }
        Ok(())
    }

    /// The slot entries `iota(z_1) + ... + iota(z_d) + a` of each row.
    pub fn slots(&self, s: &Setting) -> Result<Vec<SlotEntry>> {
        self.rows
            .iter()
            .map(|row| {
                let mut e = aexpr_entry(&row.a);
                for (i, z) in row.z.iter().enumerate() {
                    e += &divisor_entry(s, i, z)?;
                }
                Ok(e)
            })
            .collect()
    }

    /// The symbol `{row_1, ..., row_r}_{k'/k}` in normal form, before the
    /// Jacobian-repetition projection.
    pub fn symbol(&self, s: &Setting) -> Result<SymbolSum> {
        self.validate(s)?;
        sym_normalize(s, ExtLevel::GROUND, self.level, &self.slots(s)?)
    }
}

fn atoms_of_point(s: &Setting, p: &ProductPoint) -> Vec<(Atom, Coeff)> {
    let mut out: Vec<(Atom, Coeff)> = p
        .curve_points
        .iter()
        .enumerate()
        .filter(|(i, y)| s.curves[*i].base_point != **y)
        .map(|(i, y)| (Atom::jac(i, *y), 1))
        .collect();
    out.extend(p.a.0.iter().map(|(g, c)| (Atom::ab(*g), c)));
    out.sort();
    out
}

/// `Phi_r` over the base of `z` (the field `k'` of `X_{k'}`).
pub fn phi_over(s: &Setting, z: &ZeroCycle, r: usize) -> Result<SymbolSum> {
    let mut out = SymbolSum::zero(z.base, r);
    let mut chosen = Vec::with_capacity(r);
    for (p, c) in z.terms.iter() {
        let level = p.min_level(s).compositum(z.base);
        let atoms = atoms_of_point(s, p);
        multisets(s, &atoms, 0, r, c, level, &mut chosen, &mut out);
    }
    Ok(out)
}

/// Adds `sum over size-r multisets M` of `multinomial * prod w^m {M}_level`,
/// skipping multisets that repeat a Jacobian atom.
#[allow(clippy::too_many_arguments)]
fn multisets(
    s: &Setting,
    atoms: &[(Atom, Coeff)],
    idx: usize,
    remaining: usize,
    coeff: Coeff,
    level: ExtLevel,
    chosen: &mut Vec<Atom>,
    out: &mut SymbolSum,
) {
    if remaining == 0 {
        out.add_descended(s, chosen.clone(), level, coeff);
        return;
    }
    if idx == atoms.len() {
        return;
    }
    let (atom, w) = atoms[idx];
    let max = match atom.factor {
        crate::symbols::Factor::Jac(_) => 1.min(remaining),
        crate::symbols::Factor::Ab => remaining,
    };
    let mut c = coeff;
    for m in 0..=max {
        if m > 0 {
            // c = coeff * C(remaining, m) * w^m, built incrementally
            c = cmul(c, w);
            c = cmul(c, ucoeff((remaining - m + 1) as u64)) / (m as Coeff);
            chosen.push(atom);
        }
        multisets(s, atoms, idx + 1, remaining - m, c, level, chosen, out);
    }
    for _ in 0..max {
        chosen.pop();
    }
}

/// `Phi_r` on cycles over the ground level.
pub fn phi_r(s: &Setting, z: &ZeroCycle, r: usize) -> Result<SymbolSum> {
    if !z.base.is_ground() {
        return Err(Error::BaseNotGround { base: z.base.degree() });
    }
    phi_over(s, z, r)
}

/// `sum over nu ⊆ rem` of `(-1)^{|rem| - |nu|} [sum a_nu]`, as `(a, sign)` pairs.
fn alternating_a_part(rows: &[DatumRow], rem: &[usize]) -> Vec<(AExpr, Coeff)> {
    let n = rem.len();
    let mut out = Vec::with_capacity(1 << n);
    for mask in 0u32..(1 << n) {
        let j = mask.count_ones() as usize;
        let sign = if (n - j) % 2 == 0 { 1 } else { -1 };
        let a = AExpr::sum(rem.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, t)| &rows[*t].a));
        out.push((a, sign));
    }
    out
}

/// Increasing `s`-subsets of `0..n`, lexicographic.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(n, k, 0, &mut cur, &mut out);
    out
}

/// Injective maps from a `k`-set into `0..n`, as image tuples in lexicographic order.
fn injections(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in 0..n {
            if !cur.contains(&i) {
                cur.push(i);
                rec(n, k, cur, out);
                cur.pop();
            }
        }
    }
    rec(n, k, &mut cur, &mut out);
    out
}

/// One summand of `Psi'_r`: a subset `curves` of the curves, the rows they
/// are sent to, and the resulting cycle over the ground.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiBlock {
    pub curves: Vec<usize>,
    pub images: Vec<usize>,
    /// The rows not hit by the injection; the abelian part is the Pontryagin
    /// product of `[a_j] - [0]` over these.
    pub free_rows: Vec<usize>,
    pub cycle: ZeroCycle,
}

/// Every `(s, I, phi_I)` summand of `Psi'_r`, in lexicographic order, each
/// computed by the closed formula over support points and subsets `nu`.
pub fn psi_blocks(s: &Setting, datum: &SymbolDatum) -> Result<Vec<PsiBlock>> {
    datum.validate(s)?;
    let r = datum.rank();
    let e = datum.level;
    let d = s.d();
    let mut blocks = Vec::new();
    for sz in 0..=d.min(r) {
        for curves in subsets(d, sz) {
            for images in injections(r, sz) {
                let free_rows: Vec<usize> = (0..r).filter(|t| !images.contains(t)).collect();
                let a_part = alternating_a_part(&datum.rows, &free_rows);
                let mut cycle = ZeroCycle::zero(ExtLevel::GROUND);
                // supports: one point from each selected divisor
                let supports: Vec<Vec<(PointId, Coeff)>> = curves
                    .iter()
                    .zip(&images)
                    .map(|(i, t)| datum.rows[*t].z[*i].terms.iter().map(|(p, c)| (*p, c)).collect())
                    .collect();
                let mut idx = vec![0usize; sz];
                if supports.iter().all(|v| !v.is_empty()) {
                    'odometer: loop {
                        let mut pts: Vec<PointId> = s.curves.iter().map(|c| c.base_point).collect();
                        let mut coeff: Coeff = 1;
                        let mut levels = Vec::with_capacity(sz);
                        for (k, i) in curves.iter().enumerate() {
                            let (p, n) = supports[k][idx[k]];
                            pts[*i] = p;
                            coeff = cmul(coeff, n);
                            levels.push(s.curves[*i].canonical_level(p, e));
                        }
                        // the abelian coordinate is k'-rational, so only the curve
                        // points contribute to the splitting of the fibre product
                        let (mu, _) = product_multiplicity(e, &levels)?;
                        for (a, sign) in &a_part {
                            let p = ProductPoint::new(pts.clone(), a.clone());
                            let push = tr_multiplicity(p.min_level(s), e, ExtLevel::GROUND)?;
                            let k = cmul(cmul(coeff, *sign), cmul(ucoeff(mu), ucoeff(push)));
                            cycle.terms.add_term(p, k);
                        }
                        let mut k = 0;
                        loop {
                            if k == sz {
                                break 'odometer;
                            }
                            idx[k] += 1;
                            if idx[k] < supports[k].len() {
                                break;
                            }
                            idx[k] = 0;
                            k += 1;
                        }
                    }
                }
                blocks.push(PsiBlock { curves: curves.clone(), images, free_rows, cycle });
            }
        }
    }
    Ok(blocks)
}

/// `Psi'_r` by the closed formula with explicit signs.
pub fn psi_closed(s: &Setting, datum: &SymbolDatum) -> Result<ZeroCycle> {
    let mut out = ZeroCycle::zero(ExtLevel::GROUND);
    for b in psi_blocks(s, datum)? {
        out.add_assign(&b.cycle)?;
    }
    Ok(out)
}

/// `Psi'_r` from its definition: products of pulled-back divisors with
/// Pontryagin products of `[a_j] - [0]`, pushed to the ground.
pub fn psi_product(s: &Setting, datum: &SymbolDatum) -> Result<ZeroCycle> {
    datum.validate(s)?;
    let r = datum.rank();
    let e = datum.level;
    let d = s.d();
    let mut w_sum = ZeroCycle::zero(e);
    for sz in 0..=d.min(r) {
        for curves in subsets(d, sz) {
            for images in injections(r, sz) {
                let mut a_cycle = ZeroCycle::point(e, ProductPoint::on_a(AExpr::zero()), 1);
                for t in (0..r).filter(|t| !images.contains(t)) {
                    a_cycle = pontryagin(s, &a_cycle, &degree_zero_factor(e, &datum.rows[t].a))?;
                }
                let selected: BTreeMap<usize, Divisor> =
                    curves.iter().zip(&images).map(|(i, t)| (*i, datum.rows[*t].z[*i].clone())).collect();
                w_sum.add_assign(&product_cycle(s, &selected, &a_cycle, e)?)?;
            }
        }
    }
    pushforward_base(s, &w_sum, ExtLevel::GROUND)
}

/// `(degree, alb)` with the Albanese part given coordinatewise: a divisor of
/// degree zero on each curve (to be compared in `Pic^0`) and a value of `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlbaneseImage {
    pub degree: Coeff,
    pub jac: Vec<Divisor>,
    pub ab: AbValue,
}

impl AlbaneseImage {
    fn zero(s: &Setting) -> Result<Self> {
        Ok(AlbaneseImage {
            degree: 0,
            jac: vec![Divisor::zero(ExtLevel::GROUND); s.d()],
            ab: s.ab.zero(ExtLevel::GROUND)?,
        })
    }

    /// Equality in `Z ⊕ J_1(k) ⊕ ... ⊕ A(k)`.
    pub fn equivalent(&self, other: &AlbaneseImage, s: &Setting) -> Result<bool> {
        if self.degree != other.degree {
            return Ok(false);
        }
        for (i, (x, y)) in self.jac.iter().zip(&other.jac).enumerate() {
            if !s.curve(i)?.pic0_equal(x, y, ExtLevel::GROUND)? {
                return Ok(false);
            }
        }
        s.ab.equal(&self.ab, &other.ab, ExtLevel::GROUND)
    }
}

/// `(deg Z, sum c Tr_{k(z)/k}(phi(z)))` for `Z` over the ground.
pub fn albanese(s: &Setting, z: &ZeroCycle) -> Result<AlbaneseImage> {
    if !z.base.is_ground() {
        return Err(Error::BaseNotGround { base: z.base.degree() });
    }
    let g = ExtLevel::GROUND;
    let mut out = AlbaneseImage::zero(s)?;
    out.degree = crate::cycles::cyc_degree(s, z);
    for (p, c) in z.terms.iter() {
        let l = p.min_level(s);
        for (i, y) in p.curve_points.iter().enumerate() {
            let cv = s.curve(i)?;
            let t = cv.div_tr(&cv.iota_divisor(*y, l)?, g)?;
            out.jac[i] = out.jac[i].add(&t.scale(c))?;
        }
        let v = s.ab.tr(&p.a.evaluate(s, l)?, l, g)?;
        out.ab = s.ab.combine(&[(&out.ab, 1), (&v, c)], g)?;
    }
    Ok(out)
}

/// The other leg of the Albanese triangle: `Phi_0` together with the
/// isomorphism `K_1(k; B) -> B(k)`, `{b}_{k'} -> Tr_{k'/k}(b)`, applied to `Phi_1`.
pub fn albanese_via_phi(s: &Setting, z: &ZeroCycle) -> Result<AlbaneseImage> {
    let g = ExtLevel::GROUND;
    let mut out = AlbaneseImage::zero(s)?;
    out.degree = phi_r(s, z, 0)?.terms.coeff(&Vec::new());
    for (atoms, c) in phi_r(s, z, 1)?.terms.iter() {
        let a = atoms[0];
        let l = a.level(s);
        match a.factor {
            crate::symbols::Factor::Jac(i) => {
                let cv = s.curve(i as usize)?;
                let t = cv.div_tr(&cv.iota_divisor(a.gen, l)?, g)?;
                out.jac[i as usize] = out.jac[i as usize].add(&t.scale(c))?;
            }
            crate::symbols::Factor::Ab => {
                let gen = s.generator(a.gen);
                let v = s.ab.tr(&gen.value, gen.level, g)?;
                out.ab = s.ab.combine(&[(&out.ab, 1), (&v, c)], g)?;
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertificateStatus {
    /// Every `Phi_j`, `j < r`, has zero normal form, so the cycle lies in `F^r`.
    Certified,
    /// Some normal form is nonzero; membership is undecided.
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub cycle: ZeroCycle,
    pub claimed_r: usize,
    pub status: CertificateStatus,
    pub evidence: Vec<SymbolSum>,
}

/// One-sided test for `Z ∈ F^r = ∩_{j<r} ker Phi_j`.
pub fn certify_membership(s: &Setting, z: &ZeroCycle, r: usize) -> Result<Certificate> {
    let evidence = (0..r).map(|j| phi_r(s, z, j)).collect::<Result<Vec<_>>>()?;
    let status = if evidence.iter().all(SymbolSum::is_zero) {
        CertificateStatus::Certified
    } else {
        CertificateStatus::Unknown
    };
    Ok(Certificate { cycle: z.clone(), claimed_r: r, status, evidence })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundtripReport {
    pub rank: usize,
    pub cycle: ZeroCycle,
    /// `Phi_t(Psi'_r(S))` for `t = 0..=r`.
    pub phi: Vec<SymbolSum>,
    /// `r! q(S)`.
    pub expected_top: SymbolSum,
    /// Indices `t < r` with nonzero `Phi_t`.
    pub nonvanishing: Vec<usize>,
    pub top_matches: bool,
}

impl RoundtripReport {
    pub fn passed(&self) -> bool {
        self.nonvanishing.is_empty() && self.top_matches
    }
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Computes `Z = Psi'_r(S)`, all `Phi_t(Z)` for `t <= r`, and compares the top
/// one with `r!` times the projected symbol of `S`.
pub fn roundtrip_report(s: &Setting, datum: &SymbolDatum) -> Result<RoundtripReport> {
    let r = datum.rank();
    let cycle = psi_closed(s, datum)?;
    let phi = (0..=r).map(|t| phi_r(s, &cycle, t)).collect::<Result<Vec<_>>>()?;
    let expected_top = underline_quotient(&datum.symbol(s)?).scale(ucoeff(factorial(r)));
    let nonvanishing = (0..r).filter(|t| !phi[*t].is_zero()).collect();
    let top_matches = phi[r] == expected_top;
    Ok(RoundtripReport { rank: r, cycle, phi, expected_top, nonvanishing, top_matches })
}

/// Trace compatibility of `Phi_r`: returns `(Phi_r(pi_* alpha), Tr(Phi_r^{k'}(alpha)))`.
pub fn trace_compatibility_sides(s: &Setting, alpha: &ZeroCycle, r: usize) -> Result<(SymbolSum, SymbolSum)> {
    let g = ExtLevel::GROUND;
    let lhs = phi_r(s, &pushforward_base(s, alpha, g)?, r)?;
    let rhs = sym_trace(s, &phi_over(s, alpha, r)?, g)?;
    Ok((lhs, rhs))
}

/// Both sides of partial multilinearity in row `t`: `Psi'` of the datum with
/// row `t` replaced by `(z_t + z̃, a_t)`, against the sum of `Psi'` with row
/// `t` replaced by `(z_t, 0)` and by `(z̃, a_t)`.
pub fn partial_multilinearity_sides(
    s: &Setting,
    datum: &SymbolDatum,
    t: usize,
    tilde: &[Divisor],
) -> Result<(ZeroCycle, ZeroCycle)> {
    let row = datum.rows.get(t).ok_or_else(|| Error::Shape("row index out of range".into()))?;
    if tilde.len() != row.z.len() {
        return Err(Error::Shape("replacement row has the wrong number of curve entries".into()));
    }
    let with = |z: Vec<Divisor>, a: AExpr| {
        let mut d = datum.clone();
        d.rows[t] = DatumRow { z, a };
        d
    };
    let summed = row.z.iter().zip(tilde).map(|(x, y)| x.add(y)).collect::<Result<Vec<_>>>()?;
    let lhs = psi_closed(s, &with(summed, row.a.clone()))?;
    let rhs = psi_closed(s, &with(row.z.clone(), AExpr::zero()))?
        .add(&psi_closed(s, &with(tilde.to_vec(), row.a.clone()))?)?;
    Ok((lhs, rhs))
}

/// Both sides of the partial projection formula for a tower `E | L`: the
/// datum over `L` made of `row` (divisors over `L`, abelian part 0) at
/// position `t` and the restrictions of `others` (over `E`), against the
/// datum over `E` with the trace of `row` at position `t`.
pub fn projection_formula_sides(
    s: &Setting,
    lower: ExtLevel,
    upper: ExtLevel,
    others: &[DatumRow],
    t: usize,
    row: &[Divisor],
) -> Result<(ZeroCycle, ZeroCycle)> {
    rel_degree(upper, lower)?;
    if t > others.len() {
        return Err(Error::Shape("row position out of range".into()));
    }
    let mut up_rows = Vec::with_capacity(others.len() + 1);
    let mut down_rows = Vec::with_capacity(others.len() + 1);
    for o in others {
        let z_up = o
            .z
            .iter()
            .enumerate()
            .map(|(i, z)| s.curve(i)?.div_res(z, upper))
            .collect::<Result<Vec<_>>>()?;
        up_rows.push(DatumRow { z: z_up, a: o.a.clone() });
        down_rows.push(o.clone());
    }
    let traced = row
        .iter()
        .enumerate()
        .map(|(i, z)| s.curve(i)?.div_tr(z, lower))
        .collect::<Result<Vec<_>>>()?;
    up_rows.insert(t, DatumRow { z: row.to_vec(), a: AExpr::zero() });
    down_rows.insert(t, DatumRow { z: traced, a: AExpr::zero() });
    let lhs = psi_closed(s, &SymbolDatum { level: upper, rows: up_rows })?;
    let rhs = psi_closed(s, &SymbolDatum { level: lower, rows: down_rows })?;
    Ok((lhs, rhs))
}

/// Number of `j`-subsets of `{1..r}` containing every entry of `h`, by enumeration.
pub fn binomial_count_oracle(r: usize, h: &[usize], j: usize) -> u64 {
    let need: u32 = h.iter().fold(0, |m, x| m | 1 << (x - 1));
    (0u32..(1 << r)).filter(|m| m.count_ones() as usize == j && m & need == need).count() as u64
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    (0..k as u64).fold(1, |acc, i| acc * (n as u64 - i) / (i + 1))
}

/// `sum_{j} (-1)^{r-j} M_{h,j}`.
pub fn alternating_count(r: usize, h: &[usize]) -> i64 {
    (0..=r)
        .map(|j| {
            let m = binomial_count_oracle(r, h, j) as i64;
            if (r - j) % 2 == 0 { m } else { -m }
        })
        .sum()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BlockClass {
    /// The summand's cycle is zero as a formal sum.
    FormallyZero,
    /// The abelian part is a Pontryagin product of `factors` cycles of
    /// degree zero; it vanishes rationally once `factors > dim A`.
    /// `chow_a` is the image of that product in `Z ⊕ A` for an elliptic model.
    PontryaginNilpotent { factors: usize, chow_a: Option<(Coeff, AbValue)> },
    Unclassified,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassifiedBlock {
    pub curves: Vec<usize>,
    pub images: Vec<usize>,
    pub class: BlockClass,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VanishingReport {
    pub rank: usize,
    pub d: usize,
    pub g: u32,
    pub precondition_holds: bool,
    pub blocks: Vec<ClassifiedBlock>,
}

impl VanishingReport {
    pub fn unclassified(&self) -> usize {
        self.blocks.iter().filter(|b| b.class == BlockClass::Unclassified).count()
    }

    /// True when the precondition holds, every block is classified, and each
    /// elliptic image that was computed is `(0, 0)`.
    pub fn passed(&self, s: &Setting) -> bool {
        self.precondition_holds
            && self.blocks.iter().all(|b| match &b.class {
                BlockClass::FormallyZero => true,
                BlockClass::Unclassified => false,
                BlockClass::PontryaginNilpotent { chow_a: None, .. } => true,
                BlockClass::PontryaginNilpotent { chow_a: Some((deg, v)), .. } => {
                    *deg == 0
                        && s
                            .ab
                            .canonical(v, ExtLevel::GROUND)
                            .map(|c| c.iter().all(|x| *x == 0))
                            .unwrap_or(false)
                }
            })
    }
}

/// Scans every summand of `Psi'_r(S)` and sorts it into the two vanishing
/// mechanisms. Needs `r > d + g`; otherwise the report records the failed
/// precondition and still classifies what it can.
pub fn vanishing_structural_check(s: &Setting, datum: &SymbolDatum, g: u32) -> Result<VanishingReport> {
    let r = datum.rank();
    let d = s.d();
    let precondition_holds = r > d + g as usize;
    let e = datum.level;
    let mut blocks = Vec::new();
    for b in psi_blocks(s, datum)? {
        let class = if b.cycle.is_zero() {
            BlockClass::FormallyZero
        } else if b.free_rows.len() > g as usize {
            let chow_a = if s.ab.dimension == 1 {
                let mut a_cycle = ZeroCycle::point(e, ProductPoint::on_a(AExpr::zero()), 1);
                for t in &b.free_rows {
                    a_cycle = pontryagin(s, &a_cycle, &degree_zero_factor(e, &datum.rows[*t].a))?;
                }
                let (deg, v) = modeled_chow_a(s, &a_cycle)?;
                Some((deg, s.ab.tr(&v, e, ExtLevel::GROUND)?))
            } else {
                None
            };
            BlockClass::PontryaginNilpotent { factors: b.free_rows.len(), chow_a }
        } else {
            BlockClass::Unclassified
        };
        blocks.push(ClassifiedBlock { curves: b.curves, images: b.images, class });
    }
    Ok(VanishingReport { rank: r, d, g, precondition_holds, blocks })
}

/// A finite combination `sum c_i Psi'_{r_i}(S_i)`, an element of
/// `F^m_Psi` for `m = min r_i`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PsiCombination {
    pub parts: Vec<(Coeff, SymbolDatum)>,
}

impl PsiCombination {
    pub fn min_rank(&self) -> Option<usize> {
        self.parts.iter().map(|(_, d)| d.rank()).min()
    }

    pub fn cycle(&self, s: &Setting) -> Result<ZeroCycle> {
        let mut out = ZeroCycle::zero(ExtLevel::GROUND);
        for (c, d) in &self.parts {
            out.add_assign(&psi_closed(s, d)?.scale(*c))?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{AbGenerator, AbModel, CurveModel, PointName};

    fn lv(n: u64) -> ExtLevel {
        ExtLevel::new(n).unwrap()
    }

    fn setting(d: usize) -> Setting {
        let catalog = vec![
            PointName { id: "p".into(), min_level: lv(1) },
            PointName { id: "y".into(), min_level: lv(1) },
            PointName { id: "w".into(), min_level: lv(1) },
            PointName { id: "q2".into(), min_level: lv(2) },
        ];
        let curves = (0..d)
            .map(|i| CurveModel::new(alloc::format!("C{i}"), catalog.clone(), 0, vec![], None, None).unwrap())
            .collect();
        let gen = |name: &str, l: u64, v: i64| AbGenerator {
            name: name.into(),
            level: lv(l),
            value: AbValue::Vector(vec![v]),
        };
        Setting {
            curves,
            ab: AbModel::constant(vec![], 1, 1),
            generators: vec![gen("a1", 1, 2), gen("a2", 1, 3), gen("a3", 1, 5)],
        }
    }

    fn iota(pt: PointId) -> Divisor {
        Divisor::from_terms(lv(1), [(pt, 1), (0, -1)])
    }

    fn row(z: Vec<Divisor>, a: AExpr) -> DatumRow {
        DatumRow { z, a }
    }

    fn pt(points: Vec<PointId>, a: AExpr) -> ProductPoint {
        ProductPoint::new(points, a)
    }

    #[test]
    fn phi_examples() {
        let s = setting(2);
        let o = ZeroCycle::point(lv(1), ProductPoint::at_base_points(&s, AExpr::zero()), 1);
        assert_eq!(phi_r(&s, &o, 0).unwrap().terms.coeff(&vec![]), 1);
        assert!(phi_r(&s, &o, 1).unwrap().is_zero());
        assert_eq!(phi_r(&s, &ZeroCycle::zero(lv(2)), 1), Err(Error::BaseNotGround { base: 2 }));
    }

    #[test]
    fn phi_of_the_diagonal_cycle() {
        // d = 1: [(y, a)] - [(y, 0)] - [(p, a)] + [(p, 0)] has Phi_2 = 2 {iota(y), a}
        let s = setting(1);
        let a = AExpr::generator(0);
        let mut z = ZeroCycle::zero(lv(1));
        z.terms.add_term(pt(vec![1], a.clone()), 1);
        z.terms.add_term(pt(vec![1], AExpr::zero()), -1);
        z.terms.add_term(pt(vec![0], a.clone()), -1);
        z.terms.add_term(pt(vec![0], AExpr::zero()), 1);
        assert!(phi_r(&s, &z, 0).unwrap().is_zero());
        assert!(phi_r(&s, &z, 1).unwrap().is_zero());
        let p2 = phi_r(&s, &z, 2).unwrap();
        let mut expect = SymbolSum::zero(lv(1), 2);
        expect.terms.add_term(vec![Atom::jac(0, 1), Atom::ab(0)], 2);
        assert_eq!(p2, expect);
    }

    #[test]
    fn psi_rank_one_pure_a() {
        let s = setting(2);
        let a = AExpr::generator(1);
        let datum = SymbolDatum {
            level: lv(1),
            rows: vec![row(vec![Divisor::zero(lv(1)), Divisor::zero(lv(1))], a.clone())],
        };
        let mut expect = ZeroCycle::zero(lv(1));
        expect.terms.add_term(pt(vec![0, 0], a), 1);
        expect.terms.add_term(pt(vec![0, 0], AExpr::zero()), -1);
        assert_eq!(psi_closed(&s, &datum).unwrap(), expect);
        assert_eq!(psi_product(&s, &datum).unwrap(), expect);
    }

    #[test]
    fn psi_rank_zero_is_the_base_point() {
        let s = setting(2);
        let datum = SymbolDatum { level: lv(1), rows: vec![] };
        let expect = ZeroCycle::point(lv(1), ProductPoint::at_base_points(&s, AExpr::zero()), 1);
        assert_eq!(psi_closed(&s, &datum).unwrap(), expect);
        assert_eq!(psi_product(&s, &datum).unwrap(), expect);
    }

    #[test]
    fn roundtrip_rank_two_mixed() {
        let s = setting(1);
        let datum = SymbolDatum {
            level: lv(1),
            rows: vec![row(vec![iota(1)], AExpr::zero()), row(vec![Divisor::zero(lv(1))], AExpr::generator(0))],
        };
        let rep = roundtrip_report(&s, &datum).unwrap();
        assert!(rep.passed(), "{rep:?}");
        let mut expect = SymbolSum::zero(lv(1), 2);
        expect.terms.add_term(vec![Atom::jac(0, 1), Atom::ab(0)], 2);
        assert_eq!(rep.phi[2], expect);
    }

    #[test]
    fn roundtrip_with_a_quadratic_point() {
        let s = setting(2);
        let q = Divisor::from_terms(lv(1), [(3, 1), (0, -2)]);
        let datum = SymbolDatum {
            level: lv(1),
            rows: vec![
                row(vec![q.clone(), iota(1)], AExpr::generator(0)),
                row(vec![iota(2), q], AExpr::zero()),
            ],
        };
        let rep = roundtrip_report(&s, &datum).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert_eq!(psi_closed(&s, &datum).unwrap(), psi_product(&s, &datum).unwrap());
    }

    #[test]
    fn binomial_counts() {
        assert_eq!(binomial_count_oracle(3, &[1, 1], 2), 2);
        assert_eq!(binomial(2, 1), 2);
        assert_eq!(binomial_count_oracle(3, &[1, 2, 3], 3), 1);
        assert_eq!(alternating_count(3, &[1, 2, 3]), 1);
        assert_eq!(alternating_count(3, &[1, 2]), 0);
        assert_eq!(alternating_count(4, &[]), 0);
    }

    #[test]
    fn certificates() {
        let s = setting(1);
        let mut z = ZeroCycle::zero(lv(1));
        z.terms.add_term(pt(vec![1], AExpr::zero()), 1);
        z.terms.add_term(pt(vec![0], AExpr::zero()), -1);
        assert_eq!(certify_membership(&s, &z, 1).unwrap().status, CertificateStatus::Certified);
        assert_eq!(certify_membership(&s, &z, 2).unwrap().status, CertificateStatus::Unknown);
        for r in 0..4 {
            assert_eq!(
                certify_membership(&s, &ZeroCycle::zero(lv(1)), r).unwrap().status,
                CertificateStatus::Certified
            );
        }
    }

    #[test]
    fn albanese_examples() {
        let s = setting(1);
        let o = ZeroCycle::point(lv(1), pt(vec![0], AExpr::zero()), 1);
        let img = albanese(&s, &o).unwrap();
        assert_eq!(img.degree, 1);
        assert!(img.jac[0].is_zero());
        let mut z = ZeroCycle::zero(lv(1));
        z.terms.add_term(pt(vec![1], AExpr::zero()), 1);
        z.terms.add_term(pt(vec![0], AExpr::zero()), -1);
        let img = albanese(&s, &z).unwrap();
        assert_eq!(img.degree, 0);
        assert_eq!(img.jac[0], iota(1));
        assert!(img.equivalent(&albanese_via_phi(&s, &z).unwrap(), &s).unwrap());
    }

    #[test]
    fn vanishing_on_pure_a_rows() {
        let s = setting(1);
        let zero = || vec![Divisor::zero(lv(1))];
        let datum = SymbolDatum {
            level: lv(1),
            rows: (0..3).map(|g| row(zero(), AExpr::generator(g))).collect(),
        };
        let rep = vanishing_structural_check(&s, &datum, 1).unwrap();
        assert!(rep.precondition_holds);
        assert!(rep.passed(&s), "{rep:?}");
        let short = SymbolDatum { level: lv(1), rows: datum.rows[..2].to_vec() };
        let rep = vanishing_structural_check(&s, &short, 1).unwrap();
        assert!(!rep.precondition_holds);
        assert!(!rep.passed(&s));
    }
}
