//! Formal zero-cycles on `X = C_1 x ... x C_d x A` over a base level.
//!
//! Cycles are elements of the free group on closed points; rational
//! equivalence is never applied here. A closed point is a tuple of catalog
//! points and a formal combination of abelian-variety generators; over base
//! `b` it has level `lcm(b, levels of its coordinates)`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::formal::{cmul, ucoeff, Coeff, FormalSum};
use crate::lattice::{product_multiplicity, rel_degree, res_multiplicity, tr_multiplicity, ExtLevel};
use crate::models::{AbValue, Divisor, PointId, Setting};
use crate::{Error, Result};

/// A formal integer combination of named abelian-variety generators,
/// standing for the point `sum c_i g_i`. No group law is applied, so the
/// expression `g - g` is the zero expression but `g + h` and `h + g` coincide
/// only because the representation is a sorted map.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AExpr(pub FormalSum<u32>);

impl AExpr {
    pub fn zero() -> Self {
        AExpr(FormalSum::zero())
    }

    pub fn generator(g: u32) -> Self {
        AExpr(FormalSum::singleton(g, 1))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn add(&self, other: &AExpr) -> AExpr {
        AExpr(&self.0 + &other.0)
    }

    pub fn scale(&self, k: Coeff) -> AExpr {
        AExpr(self.0.scale(k))
    }

    pub fn sum<'a>(items: impl IntoIterator<Item = &'a AExpr>) -> AExpr {
        let mut acc = FormalSum::zero();
        for e in items {
            acc += &e.0;
        }
        AExpr(acc)
    }

    /// Smallest level over which every generator with nonzero coefficient is defined.
    pub fn level(&self, s: &Setting) -> ExtLevel {
        self.0.keys().fold(ExtLevel::GROUND, |l, g| l.compositum(s.generator(*g).level))
    }

    /// The value of the expression in `A(level)`.
    pub fn evaluate(&self, s: &Setting, level: ExtLevel) -> Result<AbValue> {
        let vals = self
            .0
            .iter()
            .map(|(g, c)| {
                let gen = s.generator(*g);
                s.ab.res(&gen.value, gen.level, level).map(|v| (v, c))
            })
            .collect::<Result<Vec<_>>>()?;
        let refs: Vec<(&AbValue, Coeff)> = vals.iter().map(|(v, c)| (v, *c)).collect();
        s.ab.combine(&refs, level)
    }
}

/// A closed point of `X`: one catalog point per curve and an abelian
/// coordinate. An empty `curve_points` marks a point of `A` alone.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProductPoint {
    pub curve_points: Vec<PointId>,
    pub a: AExpr,
}

impl ProductPoint {
    pub fn new(curve_points: Vec<PointId>, a: AExpr) -> Self {
        ProductPoint { curve_points, a }
    }

    pub fn on_a(a: AExpr) -> Self {
        ProductPoint { curve_points: Vec::new(), a }
    }

    /// The tuple of base points with abelian coordinate `a`.
    pub fn at_base_points(s: &Setting, a: AExpr) -> Self {
        ProductPoint { curve_points: s.curves.iter().map(|c| c.base_point).collect(), a }
    }

    pub fn is_pure_a(&self) -> bool {
        self.curve_points.is_empty()
    }

    /// Level of the residue field over the ground.
    pub fn min_level(&self, s: &Setting) -> ExtLevel {
        self.curve_points
            .iter()
            .enumerate()
            .fold(self.a.level(s), |l, (i, p)| l.compositum(s.curves[i].min_level(*p)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ZeroCycle {
    pub base: ExtLevel,
    pub terms: FormalSum<ProductPoint>,
}

impl ZeroCycle {
    pub fn zero(base: ExtLevel) -> Self {
        ZeroCycle { base, terms: FormalSum::zero() }
    }

    pub fn point(base: ExtLevel, p: ProductPoint, c: Coeff) -> Self {
        ZeroCycle { base, terms: FormalSum::singleton(p, c) }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn add(&self, other: &ZeroCycle) -> Result<ZeroCycle> {
        same_base(self.base, other.base)?;
        Ok(ZeroCycle { base: self.base, terms: &self.terms + &other.terms })
    }

    pub fn sub(&self, other: &ZeroCycle) -> Result<ZeroCycle> {
        same_base(self.base, other.base)?;
        Ok(ZeroCycle { base: self.base, terms: &self.terms - &other.terms })
    }

    pub fn scale(&self, k: Coeff) -> ZeroCycle {
        ZeroCycle { base: self.base, terms: self.terms.scale(k) }
    }

    pub fn add_assign(&mut self, other: &ZeroCycle) -> Result<()> {
        same_base(self.base, other.base)?;
        self.terms += &other.terms;
        Ok(())
    }

    pub fn is_pure_a(&self) -> bool {
        self.terms.keys().all(ProductPoint::is_pure_a)
    }
}

fn same_base(a: ExtLevel, b: ExtLevel) -> Result<()> {
    if a != b {
        return Err(Error::BaseMismatch { left: a.degree(), right: b.degree() });
    }
    Ok(())
}

pub fn cyc_degree(s: &Setting, z: &ZeroCycle) -> Coeff {
    z.terms.weighted_sum(|p| ucoeff(p.min_level(s).compositum(z.base).degree() / z.base.degree()))
}

/// Proper pushforward along `X_m -> X_e` for `e | m`.
pub fn pushforward_base(s: &Setting, z: &ZeroCycle, to: ExtLevel) -> Result<ZeroCycle> {
    rel_degree(z.base, to)?;
    let mut out = ZeroCycle::zero(to);
    for (p, c) in z.terms.iter() {
        let k = tr_multiplicity(p.min_level(s), z.base, to)?;
        out.terms.add_term(p.clone(), cmul(c, ucoeff(k)));
    }
    Ok(out)
}

/// Flat pullback along `X_n -> X_m` for `m | n`.
pub fn cyc_res(s: &Setting, z: &ZeroCycle, to: ExtLevel) -> Result<ZeroCycle> {
    rel_degree(to, z.base)?;
    let mut out = ZeroCycle::zero(to);
    for (p, c) in z.terms.iter() {
        let k = res_multiplicity(p.min_level(s), z.base, to)?;
        out.terms.add_term(p.clone(), cmul(c, ucoeff(k)));
    }
    Ok(out)
}

/// `[a] ⊙ [b] = [a + b]`, extended bilinearly. The fibre product of the two
/// closed points may split; each component maps onto the closed point of
/// `a + b` with degree `[L : level(a + b)]`.
pub fn pontryagin(s: &Setting, x: &ZeroCycle, y: &ZeroCycle) -> Result<ZeroCycle> {
    same_base(x.base, y.base)?;
    if !x.is_pure_a() || !y.is_pure_a() {
        return Err(Error::MixedSupport);
    }
    let base = x.base;
    let mut out = ZeroCycle::zero(base);
    for (p, c1) in x.terms.iter() {
        let l1 = p.a.level(s).compositum(base);
        for (q, c2) in y.terms.iter() {
            let l2 = q.a.level(s).compositum(base);
            let (mu, top) = product_multiplicity(base, &[l1, l2])?;
            let sum = p.a.add(&q.a);
            let l = sum.level(s).compositum(base);
            let k = cmul(ucoeff(mu), ucoeff(rel_degree(top, l)?));
            out.terms.add_term(ProductPoint::on_a(sum), cmul(cmul(c1, c2), k));
        }
    }
    Ok(out)
}

/// `[a] - [0]` over `base`.
pub fn degree_zero_factor(base: ExtLevel, a: &AExpr) -> ZeroCycle {
    let mut z = ZeroCycle::point(base, ProductPoint::on_a(a.clone()), 1);
    z.terms.add_term(ProductPoint::on_a(AExpr::zero()), -1);
    z
}

/// `pr_1^*(D_1) ... pr_d^*(D_d) . pr_A^*(alpha)` where `D_i` is the selected
/// divisor on curve `i` or the base point when curve `i` is not selected.
/// Each combination of support points yields the fibre product of closed
/// points over `base`, counted with its splitting multiplicity.
pub fn product_cycle(
    s: &Setting,
    selected: &BTreeMap<usize, Divisor>,
    a_cycle: &ZeroCycle,
    base: ExtLevel,
) -> Result<ZeroCycle> {
    same_base(a_cycle.base, base)?;
    if !a_cycle.is_pure_a() {
        return Err(Error::MixedSupport);
    }
    let d = s.d();
    let mut factors: Vec<Vec<(PointId, Coeff)>> = Vec::with_capacity(d);
    for i in 0..d {
        let c = s.curve(i)?;
        match selected.get(&i) {
            Some(div) => {
                same_base(div.base, base)?;
                factors.push(div.terms.iter().map(|(p, k)| (*p, k)).collect());
            }
            None => factors.push(alloc::vec![(c.base_point, 1)]),
        }
    }
    if let Some(&bad) = selected.keys().find(|i| **i >= d) {
        return Err(Error::UnknownCurve(bad));
    }
    let mut out = ZeroCycle::zero(base);
    let mut idx = alloc::vec![0usize; d];
    if factors.iter().any(Vec::is_empty) {
        return Ok(out);
    }
    loop {
        let mut coeff: Coeff = 1;
        let mut levels = Vec::with_capacity(d + 1);
        let mut pts = Vec::with_capacity(d);
        for i in 0..d {
            let (p, k) = factors[i][idx[i]];
            coeff = cmul(coeff, k);
            levels.push(s.curves[i].canonical_level(p, base));
            pts.push(p);
        }
        for (q, c) in a_cycle.terms.iter() {
            let mut lv = levels.clone();
            lv.push(q.a.level(s).compositum(base));
            let (mu, _) = product_multiplicity(base, &lv)?;
            let k = cmul(cmul(coeff, c), ucoeff(mu));
            out.terms.add_term(ProductPoint::new(pts.clone(), q.a.clone()), k);
        }
        // odometer over the support tuples
        let mut i = 0;
        loop {
            if i == d {
                return Ok(out);
            }
            idx[i] += 1;
            if idx[i] < factors[i].len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

/// `(degree, sum of Tr(a))` for a cycle on `A`, which computes its image in
/// `CH_0(A) = Z ⊕ A(base)` when `A` is an elliptic curve.
pub fn modeled_chow_a(s: &Setting, z: &ZeroCycle) -> Result<(Coeff, AbValue)> {
    if s.ab.dimension != 1 {
        return Err(Error::WrongDimension { expected: 1, found: s.ab.dimension });
    }
    if !z.is_pure_a() {
        return Err(Error::MixedSupport);
    }
    let mut parts = Vec::new();
    for (p, c) in z.terms.iter() {
        let l = p.a.level(s).compositum(z.base);
        let v = p.a.evaluate(s, l)?;
        parts.push((s.ab.tr(&v, l, z.base)?, c));
    }
    let refs: Vec<(&AbValue, Coeff)> = parts.iter().map(|(v, c)| (v, *c)).collect();
    Ok((cyc_degree(s, z), s.ab.combine(&refs, z.base)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{AbGenerator, AbModel, CurveModel, PointName};
    use alloc::vec;

    fn lv(n: u64) -> ExtLevel {
        ExtLevel::new(n).unwrap()
    }

    fn setting(d: usize) -> Setting {
        let catalog = vec![
            PointName { id: "p".into(), min_level: lv(1) },
            PointName { id: "y".into(), min_level: lv(1) },
            PointName { id: "q3".into(), min_level: lv(3) },
            PointName { id: "q6".into(), min_level: lv(6) },
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
            generators: vec![gen("a", 1, 1), gen("b", 1, 5), gen("c2", 2, 7)],
        }
    }

    fn a(g: u32) -> AExpr {
        AExpr::generator(g)
    }

    #[test]
    fn degree_examples() {
        let s = setting(2);
        let o = ProductPoint::at_base_points(&s, AExpr::zero());
        assert_eq!(cyc_degree(&s, &ZeroCycle::point(lv(1), o.clone(), 1)), 1);
        let y = ProductPoint::new(vec![1, 0], AExpr::zero());
        let mut z = ZeroCycle::point(lv(1), y, 1);
        z.terms.add_term(o, -1);
        assert_eq!(cyc_degree(&s, &z), 0);
        let q = ProductPoint::new(vec![2, 0], AExpr::zero());
        assert_eq!(cyc_degree(&s, &ZeroCycle::point(lv(1), q, 2)), 6);
    }

    #[test]
    fn base_change_examples() {
        let s = setting(1);
        let y = ProductPoint::new(vec![1], AExpr::zero());
        let z = ZeroCycle::point(lv(2), y.clone(), 1);
        let pushed = pushforward_base(&s, &z, lv(1)).unwrap();
        assert_eq!(pushed, ZeroCycle::point(lv(1), y.clone(), 2));
        assert_eq!(cyc_degree(&s, &pushed), cyc_degree(&s, &z) * 2);
        let q6 = ProductPoint::new(vec![3], AExpr::zero());
        let pushed = pushforward_base(&s, &ZeroCycle::point(lv(6), q6.clone(), 1), lv(3)).unwrap();
        assert_eq!(pushed, ZeroCycle::point(lv(3), q6, 1));
        assert_eq!(cyc_degree(&s, &pushed), 2);
        assert!(pushforward_base(&s, &ZeroCycle::zero(lv(2)), lv(1)).unwrap().is_zero());

        let r = cyc_res(&s, &ZeroCycle::point(lv(1), y.clone(), 1), lv(5)).unwrap();
        assert_eq!(r, ZeroCycle::point(lv(5), y, 1));
        let c2 = ProductPoint::new(vec![0], a(2));
        let r = cyc_res(&s, &ZeroCycle::point(lv(1), c2.clone(), 1), lv(2)).unwrap();
        assert_eq!(r, ZeroCycle::point(lv(2), c2, 2));
    }

    #[test]
    fn pontryagin_examples() {
        let s = setting(0);
        let zero = ZeroCycle::point(lv(1), ProductPoint::on_a(AExpr::zero()), 1);
        let pa = ZeroCycle::point(lv(1), ProductPoint::on_a(a(0)), 1);
        assert_eq!(pontryagin(&s, &pa, &zero).unwrap(), pa);
        let f = pontryagin(&s, &degree_zero_factor(lv(1), &a(0)), &degree_zero_factor(lv(1), &a(1))).unwrap();
        let mut expect = ZeroCycle::zero(lv(1));
        expect.terms.add_term(ProductPoint::on_a(a(0).add(&a(1))), 1);
        expect.terms.add_term(ProductPoint::on_a(a(0)), -1);
        expect.terms.add_term(ProductPoint::on_a(a(1)), -1);
        expect.terms.add_term(ProductPoint::on_a(AExpr::zero()), 1);
        assert_eq!(f, expect);
        assert_eq!(modeled_chow_a(&s, &f).unwrap(), (0, AbValue::Vector(vec![0])));
        assert_eq!(modeled_chow_a(&s, &zero).unwrap(), (1, AbValue::Vector(vec![0])));
        assert_eq!(
            modeled_chow_a(&s, &degree_zero_factor(lv(1), &a(1))).unwrap(),
            (0, AbValue::Vector(vec![5]))
        );
        let mixed = ZeroCycle::point(lv(1), ProductPoint::new(vec![], a(0)), 1);
        assert!(pontryagin(&s, &mixed, &zero).is_ok());
        let s1 = setting(1);
        let on_x = ZeroCycle::point(lv(1), ProductPoint::at_base_points(&s1, a(0)), 1);
        assert_eq!(pontryagin(&s1, &on_x, &zero), Err(Error::MixedSupport));
        let other_base = ZeroCycle::zero(lv(2));
        assert!(matches!(pontryagin(&s, &zero, &other_base), Err(Error::BaseMismatch { .. })));
    }

    #[test]
    fn product_cycle_examples() {
        let s = setting(1);
        let alpha = ZeroCycle::point(lv(1), ProductPoint::on_a(a(0)), 1);
        let z = product_cycle(&s, &BTreeMap::new(), &alpha, lv(1)).unwrap();
        assert_eq!(z, ZeroCycle::point(lv(1), ProductPoint::new(vec![0], a(0)), 1));

        let mut sel = BTreeMap::new();
        sel.insert(0, Divisor::from_terms(lv(1), [(1, 1), (0, -1)]));
        let zero = ZeroCycle::point(lv(1), ProductPoint::on_a(AExpr::zero()), 1);
        let z = product_cycle(&s, &sel, &zero, lv(1)).unwrap();
        let mut expect = ZeroCycle::zero(lv(1));
        expect.terms.add_term(ProductPoint::new(vec![1], AExpr::zero()), 1);
        expect.terms.add_term(ProductPoint::new(vec![0], AExpr::zero()), -1);
        assert_eq!(z, expect);

        let s2 = setting(2);
        let mut sel = BTreeMap::new();
        sel.insert(0, Divisor::point(lv(1), 1, 1));
        let z = product_cycle(&s2, &sel, &degree_zero_factor(lv(1), &a(0)), lv(1)).unwrap();
        let mut expect = ZeroCycle::zero(lv(1));
        expect.terms.add_term(ProductPoint::new(vec![1, 0], a(0)), 1);
        expect.terms.add_term(ProductPoint::new(vec![1, 0], AExpr::zero()), -1);
        assert_eq!(z, expect);
    }

    #[test]
    fn product_of_split_points() {
        // two cubic points multiply to three points of degree 3 over the ground
        let s = setting(2);
        let mut sel = BTreeMap::new();
        sel.insert(0, Divisor::point(lv(1), 2, 1));
        sel.insert(1, Divisor::point(lv(1), 2, 1));
        let z = product_cycle(&s, &sel, &ZeroCycle::point(lv(1), ProductPoint::on_a(AExpr::zero()), 1), lv(1))
            .unwrap();
        assert_eq!(z, ZeroCycle::point(lv(1), ProductPoint::new(vec![2, 2], AExpr::zero()), 3));
        assert_eq!(cyc_degree(&s, &z), 9);
    }
}
