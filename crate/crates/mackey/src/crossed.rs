//! Crossed G-sets (the centre of finite G-sets) and the end-of-homs
//! computation that identifies the centre with G under conjugation.

use std::sync::Arc;

use thiserror::Error;

use crate::group::Group;
use crate::gset::{hom_gset, product, GMap, GSet, GSetError};
use crate::reps::ReprSystem;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CrossedError {
    #[error("grading has {got} entries, expected {expected}")]
    GradingLength { got: usize, expected: usize },
    #[error("grading value {value} at point {x} is not a group element")]
    GradingRange { x: usize, value: usize },
    #[error("grading is not equivariant into conjugation at g={g}, x={x}")]
    NotEquivariant { g: usize, x: usize },
    #[error("order {order} exceeds the bound {bound}")]
    BoundExceeded { order: usize, bound: usize },
    #[error(transparent)]
    GSet(#[from] GSetError),
}

/// A G-set graded over G with conjugation-equivariant grading:
/// |g·x| = g|x|g⁻¹.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossedGSet {
    carrier: GSet,
    grading: Vec<usize>,
}

impl CrossedGSet {
    pub fn new(carrier: GSet, grading: Vec<usize>) -> Result<CrossedGSet, CrossedError> {
        let group = carrier.group().clone();
        if grading.len() != carrier.size() {
            return Err(CrossedError::GradingLength {
                got: grading.len(),
                expected: carrier.size(),
            });
        }
        for (x, &v) in grading.iter().enumerate() {
            if v >= group.order() {
                return Err(CrossedError::GradingRange { x, value: v });
            }
        }
        for g in 0..group.order() {
            for x in 0..carrier.size() {
                if grading[carrier.act(g, x)] != group.conjugate(g, grading[x]) {
                    return Err(CrossedError::NotEquivariant { g, x });
                }
            }
        }
        Ok(CrossedGSet { carrier, grading })
    }

    /// Equips a plain G-set with the trivial grading (constant identity);
    /// legal because cartesian monoids embed into the centre.
    pub fn with_trivial_grading(carrier: GSet) -> CrossedGSet {
        let grading = vec![0; carrier.size()];
        CrossedGSet { carrier, grading }
    }

    /// G itself under conjugation, graded by the identity function.
    pub fn conjugation(group: Arc<Group>) -> CrossedGSet {
        let carrier = conjugation_gset(group);
        let grading = (0..carrier.size()).collect();
        CrossedGSet { carrier, grading }
    }

    pub fn carrier(&self) -> &GSet {
        &self.carrier
    }

    pub fn grading(&self) -> &[usize] {
        &self.grading
    }

    pub fn grade(&self, x: usize) -> usize {
        self.grading[x]
    }
}

/// The G-set G_c: the elements of G with conjugation action.
pub fn conjugation_gset(group: Arc<Group>) -> GSet {
    let n = group.order();
    let action = (0..n)
        .map(|g| (0..n).map(|x| group.conjugate(g, x)).collect())
        .collect();
    GSet::new(group, n, action).expect("conjugation is an action")
}

/// What failed when checking a proposed crossed monoid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MonoidFailure {
    MultiplicationShape,
    NotAssociative { x: usize, y: usize, z: usize },
    UnitLaw { x: usize },
    UnitNotFixed,
    UnitGrading,
    GradingNotMultiplicative { x: usize, y: usize },
}

#[derive(Debug, Clone, Default)]
pub struct MonoidReport {
    pub failures: Vec<MonoidFailure>,
}

impl MonoidReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// A crossed G-set with a validated monoid structure — exactly what the
/// Dress construction needs to produce a Green functor.
#[derive(Debug, Clone)]
pub struct CrossedMonoid {
    pub crossed: CrossedGSet,
    pub mult: GMap,
    pub unit: usize,
}

impl CrossedMonoid {
    pub fn new(
        crossed: CrossedGSet,
        mult: GMap,
        unit: usize,
    ) -> Result<CrossedMonoid, MonoidReport> {
        let report = is_crossed_monoid(&crossed, &mult, unit);
        if report.passed() {
            Ok(CrossedMonoid {
                crossed,
                mult,
                unit,
            })
        } else {
            Err(report)
        }
    }

    /// The group itself as a crossed monoid: conjugation action, identity
    /// grading, group multiplication.
    pub fn group_as_crossed_monoid(group: Arc<Group>) -> CrossedMonoid {
        let crossed = CrossedGSet::conjugation(group.clone());
        let carrier = crossed.carrier().clone();
        let prod = product(&carrier, &carrier).expect("same group");
        let n = group.order();
        let values = (0..prod.size()).map(|p| group.mul(p / n, p % n)).collect();
        let mult = GMap::new(prod, carrier, values).expect("multiplication is equivariant");
        CrossedMonoid::new(crossed, mult, 0).expect("a group is a crossed monoid")
    }

    /// The terminal crossed G-set with its unique monoid structure.
    pub fn terminal(group: Arc<Group>) -> CrossedMonoid {
        let pt = GSet::point(group);
        let crossed = CrossedGSet::with_trivial_grading(pt.clone());
        let prod = product(&pt, &pt).expect("same group");
        let mult = GMap::new(prod, pt, vec![0]).expect("trivial multiplication");
        CrossedMonoid::new(crossed, mult, 0).expect("terminal is a crossed monoid")
    }

    pub fn mul_points(&self, x: usize, y: usize) -> usize {
        self.mult.apply(x * self.crossed.carrier().size() + y)
    }
}

/// Checks monoid axioms and grading multiplicativity ‖(x,y)‖ = |x||y| for a
/// proposed multiplication and unit on a crossed G-set.
pub fn is_crossed_monoid(crossed: &CrossedGSet, mult: &GMap, unit: usize) -> MonoidReport {
    let mut report = MonoidReport::default();
    let y = crossed.carrier();
    let group = y.group();
    let n = y.size();
    let ok_shape = mult.source().size() == n * n && mult.target() == y && unit < n.max(1);
    if !ok_shape {
        report.failures.push(MonoidFailure::MultiplicationShape);
        return report;
    }
    let m = |a: usize, b: usize| mult.apply(a * n + b);
    for x in 0..n {
        for yy in 0..n {
            for z in 0..n {
                if m(m(x, yy), z) != m(x, m(yy, z)) {
                    report
                        .failures
                        .push(MonoidFailure::NotAssociative { x, y: yy, z });
                }
            }
        }
    }
    for x in 0..n {
        if m(unit, x) != x || m(x, unit) != x {
            report.failures.push(MonoidFailure::UnitLaw { x });
        }
    }
    if n > 0 {
        if (0..group.order()).any(|g| y.act(g, unit) != unit) {
            report.failures.push(MonoidFailure::UnitNotFixed);
        }
        if crossed.grade(unit) != 0 {
            report.failures.push(MonoidFailure::UnitGrading);
        }
    }
    for x in 0..n {
        for yy in 0..n {
            if crossed.grade(m(x, yy)) != group.mul(crossed.grade(x), crossed.grade(yy)) {
                report
                    .failures
                    .push(MonoidFailure::GradingNotMultiplicative { x, y: yy });
            }
        }
    }
    report
}

/// The end ∫_X [X,X] computed over the representative transitive G-sets:
/// families (r_C) of plain functions commuting with every equivariant map,
/// enumerated from the value r_G(e) on the regular orbit and checked
/// exhaustively against all naturality constraints.
///
/// Returns the end as a G-set (points in candidate order) together with a
/// certified equivariant bijection onto G with conjugation action.
pub fn end_of_homs(ctx: &Arc<ReprSystem>, bound: usize) -> Result<(GSet, GMap), CrossedError> {
    let group = ctx.group().clone();
    let order = group.order();
    if order > bound {
        return Err(CrossedError::BoundExceeded { order, bound });
    }
    let classes = ctx.class_count();
    let regular_class = classes - 1;
    let regular = ctx.coset(regular_class).clone();
    debug_assert_eq!(regular.size(), order);
    // Point p of the regular representative is the coset {rep_p}; identify
    // points with group elements through the minimal representatives.
    let elem_of_point: Vec<usize> = ctx.min_reps(regular_class).to_vec();
    let point_of_elem = {
        let mut v = vec![0usize; order];
        for (p, &e) in elem_of_point.iter().enumerate() {
            v[p] = e;
        }
        let mut inv = vec![0usize; order];
        for (p, &e) in v.iter().enumerate() {
            inv[e] = p;
        }
        inv
    };

    // All equivariant maps between representatives, computed once.
    let mut homs = vec![vec![Vec::new(); classes]; classes];
    for i in 0..classes {
        for j in 0..classes {
            homs[i][j] = hom_gset(ctx.coset(i), ctx.coset(j))?;
        }
    }

    let mut families: Vec<Vec<Vec<usize>>> = Vec::new();
    'candidates: for a in 0..order {
        // r on the regular orbit is forced to be g ↦ a·g by naturality
        // against the right multiplications; verify that form first.
        let r_reg: Vec<usize> = (0..order)
            .map(|p| point_of_elem[group.mul(a, elem_of_point[p])])
            .collect();
        for f in &homs[regular_class][regular_class] {
            for p in 0..order {
                if f.apply(r_reg[p]) != r_reg[f.apply(p)] {
                    continue 'candidates;
                }
            }
        }
        // Push forward along the surjections G/e → C_i; must be well defined.
        let mut family = Vec::with_capacity(classes);
        for i in 0..classes {
            let ci = ctx.coset(i);
            let sigma: Vec<usize> = (0..order).map(|p| ci.act(elem_of_point[p], 0)).collect();
            let mut r_i = vec![usize::MAX; ci.size()];
            for p in 0..order {
                let (src, dst) = (sigma[p], sigma[r_reg[p]]);
                if r_i[src] == usize::MAX {
                    r_i[src] = dst;
                } else if r_i[src] != dst {
                    continue 'candidates;
                }
            }
            family.push(r_i);
        }
        // Exhaustive naturality check over every equivariant map.
        for i in 0..classes {
            for j in 0..classes {
                for f in &homs[i][j] {
                    for x in 0..ctx.coset(i).size() {
                        if f.apply(family[i][x]) != family[j][f.apply(x)] {
                            continue 'candidates;
                        }
                    }
                }
            }
        }
        families.push(family);
    }
    families.sort();

    // The conjugation action on families: (g·r)_X = g ∘ r_X ∘ g⁻¹.
    let size = families.len();
    let action: Vec<Vec<usize>> = (0..order)
        .map(|g| {
            (0..size)
                .map(|idx| {
                    let conj: Vec<Vec<usize>> = families[idx]
                        .iter()
                        .enumerate()
                        .map(|(i, r_i)| {
                            let ci = ctx.coset(i);
                            (0..ci.size())
                                .map(|x| ci.act(g, r_i[ci.act(group.inv(g), x)]))
                                .collect()
                        })
                        .collect();
                    families
                        .iter()
                        .position(|f| *f == conj)
                        .expect("end is closed under G")
                })
                .collect()
        })
        .collect();
    let end = GSet::new(group.clone(), size, action)?;
    let gc = conjugation_gset(group);
    let iso = ctx
        .find_iso(&end, &gc)?
        .expect("the end of homs is isomorphic to the conjugation G-set");
    Ok((end, iso))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::samples;

    fn ctx_of(g: Group) -> Arc<ReprSystem> {
        ReprSystem::with_default_bound(Arc::new(g)).unwrap()
    }

    #[test]
    fn crossed_grading_is_validated() {
        let group = Arc::new(samples::cyclic(2));
        let free = crate::gset::coset_gset(&group, &[0]).unwrap();
        // Constant nontrivial grading on a free orbit is fine over an
        // abelian group (conjugation is trivial).
        assert!(CrossedGSet::new(free.clone(), vec![1, 1]).is_ok());

        let s3 = Arc::new(samples::symmetric3());
        let reg = crate::gset::coset_gset(&s3, &[0]).unwrap();
        // Constant grading at a non-central element fails over S3.
        let err = CrossedGSet::new(reg, vec![1; 6]).unwrap_err();
        assert!(matches!(err, CrossedError::NotEquivariant { .. }));
    }

    #[test]
    fn one_point_monoid() {
        let group = Arc::new(samples::cyclic(2));
        let m = CrossedMonoid::terminal(group);
        assert_eq!(m.crossed.carrier().size(), 1);
    }

    #[test]
    fn group_is_a_crossed_monoid() {
        for g in [samples::cyclic(2), samples::symmetric3()] {
            let m = CrossedMonoid::group_as_crossed_monoid(Arc::new(g));
            assert_eq!(m.mul_points(0, 1), 1);
        }
    }

    #[test]
    fn constant_grading_fails_unit_axiom() {
        let group = Arc::new(samples::cyclic(2));
        let gc = conjugation_gset(group.clone());
        let crossed = CrossedGSet::new(gc.clone(), vec![1, 1]).unwrap();
        let prod = product(&gc, &gc).unwrap();
        let values = (0..4).map(|p| group.mul(p / 2, p % 2)).collect();
        let mult = GMap::new(prod, gc, values).unwrap();
        let report = is_crossed_monoid(&crossed, &mult, 0);
        assert!(!report.passed());
        assert!(report.failures.iter().any(|f| matches!(
            f,
            MonoidFailure::UnitGrading | MonoidFailure::GradingNotMultiplicative { .. }
        )));
    }

    #[test]
    fn end_of_homs_c1() {
        let ctx = ctx_of(samples::cyclic(1));
        let (end, _) = end_of_homs(&ctx, 24).unwrap();
        assert_eq!(end.size(), 1);
    }

    #[test]
    fn end_of_homs_c2() {
        let ctx = ctx_of(samples::cyclic(2));
        let (end, iso) = end_of_homs(&ctx, 24).unwrap();
        assert_eq!(end.size(), 2);
        // Trivial conjugation action for an abelian group.
        assert_eq!(end.act(1, 0), 0);
        assert!(iso.is_bijective());
    }

    #[test]
    fn end_of_homs_s3() {
        let ctx = ctx_of(samples::symmetric3());
        let (end, iso) = end_of_homs(&ctx, 24).unwrap();
        assert_eq!(end.size(), 6);
        assert!(iso.is_bijective());
        let gc = conjugation_gset(ctx.group().clone());
        for g in 0..6 {
            for x in 0..6 {
                assert_eq!(iso.apply(end.act(g, x)), gc.act(g, iso.apply(x)));
            }
        }
    }

    #[test]
    fn end_respects_bound() {
        let ctx = ctx_of(samples::symmetric3());
        assert!(matches!(
            end_of_homs(&ctx, 2),
            Err(CrossedError::BoundExceeded { .. })
        ));
    }
}
