//! Finite G-sets and equivariant maps: products, coproducts, pullbacks,
//! orbit machinery and the complete enumeration of equivariant maps.
//!
//! Points are dense integer indices. The empty G-set is fully supported —
//! it is the apex of the zero span — and product points are flattened
//! row-major (`(x, y) ↦ x·|Y| + y`), which is also the pullback point
//! order after restriction to matching pairs.

use std::collections::BTreeSet;
use std::sync::Arc;

use thiserror::Error;

use crate::group::Group;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GSetError {
    #[error("action row count {got} does not match group order {order}")]
    BadRowCount { got: usize, order: usize },
    #[error("action value out of range: g={g}, x={x} maps to {value} (size {size})")]
    PointOutOfRange {
        g: usize,
        x: usize,
        value: usize,
        size: usize,
    },
    #[error("identity does not act trivially on point {x}")]
    BadIdentityAction { x: usize },
    #[error("action is not compatible: g={g}, h={h}, x={x}")]
    NotAnAction { g: usize, h: usize, x: usize },
    #[error("map value out of range: {x} maps to {value} (target size {size})")]
    MapOutOfRange { x: usize, value: usize, size: usize },
    #[error("map is not equivariant at g={g}, x={x}")]
    NotEquivariant { g: usize, x: usize },
    #[error("operands live over different groups")]
    GroupMismatch,
    #[error("maps do not share the required object")]
    ObjectMismatch,
    #[error("the element set {0:?} is not a subgroup")]
    NotASubgroup(Vec<usize>),
}

#[derive(Debug)]
struct GSetInner {
    group: Arc<Group>,
    size: usize,
    action: Vec<Vec<usize>>,
}

/// A finite set with a validated left G-action.
///
/// Cloning is cheap; the action table is shared.
#[derive(Debug, Clone)]
pub struct GSet {
    inner: Arc<GSetInner>,
}

impl PartialEq for GSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.group == other.inner.group && self.inner.action == other.inner.action)
    }
}
impl Eq for GSet {}

impl GSet {
    pub fn new(group: Arc<Group>, size: usize, action: Vec<Vec<usize>>) -> Result<GSet, GSetError> {
        let order = group.order();
        if action.len() != order {
            return Err(GSetError::BadRowCount {
                got: action.len(),
                order,
            });
        }
        for (g, row) in action.iter().enumerate() {
            if row.len() != size {
                return Err(GSetError::BadRowCount {
                    got: row.len(),
                    order: size,
                });
            }
            for (x, &v) in row.iter().enumerate() {
                if v >= size {
                    return Err(GSetError::PointOutOfRange {
                        g,
                        x,
                        value: v,
                        size,
                    });
                }
            }
        }
        for x in 0..size {
            if action[0][x] != x {
                return Err(GSetError::BadIdentityAction { x });
            }
        }
        for g in 0..order {
            for h in 0..order {
                let gh = group.mul(g, h);
                for x in 0..size {
                    if action[g][action[h][x]] != action[gh][x] {
                        return Err(GSetError::NotAnAction { g, h, x });
                    }
                }
            }
        }
        Ok(GSet {
            inner: Arc::new(GSetInner {
                group,
                size,
                action,
            }),
        })
    }

    pub fn empty(group: Arc<Group>) -> GSet {
        let order = group.order();
        GSet {
            inner: Arc::new(GSetInner {
                group,
                size: 0,
                action: vec![vec![]; order],
            }),
        }
    }

    /// One point with the trivial action (the terminal G-set).
    pub fn point(group: Arc<Group>) -> GSet {
        let order = group.order();
        GSet {
            inner: Arc::new(GSetInner {
                group,
                size: 1,
                action: vec![vec![0]; order],
            }),
        }
    }

    /// The set with trivial G-action on `size` points.
    pub fn trivial(group: Arc<Group>, size: usize) -> GSet {
        let order = group.order();
        let action = vec![(0..size).collect(); order];
        GSet {
            inner: Arc::new(GSetInner {
                group,
                size,
                action,
            }),
        }
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.inner.group
    }

    pub fn size(&self) -> usize {
        self.inner.size
    }

    pub fn act(&self, g: usize, x: usize) -> usize {
        self.inner.action[g][x]
    }

    pub fn action(&self) -> &[Vec<usize>] {
        &self.inner.action
    }

    /// Points fixed by every element of `subgroup`.
    pub fn fixed_points(&self, subgroup: &[usize]) -> Vec<usize> {
        (0..self.size())
            .filter(|&x| subgroup.iter().all(|&h| self.act(h, x) == x))
            .collect()
    }

    /// Stabilizer of a point, as a sorted element list.
    pub fn stabilizer(&self, x: usize) -> Vec<usize> {
        (0..self.group().order())
            .filter(|&g| self.act(g, x) == x)
            .collect()
    }

    /// Orbits as sorted point lists, ordered by least point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.size()];
        let mut out = Vec::new();
        for x in 0..self.size() {
            if seen[x] {
                continue;
            }
            let orbit: BTreeSet<usize> =
                (0..self.group().order()).map(|g| self.act(g, x)).collect();
            for &p in &orbit {
                seen[p] = true;
            }
            out.push(orbit.into_iter().collect());
        }
        out
    }
}

/// The coset space G/H with left multiplication action. Point 0 is the
/// coset H itself; points are ordered by their least representative.
pub fn coset_gset(group: &Arc<Group>, subgroup: &[usize]) -> Result<GSet, GSetError> {
    if !group.is_subgroup(subgroup) {
        return Err(GSetError::NotASubgroup(subgroup.to_vec()));
    }
    let cosets = group.left_cosets(subgroup);
    let size = cosets.len();
    let coset_of = {
        let mut v = vec![0usize; group.order()];
        for (i, c) in cosets.iter().enumerate() {
            for &x in c {
                v[x] = i;
            }
        }
        v
    };
    let action = (0..group.order())
        .map(|g| {
            (0..size)
                .map(|i| coset_of[group.mul(g, cosets[i][0])])
                .collect()
        })
        .collect();
    GSet::new(group.clone(), size, action)
}

/// Minimal representative of each coset point of `coset_gset`.
pub fn coset_min_reps(group: &Group, subgroup: &[usize]) -> Vec<usize> {
    group.left_cosets(subgroup).iter().map(|c| c[0]).collect()
}

/// An equivariant map of G-sets, validated at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GMap {
    source: GSet,
    target: GSet,
    values: Vec<usize>,
}

impl GMap {
    pub fn new(source: GSet, target: GSet, values: Vec<usize>) -> Result<GMap, GSetError> {
        if source.group() != target.group() {
            return Err(GSetError::GroupMismatch);
        }
        if values.len() != source.size() {
            return Err(GSetError::BadRowCount {
                got: values.len(),
                order: source.size(),
            });
        }
        for (x, &v) in values.iter().enumerate() {
            if v >= target.size() {
                return Err(GSetError::MapOutOfRange {
                    x,
                    value: v,
                    size: target.size(),
                });
            }
        }
        for g in 0..source.group().order() {
            for x in 0..source.size() {
                if values[source.act(g, x)] != target.act(g, values[x]) {
                    return Err(GSetError::NotEquivariant { g, x });
                }
            }
        }
        Ok(GMap {
            source,
            target,
            values,
        })
    }

    pub fn identity(x: &GSet) -> GMap {
        GMap {
            source: x.clone(),
            target: x.clone(),
            values: (0..x.size()).collect(),
        }
    }

    pub fn source(&self) -> &GSet {
        &self.source
    }

    pub fn target(&self) -> &GSet {
        &self.target
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn apply(&self, x: usize) -> usize {
        self.values[x]
    }

    /// g ∘ f (apply `self` first, then `after`).
    pub fn then(&self, after: &GMap) -> Result<GMap, GSetError> {
        if self.target != after.source {
            return Err(GSetError::ObjectMismatch);
        }
        Ok(GMap {
            source: self.source.clone(),
            target: after.target.clone(),
            values: self.values.iter().map(|&x| after.values[x]).collect(),
        })
    }

    pub fn is_bijective(&self) -> bool {
        if self.source.size() != self.target.size() {
            return false;
        }
        let mut hit = vec![false; self.target.size()];
        for &v in &self.values {
            hit[v] = true;
        }
        hit.into_iter().all(|b| b)
    }

    pub fn inverse(&self) -> Option<GMap> {
        if !self.is_bijective() {
            return None;
        }
        let mut values = vec![0usize; self.target.size()];
        for (x, &v) in self.values.iter().enumerate() {
            values[v] = x;
        }
        Some(GMap {
            source: self.target.clone(),
            target: self.source.clone(),
            values,
        })
    }
}

/// Cartesian product with diagonal action; `(x, y) ↦ x·|Y| + y`.
pub fn product(x: &GSet, y: &GSet) -> Result<GSet, GSetError> {
    if x.group() != y.group() {
        return Err(GSetError::GroupMismatch);
    }
    let group = x.group().clone();
    let size = x.size() * y.size();
    let action = (0..group.order())
        .map(|g| {
            (0..size)
                .map(|p| {
                    let (a, b) = (p / y.size(), p % y.size());
                    x.act(g, a) * y.size() + y.act(g, b)
                })
                .collect()
        })
        .collect();
    GSet::new(group, size, action)
}

/// Projections out of a product built by [`product`].
pub fn product_projections(x: &GSet, y: &GSet) -> Result<(GMap, GMap), GSetError> {
    let p = product(x, y)?;
    let p1 = GMap::new(
        p.clone(),
        x.clone(),
        (0..p.size()).map(|i| i / y.size()).collect(),
    )?;
    let p2 = GMap::new(
        p,
        y.clone(),
        (0..x.size() * y.size()).map(|i| i % y.size()).collect(),
    )?;
    Ok((p1, p2))
}

/// Pairing ⟨f, g⟩ : W → X×Y of two maps with common source.
pub fn pair_into_product(f: &GMap, g: &GMap) -> Result<GMap, GSetError> {
    if f.source() != g.source() {
        return Err(GSetError::ObjectMismatch);
    }
    let p = product(f.target(), g.target())?;
    let ysize = g.target().size();
    let values = (0..f.source().size())
        .map(|w| f.apply(w) * ysize + g.apply(w))
        .collect();
    GMap::new(f.source().clone(), p, values)
}

/// Disjoint union (X first, then Y shifted), with the two injections.
pub fn coproduct(x: &GSet, y: &GSet) -> Result<(GSet, GMap, GMap), GSetError> {
    if x.group() != y.group() {
        return Err(GSetError::GroupMismatch);
    }
    let group = x.group().clone();
    let size = x.size() + y.size();
    let action = (0..group.order())
        .map(|g| {
            (0..size)
                .map(|p| {
                    if p < x.size() {
                        x.act(g, p)
                    } else {
                        x.size() + y.act(g, p - x.size())
                    }
                })
                .collect()
        })
        .collect();
    let sum = GSet::new(group, size, action)?;
    let i = GMap::new(x.clone(), sum.clone(), (0..x.size()).collect())?;
    let j = GMap::new(
        y.clone(),
        sum.clone(),
        (0..y.size()).map(|p| x.size() + p).collect(),
    )?;
    Ok((sum, i, j))
}

/// Copairing [f, g] : X+Y → Z out of a coproduct built by [`coproduct`].
pub fn copair(sum: &GSet, f: &GMap, g: &GMap) -> Result<GMap, GSetError> {
    if f.target() != g.target() {
        return Err(GSetError::ObjectMismatch);
    }
    if sum.size() != f.source().size() + g.source().size() {
        return Err(GSetError::ObjectMismatch);
    }
    let mut values = f.values().to_vec();
    values.extend_from_slice(g.values());
    GMap::new(sum.clone(), f.target().clone(), values)
}

/// The pullback of `f : X → Z` and `g : Y → Z`: matching pairs in lex
/// order, with the two projections.
pub fn pullback(f: &GMap, g: &GMap) -> Result<(GSet, GMap, GMap), GSetError> {
    if f.target() != g.target() {
        return Err(GSetError::ObjectMismatch);
    }
    let x = f.source();
    let y = g.source();
    let pairs: Vec<(usize, usize)> = (0..x.size())
        .flat_map(|a| (0..y.size()).map(move |b| (a, b)))
        .filter(|&(a, b)| f.apply(a) == g.apply(b))
        .collect();
    let index_of = |a: usize, b: usize| pairs.binary_search(&(a, b)).expect("closed under action");
    let group = x.group().clone();
    let action = (0..group.order())
        .map(|gg| {
            pairs
                .iter()
                .map(|&(a, b)| index_of(x.act(gg, a), y.act(gg, b)))
                .collect()
        })
        .collect();
    let p = GSet::new(group, pairs.len(), action)?;
    let p1 = GMap::new(
        p.clone(),
        x.clone(),
        pairs.iter().map(|&(a, _)| a).collect(),
    )?;
    let p2 = GMap::new(
        p.clone(),
        y.clone(),
        pairs.iter().map(|&(_, b)| b).collect(),
    )?;
    Ok((p, p1, p2))
}

/// Every equivariant map X → Y, lex-ordered by value array.
///
/// Maps are assembled orbitwise: on an orbit with stabilizer H the image of
/// the base point can be any H-fixed point of Y.
pub fn hom_gset(x: &GSet, y: &GSet) -> Result<Vec<GMap>, GSetError> {
    if x.group() != y.group() {
        return Err(GSetError::GroupMismatch);
    }
    let group = x.group().clone();
    let orbits = x.orbits();
    // For each orbit: base point, valid base images, and for every orbit
    // point a group element carrying the base there.
    let mut orbit_data = Vec::new();
    for orbit in &orbits {
        let base = orbit[0];
        let choices = y.fixed_points(&x.stabilizer(base));
        let mut carriers = Vec::new();
        for &p in orbit {
            let g = (0..group.order())
                .find(|&g| x.act(g, base) == p)
                .expect("orbit point");
            carriers.push((p, g));
        }
        orbit_data.push((choices, carriers));
    }
    let mut maps = Vec::new();
    let mut picks = vec![0usize; orbit_data.len()];
    'outer: loop {
        let mut values = vec![0usize; x.size()];
        for (oi, (choices, carriers)) in orbit_data.iter().enumerate() {
            if choices.is_empty() {
                break 'outer;
            }
            let img = choices[picks[oi]];
            for &(p, g) in carriers {
                values[p] = y.act(g, img);
            }
        }
        maps.push(GMap::new(x.clone(), y.clone(), values)?);
        // Odometer increment.
        let mut k = orbit_data.len();
        loop {
            if k == 0 {
                break 'outer;
            }
            k -= 1;
            picks[k] += 1;
            if picks[k] < orbit_data[k].0.len() {
                break;
            }
            picks[k] = 0;
        }
    }
    if orbits.is_empty() {
        // The empty map is the unique map out of the empty G-set.
        return Ok(vec![GMap::new(x.clone(), y.clone(), vec![])?]);
    }
    maps.sort_by(|a, b| a.values.cmp(&b.values));
    maps.dedup_by(|a, b| a.values == b.values);
    Ok(maps)
}

/// The product map f×g : X1×X2 → Y1×Y2 (both products via [`product`]).
pub fn product_map(f: &GMap, g: &GMap) -> Result<GMap, GSetError> {
    let src = product(f.source(), g.source())?;
    let tgt = product(f.target(), g.target())?;
    let y2 = g.target().size();
    let x2 = g.source().size();
    let values = (0..src.size())
        .map(|p| {
            let (a, b) = (p / x2, p % x2);
            f.apply(a) * y2 + g.apply(b)
        })
        .collect();
    GMap::new(src, tgt, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::samples;

    fn c2() -> Arc<Group> {
        Arc::new(samples::cyclic(2))
    }

    fn regular(g: &Arc<Group>) -> GSet {
        coset_gset(g, &[0]).unwrap()
    }

    #[test]
    fn coset_examples() {
        let g = c2();
        assert_eq!(regular(&g).size(), 2);
        assert_eq!(coset_gset(&g, &[0, 1]).unwrap().size(), 1);

        let s3 = Arc::new(samples::symmetric3());
        let c3 = s3.generated_subgroup(&[3]);
        let gs = coset_gset(&s3, &c3).unwrap();
        assert_eq!(gs.size(), 2);
        // Transpositions swap the two cosets.
        assert_eq!(gs.act(1, 0), 1);
    }

    #[test]
    fn rejects_bad_action() {
        let g = c2();
        // g then g should be identity; this table breaks that.
        let err = GSet::new(g, 2, vec![vec![0, 1], vec![1, 1]]).unwrap_err();
        assert!(matches!(
            err,
            GSetError::NotAnAction { .. } | GSetError::NotEquivariant { .. }
        ));
    }

    #[test]
    fn product_of_regulars_has_two_free_orbits() {
        let g = c2();
        let r = regular(&g);
        let p = product(&r, &r).unwrap();
        assert_eq!(p.size(), 4);
        assert_eq!(p.orbits().len(), 2);
        assert!(p.orbits().iter().all(|o| o.len() == 2));
    }

    #[test]
    fn point_is_unit_up_to_iso() {
        let g = c2();
        let r = regular(&g);
        let p = product(&GSet::point(g.clone()), &r).unwrap();
        assert_eq!(p.size(), r.size());
        assert_eq!(p.action(), r.action());
    }

    #[test]
    fn coproduct_with_empty() {
        let g = c2();
        let r = regular(&g);
        let (s, i, _) = coproduct(&r, &GSet::empty(g)).unwrap();
        assert_eq!(s, r);
        assert!(i.is_bijective());
    }

    #[test]
    fn pullback_of_constants() {
        let g = c2();
        let r = regular(&g);
        let pt = GSet::point(g.clone());
        let f = GMap::new(r.clone(), pt.clone(), vec![0, 0]).unwrap();
        let (p, p1, p2) = pullback(&f, &f).unwrap();
        assert_eq!(p.size(), 4);
        assert_eq!(p.orbits().len(), 2);
        assert_eq!(p1.then(&f).unwrap(), p2.then(&f).unwrap());
    }

    #[test]
    fn pullback_of_identities_is_diagonal() {
        let g = c2();
        let r = regular(&g);
        let id = GMap::identity(&r);
        let (p, _, _) = pullback(&id, &id).unwrap();
        assert_eq!(p.size(), r.size());
    }

    #[test]
    fn pullback_with_empty_is_empty() {
        let g = c2();
        let r = regular(&g);
        let e = GSet::empty(g.clone());
        let f = GMap::new(e.clone(), r.clone(), vec![]).unwrap();
        let (p, _, _) = pullback(&f, &GMap::identity(&r)).unwrap();
        assert_eq!(p.size(), 0);
    }

    #[test]
    fn pullback_universal_property() {
        // For every commuting cone over (f, g), a unique mediating map
        // into the pullback exists.
        let g = Arc::new(crate::group::samples::symmetric3());
        let c2 = g.generated_subgroup(&[1]);
        let x = coset_gset(&g, &c2).unwrap();
        let y = coset_gset(&g, &g.generated_subgroup(&[3])).unwrap();
        let z = GSet::point(g.clone());
        let f = GMap::new(x.clone(), z.clone(), vec![0; x.size()]).unwrap();
        let gg = GMap::new(y.clone(), z.clone(), vec![0; y.size()]).unwrap();
        let (p, p1, p2) = pullback(&f, &gg).unwrap();
        for w in [coset_gset(&g, &[0]).unwrap(), x.clone(), y.clone()] {
            for q1 in hom_gset(&w, &x).unwrap() {
                for q2 in hom_gset(&w, &y).unwrap() {
                    if q1.then(&f).unwrap() != q2.then(&gg).unwrap() {
                        continue;
                    }
                    let mediating: Vec<GMap> = hom_gset(&w, &p)
                        .unwrap()
                        .into_iter()
                        .filter(|m| m.then(&p1).unwrap() == q1 && m.then(&p2).unwrap() == q2)
                        .collect();
                    assert_eq!(mediating.len(), 1, "exactly one mediating map");
                }
            }
        }
    }

    #[test]
    fn hom_examples() {
        let g = c2();
        let r = regular(&g);
        let pt = GSet::point(g.clone());
        assert!(hom_gset(&pt, &r).unwrap().is_empty());
        assert_eq!(hom_gset(&r, &r).unwrap().len(), 2);
        assert_eq!(hom_gset(&GSet::empty(g.clone()), &r).unwrap().len(), 1);
    }
}
