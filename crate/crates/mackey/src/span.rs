//! The category of spans of finite G-sets, up to isomorphism.
//!
//! A span U ← S → V is stored in normal form as a multiset of connected
//! components. Each component has a transitive apex G/L (recorded by its
//! subgroup class) and is determined by the images of the base coset under
//! the two legs; that pair is canonicalized by minimizing over the apex
//! automorphism group N_G(L)/L. Normal forms are complete isomorphism
//! invariants, so span equality is multiset equality — the central
//! data-structure decision of the crate.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::gset::{product, product_map, pullback, GMap, GSet, GSetError};
use crate::reps::ReprSystem;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpanError {
    #[error("legs of a span must share their apex")]
    ApexMismatch,
    #[error("span endpoints do not match")]
    EndpointMismatch,
    #[error(transparent)]
    GSet(#[from] GSetError),
}

/// A raw span: two maps out of a common apex.
#[derive(Debug, Clone)]
pub struct Span {
    left: GMap,
    right: GMap,
}

impl Span {
    pub fn new(left: GMap, right: GMap) -> Result<Span, SpanError> {
        if left.source() != right.source() {
            return Err(SpanError::ApexMismatch);
        }
        Ok(Span { left, right })
    }

    pub fn left(&self) -> &GMap {
        &self.left
    }

    pub fn right(&self) -> &GMap {
        &self.right
    }
}

/// A connected span in canonical form: apex G/L given by its subgroup
/// class, legs given by the (minimized) images of the base coset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct SpanComponent {
    pub apex_class: usize,
    pub left: usize,
    pub right: usize,
}

/// An isomorphism class of spans between fixed G-sets: a sorted multiset of
/// connected components. The empty multiset is the zero span.
#[derive(Debug, Clone)]
pub struct SpanClass {
    source: GSet,
    target: GSet,
    components: Vec<SpanComponent>,
}

impl PartialEq for SpanClass {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source
            && self.target == other.target
            && self.components == other.components
    }
}
impl Eq for SpanClass {}

impl SpanClass {
    pub fn zero(source: GSet, target: GSet) -> SpanClass {
        SpanClass {
            source,
            target,
            components: Vec::new(),
        }
    }

    pub fn source(&self) -> &GSet {
        &self.source
    }

    pub fn target(&self) -> &GSet {
        &self.target
    }

    pub fn components(&self) -> &[SpanComponent] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    fn from_components(
        source: GSet,
        target: GSet,
        mut components: Vec<SpanComponent>,
    ) -> SpanClass {
        components.sort_unstable();
        SpanClass {
            source,
            target,
            components,
        }
    }
}

/// The hom space K T(U,V): the free module on connected spans U ← G/L → V
/// up to isomorphism, with its lex-ordered basis.
#[derive(Debug, Clone)]
pub struct LinearizedHom {
    pub source: GSet,
    pub target: GSet,
    pub basis: Vec<SpanComponent>,
}

impl LinearizedHom {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, c: &SpanComponent) -> Option<usize> {
        self.basis.binary_search(c).ok()
    }
}

impl ReprSystem {
    /// Canonical representative of (left, right) under the diagonal action
    /// of the normalizer of the apex class.
    fn canon_pair(
        &self,
        apex_class: usize,
        source: &GSet,
        target: &GSet,
        left: usize,
        right: usize,
    ) -> (usize, usize) {
        self.normalizer(apex_class)
            .iter()
            .map(|&n| (source.act(n, left), target.act(n, right)))
            .min()
            .expect("normalizer contains the identity")
    }

    /// Normal form of a raw span.
    pub fn normal_form(&self, span: &Span) -> SpanClass {
        let source = span.left().target().clone();
        let target = span.right().target().clone();
        let d = self.decompose(span.left().source());
        let components = d
            .orbits
            .iter()
            .map(|orbit| {
                // The orbit iso sends the base coset of G/L to a point with
                // stabilizer exactly L; evaluate the legs there.
                let base = orbit.iso.values()[0];
                let (l, r) = self.canon_pair(
                    orbit.class,
                    &source,
                    &target,
                    span.left().apply(base),
                    span.right().apply(base),
                );
                SpanComponent {
                    apex_class: orbit.class,
                    left: l,
                    right: r,
                }
            })
            .collect();
        SpanClass::from_components(source, target, components)
    }

    /// Rebuilds the two legs of a connected component as concrete maps.
    pub fn component_maps(&self, source: &GSet, target: &GSet, c: &SpanComponent) -> (GMap, GMap) {
        (
            self.coset_map(c.apex_class, source, c.left),
            self.coset_map(c.apex_class, target, c.right),
        )
    }

    /// f ↦ f_* = (1, U, f).
    pub fn lower(&self, f: &GMap) -> SpanClass {
        let span = Span::new(GMap::identity(f.source()), f.clone()).expect("shared apex");
        self.normal_form(&span)
    }

    /// f ↦ f^* = (f, U, 1).
    pub fn upper(&self, f: &GMap) -> SpanClass {
        let span = Span::new(f.clone(), GMap::identity(f.source())).expect("shared apex");
        self.normal_form(&span)
    }

    pub fn identity_class(&self, x: &GSet) -> SpanClass {
        self.lower(&GMap::identity(x))
    }

    /// Composition by pullback, extended bilinearly over components.
    pub fn compose(&self, s: &SpanClass, t: &SpanClass) -> Result<SpanClass, SpanError> {
        if s.target() != t.source() {
            return Err(SpanError::EndpointMismatch);
        }
        let mut components = Vec::new();
        for cs in s.components() {
            let (f1, g1) = self.component_maps(s.source(), s.target(), cs);
            for ct in t.components() {
                let (f2, g2) = self.component_maps(t.source(), t.target(), ct);
                let (_, p1, p2) = pullback(&g1, &f2)?;
                let left = p1.then(&f1)?;
                let right = p2.then(&g2)?;
                let nf = self.normal_form(&Span::new(left, right)?);
                components.extend_from_slice(nf.components());
            }
        }
        Ok(SpanClass::from_components(
            s.source().clone(),
            t.target().clone(),
            components,
        ))
    }

    /// Addition of spans: multiset union of components.
    pub fn add(&self, s: &SpanClass, t: &SpanClass) -> Result<SpanClass, SpanError> {
        if s.source() != t.source() || s.target() != t.target() {
            return Err(SpanError::EndpointMismatch);
        }
        let mut components = s.components().to_vec();
        components.extend_from_slice(t.components());
        Ok(SpanClass::from_components(
            s.source().clone(),
            t.target().clone(),
            components,
        ))
    }

    /// Tensor product of spans; endpoints become cartesian products.
    pub fn tensor(&self, s: &SpanClass, t: &SpanClass) -> Result<SpanClass, SpanError> {
        let source = product(s.source(), t.source())?;
        let target = product(s.target(), t.target())?;
        let mut components = Vec::new();
        for cs in s.components() {
            let (f1, g1) = self.component_maps(s.source(), s.target(), cs);
            for ct in t.components() {
                let (f2, g2) = self.component_maps(t.source(), t.target(), ct);
                let left = product_map(&f1, &f2)?;
                let right = product_map(&g1, &g2)?;
                let nf = self.normal_form(&Span::new(left, right)?);
                components.extend_from_slice(nf.components());
            }
        }
        Ok(SpanClass::from_components(source, target, components))
    }

    /// Swap the legs of every component (the self-duality of Spn).
    pub fn transpose_class(&self, s: &SpanClass) -> SpanClass {
        let components = s
            .components()
            .iter()
            .map(|c| {
                let (l, r) = self.canon_pair(c.apex_class, s.target(), s.source(), c.right, c.left);
                SpanComponent {
                    apex_class: c.apex_class,
                    left: l,
                    right: r,
                }
            })
            .collect();
        SpanClass::from_components(s.target().clone(), s.source().clone(), components)
    }

    /// Enumerates all connected spans U ← G/L → V up to isomorphism: for
    /// each subgroup class, pairs of fixed points modulo the normalizer.
    pub fn hom_basis(&self, source: &GSet, target: &GSet) -> LinearizedHom {
        let mut basis = Vec::new();
        for class in 0..self.class_count() {
            let sub = self.table().rep_elements(class).to_vec();
            let left_fixed = source.fixed_points(&sub);
            let right_fixed = target.fixed_points(&sub);
            let mut seen = BTreeMap::new();
            for &l in &left_fixed {
                for &r in &right_fixed {
                    let key = self.canon_pair(class, source, target, l, r);
                    seen.entry(key).or_insert(());
                }
            }
            basis.extend(seen.into_keys().map(|(left, right)| SpanComponent {
                apex_class: class,
                left,
                right,
            }));
        }
        basis.sort_unstable();
        LinearizedHom {
            source: source.clone(),
            target: target.clone(),
            basis,
        }
    }

    /// Multiplicities of a span class over a hom basis. Every component of
    /// a class between the basis endpoints is itself a basis element.
    pub fn express(&self, s: &SpanClass, basis: &LinearizedHom) -> Vec<usize> {
        debug_assert!(s.source() == &basis.source && s.target() == &basis.target);
        let mut coeffs = vec![0usize; basis.dimension()];
        for c in s.components() {
            let idx = basis.index_of(c).expect("component lies in the hom basis");
            coeffs[idx] += 1;
        }
        coeffs
    }

    /// The single-component class for a basis element.
    pub fn component_class(&self, source: &GSet, target: &GSet, c: SpanComponent) -> SpanClass {
        SpanClass::from_components(source.clone(), target.clone(), vec![c])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::samples;
    use crate::gset::coset_gset;
    use std::sync::Arc;

    fn c2() -> Arc<ReprSystem> {
        ReprSystem::with_default_bound(Arc::new(samples::cyclic(2))).unwrap()
    }

    #[test]
    fn identity_span_has_one_component_per_orbit() {
        let ctx = c2();
        let r = coset_gset(ctx.group(), &[0]).unwrap();
        let id = ctx.identity_class(&r);
        assert_eq!(id.components().len(), 1);
        let pt = ctx.point().clone();
        let (sum, _, _) = crate::gset::coproduct(&r, &pt).unwrap();
        assert_eq!(ctx.identity_class(&sum).components().len(), 2);
    }

    #[test]
    fn relabelled_spans_are_equal() {
        let ctx = c2();
        let r = coset_gset(ctx.group(), &[0]).unwrap();
        let pt = ctx.point().clone();
        let to_pt = GMap::new(r.clone(), pt.clone(), vec![0, 0]).unwrap();
        let s1 = ctx.normal_form(&Span::new(to_pt.clone(), to_pt.clone()).unwrap());

        // Relabel the apex by the swap automorphism.
        let swap = GMap::new(r.clone(), r.clone(), vec![1, 0]).unwrap();
        let s2 = ctx.normal_form(&Span::new(swap.then(&to_pt).unwrap(), to_pt.clone()).unwrap());
        assert_eq!(s1, s2);

        // Legs differing by an apex automorphism: 1 ← G/e → G/e via id vs swap.
        let id = GMap::identity(&r);
        let t1 = ctx.normal_form(&Span::new(to_pt.clone(), id).unwrap());
        let t2 = ctx.normal_form(&Span::new(to_pt, swap).unwrap());
        assert_eq!(t1, t2);
    }

    #[test]
    fn compose_with_identity() {
        let ctx = c2();
        let r = coset_gset(ctx.group(), &[0]).unwrap();
        let pt = ctx.point().clone();
        let to_pt = GMap::new(r.clone(), pt.clone(), vec![0, 0]).unwrap();
        let s = ctx.normal_form(&Span::new(to_pt.clone(), GMap::identity(&r)).unwrap());
        let id_src = ctx.identity_class(&pt);
        let id_tgt = ctx.identity_class(&r);
        assert_eq!(ctx.compose(&id_src, &s).unwrap(), s);
        assert_eq!(ctx.compose(&s, &id_tgt).unwrap(), s);
    }

    #[test]
    fn free_loop_composes_to_twice_itself() {
        let ctx = c2();
        let r = coset_gset(ctx.group(), &[0]).unwrap();
        let pt = ctx.point().clone();
        let to_pt = GMap::new(r.clone(), pt.clone(), vec![0, 0]).unwrap();
        let loop_span = ctx.normal_form(&Span::new(to_pt.clone(), to_pt).unwrap());
        let sq = ctx.compose(&loop_span, &loop_span).unwrap();
        assert_eq!(sq.components().len(), 2);
        assert_eq!(sq, ctx.add(&loop_span, &loop_span).unwrap());
    }

    #[test]
    fn zero_annihilates() {
        let ctx = c2();
        let pt = ctx.point().clone();
        let z = SpanClass::zero(pt.clone(), pt.clone());
        let loop_span = {
            let r = coset_gset(ctx.group(), &[0]).unwrap();
            let to_pt = GMap::new(r, pt.clone(), vec![0, 0]).unwrap();
            ctx.normal_form(&Span::new(to_pt.clone(), to_pt).unwrap())
        };
        assert!(ctx.compose(&z, &loop_span).unwrap().is_zero());
        assert_eq!(ctx.add(&loop_span, &z).unwrap(), loop_span);
    }

    #[test]
    fn lower_upper_functoriality() {
        let ctx = Arc::new(samples::symmetric3());
        let ctx = ReprSystem::with_default_bound(ctx).unwrap();
        let c3 = ctx.group().generated_subgroup(&[3]);
        let x = coset_gset(ctx.group(), &[0]).unwrap();
        let y = coset_gset(ctx.group(), &c3).unwrap();
        let z = ctx.point().clone();
        let f = GMap::new(x.clone(), y.clone(), (0..6).map(|g| y.act(g, 0)).collect()).unwrap();
        let g = GMap::new(y.clone(), z.clone(), vec![0, 0]).unwrap();
        let gf = f.then(&g).unwrap();
        assert_eq!(
            ctx.lower(&gf),
            ctx.compose(&ctx.lower(&f), &ctx.lower(&g)).unwrap()
        );
        assert_eq!(
            ctx.upper(&gf),
            ctx.compose(&ctx.upper(&g), &ctx.upper(&f)).unwrap()
        );
        assert_eq!(ctx.transpose_class(&ctx.lower(&f)), ctx.upper(&f));
    }

    #[test]
    fn transpose_is_involutive_and_antimultiplicative() {
        let ctx = c2();
        let r = coset_gset(ctx.group(), &[0]).unwrap();
        let pt = ctx.point().clone();
        let to_pt = GMap::new(r.clone(), pt.clone(), vec![0, 0]).unwrap();
        let s = ctx.normal_form(&Span::new(to_pt.clone(), GMap::identity(&r)).unwrap());
        let t = ctx.normal_form(&Span::new(GMap::identity(&r), to_pt).unwrap());
        assert_eq!(ctx.transpose_class(&ctx.transpose_class(&s)), s);
        let st = ctx.compose(&s, &t).unwrap();
        let ts = ctx
            .compose(&ctx.transpose_class(&t), &ctx.transpose_class(&s))
            .unwrap();
        assert_eq!(ctx.transpose_class(&st), ts);
    }

    #[test]
    fn tensor_of_free_loops() {
        let ctx = c2();
        let r = coset_gset(ctx.group(), &[0]).unwrap();
        let pt = ctx.point().clone();
        let to_pt = GMap::new(r, pt.clone(), vec![0, 0]).unwrap();
        let loop_span = ctx.normal_form(&Span::new(to_pt.clone(), to_pt).unwrap());
        let sq = ctx.tensor(&loop_span, &loop_span).unwrap();
        // Apex G/e × G/e = two free orbits over 1×1.
        assert_eq!(sq.components().len(), 2);
        assert!(ctx
            .tensor(&SpanClass::zero(pt.clone(), pt.clone()), &loop_span)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn hom_basis_dimensions() {
        let ctx = c2();
        let pt = ctx.point().clone();
        let r = coset_gset(ctx.group(), &[0]).unwrap();
        assert_eq!(ctx.hom_basis(&pt, &pt).dimension(), 2);
        assert_eq!(ctx.hom_basis(&r, &r).dimension(), 2);
        let empty = GSet::empty(ctx.group().clone());
        assert_eq!(ctx.hom_basis(&empty, &r).dimension(), 0);
    }

    #[test]
    fn direct_sum_of_homs() {
        let ctx = c2();
        let pt = ctx.point().clone();
        let r = coset_gset(ctx.group(), &[0]).unwrap();
        let (sum, _, _) = crate::gset::coproduct(&pt, &r).unwrap();
        let d = ctx.hom_basis(&sum, &r).dimension();
        assert_eq!(
            d,
            ctx.hom_basis(&pt, &r).dimension() + ctx.hom_basis(&r, &r).dimension()
        );
    }

    #[test]
    fn compact_closure_dimensions() {
        let ctx = c2();
        let pt = ctx.point().clone();
        let r = coset_gset(ctx.group(), &[0]).unwrap();
        for (u, v, w) in [(&pt, &r, &pt), (&r, &r, &r), (&pt, &pt, &r)] {
            let uv = product(u, v).unwrap();
            let vw = product(v, w).unwrap();
            assert_eq!(
                ctx.hom_basis(&uv, w).dimension(),
                ctx.hom_basis(u, &vw).dimension()
            );
        }
    }
}
