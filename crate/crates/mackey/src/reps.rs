//! The representative system: one canonical coset space G/H per conjugacy
//! class of subgroups, plus the decomposition of arbitrary G-sets into
//! those representatives with explicit iso certificates.
//!
//! Every module downstream indexes level data by the class order fixed
//! here, so a `ReprSystem` is shared (via `Arc`) by all objects over the
//! same group.

use std::sync::{Arc, OnceLock};

use crate::group::{all_subgroups, Group, GroupError, SubgroupClassTable, DEFAULT_ORDER_BOUND};
use crate::gset::{coproduct, coset_gset, coset_min_reps, product, GMap, GSet, GSetError};
use crate::span::LinearizedHom;

/// One orbit of a decomposed G-set.
#[derive(Debug, Clone)]
pub struct Orbit {
    /// Subgroup class of the orbit stabilizer.
    pub class: usize,
    /// Sorted points of the orbit.
    pub points: Vec<usize>,
    /// Equivariant bijection from the class representative G/H onto the
    /// orbit (as a map into the ambient G-set).
    pub iso: GMap,
    /// Inverse point lookup: ambient point → point of G/H.
    pub inverse: Vec<(usize, usize)>,
}

/// A G-set written as a disjoint union of representative coset spaces.
#[derive(Debug, Clone)]
pub struct CanonicalDecomposition {
    pub object: GSet,
    pub orbits: Vec<Orbit>,
    /// Certificate: iso from the coproduct of the representatives onto the
    /// object (verified bijective equivariant at construction).
    pub iso: GMap,
    /// point → (orbit index, local point in the representative).
    pub locate: Vec<(usize, usize)>,
}

impl CanonicalDecomposition {
    /// Class indices in orbit order.
    pub fn classes(&self) -> Vec<usize> {
        self.orbits.iter().map(|o| o.class).collect()
    }
}

#[derive(Debug)]
pub struct ReprSystem {
    group: Arc<Group>,
    table: SubgroupClassTable,
    cosets: Vec<GSet>,
    min_reps: Vec<Vec<usize>>,
    normalizers: Vec<Vec<usize>>,
    basis_cache: Vec<Vec<OnceLock<LinearizedHom>>>,
    product_cache: Vec<Vec<OnceLock<GSet>>>,
}

impl ReprSystem {
    pub fn new(group: Arc<Group>, bound: usize) -> Result<Arc<ReprSystem>, GroupError> {
        let table = all_subgroups(&group, bound)?;
        let mut cosets = Vec::new();
        let mut min_reps = Vec::new();
        let mut normalizers = Vec::new();
        for c in 0..table.class_count() {
            let sub = table.rep_elements(c);
            let gs = coset_gset(&group, sub).expect("class rep is a subgroup");
            cosets.push(gs);
            min_reps.push(coset_min_reps(&group, sub));
            normalizers.push(group.normalizer(sub));
        }
        let n = table.class_count();
        let basis_cache = (0..n)
            .map(|_| (0..n).map(|_| OnceLock::new()).collect())
            .collect();
        let product_cache = (0..n)
            .map(|_| (0..n).map(|_| OnceLock::new()).collect())
            .collect();
        Ok(Arc::new(ReprSystem {
            group,
            table,
            cosets,
            min_reps,
            normalizers,
            basis_cache,
            product_cache,
        }))
    }

    /// Cached hom basis between two representatives; these are the
    /// generators every Mackey functor stores matrices for.
    pub fn rep_basis(&self, i: usize, j: usize) -> &LinearizedHom {
        self.basis_cache[i][j].get_or_init(|| self.hom_basis(self.coset(i), self.coset(j)))
    }

    /// Cached cartesian product of two representatives.
    pub fn rep_product(&self, i: usize, j: usize) -> &GSet {
        self.product_cache[i][j]
            .get_or_init(|| product(self.coset(i), self.coset(j)).expect("same group"))
    }

    pub fn with_default_bound(group: Arc<Group>) -> Result<Arc<ReprSystem>, GroupError> {
        Self::new(group, DEFAULT_ORDER_BOUND)
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn table(&self) -> &SubgroupClassTable {
        &self.table
    }

    pub fn class_count(&self) -> usize {
        self.table.class_count()
    }

    /// The representative transitive G-set of a class.
    pub fn coset(&self, class: usize) -> &GSet {
        &self.cosets[class]
    }

    /// The terminal G-set; class 0 is always the class of G itself.
    pub fn point(&self) -> &GSet {
        &self.cosets[0]
    }

    /// Minimal group-element representative of each point of `coset(class)`.
    pub fn min_reps(&self, class: usize) -> &[usize] {
        &self.min_reps[class]
    }

    pub fn normalizer(&self, class: usize) -> &[usize] {
        &self.normalizers[class]
    }

    /// The equivariant map G/L → X determined by sending the base coset to
    /// `base_image` (which must be fixed by the representative subgroup).
    pub fn coset_map(&self, class: usize, target: &GSet, base_image: usize) -> GMap {
        let values = self.min_reps[class]
            .iter()
            .map(|&g| target.act(g, base_image))
            .collect();
        GMap::new(self.cosets[class].clone(), target.clone(), values)
            .expect("base image is fixed by the stabilizer class")
    }

    /// Decomposes a G-set into representative orbits, ordered by
    /// (class index, least point), with iso certificates.
    pub fn decompose(&self, x: &GSet) -> CanonicalDecomposition {
        let mut orbits = Vec::new();
        for points in x.orbits() {
            let base = points[0];
            let stab = x.stabilizer(base);
            let sub_idx = self
                .table
                .find_subgroup(&stab)
                .expect("stabilizer is a subgroup");
            let class = self.table.class_of[sub_idx];
            // Move the base point so its stabilizer is exactly the class
            // representative: if Stab(x0)=H and cHc⁻¹=L then Stab(c·x0)=L.
            let rep = self.table.rep_elements(class);
            let c = (0..self.group.order())
                .find(|&c| {
                    let mut conj: Vec<usize> =
                        stab.iter().map(|&h| self.group.conjugate(c, h)).collect();
                    conj.sort_unstable();
                    conj == rep
                })
                .expect("conjugate subgroups");
            let new_base = x.act(c, base);
            let iso = self.coset_map(class, x, new_base);
            let mut inverse = vec![(usize::MAX, usize::MAX); x.size()];
            for (p, &v) in iso.values().iter().enumerate() {
                inverse[v] = (0, p);
            }
            orbits.push(Orbit {
                class,
                points,
                iso,
                inverse,
            });
        }
        orbits.sort_by(|a, b| (a.class, a.points[0]).cmp(&(b.class, b.points[0])));

        // Assemble the certificate iso from the coproduct of representatives.
        let mut sum = GSet::empty(self.group.clone());
        let mut values: Vec<usize> = Vec::new();
        for orbit in &orbits {
            let (s, _, _) = coproduct(&sum, orbit.iso.source()).expect("same group");
            sum = s;
            values.extend_from_slice(orbit.iso.values());
        }
        let iso = GMap::new(sum, x.clone(), values).expect("orbit isos are equivariant");
        assert!(iso.is_bijective(), "orbit decomposition must be bijective");

        let mut locate = vec![(usize::MAX, usize::MAX); x.size()];
        for (oi, orbit) in orbits.iter().enumerate() {
            for (p, &v) in orbit.iso.values().iter().enumerate() {
                locate[v] = (oi, p);
            }
        }
        CanonicalDecomposition {
            object: x.clone(),
            orbits,
            iso,
            locate,
        }
    }

    /// An equivariant bijection X → Y when one exists, decided via the
    /// canonical decompositions.
    pub fn find_iso(&self, x: &GSet, y: &GSet) -> Result<Option<GMap>, GSetError> {
        if x.group() != y.group() {
            return Err(GSetError::GroupMismatch);
        }
        let dx = self.decompose(x);
        let dy = self.decompose(y);
        if dx.classes() != dy.classes() {
            return Ok(None);
        }
        let mut values = vec![0usize; x.size()];
        for (ox, oy) in dx.orbits.iter().zip(dy.orbits.iter()) {
            // φ_y ∘ φ_x⁻¹ on this orbit.
            for (p, &xv) in ox.iso.values().iter().enumerate() {
                values[xv] = oy.iso.values()[p];
            }
        }
        let iso = GMap::new(x.clone(), y.clone(), values)?;
        debug_assert!(iso.is_bijective());
        Ok(Some(iso))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::samples;
    use crate::gset::product;

    fn ctx(g: Group) -> Arc<ReprSystem> {
        ReprSystem::with_default_bound(Arc::new(g)).unwrap()
    }

    #[test]
    fn class_zero_is_the_point() {
        for g in [
            samples::cyclic(2),
            samples::cyclic(3),
            samples::klein_four(),
            samples::symmetric3(),
        ] {
            let ctx = ctx(g);
            assert_eq!(ctx.coset(0).size(), 1);
            assert_eq!(ctx.coset(ctx.class_count() - 1).size(), ctx.group().order());
        }
    }

    #[test]
    fn regular_c2_is_one_free_orbit() {
        let ctx = ctx(samples::cyclic(2));
        let r = coset_gset(ctx.group(), &[0]).unwrap();
        let d = ctx.decompose(&r);
        assert_eq!(d.classes(), vec![1]);
    }

    #[test]
    fn trivial_three_points() {
        let ctx = ctx(samples::cyclic(2));
        let x = GSet::trivial(ctx.group().clone(), 3);
        let d = ctx.decompose(&x);
        assert_eq!(d.classes(), vec![0, 0, 0]);
    }

    #[test]
    fn s3_regular_is_free() {
        let ctx = ctx(samples::symmetric3());
        let r = coset_gset(ctx.group(), &[0]).unwrap();
        let d = ctx.decompose(&r);
        assert_eq!(d.classes(), vec![ctx.class_count() - 1]);
    }

    #[test]
    fn decompose_certifies_orbit_sizes() {
        let ctx = ctx(samples::symmetric3());
        let c2 = ctx.group().generated_subgroup(&[1]);
        let x = coset_gset(ctx.group(), &c2).unwrap();
        let p = product(&x, &x).unwrap();
        let d = ctx.decompose(&p);
        let total: usize = d.orbits.iter().map(|o| o.points.len()).sum();
        assert_eq!(total, p.size());
        for o in &d.orbits {
            assert_eq!(ctx.coset(o.class).size(), o.points.len());
        }
    }

    #[test]
    fn find_iso_examples() {
        let ctx = ctx(samples::cyclic(2));
        let r = coset_gset(ctx.group(), &[0]).unwrap();
        assert!(ctx.find_iso(&r, &r).unwrap().is_some());
        let t2 = GSet::trivial(ctx.group().clone(), 2);
        assert!(ctx.find_iso(&r, &t2).unwrap().is_none());

        // (G/H)+(G/K) vs (G/K)+(G/H)
        let pt = GSet::point(ctx.group().clone());
        let (a, _, _) = coproduct(&pt, &r).unwrap();
        let (b, _, _) = coproduct(&r, &pt).unwrap();
        let iso = ctx.find_iso(&a, &b).unwrap().unwrap();
        assert!(iso.is_bijective());
    }

    #[test]
    fn distributivity_certified() {
        // (A×B)+(A×C) ≅ A×(B+C) with a certified iso.
        let ctx = ctx(samples::symmetric3());
        let c2 = ctx.group().generated_subgroup(&[1]);
        let a = coset_gset(ctx.group(), &c2).unwrap();
        let b = coset_gset(ctx.group(), &ctx.group().generated_subgroup(&[3])).unwrap();
        let c = GSet::point(ctx.group().clone());
        let (bc, _, _) = coproduct(&b, &c).unwrap();
        let lhs = {
            let ab = product(&a, &b).unwrap();
            let ac = product(&a, &c).unwrap();
            coproduct(&ab, &ac).unwrap().0
        };
        let rhs = product(&a, &bc).unwrap();
        assert!(ctx.find_iso(&lhs, &rhs).unwrap().is_some());
    }
}
