//! Finite groups as validated Cayley tables, with the derived subgroup data
//! (full subgroup list, conjugacy classes of subgroups, double cosets)
//! needed by the rest of the crate.
//!
//! Element 0 is always the identity. The canonical order of subgroup
//! conjugacy classes — decreasing subgroup order, then lexicographic element
//! set — fixes the global indexing of transitive G-sets used everywhere
//! else, so it is part of the serialization contract.

use std::collections::BTreeSet;
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("multiplication table is not square: row {row} has length {len}, expected {order}")]
    NotSquare {
        row: usize,
        len: usize,
        order: usize,
    },
    #[error("table entry out of range at ({g}, {h}): {value} >= {order}")]
    EntryOutOfRange {
        g: usize,
        h: usize,
        value: usize,
        order: usize,
    },
    #[error("element 0 is not a two-sided identity (fails at element {witness})")]
    BadIdentity { witness: usize },
    #[error("element {element} has no inverse")]
    NoInverse { element: usize },
    #[error("associativity fails on the triple ({a}, {b}, {c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("group order {order} exceeds the bound {bound}; pass an explicit override to proceed")]
    OrderBoundExceeded { order: usize, bound: usize },
    #[error("the element set {0:?} is not a subgroup")]
    NotASubgroup(Vec<usize>),
    #[error("{k:?} is not contained in {h:?}")]
    NotContained { h: Vec<usize>, k: Vec<usize> },
}

/// A finite group given by its full multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Group {
    order: usize,
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
}

/// Default cap on exhaustive subgroup enumeration.
pub const DEFAULT_ORDER_BOUND: usize = 24;

impl Group {
    /// Validates a multiplication table (identity at index 0, two-sided
    /// inverses, associativity) and returns the group.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Group, GroupError> {
        let order = table.len();
        for (row, r) in table.iter().enumerate() {
            if r.len() != order {
                return Err(GroupError::NotSquare {
                    row,
                    len: r.len(),
                    order,
                });
            }
        }
        for (g, row) in table.iter().enumerate() {
            for (h, &v) in row.iter().enumerate() {
                if v >= order {
                    return Err(GroupError::EntryOutOfRange {
                        g,
                        h,
                        value: v,
                        order,
                    });
                }
            }
        }
        if order == 0 {
            return Err(GroupError::BadIdentity { witness: 0 });
        }
        for x in 0..order {
            if table[0][x] != x || table[x][0] != x {
                return Err(GroupError::BadIdentity { witness: x });
            }
        }
        let mut inverse = vec![usize::MAX; order];
        for g in 0..order {
            match (0..order).find(|&h| table[g][h] == 0 && table[h][g] == 0) {
                Some(h) => inverse[g] = h,
                None => return Err(GroupError::NoInverse { element: g }),
            }
        }
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(GroupError::NotAssociative { a, b, c });
                    }
                }
            }
        }
        Ok(Group {
            order,
            table,
            inverse,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g][h]
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inverse[g]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    /// Closes a set of elements under multiplication.
    pub fn generated_subgroup(&self, generators: &[usize]) -> Vec<usize> {
        let mut set: BTreeSet<usize> = generators.iter().copied().collect();
        set.insert(0);
        loop {
            let mut new = Vec::new();
            for &a in &set {
                for &b in &set {
                    let p = self.mul(a, b);
                    if !set.contains(&p) {
                        new.push(p);
                    }
                }
            }
            if new.is_empty() {
                break;
            }
            set.extend(new);
        }
        set.into_iter().collect()
    }

    pub fn is_subgroup(&self, elements: &[usize]) -> bool {
        let set: BTreeSet<usize> = elements.iter().copied().collect();
        set.contains(&0)
            && set
                .iter()
                .all(|&a| set.iter().all(|&b| set.contains(&self.mul(a, b))))
    }

    /// Left cosets of a subgroup, each sorted, ordered by least element;
    /// the subgroup itself is coset 0.
    pub fn left_cosets(&self, subgroup: &[usize]) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.order];
        let mut cosets = Vec::new();
        for g in 0..self.order {
            if seen[g] {
                continue;
            }
            let mut coset: Vec<usize> = subgroup.iter().map(|&h| self.mul(g, h)).collect();
            coset.sort_unstable();
            for &x in &coset {
                seen[x] = true;
            }
            cosets.push(coset);
        }
        cosets
    }

    /// Normalizer N_G(H) of a subgroup.
    pub fn normalizer(&self, subgroup: &[usize]) -> Vec<usize> {
        let set: BTreeSet<usize> = subgroup.iter().copied().collect();
        (0..self.order)
            .filter(|&g| {
                subgroup
                    .iter()
                    .all(|&h| set.contains(&self.conjugate(g, h)))
            })
            .collect()
    }
}

/// Expands a set of permutation generators on {0, .., degree-1} into a
/// validated Cayley-table group. Elements are sorted lexicographically, so
/// the identity lands at index 0. Fails when the generated group exceeds
/// `cap`.
pub fn permutation_group(
    degree: usize,
    generators: &[Vec<usize>],
    cap: usize,
) -> Result<Group, GroupError> {
    let is_perm = |p: &[usize]| {
        p.len() == degree && {
            let mut seen = vec![false; degree];
            p.iter().all(|&v| v < degree && !std::mem::replace(&mut seen[v], true))
        }
    };
    for (i, g) in generators.iter().enumerate() {
        if !is_perm(g) {
            return Err(GroupError::NotSquare { row: i, len: g.len(), order: degree });
        }
    }
    let identity: Vec<usize> = (0..degree).collect();
    let mut elements: BTreeSet<Vec<usize>> = BTreeSet::new();
    elements.insert(identity.clone());
    let mut queue: Vec<Vec<usize>> = vec![identity];
    while let Some(p) = queue.pop() {
        for g in generators {
            // g after p.
            let composed: Vec<usize> = p.iter().map(|&x| g[x]).collect();
            if elements.insert(composed.clone()) {
                if elements.len() > cap {
                    return Err(GroupError::OrderBoundExceeded {
                        order: elements.len(),
                        bound: cap,
                    });
                }
                queue.push(composed);
            }
        }
    }
    let elements: Vec<Vec<usize>> = elements.into_iter().collect();
    let index_of = |p: &Vec<usize>| elements.binary_search(p).expect("closed under product");
    let table = elements
        .iter()
        .map(|a| {
            elements
                .iter()
                .map(|b| {
                    // (a∘b)(x) = a(b(x)).
                    let prod: Vec<usize> = b.iter().map(|&x| a[x]).collect();
                    index_of(&prod)
                })
                .collect()
        })
        .collect();
    Group::from_table(table)
}

/// Common small groups, mostly for tests and docs.
pub mod samples {
    use super::Group;

    /// Cyclic group of order n (addition mod n).
    pub fn cyclic(n: usize) -> Group {
        let table = (0..n)
            .map(|a| (0..n).map(|b| (a + b) % n).collect())
            .collect();
        Group::from_table(table).expect("cyclic table is a group")
    }

    /// Klein four-group C2×C2, elements indexed as pairs (a,b) ↦ 2a+b.
    pub fn klein_four() -> Group {
        let table = (0..4)
            .map(|x: usize| (0..4).map(|y: usize| x ^ y).collect())
            .collect();
        Group::from_table(table).expect("klein table is a group")
    }

    /// Symmetric group S3 as permutations of {0,1,2}.
    ///
    /// Elements are indexed 0..6 in lexicographic order of their one-line
    /// notation, so 0 is the identity.
    pub fn symmetric3() -> Group {
        let perms: Vec<[usize; 3]> = vec![
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let index = |p: &[usize; 3]| {
            perms
                .iter()
                .position(|q| q == p)
                .expect("permutation listed")
        };
        let table = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| {
                        // (a∘b)(x) = a(b(x))
                        let comp = [a[b[0]], a[b[1]], a[b[2]]];
                        index(&comp)
                    })
                    .collect()
            })
            .collect();
        Group::from_table(table).expect("S3 table is a group")
    }
}

/// All subgroups of a group, grouped into conjugacy classes.
///
/// Subgroups are sorted by decreasing order, then lexicographically by
/// element set, so the whole group is subgroup 0 and the trivial subgroup is
/// last. Classes inherit that order through their least member, which is
/// recorded as the class representative.
#[derive(Debug, Clone)]
pub struct SubgroupClassTable {
    pub subgroups: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    pub class_reps: Vec<usize>,
}

impl SubgroupClassTable {
    pub fn class_count(&self) -> usize {
        self.class_reps.len()
    }

    pub fn rep_elements(&self, class: usize) -> &[usize] {
        &self.subgroups[self.class_reps[class]]
    }

    pub fn find_subgroup(&self, elements: &[usize]) -> Option<usize> {
        let mut sorted = elements.to_vec();
        sorted.sort_unstable();
        self.subgroups.iter().position(|s| *s == sorted)
    }
}

/// Enumerates every subgroup of `group` and classifies them up to
/// conjugacy. Fails if the order exceeds `bound` (use
/// [`DEFAULT_ORDER_BOUND`] unless the caller overrides it).
pub fn all_subgroups(group: &Arc<Group>, bound: usize) -> Result<SubgroupClassTable, GroupError> {
    let n = group.order();
    if n > bound {
        return Err(GroupError::OrderBoundExceeded { order: n, bound });
    }
    // Breadth-first closure: every subgroup arises by adjoining one element
    // to a smaller subgroup.
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    found.insert(vec![0]);
    let mut queue: Vec<Vec<usize>> = vec![vec![0]];
    while let Some(h) = queue.pop() {
        for g in 1..n {
            if h.binary_search(&g).is_ok() {
                continue;
            }
            let mut gens = h.clone();
            gens.push(g);
            let closed = group.generated_subgroup(&gens);
            if found.insert(closed.clone()) {
                queue.push(closed);
            }
        }
    }
    let mut subgroups: Vec<Vec<usize>> = found.into_iter().collect();
    subgroups.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));

    let mut class_of = vec![usize::MAX; subgroups.len()];
    let mut class_reps = Vec::new();
    for i in 0..subgroups.len() {
        if class_of[i] != usize::MAX {
            continue;
        }
        let class = class_reps.len();
        class_reps.push(i);
        for g in 0..n {
            let mut conj: Vec<usize> = subgroups[i]
                .iter()
                .map(|&x| group.conjugate(g, x))
                .collect();
            conj.sort_unstable();
            let j = subgroups
                .iter()
                .position(|s| *s == conj)
                .expect("conjugate is a subgroup");
            class_of[j] = class;
        }
    }
    Ok(SubgroupClassTable {
        subgroups,
        class_of,
        class_reps,
    })
}

/// Partitions G into H\G/K double cosets, each sorted, ordered by least
/// element.
pub fn double_cosets(
    group: &Group,
    h: &[usize],
    k: &[usize],
) -> Result<Vec<Vec<usize>>, GroupError> {
    if !group.is_subgroup(h) {
        return Err(GroupError::NotASubgroup(h.to_vec()));
    }
    if !group.is_subgroup(k) {
        return Err(GroupError::NotASubgroup(k.to_vec()));
    }
    let mut seen = vec![false; group.order()];
    let mut out = Vec::new();
    for g in 0..group.order() {
        if seen[g] {
            continue;
        }
        let mut coset = BTreeSet::new();
        for &a in h {
            for &b in k {
                coset.insert(group.mul(group.mul(a, g), b));
            }
        }
        for &x in &coset {
            seen[x] = true;
        }
        out.push(coset.into_iter().collect());
    }
    Ok(out)
}

/// The index [H:K] for K ≤ H.
pub fn index(group: &Group, h: &[usize], k: &[usize]) -> Result<usize, GroupError> {
    if !group.is_subgroup(h) {
        return Err(GroupError::NotASubgroup(h.to_vec()));
    }
    if !group.is_subgroup(k) {
        return Err(GroupError::NotASubgroup(k.to_vec()));
    }
    let hs: BTreeSet<usize> = h.iter().copied().collect();
    if !k.iter().all(|x| hs.contains(x)) {
        return Err(GroupError::NotContained {
            h: h.to_vec(),
            k: k.to_vec(),
        });
    }
    Ok(h.len() / k.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(g: Group) -> Arc<Group> {
        Arc::new(g)
    }

    #[test]
    fn c2_from_table() {
        let g = Group::from_table(vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.inv(1), 1);
    }

    #[test]
    fn z3_from_table() {
        assert_eq!(samples::cyclic(3).order(), 3);
    }

    #[test]
    fn rejects_missing_inverse() {
        let err = Group::from_table(vec![vec![0, 1], vec![1, 1]]).unwrap_err();
        assert!(matches!(
            err,
            GroupError::NoInverse { element: 1 } | GroupError::BadIdentity { .. }
        ));
    }

    #[test]
    fn rejects_nonassociative() {
        // A quasigroup table with identity but broken associativity.
        let err = Group::from_table(vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ])
        .unwrap_err();
        assert!(matches!(
            err,
            GroupError::NotAssociative { .. } | GroupError::NoInverse { .. }
        ));
    }

    /// Oracle: every subset that is closed is a subgroup. Only for tiny groups.
    fn exhaustive_subgroups(g: &Group) -> BTreeSet<Vec<usize>> {
        let n = g.order();
        let mut out = BTreeSet::new();
        for mask in 0u32..(1 << n) {
            if mask & 1 == 0 {
                continue;
            }
            let subset: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            if g.is_subgroup(&subset) {
                out.insert(subset);
            }
        }
        out
    }

    #[test]
    fn subgroups_match_exhaustive_oracle() {
        for g in [
            samples::cyclic(1),
            samples::cyclic(2),
            samples::cyclic(6),
            samples::klein_four(),
            samples::symmetric3(),
        ] {
            let g = arc(g);
            let table = all_subgroups(&g, DEFAULT_ORDER_BOUND).unwrap();
            let got: BTreeSet<Vec<usize>> = table.subgroups.iter().cloned().collect();
            assert_eq!(got, exhaustive_subgroups(&g));
        }
    }

    #[test]
    fn c2_has_two_classes() {
        let table = all_subgroups(&arc(samples::cyclic(2)), 24).unwrap();
        assert_eq!(table.subgroups.len(), 2);
        assert_eq!(table.class_count(), 2);
    }

    #[test]
    fn s3_subgroup_classes() {
        let table = all_subgroups(&arc(samples::symmetric3()), 24).unwrap();
        assert_eq!(table.subgroups.len(), 6);
        assert_eq!(table.class_count(), 4);
        // Canonical order: S3, C3, the C2 class, {e}.
        let sizes: Vec<usize> = (0..4).map(|c| table.rep_elements(c).len()).collect();
        assert_eq!(sizes, vec![6, 3, 2, 1]);
    }

    #[test]
    fn trivial_group_single_subgroup() {
        let table = all_subgroups(&arc(samples::cyclic(1)), 24).unwrap();
        assert_eq!(table.subgroups.len(), 1);
    }

    #[test]
    fn bound_is_enforced() {
        let err = all_subgroups(&arc(samples::symmetric3()), 4).unwrap_err();
        assert!(matches!(
            err,
            GroupError::OrderBoundExceeded { order: 6, bound: 4 }
        ));
    }

    #[test]
    fn double_cosets_examples() {
        let c2 = samples::cyclic(2);
        assert_eq!(double_cosets(&c2, &[0], &[0]).unwrap().len(), 2);

        let s3 = samples::symmetric3();
        let c3: Vec<usize> = s3.generated_subgroup(&[3]).to_vec();
        assert_eq!(c3.len(), 3);
        assert_eq!(double_cosets(&s3, &c3, &c3).unwrap().len(), 2);

        let all: Vec<usize> = (0..6).collect();
        assert_eq!(double_cosets(&s3, &all, &all).unwrap().len(), 1);

        let err = double_cosets(&s3, &[0, 1, 2], &[0]).unwrap_err();
        assert!(matches!(err, GroupError::NotASubgroup(_)));
    }

    #[test]
    fn double_cosets_partition() {
        let s3 = samples::symmetric3();
        let table = all_subgroups(&arc(s3.clone()), 24).unwrap();
        for h in &table.subgroups {
            for k in &table.subgroups {
                let dc = double_cosets(&s3, h, k).unwrap();
                let total: usize = dc.iter().map(|c| c.len()).sum();
                assert_eq!(total, s3.order());
            }
        }
    }

    #[test]
    fn index_examples() {
        let c2 = samples::cyclic(2);
        assert_eq!(index(&c2, &[0, 1], &[0]).unwrap(), 2);
        assert_eq!(index(&c2, &[0, 1], &[0, 1]).unwrap(), 1);

        let s3 = samples::symmetric3();
        let c3 = s3.generated_subgroup(&[3]);
        let all: Vec<usize> = (0..6).collect();
        assert_eq!(index(&s3, &all, &c3).unwrap(), 2);
        assert!(index(&s3, &c3, &all).is_err());
    }

    #[test]
    fn permutation_generators_expand_to_s3() {
        let g = permutation_group(3, &[vec![1, 0, 2], vec![1, 2, 0]], 24).unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(g, samples::symmetric3());

        // A single 4-cycle generates C4.
        let c4 = permutation_group(4, &[vec![1, 2, 3, 0]], 24).unwrap();
        assert_eq!(c4.order(), 4);

        // Cap enforcement.
        assert!(matches!(
            permutation_group(3, &[vec![1, 0, 2], vec![1, 2, 0]], 4),
            Err(GroupError::OrderBoundExceeded { .. })
        ));
        // Not a permutation.
        assert!(permutation_group(3, &[vec![0, 0, 2]], 24).is_err());
    }

    #[test]
    fn lagrange() {
        for g in [
            samples::cyclic(6),
            samples::klein_four(),
            samples::symmetric3(),
        ] {
            let order = g.order();
            let table = all_subgroups(&arc(g), 24).unwrap();
            assert!(table.subgroups.iter().all(|s| order % s.len() == 0));
        }
    }
}
