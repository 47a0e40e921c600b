//! Mackey functors in Lindner form: exact vector spaces on the
//! representative transitive G-sets plus one matrix per generating span.
//!
//! Evaluation at arbitrary objects and spans routes through the canonical
//! decomposition, so the stored data is the single source of truth.
//! Validation checks identity preservation and functoriality over every
//! composable pair of generators, which encodes the Mackey squares since
//! composition of spans is by pullback.

use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::gset::{coset_gset, GMap, GSet};
use crate::linalg::{kernel_basis, quotient_by, rat, solve, RatMatrix};
use crate::reps::{CanonicalDecomposition, ReprSystem};
use crate::span::{SpanClass, SpanComponent};

#[derive(Debug, Error)]
pub enum MackeyError {
    #[error("level count {got} does not match the {expected} subgroup classes")]
    LevelCount { got: usize, expected: usize },
    #[error("generator matrix for ({i}, {j}, {b}) has shape {rows}x{cols}, expected {want_rows}x{want_cols}")]
    MatrixShape {
        i: usize,
        j: usize,
        b: usize,
        rows: usize,
        cols: usize,
        want_rows: usize,
        want_cols: usize,
    },
    #[error("generator table for ({i}, {j}) has {got} matrices, expected {expected}")]
    GeneratorCount {
        i: usize,
        j: usize,
        got: usize,
        expected: usize,
    },
    #[error("operands live over different groups")]
    GroupMismatch,
    #[error("subgroup {k:?} is not contained in {h:?}")]
    NotContained { h: Vec<usize>, k: Vec<usize> },
    #[error("the element set {0:?} is not a subgroup")]
    NotASubgroup(Vec<usize>),
}

/// Bookkeeping for the evaluation of a functor at an arbitrary G-set: the
/// canonical decomposition plus level offsets into the direct sum.
#[derive(Debug, Clone)]
pub struct EvalBook {
    pub dec: CanonicalDecomposition,
    pub offsets: Vec<usize>,
    pub dim: usize,
}

#[derive(Debug, Clone)]
pub struct MackeyFunctor {
    ctx: Arc<ReprSystem>,
    levels: Vec<usize>,
    action: Vec<Vec<Vec<RatMatrix>>>,
}

/// One broken functoriality identity, by generator indices.
#[derive(Debug, Clone)]
pub enum ValidationFailure {
    /// The identity span of class `class` does not act as the identity.
    Identity { class: usize },
    /// compose(S: i→j, T: j→k) acts differently from action(T)·action(S).
    Composite {
        i: usize,
        j: usize,
        k: usize,
        s: SpanComponent,
        t: SpanComponent,
    },
}

impl fmt::Display for ValidationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationFailure::Identity { class } => {
                write!(
                    f,
                    "identity span of class {class} does not act as the identity"
                )
            }
            ValidationFailure::Composite { i, j, k, s, t } => write!(
                f,
                "functoriality fails on generators {s:?}: C{i}→C{j} and {t:?}: C{j}→C{k}"
            ),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub failures: Vec<ValidationFailure>,
    pub checked: usize,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl MackeyFunctor {
    /// Wraps level dimensions and generator matrices, checking shapes
    /// against the representative system. Functoriality is a separate,
    /// more expensive check: [`MackeyFunctor::validate`].
    pub fn new(
        ctx: Arc<ReprSystem>,
        levels: Vec<usize>,
        action: Vec<Vec<Vec<RatMatrix>>>,
    ) -> Result<MackeyFunctor, MackeyError> {
        let n = ctx.class_count();
        if levels.len() != n {
            return Err(MackeyError::LevelCount {
                got: levels.len(),
                expected: n,
            });
        }
        if action.len() != n {
            return Err(MackeyError::LevelCount {
                got: action.len(),
                expected: n,
            });
        }
        for i in 0..n {
            if action[i].len() != n {
                return Err(MackeyError::LevelCount {
                    got: action[i].len(),
                    expected: n,
                });
            }
            for j in 0..n {
                let want = ctx.rep_basis(i, j).dimension();
                if action[i][j].len() != want {
                    return Err(MackeyError::GeneratorCount {
                        i,
                        j,
                        got: action[i][j].len(),
                        expected: want,
                    });
                }
                for (b, m) in action[i][j].iter().enumerate() {
                    if m.rows() != levels[j] || m.cols() != levels[i] {
                        return Err(MackeyError::MatrixShape {
                            i,
                            j,
                            b,
                            rows: m.rows(),
                            cols: m.cols(),
                            want_rows: levels[j],
                            want_cols: levels[i],
                        });
                    }
                }
            }
        }
        Ok(MackeyFunctor {
            ctx,
            levels,
            action,
        })
    }

    pub fn zero(ctx: Arc<ReprSystem>) -> MackeyFunctor {
        let n = ctx.class_count();
        let levels = vec![0; n];
        let action = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| vec![RatMatrix::zeros(0, 0); ctx.rep_basis(i, j).dimension()])
                    .collect()
            })
            .collect();
        MackeyFunctor {
            ctx,
            levels,
            action,
        }
    }

    pub fn ctx(&self) -> &Arc<ReprSystem> {
        &self.ctx
    }

    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    pub fn level_dim(&self, class: usize) -> usize {
        self.levels[class]
    }

    pub fn generator_matrix(&self, i: usize, j: usize, b: usize) -> &RatMatrix {
        &self.action[i][j][b]
    }

    pub fn is_zero_functor(&self) -> bool {
        self.levels.iter().all(|&d| d == 0)
    }

    /// Evaluation bookkeeping at an arbitrary object.
    pub fn eval_book(&self, x: &GSet) -> EvalBook {
        let dec = self.ctx.decompose(x);
        let mut offsets = Vec::with_capacity(dec.orbits.len());
        let mut dim = 0;
        for orbit in &dec.orbits {
            offsets.push(dim);
            dim += self.levels[orbit.class];
        }
        EvalBook { dec, offsets, dim }
    }

    pub fn eval_dim(&self, x: &GSet) -> usize {
        self.ctx
            .decompose(x)
            .orbits
            .iter()
            .map(|o| self.levels[o.class])
            .sum()
    }

    /// The matrix of a span class, routed through the canonical
    /// decomposition of its endpoints; components act additively.
    pub fn eval_span(&self, s: &SpanClass) -> RatMatrix {
        let src = self.eval_book(s.source());
        let tgt = self.eval_book(s.target());
        self.eval_span_with(&src, &tgt, s)
    }

    /// As [`eval_span`](Self::eval_span) with caller-provided bookkeeping
    /// (the books must belong to the span endpoints).
    pub fn eval_span_with(&self, src: &EvalBook, tgt: &EvalBook, s: &SpanClass) -> RatMatrix {
        let mut out = RatMatrix::zeros(tgt.dim, src.dim);
        for comp in s.components() {
            let (os, pu) = src.dec.locate[comp.left];
            let (ot, pv) = tgt.dec.locate[comp.right];
            let i = src.dec.orbits[os].class;
            let j = tgt.dec.orbits[ot].class;
            let key = self.ctx.canon_component(comp.apex_class, i, j, pu, pv);
            let b = self
                .ctx
                .rep_basis(i, j)
                .index_of(&key)
                .expect("transported component is a generator");
            out.add_block(tgt.offsets[ot], src.offsets[os], &self.action[i][j][b]);
        }
        out
    }

    /// Checks identity preservation and functoriality over every
    /// composable pair of generators between representatives.
    pub fn validate(&self) -> ValidationReport {
        let ctx = &self.ctx;
        let n = ctx.class_count();
        let mut report = ValidationReport::default();
        for i in 0..n {
            let id = ctx.identity_class(ctx.coset(i));
            let coeffs = ctx.express(&id, ctx.rep_basis(i, i));
            let mut acc = RatMatrix::zeros(self.levels[i], self.levels[i]);
            for (b, &c) in coeffs.iter().enumerate() {
                if c > 0 {
                    acc = acc.add(&self.action[i][i][b].scale(&rat(c as i64)));
                }
            }
            report.checked += 1;
            if !acc.is_identity() {
                report
                    .failures
                    .push(ValidationFailure::Identity { class: i });
            }
        }
        for i in 0..n {
            for j in 0..n {
                let basis_ij = ctx.rep_basis(i, j).clone();
                for (bs, s) in basis_ij.basis.iter().enumerate() {
                    let s_class = ctx.component_class(ctx.coset(i), ctx.coset(j), *s);
                    for k in 0..n {
                        let basis_jk = ctx.rep_basis(j, k).clone();
                        for (bt, t) in basis_jk.basis.iter().enumerate() {
                            let t_class = ctx.component_class(ctx.coset(j), ctx.coset(k), *t);
                            let st = ctx.compose(&s_class, &t_class).expect("endpoints match");
                            let coeffs = ctx.express(&st, ctx.rep_basis(i, k));
                            let mut lhs = RatMatrix::zeros(self.levels[k], self.levels[i]);
                            for (b, &c) in coeffs.iter().enumerate() {
                                if c > 0 {
                                    lhs = lhs.add(&self.action[i][k][b].scale(&rat(c as i64)));
                                }
                            }
                            let rhs = self.action[j][k][bt].mul(&self.action[i][j][bs]);
                            report.checked += 1;
                            if lhs != rhs {
                                report.failures.push(ValidationFailure::Composite {
                                    i,
                                    j,
                                    k,
                                    s: *s,
                                    t: *t,
                                });
                            }
                        }
                    }
                }
            }
        }
        report
    }
}

impl ReprSystem {
    /// Canonical generator key for a connected span between representatives.
    pub fn canon_component(
        &self,
        apex_class: usize,
        i: usize,
        j: usize,
        left: usize,
        right: usize,
    ) -> SpanComponent {
        let ci = self.coset(i);
        let cj = self.coset(j);
        let (l, r) = self
            .normalizer(apex_class)
            .iter()
            .map(|&n| (ci.act(n, left), cj.act(n, right)))
            .min()
            .expect("normalizer contains the identity");
        SpanComponent {
            apex_class,
            left: l,
            right: r,
        }
    }
}

/// The Burnside functor J: level spaces are the linearized span homs out of
/// the point, generators act by span composition re-expressed in that basis.
pub fn burnside_functor(ctx: &Arc<ReprSystem>) -> MackeyFunctor {
    let n = ctx.class_count();
    let pt = ctx.point().clone();
    let levels: Vec<usize> = (0..n).map(|i| ctx.rep_basis(0, i).dimension()).collect();
    let mut action = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let basis_ij = ctx.rep_basis(i, j).clone();
            let mut mats = Vec::with_capacity(basis_ij.dimension());
            for s in &basis_ij.basis {
                let s_class = ctx.component_class(ctx.coset(i), ctx.coset(j), *s);
                let mut m = RatMatrix::zeros(levels[j], levels[i]);
                for (a, alpha) in ctx.rep_basis(0, i).basis.clone().iter().enumerate() {
                    let alpha_class = ctx.component_class(&pt, ctx.coset(i), *alpha);
                    let composed = ctx
                        .compose(&alpha_class, &s_class)
                        .expect("endpoints match");
                    let coeffs = ctx.express(&composed, ctx.rep_basis(0, j));
                    for (r, &c) in coeffs.iter().enumerate() {
                        if c > 0 {
                            m.set(r, a, rat(c as i64));
                        }
                    }
                }
                mats.push(m);
            }
            row.push(mats);
        }
        action.push(row);
    }
    MackeyFunctor::new(ctx.clone(), levels, action).expect("shapes are consistent")
}

/// A finite-dimensional k-linear representation with exact rational
/// matrices, validated to be a group homomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    group: Arc<crate::group::Group>,
    dim: usize,
    matrices: Vec<RatMatrix>,
}

#[derive(Debug, Error)]
pub enum RepError {
    #[error("expected one matrix per group element ({expected}), got {got}")]
    MatrixCount { got: usize, expected: usize },
    #[error("matrix for element {g} is {rows}x{cols}, expected {dim}x{dim}")]
    Shape {
        g: usize,
        rows: usize,
        cols: usize,
        dim: usize,
    },
    #[error("the identity does not act as the identity matrix")]
    BadIdentity,
    #[error("ρ(g)ρ(h) ≠ ρ(gh) at g={g}, h={h}")]
    NotAHomomorphism { g: usize, h: usize },
}

impl Representation {
    pub fn new(
        group: Arc<crate::group::Group>,
        dim: usize,
        matrices: Vec<RatMatrix>,
    ) -> Result<Representation, RepError> {
        let order = group.order();
        if matrices.len() != order {
            return Err(RepError::MatrixCount {
                got: matrices.len(),
                expected: order,
            });
        }
        for (g, m) in matrices.iter().enumerate() {
            if m.rows() != dim || m.cols() != dim {
                return Err(RepError::Shape {
                    g,
                    rows: m.rows(),
                    cols: m.cols(),
                    dim,
                });
            }
        }
        if dim > 0 && !matrices[0].is_identity() {
            return Err(RepError::BadIdentity);
        }
        for g in 0..order {
            for h in 0..order {
                if matrices[g].mul(&matrices[h]) != matrices[group.mul(g, h)] {
                    return Err(RepError::NotAHomomorphism { g, h });
                }
            }
        }
        Ok(Representation {
            group,
            dim,
            matrices,
        })
    }

    pub fn group(&self) -> &Arc<crate::group::Group> {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self, g: usize) -> &RatMatrix {
        &self.matrices[g]
    }

    pub fn trivial(group: Arc<crate::group::Group>, dim: usize) -> Representation {
        let order = group.order();
        Representation {
            group,
            dim,
            matrices: vec![RatMatrix::identity(dim); order],
        }
    }

    pub fn zero(group: Arc<crate::group::Group>) -> Representation {
        Self::trivial(group, 0)
    }

    pub fn direct_sum(&self, other: &Representation) -> Representation {
        assert!(self.group == other.group);
        let matrices = (0..self.group.order())
            .map(|g| self.matrices[g].direct_sum(&other.matrices[g]))
            .collect();
        Representation {
            group: self.group.clone(),
            dim: self.dim + other.dim,
            matrices,
        }
    }

    /// Conjugates by an invertible matrix; the result is isomorphic.
    pub fn conjugate(&self, t: &RatMatrix) -> Representation {
        let tinv = solve(t, &RatMatrix::identity(t.rows())).expect("conjugator is invertible");
        let matrices = self.matrices.iter().map(|m| t.mul(m).mul(&tinv)).collect();
        Representation {
            group: self.group.clone(),
            dim: self.dim,
            matrices,
        }
    }

    /// Basis of the subspace fixed by every element of the subgroup, as
    /// matrix columns (the deterministic kernel basis).
    pub fn fixed_subspace(&self, subgroup: &[usize]) -> RatMatrix {
        if subgroup.len() <= 1 {
            return RatMatrix::identity(self.dim);
        }
        let mut stacked = RatMatrix::zeros(0, self.dim);
        for &h in subgroup {
            if h == 0 {
                continue;
            }
            let diff = self.matrices[h].sub(&RatMatrix::identity(self.dim));
            stacked = stacked.transpose().hcat(&diff.transpose()).transpose();
        }
        kernel_basis(&stacked)
    }
}

/// The permutation representation kX.
pub fn linearize_gset(x: &GSet) -> Representation {
    let group = x.group().clone();
    let dim = x.size();
    let matrices = (0..group.order())
        .map(|g| {
            let mut m = RatMatrix::zeros(dim, dim);
            for p in 0..dim {
                m.set(x.act(g, p), p, BigRational::one());
            }
            m
        })
        .collect();
    Representation {
        group,
        dim,
        matrices,
    }
}

/// The contravariant linearization of a span: the matrix kY → kX of
/// y ↦ Σ_{v(s)=y} u(s), summed over components.
pub fn k_star_span(ctx: &ReprSystem, s: &SpanClass) -> RatMatrix {
    let mut m = RatMatrix::zeros(s.source().size(), s.target().size());
    for comp in s.components() {
        let (u, v) = ctx.component_maps(s.source(), s.target(), comp);
        for p in 0..u.source().size() {
            let (x, y) = (u.apply(p), v.apply(p));
            let cur = m.at(x, y).clone();
            m.set(x, y, cur + BigRational::one());
        }
    }
    m
}

/// The fixed-point Mackey functor of a representation: levels are the
/// H-fixed subspaces, spans act by the fibre-sum formula transported to the
/// chosen fixed bases.
pub fn fixed_point_functor(ctx: &Arc<ReprSystem>, rep: &Representation) -> MackeyFunctor {
    assert!(
        rep.group() == ctx.group(),
        "representation is over the wrong group"
    );
    let n = ctx.class_count();
    let inclusions: Vec<RatMatrix> = (0..n)
        .map(|i| rep.fixed_subspace(ctx.table().rep_elements(i)))
        .collect();
    let levels: Vec<usize> = inclusions.iter().map(|m| m.cols()).collect();
    let mut action = Vec::with_capacity(n);
    for i in 0..n {
        let ci = ctx.coset(i).clone();
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let cj = ctx.coset(j).clone();
            let basis_ij = ctx.rep_basis(i, j).clone();
            let mut mats = Vec::with_capacity(basis_ij.dimension());
            for b in &basis_ij.basis {
                // Ambient matrix on R: sum over apex cosets hitting the
                // base point of C_j on the right leg.
                let mut ambient = RatMatrix::zeros(rep.dim(), rep.dim());
                for &c in ctx.min_reps(b.apex_class) {
                    if cj.act(c, b.right) != 0 {
                        continue;
                    }
                    let q = ci.act(c, b.left);
                    let d = ctx.min_reps(i)[q];
                    ambient = ambient.add(rep.matrix(d));
                }
                let restricted = ambient.mul(&inclusions[i]);
                let m =
                    solve(&inclusions[j], &restricted).expect("image lands in the fixed subspace");
                mats.push(m);
            }
            row.push(mats);
        }
        action.push(row);
    }
    MackeyFunctor::new(ctx.clone(), levels, action).expect("shapes are consistent")
}

/// The span (σ, G/K, 1) for the canonical projection σ: G/K → G/H.
fn sigma_map(ctx: &ReprSystem, h: &[usize], k: &[usize]) -> Result<GMap, MackeyError> {
    let group = ctx.group();
    if !group.is_subgroup(h) {
        return Err(MackeyError::NotASubgroup(h.to_vec()));
    }
    if !group.is_subgroup(k) {
        return Err(MackeyError::NotASubgroup(k.to_vec()));
    }
    let hset: std::collections::BTreeSet<usize> = h.iter().copied().collect();
    if !k.iter().all(|x| hset.contains(x)) {
        return Err(MackeyError::NotContained {
            h: h.to_vec(),
            k: k.to_vec(),
        });
    }
    let gk = coset_gset(group, k).expect("subgroup");
    let gh = coset_gset(group, h).expect("subgroup");
    let h_cosets = group.left_cosets(h);
    let mut coset_of = vec![0usize; group.order()];
    for (i, c) in h_cosets.iter().enumerate() {
        for &x in c {
            coset_of[x] = i;
        }
    }
    let values = crate::gset::coset_min_reps(group, k)
        .iter()
        .map(|&g| coset_of[g])
        .collect();
    Ok(GMap::new(gk, gh, values).expect("σ is equivariant"))
}

/// Restriction r^H_K = M(σ^*): M(G/H) → M(G/K) for K ≤ H.
pub fn restriction(m: &MackeyFunctor, h: &[usize], k: &[usize]) -> Result<RatMatrix, MackeyError> {
    let sigma = sigma_map(m.ctx(), h, k)?;
    Ok(m.eval_span(&m.ctx().upper(&sigma)))
}

/// Transfer t^H_K = M(σ_*): M(G/K) → M(G/H) for K ≤ H.
pub fn transfer(m: &MackeyFunctor, h: &[usize], k: &[usize]) -> Result<RatMatrix, MackeyError> {
    let sigma = sigma_map(m.ctx(), h, k)?;
    Ok(m.eval_span(&m.ctx().lower(&sigma)))
}

/// One transfer∘restriction comparison.
#[derive(Debug, Clone)]
pub struct CohomPair {
    /// Class representative subgroup H.
    pub h: Vec<usize>,
    /// Subgroup K ≤ H.
    pub k: Vec<usize>,
    pub index: usize,
    pub ok: bool,
}

#[derive(Debug, Clone, Default)]
pub struct CohomReport {
    pub pairs: Vec<CohomPair>,
}

impl CohomReport {
    pub fn passed(&self) -> bool {
        self.pairs.iter().all(|p| p.ok)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CohomPair> {
        self.pairs.iter().filter(|p| !p.ok)
    }
}

/// Compares t∘r with [H:K]·id for every representative H and every
/// subgroup K ≤ H.
pub fn cohomological_check(m: &MackeyFunctor) -> CohomReport {
    let ctx = m.ctx();
    let table = ctx.table();
    let mut report = CohomReport::default();
    for &rep_idx in &table.class_reps {
        let h = table.subgroups[rep_idx].clone();
        let hset: std::collections::BTreeSet<usize> = h.iter().copied().collect();
        for k in &table.subgroups {
            if !k.iter().all(|x| hset.contains(x)) {
                continue;
            }
            let r = restriction(m, &h, k).expect("K ≤ H");
            let t = transfer(m, &h, k).expect("K ≤ H");
            let index = h.len() / k.len();
            let composite = t.mul(&r);
            let expected = RatMatrix::identity(composite.rows()).scale(&rat(index as i64));
            report.pairs.push(CohomPair {
                h: h.clone(),
                k: k.clone(),
                index,
                ok: composite == expected,
            });
        }
    }
    report
}

/// A morphism of Mackey functors: one matrix per level, natural against
/// every generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MackeyMorphism {
    pub components: Vec<RatMatrix>,
}

impl MackeyMorphism {
    pub fn identity(m: &MackeyFunctor) -> MackeyMorphism {
        MackeyMorphism {
            components: m.levels().iter().map(|&d| RatMatrix::identity(d)).collect(),
        }
    }

    /// Checks θ_j·M(S) = N(S)·θ_i for every generator.
    pub fn is_natural(&self, m: &MackeyFunctor, n: &MackeyFunctor) -> bool {
        let ctx = m.ctx();
        let classes = ctx.class_count();
        for i in 0..classes {
            for j in 0..classes {
                for b in 0..ctx.rep_basis(i, j).dimension() {
                    let lhs = self.components[j].mul(m.generator_matrix(i, j, b));
                    let rhs = n.generator_matrix(i, j, b).mul(&self.components[i]);
                    if lhs != rhs {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn then(&self, after: &MackeyMorphism) -> MackeyMorphism {
        MackeyMorphism {
            components: self
                .components
                .iter()
                .zip(after.components.iter())
                .map(|(a, b)| b.mul(a))
                .collect(),
        }
    }

    pub fn is_invertible(&self) -> bool {
        self.inverse().is_some()
    }

    pub fn inverse(&self) -> Option<MackeyMorphism> {
        let mut comps = Vec::with_capacity(self.components.len());
        for c in &self.components {
            if c.rows() != c.cols() {
                return None;
            }
            let inv = solve(c, &RatMatrix::identity(c.rows()))?;
            if c.mul(&inv) != RatMatrix::identity(c.rows()) {
                return None;
            }
            comps.push(inv);
        }
        Some(MackeyMorphism { components: comps })
    }

    /// The component at an arbitrary object, in the coordinates of the two
    /// evaluation books: the block-diagonal assembly of level components.
    pub fn component_at(&self, src_book: &EvalBook, tgt_book: &EvalBook) -> RatMatrix {
        assert_eq!(src_book.dec.classes(), tgt_book.dec.classes());
        let src_dim = src_book.dim;
        let tgt_dim = tgt_book.dim;
        let mut out = RatMatrix::zeros(tgt_dim, src_dim);
        for (oi, orbit) in src_book.dec.orbits.iter().enumerate() {
            out.add_block(
                tgt_book.offsets[oi],
                src_book.offsets[oi],
                &self.components[orbit.class],
            );
        }
        out
    }
}

/// Basis of the space of Mackey morphisms M → N: the joint kernel of all
/// naturality constraints over generators.
pub fn hom_space(m: &MackeyFunctor, n: &MackeyFunctor) -> Result<Vec<MackeyMorphism>, MackeyError> {
    if !Arc::ptr_eq(m.ctx(), n.ctx()) && m.ctx().group() != n.ctx().group() {
        return Err(MackeyError::GroupMismatch);
    }
    let ctx = m.ctx();
    let classes = ctx.class_count();
    // Unknowns: vec(θ_i) row-major, concatenated over classes.
    let mut offsets = Vec::with_capacity(classes);
    let mut total = 0usize;
    for i in 0..classes {
        offsets.push(total);
        total += n.level_dim(i) * m.level_dim(i);
    }
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for i in 0..classes {
        for j in 0..classes {
            for b in 0..ctx.rep_basis(i, j).dimension() {
                let a = m.generator_matrix(i, j, b);
                let bb = n.generator_matrix(i, j, b);
                // θ_j·A − B·θ_i = 0, entry (r, s): Σ_c θ_j[r,c]A[c,s] − Σ_c B[r,c]θ_i[c,s]
                for r in 0..n.level_dim(j) {
                    for s in 0..m.level_dim(i) {
                        let mut row = vec![BigRational::zero(); total];
                        for c in 0..m.level_dim(j) {
                            if !a.at(c, s).is_zero() {
                                row[offsets[j] + r * m.level_dim(j) + c] += a.at(c, s);
                            }
                        }
                        for c in 0..n.level_dim(i) {
                            if !bb.at(r, c).is_zero() {
                                row[offsets[i] + c * m.level_dim(i) + s] -= bb.at(r, c);
                            }
                        }
                        if row.iter().any(|x| !x.is_zero()) {
                            rows.push(row);
                        }
                    }
                }
            }
        }
    }
    let system = if rows.is_empty() {
        RatMatrix::zeros(0, total)
    } else {
        RatMatrix::from_fn(rows.len(), total, |r, c| rows[r][c].clone())
    };
    let kernel = kernel_basis(&system);
    let mut basis = Vec::with_capacity(kernel.cols());
    for col in 0..kernel.cols() {
        let mut components = Vec::with_capacity(classes);
        for i in 0..classes {
            let mut comp = RatMatrix::zeros(n.level_dim(i), m.level_dim(i));
            for r in 0..n.level_dim(i) {
                for c in 0..m.level_dim(i) {
                    comp.set(
                        r,
                        c,
                        kernel.at(offsets[i] + r * m.level_dim(i) + c, col).clone(),
                    );
                }
            }
            components.push(comp);
        }
        basis.push(MackeyMorphism { components });
    }
    Ok(basis)
}

/// The Dress construction M_Y(U) = M(U × Y).
pub fn dress(m: &MackeyFunctor, y: &GSet) -> Result<MackeyFunctor, MackeyError> {
    if y.group() != m.ctx().group() {
        return Err(MackeyError::GroupMismatch);
    }
    let ctx = m.ctx().clone();
    let n = ctx.class_count();
    let id_y = ctx.identity_class(y);
    let mut levels = Vec::with_capacity(n);
    let mut books = Vec::with_capacity(n);
    for i in 0..n {
        let prod = crate::gset::product(ctx.coset(i), y).expect("same group");
        let book = m.eval_book(&prod);
        levels.push(book.dim);
        books.push(book);
    }
    let mut action = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let basis_ij = ctx.rep_basis(i, j).clone();
            let mut mats = Vec::with_capacity(basis_ij.dimension());
            for b in &basis_ij.basis {
                let s_class = ctx.component_class(ctx.coset(i), ctx.coset(j), *b);
                let dressed = ctx.tensor(&s_class, &id_y).expect("same group");
                mats.push(m.eval_span_with(&books[i], &books[j], &dressed));
            }
            row.push(mats);
        }
        action.push(row);
    }
    MackeyFunctor::new(ctx, levels, action)
}

/// Equivariant linear maps R1 → R2, as a kernel basis of the intertwining
/// constraints (the independent oracle for the fully-faithfulness check).
pub fn equivariant_hom_basis(r1: &Representation, r2: &Representation) -> RatMatrix {
    assert!(r1.group() == r2.group());
    let (d1, d2) = (r1.dim(), r2.dim());
    let unknowns = d1 * d2;
    let mut rows = Vec::new();
    for g in 0..r1.group().order() {
        // ρ2(g)·X − X·ρ1(g) = 0; X is d2×d1, entry (r, c) at index r·d1+c.
        for r in 0..d2 {
            for c in 0..d1 {
                let mut row = vec![BigRational::zero(); unknowns];
                for k in 0..d2 {
                    if !r2.matrix(g).at(r, k).is_zero() {
                        row[k * d1 + c] += r2.matrix(g).at(r, k);
                    }
                }
                for k in 0..d1 {
                    if !r1.matrix(g).at(k, c).is_zero() {
                        row[r * d1 + k] -= r1.matrix(g).at(k, c);
                    }
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let system = if rows.is_empty() {
        RatMatrix::zeros(0, unknowns)
    } else {
        RatMatrix::from_fn(rows.len(), unknowns, |r, c| rows[r][c].clone())
    };
    kernel_basis(&system)
}

/// The coend ∫^C M(C) ⊗ kC as a representation of G, computed by
/// quotienting the block direct sum by the generator relations.
pub fn colim_k(m: &MackeyFunctor) -> Representation {
    let ctx = m.ctx();
    let classes = ctx.class_count();
    let sizes: Vec<usize> = (0..classes).map(|i| ctx.coset(i).size()).collect();
    let mut offsets = Vec::with_capacity(classes);
    let mut total = 0usize;
    for i in 0..classes {
        offsets.push(total);
        total += m.level_dim(i) * sizes[i];
    }
    // Relations: (M(S)m) ⊗ ξ − m ⊗ k_*(S)ξ for S: C_i → C_j.
    let mut cols: Vec<Vec<BigRational>> = Vec::new();
    for i in 0..classes {
        for j in 0..classes {
            let basis_ij = ctx.rep_basis(i, j).clone();
            for (b, comp) in basis_ij.basis.iter().enumerate() {
                let s_class = ctx.component_class(ctx.coset(i), ctx.coset(j), *comp);
                let kstar = k_star_span(ctx, &s_class);
                let ms = m.generator_matrix(i, j, b);
                for a in 0..m.level_dim(i) {
                    for y in 0..sizes[j] {
                        let mut col = vec![BigRational::zero(); total];
                        for r in 0..m.level_dim(j) {
                            if !ms.at(r, a).is_zero() {
                                col[offsets[j] + r * sizes[j] + y] += ms.at(r, a);
                            }
                        }
                        for x in 0..sizes[i] {
                            if !kstar.at(x, y).is_zero() {
                                col[offsets[i] + a * sizes[i] + x] -= kstar.at(x, y);
                            }
                        }
                        if col.iter().any(|v| !v.is_zero()) {
                            cols.push(col);
                        }
                    }
                }
            }
        }
    }
    let relations = RatMatrix::from_columns(total, &cols);
    let q = quotient_by(&relations);
    let group = ctx.group().clone();
    let ambient_action = |g: usize| {
        let mut mat = RatMatrix::zeros(total, total);
        for i in 0..classes {
            let ci = ctx.coset(i);
            for a in 0..m.level_dim(i) {
                for x in 0..sizes[i] {
                    mat.set(
                        offsets[i] + a * sizes[i] + ci.act(g, x),
                        offsets[i] + a * sizes[i] + x,
                        BigRational::one(),
                    );
                }
            }
        }
        mat
    };
    let matrices: Vec<RatMatrix> = (0..group.order())
        .map(|g| {
            let amb = ambient_action(g);
            // The permutation action must preserve the relation subspace.
            assert!(
                q.projection.mul(&amb.mul(&relations)).is_zero(),
                "coend relations are not G-stable"
            );
            q.projection.mul(&amb).mul(&q.section)
        })
        .collect();
    Representation::new(group, q.quotient_dim(), matrices)
        .expect("quotient of a permutation action is a representation")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::samples;
    use crate::gset::{coproduct, product};
    use crate::span::Span;

    fn ctx_of(g: crate::group::Group) -> Arc<ReprSystem> {
        ReprSystem::with_default_bound(Arc::new(g)).unwrap()
    }

    #[test]
    fn burnside_c2_levels_and_validation() {
        let ctx = ctx_of(samples::cyclic(2));
        let j = burnside_functor(&ctx);
        assert_eq!(j.levels(), &[2, 1]);
        assert!(j.validate().passed());
    }

    #[test]
    fn burnside_c1_is_one_dimensional() {
        let ctx = ctx_of(samples::cyclic(1));
        let j = burnside_functor(&ctx);
        assert_eq!(j.levels(), &[1]);
        assert!(j.validate().passed());
    }

    #[test]
    fn burnside_s3_levels() {
        let ctx = ctx_of(samples::symmetric3());
        let j = burnside_functor(&ctx);
        assert_eq!(j.levels(), &[4, 2, 2, 1]);
        assert!(j.validate().passed());
    }

    #[test]
    fn corrupted_functor_fails_validation() {
        let ctx = ctx_of(samples::cyclic(2));
        let j = burnside_functor(&ctx);
        let mut action = j.action.clone();
        // Corrupt one transfer-like generator matrix.
        let target = action[1][0]
            .iter_mut()
            .find(|m| !m.is_zero())
            .expect("nonzero generator");
        *target = target.scale(&rat(3));
        let bad = MackeyFunctor::new(ctx, j.levels.clone(), action).unwrap();
        let report = bad.validate();
        assert!(!report.passed());
        assert!(matches!(
            report.failures[0],
            ValidationFailure::Composite { .. } | ValidationFailure::Identity { .. }
        ));
    }

    #[test]
    fn eval_object_examples() {
        let ctx = ctx_of(samples::cyclic(2));
        let j = burnside_functor(&ctx);
        assert_eq!(j.eval_dim(ctx.point()), 2);
        assert_eq!(j.eval_dim(&GSet::empty(ctx.group().clone())), 0);
        let r = coset_gset(ctx.group(), &[0]).unwrap();
        let (sum, _, _) = coproduct(ctx.point(), &r).unwrap();
        assert_eq!(j.eval_dim(&sum), j.eval_dim(ctx.point()) + j.eval_dim(&r));
    }

    #[test]
    fn eval_span_identity_and_additivity() {
        let ctx = ctx_of(samples::cyclic(2));
        let j = burnside_functor(&ctx);
        let r = coset_gset(ctx.group(), &[0]).unwrap();
        let id = ctx.identity_class(&r);
        assert!(j.eval_span(&id).is_identity());

        let pt = ctx.point().clone();
        let to_pt = GMap::new(r.clone(), pt.clone(), vec![0, 0]).unwrap();
        let loop_span = ctx.normal_form(&Span::new(to_pt.clone(), to_pt).unwrap());
        let doubled = ctx.add(&loop_span, &loop_span).unwrap();
        assert_eq!(
            j.eval_span(&doubled),
            j.eval_span(&loop_span).add(&j.eval_span(&loop_span))
        );
        // Multiplication by [G/e] on the Burnside module basis {[pt], [G/e]}.
        assert_eq!(
            j.eval_span(&loop_span),
            RatMatrix::from_int_rows(&[vec![0, 0], vec![1, 2]])
        );
    }

    #[test]
    fn fixed_point_functor_trivial_rep() {
        let ctx = ctx_of(samples::cyclic(2));
        let r = Representation::trivial(ctx.group().clone(), 1);
        let m = fixed_point_functor(&ctx, &r);
        assert_eq!(m.levels(), &[1, 1]);
        assert!(m.validate().passed());
        let h: Vec<usize> = vec![0, 1];
        let k = vec![0];
        let t = transfer(&m, &h, &k).unwrap();
        let rr = restriction(&m, &h, &k).unwrap();
        assert_eq!(t.mul(&rr), RatMatrix::identity(1).scale(&rat(2)));
    }

    #[test]
    fn fixed_point_functor_regular_rep_levels() {
        let ctx = ctx_of(samples::cyclic(2));
        let reg = linearize_gset(&coset_gset(ctx.group(), &[0]).unwrap());
        let m = fixed_point_functor(&ctx, &reg);
        assert_eq!(m.levels(), &[1, 2]);
        assert!(m.validate().passed());

        let zero = Representation::zero(ctx.group().clone());
        let mz = fixed_point_functor(&ctx, &zero);
        assert_eq!(mz.levels(), &[0, 0]);
    }

    #[test]
    fn fixed_point_functor_s3_regular_validates() {
        let ctx = ctx_of(samples::symmetric3());
        let reg = linearize_gset(&coset_gset(ctx.group(), &[0]).unwrap());
        let m = fixed_point_functor(&ctx, &reg);
        assert!(m.validate().passed());
        assert!(cohomological_check(&m).passed());
    }

    #[test]
    fn burnside_is_not_cohomological() {
        let ctx = ctx_of(samples::cyclic(2));
        let j = burnside_functor(&ctx);
        let report = cohomological_check(&j);
        assert!(!report.passed());
        let failing: Vec<_> = report.failures().collect();
        assert_eq!(failing.len(), 1);
        assert_eq!(failing[0].h, vec![0, 1]);
        assert_eq!(failing[0].k, vec![0]);
    }

    #[test]
    fn trivial_group_always_cohomological() {
        let ctx = ctx_of(samples::cyclic(1));
        let j = burnside_functor(&ctx);
        assert!(cohomological_check(&j).passed());
    }

    #[test]
    fn restriction_transfer_identity_when_equal() {
        let ctx = ctx_of(samples::cyclic(2));
        let j = burnside_functor(&ctx);
        let h = vec![0, 1];
        assert!(restriction(&j, &h, &h).unwrap().is_identity());
        assert!(transfer(&j, &h, &h).unwrap().is_identity());
    }

    #[test]
    fn hom_space_contains_identity() {
        let ctx = ctx_of(samples::cyclic(2));
        let j = burnside_functor(&ctx);
        let basis = hom_space(&j, &j).unwrap();
        assert!(!basis.is_empty());
        for theta in &basis {
            assert!(theta.is_natural(&j, &j));
        }
        // Identity lies in the span: check by solving.
        let id = MackeyMorphism::identity(&j);
        assert!(basis.iter().any(|b| !b.components[0].is_zero()));
        assert!(id.is_natural(&j, &j));
    }

    #[test]
    fn hom_space_to_zero_is_empty() {
        let ctx = ctx_of(samples::cyclic(2));
        let j = burnside_functor(&ctx);
        let z = MackeyFunctor::zero(ctx);
        assert!(hom_space(&j, &z).unwrap().is_empty());
    }

    #[test]
    fn mackey_square_on_random_cospans() {
        let ctx = ctx_of(samples::symmetric3());
        let j = burnside_functor(&ctx);
        let c2 = ctx.group().generated_subgroup(&[1]);
        let u = coset_gset(ctx.group(), &c2).unwrap();
        let w = ctx.point().clone();
        let v = coset_gset(ctx.group(), &ctx.group().generated_subgroup(&[3])).unwrap();
        let r = GMap::new(u.clone(), w.clone(), vec![0; u.size()]).unwrap();
        let s = GMap::new(v.clone(), w.clone(), vec![0; v.size()]).unwrap();
        let (_, p, q) = crate::gset::pullback(&r, &s).unwrap();
        let lhs = ctx.compose(&ctx.lower(&r), &ctx.upper(&s)).unwrap();
        let rhs = ctx.compose(&ctx.upper(&p), &ctx.lower(&q)).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(j.eval_span(&lhs), j.eval_span(&rhs));
    }

    #[test]
    fn dress_by_point_is_identity_like() {
        let ctx = ctx_of(samples::cyclic(2));
        let j = burnside_functor(&ctx);
        let d = dress(&j, ctx.point()).unwrap();
        assert_eq!(d.levels(), j.levels());
        assert!(d.validate().passed());
    }

    #[test]
    fn dress_by_empty_is_zero() {
        let ctx = ctx_of(samples::cyclic(2));
        let j = burnside_functor(&ctx);
        let d = dress(&j, &GSet::empty(ctx.group().clone())).unwrap();
        assert!(d.is_zero_functor());
    }

    #[test]
    fn dress_burnside_by_free_orbit() {
        let ctx = ctx_of(samples::cyclic(2));
        let j = burnside_functor(&ctx);
        let free = coset_gset(ctx.group(), &[0]).unwrap();
        let d = dress(&j, &free).unwrap();
        assert_eq!(d.levels(), &[1, 2]);
        assert!(d.validate().passed());
    }

    #[test]
    fn dress_composes_as_product() {
        let ctx = ctx_of(samples::cyclic(2));
        let j = burnside_functor(&ctx);
        let free = coset_gset(ctx.group(), &[0]).unwrap();
        let d2 = dress(&dress(&j, &free).unwrap(), &free).unwrap();
        let d12 = dress(&j, &product(&free, &free).unwrap()).unwrap();
        assert_eq!(d2.levels(), d12.levels());
        let isos = hom_space(&d2, &d12).unwrap();
        assert!(find_invertible(&isos).is_some());
    }

    #[test]
    fn k_star_examples() {
        let ctx = ctx_of(samples::cyclic(2));
        let r = coset_gset(ctx.group(), &[0]).unwrap();
        let id = ctx.identity_class(&r);
        assert!(k_star_span(&ctx, &id).is_identity());
        let pt = ctx.point().clone();
        let to_pt = GMap::new(r.clone(), pt.clone(), vec![0, 0]).unwrap();
        let fold = ctx.lower(&to_pt);
        // Sum over the fibre of the fold map.
        assert_eq!(
            k_star_span(&ctx, &fold),
            RatMatrix::from_int_rows(&[vec![1], vec![1]])
        );
    }

    #[test]
    fn colim_of_trivial_group_functor() {
        let ctx = ctx_of(samples::cyclic(1));
        let j = burnside_functor(&ctx);
        let rep = colim_k(&j);
        assert_eq!(rep.dim(), 1);
    }

    #[test]
    fn colim_adjunction_dimensions() {
        let ctx = ctx_of(samples::cyclic(2));
        let triv = Representation::trivial(ctx.group().clone(), 1);
        let m = fixed_point_functor(&ctx, &triv);
        let colim = colim_k(&m);
        for test_rep in [
            Representation::trivial(ctx.group().clone(), 1),
            linearize_gset(&coset_gset(ctx.group(), &[0]).unwrap()),
        ] {
            let lhs = equivariant_hom_basis(&colim, &test_rep).cols();
            let rhs = hom_space(&m, &fixed_point_functor(&ctx, &test_rep))
                .unwrap()
                .len();
            assert_eq!(lhs, rhs);
        }
    }

    /// Searches a hom-space basis for an invertible combination.
    pub(crate) fn find_invertible(basis: &[MackeyMorphism]) -> Option<MackeyMorphism> {
        crate::morphism_search::find_invertible(basis)
    }

    #[test]
    fn values_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<crate::group::Group>();
        assert_send_sync::<GSet>();
        assert_send_sync::<ReprSystem>();
        assert_send_sync::<SpanClass>();
        assert_send_sync::<MackeyFunctor>();
        assert_send_sync::<crate::green::GreenFunctor>();
        assert_send_sync::<Representation>();
    }
}
