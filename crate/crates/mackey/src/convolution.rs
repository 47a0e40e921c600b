//! Day convolution of Mackey functors via the reduced coend over the
//! representative transitive G-sets, together with the canonical unit,
//! symmetry and associativity isomorphisms, the internal hom, and the
//! star-duality functor.
//!
//! Coends never materialize the full span category: density of the
//! representatives keeps every ambient space finite and small. Induced
//! maps on quotients are computed by lifting along the stored section;
//! preservation of the relation subspace is always asserted, never assumed.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;

use crate::gset::{product, GMap};
use crate::linalg::{quotient_by, rat, solve, QuotientSpace, RatMatrix};
use crate::mackey::{dress, hom_space, MackeyError, MackeyFunctor, MackeyMorphism};
use crate::reps::ReprSystem;
use crate::span::{LinearizedHom, SpanClass};

/// One (i, j) block of a coend ambient space.
#[derive(Debug, Clone)]
pub struct CoendBlock {
    pub i: usize,
    pub j: usize,
    pub phi_basis: LinearizedHom,
    pub offset: usize,
    m_dim: usize,
    n_dim: usize,
}

impl CoendBlock {
    pub fn dim(&self) -> usize {
        self.phi_basis.dimension() * self.m_dim * self.n_dim
    }

    /// Ambient index of the generator (φ, m, n).
    pub fn index(&self, phi: usize, m: usize, n: usize) -> usize {
        self.offset + (phi * self.m_dim + m) * self.n_dim + n
    }
}

/// The reduced coend computing (M*N) at one representative: the block
/// direct sum ⊕_{i,j} hom(C_i×C_j, C_k) ⊗ M(C_i) ⊗ N(C_j) quotiented by
/// the dinaturality relations in both variables.
#[derive(Debug, Clone)]
pub struct CoendSpace {
    pub target_class: usize,
    pub blocks: Vec<CoendBlock>,
    pub ambient_dim: usize,
    pub relations: RatMatrix,
    pub quotient: QuotientSpace,
}

impl CoendSpace {
    pub fn block(&self, i: usize, j: usize) -> &CoendBlock {
        self.blocks
            .iter()
            .find(|b| b.i == i && b.j == j)
            .expect("block exists")
    }
}

/// A convolution M*N: the resulting Mackey functor plus the per-level
/// coend presentations (kept for lifting elements and building the
/// canonical isomorphisms).
#[derive(Debug, Clone)]
pub struct Convolution {
    pub functor: MackeyFunctor,
    pub coends: Vec<CoendSpace>,
}

fn coend_space(
    ctx: &Arc<ReprSystem>,
    m: &MackeyFunctor,
    n: &MackeyFunctor,
    k: usize,
) -> CoendSpace {
    let classes = ctx.class_count();
    let mut blocks = Vec::new();
    let mut offset = 0usize;
    for i in 0..classes {
        for j in 0..classes {
            let phi_basis = ctx.hom_basis(ctx.rep_product(i, j), ctx.coset(k));
            let block = CoendBlock {
                i,
                j,
                phi_basis,
                offset,
                m_dim: m.level_dim(i),
                n_dim: n.level_dim(j),
            };
            offset += block.dim();
            blocks.push(block);
        }
    }
    let ambient_dim = offset;

    let mut cols: Vec<Vec<BigRational>> = Vec::new();
    // Dinaturality in the first variable: for S: C_i → C_i',
    // (φ∘(S×1), m, n) ~ (φ, M(S)m, n).
    for i in 0..classes {
        for ip in 0..classes {
            let gens = ctx.rep_basis(i, ip).clone();
            for (b, comp) in gens.basis.iter().enumerate() {
                let s_class = ctx.component_class(ctx.coset(i), ctx.coset(ip), *comp);
                let ms = m.generator_matrix(i, ip, b);
                for j in 0..classes {
                    let src_block = blocks.iter().find(|bl| bl.i == i && bl.j == j).unwrap();
                    let dst_block = blocks.iter().find(|bl| bl.i == ip && bl.j == j).unwrap();
                    let s_tensor_id = ctx
                        .tensor(&s_class, &ctx.identity_class(ctx.coset(j)))
                        .unwrap();
                    for (phi_p, phi_comp) in dst_block.phi_basis.basis.iter().enumerate() {
                        let phi_class =
                            ctx.component_class(ctx.rep_product(ip, j), ctx.coset(k), *phi_comp);
                        let pre = ctx.compose(&s_tensor_id, &phi_class).unwrap();
                        let coeffs = ctx.express(&pre, &src_block.phi_basis);
                        for a in 0..m.level_dim(i) {
                            for c in 0..n.level_dim(j) {
                                let mut col = vec![BigRational::zero(); ambient_dim];
                                for (phi, &cf) in coeffs.iter().enumerate() {
                                    if cf > 0 {
                                        col[src_block.index(phi, a, c)] += rat(cf as i64);
                                    }
                                }
                                for r in 0..m.level_dim(ip) {
                                    if !ms.at(r, a).is_zero() {
                                        col[dst_block.index(phi_p, r, c)] -= ms.at(r, a);
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
        }
    }
    // Dinaturality in the second variable: for T: C_j → C_j',
    // (φ∘(1×T), m, n) ~ (φ, m, N(T)n).
    for j in 0..classes {
        for jp in 0..classes {
            let gens = ctx.rep_basis(j, jp).clone();
            for (b, comp) in gens.basis.iter().enumerate() {
                let t_class = ctx.component_class(ctx.coset(j), ctx.coset(jp), *comp);
                let nt = n.generator_matrix(j, jp, b);
                for i in 0..classes {
                    let src_block = blocks.iter().find(|bl| bl.i == i && bl.j == j).unwrap();
                    let dst_block = blocks.iter().find(|bl| bl.i == i && bl.j == jp).unwrap();
                    let id_tensor_t = ctx
                        .tensor(&ctx.identity_class(ctx.coset(i)), &t_class)
                        .unwrap();
                    for (phi_p, phi_comp) in dst_block.phi_basis.basis.iter().enumerate() {
                        let phi_class =
                            ctx.component_class(ctx.rep_product(i, jp), ctx.coset(k), *phi_comp);
                        let pre = ctx.compose(&id_tensor_t, &phi_class).unwrap();
                        let coeffs = ctx.express(&pre, &src_block.phi_basis);
                        for a in 0..m.level_dim(i) {
                            for c in 0..n.level_dim(j) {
                                let mut col = vec![BigRational::zero(); ambient_dim];
                                for (phi, &cf) in coeffs.iter().enumerate() {
                                    if cf > 0 {
                                        col[src_block.index(phi, a, c)] += rat(cf as i64);
                                    }
                                }
                                for r in 0..n.level_dim(jp) {
                                    if !nt.at(r, c).is_zero() {
                                        col[dst_block.index(phi_p, a, r)] -= nt.at(r, c);
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
        }
    }
    let relations = RatMatrix::from_columns(ambient_dim, &cols);
    let quotient = quotient_by(&relations);
    CoendSpace {
        target_class: k,
        blocks,
        ambient_dim,
        relations,
        quotient,
    }
}

/// The ambient matrix of post-composition with a generator R: C_k → C_k'.
fn postcompose_ambient(
    ctx: &Arc<ReprSystem>,
    src: &CoendSpace,
    dst: &CoendSpace,
    r_class: &SpanClass,
) -> RatMatrix {
    let mut amb = RatMatrix::zeros(dst.ambient_dim, src.ambient_dim);
    for sb in &src.blocks {
        let db = dst.block(sb.i, sb.j);
        for (phi, phi_comp) in sb.phi_basis.basis.iter().enumerate() {
            let phi_class = ctx.component_class(
                ctx.rep_product(sb.i, sb.j),
                ctx.coset(src.target_class),
                *phi_comp,
            );
            let post = ctx.compose(&phi_class, r_class).unwrap();
            let coeffs = ctx.express(&post, &db.phi_basis);
            for (phi_p, &cf) in coeffs.iter().enumerate() {
                if cf == 0 {
                    continue;
                }
                for a in 0..sb.m_dim {
                    for c in 0..sb.n_dim {
                        let cur = amb.at(db.index(phi_p, a, c), sb.index(phi, a, c)).clone();
                        amb.set(
                            db.index(phi_p, a, c),
                            sb.index(phi, a, c),
                            cur + rat(cf as i64),
                        );
                    }
                }
            }
        }
    }
    amb
}

/// Day convolution M*N over the representative subcategory.
pub fn convolve(m: &MackeyFunctor, n: &MackeyFunctor) -> Result<Convolution, MackeyError> {
    if m.ctx().group() != n.ctx().group() {
        return Err(MackeyError::GroupMismatch);
    }
    let ctx = m.ctx().clone();
    let classes = ctx.class_count();
    let coends: Vec<CoendSpace> = (0..classes).map(|k| coend_space(&ctx, m, n, k)).collect();
    let levels: Vec<usize> = coends.iter().map(|c| c.quotient.quotient_dim()).collect();
    let mut action = Vec::with_capacity(classes);
    for k in 0..classes {
        let mut row = Vec::with_capacity(classes);
        for kp in 0..classes {
            let gens = ctx.rep_basis(k, kp).clone();
            let mut mats = Vec::with_capacity(gens.dimension());
            for comp in &gens.basis {
                let r_class = ctx.component_class(ctx.coset(k), ctx.coset(kp), *comp);
                let amb = postcompose_ambient(&ctx, &coends[k], &coends[kp], &r_class);
                // Induced maps must preserve the relation subspace.
                let pushed = coends[kp]
                    .quotient
                    .projection
                    .mul(&amb.mul(&coends[k].relations));
                assert!(
                    pushed.is_zero(),
                    "coend relations not preserved by a generator"
                );
                mats.push(
                    coends[kp]
                        .quotient
                        .projection
                        .mul(&amb)
                        .mul(&coends[k].quotient.section),
                );
            }
            row.push(mats);
        }
        action.push(row);
    }
    let functor = MackeyFunctor::new(ctx, levels, action)?;
    Ok(Convolution { functor, coends })
}

/// The canonical isomorphism J*M → M, certified invertible and natural.
pub fn unit_iso(j: &MackeyFunctor, m: &MackeyFunctor, conv: &Convolution) -> MackeyMorphism {
    let ctx = m.ctx().clone();
    let classes = ctx.class_count();
    let pt = ctx.point().clone();
    let mut components = Vec::with_capacity(classes);
    for k in 0..classes {
        let coend = &conv.coends[k];
        let mut amb_map = RatMatrix::zeros(m.level_dim(k), coend.ambient_dim);
        for block in &coend.blocks {
            let (i, jj) = (block.i, block.j);
            debug_assert_eq!(block.m_dim, j.level_dim(i));
            let alphas = ctx.rep_basis(0, i).clone();
            for (ai, alpha) in alphas.basis.iter().enumerate() {
                let alpha_class = ctx.component_class(&pt, ctx.coset(i), *alpha);
                // (α ⊗ 1): 1×C_j → C_i×C_j, with 1×C_j = C_j on the nose.
                let alpha_tensor = ctx
                    .tensor(&alpha_class, &ctx.identity_class(ctx.coset(jj)))
                    .expect("same group");
                for (p, phi_comp) in block.phi_basis.basis.iter().enumerate() {
                    let phi_class =
                        ctx.component_class(ctx.rep_product(i, jj), ctx.coset(k), *phi_comp);
                    let chi = ctx
                        .compose(&alpha_tensor, &phi_class)
                        .expect("endpoints match");
                    let mat = m.eval_span(&chi);
                    for b in 0..m.level_dim(jj) {
                        for r in 0..m.level_dim(k) {
                            if !mat.at(r, b).is_zero() {
                                let cur = amb_map.at(r, block.index(p, ai, b)).clone();
                                amb_map.set(r, block.index(p, ai, b), cur + mat.at(r, b));
                            }
                        }
                    }
                }
            }
        }
        assert!(
            amb_map.mul(&coend.relations).is_zero(),
            "unit map does not kill the coend relations"
        );
        components.push(amb_map.mul(&coend.quotient.section));
    }
    let theta = MackeyMorphism { components };
    assert!(
        theta.is_natural(&conv.functor, m),
        "unit map is not natural"
    );
    assert!(theta.is_invertible(), "unit map is not invertible");
    theta
}

/// The canonical symmetry M*N → N*M, certified invertible and natural.
pub fn symmetry_iso(
    m: &MackeyFunctor,
    n: &MackeyFunctor,
    conv_mn: &Convolution,
    conv_nm: &Convolution,
) -> MackeyMorphism {
    debug_assert!(m.ctx().group() == n.ctx().group());
    let ctx = m.ctx().clone();
    let classes = ctx.class_count();
    let mut components = Vec::with_capacity(classes);
    for k in 0..classes {
        let src = &conv_mn.coends[k];
        let dst = &conv_nm.coends[k];
        let mut amb = RatMatrix::zeros(dst.ambient_dim, src.ambient_dim);
        for sb in &src.blocks {
            let (i, j) = (sb.i, sb.j);
            let db = dst.block(j, i);
            // swap: C_j×C_i → C_i×C_j.
            let cj = ctx.coset(j).clone();
            let ci = ctx.coset(i).clone();
            let swap_values: Vec<usize> = (0..cj.size() * ci.size())
                .map(|p| {
                    let (b, a) = (p / ci.size(), p % ci.size());
                    a * cj.size() + b
                })
                .collect();
            let swap = GMap::new(
                product(&cj, &ci).unwrap(),
                product(&ci, &cj).unwrap(),
                swap_values,
            )
            .expect("swap is equivariant");
            let swap_class = ctx.lower(&swap);
            for (p, phi_comp) in sb.phi_basis.basis.iter().enumerate() {
                let phi_class = ctx.component_class(ctx.rep_product(i, j), ctx.coset(k), *phi_comp);
                let swapped = ctx
                    .compose(&swap_class, &phi_class)
                    .expect("endpoints match");
                let coeffs = ctx.express(&swapped, &db.phi_basis);
                for (pp, &cf) in coeffs.iter().enumerate() {
                    if cf == 0 {
                        continue;
                    }
                    for a in 0..sb.m_dim {
                        for b in 0..sb.n_dim {
                            let cur = amb.at(db.index(pp, b, a), sb.index(p, a, b)).clone();
                            amb.set(db.index(pp, b, a), sb.index(p, a, b), cur + rat(cf as i64));
                        }
                    }
                }
            }
        }
        let pushed = dst.quotient.projection.mul(&amb.mul(&src.relations));
        assert!(
            pushed.is_zero(),
            "symmetry does not preserve the coend relations"
        );
        components.push(dst.quotient.projection.mul(&amb).mul(&src.quotient.section));
    }
    let theta = MackeyMorphism { components };
    assert!(
        theta.is_natural(&conv_mn.functor, &conv_nm.functor),
        "symmetry is not natural"
    );
    assert!(theta.is_invertible(), "symmetry is not invertible");
    theta
}

/// The internal hom functor Hom(M, N) with its concrete level bases.
#[derive(Debug, Clone)]
pub struct InternalHom {
    pub functor: MackeyFunctor,
    /// Basis of Mky(M(−×C_i), N) for each class i.
    pub level_bases: Vec<Vec<MackeyMorphism>>,
    /// The dressed functors M(−×C_i).
    pub dressed: Vec<MackeyFunctor>,
}

fn vec_of_morphism(theta: &MackeyMorphism) -> Vec<BigRational> {
    let mut v = Vec::new();
    for c in &theta.components {
        for r in 0..c.rows() {
            for s in 0..c.cols() {
                v.push(c.at(r, s).clone());
            }
        }
    }
    v
}

/// Internal hom: level at C_i is Mky(dress(M, C_i), N); a generator
/// S: C_i → C_j acts by precomposition with M(1 × Sᵗ) in the dressed slot.
pub fn internal_hom(m: &MackeyFunctor, n: &MackeyFunctor) -> Result<InternalHom, MackeyError> {
    if m.ctx().group() != n.ctx().group() {
        return Err(MackeyError::GroupMismatch);
    }
    let ctx = m.ctx().clone();
    let classes = ctx.class_count();
    let mut dressed = Vec::with_capacity(classes);
    let mut level_bases = Vec::with_capacity(classes);
    for i in 0..classes {
        let d = dress(m, ctx.coset(i))?;
        let basis = hom_space(&d, n)?;
        dressed.push(d);
        level_bases.push(basis);
    }
    let levels: Vec<usize> = level_bases.iter().map(|b| b.len()).collect();

    let mut action = Vec::with_capacity(classes);
    for i in 0..classes {
        let mut row = Vec::with_capacity(classes);
        for j in 0..classes {
            let gens = ctx.rep_basis(i, j).clone();
            let mut mats = Vec::with_capacity(gens.dimension());
            for comp in &gens.basis {
                let s_class = ctx.component_class(ctx.coset(i), ctx.coset(j), *comp);
                let s_transpose = ctx.transpose_class(&s_class);
                // Per level u: M(C_u×C_j) → M(C_u×C_i).
                let mut precompose = Vec::with_capacity(classes);
                for u in 0..classes {
                    let chi = ctx
                        .tensor(&ctx.identity_class(ctx.coset(u)), &s_transpose)
                        .expect("same group");
                    precompose.push(m.eval_span(&chi));
                }
                // Express each transported basis morphism in the target basis.
                let mut mat = RatMatrix::zeros(levels[j], levels[i]);
                if levels[j] > 0 {
                    let target_cols: Vec<Vec<BigRational>> =
                        level_bases[j].iter().map(vec_of_morphism).collect();
                    let vec_len = target_cols.first().map_or(0, |v| v.len());
                    let basis_mat = RatMatrix::from_columns(vec_len, &target_cols);
                    for (col, theta) in level_bases[i].iter().enumerate() {
                        let moved = MackeyMorphism {
                            components: theta
                                .components
                                .iter()
                                .zip(precompose.iter())
                                .map(|(t, p)| t.mul(p))
                                .collect(),
                        };
                        let v = vec_of_morphism(&moved);
                        let rhs = RatMatrix::from_columns(v.len(), &[v]);
                        let sol = solve(&basis_mat, &rhs)
                            .expect("transported morphism lies in the hom space");
                        for r in 0..levels[j] {
                            mat.set(r, col, sol.at(r, 0).clone());
                        }
                    }
                } else {
                    debug_assert!(
                        levels[i] == 0 || {
                            // Nothing to express into; transported morphisms must vanish.
                            level_bases[i].iter().all(|theta| {
                                theta
                                    .components
                                    .iter()
                                    .zip(precompose.iter())
                                    .all(|(t, p)| t.mul(p).is_zero())
                            })
                        }
                    );
                }
                mats.push(mat);
            }
            row.push(mats);
        }
        action.push(row);
    }
    let functor = MackeyFunctor::new(ctx, levels, action)?;
    Ok(InternalHom {
        functor,
        level_bases,
        dressed,
    })
}

/// Star duality S(M)(X) = M(X*)^*: levels unchanged, a generator S acts by
/// the transpose of the action of the transposed span.
pub fn star_dual(m: &MackeyFunctor) -> MackeyFunctor {
    let ctx = m.ctx().clone();
    let classes = ctx.class_count();
    let mut action = Vec::with_capacity(classes);
    for i in 0..classes {
        let mut row = Vec::with_capacity(classes);
        for j in 0..classes {
            let gens = ctx.rep_basis(i, j).clone();
            let mut mats = Vec::with_capacity(gens.dimension());
            for comp in &gens.basis {
                let s_class = ctx.component_class(ctx.coset(i), ctx.coset(j), *comp);
                let st = ctx.transpose_class(&s_class);
                mats.push(m.eval_span(&st).transpose());
            }
            row.push(mats);
        }
        action.push(row);
    }
    MackeyFunctor::new(ctx, m.levels().to_vec(), action).expect("shapes preserved")
}

/// The two promonoidal pairing dimensions of the star-autonomy theorem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StarPairingReport {
    pub dim_m_n_sl: usize,
    pub dim_n_l_sm: usize,
}

impl StarPairingReport {
    pub fn passed(&self) -> bool {
        self.dim_m_n_sl == self.dim_n_l_sm
    }
}

/// Computes dim Mky(M*N, S(L)) and dim Mky(N*L, S(M)).
pub fn star_pairing_check(
    m: &MackeyFunctor,
    n: &MackeyFunctor,
    l: &MackeyFunctor,
) -> Result<StarPairingReport, MackeyError> {
    let mn = convolve(m, n)?;
    let nl = convolve(n, l)?;
    let dim_m_n_sl = hom_space(&mn.functor, &star_dual(l))?.len();
    let dim_n_l_sm = hom_space(&nl.functor, &star_dual(m))?.len();
    Ok(StarPairingReport {
        dim_m_n_sl,
        dim_n_l_sm,
    })
}

/// The canonical associator (L*M)*N → L*(M*N), certified invertible and
/// natural. `conv_lm_n` must be built over `conv_lm.functor`, and
/// `conv_l_mn` over `conv_mn.functor`.
pub fn associator(
    l: &MackeyFunctor,
    m: &MackeyFunctor,
    n: &MackeyFunctor,
    conv_lm: &Convolution,
    conv_lm_n: &Convolution,
    conv_mn: &Convolution,
    conv_l_mn: &Convolution,
) -> MackeyMorphism {
    debug_assert!(l.ctx().group() == m.ctx().group() && m.ctx().group() == n.ctx().group());
    let ctx = l.ctx().clone();
    let classes = ctx.class_count();
    let lm = &conv_lm.functor;
    let mut components = Vec::with_capacity(classes);
    for k in 0..classes {
        let src = &conv_lm_n.coends[k];
        let dst = &conv_l_mn.coends[k];
        let mut amb = RatMatrix::zeros(dst.ambient_dim, src.ambient_dim);
        for sb in &src.blocks {
            let (a_cls, j_cls) = (sb.i, sb.j);
            debug_assert_eq!(sb.m_dim, lm.level_dim(a_cls));
            let lift = &conv_lm.coends[a_cls];
            for (p, phi_comp) in sb.phi_basis.basis.iter().enumerate() {
                let phi_class =
                    ctx.component_class(ctx.rep_product(a_cls, j_cls), ctx.coset(k), *phi_comp);
                for xi in 0..sb.m_dim {
                    // Lift ξ ∈ (L*M)(C_a) to the ambient coend presentation.
                    let lifted = lift.quotient.section.column(xi);
                    for lb in &lift.blocks {
                        let (i_cls, jp_cls) = (lb.i, lb.j);
                        for (q, psi_comp) in lb.phi_basis.basis.iter().enumerate() {
                            let psi_class = ctx.component_class(
                                ctx.rep_product(i_cls, jp_cls),
                                ctx.coset(a_cls),
                                *psi_comp,
                            );
                            for li in 0..lb.m_dim {
                                for mi in 0..lb.n_dim {
                                    let coeff = lifted[lb.index(q, li, mi)].clone();
                                    if coeff.is_zero() {
                                        continue;
                                    }
                                    // β = φ ∘ (ψ ⊗ 1): (C_i×C_j')×C_j → C_k.
                                    let beta = ctx
                                        .compose(
                                            &ctx.tensor(
                                                &psi_class,
                                                &ctx.identity_class(ctx.coset(j_cls)),
                                            )
                                            .unwrap(),
                                            &phi_class,
                                        )
                                        .unwrap();
                                    // Decompose Y = C_j'×C_j into orbits.
                                    let y = ctx.rep_product(jp_cls, j_cls).clone();
                                    let y_dec = ctx.decompose(&y);
                                    for orbit in &y_dec.orbits {
                                        let b_cls = orbit.class;
                                        let db = dst.block(i_cls, b_cls);
                                        // φ' = β ∘ (1 × ι): C_i×C_b → C_k.
                                        let incl = ctx.lower(&orbit.iso);
                                        let one_incl = ctx
                                            .tensor(&ctx.identity_class(ctx.coset(i_cls)), &incl)
                                            .unwrap();
                                        let phi_pr = ctx.compose(&one_incl, &beta).unwrap();
                                        let phi_coeffs = ctx.express(&phi_pr, &db.phi_basis);
                                        // ζ = the class of (ι^*, m, n) in (M*N)(C_b).
                                        let proj_span = ctx.upper(&orbit.iso);
                                        let mn_coend = &conv_mn.coends[b_cls];
                                        let zb = mn_coend.block(jp_cls, j_cls);
                                        let zeta_coeffs = ctx.express(&proj_span, &zb.phi_basis);
                                        for ni in 0..sb.n_dim {
                                            let mut zeta =
                                                vec![BigRational::zero(); mn_coend.ambient_dim];
                                            for (zq, &cf) in zeta_coeffs.iter().enumerate() {
                                                if cf > 0 {
                                                    zeta[zb.index(zq, mi, ni)] += rat(cf as i64);
                                                }
                                            }
                                            let zeta_q = mn_coend.quotient.projection.apply(&zeta);
                                            for (phi_p, &pcf) in phi_coeffs.iter().enumerate() {
                                                if pcf == 0 {
                                                    continue;
                                                }
                                                for (r, zr) in zeta_q.iter().enumerate() {
                                                    if zr.is_zero() {
                                                        continue;
                                                    }
                                                    let row = db.index(phi_p, li, r);
                                                    let col = sb.index(p, xi, ni);
                                                    let cur = amb.at(row, col).clone();
                                                    amb.set(
                                                        row,
                                                        col,
                                                        cur + &coeff * rat(pcf as i64) * zr,
                                                    );
                                                }
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        let pushed = dst.quotient.projection.mul(&amb.mul(&src.relations));
        assert!(
            pushed.is_zero(),
            "associator does not preserve the coend relations"
        );
        components.push(dst.quotient.projection.mul(&amb).mul(&src.quotient.section));
    }
    let theta = MackeyMorphism { components };
    assert!(
        theta.is_natural(&conv_lm_n.functor, &conv_l_mn.functor),
        "associator is not natural"
    );
    assert!(theta.is_invertible(), "associator is not invertible");
    theta
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::samples;
    use crate::gset::coset_gset;
    use crate::mackey::{burnside_functor, fixed_point_functor, linearize_gset, Representation};

    fn ctx_of(g: crate::group::Group) -> Arc<ReprSystem> {
        ReprSystem::with_default_bound(Arc::new(g)).unwrap()
    }

    #[test]
    fn unit_law_over_c2() {
        let ctx = ctx_of(samples::cyclic(2));
        let j = burnside_functor(&ctx);
        let conv = convolve(&j, &j).unwrap();
        assert!(conv.functor.validate().passed());
        assert_eq!(conv.functor.levels(), j.levels());
        let theta = unit_iso(&j, &j, &conv);
        assert!(theta.is_invertible());
    }

    #[test]
    fn unit_law_for_fixed_point_functor_c2() {
        let ctx = ctx_of(samples::cyclic(2));
        let j = burnside_functor(&ctx);
        let reg = linearize_gset(&coset_gset(ctx.group(), &[0]).unwrap());
        let m = fixed_point_functor(&ctx, &reg);
        let conv = convolve(&j, &m).unwrap();
        assert!(conv.functor.validate().passed());
        let theta = unit_iso(&j, &m, &conv);
        assert!(theta.is_natural(&conv.functor, &m));
    }

    #[test]
    fn convolve_with_zero_is_zero() {
        let ctx = ctx_of(samples::cyclic(2));
        let j = burnside_functor(&ctx);
        let z = MackeyFunctor::zero(ctx);
        let conv = convolve(&j, &z).unwrap();
        assert!(conv.functor.is_zero_functor());
    }

    #[test]
    fn unit_iso_over_trivial_group() {
        let ctx = ctx_of(samples::cyclic(1));
        let j = burnside_functor(&ctx);
        let conv = convolve(&j, &j).unwrap();
        let theta = unit_iso(&j, &j, &conv);
        assert_eq!(theta.components.len(), 1);
        assert!(theta.is_invertible());
    }

    #[test]
    fn symmetry_is_involution() {
        let ctx = ctx_of(samples::cyclic(2));
        let j = burnside_functor(&ctx);
        let triv = Representation::trivial(ctx.group().clone(), 1);
        let m = fixed_point_functor(&ctx, &triv);
        let conv_jm = convolve(&j, &m).unwrap();
        let conv_mj = convolve(&m, &j).unwrap();
        let s1 = symmetry_iso(&j, &m, &conv_jm, &conv_mj);
        let s2 = symmetry_iso(&m, &j, &conv_mj, &conv_jm);
        let round = s1.then(&s2);
        for c in &round.components {
            assert!(c.is_identity());
        }
    }

    #[test]
    fn internal_hom_adjunction_dimensions() {
        let ctx = ctx_of(samples::cyclic(2));
        let j = burnside_functor(&ctx);
        let reg = linearize_gset(&coset_gset(ctx.group(), &[0]).unwrap());
        let m = fixed_point_functor(&ctx, &reg);
        let hom_mm = internal_hom(&m, &m).unwrap();
        assert!(hom_mm.functor.validate().passed());
        // dim Mky(L*M, N) = dim Mky(L, Hom(M, N)) at L = N = J-ish samples.
        let lhs = hom_space(&convolve(&j, &m).unwrap().functor, &m)
            .unwrap()
            .len();
        let rhs = hom_space(&j, &hom_mm.functor).unwrap().len();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn internal_hom_out_of_burnside_is_identity_like() {
        // Hom(J, N) ≅ N since J*− ≅ id; certified by an explicit iso.
        let ctx = ctx_of(samples::cyclic(2));
        let j = burnside_functor(&ctx);
        let reg = linearize_gset(&coset_gset(ctx.group(), &[0]).unwrap());
        let n = fixed_point_functor(&ctx, &reg);
        let hom_jn = internal_hom(&j, &n).unwrap();
        assert_eq!(hom_jn.functor.levels(), n.levels());
        let basis = hom_space(&hom_jn.functor, &n).unwrap();
        let theta = crate::morphism_search::find_invertible(&basis).expect("certified iso");
        assert!(theta.is_natural(&hom_jn.functor, &n));
    }

    #[test]
    fn internal_hom_of_zero_target() {
        let ctx = ctx_of(samples::cyclic(2));
        let j = burnside_functor(&ctx);
        let z = MackeyFunctor::zero(ctx);
        let hom = internal_hom(&j, &z).unwrap();
        assert!(hom.functor.is_zero_functor());
    }

    #[test]
    fn star_dual_involution_and_validation() {
        let ctx = ctx_of(samples::cyclic(2));
        let j = burnside_functor(&ctx);
        let s = star_dual(&j);
        assert!(s.validate().passed());
        assert_eq!(s.levels(), j.levels());
        let ss = star_dual(&s);
        // S∘S ≅ id, certified: here S(S(J)) is literally J again.
        for i in 0..ctx.class_count() {
            for jj in 0..ctx.class_count() {
                for b in 0..ctx.rep_basis(i, jj).dimension() {
                    assert_eq!(ss.generator_matrix(i, jj, b), j.generator_matrix(i, jj, b));
                }
            }
        }
        let z = MackeyFunctor::zero(ctx.clone());
        assert!(star_dual(&z).is_zero_functor());
    }

    #[test]
    fn star_dual_trivial_group_is_transpose() {
        let ctx = ctx_of(samples::cyclic(1));
        let j = burnside_functor(&ctx);
        let s = star_dual(&j);
        assert_eq!(
            s.generator_matrix(0, 0, 0),
            &j.generator_matrix(0, 0, 0).transpose()
        );
    }

    #[test]
    fn star_pairing_on_burnside() {
        let ctx = ctx_of(samples::cyclic(2));
        let j = burnside_functor(&ctx);
        let report = star_pairing_check(&j, &j, &j).unwrap();
        assert!(report.passed());

        let z = MackeyFunctor::zero(ctx);
        let zr = star_pairing_check(&j, &z, &j).unwrap();
        assert_eq!(zr.dim_m_n_sl, 0);
        assert_eq!(zr.dim_n_l_sm, 0);
    }

    #[test]
    fn associator_certified_over_c2() {
        let ctx = ctx_of(samples::cyclic(2));
        let j = burnside_functor(&ctx);
        let triv = Representation::trivial(ctx.group().clone(), 1);
        let m = fixed_point_functor(&ctx, &triv);
        let conv_jm = convolve(&j, &m).unwrap();
        let conv_jm_j = convolve(&conv_jm.functor, &j).unwrap();
        let conv_mj = convolve(&m, &j).unwrap();
        let conv_j_mj = convolve(&j, &conv_mj.functor).unwrap();
        // Dimension agreement at every representative.
        assert_eq!(conv_jm_j.functor.levels(), conv_j_mj.functor.levels());
        let alpha = associator(&j, &m, &j, &conv_jm, &conv_jm_j, &conv_mj, &conv_j_mj);
        assert!(alpha.is_invertible());
    }
}
