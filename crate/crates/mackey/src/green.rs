//! Green functors (monoids in the category of Mackey functors), their
//! modules, the Dress construction at the Green level, and the Green
//! algebra whose modules are the modules of the functor.
//!
//! Multiplication is stored only on representative pairs; values on
//! arbitrary pairs of objects are induced through the decomposition isos,
//! mirroring the Lindner storage decision for the underlying functor.

use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;

use crate::crossed::CrossedMonoid;
use crate::gset::{product, GMap, GSet};
use crate::linalg::{kernel_basis, solve, RatMatrix};
use crate::mackey::{
    cohomological_check, dress, hom_space, CohomReport, MackeyError, MackeyFunctor, MackeyMorphism,
};
use crate::reps::ReprSystem;

/// A Green functor: a Mackey functor with multiplication components on
/// representative pairs and a unit element in A(1).
#[derive(Debug, Clone)]
pub struct GreenFunctor {
    underlying: MackeyFunctor,
    /// mult[i][j]: A(C_i)⊗A(C_j) → A(C_i×C_j), target in eval coordinates.
    mult: Vec<Vec<RatMatrix>>,
    /// η ∈ A(1) = A(C_0).
    unit: Vec<BigRational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GreenFailure {
    MultShape {
        i: usize,
        j: usize,
    },
    UnitShape,
    NaturalityFirst {
        i: usize,
        ip: usize,
        j: usize,
        generator: usize,
    },
    NaturalitySecond {
        i: usize,
        j: usize,
        jp: usize,
        generator: usize,
    },
    Associativity {
        i: usize,
        j: usize,
        k: usize,
    },
    UnitLeft {
        j: usize,
    },
    UnitRight {
        i: usize,
    },
}

impl fmt::Display for GreenFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GreenFailure::MultShape { i, j } => write!(f, "μ_({i},{j}) has the wrong shape"),
            GreenFailure::UnitShape => write!(f, "unit vector has the wrong dimension"),
            GreenFailure::NaturalityFirst { i, ip, j, generator } => write!(
                f,
                "naturality of μ in the first variable fails for generator {generator}: C{i}→C{ip} at C{j}"
            ),
            GreenFailure::NaturalitySecond { i, j, jp, generator } => write!(
                f,
                "naturality of μ in the second variable fails for generator {generator}: C{j}→C{jp} at C{i}"
            ),
            GreenFailure::Associativity { i, j, k } => {
                write!(f, "associativity diagram fails on (C{i}, C{j}, C{k})")
            }
            GreenFailure::UnitLeft { j } => write!(f, "left unit law fails at C{j}"),
            GreenFailure::UnitRight { i } => write!(f, "right unit law fails at C{i}"),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct GreenReport {
    pub failures: Vec<GreenFailure>,
    pub checked: usize,
}

impl GreenReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl GreenFunctor {
    pub fn new(
        underlying: MackeyFunctor,
        mult: Vec<Vec<RatMatrix>>,
        unit: Vec<BigRational>,
    ) -> GreenFunctor {
        GreenFunctor {
            underlying,
            mult,
            unit,
        }
    }

    pub fn underlying(&self) -> &MackeyFunctor {
        &self.underlying
    }

    pub fn ctx(&self) -> &Arc<ReprSystem> {
        self.underlying.ctx()
    }

    pub fn mult(&self, i: usize, j: usize) -> &RatMatrix {
        &self.mult[i][j]
    }

    pub fn unit(&self) -> &[BigRational] {
        &self.unit
    }

    pub fn unit_column(&self) -> RatMatrix {
        RatMatrix::from_columns(self.unit.len(), std::slice::from_ref(&self.unit))
    }
}

/// Induces a pairing A(X)⊗M(Y) → M(X×Y) from its representative components
/// through the decomposition isos. `comps(i, j)` must be the component
/// A(C_i)⊗M(C_j) → M(C_i×C_j) in eval coordinates.
pub fn induce_bilinear(
    a: &MackeyFunctor,
    m: &MackeyFunctor,
    comps: &dyn Fn(usize, usize) -> RatMatrix,
    x: &GSet,
    y: &GSet,
) -> RatMatrix {
    let ctx = a.ctx();
    let x_book = a.eval_book(x);
    let y_book = m.eval_book(y);
    let xy = product(x, y).expect("same group");
    let xy_book = m.eval_book(&xy);
    let mut out = RatMatrix::zeros(xy_book.dim, x_book.dim * y_book.dim);
    for (ox, orbit_x) in x_book.dec.orbits.iter().enumerate() {
        for (oy, orbit_y) in y_book.dec.orbits.iter().enumerate() {
            let (i, j) = (orbit_x.class, orbit_y.class);
            let incl = ctx
                .tensor(&ctx.lower(&orbit_x.iso), &ctx.lower(&orbit_y.iso))
                .expect("same group");
            let prod_book = m.eval_book(ctx.rep_product(i, j));
            let embed = m.eval_span_with(&prod_book, &xy_book, &incl);
            let block = embed.mul(&comps(i, j));
            for av in 0..a.level_dim(i) {
                for bv in 0..m.level_dim(j) {
                    let col = (x_book.offsets[ox] + av) * y_book.dim + (y_book.offsets[oy] + bv);
                    for r in 0..block.rows() {
                        let v = block.at(r, av * m.level_dim(j) + bv);
                        if !v.is_zero() {
                            let cur = out.at(r, col).clone();
                            out.set(r, col, cur + v);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Exhaustive check of the monoid axioms: naturality of μ in both
/// variables against every generator, associativity on all representative
/// triples, and the two unit laws.
pub fn validate_green(a: &GreenFunctor) -> GreenReport {
    let ctx = a.ctx().clone();
    let m = a.underlying();
    let classes = ctx.class_count();
    let mut report = GreenReport::default();

    for i in 0..classes {
        for j in 0..classes {
            let want_rows = m.eval_dim(ctx.rep_product(i, j));
            let want_cols = m.level_dim(i) * m.level_dim(j);
            report.checked += 1;
            if a.mult(i, j).rows() != want_rows || a.mult(i, j).cols() != want_cols {
                report.failures.push(GreenFailure::MultShape { i, j });
            }
        }
    }
    if a.unit().len() != m.level_dim(0) {
        report.failures.push(GreenFailure::UnitShape);
    }
    if !report.passed() {
        return report;
    }

    // Naturality in each variable against every generator.
    for i in 0..classes {
        for ip in 0..classes {
            let gens = ctx.rep_basis(i, ip).clone();
            for (b, comp) in gens.basis.iter().enumerate() {
                let s_class = ctx.component_class(ctx.coset(i), ctx.coset(ip), *comp);
                let a_s = m.generator_matrix(i, ip, b).clone();
                for j in 0..classes {
                    let moved = ctx
                        .tensor(&s_class, &ctx.identity_class(ctx.coset(j)))
                        .expect("same group");
                    let lhs = m.eval_span(&moved).mul(a.mult(i, j));
                    let rhs = a
                        .mult(ip, j)
                        .mul(&a_s.kron(&RatMatrix::identity(m.level_dim(j))));
                    report.checked += 1;
                    if lhs != rhs {
                        report.failures.push(GreenFailure::NaturalityFirst {
                            i,
                            ip,
                            j,
                            generator: b,
                        });
                    }
                }
            }
        }
    }
    for j in 0..classes {
        for jp in 0..classes {
            let gens = ctx.rep_basis(j, jp).clone();
            for (b, comp) in gens.basis.iter().enumerate() {
                let t_class = ctx.component_class(ctx.coset(j), ctx.coset(jp), *comp);
                let a_t = m.generator_matrix(j, jp, b).clone();
                for i in 0..classes {
                    let moved = ctx
                        .tensor(&ctx.identity_class(ctx.coset(i)), &t_class)
                        .expect("same group");
                    let lhs = m.eval_span(&moved).mul(a.mult(i, j));
                    let rhs = a
                        .mult(i, jp)
                        .mul(&RatMatrix::identity(m.level_dim(i)).kron(&a_t));
                    report.checked += 1;
                    if lhs != rhs {
                        report.failures.push(GreenFailure::NaturalitySecond {
                            i,
                            j,
                            jp,
                            generator: b,
                        });
                    }
                }
            }
        }
    }

    // Associativity: both bracketings land in the same flattened product.
    let comps = |i: usize, j: usize| a.mult(i, j).clone();
    for i in 0..classes {
        for j in 0..classes {
            for k in 0..classes {
                let left = induce_bilinear(m, m, &comps, ctx.rep_product(i, j), ctx.coset(k))
                    .mul(&a.mult(i, j).kron(&RatMatrix::identity(m.level_dim(k))));
                let right = induce_bilinear(m, m, &comps, ctx.coset(i), ctx.rep_product(j, k))
                    .mul(&RatMatrix::identity(m.level_dim(i)).kron(a.mult(j, k)));
                report.checked += 1;
                if left != right {
                    report
                        .failures
                        .push(GreenFailure::Associativity { i, j, k });
                }
            }
        }
    }

    // Unit laws: 1×C_j and C_j×1 coincide with C_j on the nose.
    let unit_col = a.unit_column();
    for j in 0..classes {
        let lhs = a
            .mult(0, j)
            .mul(&unit_col.kron(&RatMatrix::identity(m.level_dim(j))));
        report.checked += 1;
        if !lhs.is_identity() {
            report.failures.push(GreenFailure::UnitLeft { j });
        }
        let rhs = a
            .mult(j, 0)
            .mul(&RatMatrix::identity(m.level_dim(j)).kron(&unit_col));
        report.checked += 1;
        if !rhs.is_identity() {
            report.failures.push(GreenFailure::UnitRight { i: j });
        }
    }
    report
}

/// The Burnside Green functor: μ is the tensor product of spans
/// re-expressed in the connected-span bases, η the identity span of 1.
pub fn burnside_green(ctx: &Arc<ReprSystem>) -> GreenFunctor {
    let j = crate::mackey::burnside_functor(ctx);
    let classes = ctx.class_count();
    let pt = ctx.point().clone();
    let unit_key = crate::span::SpanComponent {
        apex_class: 0,
        left: 0,
        right: 0,
    };
    let unit_idx = ctx
        .rep_basis(0, 0)
        .index_of(&unit_key)
        .expect("identity span is a generator");
    let mut unit = vec![BigRational::zero(); j.level_dim(0)];
    unit[unit_idx] = BigRational::from_integer(1.into());

    let mut mult = Vec::with_capacity(classes);
    for a in 0..classes {
        let mut row = Vec::with_capacity(classes);
        for b in 0..classes {
            let target_book = j.eval_book(ctx.rep_product(a, b));
            let mut mat = RatMatrix::zeros(target_book.dim, j.level_dim(a) * j.level_dim(b));
            let basis_a = ctx.rep_basis(0, a).clone();
            let basis_b = ctx.rep_basis(0, b).clone();
            for (ai, alpha) in basis_a.basis.iter().enumerate() {
                let alpha_class = ctx.component_class(&pt, ctx.coset(a), *alpha);
                for (bi, beta) in basis_b.basis.iter().enumerate() {
                    let beta_class = ctx.component_class(&pt, ctx.coset(b), *beta);
                    // 1×1 = 1 on the nose, so the tensor span starts at 1.
                    let tensored = ctx.tensor(&alpha_class, &beta_class).expect("same group");
                    let col = j.eval_span(&tensored).mul(&burnside_unit_column(&j));
                    for r in 0..target_book.dim {
                        mat.set(r, ai * j.level_dim(b) + bi, col.at(r, 0).clone());
                    }
                }
            }
            row.push(mat);
        }
        mult.push(row);
    }
    GreenFunctor::new(j, mult, unit)
}

fn burnside_unit_column(j: &MackeyFunctor) -> RatMatrix {
    let ctx = j.ctx();
    let unit_key = crate::span::SpanComponent {
        apex_class: 0,
        left: 0,
        right: 0,
    };
    let idx = ctx
        .rep_basis(0, 0)
        .index_of(&unit_key)
        .expect("identity span is a generator");
    let mut col = RatMatrix::zeros(j.level_dim(0), 1);
    col.set(idx, 0, BigRational::from_integer(1.into()));
    col
}

/// The Burnside ring multiplication table at the top level: entry (a, b)
/// is [C_a]·[C_b] expressed over the classes of transitive G-sets.
pub fn burnside_ring_table(ctx: &Arc<ReprSystem>) -> Vec<Vec<Vec<BigRational>>> {
    let green = burnside_green(ctx);
    let n = green.underlying().level_dim(0);
    let mu = green.mult(0, 0);
    (0..n)
        .map(|a| {
            (0..n)
                .map(|b| (0..n).map(|r| mu.at(r, a * n + b).clone()).collect())
                .collect()
        })
        .collect()
}

/// The iso dress(M, U)-eval(X) → M-eval(X×U): blockwise embeddings along
/// the orbit inclusions of X, tensored with the identity on U.
pub fn dress_eval_iso(m: &MackeyFunctor, x: &GSet, u: &GSet) -> RatMatrix {
    let ctx = m.ctx();
    let xu = product(x, u).expect("same group");
    let xu_book = m.eval_book(&xu);
    let dec = ctx.decompose(x);
    let id_u = ctx.identity_class(u);
    let mut blocks: Vec<RatMatrix> = Vec::new();
    let mut total_cols = 0usize;
    for orbit in &dec.orbits {
        let span = ctx
            .tensor(&ctx.lower(&orbit.iso), &id_u)
            .expect("same group");
        let src_prod = product(ctx.coset(orbit.class), u).expect("same group");
        let src_book = m.eval_book(&src_prod);
        let mat = m.eval_span_with(&src_book, &xu_book, &span);
        total_cols += mat.cols();
        blocks.push(mat);
    }
    let mut out = RatMatrix::zeros(xu_book.dim, total_cols);
    let mut off = 0;
    for b in blocks {
        for c in 0..b.cols() {
            for r in 0..b.rows() {
                if !b.at(r, c).is_zero() {
                    out.set(r, off + c, b.at(r, c).clone());
                }
            }
        }
        off += b.cols();
    }
    out
}

/// The Dress construction at the Green level: A_Y over a crossed monoid Y,
/// with multiplication braided through the grading.
pub fn dress_green(a: &GreenFunctor, y: &CrossedMonoid) -> Result<GreenFunctor, MackeyError> {
    let ctx = a.ctx().clone();
    let m = a.underlying();
    let carrier = y.crossed.carrier().clone();
    let underlying = dress(m, &carrier)?;
    let classes = ctx.class_count();
    let comps = |i: usize, j: usize| a.mult(i, j).clone();

    let mut mult = Vec::with_capacity(classes);
    for i in 0..classes {
        let ci_y = product(ctx.coset(i), &carrier).expect("same group");
        let mut row = Vec::with_capacity(classes);
        for j in 0..classes {
            let cj_y = product(ctx.coset(j), &carrier).expect("same group");
            // A(C_i×Y) ⊗ A(C_j×Y) → A(C_i×Y×C_j×Y).
            let pairing = induce_bilinear(m, m, &comps, &ci_y, &cj_y);
            // f: (C_i×Y)×(C_j×Y) → (C_i×C_j)×Y via the braiding and the
            // monoid multiplication: (x, y1, z, y2) ↦ ((x, |y1|z), y1·y2).
            let src = product(&ci_y, &cj_y).expect("same group");
            let pij = ctx.rep_product(i, j).clone();
            let tgt = product(&pij, &carrier).expect("same group");
            let (cj_size, y_size) = (ctx.coset(j).size(), carrier.size());
            let values: Vec<usize> = (0..src.size())
                .map(|p| {
                    let left = p / cj_y.size();
                    let right = p % cj_y.size();
                    let (x, y1) = (left / y_size, left % y_size);
                    let (z, y2) = (right / y_size, right % y_size);
                    let braided_z = ctx.coset(j).act(y.crossed.grade(y1), z);
                    let yy = y.mul_points(y1, y2);
                    ((x * cj_size) + braided_z) * y_size + yy
                })
                .collect();
            let f = GMap::new(src, tgt, values).expect("braided multiplication is equivariant");
            let push = m.eval_span(&ctx.lower(&f));
            // Re-express in the dressed functor's own coordinates.
            let t = dress_eval_iso(m, &pij, &carrier);
            let composite = push.mul(&pairing);
            let mat = solve(&t, &composite).expect("dress iso is invertible");
            row.push(mat);
        }
        mult.push(row);
    }

    // Unit: push η along the monoid unit 1 → Y; 1×Y = Y on the nose.
    let pt = ctx.point().clone();
    let unit_map = GMap::new(pt.clone(), carrier.clone(), vec![y.unit]).expect("unit is fixed");
    let eta_col = m.eval_span(&ctx.lower(&unit_map)).mul(&a.unit_column());
    let unit: Vec<BigRational> = (0..eta_col.rows())
        .map(|r| eta_col.at(r, 0).clone())
        .collect();
    Ok(GreenFunctor::new(underlying, mult, unit))
}

/// A module over a Green functor, with action components on representative
/// pairs (in eval coordinates, like the multiplication).
#[derive(Debug, Clone)]
pub struct GreenModule {
    underlying: MackeyFunctor,
    /// action[i][j]: A(C_i)⊗M(C_j) → M(C_i×C_j).
    action: Vec<Vec<RatMatrix>>,
}

impl GreenModule {
    pub fn new(underlying: MackeyFunctor, action: Vec<Vec<RatMatrix>>) -> GreenModule {
        GreenModule { underlying, action }
    }

    pub fn underlying(&self) -> &MackeyFunctor {
        &self.underlying
    }

    pub fn action(&self, i: usize, j: usize) -> &RatMatrix {
        &self.action[i][j]
    }

    /// A as a module over itself.
    pub fn regular(a: &GreenFunctor) -> GreenModule {
        GreenModule {
            underlying: a.underlying().clone(),
            action: a.mult_table(),
        }
    }

    /// The dressed module A_U for a plain G-set U.
    pub fn dressed(a: &GreenFunctor, u: &GSet) -> Result<GreenModule, MackeyError> {
        let ctx = a.ctx().clone();
        let m = a.underlying();
        let underlying = dress(m, u)?;
        let classes = ctx.class_count();
        let comps = |i: usize, j: usize| a.mult(i, j).clone();
        let mut action = Vec::with_capacity(classes);
        for i in 0..classes {
            let mut row = Vec::with_capacity(classes);
            for j in 0..classes {
                let cj_u = product(ctx.coset(j), u).expect("same group");
                let pairing = induce_bilinear(m, m, &comps, ctx.coset(i), &cj_u);
                let t = dress_eval_iso(m, ctx.rep_product(i, j), u);
                row.push(solve(&t, &pairing).expect("dress iso is invertible"));
            }
            action.push(row);
        }
        Ok(GreenModule { underlying, action })
    }
}

impl GreenFunctor {
    fn mult_table(&self) -> Vec<Vec<RatMatrix>> {
        self.mult.clone()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModuleFailure {
    ActionShape {
        i: usize,
        j: usize,
    },
    NaturalityFirst {
        i: usize,
        ip: usize,
        j: usize,
        generator: usize,
    },
    NaturalitySecond {
        i: usize,
        j: usize,
        jp: usize,
        generator: usize,
    },
    Associativity {
        i: usize,
        j: usize,
        k: usize,
    },
    Unit {
        j: usize,
    },
}

#[derive(Debug, Clone, Default)]
pub struct ModuleReport {
    pub failures: Vec<ModuleFailure>,
    pub checked: usize,
}

impl ModuleReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Exhaustively checks the three module diagrams (naturality, unit,
/// associativity of the action) over representatives and generators.
pub fn validate_module(a: &GreenFunctor, module: &GreenModule) -> ModuleReport {
    let ctx = a.ctx().clone();
    let am = a.underlying();
    let mm = module.underlying();
    let classes = ctx.class_count();
    let mut report = ModuleReport::default();

    for i in 0..classes {
        for j in 0..classes {
            let want_rows = mm.eval_dim(ctx.rep_product(i, j));
            let want_cols = am.level_dim(i) * mm.level_dim(j);
            report.checked += 1;
            if module.action(i, j).rows() != want_rows || module.action(i, j).cols() != want_cols {
                report.failures.push(ModuleFailure::ActionShape { i, j });
            }
        }
    }
    if !report.passed() {
        return report;
    }

    for i in 0..classes {
        for ip in 0..classes {
            let gens = ctx.rep_basis(i, ip).clone();
            for (b, comp) in gens.basis.iter().enumerate() {
                let s_class = ctx.component_class(ctx.coset(i), ctx.coset(ip), *comp);
                let a_s = am.generator_matrix(i, ip, b).clone();
                for j in 0..classes {
                    let moved = ctx
                        .tensor(&s_class, &ctx.identity_class(ctx.coset(j)))
                        .expect("same group");
                    let lhs = mm.eval_span(&moved).mul(module.action(i, j));
                    let rhs = module
                        .action(ip, j)
                        .mul(&a_s.kron(&RatMatrix::identity(mm.level_dim(j))));
                    report.checked += 1;
                    if lhs != rhs {
                        report.failures.push(ModuleFailure::NaturalityFirst {
                            i,
                            ip,
                            j,
                            generator: b,
                        });
                    }
                }
            }
        }
    }
    for j in 0..classes {
        for jp in 0..classes {
            let gens = ctx.rep_basis(j, jp).clone();
            for (b, comp) in gens.basis.iter().enumerate() {
                let t_class = ctx.component_class(ctx.coset(j), ctx.coset(jp), *comp);
                let m_t = mm.generator_matrix(j, jp, b).clone();
                for i in 0..classes {
                    let moved = ctx
                        .tensor(&ctx.identity_class(ctx.coset(i)), &t_class)
                        .expect("same group");
                    let lhs = mm.eval_span(&moved).mul(module.action(i, j));
                    let rhs = module
                        .action(i, jp)
                        .mul(&RatMatrix::identity(am.level_dim(i)).kron(&m_t));
                    report.checked += 1;
                    if lhs != rhs {
                        report.failures.push(ModuleFailure::NaturalitySecond {
                            i,
                            j,
                            jp,
                            generator: b,
                        });
                    }
                }
            }
        }
    }

    let act = |i: usize, j: usize| module.action(i, j).clone();
    for i in 0..classes {
        for j in 0..classes {
            for k in 0..classes {
                let left = induce_bilinear(am, mm, &act, ctx.rep_product(i, j), ctx.coset(k))
                    .mul(&a.mult(i, j).kron(&RatMatrix::identity(mm.level_dim(k))));
                let right = induce_bilinear(am, mm, &act, ctx.coset(i), ctx.rep_product(j, k))
                    .mul(&RatMatrix::identity(am.level_dim(i)).kron(module.action(j, k)));
                report.checked += 1;
                if left != right {
                    report
                        .failures
                        .push(ModuleFailure::Associativity { i, j, k });
                }
            }
        }
    }

    let unit_col = a.unit_column();
    for j in 0..classes {
        let lhs = module
            .action(0, j)
            .mul(&unit_col.kron(&RatMatrix::identity(mm.level_dim(j))));
        report.checked += 1;
        if !lhs.is_identity() {
            report.failures.push(ModuleFailure::Unit { j });
        }
    }
    report
}

fn combine_rational(basis: &[MackeyMorphism], coeffs: &[BigRational]) -> MackeyMorphism {
    let mut components: Vec<RatMatrix> = basis[0]
        .components
        .iter()
        .map(|c| c.scale(&coeffs[0]))
        .collect();
    for (m, c) in basis.iter().zip(coeffs.iter()).skip(1) {
        for (acc, comp) in components.iter_mut().zip(m.components.iter()) {
            *acc = acc.add(&comp.scale(c));
        }
    }
    MackeyMorphism { components }
}

/// Basis of module morphisms: the subspace of Mackey morphisms cut out by
/// compatibility with the action on every representative pair.
pub fn module_hom(
    a: &GreenFunctor,
    m1: &GreenModule,
    m2: &GreenModule,
) -> Result<Vec<MackeyMorphism>, MackeyError> {
    let base = hom_space(m1.underlying(), m2.underlying())?;
    if base.is_empty() {
        return Ok(base);
    }
    let ctx = a.ctx().clone();
    let am = a.underlying();
    let classes = ctx.class_count();
    let mut defect_cols: Vec<Vec<BigRational>> = Vec::new();
    for theta in &base {
        let mut defect = Vec::new();
        for i in 0..classes {
            for j in 0..classes {
                let pij = ctx.rep_product(i, j);
                let src_book = m1.underlying().eval_book(pij);
                let tgt_book = m2.underlying().eval_book(pij);
                let theta_prod = theta.component_at(&src_book, &tgt_book);
                let lhs = theta_prod.mul(m1.action(i, j));
                let rhs = m2
                    .action(i, j)
                    .mul(&RatMatrix::identity(am.level_dim(i)).kron(&theta.components[j]));
                let d = lhs.sub(&rhs);
                for r in 0..d.rows() {
                    for c in 0..d.cols() {
                        defect.push(d.at(r, c).clone());
                    }
                }
            }
        }
        defect_cols.push(defect);
    }
    let rows = defect_cols[0].len();
    let system = RatMatrix::from_columns(rows, &defect_cols);
    let kernel = kernel_basis(&system);
    let mut out = Vec::with_capacity(kernel.cols());
    for c in 0..kernel.cols() {
        let coeffs: Vec<BigRational> = (0..base.len()).map(|r| kernel.at(r, c).clone()).collect();
        out.push(combine_rational(&base, &coeffs));
    }
    Ok(out)
}

/// Delegates the cohomological property to the underlying Mackey functor.
pub fn cohomological_green_report(a: &GreenFunctor) -> CohomReport {
    cohomological_check(a.underlying())
}

/// The Green algebra W_A: a matrix algebra over the representative
/// transitive G-sets whose (X, Y) entry space is A(X×Y).
#[derive(Debug, Clone)]
pub struct GreenAlgebra {
    pub entry_dims: Vec<Vec<usize>>,
    pub offsets: Vec<Vec<usize>>,
    pub dim: usize,
    /// compose[i][j][k]: entry(i,j) ⊗ entry(j,k) → entry(i,k).
    pub compose: Vec<Vec<Vec<RatMatrix>>>,
    /// The two-sided unit Σ_i e_i.
    pub unit: Vec<BigRational>,
    /// The per-class idempotents e_i ∈ entry(i,i), embedded in W.
    pub idempotents: Vec<Vec<BigRational>>,
}

impl GreenAlgebra {
    pub fn entry_slice<'v>(&self, w: &'v [BigRational], i: usize, j: usize) -> &'v [BigRational] {
        let off = self.offsets[i][j];
        &w[off..off + self.entry_dims[i][j]]
    }

    /// The product of two algebra elements: entries compose through the
    /// middle object, (second∘first)_{ik} = Σ_j B_{ijk}(first_{ij} ⊗ second_{jk}).
    pub fn multiply(&self, first: &[BigRational], second: &[BigRational]) -> Vec<BigRational> {
        let n = self.entry_dims.len();
        let mut out = vec![BigRational::zero(); self.dim];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let b = &self.compose[i][j][k];
                    let f = self.entry_slice(first, i, j);
                    let s = self.entry_slice(second, j, k);
                    if f.iter().all(|x| x.is_zero()) || s.iter().all(|x| x.is_zero()) {
                        continue;
                    }
                    let mut v = vec![BigRational::zero(); f.len() * s.len()];
                    for (fi, fv) in f.iter().enumerate() {
                        if fv.is_zero() {
                            continue;
                        }
                        for (si, sv) in s.iter().enumerate() {
                            if !sv.is_zero() {
                                v[fi * s.len() + si] = fv * sv;
                            }
                        }
                    }
                    let prod = b.apply(&v);
                    for (r, val) in prod.iter().enumerate() {
                        if !val.is_zero() {
                            out[self.offsets[i][k] + r] += val;
                        }
                    }
                }
            }
        }
        out
    }

    pub fn basis_element(&self, i: usize, j: usize, idx: usize) -> Vec<BigRational> {
        let mut v = vec![BigRational::zero(); self.dim];
        v[self.offsets[i][j] + idx] = BigRational::from_integer(1.into());
        v
    }

    /// Validates associativity (as matrix identities over all composable
    /// block quadruples) and the two-sided unit.
    pub fn validate(&self) -> bool {
        let n = self.entry_dims.len();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        // B_{ikl}∘(B_{ijk}⊗1) = B_{ijl}∘(1⊗B_{jkl})
                        let d_ij = self.entry_dims[i][j];
                        let d_kl = self.entry_dims[k][l];
                        let lhs = self.compose[i][k][l]
                            .mul(&self.compose[i][j][k].kron(&RatMatrix::identity(d_kl)));
                        let rhs = self.compose[i][j][l]
                            .mul(&RatMatrix::identity(d_ij).kron(&self.compose[j][k][l]));
                        if lhs != rhs {
                            return false;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for idx in 0..self.entry_dims[i][j] {
                    let x = self.basis_element(i, j, idx);
                    if self.multiply(&self.unit, &x) != x || self.multiply(&x, &self.unit) != x {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Builds the Green algebra of a Green functor, with composition realized
/// concretely through A(X×Y): pair with μ, pull back along the middle
/// diagonal, push forward along the outer projection.
pub fn green_algebra(a: &GreenFunctor) -> GreenAlgebra {
    let ctx = a.ctx().clone();
    let m = a.underlying();
    let classes = ctx.class_count();
    let comps = |i: usize, j: usize| a.mult(i, j).clone();

    let mut entry_dims = vec![vec![0usize; classes]; classes];
    let mut offsets = vec![vec![0usize; classes]; classes];
    let mut dim = 0usize;
    for i in 0..classes {
        for j in 0..classes {
            offsets[i][j] = dim;
            entry_dims[i][j] = m.eval_dim(ctx.rep_product(i, j));
            dim += entry_dims[i][j];
        }
    }

    let mut compose = vec![vec![vec![RatMatrix::zeros(0, 0); classes]; classes]; classes];
    for i in 0..classes {
        for j in 0..classes {
            for k in 0..classes {
                let pij = ctx.rep_product(i, j).clone();
                let pjk = ctx.rep_product(j, k).clone();
                let pik = ctx.rep_product(i, k).clone();
                let paired = induce_bilinear(m, m, &comps, &pij, &pjk);
                let (cj, ck) = (ctx.coset(j).size(), ctx.coset(k).size());
                let xyz = product(&pij, ctx.coset(k)).expect("same group");
                let xyyz = product(&pij, &pjk).expect("same group");
                // d: (x,y,z) ↦ ((x,y),(y,z)).
                let d_values: Vec<usize> = (0..xyz.size())
                    .map(|p| {
                        let (x, y, z) = (p / (cj * ck), (p / ck) % cj, p % ck);
                        (x * cj + y) * (cj * ck) + y * ck + z
                    })
                    .collect();
                let d = GMap::new(xyz.clone(), xyyz, d_values).expect("diagonal is equivariant");
                // p: (x,y,z) ↦ (x,z).
                let p_values: Vec<usize> = (0..xyz.size())
                    .map(|p| (p / (cj * ck)) * ck + p % ck)
                    .collect();
                let proj = GMap::new(xyz, pik, p_values).expect("projection is equivariant");
                let pull = m.eval_span(&ctx.upper(&d));
                let push = m.eval_span(&ctx.lower(&proj));
                compose[i][j][k] = push.mul(&pull).mul(&paired);
            }
        }
    }

    // Idempotents: e_i = Δ_*(restriction of η along C_i → 1).
    let mut idempotents = Vec::with_capacity(classes);
    let mut unit = vec![BigRational::zero(); dim];
    for i in 0..classes {
        let ci = ctx.coset(i).clone();
        let to_pt =
            GMap::new(ci.clone(), ctx.point().clone(), vec![0; ci.size()]).expect("terminal map");
        let diag_values: Vec<usize> = (0..ci.size()).map(|x| x * ci.size() + x).collect();
        let diag = GMap::new(ci.clone(), ctx.rep_product(i, i).clone(), diag_values)
            .expect("diagonal is equivariant");
        let e = m
            .eval_span(&ctx.lower(&diag))
            .mul(&m.eval_span(&ctx.upper(&to_pt)))
            .mul(&a.unit_column());
        let mut w = vec![BigRational::zero(); dim];
        for r in 0..e.rows() {
            w[offsets[i][i] + r] = e.at(r, 0).clone();
            unit[offsets[i][i] + r] += e.at(r, 0);
        }
        idempotents.push(w);
    }

    GreenAlgebra {
        entry_dims,
        offsets,
        dim,
        compose,
        unit,
        idempotents,
    }
}

/// The endomorphism Green functor Hom(M, M): internal hom with composition
/// as multiplication and the identity as unit.
pub fn green_from_rep_end(m: &MackeyFunctor) -> Result<GreenFunctor, MackeyError> {
    let ih = crate::convolution::internal_hom(m, m)?;
    let ctx = m.ctx().clone();
    let classes = ctx.class_count();
    let h = &ih.functor;

    // μ_{ij}: H(C_i)⊗H(C_j) → H-eval(C_i×C_j) by composition of morphisms
    // in the dressed slots.
    let mut mult = Vec::with_capacity(classes);
    for i in 0..classes {
        let mut row = Vec::with_capacity(classes);
        for j in 0..classes {
            let pij = ctx.rep_product(i, j).clone();
            let h_book = h.eval_book(&pij);
            let mut mat = RatMatrix::zeros(h_book.dim, h.level_dim(i) * h.level_dim(j));
            // Conversion isos per representative u, computed once.
            let mut t_inv_ready: Vec<(
                RatMatrix,
                crate::mackey::EvalBook,
                crate::mackey::EvalBook,
            )> = Vec::with_capacity(classes);
            for u in 0..classes {
                let pui = product(ctx.coset(u), ctx.coset(i)).expect("same group");
                let t = dress_eval_iso(m, &pui, ctx.coset(j));
                let src_book = ih.dressed[j].eval_book(&pui);
                let tgt_book = m.eval_book(&pui);
                t_inv_ready.push((t, src_book, tgt_book));
            }
            for (ti, theta) in ih.level_bases[i].iter().enumerate() {
                for (zi, zeta) in ih.level_bases[j].iter().enumerate() {
                    // Θ_u = θ_u ∘ ζ_(C_u×C_i) ∘ T⁻¹.
                    let mut big_components = Vec::with_capacity(classes);
                    for u in 0..classes {
                        let (t, src_book, tgt_book) = &t_inv_ready[u];
                        let zeta_at = zeta.component_at(src_book, tgt_book);
                        let through = zeta_at.mul(
                            &solve(&t.clone(), &RatMatrix::identity(t.rows()))
                                .expect("dress iso is invertible"),
                        );
                        big_components.push(theta.components[u].mul(&through));
                    }
                    let big = MackeyMorphism {
                        components: big_components,
                    };
                    // Restrict to the orbits of C_i×C_j and express in the
                    // level bases.
                    let col_vec = express_dressed_morphism(m, &ih, &big, &h_book);
                    for (r, v) in col_vec.iter().enumerate() {
                        mat.set(r, ti * h.level_dim(j) + zi, v.clone());
                    }
                }
            }
            row.push(mat);
        }
        mult.push(row);
    }

    // Unit: the identity of Mky(M, M) expressed in the level-0 basis.
    let identity = MackeyMorphism::identity(m);
    let unit = express_in_basis(&ih.level_bases[0], &identity);
    Ok(GreenFunctor::new(ih.functor.clone(), mult, unit))
}

/// Expresses a morphism dress(M, P) → M (components at representatives, in
/// the coordinates dress-level(u) = M-eval(C_u×P)) as coordinates of
/// H-eval(P), restricting along each orbit inclusion of P.
fn express_dressed_morphism(
    m: &MackeyFunctor,
    ih: &crate::convolution::InternalHom,
    big: &MackeyMorphism,
    h_book: &crate::mackey::EvalBook,
) -> Vec<BigRational> {
    let ctx = m.ctx().clone();
    let classes = ctx.class_count();
    let mut out = vec![BigRational::zero(); h_book.dim];
    for (oi, orbit) in h_book.dec.orbits.iter().enumerate() {
        let c = orbit.class;
        // Θ^{(o)}_u = Θ_u ∘ M(1_u × ι_o).
        let incl = ctx.lower(&orbit.iso);
        let mut restricted_components = Vec::with_capacity(classes);
        for u in 0..classes {
            let span = ctx
                .tensor(&ctx.identity_class(ctx.coset(u)), &incl)
                .expect("same group");
            let emb = m.eval_span(&span);
            restricted_components.push(big.components[u].mul(&emb));
        }
        let restricted = MackeyMorphism {
            components: restricted_components,
        };
        let coeffs = express_in_basis(&ih.level_bases[c], &restricted);
        for (r, v) in coeffs.into_iter().enumerate() {
            out[h_book.offsets[oi] + r] = v;
        }
    }
    out
}

fn express_in_basis(basis: &[MackeyMorphism], target: &MackeyMorphism) -> Vec<BigRational> {
    if basis.is_empty() {
        return Vec::new();
    }
    let vec_of = |theta: &MackeyMorphism| {
        let mut v = Vec::new();
        for c in &theta.components {
            for r in 0..c.rows() {
                for s in 0..c.cols() {
                    v.push(c.at(r, s).clone());
                }
            }
        }
        v
    };
    let cols: Vec<Vec<BigRational>> = basis.iter().map(vec_of).collect();
    let rows = cols[0].len();
    let basis_mat = RatMatrix::from_columns(rows, &cols);
    let target_vec = vec_of(target);
    let rhs = RatMatrix::from_columns(target_vec.len(), &[target_vec]);
    let sol = solve(&basis_mat, &rhs).expect("morphism lies in the hom space");
    (0..basis.len()).map(|r| sol.at(r, 0).clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::samples;
    use crate::linalg::rat;
    use crate::mackey::{fixed_point_functor, Representation};

    fn ctx_of(g: crate::group::Group) -> Arc<ReprSystem> {
        ReprSystem::with_default_bound(Arc::new(g)).unwrap()
    }

    #[test]
    fn burnside_green_c2_validates_and_matches_ring() {
        let ctx = ctx_of(samples::cyclic(2));
        let a = burnside_green(&ctx);
        assert!(validate_green(&a).passed());
        let table = burnside_ring_table(&ctx);
        // Basis order: [pt] then [G/e]. [pt]·[pt]=[pt], [pt]·[G/e]=[G/e],
        // [G/e]·[G/e]=2[G/e].
        assert_eq!(table[0][0], vec![rat(1), rat(0)]);
        assert_eq!(table[0][1], vec![rat(0), rat(1)]);
        assert_eq!(table[1][1], vec![rat(0), rat(2)]);
    }

    #[test]
    fn burnside_green_trivial_group() {
        let ctx = ctx_of(samples::cyclic(1));
        let a = burnside_green(&ctx);
        assert!(validate_green(&a).passed());
        let table = burnside_ring_table(&ctx);
        assert_eq!(table[0][0], vec![rat(1)]);
    }

    #[test]
    fn corrupted_mult_fails_validation() {
        let ctx = ctx_of(samples::cyclic(2));
        let a = burnside_green(&ctx);
        let mut mult = a.mult_table();
        mult[0][0] = mult[0][0].scale(&rat(2));
        let bad = GreenFunctor::new(a.underlying().clone(), mult, a.unit().to_vec());
        let report = validate_green(&bad);
        assert!(!report.passed());
    }

    #[test]
    fn burnside_oracle_orbit_counting() {
        // Structure constants equal orbit counts of products of coset spaces.
        for g in [
            samples::cyclic(2),
            samples::cyclic(3),
            samples::klein_four(),
            samples::symmetric3(),
        ] {
            let ctx = ctx_of(g);
            let table = burnside_ring_table(&ctx);
            let n = ctx.class_count();
            for a in 0..n {
                for b in 0..n {
                    let prod = product(ctx.coset(a), ctx.coset(b)).unwrap();
                    let mut counts = vec![0i64; n];
                    for orbit in ctx.decompose(&prod).orbits {
                        counts[orbit.class] += 1;
                    }
                    let expected: Vec<BigRational> = counts.into_iter().map(rat).collect();
                    assert_eq!(table[a][b], expected, "group table mismatch at ({a},{b})");
                }
            }
        }
    }

    #[test]
    fn dress_green_by_terminal_is_identity_like() {
        let ctx = ctx_of(samples::cyclic(2));
        let a = burnside_green(&ctx);
        let y = CrossedMonoid::terminal(ctx.group().clone());
        let ay = dress_green(&a, &y).unwrap();
        assert!(validate_green(&ay).passed());
        assert_eq!(ay.underlying().levels(), a.underlying().levels());
    }

    #[test]
    fn dress_green_by_group_monoid() {
        let ctx = ctx_of(samples::cyclic(2));
        let a = burnside_green(&ctx);
        let y = CrossedMonoid::group_as_crossed_monoid(ctx.group().clone());
        let ay = dress_green(&a, &y).unwrap();
        assert!(validate_green(&ay).passed());
    }

    #[test]
    fn regular_module_passes() {
        let ctx = ctx_of(samples::cyclic(2));
        let a = burnside_green(&ctx);
        let m = GreenModule::regular(&a);
        assert!(validate_module(&a, &m).passed());
    }

    #[test]
    fn dressed_module_passes() {
        let ctx = ctx_of(samples::cyclic(2));
        let a = burnside_green(&ctx);
        let free = crate::gset::coset_gset(ctx.group(), &[0]).unwrap();
        let m = GreenModule::dressed(&a, &free).unwrap();
        assert!(validate_module(&a, &m).passed());
    }

    #[test]
    fn corrupted_module_fails() {
        let ctx = ctx_of(samples::cyclic(2));
        let a = burnside_green(&ctx);
        let m = GreenModule::regular(&a);
        let mut action = m.action.clone();
        action[1][1] = action[1][1].scale(&rat(5));
        let bad = GreenModule::new(m.underlying().clone(), action);
        assert!(!validate_module(&a, &bad).passed());
    }

    #[test]
    fn module_hom_of_regular_is_a1() {
        let ctx = ctx_of(samples::cyclic(2));
        let a = burnside_green(&ctx);
        let m = GreenModule::regular(&a);
        let homs = module_hom(&a, &m, &m).unwrap();
        // Mod(A)(A, A) ≅ A(1×1) = A(1).
        assert_eq!(homs.len(), a.underlying().level_dim(0));
    }

    #[test]
    fn module_hom_over_burnside_is_full_hom_space() {
        let ctx = ctx_of(samples::cyclic(2));
        let a = burnside_green(&ctx);
        // Over J, module homs are plain Mackey morphisms; compare the
        // regular and dressed modules.
        let m1 = GreenModule::regular(&a);
        let free = crate::gset::coset_gset(ctx.group(), &[0]).unwrap();
        let m2 = GreenModule::dressed(&a, &free).unwrap();
        let module_homs = module_hom(&a, &m1, &m2).unwrap();
        let mackey_homs = hom_space(m1.underlying(), m2.underlying()).unwrap();
        assert_eq!(module_homs.len(), mackey_homs.len());
    }

    #[test]
    fn green_algebra_c1() {
        let ctx = ctx_of(samples::cyclic(1));
        let w = green_algebra(&burnside_green(&ctx));
        assert_eq!(w.dim, 1);
        assert!(w.validate());
    }

    #[test]
    fn green_algebra_c2_dimension_six() {
        let ctx = ctx_of(samples::cyclic(2));
        let w = green_algebra(&burnside_green(&ctx));
        assert_eq!(w.dim, 6);
        assert!(w.validate());
        // Idempotent-orthogonal decomposition of the unit.
        for i in 0..2 {
            for j in 0..2 {
                let prod = w.multiply(&w.idempotents[i], &w.idempotents[j]);
                if i == j {
                    assert_eq!(prod, w.idempotents[i]);
                } else {
                    assert!(prod.iter().all(|x| x.is_zero()));
                }
            }
        }
    }

    #[test]
    fn module_category_consistency() {
        let ctx = ctx_of(samples::cyclic(2));
        let a = burnside_green(&ctx);
        for u in 0..ctx.class_count() {
            for v in 0..ctx.class_count() {
                let mu = GreenModule::dressed(&a, ctx.coset(u)).unwrap();
                let mv = GreenModule::dressed(&a, ctx.coset(v)).unwrap();
                let homs = module_hom(&a, &mu, &mv).unwrap();
                let expected = a.underlying().eval_dim(ctx.rep_product(u, v));
                assert_eq!(homs.len(), expected, "at ({u},{v})");
            }
        }
    }

    #[test]
    fn endomorphism_green_functor_trivial_group() {
        let ctx = ctx_of(samples::cyclic(1));
        let j = crate::mackey::burnside_functor(&ctx);
        let e = green_from_rep_end(&j).unwrap();
        assert_eq!(e.underlying().levels(), &[1]);
        assert!(validate_green(&e).passed());
    }

    #[test]
    fn endomorphism_green_functor_c2_fixed_points() {
        let ctx = ctx_of(samples::cyclic(2));
        let triv = Representation::trivial(ctx.group().clone(), 1);
        let m = fixed_point_functor(&ctx, &triv);
        let e = green_from_rep_end(&m).unwrap();
        assert!(validate_green(&e).passed());
        // The unit is the coordinate vector of the identity morphism.
        let identity = MackeyMorphism::identity(&m);
        let ih = crate::convolution::internal_hom(&m, &m).unwrap();
        let expressed = express_in_basis(&ih.level_bases[0], &identity);
        assert_eq!(e.unit(), &expressed[..]);
    }

    #[test]
    fn cohomological_reports() {
        let ctx = ctx_of(samples::cyclic(2));
        let a = burnside_green(&ctx);
        assert!(!cohomological_green_report(&a).passed());
        let ctx1 = ctx_of(samples::cyclic(1));
        assert!(cohomological_green_report(&burnside_green(&ctx1)).passed());
    }
}
