//! JSON file formats: groups, G-sets, representations, Mackey and Green
//! functors, crossed G-sets.
//!
//! Rationals are written as strings "p/q" with the sign on the numerator;
//! "p" alone is accepted on input. Span components carry the full value
//! arrays of both legs in canonical order, and generator lists follow the
//! canonical class order, so emitted files are bit-exact stable.

use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::green::GreenFunctor;
use crate::group::Group;
use crate::gset::{GMap, GSet};
use crate::linalg::RatMatrix;
use crate::mackey::{MackeyFunctor, Representation};
use crate::reps::ReprSystem;
use crate::span::SpanComponent;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("io error reading {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid json in {path}: {source}")]
    Json {
        path: String,
        source: serde_json::Error,
    },
    #[error("invalid rational literal {0:?}")]
    BadRational(String),
    #[error("group validation failed: {0}")]
    Group(#[from] crate::group::GroupError),
    #[error("G-set validation failed: {0}")]
    GSet(#[from] crate::gset::GSetError),
    #[error("representation validation failed: {0}")]
    Rep(#[from] crate::mackey::RepError),
    #[error("functor shape invalid: {0}")]
    Mackey(#[from] crate::mackey::MackeyError),
    #[error("crossed G-set validation failed: {0}")]
    Crossed(#[from] crate::crossed::CrossedError),
    #[error("functor data does not validate: {0}")]
    Validation(String),
    #[error("generator list does not match the canonical span basis: {0}")]
    GeneratorMismatch(String),
    #[error("matrix has inconsistent row lengths")]
    RaggedMatrix,
    #[error("group reference must be an inline object or a path string")]
    BadGroupRef,
}

pub fn rational_to_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn rational_from_str(s: &str) -> Result<BigRational, FormatError> {
    let parse_int =
        |t: &str| BigInt::from_str(t.trim()).map_err(|_| FormatError::BadRational(s.to_string()));
    match s.split_once('/') {
        Some((p, q)) => {
            let denom = parse_int(q)?;
            if denom == BigInt::from(0) {
                return Err(FormatError::BadRational(s.to_string()));
            }
            Ok(BigRational::new(parse_int(p)?, denom))
        }
        None => Ok(BigRational::from_integer(parse_int(s)?)),
    }
}

pub fn matrix_to_json(m: &RatMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|r| {
            (0..m.cols())
                .map(|c| rational_to_string(m.at(r, c)))
                .collect()
        })
        .collect()
}

/// Parses a matrix with an expected shape (needed because a 0×n matrix has
/// no rows to infer the column count from).
pub fn matrix_from_json(
    rows: &[Vec<String>],
    want_rows: usize,
    want_cols: usize,
) -> Result<RatMatrix, FormatError> {
    if rows.len() != want_rows || rows.iter().any(|r| r.len() != want_cols) {
        return Err(FormatError::RaggedMatrix);
    }
    let mut m = RatMatrix::zeros(want_rows, want_cols);
    for (r, row) in rows.iter().enumerate() {
        for (c, s) in row.iter().enumerate() {
            m.set(r, c, rational_from_str(s)?);
        }
    }
    Ok(m)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupJson {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
}

impl GroupJson {
    pub fn of(group: &Group) -> GroupJson {
        GroupJson {
            order: group.order(),
            table: group.table().to_vec(),
        }
    }

    pub fn build(&self) -> Result<Group, FormatError> {
        Ok(Group::from_table(self.table.clone())?)
    }
}

/// A group reference: inline object or a path (relative to the referring
/// file).
pub fn group_from_value(value: &serde_json::Value, base: &Path) -> Result<Group, FormatError> {
    match value {
        serde_json::Value::Object(_) => {
            let gj: GroupJson =
                serde_json::from_value(value.clone()).map_err(|e| FormatError::Json {
                    path: "<inline group>".into(),
                    source: e,
                })?;
            gj.build()
        }
        serde_json::Value::String(s) => {
            let path = base.join(s);
            let gj: GroupJson = read_json(&path)?;
            gj.build()
        }
        _ => Err(FormatError::BadGroupRef),
    }
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, FormatError> {
    let text = std::fs::read_to_string(path).map_err(|e| FormatError::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    serde_json::from_str(&text).map_err(|e| FormatError::Json {
        path: path.display().to_string(),
        source: e,
    })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), FormatError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| FormatError::Json {
        path: path.display().to_string(),
        source: e,
    })?;
    std::fs::write(path, text + "\n").map_err(|e| FormatError::Io {
        path: path.display().to_string(),
        source: e,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GSetJson {
    pub group: serde_json::Value,
    pub size: usize,
    pub action: Vec<Vec<usize>>,
}

impl GSetJson {
    pub fn of(x: &GSet) -> GSetJson {
        GSetJson {
            group: serde_json::to_value(GroupJson::of(x.group())).expect("serializable"),
            size: x.size(),
            action: x.action().to_vec(),
        }
    }

    pub fn build(&self, base: &Path) -> Result<GSet, FormatError> {
        let group = Arc::new(group_from_value(&self.group, base)?);
        Ok(GSet::new(group, self.size, self.action.clone())?)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GMapJson {
    pub values: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RepresentationJson {
    pub group: serde_json::Value,
    pub dim: usize,
    pub matrices: Vec<Vec<Vec<String>>>,
}

impl RepresentationJson {
    pub fn of(rep: &Representation) -> RepresentationJson {
        RepresentationJson {
            group: serde_json::to_value(GroupJson::of(rep.group())).expect("serializable"),
            dim: rep.dim(),
            matrices: (0..rep.group().order())
                .map(|g| matrix_to_json(rep.matrix(g)))
                .collect(),
        }
    }

    pub fn build(&self, base: &Path) -> Result<Representation, FormatError> {
        let group = Arc::new(group_from_value(&self.group, base)?);
        let mats = self
            .matrices
            .iter()
            .map(|m| matrix_from_json(m, self.dim, self.dim))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Representation::new(group, self.dim, mats)?)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct SpanComponentJson {
    pub apex_class: usize,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct GeneratorSpanJson {
    pub source_class: usize,
    pub target_class: usize,
    pub components: Vec<SpanComponentJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeneratorJson {
    pub span: GeneratorSpanJson,
    pub matrix: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MackeyJson {
    pub group: serde_json::Value,
    pub levels: Vec<usize>,
    pub generators: Vec<GeneratorJson>,
}

/// The canonical serialization of one generator span between
/// representatives: a single connected component with full leg arrays.
pub fn generator_span_json(
    ctx: &ReprSystem,
    i: usize,
    j: usize,
    comp: &SpanComponent,
) -> GeneratorSpanJson {
    let (left, right) = ctx.component_maps(ctx.coset(i), ctx.coset(j), comp);
    GeneratorSpanJson {
        source_class: i,
        target_class: j,
        components: vec![SpanComponentJson {
            apex_class: comp.apex_class,
            left: left.values().to_vec(),
            right: right.values().to_vec(),
        }],
    }
}

impl MackeyJson {
    pub fn of(m: &MackeyFunctor) -> MackeyJson {
        let ctx = m.ctx();
        let mut generators = Vec::new();
        for i in 0..ctx.class_count() {
            for j in 0..ctx.class_count() {
                let basis = ctx.rep_basis(i, j).clone();
                for (b, comp) in basis.basis.iter().enumerate() {
                    generators.push(GeneratorJson {
                        span: generator_span_json(ctx, i, j, comp),
                        matrix: matrix_to_json(m.generator_matrix(i, j, b)),
                    });
                }
            }
        }
        MackeyJson {
            group: serde_json::to_value(GroupJson::of(ctx.group())).expect("serializable"),
            levels: m.levels().to_vec(),
            generators,
        }
    }

    /// Rebuilds a functor over a shared representative system. The
    /// generator list must match the canonical basis exactly; the result
    /// must pass full validation.
    pub fn build(&self, ctx: &Arc<ReprSystem>) -> Result<MackeyFunctor, FormatError> {
        let functor = self.build_unvalidated(ctx)?;
        let report = functor.validate();
        if !report.passed() {
            return Err(FormatError::Validation(report.failures[0].to_string()));
        }
        Ok(functor)
    }

    /// As [`build`](Self::build) but skips the functoriality validation —
    /// for check commands that report the validation outcome themselves.
    pub fn build_unvalidated(&self, ctx: &Arc<ReprSystem>) -> Result<MackeyFunctor, FormatError> {
        let n = ctx.class_count();
        if self.levels.len() != n {
            return Err(FormatError::GeneratorMismatch(format!(
                "expected {n} levels, found {}",
                self.levels.len()
            )));
        }
        let mut expected = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let basis = ctx.rep_basis(i, j).clone();
                for comp in &basis.basis {
                    expected.push((i, j, *comp));
                }
            }
        }
        if expected.len() != self.generators.len() {
            return Err(FormatError::GeneratorMismatch(format!(
                "expected {} generators, found {}",
                expected.len(),
                self.generators.len()
            )));
        }
        let mut action: Vec<Vec<Vec<RatMatrix>>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| Vec::with_capacity(ctx.rep_basis(i, j).dimension()))
                    .collect()
            })
            .collect();
        for (gen, (i, j, comp)) in self.generators.iter().zip(expected.iter()) {
            let canonical = generator_span_json(ctx, *i, *j, comp);
            if gen.span != canonical {
                return Err(FormatError::GeneratorMismatch(format!(
                    "generator for classes ({i}, {j}) is not in canonical form"
                )));
            }
            let m = matrix_from_json(&gen.matrix, self.levels[*j], self.levels[*i])?;
            action[*i][*j].push(m);
        }
        Ok(MackeyFunctor::new(
            ctx.clone(),
            self.levels.clone(),
            action,
        )?)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MultJson {
    pub i: usize,
    pub j: usize,
    pub matrix: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GreenJson {
    #[serde(flatten)]
    pub mackey: MackeyJson,
    pub mult: Vec<MultJson>,
    pub unit: Vec<String>,
}

impl GreenJson {
    pub fn of(a: &GreenFunctor) -> GreenJson {
        let ctx = a.ctx();
        let n = ctx.class_count();
        let mut mult = Vec::new();
        for i in 0..n {
            for j in 0..n {
                mult.push(MultJson {
                    i,
                    j,
                    matrix: matrix_to_json(a.mult(i, j)),
                });
            }
        }
        GreenJson {
            mackey: MackeyJson::of(a.underlying()),
            mult,
            unit: a.unit().iter().map(rational_to_string).collect(),
        }
    }

    pub fn build(&self, ctx: &Arc<ReprSystem>) -> Result<GreenFunctor, FormatError> {
        let green = self.build_unvalidated(ctx, true)?;
        let report = crate::green::validate_green(&green);
        if !report.passed() {
            return Err(FormatError::Validation(report.failures[0].to_string()));
        }
        Ok(green)
    }

    /// Builds without running the Green-axiom validator; when
    /// `validate_underlying` is false the Mackey validator is skipped too.
    pub fn build_unvalidated(
        &self,
        ctx: &Arc<ReprSystem>,
        validate_underlying: bool,
    ) -> Result<GreenFunctor, FormatError> {
        let underlying = if validate_underlying {
            self.mackey.build(ctx)?
        } else {
            self.mackey.build_unvalidated(ctx)?
        };
        let n = ctx.class_count();
        let mut mult = vec![vec![RatMatrix::zeros(0, 0); n]; n];
        let mut seen = vec![vec![false; n]; n];
        for entry in &self.mult {
            if entry.i >= n || entry.j >= n {
                return Err(FormatError::GeneratorMismatch(format!(
                    "multiplication entry ({}, {}) out of range",
                    entry.i, entry.j
                )));
            }
            let rows = underlying.eval_dim(ctx.rep_product(entry.i, entry.j));
            let cols = underlying.level_dim(entry.i) * underlying.level_dim(entry.j);
            mult[entry.i][entry.j] = matrix_from_json(&entry.matrix, rows, cols)?;
            seen[entry.i][entry.j] = true;
        }
        if seen.iter().flatten().any(|s| !s) {
            return Err(FormatError::GeneratorMismatch(
                "missing multiplication components".to_string(),
            ));
        }
        let unit = self
            .unit
            .iter()
            .map(|s| rational_from_str(s))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(GreenFunctor::new(underlying, mult, unit))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CrossedJson {
    pub gset: GSetJson,
    pub grading: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mult: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unit: Option<usize>,
}

impl CrossedJson {
    pub fn of_monoid(m: &crate::crossed::CrossedMonoid) -> CrossedJson {
        CrossedJson {
            gset: GSetJson::of(m.crossed.carrier()),
            grading: m.crossed.grading().to_vec(),
            mult: Some(m.mult.values().to_vec()),
            unit: Some(m.unit),
        }
    }

    pub fn build_crossed(&self, base: &Path) -> Result<crate::crossed::CrossedGSet, FormatError> {
        let carrier = self.gset.build(base)?;
        Ok(crate::crossed::CrossedGSet::new(
            carrier,
            self.grading.clone(),
        )?)
    }

    pub fn build_monoid(&self, base: &Path) -> Result<crate::crossed::CrossedMonoid, FormatError> {
        let crossed = self.build_crossed(base)?;
        let (Some(mult_values), Some(unit)) = (&self.mult, self.unit) else {
            return Err(FormatError::Validation(
                "crossed G-set lacks a monoid structure (mult/unit)".to_string(),
            ));
        };
        let carrier = crossed.carrier().clone();
        let prod = crate::gset::product(&carrier, &carrier)?;
        let mult = GMap::new(prod, carrier, mult_values.clone())?;
        crate::crossed::CrossedMonoid::new(crossed, mult, unit).map_err(|report| {
            FormatError::Validation(format!("crossed monoid axioms fail: {:?}", report.failures))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::samples;
    use crate::linalg::{rat, ratio};

    #[test]
    fn rational_round_trip() {
        for r in [rat(0), rat(5), rat(-3), ratio(7, 2), ratio(-1, 3)] {
            let s = rational_to_string(&r);
            assert_eq!(rational_from_str(&s).unwrap(), r);
        }
        assert_eq!(rational_from_str("4").unwrap(), rat(4));
        assert!(rational_from_str("1/0").is_err());
        assert!(rational_from_str("x").is_err());
    }

    #[test]
    fn mackey_round_trip() {
        let ctx = ReprSystem::with_default_bound(Arc::new(samples::symmetric3())).unwrap();
        let j = crate::mackey::burnside_functor(&ctx);
        let json = MackeyJson::of(&j);
        let text = serde_json::to_string(&json).unwrap();
        let parsed: MackeyJson = serde_json::from_str(&text).unwrap();
        let rebuilt = parsed.build(&ctx).unwrap();
        assert_eq!(rebuilt.levels(), j.levels());
        for i in 0..ctx.class_count() {
            for jj in 0..ctx.class_count() {
                for b in 0..ctx.rep_basis(i, jj).dimension() {
                    assert_eq!(
                        rebuilt.generator_matrix(i, jj, b),
                        j.generator_matrix(i, jj, b)
                    );
                }
            }
        }
    }

    #[test]
    fn corrupted_matrix_fails_load_validation() {
        let ctx = ReprSystem::with_default_bound(Arc::new(samples::cyclic(2))).unwrap();
        let j = crate::mackey::burnside_functor(&ctx);
        let mut json = MackeyJson::of(&j);
        // Scale one nonzero generator matrix: functoriality breaks.
        for gen in json.generators.iter_mut() {
            if gen.matrix.iter().flatten().any(|s| s != "0/1")
                && gen.span.source_class != gen.span.target_class
            {
                for row in gen.matrix.iter_mut() {
                    for v in row.iter_mut() {
                        if v != "0/1" {
                            *v = "7/1".to_string();
                        }
                    }
                }
                break;
            }
        }
        assert!(matches!(json.build(&ctx), Err(FormatError::Validation(_))));
    }

    #[test]
    fn green_round_trip() {
        let ctx = ReprSystem::with_default_bound(Arc::new(samples::cyclic(2))).unwrap();
        let a = crate::green::burnside_green(&ctx);
        let json = GreenJson::of(&a);
        let text = serde_json::to_string(&json).unwrap();
        let parsed: GreenJson = serde_json::from_str(&text).unwrap();
        let rebuilt = parsed.build(&ctx).unwrap();
        assert_eq!(rebuilt.unit(), a.unit());
        assert_eq!(rebuilt.mult(1, 1), a.mult(1, 1));
    }

    #[test]
    fn representation_round_trip() {
        let group = Arc::new(samples::cyclic(2));
        let rep = crate::mackey::linearize_gset(&crate::gset::coset_gset(&group, &[0]).unwrap());
        let json = RepresentationJson::of(&rep);
        let text = serde_json::to_string(&json).unwrap();
        let parsed: RepresentationJson = serde_json::from_str(&text).unwrap();
        let rebuilt = parsed.build(Path::new(".")).unwrap();
        assert_eq!(rebuilt, rep);
    }
}
