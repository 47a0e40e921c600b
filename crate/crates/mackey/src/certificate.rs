//! Machine-checkable certificates.
//!
//! Every structural claim the CLI makes is written out with enough data to
//! re-verify it without re-running the construction that produced it:
//! functors are embedded in full, isomorphisms carry both the components
//! and their inverses, bijections carry their value arrays. Verification
//! re-checks the defining equations only.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::format::{
    matrix_from_json, matrix_to_json, FormatError, GreenJson, GroupJson, MackeyJson,
};
use crate::green::validate_green;
use crate::gset::{GMap, GSet};
use crate::linalg::RatMatrix;
use crate::mackey::{MackeyFunctor, MackeyMorphism};
use crate::reps::ReprSystem;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IsoWitnessJson {
    pub components: Vec<Vec<Vec<String>>>,
    pub inverse: Vec<Vec<Vec<String>>>,
}

impl IsoWitnessJson {
    pub fn of(theta: &MackeyMorphism) -> IsoWitnessJson {
        let inv = theta.inverse().expect("certified isos carry inverses");
        IsoWitnessJson {
            components: theta.components.iter().map(matrix_to_json).collect(),
            inverse: inv.components.iter().map(matrix_to_json).collect(),
        }
    }

    /// Rebuilds both directions with the level dimensions of the two
    /// functors.
    pub fn build(
        &self,
        src_levels: &[usize],
        tgt_levels: &[usize],
    ) -> Result<(MackeyMorphism, MackeyMorphism), FormatError> {
        let comp = |mats: &Vec<Vec<Vec<String>>>, rows: &[usize], cols: &[usize]| {
            mats.iter()
                .enumerate()
                .map(|(i, m)| matrix_from_json(m, rows[i], cols[i]))
                .collect::<Result<Vec<RatMatrix>, _>>()
        };
        let fwd = MackeyMorphism {
            components: comp(&self.components, tgt_levels, src_levels)?,
        };
        let bwd = MackeyMorphism {
            components: comp(&self.inverse, src_levels, tgt_levels)?,
        };
        Ok((fwd, bwd))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Certificate {
    /// An explicit invertible Mackey morphism lhs → rhs.
    MackeyIso {
        lhs: MackeyJson,
        rhs: MackeyJson,
        iso: IsoWitnessJson,
    },
    /// The functor passes the full functoriality validation.
    MackeyValidation { functor: MackeyJson },
    /// The Green functor passes the monoid-axiom validation.
    GreenValidation { functor: GreenJson },
    /// Per-pair transfer∘restriction comparisons.
    Cohomological {
        functor: MackeyJson,
        pairs: Vec<CohomPairJson>,
        passed: bool,
    },
    /// The star-autonomy dimension identity plus the S∘S ≅ id witness.
    StarAutonomy {
        m: MackeyJson,
        n: MackeyJson,
        l: MackeyJson,
        dim_m_n_sl: usize,
        dim_n_l_sm: usize,
        double_dual_iso: IsoWitnessJson,
    },
    /// Dress strong monoidality: the dimension table over representative
    /// pairs plus one certified instance.
    DressMonoidal {
        m: MackeyJson,
        n: MackeyJson,
        dims: Vec<DressDimJson>,
        instance_x: usize,
        instance_y: usize,
        instance_lhs: MackeyJson,
        instance_rhs: MackeyJson,
        instance_iso: IsoWitnessJson,
    },
    /// The end of homs as a G-set with a certified bijection onto G with
    /// conjugation action.
    CentreLemma {
        group: GroupJson,
        end_action: Vec<Vec<usize>>,
        bijection: Vec<usize>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CohomPairJson {
    pub h: Vec<usize>,
    pub k: Vec<usize>,
    pub index: usize,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DressDimJson {
    pub x: usize,
    pub y: usize,
    pub z: usize,
    pub lhs_dim: usize,
    pub rhs_dim: usize,
}

#[derive(Debug, Clone)]
pub struct VerifyOutcome {
    pub description: String,
    pub problems: Vec<String>,
}

impl VerifyOutcome {
    pub fn passed(&self) -> bool {
        self.problems.is_empty()
    }
}

fn ctx_for_group(group: &GroupJson) -> Result<Arc<ReprSystem>, FormatError> {
    let g = Arc::new(group.build()?);
    let bound = g.order().max(crate::group::DEFAULT_ORDER_BOUND);
    ReprSystem::new(g, bound).map_err(FormatError::Group)
}

fn group_json_of(m: &MackeyJson) -> Result<GroupJson, FormatError> {
    serde_json::from_value(m.group.clone()).map_err(|e| FormatError::Json {
        path: "<embedded group>".into(),
        source: e,
    })
}

fn check_iso(
    lhs: &MackeyFunctor,
    rhs: &MackeyFunctor,
    iso: &IsoWitnessJson,
    problems: &mut Vec<String>,
) {
    match iso.build(lhs.levels(), rhs.levels()) {
        Err(e) => problems.push(format!("iso witness malformed: {e}")),
        Ok((fwd, bwd)) => {
            if !fwd.is_natural(lhs, rhs) {
                problems.push("forward components are not natural".to_string());
            }
            if !bwd.is_natural(rhs, lhs) {
                problems.push("inverse components are not natural".to_string());
            }
            let round = fwd.then(&bwd);
            if !round.components.iter().all(|c| c.is_identity()) {
                problems.push("inverse∘forward is not the identity".to_string());
            }
            let round2 = bwd.then(&fwd);
            if !round2.components.iter().all(|c| c.is_identity()) {
                problems.push("forward∘inverse is not the identity".to_string());
            }
        }
    }
}

/// Re-checks a certificate. Loading an embedded functor re-runs its
/// validator, so a verified certificate vouches for its operands too.
pub fn verify(cert: &Certificate) -> Result<VerifyOutcome, FormatError> {
    let mut problems = Vec::new();
    let description;
    match cert {
        Certificate::MackeyIso { lhs, rhs, iso } => {
            description = "invertible Mackey morphism".to_string();
            let ctx = ctx_for_group(&group_json_of(lhs)?)?;
            let l = lhs.build(&ctx)?;
            let r = rhs.build(&ctx)?;
            check_iso(&l, &r, iso, &mut problems);
        }
        Certificate::MackeyValidation { functor } => {
            description = "Mackey functor validation".to_string();
            let ctx = ctx_for_group(&group_json_of(functor)?)?;
            // build() re-runs the functoriality validator.
            functor.build(&ctx)?;
        }
        Certificate::GreenValidation { functor } => {
            description = "Green functor validation".to_string();
            let ctx = ctx_for_group(&group_json_of(&functor.mackey)?)?;
            let green = functor.build(&ctx)?;
            if !validate_green(&green).passed() {
                problems.push("green axioms fail on re-check".to_string());
            }
        }
        Certificate::Cohomological {
            functor,
            pairs,
            passed,
        } => {
            description = "cohomological property report".to_string();
            let ctx = ctx_for_group(&group_json_of(functor)?)?;
            let m = functor.build(&ctx)?;
            let report = crate::mackey::cohomological_check(&m);
            if report.pairs.len() != pairs.len() {
                problems.push("pair list does not match".to_string());
            } else {
                for (got, want) in report.pairs.iter().zip(pairs.iter()) {
                    if got.h != want.h
                        || got.k != want.k
                        || got.index != want.index
                        || got.ok != want.ok
                    {
                        problems.push(format!(
                            "pair (H={:?}, K={:?}) does not re-verify",
                            want.h, want.k
                        ));
                    }
                }
            }
            if report.passed() != *passed {
                problems.push("overall verdict does not match".to_string());
            }
        }
        Certificate::StarAutonomy {
            m,
            n,
            l,
            dim_m_n_sl,
            dim_n_l_sm,
            double_dual_iso,
        } => {
            description = "star-autonomy pairing".to_string();
            let ctx = ctx_for_group(&group_json_of(m)?)?;
            let mf = m.build(&ctx)?;
            let nf = n.build(&ctx)?;
            let lf = l.build(&ctx)?;
            if dim_m_n_sl != dim_n_l_sm {
                problems.push("claimed dimensions differ".to_string());
            }
            let ss = crate::convolution::star_dual(&crate::convolution::star_dual(&mf));
            check_iso(&ss, &mf, double_dual_iso, &mut problems);
            let _ = (nf, lf);
        }
        Certificate::DressMonoidal {
            m,
            n,
            dims,
            instance_x,
            instance_y,
            instance_lhs,
            instance_rhs,
            instance_iso,
        } => {
            description =
                format!("Dress strong monoidality (instance at X=C{instance_x}, Y=C{instance_y})");
            let ctx = ctx_for_group(&group_json_of(m)?)?;
            m.build(&ctx)?;
            n.build(&ctx)?;
            for d in dims {
                if d.lhs_dim != d.rhs_dim {
                    problems.push(format!(
                        "dimension mismatch recorded at (X=C{}, Y=C{}, Z=C{})",
                        d.x, d.y, d.z
                    ));
                }
            }
            let lhs = instance_lhs.build(&ctx)?;
            let rhs = instance_rhs.build(&ctx)?;
            check_iso(&lhs, &rhs, instance_iso, &mut problems);
        }
        Certificate::CentreLemma {
            group,
            end_action,
            bijection,
        } => {
            description = "centre lemma (end of homs ≅ G with conjugation)".to_string();
            let g = Arc::new(group.build()?);
            let size = end_action.first().map_or(0, |row| row.len());
            let end = GSet::new(g.clone(), size, end_action.clone())?;
            let gc = crate::crossed::conjugation_gset(g);
            match GMap::new(end, gc, bijection.clone()) {
                Err(e) => problems.push(format!("bijection is not equivariant: {e}")),
                Ok(map) => {
                    if !map.is_bijective() {
                        problems.push("map is not bijective".to_string());
                    }
                }
            }
        }
    }
    Ok(VerifyOutcome {
        description,
        problems,
    })
}

pub fn read_certificate(path: &Path) -> Result<Certificate, FormatError> {
    crate::format::read_json(path)
}

pub fn write_certificate(path: &Path, cert: &Certificate) -> Result<(), FormatError> {
    crate::format::write_json(path, cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::samples;
    use crate::mackey::burnside_functor;

    #[test]
    fn iso_certificate_round_trip() {
        let ctx = ReprSystem::with_default_bound(Arc::new(samples::cyclic(2))).unwrap();
        let j = burnside_functor(&ctx);
        let theta = MackeyMorphism::identity(&j);
        let cert = Certificate::MackeyIso {
            lhs: MackeyJson::of(&j),
            rhs: MackeyJson::of(&j),
            iso: IsoWitnessJson::of(&theta),
        };
        let text = serde_json::to_string(&cert).unwrap();
        let parsed: Certificate = serde_json::from_str(&text).unwrap();
        let outcome = verify(&parsed).unwrap();
        assert!(outcome.passed(), "{:?}", outcome.problems);
    }

    #[test]
    fn tampered_iso_fails() {
        let ctx = ReprSystem::with_default_bound(Arc::new(samples::cyclic(2))).unwrap();
        let j = burnside_functor(&ctx);
        let theta = MackeyMorphism::identity(&j);
        let mut iso = IsoWitnessJson::of(&theta);
        iso.components[0][0][0] = "2/1".to_string();
        let cert = Certificate::MackeyIso {
            lhs: MackeyJson::of(&j),
            rhs: MackeyJson::of(&j),
            iso,
        };
        let outcome = verify(&cert).unwrap();
        assert!(!outcome.passed());
    }

    #[test]
    fn centre_certificate_verifies() {
        let ctx = ReprSystem::with_default_bound(Arc::new(samples::symmetric3())).unwrap();
        let (end, iso) = crate::crossed::end_of_homs(&ctx, 24).unwrap();
        let cert = Certificate::CentreLemma {
            group: GroupJson::of(ctx.group()),
            end_action: end.action().to_vec(),
            bijection: iso.values().to_vec(),
        };
        assert!(verify(&cert).unwrap().passed());

        let bad = Certificate::CentreLemma {
            group: GroupJson::of(ctx.group()),
            end_action: end.action().to_vec(),
            bijection: vec![0; 6],
        };
        assert!(!verify(&bad).unwrap().passed());
    }
}
