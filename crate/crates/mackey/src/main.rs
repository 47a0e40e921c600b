//! Command-line front end: load groups, G-sets, representations and
//! functors from JSON files, run constructions and checks, and emit
//! human-readable tables plus machine-checkable certificates.
//!
//! Exit codes: 0 on success, 1 on a mathematical failure (a check that
//! does not hold, an isomorphism that does not exist, a certificate that
//! does not verify), 2 on usage errors (missing or invalid files).

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use mackey::certificate::{
    read_certificate, verify, write_certificate, Certificate, CohomPairJson, DressDimJson,
    IsoWitnessJson,
};
use mackey::convolution::{convolve, internal_hom, star_dual, star_pairing_check};
use mackey::crossed::end_of_homs;
use mackey::format::{
    group_from_value, rational_to_string, read_json, write_json, FormatError, GreenJson, GroupJson,
    MackeyJson, RepresentationJson,
};
use mackey::green::{
    burnside_green, burnside_ring_table, dress_green, green_algebra, validate_green,
};
use mackey::group::{Group, DEFAULT_ORDER_BOUND};
use mackey::mackey::{
    cohomological_check, dress, fixed_point_functor, hom_space, MackeyFunctor, MackeyMorphism,
};
use mackey::morphism_search::find_invertible;
use mackey::reps::ReprSystem;

#[derive(Parser)]
#[command(
    name = "mackey",
    version,
    about = "Exact computer algebra for Mackey and Green functors"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutArg {
    /// Write the result (functor JSON or certificate) to this path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BoundArg {
    /// Override the subgroup-enumeration order bound (default 24).
    #[arg(long)]
    bound: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Burnside functor levels and the Burnside ring table.
    Burnside {
        #[arg(long)]
        group: PathBuf,
        /// Also print the Green algebra W_J (dimension, structure constants).
        #[arg(long)]
        algebra: bool,
        #[command(flatten)]
        out: OutArg,
        #[command(flatten)]
        bound: BoundArg,
    },
    /// Build the fixed-point Mackey functor of a representation.
    Fixpoint {
        /// Representation JSON file.
        #[arg(long)]
        rep: PathBuf,
        #[command(flatten)]
        out: OutArg,
        #[command(flatten)]
        bound: BoundArg,
    },
    /// Day convolution of two Mackey functors.
    Tensor {
        #[arg(long)]
        lhs: PathBuf,
        #[arg(long)]
        rhs: PathBuf,
        #[command(flatten)]
        out: OutArg,
        #[command(flatten)]
        bound: BoundArg,
    },
    /// Internal hom of two Mackey functors.
    Hom {
        #[arg(long)]
        lhs: PathBuf,
        #[arg(long)]
        rhs: PathBuf,
        #[command(flatten)]
        out: OutArg,
        #[command(flatten)]
        bound: BoundArg,
    },
    /// Star dual of a Mackey functor.
    Stardual {
        #[arg(long)]
        functor: PathBuf,
        #[command(flatten)]
        out: OutArg,
        #[command(flatten)]
        bound: BoundArg,
    },
    /// Dress construction: shift a functor by a G-set (or a Green functor
    /// by a crossed monoid).
    Dress {
        #[arg(long)]
        functor: PathBuf,
        /// G-set JSON, or crossed G-set JSON when the functor is Green.
        #[arg(long)]
        rhs: PathBuf,
        #[command(flatten)]
        out: OutArg,
        #[command(flatten)]
        bound: BoundArg,
    },
    /// The Green algebra of a Green functor.
    Greenalg {
        #[arg(long)]
        functor: PathBuf,
        #[command(flatten)]
        out: OutArg,
        #[command(flatten)]
        bound: BoundArg,
    },
    /// Find an explicit isomorphism between two Mackey functors.
    Iso {
        lhs: PathBuf,
        rhs: PathBuf,
        #[command(flatten)]
        out: OutArg,
        #[command(flatten)]
        bound: BoundArg,
    },
    /// Structural checks; exit 0 on pass, 1 on mathematical failure.
    #[command(subcommand)]
    Check(CheckCommand),
    /// Re-verify a previously emitted certificate.
    VerifyCertificate { certificate: PathBuf },
}

#[derive(Subcommand)]
enum CheckCommand {
    /// Validate the Mackey functor axioms (functoriality over generators).
    Mackey {
        #[arg(long)]
        functor: PathBuf,
        #[command(flatten)]
        out: OutArg,
        #[command(flatten)]
        bound: BoundArg,
    },
    /// Validate the Green functor monoid axioms.
    Green {
        #[arg(long)]
        functor: PathBuf,
        #[command(flatten)]
        out: OutArg,
        #[command(flatten)]
        bound: BoundArg,
    },
    /// Check transfer∘restriction = index·id for all subgroup pairs.
    Cohomological {
        #[arg(long)]
        functor: PathBuf,
        #[command(flatten)]
        out: OutArg,
        #[command(flatten)]
        bound: BoundArg,
    },
    /// Check the pairing identity dim Mky(M*N, S L) = dim Mky(N*L, S M).
    StarAutonomy {
        #[arg(long)]
        lhs: PathBuf,
        #[arg(long)]
        rhs: PathBuf,
        /// The third functor L.
        #[arg(long)]
        functor: PathBuf,
        #[command(flatten)]
        out: OutArg,
        #[command(flatten)]
        bound: BoundArg,
    },
    /// Check dim (M_X*N_Y)(Z) = dim (M*N)_{X×Y}(Z) over representatives,
    /// with one certified isomorphism instance.
    DressMonoidal {
        #[arg(long)]
        lhs: PathBuf,
        #[arg(long)]
        rhs: PathBuf,
        #[command(flatten)]
        out: OutArg,
        #[command(flatten)]
        bound: BoundArg,
    },
    /// Compute the end of homs and certify it isomorphic to G with the
    /// conjugation action.
    CentreLemma {
        #[arg(long)]
        group: PathBuf,
        #[command(flatten)]
        out: OutArg,
        #[command(flatten)]
        bound: BoundArg,
    },
}

/// Loaded objects keyed by group table, so operands over the same group
/// share one representative system.
struct Workspace {
    bound: usize,
    systems: Vec<Arc<ReprSystem>>,
}

enum CliError {
    Usage(String),
    Math(String),
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        CliError::Usage(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

impl Workspace {
    fn new(bound: Option<usize>) -> Workspace {
        Workspace {
            bound: bound.unwrap_or(DEFAULT_ORDER_BOUND),
            systems: Vec::new(),
        }
    }

    fn system_for(&mut self, group: Group) -> CliResult<Arc<ReprSystem>> {
        if let Some(sys) = self.systems.iter().find(|s| s.group().as_ref() == &group) {
            return Ok(sys.clone());
        }
        let sys = ReprSystem::new(Arc::new(group), self.bound)
            .map_err(|e| CliError::Usage(e.to_string()))?;
        self.systems.push(sys.clone());
        Ok(sys)
    }

    fn load_group(&mut self, path: &Path) -> CliResult<Arc<ReprSystem>> {
        let gj: GroupJson = read_json(path)?;
        self.system_for(gj.build()?)
    }

    fn load_mackey(&mut self, path: &Path, validate: bool) -> CliResult<MackeyFunctor> {
        let mj: MackeyJson = read_json(path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        let group = group_from_value(&mj.group, base)?;
        let ctx = self.system_for(group)?;
        let built = if validate {
            mj.build(&ctx)
        } else {
            mj.build_unvalidated(&ctx)
        };
        Ok(built?)
    }

    fn load_green(
        &mut self,
        path: &Path,
        validate: bool,
    ) -> CliResult<mackey::green::GreenFunctor> {
        let gj: GreenJson = read_json(path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        let group = group_from_value(&gj.mackey.group, base)?;
        let ctx = self.system_for(group)?;
        let built = if validate {
            gj.build(&ctx)
        } else {
            gj.build_unvalidated(&ctx, false)
        };
        Ok(built?)
    }
}

fn is_green_file(path: &Path) -> CliResult<bool> {
    let value: serde_json::Value = read_json(path)?;
    Ok(value.get("mult").is_some())
}

fn save_out<T: serde::Serialize>(out: &OutArg, value: &T, what: &str) -> CliResult<()> {
    if let Some(path) = &out.out {
        write_json(path, value)?;
        println!("wrote {what} to {}", path.display());
    }
    Ok(())
}

fn save_certificate(out: &OutArg, cert: &Certificate) -> CliResult<()> {
    if let Some(path) = &out.out {
        write_certificate(path, cert)?;
        println!("wrote certificate to {}", path.display());
    }
    Ok(())
}

fn find_iso_certified(lhs: &MackeyFunctor, rhs: &MackeyFunctor) -> CliResult<MackeyMorphism> {
    if lhs.levels() != rhs.levels() {
        return Err(CliError::Math(format!(
            "level dimensions differ: {:?} vs {:?}",
            lhs.levels(),
            rhs.levels()
        )));
    }
    let basis = hom_space(lhs, rhs).map_err(|e| CliError::Usage(e.to_string()))?;
    find_invertible(&basis)
        .ok_or_else(|| CliError::Math("no invertible morphism found in the hom space".to_string()))
}

fn cmd_burnside(group: &Path, algebra: bool, out: &OutArg, bound: Option<usize>) -> CliResult<()> {
    let mut ws = Workspace::new(bound);
    let ctx = ws.load_group(group)?;
    let j = mackey::mackey::burnside_functor(&ctx);
    println!(
        "group order {}, {} subgroup classes",
        ctx.group().order(),
        ctx.class_count()
    );
    println!("Burnside functor levels: {:?}", j.levels());
    let table = burnside_ring_table(&ctx);
    println!(
        "Burnside ring at the top level (basis [C0..C{}]):",
        table.len() - 1
    );
    for (a, row) in table.iter().enumerate() {
        for (b, coeffs) in row.iter().enumerate() {
            let terms: Vec<String> = coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
                .map(|(k, c)| format!("{}·[C{k}]", rational_to_string(c)))
                .collect();
            let rhs = if terms.is_empty() {
                "0".to_string()
            } else {
                terms.join(" + ")
            };
            println!("  [C{a}]·[C{b}] = {rhs}");
        }
    }
    if algebra {
        let green = burnside_green(&ctx);
        let w = green_algebra(&green);
        println!("Green algebra W_J: dimension {}", w.dim);
        println!("  associative with two-sided unit: {}", w.validate());
        print_algebra_products(&w);
    }
    // The emitted file carries the full Green structure; Mackey-level
    // commands ignore the extra fields.
    save_out(
        out,
        &GreenJson::of(&burnside_green(&ctx)),
        "Burnside functor",
    )?;
    Ok(())
}

fn print_algebra_products(w: &mackey::green::GreenAlgebra) {
    let n = w.entry_dims.len();
    println!("  structure constants (nonzero products of basis elements):");
    for i in 0..n {
        for j in 0..n {
            for a in 0..w.entry_dims[i][j] {
                for k in 0..n {
                    for b in 0..w.entry_dims[j][k] {
                        let x = w.basis_element(i, j, a);
                        let y = w.basis_element(j, k, b);
                        let prod = w.multiply(&x, &y);
                        let terms: Vec<String> = prod
                            .iter()
                            .enumerate()
                            .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
                            .map(|(idx, c)| format!("{}·w{idx}", rational_to_string(c)))
                            .collect();
                        if !terms.is_empty() {
                            let xi = w.offsets[i][j] + a;
                            let yi = w.offsets[j][k] + b;
                            println!("    w{xi}·w{yi} = {}", terms.join(" + "));
                        }
                    }
                }
            }
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Burnside {
            group,
            algebra,
            out,
            bound,
        } => cmd_burnside(&group, algebra, &out, bound.bound),
        Command::Fixpoint { rep, out, bound } => {
            let mut ws = Workspace::new(bound.bound);
            let rj: RepresentationJson = read_json(&rep)?;
            let base = rep.parent().unwrap_or(Path::new("."));
            let group = group_from_value(&rj.group, base)?;
            let ctx = ws.system_for(group)?;
            let r = rj.build(base)?;
            let m = fixed_point_functor(&ctx, &r);
            println!("fixed-point functor levels: {:?}", m.levels());
            save_out(&out, &MackeyJson::of(&m), "fixed-point functor")?;
            Ok(())
        }
        Command::Tensor {
            lhs,
            rhs,
            out,
            bound,
        } => {
            let mut ws = Workspace::new(bound.bound);
            let l = ws.load_mackey(&lhs, true)?;
            let r = ws.load_mackey(&rhs, true)?;
            let conv = convolve(&l, &r).map_err(|e| CliError::Usage(e.to_string()))?;
            println!("tensor product levels: {:?}", conv.functor.levels());
            save_out(&out, &MackeyJson::of(&conv.functor), "tensor product")?;
            Ok(())
        }
        Command::Hom {
            lhs,
            rhs,
            out,
            bound,
        } => {
            let mut ws = Workspace::new(bound.bound);
            let l = ws.load_mackey(&lhs, true)?;
            let r = ws.load_mackey(&rhs, true)?;
            let ih = internal_hom(&l, &r).map_err(|e| CliError::Usage(e.to_string()))?;
            println!("internal hom levels: {:?}", ih.functor.levels());
            save_out(&out, &MackeyJson::of(&ih.functor), "internal hom")?;
            Ok(())
        }
        Command::Stardual {
            functor,
            out,
            bound,
        } => {
            let mut ws = Workspace::new(bound.bound);
            let m = ws.load_mackey(&functor, true)?;
            let s = star_dual(&m);
            println!("star dual levels: {:?}", s.levels());
            save_out(&out, &MackeyJson::of(&s), "star dual")?;
            Ok(())
        }
        Command::Dress {
            functor,
            rhs,
            out,
            bound,
        } => {
            let mut ws = Workspace::new(bound.bound);
            let base = rhs.parent().unwrap_or(Path::new(".")).to_path_buf();
            let rhs_value: serde_json::Value = read_json(&rhs)?;
            let rhs_is_crossed_monoid =
                rhs_value.get("gset").is_some() && rhs_value.get("mult").is_some();
            if is_green_file(&functor)? && rhs_is_crossed_monoid {
                let a = ws.load_green(&functor, true)?;
                let cj: mackey::format::CrossedJson = read_json(&rhs)?;
                let monoid = cj.build_monoid(&base)?;
                let ay = dress_green(&a, &monoid).map_err(|e| CliError::Usage(e.to_string()))?;
                let report = validate_green(&ay);
                if !report.passed() {
                    return Err(CliError::Math(format!(
                        "dressed Green functor fails validation: {}",
                        report.failures[0]
                    )));
                }
                println!(
                    "dressed Green functor levels: {:?}",
                    ay.underlying().levels()
                );
                save_out(&out, &GreenJson::of(&ay), "dressed Green functor")?;
            } else {
                let m = ws.load_mackey(&functor, true)?;
                let y = if rhs_value.get("gset").is_some() {
                    let cj: mackey::format::CrossedJson = read_json(&rhs)?;
                    cj.build_crossed(&base)?.carrier().clone()
                } else {
                    let gj: mackey::format::GSetJson = read_json(&rhs)?;
                    gj.build(&base)?
                };
                let d = dress(&m, &y).map_err(|e| CliError::Usage(e.to_string()))?;
                println!("dressed functor levels: {:?}", d.levels());
                save_out(&out, &MackeyJson::of(&d), "dressed functor")?;
            }
            Ok(())
        }
        Command::Greenalg {
            functor,
            out,
            bound,
        } => {
            let mut ws = Workspace::new(bound.bound);
            let a = ws.load_green(&functor, true)?;
            let w = green_algebra(&a);
            println!("Green algebra dimension {}", w.dim);
            let ok = w.validate();
            println!("associative with two-sided unit: {ok}");
            print_algebra_products(&w);
            #[derive(serde::Serialize)]
            struct AlgebraJson {
                dim: usize,
                entry_dims: Vec<Vec<usize>>,
                unit: Vec<String>,
            }
            let aj = AlgebraJson {
                dim: w.dim,
                entry_dims: w.entry_dims.clone(),
                unit: w.unit.iter().map(rational_to_string).collect(),
            };
            save_out(&out, &aj, "Green algebra summary")?;
            if !ok {
                return Err(CliError::Math("Green algebra fails validation".to_string()));
            }
            Ok(())
        }
        Command::Iso {
            lhs,
            rhs,
            out,
            bound,
        } => {
            let mut ws = Workspace::new(bound.bound);
            let l = ws.load_mackey(&lhs, true)?;
            let r = ws.load_mackey(&rhs, true)?;
            let theta = find_iso_certified(&l, &r)?;
            println!("isomorphism found; levels {:?}", l.levels());
            let cert = Certificate::MackeyIso {
                lhs: MackeyJson::of(&l),
                rhs: MackeyJson::of(&r),
                iso: IsoWitnessJson::of(&theta),
            };
            if out.out.is_none() {
                let text = serde_json::to_string_pretty(&cert)
                    .map_err(|e| CliError::Usage(e.to_string()))?;
                println!("{text}");
            }
            save_certificate(&out, &cert)?;
            Ok(())
        }
        Command::Check(check) => run_check(check),
        Command::VerifyCertificate { certificate } => {
            let cert = read_certificate(&certificate)?;
            let outcome = verify(&cert)?;
            println!("certificate: {}", outcome.description);
            if outcome.passed() {
                println!("verified: PASS");
                Ok(())
            } else {
                for p in &outcome.problems {
                    println!("problem: {p}");
                }
                Err(CliError::Math(
                    "certificate failed verification".to_string(),
                ))
            }
        }
    }
}

fn run_check(check: CheckCommand) -> CliResult<()> {
    match check {
        CheckCommand::Mackey {
            functor,
            out,
            bound,
        } => {
            let mut ws = Workspace::new(bound.bound);
            let m = ws.load_mackey(&functor, false)?;
            let report = m.validate();
            println!(
                "mackey validation: {} ({} identities checked)",
                if report.passed() { "PASS" } else { "FAIL" },
                report.checked
            );
            if !report.passed() {
                for f in report.failures.iter().take(5) {
                    println!("  {f}");
                }
                return Err(CliError::Math("functoriality fails".to_string()));
            }
            save_certificate(
                &out,
                &Certificate::MackeyValidation {
                    functor: MackeyJson::of(&m),
                },
            )?;
            Ok(())
        }
        CheckCommand::Green {
            functor,
            out,
            bound,
        } => {
            let mut ws = Workspace::new(bound.bound);
            let a = ws.load_green(&functor, false)?;
            let mackey_report = a.underlying().validate();
            let report = validate_green(&a);
            let pass = mackey_report.passed() && report.passed();
            println!(
                "green validation: {} ({} diagrams checked)",
                if pass { "PASS" } else { "FAIL" },
                mackey_report.checked + report.checked
            );
            if !pass {
                for f in report.failures.iter().take(5) {
                    println!("  {f}");
                }
                return Err(CliError::Math("green axioms fail".to_string()));
            }
            save_certificate(
                &out,
                &Certificate::GreenValidation {
                    functor: GreenJson::of(&a),
                },
            )?;
            Ok(())
        }
        CheckCommand::Cohomological {
            functor,
            out,
            bound,
        } => {
            let mut ws = Workspace::new(bound.bound);
            let m = ws.load_mackey(&functor, true)?;
            let report = cohomological_check(&m);
            for p in &report.pairs {
                println!(
                    "H={:?} K={:?} index {}: {}",
                    p.h,
                    p.k,
                    p.index,
                    if p.ok { "ok" } else { "FAIL" }
                );
            }
            let cert = Certificate::Cohomological {
                functor: MackeyJson::of(&m),
                pairs: report
                    .pairs
                    .iter()
                    .map(|p| CohomPairJson {
                        h: p.h.clone(),
                        k: p.k.clone(),
                        index: p.index,
                        ok: p.ok,
                    })
                    .collect(),
                passed: report.passed(),
            };
            save_certificate(&out, &cert)?;
            if report.passed() {
                println!("cohomological: PASS");
                Ok(())
            } else {
                println!("cohomological: FAIL");
                Err(CliError::Math("not cohomological".to_string()))
            }
        }
        CheckCommand::StarAutonomy {
            lhs,
            rhs,
            functor,
            out,
            bound,
        } => {
            let mut ws = Workspace::new(bound.bound);
            let m = ws.load_mackey(&lhs, true)?;
            let n = ws.load_mackey(&rhs, true)?;
            let l = ws.load_mackey(&functor, true)?;
            let report =
                star_pairing_check(&m, &n, &l).map_err(|e| CliError::Usage(e.to_string()))?;
            println!(
                "dim Mky(M*N, S L) = {}, dim Mky(N*L, S M) = {}",
                report.dim_m_n_sl, report.dim_n_l_sm
            );
            let ss = star_dual(&star_dual(&m));
            let dd = MackeyMorphism::identity(&m);
            if !dd.is_natural(&ss, &m) {
                return Err(CliError::Math(
                    "S∘S is not the identity on the nose".to_string(),
                ));
            }
            let cert = Certificate::StarAutonomy {
                m: MackeyJson::of(&m),
                n: MackeyJson::of(&n),
                l: MackeyJson::of(&l),
                dim_m_n_sl: report.dim_m_n_sl,
                dim_n_l_sm: report.dim_n_l_sm,
                double_dual_iso: IsoWitnessJson::of(&dd),
            };
            save_certificate(&out, &cert)?;
            if report.passed() {
                println!("star-autonomy: PASS");
                Ok(())
            } else {
                println!("star-autonomy: FAIL");
                Err(CliError::Math("pairing dimensions differ".to_string()))
            }
        }
        CheckCommand::DressMonoidal {
            lhs,
            rhs,
            out,
            bound,
        } => {
            let mut ws = Workspace::new(bound.bound);
            let m = ws.load_mackey(&lhs, true)?;
            let n = ws.load_mackey(&rhs, true)?;
            let ctx = m.ctx().clone();
            let classes = ctx.class_count();
            let conv_mn = convolve(&m, &n).map_err(|e| CliError::Usage(e.to_string()))?;
            let mut dims = Vec::new();
            let mut all_ok = true;
            let mut instance: Option<(usize, usize, MackeyFunctor, MackeyFunctor)> = None;
            for x in 0..classes {
                let mx = dress(&m, ctx.coset(x)).map_err(|e| CliError::Usage(e.to_string()))?;
                for y in 0..classes {
                    let ny = dress(&n, ctx.coset(y)).map_err(|e| CliError::Usage(e.to_string()))?;
                    let lhs_conv =
                        convolve(&mx, &ny).map_err(|e| CliError::Usage(e.to_string()))?;
                    let xy = ctx.rep_product(x, y).clone();
                    let rhs_dressed =
                        dress(&conv_mn.functor, &xy).map_err(|e| CliError::Usage(e.to_string()))?;
                    for z in 0..classes {
                        let (a, b) = (lhs_conv.functor.level_dim(z), rhs_dressed.level_dim(z));
                        if a != b {
                            all_ok = false;
                        }
                        dims.push(DressDimJson {
                            x,
                            y,
                            z,
                            lhs_dim: a,
                            rhs_dim: b,
                        });
                        println!("X=C{x} Y=C{y} Z=C{z}: dim {a} vs {b}");
                    }
                    if instance.is_none() && !lhs_conv.functor.is_zero_functor() {
                        instance = Some((x, y, lhs_conv.functor.clone(), rhs_dressed));
                    }
                }
            }
            let Some((ix, iy, inst_lhs, inst_rhs)) = instance else {
                return Err(CliError::Math("no nonzero instance found".to_string()));
            };
            let theta = find_iso_certified(&inst_lhs, &inst_rhs)?;
            let cert = Certificate::DressMonoidal {
                m: MackeyJson::of(&m),
                n: MackeyJson::of(&n),
                dims,
                instance_x: ix,
                instance_y: iy,
                instance_lhs: MackeyJson::of(&inst_lhs),
                instance_rhs: MackeyJson::of(&inst_rhs),
                instance_iso: IsoWitnessJson::of(&theta),
            };
            save_certificate(&out, &cert)?;
            if all_ok {
                println!("dress-monoidal: PASS");
                Ok(())
            } else {
                println!("dress-monoidal: FAIL");
                Err(CliError::Math("dimension table mismatch".to_string()))
            }
        }
        CheckCommand::CentreLemma { group, out, bound } => {
            let mut ws = Workspace::new(bound.bound);
            let ctx = ws.load_group(&group)?;
            let (end, iso) =
                end_of_homs(&ctx, ws.bound).map_err(|e| CliError::Usage(e.to_string()))?;
            println!(
                "end of homs has {} elements; certified bijection to G with conjugation",
                end.size()
            );
            let cert = Certificate::CentreLemma {
                group: GroupJson::of(ctx.group()),
                end_action: end.action().to_vec(),
                bijection: iso.values().to_vec(),
            };
            save_certificate(&out, &cert)?;
            println!("centre-lemma: PASS");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Math(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
