//! End-to-end coverage of the CLI subcommands not already exercised by the
//! acceptance suite: fixpoint, hom, stardual, dress (both levels),
//! greenalg, check green / star-autonomy / dress-monoidal.

use std::path::PathBuf;
use std::process::{Command, Output};
use std::sync::Arc;

use mackey::crossed::CrossedMonoid;
use mackey::format::{CrossedJson, GSetJson, RepresentationJson};
use mackey::group::samples;
use mackey::gset::coset_gset;
use mackey::mackey::linearize_gset;

struct Cli {
    dir: tempfile::TempDir,
}

impl Cli {
    fn new() -> Cli {
        Cli {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn write_json<T: serde::Serialize>(&self, name: &str, value: &T) {
        std::fs::write(
            self.path(name),
            serde_json::to_string_pretty(value).unwrap(),
        )
        .unwrap();
    }

    fn run(&self, args: &[&str]) -> Output {
        Command::new(env!("CARGO_BIN_EXE_mackey"))
            .args(args)
            .current_dir(self.dir.path())
            .output()
            .unwrap()
    }

    fn expect(&self, args: &[&str], code: i32) -> String {
        let out = self.run(args);
        assert_eq!(
            out.status.code().unwrap(),
            code,
            "args {args:?}\nstdout: {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        );
        String::from_utf8_lossy(&out.stdout).to_string()
    }
}

#[test]
fn construction_commands_round_trip() {
    let cli = Cli::new();
    cli.write_json(
        "c2.json",
        &serde_json::json!({"order": 2, "table": [[0,1],[1,0]]}),
    );
    cli.expect(&["burnside", "--group", "c2.json", "--out", "J.json"], 0);

    // The emitted Burnside file carries Green structure.
    cli.expect(&["check", "green", "--functor", "J.json"], 0);
    cli.expect(&["greenalg", "--functor", "J.json"], 0);

    // Internal hom and star dual produce valid functors.
    let out = cli.expect(
        &[
            "hom", "--lhs", "J.json", "--rhs", "J.json", "--out", "H.json",
        ],
        0,
    );
    assert!(out.contains("internal hom levels"));
    cli.expect(&["check", "mackey", "--functor", "H.json"], 0);

    cli.expect(&["stardual", "--functor", "J.json", "--out", "S.json"], 0);
    cli.expect(&["check", "mackey", "--functor", "S.json"], 0);

    // Mackey-level dress by a free orbit: levels [1, 2].
    let group = Arc::new(samples::cyclic(2));
    let free = coset_gset(&group, &[0]).unwrap();
    cli.write_json("free.json", &GSetJson::of(&free));
    let out = cli.expect(
        &[
            "dress",
            "--functor",
            "J.json",
            "--rhs",
            "free.json",
            "--out",
            "D.json",
        ],
        0,
    );
    assert!(out.contains("[1, 2]"), "{out}");
    cli.expect(&["check", "mackey", "--functor", "D.json"], 0);

    // Green-level dress by the group as a crossed monoid.
    let monoid = CrossedMonoid::group_as_crossed_monoid(group.clone());
    cli.write_json("gc.json", &CrossedJson::of_monoid(&monoid));
    cli.expect(
        &[
            "dress",
            "--functor",
            "J.json",
            "--rhs",
            "gc.json",
            "--out",
            "DG.json",
        ],
        0,
    );
    cli.expect(&["check", "green", "--functor", "DG.json"], 0);
    cli.expect(&["greenalg", "--functor", "DG.json"], 0);
}

#[test]
fn fixpoint_and_checks() {
    let cli = Cli::new();
    let group = Arc::new(samples::cyclic(2));
    let reg = linearize_gset(&coset_gset(&group, &[0]).unwrap());
    cli.write_json("reg.json", &RepresentationJson::of(&reg));

    let out = cli.expect(&["fixpoint", "--rep", "reg.json", "--out", "fix.json"], 0);
    assert!(out.contains("[1, 2]"), "{out}");
    cli.expect(&["check", "mackey", "--functor", "fix.json"], 0);
    cli.expect(&["check", "cohomological", "--functor", "fix.json"], 0);

    cli.write_json(
        "c2.json",
        &serde_json::json!({"order": 2, "table": [[0,1],[1,0]]}),
    );
    cli.expect(&["burnside", "--group", "c2.json", "--out", "J.json"], 0);

    // Star-autonomy pairing over (fix, J, fix), certificate verifies.
    cli.expect(
        &[
            "check",
            "star-autonomy",
            "--lhs",
            "fix.json",
            "--rhs",
            "J.json",
            "--functor",
            "fix.json",
            "--out",
            "star.json",
        ],
        0,
    );
    cli.expect(&["verify-certificate", "star.json"], 0);

    // Dress monoidality with certified instance.
    cli.expect(
        &[
            "check",
            "dress-monoidal",
            "--lhs",
            "J.json",
            "--rhs",
            "fix.json",
            "--out",
            "dm.json",
        ],
        0,
    );
    cli.expect(&["verify-certificate", "dm.json"], 0);
}

#[test]
fn invalid_functor_fails_check_with_math_exit() {
    let cli = Cli::new();
    cli.write_json(
        "c2.json",
        &serde_json::json!({"order": 2, "table": [[0,1],[1,0]]}),
    );
    cli.expect(&["burnside", "--group", "c2.json", "--out", "J.json"], 0);

    // Corrupt one generator matrix; the file still parses, so `check
    // mackey` must report a mathematical failure (exit 1).
    let text = std::fs::read_to_string(cli.path("J.json")).unwrap();
    let mut value: serde_json::Value = serde_json::from_str(&text).unwrap();
    let gens = value["generators"].as_array_mut().unwrap();
    'outer: for gen in gens.iter_mut() {
        if gen["span"]["source_class"] != gen["span"]["target_class"] {
            let matrix = gen["matrix"].as_array_mut().unwrap();
            for row in matrix.iter_mut() {
                for entry in row.as_array_mut().unwrap().iter_mut() {
                    if entry.as_str().unwrap() != "0/1" {
                        *entry = serde_json::Value::String("9/1".to_string());
                        break 'outer;
                    }
                }
            }
        }
    }
    std::fs::write(cli.path("bad.json"), serde_json::to_string(&value).unwrap()).unwrap();
    cli.expect(&["check", "mackey", "--functor", "bad.json"], 1);

    // The same corrupted file is a usage error for constructions, which
    // validate operands at load time.
    cli.expect(&["stardual", "--functor", "bad.json", "--out", "x.json"], 2);
}

#[test]
fn bound_flag_is_respected() {
    let cli = Cli::new();
    let s3 = samples::symmetric3();
    cli.write_json(
        "s3.json",
        &serde_json::json!({"order": 6, "table": s3.table().to_vec()}),
    );
    // A bound below the order is a usage error with a pointer to the flag.
    let out = cli.run(&["burnside", "--group", "s3.json", "--bound", "4"]);
    assert_eq!(out.status.code().unwrap(), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("override"), "{err}");
    cli.expect(&["burnside", "--group", "s3.json", "--bound", "6"], 0);
}
