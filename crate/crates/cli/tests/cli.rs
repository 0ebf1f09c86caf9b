use std::path::PathBuf;

use graphgroups_cli::{run, Outcome, EXIT_OK, EXIT_ORACLE, EXIT_PARSE, EXIT_PRECONDITION};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(format!("{name}.gog"))
        .to_string_lossy()
        .into_owned()
}

fn gog(args: &[&str]) -> Outcome {
    run(std::iter::once("gog").chain(args.iter().copied()))
}

#[test]
fn klein_is_twisted() {
    let out = gog(&["recognize-abelian", &fixture("klein")]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.report.starts_with("NonAbelian step 4b\n"), "{}", out.report);
    assert!(out.report.contains("reduced: v:[2]\n"));
}

#[test]
fn torus_commutator_is_trivial() {
    let out = gog(&["trivial", "--word", "a t a^-1 t^-1", &fixture("torus")]);
    assert_eq!(out, Outcome { code: EXIT_OK, report: "true\n".into() });
    let out = gog(&["trivial", "--word", "a t a^-1 t^-1", &fixture("klein")]);
    assert_eq!(out.report, "false\n");
}

#[test]
fn pushout_converts_with_order_six() {
    let out = gog(&["convert", "--oracle", "enum:5000", &fixture("pushout46")]);
    assert_eq!(out.code, EXIT_OK, "{}", out.report);
    assert!(out.report.ends_with("# order 6 exact\n"), "{}", out.report);
    // the report is itself a loadable file
    let converted = graphgroups::parse_gog(&out.report).unwrap();
    assert_eq!(converted.classify(), graphgroups::DiagramClass::GraphOfGroups);

    let out = gog(&["convert", "--oracle", "abel", &fixture("pushout46")]);
    assert!(out.report.ends_with("# order 6 sound-iff-abelian\n"), "{}", out.report);
}

#[test]
fn reports_are_deterministic() {
    for args in [
        vec!["pi1", "star3"],
        vec!["decompose", "--edge", "e1", "dyadic-4"],
        vec!["collapse", "dyadic-5"],
        vec!["recognize-abelian", "trefoil"],
        vec!["enumerate", "--cap", "1000", "path-q8"],
    ] {
        let mut a = args.clone();
        let path = fixture(a.pop().unwrap());
        a.push(&path);
        assert_eq!(gog(&a), gog(&a));
        assert_eq!(gog(&a).code, EXIT_OK, "{a:?}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(gog(&["validate", &fixture("torus")]).code, EXIT_OK);
    assert_eq!(gog(&["validate", "/nonexistent.gog"]).code, EXIT_PARSE);
    assert_eq!(gog(&["frobnicate"]).code, EXIT_PARSE);
    assert_eq!(gog(&["convert", "--oracle", "magic", &fixture("torus")]).code, EXIT_PARSE);
    assert_eq!(gog(&["trivial", "--word", "zz", &fixture("torus")]).code, EXIT_PARSE);
    // pinch reduction needs injective maps
    assert_eq!(gog(&["trivial", "--word", "e", &fixture("pushout46")]).code, EXIT_PRECONDITION);
    assert_eq!(gog(&["contract", "--edge", "t", &fixture("torus")]).code, EXIT_PRECONDITION);
    assert_eq!(gog(&["collapse", &fixture("trefoil")]).code, EXIT_PRECONDITION);
    assert_eq!(gog(&["recognize-abelian", &fixture("star3")]).code, EXIT_PRECONDITION);
    assert_eq!(gog(&["convert", "--oracle", "free", &fixture("pushout46")]).code, EXIT_PRECONDITION);
    assert_eq!(gog(&["enumerate", "--cap", "50", &fixture("torus")]).code, EXIT_ORACLE);
    assert_eq!(gog(&["convert", "--oracle", "enum:50", &fixture("trefoil")]).code, EXIT_ORACLE);
    assert_eq!(gog(&["--help"]).code, EXIT_OK);
}

#[test]
fn missing_bar_is_a_positioned_parse_error() {
    let dir = std::env::temp_dir().join(format!("gog-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("broken.gog");
    let text = std::fs::read_to_string(fixture("torus")).unwrap().replace("bar = \"t_bar\"\n", "");
    std::fs::write(&path, text).unwrap();
    let out = gog(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_PARSE);
    assert!(out.report.contains("line 5: edges.t: edge t has no bar partner"), "{}", out.report);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn abelianize_and_rank_bound() {
    assert_eq!(gog(&["abelianize", &fixture("z3f2-diagram")]).report, "free_rank=5 torsion=[]\n");
    assert_eq!(gog(&["rank-bound", &fixture("z3f2-diagram")]).report, "2\n");
    assert_eq!(gog(&["rank-bound", &fixture("star3")]).report, "1\n");
    assert_eq!(gog(&["recognize-abelian", &fixture("torus")]).report, "Abelian rank 2 (G_v × Z)\n");
    assert_eq!(gog(&["classify", &fixture("pushout46")]).report, "diagram\n");
}

#[test]
fn binary_runs() {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_gog"))
        .args(["trivial", "--word", "a t a^-1 t^-1", &fixture("torus")])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout), "true\n");
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_gog"))
        .args(["enumerate", "--cap", "10", &fixture("torus")])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}
