use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};

use proptest::prelude::*;

use cu_lab::document::{
    CompareOp, ConcreteOp, ElementDecl, MeasureSpec, SemigroupDecl, SemigroupSpec, Settings, WSpec,
    Q, X,
};
use cu_lab::{
    demo_document, parse_document, run, serialize_document, CliError, Document, Options, Outcome,
    Query,
};
use cuntz::{Ext, Rational};

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("corpus")
        .join(name)
}

fn load(name: &str) -> Document {
    parse_document(&std::fs::read_to_string(corpus(name)).unwrap()).unwrap()
}

fn cu_lab(args: &[&str], stdin: Option<&str>) -> (i32, String, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_cu-lab"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    if let Some(s) = stdin {
        child.stdin.take().unwrap().write_all(s.as_bytes()).unwrap();
    }
    drop(child.stdin.take());
    let out = child.wait_with_output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn softened_two_rules_evaluate() {
    let r = run(&load("car-rules.json"), &Options::default()).unwrap();
    let got: Vec<&Outcome> = r.entries.iter().map(|e| &e.result).collect();
    assert_eq!(got[0], &Outcome::Bool { value: true });
    assert_eq!(got[1], &Outcome::Bool { value: false });
    assert_eq!(got[2], &Outcome::Bool { value: true });
    assert_eq!(
        got[3],
        &Outcome::Value {
            value: "s:3/4".into()
        }
    );
    assert_eq!(r.exit_code(), 0);
}

#[test]
fn empty_document_is_valid() {
    let d = parse_document(r#"{"version": 1, "semigroups": [], "elements": [], "queries": []}"#)
        .unwrap();
    assert_eq!(d, Document::empty());
    let r = run(&d, &Options::default()).unwrap();
    assert!(r.entries.is_empty());
    assert_eq!(r.exit_code(), 0);
}

#[test]
fn zero_denominator_is_a_parse_error_with_position() {
    let text = "{\n  \"version\": 1,\n  \"semigroups\": [{\"name\": \"T\", \"kind\": \"zstable\", \"pairing\": [[\"1/0\"]]}]\n}";
    match parse_document(text) {
        Err(CliError::Parse { line, column, .. }) => {
            assert_eq!(line, 3);
            assert!(column > 60, "column {column}");
        }
        other => panic!("expected a parse error, got {other:?}"),
    }
    assert!(matches!(
        parse_document("{\"version\": 1,"),
        Err(CliError::Parse { line: 1, .. })
    ));
    assert!(matches!(
        parse_document(r#"{"version": 1, "extra": 0}"#),
        Err(CliError::Parse { .. })
    ));
}

#[test]
fn validation_errors_name_the_culprit() {
    let v = |text: &str| match parse_document(text).and_then(|d| run(&d, &Options::default())) {
        Err(CliError::Validation { name, .. }) => name,
        other => panic!("expected a validation error, got {other:?}"),
    };
    assert_eq!(v(r#"{"version": 2}"#), "version");
    assert_eq!(
        v(
            r#"{"version": 1, "semigroups": [{"name": "A", "kind": "nbar"}, {"name": "A", "kind": "nbar"}]}"#
        ),
        "A"
    );
    assert_eq!(
        v(r#"{"version": 1, "queries": [{"command": "axioms", "semigroup": "S"}]}"#),
        "S"
    );
    assert_eq!(
        v(r#"{"version": 1, "semigroups": [{"name": "P", "kind": "product", "factors": ["P"]}]}"#),
        "P"
    );
    assert_eq!(
        v(r#"{"version": 1, "semigroups": [{"name": "S", "kind": "softened", "m": 0}]}"#),
        "S"
    );
    assert_eq!(
        v(
            r#"{"version": 1, "semigroups": [{"name": "S", "kind": "softened", "m": 2}],
              "elements": [{"name": "x", "in": "S", "value": "c:1/3"}]}"#
        ),
        "x"
    );
    assert!(matches!(
        run(&demo_document("nope"), &Options::default()),
        Err(CliError::UnknownFixture(n)) if n == "nope"
    ));
}

#[test]
fn failing_verdicts_exit_one() {
    let r = run(&load("gap-unperforation.json"), &Options::default()).unwrap();
    assert_eq!(r.exit_code(), 1);
    let c = &r.entries[0].result.checks()[0];
    assert_eq!(c.verdict, "fail");
    assert_eq!(c.multiplier, Some(3));
    let w: Vec<(&str, &str)> = c
        .witness
        .iter()
        .map(|w| (w.role.as_str(), w.value.as_str()))
        .collect();
    assert_eq!(w, [("s", "(1,1)"), ("t", "(2,0)")]);
}

#[test]
fn tour_runs_every_command() {
    let r = run(&load("tour.json"), &Options::default()).unwrap();
    assert_eq!(r.exit_code(), 0, "{}", r.plain());
    let commands: std::collections::BTreeSet<&str> =
        r.entries.iter().map(|e| e.command.as_str()).collect();
    assert_eq!(commands.len(), 6);
    let value = |i: usize| match &r.entries[i - 1].result {
        Outcome::Value { value } => value.clone(),
        Outcome::Bool { value } => value.to_string(),
        other => panic!("entry {i}: {other:?}"),
    };
    assert_eq!(value(6), "[(inf, 2)]");
    assert_eq!(value(7), "3");
    assert_eq!(value(15), "3");
    assert_eq!(value(17), "s:3/2");
    // spec[1, 1/2, 0]: trace 3/2 over dimension 3.
    assert_eq!(value(20), "1/2");
    assert_eq!(value(21), "2/3");
    // Support (0, 1/2) under Lebesgue plus an atom of mass 1/2 at 1/4.
    assert_eq!(value(22), "1");
    assert_eq!(value(24), "1/8");
}

#[test]
fn every_demo_confirms_its_fixture() {
    for name in cu_lab::demos::DEMOS {
        let r = run(&demo_document(name), &Options::default()).unwrap();
        assert_eq!(r.exit_code(), 0, "{}", r.plain());
        assert!(!r.entries[0].result.checks().is_empty());
    }
}

#[test]
fn command_filter_and_bound() {
    let doc = load("tour.json");
    let r = run(
        &doc,
        &Options {
            command: Some("concrete".into()),
            ..Options::default()
        },
    )
    .unwrap();
    assert!(r.entries.iter().all(|e| e.command == "concrete"));
    assert_eq!(r.entries.len(), 8);
    assert!(run(
        &doc,
        &Options {
            command: Some("plot".into()),
            ..Options::default()
        }
    )
    .is_err());

    let mut grid = Document::empty();
    grid.semigroups.push(SemigroupDecl {
        name: "S".into(),
        spec: SemigroupSpec::Softened { m: 1 },
    });
    grid.queries.push(Query::Construct {
        op: cu_lab::document::ConstructOp::Grid {
            semigroup: "S".into(),
            max_value: 1,
        },
    });
    let len = |bound| match &run(
        &grid,
        &Options {
            bound: Some(bound),
            ..Options::default()
        },
    )
    .unwrap()
    .entries[0]
        .result
    {
        Outcome::List { values } => values.len(),
        other => panic!("{other:?}"),
    };
    assert!(len(2) < len(16));
}

#[test]
fn reports_are_byte_stable() {
    let doc = load("tour.json");
    let a = run(&doc, &Options::default()).unwrap();
    let b = run(&doc, &Options::default()).unwrap();
    assert_eq!(a.plain(), b.plain());
    assert_eq!(a.structured(), b.structured());
}

#[test]
fn sampling_needs_a_seed() {
    let mut doc = Document::empty();
    doc.elements.push(ElementDecl {
        name: "a".into(),
        semigroup: None,
        value: "spec[1]".into(),
    });
    doc.queries.push(Query::Concrete {
        op: ConcreteOp::Sample {
            model: "spectral".into(),
            count: 20,
        },
    });
    assert!(matches!(
        run(&doc, &Options::default()),
        Err(CliError::Validation { .. })
    ));
    let seeded = |s| {
        run(
            &doc,
            &Options {
                seed: Some(s),
                ..Options::default()
            },
        )
        .unwrap()
    };
    assert_eq!(seeded(3).exit_code(), 0);
    assert_eq!(seeded(3).structured(), seeded(3).structured());
}

#[test]
fn binary_exit_codes_and_formats() {
    let path = |n: &str| corpus(n).to_string_lossy().into_owned();
    let (code, out, _) = cu_lab(&["run", &path("car-rules.json")], None);
    assert_eq!(code, 0);
    assert!(
        out.starts_with("[1] compare leq(s_half, c_half): true\n"),
        "{out}"
    );

    let (code, out, _) = cu_lab(
        &[
            "run",
            &path("gap-unperforation.json"),
            "--format",
            "structured",
        ],
        None,
    );
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["summary"]["failed"], 2);

    let text = std::fs::read_to_string(corpus("car-rules.json")).unwrap();
    let (code, out, _) = cu_lab(&["run", "-", "--command", "compare"], Some(&text));
    assert_eq!(code, 0);
    assert!(out.contains("5 queries"));

    let (code, _, err) = cu_lab(&["run", "-"], Some("{\"version\": 1, \"queries\": [}"));
    assert_eq!(code, 2);
    assert!(err.contains("line 1"), "{err}");

    let (code, _, _) = cu_lab(&["run", "/nonexistent.json"], None);
    assert_eq!(code, 2);
    let (code, out, _) = cu_lab(&["demo", "toeplitz-wc"], None);
    assert_eq!(code, 0);
    assert!(out.contains("x=inf, y=0, z=inf"));
    let (code, _, _) = cu_lab(&["demo", "nope"], None);
    assert_eq!(code, 2);

    let (code, out, _) = cu_lab(
        &[
            "run",
            &path("tour.json"),
            "--command",
            "concrete",
            "--seed",
            "11",
            "--timing",
        ],
        None,
    );
    assert_eq!(code, 0);
    assert!(out.contains("(seed 11)") && out.contains(" us)"));
}

#[test]
fn corpus_round_trips() {
    for f in ["car-rules.json", "tour.json", "gap-unperforation.json"] {
        let d = load(f);
        let text = serialize_document(&d);
        assert_eq!(parse_document(&text).unwrap(), d, "{f}");
        assert_eq!(serialize_document(&parse_document(&text).unwrap()), text);
    }
}

fn rational() -> impl Strategy<Value = Rational> {
    (0i128..50, 1i128..13).prop_map(|(n, d)| Rational::new(n, d))
}

fn ext() -> impl Strategy<Value = X> {
    prop_oneof![
        rational().prop_map(|q| X(Ext::Finite(q))),
        Just(X(Ext::Infinite))
    ]
}

fn spec() -> impl Strategy<Value = SemigroupSpec> {
    prop_oneof![
        proptest::option::of(1u64..5).prop_map(|m| SemigroupSpec::Nbar { m }),
        (1u64..5).prop_map(|m| SemigroupSpec::Softened { m }),
        Just(SemigroupSpec::Gap),
        proptest::collection::vec(proptest::collection::vec(rational().prop_map(Q), 2), 1..3)
            .prop_map(|pairing| SemigroupSpec::Zstable { pairing }),
        (0u64..4, any::<bool>()).prop_map(|(m, top)| SemigroupSpec::Tau {
            w: WSpec {
                m,
                top,
                relation: "finite_leq".into()
            }
        }),
        proptest::collection::vec(0usize..3, 1..3).prop_map(|s| SemigroupSpec::Ultraproduct {
            factors: vec!["a".into(), "b".into(), "c".into()],
            sets: vec![s],
        }),
    ]
}

fn query() -> impl Strategy<Value = Query> {
    prop_oneof![
        (0usize..7, any::<bool>()).prop_map(|(i, two)| {
            let ops = [
                CompareOp::Leq,
                CompareOp::WayBelow,
                CompareOp::Equal,
                CompareOp::Add,
                CompareOp::Wedge,
                CompareOp::Compact,
                CompareOp::Infinity,
            ];
            Query::Compare {
                op: ops[i],
                a: "x".into(),
                b: two.then(|| "y".into()),
            }
        }),
        (
            rational(),
            proptest::collection::vec((rational(), rational()), 0..3)
        )
            .prop_map(|(l, atoms)| Query::Concrete {
                op: ConcreteOp::Dtau {
                    a: "f".into(),
                    measure: Some(MeasureSpec {
                        lebesgue: Q(l),
                        atoms: atoms.into_iter().map(|(p, m)| (Q(p), Q(m))).collect()
                    }),
                }
            }),
        rational().prop_map(|e| Query::Concrete {
            op: ConcreteOp::Rordam {
                a: "f".into(),
                b: "g".into(),
                eps: Q(e)
            }
        }),
        ext().prop_map(|slope| Query::Functionals {
            op: cu_lab::document::FunctionalOp::Realize {
                semigroup: "s0".into(),
                slope
            }
        }),
        "[a-z-]{1,12}".prop_map(|name| Query::Demo { name }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn parse_inverts_serialize(
        specs in proptest::collection::vec(spec(), 0..4),
        queries in proptest::collection::vec(query(), 0..6),
        depth in 1usize..6,
        seed in proptest::option::of(any::<u64>()),
    ) {
        let mut d = Document::empty();
        d.settings = Settings { depth, seed, ..Settings::default() };
        for (i, s) in specs.into_iter().enumerate() {
            d.semigroups.push(SemigroupDecl { name: format!("s{i}"), spec: s });
        }
        d.elements.push(ElementDecl { name: "f".into(), semigroup: None, value: "pl[0:0, 1/2:1, 1:0]".into() });
        d.queries = queries;
        let text = serialize_document(&d);
        prop_assert_eq!(parse_document(&text).unwrap(), d);
    }
}
