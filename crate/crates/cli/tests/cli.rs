use std::path::PathBuf;
use std::process::Command;

use contracta::corpus::{
    embed_permutation_system, forest_semilattice, random_cylinder_system, random_forest, random_inverse_semigroup,
    random_permutation_system, staged_cylinder_system, CylinderParams,
};
use contracta_cli::document::{parse, serialize, Document, Kind, ParseError, ValidationError};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn fixtures() -> Vec<PathBuf> {
    let mut out: Vec<PathBuf> = std::fs::read_dir(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    out.sort();
    out
}

fn contracta(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_contracta")).args(args).output().unwrap();
    (out.status.code().unwrap(), out.stdout)
}

fn report(args: &[&str]) -> (i32, Value) {
    let (code, stdout) = contracta(args);
    (code, serde_json::from_slice(&stdout).unwrap_or_else(|e| panic!("{args:?}: {e}")))
}

#[test]
fn exit_codes_follow_the_table() {
    let cases: &[(&[&str], &str, i32, &str)] = &[
        (&["validate"], "e4.sl", 0, "Valid"),
        (&["validate"], "noncommutative.sl", 3, "ValidationError"),
        (&["validate"], "unknown_header.txt", 3, "SyntaxError"),
        (&["validate"], "overlap.blk", 3, "ValidationError"),
        (&["validate"], "z2.isg", 3, "ValidationError"),
        (&["--adjoin-zero", "validate"], "z2.isg", 0, "Valid"),
        (&["props"], "diamond.sl", 0, "Pass"),
        (&["props"], "b2ext.isg", 0, "Pass"),
        (&["props"], "case2.blk", 0, "Pass"),
        (&["spectrum"], "e4.sl", 0, "Pass"),
        (&["spectrum"], "chain3.sl", 0, "Pass"),
        (&["spectrum"], "b2.isg", 0, "Pass"),
        (&["spectrum"], "shift.blk", 1, "KindMismatch"),
        (&["action", "--element", "1"], "b2.isg", 0, "Pass"),
        (&["action", "--element", "9"], "b2.isg", 1, "UsageError"),
        (&["condition-iii"], "b2.isg", 2, "NotFound"),
        (&["condition-iii"], "b2ext.isg", 2, "NotFound"),
        (&["condition-iii"], "one.isg", 2, "NotFound"),
        (&["condition-iii"], "e4.sl", 1, "KindMismatch"),
        (&["blocks", "find", "--strict"], "shift.blk", 0, "Witness"),
        (&["blocks", "find", "--strict"], "swap.blk", 2, "NotApplicable"),
        (&["blocks", "find"], "swap.blk", 0, "Witness"),
        (&["blocks", "find"], "identity.blk", 0, "Witness"),
        (&["blocks", "find"], "violation.blk", 4, "Violation"),
        (&["blocks", "find", "--strict"], "single.blk", 0, "Witness"),
        (&["blocks", "find"], "case2.blk", 0, "Witness"),
        (&["blocks", "find", "--max-power", "2"], "case2.blk", 2, "Exhausted"),
        (&["blocks", "find", "--strict", "--budget", "1"], "case2.blk", 2, "Exhausted"),
        (&["blocks", "verify", "--block", "1", "--power", "1"], "shift.blk", 0, "Pass"),
        (&["blocks", "verify", "--block", "2", "--power", "1"], "shift.blk", 2, "NotFound"),
        (&["blocks", "verify", "--block", "1", "--power", "1", "--oracle-depth", "2"], "shift.blk", 1, "UsageError"),
        (&["blocks", "find"], "e4.sl", 1, "KindMismatch"),
        (&["validate"], "missing.sl", 1, "IoError"),
    ];
    for (args, file, code, verdict) in cases {
        let path = fixture(file);
        let mut all: Vec<&str> = args.to_vec();
        all.push(path.to_str().unwrap());
        let (got, report) = report(&all);
        assert_eq!((got, report["verdict"].as_str().unwrap()), (*code, *verdict), "{all:?}: {report}");
    }
}

#[test]
fn worked_examples_give_known_witnesses() {
    let (_, r) = report(&["blocks", "find", "--strict", fixture("shift.blk").to_str().unwrap()]);
    let w = &r["witnesses"][0];
    assert_eq!((w["block"].as_u64(), w["power"].as_u64(), w["separator"].as_str()), (Some(1), Some(1), Some("ab")));
    let (_, r) = report(&["spectrum", fixture("e4.sl").to_str().unwrap()]);
    assert_eq!(r["witnesses"][0]["tight"], serde_json::json!([2, 3]));
    assert_eq!(r["witnesses"][0]["coincide"], Value::Bool(true));
    let (_, r) = report(&["blocks", "find", fixture("swap.blk").to_str().unwrap()]);
    let w = &r["witnesses"][0];
    assert_eq!((w["block"].as_u64(), w["power"].as_u64()), (Some(2), Some(2)));
    let (_, r) = report(&["blocks", "find", fixture("case2.blk").to_str().unwrap()]);
    assert!(r["trace"].as_array().unwrap().iter().any(|s| s["case"] == "Case2"));
}

#[test]
fn parse_examples() {
    let e4 = parse(&std::fs::read_to_string(fixture("e4.sl")).unwrap()).unwrap();
    assert_eq!(e4.document.kind(), Kind::Semilattice);
    let Document::Semilattice { table } = &e4.document else { unreachable!() };
    assert_eq!(table.len(), 4);
    assert_eq!(parse("LATTICE 2\n0 0\n0 1\n").unwrap_err(), ParseError::UnknownHeader { line: 1, found: "LATTICE".into() });
    let overlap = parse(&std::fs::read_to_string(fixture("overlap.blk")).unwrap()).unwrap();
    assert_eq!(overlap.validate(false).unwrap_err(), ValidationError::NotPrefixFree { first: 4, second: 5 });
}

fn round_trip(document: &Document) {
    let text = serialize(document);
    let again = parse(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
    assert_eq!(&again.document, document, "{text}");
    assert_eq!(serialize(&again.document), text);
}

#[test]
fn fixtures_round_trip() {
    for path in fixtures() {
        if let Ok(parsed) = parse(&std::fs::read_to_string(&path).unwrap()) {
            round_trip(&parsed.document);
        }
    }
}

#[test]
fn generated_documents_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let params = CylinderParams::default();
    for nodes in 0..30 {
        let table = forest_semilattice(&random_forest(&mut rng, nodes % 7)).table();
        round_trip(&Document::Semilattice { table });
        let s = random_inverse_semigroup(&mut rng, 10);
        round_trip(&Document::InverseSemigroup { table: s.table(), zero: s.zero() });
        round_trip(&Document::Blocks(staged_cylinder_system(&mut rng, &params).to_raw()));
        round_trip(&Document::Blocks(random_cylinder_system(&mut rng, &params).to_raw()));
        let finite = random_permutation_system(&mut rng, 8, 3);
        round_trip(&Document::Blocks(embed_permutation_system(&finite, 3, true).to_raw()));
    }
}

#[test]
fn reports_are_byte_identical_across_runs() {
    for path in fixtures() {
        let p = path.to_str().unwrap();
        for args in [vec!["validate", p], vec!["props", p], vec!["spectrum", p], vec!["blocks", "find", "--strict", p]] {
            assert_eq!(contracta(&args), contracta(&args), "{args:?}");
        }
    }
}

#[test]
fn timing_is_opt_in() {
    let p = fixture("e4.sl");
    let (_, plain) = report(&["spectrum", p.to_str().unwrap()]);
    assert!(plain["elapsed_ms"].is_null());
    let (_, timed) = report(&["--timing", "spectrum", p.to_str().unwrap()]);
    assert!(timed["elapsed_ms"].is_u64());
}
