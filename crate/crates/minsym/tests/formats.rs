use minsym::format::curve::{read_curves, write_curve};
use minsym::format::log::{read_message_log, write_message_log};
use minsym::Error;
use minsym_core::{AccuracyCurve, EpisodeRecord};
use proptest::prelude::*;

fn record() -> impl Strategy<Value = EpisodeRecord> {
    (any::<u64>(), 1usize..8, prop::collection::vec(0u32..400, 0..8), prop::option::of(0usize..64), any::<bool>())
        .prop_map(|(instance_id, max_length, symbols, chosen, success)| EpisodeRecord {
            instance_id,
            max_length,
            symbols,
            chosen,
            success,
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn message_log_round_trip(records in prop::collection::vec(record(), 0..20)) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("log.jsonl");
        write_message_log(&records, &path, false).unwrap();
        prop_assert_eq!(read_message_log(&path).unwrap(), records);
    }

    #[test]
    fn curve_round_trip(accs in prop::collection::vec(0.0f64..=1.0, 1..10)) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("curve.csv");
        let curve = AccuracyCurve::new("oracle", accs.iter().enumerate().map(|(i, &a)| (i + 1, a))).unwrap();
        write_curve(&curve, &path, false).unwrap();
        prop_assert_eq!(read_curves(&path).unwrap().final_curve().unwrap(), curve);
    }
}

#[test]
fn log_line_layout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("log.jsonl");
    let rec = EpisodeRecord { instance_id: 3, max_length: 2, symbols: vec![1, 6], chosen: None, success: false };
    write_message_log([&rec], &path, false).unwrap();
    assert_eq!(
        std::fs::read_to_string(&path).unwrap(),
        "{\"instance_id\":3,\"max_length\":2,\"symbols\":[1,6],\"chosen\":null,\"success\":false}\n"
    );
}

#[test]
fn malformed_log_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("log.jsonl");
    std::fs::write(
        &path,
        "{\"instance_id\":3,\"max_length\":2,\"symbols\":[],\"chosen\":null,\"success\":false}\nnope\n",
    )
    .unwrap();
    match read_message_log(&path) {
        Err(Error::Malformed { line, .. }) => assert_eq!(line, 2),
        other => panic!("{other:?}"),
    }
}

#[test]
fn duplicate_curve_rows_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curve.csv");
    std::fs::write(&path, "source,max_length,epoch,accuracy\nt,1,0,0.5\nt,1,0,0.6\n").unwrap();
    assert!(matches!(read_curves(&path), Err(Error::Malformed { .. })));
}
