//! Every fixture parses, survives a serialize/parse round trip, and builds
//! the same charts afterwards.

use std::path::PathBuf;

use thickres::json::{parse_input, ChartJson};

fn fixtures() -> Vec<PathBuf> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let mut out: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    out.sort();
    out
}

#[test]
fn corpus_round_trips() {
    let files = fixtures();
    assert!(files.len() >= 10);
    for p in files {
        let text = std::fs::read_to_string(&p).unwrap();
        let doc = parse_input(&text).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
        let again = parse_input(&serde_json::to_string(&doc).unwrap()).unwrap();
        assert_eq!(doc, again, "{}", p.display());
        // The negative verify-ptm fixture describes no chart.
        let Ok(charts) = doc.chart_list() else {
            continue;
        };
        assert_eq!(charts, again.chart_list().unwrap());
        for c in &charts {
            let back = ChartJson::from_chart(c).to_chart().unwrap();
            assert_eq!(&back, c, "{}", p.display());
        }
    }
}
