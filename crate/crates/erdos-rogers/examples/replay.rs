//! Audit trail round trip: write a run's artifacts to disk, reconstruct
//! the final graph from the G0 file plus the deletion trace, and show that
//! tampering with any stage is detected by the hash chain.
//!
//! Run with `cargo run --example replay`.

use erdos_rogers::construct::{apply_trace, run_pipeline, DeletionTrace};
use erdos_rogers::exponents::{classify_pair, ConstructionParams};
use erdos_rogers::graph::ColouredGraph;
use erdos_rogers::ratio::frac;

fn main() {
    let pair = classify_pair(3, 5).unwrap();
    let params = ConstructionParams::direct(300, 40, frac(1, 20), 30).unwrap();
    let run = run_pipeline(pair, &params, 7).unwrap();

    let dir = tempfile::tempdir().unwrap();
    let g0_path = dir.path().join("run.g0.json");
    let trace_path = dir.path().join("run.trace.jsonl");
    run.g0.write_json(&g0_path).unwrap();
    run.trace.write_jsonl(&trace_path).unwrap();
    println!(
        "wrote G0 ({} edges) and trace ({} type-1 + {} type-2 removals)",
        run.g0.edge_count(),
        run.trace.type1_removed.len(),
        run.trace.type2_removed.len()
    );

    // A fresh process only needs these two files to reproduce G.
    let g0 = ColouredGraph::read_json(&g0_path).unwrap();
    let trace = DeletionTrace::read_jsonl(&trace_path).unwrap();
    let g = apply_trace(&g0, &trace).unwrap();
    assert_eq!(g.edges(), run.g.edges());
    println!(
        "replay from disk reproduces G exactly ({} edges)",
        g.edge_count()
    );

    // The trace pins SHA-256 hashes of the G0 file bytes and of both edge
    // sets. Deleting one removal record diverges from the recorded G1 hash.
    let mut tampered = trace.clone();
    if let Some(dropped) = tampered.type1_removed.pop() {
        println!(
            "\ndropping the type-1 removal of edge {:?}...",
            dropped.edge
        );
        let err = apply_trace(&g0, &tampered).unwrap_err();
        println!("replay rejects the edited trace: {err}");
    }

    // Editing the stored G0 file (even a single class member) breaks the
    // file-byte hash before any replay work happens.
    let original = std::fs::read_to_string(&g0_path).unwrap();
    let edited = original.replacen("\"members\":[", "\"members\":[0,", 1);
    std::fs::write(&g0_path, edited).unwrap();
    match ColouredGraph::read_json(&g0_path) {
        Ok(changed) => {
            let err = apply_trace(&changed, &trace).unwrap_err();
            println!("replay rejects the edited G0 file: {err}");
        }
        Err(err) => println!("the edited G0 file no longer parses: {err}"),
    }
}
